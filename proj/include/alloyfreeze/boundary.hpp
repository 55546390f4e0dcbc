#ifndef ALLOYFREEZE_BOUNDARY_HPP
#define ALLOYFREEZE_BOUNDARY_HPP

// Boundary data and ghost-cell handling.
//
//   c     : homogeneous Neumann on all of Gamma
//   theta : Dirichlet theta_delta on Gamma_b and Gamma_t, Neumann on Gamma_v
//   vel   : no-slip on Gamma_b / Gamma_t, free slip on Gamma_v
//   p     : homogeneous Neumann everywhere (projection ghost fill)

#include <algorithm>
#include <cmath>
#include <vector>

#include "field.hpp"

namespace alloyfreeze {

enum class ProfileKind { Constant, LinearInX, Tabulated };

// Spatial profile of the wall temperature along one wall, with an optional
// sinusoidal time modulation. value(x, t) = base(x) * (1 + amp sin(2 pi t / period)),
// which is time-periodic with the stated period (hypothesis on theta_delta).
struct WallProfile {
    ProfileKind kind = ProfileKind::Constant;
    double value = 0.0;          // Constant
    double a = 0.0, b = 0.0;     // LinearInX: a + b x
    std::vector<double> xs, vs;  // Tabulated breakpoints, xs ascending

    double base(double x) const {
        switch (kind) {
            case ProfileKind::Constant: return value;
            case ProfileKind::LinearInX: return a + b * x;
            case ProfileKind::Tabulated: {
                if (xs.empty()) return 0.0;
                if (x <= xs.front()) return vs.front();
                if (x >= xs.back()) return vs.back();
                auto it = std::upper_bound(xs.begin(), xs.end(), x);
                const std::size_t k = static_cast<std::size_t>(it - xs.begin());
                const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
                return vs[k - 1] * (1.0 - w) + vs[k] * w;
            }
        }
        return 0.0;
    }
};

struct BoundaryData {
    WallProfile bottom; // Gamma_b
    WallProfile top;    // Gamma_t
    double time_amp = 0.0;
    double time_period = 1.0;

    double modulation(double t) const {
        if (time_amp == 0.0) return 1.0;
        return 1.0 + time_amp * std::sin(2.0 * M_PI * t / time_period);
    }
    double theta_bottom(double x, double t) const { return bottom.base(x) * modulation(t); }
    double theta_top(double x, double t) const { return top.base(x) * modulation(t); }

    // Extremes of theta_delta over the wall and one period, sampled densely;
    // exact for the supported profile kinds up to sampling of the linear ramp
    // endpoints (which are included).
    void extremes(const Grid& g, double& inf, double& sup) const {
        inf = 1e300;
        sup = -1e300;
        const int nt = time_amp == 0.0 ? 1 : 64;
        for (int k = 0; k < nt; ++k) {
            const double t = time_period * k / std::max(nt - 1, 1);
            for (int i = 0; i <= g.nx; ++i) {
                const double x = i * g.dx;
                inf = std::min({inf, theta_bottom(x, t), theta_top(x, t)});
                sup = std::max({sup, theta_bottom(x, t), theta_top(x, t)});
            }
        }
        if (time_amp != 0.0) {
            // the sine attains +-1; include the exact extremes of the modulation
            for (int i = 0; i <= g.nx; ++i) {
                const double x = i * g.dx;
                for (double m : {1.0 - time_amp, 1.0 + time_amp}) {
                    inf = std::min({inf, bottom.base(x) * m, top.base(x) * m});
                    sup = std::max({sup, bottom.base(x) * m, top.base(x) * m});
                }
            }
        }
    }
};

// Ghost fills. Scalars: mirror = homogeneous Neumann, reflect = homogeneous
// Dirichlet, Dirichlet data enters as ghost = 2 g_wall - interior.

inline void fill_neumann_ghosts(ScalarField& s) {
    const Grid& g = s.grid();
    for (int j = 1; j <= g.ny; ++j) {
        s(0, j) = s(1, j);
        s(g.nx + 1, j) = s(g.nx, j);
    }
    for (int i = 0; i <= g.nx + 1; ++i) {
        s(i, 0) = s(i, 1);
        s(i, g.ny + 1) = s(i, g.ny);
    }
}

// theta: Dirichlet bottom/top from bc at time t, Neumann sides.
inline void fill_theta_ghosts(ScalarField& th, const BoundaryData& bc, double t) {
    const Grid& g = th.grid();
    for (int j = 1; j <= g.ny; ++j) {
        th(0, j) = th(1, j);
        th(g.nx + 1, j) = th(g.nx, j);
    }
    for (int i = 1; i <= g.nx; ++i) {
        const double x = g.xc(i);
        th(i, 0) = 2.0 * bc.theta_bottom(x, t) - th(i, 1);
        th(i, g.ny + 1) = 2.0 * bc.theta_top(x, t) - th(i, g.ny);
    }
    // corners: extend sides
    th(0, 0) = th(1, 0);
    th(g.nx + 1, 0) = th(g.nx, 0);
    th(0, g.ny + 1) = th(1, g.ny + 1);
    th(g.nx + 1, g.ny + 1) = th(g.nx, g.ny + 1);
}

// Homogeneous Dirichlet bottom/top, Neumann sides (deviation fields).
inline void fill_theta_ghosts_homogeneous(ScalarField& th) {
    const Grid& g = th.grid();
    for (int j = 1; j <= g.ny; ++j) {
        th(0, j) = th(1, j);
        th(g.nx + 1, j) = th(g.nx, j);
    }
    for (int i = 0; i <= g.nx + 1; ++i) {
        th(i, 0) = -th(i, 1);
        th(i, g.ny + 1) = -th(i, g.ny);
    }
}

// vel: u = 0 on the wall faces of Gamma_v; no-slip ghosts across Gamma_bt
// (tangential u mirrors with sign flip); v = 0 on the wall faces of
// Gamma_bt; free-slip ghosts across Gamma_v (tangential v mirrors).
inline void fill_velocity_ghosts(VectorField& w) {
    const Grid& g = w.grid();
    for (int j = 0; j <= g.ny + 1; ++j) {
        w.u(0, j) = 0.0;
        w.u(g.nx, j) = 0.0;
    }
    for (int I = 0; I <= g.nx; ++I) {
        w.u(I, 0) = -w.u(I, 1);
        w.u(I, g.ny + 1) = -w.u(I, g.ny);
    }
    for (int i = 0; i <= g.nx + 1; ++i) {
        w.v(i, 0) = 0.0;
        w.v(i, g.ny) = 0.0;
    }
    for (int J = 0; J <= g.ny; ++J) {
        w.v(0, J) = w.v(1, J);
        w.v(g.nx + 1, J) = w.v(g.nx, J);
    }
}

inline void apply_bc(State& s, const BoundaryData& bc, double t) {
    fill_neumann_ghosts(s.c);
    fill_theta_ghosts(s.theta, bc, t);
    fill_velocity_ghosts(s.vel);
    fill_neumann_ghosts(s.p);
}

// Discrete lift of the wall temperature into the domain: linear blend in y
// of the bottom and top profiles. Matches theta_delta on Gamma_bt, is
// constant in y when the two walls agree, and has computable gradients.
inline ScalarField lift_field(const Grid& g, const BoundaryData& bc, double t) {
    ScalarField L(g);
    for (int j = 1; j <= g.ny; ++j) {
        const double w = g.yc(j) / g.Ly;
        for (int i = 1; i <= g.nx; ++i) {
            const double x = g.xc(i);
            L(i, j) = (1.0 - w) * bc.theta_bottom(x, t) + w * bc.theta_top(x, t);
        }
    }
    fill_theta_ghosts(L, bc, t);
    return L;
}

} // namespace alloyfreeze

#endif
