#ifndef ALLOYFREEZE_DIAGNOSTICS_HPP
#define ALLOYFREEZE_DIAGNOSTICS_HPP

// Trajectory recording and the certified-inequality checks: maximum
// principles, total-solute conservation, the discrete energy recursion,
// zero-data exponential decay, and the solid-region velocity scaling.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "stepper.hpp"

namespace alloyfreeze {

// cells with f_s = 1, frozen once per sweep so integrals are comparable
struct SolidMask {
    int nx = 0, ny = 0;
    std::vector<std::uint8_t> cells; // (nx+2)*(ny+2), interior meaningful

    SolidMask() = default;
    explicit SolidMask(const Grid& g)
        : nx(g.nx), ny(g.ny), cells(static_cast<std::size_t>((g.nx + 2) * (g.ny + 2)), 0) {}
    std::uint8_t& at(int i, int j) { return cells[static_cast<std::size_t>(j) * (nx + 2) + i]; }
    std::uint8_t at(int i, int j) const {
        return cells[static_cast<std::size_t>(j) * (nx + 2) + i];
    }
    bool empty() const { return count() == 0; }
    int count() const {
        int n = 0;
        for (int j = 1; j <= ny; ++j)
            for (int i = 1; i <= nx; ++i) n += at(i, j) ? 1 : 0;
        return n;
    }
};

inline SolidMask solid_mask(const State& s, const PhaseDiagram& pd) {
    SolidMask m(s.grid());
    for (int j = 1; j <= m.ny; ++j)
        for (int i = 1; i <= m.nx; ++i)
            m.at(i, j) = solid_fraction(pd, s.c(i, j), s.theta(i, j)) >= 1.0 ? 1 : 0;
    return m;
}

struct StepRecord {
    double t = 0.0;
    double normZ2 = 0.0;
    double dissipation = 0.0;
    double c_min = 0.0, c_max = 0.0;
    double theta_min = 0.0, theta_max = 0.0;
    double total_solute = 0.0;
    double solid_v2 = 0.0; // |v|^2_{L2(K)}
    double div_inf = 0.0;
};

struct TrajectoryStats {
    std::vector<StepRecord> records; // step count + 1 entries
    std::vector<StepBudget> budgets; // step count entries
};

inline double total_solute(const ScalarField& c) {
    return c.sum_interior() * c.grid().cell_area();
}

inline double solid_v2_of(const VectorField& vel, const SolidMask* mask) {
    if (!mask) return 0.0;
    const Grid& g = vel.grid();
    double acc = 0.0;
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) {
            if (!mask->at(i, j)) continue;
            const double uc = 0.5 * (vel.u(i - 1, j) + vel.u(i, j));
            const double vc = 0.5 * (vel.v(i, j - 1) + vel.v(i, j));
            acc += uc * uc + vc * vc;
        }
    return acc * g.cell_area();
}

inline double solid_v2_of(const State& s, const SolidMask* mask) {
    return solid_v2_of(s.vel, mask);
}

// pen_vel, when given, is the penalized (pre-projection) velocity of the step
// that produced s; the Carman-Kozeny work bounds it, so it is the velocity
// whose solid-region norm obeys the eps^3 law
inline StepRecord record_state(const State& s, const PhysicalParams& pp, const BoundaryData& bc,
                               const SolidMask* mask = nullptr,
                               const VectorField* pen_vel = nullptr) {
    StepRecord r;
    r.t = s.t;
    const ZNorm z = z_norm2(s, pp.c_g, bc);
    r.normZ2 = z.total();
    const ScalarField cd = c_deviation(s.c, pp.c_g);
    const ScalarField td = theta_deviation(s.theta, bc, s.t);
    r.dissipation = pp.eta * dissipation_neumann(cd) + pp.kappa * dissipation_dirichlet_bt(td) +
                    pp.nu * dissipation_velocity(s.vel);
    r.c_min = s.c.min_interior();
    r.c_max = s.c.max_interior();
    r.theta_min = s.theta.min_interior();
    r.theta_max = s.theta.max_interior();
    r.total_solute = total_solute(s.c);
    r.solid_v2 = pen_vel ? solid_v2_of(*pen_vel, mask) : solid_v2_of(s, mask);
    r.div_inf = max_abs_div(s.vel);
    return r;
}

// ---------------------------------------------------------------------------
// check reports

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    std::string detail;
};

// Pointwise a priori bounds: 0 <= c <= gamma_l(theta_E) and
// theta between the extremes of boundary and initial data.
inline CheckResult check_max_principles(const TrajectoryStats& stats, const PhaseDiagram& pd,
                                        double theta_inf, double theta_sup, double tol = 1e-8) {
    CheckResult r;
    r.name = "max_principles";
    r.bound = tol;
    const double c_top = liquidus(pd, pd.theta_E);
    double worst = 0.0;
    std::string where;
    for (std::size_t k = 0; k < stats.records.size(); ++k) {
        const StepRecord& s = stats.records[k];
        const double v[4] = {-s.c_min, s.c_max - c_top, theta_inf - s.theta_min,
                             s.theta_max - theta_sup};
        const char* tag[4] = {"c_min", "c_max", "theta_min", "theta_max"};
        for (int q = 0; q < 4; ++q)
            if (v[q] > worst) {
                worst = v[q];
                where = std::string(tag[q]) + " at t=" + std::to_string(s.t);
            }
    }
    r.measured = worst;
    r.pass = worst <= tol;
    r.detail = r.pass ? "all records within bounds" : "violation: " + where;
    return r;
}

inline CheckResult check_conservation(const TrajectoryStats& stats, double c_g,
                                      double tol_rel = 1e-12) {
    CheckResult r;
    r.name = "solute_conservation";
    const double scale = std::max(c_g, 1.0);
    double worst = 0.0;
    for (const StepRecord& s : stats.records)
        worst = std::max(worst, std::abs(s.total_solute - c_g));
    r.measured = worst;
    r.bound = tol_rel * scale;
    r.pass = worst <= r.bound;
    r.detail = "max |total_solute - c_g|";
    return r;
}

// Per-step energy recursion
//   z2_{n+1} + dt diss_{n+1} <= z2_n + dt (a_old z2_n + a_new z2_{n+1} + B_n)
// with constants from data; reports the most negative slack.
inline CheckResult energy_budget(const TrajectoryStats& stats, double tol = 1e-10) {
    CheckResult r;
    r.name = "energy_recursion";
    double worst = 0.0; // most negative slack, sign-flipped
    double scale = 1.0;
    for (const StepBudget& b : stats.budgets) {
        scale = std::max(scale, b.z2_old);
        worst = std::min(worst, b.slack());
    }
    r.measured = -worst;
    r.bound = tol * scale;
    r.pass = -worst <= r.bound;
    r.detail = "largest negative recursion slack";
    return r;
}

// Unrolled Gronwall bound on max_t |Z|^2 implied by the recorded recursion
// constants; returns +inf if dt a_new >= 1 (recursion not contractive).
inline double energy_bound(const TrajectoryStats& stats) {
    if (stats.budgets.empty()) return stats.records.empty() ? 0.0 : stats.records.front().normZ2;
    double z = stats.budgets.front().z2_old;
    double peak = z;
    for (const StepBudget& b : stats.budgets) {
        const double denom = 1.0 - b.dt_ * b.a_new;
        if (denom <= 0.0) return std::numeric_limits<double>::infinity();
        z = ((1.0 + b.dt_ * b.a_old) * z + b.dt_ * (b.b_data + b.b_rem)) / denom;
        peak = std::max(peak, z);
    }
    return peak;
}

// ---------------------------------------------------------------------------
// discrete Poincare eigenvalues by inverse iteration

namespace detail {

inline double rayleigh_scalar(const ScalarField& x, bool neumann) {
    const double d = neumann ? dissipation_neumann(x) : dissipation_dirichlet_bt(x);
    return d / inner_product(x, x);
}

} // namespace detail

// smallest eigenvalue of -Lap_h on mean-free fields with Neumann ghosts
inline double poincare_lambda_neumann(const Grid& g, int iters = 60) {
    ScalarField x(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) x(i, j) = std::cos(M_PI * g.xc(i) / g.Lx) + 0.3;
    x.shift_interior(-x.mean_interior());
    for (int k = 0; k < iters; ++k) {
        x = solve_poisson_neumann(x, 1e-14, 100000);
        const double n = std::sqrt(inner_product(x, x));
        for (int j = 1; j <= g.ny; ++j)
            for (int i = 1; i <= g.nx; ++i) x(i, j) /= n;
    }
    return detail::rayleigh_scalar(x, true);
}

// smallest eigenvalue of -Lap_h with homogeneous Dirichlet bottom/top ghosts
inline double poincare_lambda_dirichlet_bt(const Grid& g, int iters = 60) {
    ScalarField x(g), zero(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) x(i, j) = std::sin(M_PI * g.yc(j) / g.Ly) + 0.1;
    for (int k = 0; k < iters; ++k) {
        x = solve_helmholtz(zero, 1.0, x, ScalarBc::DirichletBottomTop, 1e-14, 100000);
        const double n = std::sqrt(inner_product(x, x));
        for (int j = 1; j <= g.ny; ++j)
            for (int i = 1; i <= g.nx; ++i) x(i, j) /= n;
    }
    return detail::rayleigh_scalar(x, false);
}

// smallest eigenvalue of -Lap_h on velocity fields with the solver's
// no-slip/free-slip boundary conventions
inline double poincare_lambda_velocity(const Grid& g, int iters = 60) {
    VectorField coeff(g); // identically zero: pure -Lap
    VectorField x(g), rhs(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 1; I < g.nx; ++I) x.u(I, j) = std::sin(M_PI * I * g.dx / g.Lx);
    for (int J = 1; J < g.ny; ++J)
        for (int i = 1; i <= g.nx; ++i) x.v(i, J) = std::sin(M_PI * J * g.dy / g.Ly) + 0.2;
    for (int k = 0; k < iters; ++k) {
        rhs = x;
        solve_helmholtz_u(x, coeff, 1.0, rhs, 1e-14, 100000);
        solve_helmholtz_v(x, coeff, 1.0, rhs, 1e-14, 100000);
        const double n = std::sqrt(norm2(x));
        for (int j = 1; j <= g.ny; ++j)
            for (int I = 1; I < g.nx; ++I) x.u(I, j) /= n;
        for (int J = 1; J < g.ny; ++J)
            for (int i = 1; i <= g.nx; ++i) x.v(i, J) /= n;
    }
    return dissipation_velocity(x) / norm2(x);
}

// beta = C_Omega^{-1} min{eta, kappa, nu} with C_Omega = 1/lambda_min over
// the three field types
inline double decay_rate_beta(const Grid& g, const PhysicalParams& pp) {
    const double lam = std::min({poincare_lambda_neumann(g), poincare_lambda_dirichlet_bt(g),
                                 poincare_lambda_velocity(g)});
    return lam * std::min({pp.eta, pp.kappa, pp.nu});
}

// zero-data decay: |Z(T)|^2 <= e^{-beta T}|Z(0)|^2 (1 + slack)
inline CheckResult decay_check(const TrajectoryStats& stats, double beta, double slack = 0.10) {
    CheckResult r;
    r.name = "zero_data_decay";
    const StepRecord& a = stats.records.front();
    const StepRecord& b = stats.records.back();
    const double T = b.t - a.t;
    r.measured = b.normZ2;
    r.bound = std::exp(-beta * T) * a.normZ2 * (1.0 + slack);
    if (a.normZ2 == 0.0) {
        r.pass = b.normZ2 <= 1e-20;
        r.detail = "trivial zero initial state";
    } else {
        r.pass = r.measured <= r.bound;
        r.detail = "beta=" + std::to_string(beta) + " T=" + std::to_string(T);
    }
    return r;
}

// ---------------------------------------------------------------------------
// solid-region velocity scaling

inline double solid_velocity_integral(const TrajectoryStats& stats, int solid_cells) {
    if (solid_cells <= 0) throw EmptySolidRegion("solid_velocity_integral: K is empty");
    // right-endpoint rectangle rule: each stepped record carries the
    // penalized velocity of its own step; the initial record has none
    double acc = 0.0;
    for (std::size_t k = 1; k < stats.records.size(); ++k) {
        const StepRecord& a = stats.records[k - 1];
        const StepRecord& b = stats.records[k];
        acc += b.solid_v2 * (b.t - a.t);
    }
    return acc;
}

// least-squares slope of log(integral) against log(eps)
inline double scaling_fit(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 2)
        throw std::invalid_argument("scaling_fit: need at least two (eps, integral) points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [e, v] : pts) {
        const double x = std::log(e), y = std::log(std::max(v, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace alloyfreeze

#endif
