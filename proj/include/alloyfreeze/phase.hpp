#ifndef ALLOYFREEZE_PHASE_HPP
#define ALLOYFREEZE_PHASE_HPP

// Phase-diagram closures for a binary alloy: liquidus/solidus curves,
// region classification, extended liquid concentration, lever-rule solid
// fraction, regularized Carman-Kozeny drag and Boussinesq buoyancy.
// Everything here is a pure function of value inputs.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace alloyfreeze {

enum class CurveKind { Linear };

// Linearized phase diagram. The liquidus gamma_l joins (0, theta_F) to
// (c_E, theta_E); the solidus gamma_s joins (0, theta_F) to (c_A, theta_E).
// Both are strictly decreasing on [theta_E, theta_F] and clamp to their
// endpoint values outside that interval.
struct PhaseDiagram {
    double theta_F = 1.0;  // fusion temperature of the pure solvent
    double theta_E = -1.0; // eutectic temperature
    double c_E = 1.0;      // gamma_l(theta_E)
    double c_A = 0.3;      // gamma_s(theta_E)
    CurveKind curve_kind = CurveKind::Linear;

    bool valid() const {
        return theta_E < theta_F && 0.0 < c_A && c_A < c_E;
    }
};

enum class Region { Liquid, Mixture, Solid, NegativeExt, PositiveExt };

namespace detail {
inline double clamp_theta(const PhaseDiagram& pd, double theta) {
    return std::clamp(theta, pd.theta_E, pd.theta_F);
}
} // namespace detail

// gamma_l(theta), clamped outside [theta_E, theta_F].
inline double liquidus(const PhaseDiagram& pd, double theta) {
    const double t = detail::clamp_theta(pd, theta);
    return pd.c_E * (pd.theta_F - t) / (pd.theta_F - pd.theta_E);
}

// gamma_s(theta), clamped outside [theta_E, theta_F].
inline double solidus(const PhaseDiagram& pd, double theta) {
    const double t = detail::clamp_theta(pd, theta);
    return pd.c_A * (pd.theta_F - t) / (pd.theta_F - pd.theta_E);
}

// gamma_l^{-1}(c) for c in [0, c_E]; clamped for arguments outside.
inline double liquidus_inverse(const PhaseDiagram& pd, double c) {
    const double cc = std::clamp(c, 0.0, pd.c_E);
    return pd.theta_F - cc * (pd.theta_F - pd.theta_E) / pd.c_E;
}

// gamma_s^{-1}(c) for c in [0, c_A]; clamped for arguments outside.
inline double solidus_inverse(const PhaseDiagram& pd, double c) {
    const double cc = std::clamp(c, 0.0, pd.c_A);
    return pd.theta_F - cc * (pd.theta_F - pd.theta_E) / pd.c_A;
}

// Region of the (c, theta) plane. Priority order: NegativeExt (c < 0),
// PositiveExt (outside the closed diagram), Liquid, Solid, Mixture.
// Points exactly on a curve land in Mixture; the closures below are
// continuous across the curves so the tie-break never changes a value.
inline Region classify(const PhaseDiagram& pd, double c, double theta) {
    if (c < 0.0) return Region::NegativeExt;

    const bool in_liquid_closure =
        c <= pd.c_E && theta >= liquidus_inverse(pd, c);
    const bool in_mixture_closure =
        theta >= pd.theta_E && theta <= pd.theta_F &&
        c >= solidus(pd, theta) && c <= liquidus(pd, theta);
    const bool in_solid_closure =
        c <= pd.c_A && theta <= solidus_inverse(pd, c);

    if (!in_liquid_closure && !in_mixture_closure && !in_solid_closure)
        return Region::PositiveExt;
    if (c > 0.0 && c < pd.c_E && theta > liquidus_inverse(pd, c))
        return Region::Liquid;
    if (c > 0.0 && c < pd.c_A && theta < solidus_inverse(pd, c))
        return Region::Solid;
    return Region::Mixture;
}

// Extended liquid concentration c_l(c, theta), total on R^2 and with
// values in [0, c_E]. Continuous across the liquidus and solidus.
inline double liquid_concentration(const PhaseDiagram& pd, double c, double theta) {
    if (c <= 0.0) return 0.0;
    switch (classify(pd, c, theta)) {
        case Region::NegativeExt: return 0.0;
        case Region::PositiveExt: return pd.c_E;
        case Region::Liquid: return c;
        case Region::Solid: return liquidus(pd, solidus_inverse(pd, c));
        case Region::Mixture: return liquidus(pd, theta);
    }
    return 0.0; // unreachable
}

// Solid mass fraction f_s(c, theta) in [0, 1]. Lever rule in the mixture
// zone; 1 on the solid side and the positive extension, 0 elsewhere.
inline double solid_fraction(const PhaseDiagram& pd, double c, double theta) {
    switch (classify(pd, c, theta)) {
        case Region::Liquid:
        case Region::NegativeExt:
            return 0.0;
        case Region::Solid:
        case Region::PositiveExt:
            return 1.0;
        case Region::Mixture: {
            const double gl = liquidus(pd, theta);
            const double gs = solidus(pd, theta);
            const double width = gl - gs;
            if (width <= 0.0) return c <= 0.0 ? 0.0 : 1.0; // theta >= theta_F corner
            return std::clamp((gl - c) / width, 0.0, 1.0);
        }
    }
    return 0.0; // unreachable
}

struct PhysicalParams {
    double rho = 1.0;    // mean density
    double nu = 0.2;     // dynamical viscosity
    double eta = 0.5;    // solute diffusivity
    double kappa = 0.5;  // heat conductivity
    double C_p = 1.0;    // caloric capacity
    double alpha = 0.3;  // thermal expansion coefficient
    double beta = 0.2;   // solutal expansion coefficient
    double g_mag = 10.0; // gravity magnitude, force points along -y
    double theta_r = 0.0;
    double c_r = 0.5;
    double C_0 = 100.0;  // Carman-Kozeny constant
    double c_g = 0.5;    // total solute quantity

    bool valid() const {
        return rho > 0.0 && nu > 0.0 && eta > 0.0 && kappa > 0.0 &&
               C_p >= 0.0 && C_0 >= 0.0 && g_mag >= 0.0 && c_g >= 0.0;
    }
};

// Regularized Carman-Kozeny coefficient F_i^eps = C_0 fs^2 / (1 - fs + eps)^3.
// The unregularized law diverges at fs = 1, so eps <= 0 is rejected.
inline double carman_kozeny(const PhysicalParams& pp, double fs, double eps) {
    if (!(eps > 0.0))
        throw std::invalid_argument("carman_kozeny: eps must be positive");
    const double d = 1.0 - fs + eps;
    return pp.C_0 * fs * fs / (d * d * d);
}

// Boussinesq force rho * g * (alpha (theta - theta_r) + beta (c_l - c_r)),
// with g = (0, -g_mag). Returns {Fx, Fy}.
inline std::array<double, 2> buoyancy(const PhysicalParams& pp, const PhaseDiagram& pd,
                                      double c, double theta) {
    const double cl = liquid_concentration(pd, c, theta);
    const double s = pp.alpha * (theta - pp.theta_r) + pp.beta * (cl - pp.c_r);
    return {0.0, -pp.rho * pp.g_mag * s};
}

} // namespace alloyfreeze

#endif
