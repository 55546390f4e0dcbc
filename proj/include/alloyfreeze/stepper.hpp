#ifndef ALLOYFREEZE_STEPPER_HPP
#define ALLOYFREEZE_STEPPER_HPP

// Semi-implicit IMEX projection step for the regularized system:
//   c:     implicit diffusion, explicit upwind advection of c_l
//   theta: implicit diffusion, explicit upwind advection, Dirichlet walls
//   v:     implicit diffusion + Carman-Kozeny penalty, explicit skew
//          advection and buoyancy, then pressure projection
//
// Alongside the state update the step can emit the scalars of the discrete
// energy recursion (quadratic forms, explicit work terms and the
// Young-inequality constants derived from data bounds), which the
// diagnostics module replays as the Gronwall-style certificate.

#include <algorithm>
#include <cmath>

#include "boundary.hpp"
#include "field.hpp"
#include "operators.hpp"
#include "phase.hpp"
#include "solver.hpp"

namespace alloyfreeze {

struct StepConfig {
    double dt = 1e-3;
    double eps = 0.1;            // Carman-Kozeny regularization, in (0, 1]
    double cfl_max = 0.9;
    double elliptic_tol = 1e-12; // relative CG tolerance
    int elliptic_max_iter = 20000;
    double momentum_time_coeff = 1.0; // 1 (regularized system as written) or rho

    bool valid() const {
        return dt > 0.0 && eps > 0.0 && eps <= 1.0 && elliptic_tol > 0.0 &&
               cfl_max > 0.0 && elliptic_max_iter > 0;
    }
};

// Data-derived bounds feeding the energy-recursion constants.
struct BudgetData {
    double m_theta = 0.0; // sup |theta| from boundary data and initial bounds
    double fe_max = 0.0;  // pointwise bound on |F_e| from data
};

// Per-step scalars of the discrete energy recursion
//   z2_new + dt * diss_new <= z2_old + dt*(a_old z2_old + a_new z2_new + b_data + b_rem)
// a_*/b_data come from data bounds, b_rem collects measured O(dt) scheme
// remainders (explicit-advection and projection defects).
struct StepBudget {
    double z2_old = 0.0, z2_new = 0.0;
    double diss_new = 0.0;      // eta|grad c~|^2 + kappa|grad th~|^2 + nu|grad v*|^2
    double penalty_work = 0.0;  // (F_i^eps v*, v*) >= 0
    double a_old = 0.0, a_new = 0.0;
    double b_data = 0.0, b_rem = 0.0;

    double slack() const {
        return z2_old - z2_new +
               (a_old * z2_old + a_new * z2_new + b_data + b_rem) * dt_ - diss_new * dt_;
    }
    double dt_ = 0.0;
};

// ---------------------------------------------------------------------------
// deviation variables and their quadratic dissipation forms

inline ScalarField c_deviation(const ScalarField& c, double c_g) {
    ScalarField d = c;
    d.shift_interior(-c_g / c.grid().volume());
    return d;
}

inline ScalarField theta_deviation(const ScalarField& theta, const BoundaryData& bc, double t) {
    const ScalarField L = lift_field(theta.grid(), bc, t);
    ScalarField d = theta;
    for (int j = 1; j <= theta.grid().ny; ++j)
        for (int i = 1; i <= theta.grid().nx; ++i) d(i, j) -= L(i, j);
    return d;
}

struct ZNorm {
    double c2 = 0.0, theta2 = 0.0, v2 = 0.0;
    double total() const { return c2 + theta2 + v2; }
};

inline ZNorm z_norm2(const State& s, double c_g, const BoundaryData& bc) {
    ZNorm z;
    ScalarField cd = c_deviation(s.c, c_g);
    ScalarField td = theta_deviation(s.theta, bc, s.t);
    z.c2 = inner_product(cd, cd);
    z.theta2 = inner_product(td, td);
    z.v2 = norm2(s.vel);
    return z;
}

// (-Lap_h x, x) with homogeneous Neumann ghosts (discrete |grad x|^2).
inline double dissipation_neumann(const ScalarField& x) {
    ScalarField w = x;
    fill_neumann_ghosts(w);
    ScalarField lap = laplacian(w);
    double s = 0.0;
    const Grid& g = x.grid();
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) s -= lap(i, j) * w(i, j);
    return s * g.cell_area();
}

// (-Lap_h x, x) with homogeneous Dirichlet bottom/top, Neumann sides.
inline double dissipation_dirichlet_bt(const ScalarField& x) {
    ScalarField w = x;
    fill_theta_ghosts_homogeneous(w);
    ScalarField lap = laplacian(w);
    double s = 0.0;
    const Grid& g = x.grid();
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) s -= lap(i, j) * w(i, j);
    return s * g.cell_area();
}

// (-Lap_h w, w) summed over both components with the velocity solver's
// boundary conventions (no-slip Gamma_bt, free slip Gamma_v).
inline double dissipation_velocity(const VectorField& w0) {
    VectorField w = w0;
    fill_velocity_ghosts(w);
    const Grid& g = w.grid();
    const double ix2 = 1.0 / (g.dx * g.dx), iy2 = 1.0 / (g.dy * g.dy);
    double s = 0.0;
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 1; I < g.nx; ++I) {
            const double lap = (w.u(I + 1, j) - 2.0 * w.u(I, j) + w.u(I - 1, j)) * ix2 +
                               (w.u(I, j + 1) - 2.0 * w.u(I, j) + w.u(I, j - 1)) * iy2;
            s -= lap * w.u(I, j);
        }
    for (int J = 1; J < g.ny; ++J)
        for (int i = 1; i <= g.nx; ++i) {
            const double lap = (w.v(i + 1, J) - 2.0 * w.v(i, J) + w.v(i - 1, J)) * ix2 +
                               (w.v(i, J + 1) - 2.0 * w.v(i, J) + w.v(i, J - 1)) * iy2;
            s -= lap * w.v(i, J);
        }
    return s * g.cell_area();
}

inline double cfl_number(const VectorField& vel, double dt) {
    const Grid& g = vel.grid();
    double m = 0.0;
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 0; I <= g.nx; ++I) m = std::max(m, std::abs(vel.u(I, j)) * dt / g.dx);
    for (int J = 0; J <= g.ny; ++J)
        for (int i = 1; i <= g.nx; ++i) m = std::max(m, std::abs(vel.v(i, J)) * dt / g.dy);
    return m;
}

// ---------------------------------------------------------------------------

inline State step(const State& sn, const PhaseDiagram& pd, const PhysicalParams& pp,
                  const BoundaryData& bc, const StepConfig& cfg,
                  StepBudget* budget = nullptr, const BudgetData* bdata = nullptr,
                  VectorField* vstar_out = nullptr) {
    sn.require_finite("step input");
    const Grid& g = sn.grid();
    const double dt = cfg.dt;
    const double tn = sn.t, tp = sn.t + dt;
    const double ct = cfg.momentum_time_coeff;

    if (cfl_number(sn.vel, dt) > cfg.cfl_max)
        throw CflExceeded("step: advective CFL above cfl_max");

    State s = sn;
    apply_bc(s, bc, tn);

    // closures at time n
    ScalarField cl(g), fi(g), fe_y(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) {
            const double cc = s.c(i, j), th = s.theta(i, j);
            cl(i, j) = liquid_concentration(pd, cc, th);
            fi(i, j) = carman_kozeny(pp, solid_fraction(pd, cc, th), cfg.eps);
            fe_y(i, j) = buoyancy(pp, pd, cc, th)[1];
        }
    fill_neumann_ghosts(cl);
    fill_neumann_ghosts(fi);

    // --- (i) concentration ---------------------------------------------
    const ScalarField adv_c = advect_scalar_flux(s.vel, cl);
    ScalarField rhs_c(g), ones(g, 1.0);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) rhs_c(i, j) = s.c(i, j) - dt * adv_c(i, j);
    ScalarField c_new = solve_helmholtz(ones, dt * pp.eta, rhs_c, ScalarBc::AllNeumann,
                                        cfg.elliptic_tol, cfg.elliptic_max_iter);
    // enforce the total-solute constraint (exact in exact arithmetic; this
    // removes the elliptic-solver residual's drift on the mean)
    c_new.shift_interior((pp.c_g - c_new.sum_interior() * g.cell_area()) / g.volume());

    // --- (ii) temperature ------------------------------------------------
    const ScalarField adv_t = advect_scalar_flux(s.vel, s.theta);
    ScalarField rhs_t(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i)
            rhs_t(i, j) = s.theta(i, j) - dt * pp.rho * pp.C_p * adv_t(i, j);
    // fold the inhomogeneous Dirichlet data at t+dt into the right-hand side:
    // ghost = 2 g_wall - interior splits into homogeneous part and 2 g_wall
    const double kd_t = dt * pp.kappa;
    for (int i = 1; i <= g.nx; ++i) {
        const double x = g.xc(i);
        rhs_t(i, 1) += kd_t * 2.0 * bc.theta_bottom(x, tp) / (g.dy * g.dy);
        rhs_t(i, g.ny) += kd_t * 2.0 * bc.theta_top(x, tp) / (g.dy * g.dy);
    }
    ScalarField theta_new = solve_helmholtz(ones, kd_t, rhs_t, ScalarBc::DirichletBottomTop,
                                            cfg.elliptic_tol, cfg.elliptic_max_iter);

    // --- (iii) momentum predictor ----------------------------------------
    const VectorField adv_v = advect_velocity_skew(s.vel);
    VectorField coeff(g), rhs_v(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 1; I < g.nx; ++I) {
            coeff.u(I, j) = ct + dt * 0.5 * (fi(I, j) + fi(I + 1, j));
            rhs_v.u(I, j) = ct * s.vel.u(I, j) - dt * pp.rho * adv_v.u(I, j);
        }
    for (int J = 1; J < g.ny; ++J)
        for (int i = 1; i <= g.nx; ++i) {
            coeff.v(i, J) = ct + dt * 0.5 * (fi(i, J) + fi(i, J + 1));
            rhs_v.v(i, J) = ct * s.vel.v(i, J) - dt * pp.rho * adv_v.v(i, J) +
                            dt * 0.5 * (fe_y(i, J) + fe_y(i, J + 1));
        }
    VectorField vstar(g);
    solve_helmholtz_u(vstar, coeff, dt * pp.nu, rhs_v, cfg.elliptic_tol, cfg.elliptic_max_iter);
    solve_helmholtz_v(vstar, coeff, dt * pp.nu, rhs_v, cfg.elliptic_tol, cfg.elliptic_max_iter);
    fill_velocity_ghosts(vstar);
    // the penalized velocity: the quantity the Carman-Kozeny work controls,
    // free of the O(dt) non-incremental pressure-correction artifact
    if (vstar_out) *vstar_out = vstar;

    // --- (iv) projection --------------------------------------------------
    ScalarField div_star = div(vstar);
    ScalarField prhs(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) prhs(i, j) = -div_star(i, j) / dt;
    ScalarField phi = solve_poisson_neumann(prhs, cfg.elliptic_tol, cfg.elliptic_max_iter);
    fill_neumann_ghosts(phi);
    const VectorField gphi = grad(phi);
    VectorField v_new = vstar;
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 1; I < g.nx; ++I) v_new.u(I, j) -= dt * gphi.u(I, j);
    for (int J = 1; J < g.ny; ++J)
        for (int i = 1; i <= g.nx; ++i) v_new.v(i, J) -= dt * gphi.v(i, J);

    // --- (v) assemble -----------------------------------------------------
    State out(g);
    out.c = c_new;
    out.theta = theta_new;
    out.vel = v_new;
    out.p = phi;
    out.t = tp;
    apply_bc(out, bc, tp);
    out.require_finite("step output");

    if (budget) {
        StepBudget b;
        b.dt_ = dt;
        const ZNorm zo = z_norm2(sn, pp.c_g, bc);
        const ZNorm zn = z_norm2(out, pp.c_g, bc);
        b.z2_old = zo.total();
        b.z2_new = zn.total();

        const ScalarField cd_new = c_deviation(out.c, pp.c_g);
        const ScalarField td_new = theta_deviation(out.theta, bc, tp);
        const double Dc = dissipation_neumann(cd_new);
        const double Dth = dissipation_dirichlet_bt(td_new);
        const double Dv = dissipation_velocity(vstar);
        b.diss_new = pp.eta * Dc + pp.kappa * Dth + pp.nu * Dv;

        double pen = 0.0;
        for (int j = 1; j <= g.ny; ++j)
            for (int I = 1; I < g.nx; ++I)
                pen += 0.5 * (fi(I, j) + fi(I + 1, j)) * vstar.u(I, j) * vstar.u(I, j);
        for (int J = 1; J < g.ny; ++J)
            for (int i = 1; i <= g.nx; ++i)
                pen += 0.5 * (fi(i, J) + fi(i, J + 1)) * vstar.v(i, J) * vstar.v(i, J);
        b.penalty_work = pen * g.cell_area();

        const double m_theta = bdata ? bdata->m_theta : 0.0;
        const double fe_max = bdata ? bdata->fe_max : 0.0;

        // data-derived Gronwall constants mirroring the Young splits of the
        // continuous a priori estimate
        b.a_old = pd.c_E * pd.c_E / pp.eta +
                  2.0 * (pp.rho * pp.C_p * m_theta) * (pp.rho * pp.C_p * m_theta) / pp.kappa;
        b.a_new = 2.0 + pp.kappa;

        const ScalarField Lp = lift_field(g, bc, tp);
        const ScalarField Ln = lift_field(g, bc, tn);
        ScalarField dL = Lp;
        for (int j = 1; j <= g.ny; ++j)
            for (int i = 1; i <= g.nx; ++i) dL(i, j) = (Lp(i, j) - Ln(i, j)) / dt;
        ScalarField lapL = laplacian(Lp);
        b.b_data = inner_product(dL, dL) + pp.kappa * inner_product(lapL, lapL) +
                   fe_max * fe_max * g.volume() * (g.ny + 1.0) / g.ny;

        // measured scheme remainders: explicit skew advection tested against
        // v* - v^n, the (near-zero) skew defect, and the projection defect
        const double n2 = norm2(adv_v);
        double skew_defect = std::abs(inner_product(adv_v, sn.vel));
        const double proj_drop = std::abs(norm2(vstar) - norm2(v_new));
        b.b_rem = dt * pp.rho * pp.rho * n2 / ct + 2.0 * pp.rho * skew_defect +
                  (ct / dt + 1.0) * proj_drop;
        *budget = b;
    }
    return out;
}

} // namespace alloyfreeze

#endif
