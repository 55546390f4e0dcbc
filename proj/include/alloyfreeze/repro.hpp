#ifndef ALLOYFREEZE_REPRO_HPP
#define ALLOYFREEZE_REPRO_HPP

// Time-T propagation map and the fixed-point machinery for reproductive
// solutions X(0) = X(T): relaxed Picard iteration with an optional
// lambda-homotopy schedule, plus the eps-continuation sweep that records
// the solid-region velocity integral.

#include <cmath>
#include <utility>
#include <vector>

#include "diagnostics.hpp"
#include "stepper.hpp"

namespace alloyfreeze {

struct ReproConfig {
    double T = 0.2;
    double fp_tol = 1e-8;
    int fp_max_iter = 200;
    double relaxation = 1.0; // omega in (0, 1]
    std::vector<double> homotopy_schedule{1.0};
    std::vector<double> eps_schedule{1e-1, 3e-2, 1e-2, 3e-3};

    bool valid() const {
        if (!(T > 0.0) || !(fp_tol > 0.0) || fp_max_iter <= 0) return false;
        if (!(relaxation > 0.0 && relaxation <= 1.0)) return false;
        if (homotopy_schedule.empty() || homotopy_schedule.back() != 1.0) return false;
        for (double l : homotopy_schedule)
            if (!(l > 0.0 && l <= 1.0)) return false;
        if (eps_schedule.empty()) return false;
        for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
            if (!(eps_schedule[k] > 0.0 && eps_schedule[k] <= 1.0)) return false;
            if (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1])) return false;
        }
        return true;
    }
};

struct StageReport {
    double lambda = 1.0;
    int iterations = 0;
    std::vector<double> residual_history;
    bool converged = false;
};

struct FixedPointReport {
    int iterations = 0;
    std::vector<double> residual_history; // of the final (lambda = 1) stage
    bool converged = false;
    State final_state;
    std::vector<StageReport> stages;

    FixedPointReport() : final_state(Grid(4, 4, 1.0, 1.0)) {}
    explicit FixedPointReport(const Grid& g) : final_state(g) {}
};

// ---------------------------------------------------------------------------

inline double state_dist2(const State& a, const State& b) {
    const Grid& g = a.grid();
    require_same_grid(g, b.grid(), "state_dist2");
    double sc = 0.0, st = 0.0;
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) {
            const double dc = a.c(i, j) - b.c(i, j);
            const double dt_ = a.theta(i, j) - b.theta(i, j);
            sc += dc * dc;
            st += dt_ * dt_;
        }
    double sv = 0.0;
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 0; I <= g.nx; ++I) {
            const double d = a.vel.u(I, j) - b.vel.u(I, j);
            sv += d * d;
        }
    for (int J = 0; J <= g.ny; ++J)
        for (int i = 1; i <= g.nx; ++i) {
            const double d = a.vel.v(i, J) - b.vel.v(i, J);
            sv += d * d;
        }
    return (sc + st + sv) * g.cell_area();
}

inline State propagate(const State& x0, const PhaseDiagram& pd, const PhysicalParams& pp,
                       const BoundaryData& bc, StepConfig cfg, double T,
                       TrajectoryStats* stats = nullptr, const BudgetData* bdata = nullptr,
                       const SolidMask* mask = nullptr) {
    if (T <= 0.0) {
        if (stats) stats->records.push_back(record_state(x0, pp, bc, mask));
        return x0;
    }
    const int n = std::max(1, static_cast<int>(std::ceil(T / cfg.dt - 1e-12)));
    cfg.dt = T / n;
    State s = x0;
    apply_bc(s, bc, s.t);
    if (stats) stats->records.push_back(record_state(s, pp, bc, mask));
    VectorField vstar(x0.grid());
    for (int k = 0; k < n; ++k) {
        StepBudget b;
        s = step(s, pd, pp, bc, cfg, stats ? &b : nullptr, bdata,
                 (stats && mask) ? &vstar : nullptr);
        if (stats) {
            stats->budgets.push_back(b);
            stats->records.push_back(record_state(s, pp, bc, mask, mask ? &vstar : nullptr));
        }
    }
    return s;
}

namespace detail {

// lambda acts on the deviation from the rest background (mean concentration
// and the boundary-temperature lift), leaving the inhomogeneous data intact
inline State scale_deviation(const State& x, double lam, const PhysicalParams& pp,
                             const BoundaryData& bc, double t0) {
    const Grid& g = x.grid();
    const double cbar = pp.c_g / g.volume();
    const ScalarField L = lift_field(g, bc, t0);
    State out = x;
    out.t = t0;
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) {
            out.c(i, j) = cbar + lam * (x.c(i, j) - cbar);
            out.theta(i, j) = L(i, j) + lam * (x.theta(i, j) - L(i, j));
            out.p(i, j) = lam * x.p(i, j);
        }
    for (int j = 0; j <= g.ny + 1; ++j)
        for (int I = 0; I <= g.nx; ++I) out.vel.u(I, j) = lam * x.vel.u(I, j);
    for (int J = 0; J <= g.ny; ++J)
        for (int i = 0; i <= g.nx + 1; ++i) out.vel.v(i, J) = lam * x.vel.v(i, J);
    return out;
}

inline State blend(const State& a, const State& b, double w) { // (1-w) a + w b
    const Grid& g = a.grid();
    State out = a;
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) {
            out.c(i, j) = (1.0 - w) * a.c(i, j) + w * b.c(i, j);
            out.theta(i, j) = (1.0 - w) * a.theta(i, j) + w * b.theta(i, j);
            out.p(i, j) = (1.0 - w) * a.p(i, j) + w * b.p(i, j);
        }
    for (int j = 0; j <= g.ny + 1; ++j)
        for (int I = 0; I <= g.nx; ++I)
            out.vel.u(I, j) = (1.0 - w) * a.vel.u(I, j) + w * b.vel.u(I, j);
    for (int J = 0; J <= g.ny; ++J)
        for (int i = 0; i <= g.nx + 1; ++i)
            out.vel.v(i, J) = (1.0 - w) * a.vel.v(i, J) + w * b.vel.v(i, J);
    return out;
}

} // namespace detail

inline FixedPointReport find_reproductive(const State& guess, const PhaseDiagram& pd,
                                          const PhysicalParams& pp, const BoundaryData& bc,
                                          const StepConfig& cfg, const ReproConfig& rcfg) {
    FixedPointReport report(guess.grid());
    const double t0 = guess.t;
    State x = guess;
    apply_bc(x, bc, t0);
    for (double lam : rcfg.homotopy_schedule) {
        StageReport stage;
        stage.lambda = lam;
        for (int m = 0; m < rcfg.fp_max_iter; ++m) {
            State phi = propagate(x, pd, pp, bc, cfg, rcfg.T);
            State target = detail::scale_deviation(phi, lam, pp, bc, t0);
            State next = detail::blend(x, target, rcfg.relaxation);
            next.t = t0;
            apply_bc(next, bc, t0);
            const double zx = std::sqrt(z_norm2(x, pp.c_g, bc).total());
            const double res = std::sqrt(state_dist2(next, x)) / std::max(zx, 1.0);
            stage.residual_history.push_back(res);
            ++stage.iterations;
            x = next;
            if (res <= rcfg.fp_tol) {
                stage.converged = true;
                break;
            }
        }
        report.iterations += stage.iterations;
        report.stages.push_back(stage);
        if (!stage.converged) break;
    }
    const StageReport& last = report.stages.back();
    report.residual_history = last.residual_history;
    report.converged = last.converged && last.lambda == 1.0;
    report.final_state = x;
    return report;
}

struct EpsResult {
    double eps = 0.0;
    FixedPointReport report;
    double solid_velocity_integral = 0.0;
    bool have_integral = false;
    int solid_cells = 0;
};

inline std::vector<EpsResult> eps_continuation(const State& guess, const PhaseDiagram& pd,
                                               const PhysicalParams& pp, const BoundaryData& bc,
                                               StepConfig cfg, const ReproConfig& rcfg,
                                               SolidMask* mask_out = nullptr) {
    std::vector<EpsResult> out;
    State warm = guess;
    SolidMask mask;
    bool have_mask = false;
    for (double eps : rcfg.eps_schedule) {
        cfg.eps = eps;
        EpsResult r;
        r.eps = eps;
        r.report = find_reproductive(warm, pd, pp, bc, cfg, rcfg);
        if (r.report.converged) {
            warm = r.report.final_state;
            if (!have_mask) {
                mask = solid_mask(r.report.final_state, pd);
                have_mask = true;
            }
            r.solid_cells = mask.count();
            if (r.solid_cells > 0) {
                TrajectoryStats stats;
                propagate(r.report.final_state, pd, pp, bc, cfg, rcfg.T, &stats, nullptr, &mask);
                r.solid_velocity_integral = solid_velocity_integral(stats, r.solid_cells);
                r.have_integral = true;
            }
        }
        out.push_back(std::move(r));
        if (!out.back().report.converged) break; // partial results with failure marker
    }
    if (mask_out && have_mask) *mask_out = mask;
    return out;
}

} // namespace alloyfreeze

#endif
