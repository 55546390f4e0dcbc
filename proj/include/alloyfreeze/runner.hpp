#ifndef ALLOYFREEZE_RUNNER_HPP
#define ALLOYFREEZE_RUNNER_HPP

// Run orchestration for the CLI: initial-state construction, data-derived
// budget bounds, and the simulate / reproduce / sweep-eps / check
// subcommands. Exit codes: 0 success, 1 failed check or no convergence,
// 2 configuration error, 3 solver error.

#include <filesystem>
#include <iostream>
#include <random>

#include "config.hpp"
#include "diagnostics.hpp"
#include "io.hpp"
#include "repro.hpp"

namespace alloyfreeze {

// Temperature extremes of the data (boundary over one period plus the
// uniform/perturbed initial field); these feed the maximum principle and
// the budget constants.
inline void data_theta_extremes(const RunConfig& cfg, double& inf, double& sup) {
    cfg.bc.extremes(cfg.grid(), inf, sup);
    const double lo = cfg.init_theta - cfg.init_amp, hi = cfg.init_theta + cfg.init_amp;
    inf = std::min(inf, lo);
    sup = std::max(sup, hi);
}

inline BudgetData budget_data(const RunConfig& cfg) {
    double inf = 0.0, sup = 0.0;
    data_theta_extremes(cfg, inf, sup);
    BudgetData b;
    b.m_theta = std::max(std::abs(inf), std::abs(sup));
    const double dth = std::max(std::abs(inf - cfg.pp.theta_r), std::abs(sup - cfg.pp.theta_r));
    const double dc = std::max(std::abs(0.0 - cfg.pp.c_r), std::abs(cfg.pd.c_E - cfg.pp.c_r));
    b.fe_max = cfg.pp.rho * cfg.pp.g_mag * (cfg.pp.alpha * dth + cfg.pp.beta * dc);
    return b;
}

// Initial state: concentration with exact total c_g inside [0, c_E],
// theta near init_theta inside the data extremes, and (for the random
// kind) a discretely divergence-free velocity from a random streamfunction
// vanishing at the boundary.
inline State initial_state(const RunConfig& cfg, std::uint64_t seed) {
    const Grid g = cfg.grid();
    State s(g);
    const double cbar = cfg.pp.c_g / g.volume();
    s.c.fill(cbar);
    s.theta.fill(cfg.init_theta);
    if (cfg.init_kind == InitKind::Random && cfg.init_amp > 0.0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);

        ScalarField pc(g);
        for (int j = 1; j <= g.ny; ++j)
            for (int i = 1; i <= g.nx; ++i) pc(i, j) = cfg.init_amp * uni(rng);
        pc.shift_interior(-pc.mean_interior());
        double pmax = 0.0;
        for (int j = 1; j <= g.ny; ++j)
            for (int i = 1; i <= g.nx; ++i) pmax = std::max(pmax, std::abs(pc(i, j)));
        // zero-mean perturbation rescaled so 0 <= c <= c_E holds pointwise
        const double room = 0.9 * std::min(cbar - 0.0, cfg.pd.c_E - cbar);
        const double sc = (pmax > 0.0 && room > 0.0) ? std::min(1.0, room / pmax) : 0.0;
        for (int j = 1; j <= g.ny; ++j)
            for (int i = 1; i <= g.nx; ++i) s.c(i, j) = cbar + sc * pc(i, j);

        for (int j = 1; j <= g.ny; ++j)
            for (int i = 1; i <= g.nx; ++i) s.theta(i, j) += cfg.init_amp * uni(rng);

        // streamfunction at grid nodes, zero on the boundary ring
        std::vector<double> psi(static_cast<std::size_t>(g.nx + 1) * (g.ny + 1), 0.0);
        auto P = [&](int I, int J) -> double& {
            return psi[static_cast<std::size_t>(J) * (g.nx + 1) + I];
        };
        for (int J = 1; J < g.ny; ++J)
            for (int I = 1; I < g.nx; ++I) P(I, J) = cfg.init_amp * g.dx * uni(rng);
        for (int j = 1; j <= g.ny; ++j)
            for (int I = 1; I < g.nx; ++I) s.vel.u(I, j) = (P(I, j) - P(I, j - 1)) / g.dy;
        for (int J = 1; J < g.ny; ++J)
            for (int i = 1; i <= g.nx; ++i) s.vel.v(i, J) = -(P(i, J) - P(i - 1, J)) / g.dx;
    }
    apply_bc(s, cfg.bc, 0.0);
    return s;
}

inline void write_state_snapshots(const std::filesystem::path& dir, const std::string& stem,
                                  const State& s, SnapshotMode mode) {
    if (mode == SnapshotMode::None) return;
    auto one = [&](const ScalarField& f, const std::string& name) {
        const std::filesystem::path p = dir / (stem + "_" + name + ".snap");
        if (mode == SnapshotMode::Text)
            write_snapshot_text(p, f, s.t, name);
        else
            write_snapshot_binary(p, f, s.t, name);
    };
    one(s.c, "c");
    one(s.theta, "theta");
    one(cell_centered_u(s.vel), "u");
    one(cell_centered_v(s.vel), "v");
    one(s.p, "p");
}

inline std::vector<CheckResult> run_checks(const TrajectoryStats& stats, const RunConfig& cfg) {
    double inf = 0.0, sup = 0.0;
    data_theta_extremes(cfg, inf, sup);
    std::vector<CheckResult> checks;
    checks.push_back(check_max_principles(stats, cfg.pd, inf, sup));
    checks.push_back(check_conservation(stats, cfg.pp.c_g));
    if (!stats.budgets.empty()) checks.push_back(energy_budget(stats));
    return checks;
}

inline int run_simulate(const RunConfig& cfg, const std::filesystem::path& out,
                        std::uint64_t seed) {
    std::filesystem::create_directories(out);
    const State x0 = initial_state(cfg, seed);
    const BudgetData bd = budget_data(cfg);
    TrajectoryStats stats;
    const State xT = propagate(x0, cfg.pd, cfg.pp, cfg.bc, cfg.step, cfg.repro.T, &stats, &bd);
    write_timeseries_csv(out / (cfg.output_prefix + "_timeseries.csv"), stats);
    write_budget_csv(out / (cfg.output_prefix + "_budget.csv"), stats);
    write_state_snapshots(out, cfg.output_prefix + "_initial", x0, cfg.snapshots);
    write_state_snapshots(out, cfg.output_prefix + "_final", xT, cfg.snapshots);
    std::cout << "simulate: " << stats.budgets.size() << " steps to t=" << xT.t
              << ", |Z|^2=" << stats.records.back().normZ2 << "\n";
    return 0;
}

inline int run_reproduce(const RunConfig& cfg, const std::filesystem::path& out,
                         std::uint64_t seed) {
    std::filesystem::create_directories(out);
    const State guess = initial_state(cfg, seed);
    const FixedPointReport rep =
        find_reproductive(guess, cfg.pd, cfg.pp, cfg.bc, cfg.step, cfg.repro);
    write_fixed_point_report(out / (cfg.output_prefix + "_fixed_point.txt"), rep);
    if (rep.converged) {
        const BudgetData bd = budget_data(cfg);
        TrajectoryStats stats;
        propagate(rep.final_state, cfg.pd, cfg.pp, cfg.bc, cfg.step, cfg.repro.T, &stats, &bd);
        write_timeseries_csv(out / (cfg.output_prefix + "_timeseries.csv"), stats);
        write_budget_csv(out / (cfg.output_prefix + "_budget.csv"), stats);
        write_state_snapshots(out, cfg.output_prefix + "_cycle", rep.final_state,
                              cfg.snapshots);
    }
    std::cout << "reproduce: " << (rep.converged ? "converged" : "NOT converged") << " in "
              << rep.iterations << " iterations, final residual "
              << (rep.residual_history.empty() ? 0.0 : rep.residual_history.back()) << "\n";
    return rep.converged ? 0 : 1;
}

inline int run_sweep(const RunConfig& cfg, const std::filesystem::path& out,
                     std::uint64_t seed) {
    std::filesystem::create_directories(out);
    const State guess = initial_state(cfg, seed);
    const std::vector<EpsResult> rs =
        eps_continuation(guess, cfg.pd, cfg.pp, cfg.bc, cfg.step, cfg.repro);
    std::vector<std::pair<double, double>> pts;
    for (const EpsResult& r : rs)
        if (r.have_integral) pts.emplace_back(r.eps, r.solid_velocity_integral);
    const bool slope_defined = pts.size() >= 2;
    const double slope = slope_defined ? scaling_fit(pts) : 0.0;
    write_sweep_csv(out / (cfg.output_prefix + "_sweep.csv"), rs, slope, slope_defined);
    bool ok = true;
    for (const EpsResult& r : rs) ok = ok && r.report.converged;
    std::cout << "sweep-eps: " << rs.size() << "/" << cfg.repro.eps_schedule.size()
              << " runs, slope "
              << (slope_defined ? std::to_string(slope) : std::string("undefined")) << "\n";
    return ok ? 0 : 1;
}

inline int run_check(const RunConfig& cfg, const std::filesystem::path& out) {
    TrajectoryStats stats = read_timeseries_csv(out / (cfg.output_prefix + "_timeseries.csv"));
    const std::filesystem::path bp = out / (cfg.output_prefix + "_budget.csv");
    if (std::filesystem::exists(bp)) stats = read_budget_csv(bp, std::move(stats));
    const std::vector<CheckResult> checks = run_checks(stats, cfg);
    write_check_report(out / (cfg.output_prefix + "_check.txt"), checks);
    bool all = true;
    for (const CheckResult& r : checks) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " measured=" << r.measured
                  << " bound=" << r.bound << "\n";
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

} // namespace alloyfreeze

#endif
