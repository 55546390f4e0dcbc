// Acceptance suite: one line per criterion, exit code = number of failures.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "alloyfreeze/config.hpp"
#include "alloyfreeze/runner.hpp"

using namespace alloyfreeze;

namespace {

int failures = 0;

void report(int num, const char* what, bool pass, const std::string& detail) {
    std::printf("criterion %2d [%s]: %s (%s)\n", num, pass ? "PASS" : "FAIL", what,
                detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double x) {
    std::ostringstream ss;
    ss.precision(6);
    ss << x;
    return ss.str();
}

RunConfig load(const char* name) {
    const std::string path = std::string(ALLOYFREEZE_SOURCE_DIR) + "/configs/" + name;
    std::ifstream f(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

VectorField random_solenoidal(const Grid& g, std::mt19937_64& rng, double amp = 1.0) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> psi(static_cast<std::size_t>(g.nx + 1) * (g.ny + 1), 0.0);
    auto P = [&](int I, int J) -> double& {
        return psi[static_cast<std::size_t>(J) * (g.nx + 1) + I];
    };
    for (int J = 1; J < g.ny; ++J)
        for (int I = 1; I < g.nx; ++I) P(I, J) = amp * uni(rng);
    VectorField w(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 1; I < g.nx; ++I) w.u(I, j) = (P(I, j) - P(I, j - 1)) / g.dy;
    for (int J = 1; J < g.ny; ++J)
        for (int i = 1; i <= g.nx; ++i) w.v(i, J) = -(P(i, J) - P(i - 1, J)) / g.dx;
    fill_velocity_ghosts(w);
    return w;
}

// 1. discrete operator identities on 32x32 random solenoidal fields
void criterion_1() {
    Grid g(32, 32, 1.0, 1.0);
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        const VectorField w = random_solenoidal(g, rng);
        ScalarField s(g), q(g);
        for (int j = 1; j <= g.ny; ++j)
            for (int i = 1; i <= g.nx; ++i) {
                s(i, j) = uni(rng);
                q(i, j) = uni(rng);
            }
        const double adj = std::abs(inner_product(grad(s), w) + inner_product(s, div(w))) /
                           (std::abs(inner_product(s, div(w))) + 1.0);
        const VectorField n = advect_velocity_skew(w);
        const double skew =
            std::abs(inner_product(n, w)) / (std::sqrt(norm2(n) * norm2(w)) + 1.0);
        const double cons = std::abs(advect_scalar_flux(w, q).sum_interior() * g.cell_area());
        worst = std::max({worst, adj, skew, cons});
    }
    report(1, "operator identities: adjointness, skew-symmetry, conservation",
           worst <= 1e-12, "worst residual " + fmt(worst) + " <= 1e-12");
}

// 2. heat-decay oracle on 64x64
void criterion_2() {
    Grid g(64, 64, 1.0, 1.0);
    PhaseDiagram pd;
    PhysicalParams pp;
    pp.g_mag = 0.0;
    BoundaryData bc;
    StepConfig cfg;
    cfg.dt = 1e-4;
    State s(g);
    s.c.fill(0.5);
    ScalarField mode(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) mode(i, j) = std::sin(M_PI * g.yc(j) / g.Ly);
    const double a0 = 0.4;
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) s.theta(i, j) = a0 * mode(i, j);
    apply_bc(s, bc, 0.0);
    const double t_end = 0.1;
    const int n = static_cast<int>(std::round(t_end / cfg.dt));
    for (int k = 0; k < n; ++k) s = step(s, pd, pp, bc, cfg);
    const double a = inner_product(s.theta, mode) / inner_product(mode, mode);
    const double expected = a0 * std::exp(-pp.kappa * M_PI * M_PI * t_end);
    const double rel = std::abs(a - expected) / expected;
    report(2, "heat-decay amplitude matches exp(-kappa lambda1 t)", rel <= 0.02,
           "relative error " + fmt(rel) + " <= 0.02");
}

// 3 + 7a. default configuration: max principles on every recorded step
TrajectoryStats default_trajectory(const RunConfig& cfg, double T) {
    const State x0 = initial_state(cfg, 0);
    const BudgetData bd = budget_data(cfg);
    TrajectoryStats stats;
    propagate(x0, cfg.pd, cfg.pp, cfg.bc, cfg.step, T, &stats, &bd);
    return stats;
}

void criterion_3(const TrajectoryStats& stats, const RunConfig& cfg) {
    double inf = 0.0, sup = 0.0;
    data_theta_extremes(cfg, inf, sup);
    const CheckResult r = check_max_principles(stats, cfg.pd, inf, sup, 1e-8);
    report(3, "maximum principles on the default convection run", r.pass,
           "worst excess " + fmt(r.measured) + " <= 1e-8, " +
               std::to_string(stats.records.size()) + " records");
}

void criterion_4(const TrajectoryStats& stats, const RunConfig& cfg) {
    const CheckResult r = check_conservation(stats, cfg.pp.c_g, 1e-12);
    report(4, "solute conservation over a 1000-step run",
           r.pass && stats.budgets.size() >= 1000,
           "max drift " + fmt(r.measured) + " <= " + fmt(r.bound) + " over " +
               std::to_string(stats.budgets.size()) + " steps");
}

void criterion_5(const RunConfig& cfg, TrajectoryStats& cycle_stats, bool& have_cycle) {
    const State guess = initial_state(cfg, 0);
    const FixedPointReport rep =
        find_reproductive(guess, cfg.pd, cfg.pp, cfg.bc, cfg.step, cfg.repro);
    bool pass = rep.converged && rep.iterations <= 200;
    double rel = -1.0;
    if (rep.converged) {
        const State back =
            propagate(rep.final_state, cfg.pd, cfg.pp, cfg.bc, cfg.step, cfg.repro.T);
        rel = std::sqrt(state_dist2(back, rep.final_state)) /
              std::max(std::sqrt(z_norm2(rep.final_state, cfg.pp.c_g, cfg.bc).total()), 1.0);
        pass = pass && rel <= 1e-7;
        const BudgetData bd = budget_data(cfg);
        propagate(rep.final_state, cfg.pd, cfg.pp, cfg.bc, cfg.step, cfg.repro.T, &cycle_stats,
                  &bd);
        have_cycle = true;
    }
    report(5, "reproductive solution on the default configuration", pass,
           std::to_string(rep.iterations) + " iterations, re-propagation residual " +
               fmt(rel) + " <= 1e-7");
}

void criterion_6() {
    Grid g(16, 16, 1.0, 1.0);
    PhaseDiagram pd;
    PhysicalParams pp;
    pp.g_mag = 0.0;
    BoundaryData bc;
    bc.bottom.value = 0.3;
    bc.top.value = 0.3;
    StepConfig cfg;
    cfg.dt = 2.5e-3;
    ReproConfig rcfg;
    rcfg.T = 0.2;
    RunConfig rc;
    rc.nx = rc.ny = 16;
    rc.pp = pp;
    rc.bc = bc;
    rc.init_kind = InitKind::Random;
    rc.init_amp = 0.05;
    rc.init_theta = 0.3;
    const State guess = initial_state(rc, 606);
    const FixedPointReport rep = find_reproductive(guess, pd, pp, bc, cfg, rcfg);
    double dev = 1e300;
    if (rep.converged) {
        const State& x = rep.final_state;
        dev = x.vel.max_abs();
        for (int j = 1; j <= g.ny; ++j)
            for (int i = 1; i <= g.nx; ++i)
                dev = std::max({dev, std::abs(x.c(i, j) - 0.5), std::abs(x.theta(i, j) - 0.3)});
    }
    report(6, "steady-state oracle: constant walls, zero gravity", rep.converged && dev <= 1e-6,
           "max deviation from (c_g/|Omega|, theta_bar, 0): " + fmt(dev));
}

void criterion_7(const TrajectoryStats& a, const TrajectoryStats& b, const TrajectoryStats& c,
                 bool have_c) {
    CheckResult ra = energy_budget(a), rb = energy_budget(b);
    bool pass = ra.pass && rb.pass;
    double worst = std::max(ra.measured, rb.measured);
    std::size_t steps = a.budgets.size() + b.budgets.size();
    if (have_c) {
        const CheckResult rc = energy_budget(c);
        pass = pass && rc.pass;
        worst = std::max(worst, rc.measured);
        steps += c.budgets.size();
    }
    report(7, "discrete energy recursion on every accepted step", pass,
           "worst negative slack " + fmt(worst) + " over " + std::to_string(steps) + " steps");
}

void criterion_8() {
    Grid g(32, 32, 1.0, 1.0);
    PhaseDiagram pd;
    PhysicalParams pp;
    pp.g_mag = 0.0;
    pp.c_g = 0.5;
    BoundaryData bc; // theta_delta == 0
    StepConfig cfg;
    cfg.dt = 2.5e-3;
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    State s(g);
    s.c.fill(0.5);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) s.theta(i, j) = 0.4 + 0.2 * uni(rng);
    s.vel = random_solenoidal(g, rng, 0.02);
    apply_bc(s, bc, 0.0);
    const double beta = decay_rate_beta(g, pp);
    TrajectoryStats stats;
    propagate(s, pd, pp, bc, cfg, 0.2, &stats);
    const CheckResult r = decay_check(stats, beta, 0.10);
    report(8, "zero-data exponential decay of |Z|^2", r.pass,
           "|Z(T)|^2 = " + fmt(r.measured) + " <= " + fmt(r.bound) + ", beta = " + fmt(beta));
}

void criterion_9() {
    const RunConfig cfg = load("sweep.cfg");
    const State guess = initial_state(cfg, 0);
    const std::vector<EpsResult> rs =
        eps_continuation(guess, cfg.pd, cfg.pp, cfg.bc, cfg.step, cfg.repro);
    bool pass = rs.size() == cfg.repro.eps_schedule.size();
    std::vector<std::pair<double, double>> pts;
    double prev = 1e300;
    for (const EpsResult& r : rs) {
        pass = pass && r.report.converged && r.have_integral;
        if (!r.have_integral) continue;
        pass = pass && r.solid_velocity_integral <= prev * (1.0 + 1e-9);
        prev = r.solid_velocity_integral;
        pts.emplace_back(r.eps, r.solid_velocity_integral);
    }
    const double slope = pts.size() >= 2 ? scaling_fit(pts) : 0.0;
    pass = pass && slope >= 2.5;
    report(9, "eps-scaling of the solid-region velocity integral", pass,
           "log-log slope " + fmt(slope) + " >= 2.5, monotone over " +
               std::to_string(pts.size()) + " eps values");
}

void criterion_10() {
    PhaseDiagram pd;
    const double delta = 1e-6, tol = 1e-5;
    double worst = 0.0;
    bool fs_ok = true;
    for (int k = 1; k < 200; ++k) {
        const double th = pd.theta_E + (pd.theta_F - pd.theta_E) * k / 200.0;
        for (double curve : {liquidus(pd, th), solidus(pd, th)}) {
            const double jump_c = std::abs(liquid_concentration(pd, curve - delta, th) -
                                           liquid_concentration(pd, curve + delta, th));
            worst = std::max(worst, jump_c);
        }
        const double gl = liquidus(pd, th), gs = solidus(pd, th);
        for (double c : {gl, gs}) {
            if (c <= 0.0) continue;
            const double thc = c <= pd.c_A ? solidus_inverse(pd, c) : liquidus_inverse(pd, c);
            worst = std::max(worst, std::abs(liquid_concentration(pd, c, thc - delta) -
                                             liquid_concentration(pd, c, thc + delta)));
        }
    }
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 200; ++j) {
            const double c = -0.5 + 2.0 * i / 199.0;
            const double t = -2.0 + 4.0 * j / 199.0;
            const double fs = solid_fraction(pd, c, t);
            fs_ok = fs_ok && fs >= 0.0 && fs <= 1.0;
        }
    report(10, "closure continuity and lever-rule bounds", worst <= tol && fs_ok,
           "max c_l jump " + fmt(worst) + " <= 1e-5, f_s in [0,1]: " +
               (fs_ok ? "yes" : "no"));
}

} // namespace

int main() {
    criterion_1();
    criterion_2();

    const RunConfig dflt = load("default.cfg");
    const TrajectoryStats short_run = default_trajectory(dflt, dflt.repro.T);
    RunConfig long_cfg = dflt;
    const TrajectoryStats long_run = default_trajectory(long_cfg, 1000.0 * long_cfg.step.dt);

    criterion_3(long_run, dflt);
    criterion_4(long_run, dflt);

    TrajectoryStats cycle;
    bool have_cycle = false;
    criterion_5(dflt, cycle, have_cycle);
    criterion_6();
    criterion_7(short_run, long_run, cycle, have_cycle);
    criterion_8();
    criterion_9();
    criterion_10();

    std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "PASS" : "FAIL", failures);
    return failures;
}
