#include <doctest.h>

#include <cmath>
#include <random>

#include "alloyfreeze/diagnostics.hpp"
#include "alloyfreeze/stepper.hpp"

using namespace alloyfreeze;

namespace {

BoundaryData convection_bc() {
    BoundaryData bc;
    bc.bottom.kind = ProfileKind::LinearInX;
    bc.bottom.a = 0.2;
    bc.bottom.b = 0.6;
    bc.top.kind = ProfileKind::Constant;
    bc.top.value = -0.5;
    return bc;
}

State uniform_state(const Grid& g, double cbar, double theta0) {
    State s(g);
    s.c.fill(cbar);
    s.theta.fill(theta0);
    return s;
}

} // namespace

TEST_CASE("rest state with zero data is invariant") {
    Grid g(16, 16, 1.0, 1.0);
    PhaseDiagram pd;
    PhysicalParams pp;
    pp.g_mag = 0.0;
    pp.c_g = 0.0;
    BoundaryData bc; // both walls constant 0
    StepConfig cfg;
    cfg.dt = 1e-3;
    State s(g);
    apply_bc(s, bc, 0.0);
    for (int k = 0; k < 5; ++k) s = step(s, pd, pp, bc, cfg);
    CHECK(s.c.max_interior() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::abs(s.theta.max_interior()) <= 1e-13);
    CHECK(s.vel.max_abs() <= 1e-13);
    CHECK(s.t == doctest::Approx(5e-3));
}

TEST_CASE("pure-diffusion mode decays at the analytic rate") {
    Grid g(32, 32, 1.0, 1.0);
    PhaseDiagram pd;
    PhysicalParams pp;
    pp.g_mag = 0.0;
    pp.c_g = 0.5;
    BoundaryData bc; // homogeneous Dirichlet walls for theta
    StepConfig cfg;
    cfg.dt = 1e-3;
    State s = uniform_state(g, 0.5, 0.0);
    ScalarField mode(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) mode(i, j) = std::sin(M_PI * g.yc(j) / g.Ly);
    const double a0 = 0.3;
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) s.theta(i, j) = a0 * mode(i, j);
    apply_bc(s, bc, 0.0);
    const double t_end = 0.05;
    const int n = static_cast<int>(std::round(t_end / cfg.dt));
    for (int k = 0; k < n; ++k) s = step(s, pd, pp, bc, cfg);
    const double a = inner_product(s.theta, mode) / inner_product(mode, mode);
    const double expected = a0 * std::exp(-pp.kappa * M_PI * M_PI * t_end);
    CHECK(std::abs(a - expected) <= 0.01 * expected);
    // c stays uniform: the mode keeps every cell in the liquid region
    CHECK(std::abs(s.c.max_interior() - 0.5) <= 1e-12);
}

TEST_CASE("convection run: maximum principles, conservation, divergence") {
    Grid g(16, 16, 1.0, 1.0);
    PhaseDiagram pd;
    PhysicalParams pp; // defaults: g = 10, c_g = 0.5
    const BoundaryData bc = convection_bc();
    StepConfig cfg;
    cfg.dt = 2.5e-3;
    State s = uniform_state(g, 0.5, 0.0);
    apply_bc(s, bc, 0.0);
    double inf = 0.0, sup = 0.0;
    bc.extremes(g, inf, sup);
    inf = std::min(inf, 0.0);
    sup = std::max(sup, 0.0);
    for (int k = 0; k < 200; ++k) {
        s = step(s, pd, pp, bc, cfg);
        CHECK(s.c.min_interior() >= -1e-8);
        CHECK(s.c.max_interior() <= pd.c_E + 1e-8);
        CHECK(s.theta.min_interior() >= inf - 1e-8);
        CHECK(s.theta.max_interior() <= sup + 1e-8);
        CHECK(std::abs(total_solute(s.c) - pp.c_g) <= 1e-12);
        CHECK(max_abs_div(s.vel) <= 1e-8);
    }
    // the flow actually moves
    CHECK(s.vel.max_abs() > 1e-3);
}

TEST_CASE("energy recursion holds with nonnegative slack") {
    Grid g(16, 16, 1.0, 1.0);
    PhaseDiagram pd;
    PhysicalParams pp;
    const BoundaryData bc = convection_bc();
    StepConfig cfg;
    cfg.dt = 2.5e-3;
    double inf = 0.0, sup = 0.0;
    bc.extremes(g, inf, sup);
    BudgetData bd;
    bd.m_theta = std::max(std::abs(inf), std::abs(sup));
    bd.fe_max = pp.rho * pp.g_mag *
                (pp.alpha * std::max(std::abs(inf), std::abs(sup)) +
                 pp.beta * std::max(pp.c_r, pd.c_E - pp.c_r));
    State s = uniform_state(g, 0.5, 0.0);
    apply_bc(s, bc, 0.0);
    for (int k = 0; k < 80; ++k) {
        StepBudget b;
        s = step(s, pd, pp, bc, cfg, &b, &bd);
        CHECK(b.slack() >= -1e-10 * std::max(1.0, b.z2_old));
        CHECK(b.diss_new >= 0.0);
        CHECK(b.penalty_work >= 0.0);
    }
}

TEST_CASE("CFL violation throws") {
    Grid g(16, 16, 1.0, 1.0);
    PhaseDiagram pd;
    PhysicalParams pp;
    BoundaryData bc;
    StepConfig cfg;
    cfg.dt = 0.1; // dx = 1/16, so |u| > 0.56 trips cfl_max = 0.9
    State s = uniform_state(g, 0.5, 0.5);
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 1; I < g.nx; ++I) s.vel.u(I, j) = 1.0;
    apply_bc(s, bc, 0.0);
    CHECK_THROWS_AS(step(s, pd, pp, bc, cfg), CflExceeded);
}

TEST_CASE("non-finite input is rejected") {
    Grid g(16, 16, 1.0, 1.0);
    PhaseDiagram pd;
    PhysicalParams pp;
    BoundaryData bc;
    StepConfig cfg;
    State s = uniform_state(g, 0.5, 0.0);
    s.theta(3, 3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(step(s, pd, pp, bc, cfg), NonFinite);
}

TEST_CASE("time-periodic wall data enters through the boundary modulation") {
    Grid g(16, 16, 1.0, 1.0);
    BoundaryData bc = convection_bc();
    bc.time_amp = 0.3;
    bc.time_period = 0.2;
    CHECK(bc.theta_bottom(0.5, 0.0) == doctest::Approx(bc.theta_bottom(0.5, 0.2)));
    CHECK(bc.theta_bottom(0.5, 0.05) != doctest::Approx(bc.theta_bottom(0.5, 0.0)));
    double inf = 0.0, sup = 0.0;
    bc.extremes(g, inf, sup);
    CHECK(sup >= 0.8 * 1.3 - 1e-12); // max of base times max modulation
}
