#include <doctest.h>

#include "alloyfreeze/config.hpp"

using namespace alloyfreeze;

namespace {

const char* minimal = "[grid]\nnx = 16\nny = 16\n";

} // namespace

TEST_CASE("minimal document takes documented defaults") {
    const RunConfig c = parse_config(minimal);
    CHECK(c.nx == 16);
    CHECK(c.Lx == 1.0);
    CHECK(c.pp.rho == 1.0);
    CHECK(c.pp.c_g == 0.5);
    CHECK(c.pd.theta_F == 1.0);
    CHECK(c.step.dt == 1e-3);
    CHECK(c.repro.fp_max_iter == 200);
    CHECK(c.repro.homotopy_schedule == std::vector<double>{1.0});
    CHECK(c.init_kind == InitKind::Rest);
    CHECK(c.snapshots == SnapshotMode::Text);
}

TEST_CASE("round-trip: parse(serialize(c)) = c") {
    std::string text = std::string(minimal) +
                       "[boundary]\nbottom_kind = linear_in_x\nbottom_a = 0.2\nbottom_b = 0.6\n"
                       "top_kind = tabulated\ntop_xs = 0, 0.5, 1\ntop_vs = -0.5, -0.25, 0.1\n"
                       "time_amp = 0.25\ntime_period = 0.1\n"
                       "[repro]\nT = 0.2\nhomotopy = 0.25, 0.5, 1\n"
                       "[init]\nkind = random\namp = 0.03\nseed = 42\n";
    const RunConfig a = parse_config(text);
    const std::string ser = serialize_config(a);
    const RunConfig b = parse_config(ser);
    CHECK(serialize_config(b) == ser);
    CHECK(b.bc.top.xs == a.bc.top.xs);
    CHECK(b.seed == 42);
}

TEST_CASE("unknown keys and sections are errors, not silent defaults") {
    CHECK_THROWS_AS(parse_config("[grid]\nnx = 16\nny = 16\nnz = 4\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[gird]\nnx = 16\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[physics]\nviscosity = 0.1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("nx = 16\n"), ConfigError); // key outside a section
    CHECK_THROWS_AS(parse_config("[grid]\nnx 16\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\nnx = banana\n"), ConfigError);
}

TEST_CASE("validation: compatibility relation and diagram invariants") {
    // c_g above gamma_l(theta_E) |Omega| is incompatible with the bounds
    CHECK_THROWS_WITH_AS(parse_config(std::string(minimal) + "[physics]\nc_g = 1.5\n"),
                         doctest::Contains("compatibility"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(minimal) + "[phase]\ntheta_E = 2.0\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(minimal) + "[phase]\nc_A = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\nnx = 2\nny = 16\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(minimal) + "[step]\neps = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(minimal) + "[step]\nmomentum_time_coeff = 2\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(minimal) + "[repro]\nhomotopy = 0.5\n"),
                    ConfigError); // schedule must end at 1
    CHECK_THROWS_AS(
        parse_config(std::string(minimal) + "[repro]\neps_schedule = 0.01, 0.1\n"),
        ConfigError); // must be decreasing
    // time-periodic data must match the period T
    CHECK_THROWS_AS(parse_config(std::string(minimal) +
                                 "[boundary]\ntime_amp = 0.2\ntime_period = 0.15\n"
                                 "[repro]\nT = 0.2\n"),
                    ConfigError);
    // tabulated profiles need consistent breakpoints
    CHECK_THROWS_AS(parse_config(std::string(minimal) +
                                 "[boundary]\nbottom_kind = tabulated\nbottom_xs = 0, 1\n"
                                 "bottom_vs = 0.5\n"),
                    ConfigError);
}

TEST_CASE("comments and blank lines are ignored") {
    const RunConfig c = parse_config("# header\n[grid]\n\nnx = 16  # cells\nny = 16\n; note\n");
    CHECK(c.nx == 16);
}

TEST_CASE("momentum_time_coeff may equal rho") {
    const RunConfig c = parse_config(std::string(minimal) +
                                     "[physics]\nrho = 2.5\n[step]\nmomentum_time_coeff = 2.5\n");
    CHECK(c.step.momentum_time_coeff == 2.5);
}
