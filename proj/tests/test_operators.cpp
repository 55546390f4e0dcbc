#include <doctest.h>

#include <random>

#include "alloyfreeze/boundary.hpp"
#include "alloyfreeze/operators.hpp"

using namespace alloyfreeze;

namespace {

// discretely divergence-free velocity from a random streamfunction at grid
// nodes, zero on the boundary ring (so wall-normal faces are exactly zero)
VectorField random_solenoidal(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> psi(static_cast<std::size_t>(g.nx + 1) * (g.ny + 1), 0.0);
    auto P = [&](int I, int J) -> double& {
        return psi[static_cast<std::size_t>(J) * (g.nx + 1) + I];
    };
    for (int J = 1; J < g.ny; ++J)
        for (int I = 1; I < g.nx; ++I) P(I, J) = uni(rng);
    VectorField w(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 1; I < g.nx; ++I) w.u(I, j) = (P(I, j) - P(I, j - 1)) / g.dy;
    for (int J = 1; J < g.ny; ++J)
        for (int i = 1; i <= g.nx; ++i) w.v(i, J) = -(P(i, J) - P(i - 1, J)) / g.dx;
    fill_velocity_ghosts(w);
    return w;
}

ScalarField random_scalar(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    ScalarField s(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) s(i, j) = uni(rng);
    return s;
}

} // namespace

TEST_CASE("streamfunction fields are discretely divergence-free") {
    Grid g(32, 32, 1.0, 1.0);
    std::mt19937_64 rng(7);
    const VectorField w = random_solenoidal(g, rng);
    CHECK(max_abs_div(w) <= 1e-12 * 32.0);
}

TEST_CASE("adjointness: (grad s, w) = -(s, div w) for w.n = 0") {
    Grid g(32, 32, 1.0, 1.0);
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        const ScalarField s = random_scalar(g, rng);
        VectorField w = random_solenoidal(g, rng);
        // also perturb w off the solenoidal manifold (identity needs only w.n = 0)
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        for (int j = 1; j <= g.ny; ++j)
            for (int I = 1; I < g.nx; ++I) w.u(I, j) += uni(rng);
        for (int J = 1; J < g.ny; ++J)
            for (int i = 1; i <= g.nx; ++i) w.v(i, J) += uni(rng);
        const double lhs = inner_product(grad(s), w);
        const double rhs = -inner_product(s, div(w));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0));
    }
}

TEST_CASE("flux-form advection telescopes to zero total") {
    Grid g(32, 32, 1.0, 1.0);
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 5; ++rep) {
        const ScalarField q = random_scalar(g, rng);
        const VectorField w = random_solenoidal(g, rng);
        const ScalarField a = advect_scalar_flux(w, q);
        CHECK(std::abs(a.sum_interior() * g.cell_area()) <= 1e-12);
    }
}

TEST_CASE("momentum advection is energy-neutral on solenoidal fields") {
    Grid g(32, 32, 1.0, 1.0);
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 5; ++rep) {
        const VectorField w = random_solenoidal(g, rng);
        const VectorField n = advect_velocity_skew(w);
        const double scale = std::sqrt(norm2(n) * norm2(w)) + 1.0;
        CHECK(std::abs(inner_product(n, w)) <= 1e-12 * scale);
    }
}

TEST_CASE("laplacian with Neumann ghosts is symmetric and negative") {
    Grid g(16, 24, 1.0, 2.0);
    std::mt19937_64 rng(23);
    ScalarField a = random_scalar(g, rng), b = random_scalar(g, rng);
    fill_neumann_ghosts(a);
    fill_neumann_ghosts(b);
    const double ab = inner_product(laplacian(a), b);
    const double ba = inner_product(laplacian(b), a);
    CHECK(std::abs(ab - ba) <= 1e-11 * (std::abs(ab) + 1.0));
    CHECK(inner_product(laplacian(a), a) <= 0.0);
}

TEST_CASE("projection identity: (w, grad phi) = -(div w, phi)") {
    Grid g(20, 20, 1.0, 1.0);
    std::mt19937_64 rng(29);
    VectorField w = random_solenoidal(g, rng);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 1; I < g.nx; ++I) w.u(I, j) += uni(rng);
    const ScalarField phi = random_scalar(g, rng);
    const double lhs = inner_product(w, grad(phi));
    const double rhs = -inner_product(div(w), phi);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + 1.0));
}
