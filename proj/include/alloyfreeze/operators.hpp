#ifndef ALLOYFREEZE_OPERATORS_HPP
#define ALLOYFREEZE_OPERATORS_HPP

// Discrete differential operators and inner products on the MAC grid.
// The operator pairs are built so that the weak-form identities hold to
// machine precision: (grad s, w) = -(s, div w) for w.n = 0 on the wall,
// flux-form advection telescopes to zero, and the divergence-form
// momentum advection is energy-neutral for discretely solenoidal fields.

#include <cmath>

#include "field.hpp"

namespace alloyfreeze {

inline void require_same_grid(const Grid& a, const Grid& b, const char* op) {
    if (!a.same_as(b)) throw SolverError(std::string(op) + ": grid mismatch");
}

// L2 inner product over interior cells.
inline double inner_product(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid(), "inner_product");
    const Grid& g = a.grid();
    double s = 0.0;
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) s += a(i, j) * b(i, j);
    return s * g.cell_area();
}

// L2 inner product over faces (wall faces carry constrained zero values).
inline double inner_product(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid(), b.grid(), "inner_product");
    const Grid& g = a.grid();
    double s = 0.0;
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 0; I <= g.nx; ++I) s += a.u(I, j) * b.u(I, j);
    for (int J = 0; J <= g.ny; ++J)
        for (int i = 1; i <= g.nx; ++i) s += a.v(i, J) * b.v(i, J);
    return s * g.cell_area();
}

inline double norm2(const ScalarField& a) { return inner_product(a, a); }
inline double norm2(const VectorField& a) { return inner_product(a, a); }

// Gradient at interior faces; wall faces get zero (paired only with
// fields satisfying w.n = 0 there).
inline VectorField grad(const ScalarField& s) {
    const Grid& g = s.grid();
    VectorField out(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 1; I < g.nx; ++I)
            out.u(I, j) = (s(I + 1, j) - s(I, j)) / g.dx;
    for (int J = 1; J < g.ny; ++J)
        for (int i = 1; i <= g.nx; ++i)
            out.v(i, J) = (s(i, J + 1) - s(i, J)) / g.dy;
    return out;
}

// Divergence at cell centers.
inline ScalarField div(const VectorField& w) {
    const Grid& g = w.grid();
    ScalarField out(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i)
            out(i, j) = (w.u(i, j) - w.u(i - 1, j)) / g.dx +
                        (w.v(i, j) - w.v(i, j - 1)) / g.dy;
    return out;
}

inline double max_abs_div(const VectorField& w) {
    const Grid& g = w.grid();
    double m = 0.0;
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i)
            m = std::max(m, std::abs((w.u(i, j) - w.u(i - 1, j)) / g.dx +
                                     (w.v(i, j) - w.v(i, j - 1)) / g.dy));
    return m;
}

// 5-point Laplacian at interior cells, reading the ghost layer as set by
// the caller's boundary-condition fill.
inline ScalarField laplacian(const ScalarField& s) {
    const Grid& g = s.grid();
    ScalarField out(g);
    const double ix2 = 1.0 / (g.dx * g.dx), iy2 = 1.0 / (g.dy * g.dy);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i)
            out(i, j) = (s(i + 1, j) - 2.0 * s(i, j) + s(i - 1, j)) * ix2 +
                        (s(i, j + 1) - 2.0 * s(i, j) + s(i, j - 1)) * iy2;
    return out;
}

// Conservative upwind advection: returns div(vel * q) with first-order
// upwind face values. Wall-normal velocities are zero, so the domain sum
// telescopes to zero exactly.
inline ScalarField advect_scalar_flux(const VectorField& vel, const ScalarField& q) {
    require_same_grid(vel.grid(), q.grid(), "advect_scalar_flux");
    const Grid& g = q.grid();
    ScalarField out(g);
    // x-fluxes at u faces, interior faces only (wall faces carry u = 0)
    std::vector<double> fx((g.nx + 1) * (g.ny + 2), 0.0);
    auto FX = [&](int I, int j) -> double& { return fx[static_cast<std::size_t>(j) * (g.nx + 1) + I]; };
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 1; I < g.nx; ++I) {
            const double uf = vel.u(I, j);
            FX(I, j) = uf * (uf >= 0.0 ? q(I, j) : q(I + 1, j));
        }
    std::vector<double> fy((g.nx + 2) * (g.ny + 1), 0.0);
    auto FY = [&](int i, int J) -> double& { return fy[static_cast<std::size_t>(J) * (g.nx + 2) + i]; };
    for (int J = 1; J < g.ny; ++J)
        for (int i = 1; i <= g.nx; ++i) {
            const double vf = vel.v(i, J);
            FY(i, J) = vf * (vf >= 0.0 ? q(i, J) : q(i, J + 1));
        }
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i)
            out(i, j) = (FX(i, j) - FX(i - 1, j)) / g.dx +
                        (FY(i, j) - FY(i, j - 1)) / g.dy;
    return out;
}

// Divergence-form momentum advection (vel . grad) vel with arithmetic face
// means. For a discretely divergence-free field with wall-normal velocity
// zero this satisfies (advect_velocity_skew(vel), vel) = 0 exactly, the
// discrete counterpart of the null trilinear form.
inline VectorField advect_velocity_skew(const VectorField& vel) {
    const Grid& g = vel.grid();
    VectorField out(g);

    // u-momentum, interior u faces I = 1..nx-1, rows j = 1..ny.
    // x-flux at cell centers, y-flux at corners (I, J).
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 1; I < g.nx; ++I) {
            // cells i = I (left) and i = I+1 (right) of face I
            const double ubar_l = 0.5 * (vel.u(I - 1, j) + vel.u(I, j));
            const double ubar_r = 0.5 * (vel.u(I, j) + vel.u(I + 1, j));
            const double fx_r = ubar_r * ubar_r;
            const double fx_l = ubar_l * ubar_l;
            // corners below (J = j-1) and above (J = j)
            const double vbar_t = 0.5 * (vel.v(I, j) + vel.v(I + 1, j));
            const double vbar_b = 0.5 * (vel.v(I, j - 1) + vel.v(I + 1, j - 1));
            const double ubar_t = 0.5 * (vel.u(I, j) + vel.u(I, j + 1));
            const double ubar_b = 0.5 * (vel.u(I, j - 1) + vel.u(I, j));
            out.u(I, j) = (fx_r - fx_l) / g.dx + (vbar_t * ubar_t - vbar_b * ubar_b) / g.dy;
        }

    // v-momentum, interior v faces J = 1..ny-1, columns i = 1..nx.
    for (int J = 1; J < g.ny; ++J)
        for (int i = 1; i <= g.nx; ++i) {
            const double vbar_t = 0.5 * (vel.v(i, J) + vel.v(i, J + 1));
            const double vbar_b = 0.5 * (vel.v(i, J - 1) + vel.v(i, J));
            const double fy_t = vbar_t * vbar_t;
            const double fy_b = vbar_b * vbar_b;
            // corners left (I = i-1) and right (I = i)
            const double ubar_r = 0.5 * (vel.u(i, J) + vel.u(i, J + 1));
            const double ubar_l = 0.5 * (vel.u(i - 1, J) + vel.u(i - 1, J + 1));
            const double vbar_r = 0.5 * (vel.v(i, J) + vel.v(i + 1, J));
            const double vbar_l = 0.5 * (vel.v(i - 1, J) + vel.v(i, J));
            out.v(i, J) = (ubar_r * vbar_r - ubar_l * vbar_l) / g.dx + (fy_t - fy_b) / g.dy;
        }
    return out;
}

} // namespace alloyfreeze

#endif
