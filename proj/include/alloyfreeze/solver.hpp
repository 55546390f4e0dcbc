#ifndef ALLOYFREEZE_SOLVER_HPP
#define ALLOYFREEZE_SOLVER_HPP

// Conjugate-gradient solves for the implicit pieces of the scheme: scalar
// Helmholtz problems (coeff I - kd Laplacian), the same per velocity
// component with a pointwise penalty coefficient, and the Neumann pressure
// Poisson problem. All operators are symmetric positive (semi)definite by
// construction of the ghost conventions.

#include <cmath>
#include <functional>
#include <vector>

#include "boundary.hpp"
#include "field.hpp"
#include "operators.hpp"

namespace alloyfreeze {

enum class ScalarBc { AllNeumann, DirichletBottomTop };

namespace detail {

// Plain CG on vectors; matvec must be SPD on the subspace containing b.
// Returns iteration count; throws EllipticDiverged past max_iter.
inline int cg(std::vector<double>& x, const std::vector<double>& b,
              const std::function<void(const std::vector<double>&, std::vector<double>&)>& matvec,
              double tol, int max_iter) {
    const std::size_t n = b.size();
    double b2 = 0.0;
    for (double v : b) b2 += v * v;
    if (b2 == 0.0) {
        x.assign(n, 0.0);
        return 0;
    }
    const double stop2 = tol * tol * b2;

    std::vector<double> r(n), p(n), Ap(n);
    matvec(x, Ap);
    double r2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        r[k] = b[k] - Ap[k];
        r2 += r[k] * r[k];
    }
    if (r2 <= stop2) return 0;
    p = r;
    for (int it = 1; it <= max_iter; ++it) {
        matvec(p, Ap);
        double pAp = 0.0;
        for (std::size_t k = 0; k < n; ++k) pAp += p[k] * Ap[k];
        const double alpha = r2 / pAp;
        double r2n = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * Ap[k];
            r2n += r[k] * r[k];
        }
        if (r2n <= stop2) return it;
        const double beta = r2n / r2;
        r2 = r2n;
        for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
    }
    throw EllipticDiverged("cg: residual above tolerance at iteration cap");
}

// Jacobi-preconditioned CG; diag approximates (or equals) the operator
// diagonal. Used by the velocity solves, whose diagonal spans many orders
// of magnitude once the Carman-Kozeny penalty is large.
inline int pcg(std::vector<double>& x, const std::vector<double>& b,
               const std::function<void(const std::vector<double>&, std::vector<double>&)>& matvec,
               const std::vector<double>& diag, double tol, int max_iter) {
    const std::size_t n = b.size();
    double b2 = 0.0;
    for (double v : b) b2 += v * v;
    if (b2 == 0.0) {
        x.assign(n, 0.0);
        return 0;
    }
    const double stop2 = tol * tol * b2;

    std::vector<double> r(n), z(n), p(n), Ap(n);
    matvec(x, Ap);
    double r2 = 0.0, rz = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        r[k] = b[k] - Ap[k];
        z[k] = r[k] / diag[k];
        r2 += r[k] * r[k];
        rz += r[k] * z[k];
    }
    if (r2 <= stop2) return 0;
    p = z;
    for (int it = 1; it <= max_iter; ++it) {
        matvec(p, Ap);
        double pAp = 0.0;
        for (std::size_t k = 0; k < n; ++k) pAp += p[k] * Ap[k];
        const double alpha = rz / pAp;
        double r2n = 0.0, rzn = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * Ap[k];
            z[k] = r[k] / diag[k];
            r2n += r[k] * r[k];
            rzn += r[k] * z[k];
        }
        if (r2n <= stop2) return it;
        const double beta = rzn / rz;
        rz = rzn;
        for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    }
    throw EllipticDiverged("pcg: residual above tolerance at iteration cap");
}

inline void pack(const ScalarField& s, std::vector<double>& v) {
    const Grid& g = s.grid();
    v.resize(static_cast<std::size_t>(g.nx) * g.ny);
    std::size_t k = 0;
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) v[k++] = s(i, j);
}

inline void unpack(const std::vector<double>& v, ScalarField& s) {
    const Grid& g = s.grid();
    std::size_t k = 0;
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) s(i, j) = v[k++];
}

} // namespace detail

// Solve (coeff I - kd Laplacian) x = rhs with the homogeneous form of the
// given boundary condition (inhomogeneous Dirichlet data must already be
// folded into rhs by the caller). coeff must be >= some positive floor
// pointwise for AllNeumann; DirichletBottomTop tolerates coeff >= 0.
inline ScalarField solve_helmholtz(const ScalarField& coeff, double kd,
                                   const ScalarField& rhs, ScalarBc bc,
                                   double tol, int max_iter, int* iters = nullptr) {
    const Grid& g = rhs.grid();
    ScalarField work(g);
    auto matvec = [&](const std::vector<double>& in, std::vector<double>& out) {
        detail::unpack(in, work);
        if (bc == ScalarBc::AllNeumann)
            fill_neumann_ghosts(work);
        else
            fill_theta_ghosts_homogeneous(work);
        const ScalarField lap = laplacian(work);
        out.resize(in.size());
        std::size_t k = 0;
        for (int j = 1; j <= g.ny; ++j)
            for (int i = 1; i <= g.nx; ++i) {
                out[k] = coeff(i, j) * work(i, j) - kd * lap(i, j);
                ++k;
            }
    };
    std::vector<double> b, x(static_cast<std::size_t>(g.nx) * g.ny, 0.0);
    detail::pack(rhs, b);
    const int n = detail::cg(x, b, matvec, tol, max_iter);
    if (iters) *iters = n;
    ScalarField out(g);
    detail::unpack(x, out);
    return out;
}

// Neumann Poisson problem -Laplacian(phi) = rhs, solvable up to constants;
// the right-hand side is projected onto mean zero and the solution is
// returned mean-free.
inline ScalarField solve_poisson_neumann(const ScalarField& rhs, double tol,
                                         int max_iter, int* iters = nullptr) {
    const Grid& g = rhs.grid();
    ScalarField b_field = rhs;
    b_field.shift_interior(-b_field.mean_interior());
    ScalarField work(g);
    auto matvec = [&](const std::vector<double>& in, std::vector<double>& out) {
        detail::unpack(in, work);
        fill_neumann_ghosts(work);
        const ScalarField lap = laplacian(work);
        out.resize(in.size());
        std::size_t k = 0;
        for (int j = 1; j <= g.ny; ++j)
            for (int i = 1; i <= g.nx; ++i) out[k++] = -lap(i, j);
    };
    std::vector<double> b, x(static_cast<std::size_t>(g.nx) * g.ny, 0.0);
    detail::pack(b_field, b);
    const int n = detail::cg(x, b, matvec, tol, max_iter);
    if (iters) *iters = n;
    ScalarField out(g);
    detail::unpack(x, out);
    out.shift_interior(-out.mean_interior());
    return out;
}

// Per-component velocity Helmholtz solves:
//   (coeff I - kd Laplacian) w = rhs
// coeff lives on the same faces as the component (identity plus dt times
// the nonnegative Carman-Kozeny penalty there, so coeff >= 1 pointwise).

inline void solve_helmholtz_u(VectorField& vel, const VectorField& coeff, double kd,
                              const VectorField& rhs, double tol, int max_iter) {
    const Grid& g = vel.grid();
    const int nux = g.nx - 1; // unknown faces I = 1..nx-1
    const std::size_t n = static_cast<std::size_t>(nux) * g.ny;
    auto id = [&](int I, int j) { return static_cast<std::size_t>(j - 1) * nux + (I - 1); };
    const double ix2 = 1.0 / (g.dx * g.dx), iy2 = 1.0 / (g.dy * g.dy);
    auto matvec = [&](const std::vector<double>& in, std::vector<double>& out) {
        out.resize(n);
        auto at = [&](int I, int j) -> double {
            if (I <= 0 || I >= g.nx) return 0.0;        // wall faces on Gamma_v
            if (j < 1) return -in[id(I, 1)];            // no-slip ghost below
            if (j > g.ny) return -in[id(I, g.ny)];      // no-slip ghost above
            return in[id(I, j)];
        };
        for (int j = 1; j <= g.ny; ++j)
            for (int I = 1; I < g.nx; ++I) {
                const double lap = (at(I + 1, j) - 2.0 * at(I, j) + at(I - 1, j)) * ix2 +
                                   (at(I, j + 1) - 2.0 * at(I, j) + at(I, j - 1)) * iy2;
                out[id(I, j)] = coeff.u(I, j) * at(I, j) - kd * lap;
            }
    };
    std::vector<double> b(n), x(n, 0.0), diag(n);
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 1; I < g.nx; ++I) {
            b[id(I, j)] = rhs.u(I, j);
            diag[id(I, j)] = coeff.u(I, j) + 2.0 * kd * (ix2 + iy2);
        }
    detail::pcg(x, b, matvec, diag, tol, max_iter);
    for (int j = 1; j <= g.ny; ++j)
        for (int I = 1; I < g.nx; ++I) vel.u(I, j) = x[id(I, j)];
}

inline void solve_helmholtz_v(VectorField& vel, const VectorField& coeff, double kd,
                              const VectorField& rhs, double tol, int max_iter) {
    const Grid& g = vel.grid();
    const int nvy = g.ny - 1; // unknown faces J = 1..ny-1
    const std::size_t n = static_cast<std::size_t>(g.nx) * nvy;
    auto id = [&](int i, int J) { return static_cast<std::size_t>(J - 1) * g.nx + (i - 1); };
    const double ix2 = 1.0 / (g.dx * g.dx), iy2 = 1.0 / (g.dy * g.dy);
    auto matvec = [&](const std::vector<double>& in, std::vector<double>& out) {
        out.resize(n);
        auto at = [&](int i, int J) -> double {
            if (J <= 0 || J >= g.ny) return 0.0;        // wall faces on Gamma_bt
            if (i < 1) return in[id(1, J)];             // free-slip ghost left
            if (i > g.nx) return in[id(g.nx, J)];       // free-slip ghost right
            return in[id(i, J)];
        };
        for (int J = 1; J < g.ny; ++J)
            for (int i = 1; i <= g.nx; ++i) {
                const double lap = (at(i + 1, J) - 2.0 * at(i, J) + at(i - 1, J)) * ix2 +
                                   (at(i, J + 1) - 2.0 * at(i, J) + at(i, J - 1)) * iy2;
                out[id(i, J)] = coeff.v(i, J) * at(i, J) - kd * lap;
            }
    };
    std::vector<double> b(n), x(n, 0.0), diag(n);
    for (int J = 1; J < g.ny; ++J)
        for (int i = 1; i <= g.nx; ++i) {
            b[id(i, J)] = rhs.v(i, J);
            diag[id(i, J)] = coeff.v(i, J) + 2.0 * kd * (ix2 + iy2);
        }
    detail::pcg(x, b, matvec, diag, tol, max_iter);
    for (int J = 1; J < g.ny; ++J)
        for (int i = 1; i <= g.nx; ++i) vel.v(i, J) = x[id(i, J)];
}

} // namespace alloyfreeze

#endif
