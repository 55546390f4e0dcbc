#ifndef ALLOYFREEZE_FIELD_HPP
#define ALLOYFREEZE_FIELD_HPP

// 2D staggered (MAC) discretization of the rectangular mould.
// Scalars (c, theta, p) live at cell centers with one ghost layer;
// u lives on vertical faces, v on horizontal faces.
//
// Boundary segments: Gamma_b = bottom wall (y = 0), Gamma_t = top wall
// (y = Ly), Gamma_v = both vertical walls (x = 0 and x = Lx).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "errors.hpp"

namespace alloyfreeze {

struct Grid {
    int nx = 0, ny = 0;
    double Lx = 1.0, Ly = 1.0;
    double dx = 0.0, dy = 0.0;

    Grid() = default;
    Grid(int nx_, int ny_, double Lx_, double Ly_)
        : nx(nx_), ny(ny_), Lx(Lx_), Ly(Ly_), dx(Lx_ / nx_), dy(Ly_ / ny_) {
        if (nx < 4 || ny < 4) throw ConfigError("Grid: nx, ny must be >= 4");
        if (!(Lx > 0.0) || !(Ly > 0.0)) throw ConfigError("Grid: extents must be positive");
    }

    double cell_area() const { return dx * dy; }
    double volume() const { return Lx * Ly; }
    // cell-center coordinates, i, j in 1..nx / 1..ny
    double xc(int i) const { return (i - 0.5) * dx; }
    double yc(int j) const { return (j - 0.5) * dy; }

    bool same_as(const Grid& o) const {
        return nx == o.nx && ny == o.ny && Lx == o.Lx && Ly == o.Ly;
    }
};

// Cell-centered scalar with one ghost layer: indices 0..nx+1, 0..ny+1;
// interior cells are 1..nx x 1..ny.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : g_(g), a_((g.nx + 2) * (g.ny + 2), fill) {}

    const Grid& grid() const { return g_; }
    double& operator()(int i, int j) { return a_[idx(i, j)]; }
    double operator()(int i, int j) const { return a_[idx(i, j)]; }

    bool finite() const {
        for (double x : a_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    double min_interior() const {
        double m = (*this)(1, 1);
        for (int j = 1; j <= g_.ny; ++j)
            for (int i = 1; i <= g_.nx; ++i) m = std::min(m, (*this)(i, j));
        return m;
    }
    double max_interior() const {
        double m = (*this)(1, 1);
        for (int j = 1; j <= g_.ny; ++j)
            for (int i = 1; i <= g_.nx; ++i) m = std::max(m, (*this)(i, j));
        return m;
    }
    double sum_interior() const {
        double s = 0.0;
        for (int j = 1; j <= g_.ny; ++j)
            for (int i = 1; i <= g_.nx; ++i) s += (*this)(i, j);
        return s;
    }
    double mean_interior() const {
        return sum_interior() / (static_cast<double>(g_.nx) * g_.ny);
    }

    void fill(double v) { a_.assign(a_.size(), v); }
    void shift_interior(double v) {
        for (int j = 1; j <= g_.ny; ++j)
            for (int i = 1; i <= g_.nx; ++i) (*this)(i, j) += v;
    }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(j) * (g_.nx + 2) + i;
    }
    Grid g_;
    std::vector<double> a_;
};

// MAC velocity. u(I, j): vertical faces, I = 0..nx (wall faces at I = 0, nx),
// rows j = 0..ny+1 where j = 0 and ny+1 are ghost rows below/above the walls.
// v(i, J): horizontal faces, J = 0..ny (wall faces at J = 0, ny), columns
// i = 0..nx+1 with ghost columns i = 0 and nx+1.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const Grid& g)
        : g_(g),
          u_((g.nx + 1) * (g.ny + 2), 0.0),
          v_((g.nx + 2) * (g.ny + 1), 0.0) {}

    const Grid& grid() const { return g_; }

    double& u(int I, int j) { return u_[uidx(I, j)]; }
    double u(int I, int j) const { return u_[uidx(I, j)]; }
    double& v(int i, int J) { return v_[vidx(i, J)]; }
    double v(int i, int J) const { return v_[vidx(i, J)]; }

    bool finite() const {
        for (double x : u_)
            if (!std::isfinite(x)) return false;
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (int j = 1; j <= g_.ny; ++j)
            for (int I = 0; I <= g_.nx; ++I) m = std::max(m, std::abs(u(I, j)));
        for (int J = 0; J <= g_.ny; ++J)
            for (int i = 1; i <= g_.nx; ++i) m = std::max(m, std::abs(v(i, J)));
        return m;
    }

    void fill(double val) {
        u_.assign(u_.size(), val);
        v_.assign(v_.size(), val);
    }

private:
    std::size_t uidx(int I, int j) const {
        return static_cast<std::size_t>(j) * (g_.nx + 1) + I;
    }
    std::size_t vidx(int i, int J) const {
        return static_cast<std::size_t>(J) * (g_.nx + 2) + i;
    }
    Grid g_;
    std::vector<double> u_, v_;
};

// One time level of the coupled system.
struct State {
    ScalarField c;
    ScalarField theta;
    VectorField vel;
    ScalarField p;
    double t = 0.0;

    State() = default;
    explicit State(const Grid& g) : c(g), theta(g), vel(g), p(g) {}

    const Grid& grid() const { return c.grid(); }

    bool finite() const {
        return c.finite() && theta.finite() && vel.finite() && p.finite();
    }

    void require_finite(const char* where) const {
        if (!finite()) throw NonFinite(std::string("non-finite field in ") + where);
    }
};

} // namespace alloyfreeze

#endif
