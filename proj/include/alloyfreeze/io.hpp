#ifndef ALLOYFREEZE_IO_HPP
#define ALLOYFREEZE_IO_HPP

// Output serialization: RFC-4180-style CSV with mandatory header rows,
// plain-text field snapshots (header + row-major ASCII floats) with an
// optional little-endian binary mode, and line-oriented check reports.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "errors.hpp"
#include "repro.hpp"

namespace alloyfreeze {

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p, bool binary = false) {
    std::ofstream f(p, binary ? std::ios::binary : std::ios::out);
    if (!f) throw ConfigError("cannot open output file: " + p.string());
    f.precision(17);
    return f;
}

} // namespace detail

inline void write_timeseries_csv(const std::filesystem::path& p, const TrajectoryStats& stats) {
    std::ofstream f = detail::open_out(p);
    f << "t,normZ2,dissipation,c_min,c_max,theta_min,theta_max,total_solute,solid_v2,div_inf\n";
    for (const StepRecord& r : stats.records)
        f << r.t << ',' << r.normZ2 << ',' << r.dissipation << ',' << r.c_min << ',' << r.c_max
          << ',' << r.theta_min << ',' << r.theta_max << ',' << r.total_solute << ','
          << r.solid_v2 << ',' << r.div_inf << '\n';
}

inline void write_budget_csv(const std::filesystem::path& p, const TrajectoryStats& stats) {
    std::ofstream f = detail::open_out(p);
    f << "dt,z2_old,z2_new,diss_new,penalty_work,a_old,a_new,b_data,b_rem,slack\n";
    for (const StepBudget& b : stats.budgets)
        f << b.dt_ << ',' << b.z2_old << ',' << b.z2_new << ',' << b.diss_new << ','
          << b.penalty_work << ',' << b.a_old << ',' << b.a_new << ',' << b.b_data << ','
          << b.b_rem << ',' << b.slack() << '\n';
}

inline TrajectoryStats read_timeseries_csv(const std::filesystem::path& p) {
    std::ifstream f(p);
    if (!f) throw ConfigError("cannot open time-series CSV: " + p.string());
    TrajectoryStats stats;
    std::string line;
    if (!std::getline(f, line)) throw ConfigError("empty time-series CSV: " + p.string());
    const std::string expect =
        "t,normZ2,dissipation,c_min,c_max,theta_min,theta_max,total_solute,solid_v2,div_inf";
    if (line != expect) throw ConfigError("unexpected CSV header in " + p.string());
    int ln = 1;
    while (std::getline(f, line)) {
        ++ln;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        double v[10];
        for (int k = 0; k < 10; ++k) {
            if (!std::getline(ss, cell, ','))
                throw ConfigError(p.string() + ": line " + std::to_string(ln) +
                                  ": expected 10 columns");
            v[k] = std::stod(cell);
        }
        StepRecord r;
        r.t = v[0];
        r.normZ2 = v[1];
        r.dissipation = v[2];
        r.c_min = v[3];
        r.c_max = v[4];
        r.theta_min = v[5];
        r.theta_max = v[6];
        r.total_solute = v[7];
        r.solid_v2 = v[8];
        r.div_inf = v[9];
        stats.records.push_back(r);
    }
    return stats;
}

inline TrajectoryStats read_budget_csv(const std::filesystem::path& p, TrajectoryStats stats) {
    std::ifstream f(p);
    if (!f) throw ConfigError("cannot open budget CSV: " + p.string());
    std::string line;
    std::getline(f, line);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        double v[10];
        for (int k = 0; k < 10; ++k) {
            std::getline(ss, cell, ',');
            v[k] = std::stod(cell);
        }
        StepBudget b;
        b.dt_ = v[0];
        b.z2_old = v[1];
        b.z2_new = v[2];
        b.diss_new = v[3];
        b.penalty_work = v[4];
        b.a_old = v[5];
        b.a_new = v[6];
        b.b_data = v[7];
        b.b_rem = v[8];
        stats.budgets.push_back(b);
    }
    return stats;
}

// ---------------------------------------------------------------------------
// snapshots

inline void write_snapshot_text(const std::filesystem::path& p, const ScalarField& s,
                                double t, const std::string& name) {
    std::ofstream f = detail::open_out(p);
    const Grid& g = s.grid();
    f << "nx " << g.nx << "\nny " << g.ny << "\nLx " << g.Lx << "\nLy " << g.Ly << "\nt " << t
      << "\nfield " << name << "\n";
    for (int j = 1; j <= g.ny; ++j) {
        for (int i = 1; i <= g.nx; ++i) f << (i > 1 ? " " : "") << s(i, j);
        f << '\n';
    }
}

// Binary mode: the same header written as a text sidecar (suffix .hdr),
// values as row-major little-endian 64-bit floats.
inline void write_snapshot_binary(const std::filesystem::path& p, const ScalarField& s,
                                  double t, const std::string& name) {
    const Grid& g = s.grid();
    {
        std::ofstream h = detail::open_out(p.string() + ".hdr");
        h << "nx " << g.nx << "\nny " << g.ny << "\nLx " << g.Lx << "\nLy " << g.Ly << "\nt "
          << t << "\nfield " << name << "\n";
    }
    std::ofstream f = detail::open_out(p, true);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) {
            const double v = s(i, j);
            f.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
}

inline ScalarField read_snapshot_text(const std::filesystem::path& p) {
    std::ifstream f(p);
    if (!f) throw ConfigError("cannot open snapshot: " + p.string());
    std::string key, name;
    int nx = 0, ny = 0;
    double Lx = 0, Ly = 0, t = 0;
    f >> key >> nx >> key >> ny >> key >> Lx >> key >> Ly >> key >> t >> key >> name;
    Grid g(nx, ny, Lx, Ly);
    ScalarField s(g);
    for (int j = 1; j <= ny; ++j)
        for (int i = 1; i <= nx; ++i)
            if (!(f >> s(i, j))) throw ConfigError("truncated snapshot: " + p.string());
    return s;
}

// cell-centered velocity magnitude components for snapshot output
inline ScalarField cell_centered_u(const VectorField& w) {
    const Grid& g = w.grid();
    ScalarField s(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) s(i, j) = 0.5 * (w.u(i - 1, j) + w.u(i, j));
    return s;
}

inline ScalarField cell_centered_v(const VectorField& w) {
    const Grid& g = w.grid();
    ScalarField s(g);
    for (int j = 1; j <= g.ny; ++j)
        for (int i = 1; i <= g.nx; ++i) s(i, j) = 0.5 * (w.v(i, j - 1) + w.v(i, j));
    return s;
}

// ---------------------------------------------------------------------------
// reports

inline std::string format_check(const CheckResult& r) {
    std::ostringstream o;
    o.precision(12);
    o << "check: " << r.name << "\n  pass: " << (r.pass ? "true" : "false")
      << "\n  measured: " << r.measured << "\n  bound: " << r.bound << "\n  detail: " << r.detail
      << "\n";
    return o.str();
}

inline void write_check_report(const std::filesystem::path& p,
                               const std::vector<CheckResult>& checks) {
    std::ofstream f = detail::open_out(p);
    bool all = true;
    for (const CheckResult& r : checks) {
        f << format_check(r);
        all = all && r.pass;
    }
    f << "summary: " << (all ? "PASS" : "FAIL") << " (" << checks.size() << " checks)\n";
}

inline void write_fixed_point_report(const std::filesystem::path& p,
                                     const FixedPointReport& rep) {
    std::ofstream f = detail::open_out(p);
    f << "converged: " << (rep.converged ? "true" : "false")
      << "\niterations: " << rep.iterations << "\nstages: " << rep.stages.size() << "\n";
    for (const StageReport& s : rep.stages) {
        f << "stage lambda=" << s.lambda << " iterations=" << s.iterations
          << " converged=" << (s.converged ? "true" : "false") << "\n";
        for (std::size_t k = 0; k < s.residual_history.size(); ++k)
            f << "  residual[" << k << "] = " << s.residual_history[k] << "\n";
    }
}

inline void write_sweep_csv(const std::filesystem::path& p, const std::vector<EpsResult>& rs,
                            double slope, bool slope_defined) {
    std::ofstream f = detail::open_out(p);
    f << "eps,converged,iterations,final_residual,solid_cells,solid_velocity_integral\n";
    for (const EpsResult& r : rs) {
        const double res =
            r.report.residual_history.empty() ? 0.0 : r.report.residual_history.back();
        f << r.eps << ',' << (r.report.converged ? 1 : 0) << ',' << r.report.iterations << ','
          << res << ',' << r.solid_cells << ','
          << (r.have_integral ? r.solid_velocity_integral : -1.0) << '\n';
    }
    f << "# slope " << (slope_defined ? std::to_string(slope) : std::string("undefined"))
      << '\n';
}

} // namespace alloyfreeze

#endif
