#ifndef ALLOYFREEZE_CONFIG_HPP
#define ALLOYFREEZE_CONFIG_HPP

// Run configuration: a sectioned key = value text format, strict parsing
// (unknown keys are errors), field-level validation, and a serializer such
// that parse(serialize(cfg)) == cfg.

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "phase.hpp"
#include "repro.hpp"
#include "stepper.hpp"

namespace alloyfreeze {

enum class InitKind { Rest, Random };
enum class SnapshotMode { None, Text, Binary };

struct RunConfig {
    int nx = 32, ny = 32;
    double Lx = 1.0, Ly = 1.0;
    PhaseDiagram pd;
    PhysicalParams pp;
    BoundaryData bc;
    StepConfig step;
    ReproConfig repro;
    InitKind init_kind = InitKind::Rest;
    double init_amp = 0.0;    // perturbation amplitude for Random
    double init_theta = 0.0;  // uniform initial temperature
    std::uint64_t seed = 0;
    std::string output_prefix = "run";
    SnapshotMode snapshots = SnapshotMode::Text;

    Grid grid() const { return Grid(nx, ny, Lx, Ly); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& v, const std::string& key, int line) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size())
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "': not a number: '" + v + "'");
    return x;
}

inline long long parse_int(const std::string& v, const std::string& key, int line) {
    std::size_t pos = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size())
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "': not an integer: '" + v + "'");
    return x;
}

inline std::vector<double> parse_list(const std::string& v, const std::string& key, int line) {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(v);
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), key, line));
    return out;
}

inline void parse_profile(WallProfile& p, const std::string& field, const std::string& value,
                          const std::string& key, int line) {
    if (field == "kind") {
        if (value == "constant")
            p.kind = ProfileKind::Constant;
        else if (value == "linear_in_x")
            p.kind = ProfileKind::LinearInX;
        else if (value == "tabulated")
            p.kind = ProfileKind::Tabulated;
        else
            throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                              "': unknown profile kind '" + value + "'");
    } else if (field == "value") {
        p.value = parse_double(value, key, line);
    } else if (field == "a") {
        p.a = parse_double(value, key, line);
    } else if (field == "b") {
        p.b = parse_double(value, key, line);
    } else if (field == "xs") {
        p.xs = parse_list(value, key, line);
    } else if (field == "vs") {
        p.vs = parse_list(value, key, line);
    } else {
        throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
}

inline std::string fmt(double x) {
    std::ostringstream ss;
    ss.precision(17);
    ss << x;
    return ss.str();
}

inline std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt(v[k]);
    return s;
}

} // namespace detail

inline void validate(const RunConfig& c) {
    auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError("config field '" + field + "': " + why);
    };
    if (c.nx < 4 || c.ny < 4) fail("grid.nx/ny", "grid must be at least 4x4");
    if (!(c.Lx > 0.0) || !(c.Ly > 0.0)) fail("grid.Lx/Ly", "extents must be positive");
    if (!c.pd.valid()) fail("phase", "requires theta_E < theta_F and 0 < c_A < c_E");
    if (!(c.pp.rho > 0.0 && c.pp.nu > 0.0 && c.pp.eta > 0.0 && c.pp.kappa > 0.0 &&
          c.pp.C_p > 0.0 && c.pp.C_0 > 0.0))
        fail("physics", "rho, nu, eta, kappa, C_p, C_0 must be positive");
    if (!(c.pp.c_g >= 0.0 && c.pp.c_g <= liquidus(c.pd, c.pd.theta_E) * c.Lx * c.Ly))
        fail("physics.c_g",
             "violates the compatibility relation 0 <= c_g <= gamma_l(theta_E) |Omega|");
    if (!c.step.valid()) fail("step", "requires dt > 0, eps in (0,1], positive tolerances");
    if (!(c.step.momentum_time_coeff == 1.0 || c.step.momentum_time_coeff == c.pp.rho))
        fail("step.momentum_time_coeff", "must be 1 or rho");
    if (!c.repro.valid())
        fail("repro", "requires T > 0, omega in (0,1], homotopy ending at 1, "
                      "decreasing eps schedule in (0,1]");
    if (c.bc.time_amp != 0.0) {
        if (!(c.bc.time_period > 0.0)) fail("boundary.time_period", "must be positive");
        const double q = c.repro.T / c.bc.time_period;
        if (std::abs(q - std::round(q)) > 1e-9)
            fail("boundary.time_period",
                 "T must be an integer multiple of the modulation period "
                 "(theta_delta(.,0) = theta_delta(.,T))");
    }
    if (c.init_amp < 0.0) fail("init.amp", "must be nonnegative");
    for (const WallProfile* p : {&c.bc.bottom, &c.bc.top})
        if (p->kind == ProfileKind::Tabulated) {
            if (p->xs.size() < 2 || p->xs.size() != p->vs.size())
                fail("boundary", "tabulated profile needs matching xs/vs with >= 2 points");
            for (std::size_t k = 1; k < p->xs.size(); ++k)
                if (!(p->xs[k] > p->xs[k - 1]))
                    fail("boundary", "tabulated xs must be strictly increasing");
        }
}

inline RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    bool homotopy_set = false, eps_set = false;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = detail::trim(raw);
        const auto hash = s.find_first_of("#;");
        if (hash != std::string::npos) s = detail::trim(s.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("line " + std::to_string(line) + ": malformed section header");
            section = detail::trim(s.substr(1, s.size() - 2));
            static const char* known[] = {"grid", "physics", "phase", "boundary",
                                          "step", "repro",   "init",  "output"};
            bool ok = false;
            for (const char* k : known) ok = ok || section == k;
            if (!ok)
                throw ConfigError("line " + std::to_string(line) + ": unknown section '[" +
                                  section + "]'");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = detail::trim(s.substr(eq + 1));
        const std::string full = section + "." + key;
        auto d = [&] { return detail::parse_double(val, full, line); };
        auto iv = [&] { return detail::parse_int(val, full, line); };
        auto unknown = [&] {
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + full + "'");
        };

        if (section == "grid") {
            if (key == "nx") c.nx = static_cast<int>(iv());
            else if (key == "ny") c.ny = static_cast<int>(iv());
            else if (key == "Lx") c.Lx = d();
            else if (key == "Ly") c.Ly = d();
            else unknown();
        } else if (section == "physics") {
            if (key == "rho") c.pp.rho = d();
            else if (key == "nu") c.pp.nu = d();
            else if (key == "eta") c.pp.eta = d();
            else if (key == "kappa") c.pp.kappa = d();
            else if (key == "C_p") c.pp.C_p = d();
            else if (key == "alpha") c.pp.alpha = d();
            else if (key == "beta") c.pp.beta = d();
            else if (key == "g_mag") c.pp.g_mag = d();
            else if (key == "theta_r") c.pp.theta_r = d();
            else if (key == "c_r") c.pp.c_r = d();
            else if (key == "C_0") c.pp.C_0 = d();
            else if (key == "c_g") c.pp.c_g = d();
            else unknown();
        } else if (section == "phase") {
            if (key == "theta_F") c.pd.theta_F = d();
            else if (key == "theta_E") c.pd.theta_E = d();
            else if (key == "c_E") c.pd.c_E = d();
            else if (key == "c_A") c.pd.c_A = d();
            else if (key == "curve") {
                if (val != "linear")
                    throw ConfigError("line " + std::to_string(line) +
                                      ": unsupported curve kind '" + val + "'");
                c.pd.curve_kind = CurveKind::Linear;
            } else unknown();
        } else if (section == "boundary") {
            if (key == "time_amp") c.bc.time_amp = d();
            else if (key == "time_period") c.bc.time_period = d();
            else if (key.rfind("bottom_", 0) == 0)
                detail::parse_profile(c.bc.bottom, key.substr(7), val, full, line);
            else if (key.rfind("top_", 0) == 0)
                detail::parse_profile(c.bc.top, key.substr(4), val, full, line);
            else unknown();
        } else if (section == "step") {
            if (key == "dt") c.step.dt = d();
            else if (key == "eps") c.step.eps = d();
            else if (key == "cfl_max") c.step.cfl_max = d();
            else if (key == "elliptic_tol") c.step.elliptic_tol = d();
            else if (key == "elliptic_max_iter") c.step.elliptic_max_iter = static_cast<int>(iv());
            else if (key == "momentum_time_coeff") c.step.momentum_time_coeff = d();
            else unknown();
        } else if (section == "repro") {
            if (key == "T") c.repro.T = d();
            else if (key == "fp_tol") c.repro.fp_tol = d();
            else if (key == "fp_max_iter") c.repro.fp_max_iter = static_cast<int>(iv());
            else if (key == "relaxation") c.repro.relaxation = d();
            else if (key == "homotopy") {
                c.repro.homotopy_schedule = detail::parse_list(val, full, line);
                homotopy_set = true;
            } else if (key == "eps_schedule") {
                c.repro.eps_schedule = detail::parse_list(val, full, line);
                eps_set = true;
            } else unknown();
        } else if (section == "init") {
            if (key == "kind") {
                if (val == "rest") c.init_kind = InitKind::Rest;
                else if (val == "random") c.init_kind = InitKind::Random;
                else
                    throw ConfigError("line " + std::to_string(line) +
                                      ": unknown init kind '" + val + "'");
            } else if (key == "amp") c.init_amp = d();
            else if (key == "theta") c.init_theta = d();
            else if (key == "seed") c.seed = static_cast<std::uint64_t>(iv());
            else unknown();
        } else if (section == "output") {
            if (key == "prefix") c.output_prefix = val;
            else if (key == "snapshots") {
                if (val == "none") c.snapshots = SnapshotMode::None;
                else if (val == "text") c.snapshots = SnapshotMode::Text;
                else if (val == "binary") c.snapshots = SnapshotMode::Binary;
                else
                    throw ConfigError("line " + std::to_string(line) +
                                      ": unknown snapshot mode '" + val + "'");
            } else unknown();
        } else {
            throw ConfigError("line " + std::to_string(line) +
                              ": key outside of any section: '" + key + "'");
        }
    }
    (void)homotopy_set;
    (void)eps_set;
    validate(c);
    return c;
}

inline std::string serialize_config(const RunConfig& c) {
    using detail::fmt;
    std::ostringstream o;
    o << "[grid]\n"
      << "nx = " << c.nx << "\nny = " << c.ny << "\nLx = " << fmt(c.Lx)
      << "\nLy = " << fmt(c.Ly) << "\n\n";
    o << "[physics]\n"
      << "rho = " << fmt(c.pp.rho) << "\nnu = " << fmt(c.pp.nu) << "\neta = " << fmt(c.pp.eta)
      << "\nkappa = " << fmt(c.pp.kappa) << "\nC_p = " << fmt(c.pp.C_p)
      << "\nalpha = " << fmt(c.pp.alpha) << "\nbeta = " << fmt(c.pp.beta)
      << "\ng_mag = " << fmt(c.pp.g_mag) << "\ntheta_r = " << fmt(c.pp.theta_r)
      << "\nc_r = " << fmt(c.pp.c_r) << "\nC_0 = " << fmt(c.pp.C_0)
      << "\nc_g = " << fmt(c.pp.c_g) << "\n\n";
    o << "[phase]\n"
      << "theta_F = " << fmt(c.pd.theta_F) << "\ntheta_E = " << fmt(c.pd.theta_E)
      << "\nc_E = " << fmt(c.pd.c_E) << "\nc_A = " << fmt(c.pd.c_A) << "\ncurve = linear\n\n";
    auto prof = [&](const char* pre, const WallProfile& p) {
        switch (p.kind) {
            case ProfileKind::Constant:
                o << pre << "kind = constant\n" << pre << "value = " << fmt(p.value) << "\n";
                break;
            case ProfileKind::LinearInX:
                o << pre << "kind = linear_in_x\n"
                  << pre << "a = " << fmt(p.a) << "\n"
                  << pre << "b = " << fmt(p.b) << "\n";
                break;
            case ProfileKind::Tabulated:
                o << pre << "kind = tabulated\n"
                  << pre << "xs = " << detail::fmt_list(p.xs) << "\n"
                  << pre << "vs = " << detail::fmt_list(p.vs) << "\n";
                break;
        }
    };
    o << "[boundary]\n";
    prof("bottom_", c.bc.bottom);
    prof("top_", c.bc.top);
    o << "time_amp = " << fmt(c.bc.time_amp) << "\ntime_period = " << fmt(c.bc.time_period)
      << "\n\n";
    o << "[step]\n"
      << "dt = " << fmt(c.step.dt) << "\neps = " << fmt(c.step.eps)
      << "\ncfl_max = " << fmt(c.step.cfl_max)
      << "\nelliptic_tol = " << fmt(c.step.elliptic_tol)
      << "\nelliptic_max_iter = " << c.step.elliptic_max_iter
      << "\nmomentum_time_coeff = " << fmt(c.step.momentum_time_coeff) << "\n\n";
    o << "[repro]\n"
      << "T = " << fmt(c.repro.T) << "\nfp_tol = " << fmt(c.repro.fp_tol)
      << "\nfp_max_iter = " << c.repro.fp_max_iter
      << "\nrelaxation = " << fmt(c.repro.relaxation)
      << "\nhomotopy = " << detail::fmt_list(c.repro.homotopy_schedule)
      << "\neps_schedule = " << detail::fmt_list(c.repro.eps_schedule) << "\n\n";
    o << "[init]\n"
      << "kind = " << (c.init_kind == InitKind::Rest ? "rest" : "random")
      << "\namp = " << fmt(c.init_amp) << "\ntheta = " << fmt(c.init_theta)
      << "\nseed = " << c.seed << "\n\n";
    o << "[output]\nprefix = " << c.output_prefix << "\nsnapshots = "
      << (c.snapshots == SnapshotMode::None
              ? "none"
              : c.snapshots == SnapshotMode::Text ? "text" : "binary")
      << "\n";
    return o.str();
}

} // namespace alloyfreeze

#endif
