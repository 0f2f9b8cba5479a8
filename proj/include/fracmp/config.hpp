#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fracmp {

enum class RunMode { MountainPass, Convex, Verify, ConvergenceStudy };
enum class ForcingKind { None, Sin };
enum class StudyKind { Manufactured, Identities, Constants };

// Flat key-value run configuration with dotted section keys. Parsing is
// line-based: 'key = value', '#' starts a comment, blank lines ignored.
struct RunConfig {
    RunMode mode = RunMode::MountainPass;
    std::string output_dir = "out";

    int grid_N = 256;

    double alpha = 0.8;
    double p = 2.0;
    double T = 1.0;

    double q = 4.0;
    double a = 1.0;
    double mu = 3.5;
    double r = 1.0;
    double c_growth = 1.0;
    ForcingKind forcing = ForcingKind::None;
    double forcing_amp = 0.0;

    double tol_grad = 1e-6;
    int max_iters = 20000;
    int path_points = 16;
    double step_init = 1.0;
    double armijo_c = 1e-4;
    double backtrack_factor = 0.5;
    std::uint64_t seed = 42;

    StudyKind study = StudyKind::Manufactured;
    int verify_samples = 200;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + v);
    }
}

inline long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer value for '" + key + "': " + v);
    }
}

}  // namespace detail

inline std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::MountainPass: return "mountain_pass";
        case RunMode::Convex: return "convex";
        case RunMode::Verify: return "verify";
        case RunMode::ConvergenceStudy: return "convergence_study";
    }
    return "?";
}

inline std::string to_string(ForcingKind f) { return f == ForcingKind::None ? "none" : "sin"; }

inline std::string to_string(StudyKind s) {
    switch (s) {
        case StudyKind::Manufactured: return "manufactured";
        case StudyKind::Identities: return "identities";
        case StudyKind::Constants: return "constants";
    }
    return "?";
}

inline std::string serialize(const RunConfig& c) {
    std::ostringstream out;
    out << "mode = " << to_string(c.mode) << "\n";
    out << "output_dir = " << c.output_dir << "\n";
    out << "grid.N = " << c.grid_N << "\n";
    out << "params.alpha = " << detail::fmt17(c.alpha) << "\n";
    out << "params.p = " << detail::fmt17(c.p) << "\n";
    out << "params.T = " << detail::fmt17(c.T) << "\n";
    out << "nl.q = " << detail::fmt17(c.q) << "\n";
    out << "nl.a = " << detail::fmt17(c.a) << "\n";
    out << "nl.mu = " << detail::fmt17(c.mu) << "\n";
    out << "nl.r = " << detail::fmt17(c.r) << "\n";
    out << "nl.C_growth = " << detail::fmt17(c.c_growth) << "\n";
    out << "nl.forcing = " << to_string(c.forcing) << "\n";
    out << "nl.forcing_amp = " << detail::fmt17(c.forcing_amp) << "\n";
    out << "solver.tol_grad = " << detail::fmt17(c.tol_grad) << "\n";
    out << "solver.max_iters = " << c.max_iters << "\n";
    out << "solver.path_points = " << c.path_points << "\n";
    out << "solver.step_init = " << detail::fmt17(c.step_init) << "\n";
    out << "solver.armijo_c = " << detail::fmt17(c.armijo_c) << "\n";
    out << "solver.backtrack_factor = " << detail::fmt17(c.backtrack_factor) << "\n";
    out << "solver.seed = " << c.seed << "\n";
    out << "study.kind = " << to_string(c.study) << "\n";
    out << "verify.samples = " << c.verify_samples << "\n";
    return out.str();
}

inline RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));

        if (key == "mode") {
            if (val == "mountain_pass") c.mode = RunMode::MountainPass;
            else if (val == "convex") c.mode = RunMode::Convex;
            else if (val == "verify") c.mode = RunMode::Verify;
            else if (val == "convergence_study") c.mode = RunMode::ConvergenceStudy;
            else throw std::invalid_argument("config: unknown mode '" + val + "'");
        } else if (key == "output_dir") c.output_dir = val;
        else if (key == "grid.N") c.grid_N = static_cast<int>(detail::parse_int(key, val));
        else if (key == "params.alpha") c.alpha = detail::parse_double(key, val);
        else if (key == "params.p") c.p = detail::parse_double(key, val);
        else if (key == "params.T") c.T = detail::parse_double(key, val);
        else if (key == "nl.q") c.q = detail::parse_double(key, val);
        else if (key == "nl.a") c.a = detail::parse_double(key, val);
        else if (key == "nl.mu") c.mu = detail::parse_double(key, val);
        else if (key == "nl.r") c.r = detail::parse_double(key, val);
        else if (key == "nl.C_growth") c.c_growth = detail::parse_double(key, val);
        else if (key == "nl.forcing") {
            if (val == "none") c.forcing = ForcingKind::None;
            else if (val == "sin") c.forcing = ForcingKind::Sin;
            else throw std::invalid_argument("config: unknown forcing '" + val + "'");
        } else if (key == "nl.forcing_amp") c.forcing_amp = detail::parse_double(key, val);
        else if (key == "solver.tol_grad") c.tol_grad = detail::parse_double(key, val);
        else if (key == "solver.max_iters") c.max_iters = static_cast<int>(detail::parse_int(key, val));
        else if (key == "solver.path_points") c.path_points = static_cast<int>(detail::parse_int(key, val));
        else if (key == "solver.step_init") c.step_init = detail::parse_double(key, val);
        else if (key == "solver.armijo_c") c.armijo_c = detail::parse_double(key, val);
        else if (key == "solver.backtrack_factor") c.backtrack_factor = detail::parse_double(key, val);
        else if (key == "solver.seed") c.seed = static_cast<std::uint64_t>(detail::parse_int(key, val));
        else if (key == "study.kind") {
            if (val == "manufactured") c.study = StudyKind::Manufactured;
            else if (val == "identities") c.study = StudyKind::Identities;
            else if (val == "constants") c.study = StudyKind::Constants;
            else throw std::invalid_argument("config: unknown study kind '" + val + "'");
        } else if (key == "verify.samples") c.verify_samples = static_cast<int>(detail::parse_int(key, val));
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace fracmp
