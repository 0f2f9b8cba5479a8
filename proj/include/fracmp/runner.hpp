#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fracmp/config.hpp"
#include "fracmp/corpus.hpp"
#include "fracmp/csv.hpp"
#include "fracmp/energy.hpp"
#include "fracmp/fracops.hpp"
#include "fracmp/model.hpp"
#include "fracmp/scalar_ineq.hpp"
#include "fracmp/solver.hpp"
#include "fracmp/space.hpp"

namespace fracmp {

inline constexpr double kPi = 3.14159265358979323846;

inline Grid make_grid(const RunConfig& c) { return Grid(c.T, c.grid_N); }

inline FracParams make_params(const RunConfig& c) { return FracParams(c.alpha, c.p, c.T); }

inline GridFunction make_forcing(const RunConfig& c, const Grid& grid) {
    if (c.forcing != ForcingKind::Sin) throw std::invalid_argument("config: no forcing preset selected");
    return GridFunction::sample(grid, [&](double t) { return c.forcing_amp * std::sin(kPi * t / grid.length()); });
}

inline Nonlinearity make_nonlinearity(const RunConfig& c, const Grid& grid) {
    if (c.mode == RunMode::Convex) {
        if (c.forcing == ForcingKind::None)
            throw std::invalid_argument("config: convex mode requires a forcing preset");
        return Nonlinearity::forcing_only(make_forcing(c, grid));
    }
    if (c.mode == RunMode::MountainPass && c.forcing != ForcingKind::None)
        throw std::invalid_argument("config: mountain-pass mode requires forcing = none");
    return Nonlinearity::pure_power(c.q, c.a, c.mu, c.r, c.c_growth);
}

inline SolverOptions make_solver_options(const RunConfig& c) {
    SolverOptions o;
    o.tol_grad = c.tol_grad;
    o.max_iters = c.max_iters;
    o.path_points = c.path_points;
    o.step_init = c.step_init;
    o.armijo_c = c.armijo_c;
    o.backtrack_factor = c.backtrack_factor;
    o.seed = c.seed;
    o.validate();
    return o;
}

namespace detail {

inline std::vector<DirichletGridFunction> sine_test_basis(const Grid& grid, int count) {
    std::vector<DirichletGridFunction> basis;
    basis.reserve(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k)
        basis.push_back(
            DirichletGridFunction::clamp(grid, [&](double t) { return std::sin(k * kPi * t / grid.length()); }));
    return basis;
}

// Least-squares slope of log(y) against log(1/N): positive = converging.
inline double convergence_slope(const std::vector<double>& Ns, const std::vector<double>& errs) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        if (!(errs[i] > 0.0)) continue;  // exact-to-roundoff entries carry no rate information
        const double x = -std::log(Ns[i]);
        const double y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return std::numeric_limits<double>::infinity();
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

inline int env_thread_cap() {
    if (const char* s = std::getenv("FRACMP_THREADS")) {
        const int v = std::atoi(s);
        if (v >= 1) return std::min(v, 64);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
}

inline void parallel_for(int tasks, const std::function<void(int)>& body) {
    const int threads = std::min(env_thread_cap(), tasks);
    if (threads <= 1) {
        for (int i = 0; i < tasks; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < tasks; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

inline const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIters: return "max_iterations";
        case SolveStatus::PathCollapse: return "path_collapse";
    }
    return "?";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

inline int cmd_solve(const RunConfig& cfg) {
    Grid grid(1.0, 2);
    FracParams params(1.0, 2.0, 1.0);
    try {
        if (cfg.mode != RunMode::MountainPass && cfg.mode != RunMode::Convex)
            throw std::invalid_argument("solve: config mode must be mountain_pass or convex");
        grid = make_grid(cfg);
        params = make_params(cfg);
    } catch (const std::exception& ex) {
        std::cerr << "validation error: " << ex.what() << "\n";
        return 1;
    }

    try {
        const Nonlinearity nl = make_nonlinearity(cfg, grid);
        const SolverOptions opts = make_solver_options(cfg);
        if (cfg.mode == RunMode::MountainPass) nl.validate_against_p(params.p);

        const SolveReport report = (cfg.mode == RunMode::MountainPass)
                                       ? mountain_pass_solve(grid, params, nl, opts)
                                       : convex_solve(grid, params, nl, opts);

        std::filesystem::create_directories(cfg.output_dir);
        const std::filesystem::path dir(cfg.output_dir);

        const GridFunction du = frac_deriv_left(report.u_star, params.order());
        std::vector<std::vector<double>> sol_rows;
        for (std::size_t i = 0; i < report.u_star.size(); ++i)
            sol_rows.push_back({grid.node(static_cast<int>(i)), report.u_star[i], du[i]});
        write_csv(dir / "solution.csv", {"t", "u", "Dalpha_u"}, sol_rows);

        std::vector<std::vector<double>> prof_rows;
        for (std::size_t j = 0; j < report.path_profile.size(); ++j)
            prof_rows.push_back({static_cast<double>(j), report.path_profile[j]});
        write_csv(dir / "path_profile.csv", {"index", "energy"}, prof_rows);

        const auto basis = detail::sine_test_basis(grid, 16);
        double worst_weak = 0.0;
        for (const auto& phi : basis)
            worst_weak = std::max(worst_weak, std::abs(weak_residual(report.u_star, phi, params, nl)));

        std::ostringstream rep;
        rep << "mode = " << to_string(cfg.mode) << "\n";
        rep << "status = " << detail::status_name(report.status) << "\n";
        rep << "alpha = " << detail::fmt17(params.alpha) << ", p = " << detail::fmt17(params.p)
            << ", T = " << detail::fmt17(params.T) << ", N = " << grid.intervals() << "\n";
        rep << "iterations = " << report.iterations << "\n";
        rep << "energy J = " << detail::fmt17(report.breakdown.J) << "\n";
        rep << "energy H = " << detail::fmt17(report.breakdown.H) << "\n";
        rep << "energy I = " << detail::fmt17(report.breakdown.I) << "\n";
        rep << "grad_dual_norm = " << detail::fmt17(report.grad_norm) << "\n";
        rep << "seminorm(u) = " << detail::fmt17(seminorm(report.u_star, params)) << "\n";
        rep << "sup_norm(u) = " << detail::fmt17(sup_norm(report.u_star.fn())) << "\n";
        rep << "max weak residual over 16 sine test functions = " << detail::fmt17(worst_weak) << "\n";
        if (report.geometry) {
            rep << "geometry rho = " << detail::fmt17(report.geometry->rho) << "\n";
            rep << "geometry beta = " << detail::fmt17(report.geometry->beta) << "\n";
            rep << "geometry seminorm(e) = " << detail::fmt17(seminorm(report.geometry->e, params)) << "\n";
            rep << "geometry I(e) = " << detail::fmt17(report.geometry->energy_e) << "\n";
            const PsDiagnostic ps = ps_diagnostic(report, params, nl);
            rep << "ps coefficient (1/p - 1/mu) = " << detail::fmt17(ps.coefficient) << "\n";
            rep << "ps iterate norm max/median = " << detail::fmt17(ps.max_over_median) << "\n";
            rep << "ps bounded = " << (ps.bounded ? "yes" : "no") << "\n";
            rep << "ps hypothesis ok = " << (ps.hypothesis_ok ? "yes" : "no") << "\n";
        }
        write_text_atomic(dir / "report.txt", rep.str());

        return report.status == SolveStatus::Converged ? 0 : 2;
    } catch (const std::exception& ex) {
        std::cerr << "validation error: " << ex.what() << "\n";
        return 1;
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyRow {
    std::string name;
    double value;     // residual, margin, or worst ratio
    double bound;     // pass when value <= bound (or >= for margins, see sense)
    bool larger_ok;   // true: pass when value >= bound
    bool passed;
};

inline std::vector<VerifyRow> run_verify_battery(const RunConfig& cfg) {
    std::vector<VerifyRow> rows;
    const auto add_le = [&](const std::string& name, double value, double bound) {
        rows.push_back({name, value, bound, false, value <= bound});
    };
    const auto add_ge = [&](const std::string& name, double value, double bound) {
        rows.push_back({name, value, bound, true, value >= bound});
    };

    const Grid grid = make_grid(cfg);
    const FracParams params = make_params(cfg);
    Rng rng(cfg.seed);

    // Gamma function spot values.
    add_le("gamma(0.5) vs sqrt(pi)", std::abs(gamma_fn(0.5) - std::sqrt(kPi)), 1e-12);
    add_le("gamma(5) vs 4!", std::abs(gamma_fn(5.0) - 24.0), 1e-10);

    // Grunwald-Letnikov weight shape.
    {
        const auto gl = ConvolutionWeights::grunwald_letnikov(FracOrder(0.5), 256);
        bool ok = gl.w[0] == 1.0;
        double partial = gl.w[0], prev_partial = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < gl.w.size(); ++k) {
            ok = ok && gl.w[k] < 0.0;
            partial += gl.w[k];
            ok = ok && partial > 0.0 && partial < prev_partial + 1e-18;
            prev_partial = partial;
        }
        rows.push_back({"GL weights signs and partial sums", ok ? 1.0 : 0.0, 1.0, true, ok});
    }

    // Fractional power rules on u(t) = t.
    {
        const Grid g(1.0, 512);
        const GridFunction u = GridFunction::sample(g, [](double t) { return t; });
        const GridFunction iu = frac_integral_left(u, FracOrder(0.5));
        const double scale = gamma_fn(2.0) / gamma_fn(2.5);
        double worst = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            worst = std::max(worst, std::abs(iu[i] - scale * std::pow(g.node(static_cast<int>(i)), 1.5)));
        add_le("power rule: I^0.5 t", worst, 1e-3);

        const GridFunction duf = frac_deriv_left(u, FracOrder(0.5));
        double worst_d = 0.0;
        for (std::size_t i = 1; i < u.size(); ++i)
            worst_d = std::max(worst_d,
                               std::abs(duf[i] - std::pow(g.node(static_cast<int>(i)), 0.5) / gamma_fn(1.5)));
        add_le("power rule: D^0.5 t", worst_d, 1e-10);
    }

    // Identity residual decay under refinement.
    {
        const auto residuals = [&](int N) {
            const Grid g(params.T, N);
            const GridFunction u =
                GridFunction::sample(g, [&](double t) { return std::sin(kPi * t / params.T); });
            const DirichletGridFunction ud =
                DirichletGridFunction::clamp(g, [&](double t) { return t * (params.T - t); });
            const GridFunction v =
                GridFunction::sample(g, [&](double t) { return std::sin(kPi * t / params.T); });
            const double li = check_left_inverse(u, FracOrder(0.6));
            const double sg = check_semigroup(u, FracOrder(0.25), FracOrder(0.25));
            const double ibp = check_integration_by_parts(ud, v, FracOrder(0.75));
            return std::array<double, 3>{li, sg, ibp};
        };
        const auto coarse = residuals(128);
        const auto fine = residuals(256);
        add_ge("left-inverse residual ratio 128/256", coarse[0] / fine[0], 1.2);
        add_ge("semigroup residual ratio 128/256", coarse[1] / fine[1], 1.2);
        add_ge("integration-by-parts residual ratio 128/256", coarse[2] / fine[2], 1.2);
    }

    // Embedding inequalities on the random corpus.
    {
        double worst_p = std::numeric_limits<double>::infinity();
        double worst_s = std::numeric_limits<double>::infinity();
        for (int i = 0; i < cfg.verify_samples; ++i) {
            DirichletGridFunction u = random_dirichlet(grid, rng);
            const double ns = seminorm(u, params);
            if (ns == 0.0) continue;
            u = detail::scaled(u, 1.0 / ns);
            worst_p = std::min(worst_p, check_poincare(u, params));
            worst_s = std::min(worst_s, check_sup_embedding(u, params));
        }
        add_ge("poincare margin (unit seminorm corpus)", worst_p, -embedding_tolerance(grid.intervals()));
        add_ge("sup-embedding margin (unit seminorm corpus)", worst_s, -embedding_tolerance(grid.intervals()));
    }

    // Scalar Clarkson inequalities.
    {
        const double ps[] = {1.1, 1.5, 2.0, 3.0, 10.0};
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < cfg.verify_samples * 10; ++i) {
            const double z = rng.uniform(-10.0, 10.0);
            const double w = rng.uniform(-10.0, 10.0);
            const double p = ps[i % 5];
            const auto c = clarkson_pointwise(z, w, p);
            worst = std::min(worst, c.rhs - c.lhs);
        }
        add_ge("clarkson rhs - lhs", worst, -1e-12);
    }

    // Uniform convexity gap on random normalized pairs.
    {
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < std::max(10, cfg.verify_samples / 4); ++i) {
            const DirichletGridFunction u = random_dirichlet(grid, rng);
            const DirichletGridFunction v = random_dirichlet(grid, rng);
            if (seminorm(u, params) == 0.0 || seminorm(v, params) == 0.0) continue;
            worst = std::min(worst, convexity_midpoint_gap(u, v, params));
        }
        add_ge("convexity midpoint gap", worst, -1e-12);
    }

    // Hypothesis checkers for the nonlinearity family.
    {
        const Nonlinearity nl = (cfg.forcing == ForcingKind::None)
                                    ? Nonlinearity::pure_power(cfg.q, cfg.a, cfg.mu, cfg.r, cfg.c_growth)
                                    : Nonlinearity::forcing_only(make_forcing(cfg, grid));
        std::vector<std::pair<double, double>> samples;
        for (int i = 0; i < cfg.verify_samples * 10; ++i)
            samples.push_back({rng.uniform(0.0, params.T), rng.uniform(-50.0, 50.0)});
        add_le("(f1) worst |f| / C(1+|xi|^{q-1})", check_f1(nl, samples), 1.0);

        std::vector<std::pair<double, double>> big;
        for (const auto& s : samples)
            if (std::abs(s.second) >= (cfg.forcing == ForcingKind::None ? cfg.r : 1.0)) big.push_back(s);
        const F2Report f2 = check_f2(nl, big);
        rows.push_back({"(f2) AR slack and potential positivity", f2.min_relative_slack, -1e-12, true, f2.passed});
        const F3Report f3 = check_f3(nl, params.p);
        rows.push_back({"(f3) limit of f/|xi|^{p-1} at 0", f3.limit_estimate, 1e-6, false, f3.passed});
    }

    // Gradient versus central finite differences of the discrete energy.
    {
        const Nonlinearity nl = Nonlinearity::pure_power(cfg.q, cfg.a, cfg.mu, cfg.r, cfg.c_growth);
        const Grid g(params.T, 96);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const DirichletGridFunction u = random_dirichlet(g, rng);
            const DirichletGridFunction v = random_dirichlet(g, rng);
            const GridFunction gr = gradient(u, params, nl);
            const double pairing = inner(gr, v.fn());
            const double fd_h = 1e-6;
            const double ip = energy(detail::axpy(u, fd_h, v.fn()), params, nl).I;
            const double im = energy(detail::axpy(u, -fd_h, v.fn()), params, nl).I;
            const double fd = (ip - im) / (2.0 * fd_h);
            worst = std::max(worst, std::abs(pairing - fd) / (1.0 + std::abs(pairing)));
        }
        add_le("gradient vs central differences", worst, 1e-5);

        // Euler identity <g, u> = p J - int f(t,u) u dt.
        const DirichletGridFunction u = random_dirichlet(g, rng);
        const GridFunction gr = gradient(u, params, nl);
        const EnergyBreakdown eb = energy(u, params, nl);
        const auto w = trapezoid_weights(g);
        double fu = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) fu += w[i] * nl.f(g.node(static_cast<int>(i)), u[i]) * u[i];
        add_le("euler identity residual", std::abs(inner(gr, u.fn()) - (params.p * eb.J - fu)),
               1e-8 * (1.0 + std::abs(params.p * eb.J)));
    }

    // Scalar inequality suites with the frozen constants.
    {
        double worst_cont = std::numeric_limits<double>::infinity();
        double worst_mono = std::numeric_limits<double>::infinity();
        const double ps[] = {1.1, 1.5, 2.0, 3.0, 10.0};
        for (int i = 0; i < cfg.verify_samples * 10; ++i) {
            const double z = rng.uniform(-5.0, 5.0);
            const double y = rng.uniform(-5.0, 5.0);
            const double p = ps[i % 5];
            const auto c = flux_continuity(z, y, p);
            worst_cont = std::min(worst_cont, c.rhs - c.lhs);
            const auto m = strong_monotonicity(z, y, p);
            worst_mono = std::min(worst_mono, m.rhs - m.lhs);
        }
        add_ge("flux continuity margin", worst_cont, -1e-12);
        add_ge("strong monotonicity margin", worst_mono, -1e-12);
    }

    return rows;
}

inline int cmd_verify(const RunConfig& cfg) {
    std::vector<VerifyRow> rows;
    try {
        rows = run_verify_battery(cfg);
    } catch (const std::exception& ex) {
        std::cerr << "validation error: " << ex.what() << "\n";
        return 1;
    }

    std::ostringstream rep;
    bool all = true;
    for (const auto& r : rows) {
        all = all && r.passed;
        rep << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  value=" << detail::fmt17(r.value)
            << (r.larger_ok ? "  >=  " : "  <=  ") << detail::fmt17(r.bound) << "\n";
    }
    rep << (all ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << "\n";
    std::cout << rep.str();

    try {
        std::filesystem::create_directories(cfg.output_dir);
        write_text_atomic(std::filesystem::path(cfg.output_dir) / "report.txt", rep.str());
    } catch (const std::exception& ex) {
        std::cerr << "output error: " << ex.what() << "\n";
        return 1;
    }
    return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// converge
// ---------------------------------------------------------------------------

inline int cmd_converge(const RunConfig& cfg) {
    const std::vector<int> Ns = {64, 128, 256, 512, 1024};
    std::vector<double> errs(Ns.size(), 0.0);
    bool rate_contract = true;

    try {
        const FracParams params = make_params(cfg);
        switch (cfg.study) {
            case StudyKind::Manufactured: {
                if (params.alpha != 1.0)
                    throw std::invalid_argument("converge: the manufactured study requires alpha = 1");
                if (cfg.forcing != ForcingKind::Sin)
                    throw std::invalid_argument("converge: the manufactured study requires forcing = sin");
                detail::parallel_for(static_cast<int>(Ns.size()), [&](int i) {
                    const Grid g(params.T, Ns[static_cast<std::size_t>(i)]);
                    const Nonlinearity nl = Nonlinearity::forcing_only(make_forcing(cfg, g));
                    SolverOptions opts = make_solver_options(cfg);
                    const SolveReport rep = convex_solve(g, params, nl, opts);
                    const double scale = cfg.forcing_amp * std::pow(params.T / kPi, 2.0);
                    double worst = 0.0;
                    for (std::size_t m = 0; m < rep.u_star.size(); ++m) {
                        const double exact = scale * std::sin(kPi * g.node(static_cast<int>(m)) / params.T);
                        worst = std::max(worst, std::abs(rep.u_star[m] - exact));
                    }
                    errs[static_cast<std::size_t>(i)] = worst;
                });
                break;
            }
            case StudyKind::Identities: {
                detail::parallel_for(static_cast<int>(Ns.size()), [&](int i) {
                    const Grid g(params.T, Ns[static_cast<std::size_t>(i)]);
                    const DirichletGridFunction u =
                        DirichletGridFunction::clamp(g, [&](double t) { return t * (params.T - t); });
                    const GridFunction v =
                        GridFunction::sample(g, [&](double t) { return std::sin(kPi * t / params.T); });
                    errs[static_cast<std::size_t>(i)] = check_integration_by_parts(u, v, params.order());
                });
                break;
            }
            case StudyKind::Constants: {
                rate_contract = false;
                for (std::size_t i = 0; i < Ns.size(); ++i) errs[i] = poincare_constant(params);
                break;
            }
        }
    } catch (const std::exception& ex) {
        std::cerr << "validation error: " << ex.what() << "\n";
        return 1;
    }

    std::vector<double> Nd(Ns.begin(), Ns.end());
    const double slope = detail::convergence_slope(Nd, errs);

    try {
        std::filesystem::create_directories(cfg.output_dir);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < Ns.size(); ++i) rows.push_back({Nd[i], errs[i]});
        write_csv(std::filesystem::path(cfg.output_dir) / "convergence.csv", {"N", "error"}, rows);

        std::ostringstream rep;
        rep << "study = " << to_string(cfg.study) << "\n";
        for (std::size_t i = 0; i < Ns.size(); ++i)
            rep << "N = " << Ns[i] << "  error = " << detail::fmt17(errs[i]) << "\n";
        rep << "least-squares slope = " << detail::fmt17(slope) << "\n";
        if (rate_contract)
            rep << "rate contract slope >= 0.9: " << (slope >= 0.9 ? "PASS" : "FAIL") << "\n";
        else
            rep << "rate contract: none (N-independent quantity)\n";
        write_text_atomic(std::filesystem::path(cfg.output_dir) / "report.txt", rep.str());
        std::cout << rep.str();
    } catch (const std::exception& ex) {
        std::cerr << "output error: " << ex.what() << "\n";
        return 1;
    }

    if (rate_contract && !(slope >= 0.9)) return 2;
    return 0;
}

}  // namespace fracmp
