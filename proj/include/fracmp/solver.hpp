#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fracmp/energy.hpp"
#include "fracmp/fracops.hpp"
#include "fracmp/grid.hpp"
#include "fracmp/model.hpp"
#include "fracmp/space.hpp"

namespace fracmp {

struct GeometryEstimate {
    double rho;   // sphere radius with I >= beta on it
    double beta;  // energy floor on the sphere
    DirichletGridFunction u0;  // unit-seminorm direction
    DirichletGridFunction e;   // far point with I(e) < 0
    double energy_e;
};

struct SolverOptions {
    double tol_grad = 1e-6;
    int max_iters = 20000;
    int path_points = 16;  // K; the path holds K+1 states
    double step_init = 1.0;
    double armijo_c = 1e-4;
    double backtrack_factor = 0.5;
    std::uint64_t seed = 42;

    void validate() const {
        if (!(tol_grad > 0.0)) throw std::invalid_argument("SolverOptions: tol_grad must be > 0");
        if (max_iters < 1) throw std::invalid_argument("SolverOptions: max_iters must be >= 1");
        if (path_points < 8) throw std::invalid_argument("SolverOptions: path_points must be >= 8");
        if (!(step_init > 0.0)) throw std::invalid_argument("SolverOptions: step_init must be > 0");
        if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw std::invalid_argument("SolverOptions: armijo_c in (0,1)");
        if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
            throw std::invalid_argument("SolverOptions: backtrack_factor in (0,1)");
    }
};

enum class SolveStatus { Converged, MaxIters, PathCollapse };

struct StepTrace {
    int iter;
    int path_index;
    double energy_before;
    double energy_after;
    double grad_norm;
};

struct SolveReport {
    DirichletGridFunction u_star;
    EnergyBreakdown breakdown;
    double energy_value;
    double grad_norm;
    int iterations;
    SolveStatus status;
    std::vector<double> path_profile;          // I along the final path
    std::vector<double> iterate_norm_history;  // seminorm of each accepted iterate
    std::optional<GeometryEstimate> geometry;
    std::vector<StepTrace> trace;
};

struct PsDiagnostic {
    double coefficient;      // 1/p - 1/mu; positive under the superlinearity hypothesis
    double max_over_median;  // of the iterate seminorm history
    bool bounded;
    bool hypothesis_ok;
};

namespace detail {

// Gram matrix of the alpha-seminorm inner product on interior nodes,
// factored once per grid. Descent directions are Riesz representatives of
// the gradient in this metric; for alpha = 1, p = 2 that makes the convex
// mode an exact Newton step.
class SeminormMetric {
public:
    SeminormMetric(const Grid& grid, FracOrder order) : n_(grid.intervals() - 1) {
        const auto rows = working_deriv_rows(grid, order);
        const auto wts = working_deriv_weights(grid);
        const int N = grid.intervals();
        Eigen::MatrixXd B(N, n_);
        for (int r = 1; r <= N; ++r)
            for (int c = 1; c < N; ++c) B(r - 1, c - 1) = rows[r][c];
        Eigen::VectorXd w(N);
        for (int r = 1; r <= N; ++r) w(r - 1) = wts[r];
        Eigen::MatrixXd M = B.transpose() * w.asDiagonal() * B;
        llt_.compute(M);
        if (llt_.info() != Eigen::Success)
            throw std::runtime_error("SeminormMetric: Gram matrix factorization failed");
    }

    // Solves M d = g on the interior; endpoint entries of the result are 0.
    GridFunction apply_inverse(const GridFunction& g) const {
        Eigen::VectorXd rhs(n_);
        for (int i = 0; i < n_; ++i) rhs(i) = g[static_cast<std::size_t>(i) + 1];
        Eigen::VectorXd d = llt_.solve(rhs);
        std::vector<double> out(g.size(), 0.0);
        for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i) + 1] = d(i);
        return GridFunction(g.grid(), std::move(out));
    }

private:
    int n_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

inline DirichletGridFunction axpy(const DirichletGridFunction& u, double s, const GridFunction& d) {
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = u[i] + s * d[i];
    v.front() = 0.0;
    v.back() = 0.0;
    return DirichletGridFunction::from_values(u.grid(), std::move(v));
}

inline DirichletGridFunction scaled(const DirichletGridFunction& u, double s) {
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * u[i];
    return DirichletGridFunction::from_values(u.grid(), std::move(v));
}

struct ArmijoOutcome {
    DirichletGridFunction next;
    double energy_next;
    double step;
    bool accepted;
};

// Backtracking line search along -dir from u; sufficient decrease measured
// against the euclidean pairing <g, dir> (positive since dir = M^{-1} g).
inline ArmijoOutcome armijo(const DirichletGridFunction& u, double energy_u, const GridFunction& g,
                            const GridFunction& dir, const FracParams& params, const Nonlinearity& nl,
                            const SolverOptions& opts, double first_step) {
    const double slope = inner(g, dir);
    if (!(slope > 0.0)) return {u, energy_u, 0.0, false};
    double s = first_step;
    for (int k = 0; k < 80; ++k) {
        DirichletGridFunction cand = axpy(u, -s, dir);
        const double ec = energy(cand, params, nl).I;
        if (ec <= energy_u - opts.armijo_c * s * slope) return {std::move(cand), ec, s, true};
        s *= opts.backtrack_factor;
    }
    return {u, energy_u, 0.0, false};
}

// Maximizer of sigma -> I(sigma * dir) on [0, hi] by ternary search; the ray
// energy of the pure-power family rises once and then falls.
inline double ray_energy_argmax(const DirichletGridFunction& dir, double hi, const FracParams& params,
                                const Nonlinearity& nl) {
    double lo = 0.0;
    for (int k = 0; k < 80; ++k) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (energy(scaled(dir, m1), params, nl).I < energy(scaled(dir, m2), params, nl).I)
            lo = m1;
        else
            hi = m2;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// Mountain-pass geometry: the sphere radius rho solves
// 1/(2p) - C rho^{q-p} = 1/(4p) with C assembled from the weight bound and
// the verified embedding constants, beta = rho^p/(4p), u0 is the normalized
// first sine mode and e = sigma u0 with sigma doubled until I(e) < 0.
inline GeometryEstimate estimate_geometry(const Grid& grid, const FracParams& params, const Nonlinearity& nl) {
    if (nl.has_forcing()) throw std::invalid_argument("estimate_geometry: requires the pure-power family");
    nl.validate_against_p(params.p);
    if (params.alpha - 1.0 / params.p < 1e-6)
        throw std::invalid_argument("estimate_geometry: alpha too close to 1/p (embedding constants degenerate)");

    const double p = params.p;
    const double q = nl.growth_exponent();
    const double cp = poincare_constant(params);
    const double ci = sup_embedding_constant(params);
    const double C = (nl.a_max() / q) * std::pow(ci, q - p) * std::pow(cp, p);
    const double rho = std::pow(1.0 / (4.0 * p * C), 1.0 / (q - p));
    const double beta = std::pow(rho, p) / (4.0 * p);

    constexpr double pi = 3.14159265358979323846;
    DirichletGridFunction bump =
        DirichletGridFunction::clamp(grid, [&](double t) { return std::sin(pi * t / grid.length()); });
    const double norm0 = seminorm(bump, params);
    DirichletGridFunction u0 = detail::scaled(bump, 1.0 / norm0);

    double sigma = 1.0;
    double energy_e = energy(detail::scaled(u0, sigma), params, nl).I;
    while (energy_e >= 0.0 || sigma < rho) {
        sigma *= 2.0;
        if (sigma > std::ldexp(1.0, 60))
            throw std::runtime_error("estimate_geometry: no sigma <= 2^60 with negative ray energy; "
                                     "nonlinearity violates the superlinearity hypothesis");
        energy_e = energy(detail::scaled(u0, sigma), params, nl).I;
    }
    DirichletGridFunction e = detail::scaled(u0, sigma);
    return {rho, beta, std::move(u0), std::move(e), energy_e};
}

// Critical point by path deformation: keep K+1 states from 0 to e, relax the
// path maximizer by a preconditioned Armijo descent step, redistribute the
// states to uniform seminorm arc length every 10 iterations, and stop when
// the dual-norm gradient at the maximizer clears the tolerance.
inline SolveReport mountain_pass_solve(const Grid& grid, const FracParams& params, const Nonlinearity& nl,
                                       const SolverOptions& opts,
                                       std::optional<std::vector<DirichletGridFunction>> initial_path = {}) {
    opts.validate();
    GeometryEstimate geo = estimate_geometry(grid, params, nl);
    const int K = opts.path_points;
    const detail::SeminormMetric metric(grid, params.order());

    std::vector<DirichletGridFunction> path;
    if (initial_path) {
        if (static_cast<int>(initial_path->size()) != K + 1)
            throw std::invalid_argument("mountain_pass_solve: initial path must hold path_points+1 states");
        path = std::move(*initial_path);
    } else {
        // Straight ray to e, with norms pulled halfway toward the ray's
        // energy maximizer so the initial maximum starts near the pass.
        const double sigma_e = seminorm(geo.e, params);
        const double sigma_star = detail::ray_energy_argmax(geo.u0, sigma_e, params, nl);
        path.reserve(static_cast<std::size_t>(K) + 1);
        path.push_back(DirichletGridFunction::zero(grid));
        for (int j = 1; j < K; ++j) {
            const double ray = sigma_e * static_cast<double>(j) / K;
            path.push_back(detail::scaled(geo.u0, 0.5 * ray + 0.5 * sigma_star));
        }
        path.push_back(geo.e);
    }

    std::vector<double> path_energy(path.size());
    for (std::size_t j = 0; j < path.size(); ++j) path_energy[j] = energy(path[j], params, nl).I;

    const auto segment_length = [&](int j) {
        std::vector<double> d(path[j].size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = path[j + 1][i] - path[j][i];
        return seminorm(DirichletGridFunction::from_values(grid, std::move(d)), params);
    };

    // Repositions the states with indices in (lo, hi) to uniform seminorm
    // arc length along the current polyline piece from lo to hi; lo and hi
    // themselves stay put.
    const auto respline = [&](int lo, int hi) {
        const int segs = hi - lo;
        if (segs < 2) return;
        std::vector<double> len(static_cast<std::size_t>(segs));
        double total = 0.0;
        for (int j = 0; j < segs; ++j) {
            len[j] = segment_length(lo + j);
            total += len[j];
        }
        if (total <= 0.0) return;
        std::vector<DirichletGridFunction> fresh;
        fresh.reserve(static_cast<std::size_t>(segs) - 1);
        double cum = 0.0;
        int seg = 0;
        for (int i = 1; i < segs; ++i) {
            const double target = total * static_cast<double>(i) / segs;
            while (seg < segs - 1 && cum + len[seg] < target) cum += len[seg++];
            const double lambda = (len[seg] > 0.0) ? (target - cum) / len[seg] : 0.0;
            std::vector<double> v(path[lo + seg].size());
            for (std::size_t m = 0; m < v.size(); ++m)
                v[m] = path[lo + seg][m] + lambda * (path[lo + seg + 1][m] - path[lo + seg][m]);
            fresh.push_back(DirichletGridFunction::from_values(grid, std::move(v)));
        }
        for (int i = 1; i < segs; ++i) {
            path[lo + i] = std::move(fresh[static_cast<std::size_t>(i) - 1]);
            path_energy[lo + i] = energy(path[lo + i], params, nl).I;
        }
    };

    const auto redistribute = [&]() { respline(0, K); };

    SolveStatus status = SolveStatus::MaxIters;
    std::vector<double> norm_history;
    std::vector<StepTrace> trace;
    int iterations = 0;
    double warm_step = opts.step_init;

    DirichletGridFunction best = path[1];
    double best_gn = std::numeric_limits<double>::infinity();

    for (int it = 1; it <= opts.max_iters; ++it) {
        iterations = it;
        int jmax = 0;
        for (int j = 1; j <= K; ++j)
            if (path_energy[j] > path_energy[jmax]) jmax = j;
        if (jmax == 0 || jmax == K) {
            status = SolveStatus::PathCollapse;
            break;
        }

        const GridFunction g = gradient(path[jmax], params, nl);
        const double gn = gradient_dual_norm(g);
        const double ns = seminorm(path[jmax], params);
        const bool nontrivial = ns >= 0.5 * geo.rho && path_energy[jmax] >= geo.beta - opts.tol_grad;
        if (nontrivial && gn < best_gn) {
            best_gn = gn;
            best = path[jmax];
        }
        if (gn <= opts.tol_grad && nontrivial) {
            status = SolveStatus::Converged;
            best = path[jmax];
            best_gn = gn;
            break;
        }

        // Deformation sweep: the maximizer and every other interior state
        // still above the zero level take one Armijo descent step. Relaxing
        // only the maximizer stalls: the reparameterization keeps feeding
        // the height of its never-descended neighbors back into the ridge.
        const GridFunction dir = metric.apply_inverse(g);
        const auto step = detail::armijo(path[jmax], path_energy[jmax], g, dir, params, nl, opts,
                                         std::min(opts.step_init, 4.0 * warm_step));
        if (!step.accepted) {
            status = SolveStatus::MaxIters;
            break;
        }
        warm_step = step.step;
        trace.push_back({it, jmax, path_energy[jmax], step.energy_next, gn});
        path[jmax] = step.next;
        path_energy[jmax] = step.energy_next;
        norm_history.push_back(seminorm(path[jmax], params));

        for (int j = 1; j < K; ++j) {
            if (j == jmax || !(path_energy[j] > 0.0)) continue;
            const GridFunction gj = gradient(path[j], params, nl);
            const GridFunction dj = metric.apply_inverse(gj);
            const auto sj = detail::armijo(path[j], path_energy[j], gj, dj, params, nl, opts, opts.step_init);
            if (sj.accepted) {
                path[j] = sj.next;
                path_energy[j] = sj.energy_next;
            }
        }

        if (it % 10 == 0) redistribute();
    }

    const EnergyBreakdown bd = energy(best, params, nl);
    const double gn_final = gradient_dual_norm(gradient(best, params, nl));
    SolveReport report{std::move(best), bd,       bd.I,        gn_final, iterations,
                       status,          path_energy, norm_history, std::move(geo), std::move(trace)};
    return report;
}

// Convex verification mode: f(t, u) = g(t) makes I strictly convex and
// coercive with a unique minimizer; preconditioned Armijo descent from zero.
inline SolveReport convex_solve(const Grid& grid, const FracParams& params, const Nonlinearity& nl,
                                const SolverOptions& opts,
                                std::optional<DirichletGridFunction> start = {}) {
    opts.validate();
    if (!nl.is_forcing_only())
        throw std::invalid_argument("convex_solve: requires the forcing-only nonlinearity");
    const detail::SeminormMetric metric(grid, params.order());

    DirichletGridFunction u = start ? std::move(*start) : DirichletGridFunction::zero(grid);
    double eu = energy(u, params, nl).I;
    std::vector<double> norm_history;
    std::vector<double> energy_history{eu};
    std::vector<StepTrace> trace;
    SolveStatus status = SolveStatus::MaxIters;
    int iterations = 0;
    double gn_final = 0.0;
    double warm_step = opts.step_init;

    for (int it = 1; it <= opts.max_iters; ++it) {
        iterations = it;
        const GridFunction g = gradient(u, params, nl);
        const double gn = gradient_dual_norm(g);
        gn_final = gn;
        if (gn <= opts.tol_grad) {
            status = SolveStatus::Converged;
            break;
        }
        const GridFunction dir = metric.apply_inverse(g);
        const auto step =
            detail::armijo(u, eu, g, dir, params, nl, opts, std::min(opts.step_init, 4.0 * warm_step));
        if (!step.accepted) break;
        warm_step = step.step;
        trace.push_back({it, -1, eu, step.energy_next, gn});
        u = step.next;
        eu = step.energy_next;
        energy_history.push_back(eu);
        norm_history.push_back(seminorm(u, params));
    }

    const EnergyBreakdown bd = energy(u, params, nl);
    SolveReport report{std::move(u), bd,           bd.I,         gn_final, iterations,
                       status,       energy_history, norm_history, std::nullopt, std::move(trace)};
    return report;
}

// Boundedness summary of the iterate norms plus the sign of the coefficient
// (1/p - 1/mu) that makes the superlinearity estimate coercive. Informational.
inline PsDiagnostic ps_diagnostic(const SolveReport& report, const FracParams& params, const Nonlinearity& nl,
                                  double bound_cap = 100.0) {
    const double coeff = 1.0 / params.p - 1.0 / nl.ar_exponent();
    double ratio = 1.0;
    if (!report.iterate_norm_history.empty()) {
        std::vector<double> sorted = report.iterate_norm_history;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        const double mx = sorted.back();
        ratio = (median > 0.0) ? mx / median : (mx > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    }
    return {coeff, ratio, ratio <= bound_cap, coeff > 0.0};
}

}  // namespace fracmp
