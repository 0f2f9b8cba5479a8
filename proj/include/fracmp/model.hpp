#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracmp/grid.hpp"

namespace fracmp {

namespace detail {

// Positive weight a(t): a constant or node samples with linear interpolation.
class Weight {
public:
    explicit Weight(double c) : constant_(c) {}
    explicit Weight(GridFunction samples) : constant_(0.0), samples_(std::move(samples)) {}

    double at(double t) const {
        if (!samples_) return constant_;
        const Grid& g = samples_->grid();
        const double x = std::clamp(t, 0.0, g.length()) / g.step();
        const int i = std::min(static_cast<int>(x), g.intervals() - 1);
        const double frac = x - i;
        return (*samples_)[i] * (1.0 - frac) + (*samples_)[i + 1] * frac;
    }

    double min() const {
        if (!samples_) return constant_;
        double m = (*samples_)[0];
        for (double v : samples_->values()) m = std::min(m, v);
        return m;
    }

    double max() const {
        if (!samples_) return constant_;
        double m = (*samples_)[0];
        for (double v : samples_->values()) m = std::max(m, v);
        return m;
    }

    bool is_constant() const { return !samples_.has_value(); }
    double constant_value() const { return constant_; }

private:
    double constant_;
    std::optional<GridFunction> samples_;
};

}  // namespace detail

// Carathéodory family f(t,xi) = a(t)|xi|^{q-2} xi, plus an optional additive
// forcing g(t). The forcing variant exists only to manufacture convex test
// problems; it deliberately breaks the superlinear-origin hypothesis and is
// mutually exclusive with claiming it.
class Nonlinearity {
public:
    static Nonlinearity pure_power(double q, double a, double mu, double r, double c_growth) {
        return Nonlinearity(q, detail::Weight(a), mu, r, c_growth, std::nullopt);
    }

    static Nonlinearity pure_power_weighted(double q, GridFunction a, double mu, double r, double c_growth) {
        return Nonlinearity(q, detail::Weight(std::move(a)), mu, r, c_growth, std::nullopt);
    }

    // f(t, xi) = g(t): the convex verification mode (no power term).
    static Nonlinearity forcing_only(GridFunction g) {
        Nonlinearity nl(2.0, detail::Weight(0.0), 2.0, 1.0, 1.0, std::move(g));
        nl.forcing_only_ = true;
        return nl;
    }

    double growth_exponent() const { return q_; }
    double ar_exponent() const { return mu_; }
    double ar_threshold() const { return r_; }
    double growth_constant() const { return c_growth_; }
    double a_min() const { return a_.min(); }
    double a_max() const { return a_.max(); }
    bool constant_weight() const { return a_.is_constant(); }
    double weight_at(double t) const { return a_.at(t); }
    bool has_forcing() const { return forcing_.has_value(); }
    bool is_forcing_only() const { return forcing_only_; }
    const GridFunction& forcing() const { return *forcing_; }

    double f(double t, double xi) const {
        if (!std::isfinite(xi)) throw std::invalid_argument("Nonlinearity::f: non-finite xi");
        double v = 0.0;
        if (!forcing_only_) v = a_.at(t) * std::pow(std::abs(xi), q_ - 2.0) * xi;
        if (forcing_) v += forcing_at(t);
        return v;
    }

    // F(t, xi) = int_0^xi f(t, s) ds, in closed form.
    double F(double t, double xi) const {
        if (!std::isfinite(xi)) throw std::invalid_argument("Nonlinearity::F: non-finite xi");
        double v = 0.0;
        if (!forcing_only_) v = a_.at(t) * std::pow(std::abs(xi), q_) / q_;
        if (forcing_) v += forcing_at(t) * xi;
        return v;
    }

    // Checks q > p, mu > p, and the solver's degeneracy guard q - p >= 1e-3.
    void validate_against_p(double p) const {
        if (forcing_only_) return;
        if (!(q_ > p)) throw std::invalid_argument("Nonlinearity: requires q > p");
        if (!(mu_ > p)) throw std::invalid_argument("Nonlinearity: requires mu > p");
        if (q_ - p < 1e-3) throw std::invalid_argument("Nonlinearity: q - p below degeneracy guard 1e-3");
    }

private:
    Nonlinearity(double q, detail::Weight a, double mu, double r, double c_growth,
                 std::optional<GridFunction> forcing)
        : q_(q), a_(std::move(a)), mu_(mu), r_(r), c_growth_(c_growth), forcing_(std::move(forcing)) {
        if (!forcing_.has_value()) {
            if (!(q_ > 1.0)) throw std::invalid_argument("Nonlinearity: requires q > 1");
            if (!(a_.min() > 0.0)) throw std::invalid_argument("Nonlinearity: requires a(t) >= a_min > 0");
            if (!(mu_ <= q_)) throw std::invalid_argument("Nonlinearity: requires mu <= q");
            if (!(r_ > 0.0)) throw std::invalid_argument("Nonlinearity: requires r > 0");
            if (!(c_growth_ >= a_.max())) throw std::invalid_argument("Nonlinearity: requires C_growth >= max a");
        }
    }

    double forcing_at(double t) const {
        const Grid& g = forcing_->grid();
        const double x = std::clamp(t, 0.0, g.length()) / g.step();
        const int i = std::min(static_cast<int>(x), g.intervals() - 1);
        const double frac = x - i;
        return (*forcing_)[i] * (1.0 - frac) + (*forcing_)[i + 1] * frac;
    }

    double q_;
    detail::Weight a_;
    double mu_;
    double r_;
    double c_growth_;
    std::optional<GridFunction> forcing_;
    bool forcing_only_ = false;
};

// Growth check |f(t,xi)| <= C (1 + |xi|^{q-1}): worst ratio over samples.
inline double check_f1(const Nonlinearity& nl, const std::vector<std::pair<double, double>>& samples) {
    double worst = 0.0;
    for (const auto& [t, xi] : samples) {
        const double bound = nl.growth_constant() * (1.0 + std::pow(std::abs(xi), nl.growth_exponent() - 1.0));
        worst = std::max(worst, std::abs(nl.f(t, xi)) / bound);
    }
    return worst;
}

struct F2Report {
    double min_slack;           // min over samples of xi f - mu F (0 allowed at mu = q)
    double min_relative_slack;  // slack scaled by 1 + |xi f|; the pass criterion
    double min_potential;       // min over samples of F; must clear the 1e-14 floor
    bool passed;
};

// Superlinearity check 0 < mu F(t,xi) <= xi f(t,xi) on |xi| >= r. For the
// pure-power family xi f = q F, so the slack is (q - mu) F and vanishes
// identically at the boundary case mu = q; strictness is waived there and the
// slack sign is judged relative to the pairing's magnitude (the two closed
// forms differ by rounding at large |xi|).
inline F2Report check_f2(const Nonlinearity& nl, const std::vector<std::pair<double, double>>& samples) {
    double min_slack = std::numeric_limits<double>::infinity();
    double min_rel = std::numeric_limits<double>::infinity();
    double min_potential = std::numeric_limits<double>::infinity();
    for (const auto& [t, xi] : samples) {
        if (std::abs(xi) < nl.ar_threshold()) continue;
        const double pairing = xi * nl.f(t, xi);
        const double Fv = nl.F(t, xi);
        const double slack = pairing - nl.ar_exponent() * Fv;
        min_slack = std::min(min_slack, slack);
        min_rel = std::min(min_rel, slack / (1.0 + std::abs(pairing)));
        min_potential = std::min(min_potential, Fv);
    }
    const bool passed = min_rel >= -1e-12 && min_potential > 1e-14;
    return {min_slack, min_rel, min_potential, passed};
}

struct F3Report {
    double limit_estimate;  // last ratio |f| / |xi|^{p-1} on the sequence
    bool monotone;          // non-increasing along the sequence
    bool passed;            // monotone and limit below 1e-6
};

// Sublinearity at the origin: |f(t,xi)| / |xi|^{p-1} along a geometric
// sequence xi -> 0. Fails by design in forcing mode (the ratio diverges).
inline F3Report check_f3(const Nonlinearity& nl, double p, double t = 0.5) {
    double xi = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    double ratio = prev;
    for (int k = 0; k < 400; ++k) {
        const double denom = std::pow(std::abs(xi), p - 1.0);
        if (denom == 0.0) break;  // underflow; the tail adds no information
        ratio = std::abs(nl.f(t, xi)) / denom;
        if (ratio > prev + 1e-15) monotone = false;
        prev = ratio;
        xi *= 0.5;
    }
    return {ratio, monotone, monotone && ratio <= 1e-6};
}

}  // namespace fracmp
