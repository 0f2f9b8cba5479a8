#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fracmp/grid.hpp"

namespace fracmp {

// Deterministic uniform doubles from a seeded engine. The raw-bit mapping
// avoids std::uniform_real_distribution, whose output is implementation
// defined; identical seeds must reproduce identical corpora everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 eng_;
};

struct CorpusOptions {
    int max_modes = 8;        // sine modes sin(k pi t / T)
    double bump_prob = 0.5;   // chance of adding piecewise-linear bumps
    int max_bumps = 3;
};

// Random Dirichlet grid function: a few sine modes with random coefficients,
// optionally roughened by random piecewise-linear hat bumps, endpoint-clamped.
inline DirichletGridFunction random_dirichlet(const Grid& grid, Rng& rng, const CorpusOptions& opts = {}) {
    const double T = grid.length();
    const int modes = rng.uniform_int(1, opts.max_modes);
    std::vector<double> coeff(static_cast<std::size_t>(modes));
    for (double& c : coeff) c = rng.uniform(-1.0, 1.0);

    std::vector<double> v(grid.size(), 0.0);
    constexpr double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double t = grid.node(static_cast<int>(i));
        double s = 0.0;
        for (int k = 0; k < modes; ++k) s += coeff[k] * std::sin((k + 1) * pi * t / T);
        v[i] = s;
    }

    if (rng.uniform01() < opts.bump_prob) {
        const int bumps = rng.uniform_int(1, opts.max_bumps);
        for (int b = 0; b < bumps; ++b) {
            const double center = rng.uniform(0.1 * T, 0.9 * T);
            const double width = rng.uniform(0.05 * T, 0.3 * T);
            const double height = rng.uniform(-1.0, 1.0);
            for (std::size_t i = 0; i < v.size(); ++i) {
                const double t = grid.node(static_cast<int>(i));
                const double hat = 1.0 - std::abs(t - center) / width;
                if (hat > 0.0) v[i] += height * hat;
            }
        }
    }

    v.front() = 0.0;
    v.back() = 0.0;
    return DirichletGridFunction::from_values(grid, std::move(v));
}

}  // namespace fracmp
