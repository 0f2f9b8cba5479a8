#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fracmp {

// Uniform partition of [0, T] into N subintervals (N+1 nodes, step h = T/N).
class Grid {
public:
    Grid(double T, int N) : T_(T), N_(N) {
        if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("Grid: T must be positive and finite");
        if (N < 2) throw std::invalid_argument("Grid: N must be >= 2");
    }

    double length() const { return T_; }
    int intervals() const { return N_; }
    std::size_t size() const { return static_cast<std::size_t>(N_) + 1; }
    double step() const { return T_ / N_; }
    double node(int i) const { return T_ * static_cast<double>(i) / N_; }

    friend bool operator==(const Grid& a, const Grid& b) { return a.T_ == b.T_ && a.N_ == b.N_; }

private:
    double T_;
    int N_;
};

// Real samples on the nodes of a Grid.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw std::invalid_argument("GridFunction: values length must be N+1");
    }

    static GridFunction zero(Grid grid) { return GridFunction(grid, std::vector<double>(grid.size(), 0.0)); }

    template <typename F>
    static GridFunction sample(Grid grid, F&& f) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.node(static_cast<int>(i)));
        return GridFunction(grid, std::move(v));
    }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

inline void require_finite(const GridFunction& u, const char* who) {
    if (!u.all_finite()) throw std::invalid_argument(std::string(who) + ": non-finite sample values");
}

// A grid function with u(0) = u(T) = 0 enforced at construction.
class DirichletGridFunction {
public:
    explicit DirichletGridFunction(GridFunction f) : f_(std::move(f)) {
        if (f_[0] != 0.0 || f_[f_.size() - 1] != 0.0)
            throw std::invalid_argument("DirichletGridFunction: endpoint values must be exactly 0");
    }

    static DirichletGridFunction zero(Grid grid) { return DirichletGridFunction(GridFunction::zero(grid)); }

    // Samples f and forces the endpoint entries to zero.
    template <typename F>
    static DirichletGridFunction clamp(Grid grid, F&& f) {
        GridFunction g = GridFunction::sample(grid, std::forward<F>(f));
        g[0] = 0.0;
        g[g.size() - 1] = 0.0;
        return DirichletGridFunction(std::move(g));
    }

    static DirichletGridFunction from_values(Grid grid, std::vector<double> values) {
        return DirichletGridFunction(GridFunction(grid, std::move(values)));
    }

    const GridFunction& fn() const { return f_; }
    const Grid& grid() const { return f_.grid(); }
    const std::vector<double>& values() const { return f_.values(); }
    double operator[](std::size_t i) const { return f_[i]; }
    std::size_t size() const { return f_.size(); }

private:
    GridFunction f_;
};

// Fractional order restricted to the working window (0, 1].
class FracOrder {
public:
    explicit FracOrder(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0) || !(alpha <= 1.0))
            throw std::invalid_argument("FracOrder: alpha must lie in (0, 1]");
    }
    double value() const { return alpha_; }

private:
    double alpha_;
};

// Sample reversal t -> T - t; the bridge between left and right operators.
inline GridFunction reversed(const GridFunction& u) {
    std::vector<double> v(u.values().rbegin(), u.values().rend());
    return GridFunction(u.grid(), std::move(v));
}

}  // namespace fracmp
