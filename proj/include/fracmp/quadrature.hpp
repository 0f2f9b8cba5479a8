#pragma once

#include <vector>

#include "fracmp/grid.hpp"

namespace fracmp {

// Composite trapezoid weights on the nodes: (h/2, h, ..., h, h/2).
inline std::vector<double> trapezoid_weights(const Grid& grid) {
    const double h = grid.step();
    std::vector<double> w(grid.size(), h);
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
    return w;
}

inline double trapezoid_integral(const GridFunction& u) {
    const double h = u.grid().step();
    double acc = 0.5 * (u[0] + u[u.size() - 1]);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) acc += u[i];
    return acc * h;
}

template <typename F>
double trapezoid_integral(const Grid& grid, F&& f) {
    const double h = grid.step();
    double acc = 0.5 * (f(grid.node(0)) + f(grid.node(grid.intervals())));
    for (int i = 1; i < grid.intervals(); ++i) acc += f(grid.node(i));
    return acc * h;
}

}  // namespace fracmp
