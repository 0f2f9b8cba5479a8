#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracmp/fracops.hpp"
#include "fracmp/grid.hpp"
#include "fracmp/model.hpp"
#include "fracmp/quadrature.hpp"
#include "fracmp/scalar_ineq.hpp"
#include "fracmp/space.hpp"

namespace fracmp {

struct EnergyBreakdown {
    double J;  // (1/p) int |D^alpha u|^p
    double H;  // int F(t, u)
    double I;  // J - H
};

// Default flux regularization: |z|^{p-2} blows up at z = 0 for p < 2 and the
// gradient needs it tamed; for p >= 2 no regularization is used.
inline double default_regularization(double p) { return (p < 2.0) ? 1e-10 : 0.0; }

// Discrete energy I(u) = J(u) - H(u). J uses the working derivative rows with
// their staggered weights; H uses nodal trapezoid quadrature of F.
inline EnergyBreakdown energy(const DirichletGridFunction& u, const FracParams& params, const Nonlinearity& nl,
                              double eps_reg = -1.0) {
    if (eps_reg < 0.0) eps_reg = default_regularization(params.p);
    const GridFunction du = working_deriv_left(u, params.order());
    const std::vector<double> dw = working_deriv_weights(u.grid());
    double J = 0.0;
    for (std::size_t i = 0; i < du.size(); ++i) J += dw[i] * p_potential_reg(du[i], params.p, eps_reg);

    const std::vector<double> w = trapezoid_weights(u.grid());
    double H = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) H += w[i] * nl.F(u.grid().node(static_cast<int>(i)), u[i]);

    return {J, H, J - H};
}

// Exact gradient of the discrete energy with respect to the interior node
// values (discretize-then-differentiate). Endpoint entries are zero.
inline GridFunction gradient(const DirichletGridFunction& u, const FracParams& params, const Nonlinearity& nl,
                             double eps_reg = -1.0) {
    if (eps_reg < 0.0) eps_reg = default_regularization(params.p);
    const Grid& grid = u.grid();
    const GridFunction du = working_deriv_left(u, params.order());
    const std::vector<double> dw = working_deriv_weights(grid);

    std::vector<double> flux(du.size());
    for (std::size_t i = 0; i < du.size(); ++i) flux[i] = dw[i] * p_power_reg(du[i], params.p, eps_reg);
    std::vector<double> g = working_deriv_transpose(grid, params.order(), flux);

    const std::vector<double> w = trapezoid_weights(grid);
    for (std::size_t i = 1; i + 1 < g.size(); ++i)
        g[i] -= w[i] * nl.f(grid.node(static_cast<int>(i)), u[i]);
    g.front() = 0.0;
    g.back() = 0.0;
    return GridFunction(grid, std::move(g));
}

// Dual norm of a gradient vector induced by the nodal quadrature weights:
// sqrt(sum g_i^2 / w_i) over interior nodes, i.e. the L^2 norm of the strong
// residual the entries represent. Mesh-size independent.
inline double gradient_dual_norm(const GridFunction& g) {
    const std::vector<double> w = trapezoid_weights(g.grid());
    double acc = 0.0;
    for (std::size_t i = 1; i + 1 < g.size(); ++i) acc += g[i] * g[i] / w[i];
    return std::sqrt(acc);
}

// Weak-form residual <I'(u), phi>: the p-flux pairing minus the nonlinearity
// pairing. Coincides with the euclidean pairing of gradient(u) and phi.
inline double weak_residual(const DirichletGridFunction& u, const DirichletGridFunction& phi,
                            const FracParams& params, const Nonlinearity& nl, double eps_reg = -1.0) {
    if (!(u.grid() == phi.grid())) throw std::invalid_argument("weak_residual: grid mismatch");
    if (eps_reg < 0.0) eps_reg = default_regularization(params.p);
    const Grid& grid = u.grid();
    const GridFunction du = working_deriv_left(u, params.order());
    const GridFunction dphi = working_deriv_left(phi, params.order());
    const std::vector<double> dw = working_deriv_weights(grid);

    double lhs = 0.0;
    for (std::size_t i = 0; i < du.size(); ++i)
        lhs += dw[i] * p_power_reg(du[i], params.p, eps_reg) * dphi[i];

    const std::vector<double> w = trapezoid_weights(grid);
    double rhs = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        rhs += w[i] * nl.f(grid.node(static_cast<int>(i)), u[i]) * phi[i];

    return lhs - rhs;
}

inline double inner(const GridFunction& a, const GridFunction& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace fracmp
