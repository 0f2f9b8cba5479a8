#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fracmp/gamma.hpp"
#include "fracmp/grid.hpp"
#include "fracmp/quadrature.hpp"

namespace fracmp {

enum class WeightScheme { ProductTrapezoid, GrunwaldLetnikov };
enum class Side { Left, Right };

// Convolution weights for the discrete fractional operators on a uniform grid.
struct ConvolutionWeights {
    WeightScheme scheme;
    double alpha;
    std::vector<double> w;

    // w_0 = 1, w_k = w_{k-1} * (k - 1 - alpha) / k  (binomial (-1)^k C(alpha, k)).
    static ConvolutionWeights grunwald_letnikov(FracOrder order, int count) {
        ConvolutionWeights cw{WeightScheme::GrunwaldLetnikov, order.value(), {}};
        cw.w.resize(static_cast<std::size_t>(count) + 1);
        cw.w[0] = 1.0;
        for (int k = 1; k <= count; ++k)
            cw.w[k] = cw.w[k - 1] * (static_cast<double>(k) - 1.0 - order.value()) / static_cast<double>(k);
        return cw;
    }

    // Lag weights of the piecewise-linear (product trapezoid) rule for the
    // integral kernel (t-s)^{alpha-1}: second differences of k^{alpha+1}.
    static ConvolutionWeights product_trapezoid_integral(FracOrder order, int count) {
        const double a1 = order.value() + 1.0;
        ConvolutionWeights cw{WeightScheme::ProductTrapezoid, order.value(), {}};
        cw.w.resize(static_cast<std::size_t>(count) + 1);
        cw.w[0] = 1.0;
        for (int k = 1; k <= count; ++k) {
            const double kk = static_cast<double>(k);
            cw.w[k] = std::pow(kk + 1.0, a1) - 2.0 * std::pow(kk, a1) + std::pow(kk - 1.0, a1);
        }
        return cw;
    }

    // Lag weights of the L1 scheme written against node values (not
    // differences): second differences of k^{1-alpha}.
    static ConvolutionWeights product_trapezoid_derivative(FracOrder order, int count) {
        const double a1 = 1.0 - order.value();
        ConvolutionWeights cw{WeightScheme::ProductTrapezoid, order.value(), {}};
        cw.w.resize(static_cast<std::size_t>(count) + 1);
        cw.w[0] = 1.0;
        for (int k = 1; k <= count; ++k) {
            const double kk = static_cast<double>(k);
            cw.w[k] = std::pow(kk + 1.0, a1) - 2.0 * std::pow(kk, a1) + std::pow(kk - 1.0, a1);
        }
        return cw;
    }
};

namespace detail {

// Coefficient of u(t_0) in row n of the product-trapezoid integral rule.
inline double pt_boundary_coeff(double alpha, int n) {
    const double nn = static_cast<double>(n);
    return std::pow(nn - 1.0, alpha + 1.0) - std::pow(nn, alpha) * (nn - alpha - 1.0);
}

// L1 jump weights d_k = (k+1)^{1-alpha} - k^{1-alpha}. At alpha = 1 the
// exponent degenerates and only the k = 0 jump survives (backward difference).
inline std::vector<double> l1_jump_weights(double alpha, int count) {
    std::vector<double> d(static_cast<std::size_t>(count) + 1, 0.0);
    if (alpha == 1.0) {
        d[0] = 1.0;
        return d;
    }
    const double e = 1.0 - alpha;
    for (int k = 0; k <= count; ++k)
        d[k] = std::pow(static_cast<double>(k) + 1.0, e) - std::pow(static_cast<double>(k), e);
    return d;
}

// Caputo derivative by the L1 scheme: I^{1-alpha} applied to the piecewise
// slope of u. Valid for any samples; row 0 is the t->0+ limit, which is 0
// for alpha < 1. At alpha = 1 the rule degenerates to backward differences.
inline std::vector<double> caputo_l1_values(const GridFunction& u, double alpha) {
    const int N = u.grid().intervals();
    const double h = u.grid().step();
    const double scale = std::pow(h, -alpha) / gamma_fn(2.0 - alpha);
    const std::vector<double> d = l1_jump_weights(alpha, N);
    std::vector<double> out(u.size(), 0.0);
    for (int n = 1; n <= N; ++n) {
        double acc = 0.0;
        for (int j = 1; j <= n; ++j) acc += (u[j] - u[j - 1]) * d[n - j];
        out[n] = scale * acc;
    }
    return out;
}

// Classical derivative: central stencil inside, one-sided 3-point at the ends.
inline std::vector<double> second_order_derivative_values(const GridFunction& u) {
    const int N = u.grid().intervals();
    const double h = u.grid().step();
    std::vector<double> out(u.size());
    out[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    for (int i = 1; i < N; ++i) out[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    out[N] = (3.0 * u[N] - 4.0 * u[N - 1] + u[N - 2]) / (2.0 * h);
    return out;
}

}  // namespace detail

// Left Riemann-Liouville integral (1/Gamma(alpha)) int_0^t (t-s)^{alpha-1} u(s) ds
// by product-trapezoid convolution quadrature; exact for piecewise-linear u.
inline GridFunction frac_integral_left(const GridFunction& u, FracOrder order) {
    require_finite(u, "frac_integral_left");
    const double alpha = order.value();
    const int N = u.grid().intervals();
    const double scale = std::pow(u.grid().step(), alpha) / gamma_fn(alpha + 2.0);
    const ConvolutionWeights cw = ConvolutionWeights::product_trapezoid_integral(order, N);

    GridFunction out = GridFunction::zero(u.grid());
    for (int n = 1; n <= N; ++n) {
        double acc = detail::pt_boundary_coeff(alpha, n) * u[0];
        for (int k = 0; k < n; ++k) acc += cw.w[k] * u[n - k];
        out[n] = scale * acc;
    }
    return out;
}

inline GridFunction frac_integral_right(const GridFunction& u, FracOrder order) {
    require_finite(u, "frac_integral_right");
    return reversed(frac_integral_left(reversed(u), order));
}

// Left Riemann-Liouville derivative on functions with u(0) = 0, where it
// coincides with the Caputo derivative. alpha < 1 uses the L1 scheme;
// alpha = 1 returns the second-order finite-difference derivative stencil.
inline GridFunction frac_deriv_left(const GridFunction& u, FracOrder order) {
    require_finite(u, "frac_deriv_left");
    if (u[0] != 0.0)
        throw std::invalid_argument("frac_deriv_left: requires u(0) = 0 (RL and Caputo derivatives differ otherwise)");
    if (order.value() == 1.0) return GridFunction(u.grid(), detail::second_order_derivative_values(u));
    return GridFunction(u.grid(), detail::caputo_l1_values(u, order.value()));
}

inline GridFunction frac_deriv_left(const DirichletGridFunction& u, FracOrder order) {
    return frac_deriv_left(u.fn(), order);
}

// Right derivative via the exact discrete reflection t -> T - t.
inline GridFunction frac_deriv_right(const GridFunction& v, FracOrder order) {
    require_finite(v, "frac_deriv_right");
    if (v[v.size() - 1] != 0.0)
        throw std::invalid_argument("frac_deriv_right: requires v(T) = 0 (RL and Caputo derivatives differ otherwise)");
    return reversed(frac_deriv_left(reversed(v), order));
}

inline GridFunction frac_deriv_right(const DirichletGridFunction& v, FracOrder order) {
    return frac_deriv_right(v.fn(), order);
}

// Riemann-Liouville derivative of a general function: Caputo part plus the
// boundary correction u(a)/Gamma(1-alpha) (t-a)^{-alpha}. The correction is
// singular at the near endpoint; that node is reported as a NaN sentinel
// whenever the endpoint value does not vanish.
inline GridFunction rl_from_caputo(const GridFunction& u, FracOrder order, Side side) {
    require_finite(u, "rl_from_caputo");
    const double alpha = order.value();
    if (alpha >= 1.0) throw std::invalid_argument("rl_from_caputo: correction formula requires alpha in (0,1)");

    const GridFunction& w = (side == Side::Left) ? u : reversed(u);
    const int N = w.grid().intervals();
    std::vector<double> vals = detail::caputo_l1_values(w, alpha);
    const double u0 = w[0];
    if (u0 != 0.0) {
        const double g1ma = gamma_fn(1.0 - alpha);
        for (int n = 1; n <= N; ++n) vals[n] += u0 / (g1ma * std::pow(w.grid().node(n), alpha));
        vals[0] = std::numeric_limits<double>::quiet_NaN();
    }
    GridFunction out(w.grid(), std::move(vals));
    return (side == Side::Left) ? out : reversed(out);
}

// Derivative rows backing the variational machinery (seminorm, energy and
// its gradient): the L1 scheme for every alpha in (0, 1]. At alpha = 1 the
// rows are backward divided differences, so the weighted p-th power sum
// below is the midpoint rule on staggered samples and the quadratic form
// matches the piecewise-linear finite element stiffness exactly. Row 0 is
// zero and carries no quadrature weight.
inline GridFunction working_deriv_left(const GridFunction& u, FracOrder order) {
    require_finite(u, "working_deriv_left");
    return GridFunction(u.grid(), detail::caputo_l1_values(u, order.value()));
}

inline GridFunction working_deriv_left(const DirichletGridFunction& u, FracOrder order) {
    return working_deriv_left(u.fn(), order);
}

// Quadrature weights paired with working_deriv_left rows: (0, h, h, ..., h).
inline std::vector<double> working_deriv_weights(const Grid& grid) {
    std::vector<double> w(grid.size(), grid.step());
    w[0] = 0.0;
    return w;
}

// Transpose action y -> B^T y of the working derivative rows, over all node
// indices. Entry 0 and N are computed too; Dirichlet callers ignore them.
inline std::vector<double> working_deriv_transpose(const Grid& grid, FracOrder order, const std::vector<double>& y) {
    const int N = grid.intervals();
    if (y.size() != grid.size()) throw std::invalid_argument("working_deriv_transpose: length mismatch");
    const double alpha = order.value();
    const double scale = std::pow(grid.step(), -alpha) / gamma_fn(2.0 - alpha);
    const std::vector<double> d = detail::l1_jump_weights(alpha, N);

    // Row n contributes scale * sum_j (u_j - u_{j-1}) d_{n-j}; with
    // S_k = sum_{m>=0} d_m y_{k+m} the transpose telescopes to S_k - S_{k+1}.
    std::vector<double> S(static_cast<std::size_t>(N) + 2, 0.0);
    for (int k = 1; k <= N; ++k) {
        double acc = 0.0;
        for (int m = 0; m + k <= N; ++m) acc += d[m] * y[k + m];
        S[k] = acc;
    }
    std::vector<double> out(grid.size(), 0.0);
    for (int k = 0; k <= N; ++k) out[k] = scale * ((k >= 1 ? S[k] : 0.0) - S[k + 1]);
    return out;
}

// Dense coefficients of working_deriv_left: rows[n][j] multiplies u_j in row n.
inline std::vector<std::vector<double>> working_deriv_rows(const Grid& grid, FracOrder order) {
    const int N = grid.intervals();
    const double alpha = order.value();
    const double scale = std::pow(grid.step(), -alpha) / gamma_fn(2.0 - alpha);
    const std::vector<double> d = detail::l1_jump_weights(alpha, N);
    std::vector<std::vector<double>> rows(grid.size());
    rows[0].assign(grid.size(), 0.0);
    for (int n = 1; n <= N; ++n) {
        rows[n].assign(grid.size(), 0.0);
        rows[n][0] = -scale * d[n - 1];
        for (int j = 1; j < n; ++j) rows[n][j] = scale * (d[n - j] - d[n - j - 1]);
        rows[n][n] = scale * d[0];
    }
    return rows;
}

namespace detail {

// Right RL derivative for arbitrary samples; used by the residual checks.
// For alpha = 1 the correction vanishes and the classical stencil applies.
inline GridFunction rl_deriv_right_general(const GridFunction& v, FracOrder order) {
    if (order.value() == 1.0) return reversed(GridFunction(v.grid(), second_order_derivative_values(reversed(v))));
    if (v[v.size() - 1] == 0.0) return frac_deriv_right(v, order);
    return rl_from_caputo(v, order, Side::Right);
}

}  // namespace detail

// sup-norm of D^alpha(I^alpha u) - u over interior nodes.
inline double check_left_inverse(const GridFunction& u, FracOrder order) {
    require_finite(u, "check_left_inverse");
    const GridFunction iu = frac_integral_left(u, order);
    const GridFunction du = frac_deriv_left(iu, order);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) worst = std::max(worst, std::abs(du[i] - u[i]));
    return worst;
}

// sup-norm of I^alpha(I^beta u) - I^{alpha+beta} u.
inline double check_semigroup(const GridFunction& u, FracOrder a, FracOrder b) {
    require_finite(u, "check_semigroup");
    if (a.value() + b.value() > 1.0 + 1e-12)
        throw std::invalid_argument("check_semigroup: requires alpha + beta <= 1");
    const GridFunction lhs = frac_integral_left(frac_integral_left(u, b), a);
    const GridFunction rhs = frac_integral_left(u, FracOrder(std::min(a.value() + b.value(), 1.0)));
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    return worst;
}

// | int (D^alpha u) v - int u (tD^alpha v) | with trapezoid quadrature.
// u must vanish at both ends; v may be arbitrary (its right RL derivative
// then carries the singular correction, which the zero of u suppresses).
inline double check_integration_by_parts(const DirichletGridFunction& u, const GridFunction& v, FracOrder order) {
    require_finite(v, "check_integration_by_parts");
    if (!(u.grid() == v.grid()))
        throw std::invalid_argument("check_integration_by_parts: grid mismatch");
    const GridFunction du = frac_deriv_left(u, order);
    const GridFunction dv = detail::rl_deriv_right_general(v, order);
    const std::vector<double> w = trapezoid_weights(u.grid());
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        lhs += w[i] * du[i] * v[i];
        if (u[i] != 0.0) rhs += w[i] * u[i] * dv[i];
    }
    return std::abs(lhs - rhs);
}

}  // namespace fracmp
