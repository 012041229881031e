#pragma once

// Brute-force reference computations used to cross-check the solvers. None of
// these share code with the projection, IRLS or minimax paths.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace amh::oracle {

/// Minimizer of a convex function on [lo, hi]: a uniform scan of `points`
/// values followed by ternary search inside the best scan cell.
inline double convex_argmin(const std::function<double(double)>& f, double lo, double hi, int points = 2001)
{
    if (!(hi > lo))
        return lo;
    double best = lo;
    double best_value = f(lo);
    const double step = (hi - lo) / (points - 1);
    for (int k = 1; k < points; ++k) {
        const double c = lo + step * k;
        const double v = f(c);
        if (v < best_value) {
            best_value = v;
            best = c;
        }
    }
    double a = std::max(lo, best - step);
    double b = std::min(hi, best + step);
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        const double m1 = a + (b - a) / 3.0;
        const double m2 = b - (b - a) / 3.0;
        if (f(m1) <= f(m2))
            b = m2;
        else
            a = m1;
    }
    return 0.5 * (a + b);
}

struct ConstantFit {
    double constant = 0.0;
    double error = 0.0;
};

/// min_c max_k |v_k - c| by dense scan over constants.
inline ConstantFit minimax_constant(std::span<const double> v)
{
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    auto err = [&](double c) {
        double e = 0.0;
        for (double x : v)
            e = std::max(e, std::abs(x - c));
        return e;
    };
    const double c = convex_argmin(err, *mn, *mx);
    return {c, err(c)};
}

/// min_c (1/N) sum_k |v_k - c| by dense scan over constants; the minimizer is a median.
inline ConstantFit l1_constant(std::span<const double> v)
{
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    auto err = [&](double c) {
        double e = 0.0;
        for (double x : v)
            e += std::abs(x - c);
        return e / static_cast<double>(v.size());
    };
    const double c = convex_argmin(err, *mn, *mx, 4001);
    return {c, err(c)};
}

/// Root of t^4 - t^2 - 1, i.e. |(1, 1)|_{(1, 2)}.
inline double golden_quasi_norm() { return std::sqrt(0.5 * (1.0 + std::sqrt(5.0))); }

/// Monotone bisection for the t with sum x_i^2 / t^{2 a_i} = 1, written with
/// plain pow and a fixed iteration count.
inline double bisection_quasi_norm(std::span<const double> a, std::span<const double> x)
{
    double s = 0.0;
    for (double v : x)
        s += v * v;
    if (s == 0.0)
        return 0.0;
    auto f = [&](double t) {
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            acc += x[i] * x[i] / std::pow(t, 2.0 * a[i]);
        return acc;
    };
    double lo = 1e-300, hi = 1.0;
    while (f(hi) > 1.0)
        hi *= 2.0;
    lo = hi;
    while (f(lo) < 1.0)
        lo *= 0.5;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Midpoint-rule integral of f over [lo, hi] with n cells.
inline double midpoint_integral(const std::function<double(double)>& f, double lo, double hi, int n)
{
    const double h = (hi - lo) / n;
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
        acc += f(lo + (k + 0.5) * h);
    return acc * h;
}

} // namespace amh::oracle
