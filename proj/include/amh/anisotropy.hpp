#pragma once

// Anisotropic geometry on R^n: the homogeneous quasi-norm |x|_a, dilations
// t^a x, anisotropic balls, and the exponent bookkeeping that the atom and
// Campanato machinery depends on.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "amh/error.hpp"

namespace amh {

using Point = std::vector<double>;

namespace detail {

// floor() that is robust to representation error in quantities that are
// mathematically integers, e.g. 2 * (1 / (2/3) - 1).
inline long stable_floor(double x)
{
    const double nudged = x + 1e-9 * std::max(1.0, std::abs(x));
    return static_cast<long>(std::floor(nudged));
}

inline void require_finite(std::span<const double> x, const char* what)
{
    for (double v : x)
        if (!std::isfinite(v))
            throw invalid_input(std::string(what) + ": non-finite component");
}

} // namespace detail

/// The exponent vector a in [1, inf)^n with its homogeneous dimension
/// nu = a_1 + ... + a_n and the extremes a_-, a_+.
class AnisotropyVector {
public:
    AnisotropyVector() = default;

    explicit AnisotropyVector(std::vector<double> a) : a_(std::move(a))
    {
        if (a_.empty())
            throw invalid_input("anisotropy: empty exponent vector");
        for (double ai : a_)
            if (!std::isfinite(ai) || ai < 1.0)
                throw invalid_input("anisotropy: every a_i must be a finite real >= 1");
        nu_ = std::accumulate(a_.begin(), a_.end(), 0.0);
        a_minus_ = *std::min_element(a_.begin(), a_.end());
        a_plus_ = *std::max_element(a_.begin(), a_.end());
    }

    static AnisotropyVector isotropic(std::size_t n) { return AnisotropyVector(std::vector<double>(n, 1.0)); }

    [[nodiscard]] std::size_t dimension() const noexcept { return a_.size(); }
    [[nodiscard]] const std::vector<double>& components() const noexcept { return a_; }
    [[nodiscard]] double operator[](std::size_t i) const { return a_[i]; }
    [[nodiscard]] double nu() const noexcept { return nu_; }
    [[nodiscard]] double a_minus() const noexcept { return a_minus_; }
    [[nodiscard]] double a_plus() const noexcept { return a_plus_; }

    bool operator==(const AnisotropyVector& other) const { return a_ == other.a_; }

private:
    std::vector<double> a_;
    double nu_ = 0.0;
    double a_minus_ = 0.0;
    double a_plus_ = 0.0;
};

/// Integrability exponents p in (0, inf]^n.
class ExponentVector {
public:
    ExponentVector() = default;

    explicit ExponentVector(std::vector<double> p) : p_(std::move(p))
    {
        if (p_.empty())
            throw invalid_input("exponents: empty vector");
        for (double pi : p_)
            if (std::isnan(pi) || pi <= 0.0)
                throw invalid_input("exponents: every p_i must be positive (inf allowed)");
        p_minus_ = *std::min_element(p_.begin(), p_.end());
        p_plus_ = *std::max_element(p_.begin(), p_.end());
        p_underline_ = std::min(p_minus_, 1.0);
    }

    static ExponentVector uniform(std::size_t n, double p) { return ExponentVector(std::vector<double>(n, p)); }

    [[nodiscard]] std::size_t dimension() const noexcept { return p_.size(); }
    [[nodiscard]] const std::vector<double>& components() const noexcept { return p_; }
    [[nodiscard]] double operator[](std::size_t i) const { return p_[i]; }
    [[nodiscard]] double p_minus() const noexcept { return p_minus_; }
    [[nodiscard]] double p_plus() const noexcept { return p_plus_; }
    [[nodiscard]] double p_underline() const noexcept { return p_underline_; }

    [[nodiscard]] bool within_unit_cube() const noexcept { return p_plus_ <= 1.0; }

    bool operator==(const ExponentVector& other) const { return p_ == other.p_; }

private:
    std::vector<double> p_;
    double p_minus_ = 0.0;
    double p_plus_ = 0.0;
    double p_underline_ = 0.0;
};

/// Result of the quasi-norm root solve, with the final bracket so callers can
/// check that F(t) - 1 changes sign across it.
struct QuasiNormSolution {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    int iterations = 0;
};

/// F(t) = sum_i x_i^2 / t^(2 a_i); strictly decreasing on (0, inf) for x != 0.
inline double quasi_norm_residual(const AnisotropyVector& a, std::span<const double> x, double t)
{
    const double log_t = std::log(t);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0)
            continue;
        sum += std::exp(2.0 * (std::log(std::abs(x[i])) - a[i] * log_t));
    }
    return sum;
}

inline QuasiNormSolution solve_quasi_norm(const AnisotropyVector& a, std::span<const double> x,
                                          double relative_width = 1e-12)
{
    if (x.size() != a.dimension())
        throw dimension_mismatch("quasi_norm: point dimension differs from anisotropy dimension");
    detail::require_finite(x, "quasi_norm");

    double euclid = 0.0;
    for (double v : x)
        euclid = std::hypot(euclid, v);
    if (euclid == 0.0)
        return {};

    double hi = euclid;
    double lo = euclid;
    while (quasi_norm_residual(a, x, hi) > 1.0)
        hi *= 2.0;
    while (quasi_norm_residual(a, x, lo) < 1.0)
        lo *= 0.5;

    QuasiNormSolution sol;
    while (hi - lo > relative_width * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (quasi_norm_residual(a, x, mid) > 1.0)
            lo = mid;
        else
            hi = mid;
        ++sol.iterations;
    }
    sol.lower = lo;
    sol.upper = hi;
    // Newton on the residual from the midpoint; a step leaving [lo, hi] is rejected.
    double t = 0.5 * (lo + hi);
    for (int k = 0; k < 3; ++k) {
        double phi = -1.0, dphi = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double term = x[i] * x[i] * std::pow(t, -2.0 * a[i]);
            phi += term;
            dphi -= 2.0 * a[i] * term / t;
        }
        if (!(dphi < 0.0))
            break;
        const double next = t - phi / dphi;
        if (!(next >= lo && next <= hi) || next == t)
            break;
        t = next;
    }
    sol.value = t;
    return sol;
}

/// |x|_a: zero at the origin, otherwise the unique t > 0 with
/// sum_i x_i^2 / t^(2 a_i) = 1.
inline double quasi_norm(const AnisotropyVector& a, std::span<const double> x)
{
    return solve_quasi_norm(a, x).value;
}

/// t^a x = (t^{a_1} x_1, ..., t^{a_n} x_n).
inline Point dilate(const AnisotropyVector& a, double t, std::span<const double> x)
{
    if (x.size() != a.dimension())
        throw dimension_mismatch("dilate: point dimension differs from anisotropy dimension");
    Point out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = std::pow(t, a[i]) * x[i];
    return out;
}

/// <x>_a = |(1, x)|_{(1, a)}; always >= 1.
inline double bracket(const AnisotropyVector& a, std::span<const double> x)
{
    std::vector<double> lifted_a{1.0};
    lifted_a.insert(lifted_a.end(), a.components().begin(), a.components().end());
    Point lifted_x{1.0};
    lifted_x.insert(lifted_x.end(), x.begin(), x.end());
    return quasi_norm(AnisotropyVector(std::move(lifted_a)), lifted_x);
}

/// Lebesgue measure of the Euclidean unit ball in R^n.
inline double unit_ball_volume(std::size_t n)
{
    const double half = 0.5 * static_cast<double>(n);
    return std::pow(M_PI, half) / std::tgamma(half + 1.0);
}

/// B_a(x, r) = { y : |y - x|_a < r } = x + r^a B(0, 1).
class AnisotropicBall {
public:
    AnisotropicBall() = default;

    AnisotropicBall(Point center, double radius, AnisotropyVector a)
        : center_(std::move(center)), radius_(radius), a_(std::move(a))
    {
        if (center_.size() != a_.dimension())
            throw dimension_mismatch("ball: center dimension differs from anisotropy dimension");
        detail::require_finite(center_, "ball center");
        if (!std::isfinite(radius_) || radius_ <= 0.0)
            throw invalid_input("ball: radius must be positive and finite");
        half_.resize(center_.size());
        for (std::size_t i = 0; i < half_.size(); ++i)
            half_[i] = std::pow(radius_, a_[i]);
    }

    [[nodiscard]] std::size_t dimension() const noexcept { return center_.size(); }
    [[nodiscard]] const Point& center() const noexcept { return center_; }
    [[nodiscard]] double radius() const noexcept { return radius_; }
    [[nodiscard]] const AnisotropyVector& anisotropy() const noexcept { return a_; }

    /// Per-axis half-widths r^{a_i} of the bounding box.
    [[nodiscard]] const std::vector<double>& half_widths() const noexcept { return half_; }

    [[nodiscard]] Point lower_corner() const
    {
        Point lo = center_;
        for (std::size_t i = 0; i < lo.size(); ++i)
            lo[i] -= half_[i];
        return lo;
    }

    [[nodiscard]] Point upper_corner() const
    {
        Point hi = center_;
        for (std::size_t i = 0; i < hi.size(); ++i)
            hi[i] += half_[i];
        return hi;
    }

    /// nu_n r^nu.
    [[nodiscard]] double volume() const
    {
        return unit_ball_volume(dimension()) * std::pow(radius_, a_.nu());
    }

    [[nodiscard]] bool contains(std::span<const double> y) const
    {
        if (y.size() != dimension())
            throw dimension_mismatch("ball membership: point dimension mismatch");
        // F is strictly decreasing, so |y - x|_a < r  <=>  F(r) < 1, which is
        // sum_i u_i^2 < 1 in ball-adapted coordinates. No root solve needed.
        double sum = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double u = (y[i] - center_[i]) / half_[i];
            sum += u * u;
        }
        return sum < 1.0;
    }

    /// Ball-adapted coordinates u_i = (y_i - x_i) / r^{a_i}; maps the ball onto
    /// the Euclidean unit ball.
    [[nodiscard]] Point to_unit(std::span<const double> y) const
    {
        Point u(y.begin(), y.end());
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] = (u[i] - center_[i]) / half_[i];
        return u;
    }

    bool operator==(const AnisotropicBall& other) const
    {
        return center_ == other.center_ && radius_ == other.radius_ && a_ == other.a_;
    }

private:
    Point center_;
    double radius_ = 1.0;
    AnisotropyVector a_;
    std::vector<double> half_;
};

inline bool ball_membership(const AnisotropicBall& ball, std::span<const double> y) { return ball.contains(y); }

/// Smallest admissible moment order: max(0, floor((nu / a_-) (1/p_- - 1))).
inline int s_min(const AnisotropyVector& a, const ExponentVector& p)
{
    if (!(p.p_minus() > 0.0) || std::isinf(p.p_minus()))
        throw invalid_input("s_min: p_- must lie in (0, inf)");
    const double arg = a.nu() / a.a_minus() * (1.0 / p.p_minus() - 1.0);
    return static_cast<int>(std::max(0L, detail::stable_floor(arg)));
}

/// N_p = floor(nu (a_+/a_-) (1/p_ + 1) + nu + 2 a_+) + 1, with p_ = min(p_-, 1).
inline int grand_maximal_order(const AnisotropyVector& a, const ExponentVector& p)
{
    if (!(p.p_underline() > 0.0))
        throw invalid_input("grand_maximal_order: p_underline must be positive");
    const double nu = a.nu();
    const double arg = nu * (a.a_plus() / a.a_minus()) * (1.0 / p.p_underline() + 1.0) + nu + 2.0 * a.a_plus();
    return static_cast<int>(detail::stable_floor(arg)) + 1;
}

} // namespace amh
