#pragma once

// Polynomials of total degree <= s on R^n, stored as monomial coefficients in
// an affine frame u_i = (y_i - c_i) / h_i. The space is invariant under such
// diagonal affine maps, so the frame only affects conditioning.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "amh/anisotropy.hpp"
#include "amh/error.hpp"
#include "amh/rng.hpp"

namespace amh {

using MultiIndex = std::vector<int>;

inline std::size_t binomial(std::size_t n, std::size_t k)
{
    if (k > n)
        return 0;
    std::size_t result = 1;
    for (std::size_t i = 1; i <= k; ++i)
        result = result * (n - k + i) / i;
    return result;
}

/// All alpha in Z_+^n with |alpha| <= s, graded by total degree and
/// lexicographically descending within a degree. Count is binomial(n + s, s).
inline std::vector<MultiIndex> multi_indices(std::size_t n, int s)
{
    std::vector<MultiIndex> out;
    MultiIndex current(n, 0);
    // Fill positions [pos, n) with total `left`.
    auto fill = [&](auto&& self, std::size_t pos, int left) -> void {
        if (pos + 1 == n) {
            current[pos] = left;
            out.push_back(current);
            return;
        }
        for (int k = left; k >= 0; --k) {
            current[pos] = k;
            self(self, pos + 1, left - k);
        }
    };
    for (int d = 0; d <= s; ++d)
        fill(fill, 0, d);
    return out;
}

inline int total_degree(const MultiIndex& alpha)
{
    int d = 0;
    for (int k : alpha)
        d += k;
    return d;
}

class PolynomialRep {
public:
    PolynomialRep() = default;

    PolynomialRep(int degree, Point center, std::vector<double> scale, std::vector<double> coefficients)
        : degree_(degree), center_(std::move(center)), scale_(std::move(scale)),
          coefficients_(std::move(coefficients))
    {
        if (degree_ < 0)
            throw invalid_input("polynomial: negative degree bound");
        if (center_.size() != scale_.size() || center_.empty())
            throw dimension_mismatch("polynomial: frame center and scale differ in dimension");
        indices_ = multi_indices(center_.size(), degree_);
        if (coefficients_.empty())
            coefficients_.assign(indices_.size(), 0.0);
        if (coefficients_.size() != indices_.size())
            throw dimension_mismatch("polynomial: coefficient count must equal binomial(n + s, s)");
    }

    static PolynomialRep zero(std::size_t n, int degree)
    {
        return PolynomialRep(degree, Point(n, 0.0), std::vector<double>(n, 1.0), {});
    }

    /// Polynomial expressed in the ball-adapted frame of `ball`.
    static PolynomialRep in_frame_of(const AnisotropicBall& ball, int degree, std::vector<double> coefficients = {})
    {
        return PolynomialRep(degree, ball.center(), ball.half_widths(), std::move(coefficients));
    }

    [[nodiscard]] std::size_t dimension() const noexcept { return center_.size(); }
    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] const Point& center() const noexcept { return center_; }
    [[nodiscard]] const std::vector<double>& scale() const noexcept { return scale_; }
    [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return coefficients_; }
    [[nodiscard]] std::vector<double>& coefficients() noexcept { return coefficients_; }
    [[nodiscard]] const std::vector<MultiIndex>& indices() const noexcept { return indices_; }

    double operator()(std::span<const double> y) const
    {
        const std::size_t n = dimension();
        if (y.size() != n)
            throw dimension_mismatch("polynomial evaluation: point dimension mismatch");
        // powers[i * (s + 1) + k] = u_i^k
        std::vector<double> powers(n * static_cast<std::size_t>(degree_ + 1));
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (y[i] - center_[i]) / scale_[i];
            double acc = 1.0;
            for (int k = 0; k <= degree_; ++k) {
                powers[i * (degree_ + 1) + k] = acc;
                acc *= u;
            }
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < indices_.size(); ++j) {
            double term = coefficients_[j];
            for (std::size_t i = 0; i < n; ++i)
                term *= powers[i * (degree_ + 1) + indices_[j][i]];
            sum += term;
        }
        return sum;
    }

    /// The same polynomial re-expressed in the frame (center, scale).
    [[nodiscard]] PolynomialRep rebased(const Point& center, const std::vector<double>& scale) const
    {
        const std::size_t n = dimension();
        if (center.size() != n || scale.size() != n)
            throw dimension_mismatch("polynomial rebase: frame dimension mismatch");
        PolynomialRep out(degree_, center, scale, {});
        std::map<MultiIndex, std::size_t> position;
        for (std::size_t j = 0; j < out.indices_.size(); ++j)
            position[out.indices_[j]] = j;

        // u_i = A_i u'_i + B_i
        std::vector<double> A(n), B(n);
        for (std::size_t i = 0; i < n; ++i) {
            A[i] = scale[i] / scale_[i];
            B[i] = (center[i] - center_[i]) / scale_[i];
        }
        // expansion[i][k][j] = coefficient of u'^j in (A_i u' + B_i)^k
        std::vector<std::vector<std::vector<double>>> expansion(n);
        for (std::size_t i = 0; i < n; ++i) {
            expansion[i].resize(degree_ + 1);
            for (int k = 0; k <= degree_; ++k) {
                expansion[i][k].assign(k + 1, 0.0);
                for (int j = 0; j <= k; ++j)
                    expansion[i][k][j] = static_cast<double>(binomial(k, j)) * std::pow(A[i], j) *
                                         std::pow(B[i], k - j);
            }
        }
        for (std::size_t src = 0; src < indices_.size(); ++src) {
            if (coefficients_[src] == 0.0)
                continue;
            const MultiIndex& alpha = indices_[src];
            // Walk the tensor product of per-axis expansions.
            MultiIndex beta(n, 0);
            auto walk = [&](auto&& self, std::size_t axis, double weight) -> void {
                if (axis == n) {
                    out.coefficients_[position.at(beta)] += coefficients_[src] * weight;
                    return;
                }
                for (int j = 0; j <= alpha[axis]; ++j) {
                    beta[axis] = j;
                    self(self, axis + 1, weight * expansion[axis][alpha[axis]][j]);
                }
            };
            walk(walk, 0, 1.0);
        }
        return out;
    }

    PolynomialRep& operator+=(const PolynomialRep& other)
    {
        if (other.degree_ != degree_ || other.center_ != center_ || other.scale_ != scale_)
            throw incompatible_parameters("polynomial sum: operands live in different frames");
        for (std::size_t j = 0; j < coefficients_.size(); ++j)
            coefficients_[j] += other.coefficients_[j];
        return *this;
    }

    PolynomialRep& operator*=(double factor)
    {
        for (double& c : coefficients_)
            c *= factor;
        return *this;
    }

private:
    int degree_ = 0;
    Point center_;
    std::vector<double> scale_;
    std::vector<double> coefficients_;
    std::vector<MultiIndex> indices_;
};

/// Raw-coordinate polynomial with coefficients uniform in [-1, 1].
inline PolynomialRep random_polynomial(std::size_t n, int degree, std::uint64_t seed)
{
    PolynomialRep p = PolynomialRep::zero(n, degree);
    Rng rng(seed);
    for (double& c : p.coefficients())
        c = rng.uniform(-1.0, 1.0);
    return p;
}

} // namespace amh
