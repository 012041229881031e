#pragma once

// Mixed-norm Lebesgue quasi-norms ||f||_{L^p} with p = (p_1, ..., p_n),
// integrating x_1 innermost and x_n outermost.

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "amh/anisotropy.hpp"
#include "amh/error.hpp"
#include "amh/grid.hpp"

namespace amh {

namespace detail {

// `values` holds |f| laid out with axis 0 fastest.
inline double iterated_norm(std::vector<double> current, const Lattice& lattice, const ExponentVector& p)
{
    // `current` holds A with the partial norm equal to A^(1/power).
    double power = 1.0;
    for (std::size_t axis = 0; axis < lattice.dimension(); ++axis) {
        const auto r = static_cast<std::size_t>(lattice.resolution()[axis]);
        const double h = lattice.cell_width(axis);
        const std::size_t outer = current.size() / r;
        std::vector<double> next(outer);
        const double pi = p[axis];
        if (std::isinf(pi)) {
            for (std::size_t o = 0; o < outer; ++o) {
                double m = 0.0;
                for (std::size_t k = 0; k < r; ++k)
                    m = std::max(m, current[o * r + k]);
                next[o] = power == 1.0 ? m : std::pow(m, 1.0 / power);
            }
            power = 1.0;
        } else {
            const double ratio = pi / power;
            for (std::size_t o = 0; o < outer; ++o) {
                double sum = 0.0;
                for (std::size_t k = 0; k < r; ++k) {
                    const double v = std::max(current[o * r + k], 0.0);
                    sum += ratio == 1.0 ? v : std::pow(v, ratio);
                }
                next[o] = sum * h;
            }
            power = pi;
        }
        current = std::move(next);
    }
    const double total = std::max(current.front(), 0.0);
    return power == 1.0 ? total : std::pow(total, 1.0 / power);
}

} // namespace detail

inline double mixed_lebesgue_norm(const GridFunction& f, const ExponentVector& p)
{
    if (p.dimension() != f.dimension())
        throw dimension_mismatch("mixed norm: exponent count differs from function dimension");
    std::vector<double> magnitude(f.values().size());
    std::transform(f.values().begin(), f.values().end(), magnitude.begin(), [](double v) { return std::abs(v); });
    return detail::iterated_norm(std::move(magnitude), f.lattice(), p);
}

/// Classical single-exponent quadrature norm over the whole lattice, summed in
/// flat order. Reference path for the isotropic collapse check.
inline double lebesgue_norm(const GridFunction& f, double p)
{
    double acc = 0.0;
    if (std::isinf(p)) {
        for (double v : f.values())
            acc = std::max(acc, std::abs(v));
        return acc;
    }
    for (double v : f.values())
        acc += std::pow(std::abs(v), p);
    return std::pow(acc * f.cell_volume(), 1.0 / p);
}

/// Memo table for ||chi_B||_{L^p}, keyed by (ball, p, resolution). Safe for
/// concurrent use.
class IndicatorNormCache {
public:
    template <class Compute>
    double get(const AnisotropicBall& ball, const ExponentVector& p, int resolution, Compute&& compute)
    {
        std::vector<double> key{static_cast<double>(resolution), static_cast<double>(ball.dimension()), ball.radius()};
        key.insert(key.end(), ball.center().begin(), ball.center().end());
        key.insert(key.end(), ball.anisotropy().components().begin(), ball.anisotropy().components().end());
        key.insert(key.end(), p.components().begin(), p.components().end());
        {
            std::lock_guard lock(mutex_);
            if (auto it = table_.find(key); it != table_.end())
                return it->second;
        }
        const double value = compute();
        std::lock_guard lock(mutex_);
        if (table_.size() > max_entries)
            table_.clear();
        table_.emplace(std::move(key), value);
        return value;
    }

    void clear()
    {
        std::lock_guard lock(mutex_);
        table_.clear();
    }

    static constexpr std::size_t max_entries = 1 << 16;

private:
    std::mutex mutex_;
    std::map<std::vector<double>, double> table_;
};

inline IndicatorNormCache& indicator_norm_cache()
{
    static IndicatorNormCache cache;
    return cache;
}

/// ||chi_B||_{L^p} from the sampled indicator on B's bounding-box lattice.
inline double indicator_mixed_norm(const BallGrid& grid, const ExponentVector& p)
{
    return indicator_norm_cache().get(grid.ball(), p, grid.resolution(), [&] {
        std::vector<double> chi(grid.lattice().size(), 0.0);
        for (std::size_t k : grid.inside())
            chi[k] = 1.0;
        return detail::iterated_norm(std::move(chi), grid.lattice(), p);
    });
}

inline double indicator_mixed_norm(const AnisotropicBall& ball, const ExponentVector& p, int resolution)
{
    return indicator_norm_cache().get(ball, p, resolution, [&] {
        return indicator_mixed_norm(BallGrid(ball, resolution), p);
    });
}

/// Indicator of an axis-aligned box, sampled on that box.
inline double indicator_mixed_norm(const Box& box, const ExponentVector& p, int resolution)
{
    Lattice lattice(box, resolution);
    return detail::iterated_norm(std::vector<double>(lattice.size(), 1.0), lattice, p);
}

/// ||v||_{L^r(B)} for in-ball node values on a ball grid; r = inf gives the
/// node maximum.
inline double lr_norm(const BallGrid& grid, const std::vector<double>& in_ball, double r)
{
    if (in_ball.size() != grid.count())
        throw dimension_mismatch("lr_norm: value count differs from in-ball node count");
    if (std::isinf(r)) {
        double m = 0.0;
        for (double v : in_ball)
            m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (double v : in_ball)
        acc += r == 1.0 ? std::abs(v) : std::pow(std::abs(v), r);
    return std::pow(acc * grid.weight(), 1.0 / r);
}

inline double lr_norm_on_ball(const Field& f, const AnisotropicBall& ball, double r, int resolution)
{
    if (!(r >= 1.0))
        throw invalid_input("lr_norm_on_ball: exponent must be >= 1");
    BallGrid grid(ball, resolution);
    return lr_norm(grid, grid.sample(f), r);
}

inline double lr_norm_on_ball(const GridFunction& f, const AnisotropicBall& ball, double r)
{
    return lr_norm_on_ball(as_field(f), ball, r, default_resolution(f.dimension()));
}

} // namespace amh
