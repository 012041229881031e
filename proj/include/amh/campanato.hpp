#pragma once

// Anisotropic mixed-norm Campanato seminorm
//
//   sup_B inf_P |B| / ||chi_B||_{L^p} [ (1/|B|) int_B |g - P|^q ]^{1/q}
//
// with the supremum replaced by a finite search over a ball lattice plus local
// refinement. Every reported value is attained by an explicit ball, so it is a
// lower bound for the continuum supremum.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "amh/anisotropy.hpp"
#include "amh/approx.hpp"
#include "amh/error.hpp"
#include "amh/grid.hpp"
#include "amh/mixed_norm.hpp"
#include "amh/polyproj.hpp"

namespace amh {

struct CampanatoParams {
    AnisotropyVector a;
    ExponentVector p;
    double q = 1.0;
    int s = 0;

    void validate() const
    {
        if (a.dimension() != p.dimension())
            throw dimension_mismatch("campanato: anisotropy and exponent dimensions differ");
        if (!(q >= 1.0))
            throw invalid_input("campanato: q must lie in [1, inf]");
        if (s < 0)
            throw invalid_input("campanato: s must be nonnegative");
    }
};

struct CampanatoOptions {
    int resolution = 0; // per-axis samples on each ball's bounding box; 0 = default for the dimension
    ApproxOptions approx;
    double max_failure_fraction = 0.10;

    [[nodiscard]] int resolution_for(std::size_t n) const { return resolution > 0 ? resolution : default_resolution(n); }
};

struct BallSearchDomain {
    std::vector<Point> centers;
    std::vector<double> radii;
    int refinement_rounds = 2;
    std::vector<AnisotropicBall> extra_balls; // always evaluated, e.g. atom supports

    /// Centers at the cell midpoints of a `centers_per_axis` lattice on `box`,
    /// `radius_count` log-spaced radii in [r_min, r_max]. r_max <= 0 selects
    /// the largest radius whose bounding box fits in `box`.
    static BallSearchDomain lattice(const Box& box, const AnisotropyVector& a, int centers_per_axis, double r_min,
                                    double r_max, int radius_count, int rounds)
    {
        if (centers_per_axis < 1 || radius_count < 1)
            throw invalid_input("search domain: lattice must be nonempty");
        if (r_max <= 0.0) {
            r_max = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < box.dimension(); ++i)
                r_max = std::min(r_max, std::pow(0.5 * box.width(i), 1.0 / a[i]));
        }
        if (r_min <= 0.0)
            r_min = r_max / 8.0;
        if (!(r_min > 0.0) || r_min > r_max)
            throw invalid_input("search domain: radius bounds must satisfy 0 < r_min <= r_max");
        BallSearchDomain d;
        d.refinement_rounds = rounds;
        const std::size_t n = box.dimension();
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i)
            total *= static_cast<std::size_t>(centers_per_axis);
        for (std::size_t flat = 0; flat < total; ++flat) {
            Point c(n);
            std::size_t rest = flat;
            for (std::size_t i = 0; i < n; ++i) {
                const auto k = static_cast<double>(rest % centers_per_axis);
                rest /= centers_per_axis;
                c[i] = box.lower[i] + (k + 0.5) / centers_per_axis * box.width(i);
            }
            d.centers.push_back(std::move(c));
        }
        for (int j = 0; j < radius_count; ++j) {
            const double t = radius_count == 1 ? 1.0 : static_cast<double>(j) / (radius_count - 1);
            d.radii.push_back(r_min * std::pow(r_max / r_min, t));
        }
        d.radii.back() = r_max;
        return d;
    }
};

/// |B| / ||chi_B||_{L^p}, both on the ball's own lattice.
inline double campanato_weight(const BallGrid& grid, const ExponentVector& p)
{
    return grid.measure() / indicator_mixed_norm(grid, p);
}

struct BallEvaluation {
    AnisotropicBall ball;
    double weight = 0.0;
    double error = 0.0;     // normalized best-approximation error
    double raw_error = 0.0; // ||g - P||_{L^q(B)}
    double value = 0.0;     // weight * error
    Eigen::VectorXd coordinates;
    std::shared_ptr<const OrthonormalBasis> basis;
};

inline BallEvaluation evaluate_ball(const Field& g, const CampanatoParams& params, const AnisotropicBall& ball,
                                    const CampanatoOptions& options = {},
                                    std::span<const Eigen::VectorXd> candidates = {})
{
    auto grid = std::make_shared<const BallGrid>(ball, options.resolution_for(ball.dimension()));
    auto basis = std::make_shared<const OrthonormalBasis>(build_basis(grid, params.s));
    const auto values = grid->sample(g);
    const auto best = best_approximation(*basis, values, params.q, options.approx, candidates);
    BallEvaluation out;
    out.ball = ball;
    out.weight = campanato_weight(*grid, params.p);
    out.error = best.error;
    out.raw_error = best.raw_error;
    out.value = out.weight * out.error;
    out.coordinates = best.coordinates;
    out.basis = std::move(basis);
    return out;
}

struct PolyErrorResult {
    double error = 0.0;
    double raw_error = 0.0;
    PolynomialRep argmin;
};

/// inf_P [(1/|B|) int_B |g - P|^q]^{1/q} (max |g - P| for q = inf) and its minimizer.
inline PolyErrorResult best_poly_error(const Field& g, const AnisotropicBall& ball, double q, int s,
                                       const CampanatoOptions& options = {})
{
    auto grid = std::make_shared<const BallGrid>(ball, options.resolution_for(ball.dimension()));
    const auto basis = build_basis(grid, s);
    const auto best = best_approximation(basis, grid->sample(g), q, options.approx);
    return {best.error, best.raw_error, basis.combine(best.coordinates)};
}

inline PolyErrorResult best_poly_error(const GridFunction& g, const AnisotropicBall& ball, double q, int s,
                                       const CampanatoOptions& options = {})
{
    return best_poly_error(as_field(g), ball, q, s, options);
}

struct CampanatoResult {
    double value = 0.0;
    std::optional<AnisotropicBall> witness;
    double witness_weight = 0.0;
    double witness_error = 0.0;
    std::size_t evaluated = 0;
    std::size_t failures = 0;
    std::size_t skipped = 0; // balls not contained in the data domain
};

namespace detail {

inline bool ball_fits(const Box& domain, const AnisotropicBall& ball)
{
    return domain.contains(Box::bounding(ball), 1e-9);
}

class SeminormSearch {
public:
    SeminormSearch(const Field& g, const CampanatoParams& params, const CampanatoOptions& options)
        : g_(g), params_(params), options_(options)
    {
    }

    // Value at one ball, or -inf when the ball is skipped or fails.
    double visit(const AnisotropicBall& ball)
    {
        if (!ball_fits(g_.domain, ball)) {
            ++result_.skipped;
            return -std::numeric_limits<double>::infinity();
        }
        ++result_.evaluated;
        try {
            const auto e = evaluate_ball(g_, params_, ball, options_);
            if (!result_.witness || e.value > result_.value) {
                result_.value = e.value;
                result_.witness = ball;
                result_.witness_weight = e.weight;
                result_.witness_error = e.error;
            }
            return e.value;
        } catch (const numerical_error&) {
            ++result_.failures;
            return -std::numeric_limits<double>::infinity();
        }
    }

    CampanatoResult& result() { return result_; }

private:
    const Field& g_;
    const CampanatoParams& params_;
    const CampanatoOptions& options_;
    CampanatoResult result_;
};

} // namespace detail

inline CampanatoResult campanato_seminorm(const Field& g, const CampanatoParams& params, const BallSearchDomain& domain,
                                          const CampanatoOptions& options = {})
{
    params.validate();
    if (g.domain.dimension() != params.a.dimension())
        throw dimension_mismatch("campanato: function and anisotropy dimensions differ");
    detail::SeminormSearch search(g, params, options);

    for (const auto& c : domain.centers)
        for (double r : domain.radii)
            search.visit(AnisotropicBall(c, r, params.a));
    for (const auto& b : domain.extra_balls)
        search.visit(b);

    if (search.result().witness && !domain.radii.empty()) {
        const double r_lo = *std::min_element(domain.radii.begin(), domain.radii.end());
        const double r_hi = *std::max_element(domain.radii.begin(), domain.radii.end());
        const double ratio = domain.radii.size() > 1 ? std::pow(r_hi / r_lo, 1.0 / (domain.radii.size() - 1)) : 1.5;
        std::vector<double> spacing(g.domain.dimension());
        const double per_axis = std::round(std::pow(static_cast<double>(std::max<std::size_t>(domain.centers.size(), 1)),
                                                    1.0 / static_cast<double>(spacing.size())));
        for (std::size_t i = 0; i < spacing.size(); ++i)
            spacing[i] = g.domain.width(i) / std::max(per_axis, 1.0);

        for (int round = 0; round < domain.refinement_rounds; ++round) {
            const AnisotropicBall start = *search.result().witness;
            // Golden-section on log radius at fixed center.
            const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
            double lo = std::log(std::max(start.radius() / ratio, r_lo));
            double hi = std::log(std::min(start.radius() * ratio, r_hi));
            auto at = [&](double lr) { return search.visit(AnisotropicBall(start.center(), std::exp(lr), params.a)); };
            double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
            double f1 = at(x1), f2 = at(x2);
            for (int it = 0; it < 10 && hi - lo > 1e-6; ++it) {
                if (f1 < f2) {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + phi * (hi - lo);
                    f2 = at(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - phi * (hi - lo);
                    f1 = at(x1);
                }
            }
            // Coordinate descent on the center with a shrinking step.
            for (int pass = 0; pass < 2; ++pass) {
                bool improved = false;
                for (std::size_t i = 0; i < spacing.size(); ++i) {
                    for (double sign : {-1.0, 1.0}) {
                        const AnisotropicBall base = *search.result().witness;
                        const double before = search.result().value;
                        Point c = base.center();
                        c[i] += sign * spacing[i] / std::pow(2.0, round + pass + 1);
                        search.visit(AnisotropicBall(c, base.radius(), params.a));
                        improved = improved || search.result().value > before;
                    }
                }
                if (!improved)
                    break;
            }
        }
    }

    auto& result = search.result();
    if (result.evaluated == 0)
        throw invalid_input("campanato: no searched ball lies inside the function's domain");
    if (static_cast<double>(result.failures) > options.max_failure_fraction * static_cast<double>(result.evaluated))
        throw convergence_error("campanato: " + std::to_string(result.failures) + " of " +
                                std::to_string(result.evaluated) + " ball evaluations failed");
    return result;
}

inline CampanatoResult campanato_seminorm(const GridFunction& g, const CampanatoParams& params,
                                          const BallSearchDomain& domain, const CampanatoOptions& options = {})
{
    return campanato_seminorm(as_field(g), params, domain, options);
}

/// Every ball the search domain names directly (no refinement), restricted to
/// those that fit in `box`.
inline std::vector<AnisotropicBall> enumerate_balls(const BallSearchDomain& domain, const AnisotropyVector& a,
                                                    const Box& box)
{
    std::vector<AnisotropicBall> balls;
    for (const auto& c : domain.centers)
        for (double r : domain.radii) {
            AnisotropicBall b(c, r, a);
            if (detail::ball_fits(box, b))
                balls.push_back(std::move(b));
        }
    for (const auto& b : domain.extra_balls)
        if (detail::ball_fits(box, b))
            balls.push_back(b);
    return balls;
}

struct MonotonicityResult {
    double v1 = 0.0;
    double v2 = 0.0;
    bool pass = false;
    std::size_t balls = 0;
};

/// Seminorms at q1 < q2 on one shared ball set. The q1 infimum also tries
/// the q2 minimizer.
inline MonotonicityResult q_monotonicity_check(const Field& g, const CampanatoParams& params,
                                               const BallSearchDomain& domain, double q1, double q2,
                                               const CampanatoOptions& options = {}, double tolerance = 1e-6)
{
    if (!(q1 >= 1.0 && q2 >= 1.0 && q1 <= q2))
        throw invalid_input("q_monotonicity_check: need 1 <= q1 <= q2 <= inf");
    const auto balls = enumerate_balls(domain, params.a, g.domain);
    if (balls.empty())
        throw invalid_input("q_monotonicity_check: empty ball set");
    CampanatoParams p1 = params, p2 = params;
    p1.q = q1;
    p2.q = q2;
    MonotonicityResult out;
    for (const auto& b : balls) {
        const auto e2 = evaluate_ball(g, p2, b, options);
        const Eigen::VectorXd candidate = e2.coordinates;
        const auto e1 = evaluate_ball(g, p1, b, options, std::span<const Eigen::VectorXd>(&candidate, 1));
        out.v1 = std::max(out.v1, e1.value);
        out.v2 = std::max(out.v2, e2.value);
    }
    out.balls = balls.size();
    out.pass = out.v1 <= out.v2 * (1.0 + tolerance) + 1e-300;
    return out;
}

} // namespace amh
