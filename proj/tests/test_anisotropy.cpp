#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "amh/anisotropy.hpp"
#include "amh/error.hpp"
#include "amh/oracles.hpp"
#include "amh/rng.hpp"

using namespace amh;

namespace {

const AnisotropyVector a11({1.0, 1.0});
const AnisotropyVector a12({1.0, 2.0});

AnisotropyVector random_a(Rng& rng, std::size_t n)
{
    std::vector<double> a(n);
    for (auto& v : a)
        v = rng.uniform(1.0, 3.0);
    return AnisotropyVector(a);
}

Point random_point(Rng& rng, std::size_t n)
{
    Point x(n);
    for (auto& v : x)
        v = rng.normal() * std::exp(rng.uniform(-3.0, 3.0));
    return x;
}

} // namespace

TEST(QuasiNorm, Examples)
{
    EXPECT_NEAR(quasi_norm(a11, Point{3, 4}), 5.0, 1e-12);
    EXPECT_NEAR(quasi_norm(a12, Point{0, 4}), 2.0, 1e-12);
    EXPECT_NEAR(quasi_norm(a12, Point{1, 1}), oracle::golden_quasi_norm(), 1e-12);
    EXPECT_NEAR(quasi_norm(a12, Point{1, 1}), 1.272020, 1e-6);
    EXPECT_EQ(quasi_norm(a12, Point{0, 0}), 0.0);
}

TEST(QuasiNorm, NonFiniteInputRejected)
{
    EXPECT_THROW(quasi_norm(a12, Point{std::numeric_limits<double>::quiet_NaN(), 1}), invalid_input);
    EXPECT_THROW(quasi_norm(a12, Point{std::numeric_limits<double>::infinity(), 1}), invalid_input);
    EXPECT_THROW(AnisotropyVector({0.5, 1.0}), invalid_input);
    EXPECT_THROW(quasi_norm(a12, Point{1, 2, 3}), dimension_mismatch);
}

TEST(QuasiNorm, MatchesBisectionOracle)
{
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const std::size_t n = 1 + i % 3;
        const auto a = random_a(rng, n);
        const auto x = random_point(rng, n);
        const double ref = oracle::bisection_quasi_norm(a.components(), x);
        EXPECT_NEAR(quasi_norm(a, x), ref, 4e-12 * ref);
    }
}

TEST(QuasiNorm, BracketHasSignChangeAndTightWidth)
{
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 1 + i % 3;
        const auto a = random_a(rng, n);
        const auto x = random_point(rng, n);
        const auto sol = solve_quasi_norm(a, x);
        EXPECT_GE(quasi_norm_residual(a, x, sol.lower), 1.0);
        EXPECT_LE(quasi_norm_residual(a, x, sol.upper), 1.0);
        EXPECT_LE((sol.upper - sol.lower) / sol.upper, 1e-12);
    }
}

TEST(QuasiNorm, HomogeneityTriangleEuclidean)
{
    Rng rng(13);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t n = 1 + i % 3;
        const auto a = random_a(rng, n);
        const auto x = random_point(rng, n);
        const auto y = random_point(rng, n);
        const double t = 50.0 * rng.uniform() + 1e-3;
        const double nx = quasi_norm(a, x);
        EXPECT_NEAR(quasi_norm(a, dilate(a, t, x)), t * nx, 1e-9 * t * nx);
        Point s(n);
        for (std::size_t k = 0; k < n; ++k)
            s[k] = x[k] + y[k];
        EXPECT_LE(quasi_norm(a, s), (nx + quasi_norm(a, y)) * (1.0 + 1e-9));
        double e = 0.0;
        for (double v : x)
            e += v * v;
        EXPECT_NEAR(quasi_norm(AnisotropyVector::isotropic(n), x), std::sqrt(e), 1e-10 * std::sqrt(e));
    }
}

TEST(Dilate, Examples)
{
    const auto d = dilate(a12, 4.0, Point{1, 1});
    EXPECT_DOUBLE_EQ(d[0], 4.0);
    EXPECT_DOUBLE_EQ(d[1], 16.0);
    const Point x{0.3, -2.5};
    EXPECT_EQ(dilate(a12, 1.0, x), x);
    const auto z = dilate(a12, 0.0, Point{5, 7});
    EXPECT_EQ(z[0], 0.0);
    EXPECT_EQ(z[1], 0.0);
}

TEST(Dilate, GroupLaw)
{
    Rng rng(14);
    for (int i = 0; i < 100; ++i) {
        const auto a = random_a(rng, 3);
        const auto x = random_point(rng, 3);
        const double s = rng.uniform(0.1, 3.0), t = rng.uniform(0.1, 3.0);
        const auto lhs = dilate(a, s, dilate(a, t, x));
        const auto rhs = dilate(a, s * t, x);
        for (std::size_t k = 0; k < 3; ++k)
            EXPECT_NEAR(lhs[k], rhs[k], 1e-12 * std::abs(rhs[k]) + 1e-300);
    }
}

TEST(Bracket, Examples)
{
    EXPECT_NEAR(bracket(a12, Point{0, 0}), 1.0, 1e-12);
    EXPECT_NEAR(bracket(AnisotropyVector({1.0}), Point{0.0}), 1.0, 1e-12);
    EXPECT_NEAR(bracket(AnisotropyVector({1.0}), Point{std::sqrt(3.0)}), 2.0, 1e-12);
}

TEST(Bracket, AtLeastOneAndDominatesNorm)
{
    Rng rng(15);
    for (int i = 0; i < 200; ++i) {
        const auto a = random_a(rng, 2);
        const auto x = random_point(rng, 2);
        const double b = bracket(a, x);
        EXPECT_GE(b, 1.0 - 1e-12);
        EXPECT_GE(b, quasi_norm(a, x) * (1.0 - 1e-12));
    }
}

TEST(Ball, MembershipExamples)
{
    EXPECT_FALSE(ball_membership(AnisotropicBall({0, 0}, 2.0, a12), Point{0, 4}));
    EXPECT_TRUE(ball_membership(AnisotropicBall({0.3, -1}, 0.1, a12), Point{0.3, -1}));
    EXPECT_FALSE(ball_membership(AnisotropicBall({0, 0}, 1.0, a11), Point{1, 1}));
}

TEST(Ball, MembershipIsDilationInvariant)
{
    Rng rng(16);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 1 + i % 3;
        const auto a = random_a(rng, n);
        const Point c = random_point(rng, n);
        const double r = std::exp(rng.uniform(-2.0, 2.0));
        Point d(n), y(n);
        for (std::size_t k = 0; k < n; ++k) {
            d[k] = rng.normal() * 0.8 * std::pow(r, a[k]);
            y[k] = c[k] + d[k];
        }
        const Point u = dilate(a, 1.0 / r, d);
        if (std::abs(quasi_norm(a, u) - 1.0) < 1e-9)
            continue;
        EXPECT_EQ(AnisotropicBall(c, r, a).contains(y), AnisotropicBall(Point(n, 0.0), 1.0, a).contains(u));
    }
}

TEST(Ball, VolumeFormula)
{
    EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-15);
    EXPECT_NEAR(unit_ball_volume(2), M_PI, 1e-15);
    EXPECT_NEAR(unit_ball_volume(3), 4.0 * M_PI / 3.0, 1e-14);
    const AnisotropicBall b({0, 0}, 0.5, a12);
    EXPECT_NEAR(b.volume(), M_PI * std::pow(0.5, 3.0), 1e-15);
    EXPECT_NEAR(b.half_widths()[1], 0.25, 1e-15);
}

TEST(Params, SMinExamples)
{
    EXPECT_EQ(s_min(a12, ExponentVector({0.5, 1.0})), 3);
    EXPECT_EQ(s_min(a12, ExponentVector({1.0, 4.0})), 0);
    EXPECT_EQ(s_min(AnisotropyVector({2.0, 3.0}), ExponentVector({1.0, 1.0})), 0);
    EXPECT_EQ(s_min(a11, ExponentVector({2.0 / 3.0, 2.0 / 3.0})), 1);
}

TEST(Params, GrandMaximalOrderExamples)
{
    EXPECT_EQ(grand_maximal_order(a11, ExponentVector({1.0, 1.0})), 9);
    EXPECT_EQ(grand_maximal_order(a11, ExponentVector({2.0, 2.0})), 9);
    EXPECT_EQ(grand_maximal_order(a12, ExponentVector({1.0, 1.0})), 20);
}

TEST(Params, OrderAtLeastSMin)
{
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const auto a = random_a(rng, 2);
        const ExponentVector p({rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0)});
        EXPECT_GE(s_min(a, p), 0);
        EXPECT_GT(grand_maximal_order(a, p), s_min(a, p));
    }
}

TEST(Exponents, DerivedQuantities)
{
    const ExponentVector p({0.5, 2.0});
    EXPECT_EQ(p.p_minus(), 0.5);
    EXPECT_EQ(p.p_plus(), 2.0);
    EXPECT_EQ(p.p_underline(), 0.5);
    EXPECT_FALSE(p.within_unit_cube());
    EXPECT_EQ(ExponentVector({3.0, 2.0}).p_underline(), 1.0);
    EXPECT_THROW(ExponentVector({0.0, 1.0}), invalid_input);
    EXPECT_DOUBLE_EQ(a12.nu(), 3.0);
    EXPECT_DOUBLE_EQ(a12.a_minus(), 1.0);
    EXPECT_DOUBLE_EQ(a12.a_plus(), 2.0);
}
