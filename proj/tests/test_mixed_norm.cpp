#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "amh/error.hpp"
#include "amh/mixed_norm.hpp"
#include "amh/rng.hpp"

using namespace amh;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

GridFunction random_function(Rng& rng, const Lattice& lat)
{
    std::vector<double> v(lat.size());
    for (auto& x : v)
        x = rng.normal();
    return GridFunction(lat, std::move(v));
}

} // namespace

TEST(MixedNorm, RectangleExample)
{
    const auto chi = sample([](auto) { return 1.0; }, Box({0.0, 0.0}, {1.0, 2.0}), {32, 64});
    EXPECT_NEAR(mixed_lebesgue_norm(chi, ExponentVector({1.0, 2.0})), std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(indicator_mixed_norm(Box({0.0, 0.0}, {1.0, 2.0}), ExponentVector({1.0, 2.0}), 16), std::sqrt(2.0), 1e-12);
}

TEST(MixedNorm, RectangleInsideLargerBox)
{
    // chi_[0.25,0.75] x [0,1.5] on [0,1] x [0,2]; cell-aligned at 8 x 8.
    const auto chi = sample([](auto y) { return y[0] > 0.25 && y[0] < 0.75 && y[1] < 1.5 ? 1.0 : 0.0; },
                            Box({0.0, 0.0}, {1.0, 2.0}), {8, 8});
    const ExponentVector p({0.5, 3.0});
    EXPECT_NEAR(mixed_lebesgue_norm(chi, p), std::pow(0.5, 2.0) * std::pow(1.5, 1.0 / 3.0), 1e-12);
    EXPECT_NEAR(mixed_lebesgue_norm(chi, ExponentVector({inf, 2.0})), std::sqrt(1.5), 1e-12);
}

TEST(MixedNorm, ZeroFunction)
{
    const auto zero = GridFunction::zeros(Lattice(Box::cube(3, 0, 1), 4));
    EXPECT_EQ(mixed_lebesgue_norm(zero, ExponentVector({0.5, 1.0, inf})), 0.0);
}

TEST(MixedNorm, DimensionMismatch)
{
    const auto f = GridFunction::zeros(Lattice(Box::cube(2, 0, 1), 4));
    EXPECT_THROW(mixed_lebesgue_norm(f, ExponentVector({1.0})), dimension_mismatch);
}

TEST(MixedNorm, IsotropicCollapse)
{
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 1 + i % 3;
        const auto f = random_function(rng, Lattice(Box::cube(n, -1, 2), n == 3 ? 8 : 24));
        const double p = rng.uniform(0.3, 5.0);
        const double classical = lebesgue_norm(f, p);
        EXPECT_NEAR(mixed_lebesgue_norm(f, ExponentVector::uniform(n, p)), classical, 1e-12 * classical);
    }
}

TEST(MixedNorm, AllInfiniteIsMax)
{
    Rng rng(4);
    const auto f = random_function(rng, Lattice(Box::cube(2, 0, 1), 10));
    double m = 0.0;
    for (double v : f.values())
        m = std::max(m, std::abs(v));
    EXPECT_EQ(mixed_lebesgue_norm(f, ExponentVector({inf, inf})), m);
}

TEST(MixedNorm, OrderSensitive)
{
    // f(x1, x2) = 1 on {x1 < 1/2, x2 < 1/2} plus 1 on {x1 > 1/2, x2 > 1/2} fails
    // to separate orders, so use a triangle-like set instead.
    const auto f = sample([](auto y) { return y[0] < y[1] ? 1.0 : 0.0; }, Box::cube(2, 0, 1), {64, 64});
    const double a = mixed_lebesgue_norm(f, ExponentVector({1.0, 0.5}));
    const double b = mixed_lebesgue_norm(f, ExponentVector({0.5, 1.0}));
    EXPECT_GT(std::abs(a - b), 1e-3);
}

TEST(MixedNorm, HomogeneousAndMonotone)
{
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const auto f = random_function(rng, Lattice(Box::cube(2, -1, 1), 12));
        const ExponentVector p({rng.uniform(0.3, 4.0), rng.uniform(0.3, 4.0)});
        const double alpha = rng.uniform(-4.0, 4.0);
        const double base = mixed_lebesgue_norm(f, p);
        EXPECT_NEAR(mixed_lebesgue_norm(f.scaled(alpha), p), std::abs(alpha) * base, 1e-12 * std::abs(alpha) * base);
        auto v = f.values();
        for (auto& x : v)
            x *= rng.uniform();
        EXPECT_LE(mixed_lebesgue_norm(GridFunction(f.lattice(), v), p), base * (1 + 1e-12));
    }
}

TEST(IndicatorNorm, IsotropicDisk)
{
    for (double p : {0.5, 1.0, 2.0, 3.0}) {
        const AnisotropicBall ball({0.2, -0.1}, 0.7, AnisotropyVector::isotropic(2));
        const double expect = std::pow(M_PI * 0.49, 1.0 / p);
        EXPECT_NEAR(indicator_mixed_norm(ball, ExponentVector::uniform(2, p), 256), expect, 0.02 * expect);
    }
}

TEST(IndicatorNorm, AnisotropicScaling)
{
    // chi of B(0, 2r) is chi of B(0, r) dilated by 2^a, so the norm scales by
    // 2^{a_1/p_1 + a_2/p_2}.
    const AnisotropyVector a({1.0, 2.0});
    const ExponentVector p({0.5, 2.0});
    const double small = indicator_mixed_norm(AnisotropicBall({0, 0}, 0.3, a), p, 256);
    const double big = indicator_mixed_norm(AnisotropicBall({0, 0}, 0.6, a), p, 256);
    EXPECT_NEAR(big / small, std::pow(2.0, 1.0 / 0.5 + 2.0 / 2.0), 1e-9 * big / small);
}

TEST(IndicatorNorm, CacheReturnsSameValue)
{
    const AnisotropicBall ball({0.0, 0.0}, 0.5, AnisotropyVector({1.0, 1.5}));
    const ExponentVector p({0.7, 1.3});
    const double first = indicator_mixed_norm(ball, p, 64);
    indicator_norm_cache().clear();
    EXPECT_EQ(indicator_mixed_norm(ball, p, 64), first);
    EXPECT_EQ(indicator_mixed_norm(ball, p, 64), first);
}

TEST(LrNorm, Examples)
{
    const AnisotropicBall unit({0.0}, 1.0, AnisotropyVector({1.0}));
    const Field x{Box::cube(1, -1, 1), [](auto y) { return y[0]; }};
    EXPECT_NEAR(lr_norm_on_ball(x, unit, 2.0, 1024), std::sqrt(2.0 / 3.0), 1e-3);

    const AnisotropicBall b({0.1, 0.2}, 0.7, AnisotropyVector({1.0, 1.5}));
    const Field c{Box::cube(2, -2, 2), [](auto) { return -1.5; }};
    EXPECT_NEAR(lr_norm_on_ball(c, b, 2.0, 256), 1.5 * std::sqrt(b.volume()), 0.02 * 1.5 * std::sqrt(b.volume()));
    EXPECT_EQ(lr_norm_on_ball(c, b, inf, 32), 1.5);
    EXPECT_THROW(lr_norm_on_ball(c, b, 0.5, 32), invalid_input);
}
