#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "amh/error.hpp"
#include "amh/grid.hpp"
#include "amh/oracles.hpp"

using namespace amh;

TEST(Lattice, MidpointNodesAndCellVolume)
{
    const Lattice lat(Box({-1.0, 0.0}, {1.0, 2.0}), std::vector<int>{4, 2});
    EXPECT_EQ(lat.size(), 8u);
    EXPECT_DOUBLE_EQ(lat.cell_volume(), 0.5 * 1.0);
    // Axis 0 varies fastest.
    EXPECT_DOUBLE_EQ(lat.node(0)[0], -0.75);
    EXPECT_DOUBLE_EQ(lat.node(1)[0], -0.25);
    EXPECT_DOUBLE_EQ(lat.node(4)[1], 1.5);
    EXPECT_EQ(lat.locate(Point{0.1, 1.9}), 6u);
    EXPECT_EQ(lat.locate(Point{1.5, 1.0}), Lattice::npos);
}

TEST(Lattice, InvalidBoxRejected)
{
    EXPECT_THROW(Lattice(Box({0.0}, {0.0}), 4), degenerate_domain);
    EXPECT_THROW(Lattice(Box({0.0}, {1.0}), 0), invalid_input);
}

TEST(Sample, FamilyExamples)
{
    const auto step = sample(FunctionFamily{FamilyKind::sign_step, {}, 0, ""}, Box::cube(1, -1, 1), {4});
    EXPECT_EQ(step.values(), (std::vector<double>{-1, -1, 1, 1}));

    // Peak of the bump, sampled at a node placed on the center.
    const auto bump = sample(FunctionFamily{FamilyKind::gaussian_bump, {1.0, 0.0}, 0, ""}, Box::cube(1, -1, 1), {3});
    EXPECT_DOUBLE_EQ(bump.values()[1], 1.0);

    const FunctionFamily poly{FamilyKind::random_polynomial, {2.0}, 42, ""};
    EXPECT_EQ(sample(poly, Box::cube(2, -1, 1), {8, 8}).values(), sample(poly, Box::cube(2, -1, 1), {8, 8}).values());
    const FunctionFamily other{FamilyKind::random_polynomial, {2.0}, 43, ""};
    EXPECT_NE(sample(poly, Box::cube(2, -1, 1), {8, 8}).values(), sample(other, Box::cube(2, -1, 1), {8, 8}).values());
}

TEST(Sample, FamilyNamesRoundTrip)
{
    for (auto kind : {FamilyKind::gaussian_bump, FamilyKind::random_polynomial, FamilyKind::sign_step,
                      FamilyKind::trig_mixture, FamilyKind::csv_import, FamilyKind::abs_ridge, FamilyKind::constant})
        EXPECT_EQ(parse_family_kind(family_kind_name(kind)), kind);
    EXPECT_THROW(parse_family_kind("wavelet"), invalid_input);
}

TEST(Integrate, Examples)
{
    const auto one = sample([](auto) { return 1.0; }, Box::cube(2, 0, 1), {16, 16});
    EXPECT_NEAR(integrate(one), 1.0, 1e-14);
    for (int res : {3, 10, 101}) {
        const auto x = sample([](auto y) { return y[0]; }, Box::cube(1, -1, 1), {res});
        EXPECT_NEAR(integrate(x), 0.0, 1e-14);
    }
    const auto sq = sample([](auto y) { return y[0] * y[0]; }, Box::cube(1, 0, 1), {64});
    EXPECT_NEAR(integrate(sq), 1.0 / 3.0, 1e-4);
}

TEST(Integrate, MatchesMidpointOracle)
{
    auto f = [](double x) { return std::exp(x) * std::sin(3 * x); };
    const auto g = sample([&](auto y) { return f(y[0]); }, Box::cube(1, -0.5, 2.0), {200});
    EXPECT_NEAR(integrate(g), oracle::midpoint_integral(f, -0.5, 2.0, 200), 1e-12);
}

TEST(RestrictToBall, IndicatorAndVolume)
{
    const AnisotropicBall ball({0.1, -0.2}, 0.6, AnisotropyVector({1.0, 1.5}));
    const Field one{Box::cube(2, -1, 1), [](auto) { return 1.0; }};
    const auto chi = restrict_to_ball(one, ball, 256);
    for (std::size_t k = 0; k < chi.values().size(); ++k) {
        const auto y = chi.lattice().node(k);
        EXPECT_EQ(chi.values()[k], ball.contains(y) ? 1.0 : 0.0);
    }
    EXPECT_NEAR(integrate(chi), ball.volume(), 0.02 * ball.volume());
}

TEST(RestrictToBall, DisjointIsDegenerate)
{
    const Field one{Box::cube(2, -1, 1), [](auto) { return 1.0; }};
    // Bounding box [1, 2] x [-0.5, 0.5] touches the domain only along x = 1.
    const AnisotropicBall tangent({1.5, 0.0}, 0.5, AnisotropyVector::isotropic(2));
    EXPECT_THROW(restrict_to_ball(one, tangent, 32), degenerate_domain);
}

TEST(BallGrid, MeasureConvergesToVolume)
{
    const AnisotropicBall ball({0.0, 0.0}, 0.8, AnisotropyVector({1.0, 2.0}));
    double previous = 1.0;
    for (int res : {32, 128, 512}) {
        const double rel = std::abs(BallGrid(ball, res).measure() - ball.volume()) / ball.volume();
        EXPECT_LT(rel, previous + 1e-3);
        previous = rel;
    }
    EXPECT_LT(previous, 5e-3);
}

TEST(BallGrid, ToGridInvertsSample)
{
    const AnisotropicBall ball({0.0}, 0.5, AnisotropyVector({1.0}));
    const BallGrid g(ball, 16);
    const Field f{Box::cube(1, -1, 1), [](auto y) { return 3 * y[0] + 1; }};
    const auto v = g.sample(f);
    const auto grid = g.to_grid(v);
    EXPECT_EQ(g.sample(grid), v);
    EXPECT_THROW(g.to_grid(std::vector<double>(3)), dimension_mismatch);
}

TEST(GridFunction, Transformations)
{
    const auto f = sample([](auto y) { return y[0] + 2 * y[1]; }, Box::cube(2, 0, 1), {4, 4});
    const auto g = f.scaled(-2.0);
    const auto h = f.combined(1.0, g, 0.5);
    for (std::size_t k = 0; k < f.values().size(); ++k) {
        EXPECT_DOUBLE_EQ(g.values()[k], -2.0 * f.values()[k]);
        EXPECT_DOUBLE_EQ(h.values()[k], 0.0);
    }
    const auto t = f.translated(Point{1.0, -1.0});
    EXPECT_DOUBLE_EQ(t.at(Point{1.125, -0.875}), f.at(Point{0.125, 0.125}));
    const auto other = sample([](auto) { return 1.0; }, Box::cube(2, 0, 2), {4, 4});
    EXPECT_THROW(f.combined(1.0, other, 1.0), incompatible_parameters);
}

TEST(Csv, RoundTripAndFormatErrors)
{
    const auto f = sample(FunctionFamily{FamilyKind::trig_mixture, {}, 9, ""}, Box({-1.0, 0.0}, {1.0, 3.0}), {5, 3});
    std::stringstream ss;
    write_csv(ss, f);
    const auto g = read_csv(ss);
    EXPECT_EQ(g.lattice(), f.lattice());
    ASSERT_EQ(g.values().size(), f.values().size());
    for (std::size_t k = 0; k < f.values().size(); ++k)
        EXPECT_DOUBLE_EQ(g.values()[k], f.values()[k]);

    std::stringstream short_rows("1,4,0,1\n1,2,3\n");
    EXPECT_THROW(read_csv(short_rows), format_error);
    std::stringstream bad_header("2,4,0,1\n1,2,3,4\n");
    EXPECT_THROW(read_csv(bad_header), format_error);
    std::stringstream bad_value("1,2,0,1\n1,abc\n");
    EXPECT_THROW(read_csv(bad_value), format_error);
}
