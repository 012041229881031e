#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "amh/duality.hpp"
#include "amh/error.hpp"
#include "amh/rng.hpp"

using namespace amh;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

Field family(std::size_t n, FamilyKind kind, std::uint64_t seed, std::vector<double> params = {})
{
    return as_field(FunctionFamily{kind, std::move(params), seed, ""}, Box::cube(n, -1, 1));
}

const AnisotropicBall unit({0.0}, 1.0, AnisotropyVector({1.0}));
const Field identity{Box::cube(1, -1, 1), [](auto y) { return y[0]; }};

} // namespace

TEST(Pairing, IndicatorAndBilinearity)
{
    const Lattice lat(Box::cube(1, 0, 1), 64);
    const GridFunction one(lat, std::vector<double>(lat.size(), 1.0));
    EXPECT_NEAR(pairing(one, one), 1.0, 1e-12);

    const auto f = sample(FunctionFamily{FamilyKind::trig_mixture, {}, 3, ""}, Box::cube(2, -1, 1), {16, 16});
    const auto h = sample(FunctionFamily{FamilyKind::gaussian_bump, {0.4}, 0, ""}, Box::cube(2, -1, 1), {16, 16});
    const auto g = family(2, FamilyKind::trig_mixture, 4);
    const double lin = pairing(f.combined(2.0, h, -3.0), g);
    EXPECT_NEAR(lin, 2.0 * pairing(f, g) - 3.0 * pairing(h, g), 1e-12);
}

TEST(Pairing, DisjointDomains)
{
    const GridFunction f(Lattice(Box::cube(1, 0, 1), 8), std::vector<double>(8, 1.0));
    const Field g{Box::cube(1, 2, 3), [](auto) { return 1.0; }};
    EXPECT_THROW(pairing(f, g), degenerate_domain);
    EXPECT_THROW(pairing(f, Field{Box::cube(2, 0, 1), [](auto) { return 1.0; }}), dimension_mismatch);
}

TEST(Conjugate, Exponents)
{
    EXPECT_DOUBLE_EQ(conjugate_exponent(2.0), 2.0);
    EXPECT_DOUBLE_EQ(conjugate_exponent(3.0), 1.5);
    EXPECT_EQ(conjugate_exponent(inf), 1.0);
    EXPECT_EQ(conjugate_exponent(1.0), inf);
}

TEST(SingleBall, SignAtomAgainstIdentity)
{
    const auto atom = make_atom(Field{Box::cube(1, -1, 1), [](auto y) { return y[0] >= 0 ? 1.0 : -1.0; }}, unit,
                                AtomParams{ExponentVector({1.0}), inf, 0}, 1024);
    const auto chk = single_ball_bound(atom, identity);
    EXPECT_NEAR(chk.lhs, 0.5, 1e-12);
    EXPECT_TRUE(chk.pass);
    // Against x the L^1 error of the best constant is 1 and the size factor 1/2.
    EXPECT_NEAR(chk.rhs, 0.5, 1e-9);
}

TEST(SingleBall, RandomAtomsAndFunctions)
{
    Rng rng(51);
    for (int i = 0; i < 24; ++i) {
        const std::size_t n = 1 + i % 2;
        std::vector<double> a(n), p(n);
        for (std::size_t k = 0; k < n; ++k) {
            a[k] = rng.uniform(1.0, 2.0);
            p[k] = rng.uniform(0.5, 1.0);
        }
        const AnisotropyVector av(a);
        const ExponentVector pv(p);
        const double r = std::vector<double>{1.5, 2.0, 3.0, inf}[i % 4];
        const AnisotropicBall ball(Point(n, rng.uniform(-0.2, 0.2)), rng.uniform(0.3, 0.7), av);
        const int res = n == 1 ? 256 : 32;
        const auto atom = make_atom(family(n, FamilyKind::trig_mixture, rng.next()), ball, AtomParams{pv, r, s_min(av, pv)}, res);
        const auto g = family(n, FamilyKind::gaussian_bump, 0, {rng.uniform(0.2, 1.0)});
        const auto chk = single_ball_bound(atom, g);
        EXPECT_TRUE(chk.pass) << "case " << i << ": " << chk.lhs << " > " << chk.rhs;
        EXPECT_LE(chk.identity_residual, 1e-9);
    }
}

TEST(SingleBall, PolynomialAnnihilated)
{
    const AnisotropicBall ball({0.0, 0.1}, 0.5, AnisotropyVector({1.0, 1.5}));
    const ExponentVector p({0.8, 1.0});
    const auto atom = make_atom(family(2, FamilyKind::trig_mixture, 7), ball, AtomParams{p, 2.0, 1}, 32);
    const Field lin{Box::cube(2, -1, 1), [](auto y) { return 3.0 - y[0] + 2 * y[1]; }};
    const auto chk = single_ball_bound(atom, lin);
    EXPECT_LE(chk.lhs, 1e-10);
    EXPECT_TRUE(chk.pass);
}

TEST(Functional, SingleAtomAndCombinations)
{
    const AnisotropyVector a({1.0, 1.5});
    const ExponentVector p({0.7, 0.9});
    const double r = 2.0;
    const int s = s_min(a, p);
    const CampanatoParams cp{a, p, conjugate_exponent(r), s};
    const auto domain = BallSearchDomain::lattice(Box::cube(2, -1, 1), a, 3, 0.0, 0.0, 3, 1);
    FunctionalBoundOptions o;
    o.campanato.resolution = 24;
    o.aggregate_resolution = 64;

    Rng rng(52);
    const auto g = family(2, FamilyKind::trig_mixture, 11);
    for (int size : {1, 2, 4}) {
        AtomicCombination c;
        for (int k = 0; k < size; ++k) {
            const AnisotropicBall b({rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)}, rng.uniform(0.2, 0.5), a);
            c.atoms.push_back(make_atom(family(2, FamilyKind::trig_mixture, rng.next()), b, AtomParams{p, r, s}, 24));
            c.lambdas.push_back(rng.normal());
        }
        const auto chk = functional_norm_bound(c, g, cp, domain, o);
        EXPECT_TRUE(chk.pass) << size << ": " << chk.lhs << " > " << chk.rhs;
        EXPECT_GT(chk.seminorm, 0.0);
    }

    // A polynomial g pairs to rounding noise with every atom.
    AtomicCombination c;
    c.atoms.push_back(make_atom(family(2, FamilyKind::trig_mixture, 12), AnisotropicBall({0.0, 0.0}, 0.4, a),
                                AtomParams{p, r, s}, 24));
    c.lambdas.push_back(1.0);
    const Field constant{Box::cube(2, -1, 1), [](auto) { return 2.0; }};
    const auto chk = functional_norm_bound(c, constant, cp, domain, o);
    EXPECT_TRUE(chk.pass);
    EXPECT_LE(chk.lhs, chk.absolute_slack + 1e-14);
}

TEST(Functional, RequiresSubUnitExponents)
{
    const AnisotropyVector a({1.0});
    const ExponentVector p({2.0});
    AtomicCombination c;
    c.atoms.push_back(make_atom(family(1, FamilyKind::trig_mixture, 1), AnisotropicBall({0.0}, 0.5, a), AtomParams{p, 2.0, 0}, 64));
    c.lambdas.push_back(1.0);
    const auto domain = BallSearchDomain::lattice(Box::cube(1, -1, 1), a, 3, 0.0, 0.0, 2, 0);
    EXPECT_THROW(functional_norm_bound(c, identity, CampanatoParams{a, p, 2.0, 0}, domain), invalid_input);
}

TEST(DualNorm, IdentityBenchmark)
{
    const auto d = dual_norm_on_ball(identity, unit, 2.0, 0, 200, 5, 1024);
    const double target = std::sqrt(2.0 / 3.0);
    EXPECT_NEAR(d.infimum, target, 1e-6);
    EXPECT_LE(d.value, d.infimum * (1 + 1e-9));
    EXPECT_NEAR(d.value, target, 0.05 * target);
    ASSERT_EQ(d.running.size(), 200u);
    for (std::size_t k = 1; k < d.running.size(); ++k)
        EXPECT_GE(d.running[k], d.running[k - 1]);
}

TEST(DualNorm, PolynomialAndErrors)
{
    const AnisotropicBall ball({0.0, 0.0}, 0.6, AnisotropyVector({1.0, 1.5}));
    const Field lin{Box::cube(2, -1, 1), [](auto y) { return y[0] - y[1]; }};
    const auto d = dual_norm_on_ball(lin, ball, 3.0, 1, 50, 6, 32);
    EXPECT_LE(d.value, 1e-10);
    EXPECT_THROW(dual_norm_on_ball(identity, unit, 1.0, 0, 10, 1, 64), invalid_input);
}
