#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "amh/atoms.hpp"
#include "amh/error.hpp"
#include "amh/rng.hpp"

using namespace amh;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

Field field(std::size_t n, FamilyKind kind, std::vector<double> params = {}, std::uint64_t seed = 0)
{
    return as_field(FunctionFamily{kind, std::move(params), seed, ""}, Box::cube(n, -2, 2));
}

Atom trig_atom(const AnisotropicBall& ball, const ExponentVector& p, double r, std::uint64_t seed, int res = 40)
{
    const int s = s_min(ball.anisotropy(), p);
    return make_atom(field(ball.dimension(), FamilyKind::trig_mixture, {}, seed), ball, AtomParams{p, r, s}, res);
}

} // namespace

TEST(Atom, SignStepExample)
{
    const AnisotropicBall ball({0.0}, 1.0, AnisotropyVector({1.0}));
    const auto atom = make_atom(field(1, FamilyKind::sign_step), ball, AtomParams{ExponentVector({1.0}), inf, 0}, 64);
    EXPECT_TRUE(atom.evidence.pass());
    for (std::size_t k = 0; k < atom.values.values().size(); ++k) {
        const double x = atom.values.lattice().node(k)[0];
        EXPECT_NEAR(atom.values.values()[k], x > 0 ? 0.5 : -0.5, 1e-12);
    }
}

TEST(Atom, PolynomialInputIsDegenerate)
{
    const AnisotropicBall ball({0.0, 0.0}, 0.5, AnisotropyVector({1.0, 2.0}));
    const ExponentVector p({1.0, 1.0});
    try {
        make_atom(field(2, FamilyKind::constant, {3.0}), ball, AtomParams{p, 2.0, 0}, 32);
        FAIL() << "expected degenerate_input";
    } catch (const degenerate_input& e) {
        EXPECT_NE(std::string(e.what()).find("degenerate: input is polynomial on ball"), std::string::npos);
    }
    // Degree 1 data is annihilated by P_1 as well.
    EXPECT_THROW(make_atom(Field{Box::cube(2, -2, 2), [](auto y) { return 2 * y[0] - y[1]; }}, ball,
                           AtomParams{p, 2.0, 1}, 32),
                 degenerate_input);
}

TEST(Atom, InvalidParameters)
{
    const AnisotropicBall ball({0.0}, 0.5, AnisotropyVector({1.0}));
    const auto f = field(1, FamilyKind::trig_mixture);
    EXPECT_THROW(make_atom(f, ball, AtomParams{ExponentVector({1.0}), 1.0, 0}, 64), invalid_input);
    // p = 1/2 in one dimension needs s >= 1.
    EXPECT_THROW(make_atom(f, ball, AtomParams{ExponentVector({0.5}), 2.0, 0}, 64), invalid_input);
    EXPECT_THROW(make_atom(f, AnisotropicBall({1.8}, 0.5, AnisotropyVector({1.0})), AtomParams{ExponentVector({1.0}), 2.0, 0},
                           64),
                 invalid_input);
}

TEST(Atom, MomentsVanishForRandomPolynomialData)
{
    // Degree 3 data against P_1: a genuine residual remains.
    const AnisotropicBall ball({0.2, -0.1}, 0.6, AnisotropyVector({1.0, 1.5}));
    const auto atom = make_atom(field(2, FamilyKind::random_polynomial, {3.0}, 17), ball,
                                AtomParams{ExponentVector({0.8, 0.9}), 2.0, 1}, 40);
    EXPECT_LE(atom.evidence.max_moment_residual, 1e-7);
    EXPECT_TRUE(atom.evidence.pass());
}

TEST(Atom, ValidationAcrossParameters)
{
    Rng rng(31);
    for (int i = 0; i < 30; ++i) {
        const std::size_t n = 1 + i % 2;
        std::vector<double> a(n), p(n);
        for (std::size_t k = 0; k < n; ++k) {
            a[k] = rng.uniform(1.0, 2.0);
            p[k] = rng.uniform(0.4, 1.0);
        }
        const double r = std::vector<double>{1.5, 2.0, 3.0, inf}[i % 4];
        const AnisotropicBall ball(Point(n, rng.uniform(-0.3, 0.3)), rng.uniform(0.3, 0.8), AnisotropyVector(a));
        const auto atom = trig_atom(ball, ExponentVector(p), r, rng.next(), n == 1 ? 256 : 40);
        EXPECT_TRUE(atom.evidence.pass()) << "case " << i;
        EXPECT_NEAR(atom.evidence.size_ratio, 1.0, 1e-9);
    }
}

TEST(Atom, ValidationDetectsViolations)
{
    const AnisotropicBall ball({0.0, 0.0}, 0.5, AnisotropyVector({1.0, 1.2}));
    const auto atom = trig_atom(ball, ExponentVector({0.9, 1.0}), 2.0, 4);

    Atom doubled = atom;
    doubled.values = atom.values.scaled(2.0);
    const auto v = validate_atom(doubled);
    EXPECT_NEAR(v.size_ratio, 2.0, 1e-9);
    EXPECT_FALSE(v.size_ok);
    EXPECT_TRUE(v.moments_ok);

    // Same values, ball moved: the support now leaves the ball.
    Atom moved = atom;
    moved.ball = AnisotropicBall({0.3, 0.0}, 0.5, AnisotropyVector({1.0, 1.2}));
    const auto w = validate_atom(moved);
    EXPECT_FALSE(w.support_ok);
    EXPECT_GT(w.support_margin, 0.0);
    EXPECT_FALSE(w.pass());
}

TEST(Aggregate, Examples)
{
    const AnisotropicBall ball({0.0, 0.0}, 0.5, AnisotropyVector({1.0, 1.5}));
    const ExponentVector p({0.6, 0.9});
    const auto atom = trig_atom(ball, p, 2.0, 5);
    EXPECT_NEAR(aggregate_norm(AtomicCombination{{atom}, {1.0}}, 64), 1.0, 1e-12);
    EXPECT_NEAR(aggregate_norm(AtomicCombination{{atom}, {-3.0}}, 64), 3.0, 1e-12);
    // Two copies on one ball: the inner sum is 2^{p_} chi / ||chi||^{p_}.
    EXPECT_NEAR(aggregate_norm(AtomicCombination{{atom, atom}, {1.0, 1.0}}, 64), std::pow(2.0, 1.0 / p.p_underline()),
                1e-12);
    EXPECT_EQ(aggregate_norm(AtomicCombination{{atom}, {0.0}}, 64), 0.0);
}

TEST(Aggregate, L1LowerBound)
{
    const AnisotropyVector a({1.0, 1.5});
    const ExponentVector p({0.6, 0.9});
    const auto a1 = trig_atom(AnisotropicBall({-0.6, 0.0}, 0.4, a), p, 2.0, 6);
    const auto a2 = trig_atom(AnisotropicBall({0.6, 0.0}, 0.4, a), p, 2.0, 7);
    const auto single = l1_lower_bound_check(AtomicCombination{{a1}, {2.0}}, 64);
    EXPECT_TRUE(single.pass);
    EXPECT_NEAR(single.lhs, single.rhs, 1e-12);

    const auto disjoint = l1_lower_bound_check(AtomicCombination{{a1, a2}, {1.0, -2.0}}, 64);
    EXPECT_TRUE(disjoint.pass);
    EXPECT_LE(disjoint.lhs, disjoint.rhs * (1 + 1e-12));

    Rng rng(32);
    for (int i = 0; i < 20; ++i) {
        AtomicCombination c;
        const int count = 1 + i % 4;
        for (int j = 0; j < count; ++j) {
            c.atoms.push_back(trig_atom(AnisotropicBall({rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(0.1, 0.6), a),
                                        p, 2.0, rng.next(), 24));
            c.lambdas.push_back(rng.normal());
        }
        const auto check = l1_lower_bound_check(c, 64);
        EXPECT_LE(check.lhs, check.rhs * (1 + 1e-12)) << "case " << i;
    }
}

TEST(Aggregate, IncompatibleAtoms)
{
    const auto a1 = trig_atom(AnisotropicBall({0.0, 0.0}, 0.4, AnisotropyVector({1.0, 1.5})), ExponentVector({0.9, 1.0}), 2.0, 8);
    const auto a2 = trig_atom(AnisotropicBall({0.0, 0.0}, 0.4, AnisotropyVector({1.0, 2.0})), ExponentVector({0.9, 1.0}), 2.0, 9);
    EXPECT_THROW(aggregate_norm(AtomicCombination{{a1, a2}, {1.0, 1.0}}, 32), incompatible_parameters);
    EXPECT_THROW(aggregate_norm(AtomicCombination{{a1}, {1.0, 1.0}}, 32), invalid_input);
    const auto a3 = trig_atom(AnisotropicBall({0.0, 0.0}, 0.4, AnisotropyVector({1.0, 1.5})), ExponentVector({2.0, 1.0}), 2.0, 9);
    EXPECT_THROW(l1_lower_bound_check(AtomicCombination{{a3}, {1.0}}, 32), invalid_input);
}
