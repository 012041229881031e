#pragma once

// Property-based verification harness. A property runs `count` independent
// cases; case i draws from its own generator seeded with suite seed + i and
// returns one or more (lhs <= rhs) records. Reports are assembled in case
// order, so output is identical for any worker count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "amh/anisotropy.hpp"
#include "amh/approx.hpp"
#include "amh/atoms.hpp"
#include "amh/campanato.hpp"
#include "amh/config.hpp"
#include "amh/duality.hpp"
#include "amh/grid.hpp"
#include "amh/mixed_norm.hpp"
#include "amh/oracles.hpp"
#include "amh/polyproj.hpp"
#include "amh/rng.hpp"

namespace amh {

struct CaseRecord {
    std::string id;
    std::string op;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
    std::uint64_t seed = 0;
    int resolution = 0;
    std::string error; // set when the case threw

    [[nodiscard]] double margin() const { return rhs - lhs; }
    [[nodiscard]] double violation() const
    {
        if (!error.empty() || std::isnan(lhs) || std::isnan(rhs))
            return std::numeric_limits<double>::infinity();
        return std::max(0.0, lhs - rhs);
    }
};

struct PropertyBlock {
    std::string name;
    std::size_t cases = 0;
    std::size_t failed = 0;
    double max_violation = 0.0;
    double max_lhs = 0.0; // e.g. the empirical constant of a bound check
};

struct Report {
    std::string suite;
    std::uint64_t seed = 0;
    std::string config_digest;
    std::string timestamp;
    std::vector<PropertyBlock> properties;
    std::vector<CaseRecord> cases;

    [[nodiscard]] std::size_t failed() const
    {
        return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const auto& c) { return !c.pass; }));
    }

    [[nodiscard]] double max_violation() const
    {
        double v = 0.0;
        for (const auto& c : cases)
            v = std::max(v, c.violation());
        return v;
    }

    [[nodiscard]] const PropertyBlock* property(const std::string& name) const
    {
        for (const auto& p : properties)
            if (p.name == name)
                return &p;
        return nullptr;
    }

    /// JSON per the report schema. Non-finite numbers serialize as null.
    [[nodiscard]] nlohmann::ordered_json to_json(bool with_timestamp = true) const
    {
        nlohmann::ordered_json j;
        j["suite"] = suite;
        j["seed"] = seed;
        j["config_digest"] = config_digest;
        if (with_timestamp)
            j["timestamp"] = timestamp;
        auto props = nlohmann::ordered_json::array();
        for (const auto& p : properties)
            props.push_back({{"name", p.name},
                             {"cases", p.cases},
                             {"failed", p.failed},
                             {"max_violation", p.max_violation},
                             {"max_lhs", p.max_lhs}});
        j["properties"] = std::move(props);
        auto cs = nlohmann::ordered_json::array();
        for (const auto& c : cases) {
            nlohmann::ordered_json e{{"id", c.id},     {"op", c.op},     {"lhs", c.lhs},
                                     {"rhs", c.rhs},   {"margin", c.margin()}, {"pass", c.pass},
                                     {"seed", c.seed}, {"resolution", c.resolution}};
            if (!c.error.empty())
                e["error"] = c.error;
            cs.push_back(std::move(e));
        }
        j["cases"] = std::move(cs);
        j["summary"] = {{"total", cases.size()}, {"failed", failed()}, {"max_violation", max_violation()}};
        return j;
    }
};

namespace harness {

using CaseFn = std::function<std::vector<CaseRecord>(std::size_t index, std::uint64_t seed)>;

struct Property {
    std::string suite;
    std::string name;
    std::size_t count;
    CaseFn run;
};

inline CaseRecord check(std::string op, double lhs, double rhs, std::uint64_t seed, int resolution)
{
    CaseRecord c;
    c.op = std::move(op);
    c.lhs = lhs;
    c.rhs = rhs;
    c.pass = lhs <= rhs; // false for NaN
    c.seed = seed;
    c.resolution = resolution;
    return c;
}

inline double rel_gap(double value, double expected) { return std::abs(value - expected); }

// ---------------------------------------------------------------------------
// Random inputs.

inline AnisotropyVector random_anisotropy(Rng& rng, std::size_t n, double a_max)
{
    std::vector<double> a(n);
    for (auto& ai : a)
        ai = rng.uniform() < 0.2 ? 1.0 : rng.uniform(1.0, a_max);
    return AnisotropyVector(a);
}

inline ExponentVector random_exponents(Rng& rng, std::size_t n, double lo, double hi)
{
    std::vector<double> p(n);
    for (auto& pi : p)
        pi = rng.uniform(lo, hi);
    return ExponentVector(p);
}

inline Point random_vector(Rng& rng, std::size_t n)
{
    Point x(n);
    for (auto& v : x)
        v = rng.normal() * std::exp(rng.uniform(-2.0, 2.0));
    return x;
}

inline double euclidean(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return std::sqrt(s);
}

/// A smooth or piecewise-smooth seeded function on `box`. Atoms need inputs
/// outside P_s, so `polynomials` = false swaps the polynomial and ridge
/// families for trig mixtures.
inline Field random_field(Rng& rng, const Box& box, bool polynomials = true)
{
    const std::size_t n = box.dimension();
    FunctionFamily fam;
    fam.seed = rng.next();
    switch (rng.integer(0, 3)) {
    case 0: {
        fam.kind = FamilyKind::gaussian_bump;
        fam.params.push_back(rng.uniform(0.3, 1.0));
        for (std::size_t i = 0; i < n; ++i)
            fam.params.push_back(rng.uniform(box.lower[i], box.upper[i]));
        fam.params.push_back(rng.uniform(0.5, 2.0));
        break;
    }
    case 1:
        fam.kind = FamilyKind::trig_mixture;
        fam.params = {4.0, 4.0};
        break;
    case 2:
        if (polynomials) {
            fam.kind = FamilyKind::random_polynomial;
            fam.params = {static_cast<double>(rng.integer(4, 6))};
        } else {
            fam.kind = FamilyKind::trig_mixture;
            fam.params = {5.0, 6.0};
        }
        break;
    default:
        // A ridge whose kink misses the ball is linear there.
        if (polynomials) {
            fam.kind = FamilyKind::abs_ridge;
            fam.params = {rng.uniform(box.lower[0], box.upper[0])};
        } else {
            fam.kind = FamilyKind::trig_mixture;
            fam.params = {3.0, 8.0};
        }
        break;
    }
    return as_field(fam, box);
}

/// Ball with the given anisotropy whose bounding box lies inside `box`, with
/// radius a random fraction in [lo, hi] of the largest that fits.
inline AnisotropicBall random_ball(Rng& rng, const AnisotropyVector& a, const Box& box, double lo, double hi)
{
    const std::size_t n = box.dimension();
    double r_fit = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        r_fit = std::min(r_fit, std::pow(0.5 * box.width(i), 1.0 / a[i]));
    const double r = r_fit * rng.uniform(lo, hi);
    Point c(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double h = std::pow(r, a[i]);
        c[i] = rng.uniform(box.lower[i] + h, box.upper[i] - h);
    }
    return AnisotropicBall(c, r, a);
}

inline double l1_on(const BallGrid& g, const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += std::abs(x);
    return s * g.weight();
}

inline double sup_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

inline double max_coefficient_gap(const PolynomialRep& p, const PolynomialRep& q)
{
    double m = 0.0;
    for (std::size_t j = 0; j < p.coefficients().size(); ++j)
        m = std::max(m, std::abs(p.coefficients()[j] - q.coefficients()[j]));
    return m;
}

inline double max_abs(const std::vector<double>& c) { return sup_abs(c); }

inline int ball_resolution(const Config& cfg, std::size_t n)
{
    return cfg.resolution(n == 1 ? "ball_n1" : "ball_n2");
}

// ---------------------------------------------------------------------------
// geometry

inline std::vector<Property> geometry(const Config& cfg)
{
    std::vector<Property> out;
    const auto nq = static_cast<std::size_t>(cfg.count("quasi_norm"));

    out.push_back({"geometry", "quasi_norm.homogeneity", nq, [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 3;
                       const auto a = random_anisotropy(rng, n, 3.0);
                       const auto x = random_vector(rng, n);
                       const double t = 100.0 * (1.0 - rng.uniform());
                       const double nx = quasi_norm(a, x);
                       const double lhs = std::abs(quasi_norm(a, dilate(a, t, x)) - t * nx);
                       return std::vector{check("quasi_norm.homogeneity", lhs, cfg.tol("homogeneity") * t * nx, seed, 0)};
                   }});

    out.push_back({"geometry", "quasi_norm.triangle", nq, [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 3;
                       const auto a = random_anisotropy(rng, n, 3.0);
                       const auto x = random_vector(rng, n);
                       const auto y = random_vector(rng, n);
                       Point s(n);
                       for (std::size_t k = 0; k < n; ++k)
                           s[k] = x[k] + y[k];
                       const double bound = quasi_norm(a, x) + quasi_norm(a, y);
                       return std::vector{check("quasi_norm.triangle", quasi_norm(a, s),
                                                bound * (1.0 + cfg.tol("triangle")), seed, 0)};
                   }});

    out.push_back({"geometry", "quasi_norm.euclidean", nq, [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 3;
                       const auto x = random_vector(rng, n);
                       const double e = euclidean(x);
                       const double lhs = std::abs(quasi_norm(AnisotropyVector::isotropic(n), x) - e);
                       return std::vector{check("quasi_norm.euclidean", lhs, cfg.tol("euclidean") * e, seed, 0)};
                   }});

    out.push_back({"geometry", "quasi_norm.bracket", nq / 10, [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 3;
                       const auto a = random_anisotropy(rng, n, 3.0);
                       const auto x = random_vector(rng, n);
                       const auto sol = solve_quasi_norm(a, x);
                       const bool sign_change = quasi_norm_residual(a, x, sol.lower) >= 1.0 &&
                                                quasi_norm_residual(a, x, sol.upper) <= 1.0;
                       const double width = sign_change ? (sol.upper - sol.lower) / sol.upper
                                                        : std::numeric_limits<double>::infinity();
                       const double ref = oracle::bisection_quasi_norm(a.components(), x);
                       return std::vector{
                           check("quasi_norm.bracket", width, cfg.tol("root"), seed, 0),
                           check("quasi_norm.oracle", std::abs(sol.value - ref), 4.0 * cfg.tol("root") * ref, seed, 0)};
                   }});

    out.push_back({"geometry", "quasi_norm.examples", 1, [&cfg](std::size_t, std::uint64_t seed) {
                       const double tol = cfg.tol("root");
                       const AnisotropyVector a11({1.0, 1.0}), a12({1.0, 2.0}), a1({1.0});
                       auto near = [&](const std::string& op, double v, double e) {
                           return check(op, std::abs(v - e), tol * e, seed, 0);
                       };
                       std::vector<CaseRecord> r;
                       r.push_back(near("quasi_norm.example_euclid", quasi_norm(a11, Point{3, 4}), 5.0));
                       r.push_back(near("quasi_norm.example_axis", quasi_norm(a12, Point{0, 4}), 2.0));
                       r.push_back(near("quasi_norm.example_golden", quasi_norm(a12, Point{1, 1}),
                                        oracle::golden_quasi_norm()));
                       r.push_back(near("bracket.example_origin", bracket(a12, Point{0, 0}), 1.0));
                       r.push_back(near("bracket.example_sqrt3", bracket(a1, Point{std::sqrt(3.0)}), 2.0));
                       auto exact = [&](const std::string& op, double v, double e) {
                           return check(op, std::abs(v - e), 0.0, seed, 0);
                       };
                       r.push_back(exact("s_min.example", s_min(a12, ExponentVector({0.5, 1.0})), 3));
                       r.push_back(exact("s_min.example", s_min(a12, ExponentVector({1.0, 4.0})), 0));
                       r.push_back(exact("s_min.example", s_min(a11, ExponentVector({2.0 / 3.0, 2.0 / 3.0})), 1));
                       r.push_back(exact("grand_maximal_order.example", grand_maximal_order(a11, ExponentVector({1.0, 1.0})), 9));
                       r.push_back(exact("grand_maximal_order.example", grand_maximal_order(a11, ExponentVector({2.0, 2.0})), 9));
                       r.push_back(exact("grand_maximal_order.example", grand_maximal_order(a12, ExponentVector({1.0, 1.0})), 20));
                       r.push_back(exact("ball.example_boundary",
                                         AnisotropicBall({0, 0}, 2.0, a12).contains(Point{0, 4}) ? 1 : 0, 0));
                       r.push_back(exact("ball.example_center", AnisotropicBall({0.3, -1}, 0.1, a12).contains(Point{0.3, -1}) ? 0 : 1, 0));
                       r.push_back(exact("ball.example_corner", AnisotropicBall({0, 0}, 1.0, a11).contains(Point{1, 1}) ? 1 : 0, 0));
                       return r;
                   }});

    out.push_back({"geometry", "ball.scaling", nq / 10, [](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 3;
                       const auto a = random_anisotropy(rng, n, 3.0);
                       const Point x = random_vector(rng, n);
                       const double r = std::exp(rng.uniform(-2.0, 2.0));
                       Point y(n), d(n);
                       for (std::size_t k = 0; k < n; ++k) {
                           d[k] = rng.normal() * 0.8 * std::pow(r, a[k]);
                           y[k] = x[k] + d[k];
                       }
                       const Point unit = dilate(a, 1.0 / r, d);
                       const bool m1 = AnisotropicBall(x, r, a).contains(y);
                       const bool m2 = AnisotropicBall(Point(n, 0.0), 1.0, a).contains(unit);
                       // Points within root tolerance of the sphere are ambiguous by design.
                       const bool ambiguous = std::abs(quasi_norm(a, unit) - 1.0) < 1e-9;
                       return std::vector{check("ball.scaling", (m1 == m2 || ambiguous) ? 0.0 : 1.0, 0.0, seed, 0)};
                   }});

    out.push_back({"geometry", "ball.volume", static_cast<std::size_t>(cfg.count("volume")),
                   [&cfg](std::size_t, std::uint64_t seed) {
                       Rng rng(seed);
                       const auto a = AnisotropyVector({rng.uniform(1.0, 3.0), rng.uniform(1.0, 3.0)});
                       const double r = rng.uniform(0.3, 1.5);
                       const AnisotropicBall ball({rng.normal(), rng.normal()}, r, a);
                       const int res = cfg.resolution("volume_n2");
                       const double measure = BallGrid(ball, res).measure();
                       const double v = ball.volume();
                       return std::vector{check("ball.volume", std::abs(measure - v), cfg.tol("volume") * v, seed, res)};
                   }});
    return out;
}

// ---------------------------------------------------------------------------
// norms

inline Lattice random_lattice(Rng& rng, std::size_t n, int lo1, int hi1)
{
    // Per-dimension resolution ranges keep the node count comparable.
    const int lo = n == 1 ? lo1 : n == 2 ? lo1 / 4 : lo1 / 16;
    const int hi = n == 1 ? hi1 : n == 2 ? hi1 / 4 : hi1 / 16;
    std::vector<int> res(n);
    Point l(n), u(n);
    for (std::size_t i = 0; i < n; ++i) {
        res[i] = rng.integer(std::max(lo, 2), std::max(hi, 2));
        l[i] = rng.uniform(-2.0, 0.0);
        u[i] = l[i] + rng.uniform(0.5, 3.0);
    }
    return Lattice(Box(l, u), res);
}

inline GridFunction random_grid_function(Rng& rng, const Lattice& lattice)
{
    std::vector<double> v(lattice.size());
    for (auto& x : v)
        x = rng.normal();
    return GridFunction(lattice, std::move(v));
}

inline std::vector<Property> norms(const Config& cfg)
{
    std::vector<Property> out;
    const auto nm = static_cast<std::size_t>(cfg.count("mixed_norm"));

    out.push_back({"norms", "mixed_norm.rectangle", nm, [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 3;
                       const Lattice lat = random_lattice(rng, n, 16, 256);
                       std::vector<int> from(n), to(n);
                       std::vector<double> p(n);
                       double expected = 1.0;
                       for (std::size_t k = 0; k < n; ++k) {
                           const int r = lat.resolution()[k];
                           from[k] = rng.integer(0, r - 1);
                           to[k] = rng.integer(from[k] + 1, r);
                           p[k] = rng.uniform() < 0.2 ? std::numeric_limits<double>::infinity() : rng.uniform(0.3, 4.0);
                           const double len = (to[k] - from[k]) * lat.cell_width(k);
                           expected *= std::isinf(p[k]) ? 1.0 : std::pow(len, 1.0 / p[k]);
                       }
                       std::vector<double> v(lat.size(), 0.0);
                       for (std::size_t flat = 0; flat < v.size(); ++flat) {
                           std::size_t rest = flat;
                           bool in = true;
                           for (std::size_t k = 0; k < n; ++k) {
                               const auto idx = static_cast<int>(rest % lat.resolution()[k]);
                               rest /= lat.resolution()[k];
                               in = in && idx >= from[k] && idx < to[k];
                           }
                           v[flat] = in ? 1.0 : 0.0;
                       }
                       const double got = mixed_lebesgue_norm(GridFunction(lat, v), ExponentVector(p));
                       return std::vector{check("mixed_norm.rectangle", std::abs(got - expected),
                                                cfg.tol("rectangle") * expected, seed, lat.resolution()[0])};
                   }});

    out.push_back({"norms", "mixed_norm.isotropic", nm, [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 3;
                       const auto f = random_grid_function(rng, random_lattice(rng, n, 16, 256));
                       const double p = rng.uniform(0.3, 4.0);
                       const double classical = lebesgue_norm(f, p);
                       const double mixed = mixed_lebesgue_norm(f, ExponentVector::uniform(n, p));
                       return std::vector{check("mixed_norm.isotropic", std::abs(mixed - classical),
                                                cfg.tol("isotropic") * classical, seed, f.lattice().resolution()[0])};
                   }});

    out.push_back({"norms", "mixed_norm.axis_max", nm, [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 3;
                       const auto f = random_grid_function(rng, random_lattice(rng, n, 16, 256));
                       const double inf = std::numeric_limits<double>::infinity();
                       const double all = mixed_lebesgue_norm(f, ExponentVector::uniform(n, inf));
                       const double mx = sup_abs(f.values());
                       std::vector<CaseRecord> r{check("mixed_norm.axis_max", std::abs(all - mx), cfg.tol("axis_max") * mx,
                                                       seed, f.lattice().resolution()[0])};
                       if (n == 2) {
                           // p = (inf, p2): (sum_k2 (max_k1 |f|)^p2 h2)^(1/p2)
                           const double p2 = rng.uniform(0.3, 4.0);
                           const auto& lat = f.lattice();
                           const int r0 = lat.resolution()[0], r1 = lat.resolution()[1];
                           double acc = 0.0;
                           for (int k1 = 0; k1 < r1; ++k1) {
                               double m = 0.0;
                               for (int k0 = 0; k0 < r0; ++k0)
                                   m = std::max(m, std::abs(f.values()[k1 * r0 + k0]));
                               acc += std::pow(m, p2) * lat.cell_width(1);
                           }
                           const double expect = std::pow(acc, 1.0 / p2);
                           const double got = mixed_lebesgue_norm(f, ExponentVector({inf, p2}));
                           r.push_back(check("mixed_norm.axis_max_partial", std::abs(got - expect),
                                             cfg.tol("isotropic") * expect, seed, r0));
                       }
                       return r;
                   }});

    out.push_back({"norms", "mixed_norm.scaling", nm / 5, [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 3;
                       const auto f = random_grid_function(rng, random_lattice(rng, n, 16, 256));
                       const auto p = random_exponents(rng, n, 0.3, 4.0);
                       const double alpha = rng.uniform(-5.0, 5.0);
                       const double base = mixed_lebesgue_norm(f, p);
                       const double scaled = mixed_lebesgue_norm(f.scaled(alpha), p);
                       const double lhs = std::abs(scaled - std::abs(alpha) * base);
                       std::vector<double> smaller(f.values());
                       for (auto& v : smaller)
                           v *= rng.uniform();
                       const double below = mixed_lebesgue_norm(GridFunction(f.lattice(), smaller), p);
                       return std::vector{
                           check("mixed_norm.scaling", lhs, cfg.tol("norm_scaling") * std::abs(alpha) * base, seed, 0),
                           check("mixed_norm.monotone", below, base * (1.0 + cfg.tol("norm_scaling")), seed, 0)};
                   }});

    out.push_back({"norms", "indicator.isotropic", static_cast<std::size_t>(cfg.count("indicator")),
                   [&cfg](std::size_t, std::uint64_t seed) {
                       Rng rng(seed);
                       const double p = rng.uniform(0.5, 3.0);
                       const double r = rng.uniform(0.3, 1.0);
                       const int res = cfg.resolution("grid_n2");
                       const AnisotropicBall ball({rng.normal(), rng.normal()}, r, AnisotropyVector::isotropic(2));
                       const double got = indicator_mixed_norm(ball, ExponentVector::uniform(2, p), res);
                       const double expect = std::pow(M_PI * r * r, 1.0 / p);
                       // Doubling with a = (1, 2), p = (1, 1) scales by 2^nu = 8.
                       const AnisotropyVector a12({1.0, 2.0});
                       const double rr = rng.uniform(0.2, 0.5);
                       const ExponentVector ones({1.0, 1.0});
                       const double small = indicator_mixed_norm(AnisotropicBall({0, 0}, rr, a12), ones, res);
                       const double big = indicator_mixed_norm(AnisotropicBall({0, 0}, 2 * rr, a12), ones, res);
                       return std::vector{
                           check("indicator.isotropic", std::abs(got - expect), cfg.tol("indicator") * expect, seed, res),
                           check("indicator.doubling", std::abs(big / small - 8.0), cfg.tol("indicator") * 8.0, seed, res)};
                   }});

    out.push_back({"norms", "lr_norm.examples", 1, [&cfg](std::size_t, std::uint64_t seed) {
                       const int res = cfg.resolution("grid_n1");
                       const Field x{Box::cube(1, -1, 1), [](std::span<const double> y) { return y[0]; }};
                       const AnisotropicBall b({0.0}, 1.0, AnisotropyVector::isotropic(1));
                       const double v = lr_norm_on_ball(x, b, 2.0, res);
                       const Field c{Box::cube(2, -2, 2), [](std::span<const double>) { return -1.5; }};
                       const AnisotropicBall b2({0.1, 0.2}, 0.7, AnisotropyVector({1.0, 1.5}));
                       const BallGrid g2(b2, cfg.resolution("grid_n2"));
                       const double c2 = lr_norm_on_ball(c, b2, 2.0, cfg.resolution("grid_n2"));
                       const double cinf = lr_norm_on_ball(c, b2, std::numeric_limits<double>::infinity(), 64);
                       return std::vector{
                           check("lr_norm.example_linear", std::abs(v - std::sqrt(2.0 / 3.0)), cfg.tol("lr_example"), seed, res),
                           check("lr_norm.example_constant", std::abs(c2 - 1.5 * std::sqrt(b2.volume())),
                                 cfg.tol("indicator") * c2, seed, g2.resolution()),
                           check("lr_norm.example_constant_sup", std::abs(cinf - 1.5), 0.0, seed, 64)};
                   }});
    return out;
}

// ---------------------------------------------------------------------------
// projection

struct ProjectionCase {
    std::size_t n;
    int s;
    AnisotropicBall ball;
    int resolution;
};

inline ProjectionCase projection_case(Rng& rng, std::size_t i, const Config& cfg)
{
    ProjectionCase c;
    c.n = 1 + i % 2;
    c.s = static_cast<int>((i / 2) % 4);
    const auto a = random_anisotropy(rng, c.n, 2.5);
    c.ball = random_ball(rng, a, Box::cube(c.n, -1, 1), 0.2, 1.0);
    c.resolution = ball_resolution(cfg, c.n);
    return c;
}

/// Ball B' = (c', r') and the affine map T: B -> B', T(y)_i = c'_i + (r'/r)^{a_i} (y_i - c_i).
inline std::pair<AnisotropicBall, std::function<Point(std::span<const double>)>> transported_ball(
    Rng& rng, const AnisotropicBall& b)
{
    const std::size_t n = b.dimension();
    const auto& a = b.anisotropy();
    const AnisotropicBall target = random_ball(rng, a, Box::cube(n, -3, 3), 0.05, 1.0);
    const double ratio = target.radius() / b.radius();
    // Inverse map T^{-1}: B' -> B.
    auto inverse = [b, target, ratio, n](std::span<const double> y) {
        Point x(n);
        for (std::size_t k = 0; k < n; ++k)
            x[k] = b.center()[k] + std::pow(ratio, -b.anisotropy()[k]) * (y[k] - target.center()[k]);
        return x;
    };
    return {target, inverse};
}

inline std::vector<Property> projection(const Config& cfg)
{
    std::vector<Property> out;
    const auto np = static_cast<std::size_t>(cfg.count("projection"));
    const std::string tag[2] = {"n1", "n2"};

    out.push_back({"projection", "projection.fixes", np, [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const auto c = projection_case(rng, i, cfg);
                       const auto basis = build_basis(c.ball, c.s, c.resolution);
                       std::vector<double> coeffs(multi_indices(c.n, c.s).size());
                       for (auto& x : coeffs)
                           x = rng.uniform(-1.0, 1.0);
                       const auto poly = PolynomialRep::in_frame_of(c.ball, c.s, coeffs);
                       const auto values = basis.grid().sample(Field{Box::bounding(c.ball), [&](auto y) { return poly(y); }});
                       const auto got = project(values, basis);
                       return std::vector{
                           check("projection.fixes", max_coefficient_gap(got, poly),
                                 cfg.tol("projection") * std::max(1.0, max_abs(coeffs)), seed, c.resolution),
                           check("basis.gram", basis.gram_residual(), cfg.tol("gram"), seed, c.resolution)};
                   }});

    out.push_back({"projection", "projection.moments", np, [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const auto c = projection_case(rng, i, cfg);
                       const auto basis = build_basis(c.ball, c.s, c.resolution);
                       const auto& grid = basis.grid();
                       const auto f = grid.sample(random_field(rng, Box::cube(c.n, -1, 1)));
                       const auto res = projection_residual(f, basis);
                       double worst = 0.0;
                       for (const auto& alpha : multi_indices(c.n, c.s)) {
                           double m = 0.0;
                           for (std::size_t k = 0; k < res.size(); ++k) {
                               const Point u = c.ball.to_unit(grid.coords(k));
                               double term = res[k];
                               for (std::size_t d = 0; d < c.n; ++d)
                                   term *= std::pow(u[d], alpha[d]);
                               m += term;
                           }
                           worst = std::max(worst, std::abs(m * grid.weight()));
                       }
                       // Idempotence and self-adjointness on the same ball.
                       const auto pf = projected_values(f, basis);
                       const auto ppf = projected_values(pf, basis);
                       double idem = 0.0;
                       for (std::size_t k = 0; k < pf.size(); ++k)
                           idem = std::max(idem, std::abs(ppf[k] - pf[k]));
                       const auto g = grid.sample(random_field(rng, Box::cube(c.n, -1, 1)));
                       const auto pg = projected_values(g, basis);
                       double lhs_ip = 0.0, rhs_ip = 0.0, nf = 0.0, ng = 0.0;
                       for (std::size_t k = 0; k < f.size(); ++k) {
                           lhs_ip += pf[k] * g[k];
                           rhs_ip += f[k] * pg[k];
                           nf += f[k] * f[k];
                           ng += g[k] * g[k];
                       }
                       const double w = grid.weight();
                       return std::vector{
                           check("projection.moments", worst, cfg.tol("moment") * l1_on(grid, f), seed, c.resolution),
                           check("projection.idempotent", idem, cfg.tol("projection") * std::max(sup_abs(pf), 1e-300), seed,
                                 c.resolution),
                           check("projection.self_adjoint", std::abs(lhs_ip - rhs_ip) * w,
                                 cfg.tol("projection") * std::sqrt(nf * ng) * w, seed, c.resolution)};
                   }});

    out.push_back({"projection", "projection.covariance", np, [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const auto c = projection_case(rng, i, cfg);
                       const Field f = random_field(rng, Box::cube(c.n, -1, 1));
                       const auto [target, inverse] = transported_ball(rng, c.ball);
                       const Field g{Box::cube(c.n, -3, 3), [f, inverse](std::span<const double> y) { return f(inverse(y)); }};
                       const auto b1 = build_basis(c.ball, c.s, c.resolution);
                       const auto b2 = build_basis(target, c.s, c.resolution);
                       const auto v1 = b1.grid().sample(f);
                       const auto v2 = b2.grid().sample(g);
                       const auto p1 = project(v1, b1);
                       const auto p2 = project(v2, b2);
                       const double r1 = projection_bound_ratio(v1, b1);
                       const double r2 = projection_bound_ratio(v2, b2);
                       return std::vector{
                           check("projection.covariance", max_coefficient_gap(p1, p2),
                                 cfg.tol("covariance") * std::max(1.0, max_abs(p1.coefficients())), seed, c.resolution),
                           check("projection.dilation_ratio", std::abs(r1 - r2), cfg.tol("dilation_ratio") * r1, seed,
                                 c.resolution)};
                   }});

    out.push_back({"projection", "projection.ratio", np, [&cfg, tag](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       auto c = projection_case(rng, i, cfg);
                       const auto basis = build_basis(c.ball, c.s, c.resolution);
                       const auto& grid = basis.grid();
                       // Mix smooth, one-signed and discontinuous inputs.
                       std::vector<double> f = grid.sample(random_field(rng, Box::cube(c.n, -1, 1)));
                       if (rng.coin())
                           for (auto& v : f)
                               v = std::abs(v);
                       if (rng.coin()) {
                           const double cut = rng.uniform(-1.0, 1.0);
                           for (std::size_t k = 0; k < f.size(); ++k)
                               if (c.ball.to_unit(grid.coords(k))[0] < cut)
                                   f[k] = 0.1 * f[k];
                       }
                       const double ratio = projection_bound_ratio(f, basis);
                       std::vector<CaseRecord> r{check("projection.ratio." + tag[c.n - 1] + ".s" + std::to_string(c.s), ratio,
                                                       basis.bound_constant() * (1.0 + cfg.tol("ratio")), seed,
                                                       c.resolution)};
                       // n = 1, s = 0: Pi_B is the mean.
                       const AnisotropicBall b1 = random_ball(rng, AnisotropyVector({1.0}), Box::cube(1, -1, 1), 0.1, 1.0);
                       const auto basis0 = build_basis(b1, 0, cfg.resolution("ball_n1"));
                       auto f0 = basis0.grid().sample(random_field(rng, Box::cube(1, -1, 1)));
                       r.push_back(check("projection.ratio_mean", projection_bound_ratio(f0, basis0),
                                         1.0 + cfg.tol("ratio"), seed, cfg.resolution("ball_n1")));
                       return r;
                   }});

    out.push_back({"projection", "projection.examples", 1, [&cfg](std::size_t, std::uint64_t seed) {
                       const int res = cfg.resolution("grid_n1");
                       const AnisotropicBall unit({0.0}, 1.0, AnisotropyVector::isotropic(1));
                       const auto b1 = build_basis(unit, 1, res);
                       const double q0 = b1.values()(0, 0);
                       // q_1 = sqrt(3/2) x in the continuum; compare at the last node.
                       const auto xs = b1.grid().coords(b1.grid().count() - 1)[0];
                       const double q1 = b1.values()(static_cast<Eigen::Index>(b1.grid().count() - 1), 1);
                       const auto b0 = build_basis(unit, 0, res);
                       const auto sq = b0.grid().sample(Field{Box::cube(1, -1, 1), [](auto y) { return y[0] * y[0]; }});
                       const double mean = projected_values(sq, b0)[0];
                       const auto odd = b0.grid().sample(Field{Box::cube(1, -1, 1), [](auto y) { return y[0] * y[0] * y[0]; }});
                       const double odd_mean = projected_values(odd, b0)[0];
                       return std::vector{
                           check("basis.example_legendre_q0", std::abs(q0 - 1.0 / std::sqrt(2.0)), cfg.tol("projection"), seed, res),
                           check("basis.example_legendre_q1", std::abs(q1 - std::sqrt(1.5) * xs), 1e-4, seed, res),
                           check("projection.example_mean", std::abs(mean - 1.0 / 3.0), 1e-4, seed, res),
                           check("projection.example_odd", std::abs(odd_mean), 1e-10, seed, res)};
                   }});
    return out;
}

// ---------------------------------------------------------------------------
// atoms

inline double random_r(Rng& rng)
{
    constexpr double choices[] = {1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()};
    return choices[rng.integer(0, 3)];
}

/// Atom on a random ball inside [-1, 1]^n built from a random field.
inline Atom random_atom(Rng& rng, const AnisotropyVector& a, const AtomParams& params, const Box& box, int res,
                        double lo, double hi)
{
    const AnisotropicBall ball = random_ball(rng, a, box, lo, hi);
    const Field f = random_field(rng, box, false);
    return make_atom(f, ball, params, res, rng.next());
}

inline std::vector<Property> atoms(const Config& cfg)
{
    std::vector<Property> out;

    out.push_back({"atoms", "atom.construct", static_cast<std::size_t>(cfg.count("atoms")),
                   [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 2;
                       const auto a = random_anisotropy(rng, n, 2.0);
                       const auto p = random_exponents(rng, n, 0.5, 2.0);
                       const AtomParams params{p, random_r(rng), s_min(a, p) + rng.integer(0, 1)};
                       const int res = ball_resolution(cfg, n);
                       const Box box = Box::cube(n, -1, 1);
                       const Atom atom = random_atom(rng, a, params, box, res, 0.2, 1.0);
                       const auto ev = validate_atom(atom, cfg.tol("atom_size"), cfg.tol("atom_moment"));
                       // Pairing with a random polynomial of degree s.
                       std::vector<double> coeffs(multi_indices(n, params.s).size());
                       for (auto& x : coeffs)
                           x = rng.uniform(-1.0, 1.0);
                       const auto poly = PolynomialRep::in_frame_of(atom.ball, params.s, coeffs);
                       const Field pf{Box::bounding(atom.ball), [&](auto y) { return poly(y); }};
                       const BallGrid grid(atom.ball, res);
                       const double pmax = sup_abs(grid.sample(pf));
                       double a_l1 = 0.0;
                       for (double v : atom.values.values())
                           a_l1 += std::abs(v);
                       a_l1 *= atom.values.cell_volume();
                       return std::vector{
                           check("atom.support", ev.support_margin, 0.0, seed, res),
                           check("atom.size", ev.size_ratio, 1.0 + cfg.tol("atom_size"), seed, res),
                           check("atom.moments", ev.max_moment_residual, cfg.tol("atom_moment"), seed, res),
                           check("atom.polynomial_pairing", std::abs(pairing(atom.values, pf)),
                                 cfg.tol("atom_moment") * a_l1 * pmax, seed, res)};
                   }});

    out.push_back({"atoms", "atom.sign", 1, [&cfg](std::size_t, std::uint64_t seed) {
                       const int res = cfg.resolution("grid_n1");
                       const Field sign{Box::cube(1, -1, 1), [](auto y) { return y[0] >= 0.0 ? 1.0 : -1.0; }};
                       const AnisotropicBall unit({0.0}, 1.0, AnisotropyVector::isotropic(1));
                       const Atom atom = make_atom(sign, unit, {ExponentVector({1.0}), std::numeric_limits<double>::infinity(), 0}, res);
                       double worst = 0.0;
                       const auto& lat = atom.values.lattice();
                       for (std::size_t k = 0; k < lat.size(); ++k)
                           worst = std::max(worst, std::abs(atom.values.values()[k] - 0.5 * sign(lat.node(k))));
                       return std::vector{check("atom.sign", worst, cfg.tol("sign_atom"), seed, res)};
                   }});

    out.push_back({"atoms", "coefficient_l1.random", static_cast<std::size_t>(cfg.count("combinations")),
                   [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 2;
                       const auto a = random_anisotropy(rng, n, 2.0);
                       const auto p = random_exponents(rng, n, 0.4, 1.0);
                       const AtomParams params{p, rng.coin() ? 2.0 : std::numeric_limits<double>::infinity(), s_min(a, p)};
                       const int res = ball_resolution(cfg, n);
                       const Box box = Box::cube(n, -1, 1);
                       AtomicCombination c;
                       const int size = rng.integer(1, 8);
                       for (int k = 0; k < size; ++k) {
                           c.atoms.push_back(random_atom(rng, a, params, box, res, 0.3, 0.8));
                           c.lambdas.push_back(rng.uniform() < 0.1 ? 0.0 : rng.normal());
                       }
                       const int ures = cfg.resolution(n == 1 ? "union_n1" : "union_n2");
                       const auto chk = l1_lower_bound_check(c, ures, cfg.tol("grid"));
                       std::vector<CaseRecord> r{
                           check("coefficient_l1.random", chk.lhs, chk.rhs * (1.0 + 2.0 * cfg.tol("grid")), seed, ures)};
                       // Single-atom equality case.
                       AtomicCombination one{{c.atoms.front()}, {1.0}};
                       const double agg = aggregate_norm(one, ures);
                       r.push_back(check("coefficient_l1.single", std::abs(agg - 1.0), cfg.tol("grid"), seed, ures));
                       return r;
                   }});

    out.push_back({"atoms", "coefficient_l1.examples", 1, [&cfg](std::size_t, std::uint64_t seed) {
                       const int ures = cfg.resolution("union_n2");
                       const int res = cfg.resolution("ball_n2");
                       const AnisotropyVector a11 = AnisotropyVector::isotropic(2);
                       const AtomParams params{ExponentVector({1.0, 1.0}), 2.0, 0};
                       const Field f{Box::cube(2, -2, 2), [](auto y) { return y[0] + y[1] * y[1]; }};
                       const Atom left = make_atom(f, AnisotropicBall({-1.0, 0.0}, 0.5, a11), params, res);
                       const Atom right = make_atom(f, AnisotropicBall({1.0, 0.0}, 0.5, a11), params, res);
                       const double same = aggregate_norm({{left, left}, {1.0, 1.0}}, ures);
                       const auto disjoint = l1_lower_bound_check({{left, right}, {1.0, 1.0}}, ures, cfg.tol("grid"));
                       const double zero = aggregate_norm({{left, right}, {0.0, 0.0}}, ures);
                       return std::vector{
                           check("coefficient_l1.identical_balls", std::abs(same - 2.0), 2.0 * cfg.tol("grid"), seed, ures),
                           check("coefficient_l1.disjoint", disjoint.lhs, disjoint.rhs * (1.0 + 2.0 * cfg.tol("grid")), seed, ures),
                           check("coefficient_l1.disjoint_value", std::abs(disjoint.rhs - 2.0), 2.0 * cfg.tol("grid"), seed, ures),
                           check("coefficient_l1.zero", zero, 0.0, seed, ures)};
                   }});
    return out;
}

// ---------------------------------------------------------------------------
// campanato

inline BallSearchDomain small_domain(std::size_t n, const AnisotropyVector& a, int rounds)
{
    return n == 1 ? BallSearchDomain::lattice(Box::cube(1, -1, 1), a, 5, 0.0, 0.0, 3, rounds)
                  : BallSearchDomain::lattice(Box::cube(2, -1, 1), a, 3, 0.0, 0.0, 2, rounds);
}

inline CampanatoOptions campanato_options(const Config& cfg, std::size_t n)
{
    CampanatoOptions o;
    o.resolution = ball_resolution(cfg, n);
    o.approx = cfg.approx;
    return o;
}

inline std::vector<Property> campanato(const Config& cfg)
{
    std::vector<Property> out;
    const double inf = std::numeric_limits<double>::infinity();

    out.push_back({"campanato", "approx.q2", static_cast<std::size_t>(cfg.count("approx_q2")),
                   [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 2;
                       const int s = static_cast<int>(i % 3);
                       const auto ball = random_ball(rng, random_anisotropy(rng, n, 2.0), Box::cube(n, -1, 1), 0.2, 1.0);
                       const int res = ball_resolution(cfg, n);
                       const auto basis = build_basis(ball, s, res);
                       const auto g = basis.grid().sample(random_field(rng, Box::cube(n, -1, 1)));
                       const auto best = best_approximation(basis, g, 2.0, cfg.approx);
                       double direct = 0.0;
                       for (double e : projection_residual(g, basis))
                           direct += e * e;
                       direct = std::sqrt(direct * basis.grid().weight());
                       // Both sides carry O(eps ||g||) rounding error.
                       const double floor = cfg.tol("q2_abs") * lr_norm(basis.grid(), g, 2.0);
                       return std::vector{check("approx.q2", std::abs(best.raw_error - direct),
                                                cfg.tol("q2") * direct + floor, seed, res)};
                   }});

    out.push_back({"campanato", "approx.minimax", static_cast<std::size_t>(cfg.count("minimax")),
                   [&cfg, inf](std::size_t, std::uint64_t seed) {
                       Rng rng(seed);
                       const auto ball = random_ball(rng, AnisotropyVector({1.0}), Box::cube(1, -1, 1), 0.1, 1.0);
                       const int res = cfg.resolution("ball_n1");
                       const auto basis = build_basis(ball, 0, res);
                       const auto g = basis.grid().sample(random_field(rng, Box::cube(1, -1, 1)));
                       const auto best = best_approximation(basis, g, inf, cfg.approx);
                       const auto ref = oracle::minimax_constant(g);
                       return std::vector{
                           check("approx.minimax", std::abs(best.error - ref.error), cfg.tol("minimax") * ref.error, seed, res)};
                   }});

    out.push_back({"campanato", "approx.median", static_cast<std::size_t>(cfg.count("median")),
                   [&cfg](std::size_t, std::uint64_t seed) {
                       Rng rng(seed);
                       const auto ball = random_ball(rng, AnisotropyVector({1.0}), Box::cube(1, -1, 1), 0.1, 1.0);
                       const int res = cfg.resolution("ball_n1");
                       const auto basis = build_basis(ball, 0, res);
                       const auto g = basis.grid().sample(random_field(rng, Box::cube(1, -1, 1)));
                       const auto best = best_approximation(basis, g, 1.0, cfg.approx);
                       const double constant = basis.evaluate(best.coordinates)[0];
                       const auto ref = oracle::l1_constant(g);
                       // Any point of the median interval is a minimizer.
                       std::vector<double> sorted(g);
                       std::sort(sorted.begin(), sorted.end());
                       const std::size_t m = sorted.size();
                       const double gap = m % 2 == 0 ? sorted[m / 2] - sorted[m / 2 - 1] : 0.0;
                       const double range = sorted.back() - sorted.front();
                       return std::vector{
                           check("approx.median_error", std::abs(best.error - ref.error), cfg.tol("median") * ref.error, seed, res),
                           check("approx.median_constant", std::abs(constant - ref.constant),
                                 cfg.tol("median") * range + gap, seed, res)};
                   }});

    out.push_back({"campanato", "approx.examples", 1, [&cfg, inf](std::size_t, std::uint64_t seed) {
                       const int res = cfg.resolution("benchmark_n1");
                       const Field x{Box::cube(1, -2, 2), [](auto y) { return y[0]; }};
                       CampanatoOptions o;
                       o.resolution = res;
                       o.approx = cfg.approx;
                       const double t = 0.75;
                       const auto mm = best_poly_error(x, AnisotropicBall({0.0}, t, AnisotropyVector({1.0})), inf, 0, o);
                       // The discrete sup over midpoints is t (1 - 1/res).
                       const double discrete = t * (1.0 - 1.0 / res);
                       const auto med = best_poly_error(x, AnisotropicBall({0.5}, 0.5, AnisotropyVector({1.0})), 1.0, 0, o);
                       const double c = med.argmin(Point{0.5});
                       return std::vector{
                           check("approx.example_minimax", std::abs(mm.error - discrete), cfg.tol("minimax") * discrete, seed, res),
                           check("approx.example_minimax_argmin", std::abs(mm.argmin(Point{0.0})), cfg.tol("minimax") * t, seed, res),
                           check("approx.example_median", std::abs(c - 0.5), cfg.tol("median"), seed, res),
                           check("approx.example_median_error", std::abs(med.error - 0.25), cfg.tol("median"), seed, res)};
                   }});

    out.push_back({"campanato", "campanato.monotone", static_cast<std::size_t>(cfg.count("monotone")),
                   [&cfg, inf](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 2;
                       constexpr double pairs[4][2] = {{1.0, 2.0}, {2.0, std::numeric_limits<double>::infinity()},
                                                       {1.0, std::numeric_limits<double>::infinity()}, {1.5, 3.0}};
                       const auto& qq = pairs[(i / 2) % 4];
                       const auto a = random_anisotropy(rng, n, 2.0);
                       CampanatoParams params{a, random_exponents(rng, n, 0.5, 2.0), qq[0], static_cast<int>(rng.integer(0, 1))};
                       const Field g = random_field(rng, Box::cube(n, -1, 1));
                       const auto res = q_monotonicity_check(g, params, small_domain(n, a, 0), qq[0], qq[1],
                                                             campanato_options(cfg, n), cfg.tol("monotone"));
                       (void)inf;
                       return std::vector{check("campanato.monotone", res.v1, res.v2 * (1.0 + cfg.tol("monotone")), seed,
                                                ball_resolution(cfg, n))};
                   }});

    out.push_back({"campanato", "campanato.axioms", static_cast<std::size_t>(cfg.count("seminorm")),
                   [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 2;
                       constexpr double qs[4] = {1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()};
                       const auto a = random_anisotropy(rng, n, 2.0);
                       const CampanatoParams params{a, random_exponents(rng, n, 0.5, 2.0), qs[(i / 2) % 4],
                                                    static_cast<int>(rng.integer(0, 2))};
                       const Box box = Box::cube(n, -1, 1);
                       const Field g = random_field(rng, box);
                       const Field h = random_field(rng, box);
                       const Field gh{box, [g, h](std::span<const double> y) { return g(y) + h(y); }};
                       const double alpha = rng.uniform(0.5, 3.0);
                       const Field ag{box, [g, alpha](std::span<const double> y) { return alpha * g(y); }};
                       const auto opts = campanato_options(cfg, n);
                       const int res = opts.resolution;
                       const auto domain = small_domain(n, a, 0);
                       // Shared ball set; the sum also tries P_g + P_h.
                       double sg = 0.0, sh = 0.0, sgh = 0.0;
                       for (const auto& b : enumerate_balls(domain, a, box)) {
                           const auto eg = evaluate_ball(g, params, b, opts);
                           const auto eh = evaluate_ball(h, params, b, opts);
                           const Eigen::VectorXd cand = eg.coordinates + eh.coordinates;
                           const auto egh = evaluate_ball(gh, params, b, opts, std::span<const Eigen::VectorXd>(&cand, 1));
                           sg = std::max(sg, eg.value);
                           sh = std::max(sh, eh.value);
                           sgh = std::max(sgh, egh.value);
                       }
                       const double v = campanato_seminorm(g, params, domain, opts).value;
                       const double va = campanato_seminorm(ag, params, domain, opts).value;
                       // g in P_s: a random polynomial of degree s.
                       FunctionFamily fam{FamilyKind::random_polynomial, {static_cast<double>(params.s)}, rng.next(), ""};
                       const double vp = campanato_seminorm(as_field(fam, box), params, domain, opts).value;
                       return std::vector{
                           check("campanato.triangle", sgh, (sg + sh) * (1.0 + cfg.tol("seminorm_homogeneity")), seed, res),
                           check("campanato.homogeneity", std::abs(va - alpha * v), cfg.tol("seminorm_homogeneity") * alpha * v,
                                 seed, res),
                           check("campanato.polynomial_kernel", vp, cfg.tol("polynomial_kernel"), seed, res)};
                   }});

    out.push_back({"campanato", "campanato.benchmark", 1, [&cfg, inf](std::size_t, std::uint64_t seed) {
                       const AnisotropyVector a({1.0});
                       const CampanatoParams params{a, ExponentVector({0.5}), inf, 1};
                       const Field g = as_field(FunctionFamily{FamilyKind::abs_ridge, {0.0}, 0, ""}, Box::cube(1, -1, 1));
                       const auto domain = BallSearchDomain::lattice(Box::cube(1, -1, 1), a, 21, 0.1, 0.5, 5, 2);
                       CampanatoOptions o;
                       o.resolution = cfg.resolution("benchmark_n1");
                       o.approx = cfg.approx;
                       const auto res = campanato_seminorm(g, params, domain, o);
                       const double u = res.witness ? std::abs(res.witness->center()[0]) : inf;
                       return std::vector{
                           check("campanato.benchmark", std::abs(res.value - 0.25), cfg.tol("benchmark") * 0.25, seed, o.resolution),
                           check("campanato.benchmark_witness", u, cfg.tol("witness"), seed, o.resolution)};
                   }});
    return out;
}

// ---------------------------------------------------------------------------
// duality

inline std::vector<Property> duality(const Config& cfg)
{
    std::vector<Property> out;

    out.push_back({"duality", "duality.single_ball", static_cast<std::size_t>(cfg.count("single_ball")),
                   [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 2;
                       const auto a = random_anisotropy(rng, n, 2.0);
                       const auto p = random_exponents(rng, n, 0.5, 2.0);
                       const AtomParams params{p, random_r(rng), s_min(a, p) + rng.integer(0, 1)};
                       const int res = ball_resolution(cfg, n);
                       const Box box = Box::cube(n, -1, 1);
                       const Atom atom = random_atom(rng, a, params, box, res, 0.2, 1.0);
                       const Field g = random_field(rng, box);
                       const auto chk =
                           single_ball_bound(atom, g, cfg.approx, cfg.tol("single_ball"), cfg.tol("single_ball_abs"));
                       return std::vector{
                           check("duality.single_ball", chk.lhs, chk.rhs * (1.0 + cfg.tol("single_ball")) + chk.absolute_slack,
                                 seed, res),
                           check("duality.sup_domination", chk.identity_residual, cfg.tol("sup_domination"), seed, res)};
                   }});

    out.push_back({"duality", "duality.functional", static_cast<std::size_t>(cfg.count("functional")),
                   [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 2;
                       const auto a = random_anisotropy(rng, n, 2.0);
                       const auto p = random_exponents(rng, n, 0.5, 1.0);
                       const AtomParams params{p, random_r(rng), s_min(a, p) + rng.integer(0, 1)};
                       const int res = ball_resolution(cfg, n);
                       const Box box = Box::cube(n, -1, 1);
                       AtomicCombination c;
                       const int size = rng.integer(1, 4);
                       for (int k = 0; k < size; ++k) {
                           c.atoms.push_back(random_atom(rng, a, params, box, res, 0.3, 0.9));
                           c.lambdas.push_back(rng.normal());
                       }
                       const Field g = random_field(rng, box);
                       const CampanatoParams cp{a, p, conjugate_exponent(params.r), params.s};
                       FunctionalBoundOptions o;
                       o.campanato = campanato_options(cfg, n);
                       o.aggregate_resolution = cfg.resolution(n == 1 ? "union_n1" : "union_n2");
                       o.tolerance = cfg.tol("functional");
                       const auto chk = functional_norm_bound(c, g, cp, small_domain(n, a, 1), o);
                       return std::vector{check("duality.functional", chk.lhs,
                                                chk.rhs * (1.0 + cfg.tol("functional")) + chk.absolute_slack, seed, res)};
                   }});

    out.push_back({"duality", "duality.dual_norm", static_cast<std::size_t>(cfg.count("dual_norm")),
                   [&cfg](std::size_t i, std::uint64_t seed) {
                       Rng rng(seed);
                       const std::size_t n = 1 + i % 2;
                       const auto a = random_anisotropy(rng, n, 2.0);
                       const Box box = Box::cube(n, -1, 1);
                       const auto ball = random_ball(rng, a, box, 0.2, 1.0);
                       const double r = random_r(rng);
                       const int s = rng.integer(0, 1);
                       const int res = ball_resolution(cfg, n);
                       const int samples = std::max(1, cfg.count("dual_samples") / 10);
                       const Field g = random_field(rng, box);
                       const auto d = dual_norm_on_ball(g, ball, r, s, samples, rng.next(), res, cfg.approx);
                       FunctionFamily fam{FamilyKind::random_polynomial, {static_cast<double>(s)}, rng.next(), ""};
                       const Field poly = as_field(fam, box);
                       const auto dp = dual_norm_on_ball(poly, ball, r, s, samples, rng.next(), res, cfg.approx);
                       return std::vector{
                           check("duality.dual_norm", d.value,
                                 d.infimum * (1.0 + cfg.tol("dual")) + cfg.tol("dual_abs") * d.g_norm, seed, res),
                           check("duality.dual_polynomial", dp.value, cfg.tol("polynomial_kernel"), seed, res)};
                   }});

    out.push_back({"duality", "duality.examples", 1, [&cfg](std::size_t, std::uint64_t seed) {
                       const int res = cfg.resolution("benchmark_n1");
                       const Field x{Box::cube(1, -1, 1), [](auto y) { return y[0]; }};
                       const AnisotropicBall unit({0.0}, 1.0, AnisotropyVector::isotropic(1));
                       const int samples = cfg.count("dual_samples");
                       const auto d = dual_norm_on_ball(x, unit, 2.0, 0, samples, seed, res, cfg.approx);
                       const double target = std::sqrt(2.0 / 3.0);
                       // Running maximum at doubling sample counts.
                       double drop = 0.0;
                       for (std::size_t k = 1; 2 * k <= d.running.size(); k *= 2)
                           drop = std::max(drop, d.running[k - 1] - d.running[2 * k - 1]);
                       // Sign atom against g(x) = x.
                       const Field sign{Box::cube(1, -1, 1), [](auto y) { return y[0] >= 0.0 ? 1.0 : -1.0; }};
                       const Atom atom =
                           make_atom(sign, unit, {ExponentVector({1.0}), std::numeric_limits<double>::infinity(), 0}, res);
                       const auto sb = single_ball_bound(atom, x, cfg.approx, cfg.tol("single_ball"), cfg.tol("single_ball_abs"));
                       // Indicator pairing and bilinearity.
                       const Lattice lat(Box::cube(1, 0, 1), res);
                       const GridFunction one(lat, std::vector<double>(lat.size(), 1.0));
                       const double unit_pair = pairing(one, one);
                       const GridFunction f1 = sample(FunctionFamily{FamilyKind::trig_mixture, {3, 3}, seed, ""}, lat.box(), {res});
                       const GridFunction f2 = sample(FunctionFamily{FamilyKind::trig_mixture, {3, 3}, seed + 1, ""}, lat.box(), {res});
                       const double lin = pairing(f1.combined(2.0, f2, -3.0), one);
                       const double parts = 2.0 * pairing(f1, one) - 3.0 * pairing(f2, one);
                       return std::vector{
                           check("duality.dual_benchmark", std::abs(d.value - target), cfg.tol("dual_benchmark") * target, seed, res),
                           check("duality.dual_benchmark_below", d.value,
                                 d.infimum * (1.0 + cfg.tol("dual")) + cfg.tol("dual_abs") * d.g_norm, seed, res),
                           check("duality.dual_monotone", drop, 0.0, seed, res),
                           check("duality.example_sign_lhs", std::abs(sb.lhs - 0.5), 1e-3, seed, res),
                           check("duality.example_sign", sb.lhs, sb.rhs * (1.0 + cfg.tol("single_ball")) + sb.absolute_slack,
                                 seed, res),
                           check("duality.example_indicator", std::abs(unit_pair - 1.0), 1e-12, seed, res),
                           check("duality.example_bilinear", std::abs(lin - parts), 1e-12 * std::max(1.0, std::abs(parts)), seed, res)};
                   }});
    return out;
}

// ---------------------------------------------------------------------------

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"geometry", "norms", "projection", "atoms", "campanato", "duality"};
    return names;
}

inline std::vector<Property> properties(const std::string& suite, const Config& cfg)
{
    if (suite == "geometry") return geometry(cfg);
    if (suite == "norms") return norms(cfg);
    if (suite == "projection") return projection(cfg);
    if (suite == "atoms") return atoms(cfg);
    if (suite == "campanato") return campanato(cfg);
    if (suite == "duality") return duality(cfg);
    if (suite == "all") {
        std::vector<Property> all;
        for (const auto& s : suite_names()) {
            auto part = properties(s, cfg);
            all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        }
        return all;
    }
    throw invalid_input("unknown suite '" + suite + "'");
}

inline std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::vector<CaseRecord> run_case(const Property& prop, std::size_t index, std::uint64_t seed)
{
    std::vector<CaseRecord> records;
    try {
        records = prop.run(index, seed);
    } catch (const std::exception& e) {
        CaseRecord c = check(prop.name, std::numeric_limits<double>::quiet_NaN(), 0.0, seed, 0);
        c.error = e.what();
        records = {c};
    }
    for (std::size_t k = 0; k < records.size(); ++k)
        records[k].id = prop.name + "/" + std::to_string(index) + (records.size() > 1 ? "/" + std::to_string(k) : "");
    return records;
}

} // namespace harness

/// Runs `suite` (or only the named properties of it, when `only` is nonempty).
inline Report run_suite(const std::string& suite, const Config& cfg, std::uint64_t seed,
                        const std::vector<std::string>& only = {})
{
    cfg.validate();
    Report report;
    report.suite = suite;
    report.seed = seed;
    report.config_digest = cfg.digest();
    report.timestamp = harness::utc_timestamp();

    for (const auto& prop : harness::properties(suite, cfg)) {
        if (!only.empty() && std::find(only.begin(), only.end(), prop.name) == only.end())
            continue;
        std::vector<std::vector<CaseRecord>> results(prop.count);
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < prop.count; i = next++)
                results[i] = harness::run_case(prop, i, seed + i);
        };
        const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), prop.count);
        if (workers <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (std::size_t t = 0; t < workers; ++t)
                pool.emplace_back(worker);
            for (auto& t : pool)
                t.join();
        }
        // One block per distinct op, in order of first appearance.
        std::vector<PropertyBlock> blocks;
        for (auto& per_case : results)
            for (auto& rec : per_case) {
                auto it = std::find_if(blocks.begin(), blocks.end(), [&](const auto& b) { return b.name == rec.op; });
                if (it == blocks.end()) {
                    blocks.push_back({rec.op});
                    it = blocks.end() - 1;
                }
                ++it->cases;
                if (!rec.pass)
                    ++it->failed;
                it->max_violation = std::max(it->max_violation, rec.violation());
                if (std::isfinite(rec.lhs))
                    it->max_lhs = std::max(it->max_lhs, rec.lhs);
                report.cases.push_back(std::move(rec));
            }
        for (auto& b : blocks) {
            auto it = std::find_if(report.properties.begin(), report.properties.end(),
                                   [&](const auto& p) { return p.name == b.name; });
            if (it == report.properties.end()) {
                report.properties.push_back(b);
            } else {
                it->cases += b.cases;
                it->failed += b.failed;
                it->max_violation = std::max(it->max_violation, b.max_violation);
                it->max_lhs = std::max(it->max_lhs, b.max_lhs);
            }
        }
    }
    return report;
}

} // namespace amh
