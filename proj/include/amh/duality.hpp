#pragma once

// The pairing L_g(f) = int f g and numerical checks of the inequalities that
// make L_g bounded on finite atomic combinations.

#include <cmath>
#include <cstdint>
#include <vector>

#include "amh/atoms.hpp"
#include "amh/campanato.hpp"
#include "amh/error.hpp"
#include "amh/grid.hpp"
#include "amh/polyproj.hpp"
#include "amh/rng.hpp"

namespace amh {

/// 1/r + 1/r' = 1.
inline double conjugate_exponent(double r)
{
    if (std::isinf(r))
        return 1.0;
    if (r == 1.0)
        return std::numeric_limits<double>::infinity();
    return r / (r - 1.0);
}

namespace detail {

template <class Term>
double pairing_sum(const GridFunction& f, const Field& g, Term term)
{
    if (f.dimension() != g.domain.dimension())
        throw dimension_mismatch("pairing: dimensions differ");
    if (f.box().intersect(g.domain).degenerate())
        throw degenerate_domain("pairing: disjoint domains");
    const auto& lattice = f.lattice();
    const auto& values = f.values();
    const Box& dom = g.domain;
    Point y(lattice.dimension());
    double sum = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k] == 0.0)
            continue;
        lattice.node(k, y);
        bool inside = true;
        for (std::size_t i = 0; i < y.size() && inside; ++i)
            inside = y[i] >= dom.lower[i] && y[i] <= dom.upper[i];
        if (inside)
            sum += term(values[k], g(y));
    }
    return sum * lattice.cell_volume();
}

// int |f g|; the scale of rounding error in the signed pairing.
inline double absolute_pairing(const GridFunction& f, const Field& g)
{
    return pairing_sum(f, g, [](double a, double b) { return std::abs(a * b); });
}

} // namespace detail

/// int f g, by quadrature over f's lattice nodes inside g's domain.
inline double pairing(const GridFunction& f, const Field& g)
{
    return detail::pairing_sum(f, g, [](double a, double b) { return a * b; });
}

inline double pairing(const GridFunction& f, const GridFunction& g) { return pairing(f, as_field(g)); }

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
    double identity_residual = 0.0; // |weight * error - rhs| / rhs at the atom's own ball
    double absolute_slack = 0.0;    // rounding scale of the pairing: abs_tolerance * int |a g|
};

/// |int a g| <= (|B|^{1/r} / ||chi_B||_{L^p}) inf_P ||g - P||_{L^{r'}(B)}.
inline BoundCheck single_ball_bound(const Atom& atom, const Field& g, const ApproxOptions& approx = {},
                                    double tolerance = 1e-6, double abs_tolerance = 1e-12)
{
    const double rp = conjugate_exponent(atom.params.r);
    CampanatoParams params{atom.ball.anisotropy(), atom.params.p, rp, atom.params.s};
    CampanatoOptions options;
    options.resolution = atom.resolution();
    options.approx = approx;
    const auto e = evaluate_ball(g, params, atom.ball, options);

    BoundCheck out;
    out.lhs = std::abs(pairing(atom.values, g));
    out.rhs = atom_size_bound(*e.basis->shared_grid(), atom.params.p, atom.params.r) * e.raw_error;
    out.absolute_slack = abs_tolerance * detail::absolute_pairing(atom.values, g);
    out.pass = out.lhs <= out.rhs * (1.0 + tolerance) + out.absolute_slack;
    out.identity_residual = out.rhs > 0.0 ? std::abs(e.value - out.rhs) / out.rhs : std::abs(e.value);
    return out;
}

struct FunctionalBoundOptions {
    CampanatoOptions campanato;  // resolution should match the atoms'
    int aggregate_resolution = 0; // 0 = default for the dimension
    double tolerance = 1e-5;
};

struct FunctionalBoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
    double aggregate = 0.0;
    double seminorm = 0.0;
    double absolute_slack = 0.0;
};

/// |L_g(sum lambda_i a_i)| <= aggregate_norm * seminorm(g), with the searched
/// ball set always containing every atom's ball.
inline FunctionalBoundCheck functional_norm_bound(const AtomicCombination& c, const Field& g,
                                                  const CampanatoParams& params, BallSearchDomain domain,
                                                  const FunctionalBoundOptions& options = {})
{
    c.validate();
    if (!c.atoms.front().params.p.within_unit_cube())
        throw invalid_input("functional_norm_bound: exponents must lie in (0, 1]");
    double pair = 0.0;
    double magnitude = 0.0;
    for (std::size_t i = 0; i < c.atoms.size(); ++i) {
        pair += c.lambdas[i] * pairing(c.atoms[i].values, g);
        magnitude += std::abs(c.lambdas[i]) * detail::absolute_pairing(c.atoms[i].values, g);
    }
    for (const auto& at : c.atoms)
        domain.extra_balls.push_back(at.ball);
    const int agg_res = options.aggregate_resolution > 0 ? options.aggregate_resolution
                                                         : default_resolution(g.domain.dimension());
    FunctionalBoundCheck out;
    out.aggregate = aggregate_norm(c, agg_res);
    out.seminorm = campanato_seminorm(g, params, domain, options.campanato).value;
    out.lhs = std::abs(pair);
    out.rhs = out.aggregate * out.seminorm;
    out.absolute_slack = 1e-12 * std::abs(magnitude);
    out.pass = out.lhs <= out.rhs * (1.0 + options.tolerance) + out.absolute_slack;
    return out;
}

struct DualNormResult {
    double value = 0.0;         // max |int f g| over sampled f in L^r_0(B), ||f||_r = 1
    double infimum = 0.0;       // inf_P ||g - P||_{L^{r'}(B)} (solver upper bound)
    std::vector<double> running; // running maximum after each sample
    std::size_t degenerate = 0;
    double g_norm = 0.0;         // ||g||_{L^{r'}(B)}, which bounds value by Hoelder
};

/// Empirical [L^r_0(B)]* norm of g from `samples` random polynomials of degree
/// s + 1 .. s + 4 in ball coordinates, projected off P_s and L^r-normalized.
inline DualNormResult dual_norm_on_ball(const Field& g, const AnisotropicBall& ball, double r, int s, int samples,
                                        std::uint64_t seed, int resolution, const ApproxOptions& approx = {})
{
    if (!(r > 1.0))
        throw invalid_input("dual_norm_on_ball: r must lie in (1, inf]");
    auto grid = std::make_shared<const BallGrid>(ball, resolution);
    const auto basis = build_basis(grid, s);
    const auto gv = grid->sample(g);
    DualNormResult out;
    out.infimum = best_approximation(basis, gv, conjugate_exponent(r), approx).raw_error;
    out.g_norm = lr_norm(*grid, gv, conjugate_exponent(r));

    const std::size_t n = ball.dimension();
    const auto& h = ball.half_widths();
    const auto& c = ball.center();
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        const int degree = s + rng.integer(1, 4);
        const PolynomialRep f = random_polynomial(n, degree, rng.next());
        std::vector<double> fv(grid->count());
        Point u(n);
        for (std::size_t k = 0; k < fv.size(); ++k) {
            const auto y = grid->coords(k);
            for (std::size_t j = 0; j < n; ++j)
                u[j] = (y[j] - c[j]) / h[j];
            fv[k] = f(u);
        }
        auto f0 = projection_residual(fv, basis);
        const double norm = lr_norm(*grid, f0, r);
        double value = out.value;
        if (norm > 1e-12 * std::max(1.0, lr_norm(*grid, fv, r))) {
            double acc = 0.0;
            for (std::size_t k = 0; k < f0.size(); ++k)
                acc += f0[k] * gv[k];
            value = std::max(value, std::abs(acc * grid->weight() / norm));
        } else {
            ++out.degenerate;
        }
        out.value = value;
        out.running.push_back(value);
    }
    if (samples > 0 && out.degenerate == static_cast<std::size_t>(samples))
        throw sampling_error("dual_norm_on_ball: every sample projected to zero");
    return out;
}

} // namespace amh
