#pragma once

// Anisotropic mixed-norm (p, r, s)-atoms: construction from an arbitrary
// function by subtracting its projection onto P_s and normalizing, an
// independent validation of the three defining conditions, and the aggregate
// quasi-norm of finite atomic combinations.

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "amh/anisotropy.hpp"
#include "amh/error.hpp"
#include "amh/grid.hpp"
#include "amh/mixed_norm.hpp"
#include "amh/polyproj.hpp"

namespace amh {

struct AtomParams {
    ExponentVector p;
    double r = 2.0; // in (1, inf]
    int s = 0;
};

struct AtomValidation {
    bool support_ok = false;
    double support_margin = 0.0; // max |a| at nodes outside the ball
    bool size_ok = false;
    double size_ratio = 0.0;     // ||a||_r / (|B|^{1/r} / ||chi_B||_{L^p})
    bool moments_ok = false;
    double max_moment_residual = 0.0; // max_alpha |int a u^alpha| / ||a||_1, ball-adapted u
    double size_tolerance = 1e-9;
    double moment_tolerance = 1e-7;

    [[nodiscard]] bool pass() const noexcept { return support_ok && size_ok && moments_ok; }
};

struct Atom {
    GridFunction values;
    AnisotropicBall ball;
    AtomParams params;
    AtomValidation evidence;
    std::uint64_t seed = 0;

    [[nodiscard]] int resolution() const { return values.lattice().resolution()[0]; }
};

/// |B|^{1/r} / ||chi_B||_{L^p} on the ball's own lattice.
inline double atom_size_bound(const BallGrid& grid, const ExponentVector& p, double r)
{
    const double volume_factor = std::isinf(r) ? 1.0 : std::pow(grid.measure(), 1.0 / r);
    return volume_factor / indicator_mixed_norm(grid, p);
}

inline AtomValidation validate_atom(const Atom& atom, double size_tolerance = 1e-9, double moment_tolerance = 1e-7)
{
    const auto& values = atom.values.values();
    const auto& lattice = atom.values.lattice();
    const auto& ball = atom.ball;
    const double r = atom.params.r;
    const std::size_t n = lattice.dimension();
    AtomValidation out;
    out.size_tolerance = size_tolerance;
    out.moment_tolerance = moment_tolerance;

    const auto indices = multi_indices(n, atom.params.s);
    std::vector<double> moments(indices.size(), 0.0);
    double l1 = 0.0;
    double lr_acc = 0.0;
    double sup = 0.0;
    Point y(n);
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double v = values[k];
        lattice.node(k, y);
        if (!ball.contains(y))
            out.support_margin = std::max(out.support_margin, std::abs(v));
        if (v == 0.0)
            continue;
        l1 += std::abs(v);
        sup = std::max(sup, std::abs(v));
        if (!std::isinf(r))
            lr_acc += std::pow(std::abs(v), r);
        const Point u = ball.to_unit(y);
        for (std::size_t j = 0; j < indices.size(); ++j) {
            double term = v;
            for (std::size_t i = 0; i < n; ++i)
                for (int e = 0; e < indices[j][i]; ++e)
                    term *= u[i];
            moments[j] += term;
        }
    }
    const double w = lattice.cell_volume();
    l1 *= w;
    out.support_ok = out.support_margin == 0.0;

    const double lr = std::isinf(r) ? sup : std::pow(lr_acc * w, 1.0 / r);
    const BallGrid own(ball, lattice.resolution()[0]);
    out.size_ratio = lr / atom_size_bound(own, atom.params.p, r);
    out.size_ok = out.size_ratio <= 1.0 + size_tolerance;

    for (double m : moments)
        out.max_moment_residual = std::max(out.max_moment_residual, std::abs(m * w));
    if (l1 > 0.0)
        out.max_moment_residual /= l1;
    out.moments_ok = out.max_moment_residual <= moment_tolerance;
    return out;
}

/// a = (|B|^{1/r} / ||chi_B||_{L^p}) ||f - Pi_B f||_{L^r(B)}^{-1} (f - Pi_B f),
/// built on B's bounding-box lattice at `resolution` per axis.
inline Atom make_atom(const Field& f, const AnisotropicBall& ball, const AtomParams& params, int resolution,
                      std::uint64_t seed = 0)
{
    if (params.p.dimension() != ball.dimension())
        throw dimension_mismatch("make_atom: exponent and ball dimensions differ");
    if (!(params.r > 1.0))
        throw invalid_input("make_atom: r must lie in (1, inf]");
    if (params.s < s_min(ball.anisotropy(), params.p))
        throw invalid_input("make_atom: s = " + std::to_string(params.s) + " is below the admissible minimum " +
                            std::to_string(s_min(ball.anisotropy(), params.p)));
    if (!f.domain.contains(Box::bounding(ball), 1e-9))
        throw invalid_input("make_atom: the ball's bounding box must lie inside the function's domain");

    auto grid = std::make_shared<const BallGrid>(ball, resolution);
    const auto basis = build_basis(grid, params.s);
    const auto sampled = grid->sample(f);
    auto residual = projection_residual(sampled, basis);

    const double f_norm = lr_norm(*grid, sampled, params.r);
    const double res_norm = lr_norm(*grid, residual, params.r);
    if (!(res_norm > 1e-12 * f_norm))
        throw degenerate_input("degenerate: input is polynomial on ball");

    const double factor = atom_size_bound(*grid, params.p, params.r) / res_norm;
    for (double& v : residual)
        v *= factor;

    Atom atom{grid->to_grid(residual), ball, params, {}, seed};
    atom.evidence = validate_atom(atom);
    return atom;
}

inline Atom make_atom(const GridFunction& f, const AnisotropicBall& ball, const AtomParams& params)
{
    return make_atom(as_field(f), ball, params, default_resolution(f.dimension()));
}

struct AtomicCombination {
    std::vector<Atom> atoms;
    std::vector<double> lambdas; // real coefficients

    void validate() const
    {
        if (atoms.empty() || atoms.size() != lambdas.size())
            throw invalid_input("atomic combination: need equally many atoms and coefficients, at least one");
        const auto& a0 = atoms.front();
        for (const auto& at : atoms)
            if (!(at.ball.anisotropy() == a0.ball.anisotropy()) || !(at.params.p == a0.params.p))
                throw incompatible_parameters("atomic combination: atoms must share anisotropy and exponents");
    }
};

/// Lattice covering the union of the atoms' bounding boxes.
inline Lattice union_lattice(const AtomicCombination& c, int resolution)
{
    Box box = Box::bounding(c.atoms.front().ball);
    for (const auto& at : c.atoms)
        box = box.hull(Box::bounding(at.ball));
    return Lattice(box, resolution);
}

/// || { sum_i [ |lambda_i| chi_{B_i} / ||chi_{B_i}||_{L^p} ]^{p_} }^{1/p_} ||_{L^p}
/// on one lattice over the union of the balls. The normalizing norms are taken
/// on the same lattice, so the discrete quantity satisfies the l^1 bound exactly.
inline double aggregate_norm(const AtomicCombination& c, int resolution)
{
    c.validate();
    const ExponentVector& p = c.atoms.front().params.p;
    const double pu = p.p_underline();
    const Lattice lattice = union_lattice(c, resolution);
    const std::size_t size = lattice.size();
    std::vector<double> total(size, 0.0);
    std::vector<char> mask(size);
    Point y(lattice.dimension());
    for (std::size_t i = 0; i < c.atoms.size(); ++i) {
        const auto& ball = c.atoms[i].ball;
        std::vector<double> chi(size, 0.0);
        for (std::size_t k = 0; k < size; ++k) {
            lattice.node(k, y);
            mask[k] = ball.contains(y) ? 1 : 0;
            chi[k] = mask[k];
        }
        const double norm = detail::iterated_norm(std::move(chi), lattice, p);
        if (!(norm > 0.0))
            throw degenerate_domain("aggregate_norm: a ball holds no node of the union lattice; raise the resolution");
        const double term = std::pow(std::abs(c.lambdas[i]) / norm, pu);
        for (std::size_t k = 0; k < size; ++k)
            if (mask[k])
                total[k] += term;
    }
    for (double& v : total)
        v = pu == 1.0 ? v : std::pow(v, 1.0 / pu);
    return detail::iterated_norm(std::move(total), lattice, p);
}

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// sum |lambda_i| <= aggregate_norm(c), for p in (0, 1]^n.
inline InequalityCheck l1_lower_bound_check(const AtomicCombination& c, int resolution, double grid_tolerance = 0.02)
{
    c.validate();
    if (!c.atoms.front().params.p.within_unit_cube())
        throw invalid_input("l1_lower_bound_check: exponents must lie in (0, 1]");
    InequalityCheck out;
    for (double l : c.lambdas)
        out.lhs += std::abs(l);
    out.rhs = aggregate_norm(c, resolution);
    out.pass = out.lhs <= out.rhs * (1.0 + 2.0 * grid_tolerance);
    return out;
}

} // namespace amh
