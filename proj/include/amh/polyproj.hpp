#pragma once

// The natural projection Pi_B onto P_s: the L^2(B)-orthogonal projection,
// characterized by int_B Pi_B(f) q = int_B f q for every q in P_s.

#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "amh/anisotropy.hpp"
#include "amh/error.hpp"
#include "amh/grid.hpp"
#include "amh/polynomial.hpp"

namespace amh {

/// Ball-adapted monomials u^alpha at the in-ball nodes, one column per
/// multi-index of `multi_indices(n, s)`.
inline Eigen::MatrixXd monomial_matrix(const BallGrid& grid, int s)
{
    const std::size_t n = grid.dimension();
    const auto indices = multi_indices(n, s);
    const auto h = grid.ball().half_widths();
    const auto& c = grid.ball().center();
    Eigen::MatrixXd v(static_cast<Eigen::Index>(grid.count()), static_cast<Eigen::Index>(indices.size()));
    std::vector<double> powers(n * (s + 1));
    for (std::size_t k = 0; k < grid.count(); ++k) {
        const auto y = grid.coords(k);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (y[i] - c[i]) / h[i];
            double acc = 1.0;
            for (int e = 0; e <= s; ++e) {
                powers[i * (s + 1) + e] = acc;
                acc *= u;
            }
        }
        for (std::size_t j = 0; j < indices.size(); ++j) {
            double term = 1.0;
            for (std::size_t i = 0; i < n; ++i)
                term *= powers[i * (s + 1) + indices[j][i]];
            v(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = term;
        }
    }
    return v;
}

class OrthonormalBasis {
public:
    OrthonormalBasis(std::shared_ptr<const BallGrid> grid, int degree, Eigen::MatrixXd coefficients,
                     Eigen::MatrixXd values, double gram_residual)
        : grid_(std::move(grid)), degree_(degree), coefficients_(std::move(coefficients)),
          values_(std::move(values)), gram_residual_(gram_residual)
    {
    }

    [[nodiscard]] const BallGrid& grid() const noexcept { return *grid_; }
    [[nodiscard]] std::shared_ptr<const BallGrid> shared_grid() const noexcept { return grid_; }
    [[nodiscard]] const AnisotropicBall& ball() const noexcept { return grid_->ball(); }
    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(coefficients_.rows()); }
    [[nodiscard]] double gram_residual() const noexcept { return gram_residual_; }

    /// Row j: monomial coefficients of q_j in the ball frame.
    [[nodiscard]] const Eigen::MatrixXd& coefficients() const noexcept { return coefficients_; }
    /// Column j: q_j at the in-ball nodes.
    [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }

    /// sum_j d_j q_j as a polynomial in the ball frame.
    [[nodiscard]] PolynomialRep combine(const Eigen::VectorXd& d) const
    {
        const Eigen::VectorXd c = coefficients_.transpose() * d;
        return PolynomialRep::in_frame_of(ball(), degree_, std::vector<double>(c.data(), c.data() + c.size()));
    }

    [[nodiscard]] PolynomialRep element(std::size_t j) const
    {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size()));
        d(static_cast<Eigen::Index>(j)) = 1.0;
        return combine(d);
    }

    /// Orthonormal coordinates <v, q_j> of in-ball node values.
    [[nodiscard]] Eigen::VectorXd coordinates(const std::vector<double>& in_ball) const
    {
        if (in_ball.size() != grid_->count())
            throw dimension_mismatch("projection: value count differs from in-ball node count");
        const Eigen::Map<const Eigen::VectorXd> v(in_ball.data(), static_cast<Eigen::Index>(in_ball.size()));
        return grid_->weight() * (values_.transpose() * v);
    }

    [[nodiscard]] std::vector<double> evaluate(const Eigen::VectorXd& d) const
    {
        const Eigen::VectorXd out = values_ * d;
        return {out.data(), out.data() + out.size()};
    }

    /// |B| * sum_j max_B q_j^2. Bounds sup_B |Pi_B f| / ((1/|B|) int_B |f|) for
    /// every f, since |Pi_B f(x)| <= sum_j |q_j(x)| int_B |f| |q_j|.
    [[nodiscard]] double bound_constant() const
    {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < values_.cols(); ++j)
            sum += values_.col(j).cwiseAbs2().maxCoeff();
        return grid_->measure() * sum;
    }

private:
    std::shared_ptr<const BallGrid> grid_;
    int degree_;
    Eigen::MatrixXd coefficients_;
    Eigen::MatrixXd values_;
    double gram_residual_;
};

inline OrthonormalBasis build_basis(std::shared_ptr<const BallGrid> grid, int s)
{
    if (s < 0)
        throw invalid_input("build_basis: negative degree");
    const std::size_t m = binomial(grid->dimension() + static_cast<std::size_t>(s), static_cast<std::size_t>(s));
    if (grid->count() < 3 * m)
        throw insufficient_nodes("build_basis: " + std::to_string(grid->count()) + " in-ball nodes, need at least " +
                                 std::to_string(3 * m));
    const double w = grid->weight();
    const Eigen::MatrixXd v = monomial_matrix(*grid, s);
    const Eigen::MatrixXd gram = w * (v.transpose() * v);
    const auto mi = static_cast<Eigen::Index>(m);

    Eigen::MatrixXd c; // q = c * monomials
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() == Eigen::Success) {
        c = llt.matrixL().solve(Eigen::MatrixXd::Identity(mi, mi));
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
        const double floor = 1e-12 * gram.trace();
        if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < floor)
            throw conditioning_error("build_basis: Gram matrix singular beyond eigenvalue floor");
        c = eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
    }
    Eigen::MatrixXd q = v * c.transpose();

    // One re-orthogonalization pass.
    const Eigen::MatrixXd gram2 = w * (q.transpose() * q);
    Eigen::LLT<Eigen::MatrixXd> llt2(gram2);
    if (llt2.info() != Eigen::Success)
        throw conditioning_error("build_basis: re-orthogonalization failed");
    const Eigen::MatrixXd l2inv = llt2.matrixL().solve(Eigen::MatrixXd::Identity(mi, mi));
    c = l2inv * c;
    q = q * l2inv.transpose();

    const double residual =
        (w * (q.transpose() * q) - Eigen::MatrixXd::Identity(mi, mi)).cwiseAbs().maxCoeff();
    if (!(residual <= 1e-8))
        throw conditioning_error("build_basis: orthonormality residual " + std::to_string(residual));
    return OrthonormalBasis(std::move(grid), s, std::move(c), std::move(q), residual);
}

inline OrthonormalBasis build_basis(const AnisotropicBall& ball, int s, int resolution)
{
    return build_basis(std::make_shared<const BallGrid>(ball, resolution), s);
}

/// Pi_B of in-ball node values, as a polynomial in the ball frame.
inline PolynomialRep project(const std::vector<double>& in_ball, const OrthonormalBasis& basis)
{
    return basis.combine(basis.coordinates(in_ball));
}

inline PolynomialRep project(const Field& f, const OrthonormalBasis& basis)
{
    return project(basis.grid().sample(f), basis);
}

inline PolynomialRep project(const GridFunction& f, const OrthonormalBasis& basis)
{
    return project(basis.grid().sample(f), basis);
}

/// Node values of Pi_B(v) and of v - Pi_B(v).
inline std::vector<double> projected_values(const std::vector<double>& in_ball, const OrthonormalBasis& basis)
{
    return basis.evaluate(basis.coordinates(in_ball));
}

/// Two passes: the first leaves an O(eps ||v||) component in P_s, which
/// dominates when v is nearly polynomial; the second reduces it to O(eps ||v - Pi v||).
inline std::vector<double> projection_residual(const std::vector<double>& in_ball, const OrthonormalBasis& basis)
{
    std::vector<double> r = in_ball;
    for (int pass = 0; pass < 2; ++pass) {
        const auto p = projected_values(r, basis);
        for (std::size_t k = 0; k < p.size(); ++k)
            r[k] -= p[k];
    }
    return r;
}

/// sup_B |Pi_B f| / ((1/|B|) int_B |f|) on the basis grid.
inline double projection_bound_ratio(const std::vector<double>& in_ball, const OrthonormalBasis& basis)
{
    const auto& grid = basis.grid();
    double l1 = 0.0;
    for (double v : in_ball)
        l1 += std::abs(v);
    l1 *= grid.weight();
    if (!(l1 > 0.0))
        throw degenerate_input("projection_bound_ratio: f vanishes on the ball");
    double sup = 0.0;
    for (double v : projected_values(in_ball, basis))
        sup = std::max(sup, std::abs(v));
    return sup / (l1 / grid.measure());
}

inline double projection_bound_ratio(const Field& f, const AnisotropicBall& ball, int s, int resolution)
{
    const auto basis = build_basis(ball, s, resolution);
    return projection_bound_ratio(basis.grid().sample(f), basis);
}

} // namespace amh
