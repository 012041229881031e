#pragma once

// Best approximation from P_s in the discrete L^q(B) (quasi-)norms on a ball
// grid: least squares for q = 2, iteratively reweighted least squares for
// other finite q, and Lawson's algorithm with an exact exchange finish for
// q = inf.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "amh/error.hpp"
#include "amh/polyproj.hpp"

namespace amh {

struct ApproxOptions {
    int max_iterations = 200;    // IRLS iteration cap
    double tolerance = 1e-8;     // relative objective change (IRLS) or bound spread (minimax)
    double residual_floor = 1e-10; // IRLS residual floor, relative to max |g|
    int lawson_iterations = 40;  // before switching to the exchange finish
    int exchange_rounds = 200;
};

struct BestApproximation {
    double error = 0.0;       // [(1/|B|) int_B |g - P|^q]^{1/q}, or max |g - P| for q = inf
    double raw_error = 0.0;   // ||g - P||_{L^q(B)}
    double lower_bound = 0.0; // certified lower bound on the infimum (q = inf), else 0
    Eigen::VectorXd coordinates; // P in the orthonormal basis
    int iterations = 0;
    std::string method;
};

namespace detail {

inline Eigen::VectorXd residual_of(const OrthonormalBasis& basis, const Eigen::VectorXd& g, const Eigen::VectorXd& d)
{
    return g - basis.values() * d;
}

// sum_k w |e_k|^q, or max |e_k| for q = inf.
inline double lq_objective(const Eigen::VectorXd& e, double q, double w)
{
    if (std::isinf(q))
        return e.cwiseAbs().maxCoeff();
    if (q == 2.0)
        return w * e.squaredNorm();
    if (q == 1.0)
        return w * e.cwiseAbs().sum();
    return w * e.cwiseAbs().array().pow(q).sum();
}

inline Eigen::VectorXd weighted_least_squares(const OrthonormalBasis& basis, const Eigen::VectorXd& g,
                                              const Eigen::VectorXd& weights)
{
    const Eigen::MatrixXd& q = basis.values();
    const Eigen::MatrixXd lhs = q.transpose() * weights.asDiagonal() * q;
    const Eigen::VectorXd rhs = q.transpose() * weights.cwiseProduct(g);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(lhs);
    Eigen::VectorXd d = ldlt.solve(rhs);
    if (ldlt.info() != Eigen::Success || !d.allFinite())
        d = lhs.completeOrthogonalDecomposition().solve(rhs);
    return d;
}

// Dense two-phase simplex with Bland's rule for
//   min cost^T y  s.t.  A y = b, y >= 0,  with b >= 0.
// Returns the optimal basis (column indices, one per row; -1 marks a row
// still held by an artificial at zero level) and the optimal value.
struct SimplexResult {
    std::vector<int> basis;
    double value = 0.0;
    bool ok = false;
};

inline SimplexResult simplex_min(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& cost)
{
    const Eigen::Index rows = a.rows();
    const Eigen::Index cols = a.cols();
    const Eigen::Index width = cols + rows + 1; // structural, artificial, rhs
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows + 1, width);
    t.topLeftCorner(rows, cols) = a;
    t.block(0, cols, rows, rows).setIdentity();
    t.block(0, width - 1, rows, 1) = b;
    std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows));
    for (Eigen::Index r = 0; r < rows; ++r)
        basis[r] = cols + r;

    const double eps = 1e-11 * std::max(1.0, a.cwiseAbs().maxCoeff());

    auto pivot = [&](Eigen::Index row, Eigen::Index col) {
        t.row(row) /= t(row, col);
        for (Eigen::Index r = 0; r <= rows; ++r)
            if (r != row && t(r, col) != 0.0)
                t.row(r) -= t(r, col) * t.row(row);
        basis[row] = col;
    };

    // Objective row holds reduced costs; t(rows, width-1) = -objective.
    auto run = [&](Eigen::Index allowed_cols) -> bool {
        for (int guard = 0; guard < 50000; ++guard) {
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < allowed_cols; ++j)
                if (t(rows, j) < -eps) {
                    enter = j;
                    break;
                }
            if (enter < 0)
                return true;
            Eigen::Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index r = 0; r < rows; ++r) {
                if (t(r, enter) > eps) {
                    const double ratio = t(r, width - 1) / t(r, enter);
                    if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && leave >= 0 && basis[r] < basis[leave])) {
                        best = ratio;
                        leave = r;
                    }
                }
            }
            if (leave < 0)
                return false; // unbounded
            pivot(leave, enter);
        }
        return false;
    };

    // Phase 1: minimize the sum of artificials.
    t.row(rows).setZero();
    for (Eigen::Index r = 0; r < rows; ++r)
        t.row(rows) -= t.row(r);
    for (Eigen::Index r = 0; r < rows; ++r)
        t(rows, cols + r) = 0.0;
    SimplexResult result;
    if (!run(cols + rows))
        return result;
    if (t(rows, width - 1) < -1e-9)
        return result; // infeasible
    // Drive zero-level artificials out where possible.
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (basis[r] < cols)
            continue;
        for (Eigen::Index j = 0; j < cols; ++j)
            if (std::abs(t(r, j)) > eps) {
                pivot(r, j);
                break;
            }
    }
    // Phase 2.
    t.row(rows).setZero();
    t.block(rows, 0, 1, cols) = cost.transpose();
    for (Eigen::Index r = 0; r < rows; ++r)
        if (basis[r] < cols)
            t.row(rows) -= cost(basis[r]) * t.row(r);
    for (Eigen::Index r = 0; r < rows; ++r)
        t(rows, cols + r) = 0.0;
    if (!run(cols))
        return result;
    result.ok = true;
    result.value = -t(rows, width - 1);
    result.basis.resize(static_cast<std::size_t>(rows));
    for (Eigen::Index r = 0; r < rows; ++r)
        result.basis[r] = basis[r] < cols ? static_cast<int>(basis[r]) : -1;
    return result;
}

// Exact discrete minimax on a node subset via the dual LP
//   max sum_k sigma g_k y_{k,sigma}  s.t.  sum y sigma Q_k = 0, sum y = 1, y >= 0,
// whose value is min_c max_{k in S} |g_k - Q_k c|.
struct SubsetMinimax {
    Eigen::VectorXd coordinates;
    double level = 0.0;
    bool ok = false;
};

inline SubsetMinimax subset_minimax(const Eigen::MatrixXd& q, const Eigen::VectorXd& g, const std::vector<Eigen::Index>& subset)
{
    const Eigen::Index m = q.cols();
    const auto k = static_cast<Eigen::Index>(subset.size());
    Eigen::MatrixXd a(m + 1, 2 * k);
    Eigen::VectorXd cost(2 * k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const Eigen::Index node = subset[j];
        a.block(0, 2 * j, m, 1) = q.row(node).transpose();
        a.block(0, 2 * j + 1, m, 1) = -q.row(node).transpose();
        a(m, 2 * j) = 1.0;
        a(m, 2 * j + 1) = 1.0;
        cost(2 * j) = -g(node);
        cost(2 * j + 1) = g(node);
    }
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
    b(m) = 1.0;
    const auto lp = simplex_min(a, b, cost);
    SubsetMinimax out;
    if (!lp.ok)
        return out;
    // Complementary slackness: sigma (g_k - Q_k c) = E on every basic column.
    std::vector<int> cols;
    for (int c : lp.basis)
        if (c >= 0)
            cols.push_back(c);
    Eigen::MatrixXd sys(static_cast<Eigen::Index>(cols.size()), m + 1);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < cols.size(); ++r) {
        const Eigen::Index node = subset[cols[r] / 2];
        const double sigma = cols[r] % 2 == 0 ? 1.0 : -1.0;
        sys.block(static_cast<Eigen::Index>(r), 0, 1, m) = sigma * q.row(node);
        sys(static_cast<Eigen::Index>(r), m) = 1.0;
        rhs(static_cast<Eigen::Index>(r)) = sigma * g(node);
    }
    const Eigen::VectorXd x = sys.completeOrthogonalDecomposition().solve(rhs);
    out.coordinates = x.head(m);
    out.level = -lp.value;
    out.ok = x.allFinite();
    return out;
}

inline std::vector<Eigen::Index> top_indices(const Eigen::VectorXd& score, std::size_t count)
{
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(score.size()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    count = std::min(count, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(),
                      [&](Eigen::Index x, Eigen::Index y) {
                          return score(x) > score(y) || (score(x) == score(y) && x < y);
                      });
    idx.resize(count);
    return idx;
}

// Hoelder lower bound on min_P ||g - P||_{L^q}: for y orthogonal to P_s,
// |<e, y>| = |<g, y>| <= inf_P ||g - P||_q ||y||_{q'}. The dual vector is
// |e|^{q-1} sign(e) with its P_s component removed.
inline double dual_lower_bound(const OrthonormalBasis& basis, const Eigen::VectorXd& e, double q, double w)
{
    const Eigen::MatrixXd& qv = basis.values();
    Eigen::VectorXd t = e.cwiseSign();
    if (q != 1.0)
        t.array() *= e.cwiseAbs().array().pow(q - 1.0);
    const Eigen::VectorXd proj = (qv.transpose() * qv).ldlt().solve(qv.transpose() * t);
    const Eigen::VectorXd y = t - qv * proj;
    const double dual = q == 1.0 ? y.cwiseAbs().maxCoeff()
                                 : std::pow(w * y.cwiseAbs().array().pow(q / (q - 1.0)).sum(), (q - 1.0) / q);
    double bound = dual > 0.0 ? std::abs(w * e.dot(y)) / dual : 0.0;
    if (q == 1.0) {
        // An L1 minimizer interpolates at m nodes, where the subgradient is
        // free in [-1, 1]. Keep sign(e) off a set Z of the smallest residuals
        // and give Z the minimum-norm entries that restore orthogonality; a
        // larger Z spreads the load when many residuals vanish.
        const auto m = qv.cols();
        const auto size = e.size();
        std::vector<Eigen::Index> order(static_cast<std::size_t>(size));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::sort(order.begin(), order.end(),
                  [&](Eigen::Index a, Eigen::Index b) { return std::abs(e(a)) < std::abs(e(b)); });
        for (Eigen::Index k = m; k <= size; k *= 2) {
            Eigen::VectorXd z = e.cwiseSign();
            Eigen::MatrixXd qz(m, k);
            for (Eigen::Index j = 0; j < k; ++j) {
                z(order[j]) = 0.0;
                qz.col(j) = qv.row(order[j]).transpose();
            }
            const Eigen::VectorXd free = qz.completeOrthogonalDecomposition().solve(-(qv.transpose() * z));
            if (!free.allFinite())
                continue;
            for (Eigen::Index j = 0; j < k; ++j)
                z(order[j]) = free(j);
            const double zmax = z.cwiseAbs().maxCoeff();
            if (zmax > 0.0 && (qv.transpose() * z).norm() <= 1e-9 * std::sqrt(static_cast<double>(size)))
                bound = std::max(bound, std::abs(w * e.dot(z)) / zmax);
            if (zmax <= 1.0)
                break;
        }
    }
    return bound;
}

// The first m nodes along `order` whose rows of q are linearly independent.
inline std::vector<Eigen::Index> independent_nodes(const Eigen::MatrixXd& q, const std::vector<Eigen::Index>& order)
{
    const auto m = q.cols();
    std::vector<Eigen::Index> picked;
    Eigen::MatrixXd basis(m, m); // orthonormal rows spanning the picked rows
    for (Eigen::Index node : order) {
        Eigen::VectorXd r = q.row(node).transpose();
        const double norm = r.norm();
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(picked.size()); ++j)
            r -= basis.row(j).dot(r) * basis.row(j).transpose();
        if (!(r.norm() > 1e-8 * norm))
            continue;
        basis.row(static_cast<Eigen::Index>(picked.size())) = r.normalized().transpose();
        picked.push_back(node);
        if (static_cast<Eigen::Index>(picked.size()) == m)
            break;
    }
    return picked;
}

struct L1Vertex {
    Eigen::VectorXd coordinates;
    double lower_bound = 0.0; // certified lower bound on min ||g - Q d||_1 / w
};

// L1 vertex exchange (the dual simplex of max <g, z> over Q^T z = 0,
// |z| <= 1). The polynomial interpolates g on m active nodes; every other
// node keeps a side sigma = +-1, its sign, remembered through zero residuals
// so that degenerate exchanges stay well defined. An active multiplier
// outside [-1, 1] is released and the piecewise linear objective is
// line-searched. Bland's rule (lowest node index) prevents cycling; `rounds`
// caps the exchanges.
inline L1Vertex l1_descent(const OrthonormalBasis& basis, const Eigen::VectorXd& g, const Eigen::VectorXd& start,
                           int rounds)
{
    const Eigen::MatrixXd& q = basis.values();
    const auto size = q.rows();
    const auto m = q.cols();
    L1Vertex out{start, 0.0};
    Eigen::VectorXd e = residual_of(basis, g, start);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(size));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return std::abs(e(a)) < std::abs(e(b)); });
    std::vector<Eigen::Index> active = independent_nodes(q, order);
    if (static_cast<Eigen::Index>(active.size()) < m)
        return out;
    Eigen::VectorXd side(size);
    for (Eigen::Index k = 0; k < size; ++k)
        side(k) = e(k) < 0.0 ? -1.0 : 1.0;

    Eigen::MatrixXd qa(m, m);
    Eigen::VectorXd ga(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        qa.row(j) = q.row(active[static_cast<std::size_t>(j)]);
        ga(j) = g(active[static_cast<std::size_t>(j)]);
    }
    Eigen::VectorXd d = qa.fullPivLu().solve(ga);
    if (!d.allFinite())
        return out;

    const double zero = 1e-13 * std::max(g.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    std::vector<char> in_active(static_cast<std::size_t>(size));
    struct Break {
        double alpha;
        double slope; // increase of the directional derivative past alpha
        Eigen::Index node;
    };
    std::vector<Break> breaks;
    for (int round = 0; round <= rounds; ++round) {
        e = residual_of(basis, g, d);
        std::fill(in_active.begin(), in_active.end(), 0);
        for (Eigen::Index k : active)
            in_active[static_cast<std::size_t>(k)] = 1;
        Eigen::VectorXd z = Eigen::VectorXd::Zero(size);
        for (Eigen::Index k = 0; k < size; ++k)
            if (!in_active[static_cast<std::size_t>(k)]) {
                if (std::abs(e(k)) > zero)
                    side(k) = e(k) > 0.0 ? 1.0 : -1.0;
                z(k) = side(k);
            }
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(qa);
        if (lu.rank() < m)
            break;
        // Active entries of the dual vector: Q^T z = 0.
        const Eigen::VectorXd mu = qa.transpose().fullPivLu().solve(q.transpose() * z);
        double worst = 0.0;
        Eigen::Index leave = -1;
        for (Eigen::Index j = 0; j < m; ++j) {
            worst = std::max(worst, std::abs(mu(j)));
            if (std::abs(mu(j)) > 1.0 + 1e-10 &&
                (leave < 0 || active[static_cast<std::size_t>(j)] < active[static_cast<std::size_t>(leave)]))
                leave = j;
        }
        // z with -mu on the active nodes is orthogonal to P_s; scaled into the unit box
        // it certifies sum_k z_k e_k / max |z| <= min ||g - P||_1 / w.
        for (Eigen::Index j = 0; j < m; ++j)
            z(active[static_cast<std::size_t>(j)]) = -mu(j);
        const double dual = std::max(1.0, worst);
        const double value = z.dot(e) / dual;
        const bool orthogonal = (q.transpose() * z).norm() <= 1e-9 * std::sqrt(static_cast<double>(size));
        if (orthogonal && value > out.lower_bound) {
            out.lower_bound = value;
            out.coordinates = d;
        }
        if (leave < 0 || round == rounds)
            break;

        const double t = mu(leave) > 0.0 ? -1.0 : 1.0;
        const Eigen::VectorXd delta = lu.solve(-t * Eigen::VectorXd::Unit(m, leave));
        const Eigen::VectorXd c = q * delta; // e(alpha) = e - alpha c, e(alpha)_leave = t alpha
        double slope = 1.0 - std::abs(mu(leave));
        breaks.clear();
        for (Eigen::Index k = 0; k < size; ++k) {
            if (in_active[static_cast<std::size_t>(k)] || side(k) * c(k) <= 0.0)
                continue;
            breaks.push_back({std::max(0.0, e(k) / c(k)), 2.0 * std::abs(c(k)), k});
        }
        std::stable_sort(breaks.begin(), breaks.end(), [](const Break& a, const Break& b) { return a.alpha < b.alpha; });
        Eigen::Index enter = -1;
        double alpha = 0.0;
        for (std::size_t j = 0; j < breaks.size() && enter < 0; ++j) {
            slope += breaks[j].slope;
            if (slope >= 0.0) {
                alpha = breaks[j].alpha;
                // Bland: the lowest node among those tied at this step length.
                enter = breaks[j].node;
                for (std::size_t l = j + 1; l < breaks.size() && breaks[l].alpha == alpha; ++l)
                    enter = std::min(enter, breaks[l].node);
            }
        }
        if (enter < 0)
            break;
        d += alpha * delta;
        side(active[static_cast<std::size_t>(leave)]) = t;
        active[static_cast<std::size_t>(leave)] = enter;
        qa.row(leave) = q.row(enter);
    }
    // The returned vertex is the last one visited when it is at least as good.
    const double obj_last = residual_of(basis, g, d).cwiseAbs().sum();
    if (obj_last <= residual_of(basis, g, out.coordinates).cwiseAbs().sum())
        out.coordinates = d;
    return out;
}

} // namespace detail

/// Normalized discrete L^q(B) error of the polynomial with orthonormal
/// coordinates d.
inline double approximation_error(const OrthonormalBasis& basis, const std::vector<double>& g, const Eigen::VectorXd& d,
                                  double q)
{
    const Eigen::Map<const Eigen::VectorXd> gv(g.data(), static_cast<Eigen::Index>(g.size()));
    const Eigen::VectorXd e = detail::residual_of(basis, gv, d);
    const double obj = detail::lq_objective(e, q, basis.grid().weight());
    return std::isinf(q) ? obj : std::pow(obj / basis.grid().measure(), 1.0 / q);
}

/// inf over P in P_s of the normalized L^q(B) error of g (node values on the
/// basis grid). `candidates` are extra polynomials (orthonormal coordinates)
/// to compare against the solver's minimizer; the best one wins.
inline BestApproximation best_approximation(const OrthonormalBasis& basis, const std::vector<double>& g, double q,
                                            const ApproxOptions& options = {},
                                            std::span<const Eigen::VectorXd> candidates = {})
{
    if (!(q >= 1.0))
        throw invalid_input("best_approximation: exponent must be >= 1");
    if (g.size() != basis.grid().count())
        throw dimension_mismatch("best_approximation: value count differs from in-ball node count");
    const double w = basis.grid().weight();
    const double measure = basis.grid().measure();
    const Eigen::Map<const Eigen::VectorXd> gv(g.data(), static_cast<Eigen::Index>(g.size()));
    const double scale = std::max(gv.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const double zero_level = 1e-13 * scale; // residuals below this count as exact

    BestApproximation out;
    Eigen::VectorXd d = basis.coordinates(g); // least squares start

    if (q == 2.0) {
        out.method = "projection";
        // Second pass, as in projection_residual.
        const Eigen::VectorXd r = detail::residual_of(basis, gv, d);
        d += basis.coordinates(std::vector<double>(r.data(), r.data() + r.size()));
    } else if (!std::isinf(q)) {
        out.method = "irls";
        const double floor = options.residual_floor * scale;
        const double step = q > 2.0 ? 1.0 / (q - 1.0) : 1.0;
        Eigen::VectorXd e = detail::residual_of(basis, gv, d);
        double obj = detail::lq_objective(e, q, w);
        Eigen::VectorXd best = d;
        double best_obj = obj;
        bool converged = e.cwiseAbs().maxCoeff() <= zero_level;
        int it = 0;
        while (!converged && it < options.max_iterations) {
            ++it;
            Eigen::VectorXd weights = e.cwiseAbs().cwiseMax(floor).array().pow(q - 2.0).matrix();
            weights /= weights.maxCoeff();
            const Eigen::VectorXd target = detail::weighted_least_squares(basis, gv, weights);
            d += step * (target - d);
            e = detail::residual_of(basis, gv, d);
            const double next = detail::lq_objective(e, q, w);
            if (next < best_obj) {
                best_obj = next;
                best = d;
            }
            converged = std::abs(obj - next) <= options.tolerance * std::max(next, 1e-300) ||
                        e.cwiseAbs().maxCoeff() <= zero_level;
            obj = next;
            // Slow linear phases are stopped by the duality gap instead.
            if (!converged && it % 10 == 0) {
                double lower = 0.0;
                if (q == 1.0) {
                    // Finish from the vertex IRLS is creeping towards. Exactly
                    // polynomial stretches of g make the exchange degenerate, so
                    // it runs on g + eps; a certificate for g + eps loses at
                    // most sum |eps| for g.
                    const double eta = 1e-10 * detail::residual_of(basis, gv, best).cwiseAbs().mean();
                    Eigen::VectorXd perturbed = gv;
                    for (Eigen::Index k = 0; k < perturbed.size(); ++k) {
                        const double u = static_cast<double>(k + 1) * 0.6180339887498949;
                        perturbed(k) += eta * (u - std::floor(u) - 0.5);
                    }
                    const auto vertex = detail::l1_descent(basis, perturbed, best, options.exchange_rounds);
                    lower = w * (vertex.lower_bound - 0.5 * eta * static_cast<double>(perturbed.size()));
                    const double vo = detail::lq_objective(detail::residual_of(basis, gv, vertex.coordinates), q, w);
                    if (vo < best_obj) {
                        best_obj = vo;
                        best = vertex.coordinates;
                    }
                }
                const Eigen::VectorXd be = detail::residual_of(basis, gv, best);
                const double upper = std::pow(best_obj, 1.0 / q);
                lower = std::max(lower, detail::dual_lower_bound(basis, be, q, w));
                converged = upper - lower <= options.tolerance * upper;
            }
        }
        if (!converged)
            throw convergence_error("irls: no convergence after " + std::to_string(it) +
                                    " iterations (q = " + std::to_string(q) + ", objective " + std::to_string(obj) + ")");
        d = best;
        out.iterations = it;
    } else {
        out.method = "lawson";
        const auto n = static_cast<Eigen::Index>(g.size());
        Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
        Eigen::VectorXd best = d;
        Eigen::VectorXd e = detail::residual_of(basis, gv, d);
        double upper = e.cwiseAbs().maxCoeff();
        double lower = 0.0;
        auto converged = [&] { return upper - lower <= options.tolerance * upper || upper <= zero_level; };
        int it = 0;
        while (!converged() && it < options.lawson_iterations) {
            ++it;
            const Eigen::VectorXd trial = detail::weighted_least_squares(basis, gv, v);
            const Eigen::VectorXd te = detail::residual_of(basis, gv, trial);
            // With sum v = 1 the weighted least-squares error bounds the minimax error from below.
            lower = std::max(lower, std::sqrt(v.dot(te.cwiseAbs2())));
            const double tu = te.cwiseAbs().maxCoeff();
            if (tu < upper) {
                upper = tu;
                best = trial;
            }
            e = te;
            Eigen::VectorXd next = v.cwiseProduct(te.cwiseAbs());
            const double total = next.sum();
            if (!(total > 0.0))
                break;
            v = next / total;
        }
        d = best;
        if (!converged()) {
            out.method = "lawson+exchange";
            const std::size_t m = basis.size();
            const Eigen::VectorXd be = detail::residual_of(basis, gv, best).cwiseAbs();
            std::vector<Eigen::Index> subset = detail::top_indices(be, 4 * (m + 1));
            for (Eigen::Index k : detail::top_indices(v, 4 * (m + 1)))
                if (std::find(subset.begin(), subset.end(), k) == subset.end())
                    subset.push_back(k);
            std::sort(subset.begin(), subset.end());
            int round = 0;
            for (; round < options.exchange_rounds && !converged(); ++round) {
                const auto sub = detail::subset_minimax(basis.values(), gv, subset);
                if (!sub.ok)
                    break;
                lower = std::max(lower, sub.level);
                const Eigen::VectorXd re = detail::residual_of(basis, gv, sub.coordinates).cwiseAbs();
                const double ru = re.maxCoeff();
                if (ru < upper) {
                    upper = ru;
                    d = sub.coordinates;
                }
                if (converged())
                    break;
                std::size_t added = 0;
                for (Eigen::Index k : detail::top_indices(re, 2 * (m + 1))) {
                    if (re(k) <= sub.level)
                        break;
                    if (!std::binary_search(subset.begin(), subset.end(), k)) {
                        subset.insert(std::upper_bound(subset.begin(), subset.end(), k), k);
                        ++added;
                    }
                }
                if (added == 0)
                    break;
            }
            out.iterations = it + round;
        } else {
            out.iterations = it;
        }
        if (!converged())
            throw convergence_error("minimax: bound spread " + std::to_string((upper - lower) / upper) +
                                    " above tolerance after " + std::to_string(out.iterations) + " iterations");
        out.lower_bound = lower;
    }

    auto evaluate = [&](const Eigen::VectorXd& dd) {
        const Eigen::VectorXd e = detail::residual_of(basis, gv, dd);
        return detail::lq_objective(e, q, w);
    };
    double obj = evaluate(d);
    for (const auto& c : candidates) {
        const double co = evaluate(c);
        if (co < obj) {
            obj = co;
            d = c;
        }
    }
    out.coordinates = d;
    if (std::isinf(q)) {
        out.error = obj;
        out.raw_error = obj;
    } else {
        out.raw_error = std::pow(obj, 1.0 / q);
        out.error = std::pow(obj / measure, 1.0 / q);
    }
    return out;
}

} // namespace amh
