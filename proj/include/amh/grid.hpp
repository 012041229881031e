#pragma once

// Sampled functions on axis-aligned boxes with midpoint tensor-product
// quadrature, plus the seeded test-function families used by the harness.
//
// Storage order: axis 0 (x_1) varies fastest. The same order is used by the
// CSV format, where each text row holds one line of samples along x_1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "amh/anisotropy.hpp"
#include "amh/error.hpp"
#include "amh/polynomial.hpp"

namespace amh {

struct Box {
    Point lower;
    Point upper;

    Box() = default;
    Box(Point lo, Point hi) : lower(std::move(lo)), upper(std::move(hi))
    {
        if (lower.size() != upper.size() || lower.empty())
            throw dimension_mismatch("box: corner dimensions differ");
    }

    static Box cube(std::size_t n, double lo, double hi) { return Box(Point(n, lo), Point(n, hi)); }
    static Box bounding(const AnisotropicBall& ball) { return Box(ball.lower_corner(), ball.upper_corner()); }

    [[nodiscard]] std::size_t dimension() const noexcept { return lower.size(); }
    [[nodiscard]] double width(std::size_t i) const { return upper[i] - lower[i]; }

    [[nodiscard]] bool degenerate() const
    {
        for (std::size_t i = 0; i < dimension(); ++i)
            if (!(width(i) > 0.0))
                return true;
        return false;
    }

    [[nodiscard]] double volume() const
    {
        double v = 1.0;
        for (std::size_t i = 0; i < dimension(); ++i)
            v *= width(i);
        return v;
    }

    /// Containment of `inner` up to a relative slack of `rel` times each width.
    [[nodiscard]] bool contains(const Box& inner, double rel = 1e-12) const
    {
        for (std::size_t i = 0; i < dimension(); ++i) {
            const double slack = rel * std::max(width(i), inner.width(i));
            if (inner.lower[i] < lower[i] - slack || inner.upper[i] > upper[i] + slack)
                return false;
        }
        return true;
    }

    [[nodiscard]] Box intersect(const Box& other) const
    {
        if (other.dimension() != dimension())
            throw dimension_mismatch("box intersection: dimension mismatch");
        Box out = *this;
        for (std::size_t i = 0; i < dimension(); ++i) {
            out.lower[i] = std::max(lower[i], other.lower[i]);
            out.upper[i] = std::min(upper[i], other.upper[i]);
        }
        return out;
    }

    [[nodiscard]] Box hull(const Box& other) const
    {
        Box out = *this;
        for (std::size_t i = 0; i < dimension(); ++i) {
            out.lower[i] = std::min(lower[i], other.lower[i]);
            out.upper[i] = std::max(upper[i], other.upper[i]);
        }
        return out;
    }

    bool operator==(const Box&) const = default;
};

/// Default per-axis sample counts by dimension.
inline int default_resolution(std::size_t n)
{
    switch (n) {
    case 1: return 1024;
    case 2: return 256;
    case 3: return 64;
    default: throw invalid_input("grid: supported dimensions are 1, 2 and 3");
    }
}

/// Midpoint lattice on a box.
class Lattice {
public:
    Lattice() = default;

    Lattice(Box box, std::vector<int> resolution) : box_(std::move(box)), resolution_(std::move(resolution))
    {
        const std::size_t n = box_.dimension();
        if (n < 1 || n > 3)
            throw invalid_input("grid: supported dimensions are 1, 2 and 3");
        if (resolution_.size() != n)
            throw dimension_mismatch("grid: resolution count differs from box dimension");
        if (box_.degenerate())
            throw degenerate_domain("grid: box has non-positive width");
        for (int r : resolution_)
            if (r < 2)
                throw invalid_input("grid: resolution must be at least 2 per axis");
        size_ = 1;
        cell_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            size_ *= static_cast<std::size_t>(resolution_[i]);
            cell_[i] = box_.width(i) / resolution_[i];
        }
        cell_volume_ = 1.0;
        for (double h : cell_)
            cell_volume_ *= h;
    }

    Lattice(Box box, int resolution) : Lattice(box, std::vector<int>(box.dimension(), resolution)) {}

    [[nodiscard]] std::size_t dimension() const noexcept { return box_.dimension(); }
    [[nodiscard]] const Box& box() const noexcept { return box_; }
    [[nodiscard]] const std::vector<int>& resolution() const noexcept { return resolution_; }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] double cell_width(std::size_t i) const { return cell_[i]; }
    [[nodiscard]] double cell_volume() const noexcept { return cell_volume_; }

    [[nodiscard]] double coordinate(std::size_t axis, int k) const
    {
        return box_.lower[axis] + (static_cast<double>(k) + 0.5) * cell_[axis];
    }

    void node(std::size_t flat, std::span<double> out) const
    {
        for (std::size_t i = 0; i < dimension(); ++i) {
            const auto r = static_cast<std::size_t>(resolution_[i]);
            out[i] = coordinate(i, static_cast<int>(flat % r));
            flat /= r;
        }
    }

    [[nodiscard]] Point node(std::size_t flat) const
    {
        Point p(dimension());
        node(flat, p);
        return p;
    }

    /// Flat index of the cell containing y, or npos when y is outside the box.
    [[nodiscard]] std::size_t locate(std::span<const double> y) const
    {
        std::size_t flat = 0;
        std::size_t stride = 1;
        for (std::size_t i = 0; i < dimension(); ++i) {
            const double t = (y[i] - box_.lower[i]) / cell_[i];
            long k = static_cast<long>(std::floor(t));
            if (k == resolution_[i] && t <= resolution_[i] * (1.0 + 1e-12))
                k = resolution_[i] - 1;
            if (k == -1 && t >= -1e-9)
                k = 0;
            if (k < 0 || k >= resolution_[i])
                return npos;
            flat += static_cast<std::size_t>(k) * stride;
            stride *= static_cast<std::size_t>(resolution_[i]);
        }
        return flat;
    }

    bool operator==(const Lattice& other) const { return box_ == other.box_ && resolution_ == other.resolution_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    Box box_;
    std::vector<int> resolution_;
    std::vector<double> cell_;
    std::size_t size_ = 0;
    double cell_volume_ = 0.0;
};

/// A real function sampled at the midpoint lattice of a box.
class GridFunction {
public:
    GridFunction() = default;

    GridFunction(Lattice lattice, std::vector<double> values) : lattice_(std::move(lattice)), values_(std::move(values))
    {
        if (values_.size() != lattice_.size())
            throw dimension_mismatch("grid function: value count differs from lattice size");
        for (double v : values_)
            if (!std::isfinite(v))
                throw invalid_input("grid function: non-finite sample");
    }

    static GridFunction zeros(Lattice lattice)
    {
        const std::size_t n = lattice.size();
        return GridFunction(std::move(lattice), std::vector<double>(n, 0.0));
    }

    [[nodiscard]] const Lattice& lattice() const noexcept { return lattice_; }
    [[nodiscard]] const Box& box() const noexcept { return lattice_.box(); }
    [[nodiscard]] std::size_t dimension() const noexcept { return lattice_.dimension(); }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] double cell_volume() const noexcept { return lattice_.cell_volume(); }

    /// Piecewise-constant reading: the value of the cell containing y, 0 outside.
    [[nodiscard]] double at(std::span<const double> y) const
    {
        const std::size_t k = lattice_.locate(y);
        return k == Lattice::npos ? 0.0 : values_[k];
    }

    /// Same samples on a box shifted by `offset`.
    [[nodiscard]] GridFunction translated(std::span<const double> offset) const
    {
        Box b = box();
        for (std::size_t i = 0; i < b.dimension(); ++i) {
            b.lower[i] += offset[i];
            b.upper[i] += offset[i];
        }
        return GridFunction(Lattice(b, lattice_.resolution()), values_);
    }

    [[nodiscard]] GridFunction scaled(double factor) const
    {
        auto v = values_;
        for (double& x : v)
            x *= factor;
        return GridFunction(lattice_, std::move(v));
    }

    /// alpha * this + beta * other on a shared lattice.
    [[nodiscard]] GridFunction combined(double alpha, const GridFunction& other, double beta) const
    {
        if (!(other.lattice_ == lattice_))
            throw incompatible_parameters("grid combination: lattices differ");
        auto v = values_;
        for (std::size_t k = 0; k < v.size(); ++k)
            v[k] = alpha * v[k] + beta * other.values_[k];
        return GridFunction(lattice_, std::move(v));
    }

private:
    Lattice lattice_;
    std::vector<double> values_;
};

using PointFunction = std::function<double(std::span<const double>)>;

/// A function that can be evaluated at arbitrary points of `domain`. Ball-local
/// operations sample a field onto the ball's own lattice.
struct Field {
    Box domain;
    PointFunction eval;

    double operator()(std::span<const double> y) const { return eval(y); }
};

inline Field as_field(const GridFunction& f)
{
    auto shared = std::make_shared<GridFunction>(f);
    return Field{f.box(), [shared](std::span<const double> y) { return shared->at(y); }};
}

inline Field as_field(PointFunction fn, Box domain) { return Field{std::move(domain), std::move(fn)}; }

inline double integrate(const GridFunction& f)
{
    double sum = 0.0;
    for (double v : f.values())
        sum += v;
    return sum * f.cell_volume();
}

inline GridFunction sample(const PointFunction& fn, const Lattice& lattice)
{
    std::vector<double> values(lattice.size());
    Point y(lattice.dimension());
    for (std::size_t k = 0; k < values.size(); ++k) {
        lattice.node(k, y);
        values[k] = fn(y);
    }
    return GridFunction(lattice, std::move(values));
}

inline GridFunction sample(const PointFunction& fn, const Box& box, std::vector<int> resolution)
{
    return sample(fn, Lattice(box, std::move(resolution)));
}

// ----------------------------------------------------------------------------
// CSV import: header `n,res_1,..,res_n,lo_1,hi_1,..,lo_n,hi_n`, then the
// values in storage order, separated by commas or whitespace.

inline GridFunction read_csv(std::istream& in)
{
    std::string header;
    if (!std::getline(in, header))
        throw format_error("csv: missing header line");
    std::vector<double> head;
    {
        std::replace(header.begin(), header.end(), ',', ' ');
        std::istringstream hs(header);
        double v;
        while (hs >> v)
            head.push_back(v);
    }
    if (head.empty())
        throw format_error("csv: empty header");
    const double nd = head[0];
    if (nd != std::floor(nd) || nd < 1 || nd > 3)
        throw format_error("csv: dimension must be 1, 2 or 3");
    const auto n = static_cast<std::size_t>(nd);
    if (head.size() != 1 + 3 * n)
        throw format_error("csv: header must hold n, n resolutions and n (lo, hi) pairs");
    std::vector<int> res(n);
    Point lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (head[1 + i] != std::floor(head[1 + i]))
            throw format_error("csv: non-integer resolution");
        res[i] = static_cast<int>(head[1 + i]);
        lo[i] = head[1 + n + 2 * i];
        hi[i] = head[2 + n + 2 * i];
    }
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::string token;
        while (ls >> token) {
            char* end = nullptr;
            const double v = std::strtod(token.c_str(), &end);
            if (end == token.c_str() || *end != '\0')
                throw format_error("csv: unparsable value '" + token + "'");
            values.push_back(v);
        }
    }
    Lattice lattice(Box(lo, hi), res);
    if (values.size() != lattice.size())
        throw format_error("csv: expected " + std::to_string(lattice.size()) + " values, found " +
                           std::to_string(values.size()));
    return GridFunction(std::move(lattice), std::move(values));
}

inline GridFunction load_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw format_error("csv: cannot open '" + path + "'");
    return read_csv(in);
}

inline void write_csv(std::ostream& out, const GridFunction& f)
{
    const auto& lat = f.lattice();
    out << lat.dimension();
    for (int r : lat.resolution())
        out << ',' << r;
    for (std::size_t i = 0; i < lat.dimension(); ++i)
        out << ',' << lat.box().lower[i] << ',' << lat.box().upper[i];
    out << '\n';
    const auto row = static_cast<std::size_t>(lat.resolution()[0]);
    out.precision(17);
    for (std::size_t k = 0; k < f.values().size(); ++k) {
        out << f.values()[k];
        out << ((k + 1) % row == 0 ? '\n' : ',');
    }
}

// ----------------------------------------------------------------------------
// Seeded families.

enum class FamilyKind { gaussian_bump, random_polynomial, sign_step, trig_mixture, csv_import, abs_ridge, constant };

inline FamilyKind parse_family_kind(const std::string& name)
{
    if (name == "gaussian-bump") return FamilyKind::gaussian_bump;
    if (name == "random-polynomial") return FamilyKind::random_polynomial;
    if (name == "sign-step") return FamilyKind::sign_step;
    if (name == "trig-mixture") return FamilyKind::trig_mixture;
    if (name == "csv-import") return FamilyKind::csv_import;
    if (name == "abs-ridge") return FamilyKind::abs_ridge;
    if (name == "constant") return FamilyKind::constant;
    throw invalid_input("unknown function family '" + name + "'");
}

inline std::string family_kind_name(FamilyKind kind)
{
    switch (kind) {
    case FamilyKind::gaussian_bump: return "gaussian-bump";
    case FamilyKind::random_polynomial: return "random-polynomial";
    case FamilyKind::sign_step: return "sign-step";
    case FamilyKind::trig_mixture: return "trig-mixture";
    case FamilyKind::csv_import: return "csv-import";
    case FamilyKind::abs_ridge: return "abs-ridge";
    case FamilyKind::constant: return "constant";
    }
    return "?";
}

/// Parameter layout per kind (missing entries take the defaults in brackets):
///   gaussian-bump      sigma [1], center_1..center_n [0], amplitude [1]
///   random-polynomial  degree [2]; coefficients uniform in [-1, 1] from `seed`
///   sign-step          threshold [0]; sign(x_1 - threshold), +1 at the threshold
///   trig-mixture       terms [3], max frequency [3]; amplitudes, frequencies, phases from `seed`
///   abs-ridge          shift [0]; |x_1 - shift|
///   constant           value [1]
///   csv-import         reads `path`; evaluated piecewise-constant
struct FunctionFamily {
    FamilyKind kind = FamilyKind::gaussian_bump;
    std::vector<double> params;
    std::uint64_t seed = 0;
    std::string path;

    [[nodiscard]] double param(std::size_t i, double fallback) const { return i < params.size() ? params[i] : fallback; }
};

inline PointFunction make_evaluator(const FunctionFamily& family, std::size_t n)
{
    switch (family.kind) {
    case FamilyKind::gaussian_bump: {
        const double sigma = family.param(0, 1.0);
        if (!(sigma > 0.0))
            throw invalid_input("gaussian-bump: sigma must be positive");
        Point center(n);
        for (std::size_t i = 0; i < n; ++i)
            center[i] = family.param(1 + i, 0.0);
        const double amplitude = family.param(1 + n, 1.0);
        return [=](std::span<const double> y) {
            double r2 = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                r2 += (y[i] - center[i]) * (y[i] - center[i]);
            return amplitude * std::exp(-r2 / (2.0 * sigma * sigma));
        };
    }
    case FamilyKind::random_polynomial: {
        const double d = family.param(0, 2.0);
        if (d < 0 || d != std::floor(d))
            throw invalid_input("random-polynomial: degree must be a nonnegative integer");
        auto poly = std::make_shared<PolynomialRep>(random_polynomial(n, static_cast<int>(d), family.seed));
        return [poly](std::span<const double> y) { return (*poly)(y); };
    }
    case FamilyKind::sign_step: {
        const double threshold = family.param(0, 0.0);
        return [=](std::span<const double> y) { return y[0] >= threshold ? 1.0 : -1.0; };
    }
    case FamilyKind::trig_mixture: {
        const int terms = static_cast<int>(family.param(0, 3.0));
        const double max_freq = family.param(1, 3.0);
        if (terms < 1)
            throw invalid_input("trig-mixture: need at least one term");
        Rng rng(family.seed);
        std::vector<double> amp(terms), phase(terms), freq(static_cast<std::size_t>(terms) * n);
        for (int k = 0; k < terms; ++k) {
            amp[k] = rng.uniform(-1.0, 1.0);
            phase[k] = rng.uniform(0.0, 2.0 * M_PI);
            for (std::size_t i = 0; i < n; ++i)
                freq[k * n + i] = rng.uniform(-max_freq, max_freq);
        }
        return [=](std::span<const double> y) {
            double sum = 0.0;
            for (int k = 0; k < terms; ++k) {
                double arg = phase[k];
                for (std::size_t i = 0; i < n; ++i)
                    arg += freq[k * n + i] * y[i];
                sum += amp[k] * std::cos(arg);
            }
            return sum;
        };
    }
    case FamilyKind::abs_ridge: {
        const double shift = family.param(0, 0.0);
        return [=](std::span<const double> y) { return std::abs(y[0] - shift); };
    }
    case FamilyKind::constant: {
        const double value = family.param(0, 1.0);
        return [=](std::span<const double>) { return value; };
    }
    case FamilyKind::csv_import: {
        auto grid = std::make_shared<GridFunction>(load_csv(family.path));
        if (grid->dimension() != n)
            throw dimension_mismatch("csv-import: file dimension differs from requested dimension");
        return [grid](std::span<const double> y) { return grid->at(y); };
    }
    }
    throw invalid_input("unknown function family");
}

inline Field as_field(const FunctionFamily& family, const Box& domain)
{
    return Field{domain, make_evaluator(family, domain.dimension())};
}

inline GridFunction sample(const FunctionFamily& family, const Box& box, std::vector<int> resolution)
{
    return sample(make_evaluator(family, box.dimension()), Lattice(box, std::move(resolution)));
}

// ----------------------------------------------------------------------------
// Balls on lattices.

/// The midpoint lattice of a ball's bounding box together with the nodes that
/// fall inside the ball. All ball-local quadrature runs on this node set, so
/// every quantity attached to one ball shares the same discrete measure.
class BallGrid {
public:
    BallGrid() = default;

    BallGrid(AnisotropicBall ball, int resolution)
        : ball_(std::move(ball)), lattice_(Box::bounding(ball_), resolution)
    {
        const std::size_t n = ball_.dimension();
        Point y(n);
        for (std::size_t k = 0; k < lattice_.size(); ++k) {
            lattice_.node(k, y);
            if (ball_.contains(y)) {
                inside_.push_back(k);
                coords_.insert(coords_.end(), y.begin(), y.end());
            }
        }
    }

    [[nodiscard]] const AnisotropicBall& ball() const noexcept { return ball_; }
    [[nodiscard]] const Lattice& lattice() const noexcept { return lattice_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return ball_.dimension(); }
    [[nodiscard]] std::size_t count() const noexcept { return inside_.size(); }
    [[nodiscard]] const std::vector<std::size_t>& inside() const noexcept { return inside_; }
    [[nodiscard]] double weight() const noexcept { return lattice_.cell_volume(); }
    /// Discrete measure of the ball: in-ball node count times cell volume.
    [[nodiscard]] double measure() const noexcept { return static_cast<double>(count()) * weight(); }
    [[nodiscard]] int resolution() const { return lattice_.resolution()[0]; }

    [[nodiscard]] std::span<const double> coords(std::size_t j) const
    {
        return {coords_.data() + j * dimension(), dimension()};
    }

    /// Field values at the in-ball nodes.
    [[nodiscard]] std::vector<double> sample(const Field& f) const
    {
        std::vector<double> v(count());
        for (std::size_t j = 0; j < v.size(); ++j)
            v[j] = f(coords(j));
        return v;
    }

    [[nodiscard]] std::vector<double> sample(const GridFunction& f) const { return sample(as_field(f)); }

    /// Extends in-ball values by zero to the whole bounding-box lattice.
    [[nodiscard]] GridFunction to_grid(const std::vector<double>& in_ball) const
    {
        if (in_ball.size() != count())
            throw dimension_mismatch("ball grid: value count differs from in-ball node count");
        std::vector<double> values(lattice_.size(), 0.0);
        for (std::size_t j = 0; j < inside_.size(); ++j)
            values[inside_[j]] = in_ball[j];
        return GridFunction(lattice_, std::move(values));
    }

private:
    AnisotropicBall ball_;
    Lattice lattice_;
    std::vector<std::size_t> inside_;
    std::vector<double> coords_;
};

/// f times the indicator of B, on the intersection of f's box with B's
/// bounding box sampled at `resolution` per axis. f is read piecewise-constant.
inline GridFunction restrict_to_ball(const Field& f, const AnisotropicBall& ball, int resolution)
{
    if (f.domain.dimension() != ball.dimension())
        throw dimension_mismatch("restrict_to_ball: dimension mismatch");
    const Box box = f.domain.intersect(Box::bounding(ball));
    if (box.degenerate())
        throw degenerate_domain("restrict_to_ball: ball does not meet the function's box");
    Lattice lattice(box, resolution);
    std::vector<double> values(lattice.size(), 0.0);
    Point y(lattice.dimension());
    for (std::size_t k = 0; k < values.size(); ++k) {
        lattice.node(k, y);
        if (ball.contains(y))
            values[k] = f(y);
    }
    return GridFunction(std::move(lattice), std::move(values));
}

inline GridFunction restrict_to_ball(const GridFunction& f, const AnisotropicBall& ball, int resolution)
{
    return restrict_to_ball(as_field(f), ball, resolution);
}

inline GridFunction restrict_to_ball(const GridFunction& f, const AnisotropicBall& ball)
{
    return restrict_to_ball(f, ball, default_resolution(f.dimension()));
}

} // namespace amh
