#pragma once
//
// Finite index sets in Z^d and weight functions on lattice differences.
//

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "frametensor/core.hpp"

namespace frametensor {

using Point = std::vector<std::int64_t>;

// A finite set of distinct integer lattice points in Z^d, kept in strict
// lexicographic order so that every matrix/tensor indexed by it has a
// canonical linearisation. Distinct integer points are automatically
// relatively separated (pairwise l-inf distance >= 1).
class IndexSet {
public:
    IndexSet(int dim, std::vector<Point> points)
        : dim_(dim), points_(std::move(points))
    {
        if (dim_ <= 0)
            throw std::invalid_argument("IndexSet: dimension must be positive");
        for (const auto& p : points_)
            if (static_cast<int>(p.size()) != dim_)
                throw std::invalid_argument("IndexSet: point dimension mismatch");
        for (std::size_t n = 1; n < points_.size(); ++n)
            if (!(points_[n - 1] < points_[n]))
                throw std::invalid_argument(
                    "IndexSet: points must be distinct and in strict lexicographic order");
    }

    int         dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool        empty() const noexcept { return points_.empty(); }

    const Point&              point(std::size_t n) const { return points_.at(n); }
    const std::vector<Point>& points() const noexcept { return points_; }

    // Linear position of a lattice point, if present.
    std::optional<std::size_t> position(const Point& p) const
    {
        auto it = std::lower_bound(points_.begin(), points_.end(), p);
        if (it == points_.end() || *it != p)
            return std::nullopt;
        return static_cast<std::size_t>(it - points_.begin());
    }

    bool contains(const Point& p) const { return position(p).has_value(); }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    int                dim_;
    std::vector<Point> points_;
};

inline double euclidean_norm(std::span<const std::int64_t> z)
{
    double s = 0.0;
    for (auto c : z)
        s += static_cast<double>(c) * static_cast<double>(c);
    return std::sqrt(s);
}

// |a - b| without materialising the difference vector.
inline double point_distance(const Point& a, const Point& b)
{
    double s = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        const double d = static_cast<double>(a[t] - b[t]);
        s += d * d;
    }
    return std::sqrt(s);
}

inline std::int64_t squared_point_distance(const Point& a, const Point& b)
{
    std::int64_t s = 0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        const std::int64_t d = a[t] - b[t];
        s += d * d;
    }
    return s;
}

// Symmetric, positive weight on lattice differences. Three kinds:
//   polynomial      nu_s(z) = (1+|z|)^s, s >= 0
//   exponential-sub w(z) = exp(b*|z|^gamma), b > 0, gamma in (0,1)
//   table           explicit values on a symmetric difference box
// |z| is the Euclidean norm throughout.
class Weight {
public:
    enum class Kind { polynomial, exponential_sub, table };

    static Weight polynomial(double s)
    {
        if (!(s >= 0.0))
            throw std::invalid_argument("Weight: polynomial exponent must be >= 0");
        Weight w;
        w.kind_ = Kind::polynomial;
        w.s_    = s;
        return w;
    }

    static Weight exponential_sub(double b, double gamma)
    {
        if (!(b > 0.0))
            throw std::invalid_argument("Weight: exponential rate must be > 0");
        if (!(gamma > 0.0 && gamma < 1.0))
            throw std::invalid_argument("Weight: exponent gamma must lie in (0,1)");
        Weight w;
        w.kind_  = Kind::exponential_sub;
        w.b_     = b;
        w.gamma_ = gamma;
        return w;
    }

    // The box must be symmetric about the origin (lo = -hi per axis) so that
    // the symmetry invariant w(z) = w(-z) can hold on all stored differences.
    static Weight table(int dim, std::vector<std::pair<std::int64_t, std::int64_t>> extents,
                        std::vector<double> values)
    {
        if (dim <= 0 || static_cast<int>(extents.size()) != dim)
            throw std::invalid_argument("Weight: table extents must match the dimension");
        std::size_t count = 1;
        for (const auto& [lo, hi] : extents) {
            if (lo != -hi || hi < 0)
                throw std::invalid_argument("Weight: table box must be symmetric about 0");
            count *= static_cast<std::size_t>(hi - lo + 1);
        }
        if (values.size() != count)
            throw std::invalid_argument("Weight: table value count does not match the box");
        for (double v : values)
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument("Weight: table values must be positive and finite");

        Weight w;
        w.kind_    = Kind::table;
        w.dim_     = dim;
        w.extents_ = std::move(extents);
        w.values_  = std::move(values);

        // symmetry w(z) = w(-z), checked exhaustively on the box
        std::vector<std::int64_t> z(static_cast<std::size_t>(dim));
        std::vector<std::int64_t> neg(static_cast<std::size_t>(dim));
        for (std::size_t n = 0; n < w.values_.size(); ++n) {
            w.unrank(n, z);
            for (int a = 0; a < dim; ++a)
                neg[static_cast<std::size_t>(a)] = -z[static_cast<std::size_t>(a)];
            if (w.values_[n] != w.values_[w.rank(neg)])
                throw std::invalid_argument("Weight: table is not symmetric");
        }
        return w;
    }

    Kind kind() const noexcept { return kind_; }

    double operator()(std::span<const std::int64_t> z) const
    {
        switch (kind_) {
        case Kind::polynomial:
            return std::pow(1.0 + euclidean_norm(z), s_);
        case Kind::exponential_sub:
            return std::exp(b_ * std::pow(euclidean_norm(z), gamma_));
        case Kind::table:
        default:
            if (static_cast<int>(z.size()) != dim_)
                throw std::invalid_argument("Weight: query dimension mismatch");
            for (int a = 0; a < dim_; ++a) {
                const auto& [lo, hi] = extents_[static_cast<std::size_t>(a)];
                if (z[static_cast<std::size_t>(a)] < lo || z[static_cast<std::size_t>(a)] > hi)
                    throw std::domain_error("Weight: difference outside the table box");
            }
            return values_[rank(z)];
        }
    }

    // w(a - b); avoids allocating the difference for the isotropic kinds.
    double eval_diff(const Point& a, const Point& b) const
    {
        switch (kind_) {
        case Kind::polynomial:
            return std::pow(1.0 + point_distance(a, b), s_);
        case Kind::exponential_sub:
            return std::exp(b_ * std::pow(point_distance(a, b), gamma_));
        case Kind::table:
        default: {
            std::vector<std::int64_t> z(a.size());
            for (std::size_t t = 0; t < a.size(); ++t)
                z[t] = a[t] - b[t];
            return (*this)(z);
        }
        }
    }

    // accessors used by serialisation
    double s() const noexcept { return s_; }
    double b() const noexcept { return b_; }
    double gamma() const noexcept { return gamma_; }
    int    table_dim() const noexcept { return dim_; }
    const std::vector<std::pair<std::int64_t, std::int64_t>>& table_extents() const
    {
        return extents_;
    }
    const std::vector<double>& table_values() const { return values_; }

private:
    Weight() = default;

    std::size_t rank(std::span<const std::int64_t> z) const
    {
        std::size_t r = 0;
        for (int a = 0; a < dim_; ++a) {
            const auto& [lo, hi] = extents_[static_cast<std::size_t>(a)];
            r = r * static_cast<std::size_t>(hi - lo + 1) +
                static_cast<std::size_t>(z[static_cast<std::size_t>(a)] - lo);
        }
        return r;
    }

    void unrank(std::size_t r, std::vector<std::int64_t>& z) const
    {
        for (int a = dim_ - 1; a >= 0; --a) {
            const auto& [lo, hi] = extents_[static_cast<std::size_t>(a)];
            const auto  card     = static_cast<std::size_t>(hi - lo + 1);
            z[static_cast<std::size_t>(a)] = lo + static_cast<std::int64_t>(r % card);
            r /= card;
        }
    }

    Kind   kind_  = Kind::polynomial;
    double s_     = 0.0;
    double b_     = 0.0;
    double gamma_ = 0.0;
    int    dim_   = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> extents_;
    std::vector<double>                                values_;
};

inline double weight_eval(const Weight& w, std::span<const std::int64_t> z) { return w(z); }

// Full integer box, enumerated in lexicographic order. Extents are inclusive
// per-axis ranges [lo, hi].
inline IndexSet make_box_index_set(int dim,
                                   const std::vector<std::pair<std::int64_t, std::int64_t>>& extents,
                                   std::size_t max_points = max_index_points())
{
    if (dim <= 0 || static_cast<int>(extents.size()) != dim)
        throw std::invalid_argument("make_box_index_set: extents must match the dimension");

    std::size_t count = 1;
    for (const auto& [lo, hi] : extents) {
        if (lo > hi)
            throw std::invalid_argument("make_box_index_set: empty axis range");
        const auto card = static_cast<std::size_t>(hi - lo + 1);
        if (card > max_points || count > max_points / card)
            throw capacity_error("make_box_index_set: box exceeds the size cap");
        count *= card;
    }

    std::vector<Point> points;
    points.reserve(count);
    Point p(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a)
        p[static_cast<std::size_t>(a)] = extents[static_cast<std::size_t>(a)].first;
    for (;;) {
        points.push_back(p);
        int a = dim - 1;
        while (a >= 0) {
            auto& c = p[static_cast<std::size_t>(a)];
            if (c < extents[static_cast<std::size_t>(a)].second) {
                ++c;
                break;
            }
            c = extents[static_cast<std::size_t>(a)].first;
            --a;
        }
        if (a < 0)
            break;
    }
    return IndexSet(dim, std::move(points));
}

// One-dimensional run {0, 1, ..., count-1}; the natural label set for frame
// elements without lattice structure.
inline IndexSet make_segment_index_set(std::size_t count, std::size_t max_points = max_index_points())
{
    if (count == 0)
        throw std::invalid_argument("make_segment_index_set: count must be positive");
    if (count > max_points)
        throw capacity_error("make_segment_index_set: count exceeds the size cap");
    std::vector<Point> points;
    points.reserve(count);
    for (std::size_t t = 0; t < count; ++t)
        points.push_back({static_cast<std::int64_t>(t)});
    return IndexSet(1, std::move(points));
}

// Sampled GRS diagnostic: the sequence (w(n*z)^(1/n))_{n=1..n_max}. The GRS
// condition is a limit statement, so callers inspect the approach to 1
// themselves; no verdict is produced.
inline std::vector<double> check_grs_condition(const Weight& w, const Point& z, int n_max)
{
    if (n_max < 2)
        throw std::invalid_argument("check_grs_condition: n_max must be >= 2");
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(n_max));
    Point nz(z.size());
    for (int n = 1; n <= n_max; ++n) {
        for (std::size_t t = 0; t < z.size(); ++t)
            nz[t] = static_cast<std::int64_t>(n) * z[t];
        samples.push_back(std::pow(w(nz), 1.0 / static_cast<double>(n)));
    }
    return samples;
}

// Weight sampled on the points of an index set (w_i = w(i)); used as the
// diagonal for weighted sequence-space norms.
inline RealVector sample_weight_on(const Weight& w, const IndexSet& index)
{
    RealVector out(static_cast<Eigen::Index>(index.size()));
    for (std::size_t n = 0; n < index.size(); ++n)
        out(static_cast<Eigen::Index>(n)) = w(index.point(n));
    return out;
}

}  // namespace frametensor
