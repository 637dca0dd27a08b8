#pragma once
//
// Spectral matrix-algebra norms on finite truncations: Jaffard, weighted
// Schur, Sjostrand, the l2 operator norm, operator-valued envelopes and
// weighted sequence-space diagnostics. All suprema of the infinite
// definitions become maxima over the finite index sets.
//

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "frametensor/core.hpp"
#include "frametensor/lattice.hpp"

namespace frametensor {

// Complex matrix carried by a pair of index sets, entries in canonical
// (lexicographic) index order.
struct AlgMatrix {
    AlgMatrix(IndexSet row_index, IndexSet col_index, Matrix entries)
        : rows(std::move(row_index)), cols(std::move(col_index)), values(std::move(entries))
    {
        if (values.rows() != static_cast<Eigen::Index>(rows.size()) ||
            values.cols() != static_cast<Eigen::Index>(cols.size()))
            throw std::invalid_argument("AlgMatrix: entry shape does not match the index sets");
        if (!values.allFinite())
            throw std::invalid_argument("AlgMatrix: entries must be finite");
    }

    IndexSet rows;
    IndexSet cols;
    Matrix   values;
};

// max_{i,j} |A_{i,j}| * (1+|i-j|)^s
inline double jaffard_norm(const AlgMatrix& a, double s)
{
    if (!(s >= 0.0))
        throw std::invalid_argument("jaffard_norm: s must be >= 0");
    if (a.rows.dim() != a.cols.dim())
        throw std::invalid_argument("jaffard_norm: row/column lattice dimensions differ");
    double best = 0.0;
    for (std::size_t r = 0; r < a.rows.size(); ++r)
        for (std::size_t c = 0; c < a.cols.size(); ++c) {
            const double v = std::abs(a.values(static_cast<Eigen::Index>(r),
                                               static_cast<Eigen::Index>(c))) *
                             std::pow(1.0 + point_distance(a.rows.point(r), a.cols.point(c)), s);
            best = std::max(best, v);
        }
    return best;
}

// max of the weighted row and column lp norms; p = inf degenerates to the
// entrywise weighted sup, i.e. the Jaffard norm with s = delta.
inline double schur_norm(const AlgMatrix& a, double p, double delta)
{
    if (!(p >= 1.0))
        throw std::invalid_argument("schur_norm: p must lie in [1, inf]");
    if (!(delta >= 0.0))
        throw std::invalid_argument("schur_norm: delta must be >= 0");
    if (a.rows.dim() != a.cols.dim())
        throw std::invalid_argument("schur_norm: row/column lattice dimensions differ");
    if (std::isinf(p))
        return jaffard_norm(a, delta);

    double best = 0.0;
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < a.cols.size(); ++c) {
            const double w = std::pow(1.0 + point_distance(a.rows.point(r), a.cols.point(c)), delta);
            sum += std::pow(std::abs(a.values(static_cast<Eigen::Index>(r),
                                              static_cast<Eigen::Index>(c))) * w,
                            p);
        }
        best = std::max(best, std::pow(sum, 1.0 / p));
    }
    for (std::size_t c = 0; c < a.cols.size(); ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < a.rows.size(); ++r) {
            const double w = std::pow(1.0 + point_distance(a.rows.point(r), a.cols.point(c)), delta);
            sum += std::pow(std::abs(a.values(static_cast<Eigen::Index>(r),
                                              static_cast<Eigen::Index>(c))) * w,
                            p);
        }
        best = std::max(best, std::pow(sum, 1.0 / p));
    }
    return best;
}

// sum over realised difference vectors z of theta(z) * max_j |A_{j, j-z}|.
// The finite set embeds in Z^d as-is: only differences actually realised by
// the set contribute, with no cyclic wrap-around.
inline double sjostrand_norm(const AlgMatrix& a, const Weight& theta)
{
    if (a.rows != a.cols)
        throw std::invalid_argument("sjostrand_norm: requires a square matrix over one index set");
    std::map<Point, double> diag_sup;
    Point                   z(static_cast<std::size_t>(a.rows.dim()));
    for (std::size_t r = 0; r < a.rows.size(); ++r)
        for (std::size_t c = 0; c < a.cols.size(); ++c) {
            for (std::size_t t = 0; t < z.size(); ++t)
                z[t] = a.rows.point(r)[t] - a.cols.point(c)[t];
            const double v = std::abs(a.values(static_cast<Eigen::Index>(r),
                                               static_cast<Eigen::Index>(c)));
            auto [it, fresh] = diag_sup.try_emplace(z, v);
            if (!fresh)
                it->second = std::max(it->second, v);
        }
    double sum = 0.0;
    for (const auto& [diff, sup] : diag_sup)
        sum += sup * theta(diff);
    return sum;
}

namespace detail {

// Power iteration on A^H A with the fixed deterministic contract: all-ones
// normalised start, budget 10000, relative tolerance 1e-12.
inline double power_iteration_norm(const Matrix& a)
{
    constexpr int    budget = 10000;
    constexpr double tol    = 1e-12;

    Vector v = Vector::Ones(a.cols());
    v /= std::sqrt(static_cast<double>(a.cols()));
    double prev = 0.0;
    for (int it = 0; it < budget; ++it) {
        const Vector av    = a * v;
        const double sigma = av.norm();
        if (sigma == 0.0)
            return 0.0;
        if (std::abs(sigma - prev) <= tol * sigma)
            return sigma;
        prev           = sigma;
        const Vector w = a.adjoint() * av;
        v              = w / w.norm();
    }
    return prev;
}

}  // namespace detail

// Largest singular value. Dense SVD up to min side 512, power iteration above.
inline double operator_norm(const Matrix& a)
{
    const Eigen::Index n = std::min(a.rows(), a.cols());
    if (n == 0)
        return 0.0;
    if (n <= 32)
        return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
    if (n <= 512)
        return Eigen::BDCSVD<Matrix>(a).singularValues()(0);
    return detail::power_iteration_norm(a);
}

inline double operator_norm(const AlgMatrix& a) { return operator_norm(a.values); }

// Which of the three scalar algebras a norm evaluation refers to, plus its
// parameters. Constructed through the factories, which validate ranges.
struct AlgebraSpec {
    enum class Family { jaffard, schur, sjostrand };

    static AlgebraSpec jaffard(double s)
    {
        if (!(s >= 0.0))
            throw std::invalid_argument("AlgebraSpec: jaffard s must be >= 0");
        AlgebraSpec spec;
        spec.family = Family::jaffard;
        spec.s      = s;
        return spec;
    }

    static AlgebraSpec schur(double p, double delta)
    {
        if (!(p >= 1.0))
            throw std::invalid_argument("AlgebraSpec: schur p must lie in [1, inf]");
        if (!(delta >= 0.0))
            throw std::invalid_argument("AlgebraSpec: schur delta must be >= 0");
        AlgebraSpec spec;
        spec.family = Family::schur;
        spec.p      = p;
        spec.delta  = delta;
        return spec;
    }

    static AlgebraSpec sjostrand(Weight theta)
    {
        AlgebraSpec spec;
        spec.family = Family::sjostrand;
        spec.theta  = std::move(theta);
        return spec;
    }

    Family                family = Family::jaffard;
    double                s      = 0.0;
    double                p      = 1.0;
    double                delta  = 0.0;
    std::optional<Weight> theta;
};

inline double algebra_norm(const AlgMatrix& a, const AlgebraSpec& spec)
{
    switch (spec.family) {
    case AlgebraSpec::Family::jaffard:
        return jaffard_norm(a, spec.s);
    case AlgebraSpec::Family::schur:
        return schur_norm(a, spec.p, spec.delta);
    case AlgebraSpec::Family::sjostrand:
    default:
        return sjostrand_norm(a, *spec.theta);
    }
}

// Solidity probe: with |B| <= |A| entrywise (a precondition, not part of the
// verdict), reports whether ||B|| <= ||A|| up to 1e-12 relative slack. The
// three built-in families depend on entry moduli only, so this must hold.
inline bool check_solidity(const AlgebraSpec& spec, const AlgMatrix& a, const AlgMatrix& b)
{
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("check_solidity: index sets differ");
    for (Eigen::Index r = 0; r < a.values.rows(); ++r)
        for (Eigen::Index c = 0; c < a.values.cols(); ++c)
            if (std::abs(b.values(r, c)) > std::abs(a.values(r, c)))
                throw std::invalid_argument("check_solidity: B is not dominated by A");
    const double na = algebra_norm(a, spec);
    const double nb = algebra_norm(b, spec);
    return nb <= na + 1e-12 * na;
}

// Norm of an operator-valued matrix: the algebra norm of the scalar matrix of
// block operator norms. Blocks are laid out row-major over outer x outer and
// must all share their inner shape.
inline double opvalued_norm(const IndexSet& outer, std::span<const Matrix> blocks,
                            const AlgebraSpec& spec)
{
    const std::size_t n = outer.size();
    if (blocks.size() != n * n)
        throw std::invalid_argument("opvalued_norm: expected one block per outer index pair");
    Matrix envelope(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const Matrix& block = blocks[r * n + c];
            if (block.rows() != blocks[0].rows() || block.cols() != blocks[0].cols())
                throw std::invalid_argument("opvalued_norm: ragged blocks");
            envelope(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                operator_norm(block);
        }
    return algebra_norm(AlgMatrix(outer, outer, std::move(envelope)), spec);
}

// Exact induced norm of D_w A D_w^{-1} on lp for p in {1, inf}; other p have
// no finite closed form and are rejected.
inline double weighted_lp_induced_norm(const AlgMatrix& a, double p, const RealVector& w)
{
    if (a.rows != a.cols)
        throw std::invalid_argument("weighted_lp_induced_norm: requires a square matrix");
    if (w.size() != static_cast<Eigen::Index>(a.rows.size()))
        throw std::invalid_argument("weighted_lp_induced_norm: weight vector size mismatch");
    for (Eigen::Index t = 0; t < w.size(); ++t)
        if (!(w(t) > 0.0))
            throw std::invalid_argument("weighted_lp_induced_norm: weights must be positive");

    const Eigen::Index n    = w.size();
    double             best = 0.0;
    if (p == 1.0) {
        for (Eigen::Index c = 0; c < n; ++c) {
            double sum = 0.0;
            for (Eigen::Index r = 0; r < n; ++r)
                sum += std::abs(a.values(r, c)) * w(r) / w(c);
            best = std::max(best, sum);
        }
    } else if (std::isinf(p)) {
        for (Eigen::Index r = 0; r < n; ++r) {
            double sum = 0.0;
            for (Eigen::Index c = 0; c < n; ++c)
                sum += std::abs(a.values(r, c)) * w(r) / w(c);
            best = std::max(best, sum);
        }
    } else {
        throw std::invalid_argument("weighted_lp_induced_norm: p must be 1 or inf");
    }
    return best;
}

}  // namespace frametensor
