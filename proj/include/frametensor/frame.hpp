#pragma once
//
// Frames in C^N and frames of Hilbert-Schmidt operators: Gram machinery,
// frame bounds, canonical duals, tensor-product families and their rank-four
// Gram tensors.
//
// Scalar product throughout: <x, y> = sum_t x_t conj(y_t), linear in the
// first argument; on operators <O, O'> = trace(O'^H O).
//

#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "frametensor/algebra.hpp"
#include "frametensor/core.hpp"
#include "frametensor/lattice.hpp"
#include "frametensor/tensor4.hpp"

namespace frametensor {

// Numerical frame threshold: a family counts as a frame when the lower bound
// exceeds this fraction of the upper one.
inline constexpr double frame_threshold = 1e-10;

// Finite frame candidate in C^N. Columns of `vectors` are the family members
// in canonical index order; spanning is not an invariant, it is what
// frame_bounds measures.
struct Frame {
    std::size_t space_dim = 0;
    IndexSet    index;
    Matrix      vectors;  // space_dim x |index|

    Frame(std::size_t n, IndexSet idx, Matrix v)
        : space_dim(n), index(std::move(idx)), vectors(std::move(v))
    {
        if (space_dim == 0)
            throw std::invalid_argument("Frame: ambient dimension must be positive");
        if (vectors.rows() != static_cast<Eigen::Index>(space_dim) ||
            vectors.cols() != static_cast<Eigen::Index>(index.size()))
            throw std::invalid_argument("Frame: vector block must be space_dim x |index|");
        if (!vectors.allFinite())
            throw std::invalid_argument("Frame: vectors must be finite");
        if (vectors.norm() == 0.0)
            throw std::invalid_argument("Frame: at least one vector must be nonzero");
    }
};

struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;

    bool numerically_frame() const noexcept { return lower > frame_threshold * upper; }
};

// S = sum_i psi_i psi_i^H
inline Matrix frame_operator(const Frame& f)
{
    return f.vectors * f.vectors.adjoint();
}

// Optimal constants of the frame inequality: the extreme eigenvalues of the
// frame operator, clamped at zero against rounding.
inline FrameBounds frame_bounds(const Frame& f)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(frame_operator(f), Eigen::EigenvaluesOnly);
    const RealVector&                     lam = es.eigenvalues();
    return FrameBounds{std::max(lam(0), 0.0), std::max(lam(lam.size() - 1), 0.0)};
}

// (G)_{i',i} = <psi_{i'}, psi_i>, row = first argument.
inline AlgMatrix gram_matrix(const Frame& f)
{
    return AlgMatrix(f.index, f.index, Matrix(f.vectors.transpose() * f.vectors.conjugate()));
}

// c_i = <f, psi_i>
inline Vector analysis(const Frame& fr, const Vector& f)
{
    if (f.size() != static_cast<Eigen::Index>(fr.space_dim))
        throw std::invalid_argument("analysis: vector must live in the frame's ambient space");
    return fr.vectors.adjoint() * f;
}

// sum_i c_i psi_i
inline Vector synthesis(const Frame& fr, const Vector& c)
{
    if (c.size() != static_cast<Eigen::Index>(fr.index.size()))
        throw std::invalid_argument("synthesis: one coefficient per frame element required");
    return fr.vectors * c;
}

// Canonical dual {S^-1 psi_i}; the unique family reconstructing through
// synthesis(dual, analysis(f, .)) = id.
inline Frame canonical_dual(const Frame& f)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(frame_operator(f));
    const RealVector&                     lam   = es.eigenvalues();
    const double                          lower = std::max(lam(0), 0.0);
    const double                          upper = std::max(lam(lam.size() - 1), 0.0);
    if (!(lower > frame_threshold * upper) || upper == 0.0)
        throw not_a_frame_error("canonical_dual: frame operator is numerically singular");
    const Vector inv_lam = lam.cwiseInverse().cast<cplx>();
    const Matrix dual =
        es.eigenvectors() * inv_lam.asDiagonal() * es.eigenvectors().adjoint() * f.vectors;
    return Frame(f.space_dim, f.index, dual);
}

// f1 (x) f2: the rank-one operator f |-> <f, f1> f2, i.e. the matrix
// f2 f1^H of shape N2 x N1.
inline Matrix elementary_tensor(const Vector& f1, const Vector& f2)
{
    return f2 * f1.adjoint();
}

// Doubly indexed family of Hilbert-Schmidt operators C^N1 -> C^N2. When the
// family arises as a tensor product the factor index sets are retained; the
// rank-four Gram tensor is only defined in that case.
struct HSFrame {
    std::size_t             dim1 = 0;  // domain dimension N1
    std::size_t             dim2 = 0;  // codomain dimension N2
    IndexSet                index;     // over I1 x I2
    std::optional<IndexSet> outer;     // I1, when the product structure is known
    std::optional<IndexSet> inner;     // I2
    std::vector<Matrix>     operators;  // dim2 x dim1 each, canonical index order

    HSFrame(std::size_t n1, std::size_t n2, IndexSet idx, std::vector<Matrix> ops)
        : dim1(n1), dim2(n2), index(std::move(idx)), operators(std::move(ops))
    {
        validate();
    }

    HSFrame(std::size_t n1, std::size_t n2, IndexSet out, IndexSet inn, std::vector<Matrix> ops)
        : dim1(n1)
        , dim2(n2)
        , index(product_index_set(out, inn))
        , outer(std::move(out))
        , inner(std::move(inn))
        , operators(std::move(ops))
    {
        validate();
    }

    bool has_product_structure() const noexcept { return outer.has_value() && inner.has_value(); }

private:
    void validate() const
    {
        if (dim1 == 0 || dim2 == 0)
            throw std::invalid_argument("HSFrame: ambient dimensions must be positive");
        if (operators.size() != index.size())
            throw std::invalid_argument("HSFrame: one operator per index point required");
        for (const Matrix& o : operators) {
            if (o.rows() != static_cast<Eigen::Index>(dim2) ||
                o.cols() != static_cast<Eigen::Index>(dim1))
                throw std::invalid_argument("HSFrame: operators must be dim2 x dim1");
            if (!o.allFinite())
                throw std::invalid_argument("HSFrame: operators must be finite");
        }
    }
};

// {psi_{1,i} (x) psi_{2,k}}_{(i,k) in I1 x I2}
inline HSFrame tensor_product_frame(const Frame& f1, const Frame& f2)
{
    std::vector<Matrix> ops;
    ops.reserve(f1.index.size() * f2.index.size());
    for (std::size_t i = 0; i < f1.index.size(); ++i)
        for (std::size_t k = 0; k < f2.index.size(); ++k)
            ops.push_back(elementary_tensor(f1.vectors.col(static_cast<Eigen::Index>(i)),
                                            f2.vectors.col(static_cast<Eigen::Index>(k))));
    return HSFrame(f1.space_dim, f2.space_dim, f1.index, f2.index, std::move(ops));
}

// G_{i,k,l,j} = <Omega_{i,k}, Omega_{j,l}>_HS
inline Tensor4 gram_tensor4(const HSFrame& f)
{
    if (!f.has_product_structure())
        throw std::invalid_argument("gram_tensor4: frame lacks a product index structure");
    Tensor4           g(*f.outer, *f.inner);
    const std::size_t n2 = f.inner->size();
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t k = 0; k < g.n2(); ++k)
            for (std::size_t l = 0; l < g.n2(); ++l)
                for (std::size_t j = 0; j < g.n1(); ++j)
                    g.at(i, k, l, j) = hs_inner(f.operators[i * n2 + k], f.operators[j * n2 + l]);
    return g;
}

// Identification of HS(C^N1, C^N2) with C^(N1 N2) by column-major
// vectorisation; preserves the scalar product, so Gram data carries over.
inline Frame flatten_frame(const HSFrame& f)
{
    const std::size_t n = f.dim1 * f.dim2;
    Matrix            v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(f.operators.size()));
    for (std::size_t r = 0; r < f.operators.size(); ++r)
        v.col(static_cast<Eigen::Index>(r)) =
            Eigen::Map<const Vector>(f.operators[r].data(), static_cast<Eigen::Index>(n));
    return Frame(n, f.index, v);
}

struct LocalisationProfileEntry {
    std::int64_t squared_distance = 0;
    double       distance         = 0.0;
    double       max_abs          = 0.0;
};

struct LocalisationReport {
    double                                norm = 0.0;
    std::vector<LocalisationProfileEntry> profile;  // ordered by distance
};

// Self-localisation diagnostic: the algebra norm of the Gram matrix together
// with the off-diagonal decay profile r |-> max_{|i-j| = r} |G_{i,j}|.
inline LocalisationReport localisation_report(const Frame& f, const AlgebraSpec& spec)
{
    const AlgMatrix    g = gram_matrix(f);
    LocalisationReport rep;
    rep.norm = algebra_norm(g, spec);

    std::map<std::int64_t, double> by_distance;
    for (std::size_t r = 0; r < g.rows.size(); ++r)
        for (std::size_t c = 0; c < g.cols.size(); ++c) {
            const std::int64_t d2 = squared_point_distance(g.rows.point(r), g.cols.point(c));
            double& slot = by_distance[d2];
            slot = std::max(slot,
                            std::abs(g.values(static_cast<Eigen::Index>(r),
                                              static_cast<Eigen::Index>(c))));
        }
    rep.profile.reserve(by_distance.size());
    for (const auto& [d2, m] : by_distance)
        rep.profile.push_back(
            {d2, std::sqrt(static_cast<double>(d2)), m});
    return rep;
}

// --- fixture families ------------------------------------------------------

// Standard orthonormal basis of C^n.
inline Frame orthonormal_frame(std::size_t n)
{
    return Frame(n, make_segment_index_set(n),
                 Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

// Standard basis followed by the unitary Fourier basis: a tight frame of 2n
// elements with bounds (2, 2).
inline Frame union_of_bases_frame(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("union_of_bases_frame: dimension must be positive");
    Matrix v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(2 * n));
    v.leftCols(static_cast<Eigen::Index>(n)) =
        Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t t = 0; t < n; ++t) {
            const double phase = -2.0 * pi * static_cast<double>(k * t) / static_cast<double>(n);
            v(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(n + k)) =
                scale * cplx(std::cos(phase), std::sin(phase));
        }
    return Frame(n, make_segment_index_set(2 * n), v);
}

// Cyclic shifts of a symmetrically decaying window on Z_n. The Gram matrix
// and frame operator are circulant, so the frame bounds have the closed form
// min/max of |DFT(window)|^2.
inline Frame shift_invariant_frame(std::size_t n, double decay)
{
    if (n == 0)
        throw std::invalid_argument("shift_invariant_frame: dimension must be positive");
    if (!(decay >= 0.0) || !std::isfinite(decay))
        throw std::invalid_argument("shift_invariant_frame: decay must be finite and nonnegative");
    RealVector w(static_cast<Eigen::Index>(n));
    for (std::size_t t = 0; t < n; ++t) {
        const auto d = static_cast<double>(std::min(t, n - t));
        w(static_cast<Eigen::Index>(t)) = std::exp(-decay * d);
    }
    Matrix v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t t = 0; t < n; ++t)
            v(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
                w(static_cast<Eigen::Index>((t + n - j) % n));
    return Frame(n, make_segment_index_set(n), v);
}

}  // namespace frametensor
