#pragma once
//
// The involutive normed algebra of rank-four tensors over I1 x I2^2 x I1:
// doubly contracted product, adjoint, slice restrictions, the nested norms
// and inverse diagnostics on the l2(I1 x I2) flattening.
//

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "frametensor/algebra.hpp"
#include "frametensor/core.hpp"
#include "frametensor/lattice.hpp"

namespace frametensor {

// Dense rank-four tensor with entries in canonical (i, k, l, j) order,
// i over the outer set I1 (slowest), then k, l over I2, then j over I1
// (fastest). This index order is what makes the doubly contracted product
// behave like matrix multiplication.
class Tensor4 {
public:
    Tensor4(IndexSet outer, IndexSet inner)
        : outer_(std::move(outer)), inner_(std::move(inner))
    {
        check_cap();
        data_.assign(entry_count(), cplx(0.0, 0.0));
    }

    Tensor4(IndexSet outer, IndexSet inner, std::vector<cplx> entries)
        : outer_(std::move(outer)), inner_(std::move(inner)), data_(std::move(entries))
    {
        check_cap();
        if (data_.size() != entry_count())
            throw std::invalid_argument("Tensor4: entry count must be |I1|^2 * |I2|^2");
        for (const cplx& v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::invalid_argument("Tensor4: entries must be finite");
    }

    static Tensor4 identity(IndexSet outer, IndexSet inner)
    {
        Tensor4 t(std::move(outer), std::move(inner));
        for (std::size_t i = 0; i < t.n1(); ++i)
            for (std::size_t k = 0; k < t.n2(); ++k)
                t.at(i, k, k, i) = cplx(1.0, 0.0);
        return t;
    }

    const IndexSet& outer() const noexcept { return outer_; }
    const IndexSet& inner() const noexcept { return inner_; }
    std::size_t     n1() const noexcept { return outer_.size(); }
    std::size_t     n2() const noexcept { return inner_.size(); }
    std::size_t     entry_count() const noexcept
    {
        return n1() * n2() * n2() * n1();
    }

    cplx at(std::size_t i, std::size_t k, std::size_t l, std::size_t j) const
    {
        return data_[linear(i, k, l, j)];
    }
    cplx& at(std::size_t i, std::size_t k, std::size_t l, std::size_t j)
    {
        return data_[linear(i, k, l, j)];
    }

    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx>       data() noexcept { return data_; }

    friend bool operator==(const Tensor4&, const Tensor4&) = default;

private:
    std::size_t linear(std::size_t i, std::size_t k, std::size_t l, std::size_t j) const
    {
        return ((i * n2() + k) * n2() + l) * n1() + j;
    }

    void check_cap() const
    {
        const std::size_t cap = max_flat_size();
        if (n1() > 0 && n2() > cap / std::max<std::size_t>(n1(), 1))
            throw capacity_error("Tensor4: |I1|*|I2| exceeds the size cap");
    }

    IndexSet          outer_;
    IndexSet          inner_;
    std::vector<cplx> data_;
};

struct TensorAlgebraSpec {
    AlgebraSpec spec1;  // applied to scalar matrices over I1^2
    AlgebraSpec spec2;  // applied to scalar matrices over I2^2
};

// Product index set I1 x I2 as concatenated coordinates, i major; matches the
// lexicographic order of Z^(d1+d2).
inline IndexSet product_index_set(const IndexSet& outer, const IndexSet& inner)
{
    std::vector<Point> points;
    points.reserve(outer.size() * inner.size());
    for (const auto& pi : outer.points())
        for (const auto& pk : inner.points()) {
            Point p;
            p.reserve(pi.size() + pk.size());
            p.insert(p.end(), pi.begin(), pi.end());
            p.insert(p.end(), pk.begin(), pk.end());
            points.push_back(std::move(p));
        }
    return IndexSet(outer.dim() + inner.dim(), std::move(points));
}

// M_{(i,k),(j,l)} = A_{i,k,l,j}; a *-isomorphism onto matrices over I1 x I2.
inline Matrix flatten_matrix(const Tensor4& a)
{
    const std::size_t n1 = a.n1(), n2 = a.n2();
    Matrix            m(static_cast<Eigen::Index>(n1 * n2), static_cast<Eigen::Index>(n1 * n2));
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t k = 0; k < n2; ++k)
            for (std::size_t j = 0; j < n1; ++j)
                for (std::size_t l = 0; l < n2; ++l)
                    m(static_cast<Eigen::Index>(i * n2 + k),
                      static_cast<Eigen::Index>(j * n2 + l)) = a.at(i, k, l, j);
    return m;
}

inline AlgMatrix flatten(const Tensor4& a)
{
    IndexSet product = product_index_set(a.outer(), a.inner());
    return AlgMatrix(product, product, flatten_matrix(a));
}

inline Tensor4 unflatten(const Matrix& m, const IndexSet& outer, const IndexSet& inner)
{
    const std::size_t n1 = outer.size(), n2 = inner.size();
    if (m.rows() != static_cast<Eigen::Index>(n1 * n2) ||
        m.cols() != static_cast<Eigen::Index>(n1 * n2))
        throw std::invalid_argument("unflatten: matrix size must be |I1|*|I2| square");
    Tensor4 t(outer, inner);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t k = 0; k < n2; ++k)
            for (std::size_t j = 0; j < n1; ++j)
                for (std::size_t l = 0; l < n2; ++l)
                    t.at(i, k, l, j) = m(static_cast<Eigen::Index>(i * n2 + k),
                                         static_cast<Eigen::Index>(j * n2 + l));
    return t;
}

inline Tensor4 unflatten(const AlgMatrix& m, const IndexSet& outer, const IndexSet& inner)
{
    if (m.rows != m.cols || m.rows != product_index_set(outer, inner))
        throw std::invalid_argument("unflatten: matrix must be indexed by the product set");
    return unflatten(m.values, outer, inner);
}

// Doubly contracted product (A:B)_{i,k,l,j} = sum_{n in I2} sum_{m in I1}
// A_{i,k,n,m} B_{m,n,l,j}, computed through the flattening so the double sum
// becomes one matrix product.
inline Tensor4 contract(const Tensor4& a, const Tensor4& b)
{
    if (a.outer() != b.outer() || a.inner() != b.inner())
        throw std::invalid_argument("contract: tensors must share both index sets");
    return unflatten(Matrix(flatten_matrix(a) * flatten_matrix(b)), a.outer(), a.inner());
}

// The defining double sum, kept as a slow reference path for runtime
// diagnostics of the fast contraction.
inline Tensor4 contract_reference(const Tensor4& a, const Tensor4& b)
{
    if (a.outer() != b.outer() || a.inner() != b.inner())
        throw std::invalid_argument("contract: tensors must share both index sets");
    const std::size_t n1 = a.n1(), n2 = a.n2();
    Tensor4           out(a.outer(), a.inner());
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t k = 0; k < n2; ++k)
            for (std::size_t l = 0; l < n2; ++l)
                for (std::size_t j = 0; j < n1; ++j) {
                    cplx sum(0.0, 0.0);
                    for (std::size_t m = 0; m < n1; ++m)
                        for (std::size_t n = 0; n < n2; ++n)
                            sum += a.at(i, k, n, m) * b.at(m, n, l, j);
                    out.at(i, k, l, j) = sum;
                }
    return out;
}

// (A*)_{i,k,l,j} = conj(A_{j,l,k,i})
inline Tensor4 adjoint(const Tensor4& a)
{
    Tensor4 out(a.outer(), a.inner());
    for (std::size_t i = 0; i < a.n1(); ++i)
        for (std::size_t k = 0; k < a.n2(); ++k)
            for (std::size_t l = 0; l < a.n2(); ++l)
                for (std::size_t j = 0; j < a.n1(); ++j)
                    out.at(i, k, l, j) = std::conj(a.at(j, l, k, i));
    return out;
}

inline Matrix inner_slice_values(const Tensor4& a, std::size_t i, std::size_t j)
{
    Matrix s(static_cast<Eigen::Index>(a.n2()), static_cast<Eigen::Index>(a.n2()));
    for (std::size_t k = 0; k < a.n2(); ++k)
        for (std::size_t l = 0; l < a.n2(); ++l)
            s(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = a.at(i, k, l, j);
    return s;
}

inline Matrix outer_slice_values(const Tensor4& a, std::size_t k, std::size_t l)
{
    Matrix s(static_cast<Eigen::Index>(a.n1()), static_cast<Eigen::Index>(a.n1()));
    for (std::size_t i = 0; i < a.n1(); ++i)
        for (std::size_t j = 0; j < a.n1(); ++j)
            s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a.at(i, k, l, j);
    return s;
}

// Restriction A|_{{i} x I2^2 x {j}} as a matrix over I2^2 (row k, column l).
inline AlgMatrix slice_inner(const Tensor4& a, const Point& i, const Point& j)
{
    const auto pi = a.outer().position(i);
    const auto pj = a.outer().position(j);
    if (!pi || !pj)
        throw std::invalid_argument("slice_inner: point not in the outer index set");
    return AlgMatrix(a.inner(), a.inner(), inner_slice_values(a, *pi, *pj));
}

// Restriction A|_{I1 x {(k,l)} x I1} as a matrix over I1^2 (row i, column j).
inline AlgMatrix slice_outer(const Tensor4& a, const Point& k, const Point& l)
{
    const auto pk = a.inner().position(k);
    const auto pl = a.inner().position(l);
    if (!pk || !pl)
        throw std::invalid_argument("slice_outer: point not in the inner index set");
    return AlgMatrix(a.outer(), a.outer(), outer_slice_values(a, *pk, *pl));
}

// Scalar matrix of inner-slice operator norms over I1^2.
inline Matrix inner_envelope(const Tensor4& a)
{
    Matrix env(static_cast<Eigen::Index>(a.n1()), static_cast<Eigen::Index>(a.n1()));
    for (std::size_t i = 0; i < a.n1(); ++i)
        for (std::size_t j = 0; j < a.n1(); ++j)
            env(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                operator_norm(inner_slice_values(a, i, j));
    return env;
}

// Scalar matrix of outer-slice operator norms over I2^2.
inline Matrix outer_envelope(const Tensor4& a)
{
    Matrix env(static_cast<Eigen::Index>(a.n2()), static_cast<Eigen::Index>(a.n2()));
    for (std::size_t k = 0; k < a.n2(); ++k)
        for (std::size_t l = 0; l < a.n2(); ++l)
            env(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
                operator_norm(outer_slice_values(a, k, l));
    return env;
}

// ||A||_A1-tilde: the A1 norm of the inner-slice operator-norm envelope.
inline double norm_a1_tilde(const Tensor4& a, const AlgebraSpec& spec1)
{
    if (a.n1() == 0 || a.n2() == 0)
        return 0.0;
    return algebra_norm(AlgMatrix(a.outer(), a.outer(), inner_envelope(a)), spec1);
}

// ||A||_A2-tilde: the A2 norm of the outer-slice operator-norm envelope.
inline double norm_a2_tilde(const Tensor4& a, const AlgebraSpec& spec2)
{
    if (a.n1() == 0 || a.n2() == 0)
        return 0.0;
    return algebra_norm(AlgMatrix(a.inner(), a.inner(), outer_envelope(a)), spec2);
}

inline double norm_a(const Tensor4& a, const TensorAlgebraSpec& spec)
{
    return std::max(norm_a1_tilde(a, spec.spec1), norm_a2_tilde(a, spec.spec2));
}

// T_{i,k,l,j} = G1_{i,j} * G2_{k,l}. The plain product of the supplied
// matrices; which conjugation of frame Gram matrices enters is settled where
// Gram tensors are built.
inline Tensor4 kronecker(const AlgMatrix& g1, const AlgMatrix& g2)
{
    if (g1.rows != g1.cols || g2.rows != g2.cols)
        throw std::invalid_argument("kronecker: factors must be square over one index set each");
    Tensor4 t(g1.rows, g2.rows);
    for (std::size_t i = 0; i < t.n1(); ++i)
        for (std::size_t k = 0; k < t.n2(); ++k)
            for (std::size_t l = 0; l < t.n2(); ++l)
                for (std::size_t j = 0; j < t.n1(); ++j)
                    t.at(i, k, l, j) =
                        g1.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                        g2.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
    return t;
}

struct InverseReport {
    double condition       = 0.0;
    double norm_a_input    = 0.0;
    double norm_a_inverse  = 0.0;
    double op_norm_input   = 0.0;
    double op_norm_inverse = 0.0;
    double residual        = 0.0;  // ||flatten(A) * flatten(Ainv) - Id||_op
};

// Inverts A through its flattening and reports the norms of both sides.
// Inverse-closedness is an infinite-dimensional statement, so the report is a
// finite-truncation diagnostic, never an assertion.
inline std::pair<Tensor4, InverseReport> inverse_in_algebra(const Tensor4&           a,
                                                            const TensorAlgebraSpec& spec)
{
    constexpr double cond_cutoff = 1e12;

    const Matrix m = flatten_matrix(a);
    if (m.rows() == 0)
        throw singular_error("inverse_in_algebra: empty tensor", 0.0);

    Eigen::BDCSVD<Matrix> svd(m);
    const double          sigma_max = svd.singularValues()(0);
    const double          sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
    const double          cond =
        sigma_min > 0.0 ? sigma_max / sigma_min : std::numeric_limits<double>::infinity();
    if (!(cond < cond_cutoff))
        throw singular_error("inverse_in_algebra: flattened tensor is numerically singular", cond);

    const Matrix  inv = m.partialPivLu().inverse();
    const Tensor4 t_inv = unflatten(inv, a.outer(), a.inner());

    InverseReport report;
    report.condition       = cond;
    report.norm_a_input    = norm_a(a, spec);
    report.norm_a_inverse  = norm_a(t_inv, spec);
    report.op_norm_input   = sigma_max;
    report.op_norm_inverse = 1.0 / sigma_min;
    report.residual        = operator_norm(
        Matrix(m * inv - Matrix::Identity(m.rows(), m.cols())));
    return {t_inv, report};
}

}  // namespace frametensor
