#pragma once
//
// Deterministic counter-based random source (splitmix64 finaliser over a
// keyed counter): the stream for a given seed is identical on every platform
// and independent of call interleaving across substreams.
//

#include <cmath>
#include <cstdint>
#include <limits>

#include "frametensor/algebra.hpp"
#include "frametensor/core.hpp"
#include "frametensor/frame.hpp"
#include "frametensor/lattice.hpp"
#include "frametensor/tensor4.hpp"

namespace frametensor {

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(seed) {}

    // Keyed substream, independent of draws made from the parent.
    CounterRng stream(std::uint64_t substream) const
    {
        return CounterRng(mix(key_ ^ 0xD6E8FEB86659FD93ull, substream));
    }

    std::uint64_t next_u64() { return mix(key_, counter_++); }

    // Uniform on [0, 1) with 53 significant bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [-1, 1).
    double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

    // Independent components uniform on [-1, 1).
    cplx complex_pm1()
    {
        const double re = uniform_pm1();
        return cplx(re, uniform_pm1());
    }

    // Uniform on {0, ..., n-1} (n <= 2^32, negligible modulo bias not
    // acceptable: use rejection).
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
        for (;;) {
            const std::uint64_t v = next_u64();
            if (v < limit)
                return v % n;
        }
    }

private:
    static std::uint64_t mix(std::uint64_t key, std::uint64_t ctr)
    {
        std::uint64_t z = key + (ctr + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

inline Vector random_vector(CounterRng& rng, std::size_t n)
{
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index t = 0; t < v.size(); ++t)
        v(t) = rng.complex_pm1();
    return v;
}

inline Matrix random_matrix(CounterRng& rng, std::size_t rows, std::size_t cols)
{
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = rng.complex_pm1();
    return m;
}

inline Tensor4 random_tensor(CounterRng& rng, const IndexSet& outer, const IndexSet& inner)
{
    Tensor4 t(outer, inner);
    for (cplx& v : t.data())
        v = rng.complex_pm1();
    return t;
}

// Random tensor with polynomial off-diagonal decay in both index pairs:
// |T_{i,k,l,j}| <= (1 + |i-j|)^-decay (1 + |k-l|)^-decay. Useful as a
// perturbation whose algebra norms stay moderate as truncations grow.
inline Tensor4 random_localised_tensor(CounterRng& rng, const IndexSet& outer,
                                       const IndexSet& inner, double decay)
{
    Tensor4 t(outer, inner);
    for (std::size_t i = 0; i < t.n1(); ++i)
        for (std::size_t k = 0; k < t.n2(); ++k)
            for (std::size_t l = 0; l < t.n2(); ++l)
                for (std::size_t j = 0; j < t.n1(); ++j) {
                    const double d1 = point_distance(outer.point(i), outer.point(j));
                    const double d2 = point_distance(inner.point(k), inner.point(l));
                    const double envelope =
                        std::pow(1.0 + d1, -decay) * std::pow(1.0 + d2, -decay);
                    t.at(i, k, l, j) = envelope * rng.complex_pm1();
                }
    return t;
}

// Entrywise-dominated companion: |out| <= |a| everywhere, with fresh phases.
inline Tensor4 random_dominated_tensor(CounterRng& rng, const Tensor4& a)
{
    Tensor4 out(a.outer(), a.inner());
    auto    src = a.data();
    auto    dst = out.data();
    for (std::size_t t = 0; t < src.size(); ++t) {
        const double r     = std::abs(src[t]) * rng.uniform01();
        const double phase = pi * rng.uniform_pm1();
        dst[t]             = r * cplx(std::cos(phase), std::sin(phase));
    }
    return out;
}

inline AlgMatrix random_alg_matrix(CounterRng& rng, const IndexSet& rows, const IndexSet& cols)
{
    return AlgMatrix(rows, cols, random_matrix(rng, rows.size(), cols.size()));
}

// Entrywise-dominated companion matrix over the same index sets.
inline AlgMatrix random_dominated_matrix(CounterRng& rng, const AlgMatrix& a)
{
    Matrix m(a.values.rows(), a.values.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double mag   = std::abs(a.values(r, c)) * rng.uniform01();
            const double phase = pi * rng.uniform_pm1();
            m(r, c)            = mag * cplx(std::cos(phase), std::sin(phase));
        }
    return AlgMatrix(a.rows, a.cols, m);
}

// Random spanning family of `count` vectors in C^dim, redrawn until the
// condition number B/A of the frame bounds is at most max_condition.
inline Frame random_frame(CounterRng& rng, std::size_t dim, std::size_t count,
                          double max_condition = 1e6)
{
    if (count < dim)
        throw std::invalid_argument("random_frame: need at least dim vectors to span");
    for (int attempt = 0; attempt < 64; ++attempt) {
        Frame             f(dim, make_segment_index_set(count), random_matrix(rng, dim, count));
        const FrameBounds b = frame_bounds(f);
        if (b.lower > 0.0 && b.upper <= max_condition * b.lower)
            return f;
    }
    throw std::runtime_error("random_frame: no well-conditioned draw in 64 attempts");
}

}  // namespace frametensor
