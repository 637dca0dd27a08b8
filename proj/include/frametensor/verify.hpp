#pragma once
//
// Seeded verification suite over the algebra identities: every check draws
// from a keyed substream of the configured seed, so a report is a pure
// function of its configuration.
//

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "frametensor/algebra.hpp"
#include "frametensor/core.hpp"
#include "frametensor/frame.hpp"
#include "frametensor/io.hpp"
#include "frametensor/lattice.hpp"
#include "frametensor/random.hpp"
#include "frametensor/tensor4.hpp"

namespace frametensor {

// The three reference spec pairs (A1-component, A2-component) exercised by
// the suite: two polynomial-decay classes with distinct exponents, a
// Schur/Sjostrand mix, and a polynomial/weighted-Schur mix.
inline std::vector<TensorAlgebraSpec> standard_spec_pairs()
{
    return {
        {AlgebraSpec::jaffard(2.0), AlgebraSpec::jaffard(3.0)},
        {AlgebraSpec::schur(1.0, 0.0), AlgebraSpec::sjostrand(Weight::polynomial(0.0))},
        {AlgebraSpec::jaffard(2.0), AlgebraSpec::schur(1.0, 1.0)},
    };
}

inline std::vector<std::string> standard_spec_pair_names()
{
    return {"jaffard(s=2)/jaffard(s=3)", "schur(p=1,delta=0)/sjostrand(nu_0)",
            "jaffard(s=2)/schur(p=1,delta=1)"};
}

// Scalar families for the solidity sweep, one per family kind.
inline std::vector<AlgebraSpec> standard_scalar_specs()
{
    return {AlgebraSpec::jaffard(2.0), AlgebraSpec::schur(1.0, 0.5),
            AlgebraSpec::sjostrand(Weight::polynomial(1.0))};
}

struct CheckRecord {
    std::string name;
    int         trials        = 0;
    double      max_violation = 0.0;
    double      tolerance     = 0.0;
    bool        passed        = false;
};

struct VerificationConfig {
    std::uint64_t                 seed   = 1;
    std::size_t                   n1     = 4;  // |I1|
    std::size_t                   n2     = 4;  // |I2|
    int                           trials = 50;
    std::map<std::string, double> tolerances;  // per-check overrides
};

struct VerificationReport {
    std::uint64_t            seed = 0;
    std::size_t              n1 = 0, n2 = 0;
    int                      trials = 0;
    std::vector<std::string> spec_pair_names;
    std::vector<CheckRecord> checks;

    bool all_passed() const
    {
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckRecord& c) { return c.passed; });
    }
};

// A concrete failure of entrywise-modulus domination implying norm
// domination: |b| <= |a| everywhere yet norm_a(b) > norm_a(a).
struct NonSolidityWitness {
    Tensor4 a;
    Tensor4 b;
    double  norm_of_a = 0.0;
    double  norm_of_b = 0.0;
};

// Randomized search over sign patterns: b carries unit moduli everywhere (its
// slice envelopes are maximal), a carries the same moduli with random signs,
// which generically shrinks every slice operator norm.
inline std::optional<NonSolidityWitness> find_non_solidity_witness(
    CounterRng rng, const IndexSet& outer, const IndexSet& inner, const TensorAlgebraSpec& spec,
    int attempts = 200, double required_gain = 1.05)
{
    Tensor4 b(outer, inner);
    for (cplx& v : b.data())
        v = cplx(1.0, 0.0);
    const double norm_b = norm_a(b, spec);

    for (int t = 0; t < attempts; ++t) {
        Tensor4 a(outer, inner);
        auto    dst = a.data();
        for (std::size_t e = 0; e < dst.size(); ++e)
            dst[e] = cplx(rng.next_u64() & 1 ? 1.0 : -1.0, 0.0);
        const double na = norm_a(a, spec);
        if (norm_b >= required_gain * na)
            return NonSolidityWitness{std::move(a), b, na, norm_b};
    }
    return std::nullopt;
}

namespace detail {

inline double max_abs(const Tensor4& t)
{
    double m = 0.0;
    for (const cplx& v : t.data())
        m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs_diff(const Tensor4& x, const Tensor4& y)
{
    double m = 0.0;
    auto   a = x.data();
    auto   b = y.data();
    for (std::size_t t = 0; t < a.size(); ++t)
        m = std::max(m, std::abs(a[t] - b[t]));
    return m;
}

// Entry-level agreement measured relative to the larger of 1 and the scale of
// the left-hand side.
inline double relative_deviation(const Tensor4& lhs, const Tensor4& rhs)
{
    return max_abs_diff(lhs, rhs) / std::max(1.0, max_abs(lhs));
}

inline double relative_deviation(const Matrix& lhs, const Matrix& rhs)
{
    const double scale = lhs.cwiseAbs().maxCoeff();
    return (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, scale);
}

}  // namespace detail

inline VerificationReport run_verification(const VerificationConfig& cfg)
{
    if (cfg.trials < 1)
        throw std::invalid_argument("run_verification: trials must be >= 1");
    if (cfg.n1 < 1 || cfg.n2 < 1)
        throw std::invalid_argument("run_verification: index sizes must be >= 1");
    for (const auto& [name, tol] : cfg.tolerances)
        if (!(tol >= 0.0))
            throw std::invalid_argument("run_verification: tolerance for '" + name +
                                        "' must be >= 0");

    const auto pairs        = standard_spec_pairs();
    const auto scalar_specs = standard_scalar_specs();
    CounterRng root(cfg.seed);

    VerificationReport rep;
    rep.seed            = cfg.seed;
    rep.n1              = cfg.n1;
    rep.n2              = cfg.n2;
    rep.trials          = cfg.trials;
    rep.spec_pair_names = standard_spec_pair_names();

    const auto tol_of = [&cfg](const std::string& name, double fallback) {
        const auto it = cfg.tolerances.find(name);
        return it == cfg.tolerances.end() ? fallback : it->second;
    };
    const auto record = [&rep](std::string name, int trials, double violation, double tolerance) {
        rep.checks.push_back(
            {std::move(name), trials, violation, tolerance, violation <= tolerance});
    };

    const IndexSet outer = make_segment_index_set(cfg.n1);
    const IndexSet inner = make_segment_index_set(cfg.n2);

    // Submultiplicativity of norm_a under the doubly contracted product.
    {
        double worst = 0.0;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            CounterRng rng = root.stream(0x100 + p);
            for (int t = 0; t < cfg.trials; ++t) {
                const Tensor4 a   = random_tensor(rng, outer, inner);
                const Tensor4 b   = random_tensor(rng, outer, inner);
                const double  na  = norm_a(a, pairs[p]);
                const double  nb  = norm_a(b, pairs[p]);
                const double  nab = norm_a(contract(a, b), pairs[p]);
                worst             = std::max(worst, (nab - na * nb) / (na * nb));
            }
        }
        record("submultiplicativity", cfg.trials * static_cast<int>(pairs.size()),
               std::max(0.0, worst), tol_of("submultiplicativity", 1e-10));
    }

    // The adjoint is an isometry of norm_a.
    {
        double worst = 0.0;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            CounterRng rng = root.stream(0x200 + p);
            for (int t = 0; t < cfg.trials; ++t) {
                const Tensor4 a  = random_tensor(rng, outer, inner);
                const double  na = norm_a(a, pairs[p]);
                worst            = std::max(worst, std::abs(norm_a(adjoint(a), pairs[p]) - na) / na);
            }
        }
        record("involution_isometry", cfg.trials * static_cast<int>(pairs.size()), worst,
               tol_of("involution_isometry", 1e-12));
    }

    // (A:B)* = B* : A*
    {
        CounterRng rng   = root.stream(0x300);
        double     worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Tensor4 a = random_tensor(rng, outer, inner);
            const Tensor4 b = random_tensor(rng, outer, inner);
            worst           = std::max(worst, detail::relative_deviation(
                                                  adjoint(contract(a, b)),
                                                  contract(adjoint(b), adjoint(a))));
        }
        record("anti_homomorphism", cfg.trials, worst, tol_of("anti_homomorphism", 1e-13));
    }

    // Flattening is a *-homomorphism onto matrices over I1 x I2; the double
    // sum is cross-checked on a tenth of the draws.
    {
        CounterRng rng   = root.stream(0x400);
        double     worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const IndexSet o  = make_segment_index_set(1 + rng.below(3));
            const IndexSet in = make_segment_index_set(1 + rng.below(3));
            const Tensor4  a  = random_tensor(rng, o, in);
            const Tensor4  b  = random_tensor(rng, o, in);
            const Tensor4  ab = contract(a, b);
            worst             = std::max(
                worst, detail::relative_deviation(flatten_matrix(ab),
                                                  Matrix(flatten_matrix(a) * flatten_matrix(b))));
            worst = std::max(worst, detail::relative_deviation(
                                        flatten_matrix(adjoint(a)),
                                        Matrix(flatten_matrix(a).adjoint())));
            if (t % 10 == 0)
                worst = std::max(worst, detail::relative_deviation(ab, contract_reference(a, b)));
        }
        record("flatten_homomorphism", cfg.trials, worst, tol_of("flatten_homomorphism", 1e-13));
    }

    // Entrywise-modulus domination implies norm domination for the scalar
    // families.
    {
        const IndexSet line  = make_segment_index_set(8);
        double         worst = 0.0;
        for (std::size_t f = 0; f < scalar_specs.size(); ++f) {
            CounterRng rng = root.stream(0x500 + f);
            for (int t = 0; t < cfg.trials; ++t) {
                const AlgMatrix a  = random_alg_matrix(rng, line, line);
                const AlgMatrix b  = random_dominated_matrix(rng, a);
                const double    na = algebra_norm(a, scalar_specs[f]);
                const double    nb = algebra_norm(b, scalar_specs[f]);
                worst              = std::max(worst, (nb - na) / na);
            }
        }
        record("solidity", cfg.trials * static_cast<int>(scalar_specs.size()),
               std::max(0.0, worst), tol_of("solidity", 1e-12));
    }

    // The rank-four norm is NOT solid: exhibit moduli-equal tensors whose
    // norms differ by at least 5%.
    {
        constexpr double gain    = 1.05;
        const auto       witness = find_non_solidity_witness(root.stream(0x600), outer, inner,
                                                             pairs.front(), 200, gain);
        const double     achieved =
            witness ? witness->norm_of_b / witness->norm_of_a : 0.0;
        record("non_solidity_witness", 200, std::max(0.0, gain - achieved),
               tol_of("non_solidity_witness", 1e-9));
    }

    // Neumann diagnostics: Id + R with norm_a(R) = 1/2 inverts with
    // norm_a bounded by 2 and negligible flattened residual.
    {
        double worst_norm     = 0.0;
        double worst_residual = 0.0;
        int    cases          = 0;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            CounterRng rng = root.stream(0x700 + p);
            for (std::size_t n = 2; n <= 4; ++n) {
                const IndexSet o  = make_segment_index_set(n);
                const IndexSet in = make_segment_index_set(n);
                Tensor4        r  = random_localised_tensor(rng, o, in, 2.0);
                const double   r0 = norm_a(r, pairs[p]);
                for (cplx& v : r.data())
                    v *= 0.5 / r0;
                Tensor4 a = Tensor4::identity(o, in);
                {
                    auto dst = a.data();
                    auto src = r.data();
                    for (std::size_t e = 0; e < dst.size(); ++e)
                        dst[e] += src[e];
                }
                const auto [inv, report] = inverse_in_algebra(a, pairs[p]);
                worst_norm     = std::max(worst_norm, report.norm_a_inverse - 2.0);
                worst_residual = std::max(worst_residual, report.residual);
                ++cases;
            }
        }
        record("neumann_inverse", cases, std::max(0.0, worst_norm),
               tol_of("neumann_inverse", 1e-8));
        record("inverse_residual", cases, worst_residual, tol_of("inverse_residual", 1e-10));
    }

    // Canonical-dual reconstruction, both ways, on random frames and on the
    // circulant shift-invariant fixtures.
    {
        CounterRng rng   = root.stream(0x800);
        double     worst = 0.0;
        const auto probe = [&rng, &worst](const Frame& f) {
            const Frame dual = canonical_dual(f);
            for (int v = 0; v < 3; ++v) {
                const Vector x  = random_vector(rng, f.space_dim);
                const double nx = x.norm();
                worst           = std::max(
                    worst, (synthesis(dual, analysis(f, x)) - x).norm() / nx);
                worst = std::max(
                    worst, (synthesis(f, analysis(dual, x)) - x).norm() / nx);
            }
        };
        for (int t = 0; t < cfg.trials; ++t) {
            const std::size_t dim   = 2 + rng.below(5);
            const std::size_t count = dim + rng.below(4);
            probe(random_frame(rng, dim, count));
        }
        probe(shift_invariant_frame(8, 0.4));
        probe(shift_invariant_frame(12, 1.0));
        record("reconstruction", cfg.trials + 2, worst, tol_of("reconstruction", 1e-10));
    }

    // Gram tensor of a tensor-product frame = kronecker(conj(G1), G2).
    {
        CounterRng rng   = root.stream(0x900);
        double     worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Frame     f1 = random_frame(rng, 4, 6);
            const Frame     f2 = random_frame(rng, 3, 5);
            const Tensor4   g  = gram_tensor4(tensor_product_frame(f1, f2));
            const AlgMatrix g1 = gram_matrix(f1);
            const AlgMatrix g2 = gram_matrix(f2);
            const Tensor4   k  = kronecker(
                AlgMatrix(g1.rows, g1.cols, Matrix(g1.values.conjugate())), g2);
            worst = std::max(worst, detail::relative_deviation(g, k));
        }
        record("gram_factorisation", cfg.trials, worst, tol_of("gram_factorisation", 1e-13));
    }

    // Norm factorisation of the Gram tensor into factor-frame quantities.
    {
        CounterRng rng   = root.stream(0xA00);
        double     worst = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const Frame     f1 = random_frame(rng, 4, 6);
            const Frame     f2 = random_frame(rng, 3, 5);
            const Tensor4   g  = gram_tensor4(tensor_product_frame(f1, f2));
            const AlgMatrix g1 = gram_matrix(f1);
            const AlgMatrix g2 = gram_matrix(f2);
            const double    op1 = operator_norm(g1.values);
            const double    op2 = operator_norm(g2.values);
            for (const TensorAlgebraSpec& spec : pairs) {
                const double rhs1 = op2 * algebra_norm(g1, spec.spec1);
                const double rhs2 = op1 * algebra_norm(g2, spec.spec2);
                worst             = std::max(
                    worst, std::abs(norm_a1_tilde(g, spec.spec1) - rhs1) / rhs1);
                worst = std::max(worst, std::abs(norm_a2_tilde(g, spec.spec2) - rhs2) / rhs2);
            }
        }
        record("norm_factorisation", cfg.trials, worst, tol_of("norm_factorisation", 1e-10));
    }

    return rep;
}

inline json verification_report_to_json(const VerificationReport& rep)
{
    json checks = json::array();
    for (const CheckRecord& c : rep.checks)
        checks.push_back(json{{"max_violation", c.max_violation},
                              {"name", c.name},
                              {"passed", c.passed},
                              {"tolerance", c.tolerance},
                              {"trials", c.trials}});
    return json{{"checks", std::move(checks)},
                {"environment",
                 json{{"seed", rep.seed},
                      {"sizes", json{{"n1", rep.n1}, {"n2", rep.n2}}},
                      {"spec_pairs", rep.spec_pair_names},
                      {"trials", rep.trials}}},
                {"passed", rep.all_passed()}};
}

}  // namespace frametensor
