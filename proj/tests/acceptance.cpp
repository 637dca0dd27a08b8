//
// Acceptance gate: every numbered criterion prints exactly one PASS/FAIL line
// with its measured worst case; the process exits nonzero if any fail.
//

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "frametensor/frametensor.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace frametensor;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail)
{
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!ok)
        ++failures;
}

std::string fmt(const char* pattern, double v)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs(const Tensor4& t)
{
    double m = 0.0;
    for (const cplx& v : t.data())
        m = std::max(m, std::abs(v));
    return m;
}

double rel_dev(const Tensor4& lhs, const Tensor4& rhs)
{
    double diff = 0.0;
    auto   a    = lhs.data();
    auto   b    = rhs.data();
    for (std::size_t t = 0; t < a.size(); ++t)
        diff = std::max(diff, std::abs(a[t] - b[t]));
    return diff / std::max(1.0, max_abs(lhs));
}

double rel_dev(const Matrix& lhs, const Matrix& rhs)
{
    return (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, lhs.cwiseAbs().maxCoeff());
}

// --- 1 + 2: submultiplicativity, isometry, anti-homomorphism ----------------

void criteria_products()
{
    const auto        pairs  = standard_spec_pairs();
    const IndexSet    outer  = make_segment_index_set(4);
    const IndexSet    inner  = make_segment_index_set(4);
    constexpr int     trials = 500;
    const CounterRng  root(42);

    const auto t0           = std::chrono::steady_clock::now();
    double     worst_excess = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        CounterRng rng = root.stream(0x100 + p);
        for (int t = 0; t < trials; ++t) {
            const Tensor4 a  = random_tensor(rng, outer, inner);
            const Tensor4 b  = random_tensor(rng, outer, inner);
            const double  na = norm_a(a, pairs[p]);
            const double  nb = norm_a(b, pairs[p]);
            worst_excess     = std::max(
                worst_excess, norm_a(contract(a, b), pairs[p]) / (na * nb) - 1.0);
        }
    }
    const double elapsed = seconds_since(t0);
    const bool   ok1     = worst_excess <= 1e-10 && elapsed < 30.0;
    report(1, ok1,
           "submultiplicativity over " + std::to_string(trials) + " pairs x " +
               std::to_string(pairs.size()) + " spec pairs (worst excess " +
               fmt("%.3g", worst_excess) + ", " + fmt("%.2f s", elapsed) + " < 30 s)");

    // same substreams, hence the same sampled tensors
    double worst_iso  = 0.0;
    double worst_anti = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        CounterRng rng = root.stream(0x100 + p);
        for (int t = 0; t < trials; ++t) {
            const Tensor4 a  = random_tensor(rng, outer, inner);
            const Tensor4 b  = random_tensor(rng, outer, inner);
            const double  na = norm_a(a, pairs[p]);
            const double  nb = norm_a(b, pairs[p]);
            worst_iso        = std::max(
                worst_iso, std::abs(norm_a(adjoint(a), pairs[p]) - na) / na);
            worst_iso = std::max(
                worst_iso, std::abs(norm_a(adjoint(b), pairs[p]) - nb) / nb);
            worst_anti = std::max(worst_anti,
                                  rel_dev(adjoint(contract(a, b)),
                                          contract(adjoint(b), adjoint(a))));
        }
    }
    report(2, worst_iso <= 1e-12 && worst_anti <= 1e-13,
           "involution isometry (worst " + fmt("%.3g", worst_iso) +
               " <= 1e-12) and product reversal (worst " + fmt("%.3g", worst_anti) +
               " <= 1e-13) on the same samples");
}

// --- 3: flattening is a *-homomorphism --------------------------------------

void criterion_flatten()
{
    CounterRng rng(43);
    double     worst_hom    = 0.0;
    double     worst_oracle = 0.0;
    int        oracle_runs  = 0;
    for (int t = 0; t < 200; ++t) {
        const IndexSet outer = make_segment_index_set(1 + rng.below(3));
        const IndexSet inner = make_segment_index_set(1 + rng.below(3));
        const Tensor4  a     = random_tensor(rng, outer, inner);
        const Tensor4  b     = random_tensor(rng, outer, inner);
        const Tensor4  ab    = contract(a, b);

        worst_hom = std::max(worst_hom,
                             rel_dev(flatten_matrix(ab),
                                     Matrix(flatten_matrix(a) * flatten_matrix(b))));
        worst_hom = std::max(worst_hom, rel_dev(flatten_matrix(adjoint(a)),
                                                Matrix(flatten_matrix(a).adjoint())));
        if (t % 10 == 0) {
            worst_oracle = std::max(worst_oracle,
                                    rel_dev(ab, oracles::contract_bruteforce(a, b)));
            ++oracle_runs;
        }
    }
    report(3, worst_hom <= 1e-13 && worst_oracle <= 1e-13,
           "flattening respects products and adjoints over 200 pairs (worst " +
               fmt("%.3g", worst_hom) + " <= 1e-13), double-sum oracle on " +
               std::to_string(oracle_runs) + " pairs (worst " +
               fmt("%.3g", worst_oracle) + ")");
}

// --- 4 + 5: Gram-tensor factorisation and norm factorisation ----------------

void criteria_gram()
{
    const auto       pairs = standard_spec_pairs();
    const CounterRng root(44);

    double worst_entry = 0.0;
    {
        CounterRng rng = root.stream(1);
        for (int t = 0; t < 50; ++t) {
            const Frame     f1 = random_frame(rng, 4, 6);
            const Frame     f2 = random_frame(rng, 3, 5);
            const Tensor4   g  = gram_tensor4(tensor_product_frame(f1, f2));
            const AlgMatrix g1 = gram_matrix(f1);
            const AlgMatrix g2 = gram_matrix(f2);
            const Tensor4   k  = kronecker(
                AlgMatrix(g1.rows, g1.cols, Matrix(g1.values.conjugate())), g2);
            worst_entry = std::max(worst_entry, rel_dev(g, k));
        }
    }
    report(4, worst_entry <= 1e-13,
           "Gram tensors of 50 product frames match the kronecker construction "
           "entrywise (worst " +
               fmt("%.3g", worst_entry) + " <= 1e-13)");

    double worst_norm   = 0.0;
    bool   all_finite   = true;
    {
        CounterRng rng = root.stream(1);  // the same 50 frame pairs
        for (int t = 0; t < 50; ++t) {
            const Frame     f1  = random_frame(rng, 4, 6);
            const Frame     f2  = random_frame(rng, 3, 5);
            const Tensor4   g   = gram_tensor4(tensor_product_frame(f1, f2));
            const AlgMatrix g1  = gram_matrix(f1);
            const AlgMatrix g2  = gram_matrix(f2);
            const double    op1 = operator_norm(g1.values);
            const double    op2 = operator_norm(g2.values);
            for (const TensorAlgebraSpec& spec : pairs) {
                const double rhs1 = op2 * algebra_norm(g1, spec.spec1);
                const double rhs2 = op1 * algebra_norm(g2, spec.spec2);
                worst_norm        = std::max(
                    worst_norm, std::abs(norm_a1_tilde(g, spec.spec1) - rhs1) / rhs1);
                worst_norm = std::max(
                    worst_norm, std::abs(norm_a2_tilde(g, spec.spec2) - rhs2) / rhs2);
                all_finite = all_finite && std::isfinite(norm_a(g, spec));
            }
        }
    }
    report(5, worst_norm <= 1e-10 && all_finite,
           "norms of the same 50 Gram tensors factor into operator x algebra norms "
           "(worst " +
               fmt("%.3g", worst_norm) + " <= 1e-10), all tensor norms finite");
}

// --- 6: canonical-dual reconstruction ---------------------------------------

void criterion_reconstruction()
{
    CounterRng rng(45);
    double     worst     = 0.0;
    double     worst_dft = 0.0;

    const auto probe = [&rng, &worst](const Frame& f) {
        const Frame dual = canonical_dual(f);
        for (int v = 0; v < 3; ++v) {
            const Vector x  = random_vector(rng, f.space_dim);
            const double nx = x.norm();
            worst           = std::max(worst, (synthesis(dual, analysis(f, x)) - x).norm() / nx);
            worst           = std::max(worst, (synthesis(f, analysis(dual, x)) - x).norm() / nx);
        }
    };

    for (int t = 0; t < 50; ++t) {
        const std::size_t dim   = 2 + rng.below(5);
        const std::size_t count = dim + rng.below(4);
        probe(random_frame(rng, dim, count));  // redrawn until B/A <= 1e6
    }

    for (auto [n, decay] : std::vector<std::pair<std::size_t, double>>{{8, 0.4}, {12, 1.0}}) {
        const Frame f = shift_invariant_frame(n, decay);
        probe(f);
        RealVector w(static_cast<Eigen::Index>(n));
        for (std::size_t t = 0; t < n; ++t)
            w(static_cast<Eigen::Index>(t)) =
                std::exp(-decay * static_cast<double>(std::min(t, n - t)));
        const auto [lo, hi]  = oracles::circulant_bounds(w);
        const FrameBounds b = frame_bounds(f);
        worst_dft            = std::max(worst_dft, std::abs(b.lower - lo) / lo);
        worst_dft            = std::max(worst_dft, std::abs(b.upper - hi) / hi);
    }

    report(6, worst <= 1e-10 && worst_dft <= 1e-10,
           "canonical duals reconstruct on 50 random frames and 2 circulant fixtures "
           "(worst residual " +
               fmt("%.3g", worst) + " <= 1e-10, fixture bounds vs closed form " +
               fmt("%.3g", worst_dft) + " <= 1e-10)");
}

// --- 7: solidity of the scalar families, non-solidity of the tensor norm ----

void criterion_solidity()
{
    const auto     specs = standard_scalar_specs();
    const IndexSet line  = make_segment_index_set(8);
    CounterRng     rng(46);

    int violations = 0;
    for (const AlgebraSpec& spec : specs)
        for (int t = 0; t < 500; ++t) {
            const AlgMatrix a = random_alg_matrix(rng, line, line);
            const AlgMatrix b = random_dominated_matrix(rng, a);
            if (!check_solidity(spec, a, b))
                ++violations;
        }

    const IndexSet outer = make_segment_index_set(4);
    const auto     witness = find_non_solidity_witness(CounterRng(47), outer, outer,
                                                       standard_spec_pairs().front(), 200, 1.05);
    const double   gain = witness ? witness->norm_of_b / witness->norm_of_a : 0.0;

    report(7, violations == 0 && witness.has_value(),
           std::to_string(500 * specs.size()) +
               " dominated scalar pairs with zero norm-domination violations; "
               "moduli-equal tensor pair with norm ratio " +
               fmt("%.3f", gain) + " >= 1.05 found");
}

// --- 8: inverse diagnostics across truncations ------------------------------

void criterion_inverse()
{
    const auto pairs = standard_spec_pairs();
    const auto t0    = std::chrono::steady_clock::now();

    double worst_norm     = 0.0;
    double worst_residual = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        CounterRng rng(48 + p);
        for (std::size_t n = 2; n <= 4; ++n) {
            const IndexSet set = make_segment_index_set(n);
            Tensor4        r   = random_localised_tensor(rng, set, set, 2.0);
            const double   r0  = norm_a(r, pairs[p]);
            for (cplx& v : r.data())
                v *= 0.5 / r0;
            Tensor4 a   = Tensor4::identity(set, set);
            auto    dst = a.data();
            auto    src = r.data();
            for (std::size_t e = 0; e < dst.size(); ++e)
                dst[e] += src[e];

            const auto [inv, rep] = inverse_in_algebra(a, pairs[p]);
            worst_norm            = std::max(worst_norm, rep.norm_a_inverse);
            worst_residual        = std::max(worst_residual, rep.residual);
        }
    }
    const double elapsed = seconds_since(t0);

    report(8, worst_norm <= 2.0 + 1e-8 && worst_residual <= 1e-10 && elapsed < 60.0,
           "perturbed identities (perturbation norm 0.5, sizes 2-4) invert with norm <= 2 "
           "(worst " +
               fmt("%.10g", worst_norm) + "), residual " + fmt("%.3g", worst_residual) +
               " <= 1e-10, " + fmt("%.2f s", elapsed) + " < 60 s");
}

// --- 9: CLI determinism and exit codes --------------------------------------

struct CliRun {
    int         exit_code = -1;
    std::string out;
};

CliRun run_cli(const fs::path& dir, int n, const std::string& args)
{
    const fs::path    out_path = dir / ("acc_" + std::to_string(n) + ".out");
    const std::string cmd      = std::string(FRAMETENSOR_CLI_PATH) + " " + args + " >" +
                            out_path.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());

    CliRun r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream      in(out_path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

void criterion_cli()
{
    const fs::path dir =
        fs::temp_directory_path() / ("frametensor_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    const CliRun a = run_cli(dir, 1, "--seed 5 verify --trials 10");
    const CliRun b = run_cli(dir, 2, "--seed 5 verify --trials 10");
    const bool   deterministic =
        a.exit_code == 0 && b.exit_code == 0 && !a.out.empty() && a.out == b.out;

    const CliRun fail = run_cli(dir, 3, "--tol reconstruction=0 verify --trials 3");
    const CliRun bad  = run_cli(dir, 4, "gram " + (dir / "missing.json").string());
    const bool   contract_ok = fail.exit_code == 1 && bad.exit_code == 2;

    report(9, deterministic && contract_ok,
           "two seeded verify runs byte-identical (" + std::to_string(a.out.size()) +
               " bytes, exit 0), forced check failure exits 1, unreadable input exits 2");

    std::error_code ec;
    fs::remove_all(dir, ec);
}

}  // namespace

int main()
{
    criteria_products();
    criterion_flatten();
    criteria_gram();
    criterion_reconstruction();
    criterion_solidity();
    criterion_inverse();
    criterion_cli();

    if (failures == 0)
        std::printf("acceptance: all 9 criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
