//
// frametensor CLI: build frames and Gram tensors, evaluate algebra norms,
// run the seeded verification suite and the inverse-trend diagnostic.
//
// Exit codes: 0 success / all checks passed, 1 check failure, 2 usage or
// input errors.
//

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frametensor/frametensor.hpp"

namespace ft = frametensor;

namespace {

struct GlobalOptions {
    std::uint64_t                 seed = 1;
    std::string                   out;
    std::string                   format = "json";
    std::map<std::string, double> tolerances;
};

// --tol check=value, repeatable.
void parse_tolerance_flags(const std::vector<std::string>& raw,
                           std::map<std::string, double>&  into)
{
    for (const std::string& item : raw) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw CLI::ValidationError("--tol", "expected <check>=<value>, got '" + item + "'");
        const double value = ft::parse_real(std::string_view(item).substr(eq + 1));
        if (!(value >= 0.0))
            throw CLI::ValidationError("--tol", "tolerance must be >= 0 in '" + item + "'");
        into[item.substr(0, eq)] = value;
    }
}

void write_text(const std::string& out_path, const std::string& text)
{
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file '" + out_path + "'");
    out << text;
}

ft::json load_json_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open input file '" + path + "'");
    return ft::json::parse(in);
}

ft::AlgebraSpec parse_spec_argument(const std::string& text)
{
    return ft::algebra_spec_from_json(ft::json::parse(text));
}

std::string dump_report(const ft::json& j) { return j.dump(2) + "\n"; }

// --- gram -------------------------------------------------------------------

int run_gram(const GlobalOptions& global, const std::string& frame_path,
             const std::string& spec_text)
{
    const ft::Frame       frame = ft::frame_from_json(load_json_file(frame_path));
    const ft::AlgebraSpec spec  = parse_spec_argument(spec_text);

    const ft::AlgMatrix          gram   = ft::gram_matrix(frame);
    const ft::FrameBounds        bounds = ft::frame_bounds(frame);
    const ft::LocalisationReport loc    = ft::localisation_report(frame, spec);

    if (global.format == "csv") {
        std::ostringstream out;
        ft::write_matrix_csv(out, gram.values);
        write_text(global.out, out.str());
        return 0;
    }

    ft::json profile = ft::json::array();
    for (const auto& entry : loc.profile)
        profile.push_back(ft::json{{"distance", entry.distance},
                                   {"max_abs", entry.max_abs},
                                   {"squared_distance", entry.squared_distance}});
    const ft::json report{
        {"bounds", ft::json{{"lower", bounds.lower}, {"upper", bounds.upper}}},
        {"gram", ft::matrix_to_json(gram.values)},
        {"norm", loc.norm},
        {"profile", std::move(profile)},
        {"spec", ft::algebra_spec_to_json(spec)}};
    write_text(global.out, dump_report(report));
    return 0;
}

// --- tensor -----------------------------------------------------------------

int run_tensor(const GlobalOptions& global, const std::string& frame1_path,
               const std::string& frame2_path, const std::string& spec1_text,
               const std::string& spec2_text, const std::string& dump_tensor_path)
{
    const ft::Frame       f1    = ft::frame_from_json(load_json_file(frame1_path));
    const ft::Frame       f2    = ft::frame_from_json(load_json_file(frame2_path));
    const ft::AlgebraSpec spec1 = parse_spec_argument(spec1_text);
    const ft::AlgebraSpec spec2 = parse_spec_argument(spec2_text);

    const ft::HSFrame product = ft::tensor_product_frame(f1, f2);
    const ft::Tensor4 gram    = ft::gram_tensor4(product);

    if (!dump_tensor_path.empty()) {
        std::ofstream out(dump_tensor_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open output file '" + dump_tensor_path + "'");
        ft::write_tensor4(out, gram);
    }

    const double a1 = ft::norm_a1_tilde(gram, spec1);
    const double a2 = ft::norm_a2_tilde(gram, spec2);

    const ft::AlgMatrix g1 = ft::gram_matrix(f1);
    const ft::AlgMatrix g2 = ft::gram_matrix(f2);
    const double        factorised_a1 =
        ft::operator_norm(g2.values) * ft::algebra_norm(g1, spec1);
    const double factorised_a2 = ft::operator_norm(g1.values) * ft::algebra_norm(g2, spec2);

    const auto rel_diff = [](double lhs, double rhs) {
        return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    };

    if (global.format == "csv") {
        std::ostringstream out;
        out << "quantity,value\n";
        out << "norm_a1_tilde," << ft::format_real(a1) << '\n';
        out << "norm_a2_tilde," << ft::format_real(a2) << '\n';
        out << "norm_a," << ft::format_real(std::max(a1, a2)) << '\n';
        out << "factorised_a1_tilde," << ft::format_real(factorised_a1) << '\n';
        out << "factorised_a2_tilde," << ft::format_real(factorised_a2) << '\n';
        write_text(global.out, out.str());
        return 0;
    }

    const ft::json report{
        {"factorised",
         ft::json{{"a1_tilde", factorised_a1}, {"a2_tilde", factorised_a2}}},
        {"frames",
         ft::json{{"counts", ft::json::array({f1.index.size(), f2.index.size()})},
                  {"dims", ft::json::array({f1.space_dim, f2.space_dim})}}},
        {"norms", ft::json{{"a", std::max(a1, a2)}, {"a1_tilde", a1}, {"a2_tilde", a2}}},
        {"relative_difference", ft::json{{"a1_tilde", rel_diff(a1, factorised_a1)},
                                         {"a2_tilde", rel_diff(a2, factorised_a2)}}},
        {"spec1", ft::algebra_spec_to_json(spec1)},
        {"spec2", ft::algebra_spec_to_json(spec2)}};
    write_text(global.out, dump_report(report));
    return 0;
}

// --- verify -----------------------------------------------------------------

int run_verify(const GlobalOptions& global, std::size_t n1, std::size_t n2, int trials)
{
    ft::VerificationConfig cfg;
    cfg.seed       = global.seed;
    cfg.n1         = n1;
    cfg.n2         = n2;
    cfg.trials     = trials;
    cfg.tolerances = global.tolerances;

    const ft::VerificationReport report = ft::run_verification(cfg);

    std::string rendered;
    if (global.format == "csv") {
        std::ostringstream out;
        out << "check,trials,max_violation,tolerance,passed\n";
        for (const ft::CheckRecord& c : report.checks)
            out << c.name << ',' << c.trials << ',' << ft::format_real(c.max_violation) << ','
                << ft::format_real(c.tolerance) << ',' << (c.passed ? "true" : "false") << '\n';
        rendered = out.str();
    } else {
        rendered = dump_report(ft::verification_report_to_json(report));
    }
    write_text(global.out, rendered);

    if (!report.all_passed()) {
        for (const ft::CheckRecord& c : report.checks)
            if (!c.passed)
                std::cerr << "FAILED " << c.name << ": max violation "
                          << ft::format_real(c.max_violation) << " > tolerance "
                          << ft::format_real(c.tolerance) << '\n';
        return 1;
    }
    return 0;
}

// --- inverse-trend ----------------------------------------------------------

int run_inverse_trend(const GlobalOptions& global, const std::vector<std::size_t>& sizes,
                      double perturbation, double identity_coefficient, double decay,
                      const std::string& spec1_text, const std::string& spec2_text)
{
    const ft::TensorAlgebraSpec spec{parse_spec_argument(spec1_text),
                                     parse_spec_argument(spec2_text)};
    ft::CounterRng root(global.seed);

    std::ostringstream out;
    out << "size,status,norm_a_input,norm_a_inverse,op_norm_input,op_norm_inverse,condition,"
           "residual\n";
    for (std::size_t idx = 0; idx < sizes.size(); ++idx) {
        const std::size_t n = sizes[idx];
        ft::CounterRng    rng   = root.stream(idx);
        const ft::IndexSet set  = ft::make_segment_index_set(n);
        ft::Tensor4        a    = ft::Tensor4::identity(set, set);
        for (ft::cplx& v : a.data())
            v *= identity_coefficient;
        if (perturbation != 0.0) {
            ft::Tensor4  r  = ft::random_localised_tensor(rng, set, set, decay);
            const double r0 = ft::norm_a(r, spec);
            auto         dst = a.data();
            auto         src = r.data();
            for (std::size_t e = 0; e < dst.size(); ++e)
                dst[e] += src[e] * (perturbation / r0);
        }
        out << n << ',';
        try {
            const auto [inv, rep] = ft::inverse_in_algebra(a, spec);
            out << "ok," << ft::format_real(rep.norm_a_input) << ','
                << ft::format_real(rep.norm_a_inverse) << ','
                << ft::format_real(rep.op_norm_input) << ','
                << ft::format_real(rep.op_norm_inverse) << ','
                << ft::format_real(rep.condition) << ',' << ft::format_real(rep.residual)
                << '\n';
        } catch (const ft::singular_error& e) {
            out << "singular,,,,," << ft::format_real(e.condition()) << ",\n";
        }
    }
    write_text(global.out, out.str());
    return 0;
}

// --- gen-frame --------------------------------------------------------------

int run_gen_frame(const GlobalOptions& global, const std::string& kind, std::size_t dim,
                  double decay)
{
    std::optional<ft::Frame> frame;
    if (kind == "orthonormal")
        frame = ft::orthonormal_frame(dim);
    else if (kind == "union-of-bases")
        frame = ft::union_of_bases_frame(dim);
    else if (kind == "shift-invariant")
        frame = ft::shift_invariant_frame(dim, decay);
    else
        throw std::invalid_argument("unknown frame kind '" + kind + "'");
    write_text(global.out, ft::frame_to_json(*frame).dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gram tensors of tensor-product frames and their matrix-algebra norms"};
    app.require_subcommand(1);
    app.fallthrough();  // allow --seed/--out/--format/--tol after the subcommand

    GlobalOptions            global;
    std::vector<std::string> tol_flags;
    app.add_option("--seed", global.seed, "seed for all randomised draws")->capture_default_str();
    app.add_option("--out", global.out, "output file (default: stdout)");
    app.add_option("--format", global.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("--tol", tol_flags, "tolerance override <check>=<value>, repeatable");

    // gram
    auto*       gram_cmd = app.add_subcommand("gram", "Gram matrix, algebra norm and decay profile of a frame");
    std::string gram_frame;
    std::string gram_spec = R"({"family":"jaffard","s":2.0})";
    gram_cmd->add_option("frame", gram_frame, "frame JSON file")->required();
    gram_cmd->add_option("--spec", gram_spec, "algebra spec JSON")->capture_default_str();

    // tensor
    auto*       tensor_cmd = app.add_subcommand("tensor", "Gram tensor of a tensor-product frame and its norms");
    std::string tensor_frame1, tensor_frame2, tensor_dump;
    std::string tensor_spec1 = R"({"family":"jaffard","s":2.0})";
    std::string tensor_spec2 = R"({"family":"jaffard","s":3.0})";
    tensor_cmd->add_option("frame1", tensor_frame1, "first factor frame JSON file")->required();
    tensor_cmd->add_option("frame2", tensor_frame2, "second factor frame JSON file")->required();
    tensor_cmd->add_option("--spec1", tensor_spec1, "algebra spec JSON for the outer index")
        ->capture_default_str();
    tensor_cmd->add_option("--spec2", tensor_spec2, "algebra spec JSON for the inner index")
        ->capture_default_str();
    tensor_cmd->add_option("--dump-tensor", tensor_dump, "also write the Gram tensor to this file");

    // verify
    auto*       verify_cmd = app.add_subcommand("verify", "run the seeded verification suite");
    std::size_t verify_n1 = 4, verify_n2 = 4;
    int         verify_trials = 50;
    verify_cmd->add_option("--n1", verify_n1, "|I1|")->capture_default_str();
    verify_cmd->add_option("--n2", verify_n2, "|I2|")->capture_default_str();
    verify_cmd->add_option("--trials", verify_trials, "trials per check")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // inverse-trend
    auto*                    trend_cmd = app.add_subcommand("inverse-trend", "inverse norms across truncation sizes");
    std::vector<std::size_t> trend_sizes{2, 3, 4};
    double                   trend_perturbation = 0.5;
    double                   trend_identity     = 1.0;
    double                   trend_decay        = 2.0;
    std::string              trend_spec1        = R"({"family":"jaffard","s":2.0})";
    std::string              trend_spec2        = R"({"family":"jaffard","s":3.0})";
    trend_cmd->add_option("--sizes", trend_sizes, "truncation sizes |I1| = |I2|")
        ->delimiter(',')
        ->capture_default_str();
    trend_cmd->add_option("--perturbation", trend_perturbation,
                          "norm_a of the localised perturbation R in c*Id + R")
        ->capture_default_str();
    trend_cmd->add_option("--identity-coefficient", trend_identity, "coefficient c in c*Id + R")
        ->capture_default_str();
    trend_cmd->add_option("--decay", trend_decay, "polynomial decay exponent of R")
        ->capture_default_str();
    trend_cmd->add_option("--spec1", trend_spec1, "algebra spec JSON for the outer index")
        ->capture_default_str();
    trend_cmd->add_option("--spec2", trend_spec2, "algebra spec JSON for the inner index")
        ->capture_default_str();

    // gen-frame
    auto*       gen_cmd = app.add_subcommand("gen-frame", "write a fixture frame as JSON");
    std::string gen_kind;
    std::size_t gen_dim   = 4;
    double      gen_decay = 0.5;
    gen_cmd->add_option("--kind", gen_kind, "orthonormal | union-of-bases | shift-invariant")
        ->required()
        ->check(CLI::IsMember({"orthonormal", "union-of-bases", "shift-invariant"}));
    gen_cmd->add_option("--dim", gen_dim, "ambient dimension")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    gen_cmd->add_option("--decay", gen_decay, "window decay rate (shift-invariant)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        parse_tolerance_flags(tol_flags, global.tolerances);
        if (gram_cmd->parsed())
            return run_gram(global, gram_frame, gram_spec);
        if (tensor_cmd->parsed())
            return run_tensor(global, tensor_frame1, tensor_frame2, tensor_spec1, tensor_spec2,
                              tensor_dump);
        if (verify_cmd->parsed())
            return run_verify(global, verify_n1, verify_n2, verify_trials);
        if (trend_cmd->parsed())
            return run_inverse_trend(global, trend_sizes, trend_perturbation, trend_identity,
                                     trend_decay, trend_spec1, trend_spec2);
        if (gen_cmd->parsed())
            return run_gen_frame(global, gen_kind, gen_dim, gen_decay);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
