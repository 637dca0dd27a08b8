#include <catch2/catch_amalgamated.hpp>

#include "frametensor/frametensor.hpp"

using namespace frametensor;

TEST_CASE("verification runs clean on a small configuration", "[verify]")
{
    VerificationConfig cfg;
    cfg.trials = 5;
    const VerificationReport rep = run_verification(cfg);

    REQUIRE(rep.all_passed());
    REQUIRE(rep.seed == 1);
    REQUIRE(rep.n1 == 4);
    REQUIRE(rep.n2 == 4);
    REQUIRE(rep.trials == 5);
    REQUIRE(rep.spec_pair_names == standard_spec_pair_names());

    const std::vector<std::string> expected{
        "submultiplicativity", "involution_isometry", "anti_homomorphism",
        "flatten_homomorphism", "solidity",           "non_solidity_witness",
        "neumann_inverse",      "inverse_residual",   "reconstruction",
        "gram_factorisation",   "norm_factorisation"};
    REQUIRE(rep.checks.size() == expected.size());
    for (std::size_t t = 0; t < expected.size(); ++t) {
        REQUIRE(rep.checks[t].name == expected[t]);
        REQUIRE(rep.checks[t].passed);
        REQUIRE(rep.checks[t].max_violation <= rep.checks[t].tolerance);
        REQUIRE(rep.checks[t].trials > 0);
    }
}

TEST_CASE("verification reports are pure functions of their config", "[verify]")
{
    VerificationConfig cfg;
    cfg.seed   = 99;
    cfg.trials = 4;
    cfg.n1     = 3;
    cfg.n2     = 2;

    const json a = verification_report_to_json(run_verification(cfg));
    const json b = verification_report_to_json(run_verification(cfg));
    REQUIRE(a.dump() == b.dump());

    cfg.seed  = 100;
    const json c = verification_report_to_json(run_verification(cfg));
    REQUIRE(a.dump() != c.dump());
}

TEST_CASE("tolerance overrides can force a failure", "[verify]")
{
    VerificationConfig cfg;
    cfg.trials                      = 3;
    cfg.tolerances["reconstruction"] = 0.0;
    const VerificationReport rep    = run_verification(cfg);

    REQUIRE_FALSE(rep.all_passed());
    for (const CheckRecord& c : rep.checks) {
        if (c.name == "reconstruction") {
            REQUIRE_FALSE(c.passed);
            REQUIRE(c.tolerance == 0.0);
        } else {
            REQUIRE(c.passed);
        }
    }
}

TEST_CASE("verification config is validated", "[verify]")
{
    VerificationConfig cfg;
    cfg.trials = 0;
    REQUIRE_THROWS_AS(run_verification(cfg), std::invalid_argument);

    cfg.trials = 1;
    cfg.n1     = 0;
    REQUIRE_THROWS_AS(run_verification(cfg), std::invalid_argument);

    cfg.n1                    = 4;
    cfg.tolerances["solidity"] = -1.0;
    REQUIRE_THROWS_AS(run_verification(cfg), std::invalid_argument);
}

TEST_CASE("the rank-four norm admits a non-solidity witness", "[verify]")
{
    const IndexSet outer = make_segment_index_set(4);
    const IndexSet inner = make_segment_index_set(4);
    const auto     spec  = standard_spec_pairs().front();

    const auto witness =
        find_non_solidity_witness(CounterRng(7), outer, inner, spec, 200, 1.05);
    REQUIRE(witness.has_value());

    // the two tensors carry identical (unit) moduli everywhere...
    auto a = witness->a.data();
    auto b = witness->b.data();
    for (std::size_t t = 0; t < a.size(); ++t) {
        REQUIRE(std::abs(a[t]) == 1.0);
        REQUIRE(std::abs(b[t]) == 1.0);
    }

    // ...yet the norms differ by the requested margin
    REQUIRE(witness->norm_of_a == Catch::Approx(norm_a(witness->a, spec)));
    REQUIRE(witness->norm_of_b == Catch::Approx(norm_a(witness->b, spec)));
    REQUIRE(witness->norm_of_b >= 1.05 * witness->norm_of_a);
}

TEST_CASE("report JSON carries the full environment", "[verify]")
{
    VerificationConfig cfg;
    cfg.trials = 3;
    const json j = verification_report_to_json(run_verification(cfg));

    REQUIRE(j.at("passed").get<bool>());
    REQUIRE(j.at("environment").at("seed").get<std::uint64_t>() == 1);
    REQUIRE(j.at("environment").at("sizes").at("n1").get<std::size_t>() == 4);
    REQUIRE(j.at("environment").at("sizes").at("n2").get<std::size_t>() == 4);
    REQUIRE(j.at("environment").at("trials").get<int>() == 3);
    REQUIRE(j.at("environment").at("spec_pairs").size() == 3);
    REQUIRE(j.at("checks").size() == 11);
    for (const json& c : j.at("checks")) {
        REQUIRE(c.contains("name"));
        REQUIRE(c.contains("trials"));
        REQUIRE(c.contains("max_violation"));
        REQUIRE(c.contains("tolerance"));
        REQUIRE(c.contains("passed"));
    }
}
