#include <doctest.h>

#include "ipsw/experiment.hpp"

using namespace ipsw;

TEST_CASE("manifest parsing") {
    const auto jobs = parse_manifest("# comment\n\nCHECK degree-bound n=3 beta=5\nCHECK sparsity-bound n=2 claimed=4\n");
    REQUIRE(jobs.size() == 2);
    CHECK(jobs[0].claim == "degree-bound");
    CHECK(jobs[0].params.at("beta") == "5");
    CHECK(jobs[0].line == 3);
    CHECK(jobs[1].claimed == 4u);
    CHECK_THROWS_AS(parse_manifest("CHECK degree-bound n\n"), ParseError);
    CHECK_THROWS_AS(parse_manifest("RUN degree-bound n=3\n"), ParseError);
}

TEST_CASE("unknown claims are skipped with a warning") {
    const auto res = run_experiment(parse_manifest("CHECK no-such-claim n=1\nCHECK degree-bound n=2 beta=5\n"), 0, 1);
    CHECK(res.reports.size() == 1);
    CHECK(res.warnings.size() == 1);
    CHECK_FALSE(res.any_refuted);
}

TEST_CASE("a false claim is refuted") {
    const auto res = run_experiment(parse_manifest("CHECK degree-bound n=3 beta=5 claimed=4\n"), 0, 1);
    REQUIRE(res.reports.size() == 1);
    CHECK(res.reports[0].verdict == Verdict::Refuted);
    CHECK(res.any_refuted);
}

TEST_CASE("guard failures are inconclusive") {
    const auto res = run_experiment(parse_manifest("CHECK degree-bound n=2 beta=1\n"), 0, 1);
    REQUIRE(res.reports.size() == 1);
    CHECK(res.reports[0].verdict == Verdict::Inconclusive);
    CHECK(res.reports[0].note.rfind("error:", 0) == 0);
}

TEST_CASE("results do not depend on parallelism") {
    const auto jobs = parse_manifest(
        "CHECK svb-determinant n=3 ell=2 trials=30\nCHECK svb-sparse-survives n=3 ell=2\n"
        "CHECK min-multiple-sparsity n=2\nCHECK degree-bound n=4 beta=9\n");
    const auto a = run_experiment(jobs, 42, 1), b = run_experiment(jobs, 42, 3);
    REQUIRE(a.reports.size() == b.reports.size());
    for (size_t i = 0; i < a.reports.size(); ++i) CHECK(csv_row(a.reports[i], true) == csv_row(b.reports[i], true));
}

TEST_CASE("csv output") {
    CHECK(csv_header() == "claim,params,measured,claimed,verdict,millis");
    const auto res = run_experiment(parse_manifest("CHECK degree-bound n=3 beta=5\n"), 0, 1);
    CHECK(csv_row(res.reports[0], true) == "degree-bound,n=3 beta=5 field=rational,3,=3,confirmed,0.000");
}
