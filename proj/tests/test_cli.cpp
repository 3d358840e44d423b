#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "../tools/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::vector<const char*> argv{"ipsw"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = ipsw::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "ipsw_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("measure") {
    CHECK(run({"measure", "--poly", "x1*y1+x2*y2", "--partition", "x|y", "coeffdim"}).out == "coeffdim,2\n");
    CHECK(run({"measure", "--poly", "5", "lm"}).out == "lm,1\n");
    CHECK(run({"measure", "--poly", "(x1+1)*(x2+1)", "sparsity"}).out == "sparsity,4\n");
    CHECK(run({"measure", "--poly", "x1*y1+x2*y2", "--partition", "x|y", "evaldim"}).out == "evaldim,2\n");
    CHECK(run({"measure", "--poly", "x1+y1+3", "--partition", "x|y", "ld"}).out == "ld,x1 + y1\n");
    CHECK(run({"measure", "--poly", "x1*y1", "coeffdim"}).code == 3);
    CHECK(run({"measure", "--poly", "x1 +* y1", "degree"}).code == 3);
}

TEST_CASE("refute and verify") {
    const fs::path roabp = scratch("roabp.cert");
    Run r = run({"refute", "roabp", "--n", "6", "--beta", "7", "--field", "p=10007", "--out", roabp.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("VALID") != std::string::npos);
    CHECK(run({"verify", roabp.string()}).code == 0);
    r = run({"verify", roabp.string(), "--mode", "pit", "--trials", "20", "--seed", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("error_bound_per_trial") != std::string::npos);

    const fs::path mlf = scratch("mlf.cert");
    CHECK(run({"refute", "mlf", "--n", "4", "--beta", "5", "--field", "rational", "--out", mlf.string()}).code == 0);
    CHECK(run({"verify", mlf.string()}).code == 0);

    r = run({"refute", "sparse-sim", "--alpha", "1,2", "--beta", "4"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("FIELD", 0) == 0);

    CHECK(run({"refute", "roabp", "--n", "2", "--beta", "1"}).code == 2);
    CHECK(run({"refute", "mlf", "--n", "3", "--beta", "4", "--field", "p=5"}).code == 3);
    CHECK(run({"refute", "roabp", "--beta", "3"}).code == 3);
}

TEST_CASE("verify rejects corrupted and malformed files") {
    const fs::path bad = scratch("bad.cert");
    write(bad, "FIELD rational\nNVARS 2\nAXIOM x1*x2+1\nPROOF y1\n");
    Run r = run({"verify", bad.string()});
    CHECK(r.code == 1);
    CHECK(r.out.rfind("INVALID fails-one (x1=", 0) == 0);
    CHECK(run({"verify", bad.string(), "--mode", "pit"}).code == 1);
    const fs::path junk = scratch("junk.cert");
    write(junk, "FIELD rational\nNVARS two\n");
    CHECK(run({"verify", junk.string()}).code == 3);
    CHECK(run({"verify", scratch("missing.cert").string()}).code == 3);
}

TEST_CASE("experiment") {
    const fs::path empty = scratch("empty.txt");
    write(empty, "");
    Run r = run({"experiment", empty.string()});
    CHECK(r.code == 0);
    CHECK(r.out == "claim,params,measured,claimed,verdict,millis\n");

    const fs::path falsy = scratch("false.txt");
    write(falsy, "CHECK degree-bound n=3 beta=5 claimed=4\n");
    r = run({"experiment", falsy.string(), "--deterministic"});
    CHECK(r.code == 1);
    CHECK(r.out.find("refuted") != std::string::npos);

    const fs::path unknown = scratch("unknown.txt");
    write(unknown, "CHECK made-up n=1\nCHECK sparsity-bound n=2 beta=3\n");
    r = run({"experiment", unknown.string()});
    CHECK(r.code == 0);
    CHECK(r.err.find("made-up") != std::string::npos);

    const fs::path malformed = scratch("malformed.txt");
    write(malformed, "CHECK degree-bound n\n");
    CHECK(run({"experiment", malformed.string()}).code == 3);

    const fs::path csv = scratch("out.csv");
    const fs::path small = scratch("small.txt");
    write(small, "CHECK degree-bound n=2 beta=5\nCHECK eval-dim-xy n=2 beta=3\n");
    CHECK(run({"experiment", small.string(), "--deterministic", "-j", "2", "--out", csv.string()}).code == 0);
    std::ifstream in(csv);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == run({"experiment", small.string(), "--deterministic", "-j", "1"}).out);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 3);
    CHECK(run({"frobnicate"}).code == 3);
    CHECK(run({"measure", "--poly", "x1", "bogus"}).code == 3);
    CHECK(run({"--help"}).code == 0);
}
