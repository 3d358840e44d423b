#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "ipsw/certificate.hpp"
#include "ipsw/experiment.hpp"
#include "ipsw/hardness.hpp"
#include "ipsw/ips.hpp"
#include "ipsw/measure.hpp"

namespace ipsw {

namespace {

constexpr int kOk = 0, kSemantic = 1, kSatisfiable = 2, kUsage = 3;

struct RunConfig {
    std::string field = "rational";
    std::string seed = "0";
    uint64_t budget = kDefaultExpandBudget;
    uint64_t trials = 100;
    std::string out;
};

uint64_t resolve_seed(const std::string& s) {
    if (s == "random") return (uint64_t{std::random_device{}()} << 32) ^ std::random_device{}();
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw DomainError("--seed takes a non-negative integer or 'random'");
    }
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream o(path);
    if (!o) throw ResourceError("cannot write " + path);
    o << text;
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

struct RefuteArgs {
    std::string kind;
    size_t n = 0;
    std::string alpha, beta, order;
};

int cmd_refute(const RefuteArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const FieldSpec spec = FieldSpec::parse(cfg.field);
    std::vector<FieldElement> alpha;
    if (!a.alpha.empty()) {
        for (const auto& t : split_csv(a.alpha)) alpha.push_back(FieldElement::parse(spec, t));
        if (a.n != 0 && a.n != alpha.size()) throw DomainError("--n disagrees with the length of --alpha");
    } else {
        if (a.n == 0) throw DomainError("refute needs --n or --alpha");
        alpha.assign(a.n, FieldElement::one(spec));
    }
    const FieldElement beta = FieldElement::parse(spec, a.beta);
    std::vector<size_t> order;
    for (const auto& t : split_csv(a.order)) {
        size_t k = std::stoul(t);
        if (k == 0) throw DomainError("--order lists 1-based variable indices");
        order.push_back(k - 1);
    }

    IpsCertificate cert;
    if (a.kind == "roabp") {
        cert = build_roabp_refutation(alpha, beta, order).cert;
    } else if (a.kind == "mlf") {
        cert = build_mlformula_refutation(alpha, beta);
    } else {
        SubsetSumWitness w = subset_sum_witness(alpha, beta);
        AxiomSystem sys{spec, alpha.size(), {subset_sum_axiom(alpha, beta)}, true};
        cert = simulate_sparse_linips(sys, {w.f_ml});
    }
    VerifyResult v = verify_exact(cert, cfg.budget);
    if (!v.valid()) {
        err << "constructed certificate failed self-verification\n" << format_verify_result(v);
        return kSemantic;
    }
    const std::string text = write_certificate(cert);
    std::ostream& stats = cfg.out.empty() ? err : out;
    if (cfg.out.empty()) out << text;
    else write_file(cfg.out, text);
    stats << "kind " << kind_name(cert.proof) << "\n" << format_verify_result(v);
    if (!cfg.out.empty()) stats << "written " << cfg.out << "\n";
    return kOk;
}

int cmd_verify(const std::string& path, const std::string& mode, const RunConfig& cfg, std::ostream& out) {
    IpsCertificate cert = parse_certificate(read_file(path));
    VerifyResult v = mode == "pit" ? verify_pit(cert, cfg.trials, resolve_seed(cfg.seed)) : verify_exact(cert, cfg.budget);
    out << format_verify_result(v);
    return v.valid() ? kOk : kSemantic;
}

struct MeasureArgs {
    std::string which, poly, poly_file, partition, order, grid = "0,1";
};

int cmd_measure(const MeasureArgs& a, const RunConfig& cfg, std::ostream& out) {
    const FieldSpec spec = FieldSpec::parse(cfg.field);
    std::string text = a.poly_file.empty() ? a.poly : read_file(a.poly_file);
    if (text.empty()) throw DomainError("measure needs --poly or --poly-file");
    auto [f, layout] = parse_poly(text, spec);
    const MonomialOrder ord = a.order.empty() ? MonomialOrder{} : MonomialOrder::parse(a.order);
    auto part = [&] {
        if (a.partition.empty()) throw DomainError(a.which + " needs --partition");
        return PartitionSpec::parse(a.partition, layout);
    };
    std::string value;
    if (a.which == "coeffdim") {
        value = std::to_string(coeff_dim(f, part()));
    } else if (a.which == "evaldim") {
        std::vector<FieldElement> grid;
        for (const auto& t : split_csv(a.grid)) grid.push_back(FieldElement::parse(spec, t));
        value = std::to_string(eval_dim(f, part(), grid));
    } else if (a.which == "lm") {
        value = monomial_to_string(leading_monomial(f, ord), layout);
    } else if (a.which == "tm") {
        value = monomial_to_string(trailing_monomial(f, ord), layout);
    } else if (a.which == "ld") {
        value = to_string(leading_diagonal(f, part(), ord), layout);
    } else if (a.which == "td") {
        value = to_string(trailing_diagonal(f, part(), ord), layout);
    } else if (a.which == "sparsity") {
        value = std::to_string(f.sparsity());
    } else {
        value = std::to_string(f.degree());
    }
    out << a.which << "," << csv_cell(value) << "\n";
    return kOk;
}

struct ExperimentArgs {
    std::string manifest;
    size_t jobs = 0;
    bool deterministic = false;
};

int cmd_experiment(const ExperimentArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto jobs = parse_manifest(read_file(a.manifest));
    const size_t par = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
    ExperimentResult res = run_experiment(jobs, resolve_seed(cfg.seed), par);
    for (const auto& w : res.warnings) err << "warning: " << w << "\n";
    std::ostringstream csv;
    csv << csv_header() << "\n";
    for (const auto& r : res.reports) csv << csv_row(r, a.deterministic) << "\n";
    if (cfg.out.empty()) out << csv.str();
    else write_file(cfg.out, csv.str());
    size_t confirmed = 0, refuted = 0, other = 0;
    for (const auto& r : res.reports) {
        if (r.verdict == Verdict::Confirmed) ++confirmed;
        else if (r.verdict == Verdict::Refuted) ++refuted;
        else ++other;
        if (r.verdict == Verdict::Refuted && r.counterexample) err << "refuted " << r.claim << " (" << r.params << "): " << r.counterexample->description << "\n";
        if (r.verdict == Verdict::Inconclusive) err << "inconclusive " << r.claim << " (" << r.params << "): " << r.note << "\n";
    }
    err << res.reports.size() << " jobs: " << confirmed << " confirmed, " << refuted << " refuted, " << other << " inconclusive\n";
    return res.any_refuted ? kSemantic : kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Workbench for ideal proof system certificates and algebraic lower-bound checks", "ipsw"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--field", cfg.field, "p=<prime> or rational")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "integer seed or 'random'")->capture_default_str();
        sub->add_option("--budget", cfg.budget, "expansion budget in term operations")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out, "output path (stdout when omitted)");
    };

    RefuteArgs ra;
    auto* refute = app.add_subcommand("refute", "build a subset-sum refutation and write its certificate");
    refute->add_option("kind", ra.kind, "roabp | mlf | sparse-sim")->required()->check(CLI::IsMember({"roabp", "mlf", "sparse-sim"}));
    refute->add_option("--n", ra.n, "number of variables (alpha defaults to all ones)");
    refute->add_option("--alpha", ra.alpha, "comma-separated coefficients");
    refute->add_option("--beta", ra.beta, "target value")->required();
    refute->add_option("--order", ra.order, "variable order as a 1-based permutation, e.g. 3,2,1");
    add_common(refute);

    std::string cert_path, mode = "exact";
    auto* verify = app.add_subcommand("verify", "verify a certificate file");
    verify->add_option("cert", cert_path, "certificate file")->required();
    verify->add_option("--mode", mode, "exact | pit")->check(CLI::IsMember({"exact", "pit"}))->capture_default_str();
    verify->add_option("--trials", cfg.trials, "PIT trials")->capture_default_str();
    add_common(verify);

    MeasureArgs ma;
    auto* measure = app.add_subcommand("measure", "compute a measure of a polynomial");
    measure->add_option("which", ma.which, "coeffdim | evaldim | lm | tm | ld | td | sparsity | degree")
        ->required()
        ->check(CLI::IsMember({"coeffdim", "evaldim", "lm", "tm", "ld", "td", "sparsity", "degree"}));
    measure->add_option("--poly", ma.poly, "polynomial text");
    measure->add_option("--poly-file", ma.poly_file, "file holding the polynomial text");
    measure->add_option("--partition", ma.partition, "u|v or u|v|w, e.g. x|y or x1,x2|y1,y2");
    measure->add_option("--order", ma.order, "monomial order, e.g. grlex or lex:2,1");
    measure->add_option("--grid", ma.grid, "evaluation grid for evaldim")->capture_default_str();
    add_common(measure);

    ExperimentArgs ea;
    auto* experiment = app.add_subcommand("experiment", "run a manifest of lower-bound checks and emit CSV");
    experiment->add_option("manifest", ea.manifest, "manifest file")->required();
    experiment->add_option("-j,--jobs", ea.jobs, "parallel jobs (default: hardware threads)");
    experiment->add_flag("--deterministic", ea.deterministic, "write 0 in the millis column");
    add_common(experiment);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*refute) return cmd_refute(ra, cfg, out, err);
        if (*verify) return cmd_verify(cert_path, mode, cfg, out);
        if (*measure) return cmd_measure(ma, cfg, out);
        return cmd_experiment(ea, cfg, out, err);
    } catch (const SatisfiableError& e) {
        err << "satisfiable: " << e.what() << "\n";
        return kSatisfiable;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: bad number: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        err << "error: number out of range: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace ipsw
