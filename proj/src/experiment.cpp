#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "ipsw/experiment.hpp"

namespace ipsw {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<ClaimJob> parse_manifest(std::string_view text) {
    std::vector<ClaimJob> jobs;
    std::istringstream in{std::string(text)};
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream tok(line);
        std::string kw;
        if (!(tok >> kw)) continue;
        if (kw != "CHECK") throw ParseError("manifest line " + std::to_string(lineno) + ": expected CHECK");
        ClaimJob job;
        job.line = lineno;
        if (!(tok >> job.claim)) throw ParseError("manifest line " + std::to_string(lineno) + ": missing claim id");
        std::string kv;
        while (tok >> kv) {
            auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) throw ParseError("manifest line " + std::to_string(lineno) + ": expected key=value, got '" + kv + "'");
            std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
            if (key == "claimed") {
                try {
                    job.claimed = std::stoull(value);
                } catch (const std::exception&) {
                    throw ParseError("manifest line " + std::to_string(lineno) + ": claimed= needs an integer");
                }
            } else {
                job.params[key] = value;
            }
        }
        jobs.push_back(std::move(job));
    }
    return jobs;
}

const std::vector<std::string>& known_claims() {
    static const std::vector<std::string> ids = {
        "degree-bound",      "sparsity-bound",   "eval-dim-xy",         "any-partition",
        "multiple-sps",      "multiple-sps-t",   "multiple-sparse",     "multiple-roabp",
        "every-partition-roabp", "min-multiple-sparsity", "svb-determinant", "svb-sparse-survives",
        "extract-multiple",  "roabp-refutation", "mlf-refutation",
    };
    return ids;
}

bool is_known_claim(const std::string& claim) {
    const auto& ids = known_claims();
    return std::find(ids.begin(), ids.end(), claim) != ids.end();
}

namespace {

using Clock = std::chrono::steady_clock;

struct Params {
    const ClaimJob& job;

    bool has(const std::string& k) const { return job.params.count(k) > 0; }
    std::string str(const std::string& k, const std::string& def) const {
        auto it = job.params.find(k);
        return it == job.params.end() ? def : it->second;
    }
    uint64_t num(const std::string& k, std::optional<uint64_t> def = std::nullopt) const {
        auto it = job.params.find(k);
        if (it == job.params.end()) {
            if (!def) throw DomainError("missing parameter " + k + "=");
            return *def;
        }
        try {
            return std::stoull(it->second);
        } catch (const std::exception&) {
            throw DomainError("parameter " + k + "= needs a non-negative integer");
        }
    }
    double real(const std::string& k, double def) const {
        auto it = job.params.find(k);
        return it == job.params.end() ? def : std::stod(it->second);
    }
    FieldSpec field(const std::string& def) const {
        std::string f = str("field", def);
        if (!f.empty() && std::isdigit(static_cast<unsigned char>(f[0]))) f = "p=" + f;
        return FieldSpec::parse(f);
    }
    FieldElement beta(const FieldSpec& spec, int64_t def) const {
        return has("beta") ? FieldElement::parse(spec, str("beta", "")) : FieldElement::from_int(spec, def);
    }
};

FieldElement random_nonzero(const FieldSpec& spec, std::mt19937_64& rng) {
    const uint64_t top = spec.is_prime() ? spec.modulus() - 1 : 9;
    std::uniform_int_distribution<uint64_t> d(1, top);
    return spec.is_prime() ? FieldElement::from_residue(spec, d(rng)) : FieldElement::from_int(spec, static_cast<int64_t>(d(rng)));
}

// Nonzero multilinear polynomial with up to `terms` random terms.
SparsePoly random_multilinear(const FieldSpec& spec, size_t n, size_t terms, std::mt19937_64& rng) {
    while (true) {
        std::vector<Term> ts;
        for (size_t k = 0; k < terms; ++k) {
            Monomial m(n);
            for (size_t i = 0; i < n; ++i) m.at(i) = rng() & 1;
            ts.push_back(Term{std::move(m), random_nonzero(spec, rng)});
        }
        SparsePoly p = SparsePoly::from_terms(spec, n, std::move(ts));
        if (!p.is_zero()) return p;
    }
}

SparsePoly product_of_vars(const FieldSpec& spec, size_t n) {
    Monomial m(n);
    for (size_t i = 0; i < n; ++i) m.at(i) = 1;
    return SparsePoly::monomial(FieldElement::one(spec), std::move(m));
}

std::string fraction(uint64_t num, uint64_t den) { return std::to_string(num) + "/" + std::to_string(den); }

HardnessReport make_report(const std::string& claim, std::string params, uint64_t measured, uint64_t claimed, Relation rel) {
    HardnessReport r;
    r.claim = claim;
    r.params = std::move(params);
    r.measured = measured;
    r.claimed = claimed;
    r.relation = rel;
    return r;
}

std::string n_field(size_t n, const FieldSpec& spec) { return "n=" + std::to_string(n) + " field=" + spec.to_string(); }

HardnessReport dispatch(const ClaimJob& job, std::mt19937_64& rng) {
    Params p{job};
    const std::string& c = job.claim;

    if (c == "degree-bound" || c == "sparsity-bound" || c == "eval-dim-xy") {
        const size_t n = p.num("n");
        const FieldSpec spec = p.field("rational");
        const FieldElement beta = p.beta(spec, static_cast<int64_t>(n) + 1);
        if (c == "degree-bound") return check_degree_bound(n, beta);
        if (c == "sparsity-bound") return check_sparsity_bound(n, beta);
        return check_eval_dim_xy(n, beta);
    }
    if (c == "any-partition") {
        const size_t n = p.num("n");
        const FieldSpec spec = p.field("rational");
        const FieldElement beta = p.beta(spec, static_cast<int64_t>(n) + 1);
        if (p.has("partition")) return check_any_partition(n, beta, PartitionSpec::parse(p.str("partition", ""), VarLayout::xs(2 * n)));
        // Weakest of all balanced partitions.
        std::optional<HardnessReport> worst;
        double total = 0;
        size_t count = 0;
        for (const auto& part : balanced_partitions(2 * n)) {
            HardnessReport r = check_any_partition(n, beta, part);
            total += r.millis;
            ++count;
            if (!worst || r.measured < worst->measured) worst = std::move(r);
        }
        worst->params = "n=" + std::to_string(n) + " beta=" + beta.to_string() + " field=" + spec.to_string() + " partition=all";
        worst->note = std::to_string(count) + " partitions";
        worst->millis = total;
        return *worst;
    }
    if (c == "multiple-sps" || c == "multiple-sps-t" || c == "multiple-sparse") {
        const size_t n = p.num("n");
        const FieldSpec spec = p.field("rational");
        const SparsePoly g = random_multilinear(spec, n, 3, rng);
        if (c == "multiple-sps") {
            SparsePoly h = g * product_of_vars(spec, n);
            auto r = make_report(c, n_field(n, spec), certify_multiple_sps(h), uint64_t{1} << n, Relation::AtLeast);
            r.evidence = h;
            return r;
        }
        if (c == "multiple-sps-t") {
            const uint32_t t = static_cast<uint32_t>(p.num("t", 2));
            const double cc = p.real("c", 1.0);
            SparsePoly h = g * product_of_vars(spec, n);
            const uint64_t claimed = uint64_t{1} << static_cast<uint64_t>(std::floor(n / (cc * t)));
            auto r = make_report(c, n_field(n, spec) + " t=" + std::to_string(t) + " c=" + p.str("c", "1"),
                                 certify_multiple_sps_t(h, t, {}, cc), claimed, Relation::AtLeast);
            r.evidence = h;
            r.note = "bound constant c is configured, not derived";
            return r;
        }
        SparsePoly h = g;
        std::vector<FieldElement> alpha;
        for (size_t i = 0; i < n; ++i) {
            h = h * (SparsePoly::variable(spec, n, i) + SparsePoly::constant(spec, n, 1));
            alpha.push_back(FieldElement::from_int(spec, -1));
        }
        auto r = make_report(c, n_field(n, spec), certify_multiple_sparse(h, alpha), uint64_t{1} << n, Relation::AtLeast);
        r.evidence = h;
        r.note = "actual sparsity " + std::to_string(h.sparsity());
        return r;
    }
    if (c == "multiple-roabp") {
        const size_t n = p.num("n");
        const FieldSpec spec = p.field("rational");
        const size_t m = 2 * n;
        SparsePoly h = random_multilinear(spec, m, 2, rng);
        PartitionSpec part;
        for (size_t i = 0; i < n; ++i) {
            h = h * (SparsePoly::variable(spec, m, i) + SparsePoly::variable(spec, m, n + i) + SparsePoly::constant(spec, m, 1));
            part.u.push_back(i);
            part.v.push_back(n + i);
        }
        auto r = make_report(c, n_field(n, spec), certify_multiple_roabp(h, part), uint64_t{1} << n, Relation::AtLeast);
        r.evidence = h;
        return r;
    }
    if (c == "every-partition-roabp") {
        const size_t n = p.num("n");
        const FieldSpec spec = p.field("rational");
        const std::vector<FieldElement> alpha(n * (n - 1) / 2, FieldElement::from_int(spec, -1));
        auto r = certify_every_partition_roabp(pairwise_product(n, alpha), FieldElement::from_int(spec, static_cast<int64_t>(p.num("w", 2))));
        return r;
    }
    if (c == "min-multiple-sparsity") {
        const size_t n = p.num("n", 2);
        const FieldSpec spec = p.field("p=3");
        SparsePoly f = random_multilinear(spec, n, 1 + rng() % (size_t{1} << n), rng);
        MinMultiple mm = min_multiple_sparsity_bruteforce(f);
        auto r = make_report(c, n_field(n, spec), mm.sparsity, f.sparsity(), Relation::AtLeast);
        r.evidence = mm.multiplier * f;
        r.note = "f = " + to_string(f, VarLayout::xs(n));
        return r;
    }
    if (c == "svb-determinant") {
        const size_t n = p.num("n");
        const size_t ell = p.num("ell", n - 1);
        const FieldSpec spec = p.field("p=10007");
        const uint64_t trials = p.num("trials", n <= 3 ? 0 : 200);
        SvbGenerator gen = svb_build(n, ell, spec);
        SvbCheck chk = svb_check(determinant_poly(n, spec), gen, trials, rng());
        auto r = make_report(c, n_field(n, spec) + " ell=" + std::to_string(ell) + " trials=" + std::to_string(trials),
                             chk.vanishes ? 1 : 0, 1, Relation::Equal);
        if (chk.probabilistic && chk.vanishes) {
            r.probabilistic = true;
            r.error_bound = fraction(chk.bound_num, chk.bound_den) + " per trial";
        }
        if (!chk.vanishes) r.counterexample = Counterexample{"det_n o G is nonzero at the seed point", determinant_poly(n, spec), chk.witness_seed};
        r.note = chk.vanishes ? "det_n o G vanishes" : "det_n o G survives";
        return r;
    }
    if (c == "svb-sparse-survives") {
        const size_t n = p.num("n", 3);
        const size_t ell = p.num("ell", 2);
        const FieldSpec spec = p.field("p=10007");
        const size_t terms = p.num("terms", uint64_t{1} << ell);
        SvbGenerator gen = svb_build(n, ell, spec);
        // Random monomials of degree <= 3 in the n^2 matrix entries.
        std::vector<Term> ts;
        for (size_t k = 0; k < terms; ++k) {
            Monomial m(n * n);
            for (int d = 0; d < 3; ++d)
                if (rng() % 4) m.at(rng() % (n * n)) += 1;
            ts.push_back(Term{std::move(m), random_nonzero(spec, rng)});
        }
        SparsePoly f = SparsePoly::from_terms(spec, n * n, std::move(ts));
        if (f.is_zero()) f = SparsePoly::constant(spec, n * n, 1);
        SvbCheck chk = svb_check(f, gen, 20, rng());
        if (chk.vanishes && n <= 3) chk = svb_check(f, gen, 0);
        auto r = make_report(c, n_field(n, spec) + " ell=" + std::to_string(ell) + " terms=" + std::to_string(f.sparsity()),
                             chk.vanishes ? 0 : 1, 1, Relation::Equal);
        if (chk.vanishes && !chk.probabilistic) r.evidence = f;
        r.note = "f = " + to_string(f, VarLayout::xs(n * n));
        return r;
    }
    if (c == "extract-multiple") {
        const size_t n = p.num("n", 2);
        const FieldSpec spec = p.field("rational");
        AxiomSystem sys;
        sys.spec = spec;
        sys.nvars = n;
        SparsePoly sum = SparsePoly::constant(spec, n, -static_cast<int64_t>(n));
        for (size_t i = 0; i < n; ++i) sum += SparsePoly::variable(spec, n, i);
        sys.axioms = {product_of_vars(spec, n), sum};
        auto cert = find_multilinear_lin_refutation(sys);
        if (!cert) throw DomainError("no multilinear linear refutation found to extract from");
        ExtractedMultiple ex = extract_multiple_from_ips(*cert, 0, std::vector<FieldElement>(n, FieldElement::one(spec)));
        auto r = make_report(c, n_field(n, spec), certify_multiple_sps(ex.multiple), uint64_t{1} << n, Relation::AtLeast);
        r.evidence = ex.multiple;
        if (!ex.divisible()) {
            r.failed_check = true;
            r.counterexample = Counterexample{"extracted polynomial is not a multiple of f", ex.remainder, {}};
        }
        return r;
    }
    if (c == "roabp-refutation" || c == "mlf-refutation") {
        const size_t n = p.num("n");
        const FieldSpec spec = p.field(c == "roabp-refutation" ? "p=10007" : "rational");
        const FieldElement beta = p.beta(spec, static_cast<int64_t>(n) + 1);
        std::vector<FieldElement> alpha(n, FieldElement::one(spec));
        const std::string params = n_field(n, spec) + " beta=" + beta.to_string();
        IpsCertificate cert;
        HardnessReport r;
        if (c == "roabp-refutation") {
            cert = build_roabp_refutation(alpha, beta).cert;
            const uint64_t bound = static_cast<uint64_t>(std::floor(kRoabpWidthConstant * (n + 2) * (n + 2)));
            r = make_report(c, params, std::get<Roabp>(cert.proof).width(), bound, Relation::AtMost);
            r.note = "width bound c*(n+2)^2 with c = 3.5";
        } else {
            cert = build_mlformula_refutation(alpha, beta);
            r = make_report(c, params, nominal_size(cert.proof), nominal_size(cert.proof), Relation::Equal);
            r.note = "measured is the formula size";
        }
        VerifyResult v = verify_exact(cert);
        r.evidence = expand(cert.proof);
        if (!v.valid()) {
            r.failed_check = true;
            r.counterexample = Counterexample{"certificate " + to_string(v.status) + ": " + v.detail, r.evidence, v.witness.value_or(std::vector<FieldElement>{})};
        }
        return r;
    }
    throw DomainError("unknown claim id '" + c + "'");
}

}  // namespace

HardnessReport run_claim(const ClaimJob& job, uint64_t seed) {
    auto t0 = Clock::now();
    std::mt19937_64 rng(job.params.count("seed") ? std::stoull(job.params.at("seed")) : seed);
    HardnessReport r;
    try {
        r = dispatch(job, rng);
    } catch (const Error& e) {
        r = HardnessReport{};
        r.claim = job.claim;
        for (const auto& [k, v] : job.params) r.params += (r.params.empty() ? "" : " ") + k + "=" + v;
        r.verdict = Verdict::Inconclusive;
        r.note = std::string("error: ") + e.what();
        r.millis = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        return r;
    }
    if (job.claimed) {
        r.claimed = *job.claimed;
        r.params += " claimed=" + std::to_string(*job.claimed);
    }
    r.decide();
    if (r.millis == 0) r.millis = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    return r;
}

ExperimentResult run_experiment(const std::vector<ClaimJob>& jobs, uint64_t seed, size_t parallelism) {
    ExperimentResult out;
    std::vector<size_t> runnable;
    for (size_t i = 0; i < jobs.size(); ++i) {
        if (is_known_claim(jobs[i].claim)) runnable.push_back(i);
        else out.warnings.push_back("line " + std::to_string(jobs[i].line) + ": unknown claim id '" + jobs[i].claim + "', skipped");
    }
    std::vector<HardnessReport> reports(runnable.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t k; (k = next.fetch_add(1)) < runnable.size();) {
            const size_t i = runnable[k];
            reports[k] = run_claim(jobs[i], splitmix64(seed ^ i));
        }
    };
    const size_t threads = std::max<size_t>(1, std::min(parallelism, runnable.size()));
    std::vector<std::thread> pool;
    for (size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& r : reports) out.any_refuted |= r.verdict == Verdict::Refuted;
    out.reports = std::move(reports);
    return out;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

}  // namespace

std::string csv_header() { return "claim,params,measured,claimed,verdict,millis"; }

std::string csv_row(const HardnessReport& r, bool deterministic) {
    std::ostringstream ms;
    ms.setf(std::ios::fixed);
    ms.precision(3);
    ms << (deterministic ? 0.0 : r.millis);
    const bool errored = r.note.rfind("error: ", 0) == 0;
    const std::string measured = errored ? "" : std::to_string(r.measured);
    return csv_field(r.claim) + "," + csv_field(r.params) + "," + measured + "," + csv_field(to_string(r.relation) + std::to_string(r.claimed)) +
           "," + csv_field(r.verdict_label()) + "," + ms.str();
}

}  // namespace ipsw
