#include <sstream>

#include "ipsw/certificate.hpp"

namespace ipsw {

namespace {

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
    return b == std::string_view::npos ? std::string() : std::string(s.substr(b, e - b + 1));
}

std::pair<std::string, std::string> split_keyword(const std::string& line) {
    size_t sp = line.find_first_of(" \t");
    if (sp == std::string::npos) return {line, ""};
    return {line.substr(0, sp), trim(line.substr(sp + 1))};
}

}  // namespace

IpsCertificate parse_certificate(std::string_view text) {
    std::vector<std::string> lines;
    {
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) lines.push_back(line);
    }
    std::optional<FieldSpec> spec;
    std::optional<size_t> nvars;
    std::vector<std::string> axiom_text;
    std::optional<std::string> proof_text;
    bool boolean = true;
    Linearity lin = Linearity::General;
    bool roabp_proof = false;

    for (size_t i = 0; i < lines.size(); ++i) {
        const std::string line = trim(lines[i]);
        if (line.empty() || line[0] == '#') continue;
        auto [kw, rest] = split_keyword(line);
        if (kw == "FIELD") {
            if (rest == "rational") spec = FieldSpec::rational();
            else if (rest.rfind("prime ", 0) == 0) spec = FieldSpec::parse("p=" + trim(rest.substr(6)));
            else spec = FieldSpec::parse(rest);
        } else if (kw == "NVARS") {
            try {
                nvars = std::stoul(rest);
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(i + 1) + ": NVARS needs a non-negative integer");
            }
        } else if (kw == "AXIOM") {
            axiom_text.push_back(rest);
        } else if (kw == "BOOLEAN") {
            if (rest != "on" && rest != "off") throw ParseError("line " + std::to_string(i + 1) + ": BOOLEAN must be on or off");
            boolean = rest == "on";
        } else if (kw == "LINEARITY") {
            lin = parse_linearity(rest);
        } else if (kw == "PROOF") {
            if (proof_text) throw ParseError("line " + std::to_string(i + 1) + ": duplicate PROOF");
            if (rest.rfind("roabp", 0) == 0) {
                roabp_proof = true;
                std::string block = rest + "\n";
                bool closed = false;
                while (++i < lines.size()) {
                    block += lines[i] + "\n";
                    if (trim(lines[i]) == "end") {
                        closed = true;
                        break;
                    }
                }
                if (!closed) throw ParseError("roABP proof block has no 'end' line");
                proof_text = block;
            } else {
                proof_text = rest;
            }
        } else {
            throw ParseError("line " + std::to_string(i + 1) + ": unknown section '" + kw + "'");
        }
    }
    if (!spec) throw ParseError("certificate has no FIELD line");
    if (!nvars) throw ParseError("certificate has no NVARS line");
    if (!proof_text) throw ParseError("certificate has no PROOF line");

    AxiomSystem sys;
    sys.spec = *spec;
    sys.nvars = *nvars;
    sys.include_boolean = boolean;
    for (const auto& a : axiom_text) sys.axioms.push_back(parse_poly(a, sys.spec, VarLayout::xs(sys.nvars)).with_nvars(sys.nvars));
    const VarLayout layout = sys.layout();
    Circuit proof = roabp_proof ? Circuit(parse_roabp(*proof_text, sys.spec, layout))
                                : Circuit(parse_circuit(*proof_text, sys.spec, layout));
    return IpsCertificate{std::move(sys), std::move(proof), lin};
}

std::string write_certificate(const IpsCertificate& cert) {
    const AxiomSystem& sys = cert.system;
    const VarLayout layout = sys.layout();
    std::ostringstream out;
    if (sys.spec.is_prime()) out << "FIELD prime " << sys.spec.modulus() << "\n";
    else out << "FIELD rational\n";
    out << "NVARS " << sys.nvars << "\n";
    for (const auto& f : sys.axioms) out << "AXIOM " << to_string(f, VarLayout::xs(sys.nvars)) << "\n";
    out << "BOOLEAN " << (sys.include_boolean ? "on" : "off") << "\n";
    out << "LINEARITY " << to_string(cert.linearity) << "\n";
    if (auto a = std::get_if<Roabp>(&cert.proof)) {
        out << "PROOF " << roabp_to_text(*a, layout);
    } else if (auto f = std::get_if<MultilinearFormula>(&cert.proof)) {
        out << "PROOF " << formula_to_text(*f, layout) << "\n";
    } else {
        out << "PROOF " << circuit_to_text(to_dag(cert.proof), layout) << "\n";
    }
    return out.str();
}

std::string format_verify_result(const VerifyResult& r) {
    std::ostringstream out;
    if (r.valid()) {
        out << "VALID\n";
    } else {
        out << "INVALID " << to_string(r.status);
        if (r.witness) {
            out << " (";
            for (size_t i = 0; i < r.witness->size(); ++i) out << (i ? ", " : "") << "x" << i + 1 << "=" << (*r.witness)[i].to_string();
            out << ")";
        }
        out << "\n";
        if (!r.detail.empty()) out << "detail " << r.detail << "\n";
    }
    out << "size " << r.size << "\n";
    out << "width " << r.width << "\n";
    out << "degree " << r.degree << "\n";
    if (r.probabilistic) out << "trials " << r.trials << "\nerror_bound_per_trial " << r.bound_num << "/" << r.bound_den << "\n";
    out << "runtime_ms " << r.millis << "\n";
    return out.str();
}

}  // namespace ipsw
