#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "../tools/cli.hpp"
#include "ipsw/certificate.hpp"
#include "ipsw/experiment.hpp"
#include "ipsw/hardness.hpp"
#include "ipsw/ips.hpp"
#include "ipsw/measure.hpp"

namespace py = pybind11;
using namespace ipsw;

namespace {

// A polynomial together with the variable naming used to print it.
struct Poly {
    SparsePoly f;
    VarLayout layout;

    static Poly parse(const std::string& text, const std::string& field) {
        auto [f, layout] = parse_poly(text, FieldSpec::parse(field));
        return Poly{std::move(f), layout};
    }

    Poly combine(const Poly& o, SparsePoly g) const {
        VarLayout l{std::max(layout.nx, o.layout.nx), std::max(layout.ny, o.layout.ny), std::max(layout.nz, o.layout.nz)};
        if (l.ny != 0 || l.nz != 0) {
            if (layout.nx != o.layout.nx || layout.ny != o.layout.ny || layout.nz != o.layout.nz)
                throw DomainError("operands use different variable layouts");
        }
        return Poly{std::move(g), l};
    }
    std::pair<SparsePoly, SparsePoly> aligned(const Poly& o) const {
        const size_t n = std::max(f.nvars(), o.f.nvars());
        return {f.with_nvars(n), o.f.with_nvars(n)};
    }

    std::string str() const { return to_string(f, layout); }
};

std::vector<FieldElement> to_elements(const FieldSpec& spec, const std::vector<py::object>& xs) {
    std::vector<FieldElement> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(FieldElement::parse(spec, py::str(x).cast<std::string>()));
    return out;
}

std::vector<size_t> to_zero_based(const std::vector<size_t>& order) {
    std::vector<size_t> out;
    for (size_t k : order) {
        if (k == 0) throw DomainError("order lists 1-based variable indices");
        out.push_back(k - 1);
    }
    return out;
}

py::dict result_dict(const VerifyResult& r) {
    py::dict d;
    d["valid"] = r.valid();
    d["status"] = to_string(r.status);
    d["detail"] = r.detail;
    if (r.witness) {
        std::vector<std::string> w;
        for (const auto& v : *r.witness) w.push_back(v.to_string());
        d["witness"] = w;
    } else {
        d["witness"] = py::none();
    }
    d["probabilistic"] = r.probabilistic;
    d["trials"] = r.trials;
    d["error_bound"] = py::make_tuple(r.bound_num, r.bound_den);
    d["size"] = r.size;
    d["width"] = r.width;
    d["degree"] = r.degree;
    return d;
}

}  // namespace

PYBIND11_MODULE(_ipsw, m) {
    m.doc() = "Exact polynomial toolkit, IPS certificate checking and lower-bound experiments";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<SatisfiableError>(m, "SatisfiableError", base.ptr());

    py::class_<Poly>(m, "Poly")
        .def(py::init(&Poly::parse), py::arg("text"), py::arg("field") = "rational")
        .def_property_readonly("field", [](const Poly& p) { return p.f.spec().to_string(); })
        .def_property_readonly("nvars", [](const Poly& p) { return p.f.nvars(); })
        .def_property_readonly("sparsity", [](const Poly& p) { return p.f.sparsity(); })
        .def_property_readonly("degree", [](const Poly& p) { return p.f.degree(); })
        .def("is_zero", [](const Poly& p) { return p.f.is_zero(); })
        .def("is_multilinear", [](const Poly& p) { return p.f.is_multilinear(); })
        .def("multilinearize", [](const Poly& p) { return Poly{multilinearize(p.f), p.layout}; })
        .def("evaluate",
             [](const Poly& p, const std::vector<py::object>& point) {
                 auto pt = to_elements(p.f.spec(), point);
                 if (pt.size() != p.f.nvars()) throw DomainError("point has the wrong number of coordinates");
                 return p.f.evaluate(pt).to_string();
             })
        .def("__add__", [](const Poly& a, const Poly& b) { auto [x, y] = a.aligned(b); return a.combine(b, x + y); })
        .def("__sub__", [](const Poly& a, const Poly& b) { auto [x, y] = a.aligned(b); return a.combine(b, x - y); })
        .def("__mul__", [](const Poly& a, const Poly& b) { auto [x, y] = a.aligned(b); return a.combine(b, x * y); })
        .def("__neg__", [](const Poly& a) { return Poly{-a.f, a.layout}; })
        .def("__pow__", [](const Poly& a, uint64_t e) { return Poly{a.f.pow(e), a.layout}; })
        .def("__eq__", [](const Poly& a, const Poly& b) { auto [x, y] = a.aligned(b); return x == y; })
        .def("__str__", &Poly::str)
        .def("__repr__", [](const Poly& p) { return "Poly('" + p.str() + "')"; });

    m.def("coeff_dim", [](const Poly& p, const std::string& partition) {
        return coeff_dim(p.f, PartitionSpec::parse(partition, p.layout));
    }, py::arg("poly"), py::arg("partition"));
    m.def("eval_dim", [](const Poly& p, const std::string& partition, const std::vector<py::object>& grid) {
        return eval_dim(p.f, PartitionSpec::parse(partition, p.layout), to_elements(p.f.spec(), grid));
    }, py::arg("poly"), py::arg("partition"), py::arg("grid") = std::vector<py::object>{py::int_(0), py::int_(1)});
    m.def("leading_monomial", [](const Poly& p, const std::string& order) {
        return monomial_to_string(leading_monomial(p.f, MonomialOrder::parse(order)), p.layout);
    }, py::arg("poly"), py::arg("order") = "grlex");
    m.def("trailing_monomial", [](const Poly& p, const std::string& order) {
        return monomial_to_string(trailing_monomial(p.f, MonomialOrder::parse(order)), p.layout);
    }, py::arg("poly"), py::arg("order") = "grlex");
    m.def("leading_diagonal", [](const Poly& p, const std::string& partition, const std::string& order) {
        return Poly{leading_diagonal(p.f, PartitionSpec::parse(partition, p.layout), MonomialOrder::parse(order)), p.layout};
    }, py::arg("poly"), py::arg("partition"), py::arg("order") = "grlex");

    py::class_<IpsCertificate>(m, "Certificate")
        .def_static("parse", [](const std::string& text) { return parse_certificate(text); })
        .def("write", [](const IpsCertificate& c) { return write_certificate(c); })
        .def_property_readonly("kind", [](const IpsCertificate& c) { return kind_name(c.proof); })
        .def_property_readonly("linearity", [](const IpsCertificate& c) { return to_string(c.linearity); })
        .def("verify_exact", [](const IpsCertificate& c, uint64_t budget) { return result_dict(verify_exact(c, budget)); },
             py::arg("budget") = kDefaultExpandBudget)
        .def("verify_pit", [](const IpsCertificate& c, uint64_t trials, uint64_t seed) {
            return result_dict(verify_pit(c, trials, seed));
        }, py::arg("trials") = 20, py::arg("seed") = 0)
        .def("to_linear", [](const IpsCertificate& c) { return ips_to_linear(c).cert; });

    m.def("refute_roabp", [](const std::vector<py::object>& alpha, py::object beta, const std::string& field,
                             const std::vector<size_t>& order) {
        const FieldSpec spec = FieldSpec::parse(field);
        return build_roabp_refutation(to_elements(spec, alpha), to_elements(spec, {beta})[0], to_zero_based(order)).cert;
    }, py::arg("alpha"), py::arg("beta"), py::arg("field") = "rational", py::arg("order") = std::vector<size_t>{});
    m.def("refute_mlf", [](const std::vector<py::object>& alpha, py::object beta, const std::string& field) {
        const FieldSpec spec = FieldSpec::parse(field);
        return build_mlformula_refutation(to_elements(spec, alpha), to_elements(spec, {beta})[0]);
    }, py::arg("alpha"), py::arg("beta"), py::arg("field") = "rational");

    m.def("run_experiment", [](const std::string& manifest, uint64_t seed, size_t jobs, bool deterministic) {
        auto parsed = parse_manifest(manifest);
        ExperimentResult res;
        {
            py::gil_scoped_release release;
            res = run_experiment(parsed, seed, jobs);
        }
        std::string csv = csv_header() + "\n";
        for (const auto& r : res.reports) csv += csv_row(r, deterministic) + "\n";
        return py::make_tuple(csv, res.any_refuted, res.warnings);
    }, py::arg("manifest"), py::arg("seed") = 0, py::arg("jobs") = 1, py::arg("deterministic") = true);

    m.def("cli", [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"ipsw"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Runs the command-line interface and returns (exit_code, stdout, stderr).");
}
