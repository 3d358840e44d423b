#include <chrono>
#include <map>
#include <random>

#include "ipsw/ips.hpp"

namespace ipsw {

std::string to_string(Linearity l) {
    switch (l) {
        case Linearity::General: return "general";
        case Linearity::LinYZ: return "lin_yz";
        case Linearity::LinY: return "lin_y";
    }
    return "general";
}

Linearity parse_linearity(std::string_view text) {
    if (text == "general") return Linearity::General;
    if (text == "lin_yz") return Linearity::LinYZ;
    if (text == "lin_y") return Linearity::LinY;
    throw ParseError("unknown linearity tag '" + std::string(text) + "'");
}

std::string to_string(VerifyStatus s) {
    switch (s) {
        case VerifyStatus::Valid: return "valid";
        case VerifyStatus::FailsZero: return "fails-zero";
        case VerifyStatus::FailsOne: return "fails-one";
        case VerifyStatus::FailsLinearity: return "fails-linearity";
    }
    return "valid";
}

void AxiomSystem::validate() const {
    for (size_t j = 0; j < axioms.size(); ++j) {
        const auto& f = axioms[j];
        if (!(f.spec() == spec)) throw DomainError("axiom " + std::to_string(j + 1) + " is over a different field");
        for (size_t v : f.support_vars())
            if (v >= nvars) throw DomainError("axiom " + std::to_string(j + 1) + " uses a variable beyond x" + std::to_string(nvars));
    }
}

std::vector<SparsePoly> AxiomSystem::placeholder_images() const {
    std::vector<SparsePoly> out;
    for (const auto& f : axioms) out.push_back(f.with_nvars(nvars));
    for (size_t i = 0; i < num_boolean(); ++i) {
        SparsePoly x = SparsePoly::variable(spec, nvars, i);
        out.push_back(x * x - x);
    }
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void check_arity(const IpsCertificate& cert) {
    cert.system.validate();
    const size_t total = cert.system.layout().total();
    if (circuit_nvars(cert.proof) != total)
        throw DomainError("proof has " + std::to_string(circuit_nvars(cert.proof)) + " variables, the system needs " + std::to_string(total));
    if (!(circuit_spec(cert.proof) == cert.system.spec)) throw DomainError("proof and axioms are over different fields");
}

void fill_stats(VerifyResult& r, const IpsCertificate& cert) {
    r.size = nominal_size(cert.proof);
    if (auto a = std::get_if<Roabp>(&cert.proof)) r.width = a->width();
}

// Sampling set: all of F_p, or the integers 0..2D over Q.
struct Sampler {
    FieldSpec spec;
    uint64_t size;
    std::mt19937_64 rng;

    FieldElement draw() {
        std::uniform_int_distribution<uint64_t> d(0, size - 1);
        uint64_t v = d(rng);
        return spec.is_prime() ? FieldElement::from_residue(spec, v) : FieldElement::from_int(spec, static_cast<int64_t>(v));
    }
};

std::optional<std::vector<FieldElement>> find_witness(const SparsePoly& r, size_t nx) {
    if (r.is_zero()) return std::nullopt;
    const FieldSpec& spec = r.spec();
    uint64_t deg = r.degree();
    uint64_t size = spec.is_prime() ? spec.modulus() : 2 * deg + 2;
    Sampler s{spec, size, std::mt19937_64(0x5eed)};
    for (int attempt = 0; attempt < 256; ++attempt) {
        std::vector<FieldElement> pt;
        for (size_t i = 0; i < nx; ++i) pt.push_back(s.draw());
        std::vector<FieldElement> full(pt);
        full.resize(r.nvars(), FieldElement::zero(spec));
        if (!r.evaluate(full).is_zero()) return pt;
    }
    return std::nullopt;
}

}  // namespace

VerifyResult verify_exact(const IpsCertificate& cert, uint64_t budget) {
    auto t0 = Clock::now();
    check_arity(cert);
    const AxiomSystem& sys = cert.system;
    const size_t nx = sys.nvars, m = sys.num_axioms(), total = sys.layout().total();
    VerifyResult res;
    fill_stats(res, cert);
    SparsePoly p = expand(cert.proof, budget);
    res.degree = p.degree();

    if (cert.linearity != Linearity::General) {
        const size_t last = cert.linearity == Linearity::LinY ? nx + m : total;
        for (size_t v = nx; v < last; ++v) {
            if (p.degree_in(v) > 1) {
                res.status = VerifyStatus::FailsLinearity;
                res.detail = sys.layout().name(v) + " has degree " + std::to_string(p.degree_in(v)) + " but the certificate is tagged " + to_string(cert.linearity);
                res.millis = elapsed_ms(t0);
                return res;
            }
        }
    }

    std::map<size_t, FieldElement> zeros;
    for (size_t v = nx; v < total; ++v) zeros.emplace(v, FieldElement::zero(sys.spec));
    SparsePoly r0 = p.partial_evaluate(zeros).with_nvars(nx);
    if (!r0.is_zero()) {
        res.status = VerifyStatus::FailsZero;
        res.witness = find_witness(r0, nx);
        res.detail = "C(x,0,0) = " + to_string(r0, VarLayout::xs(nx));
        res.millis = elapsed_ms(t0);
        return res;
    }

    std::vector<SparsePoly> images;
    for (size_t i = 0; i < nx; ++i) images.push_back(SparsePoly::variable(sys.spec, nx, i));
    for (auto& im : sys.placeholder_images()) images.push_back(std::move(im));
    SparsePoly r1;
    {
        ExpansionBudget scope(budget);
        r1 = p.substitute(images) - SparsePoly::constant(FieldElement::one(sys.spec), nx);
    }
    if (!r1.is_zero()) {
        res.status = VerifyStatus::FailsOne;
        res.witness = find_witness(r1, nx);
        res.detail = "C(x,f,x^2-x) - 1 has " + std::to_string(r1.sparsity()) + " terms";
        res.millis = elapsed_ms(t0);
        return res;
    }
    res.millis = elapsed_ms(t0);
    return res;
}

VerifyResult verify_pit(const IpsCertificate& cert, uint64_t trials, uint64_t seed) {
    auto t0 = Clock::now();
    check_arity(cert);
    const AxiomSystem& sys = cert.system;
    const size_t nx = sys.nvars, total = sys.layout().total();
    VerifyResult res;
    res.probabilistic = true;
    res.trials = trials;
    fill_stats(res, cert);

    std::vector<uint64_t> w1(total, 1), w0(total, 0);
    for (size_t i = 0; i < nx; ++i) w0[i] = 1;
    auto images = sys.placeholder_images();
    for (size_t k = 0; k < images.size(); ++k) w1[nx + k] = images[k].degree();
    const uint64_t deg = std::max(degree_bound(cert.proof, w1), degree_bound(cert.proof, w0));
    res.degree = deg;

    uint64_t set_size;
    if (sys.spec.is_prime()) {
        if (sys.spec.modulus() <= deg)
            throw DomainError("field too small for PIT: need p > " + std::to_string(deg) + " and no extension grid is configured");
        set_size = sys.spec.modulus();
    } else {
        set_size = 2 * deg + 1;
    }
    if (trials == 0) {
        res.bound_num = 1;
        res.bound_den = 1;
    } else {
        res.bound_num = deg;
        res.bound_den = set_size;
    }

    Sampler s{sys.spec, set_size, std::mt19937_64(seed)};
    const FieldElement zero = FieldElement::zero(sys.spec), one = FieldElement::one(sys.spec);
    for (uint64_t t = 0; t < trials; ++t) {
        std::vector<FieldElement> x;
        for (size_t i = 0; i < nx; ++i) x.push_back(s.draw());
        std::vector<FieldElement> pt(x);
        pt.resize(total, zero);
        if (!eval(cert.proof, pt).is_zero()) {
            res.status = VerifyStatus::FailsZero;
            res.witness = x;
            res.detail = "C(x,0,0) is nonzero at the witness point";
            break;
        }
        for (size_t k = 0; k < images.size(); ++k) pt[nx + k] = images[k].evaluate(x);
        if (eval(cert.proof, pt) != one) {
            res.status = VerifyStatus::FailsOne;
            res.witness = x;
            res.detail = "C(x,f,x^2-x) differs from 1 at the witness point";
            break;
        }
    }
    res.millis = elapsed_ms(t0);
    return res;
}

LinearizeResult ips_to_linear(const IpsCertificate& cert, const std::vector<CircuitDag>& axiom_circuits, DivisionRoute route) {
    VerifyResult v = verify_exact(cert);
    if (!v.valid()) throw DomainError("ips_to_linear needs a valid certificate; input " + to_string(v.status));
    const AxiomSystem& sys = cert.system;
    const FieldSpec& spec = sys.spec;
    const size_t nx = sys.nvars, total = sys.layout().total();
    if (!axiom_circuits.empty() && axiom_circuits.size() != sys.num_axioms())
        throw DomainError("need one axiom circuit per axiom");
    for (const auto& a : axiom_circuits)
        if (a.nvars() != nx) throw DomainError("axiom circuits must be over x_1..x_n");

    const CircuitDag c = to_dag(cert.proof);
    LinearizeResult out;
    CircuitDag f(spec, total);
    std::vector<size_t> image(total);
    for (size_t i = 0; i < nx; ++i) image[i] = f.input(i);
    for (size_t j = 0; j < sys.num_axioms(); ++j) {
        CircuitDag ax = axiom_circuits.empty() ? to_dag(sys.axioms[j].with_nvars(nx)) : axiom_circuits[j];
        image[nx + j] = f.append(ax, ax.output(), [&](size_t x) { return f.input(x); });
    }
    for (size_t i = 0; i < sys.num_boolean(); ++i) {
        size_t x = f.input(i);
        image[nx + sys.num_axioms() + i] = f.sub(f.mul(x, x), x);
    }

    std::vector<size_t> terms;
    for (size_t p = nx; p < total; ++p) {
        // C(x, 0..0, p, p_>) - C(x, 0..0, 0, p_>) is divisible by p.
        CircuitDag g(spec, total);
        const size_t zero = g.constant(0);
        auto copy = [&](bool keep) {
            return g.append(c, c.output(), [&](size_t v) {
                if (v >= nx && (v < p || (v == p && !keep))) return zero;
                return g.input(v);
            });
        };
        size_t hi = copy(true), lo = copy(false);
        g.set_output(g.sub(hi, lo));
        std::vector<uint64_t> unit(total, 0);
        unit[p] = 1;
        const uint64_t d = g.degree_bound(unit);
        if (d == 0) {
            out.routes.push_back("none");
            continue;
        }
        DivisionRoute r = route;
        if (r == DivisionRoute::Auto) r = (d <= 64 && spec.size_at_least(d + 1)) ? DivisionRoute::Formula : DivisionRoute::Circuit;
        CircuitDag q;
        size_t q_out;
        if (r == DivisionRoute::Formula) {
            q = divide_by_var_formula(g, p, 1, static_cast<uint32_t>(d));
            q_out = q.output();
            out.routes.push_back("formula");
        } else {
            q = divide_by_var_circuit(g, p, 1);
            q_out = q.outputs().at(1);
            out.routes.push_back("circuit");
        }
        size_t ci = f.append(q, q_out, [&](size_t v) { return image[v]; });
        terms.push_back(f.mul(ci, f.input(p)));
    }
    f.set_output(f.add(std::move(terms), {}));
    out.cert = IpsCertificate{sys, Circuit(std::move(f)), Linearity::LinYZ};
    return out;
}

std::optional<std::vector<FieldElement>> solve_linear_system(std::vector<std::vector<FieldElement>> a, std::vector<FieldElement> b) {
    const size_t rows = a.size();
    if (rows != b.size()) throw DomainError("right-hand side length does not match the matrix");
    if (rows == 0) return std::vector<FieldElement>{};
    const size_t cols = a[0].size();
    const FieldSpec spec = b[0].spec();
    std::vector<size_t> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        const FieldElement inv = a[r][c].inv();
        for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
        b[r] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            const FieldElement f = a[i][c];
            for (size_t j = c; j < cols; ++j)
                if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (size_t i = r; i < rows; ++i)
        if (!b[i].is_zero()) return std::nullopt;
    std::vector<FieldElement> x(cols, FieldElement::zero(spec));
    for (size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
    return x;
}

std::optional<IpsCertificate> find_multilinear_lin_refutation(const AxiomSystem& system) {
    system.validate();
    const size_t n = system.nvars;
    if (n > 12) throw ResourceError("multilinear refutation search limited to n <= 12");
    const FieldSpec& spec = system.spec;
    const size_t cube = size_t{1} << n;
    auto images = system.placeholder_images();
    const size_t blocks = images.size();
    // Unknown (k, mask) is the coefficient of x^mask in the multiplier of placeholder k.
    std::vector<std::vector<Term>> columns;
    for (size_t k = 0; k < blocks; ++k)
        for (size_t mask = 0; mask < cube; ++mask) {
            Monomial mono(n);
            for (size_t i = 0; i < n; ++i)
                if (mask >> i & 1) mono.at(i) = 1;
            columns.push_back(images[k].mul_monomial(mono).terms());
        }
    auto cmp = [](const Monomial& a, const Monomial& b) { return canonical_less(a, b); };
    std::map<Monomial, size_t, decltype(cmp)> row_of(cmp);
    row_of.emplace(Monomial(n), 0);
    for (const auto& col : columns)
        for (const auto& t : col) row_of.emplace(t.mono, 0);
    size_t idx = 0;
    for (auto& [mono, r] : row_of) r = idx++;
    std::vector<std::vector<FieldElement>> a(row_of.size(), std::vector<FieldElement>(columns.size(), FieldElement::zero(spec)));
    for (size_t c = 0; c < columns.size(); ++c)
        for (const auto& t : columns[c]) a[row_of.at(t.mono)][c] += t.coeff;
    std::vector<FieldElement> b(row_of.size(), FieldElement::zero(spec));
    b[row_of.at(Monomial(n))] = FieldElement::one(spec);
    auto sol = solve_linear_system(std::move(a), std::move(b));
    if (!sol) return std::nullopt;

    const size_t total = system.layout().total();
    SparsePoly proof(spec, total);
    for (size_t k = 0; k < blocks; ++k)
        for (size_t mask = 0; mask < cube; ++mask) {
            const FieldElement& coef = (*sol)[k * cube + mask];
            if (coef.is_zero()) continue;
            Monomial mono(total);
            for (size_t i = 0; i < n; ++i)
                if (mask >> i & 1) mono.at(i) = 1;
            mono.at(n + k) = 1;
            proof += SparsePoly::monomial(coef, std::move(mono));
        }
    return IpsCertificate{system, Circuit(to_dag(proof)), Linearity::LinYZ};
}

}  // namespace ipsw
