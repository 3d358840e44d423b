#include <algorithm>
#include <numeric>
#include <set>

#include "ipsw/ips.hpp"

namespace ipsw {

std::vector<FieldElement> reachable_sums(const std::vector<FieldElement>& alpha) {
    if (alpha.empty()) throw DomainError("reachable_sums needs at least one coefficient");
    const FieldSpec& spec = alpha[0].spec();
    std::set<FieldElement> a{FieldElement::zero(spec)};
    for (const auto& x : alpha) {
        std::set<FieldElement> next = a;
        for (const auto& s : a) next.insert(s + x);
        a = std::move(next);
    }
    return {a.begin(), a.end()};
}

SparsePoly subset_sum_axiom(const std::vector<FieldElement>& alpha, const FieldElement& beta) {
    const size_t n = alpha.size();
    SparsePoly f = SparsePoly::constant(-beta, n);
    for (size_t i = 0; i < n; ++i) f += SparsePoly::variable(beta.spec(), n, i).scale(alpha[i]);
    return f;
}

namespace {

struct Quotient {
    std::vector<FieldElement> reachable;
    UniPoly p;
    UniPoly q;  // (p(t) - p(beta)) / (t - beta)
    FieldElement scale;
};

Quotient subset_sum_quotient(const std::vector<FieldElement>& alpha, const FieldElement& beta) {
    Quotient out;
    out.reachable = reachable_sums(alpha);
    const FieldSpec& spec = beta.spec();
    if (std::find(out.reachable.begin(), out.reachable.end(), beta) != out.reachable.end())
        throw SatisfiableError("beta = " + beta.to_string() + " is a subset sum of alpha; the system is satisfiable");
    out.p = UniPoly::constant(FieldElement::one(spec));
    for (const auto& a : out.reachable) out.p = out.p * UniPoly(spec, {-a, FieldElement::one(spec)});
    // Synthetic division: c_j = sum_{k>j} gamma_k beta^{k-1-j}.
    const int deg = out.p.degree();
    std::vector<FieldElement> c(deg, FieldElement::zero(spec));
    FieldElement acc = FieldElement::zero(spec);
    for (int j = deg - 1; j >= 0; --j) {
        acc = acc * beta + out.p.coeff(j + 1);
        c[j] = acc;
    }
    out.q = UniPoly(spec, std::move(c));
    out.scale = -out.p.eval(beta);
    return out;
}

PoweringFormula quotient_formula(const UniPoly& q, const std::vector<FieldElement>& alpha, const FieldElement& factor) {
    const FieldSpec& spec = factor.spec();
    PoweringFormula g(spec, alpha.size());
    for (int j = 0; j <= q.degree(); ++j) {
        if (q.coeff(j).is_zero()) continue;
        g.add_term(q.coeff(j) * factor, LinearForm{alpha, FieldElement::zero(spec)}, static_cast<uint32_t>(j));
    }
    return g;
}

}  // namespace

SubsetSumWitness subset_sum_witness(const std::vector<FieldElement>& alpha, const FieldElement& beta) {
    const size_t n = alpha.size();
    if (n > 24) throw ResourceError("subset_sum_witness interpolates over the cube; n <= 24");
    Quotient qt = subset_sum_quotient(alpha, beta);
    const FieldSpec& spec = beta.spec();
    SubsetSumWitness w;
    w.reachable = qt.reachable;
    w.p = qt.p;
    w.g = quotient_formula(qt.q, alpha, FieldElement::one(spec));
    w.scale = qt.scale;

    const FieldElement inv_scale = qt.scale.inv();
    std::vector<FieldElement> values(size_t{1} << n, FieldElement::zero(spec));
    for (size_t mask = 0; mask < values.size(); ++mask) {
        FieldElement t = FieldElement::zero(spec);
        for (size_t i = 0; i < n; ++i)
            if (mask >> i & 1) t += alpha[i];
        values[mask] = qt.q.eval(t) * inv_scale;
    }
    w.f_ml = interpolate_multilinear(values, n);

    SparsePoly check = multilinearize(w.f_ml * subset_sum_axiom(alpha, beta));
    if (check != SparsePoly::constant(FieldElement::one(spec), n))
        throw Error("subset_sum_witness postcondition failed: ml(f * (sum alpha x - beta)) != 1");
    return w;
}

// ---------------------------------------------------------------- roABP multilinearization

namespace {

UniPoly ml_entry(const UniPoly& u) {
    const FieldSpec& spec = u.spec();
    if (u.degree() <= 1) return u;
    FieldElement slope = FieldElement::zero(spec);
    for (int k = 1; k <= u.degree(); ++k) slope += u.coeff(k);
    return UniPoly(spec, {u.coeff(0), slope});
}

// (u - ml(u)) / (x^2 - x); the numerator vanishes at 0 and 1.
UniPoly quotient_entry(const UniPoly& u) {
    const FieldSpec& spec = u.spec();
    UniPoly d = u - ml_entry(u);
    if (d.is_zero()) return UniPoly(spec);
    // Drop the factor x, then divide by (x - 1) synthetically.
    std::vector<FieldElement> c(d.coeffs().begin() + 1, d.coeffs().end());
    const size_t m = c.size();
    std::vector<FieldElement> out(m - 1, FieldElement::zero(spec));
    FieldElement acc = FieldElement::zero(spec);
    for (size_t k = m - 1; k >= 1; --k) {
        acc += c[k];
        out[k - 1] = acc;
    }
    return UniPoly(spec, std::move(out));
}

UniMatrix map_entries(const UniMatrix& m, UniPoly (*fn)(const UniPoly&)) {
    UniMatrix out = m;
    for (auto& row : out)
        for (auto& e : row) e = fn(e);
    return out;
}

}  // namespace

RoabpMultilinearization multilinearize_roabp(const Roabp& a) {
    RoabpMultilinearization out;
    out.h.resize(a.nvars());
    if (a.length() == 0) {
        out.ml = a;
        return out;
    }
    const auto& layers = a.layers();
    std::vector<UniMatrix> ml_layers, q_layers;
    for (const auto& L : layers) {
        ml_layers.push_back(map_entries(L, ml_entry));
        q_layers.push_back(map_entries(L, quotient_entry));
    }
    out.ml = Roabp(a.spec(), a.nvars(), a.order(), ml_layers);
    // Telescoping: A_1..A_k - ml(A_1)..ml(A_k) = sum_j ml(A_<j) (A_j - ml A_j) A_>j.
    for (size_t j = 0; j < layers.size(); ++j) {
        std::vector<UniMatrix> hl;
        for (size_t i = 0; i < layers.size(); ++i) hl.push_back(i < j ? ml_layers[i] : i == j ? q_layers[i] : layers[i]);
        out.h[a.order()[j]] = Roabp(a.spec(), a.nvars(), a.order(), std::move(hl));
    }
    return out;
}

// ---------------------------------------------------------------- refutation builders

namespace {

std::vector<size_t> check_order(std::vector<size_t> order, size_t n) {
    if (order.empty()) {
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
    }
    std::vector<size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i)
        if (sorted.size() != n || sorted[i] != i) throw DomainError("order must be a permutation of the x indices");
    return order;
}

UniMatrix zero_block(const FieldSpec& spec, size_t rows, size_t cols) {
    return UniMatrix(rows, std::vector<UniPoly>(cols, UniPoly(spec)));
}

void place(UniMatrix& dst, size_t r0, size_t c0, const UniMatrix& src) {
    for (size_t r = 0; r < src.size(); ++r)
        for (size_t c = 0; c < src[r].size(); ++c) dst[r0 + r][c0 + c] = src[r][c];
}

void place_identity(UniMatrix& dst, size_t r0, size_t c0, size_t k, const UniPoly& entry) {
    for (size_t i = 0; i < k; ++i) dst[r0 + i][c0 + i] = entry;
}

AxiomSystem subset_sum_system(const std::vector<FieldElement>& alpha, const FieldElement& beta) {
    AxiomSystem sys;
    sys.spec = beta.spec();
    sys.nvars = alpha.size();
    sys.axioms = {subset_sum_axiom(alpha, beta)};
    sys.include_boolean = true;
    return sys;
}

}  // namespace

RefutationInfo build_roabp_refutation(const std::vector<FieldElement>& alpha, const FieldElement& beta,
                                      const std::vector<size_t>& order_in) {
    const size_t n = alpha.size();
    const FieldSpec& spec = beta.spec();
    const std::vector<size_t> order = check_order(order_in, n);
    Quotient qt = subset_sum_quotient(alpha, beta);

    // W = ml(g / scale) and R = W * f; R = ml(R) + sum_i h_i (x_i^2 - x_i) with ml(R) = 1.
    PoweringFormula g = quotient_formula(qt.q, alpha, qt.scale.inv());
    Roabp w = multilinearize_roabp(powering_to_roabp(g, order)).ml;
    PoweringFormula axiom(spec, n);
    axiom.add_term(FieldElement::one(spec), LinearForm{alpha, -beta}, 1);
    Roabp r = roabp_mul(w, powering_to_roabp(axiom, order));
    const size_t rw = w.width(), rr = r.width();
    const auto& rl = r.layers();
    const auto& wl = w.layers();

    // One ABP in order y, x_s1, z_s1, x_s2, z_s2, ... with state blocks (q | p | t | s):
    // q carries y * W, p the prefix ml(R_1..R_k), t the pending B_k term, s the sum of z_j h_j.
    const size_t total = 2 * n + 1, y = n;
    const UniPoly one = UniPoly::constant(FieldElement::one(spec));
    std::vector<size_t> cert_order{y};
    std::vector<UniMatrix> layers;
    {
        UniMatrix L = zero_block(spec, 1, rw + 2 * rr);
        L[0][0] = UniPoly::monomial(FieldElement::one(spec), 1);
        L[0][rw] = one;
        layers.push_back(std::move(L));
    }
    for (size_t k = 0; k < n; ++k) {
        const size_t x = order[k];
        UniMatrix X = zero_block(spec, rw + 2 * rr, rw + 3 * rr);
        place(X, 0, 0, wl[k]);
        place(X, rw, rw, map_entries(rl[k], ml_entry));
        place(X, rw, rw + rr, map_entries(rl[k], quotient_entry));
        place(X, rw + rr, rw + 2 * rr, rl[k]);
        layers.push_back(std::move(X));
        cert_order.push_back(x);

        UniMatrix Z = zero_block(spec, rw + 3 * rr, rw + 2 * rr);
        place_identity(Z, 0, 0, rw + rr, one);
        place_identity(Z, rw + rr, rw + rr, rr, UniPoly::monomial(FieldElement::one(spec), 1));
        place_identity(Z, rw + 2 * rr, rw + rr, rr, one);
        layers.push_back(std::move(Z));
        cert_order.push_back(n + 1 + x);
    }
    std::vector<FieldElement> start{FieldElement::one(spec)};
    std::vector<FieldElement> end(rw + 2 * rr, FieldElement::zero(spec));
    end[0] = FieldElement::one(spec);
    end[rw + rr] = -FieldElement::one(spec);

    RefutationInfo info;
    info.witness_width = rw;
    info.cert = IpsCertificate{subset_sum_system(alpha, beta),
                               Circuit(Roabp::from_abp(spec, total, std::move(cert_order), std::move(layers), start, end)),
                               Linearity::LinYZ};
    return info;
}

IpsCertificate build_mlformula_refutation(const std::vector<FieldElement>& alpha, const FieldElement& beta) {
    const size_t n = alpha.size();
    const FieldSpec& spec = beta.spec();
    Quotient qt = subset_sum_quotient(alpha, beta);
    const uint64_t d = qt.reachable.size();
    if (!spec.size_at_least((n * d + 1) * (d + 1)))
        throw DomainError("field too small: need |F| >= (nd+1)(d+1) = " + std::to_string((n * d + 1) * (d + 1)));

    // ml(g / scale) as sum_i coef_i prod_k l_{i,k}(x_k), each l affine.
    struct Product {
        FieldElement coef;
        std::vector<FieldElement> a, b;  // l_k(x) = a_k + b_k x
    };
    std::vector<Product> products;
    const FieldElement inv_scale = qt.scale.inv();
    const FieldElement one = FieldElement::one(spec);
    for (int j = 0; j <= qt.q.degree(); ++j) {
        const FieldElement cj = qt.q.coeff(j) * inv_scale;
        if (cj.is_zero()) continue;
        for (const auto& tuple : duality_decompose(n, static_cast<uint32_t>(j), spec)) {
            Product pr{cj, {}, {}};
            for (size_t k = 0; k < n; ++k) {
                // u(alpha_k x) restricted to the cube.
                const FieldElement u0 = tuple[k].eval(FieldElement::zero(spec)), u1 = tuple[k].eval(alpha[k]);
                pr.a.push_back(u0);
                pr.b.push_back(u1 - u0);
            }
            products.push_back(std::move(pr));
        }
    }

    const size_t y = n, total = 2 * n + 1;
    MultilinearFormula c(spec, total);
    std::vector<size_t> top;
    std::vector<FieldElement> top_w;
    // Factors l_k for k != skip; constant factors fold into the coefficient.
    auto emit = [&](const Product& pr, size_t skip, FieldElement coef, size_t placeholder) {
        std::vector<size_t> factors;
        for (size_t k = 0; k < n; ++k) {
            if (k == skip) continue;
            if (pr.b[k].is_zero()) {
                coef *= pr.a[k];
                continue;
            }
            if (pr.a[k].is_zero()) {
                coef *= pr.b[k];
                factors.push_back(c.var(k));
                continue;
            }
            factors.push_back(c.add({c.constant(pr.a[k]), c.var(k)}, {one, pr.b[k]}));
        }
        if (coef.is_zero()) return;
        factors.push_back(c.var(placeholder));
        top.push_back(c.mul(std::move(factors)));
        top_w.push_back(coef);
    };
    for (const auto& pr : products) {
        emit(pr, n, pr.coef, y);
        // l_j(x) x = l_j(1) x + b_j (x^2 - x), so h_j collects coef alpha_j b_j prod_{k != j} l_k.
        for (size_t j = 0; j < n; ++j) {
            if (pr.b[j].is_zero() || alpha[j].is_zero()) continue;
            emit(pr, j, -(pr.coef * alpha[j] * pr.b[j]), n + 1 + j);
        }
    }
    c.set_root(top.empty() ? c.constant(FieldElement::zero(spec)) : c.add(std::move(top), std::move(top_w)));
    return IpsCertificate{subset_sum_system(alpha, beta), Circuit(std::move(c)), Linearity::LinYZ};
}

SparsePoly appendix_inverse_poly(size_t n, const FieldElement& beta) {
    const FieldSpec& spec = beta.spec();
    if (spec.is_prime() && spec.characteristic() <= n)
        throw DomainError("appendix_inverse_poly needs characteristic 0 or > n");
    for (size_t j = 0; j <= n; ++j)
        if (beta == FieldElement::from_int(spec, static_cast<int64_t>(j)))
            throw DomainError("beta must avoid 0..n");
    SparsePoly f(spec, n);
    FieldElement fact = FieldElement::one(spec), denom = FieldElement::one(spec);
    for (size_t k = 0; k <= n; ++k) {
        if (k > 0) fact *= FieldElement::from_int(spec, static_cast<int64_t>(k));
        denom *= beta - FieldElement::from_int(spec, static_cast<int64_t>(k));
        f -= elementary_symmetric(n, k, spec).scale(fact / denom);
    }
    return f;
}

}  // namespace ipsw
