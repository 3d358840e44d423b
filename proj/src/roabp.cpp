#include <algorithm>
#include <set>

#include "ipsw/circuit.hpp"

namespace ipsw {

namespace {

using ConstMatrix = std::vector<std::vector<FieldElement>>;

UniMatrix zero_matrix(const FieldSpec& spec, size_t rows, size_t cols) {
    return UniMatrix(rows, std::vector<UniPoly>(cols, UniPoly(spec)));
}

ConstMatrix identity(const FieldSpec& spec, size_t w) {
    ConstMatrix m(w, std::vector<FieldElement>(w, FieldElement::zero(spec)));
    for (size_t i = 0; i < w; ++i) m[i][i] = FieldElement::one(spec);
    return m;
}

ConstMatrix evaluate(const UniMatrix& a, const FieldElement& x) {
    ConstMatrix m(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (const auto& e : a[i]) m[i].push_back(e.eval(x));
    return m;
}

ConstMatrix mul_const(const ConstMatrix& a, const ConstMatrix& b, const FieldSpec& spec) {
    ConstMatrix m(a.size(), std::vector<FieldElement>(b.empty() ? 0 : b[0].size(), FieldElement::zero(spec)));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t k = 0; k < b.size(); ++k) {
            if (a[i][k].is_zero()) continue;
            for (size_t j = 0; j < b[k].size(); ++j) m[i][j] += a[i][k] * b[k][j];
        }
    return m;
}

UniMatrix const_times(const ConstMatrix& c, const UniMatrix& a, const FieldSpec& spec) {
    UniMatrix m = zero_matrix(spec, c.size(), a.empty() ? 0 : a[0].size());
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t k = 0; k < a.size(); ++k) {
            if (c[i][k].is_zero()) continue;
            for (size_t j = 0; j < a[k].size(); ++j)
                if (!a[k][j].is_zero()) m[i][j] += a[k][j].scale(c[i][k]);
        }
    return m;
}

UniMatrix times_const(const UniMatrix& a, const ConstMatrix& c, const FieldSpec& spec) {
    UniMatrix m = zero_matrix(spec, a.size(), c.empty() ? 0 : c[0].size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t k = 0; k < a[i].size(); ++k) {
            if (a[i][k].is_zero()) continue;
            for (size_t j = 0; j < c[k].size(); ++j)
                if (!c[k][j].is_zero()) m[i][j] += a[i][k].scale(c[k][j]);
        }
    return m;
}

void check_compatible(const Roabp& a, const Roabp& b) {
    if (!(a.spec() == b.spec())) throw DomainError("field mismatch between roABPs");
    if (a.order() != b.order() || a.nvars() != b.nvars()) throw DomainError("roABPs use different variable orders");
}

}  // namespace

Roabp::Roabp(const FieldSpec& spec, size_t nvars, std::vector<size_t> order, std::vector<UniMatrix> layers)
    : spec_(spec), nvars_(nvars), order_(std::move(order)), layers_(std::move(layers)), constant_(FieldElement::one(spec)) {
    if (order_.size() != layers_.size()) throw DomainError("roABP needs one layer per variable in its order");
    std::vector<char> seen(nvars_, 0);
    for (size_t v : order_) {
        if (v >= nvars_ || seen[v]) throw DomainError("roABP order repeats a variable or is out of range");
        seen[v] = 1;
    }
    width_ = layers_.empty() ? 1 : layers_[0].size();
    if (width_ == 0) throw DomainError("roABP width must be positive");
    for (const auto& L : layers_) {
        if (L.size() != width_) throw DomainError("roABP layers must all be square of one width");
        for (const auto& row : L) {
            if (row.size() != width_) throw DomainError("roABP layers must all be square of one width");
            for (const auto& e : row)
                if (!(e.spec() == spec_)) throw DomainError("field mismatch in roABP entry");
        }
    }
}

Roabp Roabp::constant(const FieldElement& c, size_t nvars) {
    Roabp r(c.spec(), nvars, {}, {});
    r.constant_ = c;
    return r;
}

Roabp Roabp::from_abp(const FieldSpec& spec, size_t nvars, std::vector<size_t> order, std::vector<UniMatrix> layers,
                      const std::vector<FieldElement>& start, const std::vector<FieldElement>& end) {
    const size_t k = layers.size();
    if (k == 0) {
        if (start.size() != end.size()) throw DomainError("ABP start and end vectors disagree in length");
        FieldElement v = FieldElement::zero(spec);
        for (size_t i = 0; i < start.size(); ++i) v += start[i] * end[i];
        return constant(v, nvars);
    }
    if (layers[0].size() != start.size()) throw DomainError("ABP start vector does not match the first layer");
    for (size_t i = 0; i + 1 < k; ++i)
        for (const auto& row : layers[i])
            if (row.size() != layers[i + 1].size()) throw DomainError("ABP layer shapes do not chain");
    for (const auto& row : layers[k - 1])
        if (row.size() != end.size()) throw DomainError("ABP end vector does not match the last layer");

    ConstMatrix s(1, start);
    layers[0] = const_times(s, layers[0], spec);
    ConstMatrix e;
    for (const auto& x : end) e.push_back({x});
    layers[k - 1] = times_const(layers[k - 1], e, spec);

    size_t w = 1;
    for (const auto& L : layers) {
        w = std::max(w, L.size());
        for (const auto& row : L) w = std::max(w, row.size());
    }
    for (auto& L : layers) {
        for (auto& row : L) row.resize(w, UniPoly(spec));
        L.resize(w, std::vector<UniPoly>(w, UniPoly(spec)));
    }
    return Roabp(spec, nvars, std::move(order), std::move(layers));
}

uint32_t Roabp::entry_degree() const {
    int d = 0;
    for (const auto& L : layers_)
        for (const auto& row : L)
            for (const auto& e : row) d = std::max(d, e.degree());
    return static_cast<uint32_t>(d);
}

uint64_t Roabp::nominal_size() const {
    const uint64_t n = length();
    return n * width_ * std::max<uint64_t>(entry_degree(), 1) * n;
}

uint64_t Roabp::wires() const {
    uint64_t w = 0;
    for (const auto& L : layers_)
        for (const auto& row : L)
            for (const auto& e : row) w += !e.is_zero();
    return w;
}

FieldElement Roabp::eval(const std::vector<FieldElement>& point) const {
    if (point.size() < nvars_) throw DomainError("evaluation point too short");
    if (layers_.empty()) return constant_;
    std::vector<FieldElement> v(width_, FieldElement::zero(spec_));
    v[0] = FieldElement::one(spec_);
    for (size_t i = 0; i < layers_.size(); ++i) {
        const FieldElement& x = point[order_[i]];
        std::vector<FieldElement> nv(width_, FieldElement::zero(spec_));
        for (size_t k = 0; k < width_; ++k) {
            if (v[k].is_zero()) continue;
            for (size_t j = 0; j < width_; ++j) {
                const UniPoly& e = layers_[i][k][j];
                if (!e.is_zero()) nv[j] += v[k] * e.eval(x);
            }
        }
        v = std::move(nv);
    }
    return v[0];
}

SparsePoly Roabp::expand() const {
    if (layers_.empty()) return SparsePoly::constant(constant_, nvars_);
    std::vector<SparsePoly> v(width_, SparsePoly(spec_, nvars_));
    v[0] = SparsePoly::constant(FieldElement::one(spec_), nvars_);
    for (size_t i = 0; i < layers_.size(); ++i) {
        std::vector<SparsePoly> nv(width_, SparsePoly(spec_, nvars_));
        for (size_t k = 0; k < width_; ++k) {
            if (v[k].is_zero()) continue;
            for (size_t j = 0; j < width_; ++j) {
                const UniPoly& e = layers_[i][k][j];
                if (!e.is_zero()) nv[j] += v[k] * e.to_sparse(nvars_, order_[i]);
            }
        }
        v = std::move(nv);
    }
    return v[0];
}

Roabp roabp_add(const Roabp& a, const Roabp& b) {
    check_compatible(a, b);
    const FieldSpec& spec = a.spec();
    if (a.length() == 0) return Roabp::constant(a.constant_value() + b.constant_value(), a.nvars());
    const size_t ra = a.width(), rb = b.width(), w = ra + rb;
    std::vector<UniMatrix> layers;
    for (size_t i = 0; i < a.length(); ++i) {
        UniMatrix L = zero_matrix(spec, w, w);
        for (size_t r = 0; r < ra; ++r)
            for (size_t c = 0; c < ra; ++c) L[r][c] = a.layers()[i][r][c];
        for (size_t r = 0; r < rb; ++r)
            for (size_t c = 0; c < rb; ++c) L[ra + r][ra + c] = b.layers()[i][r][c];
        layers.push_back(std::move(L));
    }
    std::vector<FieldElement> ends(w, FieldElement::zero(spec));
    ends[0] = ends[ra] = FieldElement::one(spec);
    return Roabp::from_abp(spec, a.nvars(), a.order(), std::move(layers), ends, ends);
}

Roabp roabp_mul(const Roabp& a, const Roabp& b) {
    check_compatible(a, b);
    const FieldSpec& spec = a.spec();
    if (a.length() == 0) return Roabp::constant(a.constant_value() * b.constant_value(), a.nvars());
    const size_t ra = a.width(), rb = b.width(), w = ra * rb;
    std::vector<UniMatrix> layers;
    for (size_t i = 0; i < a.length(); ++i) {
        UniMatrix L = zero_matrix(spec, w, w);
        const auto& A = a.layers()[i];
        const auto& B = b.layers()[i];
        for (size_t i1 = 0; i1 < ra; ++i1)
            for (size_t j1 = 0; j1 < ra; ++j1) {
                if (A[i1][j1].is_zero()) continue;
                for (size_t i2 = 0; i2 < rb; ++i2)
                    for (size_t j2 = 0; j2 < rb; ++j2)
                        if (!B[i2][j2].is_zero()) L[i1 * rb + i2][j1 * rb + j2] = A[i1][j1] * B[i2][j2];
            }
        layers.push_back(std::move(L));
    }
    return Roabp(spec, a.nvars(), a.order(), std::move(layers));
}

Roabp roabp_scale(const Roabp& a, const FieldElement& c) {
    if (a.length() == 0) return Roabp::constant(a.constant_value() * c, a.nvars());
    std::vector<UniMatrix> layers = a.layers();
    for (auto& e : layers[0][0]) e = e.scale(c);
    return Roabp(a.spec(), a.nvars(), a.order(), std::move(layers));
}

Roabp roabp_partial_eval(const Roabp& a, const std::map<size_t, FieldElement>& assignment) {
    const FieldSpec& spec = a.spec();
    if (a.length() == 0) return a;
    const size_t w = a.width();
    std::vector<size_t> order;
    std::vector<UniMatrix> layers;
    ConstMatrix pending = identity(spec, w);
    bool have_pending = false;
    for (size_t i = 0; i < a.length(); ++i) {
        auto it = assignment.find(a.order()[i]);
        if (it != assignment.end()) {
            pending = mul_const(pending, evaluate(a.layers()[i], it->second), spec);
            have_pending = true;
            continue;
        }
        layers.push_back(have_pending ? const_times(pending, a.layers()[i], spec) : a.layers()[i]);
        order.push_back(a.order()[i]);
        pending = identity(spec, w);
        have_pending = false;
    }
    if (layers.empty()) return Roabp::constant(pending[0][0], a.nvars());
    if (have_pending) layers.back() = times_const(layers.back(), pending, spec);
    return Roabp(spec, a.nvars(), std::move(order), std::move(layers));
}

Roabp roabp_hadamard_substitute(const Roabp& a) {
    const FieldSpec& spec = a.spec();
    const size_t n = a.nvars(), r = a.width();
    if (a.length() == 0) return Roabp::constant(a.constant_value(), 2 * n);
    std::vector<size_t> order;
    std::vector<UniMatrix> layers;
    // A(xy) = P(x) Q(y): P has one column per (target column, occurring exponent), Q routes it back.
    for (size_t i = 0; i < a.length(); ++i) {
        const auto& A = a.layers()[i];
        const size_t z = a.order()[i];
        std::vector<std::pair<size_t, size_t>> cols;  // (target column, exponent)
        for (size_t c = 0; c < r; ++c) {
            std::set<size_t> ks;
            for (size_t row = 0; row < r; ++row)
                for (size_t k = 0; k < A[row][c].coeffs().size(); ++k)
                    if (!A[row][c].coeffs()[k].is_zero()) ks.insert(k);
            for (size_t k : ks) cols.emplace_back(c, k);
        }
        const size_t m = std::max<size_t>(cols.size(), 1);
        UniMatrix P = zero_matrix(spec, r, m), Q = zero_matrix(spec, m, r);
        for (size_t j = 0; j < cols.size(); ++j) {
            auto [c, k] = cols[j];
            for (size_t row = 0; row < r; ++row) {
                FieldElement coef = A[row][c].coeff(k);
                if (!coef.is_zero()) P[row][j] = UniPoly::monomial(coef, k);
            }
            Q[j][c] = UniPoly::monomial(FieldElement::one(spec), k);
        }
        layers.push_back(std::move(P));
        layers.push_back(std::move(Q));
        order.push_back(z);
        order.push_back(n + z);
    }
    std::vector<FieldElement> e1(r, FieldElement::zero(spec));
    e1[0] = FieldElement::one(spec);
    return Roabp::from_abp(spec, 2 * n, std::move(order), std::move(layers), e1, e1);
}

}  // namespace ipsw
