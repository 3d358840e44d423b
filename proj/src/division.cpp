#include <algorithm>
#include <optional>

#include "ipsw/circuit.hpp"

namespace ipsw {

CircuitDag divide_by_var_formula(const CircuitDag& c, size_t y, uint32_t a, uint32_t d) {
    const FieldSpec& spec = c.spec();
    if (y >= c.nvars()) throw DomainError("division variable out of range");
    if (a > d) throw DomainError("power a exceeds the degree bound d");
    if (!spec.size_at_least(uint64_t{d} + 1)) throw DomainError("field too small: interpolation needs |F| >= d+1 = " + std::to_string(d + 1));
    try {
        ExpansionBudget scope(kDefaultExpandBudget);
        SparsePoly f = c.expand();
        if (f.degree_in(y) > d) throw DomainError("degree in the division variable exceeds the bound d=" + std::to_string(d));
        for (const auto& t : f.terms())
            if (t.mono[y] < a) throw DomainError("input is not divisible by y^" + std::to_string(a));
    } catch (const ResourceError&) {
        // Too large to check at desk scale; the construction itself does not need the expansion.
    }
    std::vector<FieldElement> nodes;
    for (uint32_t m = 0; m <= d; ++m) nodes.push_back(FieldElement::from_int(spec, m));
    auto basis = lagrange_basis(nodes);

    CircuitDag g(spec, c.nvars());
    const size_t yn = g.input(y);
    std::vector<size_t> ypow{g.constant(1), yn};
    std::vector<size_t> terms;
    for (uint32_t m = 0; m <= d; ++m) {
        std::vector<size_t> ch;
        std::vector<FieldElement> w;
        for (uint32_t i = a; i <= d; ++i) {
            FieldElement coef = basis[m].coeff(i);
            if (coef.is_zero()) continue;
            while (ypow.size() <= i - a) ypow.push_back(g.mul(ypow.back(), yn));
            ch.push_back(ypow[i - a]);
            w.push_back(coef);
        }
        if (ch.empty()) continue;
        size_t q = g.add(std::move(ch), std::move(w));
        size_t point = g.constant(nodes[m]);
        size_t copy = g.append(c, c.output(), [&](size_t v) { return v == y ? point : g.input(v); });
        terms.push_back(g.mul(copy, q));
    }
    g.set_output(terms.empty() ? g.constant(0) : g.add(std::move(terms), {}));
    return g;
}

namespace {

// Value of a split gate: zero, a field constant, or coef * (node of the output circuit).
struct Slot {
    enum class Kind { Zero, Const, Handle };
    Kind kind = Kind::Zero;
    FieldElement coef;
    size_t node = 0;

    static Slot zero() { return {}; }
    static Slot constant(const FieldElement& c) { return c.is_zero() ? Slot{} : Slot{Kind::Const, c, 0}; }
    static Slot handle(size_t node, const FieldElement& c) { return c.is_zero() ? Slot{} : Slot{Kind::Handle, c, node}; }
    bool is_zero() const { return kind == Kind::Zero; }
};

class Splitter {
public:
    Splitter(const CircuitDag& c, size_t y, uint32_t a) : c_(c), y_(y), a_(a), g_(c.spec(), c.nvars()), orig_(c.nodes().size()) {}

    CircuitDag run() {
        const auto& nodes = c_.nodes();
        const size_t root = c_.output();
        std::vector<char> need(nodes.size(), 0);
        need[root] = 1;
        for (size_t i = nodes.size(); i-- > 0;)
            if (need[i])
                for (size_t ch : nodes[i].children) need[ch] = 1;
        std::vector<std::vector<Slot>> s(nodes.size());
        for (size_t i = 0; i <= root; ++i) {
            if (!need[i]) continue;
            s[i] = split(i, s);
        }
        std::vector<size_t> outs;
        for (const Slot& x : s[root]) outs.push_back(materialize(x));
        g_.set_outputs(std::move(outs));
        return std::move(g_);
    }

private:
    FieldElement one() const { return FieldElement::one(c_.spec()); }

    size_t materialize(const Slot& x) {
        switch (x.kind) {
            case Slot::Kind::Zero: return g_.constant(0);
            case Slot::Kind::Const: return g_.constant(x.coef);
            case Slot::Kind::Handle: return x.coef.is_one() ? x.node : g_.scale(x.coef, x.node);
        }
        return 0;
    }

    Slot sum(const std::vector<std::pair<Slot, FieldElement>>& parts) {
        FieldElement k = FieldElement::zero(c_.spec());
        std::vector<size_t> ch;
        std::vector<FieldElement> w;
        for (const auto& [x, wt] : parts) {
            if (x.is_zero() || wt.is_zero()) continue;
            if (x.kind == Slot::Kind::Const) {
                k += x.coef * wt;
                continue;
            }
            auto it = std::find(ch.begin(), ch.end(), x.node);
            if (it != ch.end()) {
                w[it - ch.begin()] += x.coef * wt;
            } else {
                ch.push_back(x.node);
                w.push_back(x.coef * wt);
            }
        }
        for (size_t i = ch.size(); i-- > 0;)
            if (w[i].is_zero()) {
                ch.erase(ch.begin() + i);
                w.erase(w.begin() + i);
            }
        if (ch.empty()) return Slot::constant(k);
        if (ch.size() == 1 && k.is_zero()) return Slot::handle(ch[0], w[0]);
        if (!k.is_zero()) {
            ch.push_back(g_.constant(k));
            w.push_back(one());
        }
        return Slot::handle(g_.add(std::move(ch), std::move(w)), one());
    }

    Slot product(const Slot& u, const Slot& v) {
        if (u.is_zero() || v.is_zero()) return Slot::zero();
        if (u.kind == Slot::Kind::Const && v.kind == Slot::Kind::Const) return Slot::constant(u.coef * v.coef);
        if (u.kind == Slot::Kind::Const) return Slot::handle(v.node, u.coef * v.coef);
        if (v.kind == Slot::Kind::Const) return Slot::handle(u.node, u.coef * v.coef);
        return Slot::handle(g_.mul(u.node, v.node), u.coef * v.coef);
    }

    Slot ypow(size_t k) {
        if (k == 0) return Slot::constant(one());
        if (ypow_.empty()) ypow_.push_back(g_.input(y_));
        while (ypow_.size() < k) ypow_.push_back(g_.mul(ypow_.back(), ypow_[0]));
        return Slot::handle(ypow_[k - 1], one());
    }

    // Copy of the original gate, built on first use.
    Slot original(size_t node) {
        if (!orig_[node]) orig_[node] = g_.append(c_, node, [&](size_t v) { return g_.input(v); });
        return Slot::handle(*orig_[node], one());
    }

    std::vector<Slot> split(size_t i, const std::vector<std::vector<Slot>>& s) {
        const DagNode& n = c_.nodes()[i];
        std::vector<Slot> out(a_ + 1);
        switch (n.kind) {
            case DagNode::Kind::Input:
                if (n.var == y_) {
                    out[std::min<uint32_t>(1, a_)] = a_ == 0 ? Slot::handle(g_.input(y_), one()) : Slot::constant(one());
                } else {
                    out[0] = Slot::handle(g_.input(n.var), one());
                }
                break;
            case DagNode::Kind::Const: out[0] = Slot::constant(n.value); break;
            case DagNode::Kind::Add:
                for (uint32_t k = 0; k <= a_; ++k) {
                    std::vector<std::pair<Slot, FieldElement>> parts;
                    for (size_t j = 0; j < n.children.size(); ++j) parts.emplace_back(s[n.children[j]][k], n.weights[j]);
                    out[k] = sum(parts);
                }
                break;
            case DagNode::Kind::Mul: {
                const auto& u = s[n.children[0]];
                const auto& w = s[n.children[1]];
                if (a_ == 0) {
                    out[0] = product(u[0], w[0]);
                    break;
                }
                for (uint32_t k = 0; k < a_; ++k) {
                    std::vector<std::pair<Slot, FieldElement>> parts;
                    for (uint32_t l = 0; l <= k; ++l) parts.emplace_back(product(u[l], w[k - l]), one());
                    out[k] = sum(parts);
                }
                // tail = u_a f_w + sum_{k<a} u_k w_a y^k + sum_m y^m sum_{k+l=m+a; k,l<a} u_k w_l,
                // or the mirror image with the roles of u and w swapped when that avoids copying a gate.
                bool mirror = u[a_].is_zero() ? false : w[a_].is_zero() ? true : (orig_[n.children[0]] && !orig_[n.children[1]]);
                const auto& p = mirror ? w : u;
                const auto& q = mirror ? u : w;
                const size_t q_node = n.children[mirror ? 0 : 1];
                std::vector<std::pair<Slot, FieldElement>> parts;
                if (!p[a_].is_zero()) parts.emplace_back(product(p[a_], original(q_node)), one());
                if (!q[a_].is_zero())
                    for (uint32_t k = 0; k < a_; ++k) parts.emplace_back(product(product(p[k], q[a_]), ypow(k)), one());
                for (uint32_t m = 0; m + 1 < a_; ++m) {
                    std::vector<std::pair<Slot, FieldElement>> inner;
                    for (uint32_t k = m + 1; k < a_; ++k) inner.emplace_back(product(p[k], q[m + a_ - k]), one());
                    parts.emplace_back(product(sum(inner), ypow(m)), one());
                }
                out[a_] = sum(parts);
                break;
            }
        }
        return out;
    }

    const CircuitDag& c_;
    size_t y_;
    uint32_t a_;
    CircuitDag g_;
    std::vector<std::optional<size_t>> orig_;
    std::vector<size_t> ypow_;
};

}  // namespace

CircuitDag divide_by_var_circuit(const CircuitDag& c, size_t y, uint32_t a) {
    if (y >= c.nvars()) throw DomainError("division variable out of range");
    return Splitter(c, y, a).run();
}

}  // namespace ipsw
