#include <algorithm>
#include <unordered_map>

#include "ipsw/circuit.hpp"

namespace ipsw {

size_t CircuitDag::output() const {
    if (outputs_.empty()) throw DomainError("circuit has no output");
    return outputs_[0];
}

size_t CircuitDag::push(DagNode n) {
    for (size_t c : n.children)
        if (c >= nodes_.size()) throw DomainError("child index does not precede its parent");
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
}

size_t CircuitDag::input(size_t var) {
    if (var >= nvars_) throw DomainError("input variable " + std::to_string(var) + " out of range");
    auto it = input_nodes_.find(var);
    if (it != input_nodes_.end()) return it->second;
    DagNode n;
    n.kind = DagNode::Kind::Input;
    n.var = var;
    size_t id = push(std::move(n));
    input_nodes_.emplace(var, id);
    return id;
}

size_t CircuitDag::constant(const FieldElement& c) {
    if (!(c.spec() == spec_)) throw DomainError("field mismatch in circuit constant");
    DagNode n;
    n.kind = DagNode::Kind::Const;
    n.value = c;
    return push(std::move(n));
}

size_t CircuitDag::add(std::vector<size_t> children, std::vector<FieldElement> weights) {
    if (weights.empty()) weights.assign(children.size(), FieldElement::one(spec_));
    if (weights.size() != children.size()) throw DomainError("add gate needs one weight per child");
    if (children.empty()) return constant(FieldElement::zero(spec_));
    DagNode n;
    n.kind = DagNode::Kind::Add;
    n.children = std::move(children);
    n.weights = std::move(weights);
    return push(std::move(n));
}

size_t CircuitDag::add(size_t a, size_t b) { return add({a, b}, {}); }

size_t CircuitDag::sub(size_t a, size_t b) {
    return add({a, b}, {FieldElement::one(spec_), -FieldElement::one(spec_)});
}

size_t CircuitDag::scale(const FieldElement& c, size_t a) { return add({a}, {c}); }

size_t CircuitDag::mul(size_t a, size_t b) {
    DagNode n;
    n.kind = DagNode::Kind::Mul;
    n.children = {a, b};
    return push(std::move(n));
}

size_t CircuitDag::product(const std::vector<size_t>& factors) {
    if (factors.empty()) return constant(1);
    size_t acc = factors[0];
    for (size_t i = 1; i < factors.size(); ++i) acc = mul(acc, factors[i]);
    return acc;
}

size_t CircuitDag::pow(size_t a, uint64_t k) {
    if (k == 0) return constant(1);
    std::optional<size_t> acc;
    size_t base = a;
    while (k) {
        if (k & 1) acc = acc ? mul(*acc, base) : base;
        k >>= 1;
        if (k) base = mul(base, base);
    }
    return *acc;
}

size_t CircuitDag::poly(const SparsePoly& f, const std::vector<size_t>& var_nodes) {
    if (f.is_zero()) return constant(0);
    std::vector<size_t> terms;
    std::vector<FieldElement> weights;
    std::map<std::pair<size_t, Exp>, size_t> powers;
    for (const auto& t : f.terms()) {
        std::vector<size_t> factors;
        for (size_t i = 0; i < t.mono.size(); ++i) {
            Exp e = t.mono[i];
            if (!e) continue;
            auto key = std::make_pair(i, e);
            auto it = powers.find(key);
            if (it == powers.end()) it = powers.emplace(key, pow(var_nodes.at(i), e)).first;
            factors.push_back(it->second);
        }
        terms.push_back(product(factors));
        weights.push_back(t.coeff);
    }
    return add(std::move(terms), std::move(weights));
}

size_t CircuitDag::poly(const SparsePoly& f) {
    std::vector<size_t> vars;
    for (size_t i = 0; i < f.nvars(); ++i) vars.push_back(f.degree_in(i) ? input(i) : 0);
    return poly(f, vars);
}

std::vector<size_t> CircuitDag::append(const CircuitDag& other, const std::vector<size_t>& roots,
                                       const std::function<size_t(size_t)>& input_map) {
    if (!(other.spec_ == spec_)) throw DomainError("field mismatch when composing circuits");
    std::vector<char> need(other.nodes_.size(), 0);
    for (size_t r : roots) need.at(r) = 1;
    for (size_t i = other.nodes_.size(); i-- > 0;)
        if (need[i])
            for (size_t c : other.nodes_[i].children) need[c] = 1;
    std::vector<size_t> map(other.nodes_.size(), 0);
    for (size_t i = 0; i < other.nodes_.size(); ++i) {
        if (!need[i]) continue;
        const DagNode& n = other.nodes_[i];
        switch (n.kind) {
            case DagNode::Kind::Input: map[i] = input_map(n.var); break;
            case DagNode::Kind::Const: map[i] = constant(n.value); break;
            case DagNode::Kind::Add: {
                std::vector<size_t> ch;
                for (size_t c : n.children) ch.push_back(map[c]);
                map[i] = add(std::move(ch), n.weights);
                break;
            }
            case DagNode::Kind::Mul: map[i] = mul(map[n.children[0]], map[n.children[1]]); break;
        }
    }
    std::vector<size_t> out;
    for (size_t r : roots) out.push_back(map[r]);
    return out;
}

size_t CircuitDag::append(const CircuitDag& other, size_t root, const std::function<size_t(size_t)>& input_map) {
    return append(other, std::vector<size_t>{root}, input_map)[0];
}

std::vector<char> CircuitDag::reachable() const {
    std::vector<char> r(nodes_.size(), 0);
    for (size_t o : outputs_) r.at(o) = 1;
    for (size_t i = nodes_.size(); i-- > 0;)
        if (r[i])
            for (size_t c : nodes_[i].children) r[c] = 1;
    return r;
}

uint64_t CircuitDag::wires() const {
    auto r = reachable();
    uint64_t w = 0;
    for (size_t i = 0; i < nodes_.size(); ++i)
        if (r[i]) w += nodes_[i].children.size();
    return w;
}

size_t CircuitDag::depth() const {
    std::vector<size_t> d(nodes_.size(), 0);
    for (size_t i = 0; i < nodes_.size(); ++i)
        for (size_t c : nodes_[i].children) d[i] = std::max(d[i], d[c] + 1);
    auto r = reachable();
    size_t best = 0;
    for (size_t i = 0; i < nodes_.size(); ++i)
        if (r[i]) best = std::max(best, d[i]);
    return best;
}

std::vector<FieldElement> CircuitDag::eval_outputs(const std::vector<FieldElement>& point) const {
    if (point.size() < nvars_) throw DomainError("evaluation point has " + std::to_string(point.size()) + " coordinates, need " + std::to_string(nvars_));
    auto r = reachable();
    std::vector<FieldElement> v(nodes_.size(), FieldElement::zero(spec_));
    for (size_t i = 0; i < nodes_.size(); ++i) {
        if (!r[i]) continue;
        const DagNode& n = nodes_[i];
        switch (n.kind) {
            case DagNode::Kind::Input: v[i] = point[n.var]; break;
            case DagNode::Kind::Const: v[i] = n.value; break;
            case DagNode::Kind::Add: {
                FieldElement acc = FieldElement::zero(spec_);
                for (size_t k = 0; k < n.children.size(); ++k) acc += n.weights[k] * v[n.children[k]];
                v[i] = acc;
                break;
            }
            case DagNode::Kind::Mul: v[i] = v[n.children[0]] * v[n.children[1]]; break;
        }
    }
    std::vector<FieldElement> out;
    for (size_t o : outputs_) out.push_back(v[o]);
    return out;
}

FieldElement CircuitDag::eval(const std::vector<FieldElement>& point) const {
    auto out = eval_outputs(point);
    if (out.empty()) throw DomainError("circuit has no output");
    return out[0];
}

std::vector<SparsePoly> CircuitDag::expand_outputs() const {
    auto r = reachable();
    // Free intermediate polynomials once their last consumer has been processed.
    std::vector<size_t> last_use(nodes_.size(), 0);
    for (size_t i = 0; i < nodes_.size(); ++i)
        for (size_t c : nodes_[i].children) last_use[c] = std::max(last_use[c], i);
    for (size_t o : outputs_) last_use[o] = nodes_.size();
    std::vector<SparsePoly> v(nodes_.size());
    for (size_t i = 0; i < nodes_.size(); ++i) {
        if (!r[i]) continue;
        const DagNode& n = nodes_[i];
        switch (n.kind) {
            case DagNode::Kind::Input: v[i] = SparsePoly::variable(spec_, nvars_, n.var); break;
            case DagNode::Kind::Const: v[i] = SparsePoly::constant(n.value, nvars_); break;
            case DagNode::Kind::Add: {
                SparsePoly acc(spec_, nvars_);
                for (size_t k = 0; k < n.children.size(); ++k) {
                    acc += v[n.children[k]].scale(n.weights[k]);
                    ExpansionBudget::charge(v[n.children[k]].sparsity());
                }
                v[i] = std::move(acc);
                break;
            }
            case DagNode::Kind::Mul: v[i] = v[n.children[0]] * v[n.children[1]]; break;
        }
        for (size_t c : n.children)
            if (last_use[c] == i) v[c] = SparsePoly();
    }
    std::vector<SparsePoly> out;
    for (size_t o : outputs_) out.push_back(v[o]);
    return out;
}

SparsePoly CircuitDag::expand() const {
    auto out = expand_outputs();
    if (out.empty()) throw DomainError("circuit has no output");
    return out[0];
}

uint64_t CircuitDag::degree_bound(const std::vector<uint64_t>& var_weights) const {
    auto r = reachable();
    std::vector<uint64_t> d(nodes_.size(), 0);
    for (size_t i = 0; i < nodes_.size(); ++i) {
        if (!r[i]) continue;
        const DagNode& n = nodes_[i];
        switch (n.kind) {
            case DagNode::Kind::Input: d[i] = n.var < var_weights.size() ? var_weights[n.var] : 1; break;
            case DagNode::Kind::Const: d[i] = 0; break;
            case DagNode::Kind::Add:
                for (size_t c : n.children) d[i] = std::max(d[i], d[c]);
                break;
            case DagNode::Kind::Mul: d[i] = d[n.children[0]] + d[n.children[1]]; break;
        }
    }
    uint64_t best = 0;
    for (size_t o : outputs_) best = std::max(best, d[o]);
    return best;
}

}  // namespace ipsw
