#include <algorithm>

#include "ipsw/circuit.hpp"

namespace ipsw {

size_t MultilinearFormula::push(MlfNode n) {
    for (size_t c : n.children)
        if (c >= nodes_.size()) throw DomainError("child index does not precede its parent");
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
}

size_t MultilinearFormula::var(size_t v) {
    if (v >= nvars_) throw DomainError("formula variable out of range");
    MlfNode n;
    n.kind = MlfNode::Kind::Var;
    n.var = v;
    return push(std::move(n));
}

size_t MultilinearFormula::constant(const FieldElement& c) {
    MlfNode n;
    n.kind = MlfNode::Kind::Const;
    n.value = c;
    return push(std::move(n));
}

size_t MultilinearFormula::add(std::vector<size_t> children, std::vector<FieldElement> weights) {
    if (weights.empty()) weights.assign(children.size(), FieldElement::one(spec_));
    if (weights.size() != children.size()) throw DomainError("add node needs one weight per child");
    MlfNode n;
    n.kind = MlfNode::Kind::Add;
    n.children = std::move(children);
    n.weights = std::move(weights);
    return push(std::move(n));
}

size_t MultilinearFormula::mul(std::vector<size_t> children) {
    MlfNode n;
    n.kind = MlfNode::Kind::Mul;
    n.children = std::move(children);
    return push(std::move(n));
}

size_t MultilinearFormula::root() const {
    if (root_) return *root_;
    if (nodes_.empty()) throw DomainError("empty formula");
    return nodes_.size() - 1;
}

uint64_t MultilinearFormula::wires() const {
    uint64_t w = 0;
    for (const auto& n : nodes_) w += n.children.size();
    return w;
}

size_t MultilinearFormula::leaves() const {
    size_t l = 0;
    for (const auto& n : nodes_) l += n.kind == MlfNode::Kind::Var || n.kind == MlfNode::Kind::Const;
    return l;
}

size_t MultilinearFormula::product_depth() const {
    std::vector<size_t> d(nodes_.size(), 0);
    for (size_t i = 0; i < nodes_.size(); ++i) {
        for (size_t c : nodes_[i].children) d[i] = std::max(d[i], d[c]);
        if (nodes_[i].kind == MlfNode::Kind::Mul) ++d[i];
    }
    return nodes_.empty() ? 0 : d[root()];
}

std::vector<size_t> MultilinearFormula::support(size_t node) const {
    std::vector<size_t> out;
    std::vector<size_t> stack{node};
    while (!stack.empty()) {
        size_t i = stack.back();
        stack.pop_back();
        const MlfNode& n = nodes_.at(i);
        if (n.kind == MlfNode::Kind::Var) out.push_back(n.var);
        for (size_t c : n.children) stack.push_back(c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

FieldElement MultilinearFormula::eval(const std::vector<FieldElement>& point) const {
    if (point.size() < nvars_) throw DomainError("evaluation point too short");
    std::vector<FieldElement> v(nodes_.size(), FieldElement::zero(spec_));
    for (size_t i = 0; i < nodes_.size(); ++i) {
        const MlfNode& n = nodes_[i];
        switch (n.kind) {
            case MlfNode::Kind::Var: v[i] = point[n.var]; break;
            case MlfNode::Kind::Const: v[i] = n.value; break;
            case MlfNode::Kind::Add: {
                FieldElement acc = FieldElement::zero(spec_);
                for (size_t k = 0; k < n.children.size(); ++k) acc += n.weights[k] * v[n.children[k]];
                v[i] = acc;
                break;
            }
            case MlfNode::Kind::Mul: {
                FieldElement acc = FieldElement::one(spec_);
                for (size_t c : n.children) acc *= v[c];
                v[i] = acc;
                break;
            }
        }
    }
    return v.at(root());
}

SparsePoly MultilinearFormula::expand() const {
    std::vector<SparsePoly> v(nodes_.size());
    for (size_t i = 0; i < nodes_.size(); ++i) {
        const MlfNode& n = nodes_[i];
        switch (n.kind) {
            case MlfNode::Kind::Var: v[i] = SparsePoly::variable(spec_, nvars_, n.var); break;
            case MlfNode::Kind::Const: v[i] = SparsePoly::constant(n.value, nvars_); break;
            case MlfNode::Kind::Add: {
                SparsePoly acc(spec_, nvars_);
                for (size_t k = 0; k < n.children.size(); ++k) acc += v[n.children[k]].scale(n.weights[k]);
                v[i] = std::move(acc);
                break;
            }
            case MlfNode::Kind::Mul: {
                SparsePoly acc = SparsePoly::constant(FieldElement::one(spec_), nvars_);
                for (size_t c : n.children) acc = acc * v[c];
                v[i] = std::move(acc);
                break;
            }
        }
    }
    return v.at(root());
}

MlfCheck multilinear_formula_check(const MultilinearFormula& f) {
    MlfCheck res;
    const auto& nodes = f.nodes();
    if (nodes.empty()) return res;
    std::vector<size_t> parent(nodes.size(), SIZE_MAX);
    std::vector<int> uses(nodes.size(), 0);
    for (size_t i = 0; i < nodes.size(); ++i)
        for (size_t c : nodes[i].children) {
            ++uses[c];
            parent[c] = i;
        }
    auto path_to = [&](size_t node) {
        std::vector<size_t> p;
        for (size_t cur = node; cur != SIZE_MAX; cur = parent[cur]) p.push_back(cur);
        std::reverse(p.begin(), p.end());
        return p;
    };
    const size_t root = f.root();
    // Supports bottom-up; nodes not below the root are ignored.
    std::vector<std::vector<size_t>> sup(nodes.size());
    for (size_t i = 0; i <= root; ++i) {
        const MlfNode& n = nodes[i];
        if (uses[i] > 1) {
            res = {false, path_to(i), "node " + std::to_string(i) + " is shared, so this is not a formula"};
            return res;
        }
        if (n.kind == MlfNode::Kind::Var) sup[i] = {n.var};
        std::vector<size_t> merged;
        for (size_t c : n.children) {
            if (n.kind == MlfNode::Kind::Mul) {
                std::vector<size_t> common;
                std::set_intersection(merged.begin(), merged.end(), sup[c].begin(), sup[c].end(), std::back_inserter(common));
                if (!common.empty()) {
                    res = {false, path_to(i),
                           "product node " + std::to_string(i) + " has children sharing variable index " + std::to_string(common[0])};
                    return res;
                }
            }
            std::vector<size_t> u;
            std::set_union(merged.begin(), merged.end(), sup[c].begin(), sup[c].end(), std::back_inserter(u));
            merged = std::move(u);
        }
        if (n.kind != MlfNode::Kind::Var) sup[i] = std::move(merged);
    }
    return res;
}

}  // namespace ipsw
