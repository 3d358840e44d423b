#include <algorithm>
#include <cctype>
#include <sstream>

#include "ipsw/circuit.hpp"

namespace ipsw {

namespace {

template <class... F>
struct overloaded : F... {
    using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

}  // namespace

SparsePoly expand(const Circuit& c, uint64_t budget) {
    ExpansionBudget scope(budget);
    return std::visit([](const auto& x) { return x.expand(); }, c);
}

FieldElement eval(const Circuit& c, const std::vector<FieldElement>& point) {
    return std::visit([&](const auto& x) { return x.eval(point); }, c);
}

const FieldSpec& circuit_spec(const Circuit& c) {
    return std::visit([](const auto& x) -> const FieldSpec& { return x.spec(); }, c);
}

size_t circuit_nvars(const Circuit& c) {
    return std::visit([](const auto& x) { return x.nvars(); }, c);
}

uint64_t wires(const Circuit& c) {
    return std::visit(overloaded{
                          [](const CircuitDag& x) { return x.wires(); },
                          [](const PoweringFormula& x) { return to_dag(Circuit(x)).wires(); },
                          [](const LowDegPoweringFormula& x) { return to_dag(Circuit(x)).wires(); },
                          [](const Roabp& x) { return x.wires(); },
                          [](const MultilinearFormula& x) { return x.wires(); },
                      },
                      c);
}

uint64_t nominal_size(const Circuit& c) {
    return std::visit(overloaded{
                          [](const CircuitDag& x) { return x.wires(); },
                          [](const PoweringFormula& x) { return x.size(); },
                          [](const LowDegPoweringFormula& x) { return x.size(); },
                          [](const Roabp& x) { return x.nominal_size(); },
                          [](const MultilinearFormula& x) { return x.wires(); },
                      },
                      c);
}

std::string kind_name(const Circuit& c) {
    return std::visit(overloaded{
                          [](const CircuitDag&) { return std::string("circuit"); },
                          [](const PoweringFormula&) { return std::string("powering"); },
                          [](const LowDegPoweringFormula&) { return std::string("lowdeg-powering"); },
                          [](const Roabp&) { return std::string("roabp"); },
                          [](const MultilinearFormula&) { return std::string("mlformula"); },
                      },
                      c);
}

uint64_t degree_bound(const Circuit& c, const std::vector<uint64_t>& w) {
    auto weight = [&](size_t v) -> uint64_t { return v < w.size() ? w[v] : 1; };
    return std::visit(overloaded{
                          [&](const CircuitDag& x) { return x.degree_bound(w); },
                          [&](const PoweringFormula& x) {
                              uint64_t best = 0;
                              for (const auto& t : x.terms()) {
                                  uint64_t lw = 0;
                                  for (size_t i = 0; i < t.form.coeffs.size(); ++i)
                                      if (!t.form.coeffs[i].is_zero()) lw = std::max(lw, weight(i));
                                  best = std::max(best, lw * t.exponent);
                              }
                              return best;
                          },
                          [&](const LowDegPoweringFormula& x) {
                              uint64_t best = 0;
                              for (const auto& t : x.terms()) {
                                  uint64_t bw = 0;
                                  for (const auto& term : t.base.terms()) {
                                      uint64_t s = 0;
                                      for (size_t i = 0; i < term.mono.size(); ++i) s += uint64_t{term.mono[i]} * weight(i);
                                      bw = std::max(bw, s);
                                  }
                                  best = std::max(best, bw * t.exponent);
                              }
                              return best;
                          },
                          [&](const Roabp& x) {
                              uint64_t total = 0;
                              for (size_t i = 0; i < x.length(); ++i) {
                                  int d = 0;
                                  for (const auto& row : x.layers()[i])
                                      for (const auto& e : row) d = std::max(d, e.degree());
                                  total += uint64_t(d) * weight(x.order()[i]);
                              }
                              return total;
                          },
                          [&](const MultilinearFormula& x) { return to_dag(Circuit(x)).degree_bound(w); },
                      },
                      c);
}

CircuitDag to_dag(const SparsePoly& f) {
    CircuitDag g(f.spec(), f.nvars());
    g.set_output(g.poly(f));
    return g;
}

CircuitDag to_dag(const Circuit& c) {
    return std::visit(
        overloaded{
            [](const CircuitDag& x) { return x; },
            [](const PoweringFormula& x) {
                CircuitDag g(x.spec(), x.nvars());
                std::vector<size_t> terms;
                std::vector<FieldElement> weights;
                for (const auto& t : x.terms()) {
                    std::vector<size_t> ch;
                    std::vector<FieldElement> w;
                    for (size_t i = 0; i < t.form.coeffs.size(); ++i)
                        if (!t.form.coeffs[i].is_zero()) {
                            ch.push_back(g.input(i));
                            w.push_back(t.form.coeffs[i]);
                        }
                    if (!t.form.constant.is_zero()) {
                        ch.push_back(g.constant(t.form.constant));
                        w.push_back(FieldElement::one(x.spec()));
                    }
                    size_t lin = g.add(std::move(ch), std::move(w));
                    terms.push_back(g.pow(lin, t.exponent));
                    weights.push_back(t.weight);
                }
                g.set_output(g.add(std::move(terms), std::move(weights)));
                return g;
            },
            [](const LowDegPoweringFormula& x) {
                CircuitDag g(x.spec(), x.nvars());
                std::vector<size_t> vars;
                for (size_t i = 0; i < x.nvars(); ++i) vars.push_back(g.input(i));
                std::vector<size_t> terms;
                std::vector<FieldElement> weights;
                for (const auto& t : x.terms()) {
                    terms.push_back(g.pow(g.poly(t.base, vars), t.exponent));
                    weights.push_back(t.weight);
                }
                g.set_output(g.add(std::move(terms), std::move(weights)));
                return g;
            },
            [](const Roabp& x) {
                const FieldSpec& spec = x.spec();
                CircuitDag g(spec, x.nvars());
                if (x.length() == 0) {
                    g.set_output(g.constant(x.constant_value()));
                    return g;
                }
                const size_t w = x.width();
                std::vector<std::optional<size_t>> v(w);
                v[0] = g.constant(1);
                for (size_t i = 0; i < x.length(); ++i) {
                    const auto& L = x.layers()[i];
                    const size_t var = g.input(x.order()[i]);
                    std::vector<size_t> pw{0, var};
                    std::vector<std::optional<size_t>> nv(w);
                    for (size_t j = 0; j < w; ++j) {
                        std::vector<size_t> ch;
                        std::vector<FieldElement> wt;
                        for (size_t k = 0; k < w; ++k) {
                            if (!v[k] || L[k][j].is_zero()) continue;
                            const auto& cs = L[k][j].coeffs();
                            for (size_t e = 0; e < cs.size(); ++e) {
                                if (cs[e].is_zero()) continue;
                                while (pw.size() <= e) pw.push_back(g.mul(pw.back(), var));
                                ch.push_back(e == 0 ? *v[k] : g.mul(*v[k], pw[e]));
                                wt.push_back(cs[e]);
                            }
                        }
                        if (!ch.empty()) nv[j] = g.add(std::move(ch), std::move(wt));
                    }
                    v = std::move(nv);
                }
                g.set_output(v[0] ? *v[0] : g.constant(0));
                return g;
            },
            [](const MultilinearFormula& x) {
                CircuitDag g(x.spec(), x.nvars());
                const auto& nodes = x.nodes();
                std::vector<size_t> map(nodes.size(), 0);
                for (size_t i = 0; i < nodes.size(); ++i) {
                    const MlfNode& n = nodes[i];
                    switch (n.kind) {
                        case MlfNode::Kind::Var: map[i] = g.input(n.var); break;
                        case MlfNode::Kind::Const: map[i] = g.constant(n.value); break;
                        case MlfNode::Kind::Add: {
                            std::vector<size_t> ch;
                            for (size_t c : n.children) ch.push_back(map[c]);
                            map[i] = g.add(std::move(ch), n.weights);
                            break;
                        }
                        case MlfNode::Kind::Mul: {
                            std::vector<size_t> ch;
                            for (size_t c : n.children) ch.push_back(map[c]);
                            map[i] = g.product(ch);
                            break;
                        }
                    }
                }
                g.set_output(nodes.empty() ? g.constant(0) : map[x.root()]);
                return g;
            },
        },
        c);
}

// ---------------------------------------------------------------- text forms

namespace {

constexpr size_t kMaxTextBytes = size_t{64} << 20;

class CircuitParser {
public:
    CircuitParser(std::string_view text, const FieldSpec& spec, const VarLayout& layout)
        : s_(text), g_(spec, layout.total()), layout_(layout) {}

    CircuitDag run() {
        size_t out = expr();
        skip();
        if (pos_ != s_.size()) fail("trailing input");
        g_.set_output(out);
        return std::move(g_);
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("circuit parse error at offset " + std::to_string(pos_) + ": " + msg);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    std::string atom() {
        skip();
        size_t b = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' && s_[pos_] != ')') ++pos_;
        if (b == pos_) fail("expected a token");
        return std::string(s_.substr(b, pos_ - b));
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    FieldElement element(const std::string& tok) {
        try {
            return FieldElement::parse(g_.spec(), tok);
        } catch (const ParseError&) {
            fail("bad field element '" + tok + "'");
        }
    }

    // A weighted child: (scale c e) or a plain expression.
    std::pair<size_t, FieldElement> weighted() {
        skip();
        size_t save = pos_;
        if (peek('(')) {
            ++pos_;
            std::string op = atom();
            if (op == "scale") {
                FieldElement c = element(atom());
                size_t e = expr();
                expect(')');
                return {e, c};
            }
            pos_ = save;
        }
        return {expr(), FieldElement::one(g_.spec())};
    }

    size_t expr() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (s_[pos_] == '(') {
            ++pos_;
            std::string op = atom();
            if (op == "+") {
                std::vector<size_t> ch;
                std::vector<FieldElement> w;
                while (!peek(')')) {
                    if (pos_ >= s_.size()) fail("unterminated sum");
                    auto [e, c] = weighted();
                    ch.push_back(e);
                    w.push_back(c);
                }
                ++pos_;
                if (ch.empty()) fail("empty sum");
                return g_.add(std::move(ch), std::move(w));
            }
            if (op == "*") {
                std::vector<size_t> ch;
                while (!peek(')')) {
                    if (pos_ >= s_.size()) fail("unterminated product");
                    ch.push_back(expr());
                }
                ++pos_;
                if (ch.size() < 2) fail("product needs two factors");
                return g_.product(ch);
            }
            if (op == "pow") {
                size_t e = expr();
                std::string k = atom();
                if (k.empty() || k.size() > 9 || !std::all_of(k.begin(), k.end(), ::isdigit)) fail("bad exponent '" + k + "'");
                expect(')');
                return g_.pow(e, std::stoull(k));
            }
            if (op == "scale") {
                FieldElement c = element(atom());
                size_t e = expr();
                expect(')');
                return g_.scale(c, e);
            }
            fail("unknown operator '" + op + "'");
        }
        std::string tok = atom();
        char c = tok[0];
        if (c == 'x' || c == 'y' || c == 'z') {
            std::string d = tok.substr(1);
            if (d.empty() || d.size() > 9 || !std::all_of(d.begin(), d.end(), ::isdigit)) fail("bad variable '" + tok + "'");
            auto id = layout_.lookup(c, std::stoul(d));
            if (!id) fail("unknown variable " + tok);
            return g_.input(*id);
        }
        return g_.constant(element(tok));
    }

    std::string_view s_;
    size_t pos_ = 0;
    CircuitDag g_;
    VarLayout layout_;
};

struct TextBudget {
    size_t used = 0;
    void charge(size_t n) {
        used += n;
        if (used > kMaxTextBytes) throw ResourceError("circuit text exceeds 64 MiB; the DAG has too much sharing to print as a tree");
    }
};

std::string weighted_child(const FieldElement& w, const std::string& child) {
    if (w.is_one()) return child;
    return "(scale " + w.to_string() + " " + child + ")";
}

}  // namespace

CircuitDag parse_circuit(std::string_view text, const FieldSpec& spec, const VarLayout& layout) {
    return CircuitParser(text, spec, layout).run();
}

std::string circuit_to_text(const CircuitDag& c, const VarLayout& layout) {
    const auto& nodes = c.nodes();
    const size_t root = c.output();
    std::vector<std::string> memo(nodes.size());
    std::vector<char> done(nodes.size(), 0);
    TextBudget budget;
    for (size_t i = 0; i <= root; ++i) {
        const DagNode& n = nodes[i];
        std::string s;
        switch (n.kind) {
            case DagNode::Kind::Input: s = layout.name(n.var); break;
            case DagNode::Kind::Const: s = n.value.to_string(); break;
            case DagNode::Kind::Add:
                s = "(+";
                for (size_t k = 0; k < n.children.size(); ++k) s += " " + weighted_child(n.weights[k], memo[n.children[k]]);
                s += ")";
                break;
            case DagNode::Kind::Mul: s = "(* " + memo[n.children[0]] + " " + memo[n.children[1]] + ")"; break;
        }
        budget.charge(s.size());
        memo[i] = std::move(s);
    }
    return memo[root];
}

std::string formula_to_text(const MultilinearFormula& f, const VarLayout& layout) {
    const auto& nodes = f.nodes();
    if (nodes.empty()) return "0";
    std::vector<std::string> memo(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) {
        const MlfNode& n = nodes[i];
        switch (n.kind) {
            case MlfNode::Kind::Var: memo[i] = layout.name(n.var); break;
            case MlfNode::Kind::Const: memo[i] = n.value.to_string(); break;
            case MlfNode::Kind::Add: {
                if (n.children.empty()) {
                    memo[i] = "0";
                    break;
                }
                std::string s = "(+";
                for (size_t k = 0; k < n.children.size(); ++k) s += " " + weighted_child(n.weights[k], memo[n.children[k]]);
                memo[i] = s + ")";
                break;
            }
            case MlfNode::Kind::Mul: {
                if (n.children.empty()) {
                    memo[i] = "1";
                } else if (n.children.size() == 1) {
                    memo[i] = memo[n.children[0]];
                } else {
                    // Binary products nest to the right.
                    std::string s = memo[n.children.back()];
                    for (size_t k = n.children.size() - 1; k-- > 0;) s = "(* " + memo[n.children[k]] + " " + s + ")";
                    memo[i] = s;
                }
                break;
            }
        }
    }
    return memo[f.root()];
}

std::string roabp_to_text(const Roabp& a, const VarLayout& layout) {
    std::ostringstream out;
    out << "roabp order=";
    for (size_t i = 0; i < a.order().size(); ++i) out << (i ? "," : "") << layout.name(a.order()[i]);
    out << " width=" << a.width() << "\n";
    if (a.length() == 0) {
        out << "constant " << a.constant_value().to_string() << "\n";
    }
    for (size_t i = 0; i < a.length(); ++i) {
        const size_t var = a.order()[i];
        out << "layer " << layout.name(var) << "\n";
        for (const auto& row : a.layers()[i]) {
            for (size_t j = 0; j < row.size(); ++j) out << (j ? ", " : "") << to_string(row[j].to_sparse(layout.total(), var), layout);
            out << "\n";
        }
    }
    out << "end\n";
    return out.str();
}

Roabp parse_roabp(std::string_view text, const FieldSpec& spec, const VarLayout& layout) {
    std::vector<std::string> lines;
    {
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            auto e = line.find_last_not_of(" \t\r");
            lines.push_back(line.substr(b, e - b + 1));
        }
    }
    if (lines.empty()) throw ParseError("empty roABP text");
    auto lookup_var = [&](const std::string& name) {
        if (name.size() < 2 || !std::all_of(name.begin() + 1, name.end(), ::isdigit) || name.size() > 10)
            throw ParseError("bad roABP variable '" + name + "'");
        auto id = layout.lookup(name[0], std::stoul(name.substr(1)));
        if (!id) throw ParseError("unknown roABP variable '" + name + "'");
        return *id;
    };
    std::istringstream header(lines[0]);
    std::string kw, order_tok, width_tok;
    header >> kw >> order_tok >> width_tok;
    if (kw != "roabp" || order_tok.rfind("order=", 0) != 0 || width_tok.rfind("width=", 0) != 0)
        throw ParseError("roABP header must read 'roabp order=<vars> width=<r>'");
    std::vector<size_t> order;
    std::string ord = order_tok.substr(6);
    for (size_t pos = 0; pos < ord.size();) {
        size_t comma = ord.find(',', pos);
        std::string name = ord.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        order.push_back(lookup_var(name));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    std::string wdigits = width_tok.substr(6);
    if (wdigits.empty() || wdigits.size() > 6 || !std::all_of(wdigits.begin(), wdigits.end(), ::isdigit)) throw ParseError("bad roABP width");
    const size_t w = std::stoul(wdigits);
    if (w == 0) throw ParseError("roABP width must be positive");
    size_t li = 1;
    if (order.empty()) {
        if (li >= lines.size() || lines[li].rfind("constant ", 0) != 0) throw ParseError("constant roABP needs a 'constant <value>' line");
        return Roabp::constant(FieldElement::parse(spec, lines[li].substr(9)), layout.total());
    }
    std::vector<UniMatrix> layers;
    for (size_t pos = 0; pos < order.size(); ++pos) {
        if (li >= lines.size() || lines[li].rfind("layer ", 0) != 0) throw ParseError("expected 'layer <var>' for position " + std::to_string(pos + 1));
        size_t var = lookup_var(lines[li].substr(6));
        if (var != order[pos]) throw ParseError("layer variable does not match the declared order");
        ++li;
        UniMatrix L;
        for (size_t r = 0; r < w; ++r, ++li) {
            if (li >= lines.size()) throw ParseError("roABP layer is missing rows");
            std::vector<UniPoly> row;
            std::string line = lines[li];
            size_t p = 0;
            while (true) {
                size_t comma = line.find(',', p);
                std::string cell = line.substr(p, comma == std::string::npos ? std::string::npos : comma - p);
                SparsePoly f = parse_poly(cell, spec, layout);
                try {
                    row.push_back(UniPoly::from_sparse(f, var));
                } catch (const DomainError&) {
                    throw ParseError("roABP entry '" + cell + "' uses a variable other than its layer's");
                }
                if (comma == std::string::npos) break;
                p = comma + 1;
            }
            if (row.size() != w) throw ParseError("roABP row has " + std::to_string(row.size()) + " entries, width is " + std::to_string(w));
            L.push_back(std::move(row));
        }
        layers.push_back(std::move(L));
    }
    if (li < lines.size() && lines[li] != "end") throw ParseError("unexpected line after roABP layers: '" + lines[li] + "'");
    return Roabp(spec, layout.total(), std::move(order), std::move(layers));
}

}  // namespace ipsw
