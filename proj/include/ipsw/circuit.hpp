#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ipsw/poly.hpp"
#include "ipsw/unipoly.hpp"

namespace ipsw {

// ---------------------------------------------------------------- general circuits

struct DagNode {
    enum class Kind { Input, Const, Add, Mul };
    Kind kind = Kind::Const;
    size_t var = 0;                     // Input
    FieldElement value;                 // Const
    std::vector<size_t> children;       // Add (any fan-in), Mul (exactly 2)
    std::vector<FieldElement> weights;  // Add
};

// Topologically ordered circuit; every child index precedes its parent. May have several outputs.
class CircuitDag {
public:
    CircuitDag() = default;
    CircuitDag(const FieldSpec& spec, size_t nvars) : spec_(spec), nvars_(nvars) {}

    const FieldSpec& spec() const { return spec_; }
    size_t nvars() const { return nvars_; }
    const std::vector<DagNode>& nodes() const { return nodes_; }
    const std::vector<size_t>& outputs() const { return outputs_; }
    size_t output() const;

    size_t input(size_t var);  // one node per variable
    size_t constant(const FieldElement& c);
    size_t constant(int64_t c) { return constant(FieldElement::from_int(spec_, c)); }
    size_t add(std::vector<size_t> children, std::vector<FieldElement> weights);
    size_t add(size_t a, size_t b);
    size_t sub(size_t a, size_t b);
    size_t scale(const FieldElement& c, size_t a);
    size_t mul(size_t a, size_t b);
    size_t product(const std::vector<size_t>& factors);  // left-nested chain; empty means 1
    size_t pow(size_t a, uint64_t k);                    // repeated squaring
    // Sum of monomials of f; var_nodes[i] is the node standing for variable i.
    size_t poly(const SparsePoly& f, const std::vector<size_t>& var_nodes);
    size_t poly(const SparsePoly& f);
    // Copies the sub-circuits of `other` below `roots`; inputs of `other` are routed through input_map.
    std::vector<size_t> append(const CircuitDag& other, const std::vector<size_t>& roots,
                               const std::function<size_t(size_t)>& input_map);
    size_t append(const CircuitDag& other, size_t root, const std::function<size_t(size_t)>& input_map);

    void set_output(size_t node) { outputs_ = {node}; }
    void set_outputs(std::vector<size_t> nodes) { outputs_ = std::move(nodes); }

    uint64_t wires() const;  // edges reachable from the outputs
    uint64_t size() const { return wires(); }
    size_t depth() const;    // gates on the longest input-output path

    std::vector<FieldElement> eval_outputs(const std::vector<FieldElement>& point) const;
    FieldElement eval(const std::vector<FieldElement>& point) const;
    std::vector<SparsePoly> expand_outputs() const;
    SparsePoly expand() const;
    // Degree upper bound when variable i is given weight var_weights[i].
    uint64_t degree_bound(const std::vector<uint64_t>& var_weights) const;

private:
    std::vector<char> reachable() const;
    size_t push(DagNode n);

    FieldSpec spec_;
    size_t nvars_ = 0;
    std::vector<DagNode> nodes_;
    std::vector<size_t> outputs_;
    std::map<size_t, size_t> input_nodes_;
};

// ---------------------------------------------------------------- sums of powers of linear forms

struct LinearForm {
    std::vector<FieldElement> coeffs;  // one per variable
    FieldElement constant;
    SparsePoly to_poly(size_t nvars) const;
    FieldElement eval(const std::vector<FieldElement>& point) const;
};

struct PowerTerm {
    FieldElement weight;
    LinearForm form;
    uint32_t exponent = 0;
};

class PoweringFormula {
public:
    PoweringFormula() = default;
    PoweringFormula(const FieldSpec& spec, size_t nvars) : spec_(spec), nvars_(nvars) {}

    void add_term(const FieldElement& weight, LinearForm form, uint32_t exponent);
    const FieldSpec& spec() const { return spec_; }
    size_t nvars() const { return nvars_; }
    const std::vector<PowerTerm>& terms() const { return terms_; }
    uint64_t size() const;  // n * sum(d_i + 1)
    uint32_t degree() const;

    FieldElement eval(const std::vector<FieldElement>& point) const;
    SparsePoly expand() const;

private:
    FieldSpec spec_;
    size_t nvars_ = 0;
    std::vector<PowerTerm> terms_;
};

struct LowDegTerm {
    FieldElement weight;
    SparsePoly base;
    uint32_t exponent = 0;
};

class LowDegPoweringFormula {
public:
    LowDegPoweringFormula() = default;
    LowDegPoweringFormula(const FieldSpec& spec, size_t nvars, uint32_t t) : spec_(spec), nvars_(nvars), t_(t) {}

    void add_term(const FieldElement& weight, SparsePoly base, uint32_t exponent);  // deg base <= t
    const FieldSpec& spec() const { return spec_; }
    size_t nvars() const { return nvars_; }
    uint32_t base_degree() const { return t_; }
    const std::vector<LowDegTerm>& terms() const { return terms_; }
    uint64_t size() const;  // C(n+t, t) * sum(d_i + 1), saturating

    FieldElement eval(const std::vector<FieldElement>& point) const;
    SparsePoly expand() const;

private:
    FieldSpec spec_;
    size_t nvars_ = 0;
    uint32_t t_ = 0;
    std::vector<LowDegTerm> terms_;
};

// ---------------------------------------------------------------- read-once oblivious ABPs

using UniMatrix = std::vector<std::vector<UniPoly>>;  // rows of univariate entries

// Layer i holds a square matrix in variable order[i]; the value is the (1,1) entry of the product.
// With no layers the roABP is the constant `constant_value()`.
class Roabp {
public:
    Roabp() = default;
    Roabp(const FieldSpec& spec, size_t nvars, std::vector<size_t> order, std::vector<UniMatrix> layers);
    static Roabp constant(const FieldElement& c, size_t nvars);
    // Builds the roABP for start^T * L_1 * ... * L_k * end with rectangular layers, padding to a common width.
    static Roabp from_abp(const FieldSpec& spec, size_t nvars, std::vector<size_t> order, std::vector<UniMatrix> layers,
                          const std::vector<FieldElement>& start, const std::vector<FieldElement>& end);

    const FieldSpec& spec() const { return spec_; }
    size_t nvars() const { return nvars_; }
    const std::vector<size_t>& order() const { return order_; }
    const std::vector<UniMatrix>& layers() const { return layers_; }
    const FieldElement& constant_value() const { return constant_; }
    size_t width() const { return width_; }
    size_t length() const { return layers_.size(); }
    uint32_t entry_degree() const;
    uint64_t nominal_size() const;  // n * r * d * D with D = n layers
    uint64_t wires() const;       // nonzero matrix entries

    FieldElement eval(const std::vector<FieldElement>& point) const;
    SparsePoly expand() const;

private:
    FieldSpec spec_;
    size_t nvars_ = 0;
    std::vector<size_t> order_;
    std::vector<UniMatrix> layers_;
    size_t width_ = 1;
    FieldElement constant_;
};

// ---------------------------------------------------------------- multilinear formulas

struct MlfNode {
    enum class Kind { Var, Const, Add, Mul };
    Kind kind = Kind::Const;
    size_t var = 0;
    FieldElement value;
    std::vector<size_t> children;
    std::vector<FieldElement> weights;  // Add only
};

class MultilinearFormula {
public:
    MultilinearFormula() = default;
    MultilinearFormula(const FieldSpec& spec, size_t nvars) : spec_(spec), nvars_(nvars) {}

    size_t var(size_t v);
    size_t constant(const FieldElement& c);
    size_t add(std::vector<size_t> children, std::vector<FieldElement> weights = {});
    size_t mul(std::vector<size_t> children);
    void set_root(size_t r) { root_ = r; }

    const FieldSpec& spec() const { return spec_; }
    size_t nvars() const { return nvars_; }
    const std::vector<MlfNode>& nodes() const { return nodes_; }
    size_t root() const;
    uint64_t wires() const;
    size_t leaves() const;
    size_t product_depth() const;
    std::vector<size_t> support(size_t node) const;

    FieldElement eval(const std::vector<FieldElement>& point) const;
    SparsePoly expand() const;

private:
    size_t push(MlfNode n);

    FieldSpec spec_;
    size_t nvars_ = 0;
    std::vector<MlfNode> nodes_;
    std::optional<size_t> root_;
};

struct MlfCheck {
    bool ok = true;
    std::vector<size_t> path;  // root to the offending node
    std::string reason;
};

MlfCheck multilinear_formula_check(const MultilinearFormula& f);

// ---------------------------------------------------------------- uniform access

using Circuit = std::variant<CircuitDag, PoweringFormula, LowDegPoweringFormula, Roabp, MultilinearFormula>;

SparsePoly expand(const Circuit& c, uint64_t budget = kDefaultExpandBudget);
FieldElement eval(const Circuit& c, const std::vector<FieldElement>& point);
const FieldSpec& circuit_spec(const Circuit& c);
size_t circuit_nvars(const Circuit& c);
uint64_t wires(const Circuit& c);
uint64_t nominal_size(const Circuit& c);
std::string kind_name(const Circuit& c);
uint64_t degree_bound(const Circuit& c, const std::vector<uint64_t>& var_weights);
CircuitDag to_dag(const Circuit& c);
CircuitDag to_dag(const SparsePoly& f);

// ---------------------------------------------------------------- transformations

// Tuples (f_1..f_n) of univariates with (x_1+...+x_n)^d = sum_i prod_j f_{i,j}(x_j).
std::vector<std::vector<UniPoly>> duality_decompose(size_t n, uint32_t d, const FieldSpec& spec);

// `order` must list every variable exactly once.
Roabp powering_to_roabp(const PoweringFormula& p, const std::vector<size_t>& order);
Roabp roabp_add(const Roabp& a, const Roabp& b);
Roabp roabp_mul(const Roabp& a, const Roabp& b);
Roabp roabp_scale(const Roabp& a, const FieldElement& c);
Roabp roabp_partial_eval(const Roabp& a, const std::map<size_t, FieldElement>& assignment);
// z_i -> x_i * y_i; output variables x_i = i, y_i = n + i, order follows the input order with x before y.
Roabp roabp_hadamard_substitute(const Roabp& a);

// Quotient sum_{i>=a} f_i(x) y^{i-a} by Lagrange interpolation at y = 0..d; d bounds deg_y.
CircuitDag divide_by_var_formula(const CircuitDag& c, size_t y, uint32_t a, uint32_t d);
// Outputs 0..a-1 are the coefficients of y^0..y^{a-1}; output a is the tail sum_{i>=a} f_i y^{i-a}.
CircuitDag divide_by_var_circuit(const CircuitDag& c, size_t y, uint32_t a);

// ---------------------------------------------------------------- text forms

CircuitDag parse_circuit(std::string_view text, const FieldSpec& spec, const VarLayout& layout);
std::string circuit_to_text(const CircuitDag& c, const VarLayout& layout);
std::string formula_to_text(const MultilinearFormula& f, const VarLayout& layout);
std::string roabp_to_text(const Roabp& a, const VarLayout& layout);
Roabp parse_roabp(std::string_view text, const FieldSpec& spec, const VarLayout& layout);

}  // namespace ipsw
