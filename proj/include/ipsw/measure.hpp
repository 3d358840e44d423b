#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ipsw/poly.hpp"

namespace ipsw {

// Variable partition (u | v | w) of a polynomial's variables.
struct PartitionSpec {
    std::vector<size_t> u, v, w;

    // "x1,x2|y1,y2" or "x1 x2 | y1 y2 | z1"; names resolve through the layout and a bare x, y or z
    // stands for every variable of that kind.
    static PartitionSpec parse(std::string_view text, const VarLayout& layout);
    std::string to_string(const VarLayout& layout) const;
    // Throws DomainError unless u, v, w are disjoint and cover every variable f uses.
    void validate(const SparsePoly& f) const;
    PartitionSpec swapped() const { return PartitionSpec{v, u, w}; }
};

// Rows are u-monomials, columns v-monomials; exponent vectors are indexed like part.u / part.v.
// Entries live in F[w] (constants when w is empty). Only occurring monomials are indexed.
struct CoefficientMatrix {
    std::vector<Monomial> rows, cols;
    std::vector<std::vector<SparsePoly>> entries;
    bool polynomial_entries = false;
};

CoefficientMatrix coefficient_matrix(const SparsePoly& f, const PartitionSpec& part);

// Rank over F, with Gaussian elimination mod p and fraction-free Bareiss over Q.
size_t matrix_rank(std::vector<std::vector<FieldElement>> m);
// Rank over the fraction field of F[w] by fraction-free Bareiss with exact division.
size_t matrix_rank_poly(std::vector<std::vector<SparsePoly>> m);

size_t coeff_dim(const SparsePoly& f, const PartitionSpec& part);
// Lower bound for coeff_dim: w is fixed to `w_point` (indexed like part.w) before taking the rank.
size_t coeff_dim_at(const SparsePoly& f, const PartitionSpec& part, const std::vector<FieldElement>& w_point);

constexpr uint64_t kMaxEvalGridPoints = uint64_t{1} << 20;
size_t eval_dim(const SparsePoly& f, const PartitionSpec& part, const std::vector<FieldElement>& grid);

// Pairs u[i] with v[i]; substitutes u_i <- u_i z_i, v_i <- v_i z_i and returns the extremal coefficient in z.
// `ord` compares z-monomials indexed by pair position.
SparsePoly leading_diagonal(const SparsePoly& f, const PartitionSpec& part, const MonomialOrder& ord = {});
SparsePoly trailing_diagonal(const SparsePoly& f, const PartitionSpec& part, const MonomialOrder& ord = {});

}  // namespace ipsw
