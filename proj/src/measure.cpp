#include "ipsw/measure.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace ipsw {

namespace {

std::vector<std::string> split_names(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

size_t resolve(const std::string& name, const VarLayout& layout) {
    if (name.size() < 2 || name.size() > 10 || !std::all_of(name.begin() + 1, name.end(), ::isdigit))
        throw ParseError("bad variable name '" + name + "' in partition");
    auto id = layout.lookup(name[0], std::stoul(name.substr(1)));
    if (!id) throw ParseError("unknown variable '" + name + "' in partition");
    return *id;
}

Monomial project(const Monomial& m, const std::vector<size_t>& vars) {
    Monomial r(vars.size());
    for (size_t i = 0; i < vars.size(); ++i) r.at(i) = m[vars[i]];
    return r;
}

// Rank of an integer matrix by fraction-free elimination.
size_t bareiss_rank(std::vector<std::vector<mpz_class>> m) {
    if (m.empty()) return 0;
    const size_t rows = m.size(), cols = m[0].size();
    mpz_class prev = 1;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (size_t i = r + 1; i < rows; ++i) {
            for (size_t j = c + 1; j < cols; ++j) {
                mpz_class t = m[r][c] * m[i][j] - m[i][c] * m[r][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                m[i][j] = std::move(t);
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        ++r;
    }
    return r;
}

size_t gauss_rank(std::vector<std::vector<FieldElement>> m) {
    if (m.empty()) return 0;
    const size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && m[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        const FieldElement inv = m[r][c].inv();
        for (size_t i = r + 1; i < rows; ++i) {
            if (m[i][c].is_zero()) continue;
            const FieldElement f = m[i][c] * inv;
            for (size_t j = c; j < cols; ++j)
                if (!m[r][j].is_zero()) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

std::vector<std::vector<FieldElement>> constants_of(const CoefficientMatrix& cm) {
    std::vector<std::vector<FieldElement>> m;
    for (const auto& row : cm.entries) {
        std::vector<FieldElement> r;
        for (const auto& e : row) r.push_back(e.constant_term());
        m.push_back(std::move(r));
    }
    return m;
}

void require_paired(const PartitionSpec& part) {
    if (!part.w.empty() || part.u.size() != part.v.size())
        throw DomainError("diagonals need a paired partition (x|y) with |x| = |y| and no residual variables");
}

SparsePoly diagonal(const SparsePoly& f, const PartitionSpec& part, const MonomialOrder& ord, bool leading) {
    require_paired(part);
    part.validate(f);
    if (f.is_zero()) throw NoExtremalMonomial();
    auto zexp = [&](const Monomial& m) {
        Monomial e(part.u.size());
        for (size_t i = 0; i < part.u.size(); ++i) {
            uint32_t s = uint32_t{m[part.u[i]]} + m[part.v[i]];
            if (s > 0xFFFF) throw ResourceError("exponent overflow (16-bit exponents)");
            e.at(i) = static_cast<Exp>(s);
        }
        return e;
    };
    Monomial best = zexp(f.terms()[0].mono);
    for (const auto& t : f.terms()) {
        Monomial e = zexp(t.mono);
        int c = ord.compare(e, best);
        if (leading ? c > 0 : c < 0) best = std::move(e);
    }
    std::vector<Term> keep;
    for (const auto& t : f.terms())
        if (zexp(t.mono) == best) keep.push_back(t);
    return SparsePoly::from_terms(f.spec(), f.nvars(), std::move(keep));
}

}  // namespace

PartitionSpec PartitionSpec::parse(std::string_view text, const VarLayout& layout) {
    std::vector<std::string_view> parts;
    size_t pos = 0;
    while (true) {
        size_t bar = text.find('|', pos);
        parts.push_back(text.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos));
        if (bar == std::string_view::npos) break;
        pos = bar + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) throw ParseError("partition must read 'u-vars|v-vars' or 'u-vars|v-vars|w-vars'");
    PartitionSpec p;
    std::vector<size_t>* dst[3] = {&p.u, &p.v, &p.w};
    for (size_t i = 0; i < parts.size(); ++i)
        for (const auto& name : split_names(parts[i])) {
            if (name == "x" || name == "y" || name == "z") {
                const size_t count = name == "x" ? layout.nx : name == "y" ? layout.ny : layout.nz;
                for (size_t k = 1; k <= count; ++k) dst[i]->push_back(*layout.lookup(name[0], k));
            } else {
                dst[i]->push_back(resolve(name, layout));
            }
        }
    return p;
}

std::string PartitionSpec::to_string(const VarLayout& layout) const {
    auto join = [&](const std::vector<size_t>& vs) {
        std::string s;
        for (size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + layout.name(vs[i]);
        return s;
    };
    std::string s = join(u) + "|" + join(v);
    if (!w.empty()) s += "|" + join(w);
    return s;
}

void PartitionSpec::validate(const SparsePoly& f) const {
    std::set<size_t> seen;
    for (const auto* vs : {&u, &v, &w})
        for (size_t x : *vs)
            if (!seen.insert(x).second) throw DomainError("partition blocks overlap at variable index " + std::to_string(x));
    for (size_t x : f.support_vars())
        if (!seen.count(x)) throw DomainError("partition does not cover variable index " + std::to_string(x));
}

CoefficientMatrix coefficient_matrix(const SparsePoly& f, const PartitionSpec& part) {
    part.validate(f);
    CoefficientMatrix cm;
    cm.polynomial_entries = !part.w.empty();
    auto cmp = [](const Monomial& a, const Monomial& b) { return canonical_less(a, b); };
    std::map<Monomial, size_t, decltype(cmp)> rows(cmp), cols(cmp);
    for (const auto& t : f.terms()) {
        rows.emplace(project(t.mono, part.u), 0);
        cols.emplace(project(t.mono, part.v), 0);
    }
    for (auto& [m, idx] : rows) {
        idx = cm.rows.size();
        cm.rows.push_back(m);
    }
    for (auto& [m, idx] : cols) {
        idx = cm.cols.size();
        cm.cols.push_back(m);
    }
    cm.entries.assign(cm.rows.size(), std::vector<SparsePoly>(cm.cols.size(), SparsePoly(f.spec(), f.nvars())));
    for (const auto& t : f.terms()) {
        size_t r = rows.at(project(t.mono, part.u));
        size_t c = cols.at(project(t.mono, part.v));
        Monomial wm(f.nvars());
        for (size_t x : part.w) wm.at(x) = t.mono[x];
        cm.entries[r][c] += SparsePoly::monomial(t.coeff, std::move(wm));
    }
    return cm;
}

size_t matrix_rank(std::vector<std::vector<FieldElement>> m) {
    if (m.empty() || m[0].empty()) return 0;
    const FieldSpec spec = m[0][0].spec();
    if (spec.is_prime()) return gauss_rank(std::move(m));
    std::vector<std::vector<mpz_class>> z;
    z.reserve(m.size());
    for (const auto& row : m) {
        mpz_class l = 1;
        for (const auto& e : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.rational().get_den_mpz_t());
        std::vector<mpz_class> zr;
        zr.reserve(row.size());
        for (const auto& e : row) zr.push_back(e.rational().get_num() * (l / e.rational().get_den()));
        z.push_back(std::move(zr));
    }
    return bareiss_rank(std::move(z));
}

size_t matrix_rank_poly(std::vector<std::vector<SparsePoly>> m) {
    if (m.empty() || m[0].empty()) return 0;
    const size_t rows = m.size(), cols = m[0].size();
    SparsePoly prev = SparsePoly::constant(FieldElement::one(m[0][0].spec()), m[0][0].nvars());
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && m[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (size_t i = r + 1; i < rows; ++i) {
            for (size_t j = c + 1; j < cols; ++j) {
                SparsePoly t = m[r][c] * m[i][j] - m[i][c] * m[r][j];
                m[i][j] = prev.is_constant() ? t.scale(prev.constant_term().inv()) : divide_exact(t, prev);
            }
            m[i][c] = SparsePoly(m[i][c].spec(), m[i][c].nvars());
        }
        prev = m[r][c];
        ++r;
    }
    return r;
}

size_t coeff_dim(const SparsePoly& f, const PartitionSpec& part) {
    CoefficientMatrix cm = coefficient_matrix(f, part);
    if (!cm.polynomial_entries) return matrix_rank(constants_of(cm));
    return matrix_rank_poly(std::move(cm.entries));
}

size_t coeff_dim_at(const SparsePoly& f, const PartitionSpec& part, const std::vector<FieldElement>& w_point) {
    if (w_point.size() != part.w.size()) throw DomainError("w-point must give one value per residual variable");
    std::map<size_t, FieldElement> assign;
    for (size_t i = 0; i < part.w.size(); ++i) assign.emplace(part.w[i], w_point[i]);
    PartitionSpec uv{part.u, part.v, {}};
    return coeff_dim(f.partial_evaluate(assign), uv);
}

size_t eval_dim(const SparsePoly& f, const PartitionSpec& part, const std::vector<FieldElement>& grid) {
    if (!part.w.empty()) throw DomainError("eval_dim needs a partition without residual variables");
    if (grid.empty()) throw DomainError("empty evaluation grid");
    uint64_t points = 1;
    for (size_t i = 0; i < part.v.size(); ++i) {
        points *= grid.size();
        if (points > kMaxEvalGridPoints) throw ResourceError("evaluation grid exceeds 2^20 points");
    }
    CoefficientMatrix cm = coefficient_matrix(f, part);
    auto c = constants_of(cm);
    const FieldSpec& spec = f.spec();
    std::vector<std::vector<FieldElement>> e;
    e.reserve(points);
    std::vector<size_t> digit(part.v.size(), 0);
    for (uint64_t p = 0; p < points; ++p) {
        // Powers of each coordinate as needed by the column monomials.
        std::vector<FieldElement> colval;
        colval.reserve(cm.cols.size());
        for (const auto& b : cm.cols) {
            FieldElement x = FieldElement::one(spec);
            for (size_t i = 0; i < part.v.size(); ++i)
                if (b[i]) x *= grid[digit[i]].pow(b[i]);
            colval.push_back(std::move(x));
        }
        std::vector<FieldElement> row(cm.rows.size(), FieldElement::zero(spec));
        for (size_t a = 0; a < cm.rows.size(); ++a)
            for (size_t b = 0; b < cm.cols.size(); ++b)
                if (!c[a][b].is_zero()) row[a] += c[a][b] * colval[b];
        e.push_back(std::move(row));
        for (size_t i = 0; i < digit.size(); ++i) {
            if (++digit[i] < grid.size()) break;
            digit[i] = 0;
        }
    }
    if (cm.rows.empty()) return 0;
    return matrix_rank(std::move(e));
}

SparsePoly leading_diagonal(const SparsePoly& f, const PartitionSpec& part, const MonomialOrder& ord) {
    return diagonal(f, part, ord, true);
}

SparsePoly trailing_diagonal(const SparsePoly& f, const PartitionSpec& part, const MonomialOrder& ord) {
    return diagonal(f, part, ord, false);
}

}  // namespace ipsw
