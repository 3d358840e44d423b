#include <algorithm>
#include <cctype>

#include "ipsw/poly.hpp"

namespace ipsw {

std::string VarLayout::name(size_t id) const {
    if (id < nx) return "x" + std::to_string(id + 1);
    if (id < nx + ny) return "y" + std::to_string(id - nx + 1);
    if (id < nx + ny + nz) return "z" + std::to_string(id - nx - ny + 1);
    // Ids past the layout fall back to x numbering so nothing is silently lost.
    return "x" + std::to_string(id + 1);
}

std::optional<size_t> VarLayout::lookup(char kind, size_t index) const {
    if (index == 0) return std::nullopt;
    switch (kind) {
        case 'x': if (index <= nx) return x(index); break;
        case 'y': if (index <= ny) return y(index); break;
        case 'z': if (index <= nz) return z(index); break;
        default: break;
    }
    return std::nullopt;
}

std::string monomial_to_string(const Monomial& m, const VarLayout& layout) {
    std::string s;
    for (size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        if (!s.empty()) s += "*";
        s += layout.name(i);
        if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s.empty() ? "1" : s;
}

std::string to_string(const SparsePoly& f, const VarLayout& layout, const MonomialOrder& ord) {
    if (f.is_zero()) return "0";
    std::vector<const Term*> terms;
    for (const auto& t : f.terms()) terms.push_back(&t);
    std::stable_sort(terms.begin(), terms.end(), [&](const Term* a, const Term* b) { return ord.less(b->mono, a->mono); });
    std::string out;
    for (const Term* t : terms) {
        FieldElement c = t->coeff;
        bool negative = f.spec().is_rational() && c.rational() < 0;
        if (negative) c = -c;
        if (out.empty()) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        if (t->mono.is_one()) {
            out += c.to_string();
        } else if (c.is_one()) {
            out += monomial_to_string(t->mono, layout);
        } else {
            out += c.to_string() + "*" + monomial_to_string(t->mono, layout);
        }
    }
    return out;
}

std::string to_string(const SparsePoly& f) { return to_string(f, VarLayout::xs(f.nvars())); }

namespace {

class PolyParser {
public:
    PolyParser(std::string_view text, const FieldSpec& spec, const VarLayout& layout)
        : s_(text), spec_(spec), layout_(layout) {}

    SparsePoly run() {
        SparsePoly p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("polynomial parse error at offset " + std::to_string(pos_) + ": " + msg);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string digits() {
        skip();
        size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (b == pos_) fail("expected a number");
        return std::string(s_.substr(b, pos_ - b));
    }

    SparsePoly expr() {
        SparsePoly acc(spec_, layout_.total());
        bool first = true;
        while (true) {
            bool neg = false;
            if (eat('-')) {
                neg = true;
            } else if (!eat('+') && !first) {
                break;
            }
            SparsePoly t = product();
            acc += neg ? -t : t;
            first = false;
        }
        return acc;
    }

    SparsePoly product() {
        SparsePoly p = power();
        while (eat('*')) p = p * power();
        return p;
    }

    SparsePoly power() {
        SparsePoly a = atom();
        if (eat('^')) {
            std::string d = digits();
            if (d.size() > 5 || std::stoul(d) > 0xFFFF) fail("exponent too large");
            a = a.pow(std::stoul(d));
        }
        return a;
    }

    SparsePoly atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            SparsePoly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (c == 'x' || c == 'y' || c == 'z') {
            ++pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("variable needs an index");
            std::string d = digits();
            if (d.size() > 9) fail("variable index too large");
            auto id = layout_.lookup(c, std::stoul(d));
            if (!id) fail("unknown variable " + std::string(1, c) + d);
            return SparsePoly::variable(spec_, layout_.total(), *id);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num = digits();
            if (eat('/')) num += "/" + digits();
            return SparsePoly::constant(FieldElement::parse(spec_, num), layout_.total());
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    size_t pos_ = 0;
    FieldSpec spec_;
    VarLayout layout_;
};

VarLayout infer_layout(std::string_view text) {
    VarLayout l;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != 'x' && c != 'y' && c != 'z') continue;
        size_t j = i + 1;
        size_t v = 0;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])) && j - i <= 9) v = v * 10 + (text[j++] - '0');
        if (j == i + 1) continue;
        size_t& slot = c == 'x' ? l.nx : c == 'y' ? l.ny : l.nz;
        slot = std::max(slot, v);
    }
    return l;
}

}  // namespace

SparsePoly parse_poly(std::string_view text, const FieldSpec& spec, const VarLayout& layout) {
    return PolyParser(text, spec, layout).run();
}

std::pair<SparsePoly, VarLayout> parse_poly(std::string_view text, const FieldSpec& spec) {
    VarLayout l = infer_layout(text);
    return {PolyParser(text, spec, l).run(), l};
}

}  // namespace ipsw
