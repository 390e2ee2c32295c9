#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fliess/error.hpp"
#include "fliess/rational.hpp"

namespace fliess {

// Sparse polynomial in nvars commuting variables with rational
// coefficients, keyed by exponent vector.
class MultiPoly {
public:
    explicit MultiPoly(int nvars) : nvars_(nvars) {
        if (nvars < 0) throw context_error("negative variable count");
    }

    static MultiPoly zero(int nvars) { return MultiPoly(nvars); }
    static MultiPoly constant(int nvars, const Rat& c) {
        MultiPoly p(nvars);
        if (c != 0) p.terms_[std::vector<int>((std::size_t)nvars, 0)] = c;
        return p;
    }
    // Variables are 1-indexed to match coordinate conventions elsewhere.
    static MultiPoly variable(int nvars, int i) {
        if (i < 1 || i > nvars)
            throw context_error("variable index " + std::to_string(i) + " out of range");
        MultiPoly p(nvars);
        std::vector<int> expo((std::size_t)nvars, 0);
        expo[(std::size_t)i - 1] = 1;
        p.terms_[expo] = 1;
        return p;
    }
    static MultiPoly monomial(int nvars, std::vector<int> expo, const Rat& c) {
        MultiPoly p(nvars);
        if ((int)expo.size() != nvars) throw context_error("exponent vector length mismatch");
        for (int e : expo)
            if (e < 0) throw context_error("negative exponent");
        if (c != 0) p.terms_[std::move(expo)] = c;
        return p;
    }

    int nvars() const { return nvars_; }
    const std::map<std::vector<int>, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int total_degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (int k : e) s += k;
            d = std::max(d, s);
        }
        return d;
    }

    Rat coeff(const std::vector<int>& expo) const {
        auto it = terms_.find(expo);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    MultiPoly& add_term(const std::vector<int>& expo, const Rat& c) {
        Rat& slot = terms_[expo];
        slot += c;
        if (slot == 0) terms_.erase(expo);
        return *this;
    }

    MultiPoly operator+(const MultiPoly& q) const {
        check_vars(q);
        MultiPoly r = *this;
        for (const auto& [e, c] : q.terms_) r.add_term(e, c);
        return r;
    }
    MultiPoly operator-(const MultiPoly& q) const {
        check_vars(q);
        MultiPoly r = *this;
        for (const auto& [e, c] : q.terms_) r.add_term(e, -c);
        return r;
    }
    MultiPoly operator-() const {
        MultiPoly r(nvars_);
        for (const auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }
    MultiPoly operator*(const MultiPoly& q) const {
        check_vars(q);
        MultiPoly r(nvars_);
        for (const auto& [e1, c1] : terms_)
            for (const auto& [e2, c2] : q.terms_) {
                std::vector<int> e = e1;
                for (std::size_t k = 0; k < e.size(); ++k) e[k] += e2[k];
                r.add_term(e, c1 * c2);
            }
        return r;
    }
    MultiPoly operator*(const Rat& s) const {
        MultiPoly r(nvars_);
        if (s == 0) return r;
        for (const auto& [e, c] : terms_) r.terms_[e] = c * s;
        return r;
    }

    bool operator==(const MultiPoly& q) const {
        return nvars_ == q.nvars_ && terms_ == q.terms_;
    }

    Rat eval(const std::vector<Rat>& x) const {
        if ((int)x.size() != nvars_) throw context_error("evaluation point length mismatch");
        Rat out = 0;
        for (const auto& [e, c] : terms_) {
            Rat t = c;
            for (std::size_t k = 0; k < e.size(); ++k)
                for (int j = 0; j < e[k]; ++j) t *= x[k];
            out += t;
        }
        return out;
    }

    double eval_double(const std::vector<double>& x) const {
        double out = 0.0;
        for (const auto& [e, c] : terms_) {
            double t = rat_double(c);
            for (std::size_t k = 0; k < e.size(); ++k)
                for (int j = 0; j < e[k]; ++j) t *= x[k];
            out += t;
        }
        return out;
    }

    // Leading terms first: total degree descending, then exponent vector
    // descending (first variable dominant).
    std::string str(const std::vector<std::string>& names) const {
        std::vector<std::pair<std::vector<int>, Rat>> ts(terms_.begin(), terms_.end());
        std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
            int da = 0, db = 0;
            for (int k : a.first) da += k;
            for (int k : b.first) db += k;
            if (da != db) return da > db;
            return a.first > b.first;
        });
        std::vector<std::pair<std::string, Rat>> parts;
        for (const auto& [e, c] : ts) {
            std::string atom;
            for (std::size_t k = 0; k < e.size(); ++k) {
                if (e[k] == 0) continue;
                if (!atom.empty()) atom += '*';
                atom += names[k];
                if (e[k] > 1) atom += '^' + std::to_string(e[k]);
            }
            parts.emplace_back(atom.empty() ? "__unit__" : atom, c);
        }
        return detail::combo_str(parts);
    }

    std::string str() const {
        std::vector<std::string> names;
        for (int i = 1; i <= nvars_; ++i) names.push_back("x" + std::to_string(i));
        return str(names);
    }

private:
    void check_vars(const MultiPoly& q) const {
        if (nvars_ != q.nvars_) throw context_error("mixed variable counts");
    }

    int nvars_;
    std::map<std::vector<int>, Rat> terms_;
};

inline MultiPoly operator*(const Rat& s, const MultiPoly& p) { return p * s; }

// Partial derivative with respect to the i-th variable (1-indexed).
inline MultiPoly partial(const MultiPoly& p, int i) {
    if (i < 1 || i > p.nvars())
        throw context_error("partial index " + std::to_string(i) + " out of range");
    MultiPoly r(p.nvars());
    for (const auto& [e, c] : p.terms()) {
        if (e[(std::size_t)i - 1] == 0) continue;
        std::vector<int> e2 = e;
        int k = e2[(std::size_t)i - 1]--;
        r.add_term(e2, c * k);
    }
    return r;
}

// Recursive-descent parser for +, -, *, ^ over rational constants and
// the given variable names.  Multiplication must be explicit.
class PolyParser {
public:
    PolyParser(const std::string& text, std::vector<std::string> names)
        : text_(text), names_(std::move(names)) {}

    MultiPoly parse() {
        MultiPoly p = expr();
        skip_ws();
        if (pos_ != text_.size())
            throw parse_error("unexpected '" + text_.substr(pos_) + "' in polynomial");
        return p;
    }

private:
    int nvars() const { return (int)names_.size(); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_])) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    MultiPoly expr() {
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        MultiPoly p = term();
        if (neg) p = -p;
        for (;;) {
            if (eat('+'))
                p = p + term();
            else if (eat('-'))
                p = p - term();
            else
                break;
        }
        return p;
    }

    MultiPoly term() {
        MultiPoly p = factor();
        while (eat('*')) p = p * factor();
        return p;
    }

    MultiPoly factor() {
        MultiPoly base = atom();
        if (eat('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) ++pos_;
            if (start == pos_) throw parse_error("missing exponent");
            int n = std::stoi(text_.substr(start, pos_ - start));
            MultiPoly out = MultiPoly::constant(nvars(), 1);
            for (int k = 0; k < n; ++k) out = out * base;
            return out;
        }
        return base;
    }

    MultiPoly atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw parse_error("unexpected end of polynomial");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            MultiPoly p = expr();
            if (!eat(')')) throw parse_error("missing ')'");
            return p;
        }
        if (std::isdigit((unsigned char)c)) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '/') {
                ++pos_;
                if (pos_ >= text_.size() || !std::isdigit((unsigned char)text_[pos_]))
                    throw parse_error("missing denominator");
                while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) ++pos_;
            }
            return MultiPoly::constant(nvars(), rat_parse(text_.substr(start, pos_ - start)));
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_'))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            for (std::size_t k = 0; k < names_.size(); ++k)
                if (names_[k] == name) return MultiPoly::variable(nvars(), (int)k + 1);
            throw parse_error("unknown variable '" + name + "'");
        }
        throw parse_error(std::string("unexpected character '") + c + "' in polynomial");
    }

    std::string text_;
    std::vector<std::string> names_;
    std::size_t pos_ = 0;
};

inline MultiPoly poly_parse(const std::string& text, const std::vector<std::string>& names) {
    return PolyParser(text, names).parse();
}

inline MultiPoly poly_parse(const std::string& text, int nvars) {
    std::vector<std::string> names;
    for (int i = 1; i <= nvars; ++i) names.push_back("x" + std::to_string(i));
    return poly_parse(text, names);
}

}  // namespace fliess
