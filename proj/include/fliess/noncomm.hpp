#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fliess/rational.hpp"
#include "fliess/word.hpp"

namespace fliess {

namespace detail {

inline void check_same_alphabet(int a, int b, const char* what) {
    if (a != b)
        throw context_error(std::string(what) + ": mixed alphabets " +
                            std::to_string(a) + " and " + std::to_string(b));
}

inline void check_letters(const Word& w, int M) {
    if (w.max_letter() > M)
        throw context_error("word " + w.str() + " has letters outside alphabet of size " +
                            std::to_string(M));
}

}  // namespace detail

// Element of the free associative algebra on E_1, ..., E_M: a finite
// rational linear combination of words.  Immutable in use; all
// operations build new values.
class NoncommPoly {
public:
    explicit NoncommPoly(int alphabet) : alphabet_(alphabet) {
        if (alphabet < 1) throw context_error("alphabet size must be >= 1");
    }
    NoncommPoly(int alphabet, std::map<Word, Rat> terms)
        : alphabet_(alphabet), terms_(std::move(terms)) {
        if (alphabet < 1) throw context_error("alphabet size must be >= 1");
        for (auto it = terms_.begin(); it != terms_.end();) {
            detail::check_letters(it->first, alphabet_);
            if (it->second == 0)
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    static NoncommPoly zero(int M) { return NoncommPoly(M); }
    static NoncommPoly unit(int M) { return word_elem(M, Word::empty()); }
    static NoncommPoly generator(int M, int i) {
        if (i < 1 || i > M)
            throw context_error("generator index " + std::to_string(i) +
                                " outside alphabet of size " + std::to_string(M));
        return word_elem(M, Word::letter(i));
    }
    static NoncommPoly word_elem(int M, const Word& w) {
        NoncommPoly p(M);
        detail::check_letters(w, M);
        p.terms_[w] = 1;
        return p;
    }

    int alphabet() const { return alphabet_; }
    const std::map<Word, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Maximum word length in the support; 0 for the zero polynomial.
    int degree() const {
        int d = 0;
        for (const auto& [w, c] : terms_) d = std::max<int>(d, (int)w.size());
        return d;
    }

    Rat coeff(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    NoncommPoly& add_term(const Word& w, const Rat& c) {
        detail::check_letters(w, alphabet_);
        Rat& slot = terms_[w];
        slot += c;
        if (slot == 0) terms_.erase(w);
        return *this;
    }

    NoncommPoly operator+(const NoncommPoly& q) const {
        detail::check_same_alphabet(alphabet_, q.alphabet_, "poly add");
        NoncommPoly r = *this;
        for (const auto& [w, c] : q.terms_) r.add_term(w, c);
        return r;
    }
    NoncommPoly operator-(const NoncommPoly& q) const {
        detail::check_same_alphabet(alphabet_, q.alphabet_, "poly sub");
        NoncommPoly r = *this;
        for (const auto& [w, c] : q.terms_) r.add_term(w, -c);
        return r;
    }
    NoncommPoly operator-() const {
        NoncommPoly r(alphabet_);
        for (const auto& [w, c] : terms_) r.terms_[w] = -c;
        return r;
    }
    NoncommPoly operator*(const Rat& s) const {
        NoncommPoly r(alphabet_);
        if (s == 0) return r;
        for (const auto& [w, c] : terms_) r.terms_[w] = c * s;
        return r;
    }

    bool operator==(const NoncommPoly& q) const {
        return alphabet_ == q.alphabet_ && terms_ == q.terms_;
    }

    std::string str() const {
        std::vector<std::pair<std::string, Rat>> parts;
        for (const auto& [w, c] : terms_) {
            if (w.is_empty())
                parts.emplace_back("__unit__", c);
            else
                parts.emplace_back("(" + w.str() + ")", c);
        }
        return detail::combo_str(parts);
    }

private:
    int alphabet_;
    std::map<Word, Rat> terms_;
};

inline NoncommPoly operator*(const Rat& s, const NoncommPoly& p) { return p * s; }

// Concatenation product, extended bilinearly.
inline NoncommPoly mul(const NoncommPoly& a, const NoncommPoly& b) {
    detail::check_same_alphabet(a.alphabet(), b.alphabet(), "poly mul");
    NoncommPoly r(a.alphabet());
    for (const auto& [u, cu] : a.terms())
        for (const auto& [v, cv] : b.terms()) r.add_term(u.concat(v), cu * cv);
    return r;
}

inline NoncommPoly operator*(const NoncommPoly& a, const NoncommPoly& b) {
    return mul(a, b);
}

inline NoncommPoly bracket(const NoncommPoly& a, const NoncommPoly& b) {
    return mul(a, b) - mul(b, a);
}

// Element of H (x) H, kept fully expanded over word (x) word.
class TensorExpansion {
public:
    explicit TensorExpansion(int alphabet) : alphabet_(alphabet) {}

    int alphabet() const { return alphabet_; }
    const std::map<std::pair<Word, Word>, Rat>& terms() const { return terms_; }

    Rat coeff(const Word& l, const Word& r) const {
        auto it = terms_.find({l, r});
        return it == terms_.end() ? Rat(0) : it->second;
    }

    TensorExpansion& add_term(const Word& l, const Word& r, const Rat& c) {
        detail::check_letters(l, alphabet_);
        detail::check_letters(r, alphabet_);
        Rat& slot = terms_[{l, r}];
        slot += c;
        if (slot == 0) terms_.erase({l, r});
        return *this;
    }

    TensorExpansion operator+(const TensorExpansion& t) const {
        detail::check_same_alphabet(alphabet_, t.alphabet_, "tensor add");
        TensorExpansion r = *this;
        for (const auto& [k, c] : t.terms_) r.add_term(k.first, k.second, c);
        return r;
    }

    // Componentwise concatenation product on H (x) H.
    TensorExpansion operator*(const TensorExpansion& t) const {
        detail::check_same_alphabet(alphabet_, t.alphabet_, "tensor mul");
        TensorExpansion r(alphabet_);
        for (const auto& [k, c] : terms_)
            for (const auto& [k2, c2] : t.terms_)
                r.add_term(k.first.concat(k2.first), k.second.concat(k2.second), c * c2);
        return r;
    }

    bool operator==(const TensorExpansion& t) const {
        return alphabet_ == t.alphabet_ && terms_ == t.terms_;
    }

    std::string str() const {
        std::vector<std::pair<std::string, Rat>> parts;
        for (const auto& [k, c] : terms_) {
            std::string atom = (k.first.is_empty() ? "e" : "(" + k.first.str() + ")");
            atom += " (x) ";
            atom += (k.second.is_empty() ? "e" : "(" + k.second.str() + ")");
            parts.emplace_back(atom, c);
        }
        return detail::combo_str(parts);
    }

private:
    int alphabet_;
    std::map<std::pair<Word, Word>, Rat> terms_;
};

// Coproduct on which every generator is primitive,
// Delta(E_i) = 1 (x) E_i + E_i (x) 1, so a length-n word expands over
// the 2^n splittings of its positions into a left and a right subword.
inline TensorExpansion coproduct(const NoncommPoly& h) {
    TensorExpansion out(h.alphabet());
    for (const auto& [w, c] : h.terms()) {
        std::size_t n = w.size();
        for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
            std::vector<std::size_t> left, right;
            for (std::size_t k = 0; k < n; ++k)
                ((mask >> k) & 1u ? left : right).push_back(k);
            out.add_term(w.subword(left), w.subword(right), c);
        }
    }
    return out;
}

// Counit: the coefficient of the empty word.
inline Rat counit(const NoncommPoly& h) { return h.coeff(Word::empty()); }

// Shuffle product of two words, expanded over all interleavings.
inline NoncommPoly shuffle_words(int M, const Word& a, const Word& b) {
    detail::check_letters(a, M);
    detail::check_letters(b, M);
    if (a.is_empty()) return NoncommPoly::word_elem(M, b);
    if (b.is_empty()) return NoncommPoly::word_elem(M, a);
    NoncommPoly r(M);
    auto prepend = [&r](int letter, const NoncommPoly& tail) {
        for (const auto& [w, c] : tail.terms())
            r.add_term(Word::letter(letter).concat(w), c);
    };
    prepend(a.at(0), shuffle_words(M, a.drop_first(), b));
    prepend(b.at(0), shuffle_words(M, a, b.drop_first()));
    return r;
}

inline NoncommPoly shuffle(const NoncommPoly& a, const NoncommPoly& b) {
    detail::check_same_alphabet(a.alphabet(), b.alphabet(), "shuffle");
    NoncommPoly r(a.alphabet());
    for (const auto& [u, cu] : a.terms())
        for (const auto& [v, cv] : b.terms()) {
            NoncommPoly s = shuffle_words(a.alphabet(), u, v);
            for (const auto& [w, c] : s.terms()) r.add_term(w, c * cu * cv);
        }
    return r;
}

// Parses the canonical NoncommPoly text form: sign-separated terms,
// each an optional rational coefficient (with '*') in front of a
// bracketed word "(1 2)" or the unit "e"; "0" is the zero polynomial.
inline NoncommPoly noncomm_parse(const std::string& text, int M) {
    NoncommPoly out(M);
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    };
    skip_ws();
    if (pos >= text.size()) throw parse_error("empty polynomial text");
    if (text.compare(pos, 1, "0") == 0 && pos + 1 == text.size()) return out;
    bool first = true;
    while (pos < text.size()) {
        skip_ws();
        Rat sign = 1;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            if (text[pos] == '-') sign = -1;
            ++pos;
            skip_ws();
        } else if (!first) {
            throw parse_error("expected '+' or '-' in polynomial at '" +
                              text.substr(pos) + "'");
        }
        first = false;
        Rat coeff = 1;
        bool have_coeff = false;
        if (pos < text.size() && std::isdigit((unsigned char)text[pos])) {
            std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isdigit((unsigned char)text[pos]) || text[pos] == '/'))
                ++pos;
            coeff = rat_parse(text.substr(start, pos - start));
            have_coeff = true;
            skip_ws();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                skip_ws();
            } else {
                // Bare constant term.
                out.add_term(Word::empty(), sign * coeff);
                skip_ws();
                continue;
            }
        }
        if (pos < text.size() && text[pos] == 'e') {
            ++pos;
            out.add_term(Word::empty(), sign * coeff);
        } else if (pos < text.size() && text[pos] == '(') {
            ++pos;
            std::vector<int> letters;
            for (;;) {
                skip_ws();
                if (pos < text.size() && text[pos] == ')') {
                    ++pos;
                    break;
                }
                std::size_t start = pos;
                while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
                if (start == pos) throw parse_error("expected letter in word");
                letters.push_back(std::stoi(text.substr(start, pos - start)));
            }
            if (letters.empty()) throw parse_error("empty word brackets");
            out.add_term(Word(letters), sign * coeff);
        } else {
            throw parse_error(have_coeff ? "expected word after '*'"
                                         : "expected term in polynomial");
        }
        skip_ws();
    }
    return out;
}

}  // namespace fliess
