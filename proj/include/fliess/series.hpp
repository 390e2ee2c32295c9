#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fliess/noncomm.hpp"
#include "fliess/rational.hpp"
#include "fliess/word.hpp"

namespace fliess {

// Truncated element of the graded dual H*: rational coefficients on all
// words of length <= trunc_degree.  Coefficients not stored are zero;
// asking past the truncation degree is an error rather than a zero.
class Series {
public:
    Series(int alphabet, int trunc_degree)
        : alphabet_(alphabet), trunc_(trunc_degree) {
        if (alphabet < 1) throw context_error("alphabet size must be >= 1");
        if (trunc_degree < 0) throw degree_error("negative truncation degree");
    }

    // Dual basis element xi_w: 1 on w, 0 elsewhere.
    static Series delta(int M, int D, const Word& w) {
        Series p(M, D);
        p.set_coeff(w, 1);
        return p;
    }

    // The counit as a series; the unit of the shuffle product on H*.
    static Series epsilon(int M, int D) { return delta(M, D, Word::empty()); }

    int alphabet() const { return alphabet_; }
    int trunc_degree() const { return trunc_; }
    const std::map<Word, Rat>& coeffs() const { return coeffs_; }

    Rat coeff(const Word& w) const {
        check_degree(w);
        auto it = coeffs_.find(w);
        return it == coeffs_.end() ? Rat(0) : it->second;
    }

    void set_coeff(const Word& w, const Rat& c) {
        check_degree(w);
        detail::check_letters(w, alphabet_);
        if (c == 0)
            coeffs_.erase(w);
        else
            coeffs_[w] = c;
    }

    void add_coeff(const Word& w, const Rat& c) { set_coeff(w, coeff(w) + c); }

    bool operator==(const Series& q) const {
        return alphabet_ == q.alphabet_ && trunc_ == q.trunc_ && coeffs_ == q.coeffs_;
    }

    Series operator+(const Series& q) const {
        detail::check_same_alphabet(alphabet_, q.alphabet_, "series add");
        Series r(alphabet_, std::min(trunc_, q.trunc_));
        for (const auto& [w, c] : coeffs_)
            if ((int)w.size() <= r.trunc_) r.add_coeff(w, c);
        for (const auto& [w, c] : q.coeffs_)
            if ((int)w.size() <= r.trunc_) r.add_coeff(w, c);
        return r;
    }
    Series operator-(const Series& q) const { return *this + q * Rat(-1); }
    Series operator*(const Rat& s) const {
        Series r(alphabet_, trunc_);
        if (s == 0) return r;
        for (const auto& [w, c] : coeffs_) r.coeffs_[w] = c * s;
        return r;
    }

    bool equal_up_to(const Series& q, int d) const {
        detail::check_same_alphabet(alphabet_, q.alphabet_, "series compare");
        if (d > trunc_ || d > q.trunc_)
            throw degree_error("comparison degree exceeds truncation");
        for (const auto& [w, c] : coeffs_)
            if ((int)w.size() <= d && q.coeff(w) != c) return false;
        for (const auto& [w, c] : q.coeffs_)
            if ((int)w.size() <= d && coeff(w) != c) return false;
        return true;
    }

private:
    void check_degree(const Word& w) const {
        if ((int)w.size() > trunc_)
            throw degree_error("word " + w.str() + " exceeds truncation degree " +
                               std::to_string(trunc_));
    }

    int alphabet_;
    int trunc_;
    std::map<Word, Rat> coeffs_;
};

inline Series operator*(const Rat& s, const Series& p) { return p * s; }

// Shuffle product on the truncated dual, computed term by term over the
// supports.  The result is truncated at D, which may not exceed either
// operand's truncation degree.
inline Series series_mul(const Series& p, const Series& q, int D = -1) {
    detail::check_same_alphabet(p.alphabet(), q.alphabet(), "series mul");
    if (D < 0) D = std::min(p.trunc_degree(), q.trunc_degree());
    if (D > p.trunc_degree() || D > q.trunc_degree())
        throw degree_error("product degree exceeds operand truncation");
    Series r(p.alphabet(), D);
    for (const auto& [u, cu] : p.coeffs())
        for (const auto& [v, cv] : q.coeffs()) {
            if ((int)(u.size() + v.size()) > D) continue;
            NoncommPoly s = shuffle_words(p.alphabet(), u, v);
            for (const auto& [w, c] : s.terms()) r.add_coeff(w, c * cu * cv);
        }
    return r;
}

// Dual pairing <p, h>: evaluate the truncated functional on a polynomial.
inline Rat pair(const Series& p, const NoncommPoly& h) {
    detail::check_same_alphabet(p.alphabet(), h.alphabet(), "pair");
    if (h.degree() > p.trunc_degree())
        throw degree_error("polynomial degree exceeds series truncation");
    Rat out = 0;
    for (const auto& [w, c] : h.terms()) out += p.coeff(w) * c;
    return out;
}

// Right action of H on H*: (p <| h)(k) = p(h k).  The result is a
// functional known on words of length <= p.D - deg(h).
inline Series ract(const Series& p, const NoncommPoly& h) {
    detail::check_same_alphabet(p.alphabet(), h.alphabet(), "ract");
    if (h.degree() > p.trunc_degree())
        throw degree_error("action degree exceeds series truncation");
    Series r(p.alphabet(), p.trunc_degree() - h.degree());
    for (const auto& [w, c] : p.coeffs()) {
        for (const auto& [u, cu] : h.terms()) {
            if (u.size() > w.size()) continue;
            // w = u k contributes c * cu at k.
            bool prefix = std::equal(u.letters().begin(), u.letters().end(),
                                     w.letters().begin());
            if (!prefix) continue;
            Word k(std::vector<int>(w.letters().begin() + u.size(), w.letters().end()));
            if ((int)k.size() <= r.trunc_degree()) r.add_coeff(k, c * cu);
        }
    }
    return r;
}

// Left action of H on H*: (h |> p)(k) = p(k h).
inline Series lact(const NoncommPoly& h, const Series& p) {
    detail::check_same_alphabet(p.alphabet(), h.alphabet(), "lact");
    if (h.degree() > p.trunc_degree())
        throw degree_error("action degree exceeds series truncation");
    Series r(p.alphabet(), p.trunc_degree() - h.degree());
    for (const auto& [w, c] : p.coeffs()) {
        for (const auto& [u, cu] : h.terms()) {
            if (u.size() > w.size()) continue;
            bool suffix = std::equal(u.letters().begin(), u.letters().end(),
                                     w.letters().end() - u.size());
            if (!suffix) continue;
            Word k(std::vector<int>(w.letters().begin(), w.letters().end() - u.size()));
            if ((int)k.size() <= r.trunc_degree()) r.add_coeff(k, c * cu);
        }
    }
    return r;
}

// Text form:
//   alphabet M degree D
//   i1 i2 ... ik : p/q
// with "e" for the empty word and "#" starting a comment.  Printing is
// canonical (graded-lex order, no zero terms) and parse(print(s)) == s.
inline std::string series_print(const Series& p) {
    std::string out = "alphabet " + std::to_string(p.alphabet()) + " degree " +
                      std::to_string(p.trunc_degree()) + "\n";
    for (const auto& [w, c] : p.coeffs()) {
        out += w.str();
        out += " : ";
        out += rat_str(c);
        out += '\n';
    }
    return out;
}

inline Series series_parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_header = false;
    int M = 0, D = 0;
    std::vector<std::pair<Word, Rat>> entries;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;  // blank line
        if (!have_header) {
            std::string kw2;
            if (tok != "alphabet" || !(ls >> M >> kw2 >> D) || kw2 != "degree")
                throw parse_error("line " + std::to_string(lineno) +
                                  ": expected 'alphabet M degree D' header");
            if (M < 1 || D < 0)
                throw parse_error("line " + std::to_string(lineno) + ": bad header values");
            std::string extra;
            if (ls >> extra)
                throw parse_error("line " + std::to_string(lineno) + ": trailing tokens");
            have_header = true;
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw parse_error("line " + std::to_string(lineno) + ": missing ':'");
        std::istringstream ws(line.substr(0, colon));
        std::vector<int> letters;
        bool saw_empty = false;
        while (ws >> tok) {
            if (tok == "e") {
                saw_empty = true;
            } else {
                std::size_t used = 0;
                int v = 0;
                try {
                    v = std::stoi(tok, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != tok.size() || v < 1)
                    throw parse_error("line " + std::to_string(lineno) + ": bad letter '" +
                                      tok + "'");
                letters.push_back(v);
            }
        }
        if (saw_empty && !letters.empty())
            throw parse_error("line " + std::to_string(lineno) + ": 'e' mixed with letters");
        if (!saw_empty && letters.empty())
            throw parse_error("line " + std::to_string(lineno) + ": missing word before ':'");
        std::istringstream cs(line.substr(colon + 1));
        std::string coeff_tok;
        if (!(cs >> coeff_tok))
            throw parse_error("line " + std::to_string(lineno) + ": missing coefficient");
        std::string extra;
        if (cs >> extra)
            throw parse_error("line " + std::to_string(lineno) + ": trailing tokens");
        Rat c;
        try {
            c = rat_parse(coeff_tok);
        } catch (const parse_error& e) {
            throw parse_error("line " + std::to_string(lineno) + ": " + e.what());
        }
        entries.emplace_back(Word(std::move(letters)), c);
    }
    if (!have_header) throw parse_error("missing 'alphabet M degree D' header");
    Series p(M, D);
    std::map<Word, bool> seen;
    for (auto& [w, c] : entries) {
        if (seen.count(w)) throw parse_error("duplicate word " + w.str());
        seen[w] = true;
        if ((int)w.size() > D)
            throw parse_error("word " + w.str() + " exceeds declared degree " +
                              std::to_string(D));
        if (w.max_letter() > M)
            throw parse_error("word " + w.str() + " outside alphabet of size " +
                              std::to_string(M));
        p.set_coeff(w, c);
    }
    return p;
}

}  // namespace fliess
