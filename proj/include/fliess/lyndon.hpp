#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fliess/noncomm.hpp"
#include "fliess/rational.hpp"
#include "fliess/word.hpp"

namespace fliess {

// A Lie element of the free algebra, kept as its word expansion plus a
// display label recording how it was built ("[E1, [E1, E2]]" for
// brackets, linear-combination text for kernel elements).
struct LieElement {
    NoncommPoly expansion;
    std::string label;

    int degree() const { return expansion.degree(); }
};

// A word is Lyndon when it is nonempty and lexicographically strictly
// smaller than every proper suffix.
inline bool is_lyndon(const Word& w) {
    if (w.is_empty()) return false;
    const auto& a = w.letters();
    for (std::size_t k = 1; k < a.size(); ++k) {
        std::vector<int> suffix(a.begin() + k, a.end());
        if (!(a < suffix)) return false;
    }
    return true;
}

// All Lyndon words of length <= maxlen over {1..M}, in graded-lex order.
// Duval's generation produces them in pure lex order; a stable sort by
// length gives the graded order without disturbing lex ties.
inline std::vector<Word> lyndon_words(int M, int maxlen) {
    std::vector<Word> out;
    if (maxlen < 1) return out;
    std::vector<int> w{1};
    while (!w.empty()) {
        if ((int)w.size() <= maxlen) out.push_back(Word(w));
        // Extend periodically to the window length, then increment the
        // last non-maximal letter.
        std::vector<int> ext;
        while ((int)ext.size() < maxlen) ext.push_back(w[ext.size() % w.size()]);
        w = ext;
        while (!w.empty() && w.back() == M) w.pop_back();
        if (!w.empty()) ++w.back();
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Word& a, const Word& b) { return a.size() < b.size(); });
    return out;
}

// Standard factorization of a Lyndon word of length >= 2: w = u v with
// v the longest proper Lyndon suffix; u is then Lyndon as well.
inline std::pair<Word, Word> lyndon_factorize(const Word& w) {
    const auto& a = w.letters();
    for (std::size_t k = 1; k < a.size(); ++k) {
        Word v(std::vector<int>(a.begin() + k, a.end()));
        if (is_lyndon(v))
            return {Word(std::vector<int>(a.begin(), a.begin() + k)), v};
    }
    throw basis_error("no standard factorization of " + w.str());
}

// Right-normed bracketing of a Lyndon word along its standard
// factorization.  The expansion is triangular: w itself is the
// lex-least word in the support and carries coefficient 1.
inline LieElement lyndon_bracket(int M, const Word& w) {
    if (!is_lyndon(w))
        throw basis_error("not a Lyndon word: " + w.str());
    if (w.size() == 1) {
        return {NoncommPoly::generator(M, w.at(0)), "E" + std::to_string(w.at(0))};
    }
    auto [u, v] = lyndon_factorize(w);
    LieElement lu = lyndon_bracket(M, u);
    LieElement lv = lyndon_bracket(M, v);
    return {bracket(lu.expansion, lv.expansion), "[" + lu.label + ", " + lv.label + "]"};
}

// Number of Lyndon words of length n over an alphabet of size M:
// (1/n) sum over d|n of mu(d) M^(n/d).
inline Int witt_number(int M, int n) {
    auto mobius = [](int m) {
        int mu = 1;
        for (int p = 2; p * p <= m; ++p) {
            if (m % p == 0) {
                m /= p;
                if (m % p == 0) return 0;
                mu = -mu;
            }
        }
        if (m > 1) mu = -mu;
        return mu;
    };
    Int total = 0;
    for (int d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        int mu = mobius(d);
        if (mu == 0) continue;
        Int power;
        mpz_ui_pow_ui(power.get_mpz_t(), (unsigned long)M, (unsigned long)(n / d));
        total += mu * power;
    }
    return total / n;
}

}  // namespace fliess
