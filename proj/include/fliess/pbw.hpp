#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fliess/linalg.hpp"
#include "fliess/lyndon.hpp"
#include "fliess/noncomm.hpp"
#include "fliess/rational.hpp"
#include "fliess/word.hpp"

namespace fliess {

// An ordered list of Lie elements used as a Poincare-Birkhoff-Witt
// ladder.  Elements may be inhomogeneous (kernel elements of a rank
// computation pick up lower-degree tails); their position in the grading
// is their leading degree.
class OrderedLieBasis {
public:
    OrderedLieBasis(int alphabet, std::vector<LieElement> elems)
        : alphabet_(alphabet), elems_(std::move(elems)) {
        for (const auto& e : elems_) {
            detail::check_same_alphabet(alphabet_, e.expansion.alphabet(), "basis");
            if (e.expansion.is_zero())
                throw basis_error("zero element in ordered basis");
        }
    }

    // The full Lyndon-bracket basis up to the given degree, in graded-lex
    // order of the underlying Lyndon words.
    static OrderedLieBasis lyndon(int M, int maxdeg) {
        std::vector<LieElement> elems;
        for (const Word& w : lyndon_words(M, maxdeg))
            elems.push_back(lyndon_bracket(M, w));
        return OrderedLieBasis(M, std::move(elems));
    }

    int alphabet() const { return alphabet_; }
    std::size_t size() const { return elems_.size(); }
    const LieElement& at(std::size_t i) const { return elems_[i]; }
    const std::vector<LieElement>& elements() const { return elems_; }

    // Fails unless every degree n <= maxdeg holds exactly as many
    // elements (by leading degree) as the free Lie algebra does.
    void check_complete(int maxdeg) const {
        std::vector<Int> count((std::size_t)maxdeg + 1, Int(0));
        for (const auto& e : elems_) {
            int d = e.degree();
            if (d <= maxdeg) ++count[(std::size_t)d];
        }
        for (int n = 1; n <= maxdeg; ++n) {
            Int expect = witt_number(alphabet_, n);
            if (count[(std::size_t)n] != expect)
                throw basis_error("incomplete basis: degree " + std::to_string(n) + " has " +
                                  count[(std::size_t)n].get_str() + " elements, expected " +
                                  expect.get_str());
        }
    }

private:
    int alphabet_;
    std::vector<LieElement> elems_;
};

// Ordered monomial e_{i1}^{a1} ... e_{ik}^{ak} with i1 < ... < ik over
// an OrderedLieBasis, together with its word expansion.
struct PBWMonomial {
    std::vector<std::pair<std::size_t, int>> factors;  // (basis index, exponent > 0)
    int degree = 0;                                    // sum of exponent * leading degree
    NoncommPoly expansion;
    Int alpha_factorial = 1;  // product of exponent factorials

    bool is_unit() const { return factors.empty(); }

    std::string str(const OrderedLieBasis& basis) const {
        if (factors.empty()) return "1";
        std::string s;
        for (std::size_t k = 0; k < factors.size(); ++k) {
            if (k) s += ' ';
            s += basis.at(factors[k].first).label;
            if (factors[k].second > 1) s += "^" + std::to_string(factors[k].second);
        }
        return s;
    }
};

// All PBW monomials of degree <= D, sorted by (degree, factor list).
// Includes the empty monomial 1.
inline std::vector<PBWMonomial> pbw_monomials(const OrderedLieBasis& basis, int D) {
    basis.check_complete(D);
    std::vector<PBWMonomial> out;
    PBWMonomial unit{{}, 0, NoncommPoly::unit(basis.alphabet()), 1};
    out.push_back(unit);
    // Depth-first over strictly increasing basis indices.
    std::vector<std::pair<std::size_t, int>> cur;
    auto rec = [&](auto&& self, std::size_t start, int remaining) -> void {
        for (std::size_t i = start; i < basis.size(); ++i) {
            int d = basis.at(i).degree();
            if (d > remaining) continue;
            for (int exp = 1; exp * d <= remaining; ++exp) {
                cur.emplace_back(i, exp);
                PBWMonomial m{cur, 0, NoncommPoly::unit(basis.alphabet()), 1};
                for (const auto& [idx, e] : cur) {
                    m.degree += e * basis.at(idx).degree();
                    m.alpha_factorial *= factorial((unsigned long)e);
                    for (int k = 0; k < e; ++k)
                        m.expansion = mul(m.expansion, basis.at(idx).expansion);
                }
                out.push_back(std::move(m));
                self(self, i + 1, remaining - exp * d);
                cur.pop_back();
            }
        }
    };
    rec(rec, 0, D);
    std::sort(out.begin(), out.end(), [](const PBWMonomial& a, const PBWMonomial& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        return a.factors < b.factors;
    });
    return out;
}

// Straightening table: words of each length n, the monomials of leading
// degree n, and the exact inverse of the leading-coefficient block.
// Expressing a polynomial proceeds from its top degree downward; each
// block solve fixes the monomials led by that degree, whose full
// expansions are then subtracted so lower-degree tails of inhomogeneous
// basis elements land in later blocks.
class PbwTable {
public:
    PbwTable(const OrderedLieBasis& basis, int D) : M_(basis.alphabet()), D_(D) {
        monos_ = pbw_monomials(basis, D);
        blocks_.resize((std::size_t)D + 1);
        for (std::size_t mi = 0; mi < monos_.size(); ++mi)
            blocks_[(std::size_t)monos_[mi].degree].mono_idx.push_back(mi);
        for (int n = 0; n <= D; ++n) {
            Block& blk = blocks_[(std::size_t)n];
            std::size_t nwords = 1;
            for (int k = 0; k < n; ++k) nwords *= (std::size_t)M_;
            if (blk.mono_idx.size() != nwords)
                throw basis_error("degree " + std::to_string(n) + " block is " +
                                  std::to_string(blk.mono_idx.size()) + " monomials for " +
                                  std::to_string(nwords) + " words");
            RatMatrix A(nwords, nwords);
            for (std::size_t c = 0; c < blk.mono_idx.size(); ++c)
                for (const auto& [w, coeff] : monos_[blk.mono_idx[c]].expansion.terms())
                    if ((int)w.size() == n) A.at(word_rank(w), c) = coeff;
            auto inv = invert(A);
            if (!inv)
                throw basis_error("singular straightening block at degree " +
                                  std::to_string(n));
            blk.inv = std::move(*inv);
        }
    }

    int degree_bound() const { return D_; }
    const std::vector<PBWMonomial>& monomials() const { return monos_; }

    // Exact decomposition of h over the PBW monomials, as a sparse map
    // from monomial index to coefficient.
    std::map<std::size_t, Rat> express(const NoncommPoly& h) const {
        detail::check_same_alphabet(M_, h.alphabet(), "pbw express");
        if (h.degree() > D_)
            throw degree_error("polynomial degree " + std::to_string(h.degree()) +
                               " exceeds straightening table bound " + std::to_string(D_));
        std::map<std::size_t, Rat> result;
        NoncommPoly rem = h;
        for (int n = D_; n >= 0; --n) {
            const Block& blk = blocks_[(std::size_t)n];
            std::vector<Rat> b(blk.mono_idx.size(), Rat(0));
            bool any = false;
            for (const auto& [w, c] : rem.terms())
                if ((int)w.size() == n) {
                    b[word_rank(w)] = c;
                    any = true;
                }
            if (!any) continue;
            std::vector<Rat> x = matvec(blk.inv, b);
            for (std::size_t c = 0; c < x.size(); ++c) {
                if (x[c] == 0) continue;
                std::size_t mi = blk.mono_idx[c];
                result[mi] += x[c];
                rem = rem - monos_[mi].expansion * x[c];
            }
        }
        if (!rem.is_zero())
            throw basis_error("straightening left a nonzero remainder");
        for (auto it = result.begin(); it != result.end();)
            it = (it->second == 0) ? result.erase(it) : std::next(it);
        return result;
    }

private:
    struct Block {
        std::vector<std::size_t> mono_idx;
        RatMatrix inv{0, 0};
    };

    std::size_t word_rank(const Word& w) const {
        std::size_t r = 0;
        for (int c : w.letters()) r = r * (std::size_t)M_ + (std::size_t)(c - 1);
        return r;
    }

    int M_;
    int D_;
    std::vector<PBWMonomial> monos_;
    std::vector<Block> blocks_;
};

// One-shot decomposition of h over an ordered basis complete up to D,
// as (monomial, coefficient) pairs in table order.
inline std::vector<std::pair<PBWMonomial, Rat>> express_in_pbw(const NoncommPoly& h,
                                                               const OrderedLieBasis& basis,
                                                               int D) {
    PbwTable table(basis, D);
    std::vector<std::pair<PBWMonomial, Rat>> out;
    for (const auto& [mi, c] : table.express(h))
        out.emplace_back(table.monomials()[mi], c);
    return out;
}

}  // namespace fliess
