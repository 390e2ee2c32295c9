#pragma once

#include <gmpxx.h>

#include <charconv>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "fliess/error.hpp"

namespace fliess {

// Exact arithmetic everywhere on the symbolic side: Rat is an
// arbitrary-precision rational, Int an arbitrary-precision integer.
using Rat = mpq_class;
using Int = mpz_class;

// Parses "p", "-p", or "p/q" into a canonical rational.
inline Rat rat_parse(const std::string& text) {
    if (text.empty()) throw parse_error("empty rational");
    mpq_class q;
    if (q.set_str(text, 10) != 0)
        throw parse_error("bad rational '" + text + "'");
    if (q.get_den() == 0)
        throw parse_error("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

// Canonical text form: "p" when the denominator is 1, else "p/q".
inline std::string rat_str(const Rat& q) {
    return q.get_str();
}

inline Int factorial(unsigned long n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline double rat_double(const Rat& q) {
    return q.get_d();
}

// Shortest decimal form that round-trips to the same double.  Used for
// all floating-point output so runs are byte-reproducible.
inline std::string double_str(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace detail {

// Shared term formatting for linear combinations: sign-separated terms,
// unit coefficients dropped in front of a non-unit atom.  The sentinel
// atom "__unit__" stands for the formal unit and prints as a bare
// coefficient.
inline std::string combo_str(const std::vector<std::pair<std::string, Rat>>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [atom, c] : terms) {
        Rat a = abs(c);
        bool neg = c < 0;
        if (first) {
            if (neg) out += '-';
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        if (a == 1 && atom != "__unit__") {
            out += atom;
        } else if (atom == "__unit__") {
            out += rat_str(a);
        } else {
            out += rat_str(a);
            out += '*';
            out += atom;
        }
    }
    return out;
}

}  // namespace detail

}  // namespace fliess
