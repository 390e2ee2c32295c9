#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fliess/linalg.hpp"
#include "fliess/lyndon.hpp"
#include "fliess/multipoly.hpp"
#include "fliess/pbw.hpp"
#include "fliess/series.hpp"
#include "fliess/system.hpp"
#include "fliess/tree.hpp"

namespace fliess {

// Word-indexed generating series of a system: the coefficient of
// mu_1...mu_k is E_{mu_k} ... E_{mu_1} f evaluated at x0.  Words are
// walked as a prefix tree so each successive derivation application is
// shared, and zero intermediate polynomials prune their extensions.
inline Series generating_series(const System& sys, int D) {
    sys.validate();
    if (D < 0) throw degree_error("negative series degree");
    Series p(sys.M, D);
    std::function<void(const Word&, const MultiPoly&)> rec = [&](const Word& w,
                                                                 const MultiPoly& fw) {
        Rat c = eval_point(fw, sys.x0);
        if (c != 0) p.set_coeff(w, c);
        if ((int)w.size() == D || fw.is_zero()) return;
        for (int letter = 1; letter <= sys.M; ++letter)
            rec(w.append(letter),
                apply_derivation(sys.derivations[(std::size_t)letter - 1], fw));
    };
    rec(Word::empty(), sys.observation);
    return p;
}

// Tree-indexed generating series: coefficient of t is psi(t)f at x0.
inline std::map<LabeledTree, Rat> tree_generating_series(const System& sys, int g) {
    sys.validate();
    std::map<LabeledTree, Rat> out;
    for (const LabeledTree& t : trees_up_to_grade(sys.M, g))
        out[t] = eval_point(psi(sys, t, sys.observation), sys.x0);
    return out;
}

// Exact rank data for the action of Lie elements of degree <= d on the
// truncated series p.  Rows are the Lyndon brackets in graded-lex
// order, columns the words w with |w| <= D - d, entries p(w l).
struct RankCertificate {
    int lie_degree = 0;
    int series_degree = 0;
    int rank = 0;
    std::vector<LieElement> complement;
    std::vector<LieElement> l_basis;
    RatMatrix evaluation_matrix{0, 0};
    std::vector<Word> row_words;     // Lyndon word per row
    std::vector<Word> column_words;  // word per column
    int alphabet = 0;
};

inline RankCertificate lie_rank(const Series& p, int d) {
    if (d < 0) throw degree_error("negative Lie degree");
    if (d > p.trunc_degree())
        throw degree_error("Lie degree " + std::to_string(d) +
                           " exceeds series truncation " +
                           std::to_string(p.trunc_degree()));
    int M = p.alphabet();
    RankCertificate cert;
    cert.lie_degree = d;
    cert.series_degree = p.trunc_degree();
    cert.alphabet = M;
    cert.row_words = lyndon_words(M, d);
    cert.column_words = words_up_to(M, p.trunc_degree() - d);

    std::vector<LieElement> brackets;
    for (const Word& lw : cert.row_words) brackets.push_back(lyndon_bracket(M, lw));

    RatMatrix mat(brackets.size(), cert.column_words.size());
    for (std::size_t i = 0; i < brackets.size(); ++i)
        for (std::size_t j = 0; j < cert.column_words.size(); ++j) {
            Rat entry = 0;
            for (const auto& [v, c] : brackets[i].expansion.terms())
                entry += c * p.coeff(cert.column_words[j].concat(v));
            mat.at(i, j) = entry;
        }

    RowAnalysis rows = analyze_rows(mat);
    cert.rank = (int)rows.independent.size();
    for (std::size_t idx : rows.independent) cert.complement.push_back(brackets[idx]);
    for (const auto& dep : rows.dependents) {
        // Kernel element: the dependent bracket minus its expansion over
        // the earlier independent rows.
        NoncommPoly expans = brackets[dep.row].expansion;
        std::vector<std::pair<std::string, Rat>> label_terms;
        label_terms.emplace_back(brackets[dep.row].label, Rat(1));
        for (std::size_t k = 0; k < dep.combo.size(); ++k) {
            if (dep.combo[k] == 0) continue;
            expans = expans - brackets[rows.independent[k]].expansion * dep.combo[k];
            label_terms.emplace_back(brackets[rows.independent[k]].label, -dep.combo[k]);
        }
        cert.l_basis.push_back({expans, detail::combo_str(label_terms)});
    }
    cert.evaluation_matrix = std::move(mat);
    return cert;
}

// Bracket-closure diagnostic on the truncated L: [l1, l2] should stay
// inside the span of L_basis.  Failures are reported as warnings, not
// errors, since truncation can cut genuine closure.
inline std::vector<std::string> check_l_closure(const RankCertificate& cert) {
    std::vector<std::string> warnings;
    int half = cert.lie_degree / 2;
    std::vector<Word> all = words_up_to(cert.alphabet, cert.lie_degree);
    std::map<Word, std::size_t> windex;
    for (std::size_t k = 0; k < all.size(); ++k) windex[all[k]] = k;
    RatMatrix A(all.size(), cert.l_basis.size());
    for (std::size_t j = 0; j < cert.l_basis.size(); ++j)
        for (const auto& [w, c] : cert.l_basis[j].expansion.terms())
            A.at(windex.at(w), j) = c;
    for (std::size_t i = 0; i < cert.l_basis.size(); ++i) {
        if (cert.l_basis[i].degree() > half) continue;
        for (std::size_t j = i + 1; j < cert.l_basis.size(); ++j) {
            if (cert.l_basis[j].degree() > half) continue;
            NoncommPoly br =
                bracket(cert.l_basis[i].expansion, cert.l_basis[j].expansion);
            if (br.is_zero()) continue;
            std::vector<Rat> b(all.size(), Rat(0));
            for (const auto& [w, c] : br.terms()) b[windex.at(w)] = c;
            if (!solve(A, b))
                warnings.push_back("bracket of L elements " + std::to_string(i + 1) +
                                   " and " + std::to_string(j + 1) +
                                   " leaves the span of L at degree " +
                                   std::to_string(cert.lie_degree));
        }
    }
    return warnings;
}

// State-space realization data: the adapted basis (complement elements
// first, kernel elements after, Lyndon completion beyond the certified
// degree), and the observation f_hat as a truncated power series with
// c_alpha = p(e^alpha)/alpha!.
struct Realization {
    int N = 0;
    int order = 0;       // truncation order T of f_hat
    int lie_degree = 0;  // certificate degree d
    int alphabet = 0;
    int basis_degree = 0;  // adapted basis is complete up to here
    std::map<std::vector<int>, Rat> f_hat;
    std::vector<LieElement> adapted;
    std::optional<std::vector<std::vector<MultiPoly>>> vector_fields;  // [M][N]
};

namespace detail {

// The adapted basis extended with Lyndon brackets so that it is
// complete to the requested degree.  Elements already certified (the
// complement and L) cover every degree <= lie_degree.
inline std::vector<LieElement> extend_adapted(const std::vector<LieElement>& adapted,
                                              int covered, int M, int degree) {
    std::vector<LieElement> out = adapted;
    for (const Word& lw : lyndon_words(M, degree))
        if ((int)lw.size() > covered) out.push_back(lyndon_bracket(M, lw));
    return out;
}

inline OrderedLieBasis adapted_basis_to(const Realization& real, int degree) {
    return OrderedLieBasis(
        real.alphabet,
        extend_adapted(real.adapted, real.basis_degree, real.alphabet, degree));
}

inline Int alpha_factorial(const std::vector<int>& alpha) {
    Int f = 1;
    for (int a : alpha) f *= factorial((unsigned long)a);
    return f;
}

}  // namespace detail

inline Realization build_realization(const Series& p, const RankCertificate& cert,
                                     int T) {
    if (p.alphabet() != cert.alphabet)
        throw context_error("certificate alphabet differs from series");
    if (p.trunc_degree() != cert.series_degree)
        throw context_error("certificate series degree differs from series");
    if (T < 0) throw degree_error("negative truncation order");
    if (T > p.trunc_degree())
        throw degree_error("truncation order " + std::to_string(T) +
                           " needs e^alpha beyond series degree " +
                           std::to_string(p.trunc_degree()));
    Realization real;
    real.N = cert.rank;
    real.order = T;
    real.lie_degree = cert.lie_degree;
    real.alphabet = cert.alphabet;
    real.basis_degree = cert.lie_degree;
    real.adapted = cert.complement;
    real.adapted.insert(real.adapted.end(), cert.l_basis.begin(), cert.l_basis.end());

    // c_alpha = p(e^alpha)/alpha! over exponents alpha on the complement
    // with weighted degree <= T.
    std::vector<int> alpha((std::size_t)real.N, 0);
    std::function<void(int, int, const NoncommPoly&)> rec =
        [&](int pos, int remaining, const NoncommPoly& prod) {
            if (pos == real.N) {
                real.f_hat[alpha] = pair(p, prod) / Rat(detail::alpha_factorial(alpha));
                return;
            }
            int d = cert.complement[(std::size_t)pos].degree();
            NoncommPoly acc = prod;
            for (int e = 0; e * d <= remaining; ++e) {
                if (e > 0) acc = mul(acc, cert.complement[(std::size_t)pos].expansion);
                alpha[(std::size_t)pos] = e;
                rec(pos + 1, remaining - e * d, acc);
            }
            alpha[(std::size_t)pos] = 0;
        };
    rec(0, T, NoncommPoly::unit(p.alphabet()));
    return real;
}

// Coordinates x_alpha(w): express w in the adapted PBW basis and keep
// only monomials built entirely from complement factors (all others lie
// in the left ideal J and die under the projection).
inline std::map<std::vector<int>, Rat> project_mod_J(const Word& w, const Realization& real,
                                                     const PbwTable& table) {
    std::map<std::vector<int>, Rat> out;
    for (const auto& [mi, c] : table.express(
             NoncommPoly::word_elem(real.alphabet, w))) {
        const PBWMonomial& m = table.monomials()[mi];
        bool survives = true;
        for (const auto& [idx, e] : m.factors)
            if ((int)idx >= real.N) {
                survives = false;
                break;
            }
        if (!survives) continue;
        std::vector<int> alpha((std::size_t)real.N, 0);
        for (const auto& [idx, e] : m.factors) alpha[idx] = e;
        out[alpha] = c;
    }
    return out;
}

inline std::map<std::vector<int>, Rat> project_mod_J(const Word& w,
                                                     const Realization& real) {
    PbwTable table(detail::adapted_basis_to(real, (int)w.size()), (int)w.size());
    return project_mod_J(w, real, table);
}

// Rebuild the series from the realization: the coefficient of w is
// f_hat seen as a functional on H, namely sum over alpha of
// c_alpha alpha! x_alpha(w) (since x^alpha = alpha! x_alpha).
inline Series regenerate_series(const Realization& real, int p_ref_D) {
    if (p_ref_D < 0) throw degree_error("negative regeneration degree");
    if (p_ref_D > real.order)
        throw degree_error("regeneration degree " + std::to_string(p_ref_D) +
                           " exceeds stored truncation order " +
                           std::to_string(real.order));
    PbwTable table(detail::adapted_basis_to(real, p_ref_D), p_ref_D);
    Series out(real.alphabet, p_ref_D);
    for (const Word& w : words_up_to(real.alphabet, p_ref_D)) {
        Rat c = 0;
        for (const auto& [alpha, x] : project_mod_J(w, real, table)) {
            auto it = real.f_hat.find(alpha);
            if (it == real.f_hat.end())
                throw degree_error("missing f_hat coefficient during regeneration");
            c += it->second * Rat(detail::alpha_factorial(alpha)) * x;
        }
        out.set_coeff(w, c);
    }
    return out;
}

// Coefficient table of the induced vector fields: a[i][j] is the
// component of E_i on coordinate x_j, read off by straightening
// E_i e^alpha and taking the e_j coordinate; the series p fixes the
// context the realization came from.
inline std::vector<std::vector<MultiPoly>> induced_vector_fields(const Realization& real,
                                                                 const Series& p) {
    detail::check_same_alphabet(real.alphabet, p.alphabet(), "vector fields");
    int M = real.alphabet;
    std::vector<std::vector<MultiPoly>> fields(
        (std::size_t)M, std::vector<MultiPoly>((std::size_t)real.N, MultiPoly(real.N)));
    if (real.N == 0) return fields;
    PbwTable table(detail::adapted_basis_to(real, real.order + 1), real.order + 1);
    // Enumerate alpha with weighted degree <= order, reusing the stored
    // f_hat keys (they are exactly that set).
    for (const auto& [alpha, unused] : real.f_hat) {
        NoncommPoly e_alpha = NoncommPoly::unit(M);
        for (std::size_t k = 0; k < alpha.size(); ++k)
            for (int rep = 0; rep < alpha[k]; ++rep)
                e_alpha = mul(e_alpha, real.adapted[k].expansion);
        Rat inv_fact = 1 / Rat(detail::alpha_factorial(alpha));
        for (int i = 1; i <= M; ++i) {
            auto decomp = table.express(mul(NoncommPoly::generator(M, i), e_alpha));
            for (const auto& [mi, c] : decomp) {
                const PBWMonomial& m = table.monomials()[mi];
                if (m.factors.size() != 1 || m.factors[0].second != 1) continue;
                std::size_t j = m.factors[0].first;
                if ((int)j >= real.N) continue;
                fields[(std::size_t)i - 1][j].add_term(alpha, c * inv_fact);
            }
        }
    }
    return fields;
}

struct VerifyReport {
    bool ok = false;
    int rank = 0;
    int checked_degree = 0;
    std::vector<std::tuple<Word, Rat, Rat>> mismatches;  // word, original, regenerated
};

// Exact comparison of p against the series regenerated from the
// realization, on all words of length <= Dcheck.
inline VerifyReport verify_realization(const Series& p, const Realization& real,
                                       int Dcheck) {
    detail::check_same_alphabet(p.alphabet(), real.alphabet, "verify");
    if (Dcheck > p.trunc_degree())
        throw degree_error("check degree exceeds series truncation");
    Series regen = regenerate_series(real, Dcheck);
    VerifyReport report;
    report.rank = real.N;
    report.checked_degree = Dcheck;
    for (const Word& w : words_up_to(p.alphabet(), Dcheck)) {
        Rat a = p.coeff(w);
        Rat b = regen.coeff(w);
        if (a != b) report.mismatches.emplace_back(w, a, b);
    }
    report.ok = report.mismatches.empty();
    return report;
}

// Text dump of a realization.  Sections in fixed order; the adapted
// basis is one canonical polynomial per line, f_hat lines are
// "a1 .. aN : c" ("0 : c" for N = 0).
inline std::string realization_print(const Realization& real) {
    std::string out;
    out += "N " + std::to_string(real.N) + "\n";
    out += "alphabet " + std::to_string(real.alphabet) + "\n";
    out += "order " + std::to_string(real.order) + "\n";
    out += "lie_degree " + std::to_string(real.lie_degree) + "\n";
    out += "adapted basis\n";
    for (const auto& e : real.adapted) out += e.expansion.str() + "\n";
    out += "f_hat\n";
    for (const auto& [alpha, c] : real.f_hat) {
        if (alpha.empty()) {
            out += "0";
        } else {
            for (std::size_t k = 0; k < alpha.size(); ++k) {
                if (k) out += ' ';
                out += std::to_string(alpha[k]);
            }
        }
        out += " : " + rat_str(c) + "\n";
    }
    if (real.vector_fields) {
        out += "vector_fields\n";
        for (std::size_t i = 0; i < real.vector_fields->size(); ++i)
            for (std::size_t j = 0; j < (*real.vector_fields)[i].size(); ++j)
                out += std::to_string(i + 1) + " " + std::to_string(j + 1) + " : " +
                       (*real.vector_fields)[i][j].str() + "\n";
    }
    return out;
}

inline Realization realization_parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Realization real;
    int section = 0;  // 0 header, 1 adapted, 2 f_hat, 3 vector_fields
    bool saw_n = false, saw_alphabet = false, saw_order = false, saw_lie = false;
    std::vector<std::vector<MultiPoly>> fields;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string trimmed = line;
        while (!trimmed.empty() && std::isspace((unsigned char)trimmed.back()))
            trimmed.pop_back();
        std::size_t lead = 0;
        while (lead < trimmed.size() && std::isspace((unsigned char)trimmed[lead])) ++lead;
        trimmed.erase(0, lead);
        if (trimmed.empty()) continue;
        if (trimmed == "adapted basis") {
            section = 1;
            continue;
        }
        if (trimmed == "f_hat") {
            section = 2;
            continue;
        }
        if (trimmed == "vector_fields") {
            section = 3;
            fields.assign((std::size_t)real.alphabet,
                          std::vector<MultiPoly>((std::size_t)real.N, MultiPoly(real.N)));
            continue;
        }
        std::istringstream ls(trimmed);
        if (section == 0) {
            std::string key;
            ls >> key;
            long v;
            if (!(ls >> v)) throw parse_error("bad header line '" + trimmed + "'");
            if (key == "N") {
                real.N = (int)v;
                saw_n = true;
            } else if (key == "alphabet") {
                real.alphabet = (int)v;
                saw_alphabet = true;
            } else if (key == "order") {
                real.order = (int)v;
                saw_order = true;
            } else if (key == "lie_degree") {
                real.lie_degree = (int)v;
                saw_lie = true;
            } else {
                throw parse_error("unknown realization header '" + key + "'");
            }
            continue;
        }
        if (section == 1) {
            if (!saw_alphabet) throw parse_error("adapted basis before alphabet line");
            NoncommPoly e = noncomm_parse(trimmed, real.alphabet);
            real.adapted.push_back({e, e.str()});
            continue;
        }
        auto colon = trimmed.find(':');
        if (colon == std::string::npos)
            throw parse_error("missing ':' in line '" + trimmed + "'");
        std::istringstream keys(trimmed.substr(0, colon));
        std::istringstream vals(trimmed.substr(colon + 1));
        if (section == 2) {
            std::vector<int> alpha;
            int a;
            while (keys >> a) alpha.push_back(a);
            if (real.N == 0) {
                if (alpha != std::vector<int>{0})
                    throw parse_error("expected '0' exponent line for N = 0");
                alpha.clear();
            } else if ((int)alpha.size() != real.N) {
                throw parse_error("exponent vector length differs from N in '" + trimmed +
                                  "'");
            }
            std::string ctok;
            if (!(vals >> ctok)) throw parse_error("missing coefficient in '" + trimmed + "'");
            real.f_hat[alpha] = rat_parse(ctok);
            continue;
        }
        if (section == 3) {
            int i, j;
            if (!(keys >> i >> j)) throw parse_error("bad vector_fields indices");
            if (i < 1 || i > real.alphabet || j < 1 || j > real.N)
                throw parse_error("vector_fields indices out of range");
            std::string rest;
            std::getline(vals, rest);
            fields[(std::size_t)i - 1][(std::size_t)j - 1] = poly_parse(rest, real.N);
            continue;
        }
        throw parse_error("unexpected line '" + trimmed + "' before any section");
    }
    if (!saw_n || !saw_alphabet || !saw_order || !saw_lie)
        throw parse_error("realization dump missing header lines");
    if (section == 3) real.vector_fields = std::move(fields);
    // The certified part of the basis covers every degree <= lie_degree;
    // dumps may carry completion elements beyond it, which extend the
    // covered range only if they fill whole degrees.  Recompute the
    // covered bound conservatively.
    real.basis_degree = real.lie_degree;
    return real;
}

}  // namespace fliess
