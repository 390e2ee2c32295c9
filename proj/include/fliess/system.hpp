#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fliess/multipoly.hpp"
#include "fliess/rational.hpp"
#include "fliess/tree.hpp"
#include "fliess/word.hpp"

namespace fliess {

// First-order differential operator E = sum b^mu d/dx_mu with
// polynomial coefficients.
struct Derivation {
    std::vector<MultiPoly> coeffs;  // b^1 .. b^N

    int nvars() const { return (int)coeffs.size(); }
};

// Polynomial control system: state dimension N, M input channels with
// derivations E_1..E_M, polynomial observation, exact initial state.
struct System {
    int N = 0;
    int M = 0;
    std::vector<Derivation> derivations;  // size M
    MultiPoly observation{0};
    std::vector<Rat> x0;
    std::vector<std::string> varnames;

    void validate() const {
        if (N < 1) throw context_error("system needs N >= 1");
        if (M < 1) throw context_error("system needs M >= 1");
        if ((int)derivations.size() != M)
            throw context_error("expected " + std::to_string(M) + " derivations");
        for (const auto& d : derivations)
            if (d.nvars() != N)
                throw context_error("derivation coefficient count differs from N");
        for (const auto& d : derivations)
            for (const auto& b : d.coeffs)
                if (b.nvars() != N) throw context_error("coefficient variable count differs");
        if (observation.nvars() != N)
            throw context_error("observation variable count differs from N");
        if ((int)x0.size() != N) throw context_error("x0 length differs from N");
        if ((int)varnames.size() != N) throw context_error("variable name count differs");
    }
};

inline MultiPoly apply_derivation(const Derivation& E, const MultiPoly& f) {
    MultiPoly out(f.nvars());
    for (int mu = 1; mu <= (int)E.coeffs.size(); ++mu)
        out = out + E.coeffs[(std::size_t)mu - 1] * partial(f, mu);
    return out;
}

// Word action E_{w_k} ... E_{w_1} f: the first letter of w acts first.
inline MultiPoly apply_word(const System& sys, const Word& w, const MultiPoly& f) {
    MultiPoly out = f;
    for (int letter : w.letters()) {
        if (letter > sys.M)
            throw context_error("word letter " + std::to_string(letter) +
                                " outside alphabet of size " + std::to_string(sys.M));
        out = apply_derivation(sys.derivations[(std::size_t)letter - 1], out);
    }
    return out;
}

inline Rat eval_point(const MultiPoly& f, const std::vector<Rat>& x0) {
    return f.eval(x0);
}

// The operator psi(t) applied to f: sum over all assignments mu of
// coordinate indices to the non-root nodes, of the product of one
// factor per node.  A node with label g and child indices l..l'
// contributes the partials (in the children's mu) of the coefficient
// b_g^{mu_node}; the root contributes the corresponding partials of f.
inline MultiPoly psi(const System& sys, const LabeledTree& t, const MultiPoly& f) {
    if (t.max_label() > sys.M)
        throw context_error("tree label outside alphabet of size " + std::to_string(sys.M));
    struct Node {
        int label;
        std::vector<std::size_t> children;
    };
    std::vector<Node> nodes;
    std::vector<std::size_t> root_children;
    std::function<std::size_t(const LabeledTree&)> walk =
        [&](const LabeledTree& nd) -> std::size_t {
        std::size_t idx = nodes.size();
        nodes.push_back({nd.label(), {}});
        for (const auto& c : nd.children()) {
            std::size_t ci = walk(c);
            nodes[idx].children.push_back(ci);
        }
        return idx;
    };
    for (const auto& c : t.children()) root_children.push_back(walk(c));

    std::size_t m = nodes.size();
    MultiPoly total(sys.N);
    std::vector<int> mu(m, 1);
    for (;;) {
        MultiPoly term = f;
        for (std::size_t idx : root_children) term = partial(term, mu[idx]);
        for (std::size_t k = 0; k < m; ++k) {
            MultiPoly fac =
                sys.derivations[(std::size_t)nodes[k].label - 1].coeffs[(std::size_t)mu[k] - 1];
            for (std::size_t c : nodes[k].children) fac = partial(fac, mu[c]);
            term = term * fac;
        }
        total = total + term;
        std::size_t k = 0;
        while (k < m && ++mu[k] > sys.N) mu[k++] = 1;
        if (k == m) break;
    }
    return total;
}

inline MultiPoly psi(const System& sys, const TreePoly& p, const MultiPoly& f) {
    MultiPoly out(sys.N);
    for (const auto& [t, c] : p.terms()) out = out + psi(sys, t, f) * c;
    return out;
}

}  // namespace fliess
