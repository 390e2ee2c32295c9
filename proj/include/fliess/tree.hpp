#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fliess/rational.hpp"

namespace fliess {

// Rooted tree whose non-root nodes carry labels in {1..M}; the root is
// unlabeled (label 0).  Children are kept sorted, so structural equality
// is equality of the representation and every tree has one canonical
// form.
class LabeledTree {
public:
    LabeledTree() : label_(0) {}
    LabeledTree(int label, std::vector<LabeledTree> children)
        : label_(label), children_(std::move(children)) {
        if (label < 0) throw context_error("negative node label");
        for (const auto& c : children_)
            if (c.label_ == 0) throw context_error("unlabeled node below the root");
        std::sort(children_.begin(), children_.end());
    }

    static LabeledTree root(std::vector<LabeledTree> children) {
        return LabeledTree(0, std::move(children));
    }

    int label() const { return label_; }
    const std::vector<LabeledTree>& children() const { return children_; }

    int node_count() const {
        int n = 1;
        for (const auto& c : children_) n += c.node_count();
        return n;
    }

    // Grading: number of non-root nodes.
    int grade() const { return node_count() - 1; }

    int max_label() const {
        int m = label_;
        for (const auto& c : children_) m = std::max(m, c.max_label());
        return m;
    }

    bool operator==(const LabeledTree& t) const {
        return label_ == t.label_ && children_ == t.children_;
    }
    bool operator<(const LabeledTree& t) const {
        if (label_ != t.label_) return label_ < t.label_;
        return std::lexicographical_compare(children_.begin(), children_.end(),
                                            t.children_.begin(), t.children_.end());
    }

    // "o" for the bare root, labels for inner nodes, children bracketed:
    // o[1,2[1]] is a root with a 1-leaf and a 2-node carrying a 1-leaf.
    std::string str() const {
        std::string s = label_ == 0 ? "o" : std::to_string(label_);
        if (!children_.empty()) {
            s += '[';
            for (std::size_t k = 0; k < children_.size(); ++k) {
                if (k) s += ',';
                s += children_[k].str();
            }
            s += ']';
        }
        return s;
    }

    static LabeledTree parse(const std::string& text);

private:
    int label_;
    std::vector<LabeledTree> children_;
};

namespace detail {

class TreeParser {
public:
    explicit TreeParser(const std::string& text) : text_(text) {}

    LabeledTree parse() {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != 'o')
            throw parse_error("tree literal must start with 'o'");
        ++pos_;
        auto children = maybe_children();
        skip_ws();
        if (pos_ != text_.size())
            throw parse_error("unexpected '" + text_.substr(pos_) + "' after tree");
        return LabeledTree::root(std::move(children));
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_])) ++pos_;
    }

    std::vector<LabeledTree> maybe_children() {
        skip_ws();
        std::vector<LabeledTree> out;
        if (pos_ >= text_.size() || text_[pos_] != '[') return out;
        ++pos_;
        for (;;) {
            out.push_back(node());
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
                continue;
            }
            if (pos_ < text_.size() && text_[pos_] == ']') {
                ++pos_;
                return out;
            }
            throw parse_error("expected ',' or ']' in tree literal");
        }
    }

    LabeledTree node() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) ++pos_;
        if (start == pos_) throw parse_error("expected node label in tree literal");
        int label = std::stoi(text_.substr(start, pos_ - start));
        if (label < 1) throw parse_error("node labels must be >= 1");
        return LabeledTree(label, maybe_children());
    }

    std::string text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline LabeledTree LabeledTree::parse(const std::string& text) {
    return detail::TreeParser(text).parse();
}

inline LabeledTree tree_parse(const std::string& text) { return LabeledTree::parse(text); }
inline std::string tree_format(const LabeledTree& t) { return t.str(); }
inline int grade(const LabeledTree& t) { return t.grade(); }

// Finite linear combination of labeled trees over a fixed alphabet.
class TreePoly {
public:
    explicit TreePoly(int alphabet) : alphabet_(alphabet) {
        if (alphabet < 1) throw context_error("alphabet size must be >= 1");
    }

    static TreePoly single(int M, const LabeledTree& t) {
        TreePoly p(M);
        p.add_term(t, 1);
        return p;
    }

    int alphabet() const { return alphabet_; }
    const std::map<LabeledTree, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rat coeff(const LabeledTree& t) const {
        auto it = terms_.find(t);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    TreePoly& add_term(const LabeledTree& t, const Rat& c) {
        if (t.max_label() > alphabet_)
            throw context_error("tree " + t.str() + " has labels outside alphabet of size " +
                                std::to_string(alphabet_));
        Rat& slot = terms_[t];
        slot += c;
        if (slot == 0) terms_.erase(t);
        return *this;
    }

    TreePoly operator+(const TreePoly& q) const {
        if (alphabet_ != q.alphabet_) throw context_error("tree poly add: mixed alphabets");
        TreePoly r = *this;
        for (const auto& [t, c] : q.terms_) r.add_term(t, c);
        return r;
    }
    TreePoly operator-(const TreePoly& q) const {
        if (alphabet_ != q.alphabet_) throw context_error("tree poly sub: mixed alphabets");
        TreePoly r = *this;
        for (const auto& [t, c] : q.terms_) r.add_term(t, -c);
        return r;
    }
    TreePoly operator*(const Rat& s) const {
        TreePoly r(alphabet_);
        if (s == 0) return r;
        for (const auto& [t, c] : terms_) r.terms_[t] = c * s;
        return r;
    }

    bool operator==(const TreePoly& q) const {
        return alphabet_ == q.alphabet_ && terms_ == q.terms_;
    }

    std::string str() const {
        std::vector<std::pair<std::string, Rat>> parts;
        for (const auto& [t, c] : terms_) parts.emplace_back(t.str(), c);
        return detail::combo_str(parts);
    }

private:
    int alphabet_;
    std::map<LabeledTree, Rat> terms_;
};

inline TreePoly operator*(const Rat& s, const TreePoly& p) { return p * s; }

// Element of the tensor square of the tree algebra.
class TreeTensor {
public:
    explicit TreeTensor(int alphabet) : alphabet_(alphabet) {}

    int alphabet() const { return alphabet_; }
    const std::map<std::pair<LabeledTree, LabeledTree>, Rat>& terms() const { return terms_; }

    Rat coeff(const LabeledTree& l, const LabeledTree& r) const {
        auto it = terms_.find({l, r});
        return it == terms_.end() ? Rat(0) : it->second;
    }

    TreeTensor& add_term(const LabeledTree& l, const LabeledTree& r, const Rat& c) {
        Rat& slot = terms_[{l, r}];
        slot += c;
        if (slot == 0) terms_.erase({l, r});
        return *this;
    }

    TreeTensor operator+(const TreeTensor& t) const {
        if (alphabet_ != t.alphabet_) throw context_error("tree tensor add: mixed alphabets");
        TreeTensor r = *this;
        for (const auto& [k, c] : t.terms_) r.add_term(k.first, k.second, c);
        return r;
    }

    bool operator==(const TreeTensor& t) const {
        return alphabet_ == t.alphabet_ && terms_ == t.terms_;
    }

    std::string str() const {
        std::vector<std::pair<std::string, Rat>> parts;
        for (const auto& [k, c] : terms_)
            parts.emplace_back(k.first.str() + " (x) " + k.second.str(), c);
        return detail::combo_str(parts);
    }

private:
    int alphabet_;
    std::map<std::pair<LabeledTree, LabeledTree>, Rat> terms_;
};

namespace detail {

// Rebuild a tree, appending extra children at the nodes named by their
// preorder index (root is 0, children visited in canonical order).
inline LabeledTree graft(const LabeledTree& node, std::size_t& counter,
                         const std::map<std::size_t, std::vector<LabeledTree>>& extra) {
    std::size_t idx = counter++;
    std::vector<LabeledTree> children;
    for (const auto& c : node.children()) children.push_back(graft(c, counter, extra));
    if (auto it = extra.find(idx); it != extra.end())
        for (const auto& t : it->second) children.push_back(t);
    return LabeledTree(node.label(), std::move(children));
}

}  // namespace detail

// Product of the tree algebra: cut the root of t1 and attach each of
// its r subtrees, independently, to any of the nodes of t2 (root
// included), summing the (node count)^r grafted results.
inline TreePoly gl_product(int M, const LabeledTree& t1, const LabeledTree& t2) {
    const std::vector<LabeledTree>& subs = t1.children();
    std::size_t r = subs.size();
    std::size_t n = (std::size_t)t2.node_count();
    TreePoly out(M);
    std::vector<std::size_t> assign(r, 0);
    for (;;) {
        std::map<std::size_t, std::vector<LabeledTree>> extra;
        for (std::size_t k = 0; k < r; ++k) extra[assign[k]].push_back(subs[k]);
        std::size_t counter = 0;
        out.add_term(detail::graft(t2, counter, extra), 1);
        std::size_t k = 0;
        while (k < r && ++assign[k] == n) assign[k++] = 0;
        if (k == r) break;
    }
    return out;
}

inline TreePoly gl_product(const TreePoly& p, const TreePoly& q) {
    if (p.alphabet() != q.alphabet())
        throw context_error("tree product: mixed alphabets");
    TreePoly out(p.alphabet());
    for (const auto& [t1, c1] : p.terms())
        for (const auto& [t2, c2] : q.terms()) {
            TreePoly part = gl_product(p.alphabet(), t1, t2);
            for (const auto& [t, c] : part.terms()) out.add_term(t, c * c1 * c2);
        }
    return out;
}

// Coproduct: sum over the 2^r ways to split the root's children into a
// left and a right part, each reattached under its own root.
inline TreeTensor gl_coproduct(int M, const LabeledTree& t) {
    const std::vector<LabeledTree>& ch = t.children();
    std::size_t r = ch.size();
    TreeTensor out(M);
    for (std::size_t mask = 0; mask < (std::size_t(1) << r); ++mask) {
        std::vector<LabeledTree> left, right;
        for (std::size_t k = 0; k < r; ++k)
            (((mask >> k) & 1u) ? left : right).push_back(ch[k]);
        out.add_term(LabeledTree::root(std::move(left)), LabeledTree::root(std::move(right)),
                     1);
    }
    return out;
}

inline TreeTensor gl_coproduct(const TreePoly& p) {
    TreeTensor out(p.alphabet());
    for (const auto& [t, c] : p.terms()) {
        TreeTensor part = gl_coproduct(p.alphabet(), t);
        for (const auto& [k, c2] : part.terms()) out.add_term(k.first, k.second, c * c2);
    }
    return out;
}

// Counit: coefficient of the bare root.
inline Rat tree_counit(const LabeledTree& t) { return t.grade() == 0 ? 1 : 0; }
inline Rat tree_counit(const TreePoly& p) { return p.coeff(LabeledTree()); }

// Primitive elements of the coproduct are exactly the trees whose root
// has a single child.
inline bool is_primitive_tree(const LabeledTree& t) { return t.children().size() == 1; }

namespace detail {

// Canonical labeled trees (labeled root, labels in {1..M}) with exactly
// n nodes, in canonical order.
inline std::vector<LabeledTree> labeled_trees_exact(int M, int n) {
    static std::map<std::pair<int, int>, std::vector<LabeledTree>> cache;
    auto key = std::make_pair(M, n);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    std::vector<LabeledTree> out;
    if (n >= 1) {
        // Candidate subtrees, smallest first, in canonical order.
        std::vector<LabeledTree> cands;
        for (int k = 1; k < n; ++k) {
            auto layer = labeled_trees_exact(M, k);
            cands.insert(cands.end(), layer.begin(), layer.end());
        }
        // Non-decreasing sequences of candidates with node counts
        // summing to n - 1 give each child multiset exactly once.
        std::vector<LabeledTree> chosen;
        std::function<void(std::size_t, int, int)> rec = [&](std::size_t start, int remaining,
                                                             int label) {
            if (remaining == 0) {
                out.push_back(LabeledTree(label, chosen));
                return;
            }
            for (std::size_t i = start; i < cands.size(); ++i) {
                int sz = cands[i].node_count();
                if (sz > remaining) continue;
                chosen.push_back(cands[i]);
                rec(i, remaining - sz, label);
                chosen.pop_back();
            }
        };
        for (int label = 1; label <= M; ++label) rec(0, n - 1, label);
    }
    std::sort(out.begin(), out.end());
    cache[key] = out;
    return out;
}

}  // namespace detail

// All canonical trees (unlabeled root) of the exact grade, in canonical
// order.
inline std::vector<LabeledTree> trees_of_grade(int M, int g) {
    if (g == 0) return {LabeledTree()};
    std::vector<LabeledTree> out;
    // A grade-g tree is the root plus a multiset of labeled subtrees
    // with g nodes in total.
    std::vector<LabeledTree> cands;
    for (int k = 1; k <= g; ++k) {
        auto layer = detail::labeled_trees_exact(M, k);
        cands.insert(cands.end(), layer.begin(), layer.end());
    }
    std::vector<LabeledTree> chosen;
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int remaining) {
        if (remaining == 0) {
            out.push_back(LabeledTree::root(chosen));
            return;
        }
        for (std::size_t i = start; i < cands.size(); ++i) {
            int sz = cands[i].node_count();
            if (sz > remaining) continue;
            chosen.push_back(cands[i]);
            rec(i, remaining - sz);
            chosen.pop_back();
        }
    };
    rec(0, g);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<LabeledTree> trees_up_to_grade(int M, int g) {
    std::vector<LabeledTree> out;
    for (int k = 0; k <= g; ++k) {
        auto layer = trees_of_grade(M, k);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

// Basis of the primitives up to the given grade: one single-child root
// per labeled tree with at most that many nodes.
inline std::vector<LabeledTree> primitive_tree_basis(int M, int g) {
    std::vector<LabeledTree> out;
    for (int n = 1; n <= g; ++n)
        for (const auto& t : detail::labeled_trees_exact(M, n))
            out.push_back(LabeledTree::root({t}));
    return out;
}

}  // namespace fliess
