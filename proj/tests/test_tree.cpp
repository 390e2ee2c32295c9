#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "fliess/tree.hpp"

using namespace fliess;

namespace {

LabeledTree T(const std::string& text) { return tree_parse(text); }

TreePoly single(int M, const std::string& text) { return TreePoly::single(M, T(text)); }

}  // namespace

TEST_CASE("tree literals parse and print canonically") {
    REQUIRE(tree_format(T("o")) == "o");
    REQUIRE(tree_format(T("o[1]")) == "o[1]");
    REQUIRE(tree_format(T("o[1[2],3]")) == "o[1[2],3]");
    REQUIRE(tree_format(T("o[3,1[2]]")) == "o[1[2],3]");  // children sort
    REQUIRE(T("o[3,1[2]]") == T("o[1[2],3]"));
    REQUIRE(tree_format(T(" o[ 2 , 1 ] ")) == "o[1,2]");
    REQUIRE(tree_format(T("o[1[1,1[1]]]")) == "o[1[1,1[1]]]");

    REQUIRE_THROWS_AS(T(""), parse_error);
    REQUIRE_THROWS_AS(T("x"), parse_error);
    REQUIRE_THROWS_AS(T("o["), parse_error);
    REQUIRE_THROWS_AS(T("o[1"), parse_error);
    REQUIRE_THROWS_AS(T("o[0]"), parse_error);
    REQUIRE_THROWS_AS(T("o[1]]"), parse_error);
    REQUIRE_THROWS_AS(T("o[1,]"), parse_error);
}

TEST_CASE("tree grading counts non-root nodes") {
    REQUIRE(grade(T("o")) == 0);
    REQUIRE(grade(T("o[1]")) == 1);
    REQUIRE(grade(T("o[1[2],3]")) == 3);
    REQUIRE(T("o[1[2],3]").node_count() == 4);
    REQUIRE(T("o").node_count() == 1);
}

TEST_CASE("tree product grafts cut subtrees onto every node") {
    int M = 3;
    LabeledTree e;
    REQUIRE(gl_product(M, e, T("o[1,2]")) == TreePoly::single(M, T("o[1,2]")));
    REQUIRE(gl_product(M, T("o[1,2]"), e) == TreePoly::single(M, T("o[1,2]")));

    TreePoly p12 = gl_product(M, T("o[1]"), T("o[2]"));
    REQUIRE(p12 == single(M, "o[1,2]") + single(M, "o[2[1]]"));
    TreePoly p21 = gl_product(M, T("o[2]"), T("o[1]"));
    REQUIRE(p21 == single(M, "o[1,2]") + single(M, "o[1[2]]"));

    REQUIRE(gl_product(M, T("o[1]"), T("o[1]")) == single(M, "o[1,1]") + single(M, "o[1[1]]"));

    TreePoly q = gl_product(M, T("o[1,2]"), T("o[3]"));
    REQUIRE(q == single(M, "o[1,2,3]") + single(M, "o[2,3[1]]") + single(M, "o[1,3[2]]") +
                     single(M, "o[3[1,2]]"));

    // Each term of a product of homogeneous trees has the summed grade.
    for (const LabeledTree& a : trees_up_to_grade(2, 2))
        for (const LabeledTree& b : trees_up_to_grade(2, 2)) {
            TreePoly prod = gl_product(2, a, b);
            for (const auto& [t, c] : prod.terms()) {
                REQUIRE(t.grade() == a.grade() + b.grade());
                REQUIRE(c > 0);
            }
        }
}

TEST_CASE("tree product is associative") {
    int M = 2;
    auto all = trees_up_to_grade(M, 2);
    REQUIRE(all.size() == 10);
    for (const LabeledTree& a : all)
        for (const LabeledTree& b : all)
            for (const LabeledTree& c : all) {
                TreePoly lhs = gl_product(gl_product(M, a, b), TreePoly::single(M, c));
                TreePoly rhs = gl_product(TreePoly::single(M, a), gl_product(M, b, c));
                REQUIRE(lhs == rhs);
            }
}

TEST_CASE("tree coproduct splits root branches") {
    int M = 2;
    TreeTensor de = gl_coproduct(M, T("o"));
    REQUIRE(de.terms().size() == 1);
    REQUIRE(de.coeff(T("o"), T("o")) == 1);

    TreeTensor d1 = gl_coproduct(M, T("o[1]"));
    REQUIRE(d1.terms().size() == 2);
    REQUIRE(d1.coeff(T("o[1]"), T("o")) == 1);
    REQUIRE(d1.coeff(T("o"), T("o[1]")) == 1);

    TreeTensor d12 = gl_coproduct(M, T("o[1,2]"));
    REQUIRE(d12.terms().size() == 4);
    REQUIRE(d12.coeff(T("o"), T("o[1,2]")) == 1);
    REQUIRE(d12.coeff(T("o[1]"), T("o[2]")) == 1);
    REQUIRE(d12.coeff(T("o[2]"), T("o[1]")) == 1);
    REQUIRE(d12.coeff(T("o[1,2]"), T("o")) == 1);

    // Equal branches stack multiplicity.
    TreeTensor d11 = gl_coproduct(M, T("o[1,1]"));
    REQUIRE(d11.coeff(T("o[1]"), T("o[1]")) == 2);

    // Nested structure stays on one side whole.
    TreeTensor dn = gl_coproduct(M, T("o[1[2]]"));
    REQUIRE(dn.terms().size() == 2);
    REQUIRE(dn.coeff(T("o[1[2]]"), T("o")) == 1);
}

TEST_CASE("tree coproduct is cocommutative and counital") {
    int M = 2;
    for (const LabeledTree& t : trees_up_to_grade(M, 3)) {
        TreeTensor d = gl_coproduct(M, t);
        TreeTensor swapped(M);
        for (const auto& [k, c] : d.terms()) swapped.add_term(k.second, k.first, c);
        REQUIRE(d == swapped);

        // Applying the counit on the left leg returns the tree itself.
        TreePoly back(M);
        for (const auto& [k, c] : d.terms())
            if (k.first.grade() == 0) back.add_term(k.second, c);
        REQUIRE(back == TreePoly::single(M, t));
    }
}

TEST_CASE("tree coproduct respects the product") {
    int M = 2;
    auto all = trees_up_to_grade(M, 2);
    for (const LabeledTree& a : all)
        for (const LabeledTree& b : all) {
            TreeTensor lhs = gl_coproduct(gl_product(M, a, b));
            TreeTensor rhs(M);
            TreeTensor da = gl_coproduct(M, a);
            TreeTensor db = gl_coproduct(M, b);
            for (const auto& [ka, ca] : da.terms())
                for (const auto& [kb, cb] : db.terms()) {
                    TreePoly left = gl_product(M, ka.first, kb.first);
                    TreePoly right = gl_product(M, ka.second, kb.second);
                    for (const auto& [lt, lc] : left.terms())
                        for (const auto& [rt, rc] : right.terms())
                            rhs.add_term(lt, rt, ca * cb * lc * rc);
                }
            REQUIRE(lhs == rhs);
        }
}

TEST_CASE("tree counit") {
    REQUIRE(tree_counit(T("o")) == 1);
    REQUIRE(tree_counit(T("o[1]")) == 0);
    TreePoly p(2);
    p.add_term(T("o"), 3);
    p.add_term(T("o[1]"), 5);
    REQUIRE(tree_counit(p) == 3);
    REQUIRE(tree_counit(TreePoly(2)) == 0);
}

TEST_CASE("single-branch trees are exactly the primitives") {
    for (int M : {1, 2})
        for (const LabeledTree& t : trees_up_to_grade(M, 3)) {
            if (t.grade() == 0) continue;
            TreeTensor expect(M);
            expect.add_term(t, T("o"), 1);
            expect.add_term(T("o"), t, 1);
            bool primitive_coproduct = gl_coproduct(M, t) == expect;
            REQUIRE(is_primitive_tree(t) == primitive_coproduct);
        }
}

TEST_CASE("primitive basis enumerates single-branch trees by grade") {
    auto b11 = primitive_tree_basis(1, 1);
    REQUIRE(b11 == std::vector<LabeledTree>{T("o[1]")});

    auto b21 = primitive_tree_basis(2, 1);
    REQUIRE(b21 == std::vector<LabeledTree>{T("o[1]"), T("o[2]")});

    auto b12 = primitive_tree_basis(1, 2);
    REQUIRE(b12 == std::vector<LabeledTree>{T("o[1]"), T("o[1[1]]")});

    auto b23 = primitive_tree_basis(2, 3);
    REQUIRE(b23.size() == 2 + 4 + 14);
    std::set<LabeledTree> seen;
    for (const LabeledTree& t : b23) {
        REQUIRE(is_primitive_tree(t));
        REQUIRE(t.grade() <= 3);
        seen.insert(t);
    }
    REQUIRE(seen.size() == b23.size());
}

TEST_CASE("tree enumeration counts") {
    std::vector<std::size_t> single_label{1, 1, 2, 4, 9};
    for (int g = 0; g <= 4; ++g)
        REQUIRE(trees_of_grade(1, g).size() == single_label[(std::size_t)g]);

    REQUIRE(trees_of_grade(2, 2).size() == 7);
    REQUIRE(trees_of_grade(2, 3).size() == 26);
    auto all = trees_up_to_grade(2, 3);
    REQUIRE(all.size() == 1 + 2 + 7 + 26);

    std::set<std::string> texts;
    for (const LabeledTree& t : all) {
        REQUIRE(t.max_label() <= 2);
        REQUIRE(tree_parse(t.str()) == t);
        texts.insert(t.str());
    }
    REQUIRE(texts.size() == all.size());
}
