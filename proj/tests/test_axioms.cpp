#include "rootflag/axioms.hpp"

#include "doctest.h"

#include <algorithm>
#include <bit>

using namespace rootflag;

namespace {

std::vector<RuleSet> valid_codes() {
    std::vector<RuleSet> v;
    for (int c = 0; c < kRuleCodeCount; ++c)
        if (is_valid(RuleSet::from_code(c))) v.push_back(RuleSet::from_code(c));
    return v;
}

EdgeMask edges(int b, std::initializer_list<std::pair<int, int>> list) {
    EdgeMask m = 0;
    for (auto [i, j] : list) m |= EdgeMask(1) << ((i - 1) * b + (j - 1));
    return m;
}

}  // namespace

TEST_CASE("support matching examples") {
    RuleSet lex = *rule_set_for_alias("LEX_NN");
    CHECK(support_matching(lex, {2, 4}, {1, 5}) == Matching{{2, 1}, {4, 5}});
    RuleSet revlex = *rule_set_for_alias("REVLEX_NN");
    CHECK(support_matching(revlex, {1, 4}, {2, 3}) == Matching{{1, 3}, {4, 2}});

    RuleSet bad = parse_rule_set("THTH:nest HTHT:free THHT:cross HTTH:cross TTHH:nest HHTT:cross");
    try {
        support_matching(bad, {2, 4, 6}, {1, 3, 5});
        FAIL("expected MultiplicityError");
    } catch (const MultiplicityError& e) {
        CHECK(e.count() == 2);
        CHECK(std::find(e.matchings.begin(), e.matchings.end(), Matching{{2, 1}, {4, 3}, {6, 5}}) != e.matchings.end());
        CHECK(std::find(e.matchings.begin(), e.matchings.end(), Matching{{2, 5}, {4, 1}, {6, 3}}) != e.matchings.end());
    }
    CHECK_THROWS_AS(support_matching(lex, {1, 2}, {2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(support_matching(lex, {1, 2}, {3}), std::invalid_argument);
}

TEST_CASE("support matchings are faces and matchings") {
    for (RuleSet rs : valid_codes())
        for (const auto& [I, J] : disjoint_pairs(6, 3, true)) {
            Matching m = support_matching(rs, I, J);
            CHECK(is_matching(m));
            CHECK(is_face(rs, m));
            CHECK(m.size() == I.size());
        }
}

TEST_CASE("permissibility") {
    for (int c = 0; c < kRuleCodeCount; ++c) CHECK(check_permissible(RuleSet::from_code(c), 2).pass);
    for (RuleSet rs : valid_codes()) CHECK(check_permissible(rs, 5).pass);

    // an invalid code may or may not keep the forest property; the report
    // has to carry a witness whenever it fails
    RuleSet odd = parse_rule_set("THTH:nest HTHT:nest THHT:noncross HTTH:noncross TTHH:nest HHTT:nest");
    auto rep = check_permissible(odd, 5, WitnessPolicy::All);
    CHECK(rep.pass == rep.witnesses.empty());
    for (const auto& w : rep.witnesses) CHECK(!w.matchings.empty());
}

TEST_CASE("linkage witness for a crossing HTTH lex variant") {
    RuleSet rs = parse_rule_set("THTH:free HTHT:free THHT:free HTTH:cross TTHH:nest HHTT:nest");
    Matching sigma = {{2, 5}, {4, 1}};
    REQUIRE(is_face(rs, sigma));
    auto [tail_ok, head_ok] = linkage_holds(rs, sigma, 3);
    CHECK(!(tail_ok && head_ok));
    auto rep = check_linkage_axiom(rs, 4, WitnessPolicy::All);
    CHECK(!rep.pass);
    bool found = false;
    for (const auto& w : rep.witnesses)
        if (w.k == 3 && w.matchings.front() == sigma) found = true;
    CHECK(found);
}

TEST_CASE("axioms separate valid and invalid codes at n = 5") {
    int valid = 0;
    for (int c = 0; c < kRuleCodeCount; ++c) {
        RuleSet rs = RuleSet::from_code(c);
        bool sa = check_support_axiom(rs, 5).pass;
        bool la = check_linkage_axiom(rs, 5).pass;
        CHECK((sa && la) == is_valid(rs));
        if (sa && la) ++valid;
    }
    CHECK(valid == 34);
}

TEST_CASE("valid codes pass for small n") {
    for (RuleSet rs : valid_codes())
        for (int n = 1; n <= 4; ++n) {
            CHECK(check_support_axiom(rs, n).pass);
            CHECK(check_linkage_axiom(rs, n).pass);
        }
}

TEST_CASE("matching ensemble axioms") {
    CHECK(me_axioms(all_matchings(1, 1)).pass);

    // K_{2,2}: the two triangulations of the square
    int b = 2;
    EdgeMask e11 = edges(b, {{1, 1}}), e12 = edges(b, {{1, 2}}), e21 = edges(b, {{2, 1}}), e22 = edges(b, {{2, 2}});
    std::vector<EdgeMask> diag1 = {e11 | e12 | e22, e11 | e21 | e22};
    std::vector<EdgeMask> diag2 = {e12 | e11 | e21, e12 | e22 | e21};
    for (const auto& trees : {diag1, diag2}) {
        auto ens = phi(trees, 2, 2);
        CHECK(me_axioms(ens).pass);
        int perfect = 0;
        for (EdgeMask m : ens.matchings)
            if (std::popcount(m) == 2) ++perfect;
        CHECK(perfect == 1);
        auto sorted_trees = trees;
        std::sort(sorted_trees.begin(), sorted_trees.end());
        CHECK(phi_inverse(ens) == sorted_trees);
    }

    auto missing = all_matchings(2, 2);
    missing.matchings.erase(0);
    auto rep = me_axioms(missing, WitnessPolicy::All);
    CHECK(!rep.pass);
    CHECK(std::any_of(rep.witnesses.begin(), rep.witnesses.end(),
                      [](const Witness& w) { return w.axiom == "closure"; }));

    // both perfect matchings of K_{2,2} break support
    CHECK(!me_axioms(all_matchings(2, 2)).pass);
    CHECK_THROWS_AS(phi_inverse(all_matchings(2, 2)), std::invalid_argument);

    for (int bb = 1; bb <= 4; ++bb) {
        auto trees = spanning_trees(1, bb);
        REQUIRE(trees.size() == 1);
        auto ens = phi(trees, 1, bb);
        CHECK(me_axioms(ens).pass);
        CHECK(phi_inverse(ens) == trees);
    }
}

TEST_CASE("spanning tree counts") {
    // a^(b-1) b^(a-1)
    CHECK(spanning_trees(2, 2).size() == 4);
    CHECK(spanning_trees(2, 3).size() == 12);
    CHECK(spanning_trees(3, 3).size() == 81);
}

TEST_CASE("postnikov compatibility") {
    int b = 2;
    EdgeMask f = edges(b, {{1, 1}, {2, 2}});
    EdgeMask g = edges(b, {{1, 2}, {2, 1}});
    CHECK(!postnikov_compatible(f, g, 2, 2));
    CHECK(postnikov_compatible(f, f, 2, 2));
    CHECK(postnikov_compatible(g, g, 2, 2));
    EdgeMask t = edges(b, {{1, 1}, {1, 2}, {2, 2}});
    CHECK(postnikov_compatible(t, edges(b, {{1, 1}, {2, 1}, {2, 2}}), 2, 2));
}

TEST_CASE("restrictions of valid codes are matching ensembles") {
    for (RuleSet rs : valid_codes())
        for (const auto& [I, J] : disjoint_pairs(6, 3, false)) {
            auto r = restrict_to(rs, I, J);
            CHECK(me_axioms(r.ensemble).pass);
            auto trees = phi_inverse(r.ensemble);
            CHECK(phi(trees, r.a, r.b) == r.ensemble);
            auto facets = r.facets;
            std::sort(facets.begin(), facets.end());
            CHECK(trees == facets);
            for (EdgeMask x : r.facets)
                for (EdgeMask y : r.facets) CHECK(postnikov_compatible(x, y, r.a, r.b));
        }
}
