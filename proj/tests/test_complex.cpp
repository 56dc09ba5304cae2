#include "rootflag/complex.hpp"

#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

using namespace rootflag;

namespace {

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<RuleSet> valid_codes() {
    std::vector<RuleSet> v;
    for (int c = 0; c < kRuleCodeCount; ++c)
        if (is_valid(RuleSet::from_code(c))) v.push_back(RuleSet::from_code(c));
    return v;
}

// Every subset of V_n whose pairs are edges, sorted lexicographically.
std::vector<std::vector<Arrow>> subset_faces(RuleSet rs, int n) {
    auto arrows = arrows_of(n);
    std::vector<std::vector<Arrow>> out;
    for (std::uint32_t mask = 0; mask < (1u << arrows.size()); ++mask) {
        std::vector<Arrow> f;
        for (size_t k = 0; k < arrows.size(); ++k)
            if (mask >> k & 1) f.push_back(arrows[k]);
        if (is_face(rs, f)) out.push_back(f);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("is_edge examples") {
    RuleSet lex = *rule_set_for_alias("LEX_NN");
    CHECK(is_edge(lex, {1, 2}, {3, 4}));
    CHECK(!is_edge(lex, {1, 4}, {3, 2}));
    for (int c = 0; c < kRuleCodeCount; ++c) {
        RuleSet rs = RuleSet::from_code(c);
        CHECK(!is_edge(rs, {1, 2}, {2, 3}));
        CHECK(is_edge(rs, {1, 2}, {1, 3}));
        CHECK(is_edge(rs, {1, 3}, {2, 3}));
    }
}

TEST_CASE("arrow indexing") {
    FlagComplex c(RuleSet::from_code(0), 4);
    CHECK(c.arrows().size() == 20);
    for (size_t k = 0; k < c.arrows().size(); ++k) CHECK(c.index_of(c.arrows()[k]) == int(k));
    CHECK(std::is_sorted(c.arrows().begin(), c.arrows().end()));
}

TEST_CASE("enumeration matches subset scan in order") {
    for (int c = 0; c < kRuleCodeCount; ++c) {
        RuleSet rs = RuleSet::from_code(c);
        for (int n = 0; n <= 3; ++n) {
            FlagComplex fc(rs, n);
            CHECK(fc.faces() == subset_faces(rs, n));
        }
    }
}

TEST_CASE("small face counts") {
    for (RuleSet rs : valid_codes()) {
        CHECK(face_table(rs, 2, Selector::All).total() == 13);
        auto t3 = face_table(rs, 3, Selector::All);
        CHECK(t3.total() == 63);
        CHECK(t3.total_of_size(0) == 1);
        CHECK(t3.total_of_size(1) == 12);
        CHECK(t3.total_of_size(2) == 30);
        CHECK(t3.total_of_size(3) == 20);
        auto t0 = face_table(rs, 0, Selector::All);
        CHECK(t0.total() == 1);
        CHECK(t0.at(0, 0) == 1);
    }
}

TEST_CASE("valid codes give forests with the universal f-vector") {
    for (RuleSet rs : valid_codes())
        for (int n = 1; n <= 5; ++n) {
            auto t = face_table(rs, n, Selector::All);
            CHECK(t.non_forest == 0);
            CHECK(t.at(0, 0) == 1);
            for (int k = 0; k <= n + 1; ++k) CHECK(t.total_of_size(k) == binom(n + k, k) * binom(n, k));
        }
}

TEST_CASE("valid codes are forests at n = 6") {
    for (RuleSet rs : valid_codes()) {
        FlagComplex c(rs, 6);
        bool all_forest = true, all_admissible = true;
        c.for_each_face([&](const FaceView& f) {
            all_forest &= f.forest;
            all_admissible &= f.admissible;
        });
        CHECK(all_forest);
        CHECK(all_admissible);
    }
}

TEST_CASE("face tables under the involutions") {
    for (int c = 0; c < kRuleCodeCount; ++c) {
        RuleSet rs = RuleSet::from_code(c);
        for (int n = 1; n <= 4; ++n)
            for (Selector s : {Selector::All, Selector::Saturated, Selector::Facets}) {
                auto t = face_table(rs, n, s);
                CHECK(face_table(reflected_dual(rs), n, s) == t);
                CHECK(face_table(dual(rs), n, s) == t.transposed());
            }
    }
}

TEST_CASE("facet tables") {
    auto revlex = face_table(*rule_set_for_alias("REVLEX_NN"), 3, Selector::Facets);
    CHECK(revlex.at(0, 3) == 4);
    CHECK(revlex.at(1, 2) == 6);
    CHECK(revlex.at(2, 1) == 6);
    CHECK(revlex.at(3, 0) == 4);
    CHECK(revlex.total() == 20);

    auto simc = face_table(*rule_set_for_alias("SIMION_C"), 3, Selector::Facets);
    CHECK(simc.at(0, 3) == 5);
    CHECK(simc.at(1, 2) == 5);
    CHECK(simc.at(2, 1) == 6);
    CHECK(simc.at(3, 0) == 4);

    // facets are the saturated faces of full size
    for (RuleSet rs : valid_codes()) {
        auto f = face_table(rs, 4, Selector::Facets);
        auto s = face_table(rs, 4, Selector::Saturated);
        for (auto [ij, cnt] : f.counts) {
            CHECK(ij.first + ij.second == 4);
            CHECK(s.at(ij.first, ij.second) == cnt);
        }
        CHECK(f.total() == binom(8, 4));
    }
}

TEST_CASE("refined tables agree within each class") {
    for (int n = 1; n <= 5; ++n) {
        std::map<ClassLabel, std::vector<std::pair<RuleSet, FaceTable>>> by_class;
        for (RuleSet rs : valid_codes()) by_class[classify(rs)].push_back({rs, face_table(rs, n, Selector::All)});
        for (auto& [label, rows] : by_class)
            for (auto& [rs, t] : rows) {
                const auto& [rs0, t0] = rows.front();
                // the two Simion orientations are mirror images under dual
                bool same_orientation = rs.bit(TypeWord::THTH) == rs0.bit(TypeWord::THTH);
                CHECK(t == (same_orientation ? t0 : t0.transposed()));
            }
    }
}

TEST_CASE("excess degree closed form") {
    RuleSet lex = *rule_set_for_alias("LEX_NN");
    CHECK(excess_degree(lex, 4, {1, 2}) == 6);
    CHECK(excess_degree_formula(lex, 4, {1, 2}) == 6);
    for (RuleSet rs : valid_codes())
        for (int n = 1; n <= 6; ++n)
            for (const Arrow& a : arrows_of(n)) CHECK(excess_degree(rs, n, a) == excess_degree_formula(rs, n, a));
}

TEST_CASE("excess signatures") {
    auto sig = excess_signature(*rule_set_for_alias("LEX_NN"), 4);
    CHECK(sig.values.size() == 20);
    CHECK(sig.to_string() == "1^6 2^4 3^2 4^4 6^4");
    CHECK(excess_signature(*rule_set_for_alias("SIMION_C"), 4).to_string() == "0^2 2^4 3^8 4^3 5^2 6^1");
    CHECK(parse_signature("0^2 2^4 3^8 4^3 5^2 6^1").to_string() == "0^2 2^4 3^8 4^3 5^2 6^1");

    // signatures are constant on orbits and separate them
    std::set<std::string> distinct;
    for (const auto& o : valid_rulesets()) {
        auto s = excess_signature(o.representative, 4);
        for (RuleSet m : o.members) CHECK(excess_signature(m, 4) == s);
        distinct.insert(s.to_string());
    }
    CHECK(distinct.size() == 15);
}

TEST_CASE("resource cap") {
    CHECK_THROWS_AS(FlagComplex(RuleSet::from_code(0), 11), ResourceError);
    CHECK_THROWS_AS(FlagComplex(RuleSet::from_code(0), 5, 4), ResourceError);
    CHECK_THROWS_AS(FlagComplex(RuleSet::from_code(0), 16, 20), ResourceError);
    CHECK_NOTHROW(FlagComplex(RuleSet::from_code(0), 11, 11));
    CHECK_THROWS_AS(FlagComplex(RuleSet::from_code(0), -1), std::invalid_argument);
}
