#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "rootflag/complex.hpp"
#include "rootflag/series.hpp"

namespace rootflag {

// Brute-force generating functions read off clique enumeration.

// sum f(i, j, n) x^i y^j s^n for n <= max_n, where s is t for Selector::All
// and z otherwise.
TruncatedSeries face_series(RuleSet rs, int max_n, Selector sel);

// Backward-only faces whose endpoints, in increasing order, start with
// exactly i heads followed by a tail (the empty face counts for i = 0).
// Series in y and t, or in y and z when saturated is set.
TruncatedSeries refined_backward_counts(RuleSet rs, int i, int max_n, bool saturated);

// Saturated forward-only faces at n keyed by (tails, heads, arrows).
using EndCounts = std::map<std::tuple<int, int, int>, std::uint64_t>;
EndCounts forward_only_end_counts(RuleSet rs, int n);

// How a node that is a left end of one arrow and a right end of another is
// counted in the node-enriched generating function.
enum class SharedEnd { Neither, Twice };

// sum over saturated faces with n <= max_n of
// x^i y^j u^A v^B z^n / (A! B!), A left ends, B right ends, capped at max_ends.
TruncatedSeries node_enriched_counts(RuleSet rs, int max_n, int max_ends, SharedEnd mode);

// Faces with the given numbers of forward and backward arrows and no
// isolated node, weighted by z^(number of nodes).
TruncatedSeries forest_poly(RuleSet rs, int forward, int backward);
// All splits of k arrows at once, indexed by the number of forward arrows.
std::vector<TruncatedSeries> forest_polys(RuleSet rs, int k);

struct IdentityCheck {
    std::string tag;
    bool pass = false;
    std::string detail;
};

struct CheckOptions {
    int zorder = 5;    // largest n for series against enumeration
    int facet_n = 6;   // largest n for facet formulas against enumeration
    int cap = default_max_n();
};

// Tags in a fixed order; every tag is accepted by run_identity.
const std::vector<std::string>& identity_tags();

// Runs one identity; exceptions become failures with the message as detail.
IdentityCheck run_identity(const std::string& tag, const CheckOptions& opt);

}  // namespace rootflag
