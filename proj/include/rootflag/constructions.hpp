#pragma once

#include <string>
#include <vector>

#include "rootflag/axioms.hpp"
#include "rootflag/core.hpp"

namespace rootflag {

// Letters of I u J in increasing node order: 'T' for nodes of I, 'H' for nodes of J.
struct THWord {
    std::vector<int> nodes;
    std::string letters;

    std::size_t size() const { return letters.size(); }
    // Partial sums with T = +1, H = -1; heights[k] is the level after letter k.
    std::vector<int> heights() const;
    THWord subword(const std::vector<std::size_t>& positions) const;
};

THWord th_word(const NodeSet& I, const NodeSet& J);

enum class DyckShape { LowerDyck, UpperDyck, Neither, Both };

std::string_view name(DyckShape d);
DyckShape dyck_classify(const THWord& w);

enum class PairRule { Nest, Cross };

// Backward matching of a lower Dyck word: under Nest each head goes to the
// tail closing its level, under Cross the k-th head goes to the k-th tail.
Matching canonical_backward_matching(PairRule hhtt, const THWord& w);
// Forward matching of a word with every T before every H.
Matching canonical_forward_matching(PairRule tthh, const THWord& w);
// Forward matching of an upper Dyck word (mirror of the backward rule).
Matching canonical_upper_matching(PairRule tthh, const THWord& w);

// Splits a lower Dyck word into its irreducible factors.
std::vector<THWord> lower_dyck_factors(const THWord& w);

// The support matching of a valid rule set, built from the TH-word alone.
// Throws std::invalid_argument for invalid rule sets or bad node sets.
Matching construct_matching(RuleSet rs, const NodeSet& I, const NodeSet& J);

}  // namespace rootflag
