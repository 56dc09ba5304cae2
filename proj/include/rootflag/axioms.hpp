#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rootflag/complex.hpp"
#include "rootflag/core.hpp"

namespace rootflag {

using NodeSet = std::vector<int>;     // sorted node labels
using Matching = std::vector<Arrow>;  // pairwise node-disjoint, sorted

bool is_matching(const std::vector<Arrow>& arrows);

// Matchings sigma within I x J with |sigma| = |I| whose pairs are all edges,
// in lexicographic order of their sorted arrow lists.
std::vector<Matching> find_support_matchings(RuleSet rs, const NodeSet& I, const NodeSet& J);

class MultiplicityError : public std::runtime_error {
public:
    MultiplicityError(NodeSet I, NodeSet J, std::vector<Matching> found);
    const NodeSet I, J;
    const std::vector<Matching> matchings;
    std::size_t count() const { return matchings.size(); }
};

// The unique support matching; throws MultiplicityError when there are 0 or
// several, std::invalid_argument when I, J are not disjoint of equal size.
Matching support_matching(RuleSet rs, const NodeSet& I, const NodeSet& J);

enum class WitnessPolicy { First, All };

struct Witness {
    std::string axiom;
    NodeSet I, J;
    std::optional<int> k;
    std::vector<Matching> matchings;
    std::string detail;
};

struct AxiomReport {
    std::string axiom;
    bool pass = true;
    std::vector<Witness> witnesses;

    void fail(Witness w) {
        pass = false;
        witnesses.push_back(std::move(w));
    }
};

// Conditions (a) shared endpoint pairs are edges, (b) exactly one diagonal of
// every square is an edge, (c) every clique is admissible and a forest.
AxiomReport check_permissible(RuleSet rs, int n, WitnessPolicy policy = WitnessPolicy::First,
                              int cap = default_max_n());

AxiomReport check_support_axiom(RuleSet rs, int n, WitnessPolicy policy = WitnessPolicy::First,
                                int cap = default_max_n());
AxiomReport check_linkage_axiom(RuleSet rs, int n, WitnessPolicy policy = WitnessPolicy::First,
                                int cap = default_max_n());

// Linkage condition for one matching face and one extra node. Returns which
// of the two relinkings (new tail, new head) exist.
std::pair<bool, bool> linkage_holds(RuleSet rs, const Matching& sigma, int k);

// Every face of the complex that is a nonempty matching, in enumeration order.
std::vector<Matching> matching_faces(RuleSet rs, int n, int cap = default_max_n());

// Matching-ensemble layer on K_{a,b}. Left vertices 1..a, right vertices 1..b
// (the barred side); edge (i, j) has bit (i-1)*b + (j-1).
struct BipartiteEnsemble {
    int a = 0;
    int b = 0;
    std::set<std::uint64_t> matchings;

    std::uint64_t edge_bit(int i, int j) const { return std::uint64_t(1) << ((i - 1) * b + (j - 1)); }
    bool contains(std::uint64_t m) const { return matchings.count(m) != 0; }
    friend bool operator==(const BipartiteEnsemble&, const BipartiteEnsemble&) = default;
};

using EdgeMask = std::uint64_t;  // subset of the a*b edges of K_{a,b}

std::vector<std::pair<int, int>> edges_of(EdgeMask m, int b);
bool is_bipartite_matching(EdgeMask m, int b);
bool is_spanning_tree(EdgeMask m, int a, int b);
std::vector<EdgeMask> spanning_trees(int a, int b);

// Every matching of K_{a,b}, including the empty one.
BipartiteEnsemble all_matchings(int a, int b);

AxiomReport me_axioms(const BipartiteEnsemble& e, WitnessPolicy policy = WitnessPolicy::First);

BipartiteEnsemble phi(const std::vector<EdgeMask>& trees, int a, int b);
// Throws std::invalid_argument when e fails the ensemble axioms.
std::vector<EdgeMask> phi_inverse(const BipartiteEnsemble& e);

// True when no cycle of length >= 4 alternates between the two edge sets.
bool postnikov_compatible(EdgeMask f1, EdgeMask f2, int a, int b);

// Faces of the complex with tails in I and heads in J, relabeled to K_{|I|,|J|}.
struct Restriction {
    int a = 0;
    int b = 0;
    std::vector<EdgeMask> faces;   // every face, including the empty one
    std::vector<EdgeMask> facets;  // maximal faces
    BipartiteEnsemble ensemble;    // faces that are matchings
};

Restriction restrict_to(RuleSet rs, const NodeSet& I, const NodeSet& J);

// All pairs of disjoint nonempty node sets in 1..m with |I|, |J| <= max_size,
// ordered by (|I|, I, J). With equal_size only |I| = |J| pairs are listed.
std::vector<std::pair<NodeSet, NodeSet>> disjoint_pairs(int m, int max_size, bool equal_size);

std::string to_string(const Matching& m);
std::string to_string(const NodeSet& s);

}  // namespace rootflag
