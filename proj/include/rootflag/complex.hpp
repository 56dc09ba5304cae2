#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rootflag/core.hpp"

namespace rootflag {

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultMaxN = 10;
inline constexpr int kHardMaxN = 15;  // 240 arrows, four 64-bit words

// Resource cap honoring ROOTFLAG_MAX_N when set, otherwise kDefaultMaxN.
int default_max_n();

// Throws ResourceError when n > cap (or n > kHardMaxN) and std::invalid_argument for n < 0.
void check_size(int n, int cap);

bool is_edge(RuleSet rs, const Arrow& a, const Arrow& b);

// True when every pair of distinct arrows is an edge.
bool is_face(RuleSet rs, const std::vector<Arrow>& arrows);

// Arrows of V_n in (tail, head) lexicographic order.
std::vector<Arrow> arrows_of(int n);

// Fixed-width bitset over arrow indices.
struct ArrowSet {
    std::array<std::uint64_t, 4> w{};

    void set(int i) { w[i >> 6] |= std::uint64_t(1) << (i & 63); }
    bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    bool empty() const { return (w[0] | w[1] | w[2] | w[3]) == 0; }
    ArrowSet operator&(const ArrowSet& o) const {
        ArrowSet r;
        for (int k = 0; k < 4; ++k) r.w[k] = w[k] & o.w[k];
        return r;
    }
    int count() const;
    int first() const;  // -1 when empty
    // Drop every index <= i.
    ArrowSet above(int i) const;
};

// One face as seen by an enumeration visitor. Indices refer to FlagComplex::arrows().
struct FaceView {
    const std::vector<int>& indices;
    const std::vector<Arrow>& all_arrows;
    int forward = 0;
    int backward = 0;
    bool forest = true;
    bool admissible = true;
    std::uint32_t nodes = 0;  // bit k-1 set when node k is an endpoint

    int size() const { return int(indices.size()); }
    // V_0 has no arrows, so its only face (the empty one) counts as saturated.
    bool saturated(int n) const { return n == 0 || nodes == ((std::uint32_t(1) << (n + 1)) - 1); }
    std::vector<Arrow> arrows() const;
};

class FlagComplex {
public:
    FlagComplex(RuleSet rs, int n, int cap = default_max_n());

    RuleSet rules() const { return rs_; }
    int n() const { return n_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    int index_of(const Arrow& a) const;
    const ArrowSet& neighbors(int i) const { return adj_[i]; }

    // Depth-first over increasing arrow index: faces come out in lexicographic
    // order of their sorted arrow lists, starting with the empty face.
    // Faces with more than max_arrows arrows are skipped (and not extended).
    void for_each_face(const std::function<void(const FaceView&)>& visit, int max_arrows = -1) const;

    std::vector<std::vector<Arrow>> faces() const;

private:
    RuleSet rs_;
    int n_;
    std::vector<Arrow> arrows_;
    std::vector<ArrowSet> adj_;
};

enum class Selector { All, Saturated, Facets };

std::string_view name(Selector s);
Selector parse_selector(std::string_view s);

struct FaceTable {
    int n = 0;
    Selector selector = Selector::All;
    std::map<std::pair<int, int>, std::uint64_t> counts;  // (forward, backward) -> faces
    std::uint64_t non_forest = 0;                         // cliques that contain a cycle

    std::uint64_t at(int i, int j) const;
    std::uint64_t total() const;
    std::uint64_t total_of_size(int k) const;  // i + j == k
    FaceTable transposed() const;

    friend bool operator==(const FaceTable&, const FaceTable&) = default;
};

FaceTable face_table(RuleSet rs, int n, Selector sel, int cap = default_max_n());

// Number of arrows of V_n on four distinct nodes adjacent to a.
int excess_degree(RuleSet rs, int n, const Arrow& a);
// Same count from the binomial closed form in p = i-1, q = j-i-1, r = n+1-j.
long long excess_degree_formula(RuleSet rs, int n, const Arrow& a);

struct ExcessSignature {
    std::vector<int> values;  // sorted, size n(n+1)

    std::string to_string() const;  // "1^6 2^4 ..."
    friend bool operator==(const ExcessSignature&, const ExcessSignature&) = default;
};

ExcessSignature excess_signature(RuleSet rs, int n);
ExcessSignature parse_signature(std::string_view s);

}  // namespace rootflag
