#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rootflag {

// A directed nonloop edge on nodes 1..n+1; stands for the vertex e_head - e_tail.
struct Arrow {
    int tail = 0;
    int head = 0;

    bool forward() const { return tail < head; }
    bool backward() const { return tail > head; }

    friend auto operator<=>(const Arrow&, const Arrow&) = default;
};

std::string to_string(const Arrow& a);

// Throws std::invalid_argument for loops and nodes outside 1..n+1.
void validate(const Arrow& a, int n);

// Left-to-right head/tail pattern of two node-disjoint arrows.
// The enumerator order is the bit order of the rule-code serialization.
enum class TypeWord : std::uint8_t { THTH, HTHT, THHT, HTTH, TTHH, HHTT };

inline constexpr std::array<TypeWord, 6> kTypeWords = {
    TypeWord::THTH, TypeWord::HTHT, TypeWord::THHT,
    TypeWord::HTTH, TypeWord::TTHH, TypeWord::HHTT};

std::string_view name(TypeWord w);
std::optional<TypeWord> parse_type_word(std::string_view s);

// How the spans of two disjoint arrows sit relative to each other.
// THTH/HTHT pairs are NESTED or SEQUENTIAL, THHT/HTTH pairs CROSSING or
// NONCROSSING, TTHH/HHTT pairs NESTED or CROSSING.
enum class Placement : std::uint8_t { Nested, Sequential, Crossing, Noncrossing };

std::string_view name(Placement p);

enum class SharedKind : std::uint8_t { CommonTail, CommonHead };

struct Disjoint {
    TypeWord word;
    Placement placement;
    friend bool operator==(const Disjoint&, const Disjoint&) = default;
};

struct SharedNode {
    SharedKind kind;
    friend bool operator==(const SharedNode&, const SharedNode&) = default;
};

struct Inadmissible {
    friend bool operator==(const Inadmissible&, const Inadmissible&) = default;
};

using PairRelation = std::variant<Disjoint, SharedNode, Inadmissible>;

// Relation of two distinct arrows. The type word is read from node order, so
// the result does not depend on argument order. Throws std::invalid_argument
// when a == b or either arrow is a loop / has a nonpositive node; when n is
// given the nodes must also lie in 1..n+1.
PairRelation pair_relation(const Arrow& a, const Arrow& b, std::optional<int> n = std::nullopt);

// Six binary choices, one per type word. Bit k (k = position of the word in
// kTypeWords) is set when the pair is NEST (THTH, HTHT, TTHH, HHTT) or CROSS
// (THHT, HTTH). The integer code puts THTH in the most significant bit, so
// the binary literal reads in type-word order.
class RuleSet {
public:
    constexpr RuleSet() = default;

    static RuleSet from_code(int code);
    int code() const;

    bool bit(TypeWord w) const { return (bits_ >> static_cast<int>(w)) & 1u; }
    RuleSet with(TypeWord w, bool value) const;

    // The placement that forms an edge for pairs of type w.
    Placement edge_placement(TypeWord w) const;

    bool nests(TypeWord w) const;    // THTH, HTHT, TTHH, HHTT
    bool crosses(TypeWord w) const;  // THHT, HTTH, TTHH, HHTT

    friend bool operator==(const RuleSet&, const RuleSet&) = default;
    friend auto operator<=>(const RuleSet& a, const RuleSet& b) { return a.code() <=> b.code(); }

private:
    std::uint8_t bits_ = 0;
};

inline constexpr int kRuleCodeCount = 64;

// Six characters in type-word order: THTH/HTHT use N (nest) or S (sequential),
// THHT/HTTH use X (cross) or O (no cross), TTHH/HHTT use N (nest) or X (cross).
std::string to_compact(RuleSet rs);
// "THTH:nest HTHT:free THHT:cross HTTH:free TTHH:nest HHTT:cross"
std::string to_long(RuleSet rs);
std::string to_binary(RuleSet rs);  // "0b" followed by six bits

// Accepts a decimal code 0..63, a 0b-prefixed six-bit literal, the compact
// string, the long "WORD:choice ..." form, or an orbit alias (LEX_NN, ...).
// Throws std::invalid_argument on anything else.
RuleSet parse_rule_set(std::string_view text);

enum class ClassLabel : std::uint8_t { Lex, Revlex, SimionA, SimionB, SimionC, Invalid };

std::string_view name(ClassLabel c);

ClassLabel classify(RuleSet rs);

inline bool is_valid(RuleSet rs) { return classify(rs) != ClassLabel::Invalid; }
inline bool is_simion(ClassLabel c) {
    return c == ClassLabel::SimionA || c == ClassLabel::SimionB || c == ClassLabel::SimionC;
}

// Reversal of every arrow.
RuleSet dual(RuleSet rs);
// Reversal of every arrow followed by the relabeling i -> n+2-i.
RuleSet reflected_dual(RuleSet rs);

// Image of an arrow under the two involutions, for ambient size n.
Arrow dual(const Arrow& a);
Arrow reflected_dual(const Arrow& a, int n);

struct Orbit {
    RuleSet representative;        // least code in the orbit
    std::vector<RuleSet> members;  // sorted by code
    ClassLabel label;
};

// Every valid code, partitioned into orbits of {id, dual, reflected_dual,
// dual o reflected_dual}, sorted by representative code.
std::vector<Orbit> valid_rulesets();

// The orbit containing rs (valid or not).
std::vector<RuleSet> orbit_of(RuleSet rs);

// Named orbit members, one per orbit, in the customary census row order
// (lex, Simion a/b/c, revlex). The two-letter suffix gives the HHTT then TTHH
// choice (N nest, X cross).
// Simion codes use the THTH=NEST orientation; the type b code has THHT=NONCROSS,
// HTTH=CROSS.
struct NamedRuleSet {
    std::string_view alias;
    RuleSet rules;
};

const std::vector<NamedRuleSet>& named_orbits();
std::optional<RuleSet> rule_set_for_alias(std::string_view alias);
std::optional<std::string_view> alias_for(RuleSet rs);  // matches any orbit member

}  // namespace rootflag
