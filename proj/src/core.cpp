#include "rootflag/core.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

namespace rootflag {

std::string to_string(const Arrow& a) {
    return "(" + std::to_string(a.tail) + "," + std::to_string(a.head) + ")";
}

void validate(const Arrow& a, int n) {
    if (a.tail == a.head)
        throw std::invalid_argument("loop arrow " + to_string(a));
    if (a.tail < 1 || a.head < 1 || a.tail > n + 1 || a.head > n + 1)
        throw std::invalid_argument("arrow " + to_string(a) + " outside nodes 1.." + std::to_string(n + 1));
}

std::string_view name(TypeWord w) {
    switch (w) {
        case TypeWord::THTH: return "THTH";
        case TypeWord::HTHT: return "HTHT";
        case TypeWord::THHT: return "THHT";
        case TypeWord::HTTH: return "HTTH";
        case TypeWord::TTHH: return "TTHH";
        case TypeWord::HHTT: return "HHTT";
    }
    return "?";
}

std::optional<TypeWord> parse_type_word(std::string_view s) {
    for (TypeWord w : kTypeWords)
        if (name(w) == s) return w;
    return std::nullopt;
}

std::string_view name(Placement p) {
    switch (p) {
        case Placement::Nested: return "NESTED";
        case Placement::Sequential: return "SEQUENTIAL";
        case Placement::Crossing: return "CROSSING";
        case Placement::Noncrossing: return "NONCROSSING";
    }
    return "?";
}

PairRelation pair_relation(const Arrow& a, const Arrow& b, std::optional<int> n) {
    for (const Arrow* x : {&a, &b}) {
        if (x->tail == x->head || x->tail < 1 || x->head < 1)
            throw std::invalid_argument("bad arrow " + to_string(*x));
        if (n) validate(*x, *n);
    }
    if (a == b) throw std::invalid_argument("pair_relation needs two distinct arrows");

    if (a.tail == b.head || a.head == b.tail) return Inadmissible{};
    if (a.tail == b.tail) return SharedNode{SharedKind::CommonTail};
    if (a.head == b.head) return SharedNode{SharedKind::CommonHead};

    std::array<std::pair<int, char>, 4> nodes = {
        std::pair{a.tail, 'T'}, std::pair{a.head, 'H'}, std::pair{b.tail, 'T'}, std::pair{b.head, 'H'}};
    std::sort(nodes.begin(), nodes.end());
    std::string word;
    for (auto& [node, c] : nodes) word += c;
    TypeWord w = *parse_type_word(word);

    int alo = std::min(a.tail, a.head), ahi = std::max(a.tail, a.head);
    int blo = std::min(b.tail, b.head), bhi = std::max(b.tail, b.head);
    bool disjoint = ahi < blo || bhi < alo;
    bool nested = (alo < blo && bhi < ahi) || (blo < alo && ahi < bhi);

    Placement p;
    if (nested)
        p = Placement::Nested;
    else if (disjoint)
        p = (w == TypeWord::THTH || w == TypeWord::HTHT) ? Placement::Sequential : Placement::Noncrossing;
    else
        p = Placement::Crossing;
    return Disjoint{w, p};
}

RuleSet RuleSet::from_code(int code) {
    if (code < 0 || code >= kRuleCodeCount)
        throw std::invalid_argument("rule code out of range: " + std::to_string(code));
    RuleSet rs;
    for (int k = 0; k < 6; ++k)
        if ((code >> (5 - k)) & 1) rs.bits_ |= std::uint8_t(1u << k);
    return rs;
}

int RuleSet::code() const {
    int c = 0;
    for (int k = 0; k < 6; ++k)
        if ((bits_ >> k) & 1) c |= 1 << (5 - k);
    return c;
}

RuleSet RuleSet::with(TypeWord w, bool value) const {
    RuleSet r = *this;
    auto mask = std::uint8_t(1u << static_cast<int>(w));
    r.bits_ = value ? (r.bits_ | mask) : (r.bits_ & ~mask);
    return r;
}

Placement RuleSet::edge_placement(TypeWord w) const {
    bool b = bit(w);
    switch (w) {
        case TypeWord::THTH:
        case TypeWord::HTHT: return b ? Placement::Nested : Placement::Sequential;
        case TypeWord::THHT:
        case TypeWord::HTTH: return b ? Placement::Crossing : Placement::Noncrossing;
        default: return b ? Placement::Nested : Placement::Crossing;
    }
}

bool RuleSet::nests(TypeWord w) const { return edge_placement(w) == Placement::Nested; }
bool RuleSet::crosses(TypeWord w) const { return edge_placement(w) == Placement::Crossing; }

std::string to_compact(RuleSet rs) {
    std::string s;
    for (TypeWord w : kTypeWords) {
        switch (rs.edge_placement(w)) {
            case Placement::Nested: s += 'N'; break;
            case Placement::Sequential: s += 'S'; break;
            case Placement::Crossing: s += 'X'; break;
            case Placement::Noncrossing: s += 'O'; break;
        }
    }
    return s;
}

std::string to_long(RuleSet rs) {
    std::string s;
    for (TypeWord w : kTypeWords) {
        if (!s.empty()) s += ' ';
        s += name(w);
        s += ':';
        switch (rs.edge_placement(w)) {
            case Placement::Nested: s += "nest"; break;
            case Placement::Crossing: s += "cross"; break;
            default: s += "free"; break;
        }
    }
    return s;
}

std::string to_binary(RuleSet rs) {
    std::string s = "0b";
    int c = rs.code();
    for (int k = 5; k >= 0; --k) s += ((c >> k) & 1) ? '1' : '0';
    return s;
}

namespace {

std::string upper(std::string_view s) {
    std::string r(s);
    for (char& c : r) c = char(std::toupper(static_cast<unsigned char>(c)));
    return r;
}

std::string lower(std::string_view s) {
    std::string r(s);
    for (char& c : r) c = char(std::tolower(static_cast<unsigned char>(c)));
    return r;
}

std::optional<RuleSet> parse_compact(std::string_view s) {
    if (s.size() != 6) return std::nullopt;
    RuleSet rs;
    for (int k = 0; k < 6; ++k) {
        char c = char(std::toupper(static_cast<unsigned char>(s[k])));
        TypeWord w = kTypeWords[k];
        bool bit;
        if (k < 2) {
            if (c == 'N') bit = true;
            else if (c == 'S') bit = false;
            else return std::nullopt;
        } else if (k < 4) {
            if (c == 'X') bit = true;
            else if (c == 'O') bit = false;
            else return std::nullopt;
        } else {
            if (c == 'N') bit = true;
            else if (c == 'X') bit = false;
            else return std::nullopt;
        }
        rs = rs.with(w, bit);
    }
    return rs;
}

bool choice_bit(TypeWord w, const std::string& choice) {
    bool nest_pair = w == TypeWord::THTH || w == TypeWord::HTHT;
    bool cross_pair = w == TypeWord::THHT || w == TypeWord::HTTH;
    if (nest_pair) {
        if (choice == "nest" || choice == "nested") return true;
        if (choice == "free" || choice == "nonest" || choice == "sequential" || choice == "seq") return false;
    } else if (cross_pair) {
        if (choice == "cross" || choice == "crossing") return true;
        if (choice == "free" || choice == "noncross" || choice == "noncrossing") return false;
    } else {
        if (choice == "nest" || choice == "nested") return true;
        if (choice == "cross" || choice == "crossing") return false;
    }
    throw std::invalid_argument("bad choice '" + choice + "' for " + std::string(name(w)));
}

std::optional<RuleSet> parse_long(std::string_view text) {
    if (text.find(':') == std::string_view::npos) return std::nullopt;
    std::string s(text);
    for (char& c : s)
        if (c == ',' || c == ';') c = ' ';
    RuleSet rs;
    std::set<TypeWord> seen;
    size_t pos = 0;
    while (pos < s.size()) {
        while (pos < s.size() && s[pos] == ' ') ++pos;
        if (pos >= s.size()) break;
        size_t end = s.find(' ', pos);
        if (end == std::string::npos) end = s.size();
        std::string tok = s.substr(pos, end - pos);
        pos = end;
        auto colon = tok.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("bad rule token '" + tok + "'");
        auto w = parse_type_word(upper(tok.substr(0, colon)));
        if (!w) throw std::invalid_argument("unknown type word in '" + tok + "'");
        if (!seen.insert(*w).second) throw std::invalid_argument("duplicate type word in '" + tok + "'");
        rs = rs.with(*w, choice_bit(*w, lower(tok.substr(colon + 1))));
    }
    if (seen.size() != 6) throw std::invalid_argument("rule string must set all six type words");
    return rs;
}

}  // namespace

RuleSet parse_rule_set(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty rule code");

    if (text.size() > 2 && text[0] == '0' && (text[1] == 'b' || text[1] == 'B')) {
        auto bits = text.substr(2);
        if (bits.size() > 6) throw std::invalid_argument("binary rule code longer than six bits");
        int c = 0;
        for (char ch : bits) {
            if (ch != '0' && ch != '1') throw std::invalid_argument("bad binary rule code");
            c = c * 2 + (ch - '0');
        }
        return RuleSet::from_code(c);
    }
    if (std::all_of(text.begin(), text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        int c = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), c);
        if (ec != std::errc() || ptr != text.data() + text.size())
            throw std::invalid_argument("bad rule code");
        return RuleSet::from_code(c);
    }
    if (auto rs = rule_set_for_alias(upper(text))) return *rs;
    if (auto rs = parse_compact(text)) return *rs;
    if (auto rs = parse_long(text)) return *rs;
    throw std::invalid_argument("unrecognized rule code '" + std::string(text) + "'");
}

std::string_view name(ClassLabel c) {
    switch (c) {
        case ClassLabel::Lex: return "Lex";
        case ClassLabel::Revlex: return "Revlex";
        case ClassLabel::SimionA: return "SimionA";
        case ClassLabel::SimionB: return "SimionB";
        case ClassLabel::SimionC: return "SimionC";
        case ClassLabel::Invalid: return "Invalid";
    }
    return "?";
}

ClassLabel classify(RuleSet rs) {
    bool th = rs.bit(TypeWord::THTH), ht = rs.bit(TypeWord::HTHT);
    int cross = int(rs.bit(TypeWord::THHT)) + int(rs.bit(TypeWord::HTTH));
    if (!th && !ht) return cross == 0 ? ClassLabel::Lex : ClassLabel::Invalid;
    if (th && ht) return cross == 2 ? ClassLabel::Revlex : ClassLabel::Invalid;
    if (cross == 0) return ClassLabel::SimionA;
    if (cross == 1) return ClassLabel::SimionB;
    if (rs.bit(TypeWord::TTHH) && rs.bit(TypeWord::HHTT)) return ClassLabel::SimionC;
    return ClassLabel::Invalid;
}

namespace {
RuleSet swap_bits(RuleSet rs, TypeWord a, TypeWord b) {
    bool ba = rs.bit(a), bb = rs.bit(b);
    return rs.with(a, bb).with(b, ba);
}
}  // namespace

RuleSet dual(RuleSet rs) {
    rs = swap_bits(rs, TypeWord::THTH, TypeWord::HTHT);
    rs = swap_bits(rs, TypeWord::THHT, TypeWord::HTTH);
    return swap_bits(rs, TypeWord::TTHH, TypeWord::HHTT);
}

RuleSet reflected_dual(RuleSet rs) { return swap_bits(rs, TypeWord::THHT, TypeWord::HTTH); }

Arrow dual(const Arrow& a) { return {a.head, a.tail}; }

Arrow reflected_dual(const Arrow& a, int n) { return {n + 2 - a.head, n + 2 - a.tail}; }

std::vector<RuleSet> orbit_of(RuleSet rs) {
    std::vector<RuleSet> v = {rs, dual(rs), reflected_dual(rs), dual(reflected_dual(rs))};
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<Orbit> valid_rulesets() {
    std::vector<Orbit> out;
    std::set<int> done;
    for (int c = 0; c < kRuleCodeCount; ++c) {
        RuleSet rs = RuleSet::from_code(c);
        ClassLabel label = classify(rs);
        if (label == ClassLabel::Invalid || done.count(c)) continue;
        Orbit o{rs, orbit_of(rs), label};
        for (RuleSet m : o.members) done.insert(m.code());
        o.representative = o.members.front();
        out.push_back(std::move(o));
    }
    return out;
}

namespace {

RuleSet make(bool thth, bool htht, bool thht, bool htth, bool tthh, bool hhtt) {
    return RuleSet{}
        .with(TypeWord::THTH, thth)
        .with(TypeWord::HTHT, htht)
        .with(TypeWord::THHT, thht)
        .with(TypeWord::HTTH, htth)
        .with(TypeWord::TTHH, tthh)
        .with(TypeWord::HHTT, hhtt);
}

}  // namespace

const std::vector<NamedRuleSet>& named_orbits() {
    // Arguments: THTH HTHT THHT HTTH TTHH HHTT
    static const std::vector<NamedRuleSet> table = {
        {"LEX_NN", make(0, 0, 0, 0, 1, 1)},
        {"LEX_NX", make(0, 0, 0, 0, 0, 1)},
        {"LEX_XX", make(0, 0, 0, 0, 0, 0)},
        {"SIMION_A_NN", make(1, 0, 0, 0, 1, 1)},
        {"SIMION_A_XN", make(1, 0, 0, 0, 1, 0)},
        {"SIMION_A_NX", make(1, 0, 0, 0, 0, 1)},
        {"SIMION_A_XX", make(1, 0, 0, 0, 0, 0)},
        {"SIMION_B_NN", make(1, 0, 0, 1, 1, 1)},
        {"SIMION_B_XN", make(1, 0, 0, 1, 1, 0)},
        {"SIMION_B_NX", make(1, 0, 0, 1, 0, 1)},
        {"SIMION_B_XX", make(1, 0, 0, 1, 0, 0)},
        {"SIMION_C", make(1, 0, 1, 1, 1, 1)},
        {"REVLEX_NN", make(1, 1, 1, 1, 1, 1)},
        {"REVLEX_XN", make(1, 1, 1, 1, 1, 0)},
        {"REVLEX_XX", make(1, 1, 1, 1, 0, 0)},
    };
    return table;
}

std::optional<RuleSet> rule_set_for_alias(std::string_view alias) {
    for (const auto& e : named_orbits())
        if (e.alias == alias) return e.rules;
    return std::nullopt;
}

std::optional<std::string_view> alias_for(RuleSet rs) {
    auto orb = orbit_of(rs);
    for (const auto& e : named_orbits())
        if (std::find(orb.begin(), orb.end(), e.rules) != orb.end()) return e.alias;
    return std::nullopt;
}

}  // namespace rootflag
