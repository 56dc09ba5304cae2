#include "rootflag/constructions.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace rootflag {

std::vector<int> THWord::heights() const {
    std::vector<int> h;
    int level = 0;
    for (char c : letters) {
        level += c == 'T' ? 1 : -1;
        h.push_back(level);
    }
    return h;
}

THWord THWord::subword(const std::vector<std::size_t>& positions) const {
    THWord w;
    for (std::size_t p : positions) {
        w.nodes.push_back(nodes[p]);
        w.letters += letters[p];
    }
    return w;
}

THWord th_word(const NodeSet& I, const NodeSet& J) {
    if (I.size() != J.size()) throw std::invalid_argument("I and J must have equal size");
    std::vector<std::pair<int, char>> v;
    for (int x : I) v.emplace_back(x, 'T');
    for (int x : J) v.emplace_back(x, 'H');
    std::sort(v.begin(), v.end());
    THWord w;
    for (size_t k = 0; k < v.size(); ++k) {
        if (v[k].first < 1) throw std::invalid_argument("node labels start at 1");
        if (k && v[k].first == v[k - 1].first) throw std::invalid_argument("I and J must be disjoint");
        w.nodes.push_back(v[k].first);
        w.letters += v[k].second;
    }
    return w;
}

std::string_view name(DyckShape d) {
    switch (d) {
        case DyckShape::LowerDyck: return "LowerDyck";
        case DyckShape::UpperDyck: return "UpperDyck";
        case DyckShape::Neither: return "Neither";
        case DyckShape::Both: return "Both";
    }
    return "?";
}

DyckShape dyck_classify(const THWord& w) {
    if (w.letters.empty()) return DyckShape::Both;
    auto h = w.heights();
    if (h.back() != 0) return DyckShape::Neither;
    bool above = std::any_of(h.begin(), h.end(), [](int x) { return x > 0; });
    bool below = std::any_of(h.begin(), h.end(), [](int x) { return x < 0; });
    if (!above) return DyckShape::LowerDyck;
    if (!below) return DyckShape::UpperDyck;
    return DyckShape::Neither;
}

namespace {

Matching sorted(Matching m) {
    std::sort(m.begin(), m.end());
    return m;
}

// Pairs each opening letter with a closing letter: a stack gives the
// first-return pairing, a queue the k-th with k-th pairing.
std::vector<std::pair<int, int>> pair_up(const THWord& w, char open, PairRule rule) {
    std::deque<int> pending;
    std::vector<std::pair<int, int>> out;  // (opening node, closing node)
    for (size_t k = 0; k < w.size(); ++k) {
        if (w.letters[k] == open) {
            pending.push_back(w.nodes[k]);
        } else {
            if (pending.empty()) throw std::invalid_argument("unbalanced TH-word");
            int o;
            if (rule == PairRule::Nest) {
                o = pending.back();
                pending.pop_back();
            } else {
                o = pending.front();
                pending.pop_front();
            }
            out.emplace_back(o, w.nodes[k]);
        }
    }
    return out;
}

}  // namespace

Matching canonical_backward_matching(PairRule hhtt, const THWord& w) {
    auto shape = dyck_classify(w);
    if (shape != DyckShape::LowerDyck && shape != DyckShape::Both)
        throw std::invalid_argument("backward matching needs a lower Dyck word, got " + w.letters);
    Matching m;
    for (auto [head, tail] : pair_up(w, 'H', hhtt)) m.push_back({tail, head});
    return sorted(m);
}

Matching canonical_upper_matching(PairRule tthh, const THWord& w) {
    auto shape = dyck_classify(w);
    if (shape != DyckShape::UpperDyck && shape != DyckShape::Both)
        throw std::invalid_argument("upper matching needs an upper Dyck word, got " + w.letters);
    Matching m;
    for (auto [tail, head] : pair_up(w, 'T', tthh)) m.push_back({tail, head});
    return sorted(m);
}

Matching canonical_forward_matching(PairRule tthh, const THWord& w) {
    auto firstH = w.letters.find('H');
    if (firstH != std::string::npos && w.letters.find('T', firstH) != std::string::npos)
        throw std::invalid_argument("forward matching needs every T before every H, got " + w.letters);
    size_t k = w.letters.size() / 2;
    if (w.letters.size() % 2 || std::count(w.letters.begin(), w.letters.end(), 'T') != long(k))
        throw std::invalid_argument("unbalanced TH-word");
    Matching m;
    for (size_t s = 0; s < k; ++s) {
        int head = tthh == PairRule::Nest ? w.nodes[2 * k - 1 - s] : w.nodes[k + s];
        m.push_back({w.nodes[s], head});
    }
    return sorted(m);
}

std::vector<THWord> lower_dyck_factors(const THWord& w) {
    auto shape = dyck_classify(w);
    if (shape != DyckShape::LowerDyck && shape != DyckShape::Both)
        throw std::invalid_argument("not a lower Dyck word: " + w.letters);
    std::vector<THWord> out;
    auto h = w.heights();
    std::vector<std::size_t> cur;
    for (size_t k = 0; k < w.size(); ++k) {
        cur.push_back(k);
        if (h[k] == 0) {
            out.push_back(w.subword(cur));
            cur.clear();
        }
    }
    return out;
}

namespace {

PairRule rule_of(RuleSet rs, TypeWord w) { return rs.bit(w) ? PairRule::Nest : PairRule::Cross; }

void append(Matching& m, const Matching& extra) { m.insert(m.end(), extra.begin(), extra.end()); }

Matching lex_matching(RuleSet rs, const THWord& w) {
    Matching m;
    auto h = w.heights();
    std::vector<std::size_t> run;
    for (size_t k = 0; k < w.size(); ++k) {
        run.push_back(k);
        if (h[k] == 0) {
            THWord part = w.subword(run);
            if (w.letters[run.front()] == 'T')
                append(m, canonical_upper_matching(rule_of(rs, TypeWord::TTHH), part));
            else
                append(m, canonical_backward_matching(rule_of(rs, TypeWord::HHTT), part));
            run.clear();
        }
    }
    return m;
}

Matching revlex_matching(RuleSet rs, const THWord& w) {
    size_t half = w.size() / 2;
    std::vector<std::size_t> forward, backward;
    for (size_t k = 0; k < w.size(); ++k) {
        bool left = k < half;
        bool tail = w.letters[k] == 'T';
        (left == tail ? forward : backward).push_back(k);
    }
    Matching m = canonical_forward_matching(rule_of(rs, TypeWord::TTHH), w.subword(forward));
    append(m, canonical_backward_matching(rule_of(rs, TypeWord::HHTT), w.subword(backward)));
    return m;
}

// Positions of the first ascents to levels 1..h and of the last descents
// from levels h..1, where h is the maximum height.
void peaks(const THWord& w, std::vector<std::size_t>& ups, std::vector<std::size_t>& downs) {
    auto h = w.heights();
    int top = 0;
    for (int x : h) top = std::max(top, x);
    ups.assign(top, 0);
    downs.assign(top, 0);
    std::vector<bool> seen_up(top + 1, false);
    for (size_t k = 0; k < w.size(); ++k)
        if (w.letters[k] == 'T' && h[k] >= 1 && !seen_up[h[k]]) {
            seen_up[h[k]] = true;
            ups[h[k] - 1] = k;
        }
    std::vector<bool> seen_down(top + 1, false);
    for (size_t k = w.size(); k-- > 0;) {
        int from = h[k] + 1;
        if (w.letters[k] == 'H' && from >= 1 && !seen_down[from]) {
            seen_down[from] = true;
            downs[from - 1] = k;
        }
    }
}

Matching split_forward_backward(RuleSet rs, const THWord& w, std::vector<std::size_t> fwd) {
    std::sort(fwd.begin(), fwd.end());
    std::vector<std::size_t> rest;
    for (size_t k = 0; k < w.size(); ++k)
        if (!std::binary_search(fwd.begin(), fwd.end(), k)) rest.push_back(k);
    Matching m = canonical_forward_matching(rule_of(rs, TypeWord::TTHH), w.subword(fwd));
    append(m, canonical_backward_matching(rule_of(rs, TypeWord::HHTT), w.subword(rest)));
    return m;
}

Matching simion_a_matching(RuleSet rs, const THWord& w) {
    std::vector<std::size_t> ups, downs;
    peaks(w, ups, downs);
    ups.insert(ups.end(), downs.begin(), downs.end());
    return split_forward_backward(rs, w, ups);
}

Matching simion_c_matching(RuleSet rs, const THWord& w) {
    auto h = w.heights();
    int top = 0;
    for (int x : h) top = std::max(top, x);
    std::vector<std::size_t> fwd;
    for (size_t k = 0, c = 0; k < w.size() && c < size_t(top); ++k)
        if (w.letters[k] == 'T') fwd.push_back(k), ++c;
    for (size_t k = w.size(), c = 0; k-- > 0 && c < size_t(top);)
        if (w.letters[k] == 'H') fwd.push_back(k), ++c;
    return split_forward_backward(rs, w, fwd);
}

// THHT no cross, HTTH cross: forward tails are the first h letters T, forward
// heads the last descents. Backward arrows split into the segments between
// forward heads, plus everything before the first forward head.
Matching simion_b_matching(RuleSet rs, const THWord& w) {
    std::vector<std::size_t> ups, downs;
    peaks(w, ups, downs);
    int top = int(downs.size());
    std::vector<std::size_t> tails;
    for (size_t k = 0; k < w.size() && int(tails.size()) < top; ++k)
        if (w.letters[k] == 'T') tails.push_back(k);
    std::vector<std::size_t> fwd = tails;
    fwd.insert(fwd.end(), downs.begin(), downs.end());
    return split_forward_backward(rs, w, fwd);
}

Matching build(RuleSet rs, const THWord& w) {
    ClassLabel c = classify(rs);
    if (c == ClassLabel::Invalid) throw std::invalid_argument("no construction for an invalid rule set");
    if (c == ClassLabel::Lex) return lex_matching(rs, w);
    if (c == ClassLabel::Revlex) return revlex_matching(rs, w);

    if (!rs.bit(TypeWord::THTH)) {
        // opposite orientation: reverse every arrow
        THWord flipped = w;
        for (char& ch : flipped.letters) ch = ch == 'T' ? 'H' : 'T';
        Matching m;
        for (const Arrow& a : build(dual(rs), flipped)) m.push_back(dual(a));
        return m;
    }
    if (c == ClassLabel::SimionA) return simion_a_matching(rs, w);
    if (c == ClassLabel::SimionC) return simion_c_matching(rs, w);
    if (rs.bit(TypeWord::HTTH)) return simion_b_matching(rs, w);

    // THHT cross, HTTH no cross: mirror the node order
    int M = w.nodes.empty() ? 1 : w.nodes.back() + 1;
    THWord mirrored;
    for (size_t k = w.size(); k-- > 0;) {
        mirrored.nodes.push_back(M - w.nodes[k]);
        mirrored.letters += w.letters[k] == 'T' ? 'H' : 'T';
    }
    Matching m;
    for (const Arrow& a : simion_b_matching(reflected_dual(rs), mirrored)) m.push_back({M - a.head, M - a.tail});
    return m;
}

}  // namespace

Matching construct_matching(RuleSet rs, const NodeSet& I, const NodeSet& J) {
    THWord w = th_word(I, J);
    return sorted(build(rs, w));
}

}  // namespace rootflag
