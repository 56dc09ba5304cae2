#include "rootflag/complex.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <sstream>

namespace rootflag {

int default_max_n() {
    if (const char* env = std::getenv("ROOTFLAG_MAX_N")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0) return int(std::min<long>(v, kHardMaxN));
    }
    return kDefaultMaxN;
}

void check_size(int n, int cap) {
    if (n < 0) throw std::invalid_argument("n must be nonnegative");
    if (n > kHardMaxN) throw ResourceError("n = " + std::to_string(n) + " exceeds hard limit " + std::to_string(kHardMaxN));
    if (n > cap) throw ResourceError("n = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
}

bool is_edge(RuleSet rs, const Arrow& a, const Arrow& b) {
    PairRelation rel = pair_relation(a, b);
    if (std::holds_alternative<SharedNode>(rel)) return true;
    if (auto* d = std::get_if<Disjoint>(&rel)) return d->placement == rs.edge_placement(d->word);
    return false;
}

bool is_face(RuleSet rs, const std::vector<Arrow>& arrows) {
    for (size_t x = 0; x < arrows.size(); ++x)
        for (size_t y = x + 1; y < arrows.size(); ++y)
            if (arrows[x] == arrows[y] || !is_edge(rs, arrows[x], arrows[y])) return false;
    return true;
}

std::vector<Arrow> arrows_of(int n) {
    std::vector<Arrow> v;
    for (int t = 1; t <= n + 1; ++t)
        for (int h = 1; h <= n + 1; ++h)
            if (t != h) v.push_back({t, h});
    return v;
}

int ArrowSet::count() const {
    int c = 0;
    for (auto x : w) c += std::popcount(x);
    return c;
}

int ArrowSet::first() const {
    for (int k = 0; k < 4; ++k)
        if (w[k]) return k * 64 + std::countr_zero(w[k]);
    return -1;
}

ArrowSet ArrowSet::above(int i) const {
    ArrowSet r = *this;
    int word = (i + 1) >> 6, bit = (i + 1) & 63;
    for (int k = 0; k < word && k < 4; ++k) r.w[k] = 0;
    if (word < 4 && bit) r.w[word] &= ~std::uint64_t(0) << bit;
    return r;
}

std::vector<Arrow> FaceView::arrows() const {
    std::vector<Arrow> v;
    v.reserve(indices.size());
    for (int i : indices) v.push_back(all_arrows[i]);
    return v;
}

FlagComplex::FlagComplex(RuleSet rs, int n, int cap) : rs_(rs), n_(n) {
    check_size(n, cap);
    arrows_ = arrows_of(n);
    adj_.assign(arrows_.size(), ArrowSet{});
    for (size_t a = 0; a < arrows_.size(); ++a)
        for (size_t b = a + 1; b < arrows_.size(); ++b)
            if (is_edge(rs, arrows_[a], arrows_[b])) {
                adj_[a].set(int(b));
                adj_[b].set(int(a));
            }
}

int FlagComplex::index_of(const Arrow& a) const {
    validate(a, n_);
    int m = n_ + 1;
    int idx = (a.tail - 1) * (m - 1) + (a.head - 1);
    if (a.head > a.tail) --idx;
    return idx;
}

namespace {

struct Walker {
    const FlagComplex& c;
    const std::function<void(const FaceView&)>& visit;
    int max_arrows;
    std::vector<int> stack;

    void go(const ArrowSet& cand, std::array<std::int8_t, 16> parent, int fwd, int bwd, bool forest,
            bool admissible, std::uint32_t nodes, std::uint32_t tails, std::uint32_t heads) {
        FaceView fv{stack, c.arrows(), fwd, bwd, forest, admissible, nodes};
        visit(fv);
        if (max_arrows >= 0 && int(stack.size()) >= max_arrows) return;
        ArrowSet rest = cand;
        for (int i = rest.first(); i >= 0; i = rest.first()) {
            rest = rest.above(i);
            const Arrow& a = c.arrows()[i];
            auto find = [&](int x) {
                while (parent[x] != x) x = parent[x];
                return x;
            };
            auto p2 = parent;
            int ra = find(a.tail - 1), rb = find(a.head - 1);
            bool f = forest;
            if (ra == rb) f = false;
            else p2[ra] = std::int8_t(rb);
            std::uint32_t tb = std::uint32_t(1) << (a.tail - 1), hb = std::uint32_t(1) << (a.head - 1);
            bool adm = admissible && !(tails & hb) && !(heads & tb);
            stack.push_back(i);
            go(cand.above(i) & c.neighbors(i), p2, fwd + a.forward(), bwd + a.backward(), f, adm,
               nodes | tb | hb, tails | tb, heads | hb);
            stack.pop_back();
        }
    }
};

}  // namespace

void FlagComplex::for_each_face(const std::function<void(const FaceView&)>& visit, int max_arrows) const {
    ArrowSet all;
    for (size_t i = 0; i < arrows_.size(); ++i) all.set(int(i));
    std::array<std::int8_t, 16> parent{};
    for (int k = 0; k < 16; ++k) parent[k] = std::int8_t(k);
    Walker w{*this, visit, max_arrows, {}};
    w.go(all, parent, 0, 0, true, true, 0, 0, 0);
}

std::vector<std::vector<Arrow>> FlagComplex::faces() const {
    std::vector<std::vector<Arrow>> out;
    for_each_face([&](const FaceView& f) { out.push_back(f.arrows()); });
    return out;
}

std::string_view name(Selector s) {
    switch (s) {
        case Selector::All: return "all";
        case Selector::Saturated: return "saturated";
        case Selector::Facets: return "facets";
    }
    return "?";
}

Selector parse_selector(std::string_view s) {
    if (s == "all") return Selector::All;
    if (s == "saturated") return Selector::Saturated;
    if (s == "facets") return Selector::Facets;
    throw std::invalid_argument("unknown selector '" + std::string(s) + "'");
}

std::uint64_t FaceTable::at(int i, int j) const {
    auto it = counts.find({i, j});
    return it == counts.end() ? 0 : it->second;
}

std::uint64_t FaceTable::total() const {
    std::uint64_t s = 0;
    for (auto& [k, c] : counts) s += c;
    return s;
}

std::uint64_t FaceTable::total_of_size(int k) const {
    std::uint64_t s = 0;
    for (auto& [ij, c] : counts)
        if (ij.first + ij.second == k) s += c;
    return s;
}

FaceTable FaceTable::transposed() const {
    FaceTable t = *this;
    t.counts.clear();
    for (auto& [ij, c] : counts) t.counts[{ij.second, ij.first}] = c;
    return t;
}

FaceTable face_table(RuleSet rs, int n, Selector sel, int cap) {
    FlagComplex c(rs, n, cap);
    FaceTable t;
    t.n = n;
    t.selector = sel;
    c.for_each_face([&](const FaceView& f) {
        if (!f.forest) ++t.non_forest;
        if (sel == Selector::Saturated && !f.saturated(n)) return;
        if (sel == Selector::Facets && f.size() != n) return;
        ++t.counts[{f.forward, f.backward}];
    });
    return t;
}

int excess_degree(RuleSet rs, int n, const Arrow& a) {
    validate(a, n);
    int deg = 0;
    for (const Arrow& b : arrows_of(n)) {
        if (b.tail == a.tail || b.tail == a.head || b.head == a.tail || b.head == a.head) continue;
        if (is_edge(rs, a, b)) ++deg;
    }
    return deg;
}

long long excess_degree_formula(RuleSet rs, int n, const Arrow& a) {
    validate(a, n);
    auto c2 = [](long long m) { return m * (m - 1) / 2; };
    long long i = std::min(a.tail, a.head), j = std::max(a.tail, a.head);
    long long p = i - 1, q = j - i - 1, r = n + 1 - j;
    bool th = rs.bit(TypeWord::THTH), ht = rs.bit(TypeWord::HTHT);
    bool c1 = rs.bit(TypeWord::THHT), c2b = rs.bit(TypeWord::HTTH);
    bool tt = rs.bit(TypeWord::TTHH), hh = rs.bit(TypeWord::HHTT);
    long long e = 0;
    if (a.forward()) {
        e += th ? c2(q) : c2(p) + c2(r);
        e += ht ? p * r : 0;
        e += c1 ? q * r : c2(r);
        e += c2b ? p * q : c2(p);
        e += tt ? p * r + c2(q) : p * q + q * r;
    } else {
        e += th ? p * r : 0;
        e += ht ? c2(q) : c2(p) + c2(r);
        e += c1 ? p * q : c2(p);
        e += c2b ? q * r : c2(r);
        e += hh ? p * r + c2(q) : p * q + q * r;
    }
    return e;
}

std::string ExcessSignature::to_string() const {
    std::ostringstream os;
    for (size_t k = 0; k < values.size();) {
        size_t m = k;
        while (m < values.size() && values[m] == values[k]) ++m;
        if (k) os << ' ';
        os << values[k] << '^' << (m - k);
        k = m;
    }
    return os.str();
}

ExcessSignature excess_signature(RuleSet rs, int n) {
    ExcessSignature s;
    for (const Arrow& a : arrows_of(n)) s.values.push_back(excess_degree(rs, n, a));
    std::sort(s.values.begin(), s.values.end());
    return s;
}

ExcessSignature parse_signature(std::string_view text) {
    ExcessSignature s;
    std::istringstream is{std::string(text)};
    std::string tok;
    while (is >> tok) {
        auto caret = tok.find('^');
        int value = std::stoi(tok.substr(0, caret));
        int mult = caret == std::string::npos ? 1 : std::stoi(tok.substr(caret + 1));
        for (int k = 0; k < mult; ++k) s.values.push_back(value);
    }
    std::sort(s.values.begin(), s.values.end());
    return s;
}

}  // namespace rootflag
