#include "rootflag/axioms.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>

namespace rootflag {

bool is_matching(const std::vector<Arrow>& arrows) {
    std::uint64_t seen = 0;
    for (const Arrow& a : arrows) {
        std::uint64_t bits = (std::uint64_t(1) << a.tail) | (std::uint64_t(1) << a.head);
        if (seen & bits) return false;
        seen |= bits;
    }
    return true;
}

std::string to_string(const Matching& m) {
    std::string s = "{";
    for (size_t k = 0; k < m.size(); ++k) {
        if (k) s += ",";
        s += to_string(m[k]);
    }
    return s + "}";
}

std::string to_string(const NodeSet& v) {
    std::string s = "{";
    for (size_t k = 0; k < v.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(v[k]);
    }
    return s + "}";
}

namespace {

std::string describe(const NodeSet& I, const NodeSet& J, size_t count) {
    return "I=" + to_string(I) + " J=" + to_string(J) + ": " + std::to_string(count) + " support matchings";
}

void check_pair(const NodeSet& I, const NodeSet& J) {
    if (I.size() != J.size() || I.empty())
        throw std::invalid_argument("I and J must be nonempty of equal size");
    for (int x : I) {
        if (x < 1) throw std::invalid_argument("node labels start at 1");
        if (std::find(J.begin(), J.end(), x) != J.end())
            throw std::invalid_argument("I and J must be disjoint");
    }
    for (int x : J)
        if (x < 1) throw std::invalid_argument("node labels start at 1");
}

}  // namespace

MultiplicityError::MultiplicityError(NodeSet I_, NodeSet J_, std::vector<Matching> found)
    : std::runtime_error(describe(I_, J_, found.size())), I(std::move(I_)), J(std::move(J_)),
      matchings(std::move(found)) {}

std::vector<Matching> find_support_matchings(RuleSet rs, const NodeSet& I0, const NodeSet& J0) {
    check_pair(I0, J0);
    NodeSet I = I0, J = J0;
    std::sort(I.begin(), I.end());
    std::sort(J.begin(), J.end());
    std::vector<Matching> out;
    Matching cur;
    std::vector<bool> used(J.size(), false);
    std::function<void(size_t)> rec = [&](size_t d) {
        if (d == I.size()) {
            Matching m = cur;
            std::sort(m.begin(), m.end());
            out.push_back(std::move(m));
            return;
        }
        for (size_t p = 0; p < J.size(); ++p) {
            if (used[p]) continue;
            Arrow a{I[d], J[p]};
            bool ok = true;
            for (const Arrow& b : cur)
                if (!is_edge(rs, a, b)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            used[p] = true;
            cur.push_back(a);
            rec(d + 1);
            cur.pop_back();
            used[p] = false;
        }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

Matching support_matching(RuleSet rs, const NodeSet& I, const NodeSet& J) {
    auto found = find_support_matchings(rs, I, J);
    if (found.size() != 1) {
        NodeSet Is = I, Js = J;
        std::sort(Is.begin(), Is.end());
        std::sort(Js.begin(), Js.end());
        throw MultiplicityError(Is, Js, std::move(found));
    }
    return found.front();
}

std::vector<std::pair<NodeSet, NodeSet>> disjoint_pairs(int m, int max_size, bool equal_size) {
    auto to_set = [](unsigned mask) {
        NodeSet s;
        for (int k = 0; mask; ++k, mask >>= 1)
            if (mask & 1) s.push_back(k + 1);
        return s;
    };
    std::vector<std::pair<NodeSet, NodeSet>> out;
    unsigned full = (1u << m) - 1;
    for (unsigned I = 1; I <= full; ++I) {
        int si = std::popcount(I);
        if (si > max_size) continue;
        unsigned rest = full & ~I;
        for (unsigned J = rest; J; J = (J - 1) & rest) {
            int sj = std::popcount(J);
            if (sj > max_size || (equal_size && sj != si)) continue;
            out.emplace_back(to_set(I), to_set(J));
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
        return x < y;
    });
    return out;
}

AxiomReport check_permissible(RuleSet rs, int n, WitnessPolicy policy, int cap) {
    check_size(n, cap);
    AxiomReport rep{"permissible", true, {}};
    auto arrows = arrows_of(n);
    auto stop = [&] { return !rep.pass && policy == WitnessPolicy::First; };

    // (a) pairs with a common tail or a common head
    for (size_t x = 0; x < arrows.size() && !stop(); ++x)
        for (size_t y = x + 1; y < arrows.size() && !stop(); ++y) {
            const Arrow &a = arrows[x], &b = arrows[y];
            if ((a.tail == b.tail || a.head == b.head) && !is_edge(rs, a, b))
                rep.fail({"permissible.shared", {}, {}, std::nullopt, {{a, b}}, "shared endpoint pair is not an edge"});
        }

    // (b) squares {i1,i2} x {j1,j2}
    for (const auto& [I, J] : disjoint_pairs(n + 1, 2, true)) {
        if (stop()) break;
        if (I.size() != 2) continue;
        Matching m1 = {{I[0], J[0]}, {I[1], J[1]}};
        Matching m2 = {{I[0], J[1]}, {I[1], J[0]}};
        bool e1 = is_edge(rs, m1[0], m1[1]), e2 = is_edge(rs, m2[0], m2[1]);
        if (e1 == e2)
            rep.fail({"permissible.square", I, J, std::nullopt, {m1, m2},
                      e1 ? "both diagonals are edges" : "neither diagonal is an edge"});
    }

    // (c) every clique admissible and a forest
    if (!stop()) {
        FlagComplex c(rs, n, cap);
        c.for_each_face([&](const FaceView& f) {
            if (stop()) return;
            if (!f.admissible || !f.forest)
                rep.fail({"permissible.forest", {}, {}, std::nullopt, {f.arrows()},
                          !f.admissible ? "clique is not admissible" : "clique contains a cycle"});
        });
    }
    return rep;
}

AxiomReport check_support_axiom(RuleSet rs, int n, WitnessPolicy policy, int cap) {
    check_size(n, cap);
    AxiomReport rep{"SA", true, {}};
    for (const auto& [I, J] : disjoint_pairs(n + 1, (n + 1) / 2, true)) {
        auto found = find_support_matchings(rs, I, J);
        if (found.size() != 1) {
            rep.fail({"SA", I, J, std::nullopt, found, std::to_string(found.size()) + " support matchings"});
            if (policy == WitnessPolicy::First) break;
        }
    }
    return rep;
}

std::vector<Matching> matching_faces(RuleSet rs, int n, int cap) {
    FlagComplex c(rs, n, cap);
    std::vector<Matching> out;
    c.for_each_face([&](const FaceView& f) {
        if (f.size() == 0) return;
        if (std::popcount(f.nodes) != 2 * f.size()) return;
        out.push_back(f.arrows());
    });
    return out;
}

std::pair<bool, bool> linkage_holds(RuleSet rs, const Matching& sigma, int k) {
    bool new_tail = false, new_head = false;
    for (size_t x = 0; x < sigma.size(); ++x) {
        Matching rest;
        for (size_t y = 0; y < sigma.size(); ++y)
            if (y != x) rest.push_back(sigma[y]);
        auto extend_ok = [&](const Arrow& a) {
            for (const Arrow& b : rest)
                if (!is_edge(rs, a, b)) return false;
            return true;
        };
        if (!new_tail && extend_ok({k, sigma[x].head})) new_tail = true;
        if (!new_head && extend_ok({sigma[x].tail, k})) new_head = true;
        if (new_tail && new_head) break;
    }
    return {new_tail, new_head};
}

AxiomReport check_linkage_axiom(RuleSet rs, int n, WitnessPolicy policy, int cap) {
    AxiomReport rep{"LA", true, {}};
    for (const Matching& sigma : matching_faces(rs, n, cap)) {
        NodeSet I, J;
        std::uint32_t used = 0;
        for (const Arrow& a : sigma) {
            I.push_back(a.tail);
            J.push_back(a.head);
            used |= (1u << a.tail) | (1u << a.head);
        }
        std::sort(I.begin(), I.end());
        std::sort(J.begin(), J.end());
        for (int k = 1; k <= n + 1; ++k) {
            if (used & (1u << k)) continue;
            auto [t, h] = linkage_holds(rs, sigma, k);
            if (t && h) continue;
            std::string what = !t ? "no arrow can be relinked to tail " + std::to_string(k)
                                  : "no arrow can be relinked to head " + std::to_string(k);
            rep.fail({"LA", I, J, k, {sigma}, what});
            if (policy == WitnessPolicy::First) return rep;
        }
    }
    return rep;
}

std::vector<std::pair<int, int>> edges_of(EdgeMask m, int b) {
    std::vector<std::pair<int, int>> v;
    for (int k = 0; m; ++k, m >>= 1)
        if (m & 1) v.emplace_back(k / b + 1, k % b + 1);
    return v;
}

namespace {

// left vertex i -> bit i-1, right vertex j -> bit 32+j-1
std::uint64_t endpoints(EdgeMask m, int b) {
    std::uint64_t s = 0;
    for (auto [i, j] : edges_of(m, b)) s |= (std::uint64_t(1) << (i - 1)) | (std::uint64_t(1) << (32 + j - 1));
    return s;
}

bool has_alternating_cycle(EdgeMask A, EdgeMask B, int a, int b) {
    int V = a + b;
    // vertices: left 0..a-1, right a..a+b-1
    auto adj = [&](EdgeMask M) {
        std::vector<std::vector<int>> g(V);
        for (auto [i, j] : edges_of(M, b)) {
            g[i - 1].push_back(a + j - 1);
            g[a + j - 1].push_back(i - 1);
        }
        return g;
    };
    auto ga = adj(A), gb = adj(B);
    std::vector<bool> on(V, false);
    std::function<bool(int, int, int, int)> dfs = [&](int start, int v, int len, int which) -> bool {
        // which: set the next edge must come from (0 = A, 1 = B)
        const auto& g = which == 0 ? ga : gb;
        for (int w : g[v]) {
            if (w == start && which == 1 && len + 1 >= 4) return true;
            if (on[w]) continue;
            on[w] = true;
            if (dfs(start, w, len + 1, 1 - which)) return true;
            on[w] = false;
        }
        return false;
    };
    for (int s = 0; s < V; ++s) {
        std::fill(on.begin(), on.end(), false);
        on[s] = true;
        if (dfs(s, s, 0, 0)) return true;
    }
    return false;
}

}  // namespace

bool is_bipartite_matching(EdgeMask m, int b) {
    std::uint64_t seen = 0;
    for (auto [i, j] : edges_of(m, b)) {
        std::uint64_t bits = (std::uint64_t(1) << (i - 1)) | (std::uint64_t(1) << (32 + j - 1));
        if (seen & bits) return false;
        seen |= bits;
    }
    return true;
}

bool is_spanning_tree(EdgeMask m, int a, int b) {
    if (std::popcount(m) != a + b - 1) return false;
    std::vector<int> parent(a + b);
    for (int k = 0; k < a + b; ++k) parent[k] = k;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto [i, j] : edges_of(m, b)) {
        int r1 = find(i - 1), r2 = find(a + j - 1);
        if (r1 == r2) return false;
        parent[r1] = r2;
    }
    return true;
}

std::vector<EdgeMask> spanning_trees(int a, int b) {
    std::vector<EdgeMask> out;
    int E = a * b;
    if (E > 30) throw ResourceError("K_{a,b} too large for spanning-tree enumeration");
    for (EdgeMask m = 0; m < (EdgeMask(1) << E); ++m)
        if (is_spanning_tree(m, a, b)) out.push_back(m);
    return out;
}

BipartiteEnsemble all_matchings(int a, int b) {
    BipartiteEnsemble e{a, b, {}};
    int E = a * b;
    for (EdgeMask m = 0; m < (EdgeMask(1) << E); ++m)
        if (is_bipartite_matching(m, b)) e.matchings.insert(m);
    return e;
}

AxiomReport me_axioms(const BipartiteEnsemble& e, WitnessPolicy policy) {
    AxiomReport rep{"matching-ensemble", true, {}};
    auto stop = [&] { return !rep.pass && policy == WitnessPolicy::First; };
    const int a = e.a, b = e.b;
    auto to_matching = [&](EdgeMask m) {
        Matching v;
        for (auto [i, j] : edges_of(m, b)) v.push_back({i, j});
        return v;
    };
    EdgeMask full = (EdgeMask(1) << (a * b)) - 1;

    for (EdgeMask m : e.matchings) {
        if (stop()) return rep;
        if ((m & ~full) || !is_bipartite_matching(m, b))
            rep.fail({"matching", {}, {}, std::nullopt, {to_matching(m)}, "member is not a matching of K_{a,b}"});
    }

    // closure: removing any single edge stays inside the family
    if (!e.contains(0)) rep.fail({"closure", {}, {}, std::nullopt, {}, "empty matching missing"});
    for (EdgeMask m : e.matchings) {
        if (stop()) return rep;
        for (EdgeMask r = m; r; r &= r - 1) {
            EdgeMask sub = m & ~(r & -r);
            if (!e.contains(sub)) {
                rep.fail({"closure", {}, {}, std::nullopt, {to_matching(m), to_matching(sub)}, "subset missing"});
                break;
            }
        }
    }

    // support: one matching per (I, Jbar) of equal size
    for (unsigned I = 0; I < (1u << a) && !stop(); ++I)
        for (unsigned J = 0; J < (1u << b) && !stop(); ++J) {
            if (std::popcount(I) != std::popcount(J)) continue;
            std::uint64_t want = std::uint64_t(I) | (std::uint64_t(J) << 32);
            std::vector<Matching> found;
            for (EdgeMask m : e.matchings)
                if (endpoints(m, b) == want) found.push_back(to_matching(m));
            if (found.size() != 1) {
                NodeSet Is, Js;
                for (int k = 0; k < a; ++k)
                    if (I >> k & 1) Is.push_back(k + 1);
                for (int k = 0; k < b; ++k)
                    if (J >> k & 1) Js.push_back(k + 1);
                rep.fail({"support", Is, Js, std::nullopt, found, std::to_string(found.size()) + " matchings"});
            }
        }

    // linkage
    for (EdgeMask m : e.matchings) {
        if (stop()) return rep;
        if (!m) continue;
        std::uint64_t ends = endpoints(m, b);
        for (int side = 0; side < 2; ++side) {
            int count = side == 0 ? a : b;
            for (int v = 1; v <= count; ++v) {
                std::uint64_t vbit = std::uint64_t(1) << (side == 0 ? v - 1 : 32 + v - 1);
                if (ends & vbit) continue;
                bool ok = false;
                for (EdgeMask r = m; r && !ok; r &= r - 1) {
                    EdgeMask base = m & ~(r & -r);
                    int other = side == 0 ? b : a;
                    for (int w = 1; w <= other && !ok; ++w) {
                        EdgeMask ep = side == 0 ? e.edge_bit(v, w) : e.edge_bit(w, v);
                        if (m & ep) continue;
                        if (e.contains(base | ep) && is_bipartite_matching(base | ep, b)) ok = true;
                    }
                }
                if (!ok) {
                    std::string which = (side == 0 ? "left " : "right ") + std::to_string(v);
                    rep.fail({"linkage", {}, {}, v, {to_matching(m)}, "cannot relink to " + which});
                    if (stop()) return rep;
                }
            }
        }
    }
    return rep;
}

BipartiteEnsemble phi(const std::vector<EdgeMask>& trees, int a, int b) {
    BipartiteEnsemble e{a, b, {}};
    for (EdgeMask t : trees)
        for (EdgeMask s = t;; s = (s - 1) & t) {
            if (is_bipartite_matching(s, b)) e.matchings.insert(s);
            if (!s) break;
        }
    return e;
}

std::vector<EdgeMask> phi_inverse(const BipartiteEnsemble& e) {
    if (!me_axioms(e).pass) throw std::invalid_argument("phi_inverse needs a matching ensemble");
    std::vector<EdgeMask> out;
    for (EdgeMask t : spanning_trees(e.a, e.b)) {
        bool ok = true;
        for (EdgeMask m : e.matchings)
            if (has_alternating_cycle(m, t, e.a, e.b)) {
                ok = false;
                break;
            }
        if (ok) out.push_back(t);
    }
    return out;
}

bool postnikov_compatible(EdgeMask f1, EdgeMask f2, int a, int b) { return !has_alternating_cycle(f1, f2, a, b); }

Restriction restrict_to(RuleSet rs, const NodeSet& I0, const NodeSet& J0) {
    NodeSet I = I0, J = J0;
    std::sort(I.begin(), I.end());
    std::sort(J.begin(), J.end());
    for (int x : I)
        if (std::find(J.begin(), J.end(), x) != J.end()) throw std::invalid_argument("I and J must be disjoint");
    Restriction r;
    r.a = int(I.size());
    r.b = int(J.size());
    if (r.a * r.b > 63) throw ResourceError("restriction too large");
    int E = r.a * r.b;
    std::vector<Arrow> arrows(E);
    for (int x = 0; x < r.a; ++x)
        for (int y = 0; y < r.b; ++y) arrows[x * r.b + y] = {I[x], J[y]};
    std::vector<EdgeMask> nb(E, 0);
    for (int p = 0; p < E; ++p)
        for (int q = 0; q < E; ++q)
            if (p != q && is_edge(rs, arrows[p], arrows[q])) nb[p] |= EdgeMask(1) << q;

    std::function<void(EdgeMask, EdgeMask)> grow = [&](EdgeMask face, EdgeMask cand) {
        r.faces.push_back(face);
        for (EdgeMask c = cand; c; c &= c - 1) {
            int p = std::countr_zero(c);
            EdgeMask higher = cand & ~((EdgeMask(2) << p) - 1);
            grow(face | (EdgeMask(1) << p), higher & nb[p]);
        }
    };
    grow(0, E == 64 ? ~EdgeMask(0) : (EdgeMask(1) << E) - 1);
    std::sort(r.faces.begin(), r.faces.end());

    r.ensemble = {r.a, r.b, {}};
    for (EdgeMask f : r.faces) {
        if (is_bipartite_matching(f, r.b)) r.ensemble.matchings.insert(f);
        bool maximal = true;
        for (int p = 0; p < E && maximal; ++p) {
            if (f >> p & 1) continue;
            if ((nb[p] & f) == f) maximal = false;
        }
        if (maximal) r.facets.push_back(f);
    }
    return r;
}

}  // namespace rootflag
