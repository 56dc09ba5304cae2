#include "rootflag/identities.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace rootflag {

TruncatedSeries face_series(RuleSet rs, int max_n, Selector sel) {
    Var s = sel == Selector::All ? Var::t : Var::z;
    TruncatedSeries out(Orders{{s, max_n}});
    for (int n = 0; n <= max_n; ++n) {
        FaceTable t = face_table(rs, n, sel, std::max(n, default_max_n()));
        for (auto [ij, c] : t.counts) out.add_term(exps({{Var::x, ij.first}, {Var::y, ij.second}, {s, n}}), c);
    }
    return out;
}

TruncatedSeries refined_backward_counts(RuleSet rs, int i, int max_n, bool saturated) {
    Var s = saturated ? Var::z : Var::t;
    TruncatedSeries out(Orders{{Var::y, max_n}, {s, max_n}});
    for (int n = 0; n <= max_n; ++n) {
        FlagComplex c(rs, n, std::max(n, default_max_n()));
        c.for_each_face([&](const FaceView& f) {
            if (f.forward || (saturated && !f.saturated(n))) return;
            std::uint32_t heads = 0;
            for (int k : f.indices) heads |= std::uint32_t(1) << (f.all_arrows[std::size_t(k)].head - 1);
            // leading heads among the endpoints, then a tail
            int lead = 0;
            bool tail_follows = false;
            for (int node = 0; node <= n; ++node) {
                if (!(f.nodes >> node & 1)) continue;
                if (heads >> node & 1) {
                    ++lead;
                } else {
                    tail_follows = true;
                    break;
                }
            }
            bool match = f.size() == 0 ? i == 0 : (lead == i && tail_follows);
            if (match) out.add_term(exps({{Var::y, f.backward}, {s, n}}), 1);
        });
    }
    return out;
}

EndCounts forward_only_end_counts(RuleSet rs, int n) {
    EndCounts out;
    FlagComplex c(rs, n, std::max(n, default_max_n()));
    c.for_each_face([&](const FaceView& f) {
        if (f.backward || f.size() == 0 || !f.saturated(n)) return;
        std::uint32_t tails = 0, heads = 0;
        for (int k : f.indices) {
            const Arrow& a = f.all_arrows[std::size_t(k)];
            tails |= std::uint32_t(1) << (a.tail - 1);
            heads |= std::uint32_t(1) << (a.head - 1);
        }
        ++out[{std::popcount(tails), std::popcount(heads), f.size()}];
    });
    return out;
}

TruncatedSeries node_enriched_counts(RuleSet rs, int max_n, int max_ends, SharedEnd mode) {
    Orders o{{Var::u, max_ends}, {Var::v, max_ends}, {Var::z, max_n}};
    TruncatedSeries out(o);
    for (int n = 0; n <= max_n; ++n) {
        FlagComplex c(rs, n, std::max(n, default_max_n()));
        c.for_each_face([&](const FaceView& f) {
            if (!f.saturated(n)) return;
            if (f.size() == 0) {
                out.add_term(Exponents{}, 1);
                return;
            }
            std::uint32_t left = 0, right = 0;
            for (int k : f.indices) {
                const Arrow& a = f.all_arrows[std::size_t(k)];
                left |= std::uint32_t(1) << (std::min(a.tail, a.head) - 1);
                right |= std::uint32_t(1) << (std::max(a.tail, a.head) - 1);
            }
            if (mode == SharedEnd::Neither) {
                std::uint32_t both = left & right;
                left &= ~both;
                right &= ~both;
            }
            int A = std::popcount(left), B = std::popcount(right);
            if (A > max_ends || B > max_ends) return;
            mpq_class w(1, factorial(A) * factorial(B));
            w.canonicalize();
            out.add_term(exps({{Var::x, f.forward}, {Var::y, f.backward}, {Var::u, A}, {Var::v, B}, {Var::z, n}}), w);
        });
    }
    return out;
}

std::vector<TruncatedSeries> forest_polys(RuleSet rs, int k) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    std::vector<TruncatedSeries> out(std::size_t(k + 1));
    // a forest with k arrows and no isolated node has k+1 .. 2k nodes
    for (int n = k; n <= 2 * k - 1; ++n) {
        FlagComplex c(rs, n, std::max(n, default_max_n()));
        c.for_each_face(
            [&](const FaceView& f) {
                if (f.size() == k && f.saturated(n)) out[std::size_t(f.forward)].add_term(exps({{Var::z, n + 1}}), 1);
            },
            k);
    }
    return out;
}

TruncatedSeries forest_poly(RuleSet rs, int forward, int backward) {
    if (forward < 0 || backward < 0) throw std::invalid_argument("arrow counts must be nonnegative");
    return forest_polys(rs, forward + backward)[std::size_t(forward)];
}

namespace {

// Counts comparisons and keeps the first mismatch.
class Tally {
public:
    void expect(bool ok, const std::function<std::string()>& what) {
        ++checked_;
        if (!ok && first_.empty()) first_ = what();
        if (!ok) ++failed_;
    }
    void same(const TruncatedSeries& a, const TruncatedSeries& b, const std::string& where) {
        std::string d = first_difference(a, b);
        expect(d.empty(), [&] { return where + " at " + d; });
    }
    IdentityCheck result(const std::string& tag) const {
        IdentityCheck c{tag, failed_ == 0, {}};
        std::ostringstream os;
        if (failed_)
            os << failed_ << " of " << checked_ << " comparisons failed; first: " << first_;
        else
            os << checked_ << (checked_ == 1 ? " comparison" : " comparisons");
        c.detail = os.str();
        return c;
    }

private:
    long checked_ = 0, failed_ = 0;
    std::string first_;
};

std::vector<RuleSet> codes_where(const std::function<bool(RuleSet)>& pred) {
    std::vector<RuleSet> out;
    for (int c = 0; c < kRuleCodeCount; ++c) {
        RuleSet rs = RuleSet::from_code(c);
        if (is_valid(rs) && pred(rs)) out.push_back(rs);
    }
    return out;
}

std::vector<RuleSet> codes_of(std::initializer_list<ClassLabel> labels) {
    return codes_where([&](RuleSet rs) {
        return std::find(labels.begin(), labels.end(), classify(rs)) != labels.end();
    });
}

std::string code_name(RuleSet rs) { return to_binary(rs); }

// x = 0 part of a series in x, y and s.
TruncatedSeries without_forward(const TruncatedSeries& s) { return s.coefficient_of(Var::x, 0); }

void check_catalan(Tally& t, const CheckOptions&) {
    const int order = 8;
    TruncatedSeries c = catalan_series(order);
    for (int n = 0; n <= order; ++n) {
        // Dyck words of length 2n by scanning every up/down word
        long dyck = 0;
        for (std::uint32_t w = 0; w < (std::uint32_t(1) << (2 * n)); ++w) {
            int h = 0;
            bool ok = true;
            for (int p = 0; p < 2 * n && ok; ++p) {
                h += (w >> p & 1) ? 1 : -1;
                ok = h >= 0;
            }
            if (ok && h == 0) ++dyck;
        }
        t.expect(c.coeff({{Var::u, n}}) == dyck, [&] { return "C_" + std::to_string(n); });
    }
    TruncatedSeries u = TruncatedSeries::variable(Var::u, c.orders());
    t.same((1 - u * c).inverse(), c, "1/(1-uC) = C");
}

void check_delannoy(Tally& t, const CheckOptions&) {
    for (int a = 0; a <= 5; ++a)
        for (int b = 0; b <= 5; ++b) {
            DelannoyPoly p = delannoy_poly(a, b);  // throws when the three methods disagree
            t.expect(p.degree() == a + b && p.lowest_degree() == std::max(a, b),
                     [&] { return "degree bounds of D_" + std::to_string(a) + "," + std::to_string(b); });
            t.expect(p.coeffs == delannoy_poly(b, a).coeffs, [&] { return "symmetry of D_" + std::to_string(a) + "," + std::to_string(b); });
        }
}

void check_backward_only(Tally& t, const CheckOptions& opt) {
    const int order = std::max(8, opt.zorder);
    TruncatedSeries f = backward_only_series(order);
    for (int n = 0; n <= order; ++n)
        for (int j = 0; j <= order; ++j)
            t.expect(f.coeff({{Var::y, j}, {Var::t, n}}) == backward_only_count(n, j),
                     [&] { return "y^" + std::to_string(j) + " t^" + std::to_string(n); });
    for (RuleSet rs : codes_where([](RuleSet r) { return !r.nests(TypeWord::HTHT); })) {
        TruncatedSeries brute = without_forward(face_series(rs, opt.zorder, Selector::All));
        t.same(f, brute, code_name(rs));
        t.same(backward_only_saturated(opt.zorder), without_forward(face_series(rs, opt.zorder, Selector::Saturated)),
               code_name(rs) + " saturated");
    }
}

void check_transfer(Tally& t, const CheckOptions& opt) {
    const int order = 8;
    TruncatedSeries f = backward_only_series(order);
    TruncatedSeries full = transfer(f, TransferDirection::AllToFull, true);
    t.same(full, backward_only_saturated(order), "all to full of the backward-only series");
    t.same(transfer(full, TransferDirection::FullToAll, true), f, "round trip");
    TruncatedSeries one = TruncatedSeries::constant(1, Orders{{Var::z, order}});
    TruncatedSeries geom = (1 - TruncatedSeries::variable(Var::t, Orders{{Var::t, order}})).inverse();
    t.same(transfer(one, TransferDirection::FullToAll, true), geom, "empty face only");
    for (const auto& o : valid_rulesets()) {
        RuleSet rs = o.representative;
        TruncatedSeries sat = face_series(rs, opt.zorder, Selector::Saturated);
        TruncatedSeries all = face_series(rs, opt.zorder, Selector::All);
        t.same(transfer(sat, TransferDirection::FullToAll, true), all, code_name(rs) + " full to all");
        t.same(transfer(all, TransferDirection::AllToFull, true), sat, code_name(rs) + " all to full");
    }
}

void check_refined_backward(Tally& t, const CheckOptions& opt) {
    int N = opt.zorder;
    TruncatedSeries total(Orders{{Var::y, N}, {Var::t, N}});
    for (int i = 0; i <= N; ++i) total += refined_backward_series(i, N);
    t.same(total, backward_only_series(N), "sum over i");
    for (RuleSet rs : codes_where([](RuleSet r) { return !r.nests(TypeWord::HTHT); }))
        for (int i = 0; i <= N; ++i) {
            std::string where = code_name(rs) + " i=" + std::to_string(i);
            t.same(refined_backward_series(i, N), refined_backward_counts(rs, i, N, false), where);
            t.same(refined_backward_saturated(i, N), refined_backward_counts(rs, i, N, true), where + " saturated");
            t.same(transfer(refined_backward_series(i, N), TransferDirection::AllToFull, i == 0),
                   refined_backward_saturated(i, N), where + " transfer");
        }
}

void check_backward_forests(Tally& t, const CheckOptions& opt) {
    int kmax = std::max(1, std::min(3, (opt.zorder + 1) / 2));
    TruncatedSeries sat = backward_only_saturated(2 * kmax);
    TruncatedSeries z = TruncatedSeries::variable(Var::z);
    for (int k = 1; k <= kmax; ++k) {
        t.same(g_k(k), (z * sat.coefficient_of(Var::y, k)).truncate(Orders{{Var::z, 2 * kmax}}),
               "G_" + std::to_string(k) + " from the saturated series");
        for (RuleSet rs : codes_where([](RuleSet r) { return !r.nests(TypeWord::HTHT); }))
            t.same(g_k(k), forest_poly(rs, 0, k), code_name(rs) + " G_" + std::to_string(k));
        for (RuleSet rs : codes_where([](RuleSet r) { return !r.nests(TypeWord::THTH); }))
            t.same(g_k(k), forest_poly(rs, k, 0), code_name(rs) + " forward G_" + std::to_string(k));
    }
}

void check_forward_delannoy(Tally& t, const CheckOptions& opt) {
    for (RuleSet rs : codes_where([](RuleSet r) { return r.nests(TypeWord::THTH); }))
        for (int n = 1; n <= opt.zorder; ++n) {
            EndCounts ec = forward_only_end_counts(rs, n);
            for (int a = 0; a + 1 <= n; ++a) {
                int b = n - 1 - a;
                DelannoyPoly d = delannoy_poly(a, b, DelannoyMethod::Binomial);
                for (int j = 1; j <= n; ++j) {
                    auto it = ec.find({a + 1, b + 1, j});
                    std::uint64_t got = it == ec.end() ? 0 : it->second;
                    t.expect(d.at(j - 1) == got, [&] {
                        return code_name(rs) + " n=" + std::to_string(n) + " a=" + std::to_string(a) +
                               " b=" + std::to_string(b) + " j=" + std::to_string(j);
                    });
                }
            }
            std::uint64_t total = 0;
            for (auto& [key, c] : ec) total += c;
            std::uint64_t expected = 0;
            for (int a = 0; a + 1 <= n; ++a) expected += delannoy_poly(a, n - 1 - a).value_at_one().get_ui();
            t.expect(total == expected, [&] { return code_name(rs) + " total at n=" + std::to_string(n); });
        }
}

Orders box(int n) { return Orders{{Var::x, n}, {Var::y, n}, {Var::z, n}}; }

void check_simion_series(Tally& t, const CheckOptions& opt) {
    int N = opt.zorder;
    for (auto o : {SimionOrientation::ThthNestHthtNonest, SimionOrientation::ThthNonestHthtNest}) {
        TruncatedSeries s = simion_saturated_series(o, box(N));
        for (RuleSet rs : codes_of({ClassLabel::SimionA, ClassLabel::SimionB, ClassLabel::SimionC}))
            if (orientation_of(rs.nests(TypeWord::THTH)) == o)
                t.same(s, face_series(rs, N, Selector::Saturated), code_name(rs));
    }
    TruncatedSeries closed = simion_saturated_series(SimionOrientation::ThthNestHthtNonest, box(N));
    for (ClassLabel c : {ClassLabel::SimionA, ClassLabel::SimionB, ClassLabel::SimionC})
        t.same(simion_subclass_series(c, box(N)), closed, std::string(name(c)) + " subclass form");
}

void check_simion_facets(Tally& t, const CheckOptions& opt) {
    for (int n = 1; n <= opt.facet_n; ++n) {
        mpz_class sum = 0;
        for (int i = 0; i <= n; ++i) sum += simion_facet_count(n, i);
        t.expect(sum == binomial(2 * n, n), [&] { return "facet sum at n=" + std::to_string(n); });
        for (RuleSet rs : codes_of({ClassLabel::SimionA, ClassLabel::SimionB, ClassLabel::SimionC})) {
            FaceTable ft = face_table(rs, n, Selector::Facets, std::max(n, opt.cap));
            bool nest = rs.nests(TypeWord::THTH);
            for (int i = 0; i <= n; ++i) {
                std::uint64_t got = nest ? ft.at(i, n - i) : ft.at(n - i, i);
                t.expect(simion_facet_count(n, i) == got,
                         [&] { return code_name(rs) + " n=" + std::to_string(n) + " i=" + std::to_string(i); });
            }
        }
    }
}

void check_revlex_series(Tally& t, const CheckOptions& opt) {
    TruncatedSeries s = revlex_saturated_series(box(opt.zorder));
    for (RuleSet rs : codes_of({ClassLabel::Revlex})) t.same(s, face_series(rs, opt.zorder, Selector::Saturated), code_name(rs));
}

void check_revlex_facets(Tally& t, const CheckOptions& opt) {
    for (int n = 1; n <= opt.facet_n; ++n) {
        mpz_class sum = 0;
        for (int k = 0; k <= n; ++k) sum += revlex_facet_count(n, k);
        t.expect(sum == binomial(2 * n, n), [&] { return "facet sum at n=" + std::to_string(n); });
        for (RuleSet rs : codes_of({ClassLabel::Revlex})) {
            FaceTable ft = face_table(rs, n, Selector::Facets, std::max(n, opt.cap));
            for (int k = 0; k <= n; ++k)
                t.expect(revlex_facet_count(n, k) == ft.at(k, n - k),
                         [&] { return code_name(rs) + " n=" + std::to_string(n) + " k=" + std::to_string(k); });
        }
    }
}

void check_node_enriched(Tally& t, const CheckOptions&) {
    const int ends = 4, max_n = 2 * ends;
    TruncatedSeries egf = node_enriched_egf(Orders{{Var::u, ends}, {Var::v, ends}, {Var::z, max_n}});
    for (RuleSet rs : codes_of({ClassLabel::Revlex}))
        t.same(egf, node_enriched_counts(rs, max_n, ends, SharedEnd::Neither), code_name(rs));
}

void check_delannoy_egf(Tally& t, const CheckOptions&) {
    for (int m : {4, 6}) {
        Orders o{{Var::u, m}, {Var::v, m}};
        t.same(delannoy_egf(o), delannoy_egf_psi(o), "orders " + std::to_string(m));
    }
    t.expect(delannoy_egf(Orders{{Var::u, 1}, {Var::v, 1}}).coeff({{Var::u, 1}, {Var::v, 1}}) == 1,
             [] { return "u v coefficient"; });
}

void check_bessel(Tally& t, const CheckOptions&) {
    TruncatedSeries d = delannoy_egf(Orders{{Var::u, 6}, {Var::v, 6}});
    t.same(d.derivative(Var::u).derivative(Var::v), bessel_side(Orders{{Var::u, 5}, {Var::v, 5}}), "mixed derivative");
}

void check_psi(Tally& t, const CheckOptions&) {
    const int order = 8;
    TruncatedSeries d = psi_series(1, order + 6);
    for (int k = 1; k <= 6; ++k) {
        t.same(psi_closed(k, order), psi_series(k, order), "closed psi_" + std::to_string(k));
        t.same(d, psi_series(k, order), "derivative form of psi_" + std::to_string(k));
        d = d.derivative(Var::z);
    }
}

void check_lex_refined(Tally& t, const CheckOptions& opt) {
    for (RuleSet rs : codes_of({ClassLabel::Lex}))
        for (int n = 0; n <= opt.zorder; ++n) {
            FaceTable ft = face_table(rs, n, Selector::All, std::max(n, opt.cap));
            for (int k = 0; k <= n + 1; ++k)
                for (int i = 0; i <= k; ++i) {
                    mpq_class expect = k <= n ? lex_refined_count(n, k) : mpq_class(0);
                    t.expect(expect == mpq_class(mpz_class(ft.at(i, k - i))), [&] {
                        return code_name(rs) + " n=" + std::to_string(n) + " cell " + std::to_string(i) + "," +
                               std::to_string(k - i);
                    });
                }
        }
}

void check_catalan_runs(Tally& t, const CheckOptions&) {
    for (int k = 0; k <= 10; ++k)
        for (int i = 0; i <= k; ++i)
            t.expect(catalan_run_identity(k, i) == catalan_number(k),
                     [&] { return "k=" + std::to_string(k) + " i=" + std::to_string(i); });
}

void check_lex_forests(Tally& t, const CheckOptions& opt) {
    int kmax = std::min(5, std::max(1, opt.cap / 2));
    for (RuleSet rs : codes_of({ClassLabel::Lex}))
        for (int k = 1; k <= kmax; ++k) {
            auto polys = forest_polys(rs, k);
            for (int i = 0; i <= k; ++i)
                t.same(lex_mixed_forest_poly(k, i), polys[std::size_t(i)],
                       code_name(rs) + " k=" + std::to_string(k) + " i=" + std::to_string(i));
        }
}

void check_dual_symmetry(Tally& t, const CheckOptions& opt) {
    Orders o = box(opt.zorder);
    t.same(simion_saturated_series(SimionOrientation::ThthNonestHthtNest, o),
           simion_saturated_series(SimionOrientation::ThthNestHthtNonest, o).rename({{Var::x, Var::y}, {Var::y, Var::x}}),
           "Simion orientations");
    TruncatedSeries r = revlex_saturated_series(o);
    t.same(r, r.rename({{Var::x, Var::y}, {Var::y, Var::x}}), "revlex");
    for (int c = 0; c < kRuleCodeCount; ++c) {
        RuleSet rs = RuleSet::from_code(c);
        if (!is_valid(rs)) continue;
        TruncatedSeries s = face_series(rs, std::min(opt.zorder, 4), Selector::Saturated);
        t.same(face_series(dual(rs), std::min(opt.zorder, 4), Selector::Saturated),
               s.rename({{Var::x, Var::y}, {Var::y, Var::x}}), code_name(rs));
    }
}

void check_facet_sums(Tally& t, const CheckOptions&) {
    for (int n = 1; n <= 8; ++n) {
        mpz_class simion = 0, revlex = 0;
        for (int i = 0; i <= n; ++i) simion += simion_facet_count(n, i), revlex += revlex_facet_count(n, i);
        mpq_class lex = (n + 1) * lex_refined_count(n, n);
        mpz_class c = binomial(2 * n, n);
        t.expect(simion == c && revlex == c && lex == c, [&] { return "n=" + std::to_string(n); });
    }
}

using CheckFn = void (*)(Tally&, const CheckOptions&);

const std::vector<std::pair<std::string, CheckFn>>& table() {
    static const std::vector<std::pair<std::string, CheckFn>> t = {
        {"catalan_series", check_catalan},
        {"delannoy_polynomials", check_delannoy},
        {"backward_only", check_backward_only},
        {"transfer", check_transfer},
        {"refined_backward", check_refined_backward},
        {"backward_forests", check_backward_forests},
        {"forward_delannoy", check_forward_delannoy},
        {"simion_series", check_simion_series},
        {"simion_facets", check_simion_facets},
        {"revlex_series", check_revlex_series},
        {"revlex_facets", check_revlex_facets},
        {"node_enriched_egf", check_node_enriched},
        {"delannoy_egf_psi", check_delannoy_egf},
        {"bessel", check_bessel},
        {"psi_closed", check_psi},
        {"lex_refined", check_lex_refined},
        {"catalan_runs", check_catalan_runs},
        {"lex_mixed_forests", check_lex_forests},
        {"dual_symmetry", check_dual_symmetry},
        {"facet_sums", check_facet_sums},
    };
    return t;
}

}  // namespace

const std::vector<std::string>& identity_tags() {
    static const std::vector<std::string> tags = [] {
        std::vector<std::string> v;
        for (const auto& [tag, fn] : table()) v.push_back(tag);
        return v;
    }();
    return tags;
}

IdentityCheck run_identity(const std::string& tag, const CheckOptions& opt) {
    for (const auto& [name, fn] : table()) {
        if (name != tag) continue;
        Tally t;
        try {
            fn(t, opt);
        } catch (const std::exception& e) {
            return {tag, false, std::string("error: ") + e.what()};
        }
        return t.result(tag);
    }
    throw std::invalid_argument("unknown identity tag: " + tag);
}

}  // namespace rootflag
