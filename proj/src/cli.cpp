#include "rootflag/cli.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "rootflag/constructions.hpp"
#include "rootflag/identities.hpp"

namespace rootflag::cli {

namespace {

int parse_int(std::string_view s, const char* what) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw std::invalid_argument(std::string("bad ") + what + ": '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    for (std::size_t start = 0;;) {
        std::size_t p = s.find(sep, start);
        out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string r;
    for (std::size_t k = 0; k < cells.size(); ++k) r += (k ? "," : "") + csv_field(cells[k]);
    return r + "\n";
}

// Left-aligned columns two spaces apart.
std::string text_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows)
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (width.size() <= k) width.push_back(0);
            width[k] = std::max(width[k], r[k].size());
        }
    std::string out;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t k = 0; k < r.size(); ++k) {
            line += r[k];
            if (k + 1 < r.size()) line += std::string(width[k] - r[k].size() + 2, ' ');
        }
        line.erase(line.find_last_not_of(' ') + 1);
        out += line + "\n";
    }
    return out;
}

std::string subclass_name(ClassLabel c) {
    switch (c) {
        case ClassLabel::SimionA: return "Simion a";
        case ClassLabel::SimionB: return "Simion b";
        case ClassLabel::SimionC: return "Simion c";
        default: return std::string(name(c));
    }
}

std::string orbit_alias(RuleSet rs) {
    auto a = alias_for(rs);
    return a ? std::string(*a) : std::string();
}

Json code_json(RuleSet rs) {
    Json j;
    j["code"] = rs.code();
    j["binary"] = to_binary(rs);
    j["compact"] = to_compact(rs);
    j["label"] = std::string(name(classify(rs)));
    auto a = alias_for(rs);
    j["orbit"] = a ? Json(std::string(*a)) : Json(nullptr);
    return j;
}

std::string code_title(RuleSet rs) {
    std::string t = to_compact(rs) + " (" + std::to_string(rs.code()) + ")";
    if (auto a = alias_for(rs)) t += " " + std::string(*a);
    return t;
}

std::string matchings_text(const std::vector<Matching>& ms) {
    std::string s;
    for (std::size_t k = 0; k < ms.size(); ++k) s += (k ? " | " : "") + to_string(ms[k]);
    return s;
}

Json envelope(const std::string& command) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["command"] = command;
    return j;
}

void emit_json(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

Format resolve(const std::string& flag, Format fallback) { return flag.empty() ? fallback : parse_format(flag); }

std::vector<RuleSet> parse_codes(const std::vector<std::string>& texts) {
    std::vector<RuleSet> out;
    for (const auto& t : texts) out.push_back(parse_rule_set(t));
    return out;
}

std::vector<RuleSet> all_codes() {
    std::vector<RuleSet> v;
    for (int c = 0; c < kRuleCodeCount; ++c) v.push_back(RuleSet::from_code(c));
    return v;
}

struct Item {
    RuleSet rs;
    int n;
};

std::vector<Item> items_of(const RunConfig& cfg) {
    std::vector<Item> items;
    for (RuleSet rs : cfg.codes)
        for (int n : cfg.ns) items.push_back({rs, n});
    return items;
}

void require_codes(const RunConfig& cfg) {
    if (cfg.codes.empty()) throw std::invalid_argument("no rule code given (use --code)");
}

void check_ns(const RunConfig& cfg) {
    for (int n : cfg.ns) cfg.check_n(n);
}

// ---- classify

struct ClassifyOptions {
    std::vector<std::string> codes;
    bool all = false;
    bool table4 = false;
};

int cmd_classify(const RunConfig& cfg, const ClassifyOptions& opt, std::ostream& out) {
    std::vector<RuleSet> codes = parse_codes(opt.codes);
    if (opt.all || (codes.empty() && !opt.table4)) codes = all_codes();

    auto orbits = valid_rulesets();
    std::map<ClassLabel, int> census;
    for (const auto& o : orbits) ++census[o.label];
    int valid = 0;
    for (RuleSet rs : all_codes()) valid += is_valid(rs);

    std::vector<std::vector<std::string>> table4;
    for (const auto& no : named_orbits()) {
        RuleSet rs = no.rules;
        table4.push_back({subclass_name(classify(rs)), std::string(no.alias), std::to_string(rs.code()),
                          rs.nests(TypeWord::HHTT) ? "nest" : "cross", rs.nests(TypeWord::TTHH) ? "nest" : "cross",
                          std::to_string(orbit_of(rs).size())});
    }

    if (cfg.format == Format::Json) {
        Json j = envelope("classify");
        if (!codes.empty()) {
            j["codes"] = Json::array();
            for (RuleSet rs : codes) {
                Json c = code_json(rs);
                c["representative"] = orbit_of(rs).front().code();
                j["codes"].push_back(c);
            }
        }
        j["summary"] = {{"valid", valid}, {"invalid", kRuleCodeCount - valid}, {"orbits", orbits.size()}};
        Json cj;
        for (ClassLabel c : {ClassLabel::Lex, ClassLabel::Revlex, ClassLabel::SimionA, ClassLabel::SimionB,
                             ClassLabel::SimionC})
            cj[std::string(name(c))] = census[c];
        j["census"] = cj;
        j["orbits"] = Json::array();
        for (const auto& o : orbits) {
            Json m = Json::array();
            for (RuleSet r : o.members) m.push_back(r.code());
            j["orbits"].push_back({{"representative", o.representative.code()},
                                   {"alias", orbit_alias(o.representative)},
                                   {"label", std::string(name(o.label))},
                                   {"members", m}});
        }
        if (opt.table4) {
            j["table4"] = Json::array();
            for (const auto& r : table4)
                j["table4"].push_back({{"class", r[0]}, {"alias", r[1]}, {"code", std::stoi(r[2])},
                                       {"HHTT", r[3]}, {"TTHH", r[4]}, {"orbit_size", std::stoi(r[5])}});
        }
        emit_json(out, j);
        return 0;
    }

    if (cfg.format == Format::Csv) {
        if (opt.table4 && codes.empty()) {
            out << csv_row({"class", "alias", "code", "HHTT", "TTHH", "orbit_size"});
            for (const auto& r : table4) out << csv_row(r);
        } else {
            out << csv_row({"code", "binary", "compact", "label", "representative", "orbit"});
            for (RuleSet rs : codes)
                out << csv_row({std::to_string(rs.code()), to_binary(rs), to_compact(rs),
                                std::string(name(classify(rs))), std::to_string(orbit_of(rs).front().code()),
                                orbit_alias(rs)});
        }
        return 0;
    }

    if (!codes.empty()) {
        std::vector<std::vector<std::string>> rows{{"code", "binary", "compact", "label", "representative", "orbit"}};
        for (RuleSet rs : codes)
            rows.push_back({std::to_string(rs.code()), to_binary(rs), to_compact(rs), std::string(name(classify(rs))),
                            std::to_string(orbit_of(rs).front().code()), orbit_alias(rs)});
        out << text_table(rows) << "\n";
    }
    out << "valid " << valid << ", invalid " << kRuleCodeCount - valid << ", orbits " << orbits.size() << "\n";
    out << "census: Lex " << census[ClassLabel::Lex] << ", Revlex " << census[ClassLabel::Revlex] << ", SimionA "
        << census[ClassLabel::SimionA] << ", SimionB " << census[ClassLabel::SimionB] << ", SimionC "
        << census[ClassLabel::SimionC] << "\n\n";
    std::vector<std::vector<std::string>> orows{{"representative", "alias", "label", "members"}};
    for (const auto& o : orbits) {
        std::string m;
        for (RuleSet r : o.members) m += (m.empty() ? "" : " ") + std::to_string(r.code());
        orows.push_back({std::to_string(o.representative.code()), orbit_alias(o.representative),
                         std::string(name(o.label)), m});
    }
    out << text_table(orows);
    if (opt.table4) {
        std::vector<std::vector<std::string>> rows{{"class", "alias", "code", "HHTT", "TTHH", "orbit_size"}};
        rows.insert(rows.end(), table4.begin(), table4.end());
        out << "\n" << text_table(rows);
    }
    return 0;
}

// ---- verify

struct VerifyResult {
    Json json;
    std::string text;
    std::string csv;
    bool pass = true;
};

VerifyResult verify_item(const RunConfig& cfg, const Item& it) {
    int cap = cfg.effective_cap();
    std::vector<AxiomReport> reports = {check_permissible(it.rs, it.n, cfg.witnesses, cap),
                                        check_support_axiom(it.rs, it.n, cfg.witnesses, cap),
                                        check_linkage_axiom(it.rs, it.n, cfg.witnesses, cap)};
    VerifyResult r;
    r.json = code_json(it.rs);
    r.json["n"] = it.n;
    r.json["reports"] = Json::array();
    std::ostringstream text;
    for (const auto& rep : reports) {
        r.pass = r.pass && rep.pass;
        r.json["reports"].push_back(to_json(rep));
    }
    r.json["pass"] = r.pass;
    text << code_title(it.rs) << " " << name(classify(it.rs)) << " n=" << it.n << ": " << (r.pass ? "PASS" : "FAIL")
         << "\n";
    for (const auto& rep : reports) {
        r.csv += csv_row({std::to_string(it.rs.code()), std::to_string(it.n), rep.axiom, rep.pass ? "pass" : "fail",
                          std::to_string(rep.witnesses.size())});
        if (rep.pass) continue;
        text << "  " << rep.axiom << " FAIL\n";
        for (const auto& w : rep.witnesses) {
            text << "    " << w.axiom;
            if (!w.I.empty() || !w.J.empty()) text << " I=" << to_string(w.I) << " J=" << to_string(w.J);
            if (w.k) text << " k=" << *w.k;
            if (!w.matchings.empty()) text << " faces " << matchings_text(w.matchings);
            text << ": " << w.detail << "\n";
        }
    }
    r.text = text.str();
    return r;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    require_codes(cfg);
    check_ns(cfg);
    auto items = items_of(cfg);
    auto results =
        ordered_map<VerifyResult>(items.size(), cfg.jobs, [&](std::size_t i) { return verify_item(cfg, items[i]); });
    bool pass = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
    if (cfg.format == Format::Json) {
        Json j = envelope("verify");
        j["pass"] = pass;
        j["results"] = Json::array();
        for (auto& r : results) j["results"].push_back(std::move(r.json));
        emit_json(out, j);
    } else if (cfg.format == Format::Csv) {
        out << csv_row({"code", "n", "axiom", "pass", "witnesses"});
        for (const auto& r : results) out << r.csv;
    } else {
        for (const auto& r : results) out << r.text;
    }
    return pass ? 0 : 1;
}

// ---- faces

struct FacesOptions {
    bool refined = false;
    std::string selector = "all";
};

int cmd_faces(const RunConfig& cfg, const FacesOptions& opt, std::ostream& out) {
    require_codes(cfg);
    check_ns(cfg);
    Selector sel = parse_selector(opt.selector);
    auto items = items_of(cfg);
    auto tables = ordered_map<FaceTable>(items.size(), cfg.jobs, [&](std::size_t i) {
        return face_table(items[i].rs, items[i].n, sel, cfg.effective_cap());
    });
    auto f_vector = [](const FaceTable& t) {
        std::vector<std::uint64_t> f;
        for (int k = 0; k <= t.n; ++k) f.push_back(t.total_of_size(k));
        return f;
    };

    if (cfg.format == Format::Json) {
        Json j = envelope("faces");
        j["results"] = Json::array();
        for (std::size_t k = 0; k < items.size(); ++k) {
            Json r = code_json(items[k].rs);
            r["n"] = tables[k].n;
            r["selector"] = std::string(name(sel));
            r["f_vector"] = f_vector(tables[k]);
            if (opt.refined) r["table"] = to_json(tables[k]);
            r["non_forest"] = tables[k].non_forest;
            j["results"].push_back(r);
        }
        emit_json(out, j);
    } else if (cfg.format == Format::Csv) {
        out << (opt.refined ? csv_row({"code", "n", "i", "j", "count"}) : csv_row({"code", "n", "k", "count"}));
        for (std::size_t k = 0; k < items.size(); ++k) {
            std::string code = std::to_string(items[k].rs.code()), n = std::to_string(items[k].n);
            if (opt.refined) {
                for (auto [ij, c] : tables[k].counts)
                    out << csv_row({code, n, std::to_string(ij.first), std::to_string(ij.second), std::to_string(c)});
            } else {
                auto f = f_vector(tables[k]);
                for (std::size_t a = 0; a < f.size(); ++a)
                    out << csv_row({code, n, std::to_string(a), std::to_string(f[a])});
            }
        }
    } else {
        for (std::size_t k = 0; k < items.size(); ++k) {
            out << code_title(items[k].rs) << " n=" << items[k].n << " " << name(sel) << " faces\n";
            std::vector<std::vector<std::string>> rows;
            if (opt.refined) {
                rows.push_back({"i", "j", "count"});
                for (auto [ij, c] : tables[k].counts)
                    rows.push_back({std::to_string(ij.first), std::to_string(ij.second), std::to_string(c)});
            } else {
                rows.push_back({"k", "count"});
                auto f = f_vector(tables[k]);
                for (std::size_t a = 0; a < f.size(); ++a) rows.push_back({std::to_string(a), std::to_string(f[a])});
            }
            out << text_table(rows);
            if (tables[k].non_forest) out << "non-forest cliques: " << tables[k].non_forest << "\n";
        }
    }
    return 0;
}

// ---- facets

// Closed-form number of facets with i forward arrows, when the class has one.
std::optional<mpz_class> facet_formula(RuleSet rs, int n, int i) {
    ClassLabel c = classify(rs);
    if (c == ClassLabel::Lex) return catalan_number(n);
    if (c == ClassLabel::Revlex) return revlex_facet_count(n, i);
    if (is_simion(c)) return rs.nests(TypeWord::THTH) ? simion_facet_count(n, i) : simion_facet_count(n, n - i);
    return std::nullopt;
}

int cmd_facets(const RunConfig& cfg, std::ostream& out) {
    require_codes(cfg);
    check_ns(cfg);
    auto items = items_of(cfg);
    auto tables = ordered_map<FaceTable>(items.size(), cfg.jobs, [&](std::size_t i) {
        return face_table(items[i].rs, items[i].n, Selector::Facets, cfg.effective_cap());
    });
    bool pass = true;
    Json results = Json::array();
    std::string text, csv = csv_row({"code", "n", "i", "count", "formula", "match"});
    for (std::size_t k = 0; k < items.size(); ++k) {
        auto [rs, n] = items[k];
        Json r = code_json(rs);
        r["n"] = n;
        r["rows"] = Json::array();
        bool ok = true;
        std::vector<std::vector<std::string>> rows{{"i", "count", "formula", "match"}};
        for (int i = 0; i <= n; ++i) {
            std::uint64_t got = tables[k].at(i, n - i);
            auto f = facet_formula(rs, n, i);
            bool match = !f || *f == got;
            ok = ok && match;
            std::string fs = f ? f->get_str() : "";
            r["rows"].push_back({{"i", i}, {"count", got}, {"formula", f ? Json(f->get_ui()) : Json(nullptr)},
                                 {"match", f ? Json(match) : Json(nullptr)}});
            std::string ms = f ? (match ? "yes" : "NO") : "";
            rows.push_back({std::to_string(i), std::to_string(got), fs.empty() ? "-" : fs, ms.empty() ? "-" : ms});
            csv += csv_row({std::to_string(rs.code()), std::to_string(n), std::to_string(i), std::to_string(got), fs, ms});
        }
        r["total"] = tables[k].total();
        r["pass"] = ok;
        pass = pass && ok;
        results.push_back(r);
        text += code_title(rs) + " n=" + std::to_string(n) + " facets by forward arrows\n" + text_table(rows);
        text += "total " + std::to_string(tables[k].total()) + "\n";
    }
    if (cfg.format == Format::Json) {
        Json j = envelope("facets");
        j["pass"] = pass;
        j["results"] = results;
        emit_json(out, j);
    } else {
        out << (cfg.format == Format::Csv ? csv : text);
    }
    return pass ? 0 : 1;
}

// ---- excess

int cmd_excess(const RunConfig& cfg, bool all_orbits, std::ostream& out) {
    RunConfig c = cfg;
    if (all_orbits) {
        c.codes.clear();
        for (const auto& no : named_orbits()) c.codes.push_back(no.rules);
    }
    require_codes(c);
    check_ns(c);
    auto items = items_of(c);
    auto sigs = ordered_map<ExcessSignature>(items.size(), c.jobs, [&](std::size_t i) {
        c.check_n(items[i].n);
        return excess_signature(items[i].rs, items[i].n);
    });
    if (c.format == Format::Json) {
        Json j = envelope("excess");
        j["results"] = Json::array();
        for (std::size_t k = 0; k < items.size(); ++k) {
            auto [rs, n] = items[k];
            Json r = code_json(rs);
            r["class"] = subclass_name(classify(rs));
            r["n"] = n;
            r["signature"] = sigs[k].to_string();
            Json deg = Json::array();
            for (const Arrow& a : arrows_of(n)) deg.push_back({{"arrow", to_json(a)}, {"excess", excess_degree(rs, n, a)}});
            r["degrees"] = deg;
            j["results"].push_back(r);
        }
        emit_json(out, j);
        return 0;
    }
    std::vector<std::vector<std::string>> rows{{"class", "orbit", "code", "n", "signature"}};
    for (std::size_t k = 0; k < items.size(); ++k) {
        auto [rs, n] = items[k];
        rows.push_back({subclass_name(classify(rs)), orbit_alias(rs), std::to_string(rs.code()), std::to_string(n),
                        sigs[k].to_string()});
    }
    if (c.format == Format::Csv) {
        for (const auto& r : rows) out << csv_row(r);
    } else {
        out << text_table(rows);
    }
    return 0;
}

// ---- match

struct MatchOptions {
    std::string rules, tails, heads;
};

int cmd_match(const RunConfig& cfg, const MatchOptions& opt, std::ostream& out) {
    RuleSet rs = parse_rule_set(opt.rules);
    NodeSet I = parse_node_set(opt.tails), J = parse_node_set(opt.heads);
    if (I.size() != J.size()) throw std::invalid_argument("--tails and --heads need the same size");
    for (int a : I)
        if (std::binary_search(J.begin(), J.end(), a))
            throw std::invalid_argument("--tails and --heads must be disjoint");
    int top = std::max(I.empty() ? 1 : I.back(), J.empty() ? 1 : J.back());
    cfg.check_n(top - 1);

    auto found = find_support_matchings(rs, I, J);
    std::optional<Matching> built;
    std::string build_error;
    try {
        built = construct_matching(rs, I, J);
    } catch (const std::invalid_argument& e) {
        build_error = e.what();
    }
    bool unique = found.size() == 1;
    bool pass = unique && (!built || *built == found.front());

    if (cfg.format == Format::Json) {
        Json j = envelope("match");
        j.update(code_json(rs));
        j["tails"] = I;
        j["heads"] = J;
        j["support"] = Json::array();
        for (const auto& m : found) j["support"].push_back(to_json(m));
        j["unique"] = unique;
        j["constructed"] = built ? to_json(*built) : Json(nullptr);
        if (!built) j["construct_error"] = build_error;
        j["pass"] = pass;
        emit_json(out, j);
    } else if (cfg.format == Format::Csv) {
        out << csv_row({"source", "matching"});
        for (const auto& m : found) out << csv_row({"support", to_string(m)});
        if (built) out << csv_row({"constructed", to_string(*built)});
    } else {
        out << code_title(rs) << " " << name(classify(rs)) << " I=" << to_string(I) << " J=" << to_string(J) << "\n";
        out << "support matchings (" << found.size() << "): " << (found.empty() ? "none" : matchings_text(found))
            << "\n";
        out << "constructed: " << (built ? to_string(*built) : "n/a (" + build_error + ")") << "\n";
        out << (pass ? "PASS" : "FAIL") << "\n";
    }
    return pass ? 0 : 1;
}

// ---- series dump

struct DumpOptions {
    std::string name;
    int order = 5;
    std::string orders;
    std::string code;
    std::string selector = "saturated";
    std::string orientation = "thth-nest";
    int i = 0;
    int k = 1;
};

const std::vector<std::string>& dump_names() {
    static const std::vector<std::string> names = {
        "catalan",          "delannoy-gf",     "backward-only",   "backward-only-saturated",
        "refined-backward", "refined-backward-saturated",         "forest",
        "lex-forest",       "simion",          "simion-a",        "simion-b",
        "simion-c",         "revlex",          "delannoy-egf",    "delannoy-egf-psi",
        "bessel",           "psi",             "node-enriched-egf", "faces"};
    return names;
}

TruncatedSeries build_series(const RunConfig& cfg, const DumpOptions& opt) {
    const int m = opt.order;
    auto with = [&](std::initializer_list<Var> vars) {
        Orders o;
        for (Var v : vars) o.set(v, m);
        return parse_orders(opt.orders, o);
    };
    const std::string& s = opt.name;
    if (s == "catalan") return catalan_series(with({Var::u})[Var::u]);
    if (s == "delannoy-gf") return delannoy_genfunc(with({Var::x, Var::u, Var::v}));
    if (s == "backward-only") return backward_only_series(m);
    if (s == "backward-only-saturated") return backward_only_saturated(m);
    if (s == "refined-backward") return refined_backward_series(opt.i, m);
    if (s == "refined-backward-saturated") return refined_backward_saturated(opt.i, m);
    if (s == "forest") return g_k(opt.k);
    if (s == "lex-forest") return lex_mixed_forest_poly(opt.k, opt.i);
    if (s == "simion") {
        SimionOrientation o;
        if (opt.orientation == "thth-nest") o = SimionOrientation::ThthNestHthtNonest;
        else if (opt.orientation == "thth-nonest") o = SimionOrientation::ThthNonestHthtNest;
        else throw std::invalid_argument("--orientation is thth-nest or thth-nonest");
        return simion_saturated_series(o, with({Var::x, Var::y, Var::z}));
    }
    if (s == "simion-a") return simion_subclass_series(ClassLabel::SimionA, with({Var::x, Var::y, Var::z}));
    if (s == "simion-b") return simion_subclass_series(ClassLabel::SimionB, with({Var::x, Var::y, Var::z}));
    if (s == "simion-c") return simion_subclass_series(ClassLabel::SimionC, with({Var::x, Var::y, Var::z}));
    if (s == "revlex") return revlex_saturated_series(with({Var::x, Var::y, Var::z}));
    if (s == "delannoy-egf") return delannoy_egf(with({Var::u, Var::v}));
    if (s == "delannoy-egf-psi") return delannoy_egf_psi(with({Var::u, Var::v}));
    if (s == "bessel") return bessel_side(with({Var::u, Var::v}));
    if (s == "psi") return psi_series(opt.k, m);
    if (s == "node-enriched-egf") {
        Orders o = with({Var::u, Var::v});
        o.set(Var::z, 2 * m);
        return node_enriched_egf(parse_orders(opt.orders, o));
    }
    if (s == "faces") {
        if (opt.code.empty()) throw std::invalid_argument("series dump --name faces needs --code");
        cfg.check_n(m);
        return face_series(parse_rule_set(opt.code), m, parse_selector(opt.selector));
    }
    throw std::invalid_argument("unknown series '" + s + "'");
}

int cmd_dump(const RunConfig& cfg, const DumpOptions& opt, std::ostream& out) {
    if (opt.order < 0 || opt.order > kMaxExponent) throw std::invalid_argument("--order out of range");
    TruncatedSeries s = build_series(cfg, opt);
    if (cfg.format == Format::Json) {
        Json j = envelope("series dump");
        j["name"] = opt.name;
        j.update(series_json(s));
        emit_json(out, j);
    } else if (cfg.format == Format::Text) {
        out << s.to_string() << "\n";
    } else {
        out << series_csv(s);
    }
    return 0;
}

// ---- series-check

struct CheckCmdOptions {
    bool all = false;
    std::vector<std::string> tags;
    int zorder = 5;
    int facet_n = 6;
};

int cmd_series_check(const RunConfig& cfg, const CheckCmdOptions& opt, std::ostream& out) {
    std::vector<std::string> tags = opt.tags;
    if (opt.all || tags.empty()) tags = identity_tags();
    const auto& known = identity_tags();
    for (const auto& t : tags)
        if (std::find(known.begin(), known.end(), t) == known.end())
            throw std::invalid_argument("unknown identity tag '" + t + "'");
    cfg.check_n(opt.zorder);
    cfg.check_n(opt.facet_n);
    CheckOptions co;
    co.zorder = opt.zorder;
    co.facet_n = opt.facet_n;
    co.cap = cfg.effective_cap();
    auto results =
        ordered_map<IdentityCheck>(tags.size(), cfg.jobs, [&](std::size_t i) { return run_identity(tags[i], co); });
    bool pass = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
    int passed = int(std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; }));

    if (cfg.format == Format::Json) {
        Json j = envelope("series-check");
        j["zorder"] = opt.zorder;
        j["facet_n"] = opt.facet_n;
        j["pass"] = pass;
        Json ledger;
        for (const auto& r : results) ledger[r.tag] = {{"pass", r.pass}, {"detail", r.detail}};
        j["ledger"] = ledger;
        emit_json(out, j);
    } else if (cfg.format == Format::Csv) {
        out << csv_row({"tag", "pass", "detail"});
        for (const auto& r : results) out << csv_row({r.tag, r.pass ? "pass" : "fail", r.detail});
    } else {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : results) rows.push_back({r.pass ? "PASS" : "FAIL", r.tag, r.detail});
        out << text_table(rows) << passed << "/" << results.size() << " identities hold\n";
    }
    return pass ? 0 : 1;
}

}  // namespace

Format parse_format(std::string_view s) {
    if (s == "text") return Format::Text;
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    throw std::invalid_argument("unknown format '" + std::string(s) + "'");
}

void RunConfig::check_n(int n) const {
    if (n < 0) throw std::invalid_argument("n must be nonnegative");
    if (n > effective_cap())
        throw ResourceError("n=" + std::to_string(n) + " exceeds the cap " + std::to_string(effective_cap()) +
                            (force ? "" : "; raise --cap or pass --force"));
}

std::vector<int> parse_n_list(std::string_view s) {
    std::vector<int> out;
    if (auto dots = s.find(".."); dots != std::string_view::npos) {
        int lo = parse_int(s.substr(0, dots), "n"), hi = parse_int(s.substr(dots + 2), "n");
        if (lo > hi) throw std::invalid_argument("empty n range '" + std::string(s) + "'");
        for (int n = lo; n <= hi; ++n) out.push_back(n);
        return out;
    }
    for (auto part : split(s, ',')) out.push_back(parse_int(part, "n"));
    return out;
}

NodeSet parse_node_set(std::string_view s) {
    if (s.size() >= 2 && s.front() == '{' && s.back() == '}') s = s.substr(1, s.size() - 2);
    NodeSet out;
    if (s.empty()) return out;
    for (auto part : split(s, ',')) {
        int v = parse_int(part, "node");
        if (v < 1) throw std::invalid_argument("nodes start at 1");
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw std::invalid_argument("repeated node");
    return out;
}

Orders parse_orders(std::string_view s, Orders base) {
    if (s.empty()) return base;
    for (auto part : split(s, ',')) {
        if (part.size() < 3 || part[1] != '=') throw std::invalid_argument("orders look like x=5,z=7");
        int v = parse_int(part.substr(2), "order");
        if (v < 0 || v > kMaxExponent) throw std::invalid_argument("order out of range");
        base.set(parse_var(part[0]), v);
    }
    return base;
}

Json to_json(const Arrow& a) { return Json::array({a.tail, a.head}); }

Json to_json(const Matching& m) {
    Json j = Json::array();
    for (const Arrow& a : m) j.push_back(to_json(a));
    return j;
}

Json to_json(const Witness& w) {
    Json j;
    j["axiom"] = w.axiom;
    j["I"] = w.I;
    j["J"] = w.J;
    j["k"] = w.k ? Json(*w.k) : Json(nullptr);
    j["matchings"] = Json::array();
    for (const auto& m : w.matchings) j["matchings"].push_back(to_json(m));
    j["detail"] = w.detail;
    return j;
}

Json to_json(const AxiomReport& r) {
    Json j;
    j["axiom"] = r.axiom;
    j["pass"] = r.pass;
    j["witnesses"] = Json::array();
    for (const auto& w : r.witnesses) j["witnesses"].push_back(to_json(w));
    return j;
}

Json to_json(const FaceTable& t) {
    Json j;
    j["n"] = t.n;
    j["selector"] = std::string(name(t.selector));
    j["counts"] = Json::array();
    for (auto [ij, c] : t.counts) j["counts"].push_back({ij.first, ij.second, c});
    return j;
}

std::string to_csv(const FaceTable& t) {
    std::string s = "i,j,count\n";
    for (auto [ij, c] : t.counts) s += csv_row({std::to_string(ij.first), std::to_string(ij.second), std::to_string(c)});
    return s;
}

namespace {

std::vector<Var> columns(const TruncatedSeries& s) {
    std::vector<Var> vars;
    auto used = s.variables();
    for (int k = 0; k < kVarCount; ++k) {
        Var v = Var(k);
        if (s.orders()[v] != kUnbounded || std::find(used.begin(), used.end(), v) != used.end()) vars.push_back(v);
    }
    return vars;
}

}  // namespace

std::string series_csv(const TruncatedSeries& s) {
    auto vars = columns(s);
    std::vector<std::string> header;
    for (Var v : vars) header.push_back(std::string(1, var_name(v)));
    header.push_back("numerator");
    header.push_back("denominator");
    std::string out = csv_row(header);
    for (const auto& [e, c] : s.terms()) {
        std::vector<std::string> row;
        for (Var v : vars) row.push_back(std::to_string(e[int(v)]));
        row.push_back(c.get_num().get_str());
        row.push_back(c.get_den().get_str());
        out += csv_row(row);
    }
    return out;
}

Json series_json(const TruncatedSeries& s) {
    auto vars = columns(s);
    Json j;
    Json orders;
    for (Var v : vars)
        orders[std::string(1, var_name(v))] = s.orders()[v] == kUnbounded ? Json(nullptr) : Json(s.orders()[v]);
    j["orders"] = orders;
    j["terms"] = Json::array();
    for (const auto& [e, c] : s.terms()) {
        Json ex = Json::array();
        for (Var v : vars) ex.push_back(e[int(v)]);
        j["terms"].push_back({{"exponents", ex}, {"coefficient", c.get_str()}});
    }
    j["variables"] = Json::array();
    for (Var v : vars) j["variables"].push_back(std::string(1, var_name(v)));
    return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Uniform flag triangulations of the boundary of the full root polytope", "rootflag"};
    app.require_subcommand(1);

    std::string format;
    int cap = -1;
    bool force = false, all_witnesses = false;
    int jobs = 1;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--cap", cap, "Largest n without --force (default $ROOTFLAG_MAX_N or 10)")
        ->check(CLI::Range(0, kHardMaxN));
    app.add_flag("--force", force, "Allow n above the cap, up to the hard limit");
    app.add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::Range(1, 256));
    app.add_flag("--all-witnesses", all_witnesses, "Report every witness, not only the first");

    std::vector<std::string> codes;
    std::string n_text = "5";

    auto add_code_opts = [&](CLI::App* sub, const std::string& n_default) {
        sub->add_option("--code", codes, "Rule code: number, 0b literal, compact, long form or alias");
        sub->add_option("--n", n_text, "n, a range a..b or a list")->default_str(n_default);
    };

    ClassifyOptions copt;
    auto* classify_cmd = app.add_subcommand("classify", "Class labels and the orbit census");
    classify_cmd->add_option("codes", copt.codes, "Rule codes");
    classify_cmd->add_flag("--all", copt.all, "All 64 codes");
    classify_cmd->add_flag("--table4", copt.table4, "Class and HHTT/TTHH condition per orbit alias");

    bool verify_all = false;
    auto* verify_cmd = app.add_subcommand("verify", "Permissibility, support and linkage axioms");
    add_code_opts(verify_cmd, "5");
    verify_cmd->add_flag("--all", verify_all, "All 64 codes");

    FacesOptions fopt;
    auto* faces_cmd = app.add_subcommand("faces", "Face counts by forward and backward arrows");
    add_code_opts(faces_cmd, "5");
    faces_cmd->add_flag("--refined", fopt.refined, "Table by (forward, backward) instead of by size");
    faces_cmd->add_option("--selector", fopt.selector, "all, saturated or facets")
        ->check(CLI::IsMember({"all", "saturated", "facets"}));

    auto* facets_cmd = app.add_subcommand("facets", "Facets by forward arrows against the closed forms");
    add_code_opts(facets_cmd, "5");

    bool all_orbits = false;
    auto* excess_cmd = app.add_subcommand("excess", "Excess-degree signatures");
    add_code_opts(excess_cmd, "4");
    excess_cmd->add_flag("--all-orbits", all_orbits, "One row per named orbit");

    MatchOptions mopt;
    auto* match_cmd = app.add_subcommand("match", "Support matching by search and by construction");
    match_cmd->add_option("--rules", mopt.rules, "Rule code")->required();
    match_cmd->add_option("--tails", mopt.tails, "Tail nodes, e.g. 1,3")->required();
    match_cmd->add_option("--heads", mopt.heads, "Head nodes, e.g. 2,4")->required();

    DumpOptions dopt;
    auto* series_cmd = app.add_subcommand("series", "Generating functions");
    series_cmd->require_subcommand(1);
    auto* dump_cmd = series_cmd->add_subcommand("dump", "Coefficients of one series");
    dump_cmd->add_option("--name", dopt.name, "Series name")->required()->check(CLI::IsMember(dump_names()));
    dump_cmd->add_option("--order", dopt.order, "Truncation order for every variable in play")->capture_default_str();
    dump_cmd->add_option("--orders", dopt.orders, "Per-variable orders, e.g. x=3,z=6");
    dump_cmd->add_option("--code", dopt.code, "Rule code for --name faces");
    dump_cmd->add_option("--selector", dopt.selector, "all or saturated for --name faces")
        ->check(CLI::IsMember({"all", "saturated", "facets"}))
        ->capture_default_str();
    dump_cmd->add_option("--orientation", dopt.orientation, "thth-nest or thth-nonest")->capture_default_str();
    dump_cmd->add_option("--i", dopt.i, "Index i")->capture_default_str();
    dump_cmd->add_option("--k", dopt.k, "Index k")->capture_default_str();

    CheckCmdOptions kopt;
    auto* check_cmd = app.add_subcommand("series-check", "Closed forms against enumeration");
    check_cmd->add_flag("--all", kopt.all, "Every identity");
    check_cmd->add_option("--tag", kopt.tags, "Identity tag (repeatable)");
    check_cmd->add_option("--zorder", kopt.zorder, "Largest n compared")->capture_default_str();
    check_cmd->add_option("--facet-n", kopt.facet_n, "Largest n for facet formulas")->capture_default_str();

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();
    dump_cmd->fallthrough();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg;
        cfg.cap = cap >= 0 ? cap : default_max_n();
        cfg.force = force;
        cfg.jobs = jobs;
        cfg.witnesses = all_witnesses ? WitnessPolicy::All : WitnessPolicy::First;
        cfg.codes = parse_codes(codes);
        cfg.ns = parse_n_list(n_text);

        if (classify_cmd->parsed()) {
            cfg.format = resolve(format, Format::Text);
            return cmd_classify(cfg, copt, out);
        }
        if (verify_cmd->parsed()) {
            if (verify_all) cfg.codes = all_codes();
            cfg.format = resolve(format, Format::Text);
            return cmd_verify(cfg, out);
        }
        if (faces_cmd->parsed()) {
            cfg.format = resolve(format, Format::Text);
            return cmd_faces(cfg, fopt, out);
        }
        if (facets_cmd->parsed()) {
            cfg.format = resolve(format, Format::Text);
            return cmd_facets(cfg, out);
        }
        if (excess_cmd->parsed()) {
            if (excess_cmd->count("--n") == 0) cfg.ns = {4};
            cfg.format = resolve(format, Format::Text);
            return cmd_excess(cfg, all_orbits, out);
        }
        if (match_cmd->parsed()) {
            cfg.format = resolve(format, Format::Text);
            return cmd_match(cfg, mopt, out);
        }
        if (dump_cmd->parsed()) {
            cfg.format = resolve(format, Format::Csv);
            return cmd_dump(cfg, dopt, out);
        }
        if (check_cmd->parsed()) {
            cfg.format = resolve(format, Format::Text);
            return cmd_series_check(cfg, kopt, out);
        }
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace rootflag::cli
