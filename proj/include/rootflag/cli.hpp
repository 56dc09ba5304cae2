#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "rootflag/axioms.hpp"
#include "rootflag/complex.hpp"
#include "rootflag/core.hpp"
#include "rootflag/series.hpp"

namespace rootflag::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class Format { Text, Json, Csv };

Format parse_format(std::string_view s);

// Everything a subcommand needs besides its own switches.
struct RunConfig {
    std::vector<RuleSet> codes;
    std::vector<int> ns;
    Orders orders;
    Format format = Format::Text;
    WitnessPolicy witnesses = WitnessPolicy::First;
    int cap = default_max_n();
    bool force = false;
    int jobs = 1;

    // Throws ResourceError for n above the cap unless force is set.
    void check_n(int n) const;
    // Cap handed to the enumerators: the hard limit under --force.
    int effective_cap() const { return force ? kHardMaxN : cap; }
};

// "5", "2..6" or "1,3,5"; throws std::invalid_argument.
std::vector<int> parse_n_list(std::string_view s);
// "1,3,4" or "{1,3,4}"; throws std::invalid_argument.
NodeSet parse_node_set(std::string_view s);
// "x=5,z=7" on top of base; throws std::invalid_argument.
Orders parse_orders(std::string_view s, Orders base = {});

Json to_json(const Arrow& a);
Json to_json(const Matching& m);
Json to_json(const Witness& w);
Json to_json(const AxiomReport& r);
Json to_json(const FaceTable& t);
std::string to_csv(const FaceTable& t);  // header i,j,count

// Coefficients as rows "exponents...,numerator,denominator", one column per
// variable that has a finite order or occurs in a term.
std::string series_csv(const TruncatedSeries& s);
Json series_json(const TruncatedSeries& s);

// Runs fn(0..count-1) on up to jobs threads; results come back in index
// order and the first exception (by index) is rethrown.
template <class T, class Fn>
std::vector<T> ordered_map(std::size_t count, int jobs, Fn fn);

// The whole command line after the program name. Exit codes: 0 pass,
// 1 mathematical failure, 2 usage or resource error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rootflag::cli

#include "rootflag/cli_parallel.hpp"
