#pragma once

#include <array>
#include <climits>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "rootflag/core.hpp"

namespace rootflag {

// Formal variables: x forward arrows, y backward arrows, z and t nodes minus
// one (saturated / all faces), u and v Delannoy and EGF markers, w spare.
enum class Var : std::uint8_t { x, y, z, t, u, v, w };
inline constexpr int kVarCount = 7;
inline constexpr int kUnbounded = INT_MAX;  // exact in that variable
inline constexpr int kMaxExponent = 255;

char var_name(Var v);
Var parse_var(char c);

using Exponents = std::array<int, kVarCount>;

Exponents exps(std::initializer_list<std::pair<Var, int>> list);

// Largest exponent kept per variable. kUnbounded means nothing was dropped.
struct Orders {
    std::array<int, kVarCount> max;

    Orders() { max.fill(kUnbounded); }
    Orders(std::initializer_list<std::pair<Var, int>> list);

    int operator[](Var v) const { return max[int(v)]; }
    Orders& set(Var v, int order) {
        max[int(v)] = order;
        return *this;
    }
    bool admits(const Exponents& e) const;

    friend bool operator==(const Orders&, const Orders&) = default;
};

Orders meet(const Orders& a, const Orders& b);

class TruncatedSeries {
public:
    using Key = std::uint64_t;

    TruncatedSeries() = default;
    explicit TruncatedSeries(Orders o) : orders_(o) {}

    static TruncatedSeries constant(const mpq_class& c, Orders o = {});
    static TruncatedSeries variable(Var v, Orders o = {});
    static TruncatedSeries monomial(const Exponents& e, const mpq_class& c, Orders o = {});

    const Orders& orders() const { return orders_; }
    // Variables that occur in some stored term, in x..w order.
    std::vector<Var> variables() const;
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    mpq_class coeff(const Exponents& e) const;
    mpq_class coeff(std::initializer_list<std::pair<Var, int>> list) const { return coeff(exps(list)); }
    mpq_class constant_term() const { return coeff(Exponents{}); }

    // Adds c times the monomial; silently drops it outside the truncation.
    void add_term(const Exponents& e, const mpq_class& c);

    // Terms in increasing lexicographic order of (x, y, z, t, u, v, w) exponents.
    std::vector<std::pair<Exponents, mpq_class>> terms() const;

    TruncatedSeries operator-() const;
    TruncatedSeries& operator+=(const TruncatedSeries& o);
    TruncatedSeries& operator-=(const TruncatedSeries& o);
    TruncatedSeries& operator*=(const mpq_class& c);
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator*(TruncatedSeries a, const mpq_class& c) { return a *= c; }
    friend TruncatedSeries operator*(const mpq_class& c, TruncatedSeries a) { return a *= c; }
    friend TruncatedSeries operator+(TruncatedSeries a, const mpq_class& c);
    friend TruncatedSeries operator+(const mpq_class& c, TruncatedSeries a) { return a + c; }
    friend TruncatedSeries operator-(TruncatedSeries a, const mpq_class& c) { return a + mpq_class(-c); }
    friend TruncatedSeries operator-(const mpq_class& c, const TruncatedSeries& a) { return -a + c; }

    // Multiplicative inverse; needs a nonzero constant term, and every other
    // term must involve a variable of finite order.
    TruncatedSeries inverse() const;
    friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b.inverse(); }
    TruncatedSeries pow(int k) const;

    // d/dv; the truncation order in v drops by one.
    TruncatedSeries derivative(Var v) const;
    // Exact division by a monomial; throws std::domain_error if some term is
    // not divisible.
    TruncatedSeries divide_by_monomial(const Exponents& e) const;
    TruncatedSeries truncate(const Orders& o) const;
    // Coefficient of v^k as a series in the remaining variables.
    TruncatedSeries coefficient_of(Var v, int k) const;
    // Renames variables by a permutation given as pairs (from, to).
    TruncatedSeries rename(std::initializer_list<std::pair<Var, Var>> perm) const;

    // Simultaneous substitution v -> g for every (v, g) in subs. Each g must
    // have zero constant term. The result is truncated to target (met with
    // what the inputs determine); throws std::domain_error when a dropped
    // power of some substituted variable would still reach the target box.
    TruncatedSeries substitute(const std::map<Var, TruncatedSeries>& subs, const Orders& target = {}) const;

    bool is_integral() const;
    // Throws std::domain_error naming the first non-integral or negative coefficient.
    void assert_nonnegative_integral(const std::string& what) const;

    // Coefficientwise equality on the common truncation box.
    friend bool agree(const TruncatedSeries& a, const TruncatedSeries& b);
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a.orders_ == b.orders_ && a.terms_ == b.terms_;
    }

    // Human-readable form, e.g. "1 + 2*x*z^2 - 1/3*y".
    std::string to_string() const;

private:
    static Key pack(const Exponents& e);
    static Exponents unpack(Key k);

    Orders orders_;
    std::map<Key, mpq_class> terms_;
};

// First mismatch on the common box as "exponents: lhs vs rhs", empty when equal.
std::string first_difference(const TruncatedSeries& a, const TruncatedSeries& b);
std::string format_exponents(const Exponents& e);

// exp(g) for g with zero constant term.
TruncatedSeries exp_series(const TruncatedSeries& g);

mpz_class binomial(long n, long k);
mpz_class factorial(long n);
mpz_class catalan_number(long n);

// Catalan generating function C(u) to u^order, by iterating C = 1 + u C^2.
TruncatedSeries catalan_series(int order);

// C(y z (z + 1)) truncated to the given y, z orders.
TruncatedSeries catalan_composite(const Orders& o);

struct DelannoyPoly {
    int a = 0;
    int b = 0;
    std::vector<mpz_class> coeffs;  // coeffs[j] = paths with j steps

    mpz_class at(int j) const { return j < int(coeffs.size()) ? coeffs[std::size_t(j)] : mpz_class(0); }
    mpz_class value_at_one() const;
    int degree() const;
    int lowest_degree() const;
    TruncatedSeries as_series(Var v, Orders o = {}) const;

    friend bool operator==(const DelannoyPoly&, const DelannoyPoly&) = default;
};

enum class DelannoyMethod { Paths, Binomial, GeneratingFunction };

DelannoyPoly delannoy_poly(int a, int b, DelannoyMethod method);
// All three methods, throwing std::logic_error if they disagree.
DelannoyPoly delannoy_poly(int a, int b);

// 1 / (1 - x (u + v + u v)).
TruncatedSeries delannoy_genfunc(const Orders& o);

enum class TransferDirection { FullToAll, AllToFull };

// Saturated series in z <-> all-face series in t, with the correction term
// for the empty face when has_empty is set.
TruncatedSeries transfer(const TruncatedSeries& s, TransferDirection dir, bool has_empty);

// Backward-only face series F(0, y, t) from F = 1 + t F + y t F^2.
TruncatedSeries backward_only_series(int order);
// Same in closed form: C(y z (z + 1)) + z over 1 + z.
TruncatedSeries backward_only_saturated(int order);
mpz_class backward_only_count(int n, int j);  // binom(n+j,j) binom(n,j) / (j+1)

// Faces whose endpoint list starts with exactly i heads followed by a tail.
TruncatedSeries refined_backward_series(int i, int order);
// The saturated version in closed form (y z (1+z) C)^i / (1 + z), with the
// empty face correction at i = 0.
TruncatedSeries refined_backward_saturated(int i, int order);

// Backward-only forests with k arrows and no isolated node, by node count.
TruncatedSeries g_k(int k);

enum class SimionOrientation { ThthNonestHthtNest, ThthNestHthtNonest };

std::string_view name(SimionOrientation o);
SimionOrientation orientation_of(bool thth_nests);

// Saturated face series of the Simion class in the closed form with C(.)
// standing for every 1 / (1 - u C) factor.
TruncatedSeries simion_saturated_series(SimionOrientation o, const Orders& orders);
// The subclass expression (SimionA, SimionB or SimionC) for THTH = NEST,
// with the 1 / (1 - u C) factors inverted directly.
TruncatedSeries simion_subclass_series(ClassLabel subclass, const Orders& orders);
mpz_class simion_facet_count(int n, int i);

// Saturated face series of the revlex class from the Delannoy quadruple sum.
TruncatedSeries revlex_saturated_series(const Orders& orders);
mpz_class revlex_facet_count(int n, int k);

// Exponential generating function of Delannoy polynomials,
// sum D_{a,b}(x) u^{a+1} v^{b+1} / ((a+1)! (b+1)!).
TruncatedSeries delannoy_egf(const Orders& o);
// The same function rebuilt from products of psi series.
TruncatedSeries delannoy_egf_psi(const Orders& o);
// psi_k(z) = sum z^n / ((n + k) n!), k >= 1.
TruncatedSeries psi_series(int k, int order);
// psi_k from the closed expression with e^z, divided out by z^k.
TruncatedSeries psi_closed(int k, int order);
// exp(x (u + v)) sum ((x^2 + x) u v)^k / k!^2.
TruncatedSeries bessel_side(const Orders& o);

// Node-enriched exponential generating function of saturated revlex faces,
// truncated at u^{orders[u]} v^{orders[v]}.
TruncatedSeries node_enriched_egf(const Orders& orders);

mpq_class lex_refined_count(int n, int k);
mpz_class catalan_run_identity(int k, int i);
TruncatedSeries lex_mixed_forest_poly(int k, int i);

}  // namespace rootflag
