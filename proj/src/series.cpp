#include "rootflag/series.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace rootflag {

namespace {

constexpr const char* kNames = "xyztuvw";

TruncatedSeries var(Var v) { return TruncatedSeries::variable(v); }

int finite_order(const Orders& o, Var v, const char* what) {
    if (o[v] == kUnbounded) throw std::invalid_argument(std::string(what) + ": needs a finite order in " + var_name(v));
    return o[v];
}

}  // namespace

char var_name(Var v) { return kNames[int(v)]; }

Var parse_var(char c) {
    for (int k = 0; k < kVarCount; ++k)
        if (kNames[k] == c) return Var(k);
    throw std::invalid_argument(std::string("unknown variable '") + c + "'");
}

Exponents exps(std::initializer_list<std::pair<Var, int>> list) {
    Exponents e{};
    for (auto [v, k] : list) e[int(v)] += k;
    return e;
}

Orders::Orders(std::initializer_list<std::pair<Var, int>> list) : Orders() {
    for (auto [v, k] : list) max[int(v)] = k;
}

bool Orders::admits(const Exponents& e) const {
    for (int k = 0; k < kVarCount; ++k)
        if (e[k] > max[k]) return false;
    return true;
}

Orders meet(const Orders& a, const Orders& b) {
    Orders o;
    for (int k = 0; k < kVarCount; ++k) o.max[k] = std::min(a.max[k], b.max[k]);
    return o;
}

// x sits in the top byte so that key order is lexicographic in (x, ..., w).
TruncatedSeries::Key TruncatedSeries::pack(const Exponents& e) {
    Key k = 0;
    for (int i = 0; i < kVarCount; ++i) {
        if (e[i] < 0 || e[i] > kMaxExponent) throw std::out_of_range("exponent out of range");
        k = (k << 8) | Key(e[i]);
    }
    return k;
}

Exponents TruncatedSeries::unpack(Key k) {
    Exponents e{};
    for (int i = kVarCount - 1; i >= 0; --i) {
        e[i] = int(k & 0xff);
        k >>= 8;
    }
    return e;
}

TruncatedSeries TruncatedSeries::constant(const mpq_class& c, Orders o) {
    TruncatedSeries s(o);
    s.add_term(Exponents{}, c);
    return s;
}

TruncatedSeries TruncatedSeries::variable(Var v, Orders o) { return monomial(exps({{v, 1}}), 1, o); }

TruncatedSeries TruncatedSeries::monomial(const Exponents& e, const mpq_class& c, Orders o) {
    TruncatedSeries s(o);
    s.add_term(e, c);
    return s;
}

std::vector<Var> TruncatedSeries::variables() const {
    std::array<bool, kVarCount> seen{};
    for (const auto& [k, c] : terms_) {
        Exponents e = unpack(k);
        for (int i = 0; i < kVarCount; ++i) seen[i] |= e[i] > 0;
    }
    std::vector<Var> out;
    for (int i = 0; i < kVarCount; ++i)
        if (seen[i]) out.push_back(Var(i));
    return out;
}

mpq_class TruncatedSeries::coeff(const Exponents& e) const {
    if (!orders_.admits(e)) throw std::out_of_range("coefficient " + format_exponents(e) + " lies beyond the truncation");
    auto it = terms_.find(pack(e));
    return it == terms_.end() ? mpq_class(0) : it->second;
}

void TruncatedSeries::add_term(const Exponents& e, const mpq_class& c) {
    if (sgn(c) == 0 || !orders_.admits(e)) return;
    auto [it, fresh] = terms_.try_emplace(pack(e), c);
    if (!fresh) {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

std::vector<std::pair<Exponents, mpq_class>> TruncatedSeries::terms() const {
    std::vector<std::pair<Exponents, mpq_class>> out;
    out.reserve(terms_.size());
    for (const auto& [k, c] : terms_) out.emplace_back(unpack(k), c);
    return out;
}

TruncatedSeries TruncatedSeries::operator-() const {
    TruncatedSeries r = *this;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
    Orders m = meet(orders_, o.orders_);
    if (!(m == orders_)) *this = truncate(m);
    for (const auto& [k, c] : o.terms_) add_term(unpack(k), c);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) { return *this += -o; }

TruncatedSeries& TruncatedSeries::operator*=(const mpq_class& c) {
    if (sgn(c) == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
}

TruncatedSeries operator+(TruncatedSeries a, const mpq_class& c) {
    a.add_term(Exponents{}, c);
    return a;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries r(meet(a.orders_, b.orders_));
    std::vector<std::pair<Exponents, const mpq_class*>> lhs, rhs;
    for (const auto& [k, c] : a.terms_) lhs.emplace_back(TruncatedSeries::unpack(k), &c);
    for (const auto& [k, c] : b.terms_) rhs.emplace_back(TruncatedSeries::unpack(k), &c);
    std::unordered_map<TruncatedSeries::Key, mpq_class> acc;
    for (const auto& [ea, ca] : lhs)
        for (const auto& [eb, cb] : rhs) {
            Exponents e;
            bool ok = true;
            for (int i = 0; i < kVarCount && ok; ++i) {
                e[i] = ea[i] + eb[i];
                ok = e[i] <= r.orders_.max[i];
            }
            if (!ok) continue;
            acc[TruncatedSeries::pack(e)] += *ca * *cb;
        }
    for (auto& [k, c] : acc)
        if (sgn(c) != 0) r.terms_.emplace(k, std::move(c));
    return r;
}

namespace {

// Every non-constant term must involve a variable of finite order; then the
// non-constant part is nilpotent inside the truncation box.
bool nilpotent_part(const TruncatedSeries& s) {
    for (const auto& [e, c] : s.terms()) {
        bool constant = true, bounded = false;
        for (int i = 0; i < kVarCount; ++i)
            if (e[i] > 0) {
                constant = false;
                bounded |= s.orders().max[i] != kUnbounded;
            }
        if (!constant && !bounded) return false;
    }
    return true;
}

}  // namespace

TruncatedSeries TruncatedSeries::inverse() const {
    mpq_class c0 = constant_term();
    if (sgn(c0) == 0) throw std::domain_error("inverse of a series with zero constant term");
    if (!nilpotent_part(*this)) throw std::domain_error("inverse needs finite orders in every variable that occurs");
    TruncatedSeries r = constant(1 / c0, orders_);
    // Newton: r <- r (2 - s r) doubles the number of correct degrees.
    for (;;) {
        TruncatedSeries next = r * (2 - *this * r);
        if (next == r) return r;
        r = std::move(next);
    }
}

TruncatedSeries TruncatedSeries::pow(int k) const {
    if (k < 0) return inverse().pow(-k);
    TruncatedSeries result = constant(1, orders_), base = *this;
    while (k) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

TruncatedSeries TruncatedSeries::derivative(Var v) const {
    Orders o = orders_;
    int i = int(v);
    if (o.max[i] != kUnbounded) --o.max[i];
    TruncatedSeries r(o);
    for (const auto& [k, c] : terms_) {
        Exponents e = unpack(k);
        if (e[i] == 0) continue;
        mpq_class d = c * e[i];
        --e[i];
        r.add_term(e, d);
    }
    return r;
}

TruncatedSeries TruncatedSeries::divide_by_monomial(const Exponents& m) const {
    Orders o = orders_;
    for (int i = 0; i < kVarCount; ++i)
        if (o.max[i] != kUnbounded) o.max[i] -= m[i];
    TruncatedSeries r(o);
    for (const auto& [k, c] : terms_) {
        Exponents e = unpack(k);
        for (int i = 0; i < kVarCount; ++i) {
            if (e[i] < m[i]) throw std::domain_error("term " + format_exponents(e) + " is not divisible by " + format_exponents(m));
            e[i] -= m[i];
        }
        r.add_term(e, c);
    }
    return r;
}

TruncatedSeries TruncatedSeries::truncate(const Orders& o) const {
    TruncatedSeries r(meet(orders_, o));
    for (const auto& [k, c] : terms_)
        if (r.orders_.admits(unpack(k))) r.terms_.emplace(k, c);
    return r;
}

TruncatedSeries TruncatedSeries::coefficient_of(Var v, int k) const {
    int i = int(v);
    if (k > orders_.max[i]) throw std::out_of_range(std::string("power of ") + var_name(v) + " beyond the truncation");
    Orders o = orders_;
    o.max[i] = kUnbounded;
    TruncatedSeries r(o);
    for (const auto& [key, c] : terms_) {
        Exponents e = unpack(key);
        if (e[i] != k) continue;
        e[i] = 0;
        r.add_term(e, c);
    }
    return r;
}

TruncatedSeries TruncatedSeries::rename(std::initializer_list<std::pair<Var, Var>> perm) const {
    std::array<int, kVarCount> to;
    for (int i = 0; i < kVarCount; ++i) to[i] = i;
    for (auto [a, b] : perm) to[int(a)] = int(b);
    std::array<bool, kVarCount> hit{};
    for (int i = 0; i < kVarCount; ++i) {
        if (hit[to[i]]) throw std::invalid_argument("rename needs a permutation");
        hit[to[i]] = true;
    }
    Orders o;
    for (int i = 0; i < kVarCount; ++i) o.max[to[i]] = orders_.max[i];
    TruncatedSeries r(o);
    for (const auto& [k, c] : terms_) {
        Exponents e = unpack(k), f{};
        for (int i = 0; i < kVarCount; ++i) f[to[i]] = e[i];
        r.add_term(f, c);
    }
    return r;
}

TruncatedSeries TruncatedSeries::substitute(const std::map<Var, TruncatedSeries>& subs, const Orders& target) const {
    Orders R = target;
    std::array<bool, kVarCount> replaced{};
    for (const auto& [v, g] : subs) {
        if (sgn(g.constant_term()) != 0)
            throw std::domain_error(std::string("substitution for ") + var_name(v) + " has a nonzero constant term");
        replaced[int(v)] = true;
        R = meet(R, g.orders_);
    }
    for (int i = 0; i < kVarCount; ++i)
        if (!replaced[i]) R.max[i] = std::min(R.max[i], orders_.max[i]);

    std::map<Var, TruncatedSeries> inner;
    for (const auto& [v, g] : subs) {
        TruncatedSeries gt = g.truncate(R);
        int p = orders_[v];
        if (p != kUnbounded && !gt.pow(p + 1).is_zero())
            throw std::domain_error(std::string("substituting for ") + var_name(v) + " needs terms beyond order " +
                                    std::to_string(p));
        inner.emplace(v, std::move(gt));
    }

    // Group the terms by their exponents in the replaced variables.
    std::map<std::vector<int>, TruncatedSeries> groups;
    Orders rest_orders = orders_;
    for (int i = 0; i < kVarCount; ++i)
        if (replaced[i]) rest_orders.max[i] = kUnbounded;
    for (const auto& [k, c] : terms_) {
        Exponents e = unpack(k);
        std::vector<int> key;
        for (const auto& [v, g] : inner) {
            key.push_back(e[int(v)]);
            e[int(v)] = 0;
        }
        groups.try_emplace(key, TruncatedSeries(rest_orders)).first->second.add_term(e, c);
    }

    std::vector<std::vector<TruncatedSeries>> powers(inner.size());
    auto power = [&](std::size_t slot, const TruncatedSeries& g, int k) -> const TruncatedSeries& {
        auto& cache = powers[slot];
        if (cache.empty()) cache.push_back(constant(1, R));
        while (int(cache.size()) <= k) cache.push_back(cache.back() * g);
        return cache[std::size_t(k)];
    };

    TruncatedSeries result(R);
    for (const auto& [key, rest] : groups) {
        TruncatedSeries term = rest.truncate(R);
        std::size_t slot = 0;
        for (const auto& [v, g] : inner) {
            if (key[slot]) term = term * power(slot, g, key[slot]);
            ++slot;
        }
        result += term;
    }
    return result;
}

bool TruncatedSeries::is_integral() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.second.get_den() == 1; });
}

void TruncatedSeries::assert_nonnegative_integral(const std::string& what) const {
    for (const auto& [k, c] : terms_)
        if (c.get_den() != 1 || sgn(c) < 0)
            throw std::domain_error(what + ": coefficient of " + format_exponents(unpack(k)) + " is " + c.get_str());
}

bool agree(const TruncatedSeries& a, const TruncatedSeries& b) { return first_difference(a, b).empty(); }

std::string format_exponents(const Exponents& e) {
    std::string s;
    for (int i = 0; i < kVarCount; ++i) {
        if (!e[i]) continue;
        if (!s.empty()) s += '*';
        s += kNames[i];
        if (e[i] > 1) s += '^' + std::to_string(e[i]);
    }
    return s.empty() ? "1" : s;
}

std::string first_difference(const TruncatedSeries& a, const TruncatedSeries& b) {
    Orders o = meet(a.orders(), b.orders());
    TruncatedSeries d = a.truncate(o) - b.truncate(o);
    if (d.is_zero()) return "";
    Exponents e = d.terms().front().first;
    return format_exponents(e) + ": " + a.coeff(e).get_str() + " vs " + b.coeff(e).get_str();
}

std::string TruncatedSeries::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        Exponents e = unpack(k);
        mpq_class a = abs(c);
        if (first)
            os << (sgn(c) < 0 ? "-" : "");
        else
            os << (sgn(c) < 0 ? " - " : " + ");
        first = false;
        bool unit = e == Exponents{};
        if (unit)
            os << a.get_str();
        else {
            if (a != 1) os << a.get_str() << '*';
            os << format_exponents(e);
        }
    }
    return os.str();
}

TruncatedSeries exp_series(const TruncatedSeries& g) {
    if (sgn(g.constant_term()) != 0) throw std::domain_error("exp needs a zero constant term");
    if (!nilpotent_part(g)) throw std::domain_error("exp needs finite orders in every variable that occurs");
    TruncatedSeries result = TruncatedSeries::constant(1, g.orders());
    TruncatedSeries term = result;
    for (int m = 1;; ++m) {
        term = term * g * mpq_class(1, m);
        if (term.is_zero()) return result;
        result += term;
    }
}

mpz_class binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

mpz_class factorial(long n) {
    if (n < 0) throw std::invalid_argument("factorial of a negative number");
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

mpz_class catalan_number(long n) { return binomial(2 * n, n) / (n + 1); }

TruncatedSeries catalan_series(int order) {
    if (order < 0) throw std::invalid_argument("order must be nonnegative");
    Orders o{{Var::u, order}};
    TruncatedSeries u = TruncatedSeries::variable(Var::u, o);
    TruncatedSeries c = TruncatedSeries::constant(1, o);
    for (;;) {
        TruncatedSeries next = 1 + u * c * c;
        if (next == c) return c;
        c = std::move(next);
    }
}

TruncatedSeries catalan_composite(const Orders& o) {
    int n = std::min(o[Var::y], o[Var::z]);
    if (n == kUnbounded) throw std::invalid_argument("C(yz(z+1)) needs a finite order in y or z");
    Orders box{{Var::y, o[Var::y]}, {Var::z, o[Var::z]}};
    TruncatedSeries y = var(Var::y), z = var(Var::z);
    return catalan_series(n).substitute({{Var::u, y * z * (1 + z)}}, box);
}

mpz_class DelannoyPoly::value_at_one() const {
    mpz_class s = 0;
    for (const auto& c : coeffs) s += c;
    return s;
}

int DelannoyPoly::degree() const {
    for (int j = int(coeffs.size()) - 1; j >= 0; --j)
        if (coeffs[std::size_t(j)] != 0) return j;
    return -1;
}

int DelannoyPoly::lowest_degree() const {
    for (int j = 0; j < int(coeffs.size()); ++j)
        if (coeffs[std::size_t(j)] != 0) return j;
    return -1;
}

TruncatedSeries DelannoyPoly::as_series(Var v, Orders o) const {
    TruncatedSeries s(o);
    for (int j = 0; j < int(coeffs.size()); ++j) s.add_term(exps({{v, j}}), coeffs[std::size_t(j)]);
    return s;
}

namespace {

void trim(DelannoyPoly& p) {
    p.coeffs.resize(std::size_t(p.a + p.b + 1), 0);
}

void walk(int a, int b, int steps, std::vector<mpz_class>& out) {
    if (a == 0 && b == 0) {
        out[std::size_t(steps)] += 1;
        return;
    }
    if (a > 0) walk(a - 1, b, steps + 1, out);
    if (b > 0) walk(a, b - 1, steps + 1, out);
    if (a > 0 && b > 0) walk(a - 1, b - 1, steps + 1, out);
}

}  // namespace

DelannoyPoly delannoy_poly(int a, int b, DelannoyMethod method) {
    if (a < 0 || b < 0) throw std::invalid_argument("Delannoy indices must be nonnegative");
    DelannoyPoly p{a, b, {}};
    trim(p);
    switch (method) {
        case DelannoyMethod::Paths:
            walk(a, b, 0, p.coeffs);
            break;
        case DelannoyMethod::Binomial:
            // (x^2 + x)^k x^(a+b-2k) = sum_m binom(k,m) x^(a+b-k+m)
            for (int k = 0; k <= std::min(a, b); ++k)
                for (int m = 0; m <= k; ++m)
                    p.coeffs[std::size_t(a + b - k + m)] += binomial(a, k) * binomial(b, k) * binomial(k, m);
            break;
        case DelannoyMethod::GeneratingFunction: {
            auto g = delannoy_genfunc(Orders{{Var::u, a}, {Var::v, b}, {Var::x, a + b}});
            for (int j = 0; j <= a + b; ++j) {
                mpq_class c = g.coeff({{Var::u, a}, {Var::v, b}, {Var::x, j}});
                if (c.get_den() != 1) throw std::logic_error("non-integral Delannoy coefficient");
                p.coeffs[std::size_t(j)] = c.get_num();
            }
            break;
        }
    }
    return p;
}

DelannoyPoly delannoy_poly(int a, int b) {
    DelannoyPoly p = delannoy_poly(a, b, DelannoyMethod::Binomial);
    if (!(p == delannoy_poly(a, b, DelannoyMethod::GeneratingFunction)) ||
        !(p == delannoy_poly(a, b, DelannoyMethod::Paths)))
        throw std::logic_error("Delannoy polynomial methods disagree at " + std::to_string(a) + "," + std::to_string(b));
    return p;
}

TruncatedSeries delannoy_genfunc(const Orders& o) {
    Orders box{{Var::u, finite_order(o, Var::u, "delannoy_genfunc")},
               {Var::v, finite_order(o, Var::v, "delannoy_genfunc")},
               {Var::x, o[Var::x]}};
    TruncatedSeries x = TruncatedSeries::variable(Var::x, box), u = var(Var::u), v = var(Var::v);
    return (1 - x * (u + v + u * v)).inverse();
}

TruncatedSeries transfer(const TruncatedSeries& s, TransferDirection dir, bool has_empty) {
    Var from = dir == TransferDirection::FullToAll ? Var::z : Var::t;
    Var to = dir == TransferDirection::FullToAll ? Var::t : Var::z;
    for (Var v : s.variables())
        if (v == to) throw std::invalid_argument(std::string("transfer input already involves ") + var_name(to));
    int n = finite_order(s.orders(), from, "transfer");
    Orders box = s.orders();
    box.set(from, kUnbounded).set(to, n);
    TruncatedSeries q = TruncatedSeries::variable(to, box);
    if (dir == TransferDirection::FullToAll) {
        // F(t) = -t/(1-t)^2 [empty] + F^(t/(1-t)) / (1-t)^2
        TruncatedSeries inv = (1 - q).inverse();
        TruncatedSeries r = s.substitute({{from, q * inv}}, box) * inv * inv;
        if (has_empty) r -= q * inv * inv;
        return r;
    }
    // F^(z) = z/(1+z) [empty] + F(z/(1+z)) / (1+z)^2
    TruncatedSeries inv = (1 + q).inverse();
    TruncatedSeries r = s.substitute({{from, q * inv}}, box) * inv * inv;
    if (has_empty) r += q * inv;
    return r;
}

TruncatedSeries backward_only_series(int order) {
    Orders o{{Var::y, order}, {Var::t, order}};
    TruncatedSeries y = TruncatedSeries::variable(Var::y, o), t = TruncatedSeries::variable(Var::t, o);
    TruncatedSeries f = TruncatedSeries::constant(1, o);
    for (;;) {
        TruncatedSeries next = 1 + t * f + y * t * f * f;
        if (next == f) return f;
        f = std::move(next);
    }
}

TruncatedSeries backward_only_saturated(int order) {
    Orders o{{Var::y, order}, {Var::z, order}};
    TruncatedSeries z = TruncatedSeries::variable(Var::z, o);
    return (catalan_composite(o) + z) * (1 + z).inverse();
}

mpz_class backward_only_count(int n, int j) { return binomial(n + j, j) * binomial(n, j) / (j + 1); }

TruncatedSeries refined_backward_series(int i, int order) {
    if (i < 0) throw std::invalid_argument("i must be nonnegative");
    TruncatedSeries f = backward_only_series(order);
    Orders o = f.orders();
    TruncatedSeries y = TruncatedSeries::variable(Var::y, o), t = TruncatedSeries::variable(Var::t, o);
    return (y * t * f).pow(i) * (1 - t).inverse().pow(i + 1);
}

TruncatedSeries refined_backward_saturated(int i, int order) {
    if (i < 0) throw std::invalid_argument("i must be nonnegative");
    Orders o{{Var::y, order}, {Var::z, order}};
    TruncatedSeries y = TruncatedSeries::variable(Var::y, o), z = TruncatedSeries::variable(Var::z, o);
    TruncatedSeries inv = (1 + z).inverse();
    TruncatedSeries r = (y * z * (1 + z) * catalan_composite(o)).pow(i) * inv;
    if (i == 0) r += z * inv;
    return r;
}

TruncatedSeries g_k(int k) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    TruncatedSeries z = var(Var::z);
    return catalan_number(k) * z.pow(k + 1) * (1 + z).pow(k - 1);
}

std::string_view name(SimionOrientation o) {
    return o == SimionOrientation::ThthNestHthtNonest ? "THTH_NEST_HTHT_NONEST" : "THTH_NONEST_HTHT_NEST";
}

SimionOrientation orientation_of(bool thth_nests) {
    return thth_nests ? SimionOrientation::ThthNestHthtNonest : SimionOrientation::ThthNonestHthtNest;
}

namespace {

struct SimionParts {
    Orders o;
    TruncatedSeries x, y, z, C, base;
};

SimionParts simion_parts(const Orders& orders) {
    Orders o{{Var::x, orders[Var::x]}, {Var::y, orders[Var::y]}, {Var::z, finite_order(orders, Var::z, "simion")}};
    SimionParts p{o,
                  TruncatedSeries::variable(Var::x, o),
                  TruncatedSeries::variable(Var::y, o),
                  TruncatedSeries::variable(Var::z, o),
                  catalan_composite(o),
                  {}};
    p.base = (p.C + p.z) * (1 + p.z).inverse();
    return p;
}

// D(g1, g2, x) for g1, g2 of positive z-degree.
TruncatedSeries delannoy_at(const TruncatedSeries& g1, const TruncatedSeries& g2, const Orders& o) {
    int n = o[Var::z];
    auto d = delannoy_genfunc(Orders{{Var::u, n}, {Var::v, n}, {Var::x, o[Var::x]}});
    return d.substitute({{Var::u, g1}, {Var::v, g2}}, o);
}

// THTH nests: the forward arrows carry the Delannoy part.
TruncatedSeries simion_nest(const Orders& orders) {
    auto [o, x, y, z, C, base] = simion_parts(orders);
    TruncatedSeries num = x * z * (1 + z * C) * C * C;
    TruncatedSeries den = (1 + z) * (1 - 2 * C * x * z - C * C * x * z * z);
    return base + num * den.inverse();
}

}  // namespace

TruncatedSeries simion_saturated_series(SimionOrientation orient, const Orders& orders) {
    TruncatedSeries s;
    if (orient == SimionOrientation::ThthNestHthtNonest) {
        s = simion_nest(orders);
    } else {
        Orders swapped = orders;
        swapped.set(Var::x, orders[Var::y]).set(Var::y, orders[Var::x]);
        s = simion_nest(swapped).rename({{Var::x, Var::y}, {Var::y, Var::x}});
    }
    s.assert_nonnegative_integral("simion series");
    return s;
}

TruncatedSeries simion_subclass_series(ClassLabel subclass, const Orders& orders) {
    auto [o, x, y, z, C, base] = simion_parts(orders);
    TruncatedSeries uC = y * z * (z + 1) * C;
    TruncatedSeries Q = (1 - uC).inverse();  // equals C by the quadratic relation
    TruncatedSeries s;
    switch (subclass) {
        case ClassLabel::SimionA:
            s = base + x * z * (1 + z * C) * C * C * (1 + z).inverse() * delannoy_at(z * C, z * C, o);
            break;
        case ClassLabel::SimionB:
            s = base + delannoy_at(C * z, z * Q, o) * x * z * C * (1 - y * z * C) * Q * Q;
            break;
        case ClassLabel::SimionC: {
            TruncatedSeries w = z + 1 - y * z * (z + 1) * C;
            s = base + delannoy_at(z * Q, z * Q, o) * x * z * w * w * ((1 + z) * (1 + z * C)).inverse() * Q.pow(4);
            break;
        }
        default:
            throw std::invalid_argument("not a Simion subclass");
    }
    s.assert_nonnegative_integral("simion subclass series");
    return s;
}

mpz_class simion_facet_count(int n, int i) {
    if (n < 0 || i < 0 || i > n) throw std::invalid_argument("need 0 <= i <= n");
    if (i == 0) return catalan_number(n);
    mpz_class num = (mpz_class(1) << (i - 1)) * (i + 1) * factorial(2 * n - i);
    mpz_class den = factorial(n - i) * factorial(n + 1);
    if (num % den != 0) throw std::logic_error("non-integral Simion facet count");
    return num / den;
}

TruncatedSeries revlex_saturated_series(const Orders& orders) {
    int n = finite_order(orders, Var::z, "revlex series");
    Orders o{{Var::x, orders[Var::x]}, {Var::y, orders[Var::y]}, {Var::z, n}};
    std::map<std::pair<int, int>, DelannoyPoly> polys;
    auto D = [&](int a, int b) -> const DelannoyPoly& {
        auto it = polys.find({a, b});
        if (it == polys.end()) it = polys.emplace(std::pair{a, b}, delannoy_poly(a, b, DelannoyMethod::Binomial)).first;
        return it->second;
    };
    TruncatedSeries s = TruncatedSeries::constant(1, o);
    for (int a = 0; a + 1 <= n; ++a)
        for (int b = 0; a + b + 1 <= n; ++b) {
            const auto& p = D(a, b);
            for (int j = 0; j <= a + b; ++j) {
                s.add_term(exps({{Var::x, j + 1}, {Var::z, a + b + 1}}), p.at(j));
                s.add_term(exps({{Var::y, j + 1}, {Var::z, a + b + 1}}), p.at(j));
            }
        }
    // a1 = a', b1 = b', a2 = a'', b2 = b''
    for (int a1 = 0; a1 + 2 <= n; ++a1)
        for (int b1 = 0; a1 + b1 + 2 <= n; ++b1)
            for (int a2 = 0; a1 + b1 + a2 + 2 <= n; ++a2)
                for (int b2 = 0; a1 + b1 + a2 + b2 + 2 <= n; ++b2) {
                    int e = a1 + b1 + a2 + b2 + 2;
                    mpz_class lin = binomial(a1 + b2 + 2, a1 + 1) * binomial(a2 + b1 + 2, b1 + 1);
                    mpz_class cst = binomial(a1 + b2 + 1, b2) * binomial(a2 + b1 + 1, b1) +
                                    binomial(a1 + b2 + 1, a1) * binomial(a2 + b1 + 1, a2);
                    const auto& px = D(a1, b1);
                    const auto& py = D(a2, b2);
                    for (int p = 0; p <= a1 + b1; ++p)
                        for (int q = 0; q <= a2 + b2; ++q) {
                            mpz_class w = px.at(p) * py.at(q);
                            if (w == 0) continue;
                            s.add_term(exps({{Var::x, p + 1}, {Var::y, q + 1}, {Var::z, e}}), w * cst);
                            s.add_term(exps({{Var::x, p + 1}, {Var::y, q + 1}, {Var::z, e + 1}}), w * lin);
                        }
                }
    s.assert_nonnegative_integral("revlex series");
    return s;
}

mpz_class revlex_facet_count(int n, int k) {
    if (n < 0 || k < 0 || k > n) throw std::invalid_argument("need 0 <= k <= n");
    if (n == 0) return 1;
    if (k == 0 || k == n) return mpz_class(1) << (n - 1);
    mpz_class s = 0;
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= n - k; ++j)
            s += binomial(k - 1, i - 1) * binomial(n - k - 1, j - 1) *
                 (binomial(n - k + i - j, i) * binomial(k - i + j, j) +
                  binomial(n - k + i - j, i - 1) * binomial(k - i + j, j - 1));
    return s;
}

TruncatedSeries delannoy_egf(const Orders& orders) {
    int nu = finite_order(orders, Var::u, "delannoy_egf"), nv = finite_order(orders, Var::v, "delannoy_egf");
    TruncatedSeries s(Orders{{Var::u, nu}, {Var::v, nv}, {Var::x, orders[Var::x]}});
    for (int a = 0; a + 1 <= nu; ++a)
        for (int b = 0; b + 1 <= nv; ++b) {
            auto p = delannoy_poly(a, b, DelannoyMethod::Binomial);
            mpz_class den = factorial(a + 1) * factorial(b + 1);
            for (int j = 0; j <= a + b; ++j) {
                mpq_class c(p.at(j), den);
                c.canonicalize();
                s.add_term(exps({{Var::u, a + 1}, {Var::v, b + 1}, {Var::x, j}}), c);
            }
        }
    return s;
}

TruncatedSeries psi_series(int k, int order) {
    if (k < 1 || order < 0) throw std::invalid_argument("psi_k needs k >= 1 and order >= 0");
    TruncatedSeries s(Orders{{Var::z, order}});
    for (int n = 0; n <= order; ++n) s.add_term(exps({{Var::z, n}}), mpq_class(1, (n + k)) / factorial(n));
    return s;
}

TruncatedSeries psi_closed(int k, int order) {
    if (k < 1 || order < 0) throw std::invalid_argument("psi_k needs k >= 1 and order >= 0");
    Orders o{{Var::z, order + k}};
    TruncatedSeries z = TruncatedSeries::variable(Var::z, o);
    TruncatedSeries poly(o);
    for (int i = 0; i <= k - 1; ++i) {
        mpz_class c = factorial(k - 1) / factorial(k - 1 - i);
        poly.add_term(exps({{Var::z, k - 1 - i}}), i % 2 ? mpq_class(-c) : mpq_class(c));
    }
    mpz_class tail = factorial(k - 1);
    TruncatedSeries num = poly * exp_series(z) + mpq_class(k % 2 ? -tail : tail);
    return num.divide_by_monomial(exps({{Var::z, k}}));
}

TruncatedSeries delannoy_egf_psi(const Orders& orders) {
    int nu = finite_order(orders, Var::u, "delannoy_egf_psi"), nv = finite_order(orders, Var::v, "delannoy_egf_psi");
    Orders o{{Var::u, nu}, {Var::v, nv}, {Var::x, orders[Var::x]}};
    TruncatedSeries u = var(Var::u), v = var(Var::v), x = var(Var::x);
    TruncatedSeries uv = u * v, w = uv * (x * x + x);
    TruncatedSeries s(o);
    for (int k = 0; k < std::min(nu, nv); ++k) {
        TruncatedSeries pu = psi_series(k + 1, nu).substitute({{Var::z, u * x}}, o);
        TruncatedSeries pv = psi_series(k + 1, nv).substitute({{Var::z, v * x}}, o);
        mpz_class f = factorial(k);
        s += w.pow(k).truncate(o) * mpq_class(1, f * f) * pu * pv;
    }
    return (uv * s).truncate(o);
}

TruncatedSeries bessel_side(const Orders& orders) {
    Orders o{{Var::u, finite_order(orders, Var::u, "bessel_side")},
             {Var::v, finite_order(orders, Var::v, "bessel_side")},
             {Var::x, orders[Var::x]}};
    TruncatedSeries u = TruncatedSeries::variable(Var::u, o), v = TruncatedSeries::variable(Var::v, o);
    TruncatedSeries x = var(Var::x);
    TruncatedSeries w = (x * x + x) * u * v;
    TruncatedSeries sum(o);
    for (int k = 0; k <= std::min(o[Var::u], o[Var::v]); ++k) {
        mpz_class f = factorial(k);
        sum += w.pow(k) * mpq_class(1, f * f);
    }
    return exp_series(x * (u + v)) * sum;
}

TruncatedSeries node_enriched_egf(const Orders& orders) {
    int nu = finite_order(orders, Var::u, "node_enriched_egf"), nv = finite_order(orders, Var::v, "node_enriched_egf");
    int m = std::max(nu, nv) + 1;  // one spare degree for the derivatives
    Orders inner{{Var::u, m}, {Var::v, m}};
    TruncatedSeries d = delannoy_egf(inner);
    TruncatedSeries u = var(Var::u), v = var(Var::v), z = var(Var::z), y = var(Var::y);
    // each arrow class carries its own marker: x D(uz, vz, x) and y D(vz, uz, y)
    TruncatedSeries x = var(Var::x);
    TruncatedSeries dx = x * d.substitute({{Var::u, u * z}, {Var::v, v * z}}, inner);
    TruncatedSeries dy = y * d.substitute({{Var::u, v * z}, {Var::v, u * z}, {Var::x, y}}, inner);
    Exponents z1 = exps({{Var::z, 1}}), z2 = exps({{Var::z, 2}});
    TruncatedSeries s = 1 + dx.divide_by_monomial(z1) + dy.divide_by_monomial(z1) + (dx * dy).divide_by_monomial(z1) +
                        (dx.derivative(Var::u) * dy.derivative(Var::v)).divide_by_monomial(z2) +
                        (dx.derivative(Var::v) * dy.derivative(Var::u)).divide_by_monomial(z2);
    Orders out{{Var::u, nu}, {Var::v, nv}, {Var::x, orders[Var::x]}, {Var::y, orders[Var::y]}, {Var::z, orders[Var::z]}};
    return s.truncate(out);
}

mpq_class lex_refined_count(int n, int k) {
    if (n < 0 || k < 0 || k > n + 1) throw std::invalid_argument("need 0 <= k <= n + 1");
    mpq_class c(binomial(n + k, k) * binomial(n, k), k + 1);
    c.canonicalize();
    if (c.get_den() != 1) throw std::logic_error("non-integral lex refined count");
    return c;
}

namespace {

// Lengths of the runs of S and of its complement inside [k].
std::vector<int> runs(std::uint32_t S, int k) {
    std::vector<int> out;
    int len = 0;
    for (int p = 0; p < k; ++p) {
        ++len;
        bool last = p == k - 1 || ((S >> p) & 1) != ((S >> (p + 1)) & 1);
        if (last) {
            out.push_back(len);
            len = 0;
        }
    }
    return out;
}

template <class F>
void for_each_subset(int k, int i, F&& f) {
    for (std::uint32_t S = 0; S < (std::uint32_t(1) << k); ++S)
        if (std::popcount(S) == i) f(S);
}

}  // namespace

mpz_class catalan_run_identity(int k, int i) {
    if (k < 0 || k > 24 || i < 0 || i > k) throw std::invalid_argument("need 0 <= i <= k <= 24");
    mpz_class sum = 0;
    for_each_subset(k, i, [&](std::uint32_t S) {
        mpz_class prod = 1;
        for (int r : runs(S, k)) prod *= catalan_number(r);
        sum += prod;
    });
    return sum;
}

TruncatedSeries lex_mixed_forest_poly(int k, int i) {
    if (k < 1 || k > 24 || i < 0 || i > k) throw std::invalid_argument("need 0 <= i <= k, 1 <= k <= 24");
    // Sum over the choice S of forward arrows: adjacent runs are disjoint or
    // share one node, giving (1 + 1/z)^(r-1) times the product of G_|R|.
    TruncatedSeries z = var(Var::z);
    TruncatedSeries sum;
    for_each_subset(k, i, [&](std::uint32_t S) {
        auto rs = runs(S, k);
        int r = int(rs.size());
        TruncatedSeries prod = (1 + z).pow(r - 1);
        for (int len : rs) prod = prod * g_k(len);
        sum += prod.divide_by_monomial(exps({{Var::z, r - 1}}));
    });
    TruncatedSeries closed = g_k(k);
    if (!agree(sum, closed)) throw std::logic_error("mixed forest run sum differs from the closed form");
    return sum;
}

}  // namespace rootflag
