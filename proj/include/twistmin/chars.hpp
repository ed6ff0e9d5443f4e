#pragma once

// Exact Dirichlet character arithmetic. A character mod N is stored as a
// product of local characters at the primes dividing N; each local character
// keeps integer exponents on canonical unit-group generators, so all values
// are exact roots of unity e(num/den). Complex evaluation happens only at
// formula-assembly time.
//
// Canonical generators: for odd p the least primitive root mod p^e (adjusted
// to generate mod p^2); for p = 2 the pair (-1, 5). Equality of characters is
// value-table equality, which with canonical generators is exponent equality.

#include <algorithm>
#include <array>
#include <complex>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "twistmin/arith.hpp"

namespace twistmin {

namespace detail {

// Unit-group structure of (Z/p^e)^x with a discrete-log table.
struct UnitGroup {
    i64 p = 0;
    int e = 0;
    i64 pe = 1;
    std::vector<i64> gens;    // generator residues mod p^e
    std::vector<i64> orders;  // their orders (product = phi(p^e))
    std::vector<std::array<i64, 2>> dlog;  // residue -> exponents; [-1,-1] if non-unit
};

inline const UnitGroup& unit_group(i64 p, int e) {
    static std::map<std::pair<i64, int>, UnitGroup> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, e);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    UnitGroup ug;
    ug.p = p;
    ug.e = e;
    ug.pe = ipow(p, e);
    if (p == 2) {
        if (e >= 2) { ug.gens.push_back(ug.pe - 1); ug.orders.push_back(2); }
        if (e >= 3) { ug.gens.push_back(5); ug.orders.push_back(ipow(2, e - 2)); }
    } else if (e >= 1) {
        ug.gens.push_back(primitive_root(p, e) % ug.pe);
        ug.orders.push_back(euler_phi(ug.pe));
    }
    ug.dlog.assign(static_cast<size_t>(ug.pe), {-1, -1});
    // Enumerate the group by generator exponents.
    i64 o0 = ug.gens.empty() ? 1 : ug.orders[0];
    i64 o1 = ug.gens.size() > 1 ? ug.orders[1] : 1;
    i64 u0 = 1 % ug.pe;
    for (i64 a = 0; a < o0; ++a) {
        i64 u = u0;
        for (i64 b = 0; b < o1; ++b) {
            ug.dlog[static_cast<size_t>(u)] = {a, b};
            if (ug.gens.size() > 1) u = mulmod(u, ug.gens[1], ug.pe);
        }
        if (!ug.gens.empty()) u0 = mulmod(u0, ug.gens[0], ug.pe);
    }
    return cache.emplace(key, std::move(ug)).first->second;
}

}  // namespace detail

// Exponent of a root of unity: value = e(num/den), kept reduced with den > 0.
struct RootExp {
    i64 num = 0;
    i64 den = 1;
    void reduce() {
        num = mod_floor(num, den);
        i64 g = std::gcd(num, den);
        if (g > 1) { num /= g; den /= g; }
    }
    std::complex<double> value() const {
        double t = 2.0 * M_PI * static_cast<double>(num) / static_cast<double>(den);
        // Exact values at the 4th roots avoid spurious 1e-17 imaginary parts.
        if (4 * num % den == 0) {
            switch (4 * num / den) {
                case 0: return {1.0, 0.0};
                case 1: return {0.0, 1.0};
                case 2: return {-1.0, 0.0};
                case 3: return {0.0, -1.0};
            }
        }
        return {std::cos(t), std::sin(t)};
    }
    friend bool operator==(const RootExp& a, const RootExp& b) {
        return a.num == b.num && a.den == b.den;
    }
};

inline RootExp root_exp(i64 num, i64 den) {
    RootExp r{num, den};
    r.reduce();
    return r;
}

// Local character mod p^e given by exponents on the canonical generators:
// chi(gen_i) = e(k_i / order_i).
struct PrimeLocalChar {
    i64 p = 0;
    int e = 0;
    std::vector<i64> k;  // same length as unit_group(p,e).gens

    i64 modulus() const { return ipow(p, e); }

    const detail::UnitGroup& group() const { return detail::unit_group(p, e); }

    static PrimeLocalChar trivial(i64 p, int e) {
        PrimeLocalChar c;
        c.p = p;
        c.e = e;
        c.k.assign(detail::unit_group(p, e).gens.size(), 0);
        return c;
    }

    bool is_unit(i64 n) const {
        return group().dlog[static_cast<size_t>(mod_floor(n, modulus()))][0] >= 0;
    }

    // Exponent of chi(n) as a root of unity; n must be a unit mod p^e.
    RootExp exponent(i64 n) const {
        const auto& g = group();
        auto dl = g.dlog[static_cast<size_t>(mod_floor(n, g.pe))];
        i64 num = 0, den = 1;
        for (size_t i = 0; i < k.size(); ++i) {
            // add k_i * dl_i / order_i
            i64 o = g.orders[i];
            num = num * o + k[i] * dl[i] % o * den;
            den *= o;
        }
        return root_exp(num, den);
    }

    std::complex<double> eval(i64 n) const {
        if (!is_unit(n)) return {0.0, 0.0};
        return exponent(n).value();
    }

    // chi(-1) as +-1.
    int parity() const {
        if (modulus() <= 2) return 1;
        auto r = exponent(-1);
        return r.num == 0 ? 1 : -1;
    }

    i64 order() const {
        const auto& g = group();
        i64 o = 1;
        for (size_t i = 0; i < k.size(); ++i)
            o = std::lcm(o, g.orders[i] / std::gcd(g.orders[i], k[i]));
        return o;
    }

    // Conductor exponent: least s with chi trivial on units = 1 mod p^s.
    int conductor_exponent() const {
        if (p != 2) {
            if (k.empty() || k[0] == 0) return 0;
            i64 o = order();
            int a = valuation(o, p);
            return a + 1;
        }
        i64 km = k.empty() ? 0 : k[0];
        i64 k5 = k.size() > 1 ? k[1] : 0;
        if (k5 == 0) return km ? 2 : 0;
        return e - valuation(k5, 2);
    }

    bool is_trivial() const {
        return std::all_of(k.begin(), k.end(), [](i64 x) { return x == 0; });
    }

    PrimeLocalChar conj() const {
        PrimeLocalChar c = *this;
        const auto& g = group();
        for (size_t i = 0; i < k.size(); ++i) c.k[i] = mod_floor(-k[i], g.orders[i]);
        return c;
    }

    // Pointwise product; both factors must have the same (p, e).
    friend PrimeLocalChar operator*(const PrimeLocalChar& a, const PrimeLocalChar& b) {
        PrimeLocalChar c = a;
        const auto& g = a.group();
        for (size_t i = 0; i < c.k.size(); ++i) c.k[i] = mod_floor(a.k[i] + b.k[i], g.orders[i]);
        return c;
    }

    friend bool operator==(const PrimeLocalChar& a, const PrimeLocalChar& b) {
        return a.p == b.p && a.e == b.e && a.k == b.k;
    }

    // The same character viewed mod p^E (requires conductor_exponent() <= E).
    PrimeLocalChar induce(int E) const {
        PrimeLocalChar c;
        c.p = p;
        c.e = E;
        const auto& gt = detail::unit_group(p, E);
        c.k.resize(gt.gens.size());
        for (size_t i = 0; i < gt.gens.size(); ++i) {
            // chi(target generator): its residue is a unit mod p^e as well.
            RootExp r = exponent(gt.gens[i]);
            // value e(r) must be an order_i-th root of unity
            i64 o = gt.orders[i];
            if (o % r.den != 0) throw std::domain_error("induce: conductor does not divide target");
            c.k[i] = mod_floor(r.num * (o / r.den), o);
        }
        if (c.conductor_exponent() != conductor_exponent())
            throw std::domain_error("induce: conductor does not divide target");
        return c;
    }

    // The primitive character of conductor p^s inducing this one.
    PrimeLocalChar primitive() const { return induce(conductor_exponent()); }

    // chi evaluated through its primitive lift (nonzero on units mod p^s).
    std::complex<double> eval_primitive(i64 n) const { return primitive().eval(n); }
};

// A Dirichlet character mod N as the product of its local components.
struct DirichletChar {
    i64 N = 1;
    std::vector<PrimeLocalChar> locals;  // ascending primes, one per p | N

    static DirichletChar trivial(i64 N) {
        DirichletChar c;
        c.N = N;
        for (auto [p, e] : factorize(N)) c.locals.push_back(PrimeLocalChar::trivial(p, e));
        return c;
    }

    const PrimeLocalChar* local(i64 p) const {
        for (const auto& lc : locals)
            if (lc.p == p) return &lc;
        return nullptr;
    }

    std::complex<double> eval(i64 n) const {
        if (N > 1 && std::gcd(mod_floor(n, N), N) != 1) return {0.0, 0.0};
        std::complex<double> v{1.0, 0.0};
        for (const auto& lc : locals) v *= lc.eval(n);
        return v;
    }

    // Exact exponent of chi(n); n must be coprime to N.
    RootExp exponent(i64 n) const {
        i64 num = 0, den = 1;
        for (const auto& lc : locals) {
            RootExp r = lc.exponent(n);
            num = num * r.den + r.num * den;
            den *= r.den;
        }
        return root_exp(num, den);
    }

    i64 conductor() const {
        i64 q = 1;
        for (const auto& lc : locals) q *= ipow(lc.p, lc.conductor_exponent());
        return q;
    }

    i64 order() const {
        i64 o = 1;
        for (const auto& lc : locals) o = std::lcm(o, lc.order());
        return o;
    }

    bool is_trivial() const { return conductor() == 1; }

    int parity() const {
        int s = 1;
        for (const auto& lc : locals) s *= lc.parity();
        return s;
    }
    bool is_even() const { return parity() == 1; }

    DirichletChar conj() const {
        DirichletChar c = *this;
        for (auto& lc : c.locals) lc = lc.conj();
        return c;
    }

    friend bool operator==(const DirichletChar& a, const DirichletChar& b) {
        return a.N == b.N && a.locals == b.locals;
    }
};

// chi viewed mod M; requires cond(chi) | M.
inline DirichletChar induce(const DirichletChar& chi, i64 M) {
    if (M % chi.conductor() != 0)
        throw std::domain_error("induce: cond(chi) does not divide M");
    DirichletChar c;
    c.N = M;
    for (auto [p, e] : factorize(M)) {
        const PrimeLocalChar* lc = chi.local(p);
        if (lc == nullptr)
            c.locals.push_back(PrimeLocalChar::trivial(p, e));
        else
            c.locals.push_back(lc->primitive().induce(e));
    }
    return c;
}

// Product of two characters, taken mod lcm of the moduli.
inline DirichletChar mul(const DirichletChar& a, const DirichletChar& b) {
    i64 M = std::lcm(a.N, b.N);
    DirichletChar c;
    c.N = M;
    for (auto [p, e] : factorize(M)) {
        const PrimeLocalChar* la = a.local(p);
        const PrimeLocalChar* lb = b.local(p);
        PrimeLocalChar x = PrimeLocalChar::trivial(p, e);
        if (la) x = x * la->primitive().induce(e);
        if (lb) x = x * lb->primitive().induce(e);
        c.locals.push_back(x);
    }
    return c;
}

// The primitive character inducing chi (modulus = conductor).
inline DirichletChar primitive_part(const DirichletChar& chi) {
    return induce(chi, chi.conductor());
}

// Definition 1.4 case table, on (p, e, s, order of chi_p).
inline bool is_minimal_local(i64 p, int e, int s, i64 order) {
    if (e == 0) return true;
    if (p > 2) {
        if (s == 0 || s == e) return true;
        i64 target = ipow(2, valuation(p - 1, 2));
        return order == target;
    }
    if (s == e / 2 || s == e) return true;
    if (e <= 3) return s == 0;
    if (e % 2 == 1) return s == 0 || s == 2;
    return false;
}

inline bool is_minimal(const PrimeLocalChar& lc) {
    return is_minimal_local(lc.p, lc.e, lc.conductor_exponent(), lc.order());
}

inline bool is_minimal(const DirichletChar& chi) {
    return std::all_of(chi.locals.begin(), chi.locals.end(),
                       [](const PrimeLocalChar& lc) { return is_minimal(lc); });
}

// All characters mod p^e, in lexicographic generator-exponent order.
inline std::vector<PrimeLocalChar> enumerate_local_chars(i64 p, int e) {
    const auto& g = detail::unit_group(p, e);
    std::vector<PrimeLocalChar> out;
    i64 o0 = g.gens.empty() ? 1 : g.orders[0];
    i64 o1 = g.gens.size() > 1 ? g.orders[1] : 1;
    for (i64 a = 0; a < o0; ++a)
        for (i64 b = 0; b < o1; ++b) {
            PrimeLocalChar c;
            c.p = p;
            c.e = e;
            if (!g.gens.empty()) c.k.push_back(a);
            if (g.gens.size() > 1) c.k.push_back(b);
            out.push_back(std::move(c));
        }
    return out;
}

// All characters mod N (complete and duplicate-free, size phi(N)).
inline std::vector<DirichletChar> enumerate_chars(i64 N) {
    std::vector<DirichletChar> out{DirichletChar::trivial(N)};
    for (auto [p, e] : factorize(N)) {
        auto locs = enumerate_local_chars(p, e);
        std::vector<DirichletChar> next;
        next.reserve(out.size() * locs.size());
        for (const auto& base : out)
            for (const auto& lc : locs) {
                DirichletChar c = base;
                for (auto& mine : c.locals)
                    if (mine.p == p) mine = lc;
                next.push_back(std::move(c));
            }
        out = std::move(next);
    }
    return out;
}

// Primitive characters of conductor exactly q.
inline std::vector<DirichletChar> enumerate_primitive(i64 q) {
    std::vector<DirichletChar> out;
    for (const auto& chi : enumerate_chars(q))
        if (chi.conductor() == q) out.push_back(chi);
    return out;
}

// Constructive twist reduction (Lemma 1.6 proof): returns psi mod N with
// chi*psi^2 minimal whenever such a psi exists. For the 2-adic configurations
// where no psi works (the twist-minimal space is empty there), returns the
// trivial psi and leaves chi unchanged.
struct TwistReduction {
    DirichletChar psi;
    DirichletChar chi_min;  // chi * psi^2 mod N
    bool solved = true;     // chi_min is minimal
};

inline PrimeLocalChar reduce_local(const PrimeLocalChar& chi, bool* solved) {
    i64 p = chi.p;
    int e = chi.e;
    PrimeLocalChar psi = PrimeLocalChar::trivial(p, e);
    if (is_minimal(chi)) return psi;
    if (p > 2) {
        // chi(g) = e(a/phi); b = -a/2 or (phi*2^{-ord2(p-1)} - a)/2.
        i64 phi = euler_phi(chi.modulus());
        i64 a = chi.k[0];
        i64 b;
        if (a % 2 == 0) {
            b = mod_floor(-a / 2, phi);
        } else {
            i64 m = phi / ipow(2, valuation(p - 1, 2));  // odd
            b = mod_floor((m - a) / 2, phi);
        }
        psi.k[0] = b;
        return psi;
    }
    // p = 2: the proof's regime is e odd > 3, 3 <= s <= (e-3)/2; a bounded
    // search over all psi covers it and every other solvable case,
    // preferring minimal cond(psi)*cond(chi*psi).
    const auto& g = chi.group();
    i64 o0 = g.gens.empty() ? 1 : g.orders[0];
    i64 o1 = g.gens.size() > 1 ? g.orders[1] : 1;
    bool found = false;
    i64 best_cost = 0;
    PrimeLocalChar best = psi;
    for (i64 a = 0; a < o0; ++a)
        for (i64 b = 0; b < o1; ++b) {
            PrimeLocalChar cand;
            cand.p = p;
            cand.e = e;
            if (!g.gens.empty()) cand.k.push_back(a);
            if (g.gens.size() > 1) cand.k.push_back(b);
            PrimeLocalChar twisted = chi * cand * cand;
            if (!is_minimal(twisted)) continue;
            i64 cost = ipow(p, cand.conductor_exponent()) *
                       ipow(p, (chi * cand).conductor_exponent());
            if (!found || cost < best_cost) {
                found = true;
                best_cost = cost;
                best = cand;
            }
        }
    if (!found) {
        *solved = false;
        return psi;
    }
    return best;
}

inline TwistReduction reduce_to_minimal(const DirichletChar& chi) {
    TwistReduction out;
    out.psi.N = chi.N;
    bool solved = true;
    for (const auto& lc : chi.locals) out.psi.locals.push_back(reduce_local(lc, &solved));
    out.chi_min = mul(chi, mul(out.psi, out.psi));
    out.solved = solved;
    return out;
}

// CLI literal: "N:c1,c2,..." with exponent values on the canonical
// generators, ascending primes; p=2 contributes the (-1,5) exponent pair
// (one exponent for e=2, none for e=1). "N:trivial" and "N:legendre"
// (prime N) are accepted as aliases.
inline std::string format_char(const DirichletChar& chi) {
    std::string s = std::to_string(chi.N) + ":";
    bool first = true;
    for (const auto& lc : chi.locals)
        for (i64 v : lc.k) {
            if (!first) s += ",";
            s += std::to_string(v);
            first = false;
        }
    return s;
}

inline DirichletChar parse_char(const std::string& lit) {
    auto colon = lit.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("character literal must be N:c1,c2,...");
    i64 N = std::stoll(lit.substr(0, colon));
    std::string rest = lit.substr(colon + 1);
    DirichletChar chi = DirichletChar::trivial(N);
    if (rest == "trivial" || rest.empty()) return chi;
    if (rest == "legendre") {
        if (!is_prime(N)) throw std::invalid_argument("legendre alias requires prime N");
        chi.locals[0].k[0] = (N - 1) / 2;
        return chi;
    }
    std::vector<i64> vals;
    size_t pos = 0;
    while (pos < rest.size()) {
        auto comma = rest.find(',', pos);
        if (comma == std::string::npos) comma = rest.size();
        vals.push_back(std::stoll(rest.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    size_t idx = 0;
    for (auto& lc : chi.locals)
        for (auto& kv : lc.k) {
            if (idx >= vals.size()) throw std::invalid_argument("too few exponents in character literal");
            const auto& g = lc.group();
            kv = mod_floor(vals[idx], g.orders[&kv - lc.k.data()]);
            ++idx;
        }
    if (idx != vals.size()) throw std::invalid_argument("too many exponents in character literal");
    return chi;
}

}  // namespace twistmin
