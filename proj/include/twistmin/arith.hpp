#pragma once

// Elementary integer arithmetic: factorization, valuations, Kronecker
// symbols, primitive roots, square roots modulo prime powers, von Mangoldt.
// Everything here is exact 64-bit (128-bit intermediates) and desk-scale;
// no probabilistic methods.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace twistmin {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128_t;

inline i64 ipow(i64 b, int e) {
    i64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

inline i64 mod_floor(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
    return static_cast<i64>(static_cast<i128>(a) * b % m);
}

inline i64 powmod(i64 b, i64 e, i64 m) {
    i64 r = 1 % m;
    b = mod_floor(b, m);
    while (e > 0) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

inline i64 inv_mod(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1, a1 = mod_floor(a, m);
    while (a1 != 0) {
        i64 q = g / a1;
        g -= q * a1; std::swap(g, a1);
        x -= q * x1; std::swap(x, x1);
    }
    if (g != 1) throw std::domain_error("inv_mod: not invertible");
    return mod_floor(x, m);
}

struct PrimePower {
    i64 p;
    int e;
};

inline std::vector<PrimePower> factorize(i64 n) {
    if (n < 0) n = -n;
    std::vector<PrimePower> f;
    for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            f.push_back({p, e});
        }
    }
    if (n > 1) f.push_back({n, 1});
    return f;
}

inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

// Valuation of 0 is reported as a large sentinel (treated as +infinity).
inline constexpr int kValInfinity = 1 << 20;

inline int valuation(i64 n, i64 p) {
    if (n == 0) return kValInfinity;
    int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

inline i64 euler_phi(i64 n) {
    i64 r = 1;
    for (auto [p, e] : factorize(n)) r *= ipow(p, e - 1) * (p - 1);
    return r;
}

inline int omega_primes(i64 n) {
    return static_cast<int>(factorize(n).size());
}

// Λ(m): log p on prime powers, else 0.
inline double von_mangoldt(i64 m) {
    if (m < 2) return 0.0;
    auto f = factorize(m);
    if (f.size() != 1) return 0.0;
    return std::log(static_cast<double>(f[0].p));
}

inline bool is_square(i64 n) {
    if (n < 0) return false;
    i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    for (i64 s = std::max<i64>(0, r - 2); s <= r + 2; ++s)
        if (s * s == n) return true;
    return false;
}

inline i64 isqrt(i64 n) {
    i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Kronecker symbol (a|n), fully general including n <= 0.
inline int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    int v = 0;
    while (n % 2 == 0) { n /= 2; ++v; }
    if (v > 0) {
        if (a % 2 == 0) return 0;  // (a|2) = 0 for even a
        i64 am8 = mod_floor(a, 8);
        if (v % 2 == 1 && (am8 == 3 || am8 == 5)) sign = -sign;
    }
    a = mod_floor(a, n);
    // Jacobi symbol on odd n >= 1 by quadratic reciprocity.
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) sign = -sign;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) sign = -sign;
        a %= n;
    }
    return n == 1 ? sign : 0;
}

// Least primitive root mod p^e (p odd prime, e >= 1).
inline i64 primitive_root(i64 p, int e) {
    i64 phi = p - 1;
    auto fac = factorize(phi);
    i64 g = 0;
    for (i64 c = 2; c < p; ++c) {
        bool ok = true;
        for (auto [q, _] : fac)
            if (powmod(c, phi / q, p) == 1) { ok = false; break; }
        if (ok) { g = c; break; }
    }
    if (g == 0) throw std::domain_error("primitive_root: none found");
    if (e == 1) return g;
    // g generates mod p^2 iff g^(p-1) != 1 mod p^2; then it works for all e.
    if (powmod(g, p - 1, p * p) == 1) g += p;
    return g;
}

// Square root of a mod odd prime p, if it exists (Tonelli-Shanks).
inline std::optional<i64> sqrt_mod_prime(i64 a, i64 p) {
    a = mod_floor(a, p);
    if (a == 0) return 0;
    if (kronecker(a, p) != 1) return std::nullopt;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    i64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }
    i64 z = 2;
    while (kronecker(z, p) != -1) ++z;
    i64 m = s, c = powmod(z, q, p), t = powmod(a, q, p),
        r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        i64 t2 = t;
        int i = 0;
        while (t2 != 1) { t2 = mulmod(t2, t2, p); ++i; }
        i64 b = powmod(c, ipow(2, static_cast<int>(m) - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

// Square root of a mod p^e for odd p with p not dividing a (Hensel lift).
inline std::optional<i64> sqrt_mod_odd_prime_power(i64 a, i64 p, int e) {
    auto r0 = sqrt_mod_prime(a, p);
    if (!r0 || *r0 == 0) return (mod_floor(a, p) == 0) ? r0 : std::nullopt;
    i64 x = *r0, pk = p;
    for (int k = 1; k < e; ++k) {
        i64 pk1 = pk * p;
        i64 f = mod_floor(mod_floor(mulmod(x, x, pk1) - a, pk1), pk1);
        i64 t = mulmod(f / pk, inv_mod(mod_floor(2 * x, p), p), p);
        x = mod_floor(x - t * pk, pk1);
        pk = pk1;
    }
    return x;
}

// Square root of a mod 2^k for odd a = 1 mod 8 (k >= 3); for k <= 2 handles
// a = 1 mod gcd(8,2^k) directly.
inline std::optional<i64> sqrt_mod_power_of_two(i64 a, int k) {
    i64 m = ipow(2, k);
    a = mod_floor(a, m);
    if (k == 1) return a % 2 == 1 ? std::optional<i64>(1) : std::nullopt;
    if (k == 2) return a % 4 == 1 ? std::optional<i64>(1) : std::nullopt;
    if (a % 8 != 1) return std::nullopt;
    i64 x = 1;  // x^2 = a mod 8
    for (int j = 3; j < k; ++j) {
        i64 pj = ipow(2, j);
        if (mod_floor(x * x - a, 2 * pj) != 0) x += pj / 2;
    }
    if (mod_floor(x * x - a, m) != 0) throw std::logic_error("sqrt mod 2^k lift failed");
    return x;
}

// Square root of d modulo 4*p^e (exists in the cases the trace formula
// reaches: kronecker(d,p)=1, and d = 0,1 mod 4).
inline std::optional<i64> sqrt_mod_4pe(i64 d, i64 p, int e) {
    if (p == 2) return sqrt_mod_power_of_two(d, e + 2);
    i64 pe = ipow(p, e);
    auto rp = sqrt_mod_odd_prime_power(mod_floor(d, pe), p, e);
    if (!rp) return std::nullopt;
    i64 d4 = mod_floor(d, 4);
    i64 r4;
    if (d4 == 0) r4 = 0;       // 0^2 = 0 mod 4
    else if (d4 == 1) r4 = 1;  // 1^2 = 1 mod 4
    else return std::nullopt;
    // CRT combine x = rp mod p^e, x = r4 mod 4.
    i64 m = 4 * pe;
    i64 x = mod_floor(*rp + pe * mulmod(mod_floor(r4 - *rp, 4), inv_mod(pe, 4), 4), m);
    return x;
}

}  // namespace twistmin
