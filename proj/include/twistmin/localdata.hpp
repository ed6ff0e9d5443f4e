#pragma once

// Closed-form evaluation of every local factor of the trace formulas:
// M, mu, Phi_{m,n}, Psi_n, H_{t,n}, the S_p closed forms, Psi_1..Psi_7,
// tilde Psi_2, Omega_1/2, eps_N, I_chi, I_{q,4}, Phi_+- and tilde Omega_j.
//
// Rational case tables are evaluated in exact rational arithmetic; complex
// values enter only through character evaluations. Character evaluations
// inside the S_p / H_{t,n} closed forms go through the primitive character
// of conductor p^s (they agree with the mod-p^e evaluation whenever the
// argument is a unit, which is every case except degenerate e=1 rows where
// the primitive reading is the one matching the direct sum).

#include <complex>

#include "twistmin/arith.hpp"
#include "twistmin/chars.hpp"
#include "twistmin/quadfield.hpp"
#include "twistmin/rational.hpp"

namespace twistmin {

struct LocalContext {
    i64 p = 0;
    int e = 0;
    int s = 0;
    PrimeLocalChar chi;

    static LocalContext of(const PrimeLocalChar& chi) {
        return {chi.p, chi.e, chi.conductor_exponent(), chi};
    }
};

inline i64 gcd3(i64 a, i64 b, i64 c) { return std::gcd(a, std::gcd(b, c)); }

// ---------------------------------------------------------------- M(chi) --

// eq. (1.3); the identity-term coefficient. M(chi) = prod_p bigM.
inline Rat bigM_local(const LocalContext& c) {
    i64 p = c.p;
    int e = c.e, s = c.s;
    if (e == 0) return Rat(1);
    if (s == e) return Rat(ipow(p, e - 1) * (p + 1));
    i64 chim1 = c.chi.parity();
    if (e <= 2) return Rat(p - chim1, gcd3(2, p - 1, e)) * Rat(euler_phi(ipow(p, e - 1)));
    return Rat(p * p - 1, gcd3(2, p - 1, e)) * Rat(euler_phi(ipow(p, e - 2)));
}

inline Rat global_M(const DirichletChar& chi) {
    Rat m(1);
    for (const auto& lc : chi.locals) m = m * bigM_local(LocalContext::of(lc));
    return m;
}

// --------------------------------------------------------------- mu(chi) --

inline int mu_local(const LocalContext& c) { return (c.s < c.e && c.e == 1) ? -1 : 0; }

inline int global_mu(const DirichletChar& chi) {
    int m = 1;
    for (const auto& lc : chi.locals) m *= mu_local(LocalContext::of(lc));
    return m;
}

// ---------------------------------------------------------- Phi_{m,n}(chi) --

// eq. (Phimndef): parabolic prime-power factor of the twist-minimal formula.
inline std::complex<double> phi_mn_local(const LocalContext& c, i64 m, int n) {
    if (c.s == c.e) {
        auto chim = c.chi.eval(m);
        return std::conj(chim) + c.chi.eval(n) * chim;
    }
    if (c.s < c.e && c.e == 1) {
        i64 mm = m;
        if (mm > 1 && mm % c.p == 0) {
            while (mm % c.p == 0) mm /= c.p;
            if (mm == 1) return {-1.0, 0.0};
        }
        return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

inline std::complex<double> global_Phi_mn(const DirichletChar& chi, i64 m, int n) {
    std::complex<double> v{1.0, 0.0};
    for (const auto& lc : chi.locals) v *= phi_mn_local(LocalContext::of(lc), m, n);
    return v;
}

// -------------------------------------------------------------- Psi_n(chi) --

// The seven-case table for the -Lambda(N/q) Psi_n(chi) g(0) term.
inline Rat psi_parabolic_local(const LocalContext& c, int n) {
    i64 p = c.p;
    int e = c.e, s = c.s;
    if (e == 0) return Rat(1);
    auto chi_n = [&](i64 x) -> i64 {  // chi(x) for x = +-1 (exact, +-1 or 1)
        return x == 1 ? 1 : c.chi.parity();
    };
    if (s == e || (n == 1 && e == 1)) return Rat(1 + chi_n(n));
    if (n == 1 && s < e && e == 2) return Rat(p - c.chi.parity(), gcd3(2, p - 1, e));
    if (n == 1 && e > std::max(s, 2))
        return Rat(ipow(p, (e - 3) / 2) + ipow(p, (e - 2) / 2), gcd3(2, p - 1, e)) * Rat(p - 1);
    if (n == -1 && p == 2 && s < e && e == 1) return Rat(3, 2);
    if (n == -1 && p == 2 && s < e && (e == 2 || e == 3)) return Rat(1, 2);
    if (n == -1 && p > 2 && s < e && e == 1) return Rat(1);
    return Rat(0);
}

inline Rat global_Psi_parabolic(const DirichletChar& chi, int n) {
    Rat v(1);
    for (const auto& lc : chi.locals) v = v * psi_parabolic_local(LocalContext::of(lc), n);
    return v;
}

// ------------------------------------------------------------- H_{t,n}(chi) --

// Context shared by H_{t,n} and the S_p closed forms.
struct HtnContext {
    i64 t;
    int n;
    Discriminant D;  // t^2 - 4n = d ell^2, nonsquare
    int f;           // ord_p(ell)
    int g;           // ord_p(t^2 - 4n)
    int r;           // ord_p(D/2) + 1: g for p = 2, g + 1 for odd p
    Rat alpha;       // (psi_d(p) - 1) / (1 + (p - psi_d(p)) (p^f - 1)/(p - 1))
    int omega;       // per the case table before eq. (1.7)
};

inline HtnContext make_htn_context(i64 p, int s, i64 t, int n) {
    HtnContext h;
    h.t = t;
    h.n = n;
    h.D = split_fundamental(t * t - 4 * n);
    h.f = valuation(h.D.ell, p);
    h.g = valuation(h.D.D, p);
    h.r = (p == 2) ? h.g : h.g + 1;
    int kd = kronecker(h.D.d, p);
    Rat denom = Rat(1) + Rat(p - kd) * Rat(ipow(p, h.f) - 1, p - 1);
    h.alpha = Rat(kd - 1) / denom;
    h.omega = (mod_floor(t, 2) != 0 || (p == 2 && h.r == 2 * s)) ? 1 : 0;
    return h;
}

// The unramified factor S_p(1,1;t,n), eq. (e:boldSp_e=0_0).
inline Rat S_p_unramified(i64 p, i64 t, int n) {
    auto D = split_fundamental(t * t - 4 * n);
    int f = valuation(D.ell, p);
    return Rat(1) + Rat(p - kronecker(D.d, p)) * Rat(ipow(p, f) - 1, p - 1);
}

namespace detail {

// chi evaluated through its primitive lift at (t + shift)/2, where shift is
// already chosen to make the numerator even for p = 2.
inline std::complex<double> chi_prim_half(const PrimeLocalChar& chi, i64 t, i64 shift) {
    PrimeLocalChar prim = chi.primitive();
    i64 m = prim.modulus();
    if (chi.p == 2) {
        i64 x = mod_floor(t + shift, 2 * m);
        return prim.eval(x / 2);
    }
    i64 x = mulmod(mod_floor(t + shift, m), inv_mod(2, m), m);
    return prim.eval(x);
}

// chi((t + sqrt(d) ell)/2) + chi((t - sqrt(d) ell)/2) through the primitive
// lift; sqrt(d) is any square root of d mod 4 p^e (the sum is independent of
// the choice).
inline std::complex<double> chi_prim_sqrt_pair(const PrimeLocalChar& chi, const HtnContext& h) {
    PrimeLocalChar prim = chi.primitive();
    int s = prim.e;
    i64 p = chi.p;
    auto sq = sqrt_mod_4pe(h.D.d, p, std::max(s, 1));
    if (!sq) throw std::logic_error("chi_prim_sqrt_pair: no square root where one is required");
    i64 m = ipow(p, std::max(s, 1));
    std::complex<double> out{0.0, 0.0};
    for (int sign : {1, -1}) {
        i64 x;
        if (p == 2) {
            i64 X = mod_floor(h.t + sign * *sq % (2 * m) * h.D.ell, 2 * m);
            x = X / 2;  // X is even in every reachable case
        } else {
            x = mulmod(mod_floor(h.t + sign * *sq % m * h.D.ell, m), inv_mod(2, m), m);
        }
        out += prim.eval(x);
    }
    return out;
}

}  // namespace detail

// eqs. (1.7), (1.8), (1.9): the twist-minimal hyperbolic/elliptic local
// factor. Requires chi_p minimal; t^2 - 4n must not be a square.
inline std::complex<double> H_tn_local(const LocalContext& c, i64 t, int n) {
    if (!is_minimal(c.chi)) throw std::domain_error("H_tn: non-minimal local character");
    i64 p = c.p;
    int e = c.e, s = c.s;
    if (e == 0) return {1.0, 0.0};
    HtnContext h = make_htn_context(p, s, t, n);
    double alpha = h.alpha.to_double();
    if (s == e) {
        if (h.r >= 2 * e) {
            double coeff = 2.0 + alpha * static_cast<double>(ipow(p, e) + ipow(p, e - 1) - 2) /
                                     static_cast<double>(p - 1);
            return detail::chi_prim_half(c.chi, t, h.omega ? ipow(p, s) : 0) * coeff;
        }
        if (kronecker(h.D.d, p) == 1) return detail::chi_prim_sqrt_pair(c.chi, h);
        return {0.0, 0.0};
    }
    if (p > 2) {
        // eq. (1.8)
        if (!(e == 1 || kronecker(n, p) == 1)) return {0.0, 0.0};
        if (!(h.r >= e - 1)) return {0.0, 0.0};
        double chim1 = c.chi.primitive().parity();
        double bracket = p * (p - (e == 2 ? chim1 : 0.0) -
                              (h.r == e - 1 ? (p + (e % 2 == 0 ? 1.0 : 0.0)) : 0.0)) -
                         (e > 2 ? 1.0 : 0.0);
        double coeff = alpha / gcd3(2, e, e) * std::pow(static_cast<double>(p), e - 3) * bracket;
        return detail::chi_prim_half(c.chi, t, h.omega ? ipow(p, s) : 0) * coeff;
    }
    // p = 2, eq. (1.9)
    double table;
    if (e >= 3 && h.r > e) table = 3.0;
    else if (e >= 3 && h.r == e) table = 1.0 + 2.0 * (e % 2 == 0 ? 1.0 : -1.0);
    else if (e >= 3 && h.r == e - 1 && e % 2 == 1)
        table = 1.0 - 2.0 * (mod_floor(h.D.d, 2) == 0 ? 1.0 : -1.0);
    else if (e == 2 && h.r >= e) table = 2.0;
    else if (e == 2 && h.r < e) table = -1.0;
    else if (e == 1) table = 4.0;
    else table = 0.0;
    if (table == 0.0) return {0.0, 0.0};
    i64 shift = h.omega ? ipow(2, h.r / 2) : 0;
    return detail::chi_prim_half(c.chi, t, shift) * alpha *
           std::pow(2.0, e - 3) * table;
}

// Lemma 2.7 closed forms for S_p(p^e, chi; t, n), p | N.
inline std::complex<double> S_p_closed(const LocalContext& c, i64 t, int n) {
    i64 p = c.p;
    int e = c.e, s = c.s;
    if (e == 0) return {S_p_unramified(p, t, n).to_double(), 0.0};
    HtnContext h = make_htn_context(p, s, t, n);
    int hh = std::max(2 * s - 1, e);
    int g = h.g, f = h.f;
    int kd = kronecker(h.D.d, p);
    if (p > 2) {
        std::complex<double> out{0.0, 0.0};
        if (g >= hh && hh > 0) {
            double t1 = ipow(p, e - 1) *
                        (std::pow(double(p), f - (hh - 1) / 2) + std::pow(double(p), f - hh / 2));
            double t2 = (1.0 - kd) * ipow(p, e - 1) / double(p - 1) *
                        (std::pow(double(p), f - (hh - 1) / 2) + std::pow(double(p), f - hh / 2) -
                         p - 1);
            out += detail::chi_prim_half(c.chi, t, (t % 2 != 0) ? ipow(p, s) : 0) * (t1 + t2);
        }
        if (g <= hh - 1 && kd == 1)
            out += detail::chi_prim_sqrt_pair(c.chi, h) *
                   std::pow(double(p), f + std::min(e - s, f));
        return out;
    }
    // p = 2
    if (mod_floor(t, 2) != 0) return {0.0, 0.0};
    std::complex<double> out{0.0, 0.0};
    double cases = 0.0;
    bool first = (g >= hh + 1 && g % 2 == 1) ||
                 (g >= std::max(hh, 2 * s + 2) && g % 2 == 0);
    if (first) {
        double a = (mod_floor(h.D.d, 2) != 0)
                       ? ipow(2, e - 1) * (std::pow(2.0, g / 2.0 - (hh - 1) / 2) +
                                           std::pow(2.0, g / 2.0 - hh / 2))
                       : 0.0;
        double b = (1.0 - kd) * ipow(2, e - 1) *
                   (std::pow(2.0, g / 2 - (hh - 1) / 2) + std::pow(2.0, g / 2 - hh / 2) - 3.0);
        cases = a + b;
    } else if (g == 2 * s && g >= e + 1) {
        cases = -(mod_floor(h.D.d, 2) != 0 ? std::pow(2.0, e + 1) : 0.0) -
                (1.0 - kd) * ipow(2, e - 1);
    } else if (g == 2 * s && g == e && mod_floor(h.D.d, 2) != 0) {
        cases = -3.0 * ipow(2, e - 1);
    }
    if (cases != 0.0) out += detail::chi_prim_half(c.chi, t, 0) * cases;
    if (g <= hh - 1 && kd == 1)
        out += detail::chi_prim_sqrt_pair(c.chi, h) * std::pow(2.0, f + std::min(e - s, f));
    return out;
}

// ------------------------------------------------- Psi_1 .. Psi_7, B_p --

inline Rat psi1(i64 p, int e, int s) {
    if (e == 0) return Rat(1);
    if (e < 2 * s) return Rat(2 * ipow(p, e - s));
    return Rat(ipow(p, e / 2) + ipow(p, (e - 1) / 2));
}

inline Rat psi2(i64 p, int e, int s) {
    if (e == 0) return Rat(1);
    if (p > 2) {
        if (s == 0) return Rat(2 * e);
        if (e >= 2 * s && s > 0) return Rat(2 * (e - 2 * s + 1));
        return Rat(0);
    }
    if (s == 0) {
        if (e <= 2) return Rat(e + 1);
        if (e <= 4) return Rat(2 * (e - 1));
        return Rat(4 * (e - 3));
    }
    if (e >= 2 * s + 1 && s >= 3) return Rat(4 * (e - 2 * s - 1));
    return Rat(0);
}

inline Rat psi3(i64 p, int e, int s) {
    if (e == 0) return Rat(0);
    if (e < 2 * s) return Rat(ipow(p, e - s) * (4 * s - 1));
    Rat v = Rat(ipow(p, e / 2) + ipow(p, (e - 1) / 2)) * (Rat(e) - Rat(1, p - 1)) +
            Rat(2, p - 1);
    if (s > 0) v = v + Rat(ipow(p, s - 1)) + Rat(2) * Rat(ipow(p, s - 1) - 1, p - 1);
    return v;
}

inline Rat psi4(i64 p, int e, int s) {
    return Rat(ipow(p, e - s) * std::max<i64>(2 * s - e - 1, 0));
}

inline Rat psi5(i64 p, int e, int s) {
    Rat v = (psi1(p, e, s) - Rat(2)) / Rat(p - 1);
    v = v + Rat(std::max<i64>((e + 1) / 2, s) * ipow(p, std::min(e / 2, e - s)));
    v = v + Rat(std::max<i64>((e + 2) / 2, s) * ipow(p, std::min((e - 1) / 2, e - s)));
    return v;
}

inline Rat B_p(i64 p, int x) {
    if (x < 0) return Rat(0);
    return Rat(x * ipow(p, x)) - Rat(2) * Rat(ipow(p, x) - 1, p - 1);
}

inline Rat psi6(i64 p, int e, int s) {
    if (e < 2 * s) return B_p(p, e - s) + Rat(s * ipow(p, e - s));
    return B_p(p, e / 2) + B_p(p, (e - 1) / 2) - B_p(p, s - 1) + Rat(s * ipow(p, std::max(s - 1, 0)));
}

inline Rat psi7(i64 p, int e, int s) {
    if (p > 2) return s == 0 ? Rat(-e + 1) : Rat(-e + 2 * s);
    if (s == 0 && e >= 3) return Rat(-e + 3);
    if (e > s && s >= 2) return Rat(-e + 2 * s + 1);
    if (e == s && s >= 2) return Rat(e);
    return Rat(0);
}

inline Rat psi_k(int k, i64 p, int e, int s) {
    switch (k) {
        case 1: return psi1(p, e, s);
        case 2: return psi2(p, e, s);
        case 3: return psi3(p, e, s);
        case 4: return psi4(p, e, s);
        case 5: return psi5(p, e, s);
        case 6: return psi6(p, e, s);
        case 7: return psi7(p, e, s);
    }
    throw std::domain_error("psi_k: k must be 1..7");
}

// Psi_2 with the even-character projector (used by the sieve and tilde Psi_2).
inline Rat psi2_chi(const LocalContext& c) {
    return Rat(c.chi.parity() + 1, 2) * psi2(c.p, c.e, c.s);
}

// tilde Psi_2(p^e, chi): eq. (e:tPsi2). sqrt(-1) is Hensel-lifted to the
// conductor; for even chi the two roots give the same value.
inline std::complex<double> tilde_psi2(const LocalContext& c) {
    i64 p = c.p;
    int e = c.e, s = c.s;
    if (e == 0) return {1.0, 0.0};
    if (p == 2) return s == 0 ? std::complex<double>(std::min(e + 1, 4), 0.0)
                              : std::complex<double>(0.0, 0.0);
    if (mod_floor(p, 4) == 3) return s == 0 ? std::complex<double>(2.0, 0.0)
                                            : std::complex<double>(0.0, 0.0);
    // p = 1 mod 4
    if (c.chi.parity() != 1) return {0.0, 0.0};
    auto prim = c.chi.primitive();
    std::complex<double> val{1.0, 0.0};
    if (s >= 1) {
        auto rt = sqrt_mod_odd_prime_power(mod_floor(-1, ipow(p, s)), p, s);
        if (!rt) throw std::logic_error("tilde_psi2: sqrt(-1) must exist for p = 1 mod 4");
        val = prim.eval(*rt);
    }
    return val * psi2(p, e, s).to_double();
}

// ------------------------------------------------ Omega_1/2, eps_N, I's --

inline Rat omega1(int e2, int s2) {
    if (e2 <= 1 || s2 == e2) return Rat(1);
    if (e2 == 2) return Rat(3, 2);
    return Rat(2);
}

inline Rat omega2(int e2, int s2) {
    if (e2 <= 2) return Rat(1, 2) - Rat(3 * e2, 4);
    if (s2 == 0) return Rat(-2);
    if (e2 > s2 && s2 >= 3) return Rat(-2 * s2);
    if (e2 == s2 && s2 >= 3) return Rat(-e2);
    // remaining: e2 >= 3 with s2 in {1, 2}
    return Rat(-2 * s2);
}

inline Rat eps_N(i64 N) {
    int e2 = valuation(N, 2);
    if (e2 == 0) return Rat(1);
    if (e2 == 1) return Rat(1, 2);
    return Rat(0);
}

// I_chi = 1 iff chi_p(-1) = 1 for every odd p | N ("pure").
inline bool I_chi(const DirichletChar& chi) {
    for (const auto& lc : chi.locals)
        if (lc.p > 2 && lc.parity() != 1) return false;
    return true;
}

// I_{q,4} = 1 iff p = 1 mod 4 for every prime p | q.
inline bool I_q4(i64 q) {
    for (auto [p, e] : factorize(q))
        if (mod_floor(p, 4) != 1) return false;
    return true;
}

inline Rat global_Omega1(const DirichletChar& chi) {
    const PrimeLocalChar* l2 = chi.local(2);
    return omega1(l2 ? l2->e : 0, l2 ? l2->conductor_exponent() : 0);
}

inline Rat global_Omega2(const DirichletChar& chi) {
    const PrimeLocalChar* l2 = chi.local(2);
    return omega2(l2 ? l2->e : 0, l2 ? l2->conductor_exponent() : 0);
}

// tilde Omega_j(p^e, chi): the multiplicative carrier of I_chi 2^omega(N)
// Omega_j(N, q); at p = 2 the factor carries the whole Omega_j value.
inline Rat tilde_omega(int j, const LocalContext& c) {
    bool even = c.chi.parity() == 1;
    Rat om = j == 1 ? omega1(c.p == 2 ? c.e : 0, c.p == 2 ? c.s : 0)
                    : omega2(c.p == 2 ? c.e : 0, c.p == 2 ? c.s : 0);
    if (c.p == 2) {
        if (c.e == 0) return om;
        return even ? Rat(2) * om : Rat(0);
    }
    if (c.e == 0) return Rat(1);
    return even ? Rat(2) : Rat(0);
}

// ------------------------------------------------------------- Phi_+- --

// w_+-(m) and the plain factor Phi_+-(p^e, m) = Psi_1(p^e, p^{w_+-}).
inline int w_pm(i64 p, int e, int s, i64 m, int sign) {
    i64 val = sign * m * m - 1;
    int v = valuation(val, p);  // valuation(0) = +infinity sentinel
    return std::max(s, e - std::min(v, e));
}

inline Rat phi_pm_plain(i64 p, int e, int s, i64 m, int sign) {
    return psi1(p, e, w_pm(p, e, s, m, sign));
}

// Composite local factor of the (Cu+Eis) prime sums:
// 1 when s=0 and p | m; otherwise (conj chi(m) + chi(+-m))/2 * Phi_+-.
inline std::complex<double> phi_pm_chi(const LocalContext& c, i64 m, int sign) {
    if (c.e == 0) return {1.0, 0.0};
    if (c.s == 0 && m % c.p == 0) return {1.0, 0.0};
    auto chim = c.chi.eval(m);
    auto chipm = c.chi.eval(sign * m);
    return 0.5 * (std::conj(chim) + chipm) * phi_pm_plain(c.p, c.e, c.s, m, sign).to_double();
}

}  // namespace twistmin
