#pragma once

// Brute-force ground truth for the local elliptic/hyperbolic factors:
// solution sets of xi^2 - t xi + n = 0 mod p^alpha by plain residue scan,
// and the direct three-part sum defining S_p. The scan is deliberately dumb;
// everything downstream is tested against it.

#include <algorithm>
#include <complex>
#include <vector>

#include "twistmin/arith.hpp"
#include "twistmin/chars.hpp"
#include "twistmin/quadfield.hpp"

namespace twistmin {

struct OmegaSet {
    i64 p = 0;
    int alpha = 0;
    int n = 0;
    i64 t = 0;
    std::vector<i64> residues;  // sorted, complete, mod p^alpha
};

inline OmegaSet omega_enumerate(i64 p, int alpha, int n, i64 t) {
    OmegaSet out{p, alpha, n, t, {}};
    i64 m = ipow(p, alpha);
    i64 tm = mod_floor(t, m), nm = mod_floor(n, m);
    for (i64 xi = 0; xi < m; ++xi)
        if (mod_floor(xi * xi - tm * xi + nm, m) == 0) out.residues.push_back(xi);
    return out;
}

// Representatives of the solution set modulo p^modulus_exp, deduplicated.
inline std::vector<i64> omega_reduced(const OmegaSet& om, int modulus_exp) {
    i64 m = ipow(om.p, modulus_exp);
    std::vector<i64> out;
    out.reserve(om.residues.size());
    for (i64 xi : om.residues) out.push_back(mod_floor(xi, m));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// The chi-independent residue sets entering the direct sum (e:boldSp_0),
// so that sweeping many characters reuses one enumeration.
struct SpOracleSets {
    std::vector<i64> head;   // Omega(p^{e+2f}) / p^{e+f}
    std::vector<i64> head2;  // Omega(p^{e+2f+1}) / p^{e+f}, used iff p | d
    bool use_head2 = false;
    i64 cross_coeff = 0;  // p - (d|p)
    std::vector<std::pair<i64, std::vector<i64>>> tail;  // (p^{k-1}, residues)
};

inline SpOracleSets sp_oracle_sets(i64 p, int e, i64 t, int n) {
    auto D = split_fundamental(t * t - 4 * n);
    int f = valuation(D.ell, p);
    SpOracleSets sets;
    sets.head = omega_reduced(omega_enumerate(p, e + 2 * f, n, t), e + f);
    sets.use_head2 = (mod_floor(D.d, p) == 0);
    if (sets.use_head2)
        sets.head2 = omega_reduced(omega_enumerate(p, e + 2 * f + 1, n, t), e + f);
    sets.cross_coeff = p - kronecker(D.d, p);
    for (int k = 1; k <= f; ++k) {
        for (int beta : {0, 1}) {
            auto red = omega_reduced(omega_enumerate(p, e + 2 * f - 2 * k + beta, n, t),
                                     e + f - k);
            sets.tail.emplace_back(ipow(p, k - 1), std::move(red));
        }
    }
    return sets;
}

inline std::complex<double> sp_direct_from_sets(const SpOracleSets& sets,
                                                const PrimeLocalChar& chi) {
    std::complex<double> s{0.0, 0.0};
    for (i64 xi : sets.head) s += chi.eval(xi);
    if (sets.use_head2)
        for (i64 xi : sets.head2) s += chi.eval(xi);
    std::complex<double> tail{0.0, 0.0};
    for (const auto& [w, res] : sets.tail) {
        std::complex<double> block{0.0, 0.0};
        for (i64 xi : res) block += chi.eval(xi);
        tail += static_cast<double>(w) * block;
    }
    return s + static_cast<double>(sets.cross_coeff) * tail;
}

// Literal evaluation of eq. (e:boldSp_0). chi is the local character mod p^e,
// e >= 1; t^2 - 4n must not be a square.
inline std::complex<double> S_p_direct(const PrimeLocalChar& chi, i64 t, int n) {
    return sp_direct_from_sets(sp_oracle_sets(chi.p, chi.e, t, n), chi);
}

// Verifies the enumerated set against the parametrized description of
// Lemma 2.5 (double-root branch with the omega shift, split branch, empty).
inline bool omega_closedform_check(i64 p, int alpha, int n, i64 t) {
    auto scan = omega_enumerate(p, alpha, n, t);
    i64 D = t * t - 4 * n;
    if (D == 0 || is_square(D)) return true;  // lemma assumes nonsquare
    auto S = split_fundamental(D);
    i64 m = ipow(p, alpha);
    int g = valuation(D, p);
    int od = valuation(S.d, p);
    int fl = valuation(S.ell, p);

    std::vector<i64> param;
    auto add_class = [&](i64 x0, i64 step) {
        for (i64 u = mod_floor(x0, step); u < m; u += step) param.push_back(u);
    };
    if (g >= alpha + std::max(od - 1, 0)) {
        int ce = (alpha + 1) / 2;  // ceil(alpha/2)
        int omega = 0;
        if (p == 2) {
            if ((alpha == g - 1 && mod_floor(S.d, 8) != 0) ||
                (alpha == g && S.d % 2 != 0))
                omega = 1;
        } else if (mod_floor(t, 2) != 0) {
            omega = 1;
        }
        i64 step = ipow(p, ce);
        i64 x0;  // (t + p^ce * omega) / 2, in Z_p
        if (p == 2) {
            x0 = mod_floor(t / 2 + (omega ? step / 2 : 0), m);  // t is even here
        } else {
            x0 = mulmod(mod_floor(t + step * omega, m), inv_mod(2, m), m);
        }
        add_class(x0, step);
    } else if (g < alpha && kronecker(S.d, p) == 1) {
        auto sq = sqrt_mod_4pe(S.d, p, alpha);
        if (!sq) return false;
        i64 step = ipow(p, std::max(alpha - fl, 0));
        for (int sign : {1, -1}) {
            i64 x0;
            if (p == 2) {
                i64 X = mod_floor(t + sign * *sq * S.ell, 2 * m);
                if (X % 2 != 0) return false;  // t +- sqrt(d) l is even in Z_2
                x0 = mod_floor(X / 2, m);
            } else {
                x0 = mulmod(mod_floor(t + sign * *sq % m * S.ell, m), inv_mod(2, m), m);
            }
            add_class(x0, step);
        }
    }
    std::sort(param.begin(), param.end());
    param.erase(std::unique(param.begin(), param.end()), param.end());
    return param == scan.residues;
}

}  // namespace twistmin
