#pragma once

// The Moebius newform sieve and twist-minimal sieve as lifts of arbitrary
// local-factor functions, the S'_chi pair enumeration with its signs and
// 2^{-k} weights, and the verification suite for the sieved closed forms.

#include <complex>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "twistmin/chars.hpp"
#include "twistmin/localdata.hpp"
#include "twistmin/rational.hpp"

namespace twistmin {

// beta: the multiplicative function with Dirichlet series 1/zeta(s)^2.
inline i64 beta_pp(int j) { return j == 0 || j == 2 ? 1 : (j == 1 ? -2 : 0); }

inline i64 beta(i64 m) {
    i64 v = 1;
    for (auto [p, e] : factorize(m)) v *= beta_pp(e);
    return v;
}

// A local factor: any function of a local character (the modulus exponent
// and conductor are read off the character itself). Must accept e = 0
// (the trivial character mod 1).
using LocalFactorFn = std::function<std::complex<double>(const PrimeLocalChar&)>;

// f^new(p^e, chi_p) = sum_{j=0}^{e-s} beta(p^j) f(p^{e-j}, chi_p).
inline std::complex<double> lift_new(const LocalFactorFn& f, const PrimeLocalChar& chi) {
    int e = chi.e, s = chi.conductor_exponent();
    auto prim = chi.primitive();
    std::complex<double> v{0.0, 0.0};
    for (int j = 0; j <= std::min(e - s, 2); ++j)
        v += static_cast<double>(beta_pp(j)) * f(prim.induce(e - j));
    return v;
}

// f^min(p^e, chi_p) per eq. (e:fmin_odd) for odd p and (e:fmin_p=2) for
// p = 2. chi_p must be minimal. n in {+-1} enters through psi(n).
inline std::complex<double> lift_min(const LocalFactorFn& f, const PrimeLocalChar& chi,
                                     int n) {
    if (!is_minimal(chi)) throw std::domain_error("lift_min: non-minimal local character");
    i64 p = chi.p;
    int e = chi.e, s = chi.conductor_exponent();
    std::complex<double> v = lift_new(f, chi);
    if (p == 2) return v;
    if (e == 2 && s == 0) {
        auto f_new_1 = lift_new(f, PrimeLocalChar::trivial(p, 0));
        auto f_new_p = lift_new(f, PrimeLocalChar::trivial(p, 1));
        v -= static_cast<double>(kronecker(n, p)) * (f_new_1 + 0.5 * f_new_p);
    }
    if (e % 2 == 0 && s <= 1) {
        auto prim = chi.primitive();
        std::complex<double> corr{0.0, 0.0};
        for (const auto& psi : enumerate_local_chars(p, e / 2)) {
            if (psi.conductor_exponent() != e / 2) continue;
            if (psi == prim.conj().induce(e / 2) && prim.e == e / 2) continue;
            // exclusion psi != conj(chi_p): compare as primitive characters
            if (prim.e == psi.conductor_exponent() && psi.primitive() == prim.conj())
                continue;
            PrimeLocalChar twisted = prim.induce(e / 2) * psi * psi;
            double psin = n == 1 ? 1.0 : static_cast<double>(psi.parity());
            corr += psin * lift_new(f, twisted);
        }
        v -= 0.5 * corr;
    }
    return v;
}

// One element of S'_chi: level M, primitive psi, and the sign/weight data.
struct SievePair {
    i64 M = 1;
    DirichletChar psi;          // primitive, modulus = conductor
    int k_prime = 0;            // #{p : M_p < N_p}
    int k = 0;                  // #{p : M_p < N_p and [s_p = 1 or psi_p != (./p)]}
    DirichletChar chi_twisted;  // chi psi^2 restricted to modulus M
};

// Enumerate S'_chi per the (PAIRS1)/(PAIRS2) classification. chi must be
// minimal. The weight of a pair is (-1)^{k'} 2^{-k} psi(n).
inline std::vector<SievePair> enumerate_sieve_pairs(const DirichletChar& chi) {
    if (!is_minimal(chi)) throw std::domain_error("enumerate_sieve_pairs: chi not minimal");
    struct LocalChoice {
        i64 Mp;                  // p-part of M
        PrimeLocalChar psi_p;    // primitive local psi (modulus = conductor)
        bool counts_k = false;   // contributes to k
        bool lower = false;      // M_p < N_p
    };
    std::vector<std::vector<LocalChoice>> menu;
    for (const auto& lc : chi.locals) {
        i64 p = lc.p;
        int e = lc.e, s = lc.conductor_exponent();
        std::vector<LocalChoice> options;
        options.push_back({ipow(p, e), PrimeLocalChar::trivial(p, 0), false, false});
        if (p > 2 && e >= 2 && e % 2 == 0 && s <= 1) {
            if (e >= 4 || s == 1) {
                // (PAIRS1): <p^{e/2}, psi>, cond(psi) = p^{e/2}, psi != conj(chi_p)
                auto prim = lc.primitive();
                for (const auto& psi : enumerate_local_chars(p, e / 2)) {
                    if (psi.conductor_exponent() != e / 2) continue;
                    if (prim.e == e / 2 && psi == prim.conj()) continue;
                    bool counts = (s == 1) || psi.order() != 2;
                    options.push_back({ipow(p, e / 2), psi, counts, true});
                }
            } else {
                // (PAIRS2): e = 2, s = 0: <p, psi> for cond(psi) = p, and <1, (./p)>
                for (const auto& psi : enumerate_local_chars(p, 1)) {
                    if (psi.conductor_exponent() != 1) continue;
                    bool legendre = psi.order() == 2;
                    options.push_back({p, psi, !legendre, true});
                }
                PrimeLocalChar leg;
                leg.p = p;
                leg.e = 1;
                leg.k = {euler_phi(p) / 2};
                options.push_back({1, leg, false, true});
            }
        }
        menu.push_back(std::move(options));
    }
    std::vector<SievePair> out;
    std::vector<size_t> idx(menu.size(), 0);
    while (true) {
        SievePair pair;
        pair.M = 1;
        DirichletChar psi;
        psi.N = 1;
        for (size_t i = 0; i < menu.size(); ++i) {
            const auto& ch = menu[i][idx[i]];
            pair.M *= ch.Mp;
            if (ch.lower) ++pair.k_prime;
            if (ch.counts_k) ++pair.k;
            if (ch.psi_p.e > 0 && !ch.psi_p.is_trivial()) {
                DirichletChar lift;
                lift.N = ch.psi_p.modulus();
                lift.locals.push_back(ch.psi_p);
                psi = mul(psi, lift);
            }
        }
        pair.psi = primitive_part(psi);
        DirichletChar tw = mul(chi, mul(pair.psi, pair.psi));
        pair.chi_twisted = induce(tw, pair.M);
        out.push_back(std::move(pair));
        // advance mixed-radix counter
        size_t i = 0;
        while (i < menu.size() && ++idx[i] == menu[i].size()) idx[i++] = 0;
        if (i == menu.size()) break;
        if (menu.empty()) break;
    }
    if (menu.empty()) {
        // N = 1: the loop above already emitted the single empty pair
    }
    return out;
}

// m_chi: #{psi mod N : psi(-1) = 1, psi^2 = 1, cond(psi) cond(chi psi) | N}.
inline i64 m_chi(const DirichletChar& chi, i64 N) {
    i64 count = 0;
    for (const auto& psi : enumerate_chars(N)) {
        if (psi.order() > 2 || !psi.is_even()) continue;
        if (N % (psi.conductor() * mul(chi, psi).conductor()) == 0) ++count;
    }
    return count;
}

// ------------------------------------------------------------------------
// Sieved-lemma verification suite: checks the twist-minimal closed forms of
// the paper against lift_min of the plain local factors.
// ------------------------------------------------------------------------

struct SieveReport {
    bool ok = true;
    std::vector<std::string> failures;
    i64 checks = 0;

    void expect(bool cond, const std::string& what) {
        ++checks;
        if (!cond) {
            ok = false;
            failures.push_back(what);
        }
    }
};

inline bool sieve_close(std::complex<double> a, std::complex<double> b, double tol = 1e-10) {
    return std::abs(a - b) <= tol * (1.0 + std::abs(b));
}

// Runs the full suite over p <= pmax, e <= emax(p), all minimal chi mod p^e,
// n = +-1, m <= mmax.
inline SieveReport sieved_lemma_suite(i64 pmax = 13, int emax = 4, int emax2 = 6,
                                      i64 mmax = 50) {
    SieveReport rep;
    auto tuple_str = [](i64 p, int e, const PrimeLocalChar& chi, const char* which,
                        i64 extra = 0) {
        std::ostringstream os;
        os << which << " p=" << p << " e=" << e << " chi=[";
        for (i64 k : chi.k) os << k << ",";
        os << "] aux=" << extra;
        return os.str();
    };
    for (i64 p : {2, 3, 5, 7, 11, 13}) {
        if (p > pmax) break;
        int etop = p == 2 ? emax2 : emax;
        for (int e = 1; e <= etop; ++e) {
            for (const auto& chi : enumerate_local_chars(p, e)) {
                if (!is_minimal(chi)) continue;
                int s = chi.conductor_exponent();
                LocalContext ctx{p, e, s, chi};

                // Lemma 4.1: Psi_1^min = 2 delta_{e=s}   (n = 1)
                LocalFactorFn f_psi1 = [](const PrimeLocalChar& c) {
                    return std::complex<double>(
                        psi1(c.p, c.e, c.conductor_exponent()).to_double(), 0.0);
                };
                auto v1 = lift_min(f_psi1, chi, 1);
                rep.expect(sieve_close(v1, {e == s ? 2.0 : 0.0, 0.0}), tuple_str(p, e, chi, "Psi1min"));

                // Lemma 4.2: Psi_2^min = 0 (with the even-projector factor)
                LocalFactorFn f_psi2 = [](const PrimeLocalChar& c) {
                    LocalContext cc = LocalContext::of(c);
                    return std::complex<double>(psi2_chi(cc).to_double(), 0.0);
                };
                auto v2 = lift_min(f_psi2, chi, 1);
                rep.expect(sieve_close(v2, {0.0, 0.0}), tuple_str(p, e, chi, "Psi2min"));

                // Lemma 4.3: tilde Psi_2^min = 0   (n = -1)
                LocalFactorFn f_tpsi2 = [](const PrimeLocalChar& c) {
                    LocalContext cc = LocalContext::of(c);
                    return tilde_psi2(cc);
                };
                auto v3 = lift_min(f_tpsi2, chi, -1);
                rep.expect(sieve_close(v3, {0.0, 0.0}), tuple_str(p, e, chi, "tPsi2min"));

                // Lemma 4.4: Psi_3^min tables   (n = 1)
                LocalFactorFn f_psi3 = [](const PrimeLocalChar& c) {
                    return std::complex<double>(
                        psi3(c.p, c.e, c.conductor_exponent()).to_double(), 0.0);
                };
                auto v4 = lift_min(f_psi3, chi, 1);
                double want3;
                if (p > 2) {
                    if (e == s) want3 = 4.0 * e - 1.0;
                    else if (e == 1 && s == 0) want3 = 2.0;
                    else if (e == 2) want3 = 0.5 * (p - 1 + 2 * s);
                    else want3 = ipow(p, (e - 3) / 2) * (p - 1) *
                                 ((e % 2 == 0 ? p : 3.0) + 1.0) / 2.0;
                } else {
                    if (e == s) want3 = 4.0 * e - 1.0;
                    else if ((e == 1 || e == 3) && s == 0) want3 = 2.0;
                    else if (e == 2 && s == 0) want3 = 1.0;
                    else if (e == 2 * s && e >= 4) want3 = 3.0 * ipow(2, e / 2 - 2);
                    else want3 = ipow(2, (e - 1) / 2);  // e >= 5 odd, s in {0,2,(e-1)/2}
                }
                rep.expect(sieve_close(v4, {want3, 0.0}), tuple_str(p, e, chi, "Psi3min"));

                // eq. (e:Phi_min): Phi_n^min(p^e, chi; m) = Phi_{m,n}(chi)
                for (int n : {1, -1}) {
                    int sign = n;
                    for (i64 m = 2; m <= mmax; ++m) {
                        if (von_mangoldt(m) == 0.0) continue;  // prime powers only
                        LocalFactorFn f_phi = [m, sign](const PrimeLocalChar& c) {
                            LocalContext cc = LocalContext::of(c);
                            return phi_pm_chi(cc, m, sign);
                        };
                        auto vphi = lift_min(f_phi, chi, n);
                        auto want = phi_mn_local(ctx, m, n);
                        rep.expect(sieve_close(vphi, want, 1e-10),
                                   tuple_str(p, e, chi, n == 1 ? "Phi+min" : "Phi-min", m));
                    }
                }

                // Lemma 4.5: tilde Omega_j^min   (n = -1)
                for (int j : {1, 2}) {
                    LocalFactorFn f_om = [j](const PrimeLocalChar& c) {
                        LocalContext cc = LocalContext::of(c);
                        return std::complex<double>(tilde_omega(j, cc).to_double(), 0.0);
                    };
                    auto vom = lift_min(f_om, chi, -1);
                    double want;
                    if (p > 2) {
                        want = (e == s && s >= 1) ? 1.0 + chi.parity() : 0.0;
                    } else if (j == 1) {
                        want = (e == s && s >= 2) ? 1.0 + chi.parity() : 0.0;
                    } else {
                        if (e == s && s >= 3 && chi.parity() == 1) want = -2.0 * e;
                        else if (e == 1 && s == 0) want = -1.5;
                        else if ((e == 2 || e == 3) && s == 0) want = -0.5;
                        else if (e == s && s == 2) want = 0.0;  // chi_{-4}: odd, killed
                        else want = 0.0;
                    }
                    rep.expect(sieve_close(vom, {want, 0.0}),
                               tuple_str(p, e, chi, j == 1 ? "tOmega1min" : "tOmega2min"));
                }
            }
        }
    }
    return rep;
}

}  // namespace twistmin
