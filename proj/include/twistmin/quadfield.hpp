#pragma once

// Discriminant arithmetic: fundamental splitting D = d*l^2, the character
// psi_D, L(1, psi_D) via exact finite character sums, form class numbers,
// and fundamental units of real quadratic orders via the continued-fraction
// cycle of the principal form. A JSON-lines cache persists ClassData.

#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>

#include "twistmin/arith.hpp"

namespace twistmin {

struct Discriminant {
    i64 D = 0;    // D = 0 or 1 mod 4, nonzero
    i64 d = 0;    // fundamental discriminant (or 1 when D is a square)
    i64 ell = 1;  // D = d * ell^2
};

inline bool is_fundamental_discriminant(i64 d) {
    if (d == 1) return true;
    if (mod_floor(d, 4) == 1) {
        for (auto [p, e] : factorize(d))
            if (e > 1) return false;
        return true;
    }
    if (mod_floor(d, 4) == 0) {
        i64 m = d / 4;
        for (auto [p, e] : factorize(m))
            if (e > 1) return false;
        return mod_floor(m, 4) != 1;
    }
    return false;
}

inline Discriminant split_fundamental(i64 D) {
    if (D == 0 || (mod_floor(D, 4) != 0 && mod_floor(D, 4) != 1))
        throw std::domain_error("split_fundamental: D must be nonzero and 0 or 1 mod 4");
    // D = m * f^2 with m squarefree.
    i64 m = D < 0 ? -1 : 1, f = 1;
    for (auto [p, e] : factorize(D)) {
        f *= ipow(p, e / 2);
        if (e % 2) m *= p;
    }
    Discriminant out;
    out.D = D;
    if (mod_floor(m, 4) == 1) {
        out.d = m;
        out.ell = f;
    } else {
        out.d = 4 * m;
        out.ell = f / 2;  // f is even here, since D = 0 or 1 mod 4
    }
    return out;
}

// psi_D(n) = kronecker(d, n / gcd(n, ell)).
inline int psi_D(const Discriminant& D, i64 n) {
    i64 g = std::gcd(n < 0 ? -n : n, D.ell);
    if (g == 0) g = D.ell;
    return kronecker(D.d, n / g);
}

// L(1, psi_d) for a fundamental discriminant d != 1, by the exact finite
// character-sum closed forms (log-sine for even psi_d, weighted residues for
// odd psi_d). Conventions pinned against the truncated-series oracle.
inline double L1_fundamental(i64 d) {
    if (d == 1) throw std::domain_error("L1_fundamental: pole at d = 1");
    if (!is_fundamental_discriminant(d))
        throw std::domain_error("L1_fundamental: d not fundamental");
    i64 q = d > 0 ? d : -d;
    if (d > 0) {
        double s = 0.0;
        for (i64 a = 1; a < q; ++a) {
            int c = kronecker(d, a);
            if (c != 0) s += c * std::log(2.0 * std::sin(M_PI * a / q));
        }
        return -s / std::sqrt(static_cast<double>(q));
    }
    double s = 0.0;
    for (i64 a = 1; a < q; ++a) s += kronecker(d, a) * static_cast<double>(a);
    return -M_PI * s / (static_cast<double>(q) * std::sqrt(static_cast<double>(q)));
}

// L(1, psi_D) by the Euler-product correction over primes dividing ell.
inline double L1_psiD(const Discriminant& D) {
    if (D.d == 1) throw std::domain_error("L1_psiD: square D has a pole at z = 1");
    double v = L1_fundamental(D.d) / static_cast<double>(D.ell);
    for (auto [p, e] : factorize(D.ell)) {
        double geo = (std::pow(static_cast<double>(p), e) - 1.0) / (p - 1.0);
        v *= 1.0 + (p - kronecker(D.d, p)) * geo;
    }
    return v;
}

// Form class number. d < 0: primitive reduced positive-definite forms
// |b| <= a <= c (b >= 0 when |b| = a or a = c). d > 0: number of cycles of
// primitive reduced indefinite forms under rho-reduction.
inline i64 form_class_number(i64 d) {
    if (d == 0 || mod_floor(d, 4) > 1) throw std::domain_error("form_class_number: not a discriminant");
    if (d < 0) {
        i64 count = 0;
        for (i64 b = mod_floor(d, 2); 3 * b * b <= -d; b += 2) {
            i64 ac4 = b * b - d;  // = 4ac
            for (i64 a = std::max<i64>(b, 1); 4 * a * a <= ac4; ++a) {
                if (ac4 % (4 * a) != 0) continue;
                i64 c = ac4 / (4 * a);
                if (std::gcd(a, std::gcd(b, c)) != 1) continue;
                count += (b == 0 || b == a || a == c) ? 1 : 2;  // +-b distinct unless boundary
            }
        }
        return count;
    }
    if (is_square(d)) throw std::domain_error("form_class_number: square discriminant");
    // d > 0: collect reduced forms, then count rho-cycles.
    i64 r = isqrt(d);
    struct Form {
        i64 a, b, c;
        bool operator<(const Form& o) const {
            return std::tie(a, b, c) < std::tie(o.a, o.b, o.c);
        }
    };
    // Reduced iff 0 < b < sqrt(d) and sqrt(d) - b < 2|a| < sqrt(d) + b.
    // d is nonsquare, so the comparisons with sqrt(d) are never ties.
    auto reduced_exact = [&](i64 a, i64 b) {
        if (b <= 0 || b * b >= d) return false;
        i64 A = 2 * (a < 0 ? -a : a);
        if ((A + b) * (A + b) < d) return false;        // 2|a| > sqrt(d) - b
        if (A > b && (A - b) * (A - b) > d) return false;  // 2|a| < sqrt(d) + b
        return true;
    };
    std::map<Form, bool> forms;  // form -> visited
    for (i64 b = 1; b <= r; ++b) {
        if (mod_floor(b - d, 2) != 0) continue;
        for (i64 a = -(r + b) / 2 - 1; 2 * a <= r + b + 2; ++a) {
            if (a == 0 || !reduced_exact(a, b)) continue;
            i64 num = b * b - d;
            if (num % (4 * a) != 0) continue;
            i64 c = num / (4 * a);
            if (std::gcd(a, std::gcd(b < 0 ? -b : b, c < 0 ? -c : c)) != 1) continue;
            forms[{a, b, c}] = false;
        }
    }
    auto rho = [&](Form F) {
        // (a,b,c) -> (c, b', (b'^2-d)/(4c)) with b' = -b mod 2|c|, the unique
        // representative in [r - 2|c| + 1, r] (the reduced window).
        i64 c = F.c;
        i64 twoc = 2 * (c < 0 ? -c : c);
        i64 lo = r - twoc + 1;
        i64 b1 = lo + mod_floor(-F.b - lo, twoc);
        i64 c1 = (b1 * b1 - d) / (4 * c);
        return Form{c, b1, c1};
    };
    i64 cycles = 0;
    for (auto& [f0, seen0] : forms) {
        if (seen0) continue;
        ++cycles;
        Form f = f0;
        while (true) {
            auto it = forms.find(f);
            if (it == forms.end()) throw std::logic_error("form_class_number: rho left the reduced set");
            if (it->second) break;
            it->second = true;
            f = rho(f);
        }
    }
    return cycles;
}

// Fundamental totally-positive unit of the order of discriminant d > 0:
// the minimal (t0, u0) with t0^2 - d*u0^2 = 4, via the continued-fraction
// cycle of (b0 + sqrt(d))/2. Returns exact (t0, u0) when they fit in 64 bits
// (unit_exact), and log eps1 always.
struct FundamentalUnit {
    i64 t0 = 0, u0 = 0;  // valid iff exact
    bool exact = false;
    double log_eps1 = 0.0;
};

inline FundamentalUnit fundamental_unit(i64 d) {
    if (d <= 0 || is_square(d) || mod_floor(d, 4) > 1)
        throw std::domain_error("fundamental_unit: need positive nonsquare discriminant");
    double sd = std::sqrt(static_cast<double>(d));
    i64 P = mod_floor(d, 2), Q = 2;
    // Iterate to the cycle.
    std::map<std::pair<i64, i64>, int> seen;
    std::vector<std::pair<i64, i64>> states;
    int cycle_start = -1;
    while (true) {
        auto key = std::make_pair(P, Q);
        auto it = seen.find(key);
        if (it != seen.end()) { cycle_start = it->second; break; }
        seen[key] = static_cast<int>(states.size());
        states.push_back(key);
        i64 a = static_cast<i64>(std::floor((P + sd) / Q));
        // exact floor: a is the largest integer with a*Q - P <= floor(sqrt(d))
        i64 rt = isqrt(d);
        while ((a + 1) * Q - P <= rt) ++a;
        while (a * Q - P > rt) --a;
        i64 P1 = a * Q - P;
        i64 Q1 = (d - P1 * P1) / Q;
        P = P1;
        Q = Q1;
    }
    // Product of complete quotients (P_k + sqrt(d))/Q_k over the cycle is the
    // fundamental automorph eps; its norm is (-1)^(cycle length).
    std::size_t len = states.size() - cycle_start;
    double log_eps = 0.0;
    i128 A = 2, B = 0, denom = 2;  // running product as (A + B sqrt(d)) / denom, start = 1
    bool exact = true;
    for (std::size_t i = cycle_start; i < states.size(); ++i) {
        auto [Pk, Qk] = states[i];
        log_eps += std::log((Pk + sd) / Qk);
        if (exact) {
            i128 A1 = A * Pk + B * d;
            i128 B1 = A * 1 + B * Pk;
            i128 dn = denom * Qk;
            // keep reduced by gcd 2 steps to delay overflow
            while (A1 % 2 == 0 && B1 % 2 == 0 && dn % 2 == 0) { A1 /= 2; B1 /= 2; dn /= 2; }
            constexpr i128 LIM = static_cast<i128>(1) << 100;
            if (A1 > LIM || B1 > LIM || dn > LIM) {
                exact = false;
            } else {
                A = A1; B = B1; denom = dn;
            }
        }
    }
    FundamentalUnit out;
    if (len % 2 == 1) {  // norm -1: square it
        out.log_eps1 = 2.0 * log_eps;
        constexpr i128 SQ_LIM = static_cast<i128>(1) << 50;
        if (exact && A < SQ_LIM && B < SQ_LIM && denom < SQ_LIM) {
            i128 A2 = A * A + B * B * d, B2 = 2 * A * B, dn2 = denom * denom;
            A = A2; B = B2; denom = dn2;
        } else {
            exact = false;
        }
    } else {
        out.log_eps1 = log_eps;
    }
    if (exact) {
        // eps1 = (A + B sqrt(d)) / denom with denom | 2A, 2B exactly.
        i128 t2 = 2 * A, u2 = 2 * B;
        if (t2 % denom == 0 && u2 % denom == 0) {
            i128 t = t2 / denom, u = u2 / denom;
            constexpr i128 FIT = static_cast<i128>(1) << 62;
            if (t < FIT && u < FIT && t * t - static_cast<i128>(d) * u * u == 4) {
                out.t0 = static_cast<i64>(t);
                out.u0 = static_cast<i64>(u);
                out.exact = true;
                out.log_eps1 = std::log((static_cast<double>(out.t0) +
                                         static_cast<double>(out.u0) * sd) / 2.0);
            }
        }
    }
    return out;
}

struct ClassData {
    i64 d = 0;
    i64 h = 0;
    i64 t0 = 0, u0 = 0;     // 0 when not representable exactly (d > 0 only)
    double log_eps1 = 0.0;  // d > 0 only
    double L1 = 0.0;        // L(1, psi_d)
};

// Lazily-populated cache of ClassData keyed by fundamental discriminant,
// with optional JSON-lines persistence. Concurrent reads, serialized writes.
class ClassDataCache {
  public:
    explicit ClassDataCache(i64 bound = 2'000'000) : bound_(bound) {}

    void set_file(const std::string& path) {
        std::lock_guard<std::mutex> lock(mu_);
        path_ = path;
        load_locked();
    }

    i64 bound() const { return bound_; }
    void set_bound(i64 b) { bound_ = b; }

    ClassData get(i64 d) {
        if (d == 1 || !is_fundamental_discriminant(d))
            throw std::domain_error("ClassDataCache: d must be fundamental, != 1");
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = map_.find(d);
            if (it != map_.end()) return it->second;
        }
        if (std::abs(d) > bound_)
            throw std::domain_error(
                "ClassDataCache: |d| exceeds the configured cache bound; extend the cache "
                "bound (cache --bound) to proceed");
        ClassData cd;
        cd.d = d;
        cd.h = form_class_number(d);
        cd.L1 = L1_fundamental(d);
        if (d > 0) {
            auto fu = fundamental_unit(d);
            cd.t0 = fu.exact ? fu.t0 : 0;
            cd.u0 = fu.exact ? fu.u0 : 0;
            cd.log_eps1 = fu.log_eps1;
        }
        std::lock_guard<std::mutex> lock(mu_);
        auto [it, inserted] = map_.emplace(d, cd);
        if (inserted && !path_.empty()) append_locked(cd);
        return it->second;
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return map_.size();
    }

  private:
    void load_locked() {
        std::ifstream in(path_);
        if (!in) return;
        std::string line;
        while (std::getline(in, line)) {
            ClassData cd;
            if (parse_line(line, &cd)) map_[cd.d] = cd;
        }
    }

    static bool parse_line(const std::string& line, ClassData* cd) {
        auto grab = [&](const char* key, double* out) {
            auto pos = line.find(std::string("\"") + key + "\":");
            if (pos == std::string::npos) return false;
            *out = std::strtod(line.c_str() + pos + std::strlen(key) + 3, nullptr);
            return true;
        };
        double d, h, t0, u0, le = 0, L1;
        if (!grab("d", &d) || !grab("h", &h) || !grab("t0", &t0) || !grab("u0", &u0) ||
            !grab("L1", &L1))
            return false;
        grab("log_eps1", &le);
        cd->d = static_cast<i64>(d);
        cd->h = static_cast<i64>(h);
        cd->t0 = static_cast<i64>(t0);
        cd->u0 = static_cast<i64>(u0);
        cd->log_eps1 = le;
        cd->L1 = L1;
        return true;
    }

    void append_locked(const ClassData& cd) {
        std::ofstream out(path_, std::ios::app);
        if (!out) return;
        std::ostringstream os;
        os.precision(17);
        os << "{\"d\":" << cd.d << ",\"h\":" << cd.h << ",\"t0\":" << cd.t0
           << ",\"u0\":" << cd.u0 << ",\"log_eps1\":" << cd.log_eps1
           << ",\"L1\":" << cd.L1 << "}";
        out << os.str() << "\n";
    }

    mutable std::mutex mu_;
    std::map<i64, ClassData> map_;
    std::string path_;
    i64 bound_;
};

}  // namespace twistmin
