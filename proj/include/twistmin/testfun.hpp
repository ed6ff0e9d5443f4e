#pragma once

// The numerical test-function family
//   h(r) = (sinc^2(delta r/2) sum_j x_j cos(j delta r))^2,
// whose Fourier transform g is an exact piecewise cubic on the grid delta*Z:
// g = sum_m gamma_m Q((u - m delta)/delta) with Q the convolution of two
// unit triangles. All g-side integral transforms of the trace formula are
// computed here: exact piecewise evaluation, closed-form \int u^k log u
// pieces, Molin quadrature against analytic kernels, and digamma integrals
// on the h-side.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "twistmin/quadrature.hpp"

namespace twistmin {

using cdouble = std::complex<double>;

namespace poly {

inline double eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (size_t j = c.size(); j-- > 0;) v = v * x + c[j];
    return v;
}

inline cdouble eval(const std::vector<double>& c, cdouble x) {
    cdouble v{0.0, 0.0};
    for (size_t j = c.size(); j-- > 0;) v = v * x + c[j];
    return v;
}

inline std::vector<double> derivative(const std::vector<double>& c) {
    std::vector<double> d;
    for (size_t j = 1; j < c.size(); ++j) d.push_back(j * c[j]);
    if (d.empty()) d.push_back(0.0);
    return d;
}

inline double integral01(const std::vector<double>& c) {
    double v = 0.0;
    for (size_t j = 0; j < c.size(); ++j) v += c[j] / (j + 1);
    return v;
}

}  // namespace poly

// Even or odd piecewise polynomial on the grid delta*Z, stored for u >= 0 in
// the local variable x = (u - k delta)/delta of each piece [k delta,(k+1)delta].
struct PiecewisePoly {
    double delta = 1.0;
    int parity = 1;  // +1 even, -1 odd
    std::vector<std::vector<double>> pieces;

    int K() const { return static_cast<int>(pieces.size()); }
    double support() const { return delta * K(); }

    double eval(double u) const {
        double sign = 1.0;
        if (u < 0) {
            u = -u;
            sign = parity;
        }
        int k = static_cast<int>(std::floor(u / delta));
        if (k >= K()) return 0.0;
        return sign * poly::eval(pieces[k], u / delta - k);
    }

    PiecewisePoly derivative() const {
        PiecewisePoly d;
        d.delta = delta;
        d.parity = -parity;
        for (const auto& c : pieces) {
            auto dc = poly::derivative(c);
            for (auto& v : dc) v /= delta;
            d.pieces.push_back(std::move(dc));
        }
        return d;
    }

    // integral over the full line of the even/odd extension
    double integral() const {
        if (parity == -1) return 0.0;
        double s = 0.0;
        for (const auto& c : pieces) s += poly::integral01(c);
        return 2.0 * delta * s;
    }
};

// The fixed cubic kernel Q = B1 * B1 (unit triangles), support [-2,2]:
// Q(y) = 2/3 - y^2 + |y|^3/2 for |y| <= 1, (2-|y|)^3/6 for 1 <= |y| <= 2.
// Builds sum_m gamma_m Q((u - m delta)/delta) as a PiecewisePoly; gamma is
// indexed by |m| (must be symmetric).
inline PiecewisePoly assemble_from_bspline_weights(double delta,
                                                   const std::vector<double>& gamma_abs) {
    int G = static_cast<int>(gamma_abs.size());  // gamma_m for |m| = 0..G-1
    auto gamma = [&](int m) -> double {
        int a = m < 0 ? -m : m;
        return a < G ? gamma_abs[a] : 0.0;
    };
    PiecewisePoly g;
    g.delta = delta;
    g.parity = 1;
    int K = G + 1;  // support (G-1+2) pieces
    g.pieces.assign(K, std::vector<double>(4, 0.0));
    for (int k = 0; k < K; ++k) {
        auto& c = g.pieces[k];
        // contributions from m = k-1, k, k+1, k+2 in local x = u/delta - k
        double a0 = gamma(k - 1), a1 = gamma(k), a2 = gamma(k + 1), a3 = gamma(k + 2);
        // (1-x)^3/6
        c[0] += a0 / 6.0; c[1] += -a0 / 2.0; c[2] += a0 / 2.0; c[3] += -a0 / 6.0;
        // 2/3 - x^2 + x^3/2
        c[0] += 2.0 * a1 / 3.0; c[2] += -a1; c[3] += a1 / 2.0;
        // 2/3 - (x-1)^2 + (1-x)^3/2
        c[0] += a2 * (2.0 / 3.0 - 1.0 + 0.5);
        c[1] += a2 * (2.0 - 1.5);
        c[2] += a2 * (-1.0 + 1.5);
        c[3] += a2 * (-0.5);
        // x^3/6
        c[3] += a3 / 6.0;
    }
    return g;
}

// g for the basis function h_i(r) = sinc^4(delta r/2) cos(i delta r).
inline PiecewisePoly basis_g(int i, double delta) {
    std::vector<double> gamma(i + 1, 0.0);
    if (i == 0) gamma[0] = 1.0 / delta;
    else gamma[i] = 0.5 / delta;
    return assemble_from_bspline_weights(delta, gamma);
}

// Test pair (g, h) for h(r) = (sinc^2(delta r/2) sum_j x_j cos(j delta r))^2.
struct TestPair {
    int M = 1;
    double delta = 1.0;
    std::vector<double> coeffs;  // x_0..x_{M-1}
    PiecewisePoly g;

    double X() const { return 2.0 * M * delta; }

    static double sinc(double r) { return r == 0.0 ? 1.0 : std::sin(r) / r; }

    // h on the real axis
    double h(double r) const {
        double s = 0.0;
        for (int j = 0; j < M; ++j) s += coeffs[j] * std::cos(j * delta * r);
        double f = sinc(delta * r / 2.0);
        double v = f * f * s;
        return v * v;
    }

    // h on the imaginary axis: h(iy), real and >= 0
    double h_imag(double y) const {
        double a = delta * y / 2.0;
        double f = a == 0.0 ? 1.0 : std::sinh(a) / a;
        double s = 0.0;
        for (int j = 0; j < M; ++j) s += coeffs[j] * std::cosh(j * delta * y);
        double v = f * f * s;
        return v * v;
    }

    double h0() const {
        double s = 0.0;
        for (double x : coeffs) s += x;
        return s * s;
    }
};

inline TestPair build_test_pair(double delta, const std::vector<double>& x) {
    TestPair tp;
    tp.M = static_cast<int>(x.size());
    tp.delta = delta;
    tp.coeffs = x;
    // Nodal weights of the linear-spline transform G: w_0 = x_0, w_{+-j} = x_j/2.
    // gamma_m = (1/delta) sum_{a+b=m} w_a w_b, |a|,|b| <= M-1.
    int Mm = tp.M - 1;
    auto w = [&](int j) -> double {
        int a = j < 0 ? -j : j;
        if (a > Mm) return 0.0;
        return a == 0 ? x[0] : x[a] / 2.0;
    };
    std::vector<double> gamma(2 * Mm + 1, 0.0);
    for (int m = 0; m <= 2 * Mm; ++m) {
        double s = 0.0;
        for (int a = -Mm; a <= Mm; ++a) s += w(a) * w(m - a);
        gamma[m] = s / delta;
    }
    tp.g = assemble_from_bspline_weights(delta, gamma);
    return tp;
}

// --------------------------------------------------------------------------
// Kernel integrals. Each integral is computed piecewise over [k d, (k+1) d];
// the polynomial factor is exact and the analytic kernel goes through Molin
// quadrature with a sampled sup bound on the |z| = 2 disk image.
// --------------------------------------------------------------------------

struct KernelIntegral {
    double value = 0.0;
    double err_bound = 0.0;
};

// integral over [a,b] of P((u - a)/delta_piece) * kernel(u) du, where kernel
// is analytic on a neighbourhood of the disk of radius (b-a) centered at the
// interval midpoint.
inline KernelIntegral integrate_piece(const std::vector<double>& c, double a, double b,
                                      const std::function<cdouble(cdouble)>& kernel,
                                      const MolinRule& rule, int sup_segments = 48) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto fz = [&](cdouble z) -> cdouble {
        cdouble u = mid + half * z;
        cdouble x = (u - a) / (b - a);
        return poly::eval(c, x) * kernel(u);
    };
    double sup = sup_on_circle(fz, sup_segments);
    auto fr = [&](double t) -> double {
        double u = mid + half * t;
        double x = (u - a) / (b - a);
        return poly::eval(c, x) * kernel(cdouble(u, 0.0)).real();
    };
    auto q = molin_integrate(fr, sup, rule);
    return {half * q.value, half * q.err_bound};
}

// integral over [0, support] of f(u) * kernel(u) du for a stored
// piecewise polynomial (as a function on u >= 0).
inline KernelIntegral integrate_kernel(const PiecewisePoly& f,
                                       const std::function<cdouble(cdouble)>& kernel,
                                       const MolinRule& rule) {
    KernelIntegral out;
    for (int k = 0; k < f.K(); ++k) {
        auto r = integrate_piece(f.pieces[k], k * f.delta, (k + 1) * f.delta, kernel, rule);
        out.value += r.value;
        out.err_bound += r.err_bound;
    }
    return out;
}

// Exact \int_a^b P(u) log u du for a polynomial given in the local variable
// of the piece, using \int u^m log u = u^{m+1}(log u/(m+1) - 1/(m+1)^2).
inline double integrate_piece_log(const std::vector<double>& c, double a, double b,
                                  double delta) {
    // convert to global-u coefficients: x = (u - a)/delta
    size_t deg = c.size();
    std::vector<double> bcoef(deg, 0.0);
    for (size_t j = 0; j < deg; ++j) {
        // c_j * ((u - a)/delta)^j
        double binom = 1.0;
        for (size_t i = 0; i <= j; ++i) {
            // C(j, i) u^i (-a)^{j-i} / delta^j
            bcoef[i] += c[j] * binom * std::pow(-a, static_cast<double>(j - i)) /
                        std::pow(delta, static_cast<double>(j));
            binom = binom * (j - i) / (i + 1.0);
        }
    }
    auto F = [&](double u) {
        if (u == 0.0) return 0.0;
        double s = 0.0;
        for (size_t m = 0; m < bcoef.size(); ++m)
            s += bcoef[m] * std::pow(u, m + 1.0) *
                 (std::log(u) / (m + 1.0) - 1.0 / ((m + 1.0) * (m + 1.0)));
        return s;
    };
    return F(b) - F(a);
}

// \int_0^X f(u) log u du, exact antiderivative per piece.
inline double integrate_log(const PiecewisePoly& f) {
    double s = 0.0;
    for (int k = 0; k < f.K(); ++k)
        s += integrate_piece_log(f.pieces[k], k * f.delta, (k + 1) * f.delta, f.delta);
    return s;
}

// ------------------------------------------------------------- digamma --

// digamma(z) for Re z >= 1/2 (and generally away from the poles), by
// recurrence lift to |z| >= 10 and the asymptotic series; abs error ~1e-13.
inline cdouble digamma(cdouble z) {
    cdouble shift{0.0, 0.0};
    while (std::abs(z) < 10.0) {
        shift -= 1.0 / z;
        z += 1.0;
    }
    static const double B[] = {1.0 / 6,  -1.0 / 30, 1.0 / 42,    -1.0 / 30,
                               5.0 / 66, -691.0 / 2730, 7.0 / 6};
    cdouble w = 1.0 / (z * z);
    cdouble s = std::log(z) - 0.5 / z;
    cdouble wp = w;
    for (int n = 0; n < 7; ++n) {
        s -= B[n] / (2.0 * (n + 1)) * wp;
        wp *= w;
    }
    return s + shift;
}

// ------------------------------------------------- assembled transforms --

struct Transforms {
    double g0 = 0.0;            // g(0)
    double h0 = 0.0;            // h(0)
    double int_g = 0.0;         // \int_R g
    double h_i2 = 0.0;          // h(i/2) = \int_R g(u) cosh(u/2) du
    double identity_int = 0.0;  // \int_R g'(u)/sinh(u/2) du  (= -\int r h tanh(pi r))
    double log_sinh_int = 0.0;  // \int_0^inf log(sinh(u/2)) g'(u) du
    double log_tanh_int = 0.0;  // \int_0^inf log(tanh(u/4)) g'(u) du
    double err_bound = 0.0;     // accumulated Molin bounds
};

// g-side transforms only (h0 and h(i/2) are filled by the caller, which
// knows the closed form of h).
inline Transforms transforms_g(const PiecewisePoly& g, int molin_n = 40) {
    Transforms T;
    MolinRule rule(molin_n);
    auto gp = g.derivative();  // odd

    T.g0 = g.eval(0.0);
    T.int_g = g.integral();

    // identity: \int_R g'/sinh(u/2) = 2 \int_0^X [g'(u)/u] [u/sinh(u/2)] du
    {
        PiecewisePoly q = gp;  // divide piece 0 by x (g'(0) = 0)
        auto& c0 = q.pieces[0];
        // g'(u)/u on piece 0: coefficients shift down by one in x, /delta
        std::vector<double> shifted(c0.begin() + 1, c0.end());
        for (auto& v : shifted) v /= q.delta;
        if (std::fabs(c0[0]) > 1e-12)
            throw std::logic_error("transforms: g'(0) != 0");
        KernelIntegral r0 = integrate_piece(
            shifted, 0.0, q.delta,
            [](cdouble u) -> cdouble {
                cdouble w = u / 2.0;
                cdouble sh = std::sinh(w);
                if (std::abs(u) < 1e-8) return 2.0 / (1.0 + u * u / 24.0);
                return u / sh;
            },
            rule);
        KernelIntegral rest{0.0, 0.0};
        for (int k = 1; k < q.K(); ++k) {
            auto r =
                integrate_piece(q.pieces[k], k * q.delta, (k + 1) * q.delta,
                                [](cdouble u) -> cdouble { return 1.0 / std::sinh(u / 2.0); },
                                rule);
            rest.value += r.value;
            rest.err_bound += r.err_bound;
        }
        T.identity_int = 2.0 * (r0.value + rest.value);
        T.err_bound += 2.0 * (r0.err_bound + rest.err_bound);
    }

    // parabolic logs: log(sinh(u/2)) = log u + log(sinh(u/2)/u), and
    // log(tanh(u/4)) = log u + log(tanh(u/4)/u)
    {
        double base = integrate_log(gp);
        auto sinh_rem = [](cdouble u) -> cdouble {
            if (std::abs(u) < 1e-8) return std::log(cdouble(0.5, 0.0));
            return std::log(std::sinh(u / 2.0) / u);
        };
        auto tanh_rem = [](cdouble u) -> cdouble {
            if (std::abs(u) < 1e-8) return std::log(cdouble(0.25, 0.0));
            return std::log(std::tanh(u / 4.0) / u);
        };
        auto rs = integrate_kernel(gp, sinh_rem, rule);
        auto rt = integrate_kernel(gp, tanh_rem, rule);
        T.log_sinh_int = base + rs.value;
        T.log_tanh_int = base + rt.value;
        T.err_bound += rs.err_bound + rt.err_bound;
    }
    return T;
}

inline Transforms transforms(const TestPair& tp, int molin_n = 40) {
    Transforms T = transforms_g(tp.g, molin_n);
    T.h0 = tp.h0();
    T.h_i2 = tp.h_imag(0.5);
    return T;
}

// Elliptic kernel integral: sqrt(|D|)/pi \int_R g(u) cosh(u/2) /
// (4 sinh^2(u/2) + |D|) du, for D < 0.
inline KernelIntegral elliptic_integral(const PiecewisePoly& g, double absD,
                                        int molin_n = 40) {
    MolinRule rule(molin_n);
    auto kernel = [absD](cdouble u) -> cdouble {
        cdouble sh = std::sinh(u / 2.0);
        return std::cosh(u / 2.0) / (4.0 * sh * sh + absD);
    };
    auto r = integrate_kernel(g, kernel, rule);
    double scale = 2.0 * std::sqrt(absD) / M_PI;  // even integrand: 2 * [0, X]
    return {scale * r.value, scale * r.err_bound};
}

inline KernelIntegral elliptic_integral(const TestPair& tp, double absD, int molin_n = 40) {
    return elliptic_integral(tp.g, absD, molin_n);
}

// h(i/2) = \int g cosh(u/2) du via Molin (cross-check path; the assembly
// uses the closed form of h).
inline KernelIntegral cosh_half_integral(const PiecewisePoly& g, int molin_n = 40) {
    MolinRule rule(molin_n);
    auto r = integrate_kernel(
        g, [](cdouble u) -> cdouble { return std::cosh(u / 2.0); }, rule);
    return {2.0 * r.value, 2.0 * r.err_bound};
}

// h-side digamma integrals (1/2pi) \int h(r) digamma(a + ir) dr for
// a in {1/2, 1}, by composite Gauss-Legendre with an analytic tail bound.
struct DigammaIntegrals {
    double half = 0.0;  // (1/2pi) \int h(r) psi0(1/2 + ir) dr
    double one = 0.0;   // (1/2pi) \int h(r) psi0(1 + ir) dr
    double R_max = 0.0;
    double tail_bound = 0.0;
};

// Generic form: h is the (even, real) spectral test function, tail_C bounds
// |h(r)| <= tail_C / r^4, X is the frequency scale (support of g).
inline DigammaIntegrals digamma_integrals_h(const std::function<double(double)>& h,
                                            double tail_C, double X) {
    // 16-point Gauss-Legendre rule on [-1,1] (symmetric nodes +-t, weights w)
    static const double gl_t[8] = {0.09501250983763744, 0.28160355077925891,
                                   0.45801677765722739, 0.61787624440264375,
                                   0.75540440835500303, 0.86563120238783174,
                                   0.94457502307323258, 0.98940093499164993};
    static const double gl_w[8] = {0.18945061045506850, 0.18260341504492359,
                                   0.16915651939500254, 0.14959598881657673,
                                   0.12462897125553387, 0.09515851168249278,
                                   0.06225352393864789, 0.02715245941175409};
    double C = tail_C;
    // choose R_max so that C (log R + 6) / (3 pi R^3) < 1e-11 * (1 + C)
    double R = 50.0;
    auto tail = [&](double Rm) { return C * (std::log(Rm) + 6.0) / (3.0 * M_PI * Rm * Rm * Rm); };
    while (tail(R) > 1e-11 * (1.0 + C) && R < 1e7) R *= 1.5;

    DigammaIntegrals out;
    out.R_max = R;
    out.tail_bound = tail(R);
    double panel = 0.4 / std::max(1.0, X / 6.0);
    long npanels = static_cast<long>(std::ceil(R / panel));
    panel = R / npanels;
    double acc_half = 0.0, acc_one = 0.0;
    for (long i = 0; i < npanels; ++i) {
        double a = i * panel, b = a + panel;
        double mid = 0.5 * (a + b), half_len = 0.5 * (b - a);
        for (int q = 0; q < 8; ++q) {
            for (int sgn : {-1, 1}) {
                double r = mid + sgn * half_len * gl_t[q];
                double w = half_len * gl_w[q];
                double hv = h(r);
                if (hv == 0.0) continue;
                acc_half += w * hv * digamma(cdouble(0.5, r)).real();
                acc_one += w * hv * digamma(cdouble(1.0, r)).real();
            }
        }
    }
    // (1/2pi) \int_R = (1/pi) \int_0^inf by evenness of h and Re psi0
    out.half = acc_half / M_PI;
    out.one = acc_one / M_PI;
    return out;
}

inline DigammaIntegrals digamma_integrals(const TestPair& tp) {
    double C = 0.0;
    for (double x : tp.coeffs) C += std::fabs(x);
    C = C * C * std::pow(2.0 / tp.delta, 4.0);
    return digamma_integrals_h([&tp](double r) { return tp.h(r); }, C, tp.X());
}

}  // namespace twistmin
