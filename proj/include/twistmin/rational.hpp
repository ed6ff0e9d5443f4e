#pragma once

// Minimal exact rational on 64-bit integers. The local case tables of the
// trace formula only ever produce small numbers (p <= 13, e <= 6), so no
// overflow guards beyond normalization are needed.

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace twistmin {

struct Rat {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rat() = default;
    Rat(std::int64_t n) : num(n), den(1) {}
    Rat(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rat operator+(Rat a, Rat b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rat operator-(Rat a, Rat b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rat operator*(Rat a, Rat b) { return Rat(a.num * b.num, a.den * b.den); }
    friend Rat operator/(Rat a, Rat b) { return Rat(a.num * b.den, a.den * b.num); }
    friend Rat operator-(Rat a) { return Rat(-a.num, a.den); }
    friend bool operator==(Rat a, Rat b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(Rat a, Rat b) { return !(a == b); }
    friend std::ostream& operator<<(std::ostream& os, Rat r) {
        os << r.num;
        if (r.den != 1) os << '/' << r.den;
        return os;
    }
};

}  // namespace twistmin
