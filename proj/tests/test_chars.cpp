#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "twistmin/chars.hpp"

using namespace twistmin;
using Catch::Approx;

namespace {

// Dumb reference evaluation: chi as an explicit value table built from a
// factor-by-factor enumeration is already what the class does, so the
// reference here is structural: complete multiplicativity and periodicity.
bool close(std::complex<double> a, std::complex<double> b, double tol = 1e-12) {
    return std::abs(a - b) <= tol;
}

}  // namespace

TEST_CASE("trivial character") {
    auto chi = DirichletChar::trivial(1);
    CHECK(close(chi.eval(7), {1.0, 0.0}));
    CHECK(chi.conductor() == 1);
    auto chi12 = DirichletChar::trivial(12);
    CHECK(chi12.conductor() == 1);
    CHECK(close(chi12.eval(5), {1.0, 0.0}));
    CHECK(close(chi12.eval(3), {0.0, 0.0}));
}

TEST_CASE("Legendre symbol mod 3") {
    auto chi = parse_char("3:legendre");
    CHECK(close(chi.eval(2), {-1.0, 0.0}));
    CHECK(close(chi.eval(4), {1.0, 0.0}));
    for (i64 n = 1; n < 50; ++n)
        CHECK(close(chi.eval(n), {static_cast<double>(kronecker(n, 3)), 0.0}));
}

TEST_CASE("any character mod 6 vanishes at 3") {
    for (const auto& chi : enumerate_chars(6)) CHECK(close(chi.eval(3), {0.0, 0.0}));
}

TEST_CASE("complete multiplicativity and periodicity") {
    for (i64 N : {5, 8, 9, 12, 16, 24, 45}) {
        for (const auto& chi : enumerate_chars(N)) {
            for (i64 n = 1; n <= 30; ++n) {
                CHECK(close(chi.eval(n + N), chi.eval(n)));
                for (i64 m = 1; m <= 12; ++m)
                    CHECK(close(chi.eval(n * m), chi.eval(n) * chi.eval(m), 1e-11));
            }
        }
    }
}

TEST_CASE("enumeration size and duplicate freedom") {
    for (i64 N : {1, 2, 3, 4, 5, 8, 9, 12, 36, 40}) {
        auto chars = enumerate_chars(N);
        CHECK(chars.size() == static_cast<size_t>(euler_phi(N)));
        for (size_t i = 0; i < chars.size(); ++i)
            for (size_t j = i + 1; j < chars.size(); ++j) CHECK_FALSE(chars[i] == chars[j]);
    }
    CHECK(enumerate_chars(1).size() == 1);
    CHECK(enumerate_primitive(2).empty());  // no character of conductor 2
    auto c5 = enumerate_chars(5);
    std::multiset<i64> orders;
    for (const auto& c : c5) orders.insert(c.order());
    CHECK(orders == std::multiset<i64>{1, 2, 4, 4});
}

TEST_CASE("conductors") {
    auto triv12 = DirichletChar::trivial(12);
    CHECK(triv12.conductor() == 1);
    // primitive quadratic char mod 8 (chi_8 = ( 8 | . )): exponents (0,1) on (-1,5)
    auto chi8 = parse_char("8:0,1");
    CHECK(chi8.conductor() == 8);
    // char mod 9 induced from Legendre mod 3
    auto leg3 = parse_char("3:legendre");
    auto ind9 = induce(leg3, 9);
    CHECK(ind9.N == 9);
    CHECK(ind9.conductor() == 3);
    for (i64 n = 1; n < 40; ++n)
        if (std::gcd(n, 9L) == 1) CHECK(close(ind9.eval(n), leg3.eval(n)));
}

TEST_CASE("induce: error when conductor does not divide") {
    auto chi8 = parse_char("8:0,1");
    REQUIRE(chi8.conductor() == 8);
    CHECK_THROWS(induce(chi8, 4));
    auto t1 = DirichletChar::trivial(1);
    auto t5 = induce(t1, 5);
    CHECK(t5.N == 5);
    CHECK(t5.conductor() == 1);
}

TEST_CASE("induce then conductor is idempotent") {
    for (i64 N : {3, 5, 8, 9, 12}) {
        for (const auto& chi : enumerate_chars(N)) {
            for (i64 mult : {2, 3, 4}) {
                auto up = induce(chi, N * mult);
                CHECK(up.conductor() == chi.conductor());
            }
        }
    }
}

TEST_CASE("is_minimal: spec cases") {
    // any primitive char is minimal
    for (const auto& chi : enumerate_primitive(7)) CHECK(is_minimal(chi));
    for (const auto& chi : enumerate_primitive(9)) CHECK(is_minimal(chi));
    for (const auto& chi : enumerate_primitive(16)) CHECK(is_minimal(chi));
    // trivial char mod p^2 (p odd)
    CHECK(is_minimal(DirichletChar::trivial(9)));
    CHECK(is_minimal(DirichletChar::trivial(25)));
    // trivial char mod 16: e=4 even > 3, s=0 not allowed
    CHECK_FALSE(is_minimal(DirichletChar::trivial(16)));
    // chi_{-4} induced mod 8: e=3, s=2 not in {0,1,3}
    auto m4 = parse_char("4:1");
    REQUIRE(m4.conductor() == 4);
    CHECK_FALSE(is_minimal(induce(m4, 8)));
}

TEST_CASE("is_minimal agrees with a direct transcription of the case table") {
    for (i64 N = 1; N <= 200; ++N) {
        for (const auto& chi : enumerate_chars(N)) {
            bool expect = true;
            for (const auto& lc : chi.locals) {
                i64 p = lc.p;
                int e = lc.e, s = lc.conductor_exponent();
                i64 ord = lc.order();
                bool ok;
                if (p > 2) {
                    ok = (s == 0 || s == e) || ord == ipow(2, valuation(p - 1, 2));
                } else {
                    std::vector<int> allowed{e / 2, e};
                    if (e <= 3) allowed.push_back(0);
                    else if (e % 2 == 1) { allowed.push_back(0); allowed.push_back(2); }
                    ok = std::find(allowed.begin(), allowed.end(), s) != allowed.end();
                }
                expect = expect && ok;
            }
            CHECK(is_minimal(chi) == expect);
        }
    }
}

namespace {

// The 2-adic configurations where no psi can make chi*psi^2 minimal,
// verified below by exhaustion over every psi.
bool dead_2adic(const DirichletChar& chi) {
    for (const auto& lc : chi.locals) {
        if (lc.p != 2) continue;
        if (is_minimal(lc)) continue;
        bool fixable = false;
        for (const auto& psi : enumerate_local_chars(2, lc.e))
            if (is_minimal(lc * psi * psi)) fixable = true;
        if (!fixable) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("reduce_to_minimal: exhaustive over modulus <= 200") {
    for (i64 N = 1; N <= 200; ++N) {
        for (const auto& chi : enumerate_chars(N)) {
            auto red = reduce_to_minimal(chi);
            CHECK(red.psi.N == N);
            // chi * psi^2 must match chi_min
            auto check = mul(chi, mul(red.psi, red.psi));
            CHECK(check == red.chi_min);
            if (dead_2adic(chi)) {
                CHECK_FALSE(red.solved);
            } else {
                REQUIRE(red.solved);
                CHECK(is_minimal(red.chi_min));
                if (is_minimal(chi)) CHECK(red.psi.is_trivial());
            }
            // Lemma regime: divisibility cond(psi)*cond(chi psi) | N holds in
            // exactly the configurations the constructive proof covers:
            // odd p with s_p <= e_p/2; p = 2 minimal already, or e odd > 3
            // with 3 <= s <= (e-3)/2.
            bool lemma_regime = red.solved;
            for (const auto& lc : chi.locals) {
                int s = lc.conductor_exponent();
                if (lc.p != 2) {
                    if (2 * s > lc.e) lemma_regime = false;
                } else if (!is_minimal(lc) &&
                           !(lc.e % 2 == 1 && lc.e > 3 && 3 <= s && 2 * s <= lc.e - 3)) {
                    lemma_regime = false;
                }
            }
            if (lemma_regime) {
                i64 cpsi = red.psi.conductor();
                i64 cchipsi = mul(chi, red.psi).conductor();
                CHECK(N % (cpsi * cchipsi) == 0);
            }
        }
    }
}

TEST_CASE("reduce_to_minimal: spec examples") {
    // chi mod p^2 of conductor p with order > 2^ord2(p-1)
    {
        auto chars = enumerate_chars(25);
        bool tested = false;
        for (const auto& chi : chars) {
            if (chi.conductor() != 5) continue;
            if (chi.order() <= 4) continue;  // 2^ord2(4) = 4
            tested = true;
            auto red = reduce_to_minimal(chi);
            REQUIRE(red.solved);
            CHECK(is_minimal(red.chi_min));
            bool order_ok = red.chi_min.order() % 2 == 0 ? red.chi_min.order() <= 4
                                                         : red.chi_min.order() == 1;
            CHECK(order_ok);
            CHECK(red.psi.conductor() <= 5);
        }
        // mod 25, conductor 5: orders divide 4; order > 4 does not exist, so
        // exercise the analogous case at p = 7 instead (orders up to 6).
        (void)tested;
    }
    {
        bool tested = false;
        for (const auto& chi : enumerate_chars(49)) {
            if (chi.conductor() != 7 || chi.order() <= 2) continue;
            tested = true;
            auto red = reduce_to_minimal(chi);
            REQUIRE(red.solved);
            CHECK(is_minimal(red.chi_min));
            i64 target = ipow(2, valuation(7 - 1, 2));  // = 2
            CHECK((red.chi_min.order() == target || red.chi_min.order() == 1));
            CHECK(red.psi.conductor() <= 7);
        }
        CHECK(tested);
    }
    // chi mod 2^e, e odd > 3, with 3 <= s2 <= (e-3)/2: the proof's 2-adic
    // construction with the bound 2s+2 < e. (Note: mod 2^7 with s2 = 3 is
    // already minimal since floor(7/2) = 3; the first genuine case is e = 9.)
    {
        bool tested = false;
        for (const auto& chi : enumerate_chars(512)) {
            if (chi.conductor() != 8) continue;  // s = 3 <= (9-3)/2
            REQUIRE_FALSE(is_minimal(chi));
            tested = true;
            auto red = reduce_to_minimal(chi);
            REQUIRE(red.solved);
            CHECK(is_minimal(red.chi_min));
            CHECK(red.chi_min.locals[0].conductor_exponent() <= 2);
            int sum = valuation(red.psi.conductor(), 2) +
                      valuation(mul(chi, red.psi).conductor(), 2);
            CHECK(sum <= 2 * 3 + 2);
            CHECK(sum < 9);
        }
        CHECK(tested);
    }
}

TEST_CASE("character literal round trip") {
    for (i64 N : {1, 5, 8, 12, 40}) {
        for (const auto& chi : enumerate_chars(N)) {
            auto lit = format_char(chi);
            auto back = parse_char(lit);
            CHECK(back == chi);
        }
    }
}
