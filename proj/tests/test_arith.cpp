#include <catch2/catch_amalgamated.hpp>

#include "twistmin/arith.hpp"

using namespace twistmin;

TEST_CASE("kronecker symbol basics") {
    CHECK(kronecker(5, 1) == 1);
    CHECK(kronecker(-4, 3) == -1);
    CHECK(kronecker(8, 2) == 0);
    CHECK(kronecker(5, 2) == -1);   // 5 = 5 mod 8
    CHECK(kronecker(17, 2) == 1);   // 17 = 1 mod 8
    CHECK(kronecker(2, 7) == 1);
    CHECK(kronecker(3, 7) == -1);
    CHECK(kronecker(-3, 7) == 1);
}

TEST_CASE("kronecker is multiplicative in both arguments") {
    for (i64 a = -20; a <= 20; ++a)
        for (i64 b = -20; b <= 20; ++b) {
            CHECK(kronecker(a * b, 15) == kronecker(a, 15) * kronecker(b, 15));
            if (a > 0 && b > 0)
                CHECK(kronecker(7, a * b) == kronecker(7, a) * kronecker(7, b));
        }
}

TEST_CASE("kronecker matches Legendre on odd primes") {
    for (i64 p : {3, 5, 7, 11, 13, 17}) {
        for (i64 a = 0; a < p; ++a) {
            int leg = 0;
            for (i64 x = 1; x < p; ++x)
                if (x * x % p == a) leg = 1;
            if (a % p == 0) leg = 0;
            else if (leg == 0) leg = -1;
            CHECK(kronecker(a, p) == leg);
        }
    }
}

TEST_CASE("primitive roots generate the full unit group") {
    for (i64 p : {3, 5, 7, 13}) {
        for (int e = 1; e <= 3; ++e) {
            i64 pe = ipow(p, e);
            i64 g = primitive_root(p, e);
            i64 phi = euler_phi(pe);
            i64 x = 1;
            std::vector<bool> seen(pe, false);
            for (i64 k = 0; k < phi; ++k) {
                REQUIRE_FALSE(seen[x]);
                seen[x] = true;
                x = mulmod(x, g, pe);
            }
            CHECK(x == 1);
        }
    }
}

TEST_CASE("square roots modulo prime powers") {
    for (i64 p : {3, 5, 7, 11, 13}) {
        for (int e = 1; e <= 3; ++e) {
            i64 pe = ipow(p, e);
            for (i64 a = 1; a < std::min<i64>(pe, 60); ++a) {
                if (a % p == 0) continue;
                auto r = sqrt_mod_odd_prime_power(a, p, e);
                bool has = false;
                for (i64 x = 0; x < pe; ++x)
                    if (mulmod(x, x, pe) == a % pe) has = true;
                REQUIRE(r.has_value() == has);
                if (r) CHECK(mulmod(*r, *r, pe) == a % pe);
            }
        }
    }
    for (int k = 3; k <= 8; ++k) {
        i64 m = ipow(2, k);
        for (i64 a = 1; a < m; a += 8) {
            auto r = sqrt_mod_power_of_two(a, k);
            REQUIRE(r.has_value());
            CHECK(mulmod(*r, *r, m) == a);
        }
        CHECK_FALSE(sqrt_mod_power_of_two(3, k).has_value());
    }
}

TEST_CASE("sqrt mod 4p^e") {
    for (i64 d : {5, -3, 13, -7, 17}) {
        for (i64 p : {3, 5, 7}) {
            for (int e = 1; e <= 3; ++e) {
                if (kronecker(d, p) != 1) continue;
                auto r = sqrt_mod_4pe(d, p, e);
                REQUIRE(r.has_value());
                i64 m = 4 * ipow(p, e);
                CHECK(mod_floor(*r * *r - d, m) == 0);
            }
        }
    }
    auto r = sqrt_mod_4pe(17, 2, 3);  // 17 = 1 mod 8
    REQUIRE(r.has_value());
    CHECK(mod_floor(*r * *r - 17, 32) == 0);
}

TEST_CASE("von Mangoldt") {
    CHECK(von_mangoldt(1) == 0.0);
    CHECK(von_mangoldt(2) == Catch::Approx(std::log(2.0)));
    CHECK(von_mangoldt(8) == Catch::Approx(std::log(2.0)));
    CHECK(von_mangoldt(6) == 0.0);
    CHECK(von_mangoldt(9) == Catch::Approx(std::log(3.0)));
}
