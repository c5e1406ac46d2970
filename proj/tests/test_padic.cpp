#include "wachcoh/padic.hpp"

#include <random>

#include "doctest.h"

using namespace wachcoh;

TEST_CASE("Zp basic arithmetic is exact mod p^N") {
    Zp a(3, 4, 50), b(3, 4, 77);
    CHECK((a + b).value() == (50 + 77) % 81);
    CHECK((a * b).value() == (50 * 77) % 81);
    CHECK((a - b).value() == (50 + 81 - 77) % 81);
    CHECK((-a).value() == 81 - 50);
    CHECK(a.valuation() == 0);
    CHECK(Zp(3, 4, 27).valuation() == 3);
    CHECK(Zp(3, 4, 0).valuation() == 4);
}

TEST_CASE("Zp ring axioms on random triples") {
    std::mt19937_64 rng(12345);
    for (int p : {3, 5, 7}) {
        unsigned N = 8;
        uint64_t mod = pow_u64_checked(p, N);
        for (int it = 0; it < 50; ++it) {
            Zp a(p, N, rng() % mod), b(p, N, rng() % mod), c(p, N, rng() % mod);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a + b == b + a);
        }
    }
}

TEST_CASE("Zp inverse and exact p-power division") {
    Zp a(5, 6, 7);
    CHECK((a * a.inv()).value() == 1);
    CHECK_THROWS_AS(Zp(5, 6, 10).inv(), not_a_unit_error);
    Zp b(5, 6, 250);  // 2 * 5^3
    CHECK(b.div_pow_p(3).value() == 2);
    CHECK_THROWS_AS(b.div_pow_p(4), not_divisible_error);
}

TEST_CASE("teichmuller lifts: frozen values and defining property") {
    CHECK(teichmuller(1, 3, 6).value() == 1);
    CHECK(teichmuller(0, 3, 6).value() == 0);
    // x -> x^3 iterated from 2 mod 81 stabilizes at 80 = -1
    CHECK(teichmuller(2, 3, 4).value() == 80);
    // 2^5 = 32 = 7 mod 25, and 7^5 = 7 mod 25
    CHECK(teichmuller(2, 5, 2).value() == 7);
    // independently recomputed table at p = 5, N = 8
    CHECK(teichmuller(2, 5, 8).value() == 280182);
    CHECK(teichmuller(3, 5, 8).value() == 110443);
    CHECK(teichmuller(4, 5, 8).value() == 390624);
    for (uint64_t p : {3ULL, 5ULL, 7ULL}) {
        for (uint64_t a = 1; a < p; ++a) {
            Zp t = teichmuller(a, p, 8);
            CHECK(t.pow(p - 1).value() == 1);
            CHECK(t.value() % p == a);
        }
    }
}

TEST_CASE("binomial: integer cases and the Pascal identity") {
    Zp four(3, 6, 4);
    CHECK(binomial(four, 0).value() == 1);
    CHECK(binomial(four, 2).value() == 6);
    CHECK(binomial(four, 3).value() == 4);
    CHECK(binomial(four, 5).value() == 0);

    std::mt19937_64 rng(99);
    for (int p : {3, 5}) {
        unsigned N = 9;
        uint64_t mod = pow_u64_checked(p, N);
        for (int it = 0; it < 20; ++it) {
            Zp c(p, N, rng() % mod);
            Zp cm1 = c - Zp(p, N, 1);
            for (uint64_t k : {1ULL, 2ULL, 3ULL, 6ULL}) {
                unsigned loss = factorial_valuation(p, k);
                Zp lhs = binomial(c, k);
                Zp rhs = binomial(cm1, k) + binomial(cm1, k - 1);
                CHECK(lhs.congruent(rhs, N - loss));
            }
        }
    }
    // precision exhaustion: v_3(27!) = 13 >= 2
    CHECK_THROWS_AS(binomial(Zp(3, 2, 5), 27), precision_error);
}

TEST_CASE("OFRing f = 1 is canonically Z_p") {
    OFRingPtr r = OFRing::make(3, 1, 5);
    OFElem x = r->from_int(17), y = r->from_int(5);
    CHECK((x * y).as_zp().value() == 85 % 243);
    CHECK(frobenius_of(x) == x);
    CHECK(x.is_unit());
    CHECK((x * x.inv()) == r->one());
}

TEST_CASE("OFRing f = 2: Frobenius is a ring automorphism of order 2") {
    OFRingPtr r = OFRing::make(3, 2, 6);
    OFElem t = r->gen();
    OFElem ft = frobenius_of(t);
    // sigma(t) is a root of the defining polynomial congruent to t^3 mod 3
    CHECK(ft.congruent(t.pow(3), 1));
    CHECK(frobenius_of(ft) == t);  // order 2

    std::mt19937_64 rng(7);
    uint64_t mod = pow_u64_checked(3, 6);
    for (int it = 0; it < 25; ++it) {
        OFElem a = r->from_coords({Zp(3, 6, rng() % mod), Zp(3, 6, rng() % mod)});
        OFElem b = r->from_coords({Zp(3, 6, rng() % mod), Zp(3, 6, rng() % mod)});
        CHECK(frobenius_of(a + b) == frobenius_of(a) + frobenius_of(b));
        CHECK(frobenius_of(a * b) == frobenius_of(a) * frobenius_of(b));
        CHECK(frobenius_of(frobenius_of(a)) == a);
        if (a.is_unit()) CHECK((a * a.inv()) == r->one());
    }
}

TEST_CASE("OFRing f = 2: Teichmuller lift of a residue-field element") {
    OFRingPtr r = OFRing::make(3, 2, 5);
    OFElem t = teichmuller_of(r, {1, 1});
    // unit of order dividing p^f - 1 = 8
    CHECK(t.pow(8) == r->one());
    CHECK(t.congruent(r->from_coords({Zp(3, 5, 1), Zp(3, 5, 1)}), 1));
}
