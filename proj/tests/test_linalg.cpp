#include "wachcoh/linalg.hpp"

#include <map>
#include <random>

#include "doctest.h"

using namespace wachcoh;

namespace {

Mat random_mat(uint64_t p, unsigned N, size_t r, size_t c, std::mt19937_64& rng) {
    Mat m(p, N, r, c);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) m.set(i, j, rng());
    return m;
}

bool is_unimodular(const Mat& u) {
    // unimodular over Z/p^N iff invertible mod p: full rank after reduction
    Mat t = u;
    size_t n = t.rows();
    uint64_t p = t.p();
    std::vector<std::vector<uint64_t>> a(n, std::vector<uint64_t>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) a[i][j] = t.at(i, j) % p;
    size_t rank = 0;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = rank;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) continue;
        std::swap(a[piv], a[rank]);
        uint64_t inv = 1;
        for (uint64_t x = 1; x < p; ++x)
            if (a[rank][col] * x % p == 1) inv = x;
        for (size_t j = 0; j < n; ++j) a[rank][j] = a[rank][j] * inv % p;
        for (size_t i = 0; i < n; ++i) {
            if (i == rank || a[i][col] == 0) continue;
            uint64_t f = a[i][col];
            for (size_t j = 0; j < n; ++j) a[i][j] = (a[i][j] + (p - f) * a[rank][j]) % p;
        }
        ++rank;
    }
    return rank == n;
}

/* brute-force module order of {x : A x = 0} over Z/p^N, tiny shapes only */
uint64_t kernel_order_brute(const Mat& a) {
    uint64_t mod = a.modulus();
    size_t n = a.cols();
    uint64_t total = 1;
    for (size_t i = 0; i < n; ++i) total *= mod;
    uint64_t count = 0;
    for (uint64_t code = 0; code < total; ++code) {
        std::vector<uint64_t> v(n);
        uint64_t c = code;
        for (size_t i = 0; i < n; ++i) {
            v[i] = c % mod;
            c /= mod;
        }
        auto w = a.apply(v);
        bool zero = true;
        for (uint64_t x : w)
            if (x) zero = false;
        if (zero) ++count;
    }
    return count;
}

/* brute-force order of coker(A) = |target| / |image| */
uint64_t cokernel_order_brute(const Mat& a) {
    uint64_t mod = a.modulus();
    size_t n = a.cols(), m = a.rows();
    uint64_t total = 1;
    for (size_t i = 0; i < n; ++i) total *= mod;
    std::map<std::vector<uint64_t>, bool> image;
    for (uint64_t code = 0; code < total; ++code) {
        std::vector<uint64_t> v(n);
        uint64_t c = code;
        for (size_t i = 0; i < n; ++i) {
            v[i] = c % mod;
            c /= mod;
        }
        image[a.apply(v)] = true;
    }
    uint64_t tgt = 1;
    for (size_t i = 0; i < m; ++i) tgt *= mod;
    return tgt / image.size();
}

}  // namespace

TEST_CASE("smith normal form: identity, diagonal sorting, postcondition replay") {
    Mat id = Mat::identity(3, 5, 4);
    SmithForm s = smith_normal_form(id);
    for (unsigned e : s.exponents) CHECK(e == 0);

    Mat d(3, 5, 2, 2);
    d.set(0, 0, 3);
    d.set(1, 1, 1);
    SmithForm s2 = smith_normal_form(d);
    CHECK(s2.exponents == std::vector<unsigned>{0, 1});

    std::mt19937_64 rng(42);
    for (int it = 0; it < 30; ++it) {
        size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
        Mat a = random_mat(3, 5, r, c, rng);
        SmithForm sf = smith_normal_form(a);
        CHECK(is_unimodular(sf.U));
        CHECK(is_unimodular(sf.V));
        Mat lhs = sf.U * a * sf.V;
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < c; ++j) {
                uint64_t want = 0;
                if (i == j && i < sf.exponents.size() && sf.exponents[i] < 5)
                    want = pow_u64_checked(3, sf.exponents[i]);
                CHECK(lhs.at(i, j) == want);
            }
        for (size_t i = 0; i + 1 < sf.exponents.size(); ++i) CHECK(sf.exponents[i] <= sf.exponents[i + 1]);
    }
}

TEST_CASE("kernel, cokernel, solve: stated examples") {
    // kernel of the identity is trivial
    Mat id = Mat::identity(5, 4, 3);
    Mat k = kernel_basis(id);
    CHECK((k.cols() == 0 || (id * k).is_zero()));
    CHECK(image_divisors(k).empty());

    // cokernel of diag(p, 1) has exponents {0, 1}: one Z/p factor
    Mat d(5, 4, 2, 2);
    d.set(0, 0, 5);
    d.set(1, 1, 1);
    auto cok = cokernel_divisors(d);
    CHECK(cok == std::vector<unsigned>{0, 1});

    // solve(diag(p,1), (1,0)) is insoluble over Z/p^2
    Mat d2(5, 2, 2, 2);
    d2.set(0, 0, 5);
    d2.set(1, 1, 1);
    CHECK_FALSE(solve(d2, {1, 0}).has_value());
    auto sol = solve(d2, {5, 3});
    REQUIRE(sol.has_value());
    auto img = d2.apply(*sol);
    CHECK(img == std::vector<uint64_t>{5, 3});
}

TEST_CASE("kernel and cokernel orders against brute-force enumeration over Z/p^2") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 12; ++it) {
        size_t r = 2, c = it % 2 ? 3 : 2;
        Mat a = random_mat(3, 2, r, c, rng);
        // kernel order from divisors
        Mat k = kernel_basis(a);
        CHECK((a * k).is_zero());
        uint64_t ord = 1;
        for (unsigned dv : image_divisors(k)) ord *= pow_u64_checked(3, dv);
        CHECK(ord == kernel_order_brute(a));
        // cokernel order from divisors
        uint64_t cord = 1;
        for (unsigned dv : cokernel_divisors(a)) cord *= pow_u64_checked(3, dv);
        CHECK(cord == cokernel_order_brute(a));
        // duality: coker(A) and ker(A^T) have the same order
        CHECK(cokernel_order_brute(a) == kernel_order_brute(a.transpose()));
        uint64_t kord = 1;
        for (unsigned dv : image_divisors(kernel_basis(a.transpose()))) kord *= pow_u64_checked(3, dv);
        CHECK(cord == kord);
    }
}

TEST_CASE("rank-nullity over the residue field after reduction mod p") {
    auto fp_rank = [](const Mat& m) {
        uint64_t p = m.p();
        std::vector<std::vector<uint64_t>> a(m.rows(), std::vector<uint64_t>(m.cols()));
        for (size_t i = 0; i < m.rows(); ++i)
            for (size_t j = 0; j < m.cols(); ++j) a[i][j] = m.at(i, j) % p;
        size_t rank = 0;
        for (size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
            size_t piv = rank;
            while (piv < m.rows() && a[piv][col] == 0) ++piv;
            if (piv == m.rows()) continue;
            std::swap(a[piv], a[rank]);
            uint64_t inv = 1;
            for (uint64_t x = 1; x < p; ++x)
                if (a[rank][col] * x % p == 1) inv = x;
            for (size_t j = 0; j < m.cols(); ++j) a[rank][j] = a[rank][j] * inv % p;
            for (size_t i = 0; i < m.rows(); ++i) {
                if (i == rank || a[i][col] == 0) continue;
                uint64_t f = a[i][col];
                for (size_t j = 0; j < m.cols(); ++j) a[i][j] = (a[i][j] + (p - f) * a[rank][j]) % p;
            }
            ++rank;
        }
        return rank;
    };
    std::mt19937_64 rng(11);
    for (int it = 0; it < 20; ++it) {
        size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
        Mat a = random_mat(5, 3, r, c, rng);
        SmithForm s = smith_normal_form(a);
        size_t unit_divisors = 0;
        for (unsigned e : s.exponents)
            if (e == 0) ++unit_divisors;
        // SNF unit divisors = rank of the mod-p reduction; nullity is the rest
        CHECK(unit_divisors == fp_rank(a));
        CHECK(fp_rank(a) + (c - fp_rank(a)) == c);
    }
}

TEST_CASE("rationalized rank") {
    CHECK(rationalized_rank({8}, 8, 2) == 1);
    CHECK(rationalized_rank({1}, 8, 2) == 0);
    CHECK(rationalized_rank({6, 7, 2, 1}, 8, 2) == 2);
    CHECK_THROWS_AS(rationalized_rank({1}, 4, 4), error);
}

TEST_CASE("quotient divisors and span utilities") {
    // Z/27^2 modulo the span of (3, 0) and (0, 1): quotient Z/3 + 0
    Mat big = Mat::identity(3, 3, 2);
    Mat small(3, 3, 2, 2);
    small.set(0, 0, 3);
    small.set(1, 1, 1);
    auto qd = quotient_divisors(big, small);
    std::vector<unsigned> want{0, 1};
    CHECK(qd == want);

    std::mt19937_64 rng(23);
    for (int it = 0; it < 10; ++it) {
        Mat g = random_mat(3, 4, 3, 2, rng);
        // the span contains p * (combination of its columns)
        std::vector<uint64_t> v(3, 0);
        for (size_t i = 0; i < 3; ++i) v[i] = 3 * g.at(i, 0) % g.modulus();
        CHECK(in_span(g, v));
        CHECK(span_contains(g, g));
        Mat inter = span_intersection(g, g);
        CHECK(span_equal(inter, g));
    }
    // intersection of p*Z + q*Z inside Z/p^N: multiples
    Mat ga(3, 3, 1, 1), gb(3, 3, 1, 1);
    ga.set(0, 0, 3);
    gb.set(0, 0, 9);
    Mat gi = span_intersection(ga, gb);
    CHECK(span_equal(gi, gb));
}
