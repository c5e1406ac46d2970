#include "wachcoh/nygaard.hpp"

#include "doctest.h"

using namespace wachcoh;

namespace {
OFRingPtr ring3(unsigned N = 8) { return OFRing::make(3, 1, N); }

Mat fil_x(const WachModuleA& n, int k, unsigned mu_prec) { return fil_pairs(n, k, mu_prec).x_part(); }

Mat mul_mu_matrix(const OFRingPtr& r, unsigned rank, unsigned mu_prec) {
    FlatteningA fl{r, rank, mu_prec};
    return fl.op_matrix(mu_prec, [&](const std::vector<AFSeries>& v) {
        std::vector<AFSeries> w;
        for (const auto& s : v) w.push_back(mul_pow_mu(s, 1));
        return w;
    });
}
}  // namespace

TEST_CASE("fil_basis of the trivial module: Fil^0 full, Fil^1 = mu N + torsion") {
    auto r = ring3();
    unsigned M = 20;
    WachModuleA t = trivial_module(r, M);
    // Fil^0 is effective: the whole module
    Mat f0 = fil_x(t, 0, M);
    FlatteningA fl{r, 1, M};
    CHECK(span_contains(f0, Mat::identity(3, 8, fl.dim())));
    // Fil^1: rationally mu * N; the mod-mu image is torsion only
    Mat f1 = fil_x(t, 1, M);
    Mat cp(3, 8, 1, fl.dim());
    cp.set(0, 0, 1);
    Mat img = cp * f1;
    CHECK(rationalized_rank(image_divisors(img), 8, 2) == 0);
    // mu * (basis) is inside Fil^1
    Mat mu_gens = mul_mu_matrix(r, 1, M);
    CHECK(span_contains(f1, mu_gens));
}

TEST_CASE("fil_basis of tate twists shifts the filtration") {
    auto r = ring3();
    unsigned M = 20;
    WachModuleA tm1 = tate_twist(trivial_module(r, M), -1);
    FlatteningA fl{r, 1, M};
    // Fil^k is everything for k <= 1
    for (int k : {-1, 0, 1}) CHECK(span_contains(fil_x(tm1, k, M), Mat::identity(3, 8, fl.dim())));
    // Fil^2 reduces to torsion mod mu but contains mu N
    Mat f2 = fil_x(tm1, 2, M);
    Mat cp(3, 8, 1, fl.dim());
    cp.set(0, 0, 1);
    CHECK(rationalized_rank(image_divisors(cp * f2), 8, 2) == 0);
    CHECK(span_contains(f2, mul_mu_matrix(r, 1, M)));
}

TEST_CASE("Lemma: Fil^k intersect mu N = mu Fil^{k-1} at precision") {
    // needs mu-precision large against p-precision: the computed kernels
    // overestimate Fil^k by p^{~M/2}-torsion, invisible once M/2 exceeds N
    auto r = ring3();
    unsigned M = 36;
    for (auto n : {trivial_module(r, M), tate_twist(trivial_module(r, M), -1),
                   tate_twist(trivial_module(r, M), 1)}) {
        FlatteningA fl{r, n.rank, M};
        Mat mulmu = mul_mu_matrix(r, n.rank, M);
        for (int k : {0, 1, 2}) {
            Mat fk = fil_x(n, k, M);
            Mat fk1 = fil_x(n, k - 1, M);
            Mat lhs = span_intersection(fk, mulmu);  // Fil^k cap mu N
            Mat rhs = mulmu * fk1;                   // mu Fil^{k-1}
            // exact one way; the computed Fil^k overestimates by bounded
            // p^{N-1}-torsion, so the converse holds at the guard window
            CHECK(span_equal_guarded(lhs, rhs, 2));
        }
    }
}

TEST_CASE("Lemma over S: Fil^k intersect mu0 M = mu0 Fil^{k-p+1}") {
    auto r = ring3();
    unsigned M = 24;
    WachModuleS m = descend(tate_twist(trivial_module(r, M), -1));
    unsigned M0 = m.mu0_prec;
    FlatteningS fl{r, m.rank, M0};
    Mat mulmu0 = fl.op_matrix(M0, [&](const std::vector<SSeries>& v) {
        std::vector<SSeries> w;
        for (const auto& s : v) {
            std::vector<OFElem> c(s.mu0_prec(), r->zero());
            for (unsigned j = 0; j + 1 < s.mu0_prec(); ++j) c[j + 1] = s.coeff(j);
            w.emplace_back(r, std::move(c));
        }
        return w;
    });
    for (int k : {0, 1, 2}) {
        Mat fk = fil_pairs(m, k, M0).x_part();
        Mat fk2 = fil_pairs(m, k - 2, M0).x_part();  // k - (p-1)
        Mat lhs = span_intersection(fk, mulmu0);
        Mat rhs = mulmu0 * fk2;
        CHECK(span_equal_guarded(lhs, rhs, 2));
    }
}

TEST_CASE("twist compatibility of the filtration for r in {-2..2}") {
    auto r = ring3();
    unsigned M = 16;
    WachModuleA t = trivial_module(r, M);
    for (int rr : {-2, -1, 1, 2}) {
        WachModuleA tw = tate_twist(t, rr);
        for (int k : {0, 1}) {
            // in the twisted basis mu^{-r} e tensor eps^r the filtration at k
            // is the untwisted filtration at k + r, coordinatewise
            Mat lhs = fil_x(tw, k, M);
            Mat rhs = fil_x(t, k + rr, M);
            CHECK(span_contains(lhs, rhs));
            if (rr > 0) {
                CHECK(span_equal(lhs, rhs));
            } else {
                // for r < 0 the two kernel systems differ by a [p]_q-scaling,
                // so agreement holds after saturation: the mod-mu images have
                // the same rationalized rank
                FlatteningA fl{r, 1, M};
                Mat cp(3, 8, 1, fl.dim());
                cp.set(0, 0, 1);
                CHECK(rationalized_rank(image_divisors(cp * lhs), 8, 2) ==
                      rationalized_rank(image_divisors(cp * rhs), 8, 2));
            }
        }
    }
}

TEST_CASE("graded dims and dcris of the catalog rank-1 modules") {
    auto r = ring3();
    unsigned M = 20;
    WachModuleA t = trivial_module(r, M);
    auto gr = graded_dims(t, -1, 2);
    for (auto [k, d] : gr) CHECK(d == (k == 0 ? 1u : 0u));

    FilteredPhiModule d0 = dcris(t);
    CHECK(d0.dim == 1);
    CHECK(d0.jumps == std::vector<int>{0});
    CHECK(d0.denominator_exp == 0);
    CHECK(d0.phi0[0][0] == r->one());

    FilteredPhiModule dm1 = dcris(tate_twist(t, -1));
    CHECK(dm1.jumps == std::vector<int>{1});
    CHECK(dm1.phi0[0][0].as_zp().value() == 3);  // [p]_q(0) = p

    FilteredPhiModule dp1 = dcris(tate_twist(t, 1));
    CHECK(dp1.jumps == std::vector<int>{-1});
    CHECK(dp1.denominator_exp == 1);
    CHECK(dp1.phi0[0][0] == r->one());

    // direct sum: jumps {0, 1}
    FilteredPhiModule ds = dcris(direct_sum(t, tate_twist(t, -1)));
    CHECK(ds.jumps == std::vector<int>{0, 1});
}

TEST_CASE("graded dims agree between N and descend(N)") {
    auto r = ring3();
    unsigned M = 24;
    for (int rr : {-1, 0, 1}) {
        WachModuleA n = tate_twist(trivial_module(r, M), rr);
        WachModuleS m = descend(n);
        auto ga = graded_dims(n, -2, 2);
        auto gs = graded_dims(m, -2, 2);
        CHECK(ga == gs);
    }
}

TEST_CASE("sub-extension pairs: Fil^k(N1) = N1 cap Fil^k(E), quotient map surjects at guard") {
    auto r = ring3();
    unsigned M = 30;
    // E = nonsplit extension of the trivial module by N1 = twist(trivial, 1):
    // take the unipotent extension with phi(e) = e - 1 over the trivial base
    // and a genuine extension over the twist
    WachModuleA t = trivial_module(r, M);
    WachModuleA e1 = extension_from_cocycle(t, t.zero_vec(), {AFSeries::from_int(r, 1, M)});
    for (const WachModuleA& e : {e1}) {
        unsigned d = e.rank - 1;
        // N1 = first d coordinates; embed flatten(N1) into flatten(E)
        WachModuleA n1 = t;
        FlatteningA fl1{r, d, M};
        FlatteningA flE{r, e.rank, M};
        Mat embed(3, 8, flE.dim(), fl1.dim());
        for (size_t i = 0; i < fl1.dim(); ++i) embed.set(i, i, 1);
        for (int k : {0, 1, 2}) {
            Mat filN1 = embed * fil_x(n1, k, M);
            Mat filE = fil_x(e, k, M);
            // N1 cap Fil^k(E): restrict the E-filtration to the submodule
            Mat sub = span_intersection(filE, embed);
            CHECK(span_contains(sub, filN1));
            CHECK(span_contains_scaled(filN1, sub, 2));
            // rational strictness: Fil^k(E) surjects onto Fil^k(quotient)
            // after clearing a bounded p-power
            Mat proj(3, 8, fl1.dim(), flE.dim());
            for (size_t i = 0; i < fl1.dim(); ++i) proj.set(i, fl1.dim() + i, 1);
            Mat filQ = fil_x(t, k, M);  // the quotient is the trivial module
            CHECK(span_contains_scaled(proj * filE, filQ, 2));
        }
    }
}

TEST_CASE("tensor and direct sum commute with descend up to an explicit base change") {
    auto r = ring3();
    unsigned M = 24;
    WachModuleA t = trivial_module(r, M);
    WachModuleA a = tate_twist(t, -1);
    // rank-1 case: the two descended bases differ by the S-unit
    // c = (averaging of a)^2 / (averaging of the tensor)
    WachModuleA ta = tensor(a, a);
    WachModuleS da = descend(a);
    WachModuleS dt = descend(ta);
    CHECK(verify(dt).pass());
    AFSeries pa = descent_basis(a)[0][0];
    AFSeries pt = descent_basis(ta)[0][0];
    AFSeries c_a = pa * pa * invert(pt);
    CHECK(fpx_average(c_a) == c_a);
    SSeries c = to_mu0(c_a).truncated(dt.mu0_prec);
    CHECK(c.constant_term().is_unit());
    SSeries cinv = invert_S(c);
    // dt.phi = c^{-1} (da.phi)^2 phi_S(c),  dt.gamma = c^{-1} (da.gamma)^2 gamma_S(c)
    SSeries phi_want = cinv * da.phi_num[0][0].truncated(dt.mu0_prec) *
                       da.phi_num[0][0].truncated(dt.mu0_prec) * phi_S(c);
    CHECK(dt.phi_num[0][0].congruent(phi_want, 8, phi_want.mu0_prec()));
    SSeries g_want = cinv * da.g_gamma[0][0].truncated(dt.mu0_prec) *
                     da.g_gamma[0][0].truncated(dt.mu0_prec) * gamma0_S(c);
    CHECK(dt.g_gamma[0][0].congruent(g_want, 8, g_want.mu0_prec()));
    // direct sum: blocks descend independently (the base change is blockwise)
    WachModuleS ds = descend(direct_sum(a, t));
    CHECK(ds.phi_num[0][0] == da.phi_num[0][0]);
    CHECK(ds.phi_num[1][1] == descend(t).phi_num[0][0]);
    CHECK(ds.phi_num[0][1].is_zero());
}

TEST_CASE("filtration stability under raising the precision") {
    auto r8 = ring3(8);
    auto r10 = ring3(10);
    WachModuleA n8 = tate_twist(trivial_module(r8, 20), -1);
    WachModuleA n10 = tate_twist(trivial_module(r10, 30), -1);
    auto g8 = graded_dims(n8, -1, 2);
    auto g10 = graded_dims(n10, -1, 2);
    CHECK(g8 == g10);
}
