#include "wachcoh/nygaard.hpp"

#include <algorithm>

namespace wachcoh {

/* ---- flattening ---- */

std::vector<uint64_t> FlatteningA::flatten(const std::vector<AFSeries>& v) const {
    if (v.size() != rank) throw error("FlatteningA::flatten: wrong component count");
    unsigned f = ring->f();
    std::vector<uint64_t> out(dim(), 0);
    for (unsigned i = 0; i < rank; ++i) {
        unsigned m = std::min(mu_prec, v[i].mu_prec());
        for (unsigned j = 0; j < m; ++j) {
            const OFElem& c = v[i].coeff(j);
            for (unsigned t = 0; t < f; ++t) out[(static_cast<size_t>(i) * mu_prec + j) * f + t] = c.coords()[t];
        }
    }
    return out;
}

std::vector<AFSeries> FlatteningA::unflatten(const std::vector<uint64_t>& x) const {
    if (x.size() != dim()) throw error("FlatteningA::unflatten: wrong length");
    unsigned f = ring->f();
    std::vector<AFSeries> v;
    v.reserve(rank);
    for (unsigned i = 0; i < rank; ++i) {
        std::vector<OFElem> coeffs;
        coeffs.reserve(mu_prec);
        for (unsigned j = 0; j < mu_prec; ++j) {
            std::vector<uint64_t> c(f);
            for (unsigned t = 0; t < f; ++t) c[t] = x[(static_cast<size_t>(i) * mu_prec + j) * f + t];
            coeffs.emplace_back(ring, std::move(c));
        }
        v.emplace_back(ring, std::move(coeffs));
    }
    return v;
}

std::vector<AFSeries> FlatteningA::basis_vector(size_t idx) const {
    std::vector<uint64_t> x(dim(), 0);
    x.at(idx) = 1;
    return unflatten(x);
}

Mat FlatteningA::op_matrix(unsigned out_mu_prec,
                           const std::function<std::vector<AFSeries>(const std::vector<AFSeries>&)>& op) const {
    FlatteningA out{ring, rank, out_mu_prec};
    Mat m(ring->p(), ring->prec(), out.dim(), dim());
    for (size_t idx = 0; idx < dim(); ++idx) {
        std::vector<uint64_t> col = out.flatten(op(basis_vector(idx)));
        for (size_t i = 0; i < col.size(); ++i) m.set(i, idx, col[i]);
    }
    return m;
}

std::vector<uint64_t> FlatteningS::flatten(const std::vector<SSeries>& v) const {
    if (v.size() != rank) throw error("FlatteningS::flatten: wrong component count");
    unsigned f = ring->f();
    std::vector<uint64_t> out(dim(), 0);
    for (unsigned i = 0; i < rank; ++i) {
        unsigned m = std::min(mu0_prec, v[i].mu0_prec());
        for (unsigned j = 0; j < m; ++j) {
            const OFElem& c = v[i].coeff(j);
            for (unsigned t = 0; t < f; ++t)
                out[(static_cast<size_t>(i) * mu0_prec + j) * f + t] = c.coords()[t];
        }
    }
    return out;
}

std::vector<SSeries> FlatteningS::unflatten(const std::vector<uint64_t>& x) const {
    if (x.size() != dim()) throw error("FlatteningS::unflatten: wrong length");
    unsigned f = ring->f();
    std::vector<SSeries> v;
    v.reserve(rank);
    for (unsigned i = 0; i < rank; ++i) {
        std::vector<OFElem> coeffs;
        coeffs.reserve(mu0_prec);
        for (unsigned j = 0; j < mu0_prec; ++j) {
            std::vector<uint64_t> c(f);
            for (unsigned t = 0; t < f; ++t) c[t] = x[(static_cast<size_t>(i) * mu0_prec + j) * f + t];
            coeffs.emplace_back(ring, std::move(c));
        }
        v.emplace_back(ring, std::move(coeffs));
    }
    return v;
}

std::vector<SSeries> FlatteningS::basis_vector(size_t idx) const {
    std::vector<uint64_t> x(dim(), 0);
    x.at(idx) = 1;
    return unflatten(x);
}

Mat FlatteningS::op_matrix(unsigned out_mu0_prec,
                           const std::function<std::vector<SSeries>(const std::vector<SSeries>&)>& op) const {
    FlatteningS out{ring, rank, out_mu0_prec};
    Mat m(ring->p(), ring->prec(), out.dim(), dim());
    for (size_t idx = 0; idx < dim(); ++idx) {
        std::vector<uint64_t> col = out.flatten(op(basis_vector(idx)));
        for (size_t i = 0; i < col.size(); ++i) m.set(i, idx, col[i]);
    }
    return m;
}

/* ---- filtration pairs ---- */

namespace {

Mat upper_half(const Mat& gens, size_t d) {
    Mat x(gens.p(), gens.prec(), d, gens.cols());
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < gens.cols(); ++j) x.set(i, j, gens.at(i, j));
    return x;
}

Mat lower_half(const Mat& gens, size_t d) {
    Mat w(gens.p(), gens.prec(), d, gens.cols());
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < gens.cols(); ++j) w.set(i, j, gens.at(d + i, j));
    return w;
}

Mat negated(const Mat& r) {
    Mat m(r.p(), r.prec(), r.rows(), r.cols());
    for (size_t i = 0; i < r.rows(); ++i)
        for (size_t j = 0; j < r.cols(); ++j) m.set(i, j, (r.modulus() - r.at(i, j)) % r.modulus());
    return m;
}

}  // namespace

Mat FilPairsA::x_part() const { return upper_half(gens, fl.dim()); }
Mat FilPairsA::w_part() const { return lower_half(gens, fl.dim()); }
Mat FilPairsS::x_part() const { return upper_half(gens, fl.dim()); }
Mat FilPairsS::w_part() const { return lower_half(gens, fl.dim()); }

FilPairsA fil_pairs(const WachModuleA& n, int k, unsigned mu_prec) {
    if (mu_prec > n.mu_prec) throw precision_error("fil_pairs: module mu-precision too small");
    FlatteningA fl{n.ring, n.rank, mu_prec};
    int kh = k + static_cast<int>(n.h);
    unsigned a = kh < 0 ? static_cast<unsigned>(-kh) : 0;
    unsigned b = kh > 0 ? static_cast<unsigned>(kh) : 0;
    AFSeries pq = pq_series(n.ring, mu_prec);
    AFSeries pq_a = AFSeries::from_int(n.ring, 1, mu_prec);
    for (unsigned i = 0; i < a; ++i) pq_a = pq_a * pq;
    AFSeries pq_b = AFSeries::from_int(n.ring, 1, mu_prec);
    for (unsigned i = 0; i < b; ++i) pq_b = pq_b * pq;

    WachModuleA nt = n.truncated(mu_prec);
    Mat left = fl.op_matrix(mu_prec, [&](const std::vector<AFSeries>& v) {
        auto w = nt.apply_phi_raw(v);
        for (auto& c : w) c = c * pq_a;
        return w;
    });
    Mat right = fl.op_matrix(mu_prec, [&](const std::vector<AFSeries>& v) {
        std::vector<AFSeries> w = v;
        for (auto& c : w) c = c * pq_b;
        return w;
    });
    Mat sys = left.hstack(negated(right));
    return FilPairsA{k, fl, kernel_basis(sys)};
}

FilPairsS fil_pairs(const WachModuleS& m, int k, unsigned mu0_prec) {
    if (mu0_prec > m.mu0_prec) throw precision_error("fil_pairs: module mu0-precision too small");
    FlatteningS fl{m.ring, m.rank, mu0_prec};
    int kh = k + static_cast<int>(m.h);
    unsigned a = kh < 0 ? static_cast<unsigned>(-kh) : 0;
    unsigned b = kh > 0 ? static_cast<unsigned>(kh) : 0;
    unsigned p1 = static_cast<unsigned>(m.p()) - 1;
    SSeries pt = to_mu0(ptilde_series(m.ring, std::max<unsigned>(p1 * mu0_prec, p1))).truncated(mu0_prec);
    SSeries pt_a = SSeries::from_int(m.ring, 1, mu0_prec);
    for (unsigned i = 0; i < a; ++i) pt_a = pt_a * pt;
    SSeries pt_b = SSeries::from_int(m.ring, 1, mu0_prec);
    for (unsigned i = 0; i < b; ++i) pt_b = pt_b * pt;

    WachModuleS mt = m.truncated(mu0_prec);
    Mat left = fl.op_matrix(mu0_prec, [&](const std::vector<SSeries>& v) {
        auto w = mt.apply_phi_raw(v);
        for (auto& c : w) c = c * pt_a;
        return w;
    });
    Mat right = fl.op_matrix(mu0_prec, [&](const std::vector<SSeries>& v) {
        std::vector<SSeries> w = v;
        for (auto& c : w) c = c * pt_b;
        return w;
    });
    Mat sys = left.hstack(negated(right));
    return FilPairsS{k, fl, kernel_basis(sys)};
}

FiltrationBasis fil_basis(const WachModuleA& n, int k) {
    FilPairsA fp = fil_pairs(n, k, n.mu_prec);
    Mat xs = fp.x_part();
    FiltrationBasis fb{k, n.mu_prec, {}};
    for (size_t j = 0; j < xs.cols(); ++j) {
        std::vector<uint64_t> col = xs.column(j);
        bool zero = true;
        for (uint64_t v : col)
            if (v) zero = false;
        if (zero) continue;  // pure witness junk: contributes nothing to Fil^k
        ModuleElement el;
        el.coords = fp.fl.unflatten(col);
        fb.generators.push_back(std::move(el));
    }
    return fb;
}

/* ---- graded pieces and D_cris ---- */

namespace {

Mat fil_image_mod_mu(const WachModuleA& n, int k, unsigned mu_prec) {
    FilPairsA fp = fil_pairs(n, k, mu_prec);
    Mat xs = fp.x_part();
    unsigned f = n.ring->f();
    size_t rows = static_cast<size_t>(n.rank) * f;
    Mat img(xs.p(), xs.prec(), rows, xs.cols());
    for (size_t j = 0; j < xs.cols(); ++j)
        for (unsigned i = 0; i < n.rank; ++i)
            for (unsigned t = 0; t < f; ++t)
                img.set(static_cast<size_t>(i) * f + t, j,
                        xs.at((static_cast<size_t>(i) * mu_prec + 0) * f + t, j));
    return img;
}

Mat fil_image_mod_mu0(const WachModuleS& m, int k, unsigned mu0_prec) {
    FilPairsS fp = fil_pairs(m, k, mu0_prec);
    Mat xs = fp.x_part();
    unsigned f = m.ring->f();
    size_t rows = static_cast<size_t>(m.rank) * f;
    Mat img(xs.p(), xs.prec(), rows, xs.cols());
    for (size_t j = 0; j < xs.cols(); ++j)
        for (unsigned i = 0; i < m.rank; ++i)
            for (unsigned t = 0; t < f; ++t)
                img.set(static_cast<size_t>(i) * f + t, j,
                        xs.at((static_cast<size_t>(i) * mu0_prec + 0) * f + t, j));
    return img;
}

unsigned saturated_rank(const Mat& img, unsigned guard) {
    return rationalized_rank(image_divisors(img), img.prec(), guard);
}

/* saturated generators of the image module: from the SNF of G, the columns
 * U^{-1} e_i with exponent inside the guard window, the p-power scaling
 * removed (finite-precision images carry spurious torsion) */
Mat saturated_image_basis(const Mat& img, unsigned guard) {
    SmithForm s = smith_normal_form(img);
    std::vector<std::vector<uint64_t>> cols;
    for (size_t i = 0; i < s.exponents.size(); ++i) {
        if (s.exponents[i] > guard) continue;
        std::vector<uint64_t> e(img.rows(), 0);
        e[i] = 1;
        auto x = solve(s.U, e);
        if (!x) throw error("saturated_image_basis: unimodular solve failed");
        cols.push_back(*x);
    }
    return Mat::from_columns(img.p(), img.prec(), img.rows(), cols);
}

std::vector<int> jumps_from_graded(const std::vector<std::pair<int, unsigned>>& gr, unsigned dim) {
    std::vector<int> jumps;
    for (auto [k, d] : gr)
        for (unsigned i = 0; i < d; ++i) jumps.push_back(k);
    if (jumps.size() != dim) throw error("dcris: graded dimensions do not sum to the rank; widen the k-range");
    return jumps;
}

}  // namespace

std::vector<std::pair<int, unsigned>> graded_dims(const WachModuleA& n, int kmin, int kmax, unsigned guard) {
    std::vector<unsigned> ranks;
    for (int k = kmin; k <= kmax + 1; ++k) ranks.push_back(saturated_rank(fil_image_mod_mu(n, k, n.mu_prec), guard));
    std::vector<std::pair<int, unsigned>> out;
    for (int k = kmin; k <= kmax; ++k) {
        unsigned rk = ranks[k - kmin], rk1 = ranks[k - kmin + 1];
        out.emplace_back(k, rk >= rk1 ? rk - rk1 : 0);
    }
    return out;
}

std::vector<std::pair<int, unsigned>> graded_dims(const WachModuleS& m, int kmin, int kmax, unsigned guard) {
    std::vector<unsigned> ranks;
    for (int k = kmin; k <= kmax + 1; ++k)
        ranks.push_back(saturated_rank(fil_image_mod_mu0(m, k, m.mu0_prec), guard));
    std::vector<std::pair<int, unsigned>> out;
    for (int k = kmin; k <= kmax; ++k) {
        unsigned rk = ranks[k - kmin], rk1 = ranks[k - kmin + 1];
        out.emplace_back(k, rk >= rk1 ? rk - rk1 : 0);
    }
    return out;
}

FilteredPhiModule dcris(const WachModuleA& n, unsigned guard) {
    require_valid(n);
    VerifyReport rep = verify(n);
    unsigned s = rep.det_exponent.value_or(n.rank * (n.h + 1));
    int kmin = -static_cast<int>(n.h) - 1;
    int kmax = static_cast<int>(s) + 1;
    FilteredPhiModule d;
    d.ring = n.ring;
    d.dim = n.rank * n.ring->f();
    d.denominator_exp = n.h;
    d.phi0.assign(n.rank, std::vector<OFElem>(n.rank, n.ring->zero()));
    for (unsigned i = 0; i < n.rank; ++i)
        for (unsigned j = 0; j < n.rank; ++j) d.phi0[i][j] = n.phi_num[i][j].constant_term();
    d.jumps = jumps_from_graded(graded_dims(n, kmin, kmax, guard), n.rank * n.ring->f());
    d.fil0_basis = saturated_image_basis(fil_image_mod_mu(n, 0, n.mu_prec), guard);
    return d;
}

FilteredPhiModule dcris(const WachModuleS& m, unsigned guard) {
    require_valid(m);
    VerifyReport rep = verify(m);
    unsigned s = rep.det_exponent.value_or(m.rank * (m.h + 1));
    int kmin = -static_cast<int>(m.h) - 1;
    int kmax = static_cast<int>(s) + 1;
    FilteredPhiModule d;
    d.ring = m.ring;
    d.dim = m.rank * m.ring->f();
    d.denominator_exp = m.h;
    d.phi0.assign(m.rank, std::vector<OFElem>(m.rank, m.ring->zero()));
    for (unsigned i = 0; i < m.rank; ++i)
        for (unsigned j = 0; j < m.rank; ++j) d.phi0[i][j] = m.phi_num[i][j].constant_term();
    d.jumps = jumps_from_graded(graded_dims(m, kmin, kmax, guard), m.rank * m.ring->f());
    d.fil0_basis = saturated_image_basis(fil_image_mod_mu0(m, 0, m.mu0_prec), guard);
    return d;
}

}  // namespace wachcoh
