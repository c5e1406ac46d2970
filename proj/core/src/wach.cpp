#include "wachcoh/wach.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wachcoh {

/* ---- series-matrix helpers ---- */

AMat amat_identity(const OFRingPtr& ring, unsigned d, unsigned mu_prec) {
    AMat m(d, std::vector<AFSeries>(d, AFSeries(ring, mu_prec)));
    for (unsigned i = 0; i < d; ++i) m[i][i] = AFSeries::from_int(ring, 1, mu_prec);
    return m;
}

AMat amat_mul(const AMat& a, const AMat& b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    if (a.empty() || a[0].size() != k) throw error("amat_mul: shape mismatch");
    AMat r(n, std::vector<AFSeries>(m));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) {
            AFSeries acc = a[i][0] * b[0][j];
            for (size_t t = 1; t < k; ++t) acc = acc + a[i][t] * b[t][j];
            r[i][j] = acc;
        }
    return r;
}

AMat amat_scale(const AMat& a, const AFSeries& s) {
    AMat r = a;
    for (auto& row : r)
        for (auto& e : row) e = e * s;
    return r;
}

std::vector<AFSeries> amat_apply(const AMat& a, const std::vector<AFSeries>& v) {
    if (a.empty()) return {};
    if (a[0].size() != v.size()) throw error("amat_apply: shape mismatch");
    std::vector<AFSeries> r;
    r.reserve(a.size());
    for (const auto& row : a) {
        AFSeries acc = row[0] * v[0];
        for (size_t t = 1; t < v.size(); ++t) acc = acc + row[t] * v[t];
        r.push_back(acc);
    }
    return r;
}

AMat amat_map(const AMat& a, const std::function<AFSeries(const AFSeries&)>& f) {
    AMat r = a;
    for (auto& row : r)
        for (auto& e : row) e = f(e);
    return r;
}

AFSeries amat_det(const AMat& a) {
    size_t d = a.size();
    if (d == 0) throw error("amat_det: empty matrix");
    if (d == 1) return a[0][0];
    // Laplace expansion along the first row; fine for desk-scale ranks
    AFSeries acc(a[0][0].ring(), a[0][0].mu_prec());
    for (size_t j = 0; j < d; ++j) {
        if (a[0][j].is_zero()) continue;
        AMat minor(d - 1, std::vector<AFSeries>(d - 1));
        for (size_t i = 1; i < d; ++i) {
            size_t cj = 0;
            for (size_t k = 0; k < d; ++k) {
                if (k == j) continue;
                minor[i - 1][cj++] = a[i][k];
            }
        }
        AFSeries term = a[0][j] * amat_det(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

AMat amat_invert_unipotent(const AMat& a) {
    size_t d = a.size();
    const OFRingPtr& ring = a[0][0].ring();
    unsigned M = a[0][0].mu_prec();
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) {
            OFElem c0 = a[i][j].constant_term();
            if ((i == j && !(c0 - ring->one()).is_zero()) || (i != j && !c0.is_zero()))
                throw error("amat_invert_unipotent: matrix is not I mod mu");
        }
    AMat x = amat_identity(ring, static_cast<unsigned>(d), M);
    AMat two = amat_identity(ring, static_cast<unsigned>(d), M);
    for (auto& row : two)
        for (auto& e : row) e = e + e;
    unsigned steps = 1;
    for (unsigned reach = 1; reach < M; reach *= 2) ++steps;
    for (unsigned s = 0; s <= steps; ++s) {
        AMat ax = amat_mul(a, x);
        AMat t(d, std::vector<AFSeries>(d));
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j) t[i][j] = two[i][j] - ax[i][j];
        x = amat_mul(x, t);
    }
    return x;
}

bool amat_equal(const AMat& a, const AMat& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (size_t j = 0; j < a[i].size(); ++j)
            if (a[i][j] != b[i][j]) return false;
    }
    return true;
}

AMat amat_truncated(const AMat& a, unsigned mu_prec) {
    AMat r = a;
    for (auto& row : r)
        for (auto& e : row) e = e.truncated(mu_prec);
    return r;
}

SMat smat_identity(const OFRingPtr& ring, unsigned d, unsigned mu0_prec) {
    SMat m(d, std::vector<SSeries>(d, SSeries(ring, mu0_prec)));
    for (unsigned i = 0; i < d; ++i) m[i][i] = SSeries::from_int(ring, 1, mu0_prec);
    return m;
}

SMat smat_mul(const SMat& a, const SMat& b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    if (a.empty() || a[0].size() != k) throw error("smat_mul: shape mismatch");
    SMat r(n, std::vector<SSeries>(m));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) {
            SSeries acc = a[i][0] * b[0][j];
            for (size_t t = 1; t < k; ++t) acc = acc + a[i][t] * b[t][j];
            r[i][j] = acc;
        }
    return r;
}

SMat smat_map(const SMat& a, const std::function<SSeries(const SSeries&)>& f) {
    SMat r = a;
    for (auto& row : r)
        for (auto& e : row) e = f(e);
    return r;
}

SSeries smat_det(const SMat& a) {
    size_t d = a.size();
    if (d == 0) throw error("smat_det: empty matrix");
    if (d == 1) return a[0][0];
    SSeries acc(a[0][0].ring(), a[0][0].mu0_prec());
    for (size_t j = 0; j < d; ++j) {
        if (a[0][j].is_zero()) continue;
        SMat minor(d - 1, std::vector<SSeries>(d - 1));
        for (size_t i = 1; i < d; ++i) {
            size_t cj = 0;
            for (size_t k = 0; k < d; ++k) {
                if (k == j) continue;
                minor[i - 1][cj++] = a[i][k];
            }
        }
        SSeries term = a[0][j] * smat_det(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

bool smat_equal(const SMat& a, const SMat& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (size_t j = 0; j < a[i].size(); ++j)
            if (a[i][j] != b[i][j]) return false;
    }
    return true;
}

SMat smat_truncated(const SMat& a, unsigned mu0_prec) {
    SMat r = a;
    for (auto& row : r)
        for (auto& e : row) e = e.truncated(mu0_prec);
    return r;
}

/* ---- WachModuleA ---- */

std::vector<AFSeries> WachModuleA::zero_vec() const {
    return std::vector<AFSeries>(rank, AFSeries(ring, mu_prec));
}

std::vector<AFSeries> WachModuleA::basis_vec(unsigned i) const {
    auto v = zero_vec();
    v.at(i) = AFSeries::from_int(ring, 1, mu_prec);
    return v;
}

std::vector<AFSeries> WachModuleA::apply_gamma(const std::vector<AFSeries>& v) const {
    ExactZp chi = chi_gamma(p());
    std::vector<AFSeries> gv;
    gv.reserve(v.size());
    for (const auto& x : v) gv.push_back(gamma_act(chi, x));
    return amat_apply(g_gamma, gv);
}

std::vector<AFSeries> WachModuleA::apply_tor(const std::vector<AFSeries>& v) const {
    ExactZp cg = torsion_char(p());
    std::vector<AFSeries> gv;
    gv.reserve(v.size());
    for (const auto& x : v) gv.push_back(gamma_act(cg, x));
    return amat_apply(g_tor, gv);
}

std::vector<AFSeries> WachModuleA::apply_phi_raw(const std::vector<AFSeries>& v) const {
    std::vector<AFSeries> fv;
    fv.reserve(v.size());
    for (const auto& x : v) fv.push_back(phi(x));
    return amat_apply(phi_num, fv);
}

std::vector<AFSeries> WachModuleA::nabla_q(const std::vector<AFSeries>& v) const {
    std::vector<AFSeries> gv = apply_gamma(v);
    std::vector<AFSeries> r;
    r.reserve(v.size());
    for (size_t i = 0; i < v.size(); ++i) r.push_back(shift_down_mu(gv[i] - v[i], 1));
    return r;
}

WachModuleA WachModuleA::truncated(unsigned m) const {
    WachModuleA r = *this;
    r.mu_prec = std::min(m, mu_prec);
    r.phi_num = amat_truncated(phi_num, r.mu_prec);
    r.g_gamma = amat_truncated(g_gamma, r.mu_prec);
    r.g_tor = amat_truncated(g_tor, r.mu_prec);
    return r;
}

/* ---- WachModuleS ---- */

std::vector<SSeries> WachModuleS::zero_vec() const {
    return std::vector<SSeries>(rank, SSeries(ring, mu0_prec));
}

std::vector<SSeries> WachModuleS::basis_vec(unsigned i) const {
    auto v = zero_vec();
    v.at(i) = SSeries::from_int(ring, 1, mu0_prec);
    return v;
}

std::vector<SSeries> WachModuleS::apply_gamma(const std::vector<SSeries>& v) const {
    std::vector<SSeries> gv;
    gv.reserve(v.size());
    for (const auto& x : v) gv.push_back(gamma0_S(x));
    std::vector<SSeries> r;
    r.reserve(v.size());
    for (size_t i = 0; i < rank; ++i) {
        SSeries acc = g_gamma[i][0] * gv[0];
        for (size_t t = 1; t < rank; ++t) acc = acc + g_gamma[i][t] * gv[t];
        r.push_back(acc);
    }
    return r;
}

std::vector<SSeries> WachModuleS::apply_phi_raw(const std::vector<SSeries>& v) const {
    std::vector<SSeries> fv;
    fv.reserve(v.size());
    for (const auto& x : v) fv.push_back(phi_S(x));
    std::vector<SSeries> r;
    r.reserve(v.size());
    for (size_t i = 0; i < rank; ++i) {
        SSeries acc = phi_num[i][0] * fv[0];
        for (size_t t = 1; t < rank; ++t) acc = acc + phi_num[i][t] * fv[t];
        r.push_back(acc);
    }
    return r;
}

std::vector<SSeries> WachModuleS::nabla_0(const std::vector<SSeries>& v) const {
    std::vector<SSeries> gv = apply_gamma(v);
    std::vector<SSeries> r;
    r.reserve(v.size());
    for (size_t i = 0; i < v.size(); ++i) r.push_back(shift_down_mu0(gv[i] - v[i], 1));
    return r;
}

WachModuleS WachModuleS::truncated(unsigned m) const {
    WachModuleS r = *this;
    r.mu0_prec = std::min(m, mu0_prec);
    r.phi_num = smat_truncated(phi_num, r.mu0_prec);
    r.g_gamma = smat_truncated(g_gamma, r.mu0_prec);
    return r;
}

/* ---- verification ---- */

bool VerifyReport::pass() const {
    for (const auto& it : items)
        if (!it.pass) return false;
    return true;
}

std::string VerifyReport::summary() const {
    std::ostringstream os;
    for (const auto& it : items)
        os << (it.pass ? "PASS " : "FAIL ") << it.axiom << (it.detail.empty() ? "" : ": " + it.detail) << "\n";
    return os.str();
}

namespace {

bool congruent_identity_mod_var(const AMat& g, const OFRingPtr& ring, std::string* detail) {
    for (size_t i = 0; i < g.size(); ++i)
        for (size_t j = 0; j < g[i].size(); ++j) {
            OFElem c = g[i][j].constant_term();
            OFElem want = i == j ? ring->one() : ring->zero();
            if (!(c - want).is_zero()) {
                *detail = "entry (" + std::to_string(i) + "," + std::to_string(j) + ") has constant term " +
                          c.str();
                return false;
            }
        }
    return true;
}

bool congruent_identity_mod_var_S(const SMat& g, const OFRingPtr& ring, std::string* detail) {
    for (size_t i = 0; i < g.size(); ++i)
        for (size_t j = 0; j < g[i].size(); ++j) {
            OFElem c = g[i][j].constant_term();
            OFElem want = i == j ? ring->one() : ring->zero();
            if (!(c - want).is_zero()) {
                *detail = "entry (" + std::to_string(i) + "," + std::to_string(j) + ") has constant term " +
                          c.str();
                return false;
            }
        }
    return true;
}

}  // namespace

VerifyReport verify(const WachModuleA& m) {
    VerifyReport rep;
    const OFRingPtr& ring = m.ring;
    uint64_t p = m.p();
    unsigned p1 = static_cast<unsigned>(p) - 1;

    bool shapes = m.phi_num.size() == m.rank && m.g_gamma.size() == m.rank && m.g_tor.size() == m.rank;
    for (const AMat* mat : {&m.phi_num, &m.g_gamma, &m.g_tor})
        for (const auto& row : *mat)
            if (row.size() != m.rank) shapes = false;
    rep.items.push_back({"matrix shapes", shapes, shapes ? "" : "matrices must be rank x rank"});
    if (!shapes) return rep;

    std::string detail;
    bool g1 = congruent_identity_mod_var(m.g_gamma, ring, &detail);
    rep.items.push_back({"gamma trivial mod mu", g1, g1 ? "" : detail});
    detail.clear();
    bool t1 = congruent_identity_mod_var(m.g_tor, ring, &detail);
    rep.items.push_back({"torsion trivial mod mu", t1, t1 ? "" : detail});

    // determinant certificate: det(PhiNum) = unit * [p]_q^s
    {
        AFSeries det = amat_det(m.phi_num);
        unsigned s = 0;
        bool ok = false;
        std::string d2;
        while (true) {
            if (det.mu_prec() < p) {
                d2 = "precision exhausted before a unit constant term appeared";
                break;
            }
            if (det.constant_term().is_unit()) {
                ok = true;
                break;
            }
            try {
                det = divide_by_pq(det);
                ++s;
            } catch (const not_divisible_error& e) {
                d2 = std::string("determinant is not a unit times a [p]_q power: ") + e.what();
                break;
            }
        }
        rep.items.push_back({"phi determinant certificate", ok, ok ? "s = " + std::to_string(s) : d2});
        if (ok) rep.det_exponent = s;
    }

    // commutation identities, with the [p]_q^h denominators cleared
    AFSeries pqh = AFSeries::from_int(ring, 1, m.mu_prec);
    AFSeries pq = pq_series(ring, m.mu_prec);
    for (unsigned i = 0; i < m.h; ++i) pqh = pqh * pq;
    ExactZp chi = chi_gamma(p);
    ExactZp chg = torsion_char(p);
    auto gamma_of = [&](const AFSeries& s) { return gamma_act(chi, s); };
    auto tor_of = [&](const AFSeries& s) { return gamma_act(chg, s); };
    AFSeries gamma_pqh = gamma_act(chi, pqh);
    AFSeries tor_pqh = gamma_act(chg, pqh);

    {
        AMat lhs = amat_scale(amat_mul(m.g_gamma, amat_map(m.phi_num, gamma_of)), pqh);
        AMat rhs = amat_scale(amat_mul(m.phi_num, amat_map(m.g_gamma, [](const AFSeries& s) { return phi(s); })),
                              gamma_pqh);
        bool ok = amat_equal(lhs, rhs);
        rep.items.push_back({"phi-gamma commutation", ok, ok ? "" : "operators differ at precision"});
    }
    {
        AMat lhs = amat_scale(amat_mul(m.g_tor, amat_map(m.phi_num, tor_of)), pqh);
        AMat rhs = amat_scale(amat_mul(m.phi_num, amat_map(m.g_tor, [](const AFSeries& s) { return phi(s); })),
                              tor_pqh);
        bool ok = amat_equal(lhs, rhs);
        rep.items.push_back({"phi-torsion commutation", ok, ok ? "" : "operators differ at precision"});
    }
    {
        AMat lhs = amat_mul(m.g_gamma, amat_map(m.g_tor, gamma_of));
        AMat rhs = amat_mul(m.g_tor, amat_map(m.g_gamma, tor_of));
        bool ok = amat_equal(lhs, rhs);
        rep.items.push_back({"gamma-torsion commutation", ok, ok ? "" : "operators differ at precision"});
    }
    {
        // g applied p-1 times is the identity: Gtor g(Gtor) ... g^{p-2}(Gtor) = I
        AMat acc = m.g_tor;
        AMat cur = m.g_tor;
        for (unsigned j = 1; j < p1; ++j) {
            cur = amat_map(cur, tor_of);
            acc = amat_mul(acc, cur);
        }
        bool ok = amat_equal(acc, amat_identity(ring, m.rank, m.mu_prec));
        rep.items.push_back({"torsion order p-1", ok, ok ? "" : "cocycle product is not the identity"});
    }
    return rep;
}

VerifyReport verify(const WachModuleS& m) {
    VerifyReport rep;
    const OFRingPtr& ring = m.ring;

    bool shapes = m.phi_num.size() == m.rank && m.g_gamma.size() == m.rank;
    for (const SMat* mat : {&m.phi_num, &m.g_gamma})
        for (const auto& row : *mat)
            if (row.size() != m.rank) shapes = false;
    rep.items.push_back({"matrix shapes", shapes, shapes ? "" : "matrices must be rank x rank"});
    if (!shapes) return rep;

    std::string detail;
    bool g1 = congruent_identity_mod_var_S(m.g_gamma, ring, &detail);
    rep.items.push_back({"gamma trivial mod mu0", g1, g1 ? "" : detail});

    {
        SSeries det = smat_det(m.phi_num);
        unsigned s = 0;
        bool ok = false;
        std::string d2;
        while (true) {
            if (det.mu0_prec() < 2) {
                d2 = "precision exhausted before a unit constant term appeared";
                break;
            }
            if (det.constant_term().is_unit()) {
                ok = true;
                break;
            }
            try {
                det = divide_by_ptilde_S(det);
                ++s;
            } catch (const not_divisible_error& e) {
                d2 = std::string("determinant is not a unit times a ptilde power: ") + e.what();
                break;
            }
        }
        rep.items.push_back({"phi determinant certificate (ptilde)", ok, ok ? "s = " + std::to_string(s) : d2});
        if (ok) rep.det_exponent = s;
    }

    {
        // ptilde^h G gamma(A) == gamma(ptilde)^h A phi(G)
        unsigned p1 = static_cast<unsigned>(m.p()) - 1;
        SSeries pt = to_mu0(ptilde_series(ring, std::max(m.mu0_prec * p1, p1 + 1)));
        pt = pt.truncated(m.mu0_prec);
        SSeries pth = SSeries::from_int(ring, 1, m.mu0_prec);
        for (unsigned i = 0; i < m.h; ++i) pth = pth * pt;
        SSeries g_pth = gamma0_S(pth);
        SMat lhs = smat_map(m.g_gamma, [](const SSeries& s) { return s; });
        lhs = smat_mul(m.g_gamma, smat_map(m.phi_num, [](const SSeries& s) { return gamma0_S(s); }));
        for (auto& row : lhs)
            for (auto& e : row) e = e * pth;
        SMat rhs = smat_mul(m.phi_num, smat_map(m.g_gamma, [](const SSeries& s) { return phi_S(s); }));
        for (auto& row : rhs)
            for (auto& e : row) e = e * g_pth;
        bool ok = smat_equal(lhs, rhs);
        rep.items.push_back({"phi-gamma commutation over S", ok, ok ? "" : "operators differ at precision"});
    }
    return rep;
}

void require_valid(const WachModuleA& m) {
    VerifyReport r = verify(m);
    if (!r.pass()) throw axiom_error("module '" + m.label + "' fails verification:\n" + r.summary());
}

void require_valid(const WachModuleS& m) {
    VerifyReport r = verify(m);
    if (!r.pass()) throw axiom_error("module '" + m.label + "' fails verification:\n" + r.summary());
}

/* ---- constructors ---- */

WachModuleA trivial_module(const OFRingPtr& ring, unsigned mu_prec) {
    WachModuleA m;
    m.ring = ring;
    m.mu_prec = mu_prec;
    m.rank = 1;
    m.h = 0;
    m.phi_num = amat_identity(ring, 1, mu_prec);
    m.g_gamma = amat_identity(ring, 1, mu_prec);
    m.g_tor = amat_identity(ring, 1, mu_prec);
    m.label = "trivial";
    m.expected = ExpectedGalois{1, 1, std::vector<int>{0}};
    return m;
}

WachModuleA unramified_char(const OFRingPtr& ring, unsigned mu_prec, const OFElem& u) {
    if (!u.is_unit()) throw error("unramified_char: u must be a unit of O_F");
    WachModuleA m = trivial_module(ring, mu_prec);
    m.phi_num[0][0] = AFSeries::constant(ring, u, mu_prec);
    m.label = "unramified(" + u.str() + ")";
    m.expected = ExpectedGalois{0, 0, std::vector<int>{0}};
    return m;
}

namespace {

/* chi(gamma) mu / gamma(mu) and chi(g) mu / g(mu): units congruent to 1 mod mu */
AFSeries twist_unit(const OFRingPtr& ring, unsigned mu_prec, const ExactZp& character) {
    AFSeries gmu = gamma_act(character, AFSeries::mu(ring, mu_prec + 1));
    AFSeries gmu_over_mu = shift_down_mu(gmu, 1);  // unit, constant term = character
    Zp c = character.at(ring->prec());
    return invert(gmu_over_mu) * c;
}

}  // namespace

WachModuleA tate_twist(const WachModuleA& n, int r) {
    if (r == 0) return n;
    WachModuleA m = n;
    const OFRingPtr& ring = n.ring;
    unsigned M = n.mu_prec;
    AFSeries pq = pq_series(ring, M);
    if (r > 0) {
        m.h = n.h + static_cast<unsigned>(r);
    } else {
        AFSeries pqr = AFSeries::from_int(ring, 1, M);
        for (int i = 0; i < -r; ++i) pqr = pqr * pq;
        m.phi_num = amat_scale(n.phi_num, pqr);
    }
    AFSeries fg = twist_unit(ring, M, chi_gamma(n.p()));
    AFSeries ft = twist_unit(ring, M, torsion_char(n.p()));
    AFSeries fgr = AFSeries::from_int(ring, 1, M);
    AFSeries ftr = AFSeries::from_int(ring, 1, M);
    unsigned ar = static_cast<unsigned>(r > 0 ? r : -r);
    for (unsigned i = 0; i < ar; ++i) {
        fgr = fgr * fg;
        ftr = ftr * ft;
    }
    if (r < 0) {
        fgr = invert(fgr);
        ftr = invert(ftr);
    }
    m.g_gamma = amat_scale(n.g_gamma, fgr);
    m.g_tor = amat_scale(n.g_tor, ftr);
    m.label = "twist(" + n.label + ", " + std::to_string(r) + ")";
    m.expected = std::nullopt;
    return m;
}

WachModuleA direct_sum(const WachModuleA& a, const WachModuleA& b) {
    if (a.p() != b.p() || a.prec_p() != b.prec_p() || a.ring->f() != b.ring->f())
        throw error("direct_sum: mismatched (p, f, precision)");
    unsigned M = std::min(a.mu_prec, b.mu_prec);
    WachModuleA A = a.truncated(M), B = b.truncated(M);
    WachModuleA m;
    m.ring = a.ring;
    m.mu_prec = M;
    m.rank = a.rank + b.rank;
    m.h = std::max(a.h, b.h);
    AFSeries pq = pq_series(a.ring, M);
    auto rescale = [&](AMat mat, unsigned dh) {
        AFSeries f = AFSeries::from_int(a.ring, 1, M);
        for (unsigned i = 0; i < dh; ++i) f = f * pq;
        return dh == 0 ? mat : amat_scale(mat, f);
    };
    AMat pa = rescale(A.phi_num, m.h - a.h);
    AMat pb = rescale(B.phi_num, m.h - b.h);
    auto block = [&](const AMat& x, const AMat& y) {
        AMat r(m.rank, std::vector<AFSeries>(m.rank, AFSeries(a.ring, M)));
        for (unsigned i = 0; i < a.rank; ++i)
            for (unsigned j = 0; j < a.rank; ++j) r[i][j] = x[i][j];
        for (unsigned i = 0; i < b.rank; ++i)
            for (unsigned j = 0; j < b.rank; ++j) r[a.rank + i][a.rank + j] = y[i][j];
        return r;
    };
    m.phi_num = block(pa, pb);
    m.g_gamma = block(A.g_gamma, B.g_gamma);
    m.g_tor = block(A.g_tor, B.g_tor);
    m.label = "sum(" + a.label + ", " + b.label + ")";
    if (a.expected && b.expected && a.expected->h0_dim && b.expected->h0_dim && a.expected->h1f_dim &&
        b.expected->h1f_dim && a.expected->dcris_jumps && b.expected->dcris_jumps) {
        std::vector<int> jumps = *a.expected->dcris_jumps;
        jumps.insert(jumps.end(), b.expected->dcris_jumps->begin(), b.expected->dcris_jumps->end());
        std::sort(jumps.begin(), jumps.end());
        m.expected = ExpectedGalois{*a.expected->h0_dim + *b.expected->h0_dim,
                                    *a.expected->h1f_dim + *b.expected->h1f_dim, jumps};
    }
    return m;
}

WachModuleA tensor(const WachModuleA& a, const WachModuleA& b) {
    if (a.p() != b.p() || a.prec_p() != b.prec_p() || a.ring->f() != b.ring->f())
        throw error("tensor: mismatched (p, f, precision)");
    unsigned M = std::min(a.mu_prec, b.mu_prec);
    WachModuleA A = a.truncated(M), B = b.truncated(M);
    WachModuleA m;
    m.ring = a.ring;
    m.mu_prec = M;
    m.rank = a.rank * b.rank;
    m.h = a.h + b.h;
    auto kron = [&](const AMat& x, const AMat& y) {
        AMat r(m.rank, std::vector<AFSeries>(m.rank, AFSeries(a.ring, M)));
        for (unsigned i1 = 0; i1 < a.rank; ++i1)
            for (unsigned j1 = 0; j1 < a.rank; ++j1)
                for (unsigned i2 = 0; i2 < b.rank; ++i2)
                    for (unsigned j2 = 0; j2 < b.rank; ++j2)
                        r[i1 * b.rank + i2][j1 * b.rank + j2] = x[i1][j1] * y[i2][j2];
        return r;
    };
    m.phi_num = kron(A.phi_num, B.phi_num);
    m.g_gamma = kron(A.g_gamma, B.g_gamma);
    m.g_tor = kron(A.g_tor, B.g_tor);
    m.label = "tensor(" + a.label + ", " + b.label + ")";
    return m;
}

void ModuleElement::canonicalize() {
    while (pq_exponent > 0) {
        std::vector<AFSeries> quot;
        quot.reserve(coords.size());
        try {
            for (const auto& c : coords) quot.push_back(divide_by_pq(c));
        } catch (const not_divisible_error&) {
            return;
        } catch (const precision_error&) {
            return;
        }
        coords = std::move(quot);
        --pq_exponent;
    }
}

WachModuleA extension_from_cocycle(const WachModuleA& n, const std::vector<AFSeries>& x_in,
                                   const std::vector<AFSeries>& y_in) {
    if (x_in.size() != n.rank || y_in.size() != n.rank)
        throw error("extension_from_cocycle: wrong vector length");
    unsigned M = n.mu_prec;
    const OFRingPtr& ring = n.ring;
    uint64_t p = n.p();
    unsigned p1 = static_cast<unsigned>(p) - 1;

    // average onto the F_p^x-equivariant pairs: x under (g(mu)/mu) g_N and
    // y under g_N; required by g(e) = e, and cohomologous to the input
    ExactZp chg = torsion_char(p);
    AFSeries gmu = gamma_act(chg, AFSeries::mu(ring, M + 1));
    AFSeries factor = shift_down_mu(gmu, 1);
    auto apply_gn = [&](const std::vector<AFSeries>& v) {
        std::vector<AFSeries> gv;
        for (const auto& s : v) gv.push_back(gamma_act(chg, s));
        return amat_apply(n.g_tor, gv);
    };
    std::vector<AFSeries> x = x_in, cx = x_in, y = y_in, cy = y_in;
    for (unsigned j = 1; j < p1; ++j) {
        cx = apply_gn(cx);
        for (auto& s : cx) s = s * factor.truncated(s.mu_prec());
        cy = apply_gn(cy);
        for (unsigned i = 0; i < n.rank; ++i) {
            x[i] = x[i] + cx[i];
            y[i] = y[i] + cy[i];
        }
    }
    Zp avg = Zp(p, n.prec_p(), p - 1).inv();
    for (unsigned i = 0; i < n.rank; ++i) {
        x[i] = x[i] * avg;
        y[i] = y[i] * avg;
    }

    AFSeries pqh = AFSeries::from_int(ring, 1, M);
    AFSeries pq = pq_series(ring, M);
    for (unsigned i = 0; i < n.h; ++i) pqh = pqh * pq;
    WachModuleA m;
    m.ring = ring;
    m.mu_prec = M;
    m.rank = n.rank + 1;
    m.h = n.h;
    auto embed = [&](const AMat& inner) {
        AMat r(m.rank, std::vector<AFSeries>(m.rank, AFSeries(ring, M)));
        for (unsigned i = 0; i < n.rank; ++i)
            for (unsigned j = 0; j < n.rank; ++j) r[i][j] = inner[i][j];
        r[n.rank][n.rank] = AFSeries::from_int(ring, 1, M);
        return r;
    };
    m.phi_num = embed(n.phi_num);
    for (unsigned i = 0; i < n.rank; ++i) m.phi_num[i][n.rank] = -(pqh * y[i].truncated(M));
    m.phi_num[n.rank][n.rank] = pqh;
    m.g_gamma = embed(n.g_gamma);
    for (unsigned i = 0; i < n.rank; ++i) m.g_gamma[i][n.rank] = mul_pow_mu(x[i].truncated(M), 1);
    m.g_tor = embed(n.g_tor);
    m.label = "ext(" + n.label + ")";
    return m;
}

WachModuleA base_change(const WachModuleA& m, const AMat& x) {
    AMat xinv = amat_invert_unipotent(x);
    ExactZp chi = chi_gamma(m.p());
    ExactZp chg = torsion_char(m.p());
    WachModuleA r = m;
    r.phi_num = amat_mul(xinv, amat_mul(m.phi_num, amat_map(x, [](const AFSeries& s) { return phi(s); })));
    r.g_gamma =
        amat_mul(xinv, amat_mul(m.g_gamma, amat_map(x, [&](const AFSeries& s) { return gamma_act(chi, s); })));
    r.g_tor =
        amat_mul(xinv, amat_mul(m.g_tor, amat_map(x, [&](const AFSeries& s) { return gamma_act(chg, s); })));
    r.label = m.label + "'";
    return r;
}

AMat descent_basis(const WachModuleA& n) {
    const OFRingPtr& ring = n.ring;
    uint64_t p = n.p();
    unsigned p1 = static_cast<unsigned>(p) - 1;
    ExactZp chg = torsion_char(p);
    AMat acc = amat_identity(ring, n.rank, n.mu_prec);
    AMat cocycle = amat_identity(ring, n.rank, n.mu_prec);
    AMat gj_tor = n.g_tor;  // g^j applied to Gtor, starting at j = 0
    for (unsigned j = 1; j < p1; ++j) {
        cocycle = amat_mul(cocycle, gj_tor);
        for (unsigned i = 0; i < n.rank; ++i)
            for (unsigned c = 0; c < n.rank; ++c) acc[i][c] = acc[i][c] + cocycle[i][c];
        gj_tor = amat_map(gj_tor, [&](const AFSeries& s) { return gamma_act(chg, s); });
    }
    Zp inv = Zp(p, ring->prec(), p - 1).inv();
    for (auto& row : acc)
        for (auto& e : row) e = e * inv;
    return acc;
}

WachModuleS descend(const WachModuleA& n) {
    require_valid(n);
    const OFRingPtr& ring = n.ring;
    AMat P = descent_basis(n);
    WachModuleA nb = base_change(n, P);
    // in the averaged basis the torsion action must be trivial
    if (!amat_equal(nb.g_tor, amat_identity(ring, n.rank, n.mu_prec)))
        throw axiom_error("descend: torsion action is nontrivial in the averaged basis");
    // ptilde^h phi = (ptilde/[p]_q)^h (cleared operator); entries become invariant
    AFSeries wt = ptilde_over_pq(ring, n.mu_prec);
    AFSeries wth = AFSeries::from_int(ring, 1, n.mu_prec);
    for (unsigned i = 0; i < n.h; ++i) wth = wth * wt;
    AMat phiS = amat_scale(nb.phi_num, wth);
    WachModuleS m;
    m.ring = ring;
    m.rank = n.rank;
    m.h = n.h;
    m.mu0_prec = n.mu_prec / (static_cast<unsigned>(n.p()) - 1);
    if (m.mu0_prec == 0) throw precision_error("descend: mu-precision below p-1");
    auto to_S = [&](const AMat& mat) {
        SMat r(n.rank, std::vector<SSeries>(n.rank));
        for (unsigned i = 0; i < n.rank; ++i)
            for (unsigned j = 0; j < n.rank; ++j) r[i][j] = to_mu0(mat[i][j]).truncated(m.mu0_prec);
        return r;
    };
    m.phi_num = to_S(phiS);
    m.g_gamma = to_S(nb.g_gamma);
    m.label = "descend(" + n.label + ")";
    m.expected = n.expected;
    return m;
}

WachModuleA ascend(const WachModuleS& m) {
    require_valid(m);
    const OFRingPtr& ring = m.ring;
    unsigned p1 = static_cast<unsigned>(m.p()) - 1;
    unsigned M = p1 * m.mu0_prec;
    WachModuleA n;
    n.ring = ring;
    n.mu_prec = M;
    n.rank = m.rank;
    n.h = m.h;
    AFSeries wt_inv = invert(ptilde_over_pq(ring, M));
    AFSeries wt_inv_h = AFSeries::from_int(ring, 1, M);
    for (unsigned i = 0; i < m.h; ++i) wt_inv_h = wt_inv_h * wt_inv;
    auto to_A = [&](const SMat& mat) {
        AMat r(m.rank, std::vector<AFSeries>(m.rank));
        for (unsigned i = 0; i < m.rank; ++i)
            for (unsigned j = 0; j < m.rank; ++j) r[i][j] = from_mu0(mat[i][j], M);
        return r;
    };
    n.phi_num = amat_scale(to_A(m.phi_num), wt_inv_h);
    n.g_gamma = to_A(m.g_gamma);
    n.g_tor = amat_identity(ring, m.rank, M);
    n.label = "ascend(" + m.label + ")";
    n.expected = m.expected;
    return n;
}

}  // namespace wachcoh
