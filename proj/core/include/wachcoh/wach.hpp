#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wachcoh/series.hpp"

namespace wachcoh {

/* Square matrices of truncated series, row-major. */
using AMat = std::vector<std::vector<AFSeries>>;
using SMat = std::vector<std::vector<SSeries>>;

AMat amat_identity(const OFRingPtr& ring, unsigned d, unsigned mu_prec);
AMat amat_mul(const AMat& a, const AMat& b);
AMat amat_scale(const AMat& a, const AFSeries& s);
std::vector<AFSeries> amat_apply(const AMat& a, const std::vector<AFSeries>& v);
AMat amat_map(const AMat& a, const std::function<AFSeries(const AFSeries&)>& f);
AFSeries amat_det(const AMat& a);
/* Inverse of a matrix congruent to the identity mod mu (Newton iteration). */
AMat amat_invert_unipotent(const AMat& a);
bool amat_equal(const AMat& a, const AMat& b);
AMat amat_truncated(const AMat& a, unsigned mu_prec);

SMat smat_identity(const OFRingPtr& ring, unsigned d, unsigned mu0_prec);
SMat smat_mul(const SMat& a, const SMat& b);
SMat smat_map(const SMat& a, const std::function<SSeries(const SSeries&)>& f);
SSeries smat_det(const SMat& a);
bool smat_equal(const SMat& a, const SMat& b);
SMat smat_truncated(const SMat& a, unsigned mu0_prec);

/* Optional catalog metadata: the expected Galois-side answers. */
struct ExpectedGalois {
    std::optional<unsigned> h0_dim;
    std::optional<unsigned> h1f_dim;
    std::optional<std::vector<int>> dcris_jumps;
};

/*
 * WachModuleA: a Wach module over A_F^+ presented by matrices at precision
 * (p^N, mu^M).  The Frobenius operator is phi(v) = [p]_q^{-h} PhiNum phi(v)
 * on coordinate vectors; gamma and the torsion generator g act by
 * Ggamma gamma(v) and Gtor g(v).
 */
struct WachModuleA {
    OFRingPtr ring;
    unsigned mu_prec = 0;
    unsigned rank = 0;
    unsigned h = 0;  // [p]_q-denominator exponent of phi
    AMat phi_num;
    AMat g_gamma;
    AMat g_tor;
    std::string label;
    std::optional<ExpectedGalois> expected;

    uint64_t p() const { return ring->p(); }
    unsigned prec_p() const { return ring->prec(); }

    std::vector<AFSeries> zero_vec() const;
    std::vector<AFSeries> basis_vec(unsigned i) const;
    /* Ggamma . gamma(v) */
    std::vector<AFSeries> apply_gamma(const std::vector<AFSeries>& v) const;
    /* Gtor . g(v) */
    std::vector<AFSeries> apply_tor(const std::vector<AFSeries>& v) const;
    /* PhiNum . phi(v): the operator with the [p]_q^{-h} denominator cleared */
    std::vector<AFSeries> apply_phi_raw(const std::vector<AFSeries>& v) const;
    /* (gamma - 1)/mu; exact, costs one mu-coefficient */
    std::vector<AFSeries> nabla_q(const std::vector<AFSeries>& v) const;

    WachModuleA truncated(unsigned mu_prec) const;
};

/* As WachModuleA over S: phi(v) = ptilde^{-h} PhiNum phi_S(v), gamma_0 acts
 * by Ggamma gamma_S(v). */
struct WachModuleS {
    OFRingPtr ring;
    unsigned mu0_prec = 0;
    unsigned rank = 0;
    unsigned h = 0;
    SMat phi_num;
    SMat g_gamma;
    std::string label;
    std::optional<ExpectedGalois> expected;

    uint64_t p() const { return ring->p(); }
    unsigned prec_p() const { return ring->prec(); }

    std::vector<SSeries> zero_vec() const;
    std::vector<SSeries> basis_vec(unsigned i) const;
    std::vector<SSeries> apply_gamma(const std::vector<SSeries>& v) const;
    std::vector<SSeries> apply_phi_raw(const std::vector<SSeries>& v) const;
    /* (gamma - 1)/mu0 */
    std::vector<SSeries> nabla_0(const std::vector<SSeries>& v) const;

    WachModuleS truncated(unsigned mu0_prec) const;
};

/* ---- axiom verification ---- */

struct VerifyItem {
    std::string axiom;
    bool pass;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyItem> items;
    std::optional<unsigned> det_exponent;  // s with det(PhiNum) = unit * divisor^s
    bool pass() const;
    std::string summary() const;
};

VerifyReport verify(const WachModuleA& m);
VerifyReport verify(const WachModuleS& m);
void require_valid(const WachModuleA& m);  // throws axiom_error
void require_valid(const WachModuleS& m);

/* ---- catalog constructors ---- */

WachModuleA trivial_module(const OFRingPtr& ring, unsigned mu_prec);
WachModuleA unramified_char(const OFRingPtr& ring, unsigned mu_prec, const OFElem& u);
WachModuleA tate_twist(const WachModuleA& n, int r);
WachModuleA direct_sum(const WachModuleA& a, const WachModuleA& b);
WachModuleA tensor(const WachModuleA& a, const WachModuleA& b);

/* An element of N[1/[p]_q]: coords / [p]_q^{pq_exponent}. */
struct ModuleElement {
    std::vector<AFSeries> coords;
    unsigned pq_exponent = 0;
    void canonicalize();  // strips common exactly-divisible [p]_q factors
};

/*
 * Rank d+1 extension of the trivial module by N attached to a cocycle
 * (x, y):  gamma(e) = mu x + e, phi(e) = e - y, g(e) = e.  The sign on y
 * makes the phi-gamma commutation axiom hold exactly for cocycles satisfying
 * (1 - [p]_q phi) x = nabla_q(y).  Setting g(e) = e forces the pair to be
 * F_p^x-equivariant, so the input is averaged first (a cohomologous pair);
 * p - 1 is invertible, so no class is lost.
 */
WachModuleA extension_from_cocycle(const WachModuleA& n, const std::vector<AFSeries>& x,
                                   const std::vector<AFSeries>& y);

/* Conjugate the module data by X (columns = new basis in old coordinates);
 * X must be congruent to the identity mod mu. */
WachModuleA base_change(const WachModuleA& m, const AMat& x);

/* The averaging matrix P with columns e_0(e_i); congruent to I mod mu. */
AMat descent_basis(const WachModuleA& n);

/* Descent N |-> N^{F_p^x} as a Wach module over S, computed in the averaged
 * basis.  mu0-precision is mu_prec / (p-1). */
WachModuleS descend(const WachModuleA& n);

/* Ascent M |-> A_F^+ tensor_S M; the torsion action is trivial in the
 * descended basis. */
WachModuleA ascend(const WachModuleS& m);

}  // namespace wachcoh
