#pragma once

#include <functional>
#include <vector>

#include "wachcoh/padic.hpp"

namespace wachcoh {

/*
 * AFSeries: truncated element of A_F^+ = O_F[[mu]], held modulo (p^N, mu^M).
 * N comes from the coefficient ring; M = coeffs().size().  Binary operations
 * truncate to the smaller mu-precision of the operands.
 */
class AFSeries {
  public:
    AFSeries() = default;
    AFSeries(OFRingPtr ring, unsigned mu_prec);  // zero
    AFSeries(OFRingPtr ring, std::vector<OFElem> coeffs);
    static AFSeries constant(const OFRingPtr& ring, const OFElem& c, unsigned mu_prec);
    static AFSeries from_int(const OFRingPtr& ring, long long n, unsigned mu_prec);
    static AFSeries mu(const OFRingPtr& ring, unsigned mu_prec);
    static AFSeries one_plus_mu(const OFRingPtr& ring, unsigned mu_prec);  // q

    const OFRingPtr& ring() const { return ring_; }
    uint64_t p() const { return ring_->p(); }
    unsigned prec_p() const { return ring_->prec(); }
    unsigned mu_prec() const { return static_cast<unsigned>(c_.size()); }
    const std::vector<OFElem>& coeffs() const { return c_; }
    const OFElem& coeff(unsigned j) const { return c_.at(j); }
    OFElem constant_term() const { return c_.empty() ? ring_->zero() : c_[0]; }

    bool is_zero() const;
    unsigned mu_order() const;  // mu_prec() when zero
    AFSeries truncated(unsigned mu_prec) const;
    AFSeries at_prec(unsigned prec_p, unsigned mu_prec) const;

    AFSeries operator-() const;
    AFSeries operator+(const AFSeries& o) const;
    AFSeries operator-(const AFSeries& o) const;
    AFSeries operator*(const AFSeries& o) const;
    AFSeries operator*(const OFElem& c) const;
    AFSeries operator*(const Zp& c) const;
    bool operator==(const AFSeries& o) const;
    bool operator!=(const AFSeries& o) const { return !(*this == o); }
    bool congruent(const AFSeries& o, unsigned prec_p, unsigned mu_prec) const;

    std::string str() const;

  private:
    OFRingPtr ring_;
    std::vector<OFElem> c_;
};

/* a * mu^k, keeping the ambient truncation */
AFSeries mul_pow_mu(const AFSeries& a, unsigned k);
/* exact division by mu^k; mu-precision drops by k */
AFSeries shift_down_mu(const AFSeries& a, unsigned k);
/* multiplicative inverse; requires a unit constant term */
AFSeries invert(const AFSeries& a);
/* true iff a has a coefficient that is a unit of O_F, i.e. a != 0 mod p.
 * Finite-precision certificate that a is a unit of the Laurent ring A_F. */
bool is_unit_AF(const AFSeries& a);

/* Frobenius: sigma on coefficients, mu -> (1+mu)^p - 1.  Exact; preserves
 * mu-precision since phi(mu) = mu [p]_q. */
AFSeries phi(const AFSeries& a);

/* Gamma-action mu -> (1+mu)^c - 1 for a unit c.  Coefficient k of the
 * substituted variable is exact modulo p^{c.prec() - v_p(k!)}; pass c at
 * boosted precision (see substitution_boost) for full accuracy. */
AFSeries gamma_act(const Zp& c, const AFSeries& a);

/* v_p((M-1)!): the precision boost that makes gamma_act exact at (N, M). */
unsigned substitution_boost(uint64_t p, unsigned mu_prec);

/* A p-adic integer known exactly: either an integer constant or the
 * Teichmuller lift of a residue.  Evaluable at any precision, including
 * beyond the 64-bit modulus range (internally via 128-bit residues). */
struct ExactZp {
    enum class Kind { integer, teich };
    uint64_t p = 0;
    Kind kind = Kind::integer;
    long long n = 0;   // integer value            (kind == integer)
    uint64_t a = 0;    // residue mod p to lift    (kind == teich)
    Zp at(unsigned prec) const;
    bool is_unit() const;
};
ExactZp exact_int(uint64_t p, long long n);
ExactZp exact_teichmuller(uint64_t p, uint64_t a);
/* gamma_act for an exactly-known exponent: the substituted variable
 * (1+mu)^c - 1 is computed by binary powering against a 128-bit residue of
 * c, so every coefficient is exact at (N, M) with no precision loss. */
AFSeries gamma_act(const ExactZp& c, const AFSeries& a);
/* (1+mu)^c as an exact truncated series, same mechanism. */
AFSeries q_power(const OFRingPtr& ring, const ExactZp& c, unsigned mu_prec);

/* chi(gamma) = 1 + p, the fixed topological generator of Gamma_0. */
ExactZp chi_gamma(uint64_t p);
/* Smallest positive primitive root mod p. */
uint64_t primitive_root(uint64_t p);
/* chi(g) = [omega] for the fixed torsion generator g. */
ExactZp torsion_char(uint64_t p);

/* g = gamma_act([omega]); g_pow applies it j times. */
AFSeries torsion_act(const AFSeries& a);
AFSeries torsion_act_pow(const AFSeries& a, unsigned j);
/* e_0 = (p-1)^{-1} sum_j g^j: idempotent projection onto the invariants. */
AFSeries fpx_average(const AFSeries& a);

/* ---- special elements ---- */

struct SpecialElements {
    AFSeries q;       // 1 + mu
    AFSeries mu;      // mu
    AFSeries pq;      // [p]_q = ((1+mu)^p - 1)/mu
    AFSeries mu0;     // sum_{a in F_p^x} ((1+mu)^{[a]} - 1)
    AFSeries ptilde;  // mu0 + p
};
SpecialElements special_elements(const OFRingPtr& ring, unsigned mu_prec);

AFSeries pq_series(const OFRingPtr& ring, unsigned mu_prec);
AFSeries mu0_series(const OFRingPtr& ring, unsigned mu_prec);
AFSeries ptilde_series(const OFRingPtr& ring, unsigned mu_prec);
/* mu0 / mu^{p-1}, a unit of A_F^+; exact. */
AFSeries mu0_unit(const OFRingPtr& ring, unsigned mu_prec);
/* ptilde / [p]_q, a unit of A_F^+; computed at inflated internal precision
 * so the returned coefficients are exact. */
AFSeries ptilde_over_pq(const OFRingPtr& ring, unsigned mu_prec);
/* u = phi(mu0) / (mu0 ptilde^{p-1}), the unit of S from the phi(mu0)
 * identity; returned as an A-side series, exact. */
AFSeries phi_mu0_unit(const OFRingPtr& ring, unsigned mu_prec);

/* ---- exact division ---- */

enum class Divisor { mu, pq, mu0, ptilde };

/* Exact division by the named special element.  mu costs one coefficient,
 * mu0 costs p-1, pq and ptilde cost p-1 guard coefficients.  Throws
 * not_divisible_error naming the first obstructing coefficient. */
AFSeries divide_exact(const AFSeries& a, Divisor d);

/* Division by [p]_q^times via top-down elimination against the degree-(p-1)
 * polynomial.  Quotient coefficient j is exact modulo
 * p^{min(N, 1 + floor((len-1-j)/(p-1)))} short of full precision only within
 * the top decay zone; feed inputs with mu-precision slack when full accuracy
 * of high coefficients matters. */
AFSeries divide_by_pq(const AFSeries& a, unsigned times = 1);

/* ---- S = O_F[[mu0]] ---- */

class SSeries {
  public:
    SSeries() = default;
    SSeries(OFRingPtr ring, unsigned mu0_prec);  // zero
    SSeries(OFRingPtr ring, std::vector<OFElem> coeffs);
    static SSeries constant(const OFRingPtr& ring, const OFElem& c, unsigned mu0_prec);
    static SSeries from_int(const OFRingPtr& ring, long long n, unsigned mu0_prec);
    static SSeries mu0(const OFRingPtr& ring, unsigned mu0_prec);

    const OFRingPtr& ring() const { return ring_; }
    uint64_t p() const { return ring_->p(); }
    unsigned prec_p() const { return ring_->prec(); }
    unsigned mu0_prec() const { return static_cast<unsigned>(c_.size()); }
    const std::vector<OFElem>& coeffs() const { return c_; }
    const OFElem& coeff(unsigned j) const { return c_.at(j); }
    OFElem constant_term() const { return c_.empty() ? ring_->zero() : c_[0]; }

    bool is_zero() const;
    unsigned mu0_order() const;
    SSeries truncated(unsigned mu0_prec) const;

    SSeries operator-() const;
    SSeries operator+(const SSeries& o) const;
    SSeries operator-(const SSeries& o) const;
    SSeries operator*(const SSeries& o) const;
    SSeries operator*(const OFElem& c) const;
    bool operator==(const SSeries& o) const;
    bool operator!=(const SSeries& o) const { return !(*this == o); }
    bool congruent(const SSeries& o, unsigned prec_p, unsigned mu0_prec) const;

    std::string str() const;

  private:
    OFRingPtr ring_;
    std::vector<OFElem> c_;
};

/* Triangular extraction of mu0-coordinates.  Requires a to be invariant
 * under fpx_average at precision; throws not_invariant_error otherwise; the
 * result has mu0-precision floor(M / (p-1)). */
SSeries to_mu0(const AFSeries& a);
/* Substitute mu0(mu); exact with mu-precision min(cap, (p-1) * M0). */
AFSeries from_mu0(const SSeries& s, unsigned mu_prec_cap = 0);

/* phi and the Gamma_0-generator action on S, conjugated through from_mu0 /
 * to_mu0; exact. */
SSeries phi_S(const SSeries& s);
SSeries gamma0_S(const SSeries& s);

SSeries invert_S(const SSeries& a);
/* exact division by mu0 (a coordinate shift); costs one coefficient */
SSeries shift_down_mu0(const SSeries& a, unsigned k);
/* division by ptilde = p + mu0: quotient coefficient k is exact modulo
 * p^{min(N, M0-1-k)}; the divisibility certificate uses that mask */
SSeries divide_by_ptilde_S(const SSeries& a, unsigned times = 1);
bool is_unit_S(const SSeries& a);

}  // namespace wachcoh
