#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wachcoh/errors.hpp"

namespace wachcoh {

/* p^e as uint64_t; throws precision_error if it does not fit below 2^62. */
uint64_t pow_u64_checked(uint64_t p, unsigned e);

/* v_p(k!) */
unsigned factorial_valuation(uint64_t p, uint64_t k);

/*
 * Zp: an element of Z/p^N for an odd prime p, N >= 1.  All arithmetic is
 * exact modulo p^N; an operation never pretends to more precision than N.
 * Requires p^N < 2^62.
 */
class Zp {
  public:
    Zp() : p_(0), prec_(0), mod_(0), v_(0) {}
    Zp(uint64_t p, unsigned prec, uint64_t value);
    static Zp from_signed(uint64_t p, unsigned prec, long long value);

    uint64_t p() const { return p_; }
    unsigned prec() const { return prec_; }
    uint64_t modulus() const { return mod_; }
    uint64_t value() const { return v_; }

    bool is_zero() const { return v_ == 0; }
    bool is_unit() const { return v_ % p_ != 0; }
    unsigned valuation() const;  // = prec() for zero

    Zp operator-() const;
    Zp operator+(const Zp& o) const;
    Zp operator-(const Zp& o) const;
    Zp operator*(const Zp& o) const;
    Zp& operator+=(const Zp& o) { return *this = *this + o; }
    Zp& operator-=(const Zp& o) { return *this = *this - o; }
    Zp& operator*=(const Zp& o) { return *this = *this * o; }
    bool operator==(const Zp& o) const;
    bool operator!=(const Zp& o) const { return !(*this == o); }

    Zp inv() const;  // throws not_a_unit_error
    Zp pow(uint64_t e) const;
    /* Exact division by p^k; throws not_divisible_error if p^k does not
     * divide the residue.  The result is canonical below p^{prec-k} and is
     * only meaningful modulo p^{prec-k}. */
    Zp div_pow_p(unsigned k) const;
    /* Truncate to a lower precision, or lift the canonical representative to
     * a higher one (caller asserts the value is exactly known). */
    Zp at_prec(unsigned newprec) const;
    bool congruent(const Zp& o, unsigned prec) const;

    std::string str() const;

  private:
    uint64_t p_;
    unsigned prec_;
    uint64_t mod_;
    uint64_t v_;
    void require_compatible(const Zp& o) const;
};

/* Teichmuller lift of a mod p, computed by iterating x -> x^p until stable
 * mod p^prec.  teichmuller(0) = 0. */
Zp teichmuller(uint64_t a, uint64_t p, unsigned prec);

/* C(c, k) = c(c-1)...(c-k+1)/k!, a p-adic integer.  The result is exact
 * modulo p^{c.prec() - v_p(k!)}; throws precision_error when nothing
 * survives.  Call at boosted precision when full accuracy is needed. */
Zp binomial(const Zp& c, uint64_t k);

class OFRing;
using OFRingPtr = std::shared_ptr<const OFRing>;
class OFElem;

/*
 * OFRing: the unramified ring O_F = W(F_{p^f}) at precision p^N, presented as
 * Z/p^N[t]/(poly) for a monic degree-f lift of an irreducible polynomial mod
 * p.  f = 1 is the plain Z/p^N path; f > 1 carries the defining polynomial
 * and the Hensel-lifted image of t under the arithmetic Frobenius.
 */
class OFRing : public std::enable_shared_from_this<OFRing> {
  public:
    static OFRingPtr make(uint64_t p, unsigned f, unsigned prec);

    uint64_t p() const { return p_; }
    unsigned f() const { return f_; }
    unsigned prec() const { return prec_; }
    uint64_t modulus() const { return mod_; }
    /* Same (p, f, defining polynomial mod p) at another precision. */
    OFRingPtr at_prec(unsigned prec) const;

    OFElem zero() const;
    OFElem one() const;
    OFElem from_int(long long n) const;
    OFElem from_zp(const Zp& z) const;
    OFElem gen() const;  // the class of t (requires f > 1)
    OFElem from_coords(std::vector<Zp> coords) const;

    const std::vector<uint64_t>& poly() const { return poly_; }

  private:
    OFRing(uint64_t p, unsigned f, unsigned prec);
    uint64_t p_;
    unsigned f_;
    unsigned prec_;
    uint64_t mod_;
    std::vector<uint64_t> poly_;      // monic, degree f, coeffs mod p^N (f>1)
    std::vector<uint64_t> frob_gen_;  // sigma(t) in the t-basis (f>1)

    friend class OFElem;
    friend OFElem frobenius_of(const OFElem& x);
};

/*
 * OFElem: an element of an OFRing in the polynomial basis 1, t, ..., t^{f-1}.
 */
class OFElem {
  public:
    OFElem() = default;
    OFElem(OFRingPtr ring, std::vector<uint64_t> coords);

    const OFRingPtr& ring() const { return ring_; }
    uint64_t p() const { return ring_->p(); }
    unsigned prec() const { return ring_->prec(); }
    const std::vector<uint64_t>& coords() const { return c_; }
    Zp coord(unsigned i) const;
    /* For f = 1, the underlying scalar. */
    Zp as_zp() const;

    bool is_zero() const;
    bool is_unit() const;  // nonzero image in the residue field
    unsigned valuation() const;

    OFElem operator-() const;
    OFElem operator+(const OFElem& o) const;
    OFElem operator-(const OFElem& o) const;
    OFElem operator*(const OFElem& o) const;
    OFElem& operator+=(const OFElem& o) { return *this = *this + o; }
    OFElem& operator-=(const OFElem& o) { return *this = *this - o; }
    bool operator==(const OFElem& o) const;
    bool operator!=(const OFElem& o) const { return !(*this == o); }

    OFElem inv() const;  // Hensel lift of the residue-field inverse
    OFElem pow(uint64_t e) const;
    OFElem div_pow_p(unsigned k) const;
    OFElem at_prec(unsigned newprec) const;  // moves to ring->at_prec(...)
    bool congruent(const OFElem& o, unsigned prec) const;

    std::string str() const;

  private:
    OFRingPtr ring_;
    std::vector<uint64_t> c_;
    void require_same_ring(const OFElem& o) const;
    friend OFElem frobenius_of(const OFElem& x);
};

/* The arithmetic Frobenius of W(F_{p^f}); identity for f = 1. */
OFElem frobenius_of(const OFElem& x);

/* Teichmuller lift inside O_F of a residue given in the t-basis mod p. */
OFElem teichmuller_of(const OFRingPtr& ring, const std::vector<uint64_t>& residue);

}  // namespace wachcoh
