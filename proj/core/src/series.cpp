#include "wachcoh/series.hpp"

#include <algorithm>
#include <sstream>

namespace wachcoh {

namespace {

void require_same_ring(const AFSeries& a, const AFSeries& b) {
    if (a.p() != b.p() || a.prec_p() != b.prec_p() || a.ring()->f() != b.ring()->f())
        throw error("AFSeries: mixed rings in arithmetic");
}

/* ---- 128-bit residue helpers for exact substitution exponents ---- */

using u128 = unsigned __int128;

u128 p_pow_u128_checked(uint64_t p, unsigned e) {
    u128 r = 1;
    const u128 cap = (static_cast<u128>(1) << 126);
    for (unsigned i = 0; i < e; ++i) {
        if (r > cap / p) throw precision_error("substitution exponent precision exceeds the 128-bit range");
        r *= p;
    }
    return r;
}

u128 mulmod_u128(u128 a, u128 b, u128 m) {
    a %= m;
    b %= m;
    if (a <= (~static_cast<u128>(0)) / (b ? b : 1)) return (a * b) % m;
    u128 r = 0;
    while (b) {
        if (b & 1) {
            r += a;
            if (r >= m) r -= m;
        }
        a <<= 1;
        if (a >= m) a -= m;
        b >>= 1;
    }
    return r;
}

u128 powmod_u128(u128 a, uint64_t e, u128 m) {
    u128 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u128(r, a, m);
        a = mulmod_u128(a, a, m);
        e >>= 1;
    }
    return r;
}

/* Teichmuller residue of a mod p^B as a 128-bit integer. */
u128 teichmuller_u128(uint64_t a, uint64_t p, unsigned B) {
    u128 m = p_pow_u128_checked(p, B);
    u128 x = a % m;
    if (x % p == 0) return 0;
    for (unsigned i = 0; i <= B + 1; ++i) {
        u128 nx = powmod_u128(x, p, m);
        if (nx == x) break;
        x = nx;
    }
    return x;
}

std::vector<OFElem> conv_truncated(const OFRingPtr& ring, const std::vector<OFElem>& a,
                                   const std::vector<OFElem>& b) {
    size_t m = std::min(a.size(), b.size());
    std::vector<OFElem> r(m, ring->zero());
    for (size_t i = 0; i < a.size() && i < m; ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j + i < m && j < b.size(); ++j) {
            if (b[j].is_zero()) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

/* substitute t (with t(0) = 0) for the variable of a; exact truncation */
std::vector<OFElem> substitute(const OFRingPtr& ring, const std::vector<OFElem>& a,
                               const std::vector<OFElem>& t, bool frobenius_coeffs) {
    size_t m = std::min(a.size(), t.size());
    std::vector<OFElem> out(m, ring->zero());
    if (m == 0) return out;
    if (!t.empty() && !t[0].is_zero()) throw error("substitute: substitution must have zero constant term");
    std::vector<OFElem> pw(m, ring->zero());
    pw[0] = ring->one();
    out[0] = frobenius_coeffs ? frobenius_of(a[0]) : a[0];
    for (size_t k = 1; k < a.size(); ++k) {
        // pw *= t; pw has mu-order >= k, so stop once it vanishes entirely
        std::vector<OFElem> npw(m, ring->zero());
        bool nonzero = false;
        for (size_t i = 0; i < m; ++i) {
            if (pw[i].is_zero()) continue;
            for (size_t j = 1; j < t.size() && i + j < m; ++j) {
                if (t[j].is_zero()) continue;
                npw[i + j] += pw[i] * t[j];
            }
        }
        pw = std::move(npw);
        for (const auto& x : pw)
            if (!x.is_zero()) {
                nonzero = true;
                break;
            }
        if (!nonzero) break;
        OFElem ck = frobenius_coeffs ? frobenius_of(a[k]) : a[k];
        if (ck.is_zero()) continue;
        for (size_t i = 0; i < m; ++i)
            if (!pw[i].is_zero()) out[i] += ck * pw[i];
    }
    return out;
}

}  // namespace

/* ---- AFSeries ---- */

AFSeries::AFSeries(OFRingPtr ring, unsigned mu_prec)
    : ring_(std::move(ring)), c_(mu_prec, ring_->zero()) {}

AFSeries::AFSeries(OFRingPtr ring, std::vector<OFElem> coeffs) : ring_(std::move(ring)), c_(std::move(coeffs)) {}

AFSeries AFSeries::constant(const OFRingPtr& ring, const OFElem& c, unsigned mu_prec) {
    AFSeries s(ring, mu_prec);
    if (mu_prec > 0) s.c_[0] = c;
    return s;
}

AFSeries AFSeries::from_int(const OFRingPtr& ring, long long n, unsigned mu_prec) {
    return constant(ring, ring->from_int(n), mu_prec);
}

AFSeries AFSeries::mu(const OFRingPtr& ring, unsigned mu_prec) {
    AFSeries s(ring, mu_prec);
    if (mu_prec > 1) s.c_[1] = ring->one();
    return s;
}

AFSeries AFSeries::one_plus_mu(const OFRingPtr& ring, unsigned mu_prec) {
    AFSeries s = mu(ring, mu_prec);
    if (mu_prec > 0) s.c_[0] = ring->one();
    return s;
}

bool AFSeries::is_zero() const {
    for (const auto& x : c_)
        if (!x.is_zero()) return false;
    return true;
}

unsigned AFSeries::mu_order() const {
    for (unsigned j = 0; j < c_.size(); ++j)
        if (!c_[j].is_zero()) return j;
    return mu_prec();
}

AFSeries AFSeries::truncated(unsigned mu_prec) const {
    if (mu_prec >= c_.size()) return *this;
    return AFSeries(ring_, std::vector<OFElem>(c_.begin(), c_.begin() + mu_prec));
}

AFSeries AFSeries::at_prec(unsigned prec_p, unsigned mu_prec) const {
    OFRingPtr nr = ring_->at_prec(prec_p);
    std::vector<OFElem> r;
    unsigned m = std::min<unsigned>(mu_prec, static_cast<unsigned>(c_.size()));
    r.reserve(m);
    for (unsigned j = 0; j < m; ++j) r.push_back(c_[j].at_prec(prec_p));
    return AFSeries(nr, std::move(r));
}

AFSeries AFSeries::operator-() const {
    std::vector<OFElem> r;
    r.reserve(c_.size());
    for (const auto& x : c_) r.push_back(-x);
    return AFSeries(ring_, std::move(r));
}

AFSeries AFSeries::operator+(const AFSeries& o) const {
    require_same_ring(*this, o);
    size_t m = std::min(c_.size(), o.c_.size());
    std::vector<OFElem> r(c_.begin(), c_.begin() + m);
    for (size_t j = 0; j < m; ++j) r[j] += o.c_[j];
    return AFSeries(ring_, std::move(r));
}

AFSeries AFSeries::operator-(const AFSeries& o) const {
    require_same_ring(*this, o);
    size_t m = std::min(c_.size(), o.c_.size());
    std::vector<OFElem> r(c_.begin(), c_.begin() + m);
    for (size_t j = 0; j < m; ++j) r[j] -= o.c_[j];
    return AFSeries(ring_, std::move(r));
}

AFSeries AFSeries::operator*(const AFSeries& o) const {
    require_same_ring(*this, o);
    return AFSeries(ring_, conv_truncated(ring_, c_, o.c_));
}

AFSeries AFSeries::operator*(const OFElem& c) const {
    std::vector<OFElem> r;
    r.reserve(c_.size());
    for (const auto& x : c_) r.push_back(x * c);
    return AFSeries(ring_, std::move(r));
}

AFSeries AFSeries::operator*(const Zp& c) const { return *this * ring_->from_zp(c); }

bool AFSeries::operator==(const AFSeries& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (size_t j = 0; j < c_.size(); ++j)
        if (c_[j] != o.c_[j]) return false;
    return true;
}

bool AFSeries::congruent(const AFSeries& o, unsigned prec_p, unsigned mu_prec) const {
    unsigned m = std::min({mu_prec, this->mu_prec(), o.mu_prec()});
    for (unsigned j = 0; j < m; ++j)
        if (!c_[j].congruent(o.c_[j], prec_p)) return false;
    return true;
}

std::string AFSeries::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t j = 0; j < c_.size(); ++j) os << (j ? ", " : "") << c_[j].str();
    os << "]";
    return os.str();
}

AFSeries mul_pow_mu(const AFSeries& a, unsigned k) {
    std::vector<OFElem> r(a.mu_prec(), a.ring()->zero());
    for (unsigned j = 0; j + k < a.mu_prec(); ++j) r[j + k] = a.coeff(j);
    return AFSeries(a.ring(), std::move(r));
}

AFSeries shift_down_mu(const AFSeries& a, unsigned k) {
    if (k == 0) return a;
    if (a.mu_prec() < k) throw precision_error("shift_down_mu: series too short");
    for (unsigned j = 0; j < k; ++j)
        if (!a.coeff(j).is_zero())
            throw not_divisible_error("division by mu^" + std::to_string(k) + ": coefficient " +
                                      std::to_string(j) + " is nonzero");
    return AFSeries(a.ring(), std::vector<OFElem>(a.coeffs().begin() + k, a.coeffs().end()));
}

AFSeries invert(const AFSeries& a) {
    if (a.mu_prec() == 0) throw precision_error("invert: empty series");
    if (!a.coeff(0).is_unit()) throw not_a_unit_error("invert: constant term is not a unit of O_F");
    OFElem inv0 = a.coeff(0).inv();
    std::vector<OFElem> r(a.mu_prec(), a.ring()->zero());
    r[0] = inv0;
    for (unsigned k = 1; k < a.mu_prec(); ++k) {
        OFElem acc = a.ring()->zero();
        for (unsigned j = 1; j <= k; ++j) acc += a.coeff(j) * r[k - j];
        r[k] = -(inv0 * acc);
    }
    return AFSeries(a.ring(), std::move(r));
}

bool is_unit_AF(const AFSeries& a) {
    for (unsigned j = 0; j < a.mu_prec(); ++j)
        if (a.coeff(j).is_unit()) return true;
    return false;
}

AFSeries phi(const AFSeries& a) {
    // phi(mu) = mu * [p]_q, an exact integer polynomial
    AFSeries sub = mul_pow_mu(pq_series(a.ring(), a.mu_prec()), 1);
    return AFSeries(a.ring(), substitute(a.ring(), a.coeffs(), sub.coeffs(), true));
}

AFSeries gamma_act(const Zp& c, const AFSeries& a) {
    if (!c.is_unit()) throw error("gamma_act: exponent must be a unit of Z_p");
    const OFRingPtr& ring = a.ring();
    unsigned M = a.mu_prec();
    std::vector<OFElem> t(M, ring->zero());
    for (unsigned k = 1; k < M; ++k) {
        Zp bk = binomial(c, k);
        t[k] = ring->from_zp(bk.at_prec(ring->prec()));
    }
    return AFSeries(ring, substitute(ring, a.coeffs(), t, false));
}

unsigned substitution_boost(uint64_t p, unsigned mu_prec) {
    return mu_prec == 0 ? 0 : factorial_valuation(p, mu_prec - 1);
}

Zp ExactZp::at(unsigned prec) const {
    if (kind == Kind::integer) return Zp::from_signed(p, prec, n);
    return teichmuller(a, p, prec);
}

bool ExactZp::is_unit() const {
    if (kind == Kind::integer) {
        long long r = n % static_cast<long long>(p);
        return r != 0;
    }
    return a % p != 0;
}

ExactZp exact_int(uint64_t p, long long n) {
    ExactZp e;
    e.p = p;
    e.kind = ExactZp::Kind::integer;
    e.n = n;
    return e;
}

ExactZp exact_teichmuller(uint64_t p, uint64_t a) {
    ExactZp e;
    e.p = p;
    e.kind = ExactZp::Kind::teich;
    e.a = a % p;
    return e;
}

namespace {

/* residue of c mod p^B as a 128-bit integer */
u128 exact_residue_u128(const ExactZp& c, unsigned B) {
    u128 m = p_pow_u128_checked(c.p, B);
    if (c.kind == ExactZp::Kind::integer) {
        long long n = c.n;
        if (n >= 0) return static_cast<u128>(n) % m;
        u128 k = static_cast<u128>(-(n + 1)) + 1;  // |n|
        return (m - k % m) % m;
    }
    return teichmuller_u128(c.a, c.p, B);
}

/* (1+mu)^E - 1 mod (p^N, mu^M) by binary powering; exact for any E */
AFSeries q_pow_minus_1_u128(const OFRingPtr& ring, u128 e, unsigned mu_prec) {
    AFSeries base = AFSeries::one_plus_mu(ring, mu_prec);
    AFSeries acc = AFSeries::from_int(ring, 1, mu_prec);
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc - AFSeries::from_int(ring, 1, mu_prec);
}

}  // namespace

AFSeries q_power(const OFRingPtr& ring, const ExactZp& c, unsigned mu_prec) {
    unsigned B = ring->prec() + substitution_boost(ring->p(), mu_prec);
    u128 e = exact_residue_u128(c, B);
    return q_pow_minus_1_u128(ring, e, mu_prec) + AFSeries::from_int(ring, 1, mu_prec);
}

AFSeries gamma_act(const ExactZp& c, const AFSeries& a) {
    if (!c.is_unit()) throw error("gamma_act: exponent must be a unit of Z_p");
    const OFRingPtr& ring = a.ring();
    unsigned M = a.mu_prec();
    if (M == 0) return a;
    unsigned B = ring->prec() + substitution_boost(ring->p(), M);
    u128 e = exact_residue_u128(c, B);
    AFSeries t = q_pow_minus_1_u128(ring, e, M);
    return AFSeries(ring, substitute(ring, a.coeffs(), t.coeffs(), false));
}

ExactZp chi_gamma(uint64_t p) { return exact_int(p, static_cast<long long>(p) + 1); }

uint64_t primitive_root(uint64_t p) {
    std::vector<uint64_t> primes;
    uint64_t n = p - 1;
    for (uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            primes.push_back(q);
            while (n % q == 0) n /= q;
        }
    if (n > 1) primes.push_back(n);
    for (uint64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (uint64_t q : primes) {
            // g^((p-1)/q) mod p
            uint64_t e = (p - 1) / q, base = g % p, r = 1;
            while (e) {
                if (e & 1) r = r * base % p;
                base = base * base % p;
                e >>= 1;
            }
            if (r == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw error("primitive_root: none found (p not prime?)");
}

ExactZp torsion_char(uint64_t p) { return exact_teichmuller(p, primitive_root(p)); }

AFSeries torsion_act(const AFSeries& a) { return gamma_act(torsion_char(a.p()), a); }

AFSeries torsion_act_pow(const AFSeries& a, unsigned j) {
    uint64_t p = a.p();
    uint64_t w = primitive_root(p), wj = 1;
    for (unsigned i = 0; i < j % (p - 1); ++i) wj = wj * w % p;
    if (wj == 1) return a;
    return gamma_act(exact_teichmuller(p, wj), a);
}

AFSeries fpx_average(const AFSeries& a) {
    uint64_t p = a.p();
    ExactZp chi_g = torsion_char(p);
    AFSeries acc = a;
    AFSeries cur = a;
    for (unsigned j = 1; j + 1 < p; ++j) {
        cur = gamma_act(chi_g, cur);
        acc = acc + cur;
    }
    Zp inv = Zp(p, a.prec_p(), p - 1).inv();
    return acc * inv;
}

/* ---- special elements ---- */

AFSeries pq_series(const OFRingPtr& ring, unsigned mu_prec) {
    // ((1+mu)^p - 1)/mu: the mu^k coefficient is C(p, k+1), an exact integer
    AFSeries t = q_pow_minus_1_u128(ring, ring->p(), mu_prec + 1);
    return shift_down_mu(t, 1);
}

AFSeries mu0_series(const OFRingPtr& ring, unsigned mu_prec) {
    uint64_t p = ring->p();
    if (mu_prec == 0) return AFSeries(ring, 0u);
    unsigned B = ring->prec() + substitution_boost(p, mu_prec);
    AFSeries acc(ring, mu_prec);
    for (uint64_t a = 1; a < p; ++a) acc = acc + q_pow_minus_1_u128(ring, teichmuller_u128(a, p, B), mu_prec);
    return acc;
}

AFSeries ptilde_series(const OFRingPtr& ring, unsigned mu_prec) {
    AFSeries s = mu0_series(ring, mu_prec);
    return s + AFSeries::from_int(ring, static_cast<long long>(ring->p()), mu_prec);
}

SpecialElements special_elements(const OFRingPtr& ring, unsigned mu_prec) {
    if (mu_prec < ring->p()) throw precision_error("special_elements: mu-precision below p");
    SpecialElements se{AFSeries::one_plus_mu(ring, mu_prec), AFSeries::mu(ring, mu_prec),
                       pq_series(ring, mu_prec), mu0_series(ring, mu_prec), ptilde_series(ring, mu_prec)};
    return se;
}

AFSeries mu0_unit(const OFRingPtr& ring, unsigned mu_prec) {
    unsigned p1 = static_cast<unsigned>(ring->p()) - 1;
    AFSeries m0 = mu0_series(ring, mu_prec + p1);
    return shift_down_mu(m0, p1);
}

AFSeries divide_by_pq(const AFSeries& a, unsigned times) {
    AFSeries cur = a;
    uint64_t p = a.p();
    unsigned N = a.prec_p();
    unsigned p1 = static_cast<unsigned>(p) - 1;
    for (unsigned t = 0; t < times; ++t) {
        unsigned M = cur.mu_prec();
        if (M < p1 + 1) throw precision_error("divide_by_pq: series too short");
        AFSeries d = pq_series(a.ring(), p1 + 1);  // exact polynomial, degree p-1, monic top
        unsigned lq = M - p1;
        std::vector<OFElem> qc(lq, a.ring()->zero());
        for (unsigned k = M; k-- > p1;) {
            OFElem acc = cur.coeff(k);
            for (unsigned j = 0; j < p1; ++j) {
                unsigned idx = k - j;
                if (idx < lq) acc -= d.coeff(j) * qc[idx];
            }
            qc[k - p1] = acc;  // divide by the unit leading coefficient 1
        }
        // remainder check on the low coefficients, with the decay-aware mask
        for (unsigned j = 0; j < p1; ++j) {
            OFElem r = cur.coeff(j);
            for (unsigned i = 0; i <= j; ++i) r -= d.coeff(j - i) * qc[i];
            unsigned tol = std::min(N, 1 + (lq - 1 - j) / p1);
            if (!r.congruent(a.ring()->zero(), tol))
                throw not_divisible_error("division by [p]_q: obstruction at mu^" + std::to_string(j));
        }
        cur = AFSeries(a.ring(), std::move(qc));
    }
    return cur;
}

AFSeries ptilde_over_pq(const OFRingPtr& ring, unsigned mu_prec) {
    unsigned p1 = static_cast<unsigned>(ring->p()) - 1;
    unsigned N = ring->prec();
    // grow the internal pad until the defining identity certifies the result
    for (unsigned pad = (N + 1) * p1;; pad *= 2) {
        AFSeries pt = ptilde_series(ring, mu_prec + p1 + pad);
        AFSeries wt = divide_by_pq(pt).truncated(mu_prec);
        AFSeries check = wt * pq_series(ring, mu_prec);
        if (check.congruent(ptilde_series(ring, mu_prec), N, mu_prec)) return wt;
        if (pad > 64u * (N + 2) * p1) throw precision_error("ptilde_over_pq: certification failed");
    }
}

AFSeries phi_mu0_unit(const OFRingPtr& ring, unsigned mu_prec) {
    unsigned p1 = static_cast<unsigned>(ring->p()) - 1;
    unsigned N = ring->prec();
    AFSeries m0_t = mu0_series(ring, mu_prec);
    AFSeries pt_t = ptilde_series(ring, mu_prec);
    AFSeries target = phi(m0_t);  // must equal u * mu0 * ptilde^{p-1}
    AFSeries wt_inv = invert(ptilde_over_pq(ring, mu_prec));
    for (unsigned pad = (N + 2) * p1;; pad *= 2) {
        unsigned M = mu_prec + pad + p1;
        AFSeries m0 = mu0_series(ring, M);
        AFSeries w = shift_down_mu(m0, p1);  // mu0 / mu^{p-1}, a unit
        AFSeries num = shift_down_mu(phi(m0), p1) * invert(w);
        // num = phi(mu0)/mu0; divide by ptilde^{p-1} = pq^{p-1} (ptilde/pq)^{p-1},
        // truncating to the output length before the unit corrections
        AFSeries u = divide_by_pq(num, p1).truncated(mu_prec);
        for (unsigned i = 0; i < p1; ++i) u = u * wt_inv;
        AFSeries check = u * m0_t;
        for (unsigned i = 0; i < p1; ++i) check = check * pt_t;
        if (check.congruent(target, N, mu_prec)) return u;
        if (pad > 64u * p1 * (N + 2) * p1) throw precision_error("phi_mu0_unit: certification failed");
    }
}

AFSeries divide_exact(const AFSeries& a, Divisor d) {
    unsigned p1 = static_cast<unsigned>(a.p()) - 1;
    switch (d) {
        case Divisor::mu:
            return shift_down_mu(a, 1);
        case Divisor::mu0: {
            AFSeries t = shift_down_mu(a, p1);
            return t * invert(mu0_unit(a.ring(), t.mu_prec()));
        }
        case Divisor::pq:
            return divide_by_pq(a);
        case Divisor::ptilde: {
            AFSeries t = divide_by_pq(a);
            return t * invert(ptilde_over_pq(a.ring(), t.mu_prec()));
        }
    }
    throw error("divide_exact: unknown divisor");
}

/* ---- SSeries ---- */

namespace {
void require_same_ring_S(const SSeries& a, const SSeries& b) {
    if (a.p() != b.p() || a.prec_p() != b.prec_p() || a.ring()->f() != b.ring()->f())
        throw error("SSeries: mixed rings in arithmetic");
}
}  // namespace

SSeries::SSeries(OFRingPtr ring, unsigned mu0_prec) : ring_(std::move(ring)), c_(mu0_prec, ring_->zero()) {}

SSeries::SSeries(OFRingPtr ring, std::vector<OFElem> coeffs) : ring_(std::move(ring)), c_(std::move(coeffs)) {}

SSeries SSeries::constant(const OFRingPtr& ring, const OFElem& c, unsigned mu0_prec) {
    SSeries s(ring, mu0_prec);
    if (mu0_prec > 0) s.c_[0] = c;
    return s;
}

SSeries SSeries::from_int(const OFRingPtr& ring, long long n, unsigned mu0_prec) {
    return constant(ring, ring->from_int(n), mu0_prec);
}

SSeries SSeries::mu0(const OFRingPtr& ring, unsigned mu0_prec) {
    SSeries s(ring, mu0_prec);
    if (mu0_prec > 1) s.c_[1] = ring->one();
    return s;
}

bool SSeries::is_zero() const {
    for (const auto& x : c_)
        if (!x.is_zero()) return false;
    return true;
}

unsigned SSeries::mu0_order() const {
    for (unsigned j = 0; j < c_.size(); ++j)
        if (!c_[j].is_zero()) return j;
    return mu0_prec();
}

SSeries SSeries::truncated(unsigned mu0_prec) const {
    if (mu0_prec >= c_.size()) return *this;
    return SSeries(ring_, std::vector<OFElem>(c_.begin(), c_.begin() + mu0_prec));
}

SSeries SSeries::operator-() const {
    std::vector<OFElem> r;
    r.reserve(c_.size());
    for (const auto& x : c_) r.push_back(-x);
    return SSeries(ring_, std::move(r));
}

SSeries SSeries::operator+(const SSeries& o) const {
    require_same_ring_S(*this, o);
    size_t m = std::min(c_.size(), o.c_.size());
    std::vector<OFElem> r(c_.begin(), c_.begin() + m);
    for (size_t j = 0; j < m; ++j) r[j] += o.c_[j];
    return SSeries(ring_, std::move(r));
}

SSeries SSeries::operator-(const SSeries& o) const {
    require_same_ring_S(*this, o);
    size_t m = std::min(c_.size(), o.c_.size());
    std::vector<OFElem> r(c_.begin(), c_.begin() + m);
    for (size_t j = 0; j < m; ++j) r[j] -= o.c_[j];
    return SSeries(ring_, std::move(r));
}

SSeries SSeries::operator*(const SSeries& o) const {
    require_same_ring_S(*this, o);
    return SSeries(ring_, conv_truncated(ring_, c_, o.c_));
}

SSeries SSeries::operator*(const OFElem& c) const {
    std::vector<OFElem> r;
    r.reserve(c_.size());
    for (const auto& x : c_) r.push_back(x * c);
    return SSeries(ring_, std::move(r));
}

bool SSeries::operator==(const SSeries& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (size_t j = 0; j < c_.size(); ++j)
        if (c_[j] != o.c_[j]) return false;
    return true;
}

bool SSeries::congruent(const SSeries& o, unsigned prec_p, unsigned mu0_prec) const {
    unsigned m = std::min({mu0_prec, this->mu0_prec(), o.mu0_prec()});
    for (unsigned j = 0; j < m; ++j)
        if (!c_[j].congruent(o.c_[j], prec_p)) return false;
    return true;
}

std::string SSeries::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t j = 0; j < c_.size(); ++j) os << (j ? ", " : "") << c_[j].str();
    os << "]";
    return os.str();
}

SSeries to_mu0(const AFSeries& a) {
    uint64_t p = a.p();
    unsigned p1 = static_cast<unsigned>(p) - 1;
    unsigned M = a.mu_prec();
    unsigned M0 = M / p1;
    if (M0 == 0) throw precision_error("to_mu0: mu-precision below p-1");
    if (fpx_average(a) != a) throw not_invariant_error("to_mu0: input is not F_p^x-invariant at precision");
    AFSeries winv = invert(mu0_unit(a.ring(), M));
    AFSeries r = a;
    std::vector<OFElem> out(M0, a.ring()->zero());
    for (unsigned k = 0; k < M0; ++k) {
        out[k] = r.constant_term();
        if (k + 1 == M0) break;
        AFSeries red = r - AFSeries::constant(a.ring(), out[k], r.mu_prec());
        for (unsigned j = 1; j < p1 && j < red.mu_prec(); ++j)
            if (!red.coeff(j).is_zero())
                throw not_invariant_error("to_mu0: obstruction at mu^" + std::to_string(j) +
                                          " during extraction step " + std::to_string(k));
        r = shift_down_mu(red, p1) * winv.truncated(red.mu_prec() - p1);
    }
    return SSeries(a.ring(), std::move(out));
}

AFSeries from_mu0(const SSeries& s, unsigned mu_prec_cap) {
    unsigned p1 = static_cast<unsigned>(s.p()) - 1;
    unsigned M = p1 * s.mu0_prec();
    if (mu_prec_cap > 0) M = std::min(M, mu_prec_cap);
    if (M == 0) return AFSeries(s.ring(), 0);
    AFSeries m0 = mu0_series(s.ring(), M);
    AFSeries acc = AFSeries::constant(s.ring(), s.constant_term(), M);
    AFSeries pw = AFSeries::from_int(s.ring(), 1, M);
    for (unsigned k = 1; k < s.mu0_prec(); ++k) {
        pw = pw * m0;
        if (pw.is_zero()) break;
        acc = acc + pw * s.coeff(k);
    }
    return acc;
}

SSeries phi_S(const SSeries& s) {
    AFSeries a = from_mu0(s);
    if (a.mu_prec() == 0) return s;
    return to_mu0(phi(a));
}

SSeries gamma0_S(const SSeries& s) {
    AFSeries a = from_mu0(s);
    if (a.mu_prec() == 0) return s;
    return to_mu0(gamma_act(chi_gamma(s.p()), a));
}

SSeries invert_S(const SSeries& a) {
    if (a.mu0_prec() == 0) throw precision_error("invert_S: empty series");
    if (!a.coeff(0).is_unit()) throw not_a_unit_error("invert_S: constant term is not a unit of O_F");
    OFElem inv0 = a.coeff(0).inv();
    std::vector<OFElem> r(a.mu0_prec(), a.ring()->zero());
    r[0] = inv0;
    for (unsigned k = 1; k < a.mu0_prec(); ++k) {
        OFElem acc = a.ring()->zero();
        for (unsigned j = 1; j <= k; ++j) acc += a.coeff(j) * r[k - j];
        r[k] = -(inv0 * acc);
    }
    return SSeries(a.ring(), std::move(r));
}

SSeries shift_down_mu0(const SSeries& a, unsigned k) {
    if (k == 0) return a;
    if (a.mu0_prec() < k) throw precision_error("shift_down_mu0: series too short");
    for (unsigned j = 0; j < k; ++j)
        if (!a.coeff(j).is_zero())
            throw not_divisible_error("division by mu0^" + std::to_string(k) + ": coefficient " +
                                      std::to_string(j) + " is nonzero");
    return SSeries(a.ring(), std::vector<OFElem>(a.coeffs().begin() + k, a.coeffs().end()));
}

SSeries divide_by_ptilde_S(const SSeries& a, unsigned times) {
    SSeries cur = a;
    unsigned N = a.prec_p();
    OFElem pe = a.ring()->from_int(static_cast<long long>(a.p()));
    for (unsigned t = 0; t < times; ++t) {
        unsigned M0 = cur.mu0_prec();
        if (M0 < 2) throw precision_error("divide_by_ptilde_S: series too short");
        std::vector<OFElem> qc(M0 - 1, a.ring()->zero());
        for (unsigned k = M0 - 1; k >= 1; --k) {
            OFElem acc = cur.coeff(k);
            if (k < M0 - 1) acc -= pe * qc[k];
            qc[k - 1] = acc;
        }
        OFElem r0 = cur.coeff(0) - pe * qc[0];
        unsigned tol = std::min(N, M0 - 1);
        if (!r0.congruent(a.ring()->zero(), tol))
            throw not_divisible_error("division by ptilde: obstruction at constant coefficient");
        cur = SSeries(a.ring(), std::move(qc));
    }
    return cur;
}

bool is_unit_S(const SSeries& a) {
    for (unsigned j = 0; j < a.mu0_prec(); ++j)
        if (a.coeff(j).is_unit()) return true;
    return false;
}

}  // namespace wachcoh
