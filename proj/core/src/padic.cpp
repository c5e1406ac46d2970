#include "wachcoh/padic.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace wachcoh {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

/* inverse of a mod m for gcd(a, m) = 1 (m a prime power here) */
uint64_t invmod(uint64_t a, uint64_t m) {
    long long t = 0, newt = 1;
    long long r = static_cast<long long>(m), newr = static_cast<long long>(a % m);
    while (newr != 0) {
        long long q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    if (r != 1) throw not_a_unit_error("invmod: element is not a unit");
    if (t < 0) t += static_cast<long long>(m);
    return static_cast<uint64_t>(t);
}

unsigned val_p(uint64_t v, uint64_t p, unsigned cap) {
    if (v == 0) return cap;
    unsigned e = 0;
    while (e < cap && v % p == 0) {
        v /= p;
        ++e;
    }
    return e;
}

/* ---- small F_p[x] arithmetic used to pick defining polynomials ---- */

using FpPoly = std::vector<uint64_t>;  // coeffs mod p, no trailing zeros

void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& g, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    // reduce modulo monic g
    size_t dg = g.size() - 1;
    for (size_t k = r.size(); k-- > dg;) {
        uint64_t c = r[k];
        if (!c) continue;
        r[k] = 0;
        for (size_t j = 0; j < dg; ++j) r[k - dg + j] = (r[k - dg + j] + (p - g[j] % p) % p * c) % p;
    }
    r.resize(dg);
    fp_trim(r);
    return r;
}

FpPoly fp_powmod(FpPoly a, uint64_t e, const FpPoly& g, uint64_t p) {
    FpPoly r = {1};
    while (e) {
        if (e & 1) r = fp_mulmod(r, a, g, p);
        a = fp_mulmod(a, a, g, p);
        e >>= 1;
    }
    return r;
}

/* x^(p^k) mod g */
FpPoly fp_frob_pow(const FpPoly& g, uint64_t p, unsigned k) {
    FpPoly x = {0, 1};
    FpPoly r = x;
    for (unsigned i = 0; i < k; ++i) r = fp_powmod(r, p, g, p);
    return r;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, uint64_t p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        // a mod b
        uint64_t lead_inv = invmod(b.back(), p);
        while (a.size() >= b.size()) {
            uint64_t c = (a.back() * lead_inv) % p;
            size_t shift = a.size() - b.size();
            for (size_t j = 0; j < b.size(); ++j) a[shift + j] = (a[shift + j] + (p - (b[j] * c) % p)) % p;
            fp_trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a;
}

bool fp_irreducible(const FpPoly& g, uint64_t p) {
    unsigned f = static_cast<unsigned>(g.size() - 1);
    FpPoly x = {0, 1};
    FpPoly xpf = fp_frob_pow(g, p, f);
    // x^(p^f) == x mod g
    FpPoly d = xpf;
    if (d.size() < 2) d.resize(2, 0);
    d[1] = (d[1] + p - 1) % p;
    fp_trim(d);
    if (!d.empty()) return false;
    for (unsigned q = 2; q <= f; ++q) {
        if (f % q != 0) continue;
        bool prime = true;
        for (unsigned t = 2; t * t <= q; ++t)
            if (q % t == 0) prime = false;
        if (!prime) continue;
        FpPoly xq = fp_frob_pow(g, p, f / q);
        if (xq.size() < 2) xq.resize(2, 0);
        xq[1] = (xq[1] + p - 1) % p;
        fp_trim(xq);
        FpPoly gg = fp_gcd(g, xq, p);
        if (gg.size() != 1) return false;
    }
    return true;
}

/* lexicographically smallest monic irreducible of degree f over F_p */
FpPoly smallest_irreducible(uint64_t p, unsigned f) {
    uint64_t count = 1;
    for (unsigned i = 0; i < f; ++i) {
        count *= p;
        if (count > 100000000ULL) throw precision_error("defining polynomial search space too large");
    }
    for (uint64_t code = 0; code < count; ++code) {
        FpPoly g(f + 1, 0);
        uint64_t c = code;
        for (unsigned i = 0; i < f; ++i) {
            g[i] = c % p;
            c /= p;
        }
        g[f] = 1;
        if (fp_irreducible(g, p)) return g;
    }
    throw error("no irreducible polynomial found");  // unreachable
}

/* ---- raw coordinate arithmetic in Z/p^N[t]/(poly), poly monic ---- */

struct RawRing {
    uint64_t p;
    unsigned f;
    uint64_t mod;
    const std::vector<uint64_t>* poly;  // size f+1, monic
};

using Vec = std::vector<uint64_t>;

Vec raw_mul(const RawRing& R, const Vec& a, const Vec& b) {
    if (R.f == 1) return {mulmod(a[0], b[0], R.mod)};
    Vec r(2 * R.f - 1, 0);
    for (unsigned i = 0; i < R.f; ++i)
        for (unsigned j = 0; j < R.f; ++j) r[i + j] = (r[i + j] + static_cast<__uint128_t>(a[i]) * b[j]) % R.mod;
    const Vec& g = *R.poly;
    for (size_t k = r.size(); k-- > R.f;) {
        uint64_t c = r[k];
        if (!c) continue;
        r[k] = 0;
        for (unsigned j = 0; j < R.f; ++j) {
            uint64_t sub = mulmod(g[j], c, R.mod);
            r[k - R.f + j] = (r[k - R.f + j] + R.mod - sub) % R.mod;
        }
    }
    r.resize(R.f);
    return r;
}

Vec raw_add(const RawRing& R, const Vec& a, const Vec& b) {
    Vec r(R.f);
    for (unsigned i = 0; i < R.f; ++i) r[i] = (a[i] + b[i]) % R.mod;
    return r;
}

Vec raw_sub(const RawRing& R, const Vec& a, const Vec& b) {
    Vec r(R.f);
    for (unsigned i = 0; i < R.f; ++i) r[i] = (a[i] + R.mod - b[i]) % R.mod;
    return r;
}

Vec raw_scal(const RawRing& R, uint64_t c, const Vec& a) {
    Vec r(R.f);
    for (unsigned i = 0; i < R.f; ++i) r[i] = mulmod(c, a[i], R.mod);
    return r;
}

bool raw_is_zero(const Vec& a) {
    for (uint64_t x : a)
        if (x) return false;
    return true;
}

Vec raw_pow(const RawRing& R, Vec a, uint64_t e) {
    Vec r(R.f, 0);
    r[0] = 1 % R.mod;
    while (e) {
        if (e & 1) r = raw_mul(R, r, a);
        a = raw_mul(R, a, a);
        e >>= 1;
    }
    return r;
}

/* inverse via residue-field inverse + Hensel iterations y <- y(2 - ay) */
Vec raw_inv(const RawRing& R, const Vec& a) {
    if (R.f == 1) {
        if (a[0] % R.p == 0) throw not_a_unit_error("OFElem::inv: not a unit");
        return {invmod(a[0], R.mod)};
    }
    // residue field inverse by extended Euclid in F_p[x]/(poly mod p)
    FpPoly am, gm;
    for (unsigned i = 0; i < R.f; ++i) am.push_back(a[i] % R.p);
    for (unsigned i = 0; i <= R.f; ++i) gm.push_back((*R.poly)[i] % R.p);
    fp_trim(am);
    if (am.empty()) throw not_a_unit_error("OFElem::inv: not a unit");
    // extended Euclid: find u with u*am = 1 mod gm
    FpPoly r0 = gm, r1 = am, s0 = {}, s1 = {1};
    uint64_t p = R.p;
    while (!r1.empty()) {
        // divide r0 by r1
        FpPoly q;
        FpPoly rem = r0;
        uint64_t li = invmod(r1.back(), p);
        if (rem.size() >= r1.size()) {
            q.assign(rem.size() - r1.size() + 1, 0);
            while (rem.size() >= r1.size() && !rem.empty()) {
                uint64_t c = (rem.back() * li) % p;
                size_t sh = rem.size() - r1.size();
                q[sh] = c;
                for (size_t j = 0; j < r1.size(); ++j) rem[sh + j] = (rem[sh + j] + p - (r1[j] * c) % p) % p;
                fp_trim(rem);
                if (rem.empty()) break;
            }
        }
        fp_trim(q);
        // (r0, r1) <- (r1, rem); (s0, s1) <- (s1, s0 - q*s1)
        FpPoly qs1;
        if (!q.empty() && !s1.empty()) {
            qs1.assign(q.size() + s1.size() - 1, 0);
            for (size_t i = 0; i < q.size(); ++i)
                for (size_t j = 0; j < s1.size(); ++j) qs1[i + j] = (qs1[i + j] + q[i] * s1[j]) % p;
        }
        FpPoly ns = s0;
        if (ns.size() < qs1.size()) ns.resize(qs1.size(), 0);
        for (size_t i = 0; i < qs1.size(); ++i) ns[i] = (ns[i] + p - qs1[i]) % p;
        fp_trim(ns);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = ns;
    }
    if (r0.size() != 1) throw not_a_unit_error("OFElem::inv: not a unit");
    uint64_t lead = invmod(r0[0], p);
    Vec y(R.f, 0);
    for (size_t i = 0; i < s0.size(); ++i) y[i] = (s0[i] * lead) % p;
    // Hensel: y <- y(2 - a y), doubling the precision each step
    Vec two(R.f, 0);
    two[0] = 2 % R.mod;
    unsigned steps = 1;
    uint64_t reach = R.p;
    while (reach < R.mod) {
        reach = (reach > (1ULL << 62) / reach) ? R.mod : reach * reach;
        ++steps;
    }
    for (unsigned i = 0; i <= steps; ++i) y = raw_mul(R, y, raw_sub(R, two, raw_mul(R, a, y)));
    return y;
}

Vec raw_poly_eval(const RawRing& R, const std::vector<uint64_t>& coeffs, const Vec& x) {
    Vec r(R.f, 0);
    for (size_t k = coeffs.size(); k-- > 0;) {
        r = raw_mul(R, r, x);
        r[0] = (r[0] + coeffs[k]) % R.mod;
    }
    return r;
}

}  // namespace

uint64_t pow_u64_checked(uint64_t p, unsigned e) {
    uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (r > (1ULL << 62) / p) throw precision_error("p^N exceeds the 2^62 modulus bound");
        r *= p;
    }
    return r;
}

unsigned factorial_valuation(uint64_t p, uint64_t k) {
    unsigned v = 0;
    while (k) {
        k /= p;
        v += static_cast<unsigned>(k);
    }
    return v;
}

/* ---- Zp ---- */

Zp::Zp(uint64_t p, unsigned prec, uint64_t value) : p_(p), prec_(prec) {
    if (p < 3 || prec == 0) throw error("Zp: need an odd prime p >= 3 and precision >= 1");
    mod_ = pow_u64_checked(p, prec);
    v_ = value % mod_;
}

Zp Zp::from_signed(uint64_t p, unsigned prec, long long value) {
    uint64_t mod = pow_u64_checked(p, prec);
    long long r = value % static_cast<long long>(mod);
    if (r < 0) r += static_cast<long long>(mod);
    return Zp(p, prec, static_cast<uint64_t>(r));
}

void Zp::require_compatible(const Zp& o) const {
    if (p_ != o.p_ || prec_ != o.prec_) throw error("Zp: mixed p or precision in arithmetic");
}

unsigned Zp::valuation() const { return val_p(v_, p_, prec_); }

Zp Zp::operator-() const { return Zp(p_, prec_, v_ ? mod_ - v_ : 0); }

Zp Zp::operator+(const Zp& o) const {
    require_compatible(o);
    return Zp(p_, prec_, (v_ + o.v_) % mod_);
}

Zp Zp::operator-(const Zp& o) const {
    require_compatible(o);
    return Zp(p_, prec_, (v_ + mod_ - o.v_) % mod_);
}

Zp Zp::operator*(const Zp& o) const {
    require_compatible(o);
    return Zp(p_, prec_, mulmod(v_, o.v_, mod_));
}

bool Zp::operator==(const Zp& o) const { return p_ == o.p_ && prec_ == o.prec_ && v_ == o.v_; }

Zp Zp::inv() const {
    if (!is_unit()) throw not_a_unit_error("Zp::inv: " + str() + " is not a unit");
    return Zp(p_, prec_, invmod(v_, mod_));
}

Zp Zp::pow(uint64_t e) const { return Zp(p_, prec_, powmod(v_, e, mod_)); }

Zp Zp::div_pow_p(unsigned k) const {
    if (k == 0) return *this;
    if (k >= prec_) throw precision_error("Zp::div_pow_p: dividing away all precision");
    uint64_t pk = pow_u64_checked(p_, k);
    if (v_ % pk != 0) throw not_divisible_error("Zp::div_pow_p: value not divisible by p^" + std::to_string(k));
    return Zp(p_, prec_, v_ / pk);
}

Zp Zp::at_prec(unsigned newprec) const { return Zp(p_, newprec, v_); }

bool Zp::congruent(const Zp& o, unsigned prec) const {
    if (p_ != o.p_) return false;
    unsigned e = std::min({prec, prec_, o.prec_});
    uint64_t pe = pow_u64_checked(p_, e);
    return v_ % pe == o.v_ % pe;
}

std::string Zp::str() const {
    std::ostringstream os;
    os << v_ << " (mod " << p_ << "^" << prec_ << ")";
    return os.str();
}

Zp teichmuller(uint64_t a, uint64_t p, unsigned prec) {
    Zp x(p, prec, a);
    if (x.value() % p == 0) return Zp(p, prec, 0);
    for (unsigned i = 0; i <= prec + 1; ++i) {
        Zp nx = x.pow(p);
        if (nx == x) break;
        x = nx;
    }
    return x;
}

Zp binomial(const Zp& c, uint64_t k) {
    if (k == 0) return Zp(c.p(), c.prec(), 1);
    unsigned v = factorial_valuation(c.p(), k);
    if (v >= c.prec())
        throw precision_error("binomial: v_p(k!) = " + std::to_string(v) + " exhausts precision " +
                              std::to_string(c.prec()));
    Zp num(c.p(), c.prec(), 1);
    for (uint64_t i = 0; i < k; ++i) num *= (c - Zp(c.p(), c.prec(), i % c.modulus()));
    // k! = p^v * w with w a unit
    Zp w(c.p(), c.prec(), 1);
    for (uint64_t i = 2; i <= k; ++i) {
        uint64_t t = i;
        while (t % c.p() == 0) t /= c.p();
        w *= Zp(c.p(), c.prec(), t % c.modulus());
    }
    return (num * w.inv()).div_pow_p(v);
}

/* ---- OFRing / OFElem ---- */

OFRing::OFRing(uint64_t p, unsigned f, unsigned prec) : p_(p), f_(f), prec_(prec) {
    if (p < 3) throw error("OFRing: p must be an odd prime >= 3");
    if (f == 0) throw error("OFRing: f must be >= 1");
    mod_ = pow_u64_checked(p, prec);
    if (f_ == 1) return;
    FpPoly g = smallest_irreducible(p, f);
    poly_.assign(f + 1, 0);
    for (unsigned i = 0; i <= f; ++i) poly_[i] = g[i] % mod_;
    // Hensel-lift the root of poly congruent to t^p mod p
    RawRing R{p_, f_, mod_, &poly_};
    Vec t(f_, 0);
    t[1] = 1;
    Vec r = raw_pow(R, t, p_);
    std::vector<uint64_t> dpoly(f_, 0);  // derivative coefficients
    for (unsigned i = 1; i <= f_; ++i) dpoly[i - 1] = mulmod(poly_[i] % mod_, i % mod_, mod_);
    for (unsigned step = 0; step < prec_ + 2; ++step) {
        Vec fr = raw_poly_eval(R, poly_, r);
        if (raw_is_zero(fr)) break;
        Vec dfr = raw_poly_eval(R, dpoly, r);
        r = raw_sub(R, r, raw_mul(R, fr, raw_inv(R, dfr)));
    }
    frob_gen_ = r;
}

OFRingPtr OFRing::make(uint64_t p, unsigned f, unsigned prec) {
    return OFRingPtr(new OFRing(p, f, prec));
}

OFRingPtr OFRing::at_prec(unsigned prec) const {
    if (prec == prec_) return shared_from_this();
    return make(p_, f_, prec);
}

OFElem OFRing::zero() const { return OFElem(shared_from_this(), Vec(f_, 0)); }

OFElem OFRing::one() const {
    Vec c(f_, 0);
    c[0] = 1 % mod_;
    return OFElem(shared_from_this(), c);
}

OFElem OFRing::from_int(long long n) const {
    long long r = n % static_cast<long long>(mod_);
    if (r < 0) r += static_cast<long long>(mod_);
    Vec c(f_, 0);
    c[0] = static_cast<uint64_t>(r);
    return OFElem(shared_from_this(), c);
}

OFElem OFRing::from_zp(const Zp& z) const {
    if (z.p() != p_ || z.prec() != prec_) throw error("OFRing::from_zp: mismatched p or precision");
    Vec c(f_, 0);
    c[0] = z.value();
    return OFElem(shared_from_this(), c);
}

OFElem OFRing::gen() const {
    if (f_ == 1) throw error("OFRing::gen: f = 1 has no generator");
    Vec c(f_, 0);
    c[1] = 1;
    return OFElem(shared_from_this(), c);
}

OFElem OFRing::from_coords(std::vector<Zp> coords) const {
    if (coords.size() != f_) throw error("OFRing::from_coords: wrong length");
    Vec c(f_);
    for (unsigned i = 0; i < f_; ++i) {
        if (coords[i].p() != p_ || coords[i].prec() != prec_) throw error("OFRing::from_coords: mismatched scalar");
        c[i] = coords[i].value();
    }
    return OFElem(shared_from_this(), c);
}

OFElem::OFElem(OFRingPtr ring, std::vector<uint64_t> coords) : ring_(std::move(ring)), c_(std::move(coords)) {
    if (c_.size() != ring_->f()) throw error("OFElem: wrong coordinate length");
    for (auto& x : c_) x %= ring_->modulus();
}

void OFElem::require_same_ring(const OFElem& o) const {
    if (ring_.get() == o.ring_.get()) return;
    if (!ring_ || !o.ring_ || ring_->p() != o.ring_->p() || ring_->f() != o.ring_->f() ||
        ring_->prec() != o.ring_->prec())
        throw error("OFElem: mixed rings in arithmetic");
}

Zp OFElem::coord(unsigned i) const { return Zp(ring_->p(), ring_->prec(), c_.at(i)); }

Zp OFElem::as_zp() const {
    if (ring_->f() != 1) throw error("OFElem::as_zp: only defined for f = 1");
    return Zp(ring_->p(), ring_->prec(), c_[0]);
}

bool OFElem::is_zero() const { return raw_is_zero(c_); }

bool OFElem::is_unit() const {
    for (uint64_t x : c_)
        if (x % ring_->p() != 0) return true;
    return false;
}

unsigned OFElem::valuation() const {
    unsigned v = ring_->prec();
    for (uint64_t x : c_) v = std::min(v, val_p(x, ring_->p(), ring_->prec()));
    return v;
}

OFElem OFElem::operator-() const {
    Vec r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] ? ring_->modulus() - c_[i] : 0;
    return OFElem(ring_, r);
}

OFElem OFElem::operator+(const OFElem& o) const {
    require_same_ring(o);
    RawRing R{ring_->p(), ring_->f(), ring_->modulus(), &ring_->poly()};
    return OFElem(ring_, raw_add(R, c_, o.c_));
}

OFElem OFElem::operator-(const OFElem& o) const {
    require_same_ring(o);
    RawRing R{ring_->p(), ring_->f(), ring_->modulus(), &ring_->poly()};
    return OFElem(ring_, raw_sub(R, c_, o.c_));
}

OFElem OFElem::operator*(const OFElem& o) const {
    require_same_ring(o);
    RawRing R{ring_->p(), ring_->f(), ring_->modulus(), &ring_->poly()};
    return OFElem(ring_, raw_mul(R, c_, o.c_));
}

bool OFElem::operator==(const OFElem& o) const {
    if (!ring_ || !o.ring_) return ring_.get() == o.ring_.get();
    return ring_->p() == o.ring_->p() && ring_->f() == o.ring_->f() && ring_->prec() == o.ring_->prec() &&
           c_ == o.c_;
}

OFElem OFElem::inv() const {
    RawRing R{ring_->p(), ring_->f(), ring_->modulus(), &ring_->poly()};
    return OFElem(ring_, raw_inv(R, c_));
}

OFElem OFElem::pow(uint64_t e) const {
    RawRing R{ring_->p(), ring_->f(), ring_->modulus(), &ring_->poly()};
    return OFElem(ring_, raw_pow(R, c_, e));
}

OFElem OFElem::div_pow_p(unsigned k) const {
    if (k == 0) return *this;
    if (k >= ring_->prec()) throw precision_error("OFElem::div_pow_p: dividing away all precision");
    uint64_t pk = pow_u64_checked(ring_->p(), k);
    Vec r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] % pk != 0) throw not_divisible_error("OFElem::div_pow_p: coordinate not divisible");
        r[i] = c_[i] / pk;
    }
    return OFElem(ring_, r);
}

OFElem OFElem::at_prec(unsigned newprec) const {
    OFRingPtr nr = ring_->at_prec(newprec);
    Vec r = c_;
    for (auto& x : r) x %= nr->modulus();
    return OFElem(nr, r);
}

bool OFElem::congruent(const OFElem& o, unsigned prec) const {
    if (ring_->p() != o.ring_->p() || ring_->f() != o.ring_->f()) return false;
    unsigned e = std::min({prec, ring_->prec(), o.ring_->prec()});
    uint64_t pe = pow_u64_checked(ring_->p(), e);
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] % pe != o.c_[i] % pe) return false;
    return true;
}

std::string OFElem::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
    os << "]";
    return os.str();
}

OFElem frobenius_of(const OFElem& x) {
    const OFRingPtr& ring = x.ring();
    if (ring->f() == 1) return x;
    RawRing R{ring->p(), ring->f(), ring->modulus(), &ring->poly()};
    // sigma(sum a_i t^i) = sum a_i sigma(t)^i with a_i in Z_p
    Vec acc(ring->f(), 0);
    Vec pw(ring->f(), 0);
    pw[0] = 1;
    for (unsigned i = 0; i < ring->f(); ++i) {
        if (i) pw = raw_mul(R, pw, x.ring_->frob_gen_);
        acc = raw_add(R, acc, raw_scal(R, x.coords()[i], pw));
    }
    return OFElem(ring, acc);
}

OFElem teichmuller_of(const OFRingPtr& ring, const std::vector<uint64_t>& residue) {
    if (residue.size() != ring->f()) throw error("teichmuller_of: wrong residue length");
    RawRing R{ring->p(), ring->f(), ring->modulus(), &ring->poly()};
    Vec x(residue);
    for (auto& c : x) c %= ring->modulus();
    if (raw_is_zero(x)) return ring->zero();
    uint64_t q = 1;  // p^f, order of the residue field
    for (unsigned i = 0; i < ring->f(); ++i) q *= ring->p();
    for (unsigned i = 0; i <= ring->prec() + 1; ++i) {
        Vec nx = raw_pow(R, x, q);
        if (nx == x) break;
        x = nx;
    }
    return OFElem(ring, x);
}

}  // namespace wachcoh
