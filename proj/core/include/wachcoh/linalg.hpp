#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wachcoh/padic.hpp"

namespace wachcoh {

/*
 * Mat: dense matrix over Z/p^N.  Entries are raw residues; p and N are held
 * once per matrix.  Desk-scale dimensions only.
 */
class Mat {
  public:
    Mat() : p_(0), prec_(0), mod_(0), rows_(0), cols_(0) {}
    Mat(uint64_t p, unsigned prec, size_t rows, size_t cols);
    static Mat identity(uint64_t p, unsigned prec, size_t n);
    static Mat from_columns(uint64_t p, unsigned prec, size_t rows,
                            const std::vector<std::vector<uint64_t>>& cols);

    uint64_t p() const { return p_; }
    unsigned prec() const { return prec_; }
    uint64_t modulus() const { return mod_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    uint64_t at(size_t i, size_t j) const { return a_[i * cols_ + j]; }
    void set(size_t i, size_t j, uint64_t v) { a_[i * cols_ + j] = v % mod_; }
    Zp zp_at(size_t i, size_t j) const { return Zp(p_, prec_, at(i, j)); }

    std::vector<uint64_t> column(size_t j) const;
    bool is_zero() const;
    Mat transpose() const;
    Mat operator*(const Mat& o) const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    bool operator==(const Mat& o) const;
    Mat hstack(const Mat& o) const;
    Mat vstack(const Mat& o) const;
    std::vector<uint64_t> apply(const std::vector<uint64_t>& v) const;

  private:
    uint64_t p_;
    unsigned prec_;
    uint64_t mod_;
    size_t rows_, cols_;
    std::vector<uint64_t> a_;
};

/*
 * Smith normal form over Z/p^N: U A V = diag(p^{e_0}, ..., p^{e_{k-1}}) with
 * U, V unimodular and e_0 <= e_1 <= ...  The exponent N encodes the zero
 * class (a zero diagonal entry).
 */
struct SmithForm {
    Mat U, V;
    std::vector<unsigned> exponents;  // length min(rows, cols), nondecreasing
};

SmithForm smith_normal_form(const Mat& A);

/* Generators of {x : A x = 0} as the columns of the returned matrix. */
Mat kernel_basis(const Mat& A);

/* Invariants of coker(A: Z^cols -> Z^rows): multiset of exponents e with the
 * cokernel isomorphic to the direct sum of Z/p^e; zero entries, and N entries
 * for rows the image misses entirely, are kept. */
std::vector<unsigned> cokernel_divisors(const Mat& A);

/* Divisors of the module generated by the columns of G: multiset of d with
 * the module isomorphic to the direct sum of Z/p^d (zero summands dropped). */
std::vector<unsigned> image_divisors(const Mat& G);

/* Any solution of A x = b, or nullopt when insoluble mod p^N. */
std::optional<std::vector<uint64_t>> solve(const Mat& A, const std::vector<uint64_t>& b);

/* Factored form of A for solving many right-hand sides. */
class Solver {
  public:
    explicit Solver(const Mat& A);
    std::optional<std::vector<uint64_t>> solve(const std::vector<uint64_t>& b) const;
    bool in_image(const std::vector<uint64_t>& b) const;
    const SmithForm& form() const { return sf_; }

  private:
    SmithForm sf_;
    size_t rows_, cols_;
    unsigned prec_;
    uint64_t p_;
};

/* Count of divisors d >= N - guard: the estimated Q_p-dimension. */
unsigned rationalized_rank(const std::vector<unsigned>& divisors, unsigned N, unsigned guard);

/* Divisors of im(Gbig)/im(Gsmall); throws if im(Gsmall) is not contained in
 * im(Gbig). */
std::vector<unsigned> quotient_divisors(const Mat& Gbig, const Mat& Gsmall);

bool in_span(const Mat& G, const std::vector<uint64_t>& v);
bool span_contains(const Mat& G, const Mat& H);  // im H inside im G
bool span_equal(const Mat& G, const Mat& H);
/* Generators of im(G) intersected with im(H). */
Mat span_intersection(const Mat& G, const Mat& H);
/* Generators of { v : p^c v in im(G) }: the depth-c partial saturation. */
Mat span_saturation(const Mat& G, unsigned c);
/* p^g * im(H) inside im(G): containment up to a bounded p-power, the
 * guard-window substitute for exact equality of truncated submodules. */
bool span_contains_scaled(const Mat& G, const Mat& H, unsigned g);
/* im(H) = im(G) up to p^g on one side: H inside G exactly and p^g G inside H. */
bool span_equal_guarded(const Mat& G, const Mat& H, unsigned g);

}  // namespace wachcoh
