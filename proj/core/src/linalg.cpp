#include "wachcoh/linalg.hpp"

#include <algorithm>

namespace wachcoh {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

uint64_t invmod(uint64_t a, uint64_t m) {
    long long t = 0, newt = 1;
    long long r = static_cast<long long>(m), newr = static_cast<long long>(a % m);
    while (newr != 0) {
        long long q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    if (r != 1) throw not_a_unit_error("linalg: inverse of a non-unit");
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

}  // namespace

Mat::Mat(uint64_t p, unsigned prec, size_t rows, size_t cols)
    : p_(p), prec_(prec), mod_(pow_u64_checked(p, prec)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

Mat Mat::identity(uint64_t p, unsigned prec, size_t n) {
    Mat m(p, prec, n, n);
    for (size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Mat Mat::from_columns(uint64_t p, unsigned prec, size_t rows, const std::vector<std::vector<uint64_t>>& cols) {
    Mat m(p, prec, rows, cols.size());
    for (size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) throw error("Mat::from_columns: ragged column");
        for (size_t i = 0; i < rows; ++i) m.set(i, j, cols[j][i]);
    }
    return m;
}

std::vector<uint64_t> Mat::column(size_t j) const {
    std::vector<uint64_t> c(rows_);
    for (size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
    return c;
}

bool Mat::is_zero() const {
    for (uint64_t x : a_)
        if (x) return false;
    return true;
}

Mat Mat::transpose() const {
    Mat t(p_, prec_, cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) t.set(j, i, at(i, j));
    return t;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_ || p_ != o.p_ || prec_ != o.prec_) throw error("Mat: mismatched product");
    Mat r(p_, prec_, rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            uint64_t x = at(i, k);
            if (!x) continue;
            for (size_t j = 0; j < o.cols_; ++j) {
                uint64_t v = r.at(i, j) + mulmod(x, o.at(k, j), mod_);
                r.set(i, j, v % mod_);
            }
        }
    return r;
}

Mat Mat::operator+(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw error("Mat: mismatched sum");
    Mat r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = (a_[i] + o.a_[i]) % mod_;
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw error("Mat: mismatched difference");
    Mat r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = (a_[i] + mod_ - o.a_[i]) % mod_;
    return r;
}

bool Mat::operator==(const Mat& o) const {
    return p_ == o.p_ && prec_ == o.prec_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

Mat Mat::hstack(const Mat& o) const {
    if (rows_ != o.rows_) throw error("Mat::hstack: row mismatch");
    Mat r(p_, prec_, rows_, cols_ + o.cols_);
    for (size_t i = 0; i < rows_; ++i) {
        for (size_t j = 0; j < cols_; ++j) r.set(i, j, at(i, j));
        for (size_t j = 0; j < o.cols_; ++j) r.set(i, cols_ + j, o.at(i, j));
    }
    return r;
}

Mat Mat::vstack(const Mat& o) const {
    if (cols_ != o.cols_) throw error("Mat::vstack: column mismatch");
    Mat r(p_, prec_, rows_ + o.rows_, cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r.set(i, j, at(i, j));
    for (size_t i = 0; i < o.rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r.set(rows_ + i, j, o.at(i, j));
    return r;
}

std::vector<uint64_t> Mat::apply(const std::vector<uint64_t>& v) const {
    if (v.size() != cols_) throw error("Mat::apply: dimension mismatch");
    std::vector<uint64_t> r(rows_, 0);
    for (size_t i = 0; i < rows_; ++i) {
        __uint128_t acc = 0;
        for (size_t j = 0; j < cols_; ++j) {
            acc += static_cast<__uint128_t>(at(i, j)) * (v[j] % mod_);
            if ((j & 15) == 15) acc %= mod_;
        }
        r[i] = static_cast<uint64_t>(acc % mod_);
    }
    return r;
}

SmithForm smith_normal_form(const Mat& A) {
    uint64_t p = A.p(), mod = A.modulus();
    unsigned N = A.prec();
    size_t m = A.rows(), n = A.cols();
    Mat W = A;
    Mat U = Mat::identity(p, N, m);
    Mat V = Mat::identity(p, N, n);
    size_t k = std::min(m, n);
    std::vector<unsigned> exps(k, N);

    auto swap_rows = [&](Mat& X, size_t a, size_t b) {
        if (a == b) return;
        for (size_t j = 0; j < X.cols(); ++j) {
            uint64_t t = X.at(a, j);
            X.set(a, j, X.at(b, j));
            X.set(b, j, t);
        }
    };
    auto swap_cols = [&](Mat& X, size_t a, size_t b) {
        if (a == b) return;
        for (size_t i = 0; i < X.rows(); ++i) {
            uint64_t t = X.at(i, a);
            X.set(i, a, X.at(i, b));
            X.set(i, b, t);
        }
    };

    for (size_t t = 0; t < k; ++t) {
        // pivot: minimal p-valuation in the trailing submatrix
        unsigned best = N + 1;
        size_t bi = t, bj = t;
        for (size_t i = t; i < m; ++i)
            for (size_t j = t; j < n; ++j) {
                unsigned v = val_p(W.at(i, j), p, N);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (best == 0) goto found;
                }
            }
    found:
        if (best > N) best = N;
        if (best == N) break;  // trailing block is zero; exponents stay N
        swap_rows(W, t, bi);
        swap_rows(U, t, bi);
        swap_cols(W, t, bj);
        swap_cols(V, t, bj);
        // normalize the pivot to exactly p^e
        uint64_t pe = pow_u64_checked(p, best);
        uint64_t unit = W.at(t, t) / pe;  // valuation best => exact
        uint64_t uin = invmod(unit % mod, mod);
        for (size_t j = t; j < n; ++j) W.set(t, j, mulmod(W.at(t, j), uin, mod));
        for (size_t j = 0; j < m; ++j) U.set(t, j, mulmod(U.at(t, j), uin, mod));
        // clear the column below and the row to the right; quotients are exact
        for (size_t i = t + 1; i < m; ++i) {
            uint64_t v = W.at(i, t);
            if (!v) continue;
            uint64_t q = v / pe;  // valuation >= best
            for (size_t j = t; j < n; ++j) W.set(i, j, (W.at(i, j) + mod - mulmod(q, W.at(t, j), mod)) % mod);
            for (size_t j = 0; j < m; ++j) U.set(i, j, (U.at(i, j) + mod - mulmod(q, U.at(t, j), mod)) % mod);
        }
        for (size_t j = t + 1; j < n; ++j) {
            uint64_t v = W.at(t, j);
            if (!v) continue;
            uint64_t q = v / pe;
            for (size_t i = t; i < m; ++i) W.set(i, j, (W.at(i, j) + mod - mulmod(q, W.at(i, t), mod)) % mod);
            for (size_t i = 0; i < n; ++i) V.set(i, j, (V.at(i, j) + mod - mulmod(q, V.at(i, t), mod)) % mod);
        }
        exps[t] = best;
    }
    return SmithForm{std::move(U), std::move(V), std::move(exps)};
}

Mat kernel_basis(const Mat& A) {
    SmithForm S = smith_normal_form(A);
    uint64_t p = A.p();
    unsigned N = A.prec();
    size_t n = A.cols();
    size_t k = S.exponents.size();
    std::vector<std::vector<uint64_t>> gens;
    for (size_t j = 0; j < n; ++j) {
        unsigned e = j < k ? S.exponents[j] : N;  // columns beyond the diagonal are free
        if (j < k && e == 0) continue;
        uint64_t scale = pow_u64_checked(p, j < k ? N - e : 0);
        std::vector<uint64_t> col = S.V.column(j);
        if (scale != 1)
            for (auto& x : col) x = mulmod(x, scale, A.modulus());
        gens.push_back(std::move(col));
    }
    return Mat::from_columns(p, N, n, gens);
}

std::vector<unsigned> cokernel_divisors(const Mat& A) {
    SmithForm S = smith_normal_form(A);
    std::vector<unsigned> out = S.exponents;
    for (size_t i = S.exponents.size(); i < A.rows(); ++i) out.push_back(A.prec());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<unsigned> image_divisors(const Mat& G) {
    SmithForm S = smith_normal_form(G);
    std::vector<unsigned> out;
    for (unsigned e : S.exponents)
        if (e < G.prec()) out.push_back(G.prec() - e);
    std::sort(out.begin(), out.end());
    return out;
}

Solver::Solver(const Mat& A)
    : sf_(smith_normal_form(A)), rows_(A.rows()), cols_(A.cols()), prec_(A.prec()), p_(A.p()) {}

std::optional<std::vector<uint64_t>> Solver::solve(const std::vector<uint64_t>& b) const {
    if (b.size() != rows_) throw error("Solver::solve: dimension mismatch");
    uint64_t mod = sf_.U.modulus();
    std::vector<uint64_t> y = sf_.U.apply(b);
    size_t k = sf_.exponents.size();
    std::vector<uint64_t> z(cols_, 0);
    for (size_t i = 0; i < rows_; ++i) {
        if (i >= k || sf_.exponents[i] == prec_) {
            if (y[i] % mod != 0) return std::nullopt;
            continue;
        }
        uint64_t pe = pow_u64_checked(p_, sf_.exponents[i]);
        if (y[i] % pe != 0) return std::nullopt;
        if (i < z.size()) z[i] = y[i] / pe;
    }
    return sf_.V.apply(z);
}

bool Solver::in_image(const std::vector<uint64_t>& b) const { return solve(b).has_value(); }

std::optional<std::vector<uint64_t>> solve(const Mat& A, const std::vector<uint64_t>& b) {
    return Solver(A).solve(b);
}

unsigned rationalized_rank(const std::vector<unsigned>& divisors, unsigned N, unsigned guard) {
    if (guard >= N) throw error("rationalized_rank: guard must be below the precision");
    unsigned c = 0;
    for (unsigned d : divisors)
        if (d >= N - guard) ++c;
    return c;
}

std::vector<unsigned> quotient_divisors(const Mat& Gbig, const Mat& Gsmall) {
    if (Gbig.cols() == 0) {
        // big module is zero; the small one must be too
        if (!Gsmall.is_zero() && Gsmall.cols() > 0) throw error("quotient_divisors: submodule not contained");
        return {};
    }
    Solver solver(Gbig);
    std::vector<std::vector<uint64_t>> xcols;
    for (size_t j = 0; j < Gsmall.cols(); ++j) {
        auto x = solver.solve(Gsmall.column(j));
        if (!x) throw error("quotient_divisors: submodule not contained in the ambient span");
        xcols.push_back(*x);
    }
    Mat X = Mat::from_columns(Gbig.p(), Gbig.prec(), Gbig.cols(), xcols);
    Mat R = kernel_basis(Gbig);
    return cokernel_divisors(X.hstack(R));
}

bool in_span(const Mat& G, const std::vector<uint64_t>& v) {
    bool zero = true;
    for (uint64_t x : v)
        if (x % G.modulus()) zero = false;
    if (zero) return true;
    if (G.cols() == 0) return false;
    return solve(G, v).has_value();
}

bool span_contains(const Mat& G, const Mat& H) {
    if (H.cols() == 0) return true;
    if (G.cols() == 0) return H.is_zero();
    Solver solver(G);
    for (size_t j = 0; j < H.cols(); ++j)
        if (!solver.in_image(H.column(j))) return false;
    return true;
}

bool span_equal(const Mat& G, const Mat& H) { return span_contains(G, H) && span_contains(H, G); }

Mat span_intersection(const Mat& G, const Mat& H) {
    // x = G c lies in im(H) iff rows scaled from the SNF of H annihilate it
    SmithForm S = smith_normal_form(H);
    uint64_t p = G.p(), mod = G.modulus();
    unsigned N = G.prec();
    size_t k = S.exponents.size();
    Mat UG = S.U * G;
    std::vector<std::vector<uint64_t>> cond_rows;
    for (size_t i = 0; i < H.rows(); ++i) {
        unsigned e = i < k ? S.exponents[i] : N;
        if (e == 0) continue;  // no constraint
        uint64_t scale = pow_u64_checked(p, N - e);
        std::vector<uint64_t> row(G.cols());
        for (size_t j = 0; j < G.cols(); ++j) row[j] = mulmod(scale, UG.at(i, j), mod);
        cond_rows.push_back(std::move(row));
    }
    Mat C(p, N, cond_rows.size(), G.cols());
    for (size_t i = 0; i < cond_rows.size(); ++i)
        for (size_t j = 0; j < G.cols(); ++j) C.set(i, j, cond_rows[i][j]);
    Mat K = kernel_basis(C);
    return G * K;
}

Mat span_saturation(const Mat& G, unsigned c) {
    // v lies in the saturation iff p^c v is annihilated by the scaled rows of
    // the SNF of G; rows with exponent e impose p^{N-e+c} U_i v = 0
    SmithForm S = smith_normal_form(G);
    uint64_t p = G.p(), mod = G.modulus();
    unsigned N = G.prec();
    size_t k = S.exponents.size();
    std::vector<std::vector<uint64_t>> rows;
    for (size_t i = 0; i < G.rows(); ++i) {
        unsigned e = i < k ? S.exponents[i] : N;
        if (e <= c) continue;  // constraint vanishes mod p^N
        unsigned sc = N - e + c;
        uint64_t scale = pow_u64_checked(p, sc);
        std::vector<uint64_t> row(G.rows() == 0 ? 0 : S.U.cols());
        for (size_t j = 0; j < S.U.cols(); ++j) row[j] = mulmod(scale, S.U.at(i, j), mod);
        rows.push_back(std::move(row));
    }
    Mat C(p, N, rows.size(), G.rows());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < G.rows(); ++j) C.set(i, j, rows[i][j]);
    return kernel_basis(C);
}

bool span_contains_scaled(const Mat& G, const Mat& H, unsigned g) {
    uint64_t s = pow_u64_checked(H.p(), g) % H.modulus();
    std::optional<Solver> solver;
    if (G.cols() > 0) solver.emplace(G);
    for (size_t j = 0; j < H.cols(); ++j) {
        std::vector<uint64_t> c = H.column(j);
        bool zero = true;
        for (auto& x : c) {
            x = mulmod(x, s, H.modulus());
            if (x) zero = false;
        }
        if (zero) continue;
        if (!solver || !solver->in_image(c)) return false;
    }
    return true;
}

bool span_equal_guarded(const Mat& G, const Mat& H, unsigned g) {
    return span_contains(G, H) && span_contains_scaled(H, G, g);
}

}  // namespace wachcoh
