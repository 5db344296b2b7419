#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "charlab/error.hpp"

namespace charlab {

using i64 = std::int64_t;
using i128 = __int128;

using Vec = std::vector<i64>;
using Mat = std::vector<Vec>; // dense, row major

// All set-level algebra below is exact. Entries live in i64; every product
// goes through i128 so the narrowing check is the single overflow gate.
inline i64 narrow(i128 v) {
    if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
        fail(errc::internal, "integer overflow in exact arithmetic");
    return static_cast<i64>(v);
}

inline i64 mul_checked(i64 a, i64 b) { return narrow(i128(a) * b); }

inline i64 gcd_i64(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline i64 lcm_i64(i64 a, i64 b) {
    if (a == 0 || b == 0) return 0;
    return mul_checked(a / gcd_i64(a, b), b < 0 ? -b : b);
}

/// Extended Euclid: returns g = gcd(a,b) and x,y with a*x + b*y = g.
inline i64 xgcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) {
        x = a < 0 ? -1 : 1;
        y = 0;
        return a < 0 ? -a : a;
    }
    i64 x1, y1;
    i64 g = xgcd(b, a % b, x1, y1);
    x = y1;
    y = narrow(i128(x1) - i128(a / b) * y1);
    return g;
}

inline i64 pos_mod(i64 a, i64 n) {
    i64 r = a % n;
    return r < 0 ? r + n : r;
}

inline i64 floor_div(i64 a, i64 b) {
    i64 q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

/// Modular inverse of a mod n; 'a' must be coprime to n.
inline i64 mod_inverse(i64 a, i64 n) {
    i64 x, y;
    i64 g = xgcd(pos_mod(a, n), n, x, y);
    require(g == 1, errc::not_invertible, "element not invertible modulo " + std::to_string(n));
    return pos_mod(x, n);
}

inline Mat identity_mat(std::size_t n) {
    Mat I(n, Vec(n, 0));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

inline Mat mat_mul(const Mat& A, const Mat& B) {
    std::size_t m = A.size(), k = B.size(), n = k ? B[0].size() : 0;
    Mat C(m, Vec(n, 0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            i128 acc = 0;
            for (std::size_t t = 0; t < k; ++t) acc += i128(A[i][t]) * B[t][j];
            C[i][j] = narrow(acc);
        }
    return C;
}

inline Vec mat_vec(const Mat& A, const Vec& x) {
    Vec y(A.size(), 0);
    for (std::size_t i = 0; i < A.size(); ++i) {
        i128 acc = 0;
        for (std::size_t j = 0; j < x.size(); ++j) acc += i128(A[i][j]) * x[j];
        y[i] = narrow(acc);
    }
    return y;
}

namespace detail {

inline void row_axpy(Vec& dst, const Vec& src, i64 q) {
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = narrow(i128(dst[j]) - i128(q) * src[j]);
}

} // namespace detail

/// Row-style Hermite normal form of the lattice spanned by `rows`.
/// Result is in echelon form: pivots positive, entries above each pivot
/// reduced into [0, pivot). Unique for a given lattice, so two generating
/// sets of the same lattice produce identical output.
inline Mat hnf_rows(Mat rows, std::size_t ncols) {
    for (auto& r : rows)
        if (r.size() != ncols) fail(errc::internal, "hnf_rows: ragged input");
    std::size_t pr = 0;
    for (std::size_t col = 0; col < ncols && pr < rows.size(); ++col) {
        // gcd-eliminate column below the pivot row
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t k = pr; k < rows.size(); ++k)
                if (rows[k][col] != 0 &&
                    (best == rows.size() || std::abs(rows[k][col]) < std::abs(rows[best][col])))
                    best = k;
            if (best == rows.size()) break;
            std::swap(rows[pr], rows[best]);
            bool clear = true;
            for (std::size_t k = pr + 1; k < rows.size(); ++k) {
                if (rows[k][col] == 0) continue;
                detail::row_axpy(rows[k], rows[pr], rows[k][col] / rows[pr][col]);
                if (rows[k][col] != 0) clear = false;
            }
            if (clear) break;
        }
        if (pr < rows.size() && rows[pr][col] != 0) {
            if (rows[pr][col] < 0)
                for (auto& v : rows[pr]) v = -v;
            for (std::size_t k = 0; k < pr; ++k)
                if (rows[k][col] != 0)
                    detail::row_axpy(rows[k], rows[pr], floor_div(rows[k][col], rows[pr][col]));
            ++pr;
        }
    }
    rows.resize(pr);
    return rows;
}

/// Smith normal form S = U*A*V with U,V unimodular and S diagonal,
/// each diagonal entry non-negative and dividing the next.
struct SmithForm {
    Mat S, U, V;
    std::size_t rank = 0;
    i64 diag(std::size_t i) const {
        return (i < S.size() && i < S[i].size()) ? S[i][i] : 0;
    }
};

inline SmithForm smith_form(Mat A) {
    std::size_t m = A.size(), n = m ? A[0].size() : 0;
    SmithForm f;
    f.U = identity_mat(m);
    f.V = identity_mat(n);
    auto row_op = [&](std::size_t i, std::size_t t, i64 q) {
        detail::row_axpy(A[i], A[t], q);
        detail::row_axpy(f.U[i], f.U[t], q);
    };
    auto col_op = [&](std::size_t j, std::size_t t, i64 q) {
        for (std::size_t i = 0; i < m; ++i) A[i][j] = narrow(i128(A[i][j]) - i128(q) * A[i][t]);
        for (std::size_t i = 0; i < n; ++i)
            f.V[i][j] = narrow(i128(f.V[i][j]) - i128(q) * f.V[i][t]);
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < m; ++i) std::swap(A[i][a], A[i][b]);
        for (std::size_t i = 0; i < n; ++i) std::swap(f.V[i][a], f.V[i][b]);
    };

    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
        // locate smallest nonzero entry in the trailing block
        std::size_t pi = m, pj = n;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (A[i][j] != 0 && (pi == m || std::abs(A[i][j]) < std::abs(A[pi][pj]))) {
                    pi = i;
                    pj = j;
                }
        if (pi == m) break;
        std::swap(A[t], A[pi]);
        std::swap(f.U[t], f.U[pi]);
        col_swap(t, pj);
        while (true) {
            bool dirty = false;
            for (std::size_t i = t + 1; i < m; ++i)
                if (A[i][t] != 0) {
                    row_op(i, t, A[i][t] / A[t][t]);
                    if (A[i][t] != 0) {
                        std::swap(A[t], A[i]);
                        std::swap(f.U[t], f.U[i]);
                        dirty = true;
                    }
                }
            for (std::size_t j = t + 1; j < n; ++j)
                if (A[t][j] != 0) {
                    col_op(j, t, A[t][j] / A[t][t]);
                    if (A[t][j] != 0) {
                        col_swap(t, j);
                        dirty = true;
                    }
                }
            if (dirty) continue;
            // enforce divisibility of the trailing block by the pivot
            bool fixed = true;
            for (std::size_t i = t + 1; i < m && fixed; ++i)
                for (std::size_t j = t + 1; j < n && fixed; ++j)
                    if (A[i][j] % A[t][t] != 0) {
                        row_op(t, i, -1); // add row i to row t, then re-eliminate
                        fixed = false;
                    }
            if (fixed) break;
        }
        if (A[t][t] < 0) {
            for (auto& v : A[t]) v = -v;
            for (auto& v : f.U[t]) v = -v;
        }
    }
    f.rank = t;
    f.S = std::move(A);
    return f;
}

/// Basis (as rows) of the right kernel over Z of an integer matrix.
inline Mat integer_kernel(const Mat& A) {
    std::size_t n = A.empty() ? 0 : A[0].size();
    if (A.empty()) return identity_mat(n);
    SmithForm f = smith_form(A);
    Mat basis;
    for (std::size_t i = 0; i < n; ++i)
        if (f.diag(i) == 0) {
            Vec v(n);
            for (std::size_t r = 0; r < n; ++r) v[r] = f.V[r][i];
            basis.push_back(std::move(v));
        }
    return basis;
}

/// System of simultaneous linear congruences: row i demands
/// (A x)_i == rhs_i (mod mods_i). Solved exactly through the Smith form of
/// the lcm-scaled matrix.
class CongruenceSystem {
  public:
    CongruenceSystem(const Mat& A, const Vec& mods, std::size_t ncols) : ncols_(ncols) {
        L_ = 1;
        for (i64 m : mods) L_ = lcm_i64(L_, m);
        if (L_ == 0) L_ = 1;
        Mat scaled(A.size(), Vec(ncols, 0));
        scale_.resize(A.size());
        for (std::size_t i = 0; i < A.size(); ++i) {
            scale_[i] = L_ / mods[i];
            for (std::size_t j = 0; j < ncols; ++j) scaled[i][j] = mul_checked(A[i][j], scale_[i]);
        }
        f_ = smith_form(std::move(scaled));
        nrows_ = A.size();
    }

    /// Particular solution of A x == rhs (mod mods), if one exists.
    std::optional<Vec> solve(const Vec& rhs) const {
        Vec b(nrows_);
        for (std::size_t i = 0; i < nrows_; ++i) b[i] = mul_checked(rhs[i], scale_[i]);
        Vec ub(nrows_);
        for (std::size_t i = 0; i < nrows_; ++i) {
            i128 acc = 0;
            for (std::size_t j = 0; j < nrows_; ++j) acc += i128(f_.U[i][j]) * b[j];
            ub[i] = narrow(acc % L_);
        }
        Vec z(ncols_, 0);
        for (std::size_t i = 0; i < std::max(nrows_, ncols_); ++i) {
            i64 s = i < ncols_ ? f_.diag(i) : 0;
            i64 bi = i < nrows_ ? pos_mod(ub[i], L_) : 0;
            if (s == 0) {
                if (bi % L_ != 0) return std::nullopt;
            } else {
                i64 g = gcd_i64(s, L_);
                if (bi % g != 0) return std::nullopt;
                i64 n = L_ / g;
                z[i] = narrow(i128(bi / g) % n * mod_inverse((s / g) % n, n) % n);
            }
        }
        Vec x(ncols_, 0);
        for (std::size_t r = 0; r < ncols_; ++r) {
            i128 acc = 0;
            for (std::size_t i = 0; i < ncols_; ++i) acc += i128(f_.V[r][i]) * z[i];
            x[r] = narrow(acc);
        }
        return x;
    }

    /// Lattice of homogeneous solutions {x : A x == 0 (mod mods)}, as rows.
    Mat kernel_basis() const {
        Mat basis;
        for (std::size_t i = 0; i < ncols_; ++i) {
            i64 s = f_.diag(i);
            i64 step = s == 0 ? 1 : L_ / gcd_i64(s, L_);
            Vec v(ncols_);
            for (std::size_t r = 0; r < ncols_; ++r) v[r] = mul_checked(f_.V[r][i], step);
            basis.push_back(std::move(v));
        }
        return basis;
    }

  private:
    std::size_t ncols_, nrows_;
    i64 L_;
    Vec scale_;
    SmithForm f_;
};

} // namespace charlab
