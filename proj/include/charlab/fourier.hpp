#pragma once

#include <vector>

#include "charlab/group.hpp"

namespace charlab {
namespace fft {

/// Naive O(n^2) DFT, used for prime lengths. Direct summation is also the
/// documented fallback for prime factors > 512.
inline void dft_prime(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    std::vector<cplx> w(n);
    for (std::size_t k = 0; k < n; ++k)
        w[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * double(k) / double(n));
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc = 0;
        for (std::size_t j = 0; j < n; ++j) acc += a[j] * w[(j * k) % n];
        out[k] = acc;
    }
    a.swap(out);
}

inline std::size_t smallest_factor(std::size_t n) {
    for (std::size_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return p;
    return n;
}

/// Mixed-radix Cooley-Tukey, X[k] = sum_j x[j] exp(sign*2*pi*i*jk/n).
inline void dft_1d(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    const std::size_t p = smallest_factor(n);
    if (p == n || n <= 8) {
        dft_prime(a, sign);
        return;
    }
    const std::size_t q = n / p;
    // decimate by residue mod p, transform the q-length subsequences
    std::vector<std::vector<cplx>> sub(p, std::vector<cplx>(q));
    for (std::size_t j = 0; j < n; ++j) sub[j % p][j / p] = a[j];
    for (auto& s : sub) dft_1d(s, sign);
    // combine: X[k1 + q*k2] = sum_r w_n^{r*k1} w_p^{r*k2} S_r[k1]
    std::vector<cplx> wp(p), col(p);
    for (std::size_t r = 0; r < p; ++r)
        wp[r] = std::polar(1.0, sign * 2.0 * std::numbers::pi * double(r) / double(p));
    for (std::size_t k1 = 0; k1 < q; ++k1) {
        for (std::size_t r = 0; r < p; ++r)
            col[r] = sub[r][k1] *
                     std::polar(1.0, sign * 2.0 * std::numbers::pi * double(r * k1) / double(n));
        for (std::size_t k2 = 0; k2 < p; ++k2) {
            cplx acc = 0;
            for (std::size_t r = 0; r < p; ++r) acc += col[r] * wp[(r * k2) % p];
            a[k1 + q * k2] = acc;
        }
    }
}

/// Transform a full table over the group, one cyclic factor at a time.
/// sign=+1 matches the pairing convention: result(y) = sum_x t(x) (x,y).
inline void group_dft(const Group& X, std::vector<cplx>& table, int sign) {
    require(table.size() == static_cast<std::size_t>(X.order()), errc::invalid_argument,
            "table size must equal group order");
    for (std::size_t axis = 0; axis < X.rank(); ++axis) {
        const i64 d = X.moduli()[axis];
        if (d == 1) continue;
        i64 inner = 1; // combined length of the axes right of `axis`
        for (std::size_t j = axis + 1; j < X.rank(); ++j) inner *= X.moduli()[j];
        const i64 block = inner * d;
        std::vector<cplx> line(static_cast<std::size_t>(d));
        for (i64 start = 0; start < X.order(); start += block)
            for (i64 off = 0; off < inner; ++off) {
                for (i64 t = 0; t < d; ++t)
                    line[static_cast<std::size_t>(t)] = table[start + off + t * inner];
                dft_1d(line, sign);
                for (i64 t = 0; t < d; ++t)
                    table[start + off + t * inner] = line[static_cast<std::size_t>(t)];
            }
    }
}

} // namespace fft
} // namespace charlab
