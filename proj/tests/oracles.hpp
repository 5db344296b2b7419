#pragma once

#include <complex>
#include <vector>

#include "charlab/dist.hpp"

// Independent test oracles. Everything here recomputes results from first
// principles (enumeration, averaging) without touching the library's
// algorithmic paths, so a bug cannot hide in both sides at once.
namespace oracle {

using namespace charlab;

/// Convolution by direct double loop over the group.
inline Distribution convolve_direct(const Distribution& mu, const Distribution& nu) {
    const Group& X = mu.group();
    std::vector<double> p(static_cast<std::size_t>(X.order()), 0.0);
    for (i64 a = 0; a < X.order(); ++a)
        for (i64 b = 0; b < X.order(); ++b)
            p[static_cast<std::size_t>(X.index_of(X.add(X.element_at(a), X.element_at(b))))] +=
                mu[a] * nu[b];
    double s = 0;
    for (double v : p) s += v;
    for (double& v : p) v /= s;
    return Distribution(X, std::move(p));
}

/// Characteristic function by direct summation against the pairing.
inline std::vector<cplx> char_direct(const Distribution& mu) {
    const Group& X = mu.group();
    std::vector<cplx> vals(static_cast<std::size_t>(X.order()));
    for (i64 y = 0; y < X.order(); ++y) {
        cplx acc = 0;
        for (i64 x = 0; x < X.order(); ++x)
            acc += mu[x] * pairing(X, X.element_at(x), X.element_at(y));
        vals[static_cast<std::size_t>(y)] = acc;
    }
    return vals;
}

/// D_{m,k} membership by interaction decomposition: truncate the
/// block-interaction expansion of the principal log at order k and measure
/// how far exp(truncation) is from f. Independent of the mixed-difference
/// scan the library uses for its verdict.
inline double dmk_projection_residual(const JointCharFunction& f, int k) {
    const Group& Y = f.base();
    const std::size_t m = f.arity();
    const i64 B = Y.order();
    const i64 N = f.power_group().order();
    std::vector<cplx> logf(static_cast<std::size_t>(N));
    for (i64 i = 0; i < N; ++i) logf[static_cast<std::size_t>(i)] = std::log(f[i]);

    std::vector<i64> stride(m, 1);
    for (std::size_t j = m; j-- > 1;) stride[j - 1] = stride[j] * B;
    auto averaged = [&](std::size_t mask) {
        std::vector<cplx> t = logf;
        for (std::size_t j = 0; j < m; ++j) {
            if (mask >> j & 1) continue; // keep block j
            // mean over block j
            std::vector<cplx> next(t.size());
            for (i64 P = 0; P < N; ++P) {
                i64 b = (P / stride[j]) % B;
                i64 base0 = P - b * stride[j];
                cplx acc = 0;
                for (i64 v = 0; v < B; ++v)
                    acc += t[static_cast<std::size_t>(base0 + v * stride[j])];
                next[static_cast<std::size_t>(P)] = acc / double(B);
            }
            t.swap(next);
        }
        return t;
    };
    const std::size_t nmask = std::size_t(1) << m;
    std::vector<std::vector<cplx>> proj(nmask);
    for (std::size_t mask = 0; mask < nmask; ++mask) proj[mask] = averaged(mask);
    // inclusion-exclusion, keeping only components of order <= k
    std::vector<cplx> trunc(static_cast<std::size_t>(N), cplx(0, 0));
    for (std::size_t mask = 0; mask < nmask; ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) > k) continue;
        // component_mask = sum_{sub subset mask} (-1)^{|mask|-|sub|} proj[sub]
        for (std::size_t sub = 0; sub < nmask; ++sub) {
            if ((sub & mask) != sub) continue;
            double sgn = (__builtin_popcount(static_cast<unsigned>(mask ^ sub)) % 2) ? -1.0 : 1.0;
            for (i64 P = 0; P < N; ++P)
                trunc[static_cast<std::size_t>(P)] += sgn * proj[sub][static_cast<std::size_t>(P)];
        }
    }
    double worst = 0;
    for (i64 P = 0; P < N; ++P)
        worst = std::max(worst,
                         std::abs(std::exp(trunc[static_cast<std::size_t>(P)]) / f[P] - cplx(1, 0)));
    return worst;
}

/// Joint law of (L_1,...,L_m) by full enumeration of X^n, then its
/// characteristic function by direct summation over X^m.
inline std::vector<cplx> joint_char_by_enumeration(const CoeffSystem& cs,
                                                   const std::vector<Distribution>& marginals) {
    const Group& X = cs.base();
    const Group Xm = X.power(cs.m());
    std::vector<double> law(static_cast<std::size_t>(Xm.order()), 0.0);
    std::vector<i64> idx(cs.n(), 0);
    while (true) {
        double p = 1.0;
        for (std::size_t i = 0; i < cs.n(); ++i) p *= marginals[i][idx[i]];
        if (p != 0.0) {
            Elem big;
            big.reserve(Xm.rank());
            for (std::size_t j = 0; j < cs.m(); ++j) {
                Elem Lj = X.zero();
                for (std::size_t i = 0; i < cs.n(); ++i)
                    Lj = X.add(Lj, cs.alpha(j, i).apply(X.element_at(idx[i])));
                big.insert(big.end(), Lj.begin(), Lj.end());
            }
            law[static_cast<std::size_t>(Xm.index_of(big))] += p;
        }
        std::size_t i = 0;
        for (; i < cs.n(); ++i) {
            if (++idx[i] < X.order()) break;
            idx[i] = 0;
        }
        if (i == cs.n()) break;
    }
    Distribution joint_law(Xm, std::move(law));
    return char_direct(joint_law);
}

} // namespace oracle
