#pragma once

#include <cmath>
#include <random>

#include "charlab/dist.hpp"
#include "charlab/group.hpp"
#include "charlab/hom.hpp"

// Shared helpers for seeded randomized tests. mt19937_64 is bit-exact across
// platforms, so frozen expectations stay stable.
namespace testutil {

using charlab::Group;
using charlab::Hom;
using charlab::i64;
using charlab::Mat;
using charlab::Vec;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline i64 rand_range(std::mt19937_64& g, i64 lo, i64 hi) {
    return lo + static_cast<i64>(g() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Random moduli list with product <= max_order.
inline Vec random_moduli(std::mt19937_64& g, i64 max_order, std::size_t max_rank = 4) {
    std::size_t r = static_cast<std::size_t>(rand_range(g, 1, static_cast<i64>(max_rank)));
    Vec mods;
    i64 budget = max_order;
    for (std::size_t j = 0; j < r; ++j) {
        i64 cap = std::max<i64>(1, budget);
        i64 d = rand_range(g, 1, std::min<i64>(cap, 16));
        mods.push_back(d);
        budget /= d;
        if (budget <= 1) break;
    }
    if (mods.empty()) mods.push_back(1);
    return mods;
}

/// Random valid homomorphism: each entry drawn from the multiples of the
/// well-definedness stride e_j/gcd(d_i,e_j).
inline Hom random_hom(std::mt19937_64& g, const Group& domain, const Group& codomain) {
    Mat A(codomain.rank(), Vec(domain.rank(), 0));
    for (std::size_t j = 0; j < codomain.rank(); ++j)
        for (std::size_t i = 0; i < domain.rank(); ++i) {
            i64 e = codomain.moduli()[j];
            i64 stride = e / charlab::gcd_i64(domain.moduli()[i], e);
            i64 kmax = e / stride; // number of admissible residues
            A[j][i] = stride * rand_range(g, 0, kmax - 1);
        }
    return Hom(domain, codomain, std::move(A));
}

inline Hom random_endo(std::mt19937_64& g, const Group& X) { return random_hom(g, X, X); }

inline double uniform01(std::mt19937_64& g) {
    return double(g() >> 11) * 0x1.0p-53;
}

/// Random point of the probability simplex (normalized exponentials).
inline std::vector<double> random_simplex(std::mt19937_64& g, std::size_t n) {
    std::vector<double> p(n);
    double s = 0;
    for (double& v : p) {
        v = -std::log(1.0 - uniform01(g));
        s += v;
    }
    for (double& v : p) v /= s;
    return p;
}

inline charlab::Distribution random_distribution(std::mt19937_64& g, const Group& X) {
    return charlab::Distribution(X, random_simplex(g, static_cast<std::size_t>(X.order())));
}

} // namespace testutil
