#pragma once

#include <algorithm>
#include <cctype>
#include <complex>
#include <numbers>
#include <set>
#include <string>

#include "charlab/intlin.hpp"

namespace charlab {

using cplx = std::complex<double>;

/// Group element in coordinates; coordinate j lives in Z_{d_j}.
using Elem = Vec;

/// Finite abelian group Z_{d_1} x ... x Z_{d_r}, given by its moduli list.
/// The dual group is represented by the same moduli (self-dual coordinates),
/// so an Elem doubles as a character when paired through `pairing`.
/// Moduli are kept exactly as supplied: Z_2 x Z_4 and Z_8 are distinct
/// representations of non-isomorphic groups, and Z_4 vs Z_2 x Z_2 of
/// isomorphic coordinate choices are still distinct objects.
class Group {
  public:
    explicit Group(Vec moduli) : moduli_(std::move(moduli)) {
        require(!moduli_.empty(), errc::invalid_argument, "group needs at least one modulus");
        for (i64 d : moduli_)
            require(d >= 1, errc::invalid_argument, "modulus must be >= 1");
        order_ = 1;
        for (i64 d : moduli_) order_ = mul_checked(order_, d);
        strides_.assign(moduli_.size(), 1);
        for (std::size_t j = moduli_.size(); j-- > 1;)
            strides_[j - 1] = mul_checked(strides_[j], moduli_[j]);
    }

    const Vec& moduli() const { return moduli_; }
    i64 order() const { return order_; }
    std::size_t rank() const { return moduli_.size(); }
    bool same_moduli(const Group& o) const { return moduli_ == o.moduli_; }

    Elem zero() const { return Elem(rank(), 0); }

    Elem reduce(Elem x) const {
        require(x.size() == rank(), errc::invalid_argument, "element rank mismatch");
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = pos_mod(x[j], moduli_[j]);
        return x;
    }

    bool contains(const Elem& x) const {
        if (x.size() != rank()) return false;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x[j] < 0 || x[j] >= moduli_[j]) return false;
        return true;
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem c(rank());
        for (std::size_t j = 0; j < c.size(); ++j) c[j] = pos_mod(a[j] + b[j], moduli_[j]);
        return c;
    }

    Elem sub(const Elem& a, const Elem& b) const {
        Elem c(rank());
        for (std::size_t j = 0; j < c.size(); ++j) c[j] = pos_mod(a[j] - b[j], moduli_[j]);
        return c;
    }

    Elem neg(const Elem& a) const { return sub(zero(), a); }

    Elem scale(i64 k, const Elem& a) const {
        Elem c(rank());
        for (std::size_t j = 0; j < c.size(); ++j)
            c[j] = narrow(i128(pos_mod(k, moduli_[j])) * a[j] % moduli_[j]);
        return c;
    }

    /// Lexicographic index of an element (first coordinate most significant).
    i64 index_of(const Elem& x) const {
        require(contains(x), errc::invalid_argument, "element outside group");
        i64 idx = 0;
        for (std::size_t j = 0; j < x.size(); ++j) idx += x[j] * strides_[j];
        return idx;
    }

    Elem element_at(i64 idx) const {
        require(idx >= 0 && idx < order_, errc::invalid_argument, "element index out of range");
        Elem x(rank());
        for (std::size_t j = 0; j < x.size(); ++j) {
            x[j] = idx / strides_[j];
            idx %= strides_[j];
        }
        return x;
    }

    /// Direct power X^m, coordinates of the m copies concatenated.
    Group power(std::size_t m) const {
        require(m >= 1, errc::invalid_argument, "group power needs m >= 1");
        Vec mods;
        mods.reserve(rank() * m);
        for (std::size_t i = 0; i < m; ++i) mods.insert(mods.end(), moduli_.begin(), moduli_.end());
        return Group(std::move(mods));
    }

    /// Parse a literal like "Z2xZ4" (case-insensitive, 'x' separator).
    static Group parse(const std::string& text) {
        Vec mods;
        std::size_t i = 0;
        auto parse_factor = [&]() {
            if (i < text.size() && (text[i] == 'z' || text[i] == 'Z')) ++i;
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            require(i > start, errc::invalid_argument, "bad group literal: " + text);
            mods.push_back(std::stoll(text.substr(start, i - start)));
        };
        parse_factor();
        while (i < text.size()) {
            require(text[i] == 'x' || text[i] == 'X', errc::invalid_argument,
                    "bad group literal: " + text);
            ++i;
            parse_factor();
        }
        return Group(mods);
    }

    std::string literal() const {
        std::string s;
        for (std::size_t j = 0; j < moduli_.size(); ++j) {
            if (j) s += "x";
            s += "Z" + std::to_string(moduli_[j]);
        }
        return s;
    }

    friend bool operator==(const Group& a, const Group& b) { return a.moduli_ == b.moduli_; }
    friend bool operator!=(const Group& a, const Group& b) { return !(a == b); }

  private:
    Vec moduli_;
    i64 order_;
    Vec strides_;
};

inline Group make_group(Vec moduli) { return Group(std::move(moduli)); }

/// Character pairing (x,y) = exp(2*pi*i * sum_j x_j y_j / d_j). Unit modulus.
inline cplx pairing(const Group& X, const Elem& x, const Elem& y) {
    require(x.size() == X.rank() && y.size() == X.rank(), errc::invalid_argument,
            "pairing: rank mismatch");
    double phase = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        i64 d = X.moduli()[j];
        phase += double(narrow(i128(x[j]) * y[j] % d)) / double(d);
    }
    return std::polar(1.0, 2.0 * std::numbers::pi * phase);
}

inline cplx pairing(const Group& X, const Group& Y, const Elem& x, const Elem& y) {
    require(X.same_moduli(Y), errc::invalid_argument, "pairing: moduli mismatch");
    return pairing(X, x, y);
}

/// Subgroup of a finite abelian group, held as the Hermite-canonical basis of
/// the integer lattice it lifts to (the lattice always contains diag(moduli),
/// so the basis is square and full rank). Canonical form makes equality O(1).
class Subgroup {
  public:
    Subgroup(Group parent, Mat canonical_basis, i64 order)
        : parent_(std::move(parent)), basis_(std::move(canonical_basis)), order_(order) {}

    const Group& parent() const { return parent_; }
    const Mat& basis() const { return basis_; }
    i64 order() const { return order_; }
    bool is_trivial() const { return order_ == 1; }
    bool is_full() const { return order_ == parent_.order(); }

    /// Exact membership via back-substitution against the triangular basis.
    bool contains(Elem x) const {
        if (x.size() != parent_.rank()) return false;
        x = parent_.reduce(std::move(x));
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            i64 p = basis_[i][i];
            if (x[i] % p != 0) return false;
            i64 q = x[i] / p;
            for (std::size_t j = i; j < x.size(); ++j)
                x[j] = narrow(i128(x[j]) - i128(q) * basis_[i][j]);
        }
        for (i64 v : x)
            if (v != 0) return false;
        return true;
    }

    /// All elements, ascending by lexicographic index. The triangular basis
    /// enumerates each element exactly once.
    std::vector<Elem> elements(i64 cap = i64(1) << 22) const {
        require(order_ <= cap, errc::invalid_argument, "subgroup too large to enumerate");
        std::size_t r = parent_.rank();
        Vec counts(r);
        for (std::size_t i = 0; i < r; ++i) counts[i] = parent_.moduli()[i] / basis_[i][i];
        std::vector<Elem> out;
        out.reserve(static_cast<std::size_t>(order_));
        Vec c(r, 0);
        while (true) {
            Elem x(r, 0);
            for (std::size_t i = 0; i < r; ++i)
                if (c[i])
                    for (std::size_t j = 0; j < r; ++j)
                        x[j] = narrow(x[j] + i128(c[i]) * basis_[i][j]);
            out.push_back(parent_.reduce(std::move(x)));
            std::size_t i = r;
            while (i-- > 0) {
                if (++c[i] < counts[i]) break;
                c[i] = 0;
                if (i == 0) {
                    std::sort(out.begin(), out.end());
                    return out;
                }
            }
        }
    }

    friend bool operator==(const Subgroup& a, const Subgroup& b) {
        return a.parent_ == b.parent_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const Subgroup& a, const Subgroup& b) { return !(a == b); }

  private:
    Group parent_;
    Mat basis_; // square HNF rows; basis_[i][i] divides moduli[i]
    i64 order_;
};

namespace detail {

inline Mat moduli_rows(const Group& X) {
    Mat rows(X.rank(), Vec(X.rank(), 0));
    for (std::size_t j = 0; j < X.rank(); ++j) rows[j][j] = X.moduli()[j];
    return rows;
}

/// Canonicalize lattice generators (plus the moduli relations) into a
/// Subgroup. Order falls out of the HNF diagonal.
inline Subgroup subgroup_from_lattice(const Group& X, Mat rows) {
    Mat mod_rows = moduli_rows(X);
    rows.insert(rows.end(), mod_rows.begin(), mod_rows.end());
    Mat basis = hnf_rows(std::move(rows), X.rank());
    require(basis.size() == X.rank(), errc::internal, "subgroup lattice lost full rank");
    i64 order = 1;
    for (std::size_t i = 0; i < basis.size(); ++i)
        order = mul_checked(order, X.moduli()[i] / basis[i][i]);
    return Subgroup(X, std::move(basis), order);
}

} // namespace detail

/// Subgroup generated by a set of elements (empty set gives {0}).
inline Subgroup subgroup_from_generators(const Group& X, const std::vector<Elem>& gens) {
    Mat rows;
    rows.reserve(gens.size());
    for (const Elem& g : gens) {
        require(g.size() == X.rank(), errc::invalid_argument, "generator outside group");
        rows.push_back(X.reduce(g));
    }
    return detail::subgroup_from_lattice(X, std::move(rows));
}

inline Subgroup trivial_subgroup(const Group& X) { return subgroup_from_generators(X, {}); }

inline Subgroup full_subgroup(const Group& X) {
    Mat basis = identity_mat(X.rank());
    return Subgroup(X, std::move(basis), X.order());
}

/// Exact lattice intersection: solve u*B_G = w*B_H over Z and push the
/// common vectors back through canonicalization.
inline Subgroup subgroup_intersect(const Subgroup& G, const Subgroup& H) {
    require(G.parent() == H.parent(), errc::invalid_argument,
            "intersection needs a common parent group");
    const std::size_t r = G.parent().rank();
    // columns of C^T are the stacked basis rows; right kernel of C^T gives
    // all (u, w) with u*B_G - w*B_H = 0
    Mat Ct(r, Vec(2 * r, 0));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            Ct[j][i] = G.basis()[i][j];
            Ct[j][r + i] = -H.basis()[i][j];
        }
    Mat ker = integer_kernel(Ct);
    Mat rows;
    for (const Vec& uw : ker) {
        Vec v(r, 0);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) v[j] = narrow(v[j] + i128(uw[i]) * G.basis()[i][j]);
        rows.push_back(std::move(v));
    }
    return detail::subgroup_from_lattice(G.parent(), std::move(rows));
}

/// Annihilator A(X,H) = {x in X : (x,y)=1 for every y in H}, for H a
/// subgroup of the dual group Y (same moduli as X). Exact congruence solve.
inline Subgroup annihilator(const Group& X, const Subgroup& H) {
    require(X.same_moduli(H.parent()), errc::invalid_argument,
            "annihilator: dual moduli mismatch");
    const std::size_t r = X.rank();
    i64 L = 1;
    for (i64 d : X.moduli()) L = lcm_i64(L, d);
    // (x, b) = 1  <=>  sum_j x_j b_j L/d_j == 0 (mod L), per basis row b
    Mat A;
    Vec mods;
    for (const Vec& b : H.basis()) {
        Vec row(r);
        for (std::size_t j = 0; j < r; ++j) row[j] = mul_checked(b[j], L / X.moduli()[j]);
        A.push_back(std::move(row));
        mods.push_back(L);
    }
    CongruenceSystem sys(A, mods, r);
    return detail::subgroup_from_lattice(X, sys.kernel_basis());
}

/// All subgroups of X (closure of cyclic subgroups under join). Intended for
/// exhaustive property suites at small order.
inline std::vector<Subgroup> enumerate_subgroups(const Group& X, i64 order_cap = 4096) {
    require(X.order() <= order_cap, errc::invalid_argument, "group too large to enumerate");
    std::vector<Subgroup> found{trivial_subgroup(X)};
    std::set<Mat> seen{found[0].basis()};
    std::vector<Elem> elems;
    elems.reserve(static_cast<std::size_t>(X.order()));
    for (i64 i = 0; i < X.order(); ++i) elems.push_back(X.element_at(i));
    for (std::size_t k = 0; k < found.size(); ++k) {
        Subgroup base = found[k]; // copy: found grows below
        for (const Elem& x : elems) {
            if (base.contains(x)) continue;
            Mat rows = base.basis();
            rows.push_back(x);
            Subgroup next = detail::subgroup_from_lattice(X, std::move(rows));
            if (seen.insert(next.basis()).second) found.push_back(std::move(next));
        }
    }
    return found;
}

/// Moduli lists (invariant-factor form d_1 | d_2 | ...) of all abelian groups
/// of order <= max_order, one per isomorphism class, sorted by order.
inline std::vector<Vec> abelian_group_catalog(i64 max_order) {
    require(max_order >= 1, errc::invalid_argument, "catalog bound must be >= 1");
    std::vector<Vec> out;
    for (i64 n = 1; n <= max_order; ++n) {
        // factor n, then take one exponent partition per prime
        std::vector<std::pair<i64, int>> pf;
        i64 t = n;
        for (i64 p = 2; p * p <= t; ++p)
            if (t % p == 0) {
                int e = 0;
                while (t % p == 0) {
                    t /= p;
                    ++e;
                }
                pf.push_back({p, e});
            }
        if (t > 1) pf.push_back({t, 1});

        std::vector<std::vector<std::vector<int>>> parts(pf.size());
        for (std::size_t i = 0; i < pf.size(); ++i) {
            // partitions of pf[i].second, parts descending
            std::vector<int> cur;
            auto rec = [&](auto&& self, int rest, int maxpart) -> void {
                if (rest == 0) {
                    parts[i].push_back(cur);
                    return;
                }
                for (int k = std::min(rest, maxpart); k >= 1; --k) {
                    cur.push_back(k);
                    self(self, rest - k, k);
                    cur.pop_back();
                }
            };
            rec(rec, pf[i].second, pf[i].second);
        }
        std::vector<std::size_t> pick(pf.size(), 0);
        while (true) {
            std::size_t depth = 0;
            for (std::size_t i = 0; i < pf.size(); ++i)
                depth = std::max(depth, parts[i][pick[i]].size());
            // invariant factors: largest prime powers multiply together
            Vec inv(depth, 1);
            for (std::size_t i = 0; i < pf.size(); ++i)
                for (std::size_t k = 0; k < parts[i][pick[i]].size(); ++k) {
                    i64 pe = 1;
                    for (int e = 0; e < parts[i][pick[i]][k]; ++e)
                        pe = mul_checked(pe, pf[i].first);
                    inv[k] = mul_checked(inv[k], pe);
                }
            std::reverse(inv.begin(), inv.end()); // ascending: d_1 | d_2 | ...
            if (inv.empty()) inv.push_back(1);
            out.push_back(inv);
            std::size_t i = 0;
            for (; i < pf.size(); ++i) {
                if (++pick[i] < parts[i].size()) break;
                pick[i] = 0;
            }
            if (i == pf.size()) break;
        }
    }
    std::sort(out.begin(), out.end(), [](const Vec& a, const Vec& b) {
        i64 oa = 1, ob = 1;
        for (i64 v : a) oa *= v;
        for (i64 v : b) ob *= v;
        return oa != ob ? oa < ob : a < b;
    });
    return out;
}

/// Smith-canonical moduli of a group: the invariant factors of Z^r / D.
/// Two groups are isomorphic iff these lists agree (1-factors dropped).
inline Vec canonical_moduli(const Group& X) {
    SmithForm f = smith_form(detail::moduli_rows(X));
    Vec inv;
    for (std::size_t i = 0; i < X.rank(); ++i)
        if (f.diag(i) > 1) inv.push_back(f.diag(i));
    if (inv.empty()) inv.push_back(1);
    return inv;
}

} // namespace charlab
