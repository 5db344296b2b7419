#pragma once

#include <optional>
#include <utility>

#include "charlab/group.hpp"
#include "charlab/rational.hpp"

namespace charlab {

/// Homomorphism between finite abelian groups as an integer matrix.
/// Entry (j,i) multiplies domain coordinate i into codomain coordinate j and
/// is stored reduced mod e_j. Well-definedness on the cyclic factors demands
/// A[j][i] == 0 (mod e_j / gcd(d_i, e_j)); the constructor enforces it.
class Hom {
  public:
    Hom(Group domain, Group codomain, Mat matrix)
        : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
        require(matrix_.size() == codomain_.rank(), errc::invalid_argument,
                "matrix row count must match codomain rank");
        for (std::size_t j = 0; j < matrix_.size(); ++j) {
            require(matrix_[j].size() == domain_.rank(), errc::invalid_argument,
                    "matrix column count must match domain rank");
            for (std::size_t i = 0; i < matrix_[j].size(); ++i) {
                i64 e = codomain_.moduli()[j], d = domain_.moduli()[i];
                matrix_[j][i] = pos_mod(matrix_[j][i], e);
                i64 c = e / gcd_i64(d, e);
                if (matrix_[j][i] % c != 0)
                    fail(errc::ill_defined_homomorphism,
                         "entry (" + std::to_string(j + 1) + "," + std::to_string(i + 1) + ")=" +
                             std::to_string(matrix_[j][i]) + " violates \"== 0 mod " +
                             std::to_string(c) + "\"");
            }
        }
    }

    const Group& domain() const { return domain_; }
    const Group& codomain() const { return codomain_; }
    const Mat& matrix() const { return matrix_; }
    bool is_endo() const { return domain_ == codomain_; }

    Elem apply(const Elem& x) const {
        require(domain_.contains(x), errc::invalid_argument, "apply: element outside domain");
        Elem y(codomain_.rank());
        for (std::size_t j = 0; j < y.size(); ++j) {
            i128 acc = 0;
            for (std::size_t i = 0; i < x.size(); ++i) acc += i128(matrix_[j][i]) * x[i];
            y[j] = narrow(acc % codomain_.moduli()[j]);
        }
        return y;
    }

    /// Adjoint map between the dual groups, defined by (f x, y) = (x, f~ y).
    /// In coordinates: A~[i][j] = d_i A[j][i] / e_j, an integer exactly by the
    /// well-definedness congruence.
    Hom adjoint() const {
        Mat adj(domain_.rank(), Vec(codomain_.rank(), 0));
        for (std::size_t j = 0; j < codomain_.rank(); ++j)
            for (std::size_t i = 0; i < domain_.rank(); ++i) {
                i64 d = domain_.moduli()[i], e = codomain_.moduli()[j];
                adj[i][j] = pos_mod(narrow(i128(d) * matrix_[j][i] / e), d);
            }
        return Hom(codomain_, domain_, std::move(adj));
    }

    Subgroup kernel() const {
        CongruenceSystem sys(matrix_, codomain_.moduli(), domain_.rank());
        return detail::subgroup_from_lattice(domain_, sys.kernel_basis());
    }

    Subgroup image() const {
        Mat cols(domain_.rank(), Vec(codomain_.rank(), 0));
        for (std::size_t i = 0; i < domain_.rank(); ++i)
            for (std::size_t j = 0; j < codomain_.rank(); ++j) cols[i][j] = matrix_[j][i];
        return detail::subgroup_from_lattice(codomain_, std::move(cols));
    }

    /// Composition (this after g).
    Hom compose(const Hom& g) const {
        require(g.codomain_ == domain_, errc::invalid_argument, "compose: domain mismatch");
        return Hom(g.domain_, codomain_, mat_mul(matrix_, g.matrix_));
    }

    Hom operator+(const Hom& o) const { return combine(o, +1); }
    Hom operator-(const Hom& o) const { return combine(o, -1); }

    friend bool operator==(const Hom& a, const Hom& b) {
        return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.matrix_ == b.matrix_;
    }
    friend bool operator!=(const Hom& a, const Hom& b) { return !(a == b); }

    static Hom identity(const Group& X) { return Hom(X, X, identity_mat(X.rank())); }

    static Hom zero(const Group& X, const Group& Y) {
        return Hom(X, Y, Mat(Y.rank(), Vec(X.rank(), 0)));
    }

    /// Multiplication by an integer scalar (always a valid endomorphism).
    static Hom scalar(const Group& X, i64 k) {
        Mat A(X.rank(), Vec(X.rank(), 0));
        for (std::size_t j = 0; j < X.rank(); ++j) A[j][j] = pos_mod(k, X.moduli()[j]);
        return Hom(X, X, std::move(A));
    }

  private:
    Hom combine(const Hom& o, i64 sgn) const {
        require(domain_ == o.domain_ && codomain_ == o.codomain_, errc::invalid_argument,
                "hom arithmetic needs matching domain and codomain");
        Mat A(matrix_);
        for (std::size_t j = 0; j < A.size(); ++j)
            for (std::size_t i = 0; i < A[j].size(); ++i)
                A[j][i] = pos_mod(A[j][i] + sgn * o.matrix_[j][i], codomain_.moduli()[j]);
        return Hom(domain_, codomain_, std::move(A));
    }

    Group domain_, codomain_;
    Mat matrix_;
};

struct Classification {
    bool is_mono = false;
    bool is_epi = false;
    bool is_auto = false;
    std::optional<Hom> inverse;
};

/// Mono/epi/auto status; the inverse (when bijective) comes from exact
/// congruence solving per codomain generator, then is verified both ways.
inline Classification classify(const Hom& f) {
    Classification c;
    c.is_mono = f.kernel().is_trivial();
    c.is_epi = f.image().is_full();
    c.is_auto = c.is_mono && c.is_epi && f.domain().order() == f.codomain().order();
    if (c.is_auto) {
        CongruenceSystem sys(f.matrix(), f.codomain().moduli(), f.domain().rank());
        Mat inv(f.domain().rank(), Vec(f.codomain().rank(), 0));
        for (std::size_t i = 0; i < f.codomain().rank(); ++i) {
            Vec e(f.codomain().rank(), 0);
            e[i] = 1;
            auto x = sys.solve(e);
            require(x.has_value(), errc::internal, "bijective map must be solvable");
            for (std::size_t j = 0; j < inv.size(); ++j)
                inv[j][i] = pos_mod((*x)[j], f.domain().moduli()[j]);
        }
        Hom g(f.codomain(), f.domain(), std::move(inv));
        require(f.compose(g) == Hom::identity(f.codomain()) &&
                    g.compose(f) == Hom::identity(f.domain()),
                errc::internal, "inverse verification failed");
        c.inverse = std::move(g);
    }
    return c;
}

inline Hom inverse(const Hom& f) {
    Classification c = classify(f);
    require(c.is_auto, errc::not_invertible, "homomorphism is not an automorphism");
    return *c.inverse;
}

/// Coefficient grid of m linear forms L_j = sum_i alpha_{ji} xi_i in n
/// variables; every alpha_{ji} is an endomorphism of the same group X.
class CoeffSystem {
  public:
    CoeffSystem(Group X, std::size_t m, std::size_t n, std::vector<std::vector<Hom>> alphas)
        : X_(std::move(X)), m_(m), n_(n), alphas_(std::move(alphas)) {
        require(m_ >= 1 && n_ >= 1, errc::invalid_argument, "coefficient system needs m,n >= 1");
        require(alphas_.size() == m_, errc::invalid_argument, "alpha grid has wrong row count");
        for (const auto& row : alphas_) {
            require(row.size() == n_, errc::invalid_argument, "alpha grid has wrong column count");
            for (const Hom& a : row)
                require(a.domain() == X_ && a.codomain() == X_, errc::invalid_argument,
                        "coefficients must be endomorphisms of the base group");
        }
    }

    /// Scalar grid convenience: alpha_{ji} = multiplication by k[j][i].
    static CoeffSystem from_scalars(const Group& X, const Mat& k) {
        std::vector<std::vector<Hom>> alphas;
        for (const Vec& row : k) {
            std::vector<Hom> r;
            for (i64 v : row) r.push_back(Hom::scalar(X, v));
            alphas.push_back(std::move(r));
        }
        return CoeffSystem(X, k.size(), k.empty() ? 0 : k[0].size(), std::move(alphas));
    }

    const Group& base() const { return X_; }
    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }
    const Hom& alpha(std::size_t j, std::size_t i) const { return alphas_[j][i]; }

    /// Diagonal-image subgroup G_i = {(alpha_{1i} x, ..., alpha_{mi} x)} in X^m.
    Subgroup diagonal_image(std::size_t i) const {
        Group Xm = X_.power(m_);
        Mat stacked(m_ * X_.rank(), Vec(X_.rank(), 0));
        for (std::size_t j = 0; j < m_; ++j)
            for (std::size_t p = 0; p < X_.rank(); ++p)
                stacked[j * X_.rank() + p] = alphas_[j][i].matrix()[p];
        Hom diag(X_, Xm, std::move(stacked));
        return diag.image();
    }

    /// Adjoint grid a_{ji} = adjoint(alpha_{ji}) acting on the dual group.
    std::vector<std::vector<Hom>> adjoint_grid() const {
        std::vector<std::vector<Hom>> a;
        for (const auto& row : alphas_) {
            std::vector<Hom> r;
            for (const Hom& al : row) r.push_back(al.adjoint());
            a.push_back(std::move(r));
        }
        return a;
    }

  private:
    Group X_;
    std::size_t m_, n_;
    std::vector<std::vector<Hom>> alphas_;
};

struct ConditionResult {
    bool holds = true;
    std::optional<Elem> witness;       // lex-smallest nonzero violator
    std::optional<std::pair<std::size_t, std::size_t>> pair; // offending (i,l), 0-based
};

namespace detail {

inline Elem smallest_nonzero(const Subgroup& S) {
    auto elems = S.elements();
    require(elems.size() >= 2, errc::internal, "expected a nontrivial subgroup");
    return elems[1]; // elems[0] is 0, order is lexicographic
}

} // namespace detail

/// Condition (11): all pairwise intersections of the diagonal-image
/// subgroups G_i are trivial. Coefficients must be monomorphisms.
inline ConditionResult check_condition_11(const CoeffSystem& cs) {
    for (std::size_t j = 0; j < cs.m(); ++j)
        for (std::size_t i = 0; i < cs.n(); ++i)
            require(classify(cs.alpha(j, i)).is_mono, errc::precondition_violated,
                    "coefficient (" + std::to_string(j + 1) + "," + std::to_string(i + 1) +
                        ") is not a monomorphism");
    std::vector<Subgroup> G;
    for (std::size_t i = 0; i < cs.n(); ++i) G.push_back(cs.diagonal_image(i));
    ConditionResult res;
    for (std::size_t i = 0; i < cs.n() && res.holds; ++i)
        for (std::size_t l = i + 1; l < cs.n(); ++l) {
            Subgroup inter = subgroup_intersect(G[i], G[l]);
            if (!inter.is_trivial()) {
                res.holds = false;
                res.witness = detail::smallest_nonzero(inter);
                res.pair = {i, l};
                break;
            }
        }
    return res;
}

/// Condition (12): for each pair i != l, the intersection over p,k of
/// Ker(alpha_{ki}^{-1} alpha_{kl} - alpha_{pi}^{-1} alpha_{pl}) is trivial.
/// Requires automorphism coefficients; equivalent to condition (11) there.
inline ConditionResult check_condition_12(const CoeffSystem& cs) {
    std::vector<std::vector<std::optional<Hom>>> inv(cs.m(),
                                                     std::vector<std::optional<Hom>>(cs.n()));
    for (std::size_t j = 0; j < cs.m(); ++j)
        for (std::size_t i = 0; i < cs.n(); ++i) {
            Classification c = classify(cs.alpha(j, i));
            require(c.is_auto, errc::precondition_violated,
                    "coefficient (" + std::to_string(j + 1) + "," + std::to_string(i + 1) +
                        ") is not an automorphism");
            inv[j][i] = std::move(c.inverse);
        }
    ConditionResult res;
    for (std::size_t i = 0; i < cs.n() && res.holds; ++i)
        for (std::size_t l = 0; l < cs.n(); ++l) {
            if (l == i) continue;
            std::vector<Hom> B; // B_k = alpha_{ki}^{-1} alpha_{kl}
            for (std::size_t k = 0; k < cs.m(); ++k)
                B.push_back(inv[k][i]->compose(cs.alpha(k, l)));
            Subgroup K = full_subgroup(cs.base());
            for (std::size_t k = 0; k < cs.m(); ++k)
                for (std::size_t p = k + 1; p < cs.m(); ++p)
                    K = subgroup_intersect(K, (B[k] - B[p]).kernel());
            if (!K.is_trivial()) {
                res.holds = false;
                res.witness = detail::smallest_nonzero(K);
                res.pair = {i, l};
                break;
            }
        }
    return res;
}

struct CollinearityReduction {
    std::vector<std::vector<std::size_t>> classes; // index sets, by first appearance
    std::vector<std::size_t> representatives;      // one index per class
    std::vector<Rat> scalars;                      // c_i with v_i = c_i * v_rep(i)
    std::vector<std::size_t> class_of;             // class id per input index
};

/// Partition vectors into maximal rational-collinearity classes. Exact cross
/// product test, no tolerances; representatives are pairwise non-collinear.
inline CollinearityReduction collinearity_reduction(const std::vector<std::vector<Rat>>& vectors) {
    require(!vectors.empty(), errc::invalid_argument, "no vectors given");
    const std::size_t m = vectors[0].size();
    for (const auto& v : vectors) {
        require(v.size() == m, errc::invalid_argument, "vectors of mixed dimension");
        bool nz = false;
        for (const Rat& c : v) nz = nz || !c.is_zero();
        require(nz, errc::invalid_argument, "zero vector has no collinearity class");
    }
    auto collinear = [&](const std::vector<Rat>& a, const std::vector<Rat>& b) {
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q)
                if (a[p] * b[q] != a[q] * b[p]) return false;
        return true;
    };
    CollinearityReduction red;
    red.class_of.assign(vectors.size(), 0);
    red.scalars.assign(vectors.size(), Rat(1));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        std::size_t cls = red.representatives.size();
        for (std::size_t c = 0; c < red.representatives.size(); ++c)
            if (collinear(vectors[red.representatives[c]], vectors[i])) {
                cls = c;
                break;
            }
        if (cls == red.representatives.size()) {
            red.representatives.push_back(i);
            red.classes.push_back({i});
            red.class_of[i] = cls;
        } else {
            const auto& rep = vectors[red.representatives[cls]];
            std::size_t p = 0;
            while (rep[p].is_zero()) ++p;
            red.scalars[i] = vectors[i][p] / rep[p];
            red.classes[cls].push_back(i);
            red.class_of[i] = cls;
        }
    }
    return red;
}

} // namespace charlab
