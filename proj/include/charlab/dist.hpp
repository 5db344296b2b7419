#pragma once

#include <cmath>
#include <vector>

#include "charlab/fourier.hpp"
#include "charlab/hom.hpp"

namespace charlab {

/// Probability distribution on a finite abelian group, stored as a full
/// table in lexicographic element order.
class Distribution {
  public:
    Distribution(Group group, std::vector<double> probs)
        : group_(std::move(group)), probs_(std::move(probs)) {
        require(probs_.size() == static_cast<std::size_t>(group_.order()), errc::invalid_argument,
                "probability table size must equal group order");
        double sum = 0.0;
        for (double& p : probs_) {
            require(p >= -1e-12, errc::invalid_argument, "negative probability entry");
            if (p < 0) p = 0.0;
            sum += p;
        }
        require(std::abs(sum - 1.0) <= 1e-12, errc::invalid_argument,
                "probabilities must sum to 1");
    }

    static Distribution delta(const Group& X, const Elem& a) {
        std::vector<double> p(static_cast<std::size_t>(X.order()), 0.0);
        p[static_cast<std::size_t>(X.index_of(X.reduce(a)))] = 1.0;
        return Distribution(X, std::move(p));
    }

    static Distribution uniform(const Group& X) {
        std::vector<double> p(static_cast<std::size_t>(X.order()),
                              1.0 / static_cast<double>(X.order()));
        return Distribution(X, std::move(p));
    }

    const Group& group() const { return group_; }
    const std::vector<double>& probs() const { return probs_; }
    double operator[](i64 idx) const { return probs_[static_cast<std::size_t>(idx)]; }
    double prob(const Elem& x) const { return probs_[static_cast<std::size_t>(group_.index_of(x))]; }

    double max_prob() const {
        double m = 0.0;
        for (double p : probs_) m = std::max(m, p);
        return m;
    }

    /// d(mu) = 1 - max_x mu(x); zero exactly for point masses.
    double distance_to_degeneracy() const { return 1.0 - max_prob(); }

  private:
    Group group_;
    std::vector<double> probs_;
};

/// Characteristic function on the dual group as a full complex table.
class CharFunction {
  public:
    CharFunction(Group dual, std::vector<cplx> values)
        : group_(std::move(dual)), values_(std::move(values)) {
        require(values_.size() == static_cast<std::size_t>(group_.order()), errc::invalid_argument,
                "value table size must equal group order");
        require(std::abs(values_[0] - cplx(1.0, 0.0)) <= 1e-12, errc::invalid_argument,
                "characteristic function must equal 1 at 0");
        for (i64 i = 0; i < group_.order(); ++i) {
            i64 ni = group_.index_of(group_.neg(group_.element_at(i)));
            require(std::abs(values_[static_cast<std::size_t>(i)] -
                             std::conj(values_[static_cast<std::size_t>(ni)])) <= 1e-9,
                    errc::invalid_argument, "characteristic function must be Hermitian");
        }
    }

    const Group& group() const { return group_; }
    const std::vector<cplx>& values() const { return values_; }
    cplx operator[](i64 idx) const { return values_[static_cast<std::size_t>(idx)]; }
    cplx value(const Elem& y) const { return values_[static_cast<std::size_t>(group_.index_of(y))]; }

    double min_abs() const {
        double m = std::abs(values_[0]);
        for (const cplx& v : values_) m = std::min(m, std::abs(v));
        return m;
    }

  private:
    Group group_;
    std::vector<cplx> values_;
};

/// mu-hat(y) = sum_x mu(x) (x,y), computed by the mixed-radix transform.
inline CharFunction char_function(const Distribution& mu) {
    std::vector<cplx> t(mu.probs().begin(), mu.probs().end());
    fft::group_dft(mu.group(), t, +1);
    return CharFunction(mu.group(), std::move(t));
}

/// Fourier inversion; rejects tables whose inverse transform is not a
/// probability distribution (the positive-definiteness gate).
inline Distribution inverse_char(const CharFunction& f) {
    std::vector<cplx> t = f.values();
    fft::group_dft(f.group(), t, -1);
    std::vector<double> p(t.size());
    const double scale = 1.0 / static_cast<double>(f.group().order());
    for (std::size_t i = 0; i < t.size(); ++i) {
        cplx v = t[i] * scale;
        require(std::abs(v.imag()) <= 1e-9, errc::not_positive_definite,
                "inverse transform is not real");
        require(v.real() >= -1e-9, errc::not_positive_definite,
                "inverse transform has a negative mass");
        p[i] = std::max(0.0, v.real());
    }
    return Distribution(f.group(), std::move(p));
}

/// Reflected distribution: bar-mu(B) = mu(-B).
inline Distribution reflect(const Distribution& mu) {
    const Group& X = mu.group();
    std::vector<double> p(mu.probs().size());
    for (i64 i = 0; i < X.order(); ++i)
        p[static_cast<std::size_t>(X.index_of(X.neg(X.element_at(i))))] =
            mu[static_cast<std::size_t>(i)];
    return Distribution(X, std::move(p));
}

/// Convolution. Direct fiber sum at small order, Fourier route above it.
inline Distribution convolve(const Distribution& mu, const Distribution& nu) {
    require(mu.group() == nu.group(), errc::invalid_argument, "convolve: group mismatch");
    const Group& X = mu.group();
    if (X.order() <= 256) {
        std::vector<double> p(mu.probs().size(), 0.0);
        std::vector<Elem> elems;
        elems.reserve(p.size());
        for (i64 i = 0; i < X.order(); ++i) elems.push_back(X.element_at(i));
        for (i64 a = 0; a < X.order(); ++a) {
            double pa = mu[a];
            if (pa == 0.0) continue;
            for (i64 b = 0; b < X.order(); ++b)
                p[static_cast<std::size_t>(X.index_of(X.add(elems[static_cast<std::size_t>(a)],
                                                            elems[static_cast<std::size_t>(b)])))] +=
                    pa * nu[b];
        }
        // guard against accumulated rounding before the constructor's sum check
        double sum = 0.0;
        for (double v : p) sum += v;
        for (double& v : p) v /= sum;
        return Distribution(X, std::move(p));
    }
    std::vector<cplx> fa(mu.probs().begin(), mu.probs().end());
    std::vector<cplx> fb(nu.probs().begin(), nu.probs().end());
    fft::group_dft(X, fa, +1);
    fft::group_dft(X, fb, +1);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    fft::group_dft(X, fa, -1);
    std::vector<double> p(fa.size());
    const double scale = 1.0 / static_cast<double>(X.order());
    double sum = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
        p[i] = std::max(0.0, fa[i].real() * scale);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return Distribution(X, std::move(p));
}

/// Law of f(xi): mass transported along fibers of f. Exact.
inline Distribution push_forward(const Hom& f, const Distribution& mu) {
    require(f.domain() == mu.group(), errc::invalid_argument, "push_forward: domain mismatch");
    std::vector<double> p(static_cast<std::size_t>(f.codomain().order()), 0.0);
    for (i64 i = 0; i < mu.group().order(); ++i)
        p[static_cast<std::size_t>(f.codomain().index_of(f.apply(mu.group().element_at(i))))] +=
            mu[i];
    return Distribution(f.codomain(), std::move(p));
}

/// Joint characteristic function of m linear forms, as a table over Y^m.
class JointCharFunction {
  public:
    JointCharFunction(Group base, std::size_t m, std::vector<cplx> values)
        : base_(std::move(base)), m_(m), power_(base_.power(m)), values_(std::move(values)) {
        require(values_.size() == static_cast<std::size_t>(power_.order()), errc::invalid_argument,
                "joint table size must equal |Y|^m");
        require(std::abs(values_[0] - cplx(1.0, 0.0)) <= 1e-12, errc::invalid_argument,
                "joint characteristic function must equal 1 at 0");
    }

    const Group& base() const { return base_; }
    const Group& power_group() const { return power_; }
    std::size_t arity() const { return m_; }
    const std::vector<cplx>& values() const { return values_; }
    cplx operator[](i64 idx) const { return values_[static_cast<std::size_t>(idx)]; }

    double min_abs() const {
        double m = std::abs(values_[0]);
        for (const cplx& v : values_) m = std::min(m, std::abs(v));
        return m;
    }

  private:
    Group base_;
    std::size_t m_;
    Group power_;
    std::vector<cplx> values_;
};

/// Precomputed index maps P -> index of sum_j a_{ji} y_j for each variable i.
/// Shared by the joint builder and the search loop, where it is rebuilt only
/// when the coefficient system changes.
class JointFormTables {
  public:
    JointFormTables(const CoeffSystem& cs)
        : base_(cs.base()), m_(cs.m()), n_(cs.n()), power_(base_.power(m_)) {
        auto adj = cs.adjoint_grid();
        maps_.assign(n_, std::vector<i64>(static_cast<std::size_t>(power_.order())));
        const std::size_t r = base_.rank();
        for (i64 P = 0; P < power_.order(); ++P) {
            Elem big = power_.element_at(P);
            for (std::size_t i = 0; i < n_; ++i) {
                Elem s = base_.zero();
                for (std::size_t j = 0; j < m_; ++j) {
                    Elem yj(big.begin() + j * r, big.begin() + (j + 1) * r);
                    s = base_.add(s, adj[j][i].apply(yj));
                }
                maps_[i][static_cast<std::size_t>(P)] = base_.index_of(s);
            }
        }
    }

    const Group& base() const { return base_; }
    const Group& power_group() const { return power_; }
    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }

    /// values(y_1..y_m) = prod_i mu_i-hat(a_{1i} y_1 + ... + a_{mi} y_m)
    JointCharFunction joint(const std::vector<CharFunction>& marginal_chars) const {
        require(marginal_chars.size() == n_, errc::invalid_argument,
                "joint: need one marginal per variable");
        for (const CharFunction& f : marginal_chars)
            require(f.group() == base_, errc::invalid_argument, "joint: marginal group mismatch");
        std::vector<cplx> vals(static_cast<std::size_t>(power_.order()), cplx(1.0, 0.0));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t P = 0; P < vals.size(); ++P)
                vals[P] *= marginal_chars[i][maps_[i][P]];
        return JointCharFunction(base_, m_, std::move(vals));
    }

    const std::vector<i64>& form_map(std::size_t i) const { return maps_[i]; }

  private:
    Group base_;
    std::size_t m_, n_;
    Group power_;
    std::vector<std::vector<i64>> maps_;
};

inline JointCharFunction joint_of_linear_forms(const CoeffSystem& cs,
                                               const std::vector<Distribution>& marginals) {
    require(marginals.size() == cs.n(), errc::invalid_argument,
            "joint_of_linear_forms: arity mismatch");
    std::vector<CharFunction> chars;
    chars.reserve(marginals.size());
    for (const Distribution& mu : marginals) {
        require(mu.group() == cs.base(), errc::invalid_argument,
                "joint_of_linear_forms: marginal group mismatch");
        chars.push_back(char_function(mu));
    }
    return JointFormTables(cs).joint(chars);
}

struct Margin {
    bool value = false;
    double margin = 0.0; // achieved quantity the verdict was read from
    explicit operator bool() const { return value; }
};

/// Nonvanishing iff min_y |f(y)| > tol; margin carries the minimum modulus.
inline Margin is_nonvanishing(const CharFunction& f, double tol = 1e-9) {
    double m = f.min_abs();
    return {m > tol, m};
}

inline Margin is_nonvanishing(const JointCharFunction& f, double tol = 1e-9) {
    double m = f.min_abs();
    return {m > tol, m};
}

/// Degenerate iff some point carries mass > 1 - tol; margin is d(mu).
inline Margin is_degenerate(const Distribution& mu, double tol = 1e-9) {
    double d = mu.distance_to_degeneracy();
    return {d < tol, d};
}

struct GaussianVerdict {
    bool gaussian = false;
    double residual = 0.0;          // worst violation across the three checks
    std::optional<Elem> shift;      // x with (x,y) = mu-hat/|mu-hat|, when gaussian
    std::vector<double> phi;        // phi(y) = -log |mu-hat(y)|
};

/// Group-sense Gaussian test: mu-hat = (x,y) exp(-phi) with phi >= 0
/// satisfying the parallelogram identity. On a finite group this forces
/// phi == 0, so the verdict coincides with degeneracy; both checks are run
/// literally, not via that shortcut.
inline GaussianVerdict is_gaussian(const Distribution& mu, double tol = 1e-9) {
    CharFunction f = char_function(mu);
    require(f.min_abs() > tol, errc::vanishing_char,
            "characteristic function vanishes; Gaussian test undefined");
    const Group& Y = f.group();
    const i64 N = Y.order();
    GaussianVerdict v;
    v.phi.resize(static_cast<std::size_t>(N));
    std::vector<cplx> unit(static_cast<std::size_t>(N));
    for (i64 i = 0; i < N; ++i) {
        double a = std::abs(f[i]);
        v.phi[static_cast<std::size_t>(i)] = -std::log(a);
        unit[static_cast<std::size_t>(i)] = f[i] / a;
        v.residual = std::max(v.residual, -v.phi[static_cast<std::size_t>(i)]); // phi >= -tol
    }
    // parallelogram identity for phi and multiplicativity for the unit part
    for (i64 u = 0; u < N; ++u) {
        Elem eu = Y.element_at(u);
        for (i64 w = 0; w < N; ++w) {
            Elem ew = Y.element_at(w);
            i64 s = Y.index_of(Y.add(eu, ew)), d = Y.index_of(Y.sub(eu, ew));
            double para = std::abs(v.phi[static_cast<std::size_t>(s)] +
                                   v.phi[static_cast<std::size_t>(d)] -
                                   2.0 * (v.phi[static_cast<std::size_t>(u)] +
                                          v.phi[static_cast<std::size_t>(w)]));
            double mult = std::abs(unit[static_cast<std::size_t>(s)] -
                                   unit[static_cast<std::size_t>(u)] *
                                       unit[static_cast<std::size_t>(w)]);
            v.residual = std::max(v.residual, std::max(para, mult));
        }
    }
    v.gaussian = v.residual <= tol;
    if (v.gaussian) {
        // the unit part is a character; read the shift off the generators
        Elem x(Y.rank());
        for (std::size_t j = 0; j < Y.rank(); ++j) {
            Elem e = Y.zero();
            e[j] = 1 % Y.moduli()[j];
            double ang = std::arg(unit[static_cast<std::size_t>(Y.index_of(e))]);
            double k = ang * Y.moduli()[j] / (2.0 * std::numbers::pi);
            x[j] = pos_mod(static_cast<i64>(std::llround(k)), Y.moduli()[j]);
        }
        v.shift = std::move(x);
    }
    return v;
}

} // namespace charlab
