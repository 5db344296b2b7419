#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "charlab/feq.hpp"

namespace charlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-task seed: hash of master seed and restart index.
inline std::uint64_t restart_seed(std::uint64_t master, i64 index) {
    return splitmix64(master ^ splitmix64(0x5851f42d4c957f2dULL + static_cast<std::uint64_t>(index)));
}

/// Worker cap: LCA_CHARLAB_THREADS bounds it, hardware otherwise. Affects
/// speed only; outputs never depend on the worker count.
inline unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LCA_CHARLAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

struct SearchSettings {
    i64 max_iterations = 2000;
    double step_init = 0.25;
    double step_decay = 0.5;
    double min_step = 1e-12;
    double stop_objective = 1e-13;
    double degenerate_fraction = 0.01; // share of restarts started at point masses
    double floor_lambda = 0.6;         // mass kept on 0 by the nonvanishing sampler
};

struct Tolerances {
    double membership = 1e-9;
    double degeneracy = 1e-9;
    double assert_distance = 1e-3; // members must sit this close to degenerate
};

enum class Mode { theorem1, theorem4, theorem3, explore_remark2 };

inline const char* mode_name(Mode m) {
    switch (m) {
    case Mode::theorem1: return "theorem1";
    case Mode::theorem4: return "theorem4";
    case Mode::theorem3: return "theorem3";
    case Mode::explore_remark2: return "explore-remark2";
    }
    return "?";
}

struct ExperimentConfig {
    Group group = Group(Vec{1});
    std::size_t m = 2, n = 2;
    std::vector<std::vector<Hom>> alphas; // m x n endomorphisms of group
    std::optional<Mat> scalar_grid;       // retained when given as scalars
    Mode mode = Mode::theorem1;
    std::uint64_t master_seed = 42;
    i64 restarts = 10000;
    Tolerances tol;
    SearchSettings search;

    CoeffSystem coeff_system() const { return CoeffSystem(group, m, n, alphas); }

    static ExperimentConfig from_scalars(const Group& X, const Mat& grid) {
        ExperimentConfig c{X};
        c.m = grid.size();
        c.n = grid.empty() ? 0 : grid[0].size();
        for (const Vec& row : grid) {
            std::vector<Hom> r;
            for (i64 v : row) r.push_back(Hom::scalar(X, v));
            c.alphas.push_back(std::move(r));
        }
        c.scalar_grid = grid;
        return c;
    }
};

/// lambda*delta_0 + (1-lambda)*random simplex point; guarantees
/// min |mu-hat| >= 2*lambda - 1 > 0.
inline Distribution sample_distribution(const Group& X, std::uint64_t seed, double lambda) {
    require(lambda > 0.5 && lambda < 1.0, errc::invalid_argument,
            "nonvanishing sampler needs 0.5 < lambda < 1");
    std::mt19937_64 g(seed);
    auto uniform01 = [&] { return double(g() >> 11) * 0x1.0p-53; };
    std::vector<double> p(static_cast<std::size_t>(X.order()));
    double s = 0;
    for (double& v : p) {
        v = -std::log(1.0 - uniform01());
        s += v;
    }
    for (double& v : p) v *= (1.0 - lambda) / s;
    p[0] += lambda;
    return Distribution(X, std::move(p));
}

struct MinimizeResult {
    std::vector<std::vector<double>> solution; // one simplex point per variable
    double residual = 0.0;
    std::vector<double> degeneracy_distance;
    i64 iterations = 0;
};

/// D_{m,m-1} membership residual as the search objective. The index plumbing
/// is built once per coefficient system and shared across restarts.
class MembershipObjective {
  public:
    explicit MembershipObjective(const CoeffSystem& cs)
        : base_(cs.base()), n_(cs.n()), tables_(cs),
          scan_(cs.base(), cs.m(), static_cast<int>(cs.m()) - 1),
          pair_(static_cast<std::size_t>(cs.base().order()) *
                static_cast<std::size_t>(cs.base().order())) {
        require(cs.m() >= 2, errc::invalid_argument, "membership objective needs m >= 2");
        const i64 B = base_.order();
        for (i64 x = 0; x < B; ++x)
            for (i64 y = 0; y < B; ++y)
                pair_[static_cast<std::size_t>(x * B + y)] =
                    pairing(base_, base_.element_at(x), base_.element_at(y));
        joint_.resize(static_cast<std::size_t>(tables_.power_group().order()));
        chars_.assign(n_, std::vector<cplx>(static_cast<std::size_t>(B)));
    }

    const Group& base() const { return base_; }
    std::size_t vars() const { return n_; }

    /// Residual of the joint built from the given marginals; +inf when the
    /// joint gets too close to zero for the multiplicative test.
    double eval(const std::vector<std::vector<double>>& probs,
                double cutoff = std::numeric_limits<double>::infinity()) {
        const i64 B = base_.order();
        for (std::size_t i = 0; i < n_; ++i)
            for (i64 y = 0; y < B; ++y) {
                cplx acc = 0;
                for (i64 x = 0; x < B; ++x)
                    acc += probs[i][static_cast<std::size_t>(x)] *
                           pair_[static_cast<std::size_t>(x * B + y)];
                chars_[i][static_cast<std::size_t>(y)] = acc;
            }
        double minmod = std::numeric_limits<double>::infinity();
        for (std::size_t P = 0; P < joint_.size(); ++P) {
            cplx v(1, 0);
            for (std::size_t i = 0; i < n_; ++i)
                v *= chars_[i][static_cast<std::size_t>(tables_.form_map(i)[P])];
            joint_[P] = v;
            minmod = std::min(minmod, std::abs(v));
        }
        if (minmod < 1e-12) return std::numeric_limits<double>::infinity();
        return scan_.residual(joint_, cutoff);
    }

    JointCharFunction joint_from(const std::vector<Distribution>& marginals) const {
        std::vector<CharFunction> chars;
        for (const Distribution& mu : marginals) chars.push_back(char_function(mu));
        return tables_.joint(chars);
    }

  private:
    Group base_;
    std::size_t n_;
    JointFormTables tables_;
    DmkResidualScan scan_;
    std::vector<cplx> pair_;
    std::vector<cplx> joint_;
    std::vector<std::vector<cplx>> chars_;
};

/// Projected coordinate descent over the product of probability simplexes
/// with multiplicative step decay. Monotone non-increasing objective,
/// deterministic given the seed.
inline MinimizeResult minimize_residual(MembershipObjective& obj,
                                        std::vector<std::vector<double>> point,
                                        std::uint64_t seed, const SearchSettings& s) {
    const i64 B = obj.base().order();
    const std::size_t n = obj.vars();
    std::mt19937_64 g(seed);
    MinimizeResult out;
    double cur = obj.eval(point);
    double step = s.step_init;
    i64 since_improved = 0;
    const i64 patience = 4 * static_cast<i64>(n);
    i64 it = 0;
    for (; it < s.max_iterations; ++it) {
        if (cur <= s.stop_objective || step < s.min_step) break;
        std::size_t v = static_cast<std::size_t>(it) % n;
        i64 a = static_cast<i64>(g() % static_cast<std::uint64_t>(B));
        i64 b = static_cast<i64>(g() % static_cast<std::uint64_t>(B));
        if (a == b) {
            ++since_improved;
            continue;
        }
        bool improved = false;
        for (int dir = 0; dir < 2 && !improved; ++dir) {
            i64 from = dir ? a : b, to = dir ? b : a;
            double delta = step * point[v][static_cast<std::size_t>(from)];
            if (delta <= 0) continue;
            point[v][static_cast<std::size_t>(from)] -= delta;
            point[v][static_cast<std::size_t>(to)] += delta;
            double cand = obj.eval(point, cur);
            if (cand < cur) {
                cur = cand;
                improved = true;
            } else {
                point[v][static_cast<std::size_t>(from)] += delta;
                point[v][static_cast<std::size_t>(to)] -= delta;
            }
        }
        if (improved) {
            since_improved = 0;
        } else if (++since_improved >= patience) {
            step *= s.step_decay;
            since_improved = 0;
        }
    }
    out.iterations = it;
    out.residual = cur;
    out.solution = std::move(point);
    for (const auto& p : out.solution) {
        double mx = 0;
        for (double q : p) mx = std::max(mx, q);
        out.degeneracy_distance.push_back(1.0 - mx);
    }
    return out;
}

struct PipelineOutcome {
    bool ran = false;
    bool ok = false;
    double eq3_residual = 0.0;
    std::vector<EliminationCertificate> certificates;
    std::string failure;
};

/// The full Theorem 1 proof path on one member instance: symmetrize each
/// marginal (nu_i = mu_i * reflected mu_i, so log nu-hat is real), run the
/// Lemma 2 elimination on psi_i = log nu_i-hat, then classify every nu_i
/// through the Marcinkiewicz criterion.
inline PipelineOutcome run_member_pipeline(const CoeffSystem& cs,
                                           const std::vector<Distribution>& marginals,
                                           double member_residual, double tol,
                                           std::uint64_t seed) {
    PipelineOutcome out;
    out.ran = true;
    const Group& Y = cs.base();
    std::vector<Distribution> nus;
    std::vector<CharFunction> nuhats;
    std::vector<GroupFunction> psis;
    double min_sq = 1.0;
    for (const Distribution& mu : marginals) {
        nus.push_back(convolve(mu, reflect(mu)));
        nuhats.push_back(char_function(nus.back()));
        std::vector<cplx> lg(static_cast<std::size_t>(Y.order()));
        for (i64 y = 0; y < Y.order(); ++y) {
            double v = nuhats.back()[y].real(); // |mu-hat|^2 > 0
            min_sq = std::min(min_sq, v);
            if (v <= 0) {
                out.failure = "symmetrized characteristic function vanishes";
                return out;
            }
            lg[static_cast<std::size_t>(y)] = std::log(v);
        }
        psis.push_back(GroupFunction(Y, std::move(lg)));
    }
    // a membership residual r on the mu-joint bounds the log-level
    // obstruction by ~r/min|nu-hat|; keep a safety factor on top
    const double derived_tol = std::max(tol, 16.0 * member_residual / std::max(min_sq, 1e-6));
    try {
        Lemma2Result res = eliminate_lemma2(cs.adjoint_grid(), psis, derived_tol, seed);
        out.eq3_residual = res.eq3_residual;
        out.certificates = std::move(res.certificates);
    } catch (const error& e) {
        out.failure = e.what();
        return out;
    }
    try {
        for (std::size_t i = 0; i < nus.size(); ++i) {
            MarcinkiewiczResult mc = marcinkiewicz_check(nuhats[i], derived_tol);
            if (!mc.gaussian) {
                out.failure =
                    "nu_" + std::to_string(i + 1) + " failed the Marcinkiewicz criterion";
                return out;
            }
            if (!is_gaussian(nus[i], std::max(derived_tol, 1e-7)).gaussian) {
                out.failure = "nu_" + std::to_string(i + 1) + " is not Gaussian";
                return out;
            }
        }
    } catch (const error& e) {
        out.failure = e.what();
        return out;
    }
    out.ok = true;
    return out;
}

struct RestartRecord {
    i64 index = 0;
    std::uint64_t seed = 0;
    bool forced_degenerate = false;
    double start_residual = 0.0;
    bool start_member = false;
    double final_residual = 0.0;
    std::vector<double> degeneracy_distance; // per marginal, at the search end
    i64 iterations = 0;
    bool member_found = false;  // start or minimized point passed membership
    bool assertion_ok = true;   // theorem's conclusion held wherever tested
    bool pipeline_ok = true;
    std::vector<EliminationCertificate> certificates;
    std::vector<std::vector<double>> member_marginals; // stored when a member was found
    double q_residual = -1.0;   // theorem4: E-deviation of the built joint
    std::string note;
};

struct Theorem3Reduction {
    std::vector<std::vector<std::size_t>> classes;
    std::vector<std::size_t> representatives;
    std::vector<Rat> scalars;
    Mat reduced_grid; // m x q representative scalar columns
};

struct Report {
    ExperimentConfig config;
    std::optional<ConditionResult> condition11;
    std::optional<ConditionResult> condition12;
    std::optional<Theorem3Reduction> reduction;
    std::vector<RestartRecord> records;
    std::vector<i64> candidates; // explore mode: flagged restart indices
    std::string verdict;         // PASS | FAIL | EXPLORE-COMPLETE | PRECONDITION-FAILED
    std::string note;
    std::string error_code;      // set when a precondition aborted the run
    std::string error_message;
    double wall_clock_seconds = 0.0;
};

namespace detail {

inline bool all_automorphisms(const CoeffSystem& cs) {
    for (std::size_t j = 0; j < cs.m(); ++j)
        for (std::size_t i = 0; i < cs.n(); ++i)
            if (!classify(cs.alpha(j, i)).is_auto) return false;
    return true;
}

/// Run fn(index) for every restart index on the worker pool; results land in
/// a preallocated vector, so record order never depends on scheduling.
template <typename Fn>
void parallel_restarts(i64 restarts, Fn&& fn) {
    if (restarts <= 0) return;
    unsigned workers = std::min<unsigned>(worker_count(),
                                          static_cast<unsigned>(std::min<i64>(restarts, 64)));
    if (workers <= 1) {
        for (i64 i = 0; i < restarts; ++i) fn(i);
        return;
    }
    std::atomic<i64> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                i64 i = next.fetch_add(1);
                if (i >= restarts) break;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

inline std::vector<Distribution> to_distributions(const Group& X,
                                                  const std::vector<std::vector<double>>& probs) {
    std::vector<Distribution> out;
    for (auto p : probs) {
        double s = 0; // search iterations can drift the sum by a few ulp
        for (double v : p) s += v;
        for (double& v : p) v /= s;
        out.emplace_back(X, std::move(p));
    }
    return out;
}

inline bool forced_degenerate_restart(i64 index, double fraction) {
    if (fraction <= 0) return false;
    i64 period = std::max<i64>(1, static_cast<i64>(std::llround(1.0 / fraction)));
    return index % period == 0;
}

/// Start point for one restart: forced point masses on the configured
/// fraction of restarts, the nonvanishing mixture otherwise.
inline std::vector<std::vector<double>> restart_start(const ExperimentConfig& cfg, i64 index,
                                                      std::uint64_t seed, bool& forced) {
    forced = forced_degenerate_restart(index, cfg.search.degenerate_fraction);
    std::vector<std::vector<double>> start;
    std::mt19937_64 g(splitmix64(seed));
    for (std::size_t i = 0; i < cfg.n; ++i) {
        if (forced) {
            std::vector<double> p(static_cast<std::size_t>(cfg.group.order()), 0.0);
            p[g() % p.size()] = 1.0;
            start.push_back(std::move(p));
        } else {
            start.push_back(
                sample_distribution(cfg.group, splitmix64(seed ^ (i + 1)), cfg.search.floor_lambda)
                    .probs());
        }
    }
    return start;
}

} // namespace detail

/// Shared body of the theorem verifiers. Per restart: build the joint from
/// seeded marginals, test D_{m,m-1} membership, run the proof pipeline on
/// members, then descend on the membership residual and re-test whatever
/// point the search found. The verdict fails when any member (sampled or
/// found) has a marginal farther than the assert distance from degenerate or
/// a pipeline step breaks.
inline Report verify_theorem1(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.config = cfg;
    CoeffSystem cs = cfg.coeff_system();
    rep.condition11 = check_condition_11(cs); // throws for non-monomorphisms
    require(rep.condition11->holds, errc::condition11_violated,
            "condition (11) fails for this coefficient system");
    if (detail::all_automorphisms(cs)) rep.condition12 = check_condition_12(cs);

    const bool theorem4 = cfg.mode == Mode::theorem4;
    if (theorem4)
        rep.note = "Q-independence on a finite group forces E == 1 (a continuous polynomial "
                   "with q(0)=0 is identically 0), so admissible inputs coincide with "
                   "independent ones and the verdict matches theorem1.";

    rep.records.resize(static_cast<std::size_t>(cfg.restarts));
    std::atomic<bool> any_fail{false};

    const CoeffSystem* cs_ptr = &cs;
    detail::parallel_restarts(cfg.restarts, [&](i64 index) {
        MembershipObjective obj(*cs_ptr); // per-restart: cheap relative to the search
        RestartRecord rec;
        rec.index = index;
        rec.seed = restart_seed(cfg.master_seed, index);
        auto start = detail::restart_start(cfg, index, rec.seed, rec.forced_degenerate);

        try {
            rec.start_residual = obj.eval(start);
            rec.start_member = rec.start_residual <= cfg.tol.membership;

            auto handle_member = [&](const std::vector<std::vector<double>>& probs,
                                     double residual) {
                rec.member_found = true;
                rec.member_marginals = probs;
                std::vector<Distribution> ms = detail::to_distributions(cfg.group, probs);
                for (const Distribution& mu : ms)
                    if (mu.distance_to_degeneracy() > cfg.tol.assert_distance) {
                        rec.assertion_ok = false;
                        rec.note = "member with non-degenerate marginal";
                    }
                if (theorem4) {
                    // Q-independence concerns the joint law of the variables
                    // (xi_1..xi_n) themselves, not of the linear forms
                    std::vector<CharFunction> chars;
                    for (const Distribution& mu : ms) chars.push_back(char_function(mu));
                    Group Yn = cfg.group.power(cfg.n);
                    std::vector<i64> stride(cfg.n, 1);
                    for (std::size_t jj = cfg.n; jj-- > 1;)
                        stride[jj - 1] = stride[jj] * cfg.group.order();
                    std::vector<cplx> vals(static_cast<std::size_t>(Yn.order()), cplx(1, 0));
                    for (i64 P = 0; P < Yn.order(); ++P) {
                        i64 rem = P;
                        for (std::size_t jj = 0; jj < cfg.n; ++jj) {
                            vals[static_cast<std::size_t>(P)] *= chars[jj][rem / stride[jj]];
                            rem %= stride[jj];
                        }
                    }
                    QIndependenceResult q = q_independence_residual(
                        JointCharFunction(cfg.group, cfg.n, std::move(vals)), chars, 1e-6);
                    rec.q_residual = q.residual;
                    if (!q.q_ok) {
                        rec.assertion_ok = false;
                        rec.note = "constructed joint failed the Q-independence reduction";
                    }
                }
                PipelineOutcome p =
                    run_member_pipeline(*cs_ptr, ms, residual, cfg.tol.membership, rec.seed);
                rec.pipeline_ok = p.ok;
                rec.certificates = std::move(p.certificates);
                if (!p.ok) {
                    rec.assertion_ok = false;
                    rec.note = p.failure;
                }
            };
            if (rec.start_member) handle_member(start, rec.start_residual);

            MinimizeResult mr = minimize_residual(obj, start, splitmix64(rec.seed), cfg.search);
            rec.final_residual = mr.residual;
            rec.degeneracy_distance = mr.degeneracy_distance;
            rec.iterations = mr.iterations;
            if (!rec.start_member && mr.residual <= cfg.tol.membership)
                handle_member(mr.solution, mr.residual);
        } catch (const std::exception& e) {
            rec.assertion_ok = false;
            rec.note = e.what();
        }

        if (!rec.assertion_ok) any_fail = true;
        rep.records[static_cast<std::size_t>(index)] = std::move(rec);
    });

    rep.verdict = any_fail ? "FAIL" : "PASS";
    rep.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline Report verify_theorem4(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.mode = Mode::theorem4;
    return verify_theorem1(c);
}

/// Remark 2 exploration: the coefficient system must be all automorphisms
/// with condition (11) failing. Pure falsification search; candidates are
/// reported for inspection and the run never asserts an answer.
inline Report explore_remark2(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.config = cfg;
    CoeffSystem cs = cfg.coeff_system();
    require(detail::all_automorphisms(cs), errc::precondition_violated,
            "Remark 2 exploration needs automorphism coefficients");
    rep.condition11 = check_condition_11(cs);
    require(!rep.condition11->holds, errc::condition11_holds,
            "condition (11) holds; nothing to explore");
    rep.condition12 = check_condition_12(cs);
    rep.note = "stochastic search is a falsification attempt; \"no counterexample found\" "
               "does not assert the open question either way.";

    rep.records.resize(static_cast<std::size_t>(cfg.restarts));
    const CoeffSystem* cs_ptr = &cs;
    detail::parallel_restarts(cfg.restarts, [&](i64 index) {
        MembershipObjective obj(*cs_ptr);
        RestartRecord rec;
        rec.index = index;
        rec.seed = restart_seed(cfg.master_seed, index);
        auto start = detail::restart_start(cfg, index, rec.seed, rec.forced_degenerate);
        try {
            rec.start_residual = obj.eval(start);
            rec.start_member = rec.start_residual <= cfg.tol.membership;
            MinimizeResult mr = minimize_residual(obj, start, splitmix64(rec.seed), cfg.search);
            rec.final_residual = mr.residual;
            rec.degeneracy_distance = mr.degeneracy_distance;
            rec.iterations = mr.iterations;
            if (mr.residual < cfg.tol.membership) {
                double worst = 0;
                for (double d : mr.degeneracy_distance) worst = std::max(worst, d);
                if (worst > cfg.tol.degeneracy) {
                    rec.member_found = true;
                    rec.member_marginals = mr.solution;
                    rec.note = "candidate phenomenon: member-level residual with non-degenerate "
                               "marginals; for human inspection";
                }
            }
        } catch (const std::exception& e) {
            rec.note = e.what();
        }
        rep.records[static_cast<std::size_t>(index)] = std::move(rec);
    });
    for (const RestartRecord& rec : rep.records)
        if (rec.member_found) rep.candidates.push_back(rec.index);

    rep.verdict = "EXPLORE-COMPLETE";
    rep.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Theorem 3 style run for integer scalar coefficients acting invertibly:
/// collinear columns aggregate into one variable per class, the
/// reduced system goes through the Lemma 2 engine, and each aggregated
/// Gaussian factor is split back into its pieces by the Cramer step.
inline Report reduce_and_verify_theorem3_style(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    require(cfg.scalar_grid.has_value(), errc::precondition_violated,
            "theorem3 mode needs a scalar coefficient grid");
    const Mat& grid = *cfg.scalar_grid;
    for (const Vec& row : grid)
        for (i64 v : row)
            for (i64 d : cfg.group.moduli())
                require(gcd_i64(v, d) == 1, errc::precondition_violated,
                        "coefficient " + std::to_string(v) +
                            " does not act invertibly modulo " + std::to_string(d));

    // rational collinearity classes of the coefficient columns
    std::vector<std::vector<Rat>> cols(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i)
        for (std::size_t j = 0; j < cfg.m; ++j) cols[i].push_back(Rat(grid[j][i]));
    CollinearityReduction red = collinearity_reduction(cols);
    const std::size_t q = red.representatives.size();

    Theorem3Reduction t3;
    t3.classes = red.classes;
    t3.representatives = red.representatives;
    t3.scalars = red.scalars;
    t3.reduced_grid.assign(cfg.m, Vec(q, 0));
    for (std::size_t c = 0; c < q; ++c)
        for (std::size_t j = 0; j < cfg.m; ++j)
            t3.reduced_grid[j][c] = grid[j][red.representatives[c]];
    for (const Rat& c : red.scalars)
        for (i64 d : cfg.group.moduli())
            require(gcd_i64(c.num, d) == 1 && gcd_i64(c.den, d) == 1, errc::precondition_violated,
                    "collinearity scalar " + c.str() + " does not act invertibly");

    Report rep;
    rep.config = cfg;
    rep.reduction = t3;
    rep.note = q == cfg.n
                   ? "no collinear columns; the run coincides with theorem1 on the same system"
                   : "rational coefficients are modelled by integers coprime to the group "
                     "order; the divisible-group setting itself is out of scope";

    CoeffSystem reduced = CoeffSystem::from_scalars(cfg.group, t3.reduced_grid);
    rep.condition11 = check_condition_11(reduced);
    require(rep.condition11->holds, errc::condition11_violated,
            "reduced system still violates condition (11) on this finite model");
    rep.condition12 = check_condition_12(reduced);

    CoeffSystem full = cfg.coeff_system();
    // c_i action on the dual side: multiplication by num * den^{-1}
    auto scalar_action = [&](const Rat& c) {
        Mat A(cfg.group.rank(), Vec(cfg.group.rank(), 0));
        for (std::size_t jj = 0; jj < cfg.group.rank(); ++jj) {
            i64 d = cfg.group.moduli()[jj];
            if (d == 1) continue;
            A[jj][jj] = pos_mod(c.num, d) * mod_inverse(pos_mod(c.den, d), d) % d;
        }
        return Hom(cfg.group, cfg.group, std::move(A));
    };

    rep.records.resize(static_cast<std::size_t>(cfg.restarts));
    std::atomic<bool> any_fail{false};
    detail::parallel_restarts(cfg.restarts, [&](i64 index) {
        MembershipObjective obj(full);
        RestartRecord rec;
        rec.index = index;
        rec.seed = restart_seed(cfg.master_seed, index);
        auto start = detail::restart_start(cfg, index, rec.seed, rec.forced_degenerate);
        try {
        rec.start_residual = obj.eval(start);
        rec.start_member = rec.start_residual <= cfg.tol.membership;

        auto handle_member = [&](const std::vector<std::vector<double>>& probs, double residual) {
            rec.member_found = true;
            rec.member_marginals = probs;
            std::vector<Distribution> ms = detail::to_distributions(cfg.group, probs);
            for (const Distribution& mu : ms)
                if (mu.distance_to_degeneracy() > cfg.tol.assert_distance) {
                    rec.assertion_ok = false;
                    rec.note = "member with non-degenerate marginal";
                }
            // aggregated functions phi_c(y) = sum_{i in class} psi_i(c_i y)
            std::vector<Distribution> nus;
            std::vector<GroupFunction> phis;
            double min_sq = 1.0;
            for (const Distribution& mu : ms) nus.push_back(convolve(mu, reflect(mu)));
            for (std::size_t c = 0; c < q; ++c) {
                std::vector<cplx> acc(static_cast<std::size_t>(cfg.group.order()), cplx(0, 0));
                for (std::size_t i : t3.classes[c]) {
                    CharFunction nh = char_function(nus[i]);
                    Hom act = scalar_action(t3.scalars[i]);
                    for (i64 y = 0; y < cfg.group.order(); ++y) {
                        double v = nh.value(act.apply(cfg.group.element_at(y))).real();
                        min_sq = std::min(min_sq, v);
                        if (v <= 0) v = 1e-300;
                        acc[static_cast<std::size_t>(y)] += std::log(v);
                    }
                }
                phis.push_back(GroupFunction(cfg.group, std::move(acc)));
            }
            const double derived_tol =
                std::max(cfg.tol.membership, 16.0 * residual / std::max(min_sq, 1e-6));
            try {
                Lemma2Result res =
                    eliminate_lemma2(reduced.adjoint_grid(), phis, derived_tol, rec.seed);
                rec.certificates = std::move(res.certificates);
            } catch (const error& e) {
                rec.pipeline_ok = false;
                rec.assertion_ok = false;
                rec.note = e.what();
                return;
            }
            // Cramer step: each aggregated factor splits into Gaussian pieces
            for (std::size_t c = 0; c < q && rec.assertion_ok; ++c) {
                std::vector<Distribution> pieces;
                for (std::size_t i : t3.classes[c])
                    pieces.push_back(push_forward(scalar_action(t3.scalars[i]), nus[i]));
                Distribution gamma = pieces[0];
                for (std::size_t p = 1; p < pieces.size(); ++p) gamma = convolve(gamma, pieces[p]);
                double gtol = std::max(derived_tol, 1e-7);
                if (!is_gaussian(gamma, gtol).gaussian) {
                    rec.assertion_ok = false;
                    rec.note = "aggregated factor is not Gaussian";
                    break;
                }
                for (const Distribution& piece : pieces)
                    if (!is_gaussian(piece, gtol).gaussian) {
                        rec.assertion_ok = false;
                        rec.note = "aggregated factor does not split into Gaussian pieces";
                        break;
                    }
            }
            rec.pipeline_ok = rec.assertion_ok;
        };
        if (rec.start_member) handle_member(start, rec.start_residual);

        MinimizeResult mr = minimize_residual(obj, start, splitmix64(rec.seed), cfg.search);
        rec.final_residual = mr.residual;
        rec.degeneracy_distance = mr.degeneracy_distance;
        rec.iterations = mr.iterations;
        if (!rec.start_member && mr.residual <= cfg.tol.membership)
            handle_member(mr.solution, mr.residual);
        } catch (const std::exception& e) {
            rec.assertion_ok = false;
            rec.note = e.what();
        }

        if (!rec.assertion_ok) any_fail = true;
        rep.records[static_cast<std::size_t>(index)] = std::move(rec);
    });

    rep.verdict = any_fail ? "FAIL" : "PASS";
    rep.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Dispatch on the configured mode; precondition failures become a report
/// with the error recorded instead of a propagating exception.
inline Report run_experiment(const ExperimentConfig& cfg) {
    try {
        switch (cfg.mode) {
        case Mode::theorem1: return verify_theorem1(cfg);
        case Mode::theorem4: return verify_theorem4(cfg);
        case Mode::theorem3: return reduce_and_verify_theorem3_style(cfg);
        case Mode::explore_remark2: return explore_remark2(cfg);
        }
        fail(errc::internal, "unknown mode");
    } catch (const error& e) {
        Report rep;
        rep.config = cfg;
        rep.verdict = "PRECONDITION-FAILED";
        rep.error_code = errc_name(e.code());
        rep.error_message = e.what();
        return rep;
    }
}

} // namespace charlab
