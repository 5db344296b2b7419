#include <doctest.h>

#include "charlab/harness.hpp"
#include "charlab/jsonio.hpp"
#include "test_util.hpp"

using namespace charlab;

namespace {

/// Report JSON with the timing field stripped (it is the one legitimate
/// run-to-run difference).
std::string stable_json(const Report& rep) {
    std::string s = io::report_to_json(rep);
    std::size_t cut = s.rfind("\"wall_clock_seconds\"");
    REQUIRE(cut != std::string::npos);
    return s.substr(0, cut);
}

ExperimentConfig small_config(Mode mode, i64 restarts = 40) {
    ExperimentConfig cfg = ExperimentConfig::from_scalars(Group({3}), {{1, 1}, {1, 2}});
    cfg.mode = mode;
    cfg.restarts = restarts;
    cfg.master_seed = 42;
    cfg.search.max_iterations = 150;
    return cfg;
}

} // namespace

TEST_CASE("sample_distribution respects the nonvanishing floor") {
    Group Z2({2});
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Distribution mu = sample_distribution(Z2, seed, 0.6);
        CHECK(char_function(mu).min_abs() >= 0.2 - 1e-12);
    }
    Group X({3, 4});
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Distribution mu = sample_distribution(X, seed, 0.75);
        CHECK(char_function(mu).min_abs() >= 0.5 - 1e-12);
    }
    // determinism
    CHECK(sample_distribution(X, 99, 0.6).probs() == sample_distribution(X, 99, 0.6).probs());
    CHECK_THROWS_AS(sample_distribution(X, 1, 0.5), error);
    CHECK_THROWS_AS(sample_distribution(X, 1, 1.0), error);
}

TEST_CASE("minimize_residual contract") {
    CoeffSystem cs = CoeffSystem::from_scalars(Group({3}), {{1, 1}, {1, 2}});
    MembershipObjective obj(cs);

    // degenerate start: already a member, zero residual
    std::vector<std::vector<double>> degenerate{{0, 1, 0}, {0, 0, 1}};
    SearchSettings s;
    MinimizeResult r0 = minimize_residual(obj, degenerate, 7, s);
    CHECK(r0.residual <= 1e-12);
    CHECK(r0.degeneracy_distance == std::vector<double>{0.0, 0.0});

    // zero iterations: the start is returned unchanged
    s.max_iterations = 0;
    std::vector<std::vector<double>> start{{0.7, 0.2, 0.1}, {0.5, 0.25, 0.25}};
    MinimizeResult r1 = minimize_residual(obj, start, 7, s);
    CHECK(r1.solution == start);
    CHECK(r1.iterations == 0);

    // descent is monotone and deterministic
    s.max_iterations = 400;
    MinimizeResult r2 = minimize_residual(obj, start, 7, s);
    CHECK(r2.residual <= r1.residual);
    MinimizeResult r3 = minimize_residual(obj, start, 7, s);
    CHECK(r2.residual == r3.residual);
    CHECK(r2.solution == r3.solution);
}

TEST_CASE("verify_theorem1 passes on the canonical small config") {
    Report rep = verify_theorem1(small_config(Mode::theorem1));
    CHECK(rep.verdict == "PASS");
    CHECK(rep.condition11.has_value());
    CHECK(rep.condition11->holds);
    CHECK(rep.condition12.has_value());
    CHECK(rep.condition12->holds);
    CHECK(rep.records.size() == 40);

    // forced-degenerate restarts are exact members and carry certificates
    bool saw_member = false;
    for (const RestartRecord& rec : rep.records) {
        if (rec.forced_degenerate) {
            CHECK(rec.start_member);
            CHECK(rec.member_found);
            CHECK(rec.pipeline_ok);
            CHECK(!rec.certificates.empty());
            saw_member = true;
        }
        CHECK(rec.assertion_ok);
        CHECK(rec.seed == restart_seed(42, rec.index));
    }
    CHECK(saw_member);
}

TEST_CASE("reports are byte-identical across repeated runs") {
    Report a = verify_theorem1(small_config(Mode::theorem1, 25));
    Report b = verify_theorem1(small_config(Mode::theorem1, 25));
    CHECK(stable_json(a) == stable_json(b));
}

TEST_CASE("certificates replay through the feq module") {
    Report rep = verify_theorem1(small_config(Mode::theorem1, 30));
    CoeffSystem cs = rep.config.coeff_system();
    auto grid = cs.adjoint_grid();
    int replayed = 0;
    for (const RestartRecord& rec : rep.records)
        for (const EliminationCertificate& cert : rec.certificates) {
            CHECK(validate_certificate(grid, cert));
            ++replayed;
        }
    CHECK(replayed > 0);

    // re-running the pipeline from the stored marginals reproduces the
    // certificates exactly
    for (const RestartRecord& rec : rep.records) {
        if (!rec.member_found) continue;
        std::vector<Distribution> ms;
        for (const auto& p : rec.member_marginals) ms.emplace_back(rep.config.group, p);
        PipelineOutcome again =
            run_member_pipeline(cs, ms, rec.start_residual, rep.config.tol.membership, rec.seed);
        CHECK(again.ok);
        REQUIRE(again.certificates.size() == rec.certificates.size());
        for (std::size_t c = 0; c < again.certificates.size(); ++c) {
            CHECK(again.certificates[c].final_degree == rec.certificates[c].final_degree);
            CHECK(again.certificates[c].residual == rec.certificates[c].residual);
            CHECK(again.certificates[c].shifts.size() == rec.certificates[c].shifts.size());
        }
        break;
    }
}

TEST_CASE("theorem4 reduces to theorem1 on finite groups") {
    Report t1 = verify_theorem1(small_config(Mode::theorem1, 30));
    Report t4 = verify_theorem4(small_config(Mode::theorem4, 30));
    CHECK(t4.verdict == t1.verdict);
    CHECK(t4.note.find("Q-independence") != std::string::npos);
    for (const RestartRecord& rec : t4.records)
        if (rec.member_found) CHECK(rec.q_residual <= 1e-9);
}

TEST_CASE("condition-11 violations surface as precondition reports") {
    ExperimentConfig cfg = ExperimentConfig::from_scalars(Group({2}), {{1, 1}, {1, 1}});
    cfg.restarts = 5;
    CHECK_THROWS_AS(verify_theorem1(cfg), error);
    Report rep = run_experiment(cfg);
    CHECK(rep.verdict == "PRECONDITION-FAILED");
    CHECK(rep.error_code == "condition-11-violated");

    // non-monomorphism coefficients
    ExperimentConfig bad = ExperimentConfig::from_scalars(Group({4}), {{1, 1}, {1, 2}});
    bad.restarts = 5;
    Report rep2 = run_experiment(bad);
    CHECK(rep2.verdict == "PRECONDITION-FAILED");
    CHECK(rep2.error_code == "precondition-violated");
}

TEST_CASE("explore_remark2") {
    // all-identity coefficients on Z_2: automorphisms, condition (11) fails
    ExperimentConfig cfg = ExperimentConfig::from_scalars(Group({2}), {{1, 1}, {1, 1}});
    cfg.mode = Mode::explore_remark2;
    cfg.restarts = 30;
    cfg.search.max_iterations = 120;
    Report rep = explore_remark2(cfg);
    CHECK(rep.verdict == "EXPLORE-COMPLETE");
    CHECK(rep.records.size() == 30);
    // the minimum set here is exactly the degenerate corners, so no
    // candidate phenomena should be flagged
    CHECK(rep.candidates.empty());

    // zero restarts: empty candidate list
    cfg.restarts = 0;
    CHECK(explore_remark2(cfg).candidates.empty());

    // condition (11) holding contradicts the exploration premise
    ExperimentConfig good = ExperimentConfig::from_scalars(Group({5}), {{1, 1}, {1, 2}});
    good.mode = Mode::explore_remark2;
    try {
        explore_remark2(good);
        FAIL("expected condition-11-holds");
    } catch (const error& e) {
        CHECK(e.code() == errc::condition11_holds);
    }

    // non-automorphism coefficients are rejected
    ExperimentConfig nonauto = ExperimentConfig::from_scalars(Group({4}), {{1, 2}, {1, 2}});
    nonauto.mode = Mode::explore_remark2;
    CHECK_THROWS_AS(explore_remark2(nonauto), error);
}

TEST_CASE("theorem3 collinearity reduction") {
    // columns (1,1),(2,2),(1,2) on Z_5: classes {0,1},{2}
    ExperimentConfig cfg = ExperimentConfig::from_scalars(Group({5}), {{1, 2, 1}, {1, 2, 2}});
    cfg.mode = Mode::theorem3;
    cfg.restarts = 25;
    cfg.search.max_iterations = 150;
    Report rep = reduce_and_verify_theorem3_style(cfg);
    CHECK(rep.verdict == "PASS");
    REQUIRE(rep.reduction.has_value());
    CHECK(rep.reduction->classes.size() == 2);
    CHECK(rep.reduction->classes[0] == std::vector<std::size_t>{0, 1});
    CHECK(rep.reduction->classes[1] == std::vector<std::size_t>{2});
    CHECK(rep.reduction->scalars[1] == Rat(2));
    CHECK(rep.reduction->reduced_grid == Mat{{1, 1}, {1, 2}});
    bool saw_member = false;
    for (const RestartRecord& rec : rep.records) {
        CHECK(rec.assertion_ok);
        if (rec.member_found) {
            saw_member = true;
            CHECK(!rec.certificates.empty());
        }
    }
    CHECK(saw_member);

    // a coefficient sharing a factor with the order is rejected
    ExperimentConfig bad = ExperimentConfig::from_scalars(Group({5}), {{1, 5}, {1, 1}});
    bad.mode = Mode::theorem3;
    try {
        reduce_and_verify_theorem3_style(bad);
        FAIL("expected precondition violation");
    } catch (const error& e) {
        CHECK(e.code() == errc::precondition_violated);
    }

    // matrix coefficients cannot drive the rational reduction
    ExperimentConfig mats = small_config(Mode::theorem3, 5);
    mats.scalar_grid.reset();
    CHECK_THROWS_AS(reduce_and_verify_theorem3_style(mats), error);

    // without collinear columns the run is a theorem1 run
    ExperimentConfig plain = small_config(Mode::theorem3, 20);
    Report rep2 = reduce_and_verify_theorem3_style(plain);
    CHECK(rep2.verdict == "PASS");
    CHECK(rep2.reduction->classes.size() == 2);
    CHECK(rep2.note.find("theorem1") != std::string::npos);
}

TEST_CASE("worker count never changes results") {
    // same config, forced single worker vs default: byte-identical reports
    ExperimentConfig cfg = small_config(Mode::theorem1, 16);
    Report a = verify_theorem1(cfg);
    setenv("LCA_CHARLAB_THREADS", "1", 1);
    Report b = verify_theorem1(cfg);
    unsetenv("LCA_CHARLAB_THREADS");
    CHECK(stable_json(a) == stable_json(b));
}
