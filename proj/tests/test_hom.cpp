#include <doctest.h>

#include "charlab/hom.hpp"
#include "test_util.hpp"

using namespace charlab;

TEST_CASE("make_hom validity congruences") {
    Group Z5({5});
    CHECK(Hom(Z5, Z5, {{2}}).apply({1}) == Elem{2});

    Group X({2, 4});
    CHECK_NOTHROW(Hom(X, X, {{1, 1}, {0, 1}})); // entry (2,1) must be even; 0 is
    try {
        Hom bad(X, X, {{1, 1}, {1, 1}});
        FAIL("expected ill-defined-homomorphism");
    } catch (const error& e) {
        CHECK(e.code() == errc::ill_defined_homomorphism);
        CHECK(std::string(e.what()).find("(2,1)") != std::string::npos);
    }
}

TEST_CASE("apply") {
    Group Z5({5});
    Hom two = Hom::scalar(Z5, 2);
    CHECK(two.apply({3}) == Elem{1});
    CHECK(two.apply({0}) == Elem{0});

    Group X({2, 4});
    Hom f(X, X, {{1, 1}, {0, 1}});
    CHECK(f.apply({1, 3}) == Elem{0, 3});
    CHECK_THROWS_AS(f.apply({5, 0}), error);
}

TEST_CASE("adjoint rule and pairing identity") {
    Group Z5({5});
    CHECK(Hom::scalar(Z5, 2).adjoint() == Hom::scalar(Z5, 2));
    CHECK(Hom::identity(Z5).adjoint() == Hom::identity(Z5));

    Group X({2, 4});
    Hom f(X, X, {{1, 1}, {0, 1}});
    Hom fa = f.adjoint();
    CHECK(fa.matrix() == Mat{{1, 0}, {2, 1}});
    for (i64 xi = 0; xi < X.order(); ++xi)
        for (i64 yi = 0; yi < X.order(); ++yi) {
            Elem x = X.element_at(xi), y = X.element_at(yi);
            CHECK(std::abs(pairing(X, f.apply(x), y) - pairing(X, x, fa.apply(y))) < 1e-12);
        }
}

TEST_CASE("adjoint involution, seeded mixed moduli") {
    auto g = testutil::rng(4242);
    for (int trial = 0; trial < 1000; ++trial) {
        Group dom(testutil::random_moduli(g, 1024));
        Group cod(testutil::random_moduli(g, 1024));
        Hom f = testutil::random_hom(g, dom, cod);
        CHECK(f.adjoint().adjoint() == f);
    }
}

TEST_CASE("pairing adjointness exhaustive on small groups") {
    auto g = testutil::rng(31);
    for (const Vec& mods : abelian_group_catalog(16)) {
        Group X(mods);
        Hom f = testutil::random_endo(g, X);
        Hom fa = f.adjoint();
        for (i64 xi = 0; xi < X.order(); ++xi)
            for (i64 yi = 0; yi < X.order(); ++yi) {
                Elem x = X.element_at(xi), y = X.element_at(yi);
                CHECK(std::abs(pairing(X, f.apply(x), y) - pairing(X, x, fa.apply(y))) < 1e-12);
            }
    }
}

TEST_CASE("adjoint contravariance, sampled") {
    auto g = testutil::rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Group A(testutil::random_moduli(g, 128));
        Group B(testutil::random_moduli(g, 128));
        Group C(testutil::random_moduli(g, 128));
        Hom f = testutil::random_hom(g, B, C);
        Hom h = testutil::random_hom(g, A, B);
        CHECK(f.compose(h).adjoint() == h.adjoint().compose(f.adjoint()));
    }
}

TEST_CASE("kernel and image") {
    Group Z4({4});
    Hom two = Hom::scalar(Z4, 2);
    CHECK(two.kernel() == subgroup_from_generators(Z4, {{2}}));
    CHECK(two.image() == subgroup_from_generators(Z4, {{2}}));
    CHECK(two.kernel().order() * two.image().order() == Z4.order());

    CHECK(Hom::identity(Z4).kernel().is_trivial());
    CHECK(Hom::identity(Z4).image().is_full());
    CHECK(Hom::zero(Z4, Z4).kernel().is_full());
    CHECK(Hom::zero(Z4, Z4).image().is_trivial());
}

TEST_CASE("kernel/image agree with enumeration, seeded") {
    auto g = testutil::rng(88);
    for (int trial = 0; trial < 200; ++trial) {
        Group dom(testutil::random_moduli(g, 256));
        Group cod(testutil::random_moduli(g, 256));
        Hom f = testutil::random_hom(g, dom, cod);
        Subgroup K = f.kernel(), I = f.image();
        CHECK(K.order() * I.order() == dom.order());
        std::set<Elem> img;
        for (i64 i = 0; i < dom.order(); ++i) {
            Elem x = dom.element_at(i);
            bool zero = f.apply(x) == cod.zero();
            CHECK(zero == K.contains(x));
            img.insert(f.apply(x));
        }
        CHECK(static_cast<i64>(img.size()) == I.order());
        for (const Elem& y : img) CHECK(I.contains(y));
    }
}

TEST_CASE("classify and inverse") {
    Group Z5({5});
    Classification c = classify(Hom::scalar(Z5, 2));
    CHECK(c.is_auto);
    CHECK(*c.inverse == Hom::scalar(Z5, 3));

    Group Z4({4});
    Classification c2 = classify(Hom::scalar(Z4, 2));
    CHECK(!c2.is_mono);
    CHECK(!c2.is_epi);
    CHECK_THROWS_AS(inverse(Hom::scalar(Z4, 2)), error);

    Classification c3 = classify(Hom::identity(Z4));
    CHECK(c3.is_auto);
    CHECK(*c3.inverse == Hom::identity(Z4));
}

TEST_CASE("epi/mono duality under adjoint, exhaustive small orders") {
    auto g = testutil::rng(12);
    for (const Vec& mods : abelian_group_catalog(16)) {
        Group X(mods);
        for (int trial = 0; trial < 10; ++trial) {
            Hom f = testutil::random_endo(g, X);
            CHECK(classify(f).is_epi == classify(f.adjoint()).is_mono);
            CHECK(classify(f).is_mono == classify(f.adjoint()).is_epi);
        }
    }
}

TEST_CASE("condition 11") {
    Group Z5({5});
    CoeffSystem cs = CoeffSystem::from_scalars(Z5, {{1, 1}, {1, 2}});
    ConditionResult r = check_condition_11(cs);
    CHECK(r.holds);

    Group Z2({2});
    CoeffSystem same = CoeffSystem::from_scalars(Z2, {{1, 1}, {1, 1}});
    ConditionResult r2 = check_condition_11(same);
    CHECK(!r2.holds);
    CHECK(*r2.witness == Elem{1, 1});

    CoeffSystem single = CoeffSystem::from_scalars(Z5, {{1}, {2}});
    CHECK(check_condition_11(single).holds); // n=1: vacuous

    CoeffSystem bad = CoeffSystem::from_scalars(Group({4}), {{2, 1}, {1, 1}});
    CHECK_THROWS_AS(check_condition_11(bad), error); // 2 is not mono on Z_4
}

TEST_CASE("condition 12") {
    Group Z5({5});
    CHECK(check_condition_12(CoeffSystem::from_scalars(Z5, {{1, 1}, {1, 2}})).holds);

    Group Z3({3});
    CHECK(!check_condition_12(CoeffSystem::from_scalars(Z3, {{1, 1}, {1, 1}})).holds);

    Group Z2({2});
    ConditionResult r = check_condition_12(CoeffSystem::from_scalars(Z2, {{1, 1}, {1, 1}}));
    CHECK(!r.holds);
    CHECK(*r.witness == Elem{1}); // Ker(0) = Z_2

    CHECK_THROWS_AS(check_condition_12(CoeffSystem::from_scalars(Group({4}), {{2, 1}, {1, 1}})),
                    error);
}

TEST_CASE("conditions 11 and 12 agree on automorphism systems") {
    auto g = testutil::rng(2718);
    int done = 0;
    while (done < 500) {
        Group X(testutil::random_moduli(g, 36, 2));
        std::size_t m = static_cast<std::size_t>(testutil::rand_range(g, 2, 3));
        std::size_t n = static_cast<std::size_t>(testutil::rand_range(g, 2, 3));
        std::vector<std::vector<Hom>> alphas;
        bool all_auto = true;
        for (std::size_t j = 0; j < m && all_auto; ++j) {
            std::vector<Hom> row;
            for (std::size_t i = 0; i < n; ++i) {
                Hom f = testutil::random_endo(g, X);
                if (!classify(f).is_auto) {
                    all_auto = false;
                    break;
                }
                row.push_back(std::move(f));
            }
            if (all_auto) alphas.push_back(std::move(row));
        }
        if (!all_auto) continue;
        CoeffSystem cs(X, m, n, std::move(alphas));
        CHECK(check_condition_11(cs).holds == check_condition_12(cs).holds);
        ++done;
    }
}

TEST_CASE("collinearity reduction") {
    using RV = std::vector<Rat>;
    auto red = collinearity_reduction({RV{1, 1}, RV{2, 2}, RV{1, 2}});
    CHECK(red.classes.size() == 2);
    CHECK(red.classes[0] == std::vector<std::size_t>{0, 1});
    CHECK(red.classes[1] == std::vector<std::size_t>{2});
    CHECK(red.scalars[1] == Rat(2));

    auto same = collinearity_reduction({RV{3, 1}, RV{3, 1}, RV{3, 1}});
    CHECK(same.classes.size() == 1);
    for (const Rat& c : same.scalars) CHECK(c == Rat(1));

    auto mixed = collinearity_reduction({RV{1, 2}, RV{2, 1}, RV{3, 6}, RV{-1, -2}});
    CHECK(mixed.classes.size() == 2);
    CHECK(mixed.classes[0] == std::vector<std::size_t>{0, 2, 3});
    CHECK(mixed.scalars[2] == Rat(3));
    CHECK(mixed.scalars[3] == Rat(-1));
    // representatives pairwise non-collinear by construction
    CHECK(mixed.representatives == std::vector<std::size_t>{0, 1});

    CHECK_THROWS_AS(collinearity_reduction({RV{0, 0}}), error);
    CHECK(collinearity_reduction({RV{Rat(1, 2), Rat(1, 3)}, RV{Rat(3, 2), Rat(1)}}).classes.size() ==
          1);
}
