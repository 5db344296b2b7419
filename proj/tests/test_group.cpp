#include <doctest.h>

#include <algorithm>
#include <set>

#include "charlab/group.hpp"
#include "test_util.hpp"

using namespace charlab;

namespace {

// enumeration oracle for subgroup set operations
std::set<Elem> element_set(const Subgroup& S) {
    auto v = S.elements();
    return std::set<Elem>(v.begin(), v.end());
}

} // namespace

TEST_CASE("make_group basics") {
    CHECK(Group({5}).order() == 5);
    CHECK(Group({2, 4}).order() == 8);
    CHECK(Group({1}).order() == 1);
    CHECK_THROWS_AS(Group({0}), error);
    CHECK_THROWS_AS(Group({3, -2}), error);
    // moduli are not canonicalized: Z_2 x Z_4 and Z_8 stay distinct
    CHECK(Group({2, 4}) != Group({8}));
    CHECK(canonical_moduli(Group({2, 4})) == Vec{2, 4});
    CHECK(canonical_moduli(Group({8})) == Vec{8});
    CHECK(canonical_moduli(Group({2, 3})) == canonical_moduli(Group({6})));
    CHECK(canonical_moduli(Group({1, 1})) == Vec{1});
}

TEST_CASE("group literal round trip") {
    Group X = Group::parse("z2Xz4");
    CHECK(X.moduli() == Vec{2, 4});
    CHECK(X.literal() == "Z2xZ4");
    CHECK(Group::parse("12").order() == 12);
    CHECK_THROWS_AS(Group::parse("Zx"), error);
    CHECK_THROWS_AS(Group::parse("Z2+Z4"), error);
}

TEST_CASE("element indexing is lexicographic") {
    Group X({2, 3});
    CHECK(X.index_of({0, 0}) == 0);
    CHECK(X.index_of({0, 2}) == 2);
    CHECK(X.index_of({1, 0}) == 3);
    for (i64 i = 0; i < X.order(); ++i) CHECK(X.index_of(X.element_at(i)) == i);
}

TEST_CASE("pairing values") {
    Group Z5({5});
    CHECK(std::abs(pairing(Z5, {1}, {1}) - std::polar(1.0, 2 * std::numbers::pi / 5)) < 1e-12);
    CHECK(std::abs(pairing(Z5, {0}, {3}) - cplx(1.0, 0.0)) < 1e-12);
    Group X({2, 4});
    CHECK(std::abs(pairing(X, {1, 2}, {1, 1}) - cplx(1.0, 0.0)) < 1e-12);
    CHECK_THROWS_AS(pairing(Z5, Group({4}), {1}, {1}), error);
}

TEST_CASE("pairing is bilinear and unit modulus") {
    auto g = testutil::rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        Group X(testutil::random_moduli(g, 512));
        Elem x = X.element_at(testutil::rand_range(g, 0, X.order() - 1));
        Elem xp = X.element_at(testutil::rand_range(g, 0, X.order() - 1));
        Elem y = X.element_at(testutil::rand_range(g, 0, X.order() - 1));
        CHECK(std::abs(pairing(X, X.add(x, xp), y) - pairing(X, x, y) * pairing(X, xp, y)) <
              1e-12);
        CHECK(std::abs(std::abs(pairing(X, x, y)) - 1.0) < 1e-12);
    }
}

TEST_CASE("subgroup from generators") {
    Group Z4({4});
    Subgroup S = subgroup_from_generators(Z4, {{2}});
    CHECK(S.order() == 2);
    CHECK(S.contains({0}));
    CHECK(S.contains({2}));
    CHECK(!S.contains({1}));

    CHECK(trivial_subgroup(Z4).order() == 1);

    Group X({2, 4});
    Subgroup T = subgroup_from_generators(X, {{1, 1}});
    CHECK(T.order() == 4);
    CHECK(element_set(T) == std::set<Elem>{{0, 0}, {0, 2}, {1, 1}, {1, 3}});

    CHECK_THROWS_AS(subgroup_from_generators(Z4, {{1, 0}}), error);
}

TEST_CASE("canonical form is unique and idempotent") {
    auto g = testutil::rng(555);
    for (int trial = 0; trial < 1000; ++trial) {
        Group X(testutil::random_moduli(g, 256));
        std::vector<Elem> gens;
        std::size_t k = static_cast<std::size_t>(testutil::rand_range(g, 0, 3));
        for (std::size_t i = 0; i < k; ++i)
            gens.push_back(X.element_at(testutil::rand_range(g, 0, X.order() - 1)));
        Subgroup S = subgroup_from_generators(X, gens);

        // permute and augment with elements already in the subgroup
        std::shuffle(gens.begin(), gens.end(), g);
        if (!gens.empty()) gens.push_back(X.add(gens[0], gens[gens.size() / 2]));
        gens.push_back(X.zero());
        Subgroup S2 = subgroup_from_generators(X, gens);
        CHECK(S.basis() == S2.basis());

        // re-canonicalizing the span is a fixed point
        Subgroup S3 = subgroup_from_generators(X, S.elements());
        CHECK(S.basis() == S3.basis());
        CHECK(X.order() % S.order() == 0); // Lagrange
    }
}

TEST_CASE("subgroup intersection") {
    Group Z4({4});
    Subgroup G = subgroup_from_generators(Z4, {{2}});
    CHECK(subgroup_intersect(G, full_subgroup(Z4)) == G);
    CHECK(subgroup_intersect(G, trivial_subgroup(Z4)).is_trivial());

    Group X({5, 5});
    Subgroup D1 = subgroup_from_generators(X, {{1, 1}});
    Subgroup D2 = subgroup_from_generators(X, {{1, 2}});
    CHECK(subgroup_intersect(D1, D2).is_trivial());

    CHECK_THROWS_AS(subgroup_intersect(G, full_subgroup(Group({8}))), error);
}

TEST_CASE("intersection agrees with enumeration") {
    auto g = testutil::rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        Group X(testutil::random_moduli(g, 4096));
        auto pick = [&] {
            std::vector<Elem> gens;
            std::size_t k = static_cast<std::size_t>(testutil::rand_range(g, 0, 2));
            for (std::size_t i = 0; i < k; ++i)
                gens.push_back(X.element_at(testutil::rand_range(g, 0, X.order() - 1)));
            return subgroup_from_generators(X, gens);
        };
        Subgroup G = pick(), H = pick();
        Subgroup I = subgroup_intersect(G, H);
        std::set<Elem> eg = element_set(G), eh = element_set(H), expect;
        std::set_intersection(eg.begin(), eg.end(), eh.begin(), eh.end(),
                              std::inserter(expect, expect.begin()));
        CHECK(element_set(I) == expect);
    }
}

TEST_CASE("annihilator examples") {
    Group Z4({4});
    Subgroup H = subgroup_from_generators(Z4, {{2}});
    Subgroup A = annihilator(Z4, H);
    CHECK(element_set(A) == std::set<Elem>{{0}, {2}});
    CHECK(annihilator(Z4, trivial_subgroup(Z4)).is_full());
    CHECK(annihilator(Z4, full_subgroup(Z4)).is_trivial());
    CHECK_THROWS_AS(annihilator(Z4, full_subgroup(Group({2, 2}))), error);
}

TEST_CASE("double annihilator and order identity, exhaustive small orders") {
    // every subgroup of every abelian group up to order 96 (the elementary
    // 2-groups carry thousands of subgroups each)
    for (const Vec& mods : abelian_group_catalog(96)) {
        Group X(mods);
        for (const Subgroup& H : enumerate_subgroups(X)) {
            Subgroup A = annihilator(X, H);
            CHECK(A.order() * H.order() == X.order());
            CHECK(annihilator(X, A) == H);
        }
    }
    // non-canonical moduli lists as well
    for (const Vec& mods : {Vec{2, 4, 3}, Vec{4, 2, 4, 2}, Vec{6, 6}, Vec{1, 5, 1}}) {
        Group X(mods);
        for (const Subgroup& H : enumerate_subgroups(X)) {
            Subgroup A = annihilator(X, H);
            CHECK(A.order() * H.order() == X.order());
            CHECK(annihilator(X, A) == H);
        }
    }
}

TEST_CASE("annihilator matches pairing definition") {
    auto g = testutil::rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        Group X(testutil::random_moduli(g, 128));
        Subgroup H = subgroup_from_generators(
            X, {X.element_at(testutil::rand_range(g, 0, X.order() - 1))});
        Subgroup A = annihilator(X, H);
        auto hs = H.elements();
        for (i64 i = 0; i < X.order(); ++i) {
            Elem x = X.element_at(i);
            bool in = true;
            for (const Elem& y : hs)
                if (std::abs(pairing(X, x, y) - cplx(1.0, 0.0)) > 1e-9) {
                    in = false;
                    break;
                }
            CHECK(in == A.contains(x));
        }
    }
}

TEST_CASE("abelian group catalog") {
    auto cat = abelian_group_catalog(16);
    CHECK(cat.size() == 25); // sum over n<=16 of #partitions-by-prime
    int count8 = 0;
    for (const Vec& mods : cat) {
        i64 order = 1;
        for (i64 d : mods) order *= d;
        if (order == 8) ++count8;
        for (std::size_t i = 0; i + 1 < mods.size(); ++i) CHECK(mods[i + 1] % mods[i] == 0);
    }
    CHECK(count8 == 3);
}
