#include <doctest.h>

#include <random>

#include "sosh/polytope.hpp"

using namespace sosh;

TEST_CASE("barycentric coordinates") {
    SimplexPolytope tri({{4, 2}, {2, 4}});
    auto b = barycentric(tri, MultiIndex{2, 2});
    CHECK(b.lambda == RVector{Rational(1, 3), Rational(1, 3), Rational(1, 3)});
    SimplexPolytope tet({{4, 6, 2}, {2, 6, 2}, {0, 0, 4}});
    CHECK(barycentric(tet, MultiIndex{2, 4, 2}).lambda ==
          RVector{Rational(1, 3), Rational(1, 3), Rational(1, 6), Rational(1, 6)});
    CHECK(barycentric(tri, MultiIndex{4, 2}).lambda == RVector{1, 0, 0});
    CHECK(tri.detQ() == 12);
    CHECK_THROWS(SimplexPolytope({{1, 2}, {2, 4}}));
}

TEST_CASE("classification") {
    CHECK(classify(SimplexPolytope({{6, 2}, {2, 4}}), MultiIndex{2, 2}) == Location::Interior);
    SimplexPolytope tri({{4, 2}, {2, 4}});
    CHECK(classify(tri, MultiIndex{4, 2}) == Location::Boundary);
    CHECK(classify(tri, MultiIndex{5, 5}) == Location::Exterior);
    CHECK(barycentric(tri, MultiIndex{5, 5}).lambda[0] == Rational(5, 6));
}

TEST_CASE("interior round trip") {
    std::mt19937_64 rng(4);
    SimplexPolytope tet({{4, 1, 0}, {0, 3, 1}, {1, 1, 5}});
    for (int t = 0; t < 200; ++t) {
        RVector lam(3);
        Rational s = 0;
        for (auto& l : lam) {
            l = ratio(1 + static_cast<long>(rng() % 20), 80);
            s += l;
        }
        REQUIRE(s < 1);
        RVector r(3, 0);
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) r[i] += lam[j] * tet.q()[j][i];
        CHECK(classify(tet, r) == Location::Interior);
        auto b = barycentric(tet, r);
        for (int j = 0; j < 3; ++j) CHECK(b.lambda[j] == lam[j]);
    }
}

TEST_CASE("general membership") {
    GeneralPolytope half(2, {{0, 0}, {2, 1}, {1, 2}});
    CHECK(member_general(half, MultiIndex{1, 1}));
    CHECK_FALSE(member_general(half, MultiIndex{0, 1}));
    for (const auto& g : half.generators()) CHECK(member_general(half, g));
    CHECK(member_general(half, RVector{Rational(3, 2), Rational(3, 2)}));
    CHECK_FALSE(member_general(half, RVector{Rational(3, 2), Rational(8, 5)}));
}

TEST_CASE("general membership agrees with simplex classification") {
    std::mt19937_64 rng(9);
    SimplexPolytope s({{6, 1}, {2, 5}});
    GeneralPolytope g(2, {{0, 0}, {6, 1}, {2, 5}});
    for (int t = 0; t < 500; ++t) {
        RVector r{ratio(static_cast<long>(rng() % 40) - 4, 5), ratio(static_cast<long>(rng() % 40) - 4, 5)};
        CHECK(member_general(g, r) == (classify(s, r) != Location::Exterior));
    }
}

TEST_CASE("membership with redundant and coplanar generators") {
    GeneralPolytope sq(2, {{0, 0}, {2, 0}, {0, 2}, {2, 2}, {1, 1}, {1, 0}});
    CHECK(member_general(sq, MultiIndex{1, 2}));
    CHECK(member_general(sq, RVector{Rational(19, 10), Rational(19, 10)}));
    CHECK_FALSE(member_general(sq, MultiIndex{3, 0}));
    GeneralPolytope seg(3, {{0, 0, 0}, {2, 2, 2}});
    CHECK(member_general(seg, MultiIndex{1, 1, 1}));
    CHECK_FALSE(member_general(seg, MultiIndex{1, 1, 0}));
}

TEST_CASE("lattice points") {
    CHECK(lattice_points(GeneralPolytope(2, {{0, 0}, {2, 1}, {1, 2}})) ==
          std::vector<MultiIndex>{{0, 0}, {1, 1}, {1, 2}, {2, 1}});
    CHECK(lattice_points(GeneralPolytope(2, {{3, 1}})) == std::vector<MultiIndex>{{3, 1}});
    CHECK(lattice_points(GeneralPolytope(2, {{0, 0}, {3, 1}, {1, 2}})) ==
          std::vector<MultiIndex>{{0, 0}, {1, 1}, {1, 2}, {2, 1}, {3, 1}});
    auto motz = GeneralPolytope(2, {{0, 0}, {4, 2}, {2, 4}, {2, 2}});
    auto pts = lattice_points(motz);
    for (const auto& p : pts) CHECK(motz.contains(p));
    CHECK(half_lattice_points(motz) == std::vector<MultiIndex>{{0, 0}, {1, 1}, {1, 2}, {2, 1}});
}

TEST_CASE("distinct pair witness") {
    GeneralPolytope motz(2, {{0, 0}, {4, 2}, {2, 4}, {2, 2}});
    CHECK_FALSE(distinct_pair_witness(motz, {2, 2}).has_value());
    CHECK_FALSE(distinct_pair_witness(GeneralPolytope(2, {{0, 0}, {6, 2}, {2, 4}}), {2, 2}).has_value());
    auto w = distinct_pair_witness(GeneralPolytope(2, {{0, 0}, {4, 0}, {0, 4}}), {1, 1});
    REQUIRE(w.has_value());
    CHECK(add(w->first, w->second) == MultiIndex{1, 1});
    CHECK(w->first != w->second);
}
