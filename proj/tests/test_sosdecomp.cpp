#include <doctest.h>

#include <cmath>
#include <cstring>

#include "sosh/fixtures.hpp"
#include "sosh/sosdecomp.hpp"

using namespace sosh;

namespace {

double reconstruction_error(const Decomposition& d, const SampledFunction& f) {
    Eigen::ArrayXXd s = d.residual;
    for (const auto& g : d.squares) s += g * g;
    double e = 0;
    for (int i = 0; i < f.nx(); ++i)
        for (int j = 0; j < f.ny(); ++j)
            if (d.region(i, j)) e = std::max(e, std::abs(s(i, j) - f.values(i, j)));
    return e;
}

CoverBall ball_at(double x, double radius) {
    CoverBall b;
    b.x = x;
    b.r = radius;
    b.radius = radius;
    return b;
}

SampledFunction bony_half(int count) { return make_fixture("bony", std::nullopt, count, std::make_pair(-0.5, 0.5)); }

}  // namespace

TEST_CASE("bump profile") {
    CHECK(bump(0) == 1.0);
    CHECK(bump(0.5) == 1.0);
    CHECK(bump(-0.5) == 1.0);
    CHECK(bump(1.0) == 0.0);
    CHECK(bump(1.5) == 0.0);
    CHECK(bump(0.75) > 0.0);
    CHECK(bump(0.75) < 1.0);
    double prev = 1;
    for (double t = 0.5; t <= 1.0; t += 0.01) {
        CHECK(bump(t) <= prev);
        prev = bump(t);
    }
}

TEST_CASE("empty cover for a vanishing control field") {
    auto z = sample_1d([](double) { return 0.0; }, -1, 1, 101);
    auto r = control_field(z, 2, 1.0);
    CHECK(build_cover(r, 0.25).empty());
    auto d = decompose(z, 2, 1.0);
    CHECK(d.balls == 0);
    CHECK(d.squares.empty());
}

TEST_CASE("cover of a constant") {
    auto one = make_fixture("constant", 1.0);
    auto r = control_field(one, 2, 1.0);
    CHECK((r.r - 1.0).abs().maxCoeff() < 1e-12);
    double nu = 0.25;
    auto cover = build_cover(r, nu);
    REQUIRE(cover.size() >= 2);
    CHECK(cover.front().x == one.x(0));
    for (std::size_t j = 1; j < cover.size(); ++j) {
        double gap = cover[j].x - cover[j - 1].x;
        CHECK(gap <= 0.5 * nu + 1e-12);
        CHECK(gap > 0);
    }
    // arithmetic sequence away from the right end
    for (std::size_t j = 2; j + 1 < cover.size(); ++j)
        CHECK(cover[j].x - cover[j - 1].x == doctest::Approx(cover[1].x - cover[0].x).epsilon(1e-9));
    auto pou = partition_functions(cover, r);
    CHECK((pou.sum_sq - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK(pou.identity_error <= 1e-12);
    CHECK(pou.max_overlap <= 15);
}

TEST_CASE("single ball plateau and two ball midpoint") {
    auto one = sample_1d([](double) { return 1.0; }, -1, 1, 201);
    auto r = control_field(one, 2, 1.0);
    std::vector<CoverBall> single{ball_at(0, 4)};
    single[0].i = 100;
    auto p1 = partition_functions(single, r);
    CHECK((p1.patches[0].psi - 1.0).abs().maxCoeff() == 0.0);
    std::vector<CoverBall> two{ball_at(-0.4, 1.2), ball_at(0.4, 1.2)};
    two[0].i = 60;
    two[1].i = 140;
    auto p2 = partition_functions(two, r);
    CHECK(p2.sum_sq(100, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p2.identity_error <= 1e-10);
}

TEST_CASE("coloring") {
    std::vector<CoverBall> disjoint{ball_at(0, 0.4), ball_at(1, 0.4), ball_at(2, 0.4), ball_at(5, 1)};
    auto c1 = color_classes(disjoint);
    for (int c : c1) CHECK(c == 0);
    std::vector<CoverBall> chain;
    for (int q = 0; q < 10; ++q) chain.push_back(ball_at(q, 0.6));
    auto c2 = color_classes(chain);
    CHECK(*std::max_element(c2.begin(), c2.end()) == 1);
    for (int q = 1; q < 10; ++q) CHECK(c2[q] != c2[q - 1]);
}

TEST_CASE("cover invariants on test functions") {
    for (const char* name : {"square", "bony", "smooth_bump", "constant"}) {
        auto f = make_fixture(name);
        // normalized as in the decomposition
        double lam = top_seminorm(f, 2, 1.0);
        if (lam > 0) f.values /= lam;
        auto r = control_field(f, 2, 1.0);
        // the cover geometry assumes slow variation
        double nu = 0.25;
        while (nu > 1e-6 && !check_slow_variation(r, nu).ok) nu /= 2;
        REQUIRE(check_slow_variation(r, nu).ok);
        auto cover = build_cover(r, nu);
        auto pou = partition_functions(cover, r);
        INFO(name);
        CHECK(pou.max_overlap <= 15);
        CHECK(pou.colors <= 15);
        CHECK(pou.identity_error <= 1e-10);
        int bad_color = 0, bad_eighth = 0, uncovered = 0;
        for (std::size_t a = 0; a < cover.size(); ++a) {
            CHECK(cover[a].r > 0);
            for (std::size_t b = a + 1; b < cover.size() && cover[b].x - cover[a].x < 2 * r.r.maxCoeff() * nu; ++b) {
                double dist = std::abs(cover[a].x - cover[b].x);
                if (pou.color[a] == pou.color[b] && dist < cover[a].radius + cover[b].radius) ++bad_color;
                // eighth radius dilates are disjoint
                if (dist < (cover[a].radius + cover[b].radius) / 8) ++bad_eighth;
            }
        }
        // half radius balls cover {r > 0}
        std::size_t next = 0;
        for (int i = 0; i < f.nx(); ++i) {
            if (!(r.r(i, 0) > 0)) continue;
            while (next + 1 < cover.size() && cover[next + 1].x <= f.x(i)) ++next;
            bool hit = false;
            for (std::size_t b = next >= 2 ? next - 2 : 0; b < std::min(cover.size(), next + 3); ++b)
                if (std::abs(f.x(i) - cover[b].x) <= 0.5 * cover[b].radius + 1e-12) hit = true;
            if (!hit) ++uncovered;
        }
        CHECK(bad_color == 0);
        CHECK(bad_eighth == 0);
        CHECK(uncovered == 0);
    }
}

TEST_CASE("exact square input") {
    auto f = make_fixture("square");
    for (int k : {2, 3}) {
        auto d = decompose(f, k, 1.0);
        CHECK(reconstruction_error(d, f) <= 1e-10);
        auto v = verify(d, f);
        CHECK(v.error <= 1e-10);
        CHECK(v.ok);
        CHECK(std::isfinite(v.g_constant));
        CHECK(std::isfinite(v.gprime_constant));
        CHECK(v.squares <= 30);
    }
}

TEST_CASE("constant input uses branch A only") {
    auto f = make_fixture("constant", 1.0);
    auto d = decompose(f, 2, 1.0);
    CHECK(d.stats.b == 0);
    CHECK(d.stats.a == d.balls);
    Eigen::ArrayXXd s = Eigen::ArrayXXd::Zero(f.nx(), 1);
    for (const auto& g : d.squares) s += g * g;
    CHECK((s - 1.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("bony decomposition") {
    auto f = bony_half(10001);
    for (int k : {2, 3}) {
        auto d = decompose(f, k, 1.0);
        auto v = verify(d, f);
        INFO("k=" << k);
        CHECK(v.error <= 1e-6);
        CHECK(v.squares <= 30);
        CHECK(d.max_overlap <= 15);
        CHECK(d.identity_error <= 1e-10);
        CHECK(d.stats.b > 0);
        CHECK(v.ok);
        for (const auto& g : d.squares) CHECK(g.allFinite());
    }
}

TEST_CASE("branch B consistency") {
    auto f = bony_half(10001);
    auto d = decompose(f, 3, 1.0);
    REQUIRE(!d.minima.empty());
    double h = f.h;
    for (const auto& m : d.minima) {
        // F_j <= f on the ball
        for (int i = 0; i < f.nx(); ++i)
            if (std::abs(f.x(i) - m.center) <= m.radius) CHECK(m.F <= f.values(i, 0) + 1e-12);
        // vanishing slope at X_j, measured against the local curvature scale
        double dq = h * 1e-2;
        double slope = (bony_value(m.X + dq) - bony_value(m.X - dq)) / (2 * dq);
        double curv = 0;
        for (double t = -h; t <= h; t += h / 4) {
            double x = m.X + t;
            curv = std::max(curv, std::abs(bony_value(x + h) - 2 * bony_value(x) + bony_value(x - h)) / (h * h));
        }
        CHECK(std::abs(slope) <= curv * h + 1e-12);
    }
}

TEST_CASE("half exponent bookkeeping") {
    auto f = make_fixture("square");
    auto v2 = verify(decompose(f, 2, 1.0), f);
    auto v3 = verify(decompose(f, 3, 1.0), f);
    CHECK(v2.gprime_exponent == 0.5);
    CHECK(v3.gprime_exponent == 1.0);
    CHECK(v3.gprime_exponent > v2.gprime_exponent);
}

TEST_CASE("partial decomposition") {
    auto one = make_fixture("constant", 1.0);
    auto d1 = partial_decompose(one, 2, 1.0, 1e-3);
    CHECK(d1.residual.abs().maxCoeff() == 0.0);
    auto sq = make_fixture("square");
    auto d2 = partial_decompose(sq, 2, 1.0, 1e-3);
    CHECK(d2.residual.maxCoeff() <= 1e-3);
    CHECK(d2.residual.minCoeff() >= 0);
    CHECK(reconstruction_error(d2, sq) <= 1e-8);
    auto bony = make_fixture("bony");
    auto d3 = partial_decompose(bony, 2, 1.0, 1e-4);
    CHECK(d3.residual.maxCoeff() <= 1e-4);
    CHECK(d3.residual.minCoeff() >= 0);
    CHECK(reconstruction_error(d3, bony) <= 1e-8);
    CHECK(d3.squares.size() <= 15);
    CHECK_THROWS(partial_decompose(bony, 2, 1.0, 0.0));
}

TEST_CASE("input errors") {
    auto neg = sample_1d([](double x) { return x; }, -1, 1, 101);
    CHECK_THROWS(decompose(neg, 2, 1.0));
    auto f = make_fixture("square");
    CHECK_THROWS(decompose(f, 4, 1.0));
    CHECK_THROWS(decompose(f, 2, 0.0));
}

TEST_CASE("determinism") {
    auto f = bony_half(4001);
    auto a = decompose(f, 2, 1.0), b = decompose(f, 2, 1.0);
    REQUIRE(a.squares.size() == b.squares.size());
    for (std::size_t j = 0; j < a.squares.size(); ++j)
        CHECK(std::memcmp(a.squares[j].data(), b.squares[j].data(), sizeof(double) * a.squares[j].size()) == 0);
    CHECK(to_json(a, verify(a, f)) == to_json(b, verify(b, f)));
}

TEST_CASE("2d paraboloid on a coarse grid") {
    auto f = make_fixture("paraboloid", std::nullopt, 101);
    auto d = decompose(f, 2, 1.0);
    auto v = verify(d, f, 1e-4);
    CHECK(v.error <= 1e-4);
    CHECK(d.max_overlap <= 225);
    CHECK(v.squares <= square_bound(2));
    CHECK(d.identity_error <= 1e-10);
}
