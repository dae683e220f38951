#include <doctest.h>

#include <cmath>
#include <random>

#include "sosh/fixtures.hpp"
#include "sosh/holderlab.hpp"

using namespace sosh;

namespace {

// index of the grid point nearest x (1d)
int at(const SampledFunction& f, double x) { return static_cast<int>(std::lround((x - f.origin(0)) / f.h)); }

SampledFunction random_smooth(std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> u(-1, 1);
    double a[4], w[4];
    for (int q = 0; q < 4; ++q) {
        a[q] = u(rng);
        w[q] = 1 + 4 * std::abs(u(rng));
    }
    return sample_1d(
        [&](double x) {
            double s = 0;
            for (int q = 0; q < 4; ++q) s += a[q] * std::sin(w[q] * x + q);
            return s;
        },
        0, 1, count);
}

}  // namespace

TEST_CASE("seminorm of the square root fixture") {
    auto f = make_fixture("power", 0.5);
    CHECK(f.nx() == 4001);
    auto e = estimate_seminorm(f, 0.5);
    CHECK(e.estimate == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("cantor fixture and constants") {
    auto c = make_fixture("cantor");
    CHECK(estimate_seminorm(c, std::log(2.0) / std::log(3.0)).estimate <= 1.02);
    auto k = make_fixture("constant", 3.5);
    CHECK(estimate_seminorm(k, 0.5).estimate == 0.0);
    CHECK(estimate_seminorm(k, 1.0, {1, 0}).estimate == 0.0);
}

TEST_CASE("window below the spacing is rejected") {
    auto f = make_fixture("square");
    CHECK_THROWS_WITH(estimate_seminorm(f, 1.0, 0.5 * f.h), "seminorm: window smaller than one grid step");
}

TEST_CASE("seminorm monotone in the window, shift invariant, homogeneous") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 5; ++t) {
        auto f = random_smooth(rng, 801);
        double prev = 0;
        for (double w : {2.0, 5.0, 20.0, 100.0, 1000.0}) {
            double e = estimate_seminorm(f, 0.7, w * f.h).estimate;
            CHECK(e >= prev);
            prev = e;
        }
        CHECK(estimate_seminorm(f, 0.7, kFullWindow).estimate >= prev);
        double base = estimate_seminorm(f, 0.7).estimate;
        auto g = f;
        g.values += 3.25;
        CHECK(estimate_seminorm(g, 0.7).estimate == doctest::Approx(base).epsilon(1e-12));
        g = f;
        g.values *= -2.5;
        CHECK(estimate_seminorm(g, 0.7).estimate == doctest::Approx(2.5 * base).epsilon(1e-12));
    }
}

TEST_CASE("pointwise variant sits below the global value") {
    auto f = make_fixture("power", 0.5);
    auto e = estimate_seminorm(f, 0.5, kFullWindow, true);
    REQUIRE(e.pointwise.size() == f.values.size());
    CHECK(e.pointwise.maxCoeff() <= e.estimate + 1e-12);
    // away from the cusp |x|^{1/2} is smooth, so the small-window quotient is small
    CHECK(e.pointwise(at(f, 0.8), 0) < 0.1);
    CHECK(e.pointwise(at(f, 0.0), 0) > 0.5);
}

TEST_CASE("fornberg weights") {
    Eigen::VectorXd nodes(3);
    nodes << -1, 0, 1;
    auto w = fornberg_weights(2, nodes);
    CHECK(w(0) == doctest::Approx(1));
    CHECK(w(1) == doctest::Approx(-2));
    CHECK(w(2) == doctest::Approx(1));
    Eigen::VectorXd five(5);
    five << -2, -1, 0, 1, 2;
    auto d1 = fornberg_weights(1, five);
    CHECK(d1(0) == doctest::Approx(1.0 / 12));
    CHECK(d1(1) == doctest::Approx(-8.0 / 12));
    CHECK(d1(3) == doctest::Approx(8.0 / 12));
    // polynomials of degree < nodes are differentiated exactly
    double acc = 0;
    for (int q = 0; q < 5; ++q) acc += d1(q) * std::pow(five(q), 3);
    CHECK(acc == doctest::Approx(0));
}

TEST_CASE("derivatives need grid margin") {
    auto f = sample_1d([](double x) { return x * x; }, 0, 1, 4);
    CHECK_THROWS_WITH(derivative(f, 3), "derivative: insufficient grid margin");
    auto g = sample_1d([](double x) { return x * x * x; }, -1, 1, 201);
    auto d = derivative(g, 2);
    int i = at(g, 0.3);
    CHECK(d.valid(i, 0));
    CHECK(d.values(i, 0) == doctest::Approx(1.8).epsilon(1e-8));
    CHECK_FALSE(d.valid(0, 0));
}

TEST_CASE("control field values") {
    auto q = sample_1d([](double x) { return std::pow(x, 4); }, -2, 2, 4001);
    auto r = control_field(q, 3, 1.0);
    CHECK(r.r(at(q, 1.0), 0) == doctest::Approx(std::sqrt(12.0)).epsilon(0.01));
    auto s = make_fixture("square");
    auto r2 = control_field(s, 2, 1.0);
    CHECK(r2.r(at(s, 0.0), 0) == doctest::Approx(2.0).epsilon(1e-6));
    auto z = sample_1d([](double) { return 0.0; }, -1, 1, 101);
    CHECK(control_field(z, 2, 1.0).r.maxCoeff() == 0.0);
    CHECK((control_field(q, 3, 1.0).r >= 0).all());
}

TEST_CASE("control field reflection and translation") {
    auto f = sample_1d([](double x) { return std::exp(x) + x * x; }, -1, 1, 801);
    auto g = sample_1d([](double x) { return std::exp(-x) + x * x; }, -1, 1, 801);
    auto rf = control_field(f, 3, 0.5), rg = control_field(g, 3, 0.5);
    for (int i = 0; i < f.nx(); ++i) CHECK(rf.r(i, 0) == doctest::Approx(rg.r(f.nx() - 1 - i, 0)).epsilon(1e-9));
    auto t = f;
    t.origin(0) += 10;
    auto rt = control_field(t, 3, 0.5);
    CHECK((rt.r - rf.r).abs().maxCoeff() == 0.0);
}

TEST_CASE("2d control field of a paraboloid") {
    auto p = make_fixture("paraboloid");
    auto r = control_field(p, 2, 1.0);
    // second directional derivative is 2 in every direction
    CHECK(r.r(100, 100) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(r.r(150, 60) >= 2.0 - 1e-6);
}

TEST_CASE("slow variation") {
    auto one = sample_1d([](double) { return 1.0; }, 0, 1, 201);
    auto r1 = control_field(one, 2, 1.0);
    for (double nu : {0.01, 1.0, 100.0}) CHECK(check_slow_variation(r1, nu).ok);
    auto sq = sample_1d([](double x) { return x * x; }, -10, 10, 2001);
    auto r2 = control_field(sq, 2, 1.0);
    auto lo = check_slow_variation(r2, 0.2);
    CHECK(lo.ok);
    CHECK(lo.worst <= 0.25);
    auto hi = check_slow_variation(r2, 10);
    CHECK_FALSE(hi.ok);
    CHECK(hi.worst > 0.25);
}

TEST_CASE("malgrange checker") {
    CHECK(malgrange_constant(1.0) == doctest::Approx(2.0));
    auto s = make_fixture("square");
    auto m = check_malgrange(s, 1.0);
    CHECK(m.ok);
    CHECK(m.value <= 1 / std::sqrt(2.0) + 1e-6);
    auto c = make_fixture("constant", 2.0);
    CHECK(check_malgrange(c, 0.5).value == 0.0);
    auto bony = make_fixture("bony");
    for (double a : {0.5, 1.0}) {
        auto r = check_malgrange(bony, a);
        CHECK(r.value <= 1.05);
        CHECK(r.ok);
    }
    auto neg = sample_1d([](double x) { return x; }, -1, 1, 101);
    CHECK_THROWS_WITH(check_malgrange(neg, 1.0), "not non-negative");
}

TEST_CASE("malgrange on every non-negative C1a fixture") {
    for (const auto& info : fixture_catalog()) {
        if (!info.c1alpha) continue;
        auto f = make_fixture(info.name);
        for (double a : {0.5, 1.0}) {
            INFO(info.name << " alpha=" << a);
            CHECK(check_malgrange(f, a).value <= 1.05);
        }
    }
}

TEST_CASE("derivative control") {
    auto metric = [](int count) {
        auto f = sample_1d([](double x) { return x * x; }, -2, 2, count);
        return check_derivative_control(f, 2, 1.0, 1).value;
    };
    double v = metric(2001);
    CHECK(std::isfinite(v));
    CHECK(v <= 2.0);
    CHECK(refinement_study(metric, 2001).stable);
    auto z = sample_1d([](double) { return 0.0; }, -1, 1, 201);
    CHECK(check_derivative_control(z, 2, 1.0, 1).value == 0.0);
    auto bony = [](int count) {
        auto f = make_fixture("bony", std::nullopt, count);
        return check_derivative_control(f, 3, 1.0, 1).value;
    };
    auto st = refinement_study(bony, 6001);
    CHECK(std::isfinite(st.coarse));
    CHECK(st.stable);
}

TEST_CASE("interpolation inequality") {
    auto f = make_fixture("power", 0.9);
    CHECK(check_interpolation(f, 0.3, 0.6, 0.9).ok);
    auto c = make_fixture("constant");
    auto rc = check_interpolation(c, 0.2, 0.5, 1.0);
    CHECK(rc.ok);
    CHECK(rc.value == 0.0);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10; ++t) CHECK(check_interpolation(random_smooth(rng, 401), 0.25, 0.5, 1.0).ok);
}

TEST_CASE("sub-product property") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        auto f = random_smooth(rng, 401), g = random_smooth(rng, 401);
        auto fg = f;
        fg.values = f.values * g.values;
        double a = 0.6;
        double lhs = estimate_seminorm(fg, a).estimate;
        double rhs = estimate_seminorm(f, a).estimate * g.values.abs().maxCoeff() +
                     f.values.abs().maxCoeff() * estimate_seminorm(g, a).estimate;
        CHECK(lhs <= 1.02 * rhs);
    }
}

TEST_CASE("induc hypotheses") {
    auto metric = [](int count) {
        auto f = sample_1d([](double x) { return std::pow(x, 8); }, -1, 1, count);
        return check_induc(f, 4, 1.0, 0.5).value;
    };
    auto p = sample_1d([](double x) { return std::pow(x, 8); }, -1, 1, 2001);
    auto rp = check_induc(p, 4, 1.0, 0.5);
    CHECK(rp.ok);
    CHECK(rp.constants.size() == 2);
    CHECK(refinement_study(metric, 2001).stable);
    auto sq = sample_1d([](double x) { return x * x; }, -1, 1, 2001);
    CHECK_FALSE(check_induc(sq, 4, 1.0, 0.5).ok);
    auto one = sample_1d([](double) { return 1.0; }, -1, 1, 201);
    auto r1 = check_induc(one, 4, 1.0, 0.5);
    for (double c : r1.constants) CHECK(c == 0.0);
    CHECK_THROWS(check_induc(one, 3, 1.0, 0.5));
    CHECK_THROWS(check_induc(one, 4, 1.0, 0.7));
}

TEST_CASE("sampled function json") {
    auto f = make_fixture("bony", std::nullopt, 101);
    auto g = sampled_from_json(to_json(f));
    CHECK(g.n == 1);
    CHECK(g.h == f.h);
    CHECK((g.values - f.values).abs().maxCoeff() == 0.0);
    auto p = make_fixture("paraboloid", std::nullopt, 21);
    auto q = sampled_from_json(to_json(p));
    CHECK(q.n == 2);
    CHECK(q.nx() == 21);
    CHECK((q.values - p.values).abs().maxCoeff() == 0.0);
    CHECK_THROWS(sampled_from_json(R"({"n":1,"origin":[0],"spacing":0,"shape":[2],"values":[1,2]})"));
    CHECK_THROWS(sampled_from_json(R"({"n":1,"origin":[0],"spacing":1,"shape":[3],"values":[1,2]})"));
    CHECK_THROWS(sampled_from_json("{"));
}
