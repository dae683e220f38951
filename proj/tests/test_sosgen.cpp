#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sosh/sosgen.hpp"

using namespace sosh;

static SparsePolynomial P(const std::string& s, int n) { return parse_polynomial(s, n); }

TEST_CASE("Motzkin certificate") {
    auto m = P("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1", 2);
    auto cert = certify_nonnegative(m);
    REQUIRE(cert.inequalities.size() == 1);
    const auto& q = cert.inequalities[0];
    CHECK(q.m == MultiIndex{2, 2});
    CHECK(q.magnitude == 3);
    CHECK(q.lambda0 == Rational(1, 3));
    for (const auto& l : q.lambda) CHECK(l == Rational(1, 3));
    CHECK(verify_certificate(m, cert).ok);
    CHECK((m - certificate_polynomial(cert)).is_zero());
    auto w = certify_not_sos(m);
    CHECK(w.m == MultiIndex{2, 2});
    CHECK(w.coeff == -3);
    CHECK(w.examined == std::vector<MultiIndex>{{0, 0}, {1, 1}, {1, 2}, {2, 1}});
}

TEST_CASE("Choi-Lam (3,4) and the (2,8) row") {
    auto cl = P("x^2*y^2 + y^2*z^2 + x^2*z^2 - 4*x*y*z + 1", 3);
    auto cert = certify_nonnegative(cl);
    CHECK(cert.inequalities[0].lambda0 == Rational(1, 4));
    CHECK(certify_not_sos(cl).m == MultiIndex{1, 1, 1});
    auto r28 = P("x^6*y^2 + 2*x^2*y^4 - 5*x^2*y^2 + 2", 2);
    CHECK_NOTHROW(certify_nonnegative(r28));
    CHECK_NOTHROW(certify_not_sos(r28));
}

TEST_CASE("certificate rejection") {
    auto bad = P("x^4*y^2 + x^2*y^4 - 4*x^2*y^2 + 1", 2);
    try {
        certify_nonnegative(bad);
        FAIL("expected a certificate error");
    } catch (const CertificateError& e) {
        CHECK(e.monomial == MultiIndex{2, 2});
    }
    auto m = P("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1", 2);
    auto cert = certify_nonnegative(m);
    cert.inequalities[0].lambda[0] += Rational(1, 100);
    CHECK_FALSE(verify_certificate(m, cert).ok);
    CHECK_THROWS_AS(certify_nonnegative(m, cert), CertificateError);
    CHECK_THROWS_AS(certify_nonnegative(P("x^3*y + x^4", 2)), CertificateError);
    // |x^3 y| <= 3/4 x^4 + 1/4 y^4
    auto odd = P("x^3*y + x^4 + y^4", 2);
    auto oc = certify_nonnegative(odd);
    CHECK(oc.inequalities[0].sigma == -1);
    CHECK(oc.inequalities[0].v == std::vector<MultiIndex>{{0, 4}, {4, 0}});
    CHECK(oc.inequalities[0].lambda == RVector{ratio(1, 4), ratio(3, 4)});
}

TEST_CASE("positive odd monomial covered with sigma -1") {
    auto p = P("x^2 + x + 1", 1);
    auto cert = certify_nonnegative(p);
    REQUIRE(cert.inequalities.size() == 1);
    CHECK(cert.inequalities[0].sigma == -1);
    CHECK(verify_certificate(p, cert).ok);
}

TEST_CASE("certificate json round trip") {
    auto m = P("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1", 2);
    auto cert = certify_nonnegative(m);
    auto back = certificate_from_json(to_json(cert));
    CHECK(to_json(back) == to_json(cert));
    CHECK(verify_certificate(m, back).ok);
    CHECK_THROWS(certificate_from_json("{\"nvars\":2}"));
}

TEST_CASE("not-SOS criterion is inconclusive on perfect squares") {
    CHECK_THROWS_AS(certify_not_sos(P("x^2 - 2*x + 1", 1)), InconclusiveError);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        int n = 1 + static_cast<int>(rng() % 3);
        auto g = oracle::random_poly(rng, n, 3, 4);
        if (g.is_zero()) continue;
        CHECK_THROWS_AS(certify_not_sos(g * g), InconclusiveError);
    }
}

TEST_CASE("generator instance matches the Motzkin construction") {
    auto inst = make_instance({{2, 1}, {1, 2}}, {2, 2});
    CHECK(inst.scale == 3);
    CHECK(inst.det_q == 3);
    CHECK(construct_candidate(inst) == P("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1", 2));
    CHECK(verify_certificate(construct_candidate(inst), generator_certificate(inst)).ok);
    auto z = make_instance({{2, 1}, {1, 2}}, {2, 2}, 1);
    auto pz = construct_candidate(z);
    CHECK(evaluate(pz, RVector{1, 1}) == 0);
    CHECK(verify_certificate(pz, generator_certificate(z)).ok);
    CHECK_THROWS(make_instance({{2, 1}, {1, 2}}, {4, 2}));
    CHECK_THROWS(make_instance({{2, 1}, {4, 2}}, {2, 2}));
}

TEST_CASE("Choi-Lam from half vertices (scale is the weight lcm)") {
    auto inst = make_instance({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}, {1, 1, 1});
    CHECK(inst.det_q == 2);
    CHECK(inst.scale == 4);
    CHECK(construct_candidate(inst) == P("x^2*y^2 + y^2*z^2 + x^2*z^2 - 4*x*y*z + 1", 3));
}

TEST_CASE("direct search") {
    SearchStats st;
    auto hits = direct_search(2, 6, 5000, 1, 0, 3, &st);
    REQUIRE_FALSE(hits.empty());
    for (const auto& h : hits) {
        auto p = construct_candidate(h);
        CHECK(degree(p) <= 6);
        CHECK(verify_certificate(p, generator_certificate(h)).ok);
        CHECK(certify_not_sos(p).m == h.m);
    }
    CHECK(direct_search(2, 4, 100000, 1, 0, 1, &st).empty());
    CHECK(st.exhaustive);
    CHECK_FALSE(direct_search(3, 4, 100000, 7).empty());
    CHECK_THROWS(direct_search(1, 6, 10, 1));
    CHECK_THROWS(direct_search(2, 5, 10, 1));
    auto a = direct_search(3, 6, 2000, 42, 1, 2), b = direct_search(3, 6, 2000, 42, 1, 2);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(construct_candidate(a[i]) == construct_candidate(b[i]));
        CHECK(evaluate(construct_candidate(a[i]), RVector(3, 1)) == 0);
    }
}

TEST_CASE("homogenization lift of Choi-Lam") {
    auto cl = P("x^2*y^2 + y^2*z^2 + x^2*z^2 - 4*x*y*z + 1", 3);
    auto lift = homogenize_lift(cl, certify_nonnegative(cl));
    CHECK(lift.lifted == P("x^2*y^2 + y^2*z^2 + x^2*z^2 - 4*x*y*z*w + w^4 + 1 + w^4 - 2*w^2", 4));
    CHECK(verify_certificate(lift.lifted, lift.cert).ok);
    CHECK(lift.restricted == fix_variable(lift.lifted, 3, 1));
    CHECK_NOTHROW(certify_not_sos(lift.lifted));
    CHECK_THROWS(homogenize_lift(P("x^2*y^2 - x*y", 2), AmgmCertificate{2, {}}));
}

TEST_CASE("degree lift") {
    // the (2,10) row lifted into three variables
    auto base = make_instance({{2, 3}, {1, 3}}, {2, 4});
    CHECK(construct_candidate(base) == P("x^4*y^6 + x^2*y^6 - 3*x^2*y^4 + 1", 2));
    auto up = degree_lift(base, {2, 2}, 2, 4);
    auto p = construct_candidate(up);
    CHECK(p == P("2*x^4*y^6*z^2 + 2*x^2*y^6*z^2 + z^4 - 6*x^2*y^4*z^2 + 1", 3));
    CHECK(verify_certificate(p, generator_certificate(up)).ok);
    CHECK_NOTHROW(certify_not_sos(p));
    CHECK_THROWS(degree_lift(base, {1, 2}, 2, 4));
}

TEST_CASE("negative point search") {
    auto bad = P("x^4*y^2 + x^2*y^4 - 4*x^2*y^2 + 1", 2);
    auto x = find_negative_point(bad);
    REQUIRE(x.has_value());
    CHECK(evaluate(bad, *x) < 0);
    CHECK_FALSE(find_negative_point(P("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1", 2)).has_value());
}

TEST_CASE("table subset") {
    auto rows = reproduce_table("2x6,3x4");
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) CHECK(r.status == RowStatus::Pass);
    CHECK(table_rows().size() == 26);
}

TEST_CASE("listed certificate for the (2,12) row") {
    auto p = P("2*x^8*y^4 + 13*y^8 - 16*x*y^7 + 1", 2);
    auto cert = certify_nonnegative(p);
    REQUIRE(cert.inequalities.size() == 1);
    const auto& q = cert.inequalities[0];
    CHECK(q.m == MultiIndex{1, 7});
    CHECK(q.magnitude == 16);
    CHECK(q.v == std::vector<MultiIndex>{{0, 8}, {8, 4}});
    CHECK(q.lambda == RVector{ratio(13, 16), ratio(1, 8)});
    CHECK(q.lambda0 == ratio(1, 16));
    // (1,7) = (0,4) + (1,3) inside half the hull
    CHECK_THROWS_AS(certify_not_sos(p), InconclusiveError);
}

TEST_CASE("exact semidefiniteness") {
    CHECK(is_psd({{1, 0}, {0, 0}}));
    CHECK(is_psd({{1, 1}, {1, 1}}));
    CHECK_FALSE(is_psd({{1, 2}, {2, 1}}));
    CHECK_FALSE(is_psd({{0, 1}, {1, 0}}));
    CHECK_FALSE(is_psd({{1, 0}, {1, 1}}));
    CHECK(is_psd({{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}));
    CHECK_FALSE(is_psd({{1, 1, 0}, {1, 1, 0}, {0, 0, -1}}));
}

TEST_CASE("Gram certificates") {
    SosGram g{1, {{0}, {1}}, {{1, -1}, {-1, 1}}};
    CHECK(verify_sos_gram(P("x^2 - 2*x + 1", 1), g).ok);
    CHECK_FALSE(verify_sos_gram(P("x^2 - 2*x + 2", 1), g).ok);
    SosGram bad{1, {{0}, {1}}, {{1, -2}, {-2, 4}}};
    CHECK(verify_sos_gram(P("4*x^2 - 4*x + 1", 1), bad).ok);
    bad.gram = {{1, -3}, {-3, 4}};
    CHECK_FALSE(verify_sos_gram(P("4*x^2 - 6*x + 1", 1), bad).ok);
    CHECK_FALSE(verify_sos_gram(P("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1", 2), *table_gram("2x12")).ok);
    for (const char* key : {"2x12", "2x20"}) {
        auto tg = table_gram(key);
        REQUIRE(tg.has_value());
        for (const auto& spec : table_rows())
            if (std::to_string(spec.n) + "x" + std::to_string(spec.d) == key)
                CHECK(verify_sos_gram(P(spec.printed, spec.n), *tg).ok);
    }
    CHECK_FALSE(table_gram("2x6").has_value());
}
