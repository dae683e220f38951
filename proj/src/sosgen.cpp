#include "sosh/sosgen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <json.hpp>

namespace sosh {

using json = nlohmann::ordered_json;

bool is_even(const MultiIndex& e) {
    return std::all_of(e.begin(), e.end(), [](int v) { return v % 2 == 0; });
}

SparsePolynomial certificate_polynomial(const AmgmCertificate& cert) {
    SparsePolynomial t(cert.nvars);
    for (const auto& q : cert.inequalities) {
        for (size_t j = 0; j < q.v.size(); ++j) t.add_term(q.v[j], q.magnitude * q.lambda[j]);
        t.add_term(MultiIndex(cert.nvars, 0), q.magnitude * q.lambda0);
        t.add_term(q.m, -q.magnitude * q.sigma);
    }
    return t;
}

CertificateCheck verify_certificate(const SparsePolynomial& p, const AmgmCertificate& cert) {
    CertificateCheck r;
    if (cert.nvars != p.nvars()) {
        r.reason = "certificate dimension differs from polynomial";
        return r;
    }
    for (const auto& q : cert.inequalities) {
        r.failing = q.m;
        if (q.sigma != 1 && q.sigma != -1) return r.reason = "sigma must be +1 or -1", r;
        if (q.magnitude < 0) return r.reason = "negative magnitude", r;
        if (q.v.size() != q.lambda.size()) return r.reason = "weights and support differ in length", r;
        if (q.lambda0 < 0) return r.reason = "negative constant weight", r;
        Rational total = q.lambda0;
        std::vector<Rational> acc(cert.nvars, 0);
        for (size_t j = 0; j < q.v.size(); ++j) {
            if (static_cast<int>(q.v[j].size()) != cert.nvars) return r.reason = "support point dimension", r;
            if (!is_even(q.v[j])) return r.reason = "support point is not even", r;
            if (q.lambda[j] < 0) return r.reason = "negative weight", r;
            total += q.lambda[j];
            for (int i = 0; i < cert.nvars; ++i) acc[i] += q.lambda[j] * q.v[j][i];
        }
        if (total != 1) return r.reason = "weights do not sum to one", r;
        for (int i = 0; i < cert.nvars; ++i)
            if (acc[i] != q.m[i]) return r.reason = "weighted support does not reproduce the monomial", r;
    }
    SparsePolynomial rest = sub(p, certificate_polynomial(cert));
    for (const auto& [e, c] : rest.terms()) {
        r.failing = e;
        if (!is_even(e)) return r.reason = "uncovered non-even monomial", r;
        if (c < 0) return r.reason = "coefficient over-committed or uncovered negative monomial", r;
    }
    r.failing.clear();
    r.ok = true;
    return r;
}

namespace {

// weights mu >= 0 on pts with sum mu = 1 and sum mu v = m, if the subset is a simplex
std::optional<RVector> affine_weights(const std::vector<MultiIndex>& pts, const MultiIndex& m) {
    int n = static_cast<int>(m.size());
    int k = static_cast<int>(pts.size());
    RMatrix a(n + 1, RVector(k));
    RVector b(n + 1);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < n; ++i) a[i][j] = pts[j][i];
        a[n][j] = 1;
    }
    for (int i = 0; i < n; ++i) b[i] = m[i];
    b[n] = 1;
    return solve(a, b);
}

AmgmInequality make_inequality(const MultiIndex& m, int sigma, const Rational& mag,
                               const std::vector<MultiIndex>& pts, const RVector& mu) {
    AmgmInequality q;
    q.m = m;
    q.sigma = sigma;
    q.magnitude = mag;
    q.lambda0 = 0;
    for (size_t j = 0; j < pts.size(); ++j) {
        if (mu[j] == 0) continue;
        if (is_zero(pts[j])) {
            q.lambda0 += mu[j];
        } else {
            q.v.push_back(pts[j]);
            q.lambda.push_back(mu[j]);
        }
    }
    return q;
}

bool discover_one(const MultiIndex& m, int sigma, const Rational& mag, std::map<MultiIndex, Rational>& budget,
                  AmgmInequality& out) {
    int n = static_cast<int>(m.size());
    std::vector<MultiIndex> pos;
    for (const auto& [v, c] : budget)
        if (c > 0) pos.push_back(v);
    // smallest simplices first
    std::vector<int> idx;
    bool found = false;
    std::function<void(size_t, size_t)> rec = [&](size_t from, size_t want) {
        if (found) return;
        if (idx.size() == want) {
            std::vector<MultiIndex> pts;
            for (int i : idx) pts.push_back(pos[i]);
            auto mu = affine_weights(pts, m);
            if (!mu) return;
            for (size_t j = 0; j < pts.size(); ++j)
                if ((*mu)[j] < 0 || mag * (*mu)[j] > budget[pts[j]]) return;
            for (size_t j = 0; j < pts.size(); ++j) budget[pts[j]] -= mag * (*mu)[j];
            out = make_inequality(m, sigma, mag, pts, *mu);
            found = true;
            return;
        }
        for (size_t i = from; i < pos.size() && !found; ++i) {
            idx.push_back(static_cast<int>(i));
            rec(i + 1, want);
            idx.pop_back();
        }
    };
    for (size_t want = 1; want <= static_cast<size_t>(n + 1) && !found; ++want) rec(0, want);
    if (found) return true;

    // weights proportional to the available coefficients
    Rational total = 0;
    for (const auto& v : pos) total += budget[v];
    if (total == 0 || mag > total) return false;
    std::vector<Rational> acc(n, 0);
    RVector mu;
    for (const auto& v : pos) {
        mu.push_back(budget[v] / total);
        for (int i = 0; i < n; ++i) acc[i] += mu.back() * v[i];
    }
    for (int i = 0; i < n; ++i)
        if (acc[i] != m[i]) return false;
    for (size_t j = 0; j < pos.size(); ++j) budget[pos[j]] -= mag * mu[j];
    out = make_inequality(m, sigma, mag, pos, mu);
    return true;
}

}  // namespace

AmgmCertificate certify_nonnegative(const SparsePolynomial& p, const std::optional<AmgmCertificate>& cert) {
    if (cert) {
        auto chk = verify_certificate(p, *cert);
        if (!chk.ok) throw CertificateError("certificate rejected: " + chk.reason, chk.failing);
        return *cert;
    }
    AmgmCertificate out;
    out.nvars = p.nvars();
    std::map<MultiIndex, Rational> budget;
    std::vector<std::pair<MultiIndex, Rational>> bad;
    for (const auto& [e, c] : p.terms()) {
        if (is_even(e) && c > 0) budget[e] = c;
        else bad.emplace_back(e, c);
    }
    for (const auto& [m, c] : bad) {
        AmgmInequality q;
        if (!discover_one(m, c < 0 ? 1 : -1, abs(c), budget, q))
            throw CertificateError("no valid certificate found for monomial " + to_string(m), m);
        out.inequalities.push_back(std::move(q));
    }
    auto chk = verify_certificate(p, out);
    if (!chk.ok) throw CertificateError("discovered certificate rejected: " + chk.reason, chk.failing);
    return out;
}

NotSosWitness certify_not_sos(const SparsePolynomial& p) {
    if (p.is_zero()) throw std::invalid_argument("certify_not_sos: zero polynomial");
    GeneralPolytope hull(p.nvars(), support(p));
    for (const auto& [m, c] : p.terms()) {
        if (c >= 0) continue;
        if (!distinct_pair_witness(hull, m)) return NotSosWitness{m, c, half_lattice_points(hull)};
    }
    throw InconclusiveError("criterion inconclusive");
}

GeneratorInstance make_instance(const std::vector<MultiIndex>& q, const MultiIndex& m, const Rational& c) {
    GeneratorInstance inst;
    inst.n = static_cast<int>(m.size());
    if (static_cast<int>(q.size()) != inst.n) throw std::invalid_argument("instance needs n half vertices");
    inst.q = q;
    inst.m = m;
    inst.c = c;
    if (c < 0) throw std::invalid_argument("single-zero coefficient must be non-negative");
    SimplexPolytope half(q);
    inst.det_q = abs(half.detQ());
    RVector p(inst.n);
    for (int i = 0; i < inst.n; ++i) p[i] = ratio(m[i], 2);
    auto b = barycentric(half, p);
    inst.lambda.assign(b.lambda.begin(), b.lambda.begin() + inst.n);
    inst.lambda0 = b.lambda[inst.n];
    for (const auto& l : b.lambda)
        if (l <= 0) throw std::invalid_argument("target is not strictly interior to the simplex");
    inst.scale = 1;
    for (const auto& l : b.lambda) mpz_lcm(inst.scale.get_mpz_t(), inst.scale.get_mpz_t(), l.get_den_mpz_t());
    return inst;
}

static MultiIndex doubled(const MultiIndex& q) {
    MultiIndex r = q;
    for (auto& v : r) v *= 2;
    return r;
}

SparsePolynomial construct_candidate(const GeneratorInstance& inst) {
    SparsePolynomial p(inst.n);
    Rational s(inst.scale);
    for (int j = 0; j < inst.n; ++j) p.add_term(doubled(inst.q[j]), s * inst.lambda[j]);
    p.add_term(MultiIndex(inst.n, 0), s * inst.lambda0);
    p.add_term(inst.m, -s);
    if (inst.c > 0) {
        for (int j = 0; j < inst.n; ++j) {
            p.add_term(doubled(inst.q[j]), inst.c);
            p.add_term(MultiIndex(inst.n, 0), inst.c);
            p.add_term(inst.q[j], -2 * inst.c);
        }
    }
    return p;
}

AmgmCertificate generator_certificate(const GeneratorInstance& inst) {
    AmgmCertificate cert;
    cert.nvars = inst.n;
    AmgmInequality main;
    main.m = inst.m;
    main.magnitude = Rational(inst.scale);
    for (int j = 0; j < inst.n; ++j) {
        main.v.push_back(doubled(inst.q[j]));
        main.lambda.push_back(inst.lambda[j]);
    }
    main.lambda0 = inst.lambda0;
    cert.inequalities.push_back(main);
    if (inst.c > 0) {
        for (int j = 0; j < inst.n; ++j) {
            AmgmInequality z;
            z.m = inst.q[j];
            z.magnitude = 2 * inst.c;
            z.v = {doubled(inst.q[j])};
            z.lambda = {Rational(1, 2)};
            z.lambda0 = Rational(1, 2);
            cert.inequalities.push_back(z);
        }
    }
    return cert;
}

namespace {

bool passes_both(const SparsePolynomial& p, const AmgmCertificate& cert, const MultiIndex& m) {
    if (!verify_certificate(p, cert).ok) return false;
    GeneralPolytope hull(p.nvars(), support(p));
    if (p.coeff(m) >= 0) return false;
    return !distinct_pair_witness(hull, m).has_value();
}

std::vector<MultiIndex> half_points(int n, int half_d) {
    std::vector<MultiIndex> out;
    MultiIndex box(n, half_d);
    for (const auto& q : indices_below(box)) {
        int o = order(q);
        if (o >= 1 && o <= half_d) out.push_back(q);
    }
    return out;
}

}  // namespace

std::vector<GeneratorInstance> direct_search(int n, int d, long long budget, std::uint64_t seed, const Rational& c,
                                             int max_hits, SearchStats* stats) {
    if (n < 2 || d < 4 || d % 2) throw std::invalid_argument("direct_search needs n >= 2 and even d >= 4");
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t k) { return static_cast<std::size_t>(rng() % k); };
    auto shuffle = [&](auto& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[pick(i)]);
    };
    auto hs = half_points(n, d / 2);
    // all n-subsets when few enough, otherwise random draws
    const long threshold = 20000;
    mpz_class combos;
    mpz_bin_uiui(combos.get_mpz_t(), hs.size(), n);
    bool exhaustive = combos <= threshold;
    std::vector<std::vector<int>> tuples;
    if (exhaustive) {
        std::vector<int> idx;
        std::function<void(int)> rec = [&](int from) {
            if (static_cast<int>(idx.size()) == n) {
                tuples.push_back(idx);
                return;
            }
            for (int i = from; i < static_cast<int>(hs.size()); ++i) {
                idx.push_back(i);
                rec(i + 1);
                idx.pop_back();
            }
        };
        rec(0);
        shuffle(tuples);
    }
    SearchStats st;
    st.exhaustive = exhaustive;
    std::vector<GeneratorInstance> hits;
    std::set<SparsePolynomial::TermMap> seen;
    std::size_t next = 0;
    while (st.examined < budget && static_cast<int>(hits.size()) < max_hits) {
        std::vector<int> idx;
        if (exhaustive) {
            if (next >= tuples.size()) break;
            idx = tuples[next++];
        } else {
            std::set<int> s;
            while (static_cast<int>(s.size()) < n) s.insert(static_cast<int>(pick(hs.size())));
            idx.assign(s.begin(), s.end());
        }
        ++st.tuples;
        std::vector<MultiIndex> q;
        bool top = false;
        for (int i : idx) {
            q.push_back(hs[i]);
            top = top || order(hs[i]) == d / 2;
        }
        if (!top) continue;
        std::optional<SimplexPolytope> simplex;
        try {
            simplex.emplace(q);
        } catch (const std::invalid_argument&) {
            continue;
        }
        MultiIndex hi(n, 0);
        for (const auto& v : q)
            for (int i = 0; i < n; ++i) hi[i] = std::max(hi[i], 2 * v[i]);
        std::vector<MultiIndex> targets;
        for (const auto& m : indices_below(hi)) {
            RVector p(n);
            for (int i = 0; i < n; ++i) p[i] = ratio(m[i], 2);
            if (classify(*simplex, p) == Location::Interior) targets.push_back(m);
        }
        shuffle(targets);
        for (const auto& m : targets) {
            if (st.examined >= budget || static_cast<int>(hits.size()) >= max_hits) break;
            ++st.examined;
            auto inst = make_instance(q, m, c);
            auto p = construct_candidate(inst);
            if (seen.count(p.terms())) continue;
            if (!passes_both(p, generator_certificate(inst), m)) continue;
            seen.insert(p.terms());
            hits.push_back(inst);
        }
    }
    if (stats) *stats = st;
    return hits;
}

LiftResult homogenize_lift(const SparsePolynomial& p, const AmgmCertificate& cert, const Rational& c) {
    int n = p.nvars();
    int d = degree(p);
    if (d < 0 || d % 2) throw std::invalid_argument("homogenize_lift needs even degree");
    if (p.coeff(MultiIndex(n, 0)) <= 0) throw std::invalid_argument("homogenize_lift needs a positive constant term");
    auto lift_point = [&](const MultiIndex& e) {
        MultiIndex f = e;
        f.push_back(d - order(e));
        return f;
    };
    LiftResult r;
    r.lifted = homogenize(p, d);
    r.cert.nvars = n + 1;
    MultiIndex top(n + 1, 0);
    top[n] = d;
    for (const auto& q : cert.inequalities) {
        AmgmInequality h;
        h.m = lift_point(q.m);
        h.sigma = q.sigma;
        h.magnitude = q.magnitude;
        for (size_t j = 0; j < q.v.size(); ++j) {
            h.v.push_back(lift_point(q.v[j]));
            h.lambda.push_back(q.lambda[j]);
        }
        if (q.lambda0 > 0) {
            h.v.push_back(top);
            h.lambda.push_back(q.lambda0);
        }
        h.lambda0 = 0;
        r.cert.inequalities.push_back(h);
    }
    if (c > 0) {
        MultiIndex half(n + 1, 0);
        half[n] = d / 2;
        r.lifted.add_term(top, c);
        r.lifted.add_term(MultiIndex(n + 1, 0), c);
        r.lifted.add_term(half, -2 * c);
        AmgmInequality z;
        z.m = half;
        z.magnitude = 2 * c;
        z.v = {top};
        z.lambda = {Rational(1, 2)};
        z.lambda0 = Rational(1, 2);
        r.cert.inequalities.push_back(z);
    }
    r.restricted = fix_variable(r.lifted, n, 1);
    return r;
}

GeneratorInstance degree_lift(const GeneratorInstance& inst, const std::vector<int>& r, int r0, int s) {
    int n = inst.n;
    if (static_cast<int>(r.size()) != n) throw std::invalid_argument("degree_lift needs one offset per vertex");
    for (int v : r)
        if (v < 0 || v % 2) throw std::invalid_argument("offsets must be non-negative even integers");
    if (s <= 0 || s % 2 || r0 < 0) throw std::invalid_argument("s must be a positive even integer");
    std::vector<MultiIndex> q;
    for (int j = 0; j < n; ++j) {
        MultiIndex v = inst.q[j];
        v.push_back(r[j] / 2);
        q.push_back(v);
    }
    MultiIndex top(n + 1, 0);
    top[n] = s / 2;
    q.push_back(top);
    MultiIndex m = inst.m;
    m.push_back(r0);
    try {
        return make_instance(q, m, inst.c);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("degree lift rejected, choose different offsets: ") + e.what());
    }
}

namespace {

// integer a with a.(m - v) > 0 for every v in pts, via the nearest point of conv(pts) to m
std::optional<std::vector<long>> separating_direction(const std::vector<MultiIndex>& pts, const MultiIndex& m) {
    int n = static_cast<int>(m.size());
    int k = static_cast<int>(pts.size());
    if (k == 0) return std::nullopt;
    std::vector<double> mu(k, 1.0 / k);
    auto point = [&](std::vector<double>& y) {
        y.assign(n, 0.0);
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < n; ++i) y[i] += mu[j] * pts[j][i];
    };
    double lip = 0;
    for (const auto& v : pts)
        for (int x : v) lip += double(x) * x;
    double step = 1.0 / std::max(1.0, lip);
    std::vector<double> y, g(k), u(k);
    for (int it = 0; it < 20000; ++it) {
        point(y);
        for (int j = 0; j < k; ++j) {
            g[j] = 0;
            for (int i = 0; i < n; ++i) g[j] += (y[i] - m[i]) * pts[j][i];
            u[j] = mu[j] - step * g[j];
        }
        // projection onto the simplex
        std::vector<double> srt = u;
        std::sort(srt.rbegin(), srt.rend());
        double acc = 0, theta = 0;
        for (int j = 0; j < k; ++j) {
            acc += srt[j];
            double th = (acc - 1) / (j + 1);
            if (srt[j] - th > 0) theta = th;
        }
        for (int j = 0; j < k; ++j) mu[j] = std::max(0.0, u[j] - theta);
    }
    point(y);
    std::vector<double> dir(n);
    double mx = 0;
    for (int i = 0; i < n; ++i) {
        dir[i] = m[i] - y[i];
        mx = std::max(mx, std::abs(dir[i]));
    }
    if (mx < 1e-12) return std::nullopt;
    for (long scale = 1; scale <= 4096; scale *= 2) {
        std::vector<long> a(n);
        for (int i = 0; i < n; ++i) a[i] = std::lround(scale * dir[i] / mx);
        bool ok = true;
        for (const auto& v : pts) {
            long dot = 0;
            for (int i = 0; i < n; ++i) dot += a[i] * (m[i] - v[i]);
            if (dot <= 0) ok = false;
        }
        if (ok) return a;
    }
    return std::nullopt;
}

}  // namespace

std::optional<RVector> find_negative_point(const SparsePolynomial& p) {
    int n = p.nvars();
    auto test = [&](const RVector& x) { return evaluate(p, x) < 0; };
    // a negative monomial outside the hull of the others dominates along x = t^a
    for (const auto& [m, c] : p.terms()) {
        if (c >= 0) continue;
        std::vector<MultiIndex> rest;
        for (const auto& [v, cv] : p.terms())
            if (v != m) rest.push_back(v);
        auto a = separating_direction(rest, m);
        if (!a) continue;
        for (long t : {2L, 3L, 10L, 100L, 10000L}) {
            RVector x(n);
            for (int i = 0; i < n; ++i) {
                mpz_class num;
                mpz_ui_pow_ui(num.get_mpz_t(), t, std::labs((*a)[i]));
                x[i] = (*a)[i] >= 0 ? Rational(num) : Rational(1) / Rational(num);
            }
            if (test(x)) return x;
        }
    }
    // monomial curves x_i = t^{a_i}
    const int ts[] = {2, 3, 10};
    MultiIndex box(n, 4);
    for (int t : ts)
        for (const auto& a : indices_below(box)) {
            RVector x(n);
            for (int i = 0; i < n; ++i) {
                int e = a[i] - 2;
                mpz_class num;
                mpz_ui_pow_ui(num.get_mpz_t(), t, std::abs(e));
                x[i] = e >= 0 ? Rational(num) : Rational(1) / Rational(num);
            }
            if (test(x)) return x;
        }
    // perturbations of the all-ones point
    MultiIndex dirs(n, 2);
    for (const Rational delta : {Rational(1, 10), Rational(1, 100), Rational(1, 1000)})
        for (const auto& e : indices_below(dirs)) {
            RVector x(n);
            for (int i = 0; i < n; ++i) x[i] = 1 + (e[i] - 1) * delta;
            if (test(x)) return x;
        }
    std::mt19937_64 rng(12345);
    for (int k = 0; k < 20000; ++k) {
        RVector x(n);
        for (int i = 0; i < n; ++i) x[i] = ratio(static_cast<long>(rng() % 4001) - 2000, 500);
        if (test(x)) return x;
    }
    return std::nullopt;
}

CertificateCheck verify_sos_gram(const SparsePolynomial& p, const SosGram& g) {
    CertificateCheck r;
    std::size_t k = g.basis.size();
    if (g.nvars != p.nvars()) return r.reason = "Gram certificate dimension differs from polynomial", r;
    if (g.gram.size() != k) return r.reason = "Gram matrix size differs from basis", r;
    for (const auto& row : g.gram)
        if (row.size() != k) return r.reason = "Gram matrix is not square", r;
    for (const auto& b : g.basis)
        if (static_cast<int>(b.size()) != g.nvars) return r.reason = "basis monomial dimension", r;
    SparsePolynomial s(g.nvars);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) s.add_term(add(g.basis[i], g.basis[j]), g.gram[i][j]);
    auto diff = sub(p, s);
    if (!diff.is_zero()) {
        r.failing = diff.terms().begin()->first;
        return r.reason = "Gram identity fails", r;
    }
    if (!is_psd(g.gram)) return r.reason = "Gram matrix is not positive semidefinite", r;
    r.ok = true;
    return r;
}

std::optional<SosGram> table_gram(const std::string& key) {
    static const json data = json::parse(
#include "table_gram.inc"
    );
    if (!data.contains(key)) return std::nullopt;
    const auto& e = data[key];
    SosGram g;
    for (const auto& b : e["basis"]) g.basis.push_back(b.get<MultiIndex>());
    g.nvars = g.basis.empty() ? 0 : static_cast<int>(g.basis[0].size());
    for (const auto& row : e["gram"]) {
        RVector v;
        for (const auto& c : row) {
            Rational q(c.get<std::string>());
            q.canonicalize();
            v.push_back(q);
        }
        g.gram.push_back(v);
    }
    return g;
}

const char* to_string(RowStatus s) {
    switch (s) {
        case RowStatus::Pass: return "pass";
        case RowStatus::SourceDefect: return "source_defect";
        default: return "fail";
    }
}

const std::vector<TableRowSpec>& table_rows() {
    static const std::vector<TableRowSpec> rows = {
        {2, 6, "x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1", "", ""},
        {2, 8, "x^6*y^2 + 2*x^2*y^4 - 5*x^2*y^2 + 2", "", ""},
        {2, 10, "x^4*y^6 + x^2*y^6 - 3*x^2*y^4 + 1", "", ""},
        {2, 12, "2*x^8*y^4 + 13*y^8 - 16*x*y^7 + 1", "", ""},
        {2, 14, "x^4*y^10 + x^2*y^2 - 3*x^2*y^4 + 1", "", ""},
        {2, 16, "x^6*y^10 + y^2 - 3*x^2*y^4 + 1", "", ""},
        {2, 18, "x^14*y^4 + x^4*y^2 - 3*x^6*y^2 + 1", "", ""},
        {2, 20, "3*x^10*y^10 + 20*y^6 - 30*x*y^5 + 7", "", ""},
        {3, 4, "x^2*y^2 + y^2*z^2 + x^2*z^2 - 4*x*y*z + 1", "", ""},
        {3, 6, "x^4*z^2 + 4*x^2*z^4 + 3*y^4*z^2 - 12*x*y*z^2 + 4", "", ""},
        {3, 8, "x^2*y^2*z^4 + x^2*y^4*z^2 + x^4*y^2*z^2 - 4*x^2*y^2*z^2 + 1", "", ""},
        {3, 10, "x^2*y^2*z^6 + x^4*y^2*z^2 + x^2*y^4 - 4*x^2*y^2*z^2 + 1", "", ""},
        {3, 12, "x^4*y^2*z^6 + x^4*y^4*z^2 + y^2 - 4*x^2*y^2*z^2 + 1", "", ""},
        {3, 14, "x^4*y^4*z^6 + x^6*y^2 + x^6*y^2*z^2 - 4*x^4*y^2*z^2 + 1", "", ""},
        {3, 16, "x^8*y^6*z^2 + y^2 + z^6 - 4*x^2*y^2*z^2 + 1", "", ""},
        {3, 18, "x^6*y^8*z^4 + z^6 + x^2*z^6 - 4*x^2*y^2*z^4 + 1", "", ""},
        {3, 20, "x^14*y^2*z^4 + x^2*z^2 + y^6*z^2 - 4*x^4*y^2*z^2 + 1", "", ""},
        {4, 4, "", "", "no row printed; homogenization lift of the (3,4) row"},
        {4, 6, "3*x^2*z^2*w^2 + y^2*z^4 + 2*y^2*w^2 + 2*x^2*y^2 - 10*w*x*y*z + 2", "", ""},
        {4, 8, "x^2*y^2*z^4 + y^4*z^4 + x^2*y^2*w^4 + 2*x^2*z^4*w^2 - 8*x*y*z^2*w + 3", "", ""},
        {4, 10, "x^6*y^2*z^2 + x^2*w^8 + y^8*w^2 + x^2*z^8 - 5*x^2*y^2*z^2*w^2 + 1", "", ""},
        {4, 12, "x^6*y^4*w^2 + x^6*y^4 + z^6*w^6 + y^4*z^4 + z^2*w^4 - 5*x^2*y^2*z^2*w^2 + 1", "", ""},
        {4, 14, "x^2*y^6*z^4*w^2 + x^4*z^4*w^4 + x^4*y^4*w^2 + z^2*w^2 - 5*x^2*y^2*z^2*w^2 + 1", "", ""},
        {4, 16, "x^8*z^4*w^4 + x^8*y^2*z^2 + x^4*y^6*x^2 + y^2*z^2*w^6 - 5*x^4*y^2*z^2*w^2 + 1",
         "x^8*z^4*w^4 + x^8*y^2*z^2 + x^4*y^6*z^2 + y^2*z^2*w^6 - 5*x^4*y^2*z^2*w^2 + 1",
         "printed factor x^4*y^6*x^2 read as x^4*y^6*z^2 (repeated variable)"},
        {4, 18, "x^8*y^4 + x^2*y^4*z^2*w^2 + x^4*z^8*w^6 + x^6*w^2 + x^4*y^4*z^4*w^2 - 6*x^4*y^2*z^2*w^2 + 1", "", ""},
        {4, 20, "x^10*y^6*w^2 + y^6*z^10 + y^6*z^6*w^8 + y^6*z^4 - x^2*y^4*z^4*w^2 + 1", "", ""},
    };
    return rows;
}

std::vector<TableRow> reproduce_table(const std::string& filter) {
    std::vector<TableRow> out;
    for (const auto& spec : table_rows()) {
        std::string key = std::to_string(spec.n) + "x" + std::to_string(spec.d);
        if (!filter.empty()) {
            bool hit = false;
            std::size_t b = 0;
            while (b <= filter.size()) {
                std::size_t e = filter.find(',', b);
                if (e == std::string::npos) e = filter.size();
                if (filter.substr(b, e - b) == key) hit = true;
                b = e + 1;
            }
            if (!hit) continue;
        }
        TableRow row;
        row.n = spec.n;
        row.d = spec.d;
        row.printed = spec.printed;
        row.note = spec.note;
        SparsePolynomial p;
        std::optional<AmgmCertificate> supplied;
        std::optional<SparsePolynomial> restricted;
        if (spec.printed.empty()) {
            auto base = parse_polynomial(table_rows()[8].printed, 3);
            auto lift = homogenize_lift(base, certify_nonnegative(base));
            p = lift.lifted;
            supplied = lift.cert;
            restricted = lift.restricted;
        } else {
            p = parse_polynomial(spec.used.empty() ? spec.printed : spec.used, spec.n);
        }
        row.used = to_string(p);
        try {
            row.cert = certify_nonnegative(p, supplied);
            row.nonneg = true;
        } catch (const CertificateError& e) {
            row.reason = e.what();
        }
        try {
            row.witness = certify_not_sos(p);
            row.not_sos = true;
            row.not_sos_method = "hull";
        } catch (const InconclusiveError&) {
            if (restricted) {
                try {
                    row.witness = certify_not_sos(*restricted);
                    row.not_sos = true;
                    row.not_sos_method = "dehomogenization";
                } catch (const InconclusiveError&) {
                }
            }
            if (!row.not_sos) row.reason += std::string(row.reason.empty() ? "" : "; ") + "criterion inconclusive";
        }
        if (row.nonneg && row.not_sos) {
            row.status = RowStatus::Pass;
        } else if (!row.nonneg) {
            row.negative_point = find_negative_point(p);
            if (row.negative_point) row.status = RowStatus::SourceDefect;
        } else if (auto g = table_gram(key); g && verify_sos_gram(p, *g).ok) {
            row.gram = g;
            row.status = RowStatus::SourceDefect;
            row.reason += "; listed polynomial is a sum of squares (exact Gram certificate)";
        }
        if (degree(p) != spec.d && row.status == RowStatus::Pass) {
            row.status = RowStatus::Fail;
            row.reason = "degree differs from the row";
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::string rational_string(const Rational& r) { return r.get_str(); }

namespace {

json frac(const Rational& r) { return {{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}}; }

Rational unfrac(const json& j) {
    if (!j.is_object() || !j.contains("num") || !j.contains("den") || !j["num"].is_string() || !j["den"].is_string())
        throw std::invalid_argument("certificate json: bad rational");
    mpz_class num, den;
    if (num.set_str(j["num"].get<std::string>(), 10) != 0 || den.set_str(j["den"].get<std::string>(), 10) != 0)
        throw std::invalid_argument("certificate json: bad decimal string");
    if (den <= 0) throw std::invalid_argument("certificate json: denominator must be positive");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

MultiIndex unindex(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("certificate json: exponent must be an array");
    MultiIndex e;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<int>() < 0) throw std::invalid_argument("certificate json: bad exponent");
        e.push_back(v.get<int>());
    }
    return e;
}

}  // namespace

std::string to_json(const AmgmCertificate& cert) {
    json j;
    j["nvars"] = cert.nvars;
    j["inequalities"] = json::array();
    for (const auto& q : cert.inequalities) {
        json s = json::array();
        for (size_t k = 0; k < q.v.size(); ++k) s.push_back({{"v", q.v[k]}, {"lambda", frac(q.lambda[k])}});
        j["inequalities"].push_back({{"m", q.m},
                                     {"sigma", q.sigma},
                                     {"magnitude", frac(q.magnitude)},
                                     {"support", s},
                                     {"lambda0", frac(q.lambda0)}});
    }
    return j.dump();
}

AmgmCertificate certificate_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("certificate json: malformed: ") + e.what());
    }
    if (!j.is_object() || !j.contains("nvars") || !j.contains("inequalities") || !j["nvars"].is_number_integer() ||
        !j["inequalities"].is_array())
        throw std::invalid_argument("certificate json: missing fields");
    AmgmCertificate c;
    c.nvars = j["nvars"].get<int>();
    for (const auto& q : j["inequalities"]) {
        if (!q.is_object() || !q.contains("m") || !q.contains("sigma") || !q.contains("magnitude") ||
            !q.contains("support") || !q.contains("lambda0") || !q["support"].is_array() ||
            !q["sigma"].is_number_integer())
            throw std::invalid_argument("certificate json: bad inequality");
        AmgmInequality a;
        a.m = unindex(q["m"]);
        a.sigma = q["sigma"].get<int>();
        a.magnitude = unfrac(q["magnitude"]);
        a.lambda0 = unfrac(q["lambda0"]);
        for (const auto& s : q["support"]) {
            if (!s.is_object() || !s.contains("v") || !s.contains("lambda"))
                throw std::invalid_argument("certificate json: bad support entry");
            a.v.push_back(unindex(s["v"]));
            a.lambda.push_back(unfrac(s["lambda"]));
        }
        c.inequalities.push_back(std::move(a));
    }
    return c;
}

}  // namespace sosh
