// sosh: command line front end for the exact and numeric engines
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sosh/exactpoly.hpp"
#include "sosh/fixtures.hpp"
#include "sosh/holderlab.hpp"
#include "sosh/multiindex.hpp"
#include "sosh/oddweights.hpp"
#include "sosh/sosdecomp.hpp"
#include "sosh/sosgen.hpp"

using json = nlohmann::json;
using namespace sosh;

namespace {

constexpr const char* kVersion = "0.3.0";

enum Exit { kPass = 0, kFail = 1, kInput = 2 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << text << "\n";
}

json header(const std::string& sub, const json& params) {
    json j;
    j["tool"] = "sosh";
    j["version"] = kVersion;
    j["subcommand"] = sub;
    j["parameters"] = params;
    return j;
}

int emit(json report, bool ok) {
    report["ok"] = ok;
    std::cout << report.dump(2) << "\n";
    return ok ? kPass : kFail;
}

json ints(const MultiIndex& m) { return json(std::vector<int>(m.begin(), m.end())); }

std::vector<std::string> fractions(const RVector& v) {
    std::vector<std::string> out;
    for (const auto& x : v) out.push_back(rational_string(x));
    return out;
}

MultiIndex parse_index(const std::string& text) {
    MultiIndex m;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            int v = std::stoi(part, &used);
            if (used != part.size() || v < 0) throw InputError("");
            m.push_back(v);
        } catch (const std::exception&) {
            throw InputError("bad multi-index entry '" + part + "'");
        }
    }
    if (m.empty()) throw InputError("empty multi-index");
    return m;
}

// sampled input from --in or --fixture
struct SampleArgs {
    std::string in;
    std::string fixture;
    std::optional<double> param;
    int count = 0;
    std::vector<double> domain;

    void add(CLI::App* sub) {
        sub->add_option("--in", in, "sampled function JSON");
        sub->add_option("--fixture", fixture, "built-in fixture name");
        sub->add_option("--param", param, "fixture parameter");
        sub->add_option("--count", count, "points per axis for a fixture");
        sub->add_option("--domain", domain, "fixture domain a b")->expected(2);
    }

    SampledFunction load() const {
        if (in.empty() == fixture.empty()) throw InputError("give exactly one of --in and --fixture");
        if (!in.empty()) return sampled_from_json(read_file(in));
        std::optional<std::pair<double, double>> dom;
        if (domain.size() == 2) dom = std::make_pair(domain[0], domain[1]);
        return make_fixture(fixture, param, count, dom);
    }

    json echo() const {
        json j;
        if (!in.empty()) j["in"] = in;
        if (!fixture.empty()) {
            j["fixture"] = fixture;
            if (param) j["param"] = *param;
            if (count) j["count"] = count;
            if (!domain.empty()) j["domain"] = domain;
        }
        return j;
    }
};

// ---- gen-nonsos ----

struct GenArgs {
    int nvars = 2;
    int degree = 6;
    long long budget = 200000;
    std::uint64_t seed = 1;
    bool single_zero = false;
    std::string out;
    std::string cert_out;
};

int cmd_gen(const GenArgs& a) {
    if (a.nvars < 2 || a.degree < 4 || a.degree % 2 || a.budget <= 0)
        throw InputError("need nvars >= 2, even degree >= 4 and a positive budget");
    json params = {{"nvars", a.nvars}, {"degree", a.degree}, {"budget", a.budget}, {"seed", a.seed},
                   {"single_zero", a.single_zero}};
    if (!a.out.empty()) params["out"] = a.out;
    auto report = header("gen-nonsos", params);
    SearchStats st;
    auto hits = direct_search(a.nvars, a.degree, a.budget, a.seed, a.single_zero ? 1 : 0, 1, &st);
    report["examined"] = st.examined;
    report["exhaustive"] = st.exhaustive;
    if (hits.empty()) {
        report["found"] = false;
        return emit(report, false);
    }
    const auto& inst = hits.front();
    auto p = construct_candidate(inst);
    auto cert = generator_certificate(inst);
    bool nonneg = true, not_sos = true;
    std::string why;
    try {
        certify_nonnegative(p, cert);
    } catch (const std::exception& e) {
        nonneg = false;
        why = e.what();
    }
    try {
        certify_not_sos(p);
    } catch (const InconclusiveError& e) {
        not_sos = false;
        why = e.what();
    }
    report["found"] = true;
    report["polynomial"] = to_string(p);
    json q = json::array();
    for (const auto& v : inst.q) q.push_back(ints(v));
    report["instance"] = {{"q", q},
                          {"m", ints(inst.m)},
                          {"lambda", fractions(inst.lambda)},
                          {"lambda0", rational_string(inst.lambda0)},
                          {"det_q", inst.det_q.get_str()},
                          {"scale", inst.scale.get_str()},
                          {"c", rational_string(inst.c)}};
    report["nonnegative"] = nonneg;
    report["not_sos"] = not_sos;
    if (!why.empty()) report["reason"] = why;
    if (!a.out.empty()) {
        std::string cpath = a.cert_out;
        if (cpath.empty()) {
            cpath = a.out;
            if (cpath.size() > 5 && cpath.substr(cpath.size() - 5) == ".json") cpath.resize(cpath.size() - 5);
            cpath += ".cert.json";
        }
        write_file(a.out, to_json(p));
        write_file(cpath, to_json(cert));
        report["outputs"] = {a.out, cpath};
    }
    return emit(report, nonneg && not_sos);
}

// ---- verify ----

int cmd_verify(const std::string& in, const std::string& cert_path) {
    json params = {{"in", in}};
    if (!cert_path.empty()) params["cert"] = cert_path;
    auto report = header("verify", params);
    auto p = from_json(read_file(in));
    std::optional<AmgmCertificate> cert;
    if (!cert_path.empty()) {
        cert = certificate_from_json(read_file(cert_path));
        if (cert->nvars != p.nvars()) throw InputError("certificate and polynomial differ in nvars");
    }
    report["polynomial"] = to_string(p);
    bool nonneg = false, not_sos = false;
    try {
        auto used = certify_nonnegative(p, cert);
        nonneg = true;
        report["certificate"] = json::parse(to_json(used));
    } catch (const CertificateError& e) {
        report["nonnegative_reason"] = e.what();
    }
    try {
        auto w = certify_not_sos(p);
        not_sos = true;
        report["witness"] = {{"m", ints(w.m)}, {"coeff", rational_string(w.coeff)}, {"examined", w.examined.size()}};
    } catch (const InconclusiveError& e) {
        report["not_sos_reason"] = e.what();
    }
    report["nonnegative"] = nonneg;
    report["not_sos"] = not_sos;
    return emit(report, nonneg && not_sos);
}

// ---- table ----

int cmd_table(bool reproduce, const std::string& rows, const std::string& out) {
    json params = {{"reproduce", reproduce}};
    if (!rows.empty()) params["rows"] = rows;
    auto report = header("table", params);
    if (!reproduce) {
        json list = json::array();
        for (const auto& s : table_rows())
            list.push_back({{"n", s.n}, {"d", s.d}, {"printed", s.printed}, {"used", s.used}});
        report["rows"] = list;
        return emit(report, true);
    }
    auto table = reproduce_table(rows);
    if (table.empty()) throw InputError("no table row matches " + rows);
    json list = json::array();
    bool ok = true;
    int pass = 0, defect = 0, fail = 0;
    for (const auto& r : table) {
        json row = {{"n", r.n},
                    {"d", r.d},
                    {"printed", r.printed},
                    {"used", r.used},
                    {"status", to_string(r.status)},
                    {"nonnegative", r.nonneg},
                    {"not_sos", r.not_sos},
                    {"not_sos_method", r.not_sos_method},
                    {"reason", r.reason},
                    {"note", r.note}};
        if (r.cert) row["certificate"] = json::parse(to_json(*r.cert));
        if (r.witness) row["witness"] = {{"m", ints(r.witness->m)}, {"coeff", rational_string(r.witness->coeff)}};
        if (r.negative_point) row["negative_point"] = fractions(*r.negative_point);
        if (r.gram) row["gram_basis_size"] = r.gram->basis.size();
        list.push_back(row);
        if (r.status == RowStatus::Pass) ++pass;
        if (r.status == RowStatus::SourceDefect) ++defect;
        if (r.status == RowStatus::Fail) {
            ++fail;
            ok = false;
        }
        std::cerr << r.n << "x" << r.d << " " << to_string(r.status) << "\n";
    }
    report["rows"] = list;
    report["counts"] = {{"pass", pass}, {"source_defect", defect}, {"fail", fail}, {"total", table.size()}};
    if (!out.empty()) {
        report["out"] = out;
        json copy = report;
        copy["ok"] = ok;
        write_file(out, copy.dump(2));
    }
    return emit(report, ok);
}

// ---- decompose / partial ----

struct DecompArgs {
    SampleArgs sample;
    int k = 2;
    double alpha = 1;
    std::optional<double> nu, omega;
    double eps = 1e-3;
    double tol = -1;
    bool raw = false;
    std::string out;
};

json decomp_params(const DecompArgs& a, bool partial) {
    json p = a.sample.echo();
    p["k"] = a.k;
    p["alpha"] = a.alpha;
    if (a.nu) p["nu"] = *a.nu;
    if (a.omega) p["omega"] = *a.omega;
    if (partial) p["eps"] = a.eps;
    if (a.raw) p["no_normalize"] = true;
    if (!a.out.empty()) p["out"] = a.out;
    return p;
}

int cmd_decompose(const DecompArgs& a, bool partial) {
    auto f = a.sample.load();
    auto report = header(partial ? "partial" : "decompose", decomp_params(a, partial));
    DecomposeOptions opt;
    opt.nu = a.nu;
    opt.omega = a.omega;
    opt.normalize = !a.raw;
    Decomposition d;
    try {
        d = partial ? partial_decompose(f, a.k, a.alpha, a.eps, opt) : decompose(f, a.k, a.alpha, opt);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::runtime_error& e) {
        report["error"] = e.what();
        return emit(report, false);
    }
    double tol = a.tol > 0 ? a.tol : (partial ? 1e-8 : (f.n == 1 ? 1e-6 : 1e-4));
    auto v = verify(d, f, tol);
    report["decomposition"] = json::parse(to_json(d, v, false));
    bool ok = v.ok;
    if (partial) {
        double hmin = d.residual.minCoeff(), hmax = d.residual.maxCoeff();
        report["residual_range"] = {hmin, hmax};
        ok = ok && hmin >= 0 && hmax <= a.eps;
    }
    if (!a.out.empty()) {
        auto full = json::parse(to_json(d, v, true));
        full["tool"] = "sosh";
        full["version"] = kVersion;
        full["ok"] = ok;
        write_file(a.out, full.dump());
    }
    return emit(report, ok);
}

// ---- check ----

struct CheckArgs {
    SampleArgs sample;
    std::string kind;
    double alpha = 1;
    int k = 2;
    int ell = 1;
    double gamma = 0.5, beta = 1;
    double eta = 0.5;
    double nu = 0.25;
    double window = kFullWindow;
    double slack = 0.05;
    bool refine = false;
};

int cmd_check(const CheckArgs& a) {
    auto f = a.sample.load();
    json params = a.sample.echo();
    params["kind"] = a.kind;
    params["alpha"] = a.alpha;
    auto report = header("check", params);
    auto refine = [&](const std::function<double(const SampledFunction&)>& metric) {
        if (a.sample.fixture.empty()) throw InputError("--refine needs --fixture");
        const auto& info = fixture_info(a.sample.fixture);
        int count = a.sample.count ? a.sample.count : info.count;
        auto study = refinement_study(
            [&](int c) {
                SampleArgs s = a.sample;
                s.count = c;
                return metric(s.load());
            },
            count);
        report["refinement"] = {{"coarse", study.coarse}, {"fine", study.fine}, {"ratio", study.ratio},
                                {"stable", study.stable}};
        return study.stable;
    };
    bool ok = false;
    if (a.kind == "seminorm") {
        if (std::isfinite(a.window)) report["parameters"]["window"] = a.window;
        auto e = estimate_seminorm(f, a.alpha, a.window);
        report["estimate"] = e.estimate;
        ok = std::isfinite(e.estimate);
    } else if (a.kind == "malgrange") {
        report["parameters"]["slack"] = a.slack;
        auto r = check_malgrange(f, a.alpha, a.slack);
        report["ratio"] = r.value;
        report["constants"] = r.constants;
        report["detail"] = r.detail;
        ok = r.ok;
    } else if (a.kind == "derivative") {
        report["parameters"]["k"] = a.k;
        report["parameters"]["ell"] = a.ell;
        auto r = check_derivative_control(f, a.k, a.alpha, a.ell);
        report["constant"] = r.value;
        ok = r.ok;
        if (a.refine)
            ok = refine([&](const SampledFunction& g) { return check_derivative_control(g, a.k, a.alpha, a.ell).value; }) &&
                 ok;
    } else if (a.kind == "interpolation") {
        report["parameters"]["gamma"] = a.gamma;
        report["parameters"]["beta"] = a.beta;
        auto r = check_interpolation(f, a.alpha, a.gamma, a.beta);
        report["value"] = r.value;
        report["constants"] = r.constants;
        ok = r.ok;
    } else if (a.kind == "induc") {
        report["parameters"]["k"] = a.k;
        report["parameters"]["eta"] = a.eta;
        auto r = check_induc(f, a.k, a.alpha, a.eta);
        report["constants"] = r.constants;
        ok = r.ok;
        if (a.refine)
            ok = refine([&](const SampledFunction& g) { return check_induc(g, a.k, a.alpha, a.eta).value; }) && ok;
    } else if (a.kind == "slowvar") {
        report["parameters"]["k"] = a.k;
        report["parameters"]["nu"] = a.nu;
        auto r = control_field(f, a.k, a.alpha);
        auto sv = check_slow_variation(r, a.nu);
        report["worst"] = sv.worst;
        ok = sv.ok;
    } else {
        throw InputError("unknown check kind " + a.kind);
    }
    return emit(report, ok);
}

// ---- oddweights / coeffs ----

int cmd_oddweights(int ell) {
    if (ell < 1 || ell % 2 == 0) throw InputError("ell must be a positive odd integer");
    auto report = header("oddweights", {{"ell", ell}});
    auto sys = solve_odd_weights(ell);
    auto w = fractions(sys.weights);
    std::ostringstream os;
    os << "eta=(";
    for (std::size_t i = 0; i < sys.nodes.size(); ++i) os << (i ? "," : "") << sys.nodes[i];
    os << ") w=(";
    for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
    os << ")";
    report["nodes"] = sys.nodes;
    report["weights"] = w;
    report["summary"] = os.str();
    bool ok = check_identities(sys);
    report["identities"] = ok;
    return emit(report, ok);
}

int cmd_coeffs(const std::string& beta_text, const std::string& mode, int k, int n) {
    json params = {{"mode", mode}};
    json list = json::array();
    if (mode == "directional") {
        if (k < 0 || n < 1) throw InputError("directional mode needs --k >= 0 and --n >= 1");
        params["k"] = k;
        params["n"] = n;
        for (const auto& t : directional_expand(k, n)) list.push_back({{"coeff", t.coeff.get_str()}, {"beta", ints(t.beta)}});
    } else {
        auto beta = parse_index(beta_text);
        params["beta"] = ints(beta);
        if (order(beta) < 1) throw InputError("beta must be nonzero");
        auto factors = [](const std::vector<MultiIndex>& fs) {
            json j = json::array();
            for (const auto& m : fs) j.push_back(ints(m));
            return j;
        };
        if (mode == "partitions") {
            for (const auto& p : enumerate_partitions(beta)) list.push_back(factors(p.parts()));
        } else if (mode == "chain" || mode == "implicit") {
            auto terms = mode == "chain" ? chain_expand(beta) : implicit_derivative_terms(beta);
            for (const auto& t : terms)
                list.push_back({{"coeff", rational_string(t.coeff)},
                                {"outer_x", ints(t.outer_x)},
                                {"outer_y", t.outer_y},
                                {"factors", factors(t.factors)}});
        } else if (mode == "sqrt") {
            for (const auto& t : sqrt_expansion(beta))
                list.push_back({{"coeff", rational_string(t.coeff)},
                                {"power", rational_string(t.power)},
                                {"factors", factors(t.factors)}});
        } else if (mode == "leibniz") {
            for (const auto& t : leibniz_expand(beta))
                list.push_back({{"coeff", t.coeff.get_str()}, {"left", ints(t.left)}, {"right", ints(t.right)}});
        } else {
            throw InputError("unknown mode " + mode);
        }
    }
    auto report = header("coeffs", params);
    report["terms"] = list;
    report["count"] = list.size();
    return emit(report, true);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sums of squares and Hoelder analysis toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen-nonsos", "search for a non-negative polynomial that is not a sum of squares");
    g->add_option("--nvars", gen.nvars)->required();
    g->add_option("--degree", gen.degree)->required();
    g->add_option("--budget", gen.budget, "candidate budget");
    g->add_option("--seed", gen.seed);
    g->add_flag("--single-zero", gen.single_zero, "add the terms that leave a single zero at the all-ones point");
    g->add_option("--out", gen.out, "polynomial JSON path");
    g->add_option("--cert-out", gen.cert_out, "certificate JSON path");

    std::string vin, vcert;
    auto* v = app.add_subcommand("verify", "certify non-negativity and the not-SOS criterion");
    v->add_option("--in", vin)->required();
    v->add_option("--cert", vcert);

    bool reproduce = false;
    std::string rows, table_out;
    auto* t = app.add_subcommand("table", "reproduce the table of non-SOS examples");
    t->add_flag("--reproduce", reproduce);
    t->add_option("--rows", rows, "comma separated keys such as 2x6");
    t->add_option("--out", table_out, "report path");

    DecompArgs dec;
    auto* d = app.add_subcommand("decompose", "sum of squares decomposition of a sampled function");
    dec.sample.add(d);
    d->add_option("--k", dec.k)->required();
    d->add_option("--alpha", dec.alpha)->required();
    d->add_option("--nu", dec.nu);
    d->add_option("--omega", dec.omega);
    d->add_option("--tol", dec.tol, "reconstruction tolerance");
    d->add_flag("--no-normalize", dec.raw);
    d->add_option("--out", dec.out);

    DecompArgs par;
    auto* p = app.add_subcommand("partial", "partial decomposition with a small residual");
    par.sample.add(p);
    p->add_option("--k", par.k)->required();
    p->add_option("--alpha", par.alpha)->required();
    p->add_option("--eps", par.eps)->required();
    p->add_option("--nu", par.nu);
    p->add_option("--omega", par.omega);
    p->add_flag("--no-normalize", par.raw);
    p->add_option("--out", par.out);

    CheckArgs chk;
    auto* c = app.add_subcommand("check", "run a Hoelder inequality checker");
    chk.sample.add(c);
    c->add_option("--kind", chk.kind, "seminorm, malgrange, derivative, interpolation, induc, slowvar")->required();
    c->add_option("--alpha", chk.alpha);
    c->add_option("--k", chk.k);
    c->add_option("--ell", chk.ell);
    c->add_option("--gamma", chk.gamma);
    c->add_option("--beta", chk.beta);
    c->add_option("--eta", chk.eta);
    c->add_option("--nu", chk.nu);
    c->add_option("--window", chk.window);
    c->add_option("--slack", chk.slack);
    c->add_flag("--refine", chk.refine, "also require stability under one grid refinement");

    int ell = 1;
    auto* o = app.add_subcommand("oddweights", "exact odd moment weights");
    o->add_option("--ell", ell)->required();

    std::string beta, mode = "partitions";
    int ck = 2, cn = 1;
    auto* q = app.add_subcommand("coeffs", "multi-index expansion coefficients");
    q->add_option("--beta", beta);
    q->add_option("--mode", mode, "partitions, chain, sqrt, leibniz, implicit, directional");
    q->add_option("--k", ck);
    q->add_option("--n", cn);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kInput;
    }

    try {
        if (g->parsed()) return cmd_gen(gen);
        if (v->parsed()) return cmd_verify(vin, vcert);
        if (t->parsed()) return cmd_table(reproduce, rows, table_out);
        if (d->parsed()) return cmd_decompose(dec, false);
        if (p->parsed()) return cmd_decompose(par, true);
        if (c->parsed()) return cmd_check(chk);
        if (o->parsed()) return cmd_oddweights(ell);
        if (q->parsed()) return cmd_coeffs(beta, mode, ck, cn);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return kFail;
    }
    return kInput;
}
