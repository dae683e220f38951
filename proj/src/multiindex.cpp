#include "sosh/multiindex.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace sosh {

int order(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

bool leq(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

bool is_zero(const MultiIndex& a) {
    return std::all_of(a.begin(), a.end(), [](int v) { return v == 0; });
}

MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) throw std::invalid_argument("multi-index length mismatch");
    MultiIndex c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

MultiIndex sub(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) throw std::invalid_argument("multi-index length mismatch");
    MultiIndex c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}

mpz_class factorial(int k) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

mpz_class factorial(const MultiIndex& a) {
    mpz_class r = 1;
    for (int v : a) r *= factorial(v);
    return r;
}

mpz_class binomial(const MultiIndex& b, const MultiIndex& a) {
    mpz_class r = 1;
    for (size_t i = 0; i < a.size(); ++i) {
        mpz_class c;
        mpz_bin_uiui(c.get_mpz_t(), b[i], a[i]);
        r *= c;
    }
    return r;
}

std::string to_string(const MultiIndex& a) {
    std::string s = "(";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(a[i]);
    }
    return s + ")";
}

std::vector<MultiIndex> indices_below(const MultiIndex& beta) {
    std::vector<MultiIndex> out;
    MultiIndex cur(beta.size(), 0);
    if (beta.empty()) return {cur};
    while (true) {
        out.push_back(cur);
        int i = static_cast<int>(beta.size()) - 1;
        while (i >= 0 && cur[i] == beta[i]) cur[i--] = 0;
        if (i < 0) break;
        ++cur[i];
    }
    return out;
}

int MultiSetPartition::cardinality() const { return std::accumulate(mult.begin(), mult.end(), 0); }

std::vector<MultiIndex> MultiSetPartition::parts() const {
    std::vector<MultiIndex> out;
    for (size_t i = 0; i < support.size(); ++i)
        for (int m = 0; m < mult[i]; ++m) out.push_back(support[i]);
    return out;
}

bool MultiSetPartition::valid() const {
    if (support.size() != mult.size()) return false;
    MultiIndex sum(target.size(), 0);
    for (size_t i = 0; i < support.size(); ++i) {
        if (support[i].size() != target.size() || order(support[i]) < 1 || mult[i] < 1) return false;
        for (size_t c = 0; c < target.size(); ++c) sum[c] += mult[i] * support[i][c];
    }
    return sum == target;
}

namespace {

void descend(const std::vector<MultiIndex>& cand, size_t from, MultiIndex& rest,
             std::vector<MultiIndex>& chosen, std::vector<std::vector<MultiIndex>>& out) {
    if (is_zero(rest)) {
        out.push_back(chosen);
        return;
    }
    for (size_t i = from; i < cand.size(); ++i) {
        if (!leq(cand[i], rest)) continue;
        rest = sub(rest, cand[i]);
        chosen.push_back(cand[i]);
        descend(cand, i, rest, chosen, out);
        chosen.pop_back();
        rest = add(rest, cand[i]);
    }
}

MultiSetPartition compress(const MultiIndex& target, const std::vector<MultiIndex>& parts) {
    MultiSetPartition p;
    p.target = target;
    for (const auto& g : parts) {
        if (!p.support.empty() && p.support.back() == g) {
            ++p.mult.back();
        } else {
            p.support.push_back(g);
            p.mult.push_back(1);
        }
    }
    return p;
}

// P(0) = {empty} inside the expansions
std::vector<MultiSetPartition> partitions_or_empty(const MultiIndex& eta) {
    if (is_zero(eta)) return {MultiSetPartition{eta, {}, {}}};
    return enumerate_partitions(eta);
}

}  // namespace

std::vector<MultiSetPartition> enumerate_partitions(const MultiIndex& beta) {
    if (order(beta) < 1) throw std::invalid_argument("no partitions of zero");
    std::vector<MultiIndex> cand;
    for (auto& g : indices_below(beta))
        if (!is_zero(g)) cand.push_back(g);
    std::sort(cand.begin(), cand.end(), std::greater<>());
    std::vector<std::vector<MultiIndex>> raw;
    MultiIndex rest = beta;
    std::vector<MultiIndex> chosen;
    descend(cand, 0, rest, chosen, raw);
    std::sort(raw.begin(), raw.end(), std::greater<>());
    std::vector<MultiSetPartition> out;
    out.reserve(raw.size());
    for (auto& r : raw) out.push_back(compress(beta, r));
    return out;
}

Rational chain_coefficient(const MultiIndex& beta, const MultiIndex& eta,
                           const MultiSetPartition& gamma) {
    if (!leq(eta, beta)) throw std::invalid_argument("eta is not below beta");
    if (gamma.target != eta || !gamma.valid()) throw std::invalid_argument("gamma does not partition eta");
    mpz_class den = 1;
    for (size_t i = 0; i < gamma.support.size(); ++i) {
        mpz_class f = factorial(gamma.support[i]);
        for (int m = 0; m < gamma.mult[i]; ++m) den *= f;
        den *= factorial(gamma.mult[i]);
    }
    Rational c(factorial(eta) * binomial(beta, eta), den);
    c.canonicalize();
    return c;
}

std::vector<ChainTerm> chain_expand(const MultiIndex& beta) {
    std::vector<ChainTerm> out;
    for (const auto& eta : indices_below(beta)) {
        for (const auto& g : partitions_or_empty(eta)) {
            ChainTerm t;
            t.outer_x = sub(beta, eta);
            t.outer_y = g.cardinality();
            t.coeff = chain_coefficient(beta, eta, g);
            t.factors = g.parts();
            out.push_back(std::move(t));
        }
    }
    return out;
}

std::vector<SqrtTerm> sqrt_expansion(const MultiIndex& beta) {
    std::vector<SqrtTerm> out;
    for (const auto& g : enumerate_partitions(beta)) {
        int m = g.cardinality();
        // m-th derivative of sqrt(y) is prod_{i<m} (1/2 - i) y^{1/2 - m}
        Rational falling = 1;
        for (int i = 0; i < m; ++i) falling *= Rational(1, 2) - i;
        SqrtTerm t;
        t.coeff = falling * chain_coefficient(beta, beta, g);
        t.power = Rational(1, 2) - m;
        t.factors = g.parts();
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<LeibnizTerm> leibniz_expand(const MultiIndex& beta) {
    std::vector<LeibnizTerm> out;
    for (const auto& g : indices_below(beta)) out.push_back({binomial(beta, g), g, sub(beta, g)});
    return out;
}

std::vector<ChainTerm> implicit_derivative_terms(const MultiIndex& beta) {
    if (order(beta) < 1) throw std::invalid_argument("implicit derivative needs order >= 1");
    std::vector<ChainTerm> out;
    for (auto& t : chain_expand(beta)) {
        if (t.factors.size() == 1 && t.factors[0] == beta) continue;
        out.push_back(std::move(t));
    }
    return out;
}

double evaluate_implicit(const MultiIndex& beta, const GDerivative& gderiv) {
    std::map<MultiIndex, double> memo;
    std::function<double(const MultiIndex&)> rec = [&](const MultiIndex& b) -> double {
        auto it = memo.find(b);
        if (it != memo.end()) return it->second;
        double s = 0.0;
        for (const auto& t : implicit_derivative_terms(b)) {
            double term = t.coeff.get_d() * gderiv(t.outer_x, t.outer_y);
            for (const auto& f : t.factors) term *= rec(f);
            s += term;
        }
        double v = -s / gderiv(MultiIndex(b.size(), 0), 1);
        memo[b] = v;
        return v;
    };
    return rec(beta);
}

std::vector<DirectionalTerm> directional_expand(int k, int n) {
    if (k < 0 || n < 1) throw std::invalid_argument("directional_expand needs k >= 0, n >= 1");
    std::vector<DirectionalTerm> out;
    MultiIndex box(n, k);
    for (const auto& b : indices_below(box))
        if (order(b) == k) out.push_back({factorial(k) / factorial(b), b});
    std::sort(out.begin(), out.end(),
              [](const DirectionalTerm& a, const DirectionalTerm& b) { return a.beta > b.beta; });
    return out;
}

}  // namespace sosh
