#pragma once

#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace sosh {

using MultiIndex = std::vector<int>;
using Rational = mpq_class;

// mpq_class(a, b) is not reduced; comparisons need canonical form
inline Rational ratio(long a, long b) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

int order(const MultiIndex& a);
bool leq(const MultiIndex& a, const MultiIndex& b);
bool is_zero(const MultiIndex& a);
MultiIndex add(const MultiIndex& a, const MultiIndex& b);
MultiIndex sub(const MultiIndex& a, const MultiIndex& b);
mpz_class factorial(int k);
mpz_class factorial(const MultiIndex& a);
mpz_class binomial(const MultiIndex& b, const MultiIndex& a);
std::string to_string(const MultiIndex& a);

// every gamma with 0 <= gamma <= beta, lexicographically increasing
std::vector<MultiIndex> indices_below(const MultiIndex& beta);

// Unordered partition of a multi-index, stored as distinct parts with
// multiplicities. Parts are kept in decreasing lexicographic order.
struct MultiSetPartition {
    MultiIndex target;
    std::vector<MultiIndex> support;
    std::vector<int> mult;

    int cardinality() const;
    std::vector<MultiIndex> parts() const;
    bool valid() const;
};

std::vector<MultiSetPartition> enumerate_partitions(const MultiIndex& beta);

Rational chain_coefficient(const MultiIndex& beta, const MultiIndex& eta,
                           const MultiSetPartition& gamma);

// one term C * (d_x^{outer_x} d_y^{outer_y} F)(x, g(x)) * prod d^gamma g
struct ChainTerm {
    MultiIndex outer_x;
    int outer_y = 0;
    Rational coeff;
    std::vector<MultiIndex> factors;
};

// d^beta [F(x, g(x))], including the eta = 0 term
std::vector<ChainTerm> chain_expand(const MultiIndex& beta);

struct SqrtTerm {
    Rational coeff;
    Rational power;  // exponent of g
    std::vector<MultiIndex> factors;
};

std::vector<SqrtTerm> sqrt_expansion(const MultiIndex& beta);

struct LeibnizTerm {
    mpz_class coeff;
    MultiIndex left;
    MultiIndex right;
};

std::vector<LeibnizTerm> leibniz_expand(const MultiIndex& beta);

// d^beta g = -(1 / d_n G) * sum of terms, G = G(x, y), y = g(x)
std::vector<ChainTerm> implicit_derivative_terms(const MultiIndex& beta);

using GDerivative = std::function<double(const MultiIndex& x_part, int y_order)>;

// evaluates d^beta g at a point; gderiv returns derivatives of G there
double evaluate_implicit(const MultiIndex& beta, const GDerivative& gderiv);

struct DirectionalTerm {
    mpz_class coeff;
    MultiIndex beta;
};

std::vector<DirectionalTerm> directional_expand(int k, int n);

}  // namespace sosh
