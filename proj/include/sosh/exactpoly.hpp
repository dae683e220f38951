#pragma once

#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sosh/multiindex.hpp"

namespace sosh {

class SparsePolynomial {
public:
    using TermMap = std::map<MultiIndex, Rational>;

    SparsePolynomial() = default;
    explicit SparsePolynomial(int nvars) : nvars_(nvars) {}

    static SparsePolynomial constant(int nvars, const Rational& c);
    static SparsePolynomial monomial(const MultiIndex& e, const Rational& c = 1);
    static SparsePolynomial variable(int nvars, int i);

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coeff(const MultiIndex& e) const;

    void add_term(const MultiIndex& e, const Rational& c);

    bool operator==(const SparsePolynomial& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }
    bool operator!=(const SparsePolynomial& o) const { return !(*this == o); }

private:
    int nvars_ = 0;
    TermMap terms_;
};

SparsePolynomial add(const SparsePolynomial& p, const SparsePolynomial& q);
SparsePolynomial sub(const SparsePolynomial& p, const SparsePolynomial& q);
SparsePolynomial mul(const SparsePolynomial& p, const SparsePolynomial& q);
SparsePolynomial scale(const SparsePolynomial& p, const Rational& c);
SparsePolynomial pow(const SparsePolynomial& p, int e);

SparsePolynomial operator+(const SparsePolynomial& p, const SparsePolynomial& q);
SparsePolynomial operator-(const SparsePolynomial& p, const SparsePolynomial& q);
SparsePolynomial operator*(const SparsePolynomial& p, const SparsePolynomial& q);
SparsePolynomial operator*(const Rational& c, const SparsePolynomial& p);

Rational evaluate(const SparsePolynomial& p, const std::vector<Rational>& point);
double evaluate(const SparsePolynomial& p, const std::vector<double>& point);

int degree(const SparsePolynomial& p);  // -1 for the zero polynomial
std::vector<MultiIndex> support(const SparsePolynomial& p);

// multiply each term by x_{n+1}^{d - |q|}; d defaults to degree(p)
SparsePolynomial homogenize(const SparsePolynomial& p);
SparsePolynomial homogenize(const SparsePolynomial& p, int d);

SparsePolynomial derivative(const SparsePolynomial& p, int var);
SparsePolynomial derivative(const SparsePolynomial& p, const MultiIndex& beta);

// replace x_var by q (q has the same nvars as p)
SparsePolynomial substitute(const SparsePolynomial& p, int var, const SparsePolynomial& q);
// fix x_var to a value and drop it
SparsePolynomial fix_variable(const SparsePolynomial& p, int var, const Rational& value);
// append variables
SparsePolynomial extend(const SparsePolynomial& p, int nvars);

// variable names x,y,z,w for nvars <= 4, else x1..xn
std::string variable_name(int nvars, int i);
std::string to_string(const SparsePolynomial& p);
SparsePolynomial parse_polynomial(const std::string& text, int nvars);

std::string to_json(const SparsePolynomial& p);
SparsePolynomial from_json(const std::string& text);

}  // namespace sosh
