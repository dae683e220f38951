#pragma once

#include <optional>
#include <vector>

#include <gmpxx.h>

namespace sosh {

using RMatrix = std::vector<std::vector<mpq_class>>;
using RVector = std::vector<mpq_class>;
using ZMatrix = std::vector<std::vector<mpz_class>>;

// reduced row echelon form in place; returns pivot columns
std::vector<int> rref(RMatrix& a);
int rank(RMatrix a);

// unique solution of a x = b for a with full column rank, or nullopt if
// the system is inconsistent or underdetermined
std::optional<RVector> solve(const RMatrix& a, const RVector& b);

std::optional<RMatrix> inverse(const RMatrix& a);

// fraction-free (Bareiss) determinant
mpz_class det_bareiss(ZMatrix a);
// fraction-free elimination on [a | b], then exact back substitution
std::optional<RVector> solve_bareiss(const ZMatrix& a, const std::vector<mpz_class>& b);

// exact positive semidefiniteness by symmetric pivoted elimination
bool is_psd(RMatrix a);

}  // namespace sosh
