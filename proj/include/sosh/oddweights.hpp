#pragma once

#include <vector>

#include <gmpxx.h>

#include "sosh/exactlinalg.hpp"

namespace sosh {

struct OddWeightSystem {
    int ell = 1;
    int s = 1;
    std::vector<long> nodes;
    RVector weights;
};

// nodes eta_k = (-1)^{s+k} k, weights from the closed form
OddWeightSystem solve_odd_weights(int ell);

struct NodeWeights {
    RVector weights;
    bool nonnegative = false;
};

// exact solve of sum_k w_k eta_k^{2j-1} = [j == s], j = 1..s
NodeWeights weights_for_nodes(const std::vector<long>& nodes);

// rows are odd powers 1, 3, ..., 2s-1
ZMatrix odd_power_matrix(const std::vector<long>& nodes);
// sum_k w_k eta_k^j
mpq_class odd_moment(const OddWeightSystem& sys, int j);
bool check_identities(const OddWeightSystem& sys);

}  // namespace sosh
