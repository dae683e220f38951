#include "sosh/oddweights.hpp"

#include <cstdlib>
#include <set>
#include <stdexcept>

namespace sosh {

static mpz_class ipow(long base, int e) {
    mpz_class r;
    mpz_class b(base);
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

OddWeightSystem solve_odd_weights(int ell) {
    if (ell < 1 || ell % 2 == 0) throw std::invalid_argument("ell must be a positive odd integer");
    OddWeightSystem sys;
    sys.ell = ell;
    sys.s = (ell + 1) / 2;
    for (int k = 1; k <= sys.s; ++k) sys.nodes.push_back(((sys.s + k) % 2 ? -1 : 1) * static_cast<long>(k));
    for (int k = 0; k < sys.s; ++k) {
        mpz_class den = sys.nodes[k];
        for (int i = 0; i < sys.s; ++i)
            if (i != k) den *= sys.nodes[k] * sys.nodes[k] - sys.nodes[i] * sys.nodes[i];
        mpq_class w(1, den);
        w.canonicalize();
        sys.weights.push_back(w);
    }
    if (!check_identities(sys)) throw std::logic_error("odd weight identities failed");
    for (const auto& w : sys.weights)
        if (w <= 0) throw std::logic_error("odd weight not positive");
    return sys;
}

ZMatrix odd_power_matrix(const std::vector<long>& nodes) {
    int s = static_cast<int>(nodes.size());
    ZMatrix m(s, std::vector<mpz_class>(s));
    for (int j = 0; j < s; ++j)
        for (int k = 0; k < s; ++k) m[j][k] = ipow(nodes[k], 2 * j + 1);
    return m;
}

NodeWeights weights_for_nodes(const std::vector<long>& nodes) {
    std::set<long> mags;
    for (long e : nodes) {
        if (e == 0) throw std::invalid_argument("nodes must be nonzero");
        if (!mags.insert(std::labs(e)).second)
            throw std::invalid_argument("repeated node magnitude: two linearly dependent columns");
    }
    int s = static_cast<int>(nodes.size());
    std::vector<mpz_class> rhs(s, 0);
    rhs[s - 1] = 1;
    auto sol = solve_bareiss(odd_power_matrix(nodes), rhs);
    if (!sol) throw std::invalid_argument("singular odd-power system");
    NodeWeights out;
    out.weights = *sol;
    out.nonnegative = true;
    for (const auto& w : out.weights)
        if (w < 0) out.nonnegative = false;
    return out;
}

mpq_class odd_moment(const OddWeightSystem& sys, int j) {
    mpq_class s = 0;
    for (int k = 0; k < sys.s; ++k) s += sys.weights[k] * mpq_class(ipow(sys.nodes[k], j));
    return s;
}

bool check_identities(const OddWeightSystem& sys) {
    for (int j = 1; j < sys.ell; j += 2)
        if (odd_moment(sys, j) != 0) return false;
    return odd_moment(sys, sys.ell) == 1;
}

}  // namespace sosh
