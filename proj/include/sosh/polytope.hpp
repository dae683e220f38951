#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sosh/exactlinalg.hpp"
#include "sosh/multiindex.hpp"

namespace sosh {

enum class Location { Interior, Boundary, Exterior };
const char* to_string(Location l);

// lambda[0..n-1] weight the vertices q_j, lambda[n] weights the base vertex
struct BarycentricCoords {
    RVector lambda;
};

class SimplexPolytope {
public:
    // base defaults to the origin
    explicit SimplexPolytope(std::vector<MultiIndex> q, MultiIndex base = {});

    int dim() const { return n_; }
    const std::vector<MultiIndex>& q() const { return q_; }
    const MultiIndex& base() const { return base_; }
    const RMatrix& Q() const { return Q_; }
    const RMatrix& Qinv() const { return Qinv_; }
    const mpz_class& detQ() const { return det_; }

private:
    int n_;
    std::vector<MultiIndex> q_;
    MultiIndex base_;
    RMatrix Q_, Qinv_;
    mpz_class det_;
};

BarycentricCoords barycentric(const SimplexPolytope& c, const RVector& r);
BarycentricCoords barycentric(const SimplexPolytope& c, const MultiIndex& r);
Location classify(const SimplexPolytope& c, const MultiIndex& r);
Location classify(const SimplexPolytope& c, const RVector& r);

class GeneralPolytope {
public:
    GeneralPolytope(int n, std::vector<MultiIndex> generators);

    int dim() const { return n_; }
    const std::vector<MultiIndex>& generators() const { return gens_; }

    // is num/den in the hull (num integer vector, den > 0)
    bool contains(const std::vector<long long>& num, long long den) const;
    bool contains(const MultiIndex& p) const;

private:
    struct Cell {
        std::vector<int> idx;          // generator indices, idx[0] is the base
        std::vector<int> rows;         // independent rows of D
        std::vector<std::vector<long long>> adj;  // adjugate of D restricted to rows
        long long det;                 // positive
    };
    void build_cells();

    int n_;
    std::vector<MultiIndex> gens_;
    MultiIndex lo_, hi_;
    std::vector<Cell> cells_;
};

bool member_general(const GeneralPolytope& c, const RVector& r);
bool member_general(const GeneralPolytope& c, const MultiIndex& r);

std::vector<MultiIndex> lattice_points(const GeneralPolytope& c);
// lattice points t with 2t in C, i.e. the lattice points of C/2
std::vector<MultiIndex> half_lattice_points(const GeneralPolytope& c);

std::optional<std::pair<MultiIndex, MultiIndex>> distinct_pair_witness(const GeneralPolytope& c,
                                                                       const MultiIndex& m);

}  // namespace sosh
