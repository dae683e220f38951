#include "sosh/polytope.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace sosh {

const char* to_string(Location l) {
    switch (l) {
        case Location::Interior: return "interior";
        case Location::Boundary: return "boundary";
        default: return "exterior";
    }
}

SimplexPolytope::SimplexPolytope(std::vector<MultiIndex> q, MultiIndex base)
    : n_(static_cast<int>(q.size())), q_(std::move(q)), base_(std::move(base)) {
    if (base_.empty()) base_.assign(n_, 0);
    if (static_cast<int>(base_.size()) != n_) throw std::invalid_argument("simplex: base dimension");
    Q_.assign(n_, RVector(n_));
    ZMatrix z(n_, std::vector<mpz_class>(n_));
    for (int j = 0; j < n_; ++j) {
        if (static_cast<int>(q_[j].size()) != n_) throw std::invalid_argument("simplex: vertex dimension");
        for (int i = 0; i < n_; ++i) {
            Q_[i][j] = q_[j][i] - base_[i];
            z[i][j] = q_[j][i] - base_[i];
        }
    }
    det_ = det_bareiss(z);
    if (det_ == 0) throw std::invalid_argument("simplex: vertices are affinely dependent (det Q = 0)");
    Qinv_ = *inverse(Q_);
}

BarycentricCoords barycentric(const SimplexPolytope& c, const RVector& r) {
    int n = c.dim();
    if (static_cast<int>(r.size()) != n) throw std::invalid_argument("barycentric: dimension");
    BarycentricCoords b;
    b.lambda.assign(n + 1, 0);
    mpq_class sum = 0;
    for (int i = 0; i < n; ++i) {
        mpq_class s = 0;
        for (int j = 0; j < n; ++j) s += c.Qinv()[i][j] * (r[j] - c.base()[j]);
        b.lambda[i] = s;
        sum += s;
    }
    b.lambda[n] = 1 - sum;
    return b;
}

BarycentricCoords barycentric(const SimplexPolytope& c, const MultiIndex& r) {
    RVector v(r.begin(), r.end());
    return barycentric(c, v);
}

static Location locate(const BarycentricCoords& b) {
    bool zero = false;
    for (const auto& l : b.lambda) {
        if (l < 0) return Location::Exterior;
        if (l == 0) zero = true;
    }
    return zero ? Location::Boundary : Location::Interior;
}

Location classify(const SimplexPolytope& c, const MultiIndex& r) { return locate(barycentric(c, r)); }
Location classify(const SimplexPolytope& c, const RVector& r) { return locate(barycentric(c, r)); }

GeneralPolytope::GeneralPolytope(int n, std::vector<MultiIndex> generators) : n_(n) {
    if (generators.empty()) throw std::invalid_argument("polytope: no generators");
    std::sort(generators.begin(), generators.end());
    generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
    for (const auto& g : generators) {
        if (static_cast<int>(g.size()) != n) throw std::invalid_argument("polytope: generator dimension");
        for (int v : g)
            if (v < 0) throw std::invalid_argument("polytope: negative coordinate");
    }
    gens_ = std::move(generators);
    lo_ = hi_ = gens_[0];
    for (const auto& g : gens_)
        for (int i = 0; i < n_; ++i) {
            lo_[i] = std::min(lo_[i], g[i]);
            hi_[i] = std::max(hi_[i], g[i]);
        }
    build_cells();
}

void GeneralPolytope::build_cells() {
    int total = static_cast<int>(gens_.size());
    std::vector<int> idx;
    std::function<void(int)> rec = [&](int from) {
        if (!idx.empty()) {
            int m = static_cast<int>(idx.size()) - 1;
            // D = [g_i - g_0], n x m
            RMatrix d(n_, RVector(m));
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < m; ++j) d[i][j] = gens_[idx[j + 1]][i] - gens_[idx[0]][i];
            bool independent = true;
            std::vector<int> rows;
            if (m > 0) {
                RMatrix t(m, RVector(n_));
                for (int i = 0; i < n_; ++i)
                    for (int j = 0; j < m; ++j) t[j][i] = d[i][j];
                RMatrix tt = t;
                rows = rref(tt);
                independent = static_cast<int>(rows.size()) == m;
            }
            if (!independent) return;  // no superset can be independent either
            Cell cell;
            cell.idx = idx;
            cell.rows = rows;
            if (m == 0) {
                cell.det = 1;
            } else {
                ZMatrix sq(m, std::vector<mpz_class>(m));
                for (int a = 0; a < m; ++a)
                    for (int b = 0; b < m; ++b) sq[a][b] = d[rows[a]][b].get_num();
                mpz_class det = det_bareiss(sq);
                RMatrix rq(m, RVector(m));
                for (int a = 0; a < m; ++a)
                    for (int b = 0; b < m; ++b) rq[a][b] = d[rows[a]][b];
                RMatrix inv = *inverse(rq);
                int s = det < 0 ? -1 : 1;
                cell.det = s * det.get_si();
                cell.adj.assign(m, std::vector<long long>(m));
                for (int a = 0; a < m; ++a)
                    for (int b = 0; b < m; ++b) {
                        mpq_class v = inv[a][b] * det * s;
                        cell.adj[a][b] = v.get_num().get_si();
                    }
            }
            cells_.push_back(std::move(cell));
            if (m == n_) return;
        }
        for (int i = from; i < total; ++i) {
            idx.push_back(i);
            rec(i + 1);
            idx.pop_back();
        }
    };
    rec(0);
}

bool GeneralPolytope::contains(const std::vector<long long>& num, long long den) const {
    if (static_cast<int>(num.size()) != n_ || den <= 0) throw std::invalid_argument("contains: bad point");
    for (int i = 0; i < n_; ++i)
        if (num[i] < static_cast<long long>(lo_[i]) * den || num[i] > static_cast<long long>(hi_[i]) * den)
            return false;
    std::vector<long long> rel(n_), lam;
    for (const auto& c : cells_) {
        const auto& g0 = gens_[c.idx[0]];
        for (int i = 0; i < n_; ++i) rel[i] = num[i] - den * g0[i];
        int m = static_cast<int>(c.idx.size()) - 1;
        if (m == 0) {
            if (std::all_of(rel.begin(), rel.end(), [](long long v) { return v == 0; })) return true;
            continue;
        }
        // lambda = lam / (det * den)
        lam.assign(m, 0);
        long long sum = 0;
        bool ok = true;
        for (int a = 0; a < m && ok; ++a) {
            long long s = 0;
            for (int b = 0; b < m; ++b) s += c.adj[a][b] * rel[c.rows[b]];
            if (s < 0) ok = false;
            lam[a] = s;
            sum += s;
        }
        if (!ok || sum > c.det * den) continue;
        for (int i = 0; i < n_ && ok; ++i) {
            long long s = 0;
            for (int a = 0; a < m; ++a) s += static_cast<long long>(gens_[c.idx[a + 1]][i] - g0[i]) * lam[a];
            if (s != c.det * rel[i]) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

bool GeneralPolytope::contains(const MultiIndex& p) const {
    std::vector<long long> v(p.begin(), p.end());
    return contains(v, 1);
}

bool member_general(const GeneralPolytope& c, const RVector& r) {
    mpz_class den = 1;
    for (const auto& v : r) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    std::vector<long long> num(r.size());
    for (size_t i = 0; i < r.size(); ++i) {
        mpq_class s = r[i] * den;
        num[i] = s.get_num().get_si();
    }
    return c.contains(num, den.get_si());
}

bool member_general(const GeneralPolytope& c, const MultiIndex& r) { return c.contains(r); }

namespace {

template <class F>
void scan_box(const MultiIndex& lo, const MultiIndex& hi, F&& f) {
    int n = static_cast<int>(lo.size());
    for (int i = 0; i < n; ++i)
        if (lo[i] > hi[i]) return;
    MultiIndex cur = lo;
    while (true) {
        f(cur);
        int i = n - 1;
        while (i >= 0 && cur[i] == hi[i]) {
            cur[i] = lo[i];
            --i;
        }
        if (i < 0) return;
        ++cur[i];
    }
}

}  // namespace

std::vector<MultiIndex> lattice_points(const GeneralPolytope& c) {
    int n = c.dim();
    MultiIndex lo(n, 1 << 30), hi(n, 0);
    for (const auto& g : c.generators())
        for (int i = 0; i < n; ++i) {
            lo[i] = std::min(lo[i], g[i]);
            hi[i] = std::max(hi[i], g[i]);
        }
    std::vector<MultiIndex> out;
    scan_box(lo, hi, [&](const MultiIndex& p) {
        if (c.contains(p)) out.push_back(p);
    });
    return out;
}

std::vector<MultiIndex> half_lattice_points(const GeneralPolytope& c) {
    int n = c.dim();
    MultiIndex lo(n, 1 << 30), hi(n, 0);
    for (const auto& g : c.generators())
        for (int i = 0; i < n; ++i) {
            lo[i] = std::min(lo[i], g[i]);
            hi[i] = std::max(hi[i], g[i]);
        }
    for (int i = 0; i < n; ++i) {
        lo[i] = (lo[i] + 1) / 2;
        hi[i] = hi[i] / 2;
    }
    std::vector<MultiIndex> out;
    std::vector<long long> twice(n);
    scan_box(lo, hi, [&](const MultiIndex& p) {
        for (int i = 0; i < n; ++i) twice[i] = 2LL * p[i];
        if (c.contains(twice, 1)) out.push_back(p);
    });
    return out;
}

std::optional<std::pair<MultiIndex, MultiIndex>> distinct_pair_witness(const GeneralPolytope& c,
                                                                       const MultiIndex& m) {
    auto pts = half_lattice_points(c);
    std::set<MultiIndex> in(pts.begin(), pts.end());
    for (const auto& t1 : pts) {
        MultiIndex t2 = sub(m, t1);
        if (std::any_of(t2.begin(), t2.end(), [](int v) { return v < 0; })) continue;
        if (t2 != t1 && in.count(t2)) return std::make_pair(t1, t2);
    }
    return std::nullopt;
}

}  // namespace sosh
