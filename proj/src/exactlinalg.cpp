#include "sosh/exactlinalg.hpp"

#include <stdexcept>
#include <utility>

namespace sosh {

std::vector<int> rref(RMatrix& a) {
    std::vector<int> pivots;
    if (a.empty()) return pivots;
    size_t rows = a.size(), cols = a[0].size(), r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        mpq_class inv = 1 / a[r][c];
        for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            mpq_class f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

int rank(RMatrix a) { return static_cast<int>(rref(a).size()); }

std::optional<RVector> solve(const RMatrix& a, const RVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("solve: size mismatch");
    if (a.empty()) return RVector{};
    size_t cols = a[0].size();
    RMatrix aug = a;
    for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == static_cast<int>(cols)) return std::nullopt;
    if (piv.size() != cols) return std::nullopt;
    RVector x(cols);
    for (size_t i = 0; i < cols; ++i) x[piv[i]] = aug[i][cols];
    return x;
}

std::optional<RMatrix> inverse(const RMatrix& a) {
    size_t n = a.size();
    RMatrix aug = a;
    for (size_t i = 0; i < n; ++i) {
        if (aug[i].size() != n) throw std::invalid_argument("inverse: matrix not square");
        aug[i].resize(2 * n, 0);
        aug[i][n + i] = 1;
    }
    auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != static_cast<int>(n - 1)) return std::nullopt;
    RMatrix inv(n, RVector(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

mpz_class det_bareiss(ZMatrix a) {
    size_t n = a.size();
    if (n == 0) return 1;
    int sign = 1;
    mpz_class prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[p], a[k]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

std::optional<RVector> solve_bareiss(const ZMatrix& m, const std::vector<mpz_class>& b) {
    size_t n = m.size();
    ZMatrix a = m;
    for (size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
    mpz_class prev = 1;
    for (size_t k = 0; k < n; ++k) {
        if (a[k][k] == 0) {
            size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return std::nullopt;
            std::swap(a[p], a[k]);
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j <= n; ++j) {
                a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    RVector x(n);
    for (size_t ii = n; ii-- > 0;) {
        mpq_class s = mpq_class(a[ii][n]);
        for (size_t j = ii + 1; j < n; ++j) s -= mpq_class(a[ii][j]) * x[j];
        x[ii] = s / mpq_class(a[ii][ii]);
    }
    return x;
}

bool is_psd(RMatrix a) {
    int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (a[i][j] != a[j][i]) return false;
    std::vector<bool> done(n, false);
    for (int step = 0; step < n; ++step) {
        int p = -1;
        for (int i = 0; i < n; ++i) {
            if (done[i]) continue;
            if (a[i][i] < 0) return false;
            if (p < 0 || a[i][i] > a[p][p]) p = i;
        }
        if (a[p][p] == 0) {
            // zero diagonal forces a zero remaining block
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (!done[i] && !done[j] && a[i][j] != 0) return false;
            return true;
        }
        done[p] = true;
        for (int i = 0; i < n; ++i) {
            if (done[i] || a[i][p] == 0) continue;
            mpq_class f = a[i][p] / a[p][p];
            for (int j = 0; j < n; ++j)
                if (!done[j]) a[i][j] -= f * a[p][j];
        }
    }
    return true;
}

}  // namespace sosh
