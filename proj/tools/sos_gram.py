#!/usr/bin/env python3
# Offline helper: exact Gram matrix for a bivariate polynomial that the hull
# test cannot decide. Needs cvxpy and sympy. Output feeds src/table_gram.inc.
import json
import sys

import cvxpy as cp
import numpy as np
import sympy as sp

x, y = sp.symbols("x y")


def gram(expr, basis, zeros, digits=4):
    P = sp.Poly(sp.expand(expr), x, y)
    N = len(basis)
    Z = sp.Matrix([[sp.Integer(a) ** e[0] * sp.Integer(b) ** e[1] for e in basis] for a, b in zeros])
    B = sp.Matrix.hstack(*Z.nullspace())
    k = B.shape[1]
    Bf = np.array(B, dtype=float)
    G = cp.Variable((k, k), symmetric=True)
    t = cp.Variable()
    Q = Bf @ G @ Bf.T
    slots = {}
    for i in range(N):
        for j in range(N):
            slots.setdefault((basis[i][0] + basis[j][0], basis[i][1] + basis[j][1]), []).append((i, j))
    cons = [G - t * np.eye(k) >> 0]
    for e, l in slots.items():
        cons.append(sum(Q[i, j] for i, j in l) == float(P.coeff_monomial(x ** e[0] * y ** e[1])))
    cp.Problem(cp.Maximize(t), cons).solve(solver=cp.SCS, eps=1e-10, max_iters=200000)
    scale = 10 ** digits
    G0 = sp.Matrix(k, k, lambda i, j: sp.Rational(round((G.value[i, j] + G.value[j, i]) / 2 * scale), scale))
    syms = sp.symbols("g0:%d" % (k * (k + 1) // 2))
    S = sp.zeros(k, k)
    it = 0
    for i in range(k):
        for j in range(i, k):
            S[i, j] = S[j, i] = syms[it]
            it += 1
    Qs = B * S * B.T
    eqs = [sum(Qs[i, j] for i, j in l) - P.coeff_monomial(x ** e[0] * y ** e[1]) for e, l in slots.items()]
    A, b = sp.linear_eq_to_matrix(eqs, syms)
    g0 = sp.Matrix([G0[i, j] for i in range(k) for j in range(i, k)])
    # sparse exact correction on pivot columns
    R = A.row_join(b - A * g0).rref()
    red, piv = R
    delta = sp.zeros(len(syms), 1)
    for r, c in enumerate(piv):
        if c == len(syms):
            raise SystemExit("inconsistent")
        delta[c] = red[r, len(syms)]
    g = g0 + delta
    Gx = sp.zeros(k, k)
    it = 0
    for i in range(k):
        for j in range(i, k):
            Gx[i, j] = Gx[j, i] = g[it]
            it += 1
    Qx = B * Gx * B.T
    z = sp.Matrix([x ** e[0] * y ** e[1] for e in basis])
    assert sp.expand((z.T * Qx * z)[0] - expr) == 0
    return Qx


ROWS = {
    "2x12": (2 * x**8 * y**4 + 13 * y**8 - 16 * x * y**7 + 1,
             [(0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 2), (4, 2)]),
    "2x20": (3 * x**10 * y**10 + 20 * y**6 - 30 * x * y**5 + 7,
             [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3), (3, 4), (4, 4), (5, 5)]),
}

if __name__ == "__main__":
    out = {}
    for key, (expr, basis) in ROWS.items():
        Q = gram(expr, basis, [(1, 1), (-1, -1)])
        out[key] = {"basis": [list(e) for e in basis],
                    "gram": [[str(Q[i, j]) for j in range(len(basis))] for i in range(len(basis))]}
    json.dump(out, sys.stdout, separators=(",", ":"))
