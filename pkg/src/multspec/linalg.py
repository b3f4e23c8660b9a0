"""Exact dense linear algebra over field domains.

Small matrices only: linear solves for reconstruction, determinants for
Jacobians, and characteristic polynomials of multiplication operators.  The
characteristic polynomial goes through a Hessenberg reduction (similarity
transforms, so the polynomial is unchanged) followed by the standard
recurrence, O(n^3) field operations total, which keeps 100-200 dimensional
quotient algebras tractable in exact arithmetic.
"""

from __future__ import annotations

from .errors import MathError, UsageError
from .exactalg import Domain, UniPoly, bareiss_det


def solve_linear(rows, rhs, dom: Domain):
    """Solve A x = b over a field; raises MathError when singular."""
    if not dom.is_field:
        raise UsageError("solve_linear requires a field domain")
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    if any(len(r) != n + 1 for r in m):
        raise UsageError("solve_linear expects a square system")
    for k in range(n):
        piv = None
        for i in range(k, n):
            if not dom.is_zero(m[i][k]):
                piv = i
                break
        if piv is None:
            raise MathError("singular linear system")
        m[k], m[piv] = m[piv], m[k]
        inv = dom.inv(m[k][k])
        m[k] = [dom.mul(c, inv) for c in m[k]]
        for i in range(n):
            if i != k and not dom.is_zero(m[i][k]):
                f = m[i][k]
                m[i] = [dom.sub(a, dom.mul(f, b)) for a, b in zip(m[i], m[k])]
    return [m[i][n] for i in range(n)]


def det(rows, dom: Domain):
    """Determinant over any integral domain (fraction-free)."""
    return bareiss_det(rows, dom)


def char_poly(rows, dom: Domain, var: str = "t") -> UniPoly:
    """Monic characteristic polynomial det(t*I - M) over a field."""
    if not dom.is_field:
        raise UsageError("char_poly requires a field domain")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise UsageError("char_poly expects a square matrix")
    if n == 0:
        return UniPoly.const(dom, var, dom.one)
    h = [list(r) for r in rows]
    # similarity reduction to upper Hessenberg form
    for j in range(n - 2):
        piv = None
        for i in range(j + 1, n):
            if not dom.is_zero(h[i][j]):
                piv = i
                break
        if piv is None:
            continue
        if piv != j + 1:
            h[j + 1], h[piv] = h[piv], h[j + 1]
            for r in h:
                r[j + 1], r[piv] = r[piv], r[j + 1]
        inv = dom.inv(h[j + 1][j])
        for i in range(j + 2, n):
            if dom.is_zero(h[i][j]):
                continue
            f = dom.mul(h[i][j], inv)
            hi, hj1 = h[i], h[j + 1]
            for k in range(n):
                hi[k] = dom.sub(hi[k], dom.mul(f, hj1[k]))
            for r in h:
                r[j + 1] = dom.add(r[j + 1], dom.mul(f, r[i]))
    # p_m(t) = (t - h[m][m]) p_{m-1} - sum_i h[i][m] (prod subdiag) p_{i-1}
    zero, one = dom.zero, dom.one
    polys = [[one]]
    for m in range(n):
        prev = polys[m]
        cur = [zero] + list(prev)  # t * p_{m-1}
        c = h[m][m]
        for k in range(len(prev)):
            cur[k] = dom.sub(cur[k], dom.mul(c, prev[k]))
        run = one
        for i in range(m - 1, -1, -1):
            run = dom.mul(run, h[i + 1][i])
            coef = dom.mul(h[i][m], run)
            if not dom.is_zero(coef):
                pi = polys[i]
                for k in range(len(pi)):
                    cur[k] = dom.sub(cur[k], dom.mul(coef, pi[k]))
        polys.append(cur)
    return UniPoly(dom, var, polys[n])


def mat_mul(a, b, dom: Domain):
    n, k, m = len(a), len(b), len(b[0])
    out = [[dom.zero] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            acc = dom.zero
            for t in range(k):
                acc = dom.add(acc, dom.mul(a[i][t], b[t][j]))
            out[i][j] = acc
    return out


def mat_inverse(rows, dom: Domain):
    """Inverse of a square matrix over a field; MathError when singular."""
    n = len(rows)
    cols = []
    for j in range(n):
        e = [dom.one if i == j else dom.zero for i in range(n)]
        cols.append(solve_linear(rows, e, dom))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def random_invertible(n: int, dom: Domain, rng):
    """Random n x n invertible matrix over a field domain."""
    for _ in range(64):
        m = [[dom.rand(rng) for _ in range(n)] for _ in range(n)]
        if not dom.is_zero(det(m, dom)):
            return m
    raise MathError("failed to draw an invertible matrix")
