"""Multivariate polynomials, Buchberger, and zero-dimensional counting.

Monomials are bare exponent tuples (helper functions below); polynomials are
dicts mapping exponent tuples to nonzero coefficients over an exactalg
domain.  Buchberger uses the Gebauer-Moeller pair update and normal (minimal
lcm) selection, returns a reduced basis, and counts reduction steps against
an optional budget.

Counting distinct solutions never leaves the base field: a random linear
form u gets a multiplication matrix on the standard monomial basis, its
characteristic polynomial is the eliminant of u, and the degree of the
squarefree part counts distinct points over the algebraic closure.  Two
independent draws of u must agree.  Rational points are extracted from left
eigenvectors of the multiplication matrix (the evaluation functionals),
which avoids one Groebner run per root.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import (
    AgreementError,
    BudgetExhaustedError,
    EliminantNotSplitError,
    FieldMismatchError,
    MathError,
    NonSimpleSolutionError,
    UsageError,
)
from .exactalg import Domain, PrimeField, UniPoly, fp_roots, poly_gcd, pow_mod, squarefree_part
from .linalg import char_poly as _char_poly
from .linalg import det as _det

# ---------------------------------------------------------------------------
# monomials as exponent tuples


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def mono_div(b, a):
    """Exponent of b / a; caller must ensure a divides b."""
    return tuple(x - y for x, y in zip(b, a))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a, b):
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def mono_degree(a):
    return sum(a)


class MonomialOrder:
    """Total order on exponent tuples via a sort key (larger key = larger)."""

    def __init__(self, name: str, key):
        self.name = name
        self.key = key

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.name == self.name

    def __hash__(self):
        return hash(self.name)


LEX = MonomialOrder("lex", lambda e: e)
GREVLEX = MonomialOrder("grevlex", lambda e: (sum(e), tuple(-x for x in reversed(e))))


def order_from_str(s: str) -> MonomialOrder:
    if s == "lex":
        return LEX
    if s == "grevlex":
        return GREVLEX
    raise UsageError(f"unknown monomial order {s!r}")


# ---------------------------------------------------------------------------
# multivariate polynomials


class MultiPoly:
    """Sparse multivariate polynomial: dict of exponent tuple -> coefficient."""

    __slots__ = ("dom", "vars", "terms")

    def __init__(self, dom: Domain, vars: tuple, terms: dict):
        self.dom = dom
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        for e, c in terms.items():
            if len(e) != n:
                raise UsageError("exponent arity does not match variables")
            if min(e, default=0) < 0:
                raise UsageError("negative exponent")
            if not dom.is_zero(c):
                clean[tuple(e)] = c
        self.terms = clean

    # -- constructors

    @classmethod
    def zero(cls, dom, vars):
        return cls(dom, vars, {})

    @classmethod
    def const(cls, dom, vars, c):
        return cls(dom, vars, {(0,) * len(vars): c})

    @classmethod
    def gen(cls, dom, vars, name):
        i = tuple(vars).index(name)
        e = tuple(1 if j == i else 0 for j in range(len(vars)))
        return cls(dom, vars, {e: dom.one})

    @classmethod
    def from_unipoly(cls, u: UniPoly, vars, name):
        i = tuple(vars).index(name)
        terms = {}
        for k, c in enumerate(u.coeffs):
            if not u.dom.is_zero(c):
                e = tuple(k if j == i else 0 for j in range(len(vars)))
                terms[e] = c
        return cls(u.dom, vars, terms)

    # -- structure

    @property
    def is_zero(self):
        return not self.terms

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def leading(self, order: MonomialOrder):
        if not self.terms:
            raise MathError("leading term of zero polynomial")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def coeff(self, e):
        return self.terms.get(tuple(e), self.dom.zero)

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.dom == other.dom
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=GREVLEX.key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v for v, k in zip(self.vars, e) if k
            )
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # -- arithmetic

    def _same(self, other):
        if self.dom != other.dom or self.vars != other.vars:
            raise FieldMismatchError("multivariate operands do not match")

    def __add__(self, other):
        self._same(other)
        dom = self.dom
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = dom.add(t.get(e, dom.zero), c)
            if dom.is_zero(s):
                t.pop(e, None)
            else:
                t[e] = s
        return MultiPoly(dom, self.vars, t)

    def __neg__(self):
        dom = self.dom
        return MultiPoly(dom, self.vars, {e: dom.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._same(other)
        dom = self.dom
        out: dict = {}
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = dom.add(out.get(e, dom.zero), dom.mul(ca, cb))
                if dom.is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return MultiPoly(dom, self.vars, out)

    def __pow__(self, n: int):
        if n < 0:
            raise UsageError("negative power")
        r = MultiPoly.const(self.dom, self.vars, self.dom.one)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def scale(self, c):
        dom = self.dom
        if dom.is_zero(c):
            return MultiPoly.zero(dom, self.vars)
        return MultiPoly(dom, self.vars, {e: dom.mul(k, c) for e, k in self.terms.items()})

    def monic(self, order: MonomialOrder):
        if self.is_zero:
            return self
        _, lc = self.leading(order)
        return self.scale(self.dom.inv(lc))

    # -- calculus and substitution

    def derivative(self, name: str):
        i = self.vars.index(name)
        dom = self.dom
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = e[:i] + (e[i] - 1,) + e[i + 1 :]
            s = dom.add(out.get(e2, dom.zero), dom.mul(c, dom.from_int(e[i])))
            if dom.is_zero(s):
                out.pop(e2, None)
            else:
                out[e2] = s
        return MultiPoly(dom, self.vars, out)

    def eval(self, values):
        if len(values) != len(self.vars):
            raise UsageError("wrong number of values")
        dom = self.dom
        acc = dom.zero
        for e, c in self.terms.items():
            t = c
            for v, k in zip(values, e):
                if k:
                    t = dom.mul(t, dom.pow(v, k))
            acc = dom.add(acc, t)
        return acc

    def substitute(self, assignments: dict):
        """Substitute scalars for some variables; result keeps all var slots."""
        dom = self.dom
        idx = {self.vars.index(n): v for n, v in assignments.items()}
        out = {}
        for e, c in self.terms.items():
            t = c
            e2 = list(e)
            for i, v in idx.items():
                if e[i]:
                    t = dom.mul(t, dom.pow(v, e[i]))
                e2[i] = 0
            e2 = tuple(e2)
            s = dom.add(out.get(e2, dom.zero), t)
            if dom.is_zero(s):
                out.pop(e2, None)
            else:
                out[e2] = s
        return MultiPoly(dom, self.vars, out)

    def drop_vars(self, names):
        keep = [i for i, v in enumerate(self.vars) if v not in names]
        for e in self.terms:
            for i, v in enumerate(self.vars):
                if v in names and e[i]:
                    raise UsageError(f"variable {v} still occurs")
        vars2 = tuple(self.vars[i] for i in keep)
        return MultiPoly(self.dom, vars2, {tuple(e[i] for i in keep): c for e, c in self.terms.items()})

    def extend_vars(self, vars2):
        """Reinterpret over a superset of variables (by name)."""
        pos = [tuple(vars2).index(v) for v in self.vars]
        n = len(vars2)
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * n
            for p, k in zip(pos, e):
                e2[p] = k
            out[tuple(e2)] = c
        return MultiPoly(self.dom, tuple(vars2), out)

    def homogenize(self, hvar: str):
        d = self.total_degree()
        vars2 = self.vars + (hvar,)
        out = {}
        for e, c in self.terms.items():
            out[e + (d - sum(e),)] = c
        return MultiPoly(self.dom, vars2, out)

    def dehomogenize(self, name: str):
        return self.substitute({name: self.dom.one}).drop_vars([name])

    def linear_change(self, mat):
        """x_i -> sum_j mat[i][j] x_j, exact expansion."""
        dom = self.dom
        n = len(self.vars)
        forms = []
        for i in range(n):
            t = {}
            for j in range(n):
                if not dom.is_zero(mat[i][j]):
                    e = tuple(1 if k == j else 0 for k in range(n))
                    t[e] = mat[i][j]
            forms.append(MultiPoly(dom, self.vars, t))
        # cache powers of each substituted variable
        powers: list[list[MultiPoly]] = [[MultiPoly.const(dom, self.vars, dom.one)] for _ in range(n)]
        maxdeg = [0] * n
        for e in self.terms:
            for i, k in enumerate(e):
                maxdeg[i] = max(maxdeg[i], k)
        for i in range(n):
            for _ in range(maxdeg[i]):
                powers[i].append(powers[i][-1] * forms[i])
        acc = MultiPoly.zero(dom, self.vars)
        for e, c in self.terms.items():
            t = MultiPoly.const(dom, self.vars, c)
            for i, k in enumerate(e):
                if k:
                    t = t * powers[i][k]
            acc = acc + t
        return acc

    def to_unipoly(self, name: str) -> UniPoly:
        i = self.vars.index(name)
        for e in self.terms:
            if any(k and j != i for j, k in enumerate(e)):
                raise UsageError("polynomial is not univariate in " + name)
        deg = max((e[i] for e in self.terms), default=-1)
        cs = [self.dom.zero] * (deg + 1)
        for e, c in self.terms.items():
            cs[e[i]] = c
        return UniPoly(self.dom, name, cs)


# ---------------------------------------------------------------------------
# reduction and Buchberger


@dataclass(frozen=True)
class IdealBasis:
    vars: tuple
    order: MonomialOrder
    gens: tuple
    is_gb: bool = False

    def contains_one(self):
        return any(g.total_degree() == 0 and not g.is_zero for g in self.gens)


def spoly(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    ef, cf = f.leading(order)
    eg, cg = g.leading(order)
    l = mono_lcm(ef, eg)
    dom = f.dom
    mf = MultiPoly(dom, f.vars, {mono_div(l, ef): dom.inv(cf)})
    mg = MultiPoly(dom, g.vars, {mono_div(l, eg): dom.inv(cg)})
    return mf * f - mg * g


def _reduce_terms(terms: dict, reducers, order, dom, budget=None):
    """Full reduction of a term dict by (lt, inv_lc, terms) reducers."""
    h = dict(terms)
    rem: dict = {}
    steps = 0
    key = order.key
    while h:
        lm = max(h, key=key)
        lc = h.pop(lm)
        hit = None
        for lt, inv_lc, gterms in reducers:
            if mono_divides(lt, lm):
                hit = (lt, inv_lc, gterms)
                break
        if hit is None:
            rem[lm] = lc
            continue
        lt, inv_lc, gterms = hit
        shift = mono_div(lm, lt)
        c = dom.mul(lc, inv_lc)
        for e, ce in gterms.items():
            if e == lt:
                continue
            e2 = tuple(x + y for x, y in zip(e, shift))
            s = dom.sub(h.get(e2, dom.zero), dom.mul(c, ce))
            if dom.is_zero(s):
                h.pop(e2, None)
            else:
                h[e2] = s
        steps += 1
        if budget is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise BudgetExhaustedError("reduction budget exhausted")
    return rem, steps


def _prep_reducers(polys, order):
    out = []
    for g in polys:
        lt, lc = g.leading(order)
        out.append((lt, g.dom.inv(lc), g.terms))
    return out


def normal_form(f: MultiPoly, basis: IdealBasis) -> MultiPoly:
    """Remainder of f on full division by the basis generators."""
    gens = [g for g in basis.gens if not g.is_zero]
    if not gens:
        return f
    red = _prep_reducers(gens, basis.order)
    rem, _ = _reduce_terms(f.terms, red, basis.order, f.dom)
    return MultiPoly(f.dom, f.vars, rem)


def _gm_update(lts, pairs, k):
    """Gebauer-Moeller pair update after appending generator k."""
    t = lts[k]
    lcms = {i: mono_lcm(lts[i], t) for i in range(k)}
    kept = set()
    for i, j in pairs:
        lij = mono_lcm(lts[i], lts[j])
        if not (mono_divides(t, lij) and lcms[i] != lij and lcms[j] != lij):
            kept.add((i, j))
    # keep only minimal new lcms
    cand = []
    for i in range(k):
        li = lcms[i]
        if not any(lcms[j] != li and mono_divides(lcms[j], li) for j in lcms):
            cand.append(i)
    by_lcm: dict = {}
    for i in cand:
        by_lcm.setdefault(lcms[i], []).append(i)
    for lcm_val, idxs in by_lcm.items():
        if any(mono_coprime(lts[i], t) for i in idxs):
            continue
        kept.add((idxs[0], k))
    return kept


def buchberger(
    gens,
    order: MonomialOrder = GREVLEX,
    budget: int | None = None,
) -> IdealBasis:
    """Reduced Groebner basis, normal selection + Gebauer-Moeller update."""
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        raise UsageError("empty generating set")
    dom = gens[0].dom
    vars_ = gens[0].vars
    for g in gens:
        if g.dom != dom or g.vars != vars_:
            raise FieldMismatchError("generators over mismatched rings")
    if not dom.is_field:
        raise UsageError("buchberger requires a field domain")
    counter = [budget if budget is not None else -1]
    track = counter if budget is not None else None

    basis: list[MultiPoly] = []
    lts: list = []
    pairs: set = set()
    for g in gens:
        red = _prep_reducers(basis, order) if basis else []
        rem, _ = _reduce_terms(g.terms, red, order, dom, track)
        if rem:
            h = MultiPoly(dom, vars_, rem).monic(order)
            basis.append(h)
            lts.append(h.leading(order)[0])
            pairs = _gm_update(lts, pairs, len(basis) - 1)

    heap = []
    tick = 0
    for (i, j) in pairs:
        heapq.heappush(heap, (order.key(mono_lcm(lts[i], lts[j])), tick, i, j))
        tick += 1
    in_heap = set(pairs)

    while heap:
        _, _, i, j = heapq.heappop(heap)
        if (i, j) not in in_heap:
            continue
        in_heap.discard((i, j))
        s = spoly(basis[i], basis[j], order)
        if s.is_zero:
            continue
        red = _prep_reducers(basis, order)
        rem, _ = _reduce_terms(s.terms, red, order, dom, track)
        if not rem:
            continue
        h = MultiPoly(dom, vars_, rem).monic(order)
        basis.append(h)
        lts.append(h.leading(order)[0])
        new_pairs = _gm_update(lts, in_heap, len(basis) - 1)
        for p in new_pairs - in_heap:
            heapq.heappush(heap, (order.key(mono_lcm(lts[p[0]], lts[p[1]])), tick, *p))
            tick += 1
        in_heap = new_pairs

    # minimalize: drop generators whose LT is divisible by another LT
    keep = []
    for i, g in enumerate(basis):
        if not any(
            j != i and mono_divides(lts[j], lts[i]) and (lts[j] != lts[i] or j < i)
            for j in range(len(basis))
        ):
            keep.append(i)
    minimal = [basis[i] for i in keep]
    # interreduce tails
    reduced = []
    for i, g in enumerate(minimal):
        others = [minimal[j] for j in range(len(minimal)) if j != i]
        red = _prep_reducers(others, order) if others else []
        rem, _ = _reduce_terms(g.terms, red, order, dom)
        if rem:
            reduced.append(MultiPoly(dom, vars_, rem).monic(order))
    reduced.sort(key=lambda g: order.key(g.leading(order)[0]), reverse=True)
    return IdealBasis(vars=vars_, order=order, gens=tuple(reduced), is_gb=True)


# ---------------------------------------------------------------------------
# zero-dimensional structure


def _require_gb(basis: IdealBasis):
    if not basis.is_gb:
        raise UsageError("operation requires a reduced Groebner basis")


def quotient_dimension(basis: IdealBasis):
    """Dimension of the quotient algebra, or None when infinite."""
    _require_gb(basis)
    if basis.contains_one():
        return 0
    n = len(basis.vars)
    lts = [g.leading(basis.order)[0] for g in basis.gens]
    bounds = [None] * n
    for e in lts:
        support = [i for i in range(n) if e[i]]
        if len(support) == 1:
            i = support[0]
            if bounds[i] is None or e[i] < bounds[i]:
                bounds[i] = e[i]
    if any(b is None for b in bounds):
        return None
    return len(_staircase(lts, bounds))


def standard_monomials(basis: IdealBasis):
    """Monomials outside the leading-term ideal, ascending in the order."""
    _require_gb(basis)
    if basis.contains_one():
        return []
    n = len(basis.vars)
    lts = [g.leading(basis.order)[0] for g in basis.gens]
    bounds = [None] * n
    for e in lts:
        support = [i for i in range(n) if e[i]]
        if len(support) == 1:
            i = support[0]
            if bounds[i] is None or e[i] < bounds[i]:
                bounds[i] = e[i]
    if any(b is None for b in bounds):
        raise MathError("quotient algebra is infinite dimensional")
    std = _staircase(lts, bounds)
    std.sort(key=basis.order.key)
    return std


def _staircase(lts, bounds):
    n = len(bounds)
    out = []
    e = [0] * n

    def rec(i):
        if i == n:
            ee = tuple(e)
            if not any(mono_divides(t, ee) for t in lts):
                out.append(ee)
            return
        for k in range(bounds[i]):
            e[i] = k
            rec(i + 1)
        e[i] = 0

    rec(0)
    return out


def multiplication_matrix(basis: IdealBasis, u: MultiPoly):
    """Matrix of multiplication by u on the standard monomial basis."""
    _require_gb(basis)
    std = standard_monomials(basis)
    return _mult_matrix_on(basis, u, std), std


def _nf_cache_for(basis: IdealBasis):
    order = basis.order
    dom = basis.gens[0].dom if basis.gens else None
    gb = [(g.leading(order)[0], g.terms) for g in basis.gens]
    return {"order": order, "dom": dom, "gb": gb, "cache": {}, "index": None}


def _nf_vector(ctx, std_index, target):
    """Normal form of a monomial as a dense vector over standard monomials."""
    cache = ctx["cache"]
    if target in cache:
        return cache[target]
    dom = ctx["dom"]
    order = ctx["order"]
    gb = ctx["gb"]
    D = len(std_index)
    stack = [target]
    while stack:
        e = stack[-1]
        if e in cache:
            stack.pop()
            continue
        if e in std_index:
            vec = [dom.zero] * D
            vec[std_index[e]] = dom.one
            cache[e] = vec
            stack.pop()
            continue
        hit = None
        for lt, terms in gb:
            if mono_divides(lt, e):
                hit = (lt, terms)
                break
        if hit is None:
            raise MathError("monomial outside standard set has no reducer")
        lt, terms = hit
        shift = mono_div(e, lt)
        children = []
        missing = []
        for et, ct in terms.items():
            if et == lt:
                continue
            e2 = tuple(x + y for x, y in zip(et, shift))
            children.append((e2, ct))
            if e2 not in cache:
                missing.append(e2)
        if missing:
            stack.extend(missing)
            continue
        vec = [dom.zero] * D
        for e2, ct in children:
            cvec = cache[e2]
            nct = dom.neg(ct)
            for idx in range(D):
                if not dom.is_zero(cvec[idx]):
                    vec[idx] = dom.add(vec[idx], dom.mul(nct, cvec[idx]))
        cache[e] = vec
        stack.pop()
    return cache[target]


def _mult_matrix_on(basis: IdealBasis, u: MultiPoly, std):
    dom = u.dom
    D = len(std)
    std_index = {e: i for i, e in enumerate(std)}
    ctx = _nf_cache_for(basis)
    cols = []
    for b in std:
        col = [dom.zero] * D
        for e, c in u.terms.items():
            vec = _nf_vector(ctx, std_index, mono_mul(e, b))
            for i in range(D):
                if not dom.is_zero(vec[i]):
                    col[i] = dom.add(col[i], dom.mul(c, vec[i]))
        cols.append(col)
    return [[cols[j][i] for j in range(D)] for i in range(D)]


class QuotientAlgebra(Domain):
    """F[x_1..x_n]/I as a coefficient ring, for zero-dimensional I.

    Elements are dense coordinate tuples over the standard monomial basis;
    products go through a multiplication table built once, so no reduction
    happens per operation.  This is a ring with zero divisors, not a field:
    only Domain ring operations are available, which is enough to evaluate
    polynomial expressions simultaneously at every point of the scheme.
    """

    is_field = False

    def __init__(self, basis: IdealBasis):
        _require_gb(basis)
        if quotient_dimension(basis) is None:
            raise UsageError("quotient algebra needs a zero-dimensional ideal")
        if basis.contains_one():
            raise UsageError("quotient algebra of the unit ideal is trivial")
        self.basis = basis
        self.base = basis.gens[0].dom
        self.char = self.base.char
        self.vars = basis.vars
        self.std = standard_monomials(basis)
        self.dim = len(self.std)
        self._index = {e: i for i, e in enumerate(self.std)}
        self._ctx = _nf_cache_for(basis)
        one = [self.base.zero] * self.dim
        one[self._index[(0,) * len(self.vars)]] = self.base.one
        self.zero = (self.base.zero,) * self.dim
        self.one = tuple(one)
        self._table = [[None] * self.dim for _ in range(self.dim)]
        for i in range(self.dim):
            for j in range(i, self.dim):
                v = tuple(_nf_vector(self._ctx, self._index, mono_mul(self.std[i], self.std[j])))
                self._table[i][j] = v
                self._table[j][i] = v

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        base = self.base
        acc = [base.zero] * self.dim
        for i, x in enumerate(a):
            if base.is_zero(x):
                continue
            row = self._table[i]
            for j, y in enumerate(b):
                if base.is_zero(y):
                    continue
                c = base.mul(x, y)
                vec = row[j]
                for k in range(self.dim):
                    t = vec[k]
                    if not base.is_zero(t):
                        acc[k] = base.add(acc[k], base.mul(c, t))
        return tuple(acc)

    def is_zero(self, a):
        return all(self.base.is_zero(c) for c in a)

    def from_int(self, n):
        c = self.base.from_int(n)
        out = [self.base.zero] * self.dim
        out[self._index[(0,) * len(self.vars)]] = c
        return tuple(out)

    def project(self, f: MultiPoly):
        """Image of a polynomial in the quotient."""
        if f.dom != self.base or f.vars != self.vars:
            raise FieldMismatchError("polynomial over a different ring")
        base = self.base
        acc = [base.zero] * self.dim
        for e, c in f.terms.items():
            vec = _nf_vector(self._ctx, self._index, e)
            for k in range(self.dim):
                if not base.is_zero(vec[k]):
                    acc[k] = base.add(acc[k], base.mul(c, vec[k]))
        return tuple(acc)

    def to_multipoly(self, a) -> MultiPoly:
        terms = {}
        for e, c in zip(self.std, a):
            if not self.base.is_zero(c):
                terms[e] = c
        return MultiPoly(self.base, self.vars, terms)

    def mult_matrix(self, a):
        """Matrix of multiplication by the element a on the standard basis."""
        base = self.base
        D = self.dim
        m = [[base.zero] * D for _ in range(D)]
        for k, c in enumerate(a):
            if base.is_zero(c):
                continue
            for j in range(D):
                vec = self._table[k][j]
                for i in range(D):
                    if not base.is_zero(vec[i]):
                        m[i][j] = base.add(m[i][j], base.mul(c, vec[i]))
        return m

    def __repr__(self):
        return f"{self.base!r}[{','.join(self.vars)}]/I(dim {self.dim})"

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)


def random_linear_form(vars_, dom, rng) -> MultiPoly:
    while True:
        coeffs = [dom.rand(rng) for _ in vars_]
        if any(not dom.is_zero(c) for c in coeffs):
            break
    terms = {}
    for i, c in enumerate(coeffs):
        if not dom.is_zero(c):
            e = tuple(1 if j == i else 0 for j in range(len(vars_)))
            terms[e] = c
    return MultiPoly(dom, tuple(vars_), terms)


def eliminant_of_form(basis: IdealBasis, u: MultiPoly, var: str = "t") -> UniPoly:
    """Characteristic polynomial of multiplication by u on the quotient."""
    m, _ = multiplication_matrix(basis, u)
    return _char_poly(m, u.dom, var)


def distinct_point_count(basis: IdealBasis, rng, attempts: int = 6) -> int:
    """Number of distinct solutions over the algebraic closure.

    Degree of the squarefree part of the eliminant of a random separating
    linear form; two consecutive independent draws must agree.
    """
    _require_gb(basis)
    if basis.contains_one():
        return 0
    if quotient_dimension(basis) is None:
        raise MathError("system is not zero dimensional")
    dom = basis.gens[0].dom
    counts = []
    for _ in range(attempts):
        u = random_linear_form(basis.vars, dom, rng)
        e = eliminant_of_form(basis, u)
        counts.append(squarefree_part(e).degree)
        if len(counts) >= 2 and counts[-1] == counts[-2]:
            return counts[-1]
    raise AgreementError(f"eliminant degrees kept disagreeing: {counts}")


def eliminate(gens_or_basis, keep, budget: int | None = None) -> IdealBasis:
    """Elimination ideal basis in the kept variables (lex block order)."""
    if isinstance(gens_or_basis, IdealBasis):
        gens = list(gens_or_basis.gens)
    else:
        gens = list(gens_or_basis)
    if not gens:
        raise UsageError("empty generating set")
    vars_ = gens[0].vars
    keep = tuple(keep)
    for v in keep:
        if v not in vars_:
            raise UsageError(f"unknown variable {v!r}")
    dropped = tuple(v for v in vars_ if v not in keep)
    new_order_vars = dropped + keep
    gens2 = [g.extend_vars(new_order_vars) for g in gens]
    gb = buchberger(gens2, LEX, budget=budget)
    kept_gens = []
    for g in gb.gens:
        if all(all(e[i] == 0 for i in range(len(dropped))) for e in g.terms):
            kept_gens.append(g.drop_vars(dropped))
    return IdealBasis(vars=keep, order=LEX, gens=tuple(kept_gens), is_gb=True)


def jacobian_det_at(gens, vars_, point):
    """det of the Jacobian of gens w.r.t. vars_ evaluated at point."""
    gens = list(gens)
    if len(gens) != len(vars_):
        raise UsageError("jacobian requires as many generators as variables")
    dom = gens[0].dom
    rows = []
    for g in gens:
        rows.append([g.derivative(v).eval(point) for v in vars_])
    return _det(rows, dom)


def solve_rational_points(basis: IdealBasis, rng, verify_count: bool = True):
    """All solutions with coordinates in the base prime field.

    Requires the eliminant of a separating form to split into distinct
    linear factors over GF(p); raises EliminantNotSplitError otherwise so
    callers can retry with another prime.  Points are read off left
    eigenvectors of the multiplication matrix (evaluation functionals).
    """
    _require_gb(basis)
    dom = basis.gens[0].dom
    if not isinstance(dom, PrimeField):
        raise UsageError("rational point extraction works over prime fields")
    if basis.contains_one():
        return []
    std = standard_monomials(basis)
    D = len(std)
    if D == 0:
        return []
    std_index = {e: i for i, e in enumerate(std)}
    one_exp = (0,) * len(basis.vars)
    if one_exp not in std_index:
        raise MathError("constant monomial missing from standard basis")
    j0 = std_index[one_exp]

    # E squarefree iff the scheme is reduced AND u separates; a fresh u fixes
    # the second failure mode, so retry a few forms before giving up
    m = e = esf = None
    for _ in range(4):
        u = random_linear_form(basis.vars, dom, rng)
        m, _ = multiplication_matrix(basis, u)
        e = _char_poly(m, dom)
        esf = squarefree_part(e)
        if esf.degree == e.degree:
            break
    else:
        raise NonSimpleSolutionError("eliminant is not squarefree")
    x = UniPoly.gen(dom, esf.var)
    frob = pow_mod(x, dom.p, esf)
    if poly_gcd(esf, frob - x).degree != esf.degree:
        raise EliminantNotSplitError("eliminant does not split over GF(p)")
    roots = fp_roots(esf, rng)

    # normal forms of the coordinate functions, for coordinate read-off
    ctx = _nf_cache_for(basis)
    coord_vecs = []
    for i in range(len(basis.vars)):
        exp = tuple(1 if j == i else 0 for j in range(len(basis.vars)))
        coord_vecs.append(_nf_vector(ctx, std_index, exp))

    points = []
    for theta in roots:
        # left kernel of (M - theta I): evaluation functional of the point
        a = [[dom.sub(m[i][j], theta if i == j else dom.zero) for i in range(D)] for j in range(D)]
        w = _kernel_vector(a, dom)
        if dom.is_zero(w[j0]):
            raise NonSimpleSolutionError("eigenfunctional does not evaluate 1")
        inv = dom.inv(w[j0])
        w = [dom.mul(c, inv) for c in w]
        pt = tuple(
            _dot(dom, w, cv) for cv in coord_vecs
        )
        for g in basis.gens:
            if not dom.is_zero(g.eval(pt)):
                raise MathError("extracted point fails to satisfy the system")
        points.append(pt)
    if len(set(points)) != len(points):
        raise NonSimpleSolutionError("separating form failed to separate")
    if verify_count:
        check = distinct_point_count(basis, rng)
        if check != len(points):
            raise EliminantNotSplitError(
                f"rational points {len(points)} != distinct count {check}"
            )
    return points


def _dot(dom, a, b):
    acc = dom.zero
    for x, y in zip(a, b):
        if not dom.is_zero(x) and not dom.is_zero(y):
            acc = dom.add(acc, dom.mul(x, y))
    return acc


def _kernel_vector(rows, dom):
    """One nonzero kernel vector; raises when nullity != 1."""
    n = len(rows)
    m = [list(r) for r in rows]
    pivots = {}
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, n):
            if not dom.is_zero(m[i][c]):
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = dom.inv(m[r][c])
        m[r] = [dom.mul(x, inv) for x in m[r]]
        for i in range(n):
            if i != r and not dom.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [dom.sub(a, dom.mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots[c] = r
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise NonSimpleSolutionError(f"kernel dimension {len(free)} != 1")
    fc = free[0]
    v = [dom.zero] * n
    v[fc] = dom.one
    for c, pr in pivots.items():
        v[c] = dom.neg(m[pr][fc])
    return v
