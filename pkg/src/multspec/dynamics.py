"""Degree-d self-maps of the projective line and multiplier invariants.

A map is a pair of homogeneous degree-d binary forms (F, G) with nonzero
resultant, stored as full coefficient tuples in descending powers of X
(num[0] is the X^d coefficient).  Construction scales so the first nonzero
coefficient of the concatenated tuple is 1, which makes equality of
coefficient vectors meaningful.

The n-multiplier spectrum is read off a characteristic polynomial
Res_z(Phi_n, w * Den^2 - Num) where Phi_n is the monic vanishing polynomial
of the affine n-periodic points and Num/Den^2 is the derivative of the n-th
iterate.  The map is first conjugated so that no n-periodic point sits at
infinity; the conjugating candidates come from a fixed internal sequence, so
results never depend on caller seeds (they are conjugation invariants).
The resultant is sampled at d^n + 2 values of w and interpolated whenever
the field is large enough (Phi_n monic makes specialization exact), with a
generic bivariate resultant as the small-field fallback.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    DegenerateMapError,
    FieldMismatchError,
    MathError,
    RepositionError,
    UsageError,
)
from .exactalg import (
    Domain,
    PolyRing,
    QQ,
    UniPoly,
    bareiss_det,
    derivative,
    interpolate,
    poly_gcd,
    resultant,
    sylvester_matrix,
)

# ---------------------------------------------------------------------------
# binary forms as full descending coefficient tuples


def form_eval(coeffs, dom, x, y):
    """Evaluate sum coeffs[i] X^(d-i) Y^i at (x, y)."""
    d = len(coeffs) - 1
    acc = dom.zero
    xp = [dom.one]
    yp = [dom.one]
    for _ in range(d):
        xp.append(dom.mul(xp[-1], x))
        yp.append(dom.mul(yp[-1], y))
    for i, c in enumerate(coeffs):
        if not dom.is_zero(c):
            acc = dom.add(acc, dom.mul(c, dom.mul(xp[d - i], yp[i])))
    return acc


def _form_mul(a, b, dom):
    out = [dom.zero] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if dom.is_zero(ca):
            continue
        for j, cb in enumerate(b):
            out[i + j] = dom.add(out[i + j], dom.mul(ca, cb))
    return out


def _form_add(a, b, dom):
    if len(a) != len(b):
        raise MathError("form degree mismatch")
    return [dom.add(x, y) for x, y in zip(a, b)]


def _form_scale(a, c, dom):
    return [dom.mul(x, c) for x in a]


def _form_compose(coeffs, p, q, dom):
    """C(P, Q) for C of formal degree len(coeffs)-1 and forms P, Q."""
    acc = [coeffs[0]]
    qpow = [dom.one]
    for c in coeffs[1:]:
        acc = _form_mul(acc, p, dom)
        qpow = _form_mul(qpow, q, dom)
        if not dom.is_zero(c):
            tail = _form_scale(qpow, c, dom)
            tail = [dom.zero] * (len(acc) - len(tail)) + tail
            acc = _form_add(acc, tail, dom)
    return acc


def _affine(coeffs, dom, var="z") -> UniPoly:
    return UniPoly(dom, var, list(reversed(coeffs)))


def _form_resultant(num, den, dom, d):
    f = _affine(num, dom)
    g = _affine(den, dom)
    if f.is_zero or g.is_zero:
        return dom.zero
    return bareiss_det(sylvester_matrix(f, g, d, d), dom)


# ---------------------------------------------------------------------------
# points and fractional linear maps


class ProjPoint:
    """Point of P^1, normalized to (x, 1) or (1, 0)."""

    __slots__ = ("dom", "x", "y")

    def __init__(self, dom: Domain, x, y):
        if not dom.is_field:
            raise UsageError("points require a field domain")
        if dom.is_zero(x) and dom.is_zero(y):
            raise UsageError("(0 : 0) is not a projective point")
        if not dom.is_zero(y):
            x = dom.div(x, y)
            y = dom.one
        else:
            x = dom.one
        self.dom = dom
        self.x = x
        self.y = y

    @classmethod
    def affine(cls, dom, c):
        return cls(dom, c, dom.one)

    @classmethod
    def infinity(cls, dom):
        return cls(dom, dom.one, dom.zero)

    @property
    def is_infinity(self):
        return self.dom.is_zero(self.y)

    def __eq__(self, other):
        return (
            isinstance(other, ProjPoint)
            and self.dom == other.dom
            and self.x == other.x
            and self.y == other.y
        )

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return "inf" if self.is_infinity else f"{self.x}"


class Mobius:
    """Invertible fractional linear map z -> (a z + b) / (c z + d)."""

    __slots__ = ("dom", "a", "b", "c", "d")

    def __init__(self, dom: Domain, a, b, c, d):
        det = dom.sub(dom.mul(a, d), dom.mul(b, c))
        if dom.is_zero(det):
            raise DegenerateMapError("Mobius determinant vanishes")
        self.dom = dom
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls, dom):
        return cls(dom, dom.one, dom.zero, dom.zero, dom.one)

    @classmethod
    def from_ints(cls, dom, a, b, c, d):
        return cls(dom, dom.from_int(a), dom.from_int(b), dom.from_int(c), dom.from_int(d))

    def inverse(self):
        dom = self.dom
        return Mobius(dom, self.d, dom.neg(self.b), dom.neg(self.c), self.a)

    def apply(self, p: ProjPoint) -> ProjPoint:
        dom = self.dom
        x = dom.add(dom.mul(self.a, p.x), dom.mul(self.b, p.y))
        y = dom.add(dom.mul(self.c, p.x), dom.mul(self.d, p.y))
        return ProjPoint(dom, x, y)

    def is_identity(self):
        dom = self.dom
        return (
            dom.is_zero(self.b)
            and dom.is_zero(self.c)
            and self.a == self.d
            and not dom.is_zero(self.a)
        )


# ---------------------------------------------------------------------------
# rational self-maps


class ProjMap:
    """Morphism of P^1 of degree d >= 2 given by coprime degree-d forms."""

    __slots__ = ("dom", "d", "num", "den")

    def __init__(self, dom: Domain, num, den, check: bool = True):
        num = list(num)
        den = list(den)
        if len(num) != len(den) or len(num) < 3:
            raise UsageError("coefficient tuples must share length d+1 >= 3")
        d = len(num) - 1
        if not dom.is_field:
            raise UsageError("maps require a field domain")
        first = None
        for c in num + den:
            if not dom.is_zero(c):
                first = c
                break
        if first is None:
            raise DegenerateMapError("zero map")
        inv = dom.inv(first)
        num = [dom.mul(c, inv) for c in num]
        den = [dom.mul(c, inv) for c in den]
        if check and dom.is_zero(_form_resultant(num, den, dom, d)):
            raise DegenerateMapError("forms share a root: not a degree-d morphism")
        self.dom = dom
        self.d = d
        self.num = tuple(num)
        self.den = tuple(den)

    @classmethod
    def from_affine(cls, num: UniPoly, den: UniPoly, d: int | None = None):
        if num.dom != den.dom or num.var != den.var:
            raise FieldMismatchError("numerator and denominator domains differ")
        if num.is_zero or den.is_zero:
            raise DegenerateMapError("zero numerator or denominator")
        dom = num.dom
        dd = max(num.degree, den.degree)
        if d is not None:
            if d < dd:
                raise UsageError("declared degree below actual degree")
            dd = d
        nc = [num.coeff(dd - i) for i in range(dd + 1)]
        dc = [den.coeff(dd - i) for i in range(dd + 1)]
        return cls(dom, nc, dc)

    @classmethod
    def from_polynomial(cls, p: UniPoly):
        dom = p.dom
        d = p.degree
        den = [dom.zero] * d + [dom.one]
        return cls(dom, [p.coeff(d - i) for i in range(d + 1)], den)

    def affine_num(self, var="z") -> UniPoly:
        return _affine(self.num, self.dom, var)

    def affine_den(self, var="z") -> UniPoly:
        return _affine(self.den, self.dom, var)

    @property
    def is_polynomial(self):
        return all(self.dom.is_zero(c) for c in self.den[:-1])

    def apply(self, p: ProjPoint) -> ProjPoint:
        dom = self.dom
        x = form_eval(self.num, dom, p.x, p.y)
        y = form_eval(self.den, dom, p.x, p.y)
        return ProjPoint(dom, x, y)

    def __eq__(self, other):
        return (
            isinstance(other, ProjMap)
            and self.dom == other.dom
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"({self.affine_num()}) / ({self.affine_den()})"


def conjugate(phi: ProjMap, m: Mobius) -> ProjMap:
    """m^-1 . phi . m, same multiplier spectra in new coordinates."""
    if phi.dom != m.dom:
        raise FieldMismatchError("map and Mobius over different fields")
    dom = phi.dom
    mx = [m.a, m.b]
    my = [m.c, m.d]
    f1 = _form_compose(list(phi.num), mx, my, dom)
    g1 = _form_compose(list(phi.den), mx, my, dom)
    # postcompose with the adjugate of m (projective inverse)
    num = _form_add(_form_scale(f1, m.d, dom), _form_scale(g1, dom.neg(m.b), dom), dom)
    den = _form_add(_form_scale(f1, dom.neg(m.c), dom), _form_scale(g1, m.a, dom), dom)
    return ProjMap(dom, num, den, check=False)


def iterate(phi: ProjMap, n: int) -> ProjMap:
    """phi^n as a degree d^n morphism (composition keeps forms coprime)."""
    if n < 1:
        raise UsageError("iteration count must be >= 1")
    dom = phi.dom
    num, den = list(phi.num), list(phi.den)
    for _ in range(n - 1):
        num, den = (
            _form_compose(list(phi.num), num, den, dom),
            _form_compose(list(phi.den), num, den, dom),
        )
    return ProjMap(dom, num, den, check=False)


def period_polynomial(phi: ProjMap, n: int) -> UniPoly:
    """Monic vanishing polynomial of the affine points with phi^n(z) = z.

    Degree is d^n + 1 exactly when no n-periodic point sits at infinity;
    otherwise the degree drops and callers reposition first.
    """
    psi = iterate(phi, n) if n > 1 else phi
    z = UniPoly.gen(phi.dom, "z")
    v = psi.affine_num() - z * psi.affine_den()
    if v.is_zero:
        raise MathError("degenerate period polynomial")
    return v.monic()


_REPOSITION_SEED = 0x5EEDBA5E


def _reposition_candidates(dom, budget: int = 32):
    """Fixed deterministic Mobius sequence, identity first."""
    yield Mobius.identity(dom)
    rng = random.Random(_REPOSITION_SEED)
    produced = 1
    while produced < budget:
        a, b, c, d = (rng.randint(-9, 9) for _ in range(4))
        try:
            yield Mobius.from_ints(dom, a, b, c, d)
        except DegenerateMapError:
            continue
        produced += 1


def _good_position(phi: ProjMap, n: int):
    """Conjugate of phi with all n-periodic points affine, plus its data."""
    target = phi.d ** n + 1
    for m in _reposition_candidates(phi.dom):
        psi = phi if m.is_identity() else conjugate(phi, m)
        it = iterate(psi, n) if n > 1 else psi
        z = UniPoly.gen(phi.dom, "z")
        nn, dd = it.affine_num(), it.affine_den()
        v = nn - z * dd
        if v.is_zero or v.degree != target:
            continue
        phin = v.monic()
        if poly_gcd(phin, dd).degree != 0:
            # impossible for a morphism; kept as a cheap sanity check
            raise MathError("period polynomial shares a root with denominator")
        return psi, phin, nn, dd
    raise RepositionError(f"no conjugate kept Per_{n} affine within budget")


def multiplier_char_poly(phi: ProjMap, n: int) -> UniPoly:
    """Monic char poly of the multiplier at the d^n + 1 points of period n.

    prod over points P with phi^n(P) = P of (w - (phi^n)'(P)), counted with
    the multiplicity of P as a root of the period polynomial.
    """
    if n < 1:
        raise UsageError("period must be >= 1")
    dom = phi.dom
    _, phin, nn, dd = _good_position(phi, n)
    target = phi.d ** n + 1
    num = derivative(nn) * dd - nn * derivative(dd)
    den2 = dd * dd
    if dom.char == 0 or dom.char >= target + 1:
        # sample w, take exact univariate resultants, interpolate
        xs = [dom.from_int(k) for k in range(target + 1)]
        ys = []
        for c in xs:
            g = den2.scale(c) - num
            if g.is_zero:
                ys.append(dom.zero)
            else:
                ys.append(resultant(phin, g))
        r = interpolate(xs, ys, dom, "w")
    else:
        # small field: one bivariate resultant instead of interpolation
        ring = PolyRing(dom, "w")

        def lift(p, shift):
            return p.map_coeffs(ring, lambda c: UniPoly(dom, "w", [dom.zero] * shift + [c]))

        g = lift(den2, 1) - lift(num, 0)
        r = resultant(lift(phin, 0), g)
    if r.is_zero or r.degree != target:
        raise MathError("multiplier characteristic polynomial has wrong degree")
    return r.monic()


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class SigmaVector:
    """Elementary symmetric functions of the n-multiplier spectrum."""

    dom: Domain
    d: int
    n: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.d ** self.n + 1:
            raise UsageError("sigma vector has wrong length")


@dataclass(frozen=True)
class TauImage:
    """Sigma vectors for all levels 1..n."""

    dom: Domain
    d: int
    n: int
    sigmas: tuple

    def __post_init__(self):
        if len(self.sigmas) != self.n:
            raise UsageError("tau image has wrong number of levels")


@dataclass(frozen=True)
class RelationResidual:
    theorem: object
    corollary: object | None = None


def sigma_n(phi: ProjMap, n: int) -> SigmaVector:
    """sigma_{n,i} = i-th elementary symmetric function of the n-multipliers."""
    char = multiplier_char_poly(phi, n)
    dom = phi.dom
    target = char.degree
    sign = dom.one
    vals = []
    for i in range(1, target + 1):
        sign = dom.neg(sign)
        vals.append(dom.mul(sign, char.coeff(target - i)))
    return SigmaVector(dom=dom, d=phi.d, n=n, values=tuple(vals))


def tau(phi: ProjMap, n: int) -> TauImage:
    return TauImage(
        dom=phi.dom, d=phi.d, n=n, sigmas=tuple(sigma_n(phi, k) for k in range(1, n + 1))
    )


def multiplier_at_point(phi: ProjMap, p: ProjPoint, n: int):
    """(phi^n)'(p) for a point of period dividing n, as a scalar."""
    if phi.dom != p.dom:
        raise FieldMismatchError("point and map over different fields")
    dom = phi.dom
    orbit = [p]
    q = p
    for _ in range(n):
        q = phi.apply(q)
        orbit.append(q)
    if orbit[-1] != p:
        raise MathError("point is not periodic of period dividing n")
    if any(pt.is_infinity for pt in orbit):
        for m in _reposition_candidates(dom):
            if m.is_identity():
                continue
            minv = m.inverse()
            moved = [minv.apply(pt) for pt in orbit]
            if all(not pt.is_infinity for pt in moved):
                return multiplier_at_point(conjugate(phi, m), moved[0], n)
        raise RepositionError("could not move the orbit off infinity")
    nn, dd = phi.affine_num(), phi.affine_den()
    num = derivative(nn) * dd - nn * derivative(dd)
    den2 = dd * dd
    acc = dom.one
    for pt in orbit[:-1]:
        acc = dom.mul(acc, dom.div(num.eval(pt.x), den2.eval(pt.x)))
    return acc


def sigma1_relation_residual(sv: SigmaVector, d: int, is_polynomial: bool = False):
    """Fixed-point relation residual(s); zero for every degree-d map.

    The d+1 fixed-point multipliers satisfy sum 1/(1 - lambda) = 1 away from
    lambda = 1, equivalently P'(1) = P(1) for P(t) = prod (t - lambda_i),
    which expands to the polynomial identity evaluated here (valid for all
    maps).  With e_k = sigma_{1,k}:

        sum_{k=0}^{d} (-1)^k (d - k) e_k + (-1)^(d+2) e_{d+1} = 0

    For polynomial maps e_{d+1} = 0 and the truncated sum vanishes too.
    """
    if sv.n != 1:
        raise UsageError("relation applies to level-1 sigma vectors")
    if sv.d != d or len(sv.values) != d + 2 - 1:
        raise UsageError("sigma vector does not match the stated degree")
    dom = sv.dom
    e = (dom.one,) + sv.values  # e[0] = 1
    acc = dom.zero
    sign = dom.one
    for k in range(d + 1):
        acc = dom.add(acc, dom.mul(sign, dom.mul(dom.from_int(d - k), e[k])))
        sign = dom.neg(sign)
    # sign now equals (-1)^(d+1); the last term carries (-1)^(d+2)
    theorem = dom.add(acc, dom.mul(dom.neg(sign), e[d + 1]))
    corollary = acc if is_polynomial else None
    return RelationResidual(theorem=theorem, corollary=corollary)


# ---------------------------------------------------------------------------
# random map generation (experiments and tests)


def random_map(dom: Domain, d: int, rng, polynomial: bool = False, height: int = 20) -> ProjMap:
    """Random degree-d morphism; rejection sampling on the resultant."""
    if d < 2:
        raise UsageError("degree must be >= 2")
    draw = (lambda: QQ.rand(rng, height)) if dom == QQ else (lambda: dom.rand(rng))
    for _ in range(200):
        num = [draw() for _ in range(d + 1)]
        if polynomial:
            if dom.is_zero(num[0]):
                num[0] = dom.one
            den = [dom.zero] * d + [dom.one]
        else:
            den = [draw() for _ in range(d + 1)]
        try:
            return ProjMap(dom, num, den)
        except DegenerateMapError:
            continue
    raise MathError("failed to draw a nondegenerate map")
