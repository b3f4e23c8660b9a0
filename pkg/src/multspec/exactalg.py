"""Exact scalar domains and dense univariate polynomial algebra.

Scalars live in one of three coefficient domains: the rationals QQ (values
are `fractions.Fraction`), a prime field GF(p) (values are ints in [0, p)),
or the integer ring ZZ used internally to keep resultants fraction-free.
`PolyRing` wraps any of these as a coefficient domain whose elements are
themselves polynomials, which is how resultants with one free parameter are
computed.

Polynomials are immutable dense coefficient tuples in ascending order.  The
zero polynomial has degree -1.  Resultants go through a subresultant
polynomial remainder sequence (fraction-free over ZZ and ZZ[t]); a Bareiss
determinant of the Sylvester matrix is kept as the reference path and for
homogeneous resultants where formal degrees matter.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldMismatchError, MathError, UsageError

# ---------------------------------------------------------------------------
# primality


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(rng, bits: int, residue: int | None = None, modulus: int = 1) -> int:
    """Random prime with `bits` bits, optionally p = residue (mod modulus)."""
    if bits < 3:
        raise UsageError("prime size too small")
    while True:
        n = rng.randrange(1 << (bits - 1), 1 << bits) | 1
        if modulus > 1:
            n += (residue - n) % modulus
            if n.bit_length() != bits or n % 2 == 0:
                continue
        if n > 5 and is_prime(n):
            return n


# ---------------------------------------------------------------------------
# scalar domains


class Domain:
    """Common interface: exact ring operations on raw scalar values."""

    is_field = False
    char = 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def pow(self, a, n: int):
        r = self.one
        for _ in range(n):
            r = self.mul(r, a)
        return r

    def is_zero(self, a) -> bool:
        return a == self.zero

    def exact_div(self, a, b):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError


class RationalField(Domain):
    is_field = True
    zero = Fraction(0)
    one = Fraction(1)

    def pow(self, a, n):
        return a ** n

    def inv(self, a):
        return 1 / a

    def div(self, a, b):
        return a / b

    exact_div = div

    def from_int(self, n):
        return Fraction(n)

    def from_rational(self, fr):
        return Fraction(fr)

    def rand(self, rng, height: int = 20):
        return Fraction(rng.randint(-height, height), rng.randint(1, height))

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class IntegerRing(Domain):
    zero = 0
    one = 1

    def pow(self, a, n):
        return a ** n

    def exact_div(self, a, b):
        q, r = divmod(a, b)
        if r:
            raise MathError("inexact integer division")
        return q

    def from_int(self, n):
        return n

    def __repr__(self):
        return "ZZ"

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")


class PrimeField(Domain):
    """GF(p) for an odd prime p; values are canonical ints in [0, p)."""

    is_field = True
    zero = 0
    one = 1

    def __init__(self, p: int):
        if p < 3 or p % 2 == 0 or not is_prime(p):
            raise UsageError(f"modulus must be an odd prime, got {p}")
        self.p = p
        self.char = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def pow(self, a, n):
        return pow(a, n, self.p)

    def inv(self, a):
        if a % self.p == 0:
            raise MathError("division by zero in GF(p)")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    exact_div = div

    def from_int(self, n):
        return n % self.p

    def from_rational(self, fr):
        fr = Fraction(fr)
        if fr.denominator % self.p == 0:
            raise MathError(f"denominator of {fr} vanishes mod {self.p}")
        return fr.numerator * pow(fr.denominator, -1, self.p) % self.p

    def rand(self, rng):
        return rng.randrange(self.p)

    def rand_nonzero(self, rng):
        return rng.randrange(1, self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()
ZZ = IntegerRing()

_GF_CACHE: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    dom = _GF_CACHE.get(p)
    if dom is None:
        dom = _GF_CACHE[p] = PrimeField(p)
    return dom


class PolyRing(Domain):
    """Univariate polynomials over `base` acting as a coefficient domain."""

    def __init__(self, base: Domain, var: str):
        self.base = base
        self.var = var
        self.char = base.char
        self.zero = UniPoly.zero(base, var)
        self.one = UniPoly.const(base, var, base.one)

    def is_zero(self, a):
        return a.is_zero

    def exact_div(self, a, b):
        return a.exact_div(b)

    def from_int(self, n):
        return UniPoly.const(self.base, self.var, self.base.from_int(n))

    def __repr__(self):
        return f"{self.base!r}[{self.var}]"

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and other.base == self.base
            and other.var == self.var
        )

    def __hash__(self):
        return hash(("PolyRing", self.base, self.var))


def _coerce_same(f: "UniPoly", g: "UniPoly"):
    if f.dom != g.dom or f.var != g.var:
        raise FieldMismatchError(
            f"polynomials over {f.dom!r}[{f.var}] and {g.dom!r}[{g.var}]"
        )


# ---------------------------------------------------------------------------
# dense univariate polynomials


class UniPoly:
    """Immutable dense univariate polynomial; coeffs ascending."""

    __slots__ = ("dom", "var", "coeffs")

    def __init__(self, dom: Domain, var: str, coeffs):
        cs = list(coeffs)
        while cs and dom.is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("UniPoly is immutable")

    # -- constructors

    @classmethod
    def zero(cls, dom, var):
        return cls(dom, var, ())

    @classmethod
    def const(cls, dom, var, c):
        return cls(dom, var, (c,))

    @classmethod
    def gen(cls, dom, var):
        return cls(dom, var, (dom.zero, dom.one))

    @classmethod
    def from_ints(cls, dom, var, ints):
        return cls(dom, var, [dom.from_int(n) for n in ints])

    # -- structure

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        if not self.coeffs:
            raise MathError("leading coefficient of zero polynomial")
        return self.coeffs[-1]

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.dom.zero

    def __eq__(self, other):
        return (
            isinstance(other, UniPoly)
            and self.dom == other.dom
            and self.var == other.var
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def __repr__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeff(i)
            if self.dom.is_zero(c):
                continue
            if i == 0:
                parts.append(f"{c}")
            elif i == 1:
                parts.append(f"({c})*{self.var}")
            else:
                parts.append(f"({c})*{self.var}^{i}")
        return " + ".join(parts)

    # -- arithmetic

    def __add__(self, other):
        _coerce_same(self, other)
        dom = self.dom
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, c in enumerate(b):
            cs[i] = dom.add(cs[i], c)
        return UniPoly(dom, self.var, cs)

    def __neg__(self):
        dom = self.dom
        return UniPoly(dom, self.var, [dom.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        _coerce_same(self, other)
        dom = self.dom
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly.zero(dom, self.var)
        cs = [dom.zero] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if dom.is_zero(ca):
                continue
            for j, cb in enumerate(b):
                cs[i + j] = dom.add(cs[i + j], dom.mul(ca, cb))
        return UniPoly(dom, self.var, cs)

    def __pow__(self, n: int):
        if n < 0:
            raise UsageError("negative polynomial power")
        r = UniPoly.const(self.dom, self.var, self.dom.one)
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
            return UniPoly.zero(dom, self.var)
        return UniPoly(dom, self.var, [dom.mul(a, c) for a in self.coeffs])

    def shift(self, k: int):
        """Multiply by var**k."""
        if self.is_zero:
            return self
        return UniPoly(self.dom, self.var, (self.dom.zero,) * k + self.coeffs)

    def exact_scalar_div(self, c):
        dom = self.dom
        return UniPoly(dom, self.var, [dom.exact_div(a, c) for a in self.coeffs])

    def monic(self):
        if self.is_zero:
            return self
        dom = self.dom
        if not dom.is_field:
            raise UsageError("monic requires a field domain")
        inv = dom.inv(self.lc)
        return self.scale(inv)

    def divmod(self, other):
        """Quotient and remainder over a field domain."""
        _coerce_same(self, other)
        dom = self.dom
        if not dom.is_field:
            raise UsageError("divmod requires a field domain")
        if other.is_zero:
            raise MathError("polynomial division by zero")
        q = [dom.zero] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        db, lb = other.degree, other.lc
        inv = dom.inv(lb)
        for i in range(len(r) - 1, db - 1, -1):
            if dom.is_zero(r[i]):
                continue
            f = dom.mul(r[i], inv)
            q[i - db] = f
            for j, c in enumerate(other.coeffs):
                r[i - db + j] = dom.sub(r[i - db + j], dom.mul(f, c))
        return UniPoly(dom, self.var, q), UniPoly(dom, self.var, r)

    def monic_divmod(self, other):
        """Quotient and remainder by a monic divisor; ring operations only."""
        _coerce_same(self, other)
        dom = self.dom
        if other.is_zero or other.lc != dom.one:
            raise UsageError("monic_divmod needs a monic divisor")
        q = [dom.zero] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        db = other.degree
        for i in range(len(r) - 1, db - 1, -1):
            if dom.is_zero(r[i]):
                continue
            f = r[i]
            q[i - db] = f
            for j, c in enumerate(other.coeffs):
                r[i - db + j] = dom.sub(r[i - db + j], dom.mul(f, c))
        return UniPoly(dom, self.var, q), UniPoly(dom, self.var, r)

    def exact_div(self, other):
        """Exact polynomial division over any domain; raises when inexact."""
        _coerce_same(self, other)
        dom = self.dom
        if other.is_zero:
            raise MathError("polynomial division by zero")
        if self.is_zero:
            return self
        if self.degree < other.degree:
            raise MathError("inexact polynomial division")
        q = [dom.zero] * (self.degree - other.degree + 1)
        r = list(self.coeffs)
        db = other.degree
        for i in range(len(r) - 1, db - 1, -1):
            if dom.is_zero(r[i]):
                continue
            f = dom.exact_div(r[i], other.lc)
            q[i - db] = f
            for j, c in enumerate(other.coeffs):
                r[i - db + j] = dom.sub(r[i - db + j], dom.mul(f, c))
        if any(not dom.is_zero(c) for c in r):
            raise MathError("inexact polynomial division")
        return UniPoly(dom, self.var, q)

    def eval(self, c):
        dom = self.dom
        acc = dom.zero
        for a in reversed(self.coeffs):
            acc = dom.add(dom.mul(acc, c), a)
        return acc

    def rename(self, var: str):
        return UniPoly(self.dom, var, self.coeffs)

    def map_coeffs(self, dom: Domain, fn):
        return UniPoly(dom, self.var, [fn(c) for c in self.coeffs])


# ---------------------------------------------------------------------------
# public univariate operations


def derivative(f: UniPoly) -> UniPoly:
    dom = f.dom
    cs = [dom.mul(c, dom.from_int(i)) for i, c in enumerate(f.coeffs)][1:]
    return UniPoly(dom, f.var, cs)


def compose(f: UniPoly, g: UniPoly) -> UniPoly:
    """f(g), Horner in g."""
    if f.dom != g.dom:
        raise FieldMismatchError("compose over mismatched domains")
    acc = UniPoly.zero(g.dom, g.var)
    for c in reversed(f.coeffs):
        acc = acc * g + UniPoly.const(g.dom, g.var, c)
    return acc


def poly_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic gcd over a field domain; gcd(0, 0) = 0."""
    _coerce_same(f, g)
    dom = f.dom
    if not dom.is_field:
        raise UsageError("poly_gcd requires a field domain")
    if dom == QQ:
        return _gcd_qq(f, g)
    a, b = f, g
    while not b.is_zero:
        a, b = b, a.divmod(b)[1]
    return a.monic()


def _clear_denominators(f: UniPoly) -> tuple[UniPoly, int]:
    """QQ poly -> (ZZ poly, positive integer d) with d*f integral."""
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // _gcd_int(den, c.denominator)
    cs = [int(c * den) for c in f.coeffs]
    return UniPoly(ZZ, f.var, cs), den


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _content(f: UniPoly) -> int:
    c = 0
    for a in f.coeffs:
        c = _gcd_int(c, a)
    return c or 1


def _gcd_qq(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic gcd over QQ via a primitive remainder sequence over ZZ."""
    if f.is_zero:
        return g.monic()
    if g.is_zero:
        return f.monic()
    a, _ = _clear_denominators(f)
    b, _ = _clear_denominators(g)
    a = a.exact_scalar_div(_content(a))
    b = b.exact_scalar_div(_content(b))
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero:
        r = prem(a, b)
        if not r.is_zero:
            r = r.exact_scalar_div(_content(r))
        a, b = b, r
    q = a.map_coeffs(QQ, Fraction)
    return q.monic()


def prem(f: UniPoly, g: UniPoly) -> UniPoly:
    """Pseudo-remainder: lc(g)^(deg f - deg g + 1) * f mod g."""
    _coerce_same(f, g)
    dom = f.dom
    if g.is_zero:
        raise MathError("pseudo-division by zero")
    if f.degree < g.degree:
        return f
    lb = g.lc
    n = f.degree - g.degree + 1
    r = f
    while not r.is_zero and r.degree >= g.degree:
        k = r.degree - g.degree
        r = r.scale(lb) - g.shift(k).scale(r.lc)
        n -= 1
    if n > 0:
        r = r.scale(dom.pow(lb, n))
    return r


def squarefree_part(f: UniPoly) -> UniPoly:
    """Monic product of the distinct irreducible factors of f (field domain)."""
    dom = f.dom
    if not dom.is_field:
        raise UsageError("squarefree_part requires a field domain")
    if f.is_zero:
        raise MathError("squarefree part of zero polynomial")
    f = f.monic()
    if f.degree == 0:
        return f
    fp = derivative(f)
    if fp.is_zero:
        # char p and f = g(x^p); over GF(p) the coefficients are their own
        # p-th roots, so descend by erasing the exponent gaps
        p = dom.char
        cs = []
        for i, c in enumerate(f.coeffs):
            if i % p == 0:
                cs.append(c)
            elif not dom.is_zero(c):
                raise MathError("inconsistent vanishing derivative")
        return squarefree_part(UniPoly(dom, f.var, cs))
    g = poly_gcd(f, fp)
    if g.degree == 0:
        return f
    w = f.divmod(g)[0]  # roots of multiplicity not divisible by char, once each
    rest = squarefree_part(g)
    return (w * rest.divmod(poly_gcd(w, rest))[0]).monic()


# ---------------------------------------------------------------------------
# resultants


def sylvester_matrix(f: UniPoly, g: UniPoly, m: int | None = None, n: int | None = None):
    """Sylvester matrix rows for formal degrees m, n (default actual)."""
    m = f.degree if m is None else m
    n = g.degree if n is None else n
    dom = f.dom
    size = m + n
    rows = []
    fc = [f.coeff(m - i) for i in range(m + 1)]  # descending, padded
    gc = [g.coeff(n - i) for i in range(n + 1)]
    for i in range(n):
        rows.append([dom.zero] * i + fc + [dom.zero] * (size - i - m - 1))
    for i in range(m):
        rows.append([dom.zero] * i + gc + [dom.zero] * (size - i - n - 1))
    return rows


def bareiss_det(rows, dom: Domain):
    """Fraction-free determinant over an integral domain."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return dom.one
    sign = 1
    prev = dom.one
    for k in range(n - 1):
        if dom.is_zero(m[k][k]):
            for i in range(k + 1, n):
                if not dom.is_zero(m[i][k]):
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return dom.zero
        piv = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                t = dom.sub(dom.mul(m[i][j], piv), dom.mul(m[i][k], m[k][j]))
                m[i][j] = dom.exact_div(t, prev)
            m[i][k] = dom.zero
        prev = piv
    det = m[n - 1][n - 1]
    return dom.neg(det) if sign < 0 else det


def resultant_bareiss(f: UniPoly, g: UniPoly):
    """Reference resultant: Bareiss on the Sylvester matrix."""
    _coerce_same(f, g)
    if f.is_zero or g.is_zero:
        if f.is_zero and g.is_zero:
            raise MathError("resultant of two zero polynomials")
        return f.dom.zero
    return bareiss_det(sylvester_matrix(f, g), f.dom)


def _prs_resultant(f: UniPoly, g: UniPoly):
    """Subresultant PRS resultant over an integral domain with exact_div."""
    dom = f.dom
    s = 1
    a, b = f, g
    if a.degree < b.degree:
        if (a.degree * b.degree) % 2:
            s = -s
        a, b = b, a
    if b.degree == 0:
        return _signed(dom, dom.pow(b.lc, a.degree), s)
    gg = dom.one
    h = dom.one
    while True:
        delta = a.degree - b.degree
        if (a.degree % 2) and (b.degree % 2):
            s = -s
        r = prem(a, b)
        if r.is_zero:
            return dom.zero
        a = b
        b = r.exact_scalar_div(dom.mul(gg, dom.pow(h, delta)))
        gg = a.lc
        if delta == 1:
            h = gg
        elif delta > 1:
            h = dom.exact_div(dom.pow(gg, delta), dom.pow(h, delta - 1))
        if b.degree == 0:
            e = a.degree
            num = dom.pow(b.lc, e)
            if e > 1:
                num = dom.exact_div(num, dom.pow(h, e - 1))
            return _signed(dom, num, s)


def _signed(dom, value, s):
    return dom.neg(value) if s < 0 else value


def resultant(f: UniPoly, g: UniPoly):
    """Res(f, g) at actual degrees; scalar for scalar domains, else UniPoly.

    Over QQ (and QQ[t] coefficients) the computation clears denominators and
    runs the fraction-free sequence over ZZ, rescaling by the cleared
    contents: Res(c*f, e*g) = c^deg(g) * e^deg(f) * Res(f, g).
    """
    _coerce_same(f, g)
    dom = f.dom
    if f.is_zero or g.is_zero:
        if f.is_zero and g.is_zero:
            raise MathError("resultant of two zero polynomials")
        return dom.zero
    if f.degree == 0:
        return dom.pow(f.lc, g.degree)
    if g.degree == 0:
        return dom.pow(g.lc, f.degree)
    if dom == QQ:
        fz, cf = _clear_denominators(f)
        gz, cg = _clear_denominators(g)
        r = _prs_resultant(fz, gz)
        return Fraction(r) / (Fraction(cf) ** g.degree * Fraction(cg) ** f.degree)
    if isinstance(dom, PolyRing) and dom.base == QQ:
        zdom = PolyRing(ZZ, dom.var)
        cf = cg = 1
        fcs, gcs = [], []
        for c in f.coeffs:
            _, d = _clear_denominators(c)
            cf = cf * d // _gcd_int(cf, d)
        for c in g.coeffs:
            _, d = _clear_denominators(c)
            cg = cg * d // _gcd_int(cg, d)
        for c in f.coeffs:
            fcs.append(c.scale(Fraction(cf)).map_coeffs(ZZ, lambda q: int(q)))
        for c in g.coeffs:
            gcs.append(c.scale(Fraction(cg)).map_coeffs(ZZ, lambda q: int(q)))
        fz = UniPoly(zdom, f.var, fcs)
        gz = UniPoly(zdom, g.var, gcs)
        r = _prs_resultant(fz, gz)
        scale = Fraction(1) / (Fraction(cf) ** g.degree * Fraction(cg) ** f.degree)
        return r.map_coeffs(QQ, Fraction).scale(scale)
    return _prs_resultant(f, g)


# ---------------------------------------------------------------------------
# field-only helpers: modular powers, root finding, interpolation


def pow_mod(base: UniPoly, e: int, mod: UniPoly) -> UniPoly:
    """base**e mod `mod` over a field domain."""
    if not base.dom.is_field:
        raise UsageError("pow_mod requires a field domain")
    r = UniPoly.const(base.dom, base.var, base.dom.one)
    b = base.divmod(mod)[1]
    while e:
        if e & 1:
            r = (r * b).divmod(mod)[1]
        b = (b * b).divmod(mod)[1]
        e >>= 1
    return r


def fp_roots(f: UniPoly, rng) -> list[int]:
    """All roots of f in GF(p), each once, sorted (equal-degree splitting)."""
    dom = f.dom
    if not isinstance(dom, PrimeField):
        raise UsageError("fp_roots requires a prime field")
    if f.is_zero:
        raise MathError("roots of the zero polynomial")
    x = UniPoly.gen(dom, f.var)
    if f.degree == 0:
        return []
    xp = pow_mod(x, dom.p, f)
    g = poly_gcd(f, xp - x)
    return sorted(_split_linear(g, rng))


def _split_linear(g: UniPoly, rng) -> list[int]:
    dom = g.dom
    if g.degree <= 0:
        return []
    if g.degree == 1:
        return [dom.div(dom.neg(g.coeff(0)), g.coeff(1))]
    x = UniPoly.gen(dom, g.var)
    one = UniPoly.const(dom, g.var, dom.one)
    half = (dom.p - 1) // 2
    while True:
        a = dom.rand(rng)
        h = pow_mod(x + UniPoly.const(dom, g.var, a), half, g) - one
        d = poly_gcd(g, h)
        if 0 < d.degree < g.degree:
            return _split_linear(d, rng) + _split_linear(g.divmod(d)[0], rng)


def interpolate(xs, ys, dom: Domain, var: str) -> UniPoly:
    """Unique polynomial of degree < len(xs) through (xs[i], ys[i])."""
    if not dom.is_field:
        raise UsageError("interpolation requires a field domain")
    n = len(xs)
    if len(set(xs)) != n or len(ys) != n:
        raise UsageError("interpolation nodes must be distinct and paired")
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            num = dom.sub(coef[i], coef[i - 1])
            coef[i] = dom.div(num, dom.sub(xs[i], xs[i - j]))
    poly = UniPoly.zero(dom, var)
    x = UniPoly.gen(dom, var)
    for i in range(n - 1, -1, -1):
        node = UniPoly.const(dom, var, xs[i])
        poly = poly * (x - node) + UniPoly.const(dom, var, coef[i])
    return poly


# ---------------------------------------------------------------------------
# string codecs for scalars and field descriptors


def scalar_to_str(dom: Domain, a) -> str:
    if dom == QQ:
        return str(a)
    if isinstance(dom, PrimeField):
        return f"{a % dom.p} mod {dom.p}"
    return str(a)


def scalar_from_str(dom: Domain, s: str):
    s = s.strip()
    try:
        if isinstance(dom, PrimeField):
            if "mod" in s:
                val, mod = s.split("mod")
                if int(mod) != dom.p:
                    raise UsageError(f"scalar {s!r} has wrong modulus for {dom!r}")
                return dom.from_int(int(val))
            return dom.from_rational(Fraction(s))
        if dom == QQ:
            return Fraction(s)
        return int(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse scalar {s!r} for {dom!r}") from exc


def field_to_str(dom: Domain) -> str:
    if dom == QQ:
        return "QQ"
    if isinstance(dom, PrimeField):
        return f"GF {dom.p}"
    raise UsageError(f"no descriptor for {dom!r}")


def field_from_str(s: str) -> Domain:
    t = s.strip()
    if t.upper() == "QQ":
        return QQ
    for sep in (":", " ", "("):
        if t.startswith("GF") and sep in t:
            body = t[2:].strip(" :()")
            try:
                return GF(int(body))
            except ValueError as exc:
                raise UsageError(f"bad field descriptor {s!r}") from exc
    raise UsageError(f"bad field descriptor {s!r}")
