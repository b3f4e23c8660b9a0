import random
from fractions import Fraction

import pytest

from multspec.dynamics import (
    Mobius,
    ProjMap,
    ProjPoint,
    conjugate,
    multiplier_at_point,
    period_polynomial,
    random_map,
)
from multspec.errors import DegenerateInputError, MathError, UsageError
from multspec.exactalg import GF, QQ, fp_roots, poly_gcd, random_prime, squarefree_part
from multspec.groebner import GREVLEX, buchberger, jacobian_det_at, quotient_dimension
from multspec.rat3 import (
    Deg3Invariants,
    _to_unipoly,
    build_tau32_system,
    closed_form_coefficients,
    deg_tau32_report,
    deg_tau32_single,
    degenerate_points,
    lambda_alpha,
    map_from_invariants,
    normal_form_map,
    reconstruct_from_fixed_data,
)


def qq(*xs):
    return [Fraction(x) for x in xs]


def random_invariants(F, rng):
    while True:
        ls = []
        while len(ls) < 3:
            c = F.rand(rng)
            if c != F.one and c not in ls:
                ls.append(c)
        a = F.rand(rng)
        if a in (F.zero, F.one):
            continue
        try:
            inv = Deg3Invariants(F, ls[0], ls[1], ls[2], a)
            inv.lalpha
        except DegenerateInputError:
            continue
        return inv


def rational_fixed_data(phi, rng):
    """Affine rational fixed points with multipliers, or None if any escape."""
    F = phi.dom
    pp = period_polynomial(phi, 1)
    sf = squarefree_part(pp)
    roots = fp_roots(sf, rng)
    if len(roots) != sf.degree or pp.degree != sf.degree:
        return None
    pts = [ProjPoint.affine(F, r) for r in roots]
    if pp.degree < phi.d + 1:
        pts.append(ProjPoint.infinity(F))
    lams = [multiplier_at_point(phi, pt, 1) for pt in pts]
    if any(l == F.one for l in lams):
        return None
    return pts, lams


def test_lambda_alpha_examples():
    assert lambda_alpha(QQ, *qq(-1, -1, -1)) == Fraction(3)
    assert lambda_alpha(QQ, *qq(0, 0, 0)) == Fraction(3, 2)


def test_lambda_alpha_pole_cases():
    with pytest.raises(DegenerateInputError, match="multiplier 1"):
        lambda_alpha(QQ, *qq(1, 2, 3))
    # z^2 has only three fixed points; the fourth multiplier has no home
    with pytest.raises(DegenerateInputError, match="infinity"):
        lambda_alpha(QQ, *qq(0, 2, 0))


def test_four_multipliers_satisfy_relation():
    rng = random.Random(31)
    F = GF(20011)
    hits = 0
    for _ in range(400):
        if hits >= 8:
            break
        phi = random_map(F, 3, rng)
        data = rational_fixed_data(phi, rng)
        if data is None or len(data[0]) != 4:
            continue
        lams = data[1]
        assert lambda_alpha(F, lams[0], lams[1], lams[2]) == lams[3]
        hits += 1
    assert hits >= 8


def test_invariants_validation():
    with pytest.raises(DegenerateInputError):
        Deg3Invariants(QQ, *qq(1, 2, 3), Fraction(5))
    with pytest.raises(DegenerateInputError):
        Deg3Invariants(QQ, *qq(2, 3, 4), Fraction(1))
    with pytest.raises(DegenerateInputError):
        Deg3Invariants(QQ, *qq(2, 3, 4), Fraction(0))


def test_map_from_invariants_fixes_marked_points():
    rng = random.Random(7)
    F = GF(10007)
    for _ in range(50):
        inv = random_invariants(F, rng)
        phi = map_from_invariants(inv)
        assert phi.d == 3
        marked = [
            (ProjPoint.affine(F, F.zero), inv.l0),
            (ProjPoint.affine(F, F.one), inv.l1),
            (ProjPoint.infinity(F), inv.linf),
            (ProjPoint.affine(F, inv.alpha), inv.lalpha),
        ]
        for pt, lam in marked:
            assert phi.apply(pt) == pt
            assert multiplier_at_point(phi, pt, 1) == lam


def test_closed_form_matches_chain():
    num, den = closed_form_coefficients(QQ, *qq(-1, -1, -1), Fraction(2))
    assert num == tuple(qq(-4, 8, -8, 0))
    assert den == tuple(qq(0, 4, -16, 8))
    rng = random.Random(11)
    F = GF(65537)
    for _ in range(25):
        inv = random_invariants(F, rng)
        assert normal_form_map(inv) == map_from_invariants(inv)


def test_conjugation_round_trip():
    rng = random.Random(23)
    F = GF(50021)
    hits = 0
    for _ in range(600):
        if hits >= 6:
            break
        phi = random_map(F, 3, rng)
        data = rational_fixed_data(phi, rng)
        if data is None or len(data[0]) != 4 or any(p.is_infinity for p in data[0]):
            continue
        (z0, z1, z2, z3) = [p.x for p in data[0]]
        # cross ratio sending z0, z1, z2 to 0, 1, infinity
        m = Mobius(
            F,
            F.sub(z1, z2),
            F.neg(F.mul(z0, F.sub(z1, z2))),
            F.sub(z1, z0),
            F.neg(F.mul(z2, F.sub(z1, z0))),
        )
        alpha = m.apply(ProjPoint.affine(F, z3))
        assert not alpha.is_infinity
        if alpha.x in (F.zero, F.one):
            continue
        psi = conjugate(phi, m.inverse())
        lams = [
            multiplier_at_point(psi, pt, 1)
            for pt in (ProjPoint.affine(F, F.zero), ProjPoint.affine(F, F.one), ProjPoint.infinity(F))
        ]
        inv = Deg3Invariants(F, lams[0], lams[1], lams[2], alpha.x)
        assert map_from_invariants(inv) == psi
        hits += 1
    assert hits >= 6


def test_build_tau32_system_shapes():
    rng = random.Random(9)
    F = GF(32003)
    inv = random_invariants(F, rng)
    lb = F.from_int(5)
    sysm = build_tau32_system(F, inv.l0, inv.l1, inv.linf, lb)
    g1, g2 = sysm.gens
    assert g1.total_degree() == 9 and g2.total_degree() == 16
    assert len(sysm.hgens) == 2
    assert quotient_dimension(buchberger([g1, g2], GREVLEX)) is not None
    # coprime: gcd of slices in each direction is constant
    for var, other in (("beta", "alpha"), ("alpha", "beta")):
        for _ in range(3):
            c = F.rand(rng)
            u1, u2 = (
                _to_unipoly(g.substitute({other: c}).drop_vars((other,)), var)
                for g in (g1, g2)
            )
            if u1.is_zero or u2.is_zero:
                continue
            assert poly_gcd(u1, u2).degree == 0
    with pytest.raises(DegenerateInputError):
        build_tau32_system(F, F.one, inv.l1, inv.linf, lb)


def test_tau32_system_vanishes_on_real_two_cycles():
    rng = random.Random(41)
    checks = 0
    for _ in range(60):
        if checks >= 3:
            break
        p = random_prime(rng, 24)
        F = GF(p)
        try:
            inv = random_invariants(F, rng)
            phi = map_from_invariants(inv)
        except (DegenerateInputError, MathError):
            continue
        p2 = period_polynomial(phi, 2)
        p1 = period_polynomial(phi, 1)
        q2 = p2.divmod(poly_gcd(p2, p1))[0]
        roots = fp_roots(squarefree_part(q2), rng)
        if not roots:
            continue
        b = roots[0]
        lb = multiplier_at_point(phi, ProjPoint.affine(F, b), 2)
        if lb == F.one:
            continue
        sysm = build_tau32_system(F, inv.l0, inv.l1, inv.linf, lb)
        assert all(F.is_zero(g.eval((inv.alpha, b))) for g in sysm.gens)
        checks += 1
    assert checks >= 3


def test_degenerate_points_fixed_values():
    pts = degenerate_points(QQ, *qq(3, -2, 5))
    assert pts[0] == tuple(qq(1, 0, 0))
    assert pts[1] == tuple(qq(0, 0, 1))
    assert pts[2] == tuple(qq(1, 1, 1))
    rng = random.Random(13)
    F = GF(40009)
    inv = random_invariants(F, rng)
    for _ in range(3):
        lb = F.rand_nonzero(rng)
        if lb == F.one:
            continue
        sysm = build_tau32_system(F, inv.l0, inv.l1, inv.linf, lb)
        for pt in degenerate_points(F, inv.l0, inv.l1, inv.linf):
            assert all(F.is_zero(h.eval(pt)) for h in sysm.hgens)
    with pytest.raises(DegenerateInputError):
        degenerate_points(QQ, *qq(1, 2, 3))


def test_degenerate_points_are_singular():
    rng = random.Random(29)
    F = GF(30011)
    inv = random_invariants(F, rng)
    sysm = build_tau32_system(F, inv.l0, inv.l1, inv.linf, F.from_int(7))
    pts = degenerate_points(F, inv.l0, inv.l1, inv.linf)
    for pt in (pts[1], pts[2], pts[3], pts[4]):  # the affine four
        assert F.is_zero(jacobian_det_at(list(sysm.gens), sysm.vars, pt[:2]))
    line = [h.substitute({"alpha": F.one}).drop_vars(("alpha",)) for h in sysm.hgens]
    for pt in (pts[0], pts[5]):  # the two on z = 0, both in the alpha = 1 chart
        assert F.is_zero(jacobian_det_at(line, ("beta", "z"), (pt[1], F.zero)))


def test_deg_tau32_single_counts():
    rng = random.Random(3)
    F = GF(655773373)
    ls = [F.from_int(308421828), F.from_int(105282126), F.from_int(482813204)]
    draw = deg_tau32_single(F, ls[0], ls[1], ls[2], F.from_int(12336038), rng)
    assert draw.bezout == 144
    assert draw.distinct == 18
    assert draw.degenerate == 6
    assert draw.simple == 12
    assert draw.degree == 12
    assert draw.alpha_values == 8


def test_deg_tau32_report_agreement():
    rng = random.Random(0xC0FFEE)
    rep = deg_tau32_report(rng)
    assert (rep.bezout, rep.distinct, rep.degenerate, rep.simple, rep.degree) == (
        144,
        18,
        6,
        12,
        12,
    )
    assert len(rep.draws) == 3
    assert len({d.prime for d in rep.draws}) == 3
    for d in rep.draws:
        # each two-cycle shows up at two beta values of one alpha, so the 12
        # simple points carry 6 alpha values, plus 0 and 1 from the corners
        assert d.alpha_values == 8
        assert d.bezout - d.simple - d.degenerate == 126  # 3 x 42 at P1, P2, P3


def test_reconstruct_z_squared():
    pts = [ProjPoint.affine(QQ, Fraction(0)), ProjPoint.affine(QQ, Fraction(1)), ProjPoint.infinity(QQ)]
    phi = reconstruct_from_fixed_data(QQ, pts, qq(0, 2, 0))
    assert phi == ProjMap(QQ, qq(1, 0, 0), qq(0, 0, 1))


def test_reconstruct_round_trip():
    rng = random.Random(99)
    F = GF(1000003)
    hits = {"affine": 0, "infinity": 0}
    for _ in range(2500):
        if hits["affine"] >= 30 and hits["infinity"] >= 20:
            break
        d = rng.choice([2, 3, 4])
        polynomial = rng.random() < 0.5
        phi = random_map(F, d, rng, polynomial=polynomial)
        data = rational_fixed_data(phi, rng)
        if data is None or len(data[0]) != d + 1:
            continue
        pts, lams = data
        kind = "infinity" if any(p.is_infinity for p in pts) else "affine"
        assert reconstruct_from_fixed_data(F, pts, lams) == phi
        hits[kind] += 1
    assert hits["affine"] >= 30 and hits["infinity"] >= 20


def test_reconstruct_matches_invariant_route():
    inv = Deg3Invariants(QQ, *qq(-1, -1, -1), Fraction(2))
    pts = [
        ProjPoint.affine(QQ, Fraction(0)),
        ProjPoint.affine(QQ, Fraction(1)),
        ProjPoint.infinity(QQ),
        ProjPoint.affine(QQ, Fraction(2)),
    ]
    lams = qq(-1, -1, -1) + [inv.lalpha]
    assert reconstruct_from_fixed_data(QQ, pts, lams) == map_from_invariants(inv)
    rng = random.Random(55)
    F = GF(90001)
    for _ in range(10):
        inv = random_invariants(F, rng)
        pts = [
            ProjPoint.affine(F, F.zero),
            ProjPoint.affine(F, F.one),
            ProjPoint.infinity(F),
            ProjPoint.affine(F, inv.alpha),
        ]
        lams = [inv.l0, inv.l1, inv.linf, inv.lalpha]
        assert reconstruct_from_fixed_data(F, pts, lams) == map_from_invariants(inv)


def test_reconstruct_validation_errors():
    pts = [ProjPoint.affine(QQ, Fraction(0)), ProjPoint.affine(QQ, Fraction(1)), ProjPoint.infinity(QQ)]
    with pytest.raises(MathError, match="inconsistent"):
        reconstruct_from_fixed_data(QQ, pts, qq(2, 3, 4))
    with pytest.raises(DegenerateInputError, match="distinct"):
        reconstruct_from_fixed_data(QQ, [pts[0], pts[0], pts[2]], qq(0, 2, 0))
    with pytest.raises(DegenerateInputError, match="multiplier 1"):
        reconstruct_from_fixed_data(QQ, pts, qq(0, 1, 0))
    with pytest.raises(UsageError):
        reconstruct_from_fixed_data(QQ, pts, qq(0, 2))
    with pytest.raises(UsageError):
        reconstruct_from_fixed_data(QQ, pts[:2], qq(0, 2))
