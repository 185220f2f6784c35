import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subtag.codes import CoalitionSpec
from subtag.ec import (
    AGCodeSpec,
    CoalitionClass,
    ECPoint,
    EllipticCurve,
    Forgeability,
    Monomial,
    classify_coalition,
    ec_add,
    ec_mul,
    ec_neg,
    ec_points,
    ec_sum,
    eval_code,
    residue_code,
    rr_basis,
)
from subtag.errors import (
    DuplicatePoint,
    InvalidParams,
    SingularCurve,
    TargetInCoalition,
)
from subtag.fields import BaseField, ExtField

from oracles import brute_forgeable


@pytest.fixture(scope="module")
def e5():
    return ExtField(BaseField(5), 1)


@pytest.fixture(scope="module")
def curve(e5):
    # y^2 = x^3 + x + 1 over F_5: nine rational points, cyclic of order 9
    return EllipticCurve(e5, e5.one, e5.one)


def pt(curve, x, y):
    f = curve.field
    return ECPoint(curve, f.element(x), f.element(y))


def test_curve_validation(e5, e4, f3):
    with pytest.raises(SingularCurve):
        EllipticCurve(e5, e5.zero, e5.zero)  # disc = 0
    with pytest.raises(InvalidParams):
        EllipticCurve(e4, e4.one, e4.one)  # char 2
    e3 = ExtField(f3, 1)
    with pytest.raises(InvalidParams):
        EllipticCurve(e3, e3.one, e3.one)  # char 3


def test_point_membership(curve):
    with pytest.raises(InvalidParams):
        pt(curve, 0, 2)  # 4 != 1
    p = pt(curve, 0, 1)
    assert not p.is_infinity
    assert ECPoint.infinity(curve).is_infinity


def test_point_enumeration_frozen(curve):
    pts = ec_points(curve)
    assert len(pts) == 9
    assert pts[0].is_infinity
    coords = [(p.x.index, p.y.index) for p in pts[1:]]
    assert coords == [(0, 1), (0, 4), (2, 1), (2, 4), (3, 1), (3, 4), (4, 2), (4, 3)]


def test_group_law_frozen(curve):
    a, b = pt(curve, 0, 1), pt(curve, 2, 1)
    assert ec_add(a, b) == pt(curve, 3, 4)
    assert ec_mul(2, a) == pt(curve, 4, 2)
    assert ec_mul(3, a) == pt(curve, 2, 1)
    assert ec_mul(9, a).is_infinity
    assert ec_add(pt(curve, 2, 1), pt(curve, 2, 4)).is_infinity
    assert ec_neg(pt(curve, 3, 1)) == pt(curve, 3, 4)
    o = ECPoint.infinity(curve)
    assert ec_add(o, a) == a and ec_add(a, o) == a


def test_group_axioms_exhaustive(curve):
    pts = ec_points(curve)
    for p in pts:
        assert ec_add(p, ec_neg(p)).is_infinity
        for q in pts:
            r = ec_add(p, q)
            assert r in pts  # closure
            assert r == ec_add(q, p)
    # associativity on a grid of triples
    for p, q, r in itertools.product(pts[::2], pts[::3], pts[::2]):
        assert ec_add(ec_add(p, q), r) == ec_add(p, ec_add(q, r))


def test_group_is_cyclic_of_order_nine(curve):
    pts = ec_points(curve)

    def order(p):
        k, acc = 1, p
        while not acc.is_infinity:
            acc = ec_add(acc, p)
            k += 1
        return k

    orders = sorted(order(p) for p in pts)
    assert orders == [1, 3, 3, 9, 9, 9, 9, 9, 9]


def test_rr_basis_sizes_and_pole_orders(curve):
    assert [m.pole_order for m in rr_basis(curve, 0)] == [0]
    for m in range(1, 8):
        basis = rr_basis(curve, m)
        assert len(basis) == m
        assert all(mono.pole_order <= m for mono in basis)
        assert [mono.pole_order for mono in basis] == sorted(
            mono.pole_order for mono in basis
        )
    # explicit shape at m = 5: 1, x, y, x^2, xy
    assert [(m.xexp, m.yexp) for m in rr_basis(curve, 5)] == [
        (0, 0),
        (1, 0),
        (0, 1),
        (2, 0),
        (1, 1),
    ]


def test_monomial_evaluation(curve):
    p = pt(curve, 3, 4)
    assert Monomial(0, 0).evaluate(p).index == 1
    assert Monomial(1, 0).evaluate(p).index == 3
    assert Monomial(2, 1).evaluate(p).index == (3 * 3 * 4) % 5


@pytest.fixture(scope="module")
def support(curve):
    # the three +/- pairs: x in {0, 2, 3}; their group sum is O
    return tuple(p for p in ec_points(curve) if not p.is_infinity)[:6]


def test_agspec_validation(curve, support):
    with pytest.raises(InvalidParams):
        AGCodeSpec(curve, support, 0)
    with pytest.raises(InvalidParams):
        AGCodeSpec(curve, support, 6)  # degree must stay below n
    with pytest.raises(DuplicatePoint):
        AGCodeSpec(curve, support + (support[0],), 3)
    with pytest.raises(InvalidParams):
        AGCodeSpec(curve, support + (ECPoint.infinity(curve),), 3)


def test_eval_and_residue_shapes(curve, support):
    for deg in (2, 3, 4):
        spec = AGCodeSpec(curve, support, deg)
        ev = eval_code(spec)
        assert (ev.length, ev.kdim) == (6, deg)
        res = residue_code(spec)
        assert (res.length, res.kdim) == (6, 6 - deg)
        # residue really is the dual: every pairing vanishes
        f = curve.field
        for ew in ev.generator.rows:
            for rw in res.generator.rows:
                acc = f.zero
                for a, b in zip(ew, rw):
                    acc = acc + a * b
                assert not acc


def test_eval_code_rows_are_point_evaluations(curve, support):
    spec = AGCodeSpec(curve, support, 3)
    rows = eval_code(spec).generator.rows
    basis = rr_basis(curve, 3)
    for mono, row in zip(basis, rows):
        assert [e.index for e in row] == [mono.evaluate(p).index for p in support]


def test_classifier_rejects_bad_indices(curve, support):
    spec = AGCodeSpec(curve, support, 3)
    with pytest.raises(TargetInCoalition):
        classify_coalition(spec, [1, 2], 2)
    with pytest.raises(InvalidParams):
        classify_coalition(spec, [0], 3)
    with pytest.raises(InvalidParams):
        classify_coalition(spec, [1], 7)


def test_classifier_frozen_cases(curve, support):
    spec = AGCodeSpec(curve, support, 3)
    # size n-k-2 = 1: never forgeable
    c = classify_coalition(spec, [4], 1)
    assert c.kind is Forgeability.NOT_FORGEABLE and not c.against(1)

    # size n-k-1 = 2, coalition {1,2}: complement {3,4,5,6} holds both
    # +/- pairs of x=2 and x=3, summing to O, which is off-support
    c = classify_coalition(spec, [1, 2], 3)
    assert c.kind is Forgeability.NOT_FORGEABLE
    assert c.complement_sum.is_infinity

    # size 2, coalition {1,3}: complement {2,4,5,6} = (0,4)+(2,4)+(3,1)+(3,4)
    # = (0,4)+(2,4) = -((0,1)+(2,1)) = -(3,4) = (3,1) = support point 5
    c = classify_coalition(spec, [1, 3], 5)
    assert c.kind is Forgeability.SINGLE_TARGET
    assert c.single_target == 5
    assert c.against(5) and not c.against(2)

    # size n-k = 3, coalition {1,2,3}: complement (2,4)+(3,1)+(3,4) = (2,4)
    c = classify_coalition(spec, [1, 2, 3], 5)
    assert c.kind is Forgeability.ALL_TARGETS and c.against(5)
    assert (c.complement_sum.x.index, c.complement_sum.y.index) == (2, 4)

    # size 3, coalition {2,4,6}: complement (0,1)+(2,1)+(3,1)
    # = (3,4)+(3,1) = O: forges against nobody
    c = classify_coalition(spec, [2, 4, 6], 1)
    assert c.kind is Forgeability.NOT_FORGEABLE
    assert c.complement_sum.is_infinity

    # size n-k+1 = 4: always
    c = classify_coalition(spec, [1, 2, 3, 4], 5)
    assert c.kind is Forgeability.ALL_TARGETS


@pytest.mark.parametrize("deg", [2, 3, 4])
def test_classifier_agrees_with_span_oracle(curve, support, deg):
    """Group-law verdicts vs direct dual-support enumeration, all sizes."""
    spec = AGCodeSpec(curve, support, deg)
    res = residue_code(spec)
    rows = [[e.index for e in r] for r in res.generator.rows]
    f = curve.field
    n = 6
    for size in range(0, n):
        for combo in itertools.combinations(range(1, n + 1), size):
            for tgt in range(1, n + 1):
                if tgt in combo:
                    continue
                verdict = classify_coalition(spec, combo, tgt).against(tgt)
                assert verdict == brute_forgeable(f, rows, n, combo, tgt), (
                    deg,
                    combo,
                    tgt,
                )


def test_residue_code_with_smaller_support(curve):
    # a support whose sum is NOT the identity: drop one pair, keep 5 points
    pts = [p for p in ec_points(curve) if not p.is_infinity]
    support = tuple(pts[:5])
    spec = AGCodeSpec(curve, support, 2)
    res = residue_code(spec)
    assert (res.length, res.kdim) == (5, 3)
    rows = [[e.index for e in r] for r in res.generator.rows]
    for size in (2, 3):
        for combo in itertools.combinations(range(1, 6), size):
            for tgt in range(1, 6):
                if tgt in combo:
                    continue
                verdict = classify_coalition(spec, combo, tgt).against(tgt)
                assert verdict == brute_forgeable(curve.field, rows, 5, combo, tgt)
