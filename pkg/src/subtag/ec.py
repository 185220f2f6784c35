"""Elliptic curves and the one-point AG codes built on them.

Short Weierstrass curves y^2 = x^3 + ax + b over fields of characteristic
at least 5.  The scheme code attached to a curve is the residue code
C(D, kO): the dual of the evaluation code of the Riemann-Roch space
L(kO) = span{x^i y^j : 2i + 3j <= k, j <= 1} at the n chosen affine
points.  For these codes the forgeability of a coalition A is decided by
pure group law: only |A| and the point sum of the complement D \\ A
matter, and ``classify_coalition`` turns that into a verdict that can be
checked coordinate-free against the generic span criterion.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

from .codes import LinearCode
from .errors import (
    DuplicatePoint,
    FieldMismatch,
    InvalidParams,
    SingularCurve,
    TargetInCoalition,
)
from .fields import BaseField, ExtField, FieldElement
from .linalg import Matrix

__all__ = [
    "EllipticCurve",
    "ECPoint",
    "AGCodeSpec",
    "Forgeability",
    "CoalitionClass",
    "ec_points",
    "ec_add",
    "ec_neg",
    "ec_sum",
    "ec_mul",
    "rr_basis",
    "Monomial",
    "eval_code",
    "residue_code",
    "classify_coalition",
]

AnyField = Union[BaseField, ExtField]


@dataclass(frozen=True)
class EllipticCurve:
    field: AnyField
    a: FieldElement
    b: FieldElement

    def __post_init__(self):
        if self.field.char <= 3:
            raise InvalidParams("short Weierstrass form needs characteristic > 3")
        a = self.field.element(self.a)
        b = self.field.element(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        # discriminant 4a^3 + 27b^2 (up to the usual -16 factor)
        four = self._small(4)
        twenty_seven = self._small(27)
        disc = four * a**3 + twenty_seven * b * b
        if not disc:
            raise SingularCurve(f"4a^3 + 27b^2 = 0 over {self.field.name}")

    def _small(self, n: int) -> FieldElement:
        acc = self.field.zero
        one = self.field.one
        for _ in range(n % self.field.char):
            acc = acc + one
        return acc

    def contains(self, x: FieldElement, y: FieldElement) -> bool:
        return y * y == x**3 + self.a * x + self.b


@dataclass(frozen=True)
class ECPoint:
    """A point on a curve; x = y = None encodes the point at infinity O."""

    curve: EllipticCurve
    x: Optional[FieldElement]
    y: Optional[FieldElement]

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise InvalidParams("both coordinates or neither")
        if self.x is not None and not self.curve.contains(self.x, self.y):
            raise InvalidParams(f"({self.x!r}, {self.y!r}) is not on the curve")

    @classmethod
    def infinity(cls, curve: EllipticCurve) -> "ECPoint":
        return cls(curve, None, None)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self):
        if self.is_infinity:
            return "O"
        return f"({self.x.index},{self.y.index})"


def ec_points(curve: EllipticCurve) -> tuple[ECPoint, ...]:
    """All rational points, O first, affine points sorted by (x, y) index."""
    field = curve.field
    # y^2 = c has solutions read off a square table, exact and exhaustive.
    roots: dict[int, list[FieldElement]] = {}
    for y in field.elements():
        roots.setdefault((y * y).index, []).append(y)
    pts = [ECPoint.infinity(curve)]
    for x in field.elements():
        rhs = x**3 + curve.a * x + curve.b
        for y in sorted(roots.get(rhs.index, []), key=lambda e: e.index):
            pts.append(ECPoint(curve, x, y))
    return tuple(pts)


def ec_neg(p: ECPoint) -> ECPoint:
    if p.is_infinity:
        return p
    return ECPoint(p.curve, p.x, -p.y)


def ec_add(p: ECPoint, q: ECPoint) -> ECPoint:
    """Chord-tangent addition."""
    if p.curve != q.curve:
        raise FieldMismatch("points on different curves")
    if p.is_infinity:
        return q
    if q.is_infinity:
        return p
    if p.x == q.x and p.y == -q.y:
        return ECPoint.infinity(p.curve)
    if p.x == q.x:
        # tangent: lambda = (3x^2 + a) / 2y
        three_x2 = p.x * p.x + p.x * p.x + p.x * p.x
        lam = (three_x2 + p.curve.a) / (p.y + p.y)
    else:
        lam = (q.y - p.y) / (q.x - p.x)
    x3 = lam * lam - p.x - q.x
    y3 = lam * (p.x - x3) - p.y
    return ECPoint(p.curve, x3, y3)


def ec_sum(points: Iterable[ECPoint], curve: EllipticCurve) -> ECPoint:
    acc = ECPoint.infinity(curve)
    for p in points:
        acc = ec_add(acc, p)
    return acc


def ec_mul(n: int, p: ECPoint) -> ECPoint:
    if n < 0:
        return ec_mul(-n, ec_neg(p))
    acc = ECPoint.infinity(p.curve)
    add = p
    while n:
        if n & 1:
            acc = ec_add(acc, add)
        add = ec_add(add, add)
        n >>= 1
    return acc


@dataclass(frozen=True)
class Monomial:
    """x^xexp * y^yexp, with pole order 2*xexp + 3*yexp at infinity."""

    xexp: int
    yexp: int

    @property
    def pole_order(self) -> int:
        return 2 * self.xexp + 3 * self.yexp

    def evaluate(self, p: ECPoint) -> FieldElement:
        if p.is_infinity:
            raise InvalidParams("cannot evaluate at the pole")
        return p.x**self.xexp * p.y**self.yexp


def rr_basis(curve: EllipticCurve, m: int) -> tuple[Monomial, ...]:
    """Basis of the functions with pole order at most m at infinity.

    On a genus-1 curve the pole orders 0, 2, 3, ..., m each occur exactly
    once (order 1 is the Weierstrass gap), so the basis has size m for
    m >= 1 and size 1 for m = 0.
    """
    if m < 0:
        raise InvalidParams("pole order bound must be non-negative")
    basis = [
        Monomial(i, j)
        for j in (0, 1)
        for i in range(0, m // 2 + 1)
        if 2 * i + 3 * j <= m
    ]
    basis.sort(key=lambda mono: mono.pole_order)
    expected = 1 if m == 0 else m
    assert len(basis) == expected, (m, basis)
    return tuple(basis)


@dataclass(frozen=True)
class AGCodeSpec:
    """A curve, n distinct affine points, and the pole-order budget degree."""

    curve: EllipticCurve
    points: tuple[ECPoint, ...]
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        for p in self.points:
            if p.curve != self.curve:
                raise FieldMismatch("support point on a different curve")
            if p.is_infinity:
                raise InvalidParams("the pole point cannot be in the support")
        if len(set(self.points)) != len(self.points):
            raise DuplicatePoint("support points must be pairwise distinct")
        if not 0 < self.degree < len(self.points):
            raise InvalidParams("need 0 < degree < number of support points")

    @property
    def n(self) -> int:
        return len(self.points)


def eval_code(spec: AGCodeSpec) -> LinearCode:
    """Evaluation code: rows are the basis monomials evaluated at the support."""
    rows = []
    for mono in rr_basis(spec.curve, spec.degree):
        rows.append(tuple(mono.evaluate(p) for p in spec.points))
    gen = Matrix(spec.curve.field, tuple(rows), ncols=spec.n)
    code = LinearCode(gen)
    # degree < n makes the evaluation map injective on L(degree * O).
    assert code.kdim == spec.degree
    return code


def residue_code(spec: AGCodeSpec) -> LinearCode:
    """The scheme code: dual of the evaluation code, an [n, n-degree] code."""
    return eval_code(spec).dual()


class Forgeability(Enum):
    NOT_FORGEABLE = "none"
    SINGLE_TARGET = "single-target"
    ALL_TARGETS = "all-targets"


@dataclass(frozen=True)
class CoalitionClass:
    """Verdict for one coalition against the residue code of an AG spec.

    ``complement_sum`` is the group-law sum of the support points outside
    the coalition; ``single_target`` is the 1-based support index the
    coalition can attack when the verdict is SINGLE_TARGET.
    """

    kind: Forgeability
    complement_sum: ECPoint
    single_target: Optional[int]

    def against(self, target: int) -> bool:
        if self.kind is Forgeability.ALL_TARGETS:
            return True
        if self.kind is Forgeability.SINGLE_TARGET:
            return target == self.single_target
        return False


def classify_coalition(
    spec: AGCodeSpec, coalition: Iterable[int], target: int
) -> CoalitionClass:
    """Decide forgeability of a coalition by point arithmetic alone.

    Coalition and target are 1-based indices into the support.  With
    k = spec.degree and n = spec.n, a coalition of size below n-k-1 can
    never forge; at exactly n-k-1 it can forge only against the support
    point equal to the complement sum (when that sum lands in the
    complement); at n-k it forges against everybody unless the complement
    sums to O; and beyond n-k it always forges against everybody.
    """
    members = sorted(set(int(i) for i in coalition))
    n, k = spec.n, spec.degree
    for i in members + [target]:
        if not 1 <= i <= n:
            raise InvalidParams(f"support index {i} outside 1..{n}")
    if target in members:
        raise TargetInCoalition(f"target {target} is a coalition member")

    complement = [i for i in range(1, n + 1) if i not in members]
    comp_sum = ec_sum((spec.points[i - 1] for i in complement), spec.curve)
    size = len(members)

    if size <= n - k - 2:
        return CoalitionClass(Forgeability.NOT_FORGEABLE, comp_sum, None)
    if size == n - k - 1:
        for i in complement:
            if spec.points[i - 1] == comp_sum:
                return CoalitionClass(Forgeability.SINGLE_TARGET, comp_sum, i)
        return CoalitionClass(Forgeability.NOT_FORGEABLE, comp_sum, None)
    if size == n - k:
        if comp_sum.is_infinity:
            return CoalitionClass(Forgeability.NOT_FORGEABLE, comp_sum, None)
        return CoalitionClass(Forgeability.ALL_TARGETS, comp_sum, None)
    return CoalitionClass(Forgeability.ALL_TARGETS, comp_sum, None)
