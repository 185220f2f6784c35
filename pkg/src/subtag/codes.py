"""Linear codes as verifier-key distribution patterns.

A code of length V and dimension kdim over F_{q^l} fixes, through its
public generator matrix, how the authority's master key is spread over V
verifiers.  Which coalitions of verifiers can cheat which targets is a
question about column spans of the generator, or equivalently about
supports of dual codewords; both criteria are implemented and the cheap
span test is cross-checked against the dual-support one in debug runs
whenever the dual is small enough to enumerate.

Enumeration-based routines (minimum distance, minimal codewords) are the
exact oracles the rest of the package leans on, so they refuse instead of
approximating when the codeword count exceeds their guard bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .errors import (
    DuplicatePoint,
    InvalidParams,
    RankDeficient,
    TargetInCoalition,
    TooLargeToEnumerate,
    TooLong,
)
from .fields import BaseField, ExtField, FieldElement
from .linalg import Matrix, span_contains

__all__ = [
    "CoalitionSpec",
    "LinearCode",
    "rs_code",
    "code_from_generator",
]

ENUM_GUARD = 1 << 24

AnyField = Union[BaseField, ExtField]


@dataclass(frozen=True)
class CoalitionSpec:
    """A set of colluding verifier coordinates and the verifier they attack.

    Coordinates are 1-based, matching how verifiers are numbered on the
    wire and in reports.
    """

    members: frozenset[int]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(int(i) for i in self.members))
        if any(i < 1 for i in self.members) or self.target < 1:
            raise InvalidParams("verifier coordinates are numbered from 1")
        if self.target in self.members:
            raise TargetInCoalition(f"target {self.target} is a coalition member")

    @property
    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))


class LinearCode:
    """A linear code held as its generator matrix, stored verbatim."""

    __slots__ = ("field", "generator", "length", "kdim", "_dual", "_dmin")

    def __init__(self, generator: Matrix):
        if generator.ncols < 1:
            raise InvalidParams("code length must be at least 1")
        if generator.nrows and generator.rank() != generator.nrows:
            raise RankDeficient("generator rows are linearly dependent")
        self.field = generator.field
        self.generator = generator
        self.length = generator.ncols
        self.kdim = generator.nrows
        self._dual = None
        self._dmin = None

    @property
    def is_zero(self) -> bool:
        """Zero-dimensional codes carry no information and no keys."""
        return self.kdim == 0

    def dual(self) -> "LinearCode":
        if self._dual is None:
            basis = self.generator.null_space()
            gen = Matrix(self.field, basis, ncols=self.length)
            self._dual = LinearCode(gen)
        return self._dual

    def _check_enumerable(self, guard: int) -> None:
        if self.field.order**self.kdim > guard:
            raise TooLargeToEnumerate(
                f"{self.field.order}^{self.kdim} codewords exceed the guard {guard}"
            )

    def codewords(self, guard: int = ENUM_GUARD) -> Iterator[tuple[int, ...]]:
        """All codewords as index tuples (exact, guarded enumeration)."""
        self._check_enumerable(guard)
        f = self.field
        add, mul = f.add_idx, f.mul_idx
        gen = self.generator.to_index_rows()
        n = self.length
        for msg in itertools.product(range(f.order), repeat=self.kdim):
            word = [0] * n
            for m, row in zip(msg, gen):
                if m:
                    for c in range(n):
                        if row[c]:
                            word[c] = add(word[c], mul(m, row[c]))
            yield tuple(word)

    def min_distance(self, guard: int = ENUM_GUARD) -> int:
        """Minimum Hamming weight over all nonzero codewords."""
        if self.is_zero:
            raise InvalidParams("minimum distance of the zero code is undefined")
        if self._dmin is None:
            best = self.length + 1
            for word in self.codewords(guard):
                w = 0
                for v in word:
                    if v:
                        w += 1
                        if w >= best:
                            break
                if 0 < w < best:
                    best = w
                    if best == 1:
                        break
            self._dmin = best
        return self._dmin

    def minimal_codewords_wrt(
        self, i: int, guard: int = ENUM_GUARD
    ) -> tuple[tuple[FieldElement, ...], ...]:
        """Codewords with component 1 at coordinate i and minimal support.

        Minimal means no other codeword that also has component 1 at i has
        its support strictly contained in this one's.  Scalar multiples are
        collapsed by the normalization at i.
        """
        self._index_ok(i)
        candidates = []
        for word in self.codewords(guard):
            if word[i - 1] != 1:  # index 1 is the field's one
                continue
            mask = 0
            for c, v in enumerate(word):
                if v:
                    mask |= 1 << c
            candidates.append((word, mask))
        out = []
        for word, mask in candidates:
            minimal = True
            for _, other in candidates:
                if other != mask and other & mask == other:
                    minimal = False
                    break
            if minimal:
                out.append(word)
        out.sort()
        f = self.field
        return tuple(tuple(FieldElement(f, v) for v in w) for w in out)

    def _index_ok(self, i: int) -> None:
        if not 1 <= i <= self.length:
            raise InvalidParams(f"coordinate {i} outside 1..{self.length}")

    # -- coalition analysis ------------------------------------------------

    def forgeable(self, spec: CoalitionSpec) -> tuple[bool, tuple[FieldElement, ...] | None]:
        """Can the coalition determine the target's key column?

        True exactly when the target's generator column lies in the span of
        the members' columns; the witness gives the combination, aligned
        with ``spec.sorted_members``.
        """
        self._index_ok(spec.target)
        for j in spec.members:
            self._index_ok(j)
        gens = [self.generator.column(j - 1) for j in spec.sorted_members]
        ok, witness = span_contains(gens, self.generator.column(spec.target - 1))
        if __debug__ and self.field.order ** (self.length - self.kdim) <= 4096:
            assert ok == self._dual_support_forgeable(spec)
        return ok, witness

    def _dual_support_forgeable(self, spec: CoalitionSpec) -> bool:
        """Dual-support criterion: some dual codeword is nonzero at the
        target and vanishes outside coalition-plus-target."""
        allowed = set(spec.members) | {spec.target}
        for word in self.dual().codewords():
            if word[spec.target - 1] == 0:
                continue
            if all(v == 0 or (c + 1) in allowed for c, v in enumerate(word)):
                return True
        return False

    def access_structure(
        self, i: int, guard: int = ENUM_GUARD
    ) -> tuple[tuple[int, ...], ...]:
        """Minimal coalitions able to forge against verifier i.

        Read off the supports of the dual code's minimal codewords at i,
        with i itself removed.
        """
        self._index_ok(i)
        seen = set()
        for word in self.dual().minimal_codewords_wrt(i, guard):
            support = tuple(
                sorted(c + 1 for c, e in enumerate(word) if e.index and c + 1 != i)
            )
            seen.add(support)
        return tuple(sorted(seen))

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearCode) and other.generator == self.generator

    def __hash__(self):
        return hash(self.generator)

    def __repr__(self):
        return f"LinearCode[{self.length},{self.kdim}] over {self.field.name}"


def code_from_generator(generator: Matrix) -> LinearCode:
    """Wrap a generator matrix, rejecting rank-deficient input."""
    return LinearCode(generator)


def rs_code(
    field: AnyField, points: Sequence[Union[int, FieldElement]], kdim: int
) -> LinearCode:
    """Reed-Solomon code: rows point**(t-1) for t = 1..kdim, with 0**0 = 1."""
    if len(points) > field.order:
        raise TooLong(
            f"length {len(points)} exceeds the {field.order} distinct points available"
        )
    pts = [field.element(p) for p in points]
    if len({p.index for p in pts}) != len(pts):
        raise DuplicatePoint("evaluation points must be pairwise distinct")
    if not 1 <= kdim <= len(pts):
        raise InvalidParams(f"dimension {kdim} outside 1..{len(pts)}")
    rows = []
    for t in range(kdim):
        rows.append(tuple(p**t for p in pts))
    return LinearCode(Matrix(field, tuple(rows), ncols=len(pts)))
