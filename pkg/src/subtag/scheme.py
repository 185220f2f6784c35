"""Keying, tagging, and verification of subspace messages.

The authority draws a master key A, an (M+1) x kdim matrix over F_{q^l},
publishes a code generator G, and hands verifier i the i-th column of
B = A G.  A source packet for payload s in F_q^l is

    [ 1 | s | tag_1(s) ... tag_kdim(s) ]

where tag_t(s) = a_{0,t} + sum_j a_{j,t} s^(q^(j-1)) is a linearized map
evaluated through the coordinate identification of F_q^l with F_{q^l}.
Network nodes only ever take F_q-linear combinations of packets, which
adds combination coefficients into the leading tracker symbol; verifier i
accepts a received packet exactly when

    tracker * b_{0,i} + sum_t payload^(q^(t-1)) * b_{t,i}
        == sum_t tag_t * g_{t,i}.

Acceptance is F_q-linear in the packet, so any honest mixture of tagged
packets passes every verifier.

Verification costs are data-independent: per packet, M-1 Frobenius steps
and M + kdim + 1 extension multiplications.  The optional OpCounter
records these schedule counts so tests can pin them down.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .codes import LinearCode
from .errors import (
    DependentBasis,
    FieldMismatch,
    InvalidParams,
    LengthMismatch,
    RankDeficient,
)
from .fields import BaseField, ExtField, FieldElement, frobenius, iso_vec
from .linalg import Matrix
from . import rng as _rng

__all__ = [
    "OpCounter",
    "PublicParams",
    "MasterKey",
    "VerifierKey",
    "TaggedPacket",
    "keygen",
    "distribute",
    "tag_payload",
    "tag_basis",
    "label",
    "verify",
    "combine_packets",
    "random_payload_basis",
]

ISO_CONVENTION = "poly-basis-le"


@dataclass
class OpCounter:
    """Tallies of extension-field work, by schedule (zeros still count)."""

    ext_mults: int = 0
    frobenius_steps: int = 0

    def add(self, mults: int = 0, frobs: int = 0) -> None:
        self.ext_mults += mults
        self.frobenius_steps += frobs


@dataclass(frozen=True)
class PublicParams:
    """Everything public: fields, dimensions, and the key-spreading code.

    n is the message-subspace dimension, M the tagging degree (M >= n so
    a whole transmission generation stays taggable), and the code must
    keep both itself and its dual at minimum distance 2 or more; either
    failing means some verifier key column or constraint would be void.
    """

    base: BaseField
    ext: ExtField
    n: int
    M: int
    code: LinearCode
    iso: str = ISO_CONVENTION

    def __post_init__(self):
        if self.ext.base != self.base:
            raise InvalidParams("extension field does not sit over the base field")
        if self.code.field != self.ext:
            raise InvalidParams("code must be defined over the extension field")
        if self.iso != ISO_CONVENTION:
            raise InvalidParams(f"unknown coordinate convention {self.iso!r}")
        if not 1 <= self.n <= self.ext.l:
            raise InvalidParams(f"need 1 <= n <= l, got n={self.n}, l={self.ext.l}")
        if self.M < self.n:
            raise InvalidParams(f"need M >= n, got M={self.M}, n={self.n}")
        if self.code.is_zero:
            raise InvalidParams("zero-dimensional codes distribute no keys")
        for j in range(self.code.length):
            if all(e.index == 0 for e in self.code.generator.column(j)):
                raise InvalidParams(
                    f"generator column {j + 1} is zero (dual distance below 2)"
                )
        dual = self.code.dual()
        if dual.is_zero:
            raise InvalidParams("the full space has minimum distance 1")
        for j in range(self.code.length):
            if all(e.index == 0 for e in dual.generator.column(j)):
                raise InvalidParams(
                    f"dual generator column {j + 1} is zero (distance below 2)"
                )

    @property
    def l(self) -> int:
        return self.ext.l

    @property
    def V(self) -> int:
        return self.code.length

    @property
    def kdim(self) -> int:
        return self.code.kdim

    @property
    def packet_symbols(self) -> int:
        """Wire size of one tagged packet, in F_q symbols."""
        return 1 + self.l + self.kdim * self.l

    def generator_column(self, i: int) -> tuple[FieldElement, ...]:
        """Column of G for verifier i (1-based)."""
        if not 1 <= i <= self.V:
            raise InvalidParams(f"verifier index {i} outside 1..{self.V}")
        return self.code.generator.column(i - 1)


@dataclass(frozen=True)
class MasterKey:
    matrix: Matrix  # (M+1) x kdim over the extension field


@dataclass(frozen=True)
class VerifierKey:
    index: int
    column: tuple[FieldElement, ...]  # M+1 extension elements


@dataclass(frozen=True)
class TaggedPacket:
    """Tracker symbol, payload coordinates, and kdim tag elements."""

    tracker: int
    payload: tuple[int, ...]
    tag: tuple[FieldElement, ...]

    def symbols(self) -> tuple[int, ...]:
        """Flat wire image over F_q: tracker, payload, tag coordinates."""
        out = [self.tracker, *self.payload]
        for t in self.tag:
            out.extend(t.coords)
        return tuple(out)

    @classmethod
    def from_symbols(cls, pp: PublicParams, syms: Sequence[int]) -> "TaggedPacket":
        if len(syms) != pp.packet_symbols:
            raise LengthMismatch(
                f"expected {pp.packet_symbols} symbols, got {len(syms)}"
            )
        l = pp.l
        tracker = pp.base.element(int(syms[0])).index
        payload = tuple(pp.base.element(int(v)).index for v in syms[1 : 1 + l])
        tag = []
        for t in range(pp.kdim):
            chunk = syms[1 + l + t * l : 1 + l + (t + 1) * l]
            tag.append(iso_vec(pp.ext, list(chunk)))
        return cls(tracker=tracker, payload=payload, tag=tuple(tag))


def _check_payload(pp: PublicParams, payload: Sequence[int]) -> tuple[int, ...]:
    if len(payload) != pp.l:
        raise LengthMismatch(f"payload needs {pp.l} coordinates, got {len(payload)}")
    return tuple(pp.base.element(int(v)).index for v in payload)


def keygen(pp: PublicParams, seed: Union[int, random.Random]) -> MasterKey:
    """Uniform master key from the authority's labelled stream."""
    r = seed if isinstance(seed, random.Random) else _rng.stream(seed, "ta")
    rows = [
        [r.randrange(pp.ext.order) for _ in range(pp.kdim)] for _ in range(pp.M + 1)
    ]
    return MasterKey(Matrix.from_indices(pp.ext, rows, ncols=pp.kdim))


def distribute(
    pp: PublicParams, mk: MasterKey, counter: Optional[OpCounter] = None
) -> tuple[VerifierKey, ...]:
    """Per-verifier key columns B = A G; (M+1)*kdim*V multiplications."""
    b = mk.matrix @ pp.code.generator
    if counter is not None:
        counter.add(mults=(pp.M + 1) * pp.kdim * pp.V)
    return tuple(VerifierKey(i + 1, b.column(i)) for i in range(pp.V))


def _payload_powers(pp: PublicParams, payload: Sequence[int]) -> list[FieldElement]:
    """[s, s^q, ..., s^(q^(M-1))] through the Frobenius matrix chain."""
    s = iso_vec(pp.ext, list(payload))
    powers = [s]
    for _ in range(pp.M - 1):
        powers.append(frobenius(powers[-1]))
    return powers


def tag_payload(
    pp: PublicParams,
    mk: MasterKey,
    payload: Sequence[int],
    counter: Optional[OpCounter] = None,
) -> TaggedPacket:
    """One source packet: tracker 1, the payload, and its kdim tags."""
    payload = _check_payload(pp, payload)
    powers = _payload_powers(pp, payload)
    a = mk.matrix
    tags = []
    for t in range(pp.kdim):
        acc = a.rows[0][t]
        for j in range(1, pp.M + 1):
            acc = acc + a.rows[j][t] * powers[j - 1]
        tags.append(acc)
    if counter is not None:
        counter.add(mults=pp.kdim * pp.M, frobs=pp.M - 1)
    return TaggedPacket(tracker=1, payload=payload, tag=tuple(tags))


def tag_basis(
    pp: PublicParams,
    mk: MasterKey,
    basis: Sequence[Sequence[int]],
    counter: Optional[OpCounter] = None,
) -> tuple[TaggedPacket, ...]:
    """Tag an n-vector payload basis; rejects dependent bases."""
    if len(basis) != pp.n:
        raise InvalidParams(f"expected {pp.n} basis vectors, got {len(basis)}")
    rows = [_check_payload(pp, v) for v in basis]
    mat = Matrix.from_indices(pp.base, rows, ncols=pp.l)
    if mat.rank() != pp.n:
        raise DependentBasis("payload vectors are linearly dependent over F_q")
    return tuple(tag_payload(pp, mk, v, counter) for v in rows)


def label(
    pp: PublicParams,
    vk: VerifierKey,
    tracker: Union[int, FieldElement],
    payload: Sequence[int],
    counter: Optional[OpCounter] = None,
) -> FieldElement:
    """Verifier-side combination of tracker and payload with the key column."""
    payload = _check_payload(pp, payload)
    if len(vk.column) != pp.M + 1:
        raise LengthMismatch("verifier key column has the wrong height")
    acc = pp.ext.embed(tracker) * vk.column[0]
    power = iso_vec(pp.ext, list(payload))
    for t in range(1, pp.M + 1):
        if t > 1:
            power = frobenius(power)
        acc = acc + power * vk.column[t]
    if counter is not None:
        counter.add(mults=pp.M + 1, frobs=pp.M - 1)
    return acc


def verify(
    pp: PublicParams,
    vk: VerifierKey,
    pkt: TaggedPacket,
    counter: Optional[OpCounter] = None,
) -> bool:
    """Accept iff the label equals the G-weighted tag combination."""
    lhs = label(pp, vk, pkt.tracker, pkt.payload, counter)
    if len(pkt.tag) != pp.kdim:
        raise LengthMismatch("tag has the wrong number of components")
    g = pp.generator_column(vk.index)
    acc = pp.ext.zero
    for t in range(pp.kdim):
        acc = acc + pkt.tag[t] * g[t]
    if counter is not None:
        counter.add(mults=pp.kdim)
    return lhs == acc


def combine_packets(
    pp: PublicParams,
    packets: Sequence[TaggedPacket],
    coeffs: Sequence[Union[int, FieldElement]],
) -> TaggedPacket:
    """F_q-linear combination applied symbol-wise across the wire image."""
    if len(packets) != len(coeffs) or not packets:
        raise LengthMismatch("need one coefficient per packet")
    width = pp.packet_symbols
    add, mul = pp.base.add_idx, pp.base.mul_idx
    acc = [0] * width
    for pkt, c in zip(packets, coeffs):
        if isinstance(c, FieldElement):
            if c.field is not pp.base:
                raise FieldMismatch("combination coefficients live in the base field")
            c = c.index
        else:
            c = pp.base.element(int(c)).index
        syms = pkt.symbols()
        if len(syms) != width:
            raise LengthMismatch("packet width does not match the parameters")
        if c:
            for i, v in enumerate(syms):
                if v:
                    acc[i] = add(acc[i], mul(c, v))
    return TaggedPacket.from_symbols(pp, acc)


def random_payload_basis(
    pp: PublicParams, seed: Union[int, random.Random], max_attempts: int = 1000
) -> tuple[tuple[int, ...], ...]:
    """A uniform n-dimensional payload basis (rejection sampled)."""
    r = seed if isinstance(seed, random.Random) else _rng.stream(seed, "source")
    for _ in range(max_attempts):
        rows = [
            tuple(r.randrange(pp.base.order) for _ in range(pp.l))
            for _ in range(pp.n)
        ]
        if Matrix.from_indices(pp.base, rows, ncols=pp.l).rank() == pp.n:
            return tuple(rows)
    raise RankDeficient(f"no independent basis found in {max_attempts} attempts")
