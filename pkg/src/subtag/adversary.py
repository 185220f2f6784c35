"""What a verifier coalition knows, and what it can do with it.

A coalition pools its key columns and every tagged packet it has seen.
Each observation is linear in the hidden master key A, so the view
flattens into one system over F_{q^l} in the kdim*(M+1) unknowns a_{r,t}
(column-major: all rows of A's first column, then the second, ...):

  * a packet (tracker, s, v_1..v_kdim) contributes, for each t, the row
    tracker * a_{0,t} + sum_j s^(q^(j-1)) * a_{j,t} = v_t;
  * member i's key column contributes, for each r, the row
    sum_t g_{t,i} * a_{r,t} = b_{r,i}.

With r0 the rank of the packet rows (as length-(M+1) vectors) and K0 the
rank of the coalition's generator columns, the system admits exactly
order^((M+1-r0)*(kdim-K0)) master keys; count_consistent_keys returns
that closed form next to the solver's nullity-based count and insists
they agree.

Forgery follows the same linearity: when the target's generator column
lies in the coalition's column span, the witness combination rebuilds the
target's key column exactly, after which any payload outside the observed
subspace can be tagged at will.  Otherwise the best available move is to
guess the one label the target would accept.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

from .errors import (
    InconsistentSystem,
    InvalidParams,
    NotQualified,
    PayloadInSubspace,
    TargetInCoalition,
    TooLargeToEnumerate,
)
from .fields import FieldElement, frobenius, iso_vec
from .linalg import Matrix, solve_all, span_contains
from .scheme import (
    MasterKey,
    PublicParams,
    TaggedPacket,
    VerifierKey,
    label as scheme_label,
)
from . import rng as _rng

__all__ = [
    "CoalitionView",
    "AttackSystem",
    "KeyCount",
    "assemble_system",
    "count_consistent_keys",
    "consistent_keys",
    "recover_verifier_key",
    "packet_for_label",
    "deterministic_forge",
    "guess_forge",
    "label_distribution",
]

ENUM_GUARD = 1 << 24


@dataclass(frozen=True)
class CoalitionView:
    """Members (sorted, 1-based), their keys, and the traffic they saw.

    Packets live on the wire, so a view may hold observations without
    holding any key at all: that is the outsider running a substitution.
    """

    pp: PublicParams
    members: tuple[int, ...]
    keys: tuple[VerifierKey, ...]
    observed: tuple[TaggedPacket, ...]

    @classmethod
    def build(
        cls,
        pp: PublicParams,
        keys: Mapping[int, VerifierKey] | Sequence[VerifierKey],
        packets: Mapping[int, Sequence[TaggedPacket]]
        | Sequence[TaggedPacket]
        | None = None,
    ) -> "CoalitionView":
        if not isinstance(keys, Mapping):
            keys = {vk.index: vk for vk in keys}
        members = tuple(sorted(keys))
        for i in members:
            if not 1 <= i <= pp.V:
                raise InvalidParams(f"member index {i} outside 1..{pp.V}")
            if keys[i].index != i:
                raise InvalidParams(f"key for member {i} carries index {keys[i].index}")
        if packets is None:
            observed: tuple[TaggedPacket, ...] = ()
        elif isinstance(packets, Mapping):
            for i in packets:
                if not 1 <= i <= pp.V:
                    raise InvalidParams(f"observation point {i} outside 1..{pp.V}")
            observed = tuple(p for i in sorted(packets) for p in packets[i])
        else:
            observed = tuple(packets)
        return cls(
            pp=pp,
            members=members,
            keys=tuple(keys[i] for i in members),
            observed=observed,
        )

    def all_packets(self) -> tuple[TaggedPacket, ...]:
        return self.observed

    def observed_payloads(self) -> tuple[tuple[int, ...], ...]:
        return tuple(p.payload for p in self.observed)


@dataclass(frozen=True)
class AttackSystem:
    """The flattened linear system the view imposes on the master key."""

    pp: PublicParams
    coefficients: Matrix
    constants: Matrix  # single column
    r0: int
    k0: int

    @property
    def unknowns(self) -> int:
        return self.pp.kdim * (self.pp.M + 1)


def _constraint_row(
    pp: PublicParams, tracker: Union[int, FieldElement], payload: Sequence[int]
) -> tuple[FieldElement, ...]:
    """(tracker, s, s^q, ..., s^(q^(M-1))) as extension elements."""
    row = [pp.ext.embed(tracker)]
    power = iso_vec(pp.ext, list(payload))
    for t in range(1, pp.M + 1):
        if t > 1:
            power = frobenius(power)
        row.append(power)
    return tuple(row)


def assemble_system(view: CoalitionView) -> AttackSystem:
    pp = view.pp
    ext = pp.ext
    width = pp.kdim * (pp.M + 1)
    zero = ext.zero
    rows: list[tuple[FieldElement, ...]] = []
    consts: list[FieldElement] = []

    packet_rows: list[tuple[FieldElement, ...]] = []
    for pkt in view.all_packets():
        d = _constraint_row(pp, pkt.tracker, pkt.payload)
        packet_rows.append(d)
        if len(pkt.tag) != pp.kdim:
            raise InvalidParams("packet tag width does not match the code")
        for t in range(pp.kdim):
            row = [zero] * width
            base_col = t * (pp.M + 1)
            for r in range(pp.M + 1):
                row[base_col + r] = d[r]
            rows.append(tuple(row))
            consts.append(pkt.tag[t])

    for member, vk in zip(view.members, view.keys):
        g = pp.generator_column(member)
        if len(vk.column) != pp.M + 1:
            raise InvalidParams(f"key column for member {member} has wrong height")
        for r in range(pp.M + 1):
            row = [zero] * width
            for t in range(pp.kdim):
                row[t * (pp.M + 1) + r] = g[t]
            rows.append(tuple(row))
            consts.append(vk.column[r])

    if packet_rows:
        r0 = Matrix(ext, packet_rows, ncols=pp.M + 1).rank()
    else:
        r0 = 0
    if view.members:
        cols = [pp.generator_column(i) for i in view.members]
        k0 = Matrix(ext, tuple(zip(*cols)), ncols=len(cols)).rank()
    else:
        k0 = 0

    coeff = Matrix(ext, rows, ncols=width)
    const = Matrix(ext, tuple((c,) for c in consts), ncols=1)
    return AttackSystem(pp=pp, coefficients=coeff, constants=const, r0=r0, k0=k0)


@dataclass(frozen=True)
class KeyCount:
    predicted: int
    measured: int
    r0: int
    k0: int
    nullity: int


def count_consistent_keys(system: AttackSystem) -> KeyCount:
    """Closed-form and solver-side counts of master keys matching the view."""
    pp = system.pp
    sol = solve_all(system.coefficients, system.constants)
    if sol is None:
        raise InconsistentSystem("the view admits no master key at all")
    measured = pp.ext.order**sol.nullity
    predicted = pp.ext.order ** ((pp.M + 1 - system.r0) * (pp.kdim - system.k0))
    assert predicted == measured, (predicted, measured, system.r0, system.k0)
    return KeyCount(
        predicted=predicted,
        measured=measured,
        r0=system.r0,
        k0=system.k0,
        nullity=sol.nullity,
    )


def _unflatten(pp: PublicParams, flat: Sequence[FieldElement]) -> MasterKey:
    rows = []
    for r in range(pp.M + 1):
        rows.append(tuple(flat[t * (pp.M + 1) + r] for t in range(pp.kdim)))
    return MasterKey(Matrix(pp.ext, rows, ncols=pp.kdim))


def consistent_keys(
    system: AttackSystem, guard: int = ENUM_GUARD
) -> Iterator[MasterKey]:
    """Every master key the view allows, via the affine solution set."""
    pp = system.pp
    sol = solve_all(system.coefficients, system.constants)
    if sol is None:
        raise InconsistentSystem("the view admits no master key at all")
    if pp.ext.order**sol.nullity > guard:
        raise TooLargeToEnumerate(
            f"{pp.ext.order}^{sol.nullity} solutions exceed the guard {guard}"
        )
    part = sol.particular.column(0)
    basis = sol.null_basis
    add, mul = pp.ext.add_idx, pp.ext.mul_idx
    width = len(part)
    for combo in itertools.product(range(pp.ext.order), repeat=len(basis)):
        flat = [e.index for e in part]
        for c, vec in zip(combo, basis):
            if c:
                for i in range(width):
                    if vec[i].index:
                        flat[i] = add(flat[i], mul(c, vec[i].index))
        yield _unflatten(pp, [FieldElement(pp.ext, v) for v in flat])


def _payload_outside_view(view: CoalitionView, payload: tuple[int, ...]) -> None:
    observed = [list(p) for p in view.observed_payloads()]
    base = view.pp.base
    l = view.pp.l
    before = Matrix.from_indices(base, observed, ncols=l).rank() if observed else 0
    after = Matrix.from_indices(base, observed + [list(payload)], ncols=l).rank()
    if after == before:
        raise PayloadInSubspace(
            "substituted payload lies inside the observed message space"
        )


def recover_verifier_key(view: CoalitionView, target: int) -> VerifierKey:
    """Rebuild the target's key column from a qualified coalition's columns."""
    pp = view.pp
    if target in view.members:
        raise TargetInCoalition(f"target {target} is a coalition member")
    g_target = pp.generator_column(target)
    gens = [pp.generator_column(i) for i in view.members]
    ok, witness = span_contains(gens, g_target)
    if not ok:
        raise NotQualified(
            f"coalition {view.members} does not determine verifier {target}'s key"
        )
    column = [pp.ext.zero] * (pp.M + 1)
    for lam, vk in zip(witness, view.keys):
        if lam.index:
            for r in range(pp.M + 1):
                column[r] = column[r] + lam * vk.column[r]
    return VerifierKey(index=target, column=tuple(column))


def packet_for_label(
    pp: PublicParams,
    target: int,
    payload: Sequence[int],
    lab: FieldElement,
    tracker: int = 1,
) -> TaggedPacket:
    """The unique-per-(t*,label) tag vector making verifier ``target`` compute
    ``lab`` against it: all tag slots zero except the first one where the
    target's generator column is nonzero."""
    g = pp.generator_column(target)
    t_star = next((t for t in range(pp.kdim) if g[t].index), None)
    assert t_star is not None, "params validation keeps generator columns nonzero"
    tag = [pp.ext.zero] * pp.kdim
    tag[t_star] = lab / g[t_star]
    payload = tuple(pp.base.element(int(v)).index for v in payload)
    tracker = pp.base.element(int(tracker)).index
    return TaggedPacket(tracker=tracker, payload=payload, tag=tuple(tag))


def deterministic_forge(
    view: CoalitionView,
    target: int,
    payload: Sequence[int],
    tracker: int = 1,
) -> TaggedPacket:
    """A packet the target is guaranteed to accept, from a qualified view.

    The payload must lie outside the coalition's observed message space,
    otherwise the "forgery" would just be an honest combination.
    """
    pp = view.pp
    if target in view.members:
        raise TargetInCoalition(f"target {target} is a coalition member")
    payload = tuple(pp.base.element(int(v)).index for v in payload)
    if len(payload) != pp.l:
        raise InvalidParams(f"payload needs {pp.l} coordinates")
    _payload_outside_view(view, payload)
    vk = recover_verifier_key(view, target)
    lab = scheme_label(pp, vk, tracker, payload)
    return packet_for_label(pp, target, payload, lab, tracker)


def guess_forge(
    view: CoalitionView,
    target: int,
    payload: Sequence[int],
    seed: int,
    tracker: int = 1,
) -> TaggedPacket:
    """Same packet shape, but the label is a uniform guess."""
    pp = view.pp
    if target in view.members:
        raise TargetInCoalition(f"target {target} is a coalition member")
    payload = tuple(pp.base.element(int(v)).index for v in payload)
    if len(payload) != pp.l:
        raise InvalidParams(f"payload needs {pp.l} coordinates")
    _payload_outside_view(view, payload)
    r = _rng.stream(seed, "adversary/guess")
    lab = FieldElement(pp.ext, r.randrange(pp.ext.order))
    return packet_for_label(pp, target, payload, lab, tracker)


def label_distribution(
    view: CoalitionView,
    target: int,
    payload: Sequence[int],
    tracker: int = 1,
    guard: int = ENUM_GUARD,
) -> dict[FieldElement, int]:
    """Histogram of the target's label over all view-consistent master keys.

    Exhaustive and exact; refuses when the consistent-key set is above the
    guard.
    """
    pp = view.pp
    if target in view.members:
        raise TargetInCoalition(f"target {target} is a coalition member")
    payload = tuple(pp.base.element(int(v)).index for v in payload)
    d = _constraint_row(pp, tracker, payload)
    g = pp.generator_column(target)
    system = assemble_system(view)
    hist: Counter[int] = Counter()
    for mk in consistent_keys(system, guard):
        b_col = mk.matrix @ Matrix(pp.ext, tuple((e,) for e in g), ncols=1)
        acc = pp.ext.zero
        for r in range(pp.M + 1):
            acc = acc + d[r] * b_col.rows[r][0]
        hist[acc.index] += 1
    return {FieldElement(pp.ext, idx): cnt for idx, cnt in hist.items()}
