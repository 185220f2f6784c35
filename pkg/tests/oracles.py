"""Independent brute-force oracles for the test suite.

Everything here recomputes library answers from first principles: dual
codewords by direct enumeration of G v = 0, forgeability by dual-support
search, consistent master keys by trying every matrix, labels by direct
powering.  None of it routes through the library's rref/null-space code,
so agreement between the two sides actually means something.  All of it
is exponential and meant for tiny parameters only.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

from subtag.fields import ExtField, FieldElement
from subtag.scheme import PublicParams, TaggedPacket


def all_vectors(field, n: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(field.order), repeat=n)


def dot_idx(field, u: Sequence[int], v: Sequence[int]) -> int:
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = field.add_idx(acc, field.mul_idx(a, b))
    return acc


def matvec_idx(field, rows: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(dot_idx(field, r, v) for r in rows)


def brute_dual_words(field, gen_rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """All v with G v^T = 0, including the zero word, by full enumeration."""
    words = []
    for v in all_vectors(field, ncols):
        if all(dot_idx(field, row, v) == 0 for row in gen_rows):
            words.append(v)
    return words


def brute_codewords(field, gen_rows: Sequence[Sequence[int]], ncols: int) -> set[tuple[int, ...]]:
    """The row span of G, by running over every message vector."""
    k = len(gen_rows)
    out = set()
    for msg in all_vectors(field, k):
        word = [0] * ncols
        for c, row in zip(msg, gen_rows):
            if c:
                for j, g in enumerate(row):
                    if g:
                        word[j] = field.add_idx(word[j], field.mul_idx(c, g))
        out.add(tuple(word))
    return out


def brute_min_distance(field, gen_rows: Sequence[Sequence[int]], ncols: int) -> int:
    best = None
    for word in brute_codewords(field, gen_rows, ncols):
        w = sum(1 for x in word if x)
        if w and (best is None or w < best):
            best = w
    if best is None:
        raise ValueError("zero code has no distance")
    return best


def brute_forgeable(field, gen_rows, ncols: int, members: Iterable[int], target: int) -> bool:
    """Dual-support route: some dual word is nonzero at target and vanishes
    outside members + {target}.  Indices are 1-based."""
    allowed = set(members) | {target}
    for w in brute_dual_words(field, gen_rows, ncols):
        if w[target - 1] == 0:
            continue
        if all(w[j] == 0 for j in range(ncols) if (j + 1) not in allowed):
            return True
    return False


def brute_minimal_qualified(field, gen_rows, ncols: int, target: int) -> list[frozenset[int]]:
    """Inclusion-minimal coalitions that can forge against ``target``."""
    others = [i for i in range(1, ncols + 1) if i != target]
    qualified = []
    for size in range(0, len(others) + 1):
        for combo in itertools.combinations(others, size):
            s = frozenset(combo)
            if any(prev <= s for prev in qualified):
                continue
            if brute_forgeable(field, gen_rows, ncols, s, target):
                qualified.append(s)
    return sorted(qualified, key=lambda s: (len(s), sorted(s)))


def brute_solutions(field, a_rows, b_col) -> list[tuple[int, ...]]:
    """Every x with A x = b over a small field, by full enumeration."""
    n = len(a_rows[0]) if a_rows else 0
    return [
        x
        for x in all_vectors(field, n)
        if all(dot_idx(field, row, x) == bi for row, bi in zip(a_rows, b_col))
    ]


# -- scheme-level oracles ------------------------------------------------------


def _pow_q(x: FieldElement, q: int, times: int) -> FieldElement:
    for _ in range(times):
        x = x**q
    return x


def packet_powers(pp: PublicParams, tracker: int, payload: Sequence[int]) -> list[FieldElement]:
    """(tracker, s, s^q, ..., s^(q^(M-1))) computed by plain powering."""
    ext = pp.ext
    s = ext.from_coords(list(payload))
    out = [ext.embed(tracker)]
    for t in range(1, pp.M + 1):
        out.append(_pow_q(s, pp.base.order, t - 1))
    return out


def key_matches_view(
    pp: PublicParams,
    key_rows: Sequence[Sequence[FieldElement]],
    members: Sequence[int],
    columns: Sequence[Sequence[FieldElement]],
    packets: Sequence[TaggedPacket],
) -> bool:
    """Check one candidate master key against a coalition view directly."""
    ext = pp.ext
    for i, col in zip(members, columns):
        g = pp.generator_column(i)
        for r in range(pp.M + 1):
            acc = ext.zero
            for t in range(pp.kdim):
                acc = acc + key_rows[r][t] * g[t]
            if acc != col[r]:
                return False
    for pkt in packets:
        d = packet_powers(pp, pkt.tracker, pkt.payload)
        for t in range(pp.kdim):
            acc = ext.zero
            for r in range(pp.M + 1):
                acc = acc + key_rows[r][t] * d[r]
            if acc != pkt.tag[t]:
                return False
    return True


def brute_consistent_keys(
    pp: PublicParams,
    members: Sequence[int],
    columns: Sequence[Sequence[FieldElement]],
    packets: Sequence[TaggedPacket],
) -> Iterator[tuple[tuple[FieldElement, ...], ...]]:
    """Every (M+1) x kdim master key matching the view, by trying them all."""
    ext = pp.ext
    cells = (pp.M + 1) * pp.kdim
    for flat in itertools.product(range(ext.order), repeat=cells):
        rows = tuple(
            tuple(
                FieldElement(ext, flat[r * pp.kdim + t]) for t in range(pp.kdim)
            )
            for r in range(pp.M + 1)
        )
        if key_matches_view(pp, rows, members, columns, packets):
            yield rows


def brute_label(
    pp: PublicParams,
    key_rows: Sequence[Sequence[FieldElement]],
    target: int,
    tracker: int,
    payload: Sequence[int],
) -> FieldElement:
    """The label verifier ``target`` derives, all by direct arithmetic."""
    ext = pp.ext
    g = pp.generator_column(target)
    d = packet_powers(pp, tracker, payload)
    acc = ext.zero
    for r in range(pp.M + 1):
        b_r = ext.zero
        for t in range(pp.kdim):
            b_r = b_r + key_rows[r][t] * g[t]
        acc = acc + d[r] * b_r
    return acc


def brute_label_histogram(
    pp: PublicParams,
    members: Sequence[int],
    columns: Sequence[Sequence[FieldElement]],
    packets: Sequence[TaggedPacket],
    target: int,
    tracker: int,
    payload: Sequence[int],
) -> dict[int, int]:
    hist: dict[int, int] = {}
    for rows in brute_consistent_keys(pp, members, columns, packets):
        lab = brute_label(pp, rows, target, tracker, payload)
        hist[lab.index] = hist.get(lab.index, 0) + 1
    return hist


def spanned_vectors(field, rows: Sequence[Sequence[int]], width: int) -> set[tuple[int, ...]]:
    """Every vector in the row span (tiny spaces only)."""
    out = set()
    for coeffs in all_vectors(field, len(rows)):
        v = [0] * width
        for c, row in zip(coeffs, rows):
            if c:
                for j, x in enumerate(row):
                    if x:
                        v[j] = field.add_idx(v[j], field.mul_idx(c, x))
        out.add(tuple(v))
    if not rows:
        out.add(tuple([0] * width))
    return out
