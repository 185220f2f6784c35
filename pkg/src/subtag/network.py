"""Single-source network coding over a directed acyclic topology.

Nodes forward F_q-linear combinations of their incoming packets; the
combination coefficients live in per-node local kernels (|In| x |Out|
matrices, row per incoming edge in declaration order).  The source's
kernel has one row per message packet, and by convention its first n
out-edges carry the unit combinations e_1..e_n.  Propagating kernels
through the graph yields one global vector f_e per edge with the defining
property that the packet on e equals f_e applied to the stacked source
packets; transmit() asserts exactly that on honest runs.

Topology files are plain text: ``node <name> <role>``, ``edge <from>
<to>``, ``kernel <node> <row-major entries>``, with blank lines and #
comments ignored.  Any kernel not given in the file is drawn uniformly
from the run's network stream, so a file fully determines a run only
together with a seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Optional, Sequence

from .errors import (
    CyclicGraph,
    DimensionMismatch,
    InvalidParams,
    LengthMismatch,
    UnknownNode,
)
from .fields import BaseField
from .linalg import Matrix
from . import rng as _rng

__all__ = [
    "Node",
    "Topology",
    "Transmission",
    "parse_topology",
    "format_topology",
    "butterfly",
    "random_topology",
    "compute_global_kernels",
    "transmit",
    "inject",
    "decode_subspace",
    "same_span",
]

ROLES = ("source", "internal", "verifier", "sink")


@dataclass(frozen=True)
class Node:
    name: str
    role: str


@dataclass
class Topology:
    """Nodes, directed edges, and optional per-node kernels."""

    nodes: tuple[Node, ...]
    edges: tuple[tuple[str, str], ...]
    kernels: dict[str, tuple[tuple[int, ...], ...]] = dc_field(default_factory=dict)

    def __post_init__(self):
        self.nodes = tuple(self.nodes)
        self.edges = tuple((a, b) for a, b in self.edges)
        names = [nd.name for nd in self.nodes]
        if len(set(names)) != len(names):
            raise InvalidParams("node names must be unique")
        for nd in self.nodes:
            if nd.role not in ROLES:
                raise InvalidParams(f"unknown role {nd.role!r} for node {nd.name}")
        sources = [nd.name for nd in self.nodes if nd.role == "source"]
        if len(sources) != 1:
            raise InvalidParams(f"need exactly one source, found {len(sources)}")
        known = set(names)
        for a, b in self.edges:
            if a not in known or b not in known:
                raise UnknownNode(f"edge {a}->{b} references an unknown node")
            if a == b:
                raise CyclicGraph(f"self-loop at {a}")
            if b == sources[0]:
                raise InvalidParams("the source cannot have incoming edges")
        self.topo_order()  # raises CyclicGraph if needed
        for name, rows in self.kernels.items():
            if name not in known:
                raise UnknownNode(f"kernel for unknown node {name}")
            rows = tuple(tuple(int(v) for v in r) for r in rows)
            self.kernels[name] = rows
            out_deg = len(self.out_edges(name))
            if any(len(r) != out_deg for r in rows):
                raise DimensionMismatch(
                    f"kernel at {name} must have {out_deg} columns"
                )
            if name != sources[0] and len(rows) != len(self.in_edges(name)):
                raise DimensionMismatch(
                    f"kernel at {name} must have one row per incoming edge"
                )

    # -- structure helpers -------------------------------------------------

    @property
    def source(self) -> str:
        return next(nd.name for nd in self.nodes if nd.role == "source")

    def node(self, name: str) -> Node:
        for nd in self.nodes:
            if nd.name == name:
                return nd
        raise UnknownNode(name)

    def in_edges(self, name: str) -> tuple[int, ...]:
        return tuple(i for i, (_, b) in enumerate(self.edges) if b == name)

    def out_edges(self, name: str) -> tuple[int, ...]:
        return tuple(i for i, (a, _) in enumerate(self.edges) if a == name)

    def verifier_nodes(self) -> tuple[str, ...]:
        """Verifier names in declaration order; order fixes key indices."""
        return tuple(nd.name for nd in self.nodes if nd.role == "verifier")

    def sink_nodes(self) -> tuple[str, ...]:
        return tuple(nd.name for nd in self.nodes if nd.role == "sink")

    def topo_order(self) -> tuple[str, ...]:
        indeg = {nd.name: 0 for nd in self.nodes}
        for _, b in self.edges:
            indeg[b] += 1
        ready = [nd.name for nd in self.nodes if indeg[nd.name] == 0]
        order = []
        while ready:
            cur = ready.pop(0)
            order.append(cur)
            for i in self.out_edges(cur):
                b = self.edges[i][1]
                indeg[b] -= 1
                if indeg[b] == 0:
                    ready.append(b)
        if len(order) != len(self.nodes):
            raise CyclicGraph("topology contains a directed cycle")
        return tuple(order)


def parse_topology(text: str) -> Topology:
    nodes: list[Node] = []
    edges: list[tuple[str, str]] = []
    raw_kernels: list[tuple[str, list[int]]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "node" and len(parts) == 3:
            nodes.append(Node(parts[1], parts[2]))
        elif kind == "edge" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        elif kind == "kernel" and len(parts) >= 3:
            raw_kernels.append((parts[1], [int(v) for v in parts[2:]]))
        else:
            raise InvalidParams(f"cannot parse topology line {lineno}: {line!r}")
    topo = Topology(tuple(nodes), tuple(edges))
    for name, flat in raw_kernels:
        topo.node(name)  # raises UnknownNode
        out_deg = len(topo.out_edges(name))
        if out_deg == 0 or len(flat) % out_deg:
            raise DimensionMismatch(
                f"kernel at {name}: {len(flat)} entries do not tile {out_deg} columns"
            )
        rows = tuple(
            tuple(flat[r * out_deg : (r + 1) * out_deg])
            for r in range(len(flat) // out_deg)
        )
        topo.kernels[name] = rows
    # re-run shape validation with kernels attached
    return Topology(topo.nodes, topo.edges, dict(topo.kernels))


def format_topology(t: Topology) -> str:
    lines = [f"node {nd.name} {nd.role}" for nd in t.nodes]
    lines += [f"edge {a} {b}" for a, b in t.edges]
    for name in sorted(t.kernels):
        flat = " ".join(str(v) for row in t.kernels[name] for v in row)
        lines.append(f"kernel {name} {flat}")
    return "\n".join(lines) + "\n"


def butterfly() -> Topology:
    """The classic two-sink butterfly with all-ones forwarding kernels."""
    nodes = (
        Node("s", "source"),
        Node("a", "verifier"),
        Node("b", "verifier"),
        Node("c", "verifier"),
        Node("d", "verifier"),
        Node("t1", "sink"),
        Node("t2", "sink"),
    )
    edges = (
        ("s", "a"),
        ("s", "b"),
        ("a", "t1"),
        ("a", "c"),
        ("b", "c"),
        ("b", "t2"),
        ("c", "d"),
        ("d", "t1"),
        ("d", "t2"),
    )
    kernels = {
        "a": ((1, 1),),
        "b": ((1, 1),),
        "c": ((1,), (1,)),
        "d": ((1, 1),),
    }
    return Topology(nodes, edges, kernels)


def random_topology(
    num_nodes: int, seed: int, min_source_out: int = 2, extra_edge_prob: float = 0.3
) -> Topology:
    """A random connected DAG on n0..n{k-1}; n0 is the source.

    Every later node picks at least one earlier parent, extra forward
    edges appear independently, nodes without outgoing edges become
    sinks and the rest verifiers.
    """
    if num_nodes < 3:
        raise InvalidParams("need at least source, one relay, one sink")
    r = _rng.stream(seed, "topology")
    names = [f"n{i}" for i in range(num_nodes)]
    edges: list[tuple[str, str]] = []
    for j in range(1, num_nodes):
        parent = names[r.randrange(j)]
        edges.append((parent, names[j]))
        for i in range(j):
            if names[i] != parent and r.random() < extra_edge_prob:
                edges.append((names[i], names[j]))
    out_count = {nm: 0 for nm in names}
    for a, _ in edges:
        out_count[a] += 1
    while out_count[names[0]] < min_source_out:
        j = r.randrange(1, num_nodes)
        edges.append((names[0], names[j]))
        out_count[names[0]] += 1
    nodes = [Node(names[0], "source")]
    for nm in names[1:]:
        nodes.append(Node(nm, "sink" if out_count[nm] == 0 else "verifier"))
    return Topology(tuple(nodes), tuple(edges))


@dataclass(frozen=True)
class Transmission:
    """Everything observable after one run through the network."""

    topology: Topology
    base: BaseField
    n: int
    kernels: Mapping[str, tuple[tuple[int, ...], ...]]
    global_vectors: tuple[tuple[int, ...], ...]  # nominal f_e per edge
    edge_packets: tuple[tuple[int, ...], ...]
    injected_at: Optional[str] = None

    def packets_at(self, name: str) -> tuple[tuple[int, ...], ...]:
        return tuple(self.edge_packets[i] for i in self.topology.in_edges(name))

    def global_rows_at(self, name: str) -> tuple[tuple[int, ...], ...]:
        return tuple(self.global_vectors[i] for i in self.topology.in_edges(name))

    def kernel_rank_at(self, name: str) -> int:
        rows = self.global_rows_at(name)
        if not rows:
            return 0
        return Matrix.from_indices(self.base, rows, ncols=self.n).rank()


def _resolve_kernels(
    t: Topology, base: BaseField, n: int, seed: int
) -> dict[str, tuple[tuple[int, ...], ...]]:
    order = base.order
    out: dict[str, tuple[tuple[int, ...], ...]] = {}
    for nd in t.nodes:
        out_deg = len(t.out_edges(nd.name))
        if out_deg == 0:
            continue
        nrows = n if nd.role == "source" else len(t.in_edges(nd.name))
        given = t.kernels.get(nd.name)
        if given is not None:
            if len(given) != nrows:
                raise DimensionMismatch(
                    f"kernel at {nd.name} needs {nrows} rows, has {len(given)}"
                )
            for row in given:
                for v in row:
                    if not 0 <= v < order:
                        raise InvalidParams(
                            f"kernel entry {v} at {nd.name} outside 0..{order - 1}"
                        )
            out[nd.name] = given
            continue
        r = _rng.stream(seed, f"network/kernel/{nd.name}")
        if nd.role == "source":
            # convention: first n out-edges carry the unit combinations
            if out_deg < n:
                raise InvalidParams(
                    f"source out-degree {out_deg} below message count {n}"
                )
            cols = []
            for j in range(out_deg):
                if j < n:
                    cols.append(tuple(1 if i == j else 0 for i in range(n)))
                else:
                    cols.append(tuple(r.randrange(order) for _ in range(n)))
            out[nd.name] = tuple(
                tuple(cols[j][i] for j in range(out_deg)) for i in range(n)
            )
        else:
            out[nd.name] = tuple(
                tuple(r.randrange(order) for _ in range(out_deg))
                for _ in range(nrows)
            )
    return out


def compute_global_kernels(
    t: Topology, base: BaseField, n: int, seed: int
) -> tuple[dict[str, tuple[tuple[int, ...], ...]], tuple[tuple[int, ...], ...]]:
    """Resolve kernels and propagate the per-edge global vectors f_e."""
    kernels = _resolve_kernels(t, base, n, seed)
    add, mul = base.add_idx, base.mul_idx
    f: list[Optional[tuple[int, ...]]] = [None] * len(t.edges)
    for name in t.topo_order():
        outs = t.out_edges(name)
        if not outs:
            continue
        kern = kernels[name]
        if name == t.source:
            in_vectors = [
                tuple(1 if i == j else 0 for i in range(n)) for j in range(n)
            ]
        else:
            in_vectors = [f[i] for i in t.in_edges(name)]
        for col, edge_idx in enumerate(outs):
            acc = [0] * n
            for row, vec in zip(kern, in_vectors):
                c = row[col]
                if c:
                    for i in range(n):
                        if vec[i]:
                            acc[i] = add(acc[i], mul(c, vec[i]))
            f[edge_idx] = tuple(acc)
    return kernels, tuple(v for v in f)


def transmit(
    t: Topology,
    base: BaseField,
    packets: Sequence[Sequence[int]],
    seed: int,
    inject_at: Optional[str] = None,
    fake: Optional[Sequence[int]] = None,
) -> Transmission:
    """Push n source packets through the network.

    With ``inject_at`` set, that node discards what it should have sent
    and pushes ``fake`` on all of its outgoing edges instead; downstream
    packets then mix the fake as usual.
    """
    n = len(packets)
    if n == 0:
        raise InvalidParams("nothing to transmit")
    width = len(packets[0])
    pkts = []
    for p in packets:
        if len(p) != width:
            raise LengthMismatch("packets must share one width")
        pkts.append(tuple(base.element(int(v)).index for v in p))
    if inject_at is not None:
        t.node(inject_at)  # raises UnknownNode
        if fake is None or len(fake) != width:
            raise LengthMismatch("injected packet must match the packet width")
        fake = tuple(base.element(int(v)).index for v in fake)

    kernels, f = compute_global_kernels(t, base, n, seed)
    add, mul = base.add_idx, base.mul_idx
    y: list[Optional[tuple[int, ...]]] = [None] * len(t.edges)
    for name in t.topo_order():
        outs = t.out_edges(name)
        if not outs:
            continue
        if name == inject_at:
            for edge_idx in outs:
                y[edge_idx] = fake
            continue
        kern = kernels[name]
        in_packets = (
            pkts if name == t.source else [y[i] for i in t.in_edges(name)]
        )
        for col, edge_idx in enumerate(outs):
            acc = [0] * width
            for row, pkt in zip(kern, in_packets):
                c = row[col]
                if c:
                    for i in range(width):
                        if pkt[i]:
                            acc[i] = add(acc[i], mul(c, pkt[i]))
            y[edge_idx] = tuple(acc)

    if inject_at is None:
        # defining property of the global vectors, checked on honest runs
        for edge_idx in range(len(t.edges)):
            vec = f[edge_idx]
            expect = [0] * width
            for c, pkt in zip(vec, pkts):
                if c:
                    for i in range(width):
                        if pkt[i]:
                            expect[i] = add(expect[i], mul(c, pkt[i]))
            assert tuple(expect) == y[edge_idx], f"edge {edge_idx} inconsistent"

    return Transmission(
        topology=t,
        base=base,
        n=n,
        kernels=kernels,
        global_vectors=f,
        edge_packets=tuple(v for v in y),
        injected_at=inject_at,
    )


def inject(
    t: Topology,
    base: BaseField,
    packets: Sequence[Sequence[int]],
    seed: int,
    at: str,
    fake: Sequence[int],
) -> Transmission:
    """Honest transmission except that node ``at`` emits ``fake``."""
    return transmit(t, base, packets, seed, inject_at=at, fake=fake)


def decode_subspace(
    base: BaseField, payload_rows: Sequence[Sequence[int]], width: int
) -> tuple[tuple[tuple[int, ...], ...], int]:
    """Canonical basis (rref rows) and dimension of the received span."""
    mat = Matrix.from_indices(base, payload_rows, ncols=width)
    reduced, rank, _ = mat.rref()
    rows = reduced.to_index_rows()[:rank]
    return tuple(rows), rank


def same_span(
    base: BaseField,
    rows_a: Sequence[Sequence[int]],
    rows_b: Sequence[Sequence[int]],
    width: int,
) -> bool:
    return decode_subspace(base, rows_a, width) == decode_subspace(base, rows_b, width)
