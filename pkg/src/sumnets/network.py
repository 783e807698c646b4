"""The sum-network data model.

A sum-network is a DAG whose nodes carry one of three roles; every
terminal demands the sum of all source blocks.  Edges are identified by
(tail, head, parallel index) where tail is the origin and head the
destination (this is the convention used throughout the file format and
the DOT export).  Per-node in-edge order is explicit and serialized,
because decoding matrices are positional.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import Iterable, Optional

SOURCE = "source"
INTERMEDIATE = "intermediate"
TERMINAL = "terminal"
ROLES = (SOURCE, INTERMEDIATE, TERMINAL)

FORMAT_VERSION = 1


class NetworkFormatError(ValueError):
    """Raised on malformed network files; the message names the field."""


class CycleError(ValueError):
    """Raised when a topological order is requested on a cyclic graph."""


@dataclass(frozen=True)
class Node:
    label: str
    role: str


@dataclass(frozen=True)
class Edge:
    tail: str  # origin node
    head: str  # destination node
    par: int = 0  # parallel-edge index

    @property
    def label(self) -> str:
        return f"({self.tail},{self.head},{self.par})"


class SumNetwork:
    """Immutable DAG with roles, parallel edges and fixed in-edge order."""

    def __init__(
        self,
        nodes: Iterable[Node],
        edges: Iterable[Edge],
        in_order: Optional[dict[str, list[int]]] = None,
        source_order: Optional[list[str]] = None,
        field_hint: Optional[int] = None,
    ):
        self.nodes: tuple[Node, ...] = tuple(nodes)
        self.edges: tuple[Edge, ...] = tuple(edges)
        self.field_hint = field_hint
        self._node_by_label = {n.label: n for n in self.nodes}

        natural: dict[str, list[int]] = {n.label: [] for n in self.nodes}
        self._out_edges: dict[str, list[int]] = {n.label: [] for n in self.nodes}
        for i, e in enumerate(self.edges):
            if e.head in natural:
                natural[e.head].append(i)
            if e.tail in self._out_edges:
                self._out_edges[e.tail].append(i)
        if in_order is None:
            in_order = natural
        self.in_order: dict[str, tuple[int, ...]] = {
            n.label: tuple(in_order.get(n.label, ())) for n in self.nodes
        }
        if source_order is None:
            source_order = [n.label for n in self.nodes if n.role == SOURCE]
        self.source_order: tuple[str, ...] = tuple(source_order)

    # --- basic queries -------------------------------------------------

    def node(self, label: str) -> Node:
        return self._node_by_label[label]

    def has_node(self, label: str) -> bool:
        return label in self._node_by_label

    def role(self, label: str) -> str:
        return self._node_by_label[label].role

    def labels(self, role: str) -> list[str]:
        return [n.label for n in self.nodes if n.role == role]

    @property
    def sources(self) -> list[str]:
        return self.labels(SOURCE)

    @property
    def terminals(self) -> list[str]:
        return self.labels(TERMINAL)

    @property
    def intermediates(self) -> list[str]:
        return self.labels(INTERMEDIATE)

    def in_edges(self, label: str) -> tuple[int, ...]:
        return self.in_order[label]

    def out_edges(self, label: str) -> list[int]:
        return self._out_edges[label]

    def edge_label(self, index: int) -> str:
        return self.edges[index].label

    def edge_index_by_label(self) -> dict[str, int]:
        return {e.label: i for i, e in enumerate(self.edges)}

    def middle_edges(self) -> list[int]:
        """Edges between two intermediate nodes, in edge order."""
        return [
            i
            for i, e in enumerate(self.edges)
            if self.role(e.tail) == INTERMEDIATE and self.role(e.head) == INTERMEDIATE
        ]

    def __eq__(self, other):
        return (
            isinstance(other, SumNetwork)
            and other.nodes == self.nodes
            and other.edges == self.edges
            and other.in_order == self.in_order
            and other.source_order == self.source_order
            and other.field_hint == self.field_hint
        )

    def __repr__(self):
        return f"SumNetwork({len(self.nodes)} nodes, {len(self.edges)} edges)"


# --- validation ---------------------------------------------------------


def validate(net: SumNetwork) -> list[str]:
    """All structural invariants; returns a list of violations (empty = ok)."""
    violations: list[str] = []
    seen_labels: set[str] = set()
    for n in net.nodes:
        if n.label in seen_labels:
            violations.append(f"duplicate node label {n.label!r}")
        seen_labels.add(n.label)
        if n.role not in ROLES:
            violations.append(f"unknown role {n.role!r} on node {n.label!r}")

    seen_edges: set[tuple[str, str, int]] = set()
    for i, e in enumerate(net.edges):
        key = (e.tail, e.head, e.par)
        if key in seen_edges:
            violations.append(f"duplicate edge {e.label}")
        seen_edges.add(key)
        for end in (e.tail, e.head):
            if end not in seen_labels:
                violations.append(f"edge {e.label} references unknown node {end!r}")
        if net.has_node(e.tail) and net.role(e.tail) == TERMINAL:
            violations.append(f"terminal has out-edge: {e.label}")
        if net.has_node(e.head) and net.role(e.head) == SOURCE:
            violations.append(f"source has in-edge: {e.label}")

    natural = {n.label: set() for n in net.nodes}
    for i, e in enumerate(net.edges):
        if e.head in natural:
            natural[e.head].add(i)
    for label, order in net.in_order.items():
        if set(order) != natural.get(label, set()) or len(order) != len(set(order)):
            violations.append(f"in_order for {label!r} is not a permutation of its in-edges")

    srcs = [s for s in net.source_order]
    if sorted(srcs) != sorted(net.sources) or len(srcs) != len(set(srcs)):
        violations.append("source_order is not a permutation of the sources")

    try:
        topo_order(net)
    except CycleError:
        violations.append("cycle detected")
    return violations


# --- topological edge order ----------------------------------------------


def topo_order(net: SumNetwork) -> list[int]:
    """Deterministic edge order: every edge after all in-edges of its tail.

    Ties are broken by edge index, so the order is stable across runs.
    """
    pending = {n.label: len(net.in_order.get(n.label, ())) for n in net.nodes}
    ready: list[int] = []
    emitted = [False] * len(net.edges)
    for i, e in enumerate(net.edges):
        if pending.get(e.tail, 0) == 0:
            heapq.heappush(ready, i)
    out: list[int] = []
    while ready:
        i = heapq.heappop(ready)
        if emitted[i]:
            continue
        emitted[i] = True
        out.append(i)
        head = net.edges[i].head
        if head in pending:
            pending[head] -= 1
            if pending[head] == 0:
                for j in net.out_edges(head):
                    heapq.heappush(ready, j)
    if len(out) != len(net.edges):
        raise CycleError("cycle detected")
    return out


# --- serialization --------------------------------------------------------


def serialize(net: SumNetwork) -> bytes:
    doc = {
        "version": FORMAT_VERSION,
        "nodes": [{"label": n.label, "role": n.role} for n in net.nodes],
        "edges": [{"tail": e.tail, "head": e.head, "par": e.par} for e in net.edges],
        "in_order": {label: list(order) for label, order in net.in_order.items()},
        "source_order": list(net.source_order),
    }
    if net.field_hint is not None:
        doc["field_hint"] = net.field_hint
    return (json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")


def _expect(doc: dict, key: str, kind) -> object:
    if key not in doc:
        raise NetworkFormatError(f"missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise NetworkFormatError(f"field {key!r} has wrong type")
    return value


def deserialize(data: bytes) -> SumNetwork:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise NetworkFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise NetworkFormatError("top level must be an object")
    version = _expect(doc, "version", int)
    if version != FORMAT_VERSION:
        raise NetworkFormatError(f"unsupported version {version}")
    nodes = []
    for i, item in enumerate(_expect(doc, "nodes", list)):
        if not isinstance(item, dict):
            raise NetworkFormatError(f"nodes[{i}] must be an object")
        label = item.get("label")
        role = item.get("role")
        if not isinstance(label, str):
            raise NetworkFormatError(f"nodes[{i}].label must be a string")
        if role not in ROLES:
            raise NetworkFormatError(f"nodes[{i}].role: unknown role {role!r}")
        nodes.append(Node(label, role))
    edges = []
    for i, item in enumerate(_expect(doc, "edges", list)):
        if not isinstance(item, dict):
            raise NetworkFormatError(f"edges[{i}] must be an object")
        tail, head, par = item.get("tail"), item.get("head"), item.get("par")
        if not isinstance(tail, str) or not isinstance(head, str):
            raise NetworkFormatError(f"edges[{i}].tail/head must be strings")
        if not isinstance(par, int):
            raise NetworkFormatError(f"edges[{i}].par must be an integer")
        edges.append(Edge(tail, head, par))
    in_order_raw = _expect(doc, "in_order", dict)
    in_order: dict[str, list[int]] = {}
    for label, order in in_order_raw.items():
        if not isinstance(order, list) or not all(
            isinstance(i, int) and 0 <= i < len(edges) for i in order
        ):
            raise NetworkFormatError(f"in_order[{label!r}] must list edge indices")
        in_order[label] = order
    source_order = _expect(doc, "source_order", list)
    if not all(isinstance(s, str) for s in source_order):
        raise NetworkFormatError("source_order must list node labels")
    field_hint = doc.get("field_hint")
    if field_hint is not None and not isinstance(field_hint, int):
        raise NetworkFormatError("field_hint must be an integer")
    return SumNetwork(nodes, edges, in_order, list(source_order), field_hint)


# --- DOT export ------------------------------------------------------------


def to_dot(net: SumNetwork) -> str:
    """DOT digraph: sources as boxes, terminals as double circles,
    middle edges highlighted."""
    lines = ["digraph sumnet {"]
    for n in net.nodes:
        if n.role == SOURCE:
            lines.append(f'  "{n.label}" [shape=box];')
        elif n.role == TERMINAL:
            lines.append(f'  "{n.label}" [shape=doublecircle];')
        else:
            lines.append(f'  "{n.label}";')
    middles = set(net.middle_edges())
    for i, e in enumerate(net.edges):
        attr = " [color=red,penwidth=2]" if i in middles else ""
        lines.append(f'  "{e.tail}" -> "{e.head}"{attr};')
    lines.append("}")
    return "\n".join(lines) + "\n"
