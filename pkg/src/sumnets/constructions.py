"""Parametric sum-network builders.

Two families are built here.  In family one (``n1``) every rate-2/(m+1)
solution requires the field characteristic to divide q; in family two
(``n2``) it must not divide q.  Both share the same skeleton: m groups of
q+1 bottleneck ("middle") edges u_ij -> v_ij, sources wired into the u
side, terminals fed from the v side, and direct source->terminal edges
covering everything a terminal cannot see through its middle edges.

Label scheme (fixed so files are byte-reproducible):
  s_<i>, s_<i>_<j>, s_<a>_<b>_<c>    sources
  u_<i>_<j>, v_<i>_<j>               intermediates
  t_<i>, t_<i>_<j>, t_<a>_<b>_<c>    terminals, plus tp_<a>_<b> in n2
  _c<t>                              copy suffix added by the k-copy merge
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod

from .galois import MAX_MODULUS, is_prime
from .network import INTERMEDIATE, SOURCE, TERMINAL, Edge, Node, SumNetwork

IN_SET = "in-set"
NOT_IN_SET = "not-in-set"


@dataclass(frozen=True)
class N1Params:
    m: int
    q: int

    def __post_init__(self):
        _check_mq(self.m, self.q)


@dataclass(frozen=True)
class N2Params:
    m: int
    q: int

    def __post_init__(self):
        _check_mq(self.m, self.q)


@dataclass(frozen=True)
class RateTarget:
    k: int
    n: int
    primes: tuple[int, ...]
    mode: str

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise ValueError(f"rate {self.k}/{self.n} must be positive")
        if not self.primes:
            raise ValueError("prime set must be nonempty")
        if len(set(self.primes)) != len(self.primes):
            raise ValueError("primes must be distinct")
        for p in self.primes:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        if self.mode not in (IN_SET, NOT_IN_SET):
            raise ValueError(f"unknown mode {self.mode!r}")


def _check_mq(m: int, q: int) -> None:
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")


# --- labels ---------------------------------------------------------------


def s1(i: int) -> str:
    return f"s_{i}"


def s2(i: int, j: int) -> str:
    return f"s_{i}_{j}"


def s3(a: int, b: int, c: int) -> str:
    return f"s_{a}_{b}_{c}"


def u_lab(i: int, j: int) -> str:
    return f"u_{i}_{j}"


def v_lab(i: int, j: int) -> str:
    return f"v_{i}_{j}"


def t1(i: int) -> str:
    return f"t_{i}"


def t2(i: int, j: int) -> str:
    return f"t_{i}_{j}"


def t3(a: int, b: int, c: int) -> str:
    return f"t_{a}_{b}_{c}"


def t4(a: int, b: int) -> str:
    return f"tp_{a}_{b}"


def _triples(m: int, q: int):
    for a in range(1, m):
        for b in range(a + 1, m + 1):
            for c in range(1, q + 2):
                yield a, b, c


# --- reachable-source sets --------------------------------------------------


def n1_s_ij(m: int, q: int, i: int, j: int) -> list[str]:
    """Sources with a path to tail(e_ij) in family n1; always m+1 of them."""
    out = [s1(i), s2(i, j)]
    out += [s3(x, i, j) for x in range(1, i)]
    out += [s3(i, x, j) for x in range(i + 1, m + 1)]
    return out


def n2_s_ij(m: int, q: int, i: int, j: int) -> list[str]:
    """Sources with a path to tail(e_ij) in family n2; always q*m of them."""
    out = [s2(i, x) for x in range(1, q + 2) if x != j]
    for x in range(1, i):
        out += [s3(x, i, y) for y in range(1, q + 2) if y != j]
    for x in range(i + 1, m + 1):
        out += [s3(i, x, y) for y in range(1, q + 2) if y != j]
    return out


# --- builder core -----------------------------------------------------------


class _Builder:
    def __init__(self):
        self.nodes: list[Node] = []
        self.edges: list[Edge] = []
        self.in_order: dict[str, list[int]] = {}

    def node(self, label: str, role: str) -> None:
        self.nodes.append(Node(label, role))
        self.in_order[label] = []

    def edge(self, tail: str, head: str, par: int = 0) -> None:
        self.edges.append(Edge(tail, head, par))
        self.in_order[head].append(len(self.edges) - 1)


def build_n1(m: int, q: int) -> SumNetwork:
    """Family n1: rate 2/(m+1) achievable iff the characteristic divides q."""
    _check_mq(m, q)
    b = _Builder()
    group_sources = [s1(i) for i in range(1, m + 1)]
    pair_sources = [s2(i, j) for i in range(1, m + 1) for j in range(1, q + 2)]
    triple_sources = [s3(a, b_, c) for a, b_, c in _triples(m, q)]
    source_order = group_sources + pair_sources + triple_sources
    for s in source_order:
        b.node(s, SOURCE)
    for i in range(1, m + 1):
        for j in range(1, q + 2):
            b.node(u_lab(i, j), INTERMEDIATE)
            b.node(v_lab(i, j), INTERMEDIATE)
    terminals = (
        [t1(i) for i in range(1, m + 1)]
        + [t2(i, j) for i in range(1, m + 1) for j in range(1, q + 2)]
        + [t3(a, b_, c) for a, b_, c in _triples(m, q)]
    )
    for t in terminals:
        b.node(t, TERMINAL)

    # Source -> u edges, in the declared S_ij order (decoders rely on it).
    for i in range(1, m + 1):
        for j in range(1, q + 2):
            for s in n1_s_ij(m, q, i, j):
                b.edge(s, u_lab(i, j))
    # Middle edges.
    for i in range(1, m + 1):
        for j in range(1, q + 2):
            b.edge(u_lab(i, j), v_lab(i, j))
    # v -> terminal edges, grouped per terminal.
    for i in range(1, m + 1):
        for j in range(1, q + 2):
            b.edge(v_lab(i, j), t1(i))
    for i in range(1, m + 1):
        for j in range(1, q + 2):
            b.edge(v_lab(i, j), t2(i, j))
    for a, b_, c in _triples(m, q):
        b.edge(v_lab(a, c), t3(a, b_, c))
        b.edge(v_lab(b_, c), t3(a, b_, c))
    # Direct edges: everything a terminal cannot reach through middles.
    all_sources = source_order
    for i in range(1, m + 1):
        seen = set()
        for j in range(1, q + 2):
            seen.update(n1_s_ij(m, q, i, j))
        for s in all_sources:
            if s not in seen:
                b.edge(s, t1(i))
    for i in range(1, m + 1):
        for j in range(1, q + 2):
            seen = set(n1_s_ij(m, q, i, j))
            for s in all_sources:
                if s not in seen:
                    b.edge(s, t2(i, j))
    for a, b_, c in _triples(m, q):
        seen = set(n1_s_ij(m, q, a, c)) | set(n1_s_ij(m, q, b_, c))
        for s in all_sources:
            if s not in seen:
                b.edge(s, t3(a, b_, c))
    return SumNetwork(b.nodes, b.edges, b.in_order, source_order)


def build_n2(m: int, q: int) -> SumNetwork:
    """Family n2: rate 2/(m+1) achievable iff the characteristic does NOT divide q."""
    _check_mq(m, q)
    b = _Builder()
    pair_sources = [s2(i, j) for i in range(1, m + 1) for j in range(1, q + 2)]
    triple_sources = [s3(a, b_, c) for a, b_, c in _triples(m, q)]
    source_order = pair_sources + triple_sources
    for s in source_order:
        b.node(s, SOURCE)
    for i in range(1, m + 1):
        for j in range(1, q + 2):
            b.node(u_lab(i, j), INTERMEDIATE)
            b.node(v_lab(i, j), INTERMEDIATE)
    pairs = [(a, b_) for a in range(1, m) for b_ in range(a + 1, m + 1)]
    terminals = (
        [t1(i) for i in range(1, m + 1)]
        + [t2(i, j) for i in range(1, m + 1) for j in range(1, q + 2)]
        + [t3(a, b_, c) for a, b_, c in _triples(m, q)]
        + [t4(a, b_) for a, b_ in pairs]
    )
    for t in terminals:
        b.node(t, TERMINAL)

    for i in range(1, m + 1):
        for j in range(1, q + 2):
            for s in n2_s_ij(m, q, i, j):
                b.edge(s, u_lab(i, j))
    for i in range(1, m + 1):
        for j in range(1, q + 2):
            b.edge(u_lab(i, j), v_lab(i, j))
    for i in range(1, m + 1):
        for j in range(1, q + 2):
            b.edge(v_lab(i, j), t1(i))
    for i in range(1, m + 1):
        for j in range(1, q + 2):
            b.edge(v_lab(i, j), t2(i, j))
    for a, b_, c in _triples(m, q):
        b.edge(v_lab(a, c), t3(a, b_, c))
        b.edge(v_lab(b_, c), t3(a, b_, c))
    for a, b_ in pairs:
        for j in range(1, q + 2):
            b.edge(v_lab(a, j), t4(a, b_))
        for j in range(1, q + 2):
            b.edge(v_lab(b_, j), t4(a, b_))
    all_sources = source_order
    for i in range(1, m + 1):
        seen = set()
        for j in range(1, q + 2):
            seen.update(n2_s_ij(m, q, i, j))
        for s in all_sources:
            if s not in seen:
                b.edge(s, t1(i))
    for i in range(1, m + 1):
        for j in range(1, q + 2):
            seen = set(n2_s_ij(m, q, i, j))
            for s in all_sources:
                if s not in seen:
                    b.edge(s, t2(i, j))
    for a, b_, c in _triples(m, q):
        seen = set(n2_s_ij(m, q, a, c)) | set(n2_s_ij(m, q, b_, c))
        for s in all_sources:
            if s not in seen:
                b.edge(s, t3(a, b_, c))
    for a, b_ in pairs:
        seen = set()
        for j in range(1, q + 2):
            seen.update(n2_s_ij(m, q, a, j))
            seen.update(n2_s_ij(m, q, b_, j))
        for s in all_sources:
            if s not in seen:
                b.edge(s, t4(a, b_))
    return SumNetwork(b.nodes, b.edges, b.in_order, source_order)


# --- counts (closed forms, used by tests and the CLI) -----------------------


def n1_counts(m: int, q: int) -> dict[str, int]:
    n_src = m + m * (q + 1) + comb(m, 2) * (q + 1)
    return {
        "sources": n_src,
        "terminals": n_src,
        "intermediates": 2 * m * (q + 1),
        "middle_edges": m * (q + 1),
    }


def n2_counts(m: int, q: int) -> dict[str, int]:
    n_src = m * (q + 1) + comb(m, 2) * (q + 1)
    return {
        "sources": n_src,
        "terminals": m + m * (q + 1) + comb(m, 2) * (q + 1) + comb(m, 2),
        "intermediates": 2 * m * (q + 1),
        "middle_edges": m * (q + 1),
    }


# --- k-copy merge ------------------------------------------------------------


def copy_label(label: str, copy: int) -> str:
    return f"{label}_c{copy}"


def k_copy_merge(base: SumNetwork, k: int) -> SumNetwork:
    """k disjoint copies with same-labeled sources/terminals identified.

    Intermediates and edges are duplicated per copy (suffix _c<t>);
    terminal in-edge order is copy-major then base order.
    """
    net, _ = merge_with_map(base, k)
    return net


def merge_with_map(base: SumNetwork, k: int) -> tuple[SumNetwork, list[tuple[int, int]]]:
    """As k_copy_merge, also returning edge provenance (copy, base edge index)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    b = _Builder()
    for n in base.nodes:
        if n.role == INTERMEDIATE:
            continue
        b.node(n.label, n.role)
    for copy in range(1, k + 1):
        for n in base.nodes:
            if n.role == INTERMEDIATE:
                b.node(copy_label(n.label, copy), n.role)
    par_stride = max((e.par for e in base.edges), default=0) + 1
    edge_map: list[tuple[int, int]] = []
    for copy in range(1, k + 1):
        for node in base.nodes:
            for base_idx in base.in_order[node.label]:
                e = base.edges[base_idx]
                tail = e.tail if base.role(e.tail) != INTERMEDIATE else copy_label(e.tail, copy)
                head = e.head if base.role(e.head) != INTERMEDIATE else copy_label(e.head, copy)
                par = e.par if head != e.head or tail != e.tail else e.par + (copy - 1) * par_stride
                b.edge(tail, head, par)
                edge_map.append((copy, base_idx))
    net = SumNetwork(b.nodes, b.edges, b.in_order, list(base.source_order))
    return net, edge_map


def unmerge_map(merged: SumNetwork, base: SumNetwork, k: int) -> dict[int, list[int]]:
    """Map each base edge index to its k images in the merged network."""
    par_stride = max((e.par for e in base.edges), default=0) + 1
    images: dict[int, list[int]] = {i: [] for i in range(len(base.edges))}
    base_index = {(e.tail, e.head, e.par): i for i, e in enumerate(base.edges)}
    for i, e in enumerate(merged.edges):
        tail, head, par = e.tail, e.head, e.par
        copy = 1
        if base.has_node(tail) and base.has_node(head):
            # direct source->terminal edge: copy encoded in the parallel index
            copy = par // par_stride + 1
            par = par % par_stride
        else:
            for label in (tail, head):
                stem, _, suffix = label.rpartition("_c")
                if suffix.isdigit() and not base.has_node(label):
                    copy = int(suffix)
            tail = _strip_copy(tail, base)
            head = _strip_copy(head, base)
        images[base_index[(tail, head, par)]].append(i)
    for base_idx, img in images.items():
        if len(img) != k:
            raise ValueError(f"base edge {base.edges[base_idx].label} has {len(img)} images, expected {k}")
    return images


def _strip_copy(label: str, base: SumNetwork) -> str:
    if base.has_node(label):
        return label
    stem, sep, suffix = label.rpartition("_c")
    if sep and suffix.isdigit() and base.has_node(stem):
        return stem
    raise ValueError(f"cannot map merged node {label!r} back to the base network")


# --- rate-targeted builder ----------------------------------------------------


def build_for_rate(target: RateTarget) -> tuple[SumNetwork, dict]:
    """Network with capacity k/n whose rate-k/n codes exist exactly on the
    requested side of the prime set: q = product of the primes, m = 2n-1,
    base family by mode, merged k times."""
    q = prod(target.primes)
    if q >= MAX_MODULUS:
        raise ValueError(f"q={q} exceeds the field modulus ceiling {MAX_MODULUS}")
    m = 2 * target.n - 1
    family = "n1" if target.mode == IN_SET else "n2"
    base = build_n1(m, q) if family == "n1" else build_n2(m, q)
    net = k_copy_merge(base, target.k) if target.k > 1 else base
    cap = Fraction(2 * target.k, m + 1)
    manifest = {
        "family": family,
        "m": m,
        "q": q,
        "k": target.k,
        "capacity_num": cap.numerator,
        "capacity_den": cap.denominator,
        "primes": sorted(target.primes),
        "mode": target.mode,
    }
    return net, manifest


# --- tiny oracle network --------------------------------------------------------


def build_bottleneck2() -> SumNetwork:
    """2 sources -> one middle edge -> 2 terminals; no direct edges.

    Small enough for exhaustive code search, used as the oracle network
    for the search machinery.
    """
    b = _Builder()
    for s in ("s_1", "s_2"):
        b.node(s, SOURCE)
    b.node("u_1_1", INTERMEDIATE)
    b.node("v_1_1", INTERMEDIATE)
    for t in ("t_1", "t_2"):
        b.node(t, TERMINAL)
    b.edge("s_1", "u_1_1")
    b.edge("s_2", "u_1_1")
    b.edge("u_1_1", "v_1_1")
    b.edge("v_1_1", "t_1")
    b.edge("v_1_1", "t_2")
    return SumNetwork(b.nodes, b.edges, b.in_order, ["s_1", "s_2"])
