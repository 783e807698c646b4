"""Fractional linear codes, the capacity-achieving schemes, and the verifier.

An (r,l) fractional linear code assigns an l x r matrix to every edge
leaving a source, an l x l matrix per in-edge to every other edge, and an
r x l matrix per in-edge to every terminal.  The verifier composes these
along a topological edge order into transfer matrices (edge message as a
linear function of the concatenated source vector) and checks that every
terminal's output map is [I_r | I_r | ... | I_r], i.e. the sum of all
source blocks.

Scheme slot layout (l = m+1 per middle edge, 1-indexed slots):
  slots 1-2         the 2-component combination Y'_ij
  slots 3 .. m+1    one scalar per partner group x != i: first the
                    first-symbol carriers for x > i (ascending), then the
                    second-symbol carriers for x < i (ascending)
so the first-symbol slot for pair (i,x), x > i, is 2+(x-i) and the
second-symbol slot for (x,i), x < i, is 2+(m-i)+x.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .constructions import build_n1, build_n2, merge_with_map, unmerge_map
from .galois import PrimeField
from .kernels import matmul_mod
from .matrix import Mat
from .network import SOURCE, TERMINAL, SumNetwork, topo_order

CODE_FORMAT_VERSION = 1


class CharacteristicError(ValueError):
    """The requested scheme does not exist over this characteristic."""


class UnverifiedCodeError(ValueError):
    """An operation requiring a verifying code received a failing one."""


class CodeFormatError(ValueError):
    """Raised on malformed code files."""


class UnsupportedNetworkError(ValueError):
    """The network is not of the three-layer-plus-direct shape."""


@dataclass
class FracLinCode:
    """An (r,l) fractional linear code bound to a network.

    src_mats: edge index -> l x r matrix, for every edge leaving a source.
    in_mats:  edge index -> per-in-edge l x l matrices (aligned with the
              in-edge order of the edge's tail node).
    dec_mats: terminal label -> per-in-edge r x l matrices.
    """

    net: SumNetwork
    r: int
    l: int
    field: PrimeField
    src_mats: dict[int, Mat] = dc_field(default_factory=dict)
    in_mats: dict[int, tuple[Mat, ...]] = dc_field(default_factory=dict)
    dec_mats: dict[str, tuple[Mat, ...]] = dc_field(default_factory=dict)

    @property
    def rate(self):
        from fractions import Fraction

        return Fraction(self.r, self.l)

    def check_shapes(self) -> None:
        net = self.net
        for i, e in enumerate(net.edges):
            if net.role(e.tail) == SOURCE:
                m = self.src_mats.get(i)
                if m is None or m.shape != (self.l, self.r):
                    raise ValueError(f"edge {e.label}: missing or misshaped source matrix")
            else:
                mats = self.in_mats.get(i)
                ins = net.in_edges(e.tail)
                if mats is None or len(mats) != len(ins):
                    raise ValueError(f"edge {e.label}: in-edge matrix list mismatch")
                for m in mats:
                    if m.shape != (self.l, self.l):
                        raise ValueError(f"edge {e.label}: expected {self.l}x{self.l} matrices")
        for t in net.terminals:
            mats = self.dec_mats.get(t)
            ins = net.in_edges(t)
            if mats is None or len(mats) != len(ins):
                raise ValueError(f"terminal {t}: decoder list mismatch")
            for m in mats:
                if m.shape != (self.r, self.l):
                    raise ValueError(f"terminal {t}: expected {self.r}x{self.l} decoders")


# --- transfer matrices ------------------------------------------------------


class TransferMap:
    """Edge and terminal maps from the global source vector.

    Stored block-sparse: per edge a dict {source position -> l x r array}
    (most edges see only a handful of sources).  Dense views are
    materialized on demand.
    """

    def __init__(self, net: SumNetwork, code: FracLinCode):
        self.net = net
        self.r = code.r
        self.l = code.l
        self.field = code.field
        self.src_pos = {s: i for i, s in enumerate(net.source_order)}
        self.edge_blocks: list[dict[int, np.ndarray]] = [dict() for _ in net.edges]
        self.terminal_blocks: dict[str, dict[int, np.ndarray]] = {}

    @property
    def n_sources(self) -> int:
        return len(self.src_pos)

    def _dense(self, blocks: dict[int, np.ndarray], height: int) -> Mat:
        out = np.zeros((height, self.r * self.n_sources), dtype=np.int64)
        for pos, blk in blocks.items():
            out[:, pos * self.r : (pos + 1) * self.r] = blk
        return Mat(self.field, out)

    def edge_matrix(self, edge_index: int) -> Mat:
        return self._dense(self.edge_blocks[edge_index], self.l)

    def terminal_matrix(self, label: str) -> Mat:
        return self._dense(self.terminal_blocks[label], self.r)


def transfer(net: SumNetwork, code: FracLinCode) -> TransferMap:
    """Compose all local maps in topological order."""
    code.check_shapes()
    p = code.field.p
    tm = TransferMap(net, code)
    for ei in topo_order(net):
        e = net.edges[ei]
        if net.role(e.tail) == SOURCE:
            tm.edge_blocks[ei] = {tm.src_pos[e.tail]: code.src_mats[ei].a}
            continue
        acc: dict[int, np.ndarray] = {}
        for m, in_ei in zip(code.in_mats[ei], net.in_edges(e.tail)):
            if not m.a.any():
                continue
            for pos, blk in tm.edge_blocks[in_ei].items():
                prod = matmul_mod(m.a, blk, p)
                prev = acc.get(pos)
                acc[pos] = prod if prev is None else (prev + prod) % p
        tm.edge_blocks[ei] = acc
    for t in net.terminals:
        acc = {}
        for m, in_ei in zip(code.dec_mats[t], net.in_edges(t)):
            if not m.a.any():
                continue
            for pos, blk in tm.edge_blocks[in_ei].items():
                prod = matmul_mod(m.a, blk, p)
                prev = acc.get(pos)
                acc[pos] = prod if prev is None else (prev + prod) % p
        tm.terminal_blocks[t] = acc
    return tm


# --- verification ------------------------------------------------------------


@dataclass
class VerifyReport:
    ok: bool
    residuals: dict[str, Mat]  # failing terminals only
    first_failed: Optional[str]

    def to_text(self) -> str:
        if self.ok:
            return "PASS: every terminal recovers the sum of all sources\n"
        lines = [f"FAIL: {len(self.residuals)} terminal(s) do not recover the sum"]
        lines.append(f"first failing terminal: {self.first_failed}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "pass": self.ok,
            "first_failed": self.first_failed,
            "failing_terminals": sorted(self.residuals),
        }


def verify(net: SumNetwork, code: FracLinCode) -> VerifyReport:
    """Pass iff every terminal transfer equals [I_r | ... | I_r]."""
    return verify_transfer(transfer(net, code))


def verify_transfer(tm: TransferMap) -> VerifyReport:
    p = tm.field.p
    eye = np.eye(tm.r, dtype=np.int64) % p
    residuals: dict[str, Mat] = {}
    first = None
    for t in tm.net.terminals:
        blocks = tm.terminal_blocks[t]
        bad = False
        res: dict[int, np.ndarray] = {}
        for pos in range(tm.n_sources):
            blk = blocks.get(pos)
            diff = (-eye) % p if blk is None else (blk - eye) % p
            if diff.any():
                bad = True
            res[pos] = diff
        if bad:
            residuals[t] = tm._dense(res, tm.r)
            if first is None:
                first = t
    return VerifyReport(not residuals, residuals, first)


# --- three-layer shape ---------------------------------------------------------


@dataclass
class LayerShape:
    """Structure of a bottleneck-family network.

    middle: middle edge indices.  src_order[e]: sources wired into the
    tail of middle edge e, in the tail's in-edge order.  term_taps[t]:
    (position in t's in-edge order, middle edge index) pairs.
    term_directs[t]: source label -> positions of its direct in-edges.
    """

    middle: list[int]
    src_order: dict[int, list[str]]
    term_taps: dict[str, list[tuple[int, int]]]
    term_directs: dict[str, dict[str, list[int]]]


def layer_shape(net: SumNetwork) -> LayerShape:
    """Detect the u -> middle -> v layering; raises if it does not hold."""
    middle = net.middle_edges()
    u_nodes: dict[str, int] = {}
    v_nodes: dict[str, int] = {}
    for me in middle:
        e = net.edges[me]
        if e.tail in u_nodes or e.head in v_nodes:
            raise UnsupportedNetworkError("intermediate node on two middle edges")
        u_nodes[e.tail] = me
        v_nodes[e.head] = me
    src_order: dict[int, list[str]] = {}
    for label in net.intermediates:
        if label in u_nodes:
            me = u_nodes[label]
            if net.out_edges(label) != [me]:
                raise UnsupportedNetworkError(f"node {label} must feed only its middle edge")
            tails = []
            for ei in net.in_edges(label):
                tail = net.edges[ei].tail
                if net.role(tail) != SOURCE:
                    raise UnsupportedNetworkError(f"non-source feed into {label}")
                if tail in tails:
                    raise UnsupportedNetworkError(f"duplicate source edge {tail} -> {label}")
                tails.append(tail)
            src_order[me] = tails
        elif label in v_nodes:
            if [net.edges[i].head for i in net.out_edges(label)] and any(
                net.role(net.edges[i].head) != TERMINAL for i in net.out_edges(label)
            ):
                raise UnsupportedNetworkError(f"node {label} must feed terminals only")
            if len(net.in_edges(label)) != 1:
                raise UnsupportedNetworkError(f"node {label} must have a single in-edge")
        else:
            raise UnsupportedNetworkError(f"intermediate {label} is on no middle edge")
    term_taps: dict[str, list[tuple[int, int]]] = {}
    term_directs: dict[str, dict[str, list[int]]] = {}
    for t in net.terminals:
        taps: list[tuple[int, int]] = []
        directs: dict[str, list[int]] = {}
        for pos, ei in enumerate(net.in_edges(t)):
            tail = net.edges[ei].tail
            if net.role(tail) == SOURCE:
                directs.setdefault(tail, []).append(pos)
            else:
                taps.append((pos, v_nodes[tail]))
        term_taps[t] = taps
        term_directs[t] = directs
    return LayerShape(middle, src_order, term_taps, term_directs)


# --- shared building blocks -----------------------------------------------------


def _proj(field: PrimeField, r: int, l: int) -> Mat:
    """r x l map picking the leading r slots."""
    a = np.zeros((r, l), dtype=np.int64)
    a[:, :r] = np.eye(r, dtype=np.int64)
    return Mat(field, a)


def _pad(field: PrimeField, l: int, r: int) -> Mat:
    """l x r map placing a source block in the leading slots."""
    a = np.zeros((l, r), dtype=np.int64)
    a[:r, :] = np.eye(r, dtype=np.int64)
    return Mat(field, a)


def _identity_in_mats(net: SumNetwork, code: FracLinCode, identity: Mat) -> None:
    """Identity forwarding on every edge not leaving a source."""
    for i, e in enumerate(net.edges):
        if net.role(e.tail) != SOURCE:
            code.in_mats[i] = (identity,) * len(net.in_edges(e.tail))


def _parse_indices(label: str) -> list[int]:
    parts = label.split("_")
    return [int(x) for x in parts[1:] if x.isdigit()]


def _slot_first(i: int, x: int) -> int:
    """0-indexed slot of the first-symbol carrier for pair (i,x), x > i, on e_ij."""
    return 1 + (x - i)


def _slot_second(m: int, i: int, x: int) -> int:
    """0-indexed slot of the second-symbol carrier for pair (x,i), x < i, on e_ij."""
    return 1 + (m - i) + x


# --- the n1 scheme ----------------------------------------------------------------


def scheme_n1(m: int, q: int, p: int, enforce_characteristic: bool = True) -> FracLinCode:
    """The (2, m+1) code on family n1; a solution exactly when p divides q.

    With enforce_characteristic=False the same matrices are produced over
    any prime field, where the group terminals t_i then fail to decode
    (useful for demonstrating the failure, not for use).
    """
    field = PrimeField(p)
    if enforce_characteristic and q % p != 0:
        raise CharacteristicError(
            f"the n1 scheme requires the characteristic to divide q ({p} does not divide {q})"
        )
    net = build_n1(m, q)
    r, l = 2, m + 1
    code = FracLinCode(net, r, l, field)
    identity = Mat.identity(field, l)
    proj = _proj(field, r, l)
    pad = _pad(field, l, r)
    minus_one = (p - 1) % p

    for ei, e in enumerate(net.edges):
        if net.role(e.tail) != SOURCE:
            continue
        if net.role(e.head) == TERMINAL:
            code.src_mats[ei] = pad
            continue
        i, j = _parse_indices(e.head)
        a = np.zeros((l, r), dtype=np.int64)
        a[0, 0] = a[1, 1] = 1
        idx = _parse_indices(e.tail)
        if len(idx) == 3:
            x1, x2, _ = idx
            if x1 == i:  # pair (i, x2), x2 > i: first symbol carrier
                a[_slot_first(i, x2), 0] = 1
            else:  # pair (x1, i), x1 < i: second symbol carrier
                a[_slot_second(m, i, x1), 1] = 1
        code.src_mats[ei] = Mat(field, a)
    _identity_in_mats(net, code, identity)

    for t in net.terminals:
        idx = _parse_indices(t)
        if len(idx) < 3:
            # t_i sums Y'_ij over j (q+1 = 1 in the field when p | q);
            # t_ij reads Y'_ij; both add the direct-edge blocks.
            code.dec_mats[t] = (proj,) * len(net.in_edges(t))
            continue
        a, b, c = idx
        d1 = proj.a.copy()
        d1[0, _slot_first(a, b)] = minus_one
        d2 = proj.a.copy()
        d2[1, _slot_second(m, b, a)] = minus_one
        mats = [Mat(field, d1), Mat(field, d2)]
        mats += [proj] * (len(net.in_edges(t)) - 2)
        code.dec_mats[t] = tuple(mats)
    return code


# --- the n2 scheme ----------------------------------------------------------------


def scheme_n2(m: int, q: int, p: int) -> FracLinCode:
    """The (2, m+1) code on family n2; a solution exactly when p does not divide q."""
    field = PrimeField(p)
    if q % p == 0:
        raise CharacteristicError(
            f"the n2 scheme requires the characteristic not to divide q ({p} divides {q})"
        )
    qinv = pow(q % p, -1, p)
    net = build_n2(m, q)
    r, l = 2, m + 1
    code = FracLinCode(net, r, l, field)
    identity = Mat.identity(field, l)
    proj = _proj(field, r, l)
    pad = _pad(field, l, r)

    for ei, e in enumerate(net.edges):
        if net.role(e.tail) != SOURCE:
            continue
        if net.role(e.head) == TERMINAL:
            code.src_mats[ei] = pad
            continue
        i, j = _parse_indices(e.head)
        a = np.zeros((l, r), dtype=np.int64)
        a[0, 0] = a[1, 1] = 1
        idx = _parse_indices(e.tail)
        if len(idx) == 3:
            x1, x2, _ = idx
            if x1 == i:
                a[_slot_first(i, x2), 0] = 1
            else:
                a[_slot_second(m, i, x1), 1] = 1
        code.src_mats[ei] = Mat(field, a)
    _identity_in_mats(net, code, identity)

    for t in net.terminals:
        idx = _parse_indices(t)
        n_in = len(net.in_edges(t))
        if t.startswith("tp_"):
            a, b = idx
            # q^{-1} (sum_j Y'_aj + sum_j Y'_bj - sum_j W_abj) + directs
            da = (proj.a * qinv) % p
            da[0, _slot_first(a, b)] = (-qinv) % p
            db = (proj.a * qinv) % p
            db[1, _slot_second(m, b, a)] = (-qinv) % p
            mats = [Mat(field, da)] * (q + 1) + [Mat(field, db)] * (q + 1)
            mats += [proj] * (n_in - 2 * (q + 1))
            code.dec_mats[t] = tuple(mats)
        elif len(idx) == 1:
            # t_i: q^{-1} sum_j Y'_ij recovers the middle-reachable part.
            scaled = Mat(field, (proj.a * qinv) % p)
            mats = [scaled] * (q + 1) + [proj] * (n_in - (q + 1))
            code.dec_mats[t] = tuple(mats)
        elif len(idx) == 2:
            code.dec_mats[t] = (proj,) * n_in
        else:
            a, b, c = idx
            d1 = proj.a.copy()
            d1[0, _slot_first(a, b)] = (p - 1) % p
            d2 = proj.a.copy()
            d2[1, _slot_second(m, b, a)] = (p - 1) % p
            mats = [Mat(field, d1), Mat(field, d2)] + [proj] * (n_in - 2)
            code.dec_mats[t] = tuple(mats)
    return code


# --- k-copy merged scheme ------------------------------------------------------------


def scheme_merged(family: str, m: int, q: int, p: int, k: int) -> FracLinCode:
    """The (2k, m+1) code on the k-copy merge: copy c carries source
    components 2c-1 and 2c through the base scheme."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if family == "n1":
        base_code = scheme_n1(m, q, p)
    elif family == "n2":
        base_code = scheme_n2(m, q, p)
    else:
        raise ValueError(f"unknown family {family!r}")
    if k == 1:
        return base_code
    base = base_code.net
    merged, edge_map = merge_with_map(base, k)
    field = base_code.field
    r, l = 2 * k, m + 1
    code = FracLinCode(merged, r, l, field)
    for me, (copy, be) in enumerate(edge_map):
        e = merged.edges[me]
        if merged.role(e.tail) == SOURCE:
            a = np.zeros((l, r), dtype=np.int64)
            a[:, 2 * copy - 2 : 2 * copy] = base_code.src_mats[be].a
            code.src_mats[me] = Mat(field, a)
        else:
            code.in_mats[me] = base_code.in_mats[be]
    for t in merged.terminals:
        n_base = len(base.in_edges(t))
        mats = []
        for copy in range(1, k + 1):
            for pos in range(n_base):
                d = np.zeros((r, l), dtype=np.int64)
                d[2 * copy - 2 : 2 * copy, :] = base_code.dec_mats[t][pos].a
                mats.append(Mat(field, d))
        code.dec_mats[t] = tuple(mats)
    return code


# --- code unrolling (merged -> base at k times the block length) ----------------------


def unroll_merged(merged_code: FracLinCode, k: int, base: Optional[SumNetwork] = None) -> FracLinCode:
    """Turn a verifying (r,l) code on a k-copy merge into an (r, l*k) code
    on the base network: each base edge carries the stacked messages of
    its k images."""
    if not verify(merged_code.net, merged_code).ok:
        raise UnverifiedCodeError("input code does not verify on the merged network")
    if k == 1 and base is None:
        return merged_code
    if base is None:
        raise ValueError("base network required to unroll a k>1 merge")
    merged = merged_code.net
    images = unmerge_map(merged, base, k)
    field = merged_code.field
    r, l = merged_code.r, merged_code.l
    code = FracLinCode(base, r, l * k, field)
    for be, e in enumerate(base.edges):
        imgs = images[be]
        if base.role(e.tail) == SOURCE:
            a = np.vstack([merged_code.src_mats[me].a for me in imgs])
            code.src_mats[be] = Mat(field, a)
        else:
            n_in = len(base.in_edges(e.tail))
            per_pos = []
            for pos in range(n_in):
                blk = np.zeros((l * k, l * k), dtype=np.int64)
                for c, me in enumerate(imgs):
                    blk[c * l : (c + 1) * l, c * l : (c + 1) * l] = merged_code.in_mats[me][pos].a
                per_pos.append(Mat(field, blk))
            code.in_mats[be] = tuple(per_pos)
    for t in base.terminals:
        n_in = len(base.in_edges(t))
        mats = []
        for pos in range(n_in):
            parts = [merged_code.dec_mats[t][(c * n_in) + pos].a for c in range(k)]
            mats.append(Mat(field, np.hstack(parts)))
        code.dec_mats[t] = tuple(mats)
    return code


# --- routing baseline -------------------------------------------------------------------


def routing_code(net: SumNetwork, p: int) -> FracLinCode:
    """Characteristic-independent baseline: every middle edge forwards the
    sources that reach it verbatim (r=1, l = widest middle edge); each
    terminal selects every needed source exactly once."""
    shape = layer_shape(net)
    field = PrimeField(p)
    if not shape.middle:
        raise UnsupportedNetworkError("network has no middle edges")
    l = max(len(shape.src_order[me]) for me in shape.middle)
    r = 1
    code = FracLinCode(net, r, l, field)
    identity = Mat.identity(field, l)
    pad = _pad(field, l, r)
    u_slot: dict[tuple[str, str], int] = {}
    for me in shape.middle:
        u = net.edges[me].tail
        for slot, s in enumerate(shape.src_order[me]):
            u_slot[(u, s)] = slot
    for ei, e in enumerate(net.edges):
        if net.role(e.tail) != SOURCE:
            continue
        if net.role(e.head) == TERMINAL:
            code.src_mats[ei] = pad
        else:
            a = np.zeros((l, r), dtype=np.int64)
            a[u_slot[(e.head, e.tail)], 0] = 1
            code.src_mats[ei] = Mat(field, a)
    _identity_in_mats(net, code, identity)

    pick_first = _proj(field, r, l)
    for t in net.terminals:
        n_in = len(net.in_edges(t))
        mats: list[Mat] = [Mat.zeros(field, r, l)] * n_in
        covered: set[str] = set()
        for pos, me in shape.term_taps[t]:
            d = np.zeros((r, l), dtype=np.int64)
            for slot, s in enumerate(shape.src_order[me]):
                if s not in covered:
                    covered.add(s)
                    d[0, slot] = 1
            mats[pos] = Mat(field, d)
        for s, positions in shape.term_directs[t].items():
            if s in covered:
                continue
            covered.add(s)
            mats[positions[0]] = pick_first
        missing = set(net.source_order) - covered
        if missing:
            raise UnsupportedNetworkError(f"terminal {t} cannot reach sources {sorted(missing)}")
        code.dec_mats[t] = tuple(mats)
    return code


# --- code files ------------------------------------------------------------------------


def code_to_json(code: FracLinCode) -> bytes:
    net = code.net
    edge_matrices: dict[str, object] = {}
    for i, e in enumerate(net.edges):
        if net.role(e.tail) == SOURCE:
            edge_matrices[e.label] = code.src_mats[i].flat()
        else:
            edge_matrices[e.label] = [m.flat() for m in code.in_mats[i]]
    terminal_matrices = {t: [m.flat() for m in code.dec_mats[t]] for t in net.terminals}
    doc = {
        "version": CODE_FORMAT_VERSION,
        "r": code.r,
        "l": code.l,
        "p": code.field.p,
        "edge_matrices": edge_matrices,
        "terminal_matrices": terminal_matrices,
    }
    return (json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")


def _as_mat(field: PrimeField, flat, rows: int, cols: int, what: str) -> Mat:
    if not isinstance(flat, list) or len(flat) != rows * cols:
        raise CodeFormatError(f"{what}: expected {rows * cols} entries")
    if not all(isinstance(x, int) for x in flat):
        raise CodeFormatError(f"{what}: entries must be integers")
    return Mat(field, np.array(flat, dtype=np.int64).reshape(rows, cols))


def code_from_json(net: SumNetwork, data: bytes) -> FracLinCode:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CodeFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CodeFormatError("top level must be an object")
    for key in ("version", "r", "l", "p", "edge_matrices", "terminal_matrices"):
        if key not in doc:
            raise CodeFormatError(f"missing field {key!r}")
    if doc["version"] != CODE_FORMAT_VERSION:
        raise CodeFormatError(f"unsupported version {doc['version']}")
    r, l, p = doc["r"], doc["l"], doc["p"]
    field = PrimeField(p)
    code = FracLinCode(net, r, l, field)
    edge_matrices = doc["edge_matrices"]
    for i, e in enumerate(net.edges):
        if e.label not in edge_matrices:
            raise CodeFormatError(f"edge_matrices missing edge {e.label}")
        entry = edge_matrices[e.label]
        if net.role(e.tail) == SOURCE:
            code.src_mats[i] = _as_mat(field, entry, l, r, f"edge {e.label}")
        else:
            ins = net.in_edges(e.tail)
            if not isinstance(entry, list) or len(entry) != len(ins):
                raise CodeFormatError(f"edge {e.label}: expected {len(ins)} matrices")
            code.in_mats[i] = tuple(
                _as_mat(field, flat, l, l, f"edge {e.label}[{j}]") for j, flat in enumerate(entry)
            )
    for t in net.terminals:
        if t not in doc["terminal_matrices"]:
            raise CodeFormatError(f"terminal_matrices missing terminal {t}")
        entry = doc["terminal_matrices"][t]
        ins = net.in_edges(t)
        if not isinstance(entry, list) or len(entry) != len(ins):
            raise CodeFormatError(f"terminal {t}: expected {len(ins)} matrices")
        code.dec_mats[t] = tuple(
            _as_mat(field, flat, r, l, f"terminal {t}[{j}]") for j, flat in enumerate(entry)
        )
    code.check_shapes()
    return code
