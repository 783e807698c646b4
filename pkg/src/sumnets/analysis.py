"""Decoder feasibility, code search, and rank-counting bound certificates.

All coding freedom in the bottleneck families lives on the middle edges,
and every source reaches every middle edge it can reach through a private
source edge.  A code is therefore fully captured by its *composite
encodings*: the end-to-end l x (r*|S_e|) map from the reachable sources
onto each middle edge.  Feasibility of a rate then reduces to, per
terminal, a linear solve for decoders against the stacked composites.

Bound certificates mechanize the counting arguments: if a verified code
lets some set of maps recover every source block (rank = r*|S|), then
dimension counting forces r/l below a closed-form bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .coding import (
    FracLinCode,
    LayerShape,
    UnsupportedNetworkError,
    UnverifiedCodeError,
    layer_shape,
    transfer,
)
from .constructions import n2_s_ij, s1
from .galois import PrimeField
from .kernels import rref_mod
from .matrix import Mat, solve_right
from .network import SOURCE, SumNetwork

MODES = ("n1-with-groups", "n1-middle-only", "n2-middle-only", "n2-redundancy")


class BudgetExceededError(ValueError):
    """Exhaustive search over a space larger than the configured budget."""


# --- composite encodings -----------------------------------------------------


@dataclass
class CompositeEncoding:
    """Per middle edge, the l x (r*|S_e|) source-to-edge map, with block
    columns in the declared S_e order."""

    r: int
    l: int
    field: PrimeField
    mats: dict[int, Mat]  # middle edge index -> composite matrix

    def check_shapes(self, shape: LayerShape) -> None:
        if set(self.mats) != set(shape.middle):
            raise ValueError("composite encoding does not cover exactly the middle edges")
        for me, mat in self.mats.items():
            want = (self.l, self.r * len(shape.src_order[me]))
            if mat.shape != want:
                raise ValueError(f"composite for middle edge {me}: expected shape {want}")


def composites_from_code(net: SumNetwork, code: FracLinCode) -> CompositeEncoding:
    """Extract the composite encodings realized by an arbitrary code."""
    shape = layer_shape(net)
    tm = transfer(net, code)
    mats: dict[int, Mat] = {}
    for me in shape.middle:
        blocks = tm.edge_blocks[me]
        cols = []
        for s in shape.src_order[me]:
            blk = blocks.get(tm.src_pos[s])
            cols.append(blk if blk is not None else np.zeros((code.l, code.r), dtype=np.int64))
        mats[me] = Mat(code.field, np.hstack(cols))
    return CompositeEncoding(code.r, code.l, code.field, mats)


# --- decoder feasibility ------------------------------------------------------


@dataclass
class DecodeResult:
    code: Optional[FracLinCode]
    failed_terminal: Optional[str]

    @property
    def feasible(self) -> bool:
        return self.code is not None


def _direct_chunks(r: int, l: int, count: int, source: str, terminal: str) -> list[range]:
    """Split the r source components across `count` parallel direct edges."""
    chunk = -(-r // count)
    if chunk > l:
        raise UnsupportedNetworkError(
            f"direct edges {source} -> {terminal} cannot carry {r} components in blocks of {l}"
        )
    return [range(i * chunk, min(r, (i + 1) * chunk)) for i in range(count)]


def feasible_decoders(
    net: SumNetwork,
    composites: CompositeEncoding,
    r: int,
    l: int,
    shape: Optional[LayerShape] = None,
) -> DecodeResult:
    """Solve for terminal decoders realizing the sum under the given
    composites, or report the first terminal where no decoders exist.

    Per terminal, decoder matrices on the tapped middle edges must
    reproduce I_r on every source block without a direct edge into the
    terminal; direct-edge decoders then absorb whatever residual remains
    on the directly-supplied blocks (always possible: the parallel direct
    edges jointly forward the full block).
    """
    if shape is None:
        shape = layer_shape(net)
    composites.check_shapes(shape)
    field = composites.field
    p = field.p

    # The solved decoders, if they exist for every terminal.
    dec_mats: dict[str, tuple[Mat, ...]] = {}
    direct_src: dict[int, Mat] = {}
    for t in net.terminals:
        taps = shape.term_taps[t]
        directs = shape.term_directs[t]
        nd = [s for s in net.source_order if s not in directs]
        nd_pos = {s: i for i, s in enumerate(nd)}

        # Stacked composites restricted to the non-direct source blocks.
        a_rows = []
        for _, me in taps:
            arr = np.zeros((l, r * len(nd)), dtype=np.int64)
            comp = composites.mats[me].a
            for j, s in enumerate(shape.src_order[me]):
                col = nd_pos.get(s)
                if col is not None:
                    arr[:, col * r : (col + 1) * r] = comp[:, j * r : (j + 1) * r]
            a_rows.append(arr)
        if nd and taps:
            a_stack = Mat(field, np.vstack(a_rows))
            b = Mat(field, np.tile(np.eye(r, dtype=np.int64), (1, len(nd))))
            d = solve_right(a_stack, b)
            if d is None:
                return DecodeResult(None, t)
            d_arr = d.a
        else:
            if nd:  # sources to recover but nothing to read them from
                return DecodeResult(None, t)
            d_arr = np.zeros((r, l * len(taps)), dtype=np.int64)

        mats: list[Mat] = [Mat.zeros(field, r, l)] * len(net.in_edges(t))
        tap_mats = []
        for i, (pos, _) in enumerate(taps):
            dm = Mat(field, d_arr[:, i * l : (i + 1) * l])
            mats[pos] = dm
            tap_mats.append(dm.a)

        # Residual correction on directly-supplied blocks.
        eye = np.eye(r, dtype=np.int64)
        for s, positions in directs.items():
            contrib = np.zeros((r, r), dtype=np.int64)
            for (_, me), dm in zip(taps, tap_mats):
                order = shape.src_order[me]
                if s in order:
                    j = order.index(s)
                    comp = composites.mats[me].a
                    contrib = (contrib + dm @ comp[:, j * r : (j + 1) * r]) % p
            residual = (eye - contrib) % p
            chunks = _direct_chunks(r, l, len(positions), s, t)
            for pos, rows in zip(positions, chunks):
                ei = net.in_edges(t)[pos]
                if ei not in direct_src:
                    a = np.zeros((l, r), dtype=np.int64)
                    a[np.arange(len(rows)), list(rows)] = 1
                    direct_src[ei] = Mat(field, a)
                dmat = np.zeros((r, l), dtype=np.int64)
                dmat[:, : len(rows)] = residual[:, list(rows)]
                mats[pos] = Mat(field, dmat)
        dec_mats[t] = tuple(mats)

    # Assemble the full code: composites realized on the source edges,
    # identity forwarding elsewhere.
    code = FracLinCode(net, r, l, field)
    identity = Mat.identity(field, l)
    for me in shape.middle:
        u = net.edges[me].tail
        comp = composites.mats[me].a
        for j, ei in enumerate(net.in_edges(u)):
            code.src_mats[ei] = Mat(field, comp[:, j * r : (j + 1) * r])
    code.src_mats.update(direct_src)
    for i, e in enumerate(net.edges):
        if net.role(e.tail) != SOURCE:
            code.in_mats[i] = (identity,) * len(net.in_edges(e.tail))
    code.dec_mats = dec_mats
    return DecodeResult(code, None)


# --- search --------------------------------------------------------------------


@dataclass(frozen=True)
class Exhaustive:
    budget: int = 1_000_000


@dataclass(frozen=True)
class Random:
    n: int
    seed: int


@dataclass
class SearchResult:
    found: list[FracLinCode]
    tried: int


def _composite_layout(shape: LayerShape, r: int, l: int) -> list[tuple[int, int]]:
    return [(me, l * r * len(shape.src_order[me])) for me in shape.middle]


def _composites_from_cells(
    field: PrimeField, shape: LayerShape, r: int, l: int, cells: np.ndarray
) -> CompositeEncoding:
    mats = {}
    at = 0
    for me, size in _composite_layout(shape, r, l):
        mats[me] = Mat(field, cells[at : at + size].reshape(l, r * len(shape.src_order[me])))
        at += size
    return CompositeEncoding(r, l, field, mats)


def search(
    net: SumNetwork, r: int, l: int, p: int, strategy: Union[Exhaustive, Random]
) -> SearchResult:
    """Enumerate or sample composite encodings and keep those with
    feasible decoders.  Deterministic: exhaustive order is lexicographic,
    random sampling is fixed by the seed."""
    field = PrimeField(p)
    shape = layer_shape(net)
    total_cells = sum(size for _, size in _composite_layout(shape, r, l))
    found: list[FracLinCode] = []
    tried = 0
    if isinstance(strategy, Exhaustive):
        space = p**total_cells
        if space > strategy.budget:
            raise BudgetExceededError(
                f"exhaustive space {p}^{total_cells} exceeds budget {strategy.budget}"
            )
        for assignment in itertools.product(range(p), repeat=total_cells):
            tried += 1
            cells = np.array(assignment, dtype=np.int64)
            comps = _composites_from_cells(field, shape, r, l, cells)
            result = feasible_decoders(net, comps, r, l, shape)
            if result.feasible:
                found.append(result.code)
    elif isinstance(strategy, Random):
        rng = np.random.default_rng(strategy.seed)
        for _ in range(strategy.n):
            tried += 1
            cells = rng.integers(0, p, size=total_cells, dtype=np.int64)
            comps = _composites_from_cells(field, shape, r, l, cells)
            result = feasible_decoders(net, comps, r, l, shape)
            if result.feasible:
                found.append(result.code)
    else:
        raise TypeError(f"unknown search strategy {strategy!r}")
    return SearchResult(found, tried)


# --- capacity formulas ------------------------------------------------------------


def capacity(family: str, m: int, q: int, k: int = 1) -> Fraction:
    """Linear coding capacity 2k/(m+1) of the k-copy merge of either family."""
    if family not in ("n1", "n2"):
        raise ValueError(f"unknown family {family!r}")
    if m < 1 or q < 2 or k < 1:
        raise ValueError(f"invalid parameters m={m}, q={q}, k={k}")
    return Fraction(2 * k, m + 1)


def wrong_char_bound(m: int, q: int) -> Fraction:
    """Rate bound 2/(m+1+2/(q+1)) when the characteristic is on the wrong
    side of q; strictly below the capacity 2/(m+1)."""
    if m < 1 or q < 2:
        raise ValueError(f"invalid parameters m={m}, q={q}")
    return Fraction(2 * (q + 1), (m + 1) * (q + 1) + 2)


# --- bound certificates ------------------------------------------------------------


@dataclass
class BoundReport:
    """Rank-count certificate: the stacked recovery map of a verified code
    has full rank r*|S|, so row counting forces r/l <= implied."""

    mode: str
    rank: int
    required: int
    implied: Fraction
    closed_form: Fraction
    rate: Fraction
    consistent: bool  # rank == required (must hold for any verified code)
    satisfied: bool  # rate <= implied
    redundancy_ok: Optional[bool] = None  # n2-redundancy only

    @property
    def ok(self) -> bool:
        return self.consistent and self.satisfied and self.redundancy_ok is not False

    def to_text(self) -> str:
        lines = [
            f"mode: {self.mode}",
            f"rank of stacked recovery map: {self.rank} (required {self.required})",
            f"implied bound: r/l <= {self.implied}",
            f"closed form: {self.closed_form}",
            f"code rate: {self.rate}",
        ]
        if self.redundancy_ok is not None:
            lines.append(f"redundancy check: {'ok' if self.redundancy_ok else 'FAILED'}")
        if not self.consistent:
            lines.append("soundness violation: rank deficit on a verified code")
        lines.append("certificate: PASS" if self.ok else "certificate: FAIL")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "rank": self.rank,
            "required": self.required,
            "implied": [self.implied.numerator, self.implied.denominator],
            "closed_form": [self.closed_form.numerator, self.closed_form.denominator],
            "rate": [self.rate.numerator, self.rate.denominator],
            "consistent": self.consistent,
            "satisfied": self.satisfied,
            "redundancy_ok": self.redundancy_ok,
            "pass": self.ok,
        }


def bound_check(net: SumNetwork, code: FracLinCode, mode: str, m: int, q: int) -> BoundReport:
    """Certify the counting bound realized by a verified code.

    n1-with-groups: the m group-source blocks plus all middle-edge messages
    recover every source (rank r*|S|), so rm + l*E >= r*|S| and
    r/l <= 2k/(m+1).

    n1-middle-only / n2-middle-only: the middle-edge messages alone recover every
    source, so l*E >= r*|S|.

    n2-redundancy: additionally, the m per-group sums over S_{i,q+1} are
    already determined by the first q middle edges of each group
    (rank does not grow when those selector rows are appended), which
    tightens the count to l*E >= r*(|S| + m).
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    tm = transfer(net, code)
    from .coding import verify_transfer

    if not verify_transfer(tm).ok:
        raise UnverifiedCodeError("bound_check requires a verifying code")

    r, l = code.r, code.l
    n_src = len(net.source_order)
    required = r * n_src
    middles = net.middle_edges()
    n_mid = len(middles)
    if n_mid == 0 or n_mid % (m * (q + 1)) != 0:
        raise ValueError(f"middle edge count {n_mid} does not match m={m}, q={q}")
    k = n_mid // (m * (q + 1))

    middle_rows = np.vstack([tm.edge_matrix(me).a for me in middles])
    if mode == "n1-with-groups":
        selectors = _selector_rows(net, r, [ [s1(i)] for i in range(1, m + 1) ])
        stacked = np.vstack([selectors, middle_rows])
        implied = Fraction(n_mid, n_src - m)
        closed = capacity("n1", m, q, k)
    elif mode == "n1-middle-only":
        stacked = middle_rows
        implied = Fraction(n_mid, n_src)
        closed = k * wrong_char_bound(m, q)
    elif mode == "n2-middle-only":
        stacked = middle_rows
        implied = Fraction(n_mid, n_src)
        closed = capacity("n2", m, q, k)
    else:  # n2-redundancy
        stacked = middle_rows
        implied = Fraction(n_mid, n_src + m)
        closed = k * wrong_char_bound(m, q)
    if implied != closed:
        raise ValueError(
            f"mode {mode} does not apply: implied bound {implied} != closed form {closed}"
        )

    got_rank, _ = rref_mod(stacked.copy(), code.field.p)
    redundancy_ok = None
    if mode == "n2-redundancy":
        redundancy_ok = _group_sum_redundancy(net, tm, m, q, k)

    rate = Fraction(r, l)
    return BoundReport(
        mode=mode,
        rank=got_rank,
        required=required,
        implied=implied,
        closed_form=closed,
        rate=rate,
        consistent=got_rank == required,
        satisfied=rate <= implied,
        redundancy_ok=redundancy_ok,
    )


def _selector_rows(net: SumNetwork, r: int, groups: list[list[str]]) -> np.ndarray:
    """For each group of source labels, r rows with I_r on every listed
    source block (the map X |-> sum of those blocks)."""
    pos = {s: i for i, s in enumerate(net.source_order)}
    out = np.zeros((r * len(groups), r * len(net.source_order)), dtype=np.int64)
    eye = np.eye(r, dtype=np.int64)
    for g, labels in enumerate(groups):
        for s in labels:
            out[g * r : (g + 1) * r, pos[s] * r : (pos[s] + 1) * r] += eye
    return out


def _group_sum_redundancy(net, tm, m: int, q: int, k: int) -> bool:
    """The per-group sums over S_{i,q+1} add no rank beyond the middle
    edges with index j <= q: appending those selector rows leaves the
    rank unchanged."""

    def group_index(me: int) -> tuple[int, int]:
        u = net.edges[me].tail
        parts = [int(x) for x in u.split("_")[1:] if x.isdigit()]
        return parts[0], parts[1]

    first_q = [me for me in net.middle_edges() if group_index(me)[1] <= q]
    base = np.vstack([tm.edge_matrix(me).a for me in first_q])
    groups = [n2_s_ij(m, q, i, q + 1) for i in range(1, m + 1)]
    selectors = _selector_rows(net, tm.r, groups) % tm.field.p
    p = tm.field.p
    rank_base, _ = rref_mod(base.copy(), p)
    rank_aug, _ = rref_mod(np.vstack([base, selectors]), p)
    return rank_aug == rank_base
