"""Geometric sentence alignment: correspondence points plus sentence boundaries to aligned blocks.

Blocks use half-open sentence index ranges ``[x0, x1) x [y0, y1)``; either
side may be empty.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from bimap.geometry import InputError


@dataclass(frozen=True, order=True)
class AlignedBlock:
    x0: int
    x1: int
    y0: int
    y1: int
    supported: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise InputError(f"inverted block range {self}")

    @property
    def nx(self) -> int:
        return self.x1 - self.x0

    @property
    def ny(self) -> int:
        return self.y1 - self.y0

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    def is_one_to_one(self) -> bool:
        return self.nx == 1 and self.ny == 1

    def key(self) -> tuple:
        return (self.x0, self.x1, self.y0, self.y1)

    def union(self, other: "AlignedBlock") -> "AlignedBlock":
        return AlignedBlock(min(self.x0, other.x0), max(self.x1, other.x1),
                            min(self.y0, other.y0), max(self.y1, other.y1), self.supported or other.supported)

    def cells(self):
        return {(i, j) for i in range(self.x0, self.x1) for j in range(self.y0, self.y1)}


class Alignment(tuple):
    """Ordered blocks that partition both sentence sequences."""

    def __new__(cls, blocks: Sequence[AlignedBlock], n_x: int | None = None, n_y: int | None = None):
        self = super().__new__(cls, blocks)
        cx = cy = 0
        for b in self:
            if b.x0 != cx or b.y0 != cy:
                raise InputError(f"block {b.key()} does not continue at ({cx}, {cy})")
            if b.nx == 0 and b.ny == 0:
                raise InputError("empty-by-empty block")
            cx, cy = b.x1, b.y1
        if n_x is not None and cx != n_x or n_y is not None and cy != n_y:
            raise InputError(f"alignment covers {cx}x{cy} sentences, expected {n_x}x{n_y}")
        self.n_x, self.n_y = cx, cy
        return self

    def keys(self) -> list:
        return [b.key() for b in self]

    @classmethod
    def from_beads(cls, beads: Sequence[tuple[int, int]]) -> "Alignment":
        """Alignment from bead shapes such as ``[(1, 1), (2, 1), (0, 1)]``."""
        out, cx, cy = [], 0, 0
        for nx, ny in beads:
            out.append(AlignedBlock(cx, cx + nx, cy, cy + ny))
            cx, cy = cx + nx, cy + ny
        return cls(out)


@dataclass(frozen=True)
class SentenceGrid:
    """Sentence end offsets on each axis; the last entry is the text length."""
    x_bounds: tuple
    y_bounds: tuple

    def __post_init__(self):
        for name in ("x_bounds", "y_bounds"):
            b = tuple(int(v) for v in getattr(self, name))
            if not b:
                raise InputError(f"{name} is empty")
            if b[0] <= 0 or any(q <= p for p, q in zip(b, b[1:])):
                raise InputError(f"{name} must be positive and strictly increasing")
            object.__setattr__(self, name, b)

    @property
    def n_x(self) -> int:
        return len(self.x_bounds)

    @property
    def n_y(self) -> int:
        return len(self.y_bounds)

    @property
    def width(self) -> int:
        return self.x_bounds[-1]

    @property
    def height(self) -> int:
        return self.y_bounds[-1]

    def x_lengths(self) -> list:
        return _lengths(self.x_bounds)

    def y_lengths(self) -> list:
        return _lengths(self.y_bounds)

    def cell(self, x: float, y: float) -> tuple[int, int]:
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise InputError(f"point ({x}, {y}) outside the {self.width}x{self.height} sentence grid")
        return (bisect_right(self.x_bounds, x), bisect_right(self.y_bounds, y))


def _lengths(bounds) -> list:
    return [b - a for a, b in zip((0,) + tuple(bounds[:-1]), bounds)]


def points_to_cells(points, grid: SentenceGrid) -> set:
    """Grid cells (x sentence, y sentence) holding at least one point."""
    return set(cell_counts(points, grid))


def cell_counts(points, grid: SentenceGrid) -> Counter:
    return Counter(grid.cell(p[0], p[1]) for p in points)


def close_and_fill(relation, n_x: int, n_y: int) -> list:
    """Transitive closure plus contiguity, then empty blocks for uncovered stretches.

    Cells that share a row or column are joined, each component becomes its
    bounding rectangle, and rectangles that overlap or cross on either axis
    are merged until the blocks are ordered on both axes.  Blocks built from
    cells are ``supported``; filler blocks are not.
    """
    cells = sorted(set(relation))
    for i, j in cells:
        if not (0 <= i < n_x and 0 <= j < n_y):
            raise InputError(f"cell {(i, j)} outside {n_x}x{n_y}")
    parent = list(range(len(cells)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    first_in_row, first_in_col = {}, {}
    for idx, (i, j) in enumerate(cells):
        for table, key in ((first_in_row, i), (first_in_col, j)):
            other = table.setdefault(key, idx)
            if other != idx:
                ra, rb = find(idx), find(other)
                if ra != rb:
                    parent[ra] = rb
    boxes = {}
    for idx, (i, j) in enumerate(cells):
        r = find(idx)
        box = boxes.get(r)
        cell_box = AlignedBlock(i, i + 1, j, j + 1)
        boxes[r] = cell_box if box is None else box.union(cell_box)

    stack: list = []
    for b in sorted(boxes.values()):
        while stack and (stack[-1].x1 > b.x0 or stack[-1].y1 > b.y0):
            b = stack.pop().union(b)
        stack.append(b)

    out, cx, cy = [], 0, 0
    for b in stack:
        if b.x0 > cx or b.y0 > cy:
            out.append(AlignedBlock(cx, b.x0, cy, b.y0, supported=False))
        out.append(b)
        cx, cy = b.x1, b.y1
    if cx < n_x or cy < n_y:
        out.append(AlignedBlock(cx, n_x, cy, n_y, supported=False))
    return out


# Bead priors and length statistics of the classic length-based aligner.
DEFAULT_PRIORS = {
    (1, 1): 0.89,
    (1, 0): 0.0099,
    (0, 1): 0.0099,
    (2, 1): 0.089,
    (1, 2): 0.089,
    (2, 2): 0.011,
}


def _neg_log_two_tail(z: float) -> float:
    """-log P(|Z| >= z) for standard normal Z."""
    t = abs(z) / math.sqrt(2.0)
    if t < 25.0:
        return -math.log(math.erfc(t))
    # asymptotic expansion of erfc for large arguments
    return t * t + math.log(t * math.sqrt(math.pi)) - math.log1p(-1.0 / (2.0 * t * t))


@dataclass(frozen=True)
class LengthModel:
    c: float = 1.0
    s2: float = 6.8
    priors: tuple = tuple(sorted(DEFAULT_PRIORS.items()))

    def match_cost(self, lx: float, ly: float) -> float:
        if lx == 0 and ly == 0:
            return 0.0
        mean = (lx + ly / self.c) / 2.0
        z = (self.c * lx - ly) / math.sqrt(self.s2 * mean)
        return _neg_log_two_tail(z)

    def bead_costs(self) -> dict:
        return {shape: -math.log(p) for shape, p in self.priors}


@dataclass(frozen=True)
class LengthAlignment:
    beads: tuple      # (nx, ny) shapes in order
    cost: float
    second_cost: float
    confidence: float

    def blocks(self, x0: int = 0, y0: int = 0) -> list:
        out, cx, cy = [], x0, y0
        for nx, ny in self.beads:
            out.append(AlignedBlock(cx, cx + nx, cy, cy + ny))
            cx, cy = cx + nx, cy + ny
        return out


def length_align(x_lens: Sequence[float], y_lens: Sequence[float], model: LengthModel | None = None) -> LengthAlignment:
    """Best and second-best bead segmentations by sentence length.

    Confidence is ``(second best cost - best cost) / number of beads in the
    best path``; it is infinite when only one segmentation exists.
    """
    model = model or LengthModel()
    nx, ny = len(x_lens), len(y_lens)
    if nx == 0 and ny == 0:
        raise InputError("nothing to align")
    prior = model.bead_costs()
    cx = np.concatenate([[0.0], np.cumsum(x_lens, dtype=float)])
    cy = np.concatenate([[0.0], np.cumsum(y_lens, dtype=float)])
    # best[i][j]: up to two (cost, di, dj, prev_rank) entries sorted by cost
    best = [[[] for _ in range(ny + 1)] for _ in range(nx + 1)]
    best[0][0] = [(0.0, 0, 0, -1)]
    for i in range(nx + 1):
        for j in range(ny + 1):
            if i == 0 and j == 0:
                continue
            cands = []
            for (di, dj), pc in prior.items():
                pi, pj = i - di, j - dj
                if pi < 0 or pj < 0 or not best[pi][pj]:
                    continue
                step = pc + model.match_cost(cx[i] - cx[pi], cy[j] - cy[pj])
                for rank, entry in enumerate(best[pi][pj]):
                    cands.append((entry[0] + step, di, dj, rank))
            cands.sort()
            best[i][j] = cands[:2]

    def backtrace(rank):
        beads, i, j = [], nx, ny
        while i or j:
            cost, di, dj, prev = best[i][j][rank]
            beads.append((di, dj))
            i, j, rank = i - di, j - dj, prev
        return tuple(reversed(beads))

    final = best[nx][ny]
    beads = backtrace(0)
    cost = final[0][0]
    if len(final) > 1:
        second = final[1][0]
        conf = (second - cost) / len(beads)
    else:
        second, conf = math.inf, math.inf
    return LengthAlignment(beads, cost, second, conf)


@dataclass
class GsaReport:
    relation: set = field(default_factory=set)
    closed: list = field(default_factory=list)
    realigned: list = field(default_factory=list)   # (nx, ny, confidence, accepted)

    @property
    def largest_realigned(self) -> tuple[int, int]:
        if not self.realigned:
            return (0, 0)
        return max(((r[0], r[1]) for r in self.realigned), key=lambda s: (max(s), min(s)))


def _merge_groups(blocks: list) -> list:
    """Pair each empty block with an adjacent supported block that is not 1x1."""
    groups, i = [], 0
    while i < len(blocks):
        b = blocks[i]
        nxt = blocks[i + 1] if i + 1 < len(blocks) else None
        if nxt is not None and (
            (not b.supported and nxt.supported and not nxt.is_one_to_one())
            or (b.supported and not b.is_one_to_one() and not nxt.supported)
        ):
            groups.append([b, nxt])
            i += 2
        else:
            groups.append([b])
            i += 1
    return groups


def gsa_align(points, grid: SentenceGrid, x_lens: Sequence[float] | None = None,
              y_lens: Sequence[float] | None = None, min_confidence: float = 1.0,
              model: LengthModel | None = None, merge_empty: bool = True,
              max_overruled: int = 1, report: GsaReport | None = None) -> Alignment:
    """Sentence alignment from correspondence points and a sentence grid.

    Every block that is not 1x1 is re-aligned by sentence length.  The
    re-alignment is kept only when its confidence reaches ``min_confidence``,
    it is no coarser than what it replaces, and it leaves at most
    ``max_overruled`` points outside its blocks, each in a cell weaker than
    every attested cell it keeps: a stray point may be overruled, a
    well-attested correspondence may not.  Empty blocks next to many-to-many
    blocks are first tried merged with them.  The default length model uses
    the texts' overall length ratio.
    """
    x_lens = list(grid.x_lengths() if x_lens is None else x_lens)
    y_lens = list(grid.y_lengths() if y_lens is None else y_lens)
    if len(x_lens) != grid.n_x or len(y_lens) != grid.n_y:
        raise InputError("sentence lengths do not match the grid")
    if model is None:
        sx, sy = sum(x_lens), sum(y_lens)
        model = LengthModel(c=sy / sx if sx > 0 and sy > 0 else 1.0)
    report = report if report is not None else GsaReport()
    counts = cell_counts(points, grid)
    relation = set(counts)
    report.relation = relation
    blocks = close_and_fill(relation, grid.n_x, grid.n_y)
    report.closed = blocks

    def realign(block, n_before=1):
        la = length_align(x_lens[block.x0:block.x1], y_lens[block.y0:block.y1], model)
        parts = la.blocks(block.x0, block.y0)
        kept = set().union(*(p.cells() for p in parts))
        dropped = [counts[c] for c in block.cells() - kept if c in counts]
        # a dropped cell must be weaker evidence than every attested cell that survives
        floor = min((counts[c] for c in kept if c in counts), default=math.inf)
        ok = (la.confidence >= min_confidence and sum(dropped) <= max_overruled
              and all(n < floor for n in dropped) and len(parts) >= n_before)
        report.realigned.append((block.nx, block.ny, la.confidence, ok))
        return parts if ok else None

    out = []
    groups = _merge_groups(blocks) if merge_empty else [[b] for b in blocks]
    for group in groups:
        if len(group) == 2:
            # an empty block stands for one unmatched bead per sentence
            n_before = sum(1 if b.supported else b.nx + b.ny for b in group)
            merged = realign(group[0].union(group[1]), n_before)
            if merged is not None:
                out.extend(merged)
                continue
        for b in group:
            if b.is_one_to_one():
                out.append(AlignedBlock(b.x0, b.x1, b.y0, b.y1))
                continue
            split = realign(b)
            out.extend(split if split is not None else [AlignedBlock(b.x0, b.x1, b.y0, b.y1)])
    return Alignment(out, grid.n_x, grid.n_y)
