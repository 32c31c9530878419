"""Interpolated bitext maps: MER encapsulation, second-pass recovery, gap reports."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from bimap.geometry import MER, BitextMap, BitextSpace, CorrespondencePoint, InputError
from bimap.matching import MatchConfig, PointGenerator, TokenizedText
from bimap.search import Region, SearchStats, SimrParams, as_points, trace_region

log = logging.getLogger(__name__)


def encapsulate_mers(points, space: BitextSpace) -> BitextMap:
    """Build a strictly increasing map, boxing non-monotonic runs in MERs.

    Points are sorted by x.  Whenever a point (or box) does not lie strictly
    above and to the right of the box before it, the two are merged into
    their minimum enclosing rectangle, repeatedly, so the resulting corner
    sequence is strictly increasing.  Points on the border of the space are
    dropped since they cannot sit strictly between origin and terminus.
    """
    w, h = float(space.width), float(space.height)
    pts = []
    for p in points:
        x, y = float(p[0]), float(p[1])
        if not (0.0 <= x <= w and 0.0 <= y <= h):
            raise InputError(f"point ({x}, {y}) outside the {w}x{h} bitext space")
        if 0.0 < x < w and 0.0 < y < h:
            pts.append(p)
    pts.sort(key=lambda p: (p[0], p[1]))
    xs = [p[0] for p in pts]
    ys = sorted(p[1] for p in pts)
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise InputError("points share an x or y coordinate; deduplicate before encapsulating")

    # Stack entries: [x_lo, y_lo, x_hi, y_hi, members]
    stack: list = []
    for p in pts:
        box = [p[0], p[1], p[0], p[1], [p]]
        while stack and not (stack[-1][2] < box[0] and stack[-1][3] < box[1]):
            top = stack.pop()
            box = [min(top[0], box[0]), min(top[1], box[1]), max(top[2], box[2]), max(top[3], box[3]),
                   top[4] + box[4]]
        stack.append(box)

    anchors = [(0.0, 0.0)]
    flags = [False]
    mers = []
    for x0, y0, x1, y1, members in stack:
        if len(members) == 1:
            anchors.append((x0, y0))
            flags.append(False)
        else:
            mers.append(MER((x0, y0), (x1, y1), tuple(members)))
            anchors.extend([(x0, y0), (x1, y1)])
            flags.extend([True, True])
    anchors.append((w, h))
    flags.append(False)
    return BitextMap(space, np.array(anchors, dtype=float), np.array(flags), tuple(mers), tuple(pts))


def dedupe_points(points) -> list:
    """Keep the first point for each x token and each y token."""
    seen_x, seen_y, out = set(), set(), []
    dropped = 0
    for p in points:
        kx = p[2] if len(p) > 2 and p[2] >= 0 else ("x", p[0])
        ky = p[3] if len(p) > 3 and p[3] >= 0 else ("y", p[1])
        if kx in seen_x or ky in seen_y:
            dropped += 1
            continue
        seen_x.add(kx)
        seen_y.add(ky)
        out.append(p)
    if dropped:
        log.warning("dropped %d correspondence points that reuse a token", dropped)
    return out


def build_map(chains, space: BitextSpace) -> BitextMap:
    """Interpolated map through every chain point (MER-encapsulated)."""
    return build_map_from_points(as_points(chains), space)


def build_map_from_points(points, space: BitextSpace) -> BitextMap:
    return encapsulate_mers(dedupe_points(points), space)


@dataclass(frozen=True)
class GapRegion:
    region: Region
    kind: str  # "intersection" or "sandwich"
    h_gap: int
    v_gap: int


def default_min_gap(params: SimrParams, xtext: TokenizedText | None = None,
                    ytext: TokenizedText | None = None) -> float:
    if params.min_gap is not None:
        return float(params.min_gap)
    lengths = [t.mean_token_length for t in (xtext, ytext) if t is not None and len(t)]
    return params.chain_size * (min(lengths) if lengths else 1.0)


def find_gap_intersections(m: BitextMap, min_gap: float, proximity: float = 1.0) -> list:
    """Rectangles where a horizontal and a vertical gap of the map cross off the map.

    A horizontal gap is an x-interval between consecutive anchors longer than
    ``min_gap``; a vertical gap likewise in y.  Only crossings of different
    gaps are returned (the same-segment case is a sandwich region), and only
    when the rectangle sits within ``max(2 * mean spacing, proximity * side)``
    of the map, measured vertically.
    """
    a = m.anchors
    dx = np.diff(a[:, 0])
    dy = np.diff(a[:, 1])
    hg = np.flatnonzero(dx > min_gap)
    vg = np.flatnonzero(dy > min_gap)
    if len(hg) == 0 or len(vg) == 0:
        return []
    spacing = float(np.mean(np.hypot(dx, dy)))
    out = []
    for i in hg.tolist():
        for j in vg.tolist():
            if i == j:
                continue
            w = dx[i]
            h = dy[j]
            if j < i:
                dist = a[i, 1] - a[j + 1, 1]
            else:
                dist = a[j, 1] - a[i + 1, 1]
            if dist <= max(2.0 * spacing, proximity * max(w, h)):
                out.append(GapRegion(Region(a[i, 0], a[j, 1], a[i + 1, 0], a[j + 1, 1]), "intersection", i, j))
    return out


def find_sandwich_regions(m: BitextMap, min_gap: float) -> list:
    """Spaces between consecutive anchors big enough in both directions to hold a chain."""
    a = m.anchors
    d = np.diff(a, axis=0)
    idx = np.flatnonzero((d[:, 0] > min_gap) & (d[:, 1] > min_gap))
    return [GapRegion(Region(a[i, 0], a[i, 1], a[i + 1, 0], a[i + 1, 1]), "sandwich", int(i), int(i)) for i in idx]


@dataclass
class SecondPassReport:
    regions: list = field(default_factory=list)
    chains: list = field(default_factory=list)
    generated: int = 0
    searches: int = 0


def second_pass(m: BitextMap, xtext: TokenizedText, ytext: TokenizedText, cfg: MatchConfig,
                params: SimrParams, space: BitextSpace | None = None, generator: PointGenerator | None = None,
                report: SecondPassReport | None = None) -> BitextMap:
    """Search gap intersections and sandwiched spaces against their local diagonals.

    Newly accepted chains' points are merged with the first-pass points and the
    map is rebuilt.  With nothing new found the input map is returned.
    """
    space = m.space if space is None else space
    if generator is None:
        generator = PointGenerator(xtext, ytext, cfg)
    if report is None:
        report = SecondPassReport()
    min_gap = default_min_gap(params, xtext, ytext)
    regions = find_gap_intersections(m, min_gap, params.gap_proximity) + find_sandwich_regions(m, min_gap)
    regions.sort(key=lambda g: (g.region.x0, g.region.y0))
    before = generator.generated
    new_chains = []
    for g in regions:
        report.searches += 1
        stats = SearchStats()
        chains = trace_region(generator, params, g.region, g.region.slope, stats,
                              base_width=space.width)
        if chains:
            report.regions.append(g)
            new_chains.extend(chains)
    report.chains.extend(new_chains)
    report.generated += generator.generated - before
    if not new_chains:
        return m
    base = list(m.points) if m.points else [CorrespondencePoint(*p) for p in m.interior_points()]
    return build_map_from_points(base + as_points(new_chains), space)


def gap_report(m: BitextMap, threshold: float) -> list:
    """Every inter-anchor jump longer than ``threshold`` characters, per axis."""
    out = []
    a = m.anchors
    for (x0, y0), (x1, y1) in zip(a[:-1].tolist(), a[1:].tolist()):
        if x1 - x0 > threshold:
            out.append(("x", x0, x1))
        if y1 - y0 > threshold:
            out.append(("y", y0, y1))
    return out
