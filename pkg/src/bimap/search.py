"""Chain recognition and the greedy expanding-rectangle trace."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from bimap.geometry import BitextSpace, Chain, CorrespondencePoint, DomainError, InputError, SearchRectangle, displacements
from bimap.matching import MatchConfig, PointGenerator, TokenizedText


@dataclass(frozen=True)
class SimrParams:
    """Tunable thresholds of the mapper.

    ``min_gap`` of ``None`` means chain size times the mean token length.
    """
    max_point_dispersal: float = 6.0
    max_angle_deviation: float = 12.0
    max_pal: int = 2
    chain_size: int = 8
    initial_rect_fraction: float = 1.0 / 200.0
    rect_growth: float = 1.3
    lcsr_threshold: float = 0.7
    gap_proximity: float = 1.0
    min_gap: float | None = None

    def __post_init__(self):
        if self.chain_size < 2:
            raise InputError("chain_size must be >= 2")
        if self.rect_growth <= 1.0:
            raise InputError("rect_growth must exceed 1")
        if not 0.0 < self.initial_rect_fraction <= 1.0:
            raise InputError("initial_rect_fraction must lie in (0, 1]")
        for name in ("max_point_dispersal", "max_angle_deviation", "max_pal", "gap_proximity"):
            if getattr(self, name) < 0:
                raise InputError(f"{name} must be >= 0")
        if not 0.0 < self.lcsr_threshold <= 1.0:
            raise InputError("lcsr_threshold must lie in (0, 1]")

    def replace(self, **changes) -> "SimrParams":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return SimrParams(**values)


@dataclass(frozen=True)
class Region:
    """Axis-aligned part of the bitext space searched by one trace."""
    x0: float
    y0: float
    x1: float
    y1: float

    @classmethod
    def of(cls, space: BitextSpace) -> "Region":
        return cls(0.0, 0.0, float(space.width), float(space.height))

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def slope(self) -> float:
        return self.height / self.width


def ambiguity_level(p, points) -> int:
    """Points sharing ``p``'s column plus points sharing its row, minus two."""
    col = sum(1 for q in points if q[0] == p[0])
    row = sum(1 for q in points if q[1] == p[1])
    return col + row - 2


def ambiguity_levels(points) -> np.ndarray:
    if len(points) == 0:
        return np.zeros(0, dtype=np.int64)
    arr = np.asarray([(p[0], p[1]) for p in points], dtype=float)
    _, xinv, xcnt = np.unique(arr[:, 0], return_inverse=True, return_counts=True)
    _, yinv, ycnt = np.unique(arr[:, 1], return_inverse=True, return_counts=True)
    return xcnt[xinv] + ycnt[yinv] - 2


def filter_ambiguous(points, max_pal: int) -> list:
    """Drop points whose ambiguity level (within ``points``) exceeds ``max_pal``."""
    points = list(points)
    levels = ambiguity_levels(points)
    return [p for p, lv in zip(points, levels) if lv <= max_pal]


def _as_array(points) -> np.ndarray:
    """``(n, 4)`` float array of x, y, x_index, y_index."""
    out = np.empty((len(points), 4), dtype=float)
    for i, p in enumerate(points):
        out[i, 0], out[i, 1] = p[0], p[1]
        out[i, 2] = p[2] if len(p) > 2 else p[0]
        out[i, 3] = p[3] if len(p) > 3 else p[1]
    return out


def _sorted_by_displacement(points, slope: float, origin=(0.0, 0.0)):
    arr = _as_array(points)
    d = displacements(arr[:, 0] - origin[0], arr[:, 1] - origin[1], slope)
    order = np.argsort(d, kind="stable")
    return [points[i] for i in order], arr[order]


def _window_stats(wx: np.ndarray, wy: np.ndarray):
    """Least-squares fit of y on x for each row of ``(m, k)`` window arrays.

    Returns slope, intercept, RMS perpendicular dispersal and angle in degrees;
    rows with no x spread get NaN.
    """
    wx = np.ascontiguousarray(wx)
    wy = np.ascontiguousarray(wy)
    k = wx.shape[1]
    mx = wx.mean(axis=1)
    my = wy.mean(axis=1)
    dx = wx - mx[:, None]
    dy = wy - my[:, None]
    sxx = (dx * dx).sum(axis=1)
    sxy = (dx * dy).sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = np.where(sxx > 0, sxy / sxx, np.nan)
    intercept = my - slope * mx
    resid = dy - slope[:, None] * dx
    rms = np.sqrt((resid * resid).sum(axis=1) / k / (1.0 + slope * slope))
    angle = np.degrees(np.arctan(slope))
    return slope, intercept, rms, angle


def _injective(wxi: np.ndarray, wyi: np.ndarray) -> np.ndarray:
    sx = np.sort(wxi, axis=1)
    sy = np.sort(wyi, axis=1)
    return (np.diff(sx, axis=1) != 0).all(axis=1) & (np.diff(sy, axis=1) != 0).all(axis=1)


def chain_stats(points, space: BitextSpace | None = None, window_index: int = -1) -> Chain:
    """Fit a least-squares line (y on x) through ``points`` and measure dispersal."""
    pts = tuple(points)
    if len(pts) < 2:
        raise DomainError("a chain needs at least two points")
    arr = _as_array(pts)
    slope, intercept, rms, angle = _window_stats(arr[None, :, 0], arr[None, :, 1])
    if math.isnan(slope[0]):
        raise DomainError("degenerate chain: all points share one x coordinate")
    return Chain(pts, float(slope[0]), float(intercept[0]), float(rms[0]), float(angle[0]), window_index)


def enumerate_windows(points, k: int, space: BitextSpace, origin=(0.0, 0.0), slope: float | None = None) -> list:
    """Chains formed by every run of ``k`` consecutive points in displacement order."""
    points = list(points)
    n = len(points)
    if n < k:
        return []
    slope = space.slope if slope is None else slope
    ordered, _ = _sorted_by_displacement(points, slope, origin)
    out = []
    for i in range(n - k + 1):
        window = ordered[i:i + k]
        xs = {p[0] for p in window}
        if len(xs) == 1:
            out.append(Chain(tuple(window), math.nan, math.nan, math.nan, math.nan, i))
        else:
            out.append(chain_stats(window, space, i))
    return out


def _is_injective(chain: Chain) -> bool:
    xs = [p[2] if len(p) > 2 else p[0] for p in chain.points]
    ys = [p[3] if len(p) > 3 else p[1] for p in chain.points]
    return len(set(xs)) == len(xs) and len(set(ys)) == len(ys)


def angle_deviation(chain: Chain, diagonal_slope: float) -> float:
    return abs(chain.angle_deg - math.degrees(math.atan(diagonal_slope)))


def accept_chain(chain: Chain, params: SimrParams, space: BitextSpace | None = None,
                 diagonal_slope: float | None = None) -> bool:
    """Linearity, constant-slope and injectivity filters."""
    if diagonal_slope is None:
        diagonal_slope = space.slope
    if math.isnan(chain.rms_dispersal):
        return False
    return (chain.rms_dispersal <= params.max_point_dispersal
            and angle_deviation(chain, diagonal_slope) <= params.max_angle_deviation
            and _is_injective(chain))


def best_chain(candidates, params: SimrParams, space: BitextSpace | None = None,
               diagonal_slope: float | None = None) -> Chain | None:
    """Least-dispersed acceptable chain; ties go to smaller angle deviation, then earlier window."""
    if diagonal_slope is None:
        diagonal_slope = space.slope
    passing = [c for c in candidates if accept_chain(c, params, space, diagonal_slope)]
    if not passing:
        return None
    return min(passing, key=lambda c: (c.rms_dispersal, angle_deviation(c, diagonal_slope), c.window_index))


def recognize(points, params: SimrParams, slope: float, origin=(0.0, 0.0)) -> Chain | None:
    """Vectorised filter-enumerate-select step; agrees with ``best_chain(enumerate_windows(...))``."""
    k = params.chain_size
    pts = filter_ambiguous(points, params.max_pal)
    if len(pts) < k:
        return None
    ordered, arr = _sorted_by_displacement(pts, slope, origin)
    wx = sliding_window_view(arr[:, 0], k)
    wy = sliding_window_view(arr[:, 1], k)
    _, _, rms, angle = _window_stats(wx, wy)
    dev = np.abs(angle - math.degrees(math.atan(slope)))
    ok = ~np.isnan(rms)
    ok &= rms <= params.max_point_dispersal
    ok &= dev <= params.max_angle_deviation
    if not ok.any():
        return None
    cand = np.flatnonzero(ok)
    cand = cand[_injective(sliding_window_view(arr[:, 2], k)[cand], sliding_window_view(arr[:, 3], k)[cand])]
    if len(cand) == 0:
        return None
    order = np.lexsort((cand, dev[cand], rms[cand]))
    i = int(cand[order[0]])
    return chain_stats(ordered[i:i + k], window_index=i)


@dataclass
class SearchStats:
    cycles: int = 0
    chains: int = 0


def find_next_chain(anchor, params: SimrParams, generator: PointGenerator, region: Region,
                    diagonal_slope: float | None = None, stats: SearchStats | None = None,
                    base_width: float | None = None) -> Chain | None:
    """Grow a rectangle from ``anchor`` until it yields an acceptable chain.

    The first rectangle is ``initial_rect_fraction * base_width`` wide
    (``base_width`` defaults to the region width) with the region's slope.
    Returns ``None`` once the rectangle, clipped to ``region``, covers
    everything up and to the right of the anchor without success.
    """
    ax, ay = float(anchor[0]), float(anchor[1])
    if ax >= region.x1 or ay >= region.y1:
        return None
    slope = region.slope if diagonal_slope is None else diagonal_slope
    xt, yt = generator.xtext, generator.ytext
    xi0 = xt.index_range(ax, ax)[1]
    yj0 = yt.index_range(ay, ay)[1]
    x_hi, y_hi = xi0, yj0
    points: list = []
    base = region.width if base_width is None else base_width
    rect = SearchRectangle.proportional((ax, ay), params.initial_rect_fraction * base, region.slope)
    while True:
        r = rect.clipped(region.x1, region.y1)
        nx = xt.index_range(r.x_max, r.x_max)[1]
        ny = yt.index_range(r.y_max, r.y_max)[1]
        # Only the new L-shaped strip needs matching; the anchor corner is fixed.
        fresh = generator.pairs(x_hi, nx, yj0, ny) + generator.pairs(xi0, x_hi, y_hi, ny)
        x_hi, y_hi = nx, ny
        if stats is not None:
            stats.cycles += 1
        if fresh:
            points.extend(fresh)
            points.sort()
        if len(points) >= params.chain_size:
            chain = recognize(points, params, slope, (region.x0, region.y0))
            if chain is not None:
                if stats is not None:
                    stats.chains += 1
                return chain
        if r.width >= region.x1 - ax and r.height >= region.y1 - ay:
            return None
        rect = rect.grown(params.rect_growth)


def trace_region(generator: PointGenerator, params: SimrParams, region: Region,
                 diagonal_slope: float | None = None, stats: SearchStats | None = None,
                 base_width: float | None = None) -> list:
    """Greedy chain trace from the region's lower-left corner."""
    chains = []
    anchor = (region.x0, region.y0)
    while True:
        chain = find_next_chain(anchor, params, generator, region, diagonal_slope, stats, base_width)
        if chain is None:
            return chains
        chains.append(chain)
        anchor = chain.top_right


def trace_first_pass(xtext: TokenizedText, ytext: TokenizedText, cfg: MatchConfig, params: SimrParams,
                     space: BitextSpace | None = None, generator: PointGenerator | None = None,
                     stats: SearchStats | None = None) -> list:
    """Chains found by the expanding-rectangle search from the origin, in discovery order."""
    if space is None:
        space = BitextSpace(max(xtext.length, 1), max(ytext.length, 1))
    if generator is None:
        generator = PointGenerator(xtext, ytext, cfg)
    return trace_region(generator, params, Region.of(space), space.slope, stats)


def final_anchor(chains, default=(0.0, 0.0)) -> tuple:
    return chains[-1].top_right if chains else default


def is_lost(chains, space: BitextSpace, tolerance: float = 0.10) -> bool:
    """True when the trace stopped further than ``tolerance`` diagonals from the terminus."""
    fx, fy = final_anchor(chains)
    return math.hypot(space.width - fx, space.height - fy) > tolerance * space.diagonal_length


def as_points(chains) -> list:
    return [p if isinstance(p, CorrespondencePoint) else CorrespondencePoint(*p) for c in chains for p in c.points]
