"""Bitext-space types and the elementary geometry shared by the mapper and aligner.

Coordinates are character positions.  A token sits at the mean position of its
characters, so coordinates are half-integers in general and everything here is
plain double precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np


class BimapError(Exception):
    """Base class for errors raised by this package."""


class DomainError(BimapError, ValueError):
    """An argument lies outside the domain of the operation."""


class InputError(BimapError, ValueError):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise InputError(f"token length must be >= 1, got {self.length}")

    @property
    def mean_pos(self) -> float:
        return mean_position(self)

    @property
    def end(self) -> int:
        return self.start + self.length


def mean_position(token: Token) -> float:
    """Mean character offset of the token: ``start + (length - 1) / 2``."""
    return token.start + (token.length - 1) / 2.0


@dataclass(frozen=True)
class BitextSpace:
    width: float
    height: float

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise InputError(f"bitext space needs positive sides, got {self.width}x{self.height}")

    @property
    def slope(self) -> float:
        return self.height / self.width

    @property
    def diagonal_length(self) -> float:
        return math.hypot(self.width, self.height)

    @property
    def terminus(self) -> tuple[float, float]:
        return (float(self.width), float(self.height))

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.width and 0.0 <= y <= self.height


class CorrespondencePoint(NamedTuple):
    x: float
    y: float
    x_index: int = -1
    y_index: int = -1


def perp_displacement(p, space: BitextSpace) -> float:
    """Signed distance of ``p`` from the main diagonal, positive above it."""
    w, h = space.width, space.height
    return (p[1] * w - p[0] * h) / math.hypot(w, h)


def displacements(xs, ys, slope: float) -> np.ndarray:
    """Vectorised signed distance from the line ``y = slope * x``.

    Only the ordering matters for chain enumeration, and any line of the same
    slope yields the same ordering, so callers may pass coordinates relative to
    a local origin.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    return (ys - slope * xs) / math.sqrt(1.0 + slope * slope)


@dataclass(frozen=True)
class Chain:
    points: tuple
    slope: float
    intercept: float
    rms_dispersal: float
    angle_deg: float
    window_index: int = -1

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def top_right(self) -> tuple[float, float]:
        return (max(p[0] for p in self.points), max(p[1] for p in self.points))

    @property
    def bottom_left(self) -> tuple[float, float]:
        return (min(p[0] for p in self.points), min(p[1] for p in self.points))


@dataclass(frozen=True)
class SearchRectangle:
    anchor_x: float
    anchor_y: float
    width: float
    height: float

    @classmethod
    def proportional(cls, anchor, width: float, slope: float) -> "SearchRectangle":
        return cls(float(anchor[0]), float(anchor[1]), width, width * slope)

    @property
    def x_max(self) -> float:
        return self.anchor_x + self.width

    @property
    def y_max(self) -> float:
        return self.anchor_y + self.height

    def grown(self, factor: float) -> "SearchRectangle":
        return SearchRectangle(self.anchor_x, self.anchor_y, self.width * factor, self.height * factor)

    def clipped(self, x_limit: float, y_limit: float) -> "SearchRectangle":
        return SearchRectangle(
            self.anchor_x,
            self.anchor_y,
            min(self.width, x_limit - self.anchor_x),
            min(self.height, y_limit - self.anchor_y),
        )

    def contains(self, x: float, y: float) -> bool:
        # Open on the anchor side: points at the anchor belong to the previous chain.
        return self.anchor_x < x <= self.x_max and self.anchor_y < y <= self.y_max


@dataclass(frozen=True)
class MER:
    lower_left: tuple[float, float]
    upper_right: tuple[float, float]
    enclosed: tuple = ()

    @classmethod
    def enclosing(cls, points: Sequence) -> "MER":
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        return cls((min(xs), min(ys)), (max(xs), max(ys)), tuple(points))

    def contains(self, x: float, y: float) -> bool:
        return (self.lower_left[0] <= x <= self.upper_right[0]
                and self.lower_left[1] <= y <= self.upper_right[1])


@dataclass(frozen=True, eq=False)
class BitextMap:
    """Piecewise-linear injective map through strictly increasing anchors.

    ``anchors`` is an ``(n, 2)`` float array that starts at the origin and ends
    at the terminus.  ``mer_flags[i]`` marks anchors that are MER corners
    rather than observed correspondence points.
    """
    space: BitextSpace
    anchors: np.ndarray
    mer_flags: np.ndarray = None
    mers: tuple = ()
    points: tuple = field(default=(), repr=False)

    def __post_init__(self):
        a = np.asarray(self.anchors, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "anchors", a)
        flags = self.mer_flags
        if flags is None:
            flags = np.zeros(len(a), dtype=bool)
        object.__setattr__(self, "mer_flags", np.asarray(flags, dtype=bool))
        check_monotone(a)
        if not (a[0, 0] == 0.0 and a[0, 1] == 0.0):
            raise InputError("map must start at the origin")
        if not (a[-1, 0] == self.space.width and a[-1, 1] == self.space.height):
            raise InputError("map must end at the terminus")

    @classmethod
    def diagonal(cls, space: BitextSpace) -> "BitextMap":
        return cls(space, np.array([[0.0, 0.0], [space.width, space.height]]))

    @property
    def xs(self) -> np.ndarray:
        return self.anchors[:, 0]

    @property
    def ys(self) -> np.ndarray:
        return self.anchors[:, 1]

    def __len__(self):
        return len(self.anchors)

    def __eq__(self, other):
        if not isinstance(other, BitextMap):
            return NotImplemented
        return (self.space == other.space
                and np.array_equal(self.anchors, other.anchors)
                and np.array_equal(self.mer_flags, other.mer_flags))

    def __call__(self, x):
        return evaluate_map(self, x)

    def inverse(self, y):
        return inverse_map(self, y)

    def interior_points(self) -> np.ndarray:
        """Anchors that are observed points: no endpoints, no MER corners."""
        keep = ~self.mer_flags
        keep[0] = keep[-1] = False
        return self.anchors[keep]


def check_monotone(anchors: np.ndarray) -> None:
    a = np.asarray(anchors, dtype=float)
    if len(a) < 2:
        raise InputError("a map needs at least two anchors")
    d = np.diff(a, axis=0)
    if not (np.all(d[:, 0] > 0) and np.all(d[:, 1] > 0)):
        bad = int(np.argmin(np.minimum(d[:, 0], d[:, 1])))
        raise InputError(f"anchors not strictly increasing at index {bad + 1}")


def evaluate_map(m: BitextMap, x):
    """Interpolate the map at ``x`` (scalar or array)."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > m.space.width) or np.any(np.isnan(arr)):
        raise DomainError(f"x outside [0, {m.space.width}]")
    y = np.interp(arr, m.xs, m.ys)
    return float(y) if y.ndim == 0 else y


def inverse_map(m: BitextMap, y):
    arr = np.asarray(y, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > m.space.height) or np.any(np.isnan(arr)):
        raise DomainError(f"y outside [0, {m.space.height}]")
    x = np.interp(arr, m.ys, m.xs)
    return float(x) if x.ndim == 0 else x
