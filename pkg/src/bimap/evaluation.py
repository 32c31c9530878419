"""Map error against reference correspondences, and alignment block errors."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bimap.geometry import BitextMap, DomainError, InputError, inverse_map
from bimap.gsa import Alignment

METRICS = ("horizontal", "vertical", "perpendicular")


@dataclass(frozen=True)
class ErrorStats:
    rms: float
    median_abs: float
    p99: float
    metric: str
    n: int = 0


def _errors(m: BitextMap, refs: np.ndarray, metric: str) -> np.ndarray:
    vertical = np.abs(m(refs[:, 0]) - refs[:, 1])
    if metric == "vertical":
        return vertical
    if metric == "perpendicular":
        w, h = float(m.space.width), float(m.space.height)
        return vertical * (w / math.hypot(w, h))
    if metric == "horizontal":
        return np.abs(inverse_map(m, refs[:, 1]) - refs[:, 0])
    raise InputError(f"unknown metric {metric!r}; expected one of {METRICS}")


def _as_refs(refs) -> np.ndarray:
    arr = np.asarray([(p[0], p[1]) for p in refs], dtype=float).reshape(-1, 2)
    if len(arr) == 0:
        raise DomainError("no reference points")
    return arr


def map_errors(m: BitextMap, refs, metric: str = "perpendicular") -> np.ndarray:
    """Per-reference absolute error of ``m`` under ``metric``."""
    return _errors(m, _as_refs(refs), metric)


def map_error(m: BitextMap, refs, metric: str = "perpendicular") -> ErrorStats:
    """RMS, median and 99th percentile of the absolute error of ``m`` at ``refs``."""
    e = map_errors(m, refs, metric)
    return ErrorStats(float(np.sqrt(np.mean(e * e))), float(np.median(e)),
                      float(np.percentile(e, 99)), metric, len(e))


def alignment_errors(test: Alignment, reference: Alignment) -> int:
    """Reference blocks that have no identical block in ``test``."""
    if (test.n_x, test.n_y) != (reference.n_x, reference.n_y):
        raise InputError(
            f"alignments cover different sentence counts: {test.n_x}x{test.n_y} vs {reference.n_x}x{reference.n_y}")
    have = set(test.keys())
    return sum(1 for k in reference.keys() if k not in have)
