"""Slow, obviously-correct reference implementations used as test oracles."""
from itertools import combinations

import numpy as np


def lcs_bruteforce(a: str, b: str) -> int:
    """Longest common subsequence by enumerating every subsequence of the shorter string."""
    if len(a) > len(b):
        a, b = b, a

    def is_subseq(s, t):
        it = iter(t)
        return all(c in it for c in s)

    for n in range(len(a), 0, -1):
        for idx in combinations(range(len(a)), n):
            if is_subseq("".join(a[i] for i in idx), b):
                return n
    return 0


def min_range_subset(disp, k):
    """Smallest (max - min) over every k-subset of ``disp``, by exhaustion."""
    best = None
    for idx in combinations(range(len(disp)), k):
        vals = [disp[i] for i in idx]
        r = max(vals) - min(vals)
        if best is None or r < best:
            best = r
    return best


def merge_until_monotone(points):
    """MER corners by repeatedly merging any two boxes that are not strictly ordered.

    Quadratic-per-pass fixpoint; independent of the stack algorithm it checks.
    """
    boxes = [[p[0], p[1], p[0], p[1], 1] for p in sorted(points)]
    changed = True
    while changed:
        changed = False
        boxes.sort()
        for i in range(len(boxes) - 1):
            a, b = boxes[i], boxes[i + 1]
            if not (a[2] < b[0] and a[3] < b[1]):
                boxes[i] = [min(a[0], b[0]), min(a[1], b[1]), max(a[2], b[2]), max(a[3], b[3]), a[4] + b[4]]
                del boxes[i + 1]
                changed = True
                break
    out = []
    for x0, y0, x1, y1, n in boxes:
        out.append((x0, y0))
        if n > 1:
            out.append((x1, y1))
    return out


def all_pairs_points(xtext, ytext, pred, x_lo, x_hi, y_lo, y_hi):
    """Every (x, y) token-position pair inside ``(x_lo, x_hi] x (y_lo, y_hi]`` satisfying ``pred``."""
    out = []
    for i, xs in enumerate(xtext.surfaces):
        px = xtext.positions[i]
        if not x_lo < px <= x_hi:
            continue
        for j, ys in enumerate(ytext.surfaces):
            py = ytext.positions[j]
            if y_lo < py <= y_hi and pred(xs, ys):
                out.append((float(px), float(py)))
    return sorted(out)


def ambiguity_bruteforce(points):
    return [sum(q[0] == p[0] for q in points) + sum(q[1] == p[1] for q in points) - 2 for p in points]


def ols(xs, ys):
    x, y = np.asarray(xs, float), np.asarray(ys, float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return slope, intercept, float(np.sqrt(np.mean(resid ** 2) / (1 + slope ** 2)))


def all_segmentations(nx, ny, shapes):
    """Every bead sequence (list of shapes) that exactly covers nx x ny sentences."""
    if nx == 0 and ny == 0:
        return [[]]
    out = []
    for dx, dy in shapes:
        if dx <= nx and dy <= ny:
            out += [[(dx, dy)] + rest for rest in all_segmentations(nx - dx, ny - dy, shapes)]
    return out


def segmentation_costs(x_lens, y_lens, model):
    """Sorted (cost, beads) for every segmentation, scored bead by bead."""
    prior = model.bead_costs()
    scored = []
    for beads in all_segmentations(len(x_lens), len(y_lens), list(prior)):
        cost, i, j = 0.0, 0, 0
        for dx, dy in beads:
            cost += prior[(dx, dy)] + model.match_cost(sum(x_lens[i:i + dx]), sum(y_lens[j:j + dy]))
            i, j = i + dx, j + dy
        scored.append((cost, tuple(beads)))
    return sorted(scored)
