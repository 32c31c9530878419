"""Seeded synthetic bitexts with a known true map and alignment.

Both "languages" are pseudo-word streams.  Content words come in three
kinds: cognates (the y form is a one-edit variant of the x form), frequent
cognates (a handful of types repeated often, producing the row and column
noise of frequent words), and non-cognates spelled from disjoint consonant
sets so that they never pass an LCSR test against each other.  Closed-class
words are sprinkled in independently on each side and returned as stop lists.
Stray cognate pairs planted far from the diagonal are the only other source
of false matches.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from bimap.geometry import BitextSpace, InputError
from bimap.gsa import AlignedBlock, Alignment, SentenceGrid
from bimap.matching import StopList

X_CONS = "bcdfghjklm"
X_VOW = "aei"
Y_CONS = "npqrstvwxz"
Y_VOW = "ouy"
ALL = "abcdefghijklmnopqrstuvwxyz"

STOP_X = ("a", "an", "on", "of", "in", "to", "the", "and", "is", "it")
STOP_Y = ("a", "un", "on", "par", "de", "la", "le", "et", "en", "il")

BEADS = {(1, 1): 0.89, (1, 0): 0.01, (0, 1): 0.01, (2, 1): 0.04, (1, 2): 0.04, (2, 2): 0.01}


@dataclass(frozen=True)
class SynthSpec:
    """What to plant.

    ``omissions`` holds ``(missing_from, n_chars, where)`` triples: text of
    about ``n_chars`` characters present only on the other axis, starting at
    fraction ``where`` of the bitext.  ``missing_from="x"`` leaves a vertical
    gap in the map.  ``switches`` plants that many pairs of adjacent
    ``switch_beads``-sentence segments whose order is exchanged on the y side.
    """
    n_chars: int = 50_000
    cognate_density: float = 0.25
    noise_rate: float = 0.10
    frequent_rate: float = 0.0
    frequent_types: int = 2
    stop_rate: float = 0.12
    swap_rate: float = 0.05
    omissions: tuple = ()
    switches: int = 0
    switch_beads: int = 3
    bead_probs: tuple = tuple(sorted(BEADS.items()))
    sentence_concepts: tuple = (6, 18)
    length_ratio: float = 1.1
    seed: int = 0

    def __post_init__(self):
        for name in ("cognate_density", "noise_rate", "frequent_rate", "stop_rate", "swap_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InputError(f"{name} must lie in [0, 1], got {v}")
        if self.cognate_density + self.frequent_rate > 1.0:
            raise InputError("cognate_density + frequent_rate exceeds 1")
        if self.n_chars < 200:
            raise InputError("n_chars too small")
        spans = []
        for om in self.omissions:
            axis, n, where = om
            if axis not in ("x", "y") or n <= 0 or not 0.0 < where < 1.0:
                raise InputError(f"bad omission {om}")
            spans.append((where, where + n / self.n_chars))
        spans.sort()
        for (a0, a1), (b0, b1) in zip(spans, spans[1:]):
            if b0 < a1:
                raise InputError("omission spans overlap")
        if spans and spans[-1][1] >= 1.0:
            raise InputError("omission runs past the end of the text")


@dataclass(eq=False)
class SyntheticBitext:
    x_text: str
    y_text: str
    tpcs: np.ndarray               # every planted true correspondence (x, y)
    cognate_tpcs: np.ndarray       # the planted correspondences a cognate matcher can see
    stray_points: np.ndarray       # planted false matches
    alignment: Alignment
    grid: SentenceGrid
    stop_x: StopList
    stop_y: StopList
    gaps: list = field(default_factory=list)       # (axis of the jump, start, end) per omission
    switched: list = field(default_factory=list)   # (x0, x1, y0, y1) char box per switched pair
    spec: SynthSpec | None = None

    @property
    def space(self) -> BitextSpace:
        return BitextSpace(len(self.x_text), len(self.y_text))


class _Vocab:
    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.used_x: set = set(STOP_X)
        self.used_y: set = set(STOP_Y)

    def _word(self, cons: str, vows: str, n: int) -> str:
        rng = self.rng
        start = rng.integers(2)
        return "".join((cons if (k + start) % 2 == 0 else vows)[rng.integers(len(cons if (k + start) % 2 == 0 else vows))]
                       for k in range(n))

    def non_cognate(self, ratio: float) -> tuple[str, str]:
        rng = self.rng
        while True:
            n = int(rng.choice([2, 3, 4, 5, 6, 7, 8, 9, 10], p=[.08, .14, .17, .17, .15, .12, .09, .05, .03]))
            m = max(2, int(round(n * ratio + rng.normal(0, 0.8))))
            a = self._word(X_CONS, X_VOW, n)
            b = self._word(Y_CONS, Y_VOW, m)
            if a not in self.used_x and b not in self.used_y:
                self.used_x.add(a)
                self.used_y.add(b)
                return a, b

    def cognate(self) -> tuple[str, str]:
        rng = self.rng
        while True:
            n = int(rng.integers(5, 12))
            root = "".join(ALL[i] for i in rng.integers(0, 26, size=n))
            op = rng.integers(3)
            if op == 0:
                k = int(rng.integers(1, n))
                other = root[:k] + ALL[int(rng.integers(26))] + root[k + 1:]
            elif op == 1:
                other = root + "e"
            else:
                other = root
            if root not in self.used_x and other not in self.used_y:
                self.used_x.add(root)
                self.used_y.add(other)
                return root, other


@dataclass
class _Sentence:
    words: list   # (form, concept id or -1)


def _split(concepts: list, n: int, frac: float) -> list:
    if n == 1:
        return [concepts]
    k = min(max(1, int(round(len(concepts) * frac))), len(concepts) - 1)
    return [concepts[:k], concepts[k:]]


def generate_synthetic(spec: SynthSpec) -> SyntheticBitext:
    """Render a bitext from ``spec`` and record everything that was planted."""
    rng = np.random.default_rng(spec.seed)
    vocab = _Vocab(rng)
    n_concepts = 0
    concept_kind: list = []   # "cog", "freq", "non"
    concept_forms: list = []
    frequent = [vocab.cognate() for _ in range(max(spec.frequent_types, 0))]
    cognate_pool = [vocab.cognate() for _ in range(4000)]
    # Skewed reuse of cognate types; rare types dominate.
    cog_weights = 1.0 / np.arange(1, len(cognate_pool) + 1) ** 0.6
    cog_weights /= cog_weights.sum()
    noncog_pool = [vocab.non_cognate(spec.length_ratio) for _ in range(4000)]
    non_weights = 1.0 / np.arange(1, len(noncog_pool) + 1) ** 0.8
    non_weights /= non_weights.sum()

    p_cog = spec.cognate_density / max(1e-9, 1.0 - spec.stop_rate)
    p_freq = spec.frequent_rate / max(1e-9, 1.0 - spec.stop_rate)
    p_cog, p_freq = min(p_cog, 1.0), min(p_freq, max(0.0, 1.0 - min(p_cog, 1.0)))

    def new_concepts(n):
        nonlocal n_concepts
        ids = []
        for _ in range(n):
            u = rng.random()
            if u < p_freq:
                kind, forms = "freq", frequent[int(rng.integers(len(frequent)))]
            elif u < p_freq + p_cog:
                kind, forms = "cog", cognate_pool[int(rng.choice(len(cognate_pool), p=cog_weights))]
            else:
                kind, forms = "non", noncog_pool[int(rng.choice(len(noncog_pool), p=non_weights))]
            concept_kind.append(kind)
            concept_forms.append(forms)
            ids.append(n_concepts)
            n_concepts += 1
        return ids

    def render(ids, side):
        words = []
        stops = STOP_X if side == 0 else STOP_Y
        for c in ids:
            if rng.random() < spec.stop_rate:
                words.append((stops[int(rng.integers(len(stops)))], -1))
            words.append((concept_forms[c][side], c))
        if side == 1:
            for k in range(len(words) - 1):
                if words[k][1] >= 0 and words[k + 1][1] >= 0 and rng.random() < spec.swap_rate:
                    words[k], words[k + 1] = words[k + 1], words[k]
        return _Sentence(words)

    lo, hi = spec.sentence_concepts
    shapes, probs = zip(*spec.bead_probs)
    probs = np.array(probs, dtype=float) / sum(probs)
    mean_chars = 6.0 * (lo + hi) / 2

    # Plan beads: list of (x sentences, y sentences, tag)
    beads: list = []
    omissions = sorted(spec.omissions, key=lambda o: o[2])
    switches_left = spec.switches
    switch_at = sorted(rng.uniform(0.15, 0.85, size=spec.switches).tolist())
    chars = 0.0
    last_shape = (1, 1)
    while chars < spec.n_chars:
        frac = chars / spec.n_chars
        if omissions and frac >= omissions[0][2]:
            axis, n, _ = omissions.pop(0)
            got = 0
            while got < n:
                ids = new_concepts(int(rng.integers(lo, hi + 1)))
                s = render(ids, 1 if axis == "x" else 0)
                got += sum(len(w) + 1 for w, _ in s.words)
                beads.append(([], [s], "omit") if axis == "x" else ([s], [], "omit"))
            continue
        if switches_left and frac >= switch_at[spec.switches - switches_left]:
            switches_left -= 1
            groups = []
            for _ in range(2):
                g = []
                for _ in range(spec.switch_beads):
                    ids = new_concepts(int(rng.integers(lo, hi + 1)))
                    g.append((render(ids, 0), render(ids, 1)))
                groups.append(g)
            xs = [p[0] for p in groups[0] + groups[1]]
            ys = [p[1] for p in groups[1] + groups[0]]
            beads.append((xs, ys, "switch"))
            chars += sum(len(w) + 1 for s in xs for w, _ in s.words)
            last_shape = (1, 1)
            continue
        shape = shapes[int(rng.choice(len(shapes), p=probs))]
        # Adjacent 1-0 / 0-1 beads are indistinguishable from a 1-1 bead.
        if shape in ((1, 0), (0, 1)) and last_shape in ((1, 0), (0, 1)) and shape != last_shape:
            shape = (1, 1)
        nx, ny = shape
        ids = new_concepts(int(rng.integers(lo, hi + 1)) * max(nx, ny))
        if (nx, ny) == (2, 2):
            fx = rng.uniform(0.62, 0.75)
            fy = rng.uniform(0.25, 0.38)
            if rng.random() < 0.5:
                fx, fy = fy, fx
        else:
            fx = fy = rng.uniform(0.3, 0.7)
        xs = [render(part, 0) for part in _split(ids, nx, fx)] if nx else []
        ys = [render(part, 1) for part in _split(ids, ny, fy)] if ny else []
        beads.append((xs, ys, "bead"))
        chars += sum(len(w) + 1 for s in xs for w, _ in s.words) if xs else mean_chars * 0.2
        last_shape = shape

    # Stray pairs: unique cognate forms dropped into far-apart sentences.
    x_sents = [s for b in beads for s in b[0]]
    y_sents = [s for b in beads for s in b[1]]
    n_cog = sum(1 for s in x_sents for _, c in s.words if c >= 0 and concept_kind[c] != "non")
    n_stray = int(round(spec.noise_rate * n_cog))
    stray_ids = []
    if x_sents and y_sents:
        for _ in range(n_stray):
            while True:
                u, v = rng.random(2)
                if abs(u - v) > 0.02:
                    break
            sx = min(int(u * len(x_sents)), len(x_sents) - 1)
            sy = min(int(v * len(y_sents)), len(y_sents) - 1)
            a, b = vocab.cognate()
            sid = -2 - len(stray_ids)
            stray_ids.append(sid)
            for sent, form in ((x_sents[sx], a), (y_sents[sy], b)):
                k = int(rng.integers(len(sent.words) + 1))
                sent.words.insert(k, (form, sid))

    def layout(sentences):
        parts, pos, bounds = [], 0, []
        where: dict = {}
        for si, s in enumerate(sentences):
            for wi, (form, c) in enumerate(s.words):
                if parts:
                    parts.append(" ")
                    pos += 1
                where.setdefault(c, []).append(pos + (len(form) - 1) / 2.0)
                parts.append(form)
                pos += len(form)
                if wi == len(s.words) - 1:
                    parts.append(".")
                    pos += 1
            bounds.append(pos)
        return "".join(parts), bounds, where

    x_text, x_bounds, x_where = layout(x_sents)
    y_text, y_bounds, y_where = layout(y_sents)

    tpcs, cogs, strays = [], [], []
    for c in range(n_concepts):
        if c in x_where and c in y_where:
            pt = (x_where[c][0], y_where[c][0])
            tpcs.append(pt)
            if concept_kind[c] != "non":
                cogs.append(pt)
    for sid in stray_ids:
        strays.append((x_where[sid][0], y_where[sid][0]))
    tpcs.sort()
    cogs.sort()
    strays.sort()

    blocks, cx, cy = [], 0, 0
    gaps, switched = [], []
    for xs, ys, tag in beads:
        blocks.append(AlignedBlock(cx, cx + len(xs), cy, cy + len(ys)))
        if tag == "switch":
            switched.append((x_bounds[cx - 1] if cx else 0, x_bounds[cx + len(xs) - 1],
                             y_bounds[cy - 1] if cy else 0, y_bounds[cy + len(ys) - 1]))
        cx, cy = cx + len(xs), cy + len(ys)
    blocks = _coalesce_omissions(blocks, beads)
    for b, tag in blocks[1]:
        if tag == "omit":
            if b.nx == 0:
                gaps.append(("y", y_bounds[b.y0 - 1] if b.y0 else 0, y_bounds[b.y1 - 1]))
            else:
                gaps.append(("x", x_bounds[b.x0 - 1] if b.x0 else 0, x_bounds[b.x1 - 1]))
    alignment = Alignment(blocks[0], len(x_sents), len(y_sents))
    return SyntheticBitext(
        x_text, y_text,
        np.array(tpcs, dtype=float).reshape(-1, 2),
        np.array(cogs, dtype=float).reshape(-1, 2),
        np.array(strays, dtype=float).reshape(-1, 2),
        alignment, SentenceGrid(tuple(x_bounds), tuple(y_bounds)),
        StopList(STOP_X), StopList(STOP_Y), gaps, switched, spec,
    )


def _coalesce_omissions(blocks, beads):
    """Split each omission run into its 1-0/0-1 beads; report one span per run."""
    out, runs = [], []
    current = None
    for b, (_, _, tag) in zip(blocks, beads):
        if tag == "omit":
            for k in range(b.nx):
                out.append(AlignedBlock(b.x0 + k, b.x0 + k + 1, b.y0, b.y0))
            for k in range(b.ny):
                out.append(AlignedBlock(b.x0, b.x0, b.y0 + k, b.y0 + k + 1))
            current = b if current is None else current.union(b)
        else:
            if current is not None:
                runs.append((current, "omit"))
                current = None
            out.append(b)
    if current is not None:
        runs.append((current, "omit"))
    return out, runs


@dataclass(eq=False)
class PlantedAlignment:
    grid: SentenceGrid
    alignment: Alignment
    points: np.ndarray   # correspondence points, true and stray
    n_stray: int


def planted_alignment(n_beads: int, seed: int = 0, completeness: float = 0.72, points_per_char: float = 1 / 25,
                      stray_rate: float = 0.01, stray_reach: int = 3, bead_probs=tuple(sorted(BEADS.items())),
                      mean_length: float = 100.0, ratio: float = 1.1) -> PlantedAlignment:
    """A sentence grid with a planted alignment and SIMR-like points, without text.

    Each bead's y length follows its x length times ``ratio`` with Gaussian
    jitter.  True points lie on the bead's diagonal, one per
    ``1 / points_per_char`` characters, each kept with probability
    ``completeness``.  Stray points land in a random cell up to ``stray_reach``
    sentences off the true one.
    """
    if n_beads < 1:
        raise InputError("n_beads must be positive")
    rng = np.random.default_rng(seed)
    shapes, probs = zip(*bead_probs)
    probs = np.array(probs, dtype=float) / sum(probs)
    picks = rng.choice(len(shapes), size=n_beads, p=probs)
    x_lens, y_lens, blocks = [], [], []
    pts = []
    cx = cy = 0
    x_off = y_off = 0.0
    corners = [(0.0, 0.0)]
    last = (1, 1)
    for n, k in enumerate(picks):
        nx, ny = shapes[k]
        if (nx, ny) in ((1, 0), (0, 1)) and last in ((1, 0), (0, 1)) and (nx, ny) != last:
            nx, ny = 1, 1
        if n == n_beads - 1 and (cx + nx == 0 or cy + ny == 0):
            nx, ny = max(nx, 1), max(ny, 1)   # both texts need at least one sentence
        last = (nx, ny)
        total = max(20.0, rng.gamma(4.0, mean_length / 4.0) * max(nx, ny))
        xs = _cuts(rng, total, nx) if nx else []
        ys = _cuts(rng, max(10.0, total * ratio * rng.normal(1.0, 0.05)), ny) if ny else []
        xs = [max(1, int(round(v))) for v in xs]
        ys = [max(1, int(round(v))) for v in ys]
        blocks.append(AlignedBlock(cx, cx + nx, cy, cy + ny))
        if nx and ny:
            wx, wy = sum(xs), sum(ys)
            n_true = max(1, int(wx * points_per_char))
            keep = rng.random(n_true) < completeness
            t = (np.arange(n_true) + 0.5) / n_true
            for ti in t[keep]:
                pts.append((x_off + ti * wx, y_off + ti * wy))
        x_lens += xs
        y_lens += ys
        cx, cy = cx + nx, cy + ny
        x_off += sum(xs)
        y_off += sum(ys)
        corners.append((x_off, y_off))
    xb = np.cumsum(x_lens).tolist()
    yb = np.cumsum(y_lens).tolist()
    grid = SentenceGrid(tuple(int(v) for v in xb), tuple(int(v) for v in yb))
    n_stray = int(round(stray_rate * len(pts)))
    xstarts = np.concatenate([[0], xb[:-1]])
    ystarts = np.concatenate([[0], yb[:-1]])
    cxs, cys = np.array(corners).T
    for _ in range(n_stray):
        i = int(rng.integers(grid.n_x))
        # the y sentence facing sentence i on the planted map, then a few sentences off
        j_true = min(grid.n_y - 1, int(np.searchsorted(yb, np.interp(xstarts[i], cxs, cys), side="right")))
        j = int(np.clip(j_true + rng.integers(-stray_reach, stray_reach + 1), 0, grid.n_y - 1))
        pts.append((xstarts[i] + rng.random() * x_lens[i], ystarts[j] + rng.random() * y_lens[j]))
    arr = np.array(pts, dtype=float).reshape(-1, 2)
    return PlantedAlignment(grid, Alignment(blocks, grid.n_x, grid.n_y), arr[np.argsort(arr[:, 0], kind="stable")],
                            n_stray)


def _cuts(rng, total: float, n: int) -> list:
    if n == 1:
        return [total]
    f = rng.uniform(0.3, 0.7)
    return [total * f, total * (1 - f)]
