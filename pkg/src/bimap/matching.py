"""Tokenisation, LCSR cognate matching and point generation inside a search rectangle."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from bimap import kernels
from bimap.geometry import CorrespondencePoint, DomainError, InputError, SearchRectangle, Token

_WORD = re.compile(r"[^\W\d_]+(?:['’\-][^\W\d_]+)*")
_WORD_DIGITS = re.compile(r"[^\W_]+(?:['’\-][^\W_]+)*")


def fold(s: str) -> str:
    return s.lower()


@dataclass(frozen=True, eq=False)
class TokenizedText:
    """Tokens of one axis, with parallel arrays for fast range lookup.

    ``surfaces`` are case-folded; ``starts`` index the original text in
    characters (Unicode scalar values, not bytes).
    """
    surfaces: tuple
    starts: np.ndarray
    lengths: np.ndarray
    length: int
    positions: np.ndarray = field(init=False, repr=False)
    form_ids: np.ndarray = field(init=False, repr=False)
    forms: tuple = field(init=False, repr=False)

    def __post_init__(self):
        starts = np.asarray(self.starts, dtype=np.int64)
        lengths = np.asarray(self.lengths, dtype=np.int64)
        object.__setattr__(self, "starts", starts)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "positions", starts + (lengths - 1) / 2.0)
        index = {}
        ids = np.fromiter((index.setdefault(s, len(index)) for s in self.surfaces),
                          dtype=np.int64, count=len(self.surfaces))
        object.__setattr__(self, "form_ids", ids)
        object.__setattr__(self, "forms", tuple(index))

    @classmethod
    def from_tokens(cls, tokens, length: int) -> "TokenizedText":
        tokens = list(tokens)
        return cls(tuple(fold(t.surface) for t in tokens),
                   [t.start for t in tokens], [t.length for t in tokens], length)

    def __len__(self):
        return len(self.surfaces)

    def __getitem__(self, i) -> Token:
        return Token(self.surfaces[i], int(self.starts[i]), int(self.lengths[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def index_range(self, lo: float, hi: float) -> tuple[int, int]:
        """Token indices whose mean position lies in ``(lo, hi]``."""
        return (int(np.searchsorted(self.positions, lo, side="right")),
                int(np.searchsorted(self.positions, hi, side="right")))

    @property
    def mean_token_length(self) -> float:
        return float(self.lengths.mean()) if len(self.lengths) else 0.0


def tokenize(text: str, digits: bool = False) -> TokenizedText:
    """Split ``text`` into maximal alphabetic runs (word-internal ' and - kept)."""
    pattern = _WORD_DIGITS if digits else _WORD
    surfaces, starts, lengths = [], [], []
    for m in pattern.finditer(text):
        surfaces.append(fold(m.group()))
        starts.append(m.start())
        lengths.append(m.end() - m.start())
    return TokenizedText(tuple(surfaces), starts, lengths, len(text))


def lcs_length(a: str, b: str) -> int:
    return kernels.lcs_length(a, b)


def lcsr(a: str, b: str) -> float:
    """Longest-common-subsequence length over the longer string's length."""
    longest = max(len(a), len(b))
    if longest == 0:
        raise DomainError("LCSR undefined for two empty strings")
    return kernels.lcs_length(a, b) / longest


def _read_lines(path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield line


class StopList(frozenset):
    """Closed-class word forms of one language; membership is case-folded."""

    def __new__(cls, words=()):
        return super().__new__(cls, (fold(w.strip()) for w in words if w.strip()))

    def __contains__(self, word):
        return super().__contains__(fold(word))

    @classmethod
    def load(cls, path) -> "StopList":
        return cls(_read_lines(path))


class TranslationLexicon:
    """Set of (x-language form, y-language form) pairs, case-folded."""

    def __init__(self, pairs=()):
        self.pairs = frozenset((fold(a), fold(b)) for a, b in pairs)
        self._by_x = {}
        for a, b in self.pairs:
            self._by_x.setdefault(a, set()).add(b)

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, pair):
        return (fold(pair[0]), fold(pair[1])) in self.pairs

    def targets(self, form: str) -> frozenset:
        return frozenset(self._by_x.get(fold(form), ()))

    @classmethod
    def load(cls, path) -> "TranslationLexicon":
        pairs = []
        for n, line in enumerate(_read_lines(path), 1):
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise InputError(f"{path}:{n}: expected 'source<TAB>target'")
            pairs.append((parts[0].strip(), parts[1].strip()))
        return cls(pairs)


@dataclass(frozen=True)
class MatchConfig:
    lcsr_threshold: float = 0.7
    use_lexicon: bool = False
    stop_x: StopList = field(default_factory=StopList)
    stop_y: StopList = field(default_factory=StopList)
    lexicon: TranslationLexicon | None = None

    def __post_init__(self):
        if not 0.0 < self.lcsr_threshold <= 1.0:
            raise InputError(f"lcsr_threshold must lie in (0, 1], got {self.lcsr_threshold}")
        if self.use_lexicon and self.lexicon is None:
            raise InputError("use_lexicon requires a lexicon")

    def with_threshold(self, threshold: float) -> "MatchConfig":
        return MatchConfig(threshold, self.use_lexicon, self.stop_x, self.stop_y, self.lexicon)


@lru_cache(maxsize=1 << 16)
def _cognate(a: str, b: str, threshold: float) -> bool:
    return kernels.lcsr_exceeds(a, b, threshold)


def matches(e, f, cfg: MatchConfig) -> bool:
    """Matching predicate for an x-axis token ``e`` and a y-axis token ``f``.

    A lexicon entry wins over the stop-lists; cognate matching skips
    stop-listed words.
    """
    a = fold(e.surface if isinstance(e, Token) else e)
    b = fold(f.surface if isinstance(f, Token) else f)
    if cfg.use_lexicon and (a, b) in cfg.lexicon:
        return True
    if a in cfg.stop_x or b in cfg.stop_y:
        return False
    return _cognate(a, b, cfg.lcsr_threshold)


class PointGenerator:
    """Generates matching token pairs over token-index ranges of two texts."""

    def __init__(self, xtext: TokenizedText, ytext: TokenizedText, cfg: MatchConfig):
        self.xtext, self.ytext, self.cfg = xtext, ytext, cfg
        self.x_stop = np.array([f in cfg.stop_x for f in xtext.forms], dtype=bool)
        self.y_stop = np.array([f in cfg.stop_y for f in ytext.forms], dtype=bool)
        self.lex_targets = {}
        if cfg.use_lexicon:
            y_index = {f: i for i, f in enumerate(ytext.forms)}
            for i, f in enumerate(xtext.forms):
                ids = [y_index[t] for t in cfg.lexicon.targets(f) if t in y_index]
                if ids:
                    self.lex_targets[i] = frozenset(ids)
        self.generated = 0

    def pairs(self, xi0: int, xi1: int, yj0: int, yj1: int) -> list:
        """All matching (x token, y token) pairs with indices in the half-open ranges."""
        if xi1 <= xi0 or yj1 <= yj0:
            return []
        xf = self.xtext.form_ids[xi0:xi1]
        yf = self.ytext.form_ids[yj0:yj1]
        ux = np.unique(xf)
        uy = np.unique(yf)
        form_pairs = set()

        cx = ux[~self.x_stop[ux]]
        cy = uy[~self.y_stop[uy]]
        if len(cx) and len(cy):
            xforms, yforms = self.xtext.forms, self.ytext.forms
            mat = kernels.cognate_matrix([xforms[i] for i in cx], [yforms[j] for j in cy],
                                         self.cfg.lcsr_threshold)
            hit = np.frombuffer(bytes(mat), dtype=np.uint8).reshape(len(cx), len(cy)).nonzero()
            form_pairs.update(zip(cx[hit[0]].tolist(), cy[hit[1]].tolist()))
        if self.lex_targets:
            present = set(uy.tolist())
            for a in ux.tolist():
                for b in self.lex_targets.get(a, ()):
                    if b in present:
                        form_pairs.add((a, b))
        if not form_pairs:
            return []

        want_x = {a for a, _ in form_pairs}
        want_y = {b for _, b in form_pairs}
        x_by_form, y_by_form = {}, {}
        for off, f in enumerate(xf.tolist()):
            if f in want_x:
                x_by_form.setdefault(f, []).append(xi0 + off)
        for off, f in enumerate(yf.tolist()):
            if f in want_y:
                y_by_form.setdefault(f, []).append(yj0 + off)
        xpos, ypos = self.xtext.positions, self.ytext.positions
        out = []
        for a, b in form_pairs:
            for i in x_by_form[a]:
                for j in y_by_form[b]:
                    out.append(CorrespondencePoint(float(xpos[i]), float(ypos[j]), i, j))
        out.sort()
        self.generated += len(out)
        return out

    def in_rectangle(self, rect: SearchRectangle) -> list:
        xi0, xi1 = self.xtext.index_range(rect.anchor_x, rect.x_max)
        yj0, yj1 = self.ytext.index_range(rect.anchor_y, rect.y_max)
        return self.pairs(xi0, xi1, yj0, yj1)


def generate_points(rect: SearchRectangle, xtext: TokenizedText, ytext: TokenizedText,
                    cfg: MatchConfig) -> list:
    """Every matching pair whose two positions fall inside ``rect``."""
    return PointGenerator(xtext, ytext, cfg).in_rectangle(rect)
