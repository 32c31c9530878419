"""End-to-end mapping of a bitext, plus the dev-set objective used for tuning."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from bimap.evaluation import map_error
from bimap.geometry import BitextMap, BitextSpace, InputError
from bimap.mapbuild import SecondPassReport, build_map, second_pass
from bimap.matching import MatchConfig, PointGenerator, StopList, TokenizedText, TranslationLexicon, tokenize
from bimap.search import SearchStats, SimrParams, is_lost, trace_first_pass


@dataclass
class MapResult:
    map: BitextMap
    first_pass: BitextMap
    chains: list
    xtext: TokenizedText
    ytext: TokenizedText
    stats: SearchStats = field(default_factory=SearchStats)
    second: SecondPassReport = field(default_factory=SecondPassReport)
    first_generated: int = 0   # candidate points generated by the first pass

    @property
    def space(self) -> BitextSpace:
        return self.map.space


def match_config(params: SimrParams, stop_x=None, stop_y=None, lexicon: TranslationLexicon | None = None) -> MatchConfig:
    return MatchConfig(params.lcsr_threshold, lexicon is not None,
                       stop_x if stop_x is not None else StopList(),
                       stop_y if stop_y is not None else StopList(), lexicon)


def map_bitext(x_text: str, y_text: str, params: SimrParams | None = None, stop_x=None, stop_y=None,
               lexicon: TranslationLexicon | None = None, second: bool = True) -> MapResult:
    """Tokenise both texts, trace chains from the origin and build the map.

    Raises ``InputError`` when either text is empty.
    """
    if not x_text or not y_text:
        raise InputError("both texts must be non-empty")
    params = params or SimrParams()
    cfg = match_config(params, stop_x, stop_y, lexicon)
    xt, yt = tokenize(x_text), tokenize(y_text)
    space = BitextSpace(len(x_text), len(y_text))
    gen = PointGenerator(xt, yt, cfg)
    stats = SearchStats()
    chains = trace_first_pass(xt, yt, cfg, params, space, gen, stats)
    first_generated = gen.generated
    first = build_map(chains, space)
    report = SecondPassReport()
    final = second_pass(first, xt, yt, cfg, params, space, gen, report) if second else first
    return MapResult(final, first, chains, xt, yt, stats, report, first_generated)


@dataclass(eq=False)
class DevBitext:
    x_text: str
    y_text: str
    refs: np.ndarray
    stop_x: StopList = field(default_factory=StopList)
    stop_y: StopList = field(default_factory=StopList)

    @classmethod
    def from_synthetic(cls, b) -> "DevBitext":
        return cls(b.x_text, b.y_text, b.tpcs, b.stop_x, b.stop_y)


def dev_objective(dev: list, lexicon: TranslationLexicon | None = None, second: bool = True):
    """Mean perpendicular RMS error over ``dev`` as a function of ``SimrParams``."""
    def objective(params: SimrParams) -> float:
        errs = []
        for d in dev:
            r = map_bitext(d.x_text, d.y_text, params, d.stop_x, d.stop_y, lexicon, second)
            errs.append(map_error(r.map, d.refs, "perpendicular").rms)
        return float(np.mean(errs))
    return objective


def chain_size_report(dev: list, params: SimrParams, sizes=range(5, 11), tolerance: float = 0.10) -> dict:
    """Number of bitexts on which the first-pass trace gets lost, per chain size."""
    out = {}
    for k in sizes:
        p = params.replace(chain_size=k)
        lost = 0
        for d in dev:
            cfg = match_config(p, d.stop_x, d.stop_y)
            xt, yt = tokenize(d.x_text), tokenize(d.y_text)
            space = BitextSpace(len(d.x_text), len(d.y_text))
            lost += is_lost(trace_first_pass(xt, yt, cfg, p, space), space, tolerance)
        out[k] = lost
    return out
