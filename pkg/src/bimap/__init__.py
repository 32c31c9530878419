"""Geometric bitext mapping and geometric sentence alignment.

Coordinates are character offsets (Unicode scalar values) into the two texts.
"""
from bimap.evaluation import ErrorStats, alignment_errors, map_error
from bimap.geometry import BimapError, BitextMap, BitextSpace, CorrespondencePoint, DomainError, InputError
from bimap.gsa import AlignedBlock, Alignment, SentenceGrid, gsa_align
from bimap.kernels import BACKEND
from bimap.mapbuild import build_map, gap_report, second_pass
from bimap.matching import MatchConfig, StopList, TranslationLexicon, lcsr, tokenize
from bimap.pipeline import MapResult, map_bitext
from bimap.search import SimrParams, trace_first_pass
from bimap.synth import SynthSpec, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "AlignedBlock", "Alignment", "BACKEND", "BimapError", "BitextMap", "BitextSpace", "CorrespondencePoint",
    "DomainError", "ErrorStats", "InputError", "MapResult", "MatchConfig", "SentenceGrid", "SimrParams",
    "StopList", "SynthSpec", "TranslationLexicon", "alignment_errors", "build_map", "gap_report",
    "generate_synthetic", "gsa_align", "lcsr", "map_bitext", "map_error", "second_pass", "tokenize",
    "trace_first_pass",
]
