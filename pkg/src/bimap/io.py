"""Plain-text file formats.

All files are UTF-8.  Character offsets count Unicode scalar values (Python
``str`` indices), never bytes, so a boundary or coordinate computed on one
machine means the same thing everywhere.
"""
from __future__ import annotations

import dataclasses
import math
import re
from pathlib import Path

import numpy as np

from bimap.geometry import MER, BitextMap, BitextSpace, InputError
from bimap.gsa import AlignedBlock, Alignment, SentenceGrid
from bimap.search import SimrParams

MAP_HEADER = re.compile(r"#bimap v1 width=(\d+) height=(\d+)\s*$")

# Keys a params file may set besides the mapper thresholds.
ALIGN_KEYS = {"min_confidence": float, "max_overruled": int, "merge_empty": bool}


def read_text(path) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not valid UTF-8 ({exc.reason})") from None


def _fmt(v: float) -> str:
    return repr(float(v)) if not float(v).is_integer() else str(int(v))


def write_map(path, m: BitextMap) -> None:
    lines = [f"#bimap v1 width={m.space.width} height={m.space.height}"]
    for (x, y), flag in zip(m.anchors.tolist(), m.mer_flags.tolist()):
        lines.append(f"{_fmt(x)}\t{_fmt(y)}" + ("\tM" if flag else ""))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_map(path) -> BitextMap:
    lines = read_text(path).splitlines()
    if not lines or not MAP_HEADER.match(lines[0]):
        raise InputError(f"{path}: missing '#bimap v1 width=W height=H' header")
    w, h = map(int, MAP_HEADER.match(lines[0]).groups())
    anchors, flags = [], []
    for n, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] != "M"):
            raise InputError(f"{path}:{n}: expected 'x<TAB>y' with optional '<TAB>M'")
        try:
            anchors.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise InputError(f"{path}:{n}: non-numeric coordinate") from None
        flags.append(len(parts) == 3)
    if sum(flags) % 2:
        raise InputError(f"{path}: MER corners must come in pairs")
    mers, i = [], 0
    while i < len(flags):
        if flags[i]:
            mers.append(MER(anchors[i], anchors[i + 1], ()))
            i += 2
        else:
            i += 1
    return BitextMap(BitextSpace(w, h), np.array(anchors, dtype=float), np.array(flags, dtype=bool), tuple(mers))


def write_points(path, points) -> None:
    Path(path).write_text("".join(f"{_fmt(p[0])}\t{_fmt(p[1])}\n" for p in points), encoding="utf-8")


def read_points(path) -> np.ndarray:
    """``(n, 2)`` array from "x<TAB>y" lines; blank lines and # comments skipped."""
    out = []
    for n, line in enumerate(read_text(path).splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"{path}:{n}: expected 'x<TAB>y'")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            raise InputError(f"{path}:{n}: non-numeric coordinate") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise InputError(f"{path}:{n}: non-finite coordinate")
        out.append((x, y))
    return np.array(out, dtype=float).reshape(-1, 2)


def read_points_or_map(path) -> tuple[np.ndarray, BitextMap | None]:
    """Correspondence points from a point file, or a map file's non-MER interior anchors."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
    if first.startswith("#bimap"):
        m = read_map(path)
        return m.interior_points(), m
    return read_points(path), None


def write_boundaries(path, bounds) -> None:
    Path(path).write_text("".join(f"{int(b)}\n" for b in bounds), encoding="utf-8")


def read_boundaries(path, text_length: int | None = None) -> tuple:
    """Sentence end offsets, strictly increasing; the last must equal ``text_length`` when given."""
    out = []
    for n, line in enumerate(read_text(path).splitlines(), 1):
        if not line.strip():
            continue
        try:
            out.append(int(line.strip()))
        except ValueError:
            raise InputError(f"{path}:{n}: expected an integer offset") from None
    if not out:
        raise InputError(f"{path}: no boundaries")
    if out[0] <= 0 or any(b <= a for a, b in zip(out, out[1:])):
        raise InputError(f"{path}: offsets must be positive and strictly increasing")
    if text_length is not None and out[-1] != text_length:
        raise InputError(f"{path}: last boundary {out[-1]} does not equal the text length {text_length}")
    return tuple(out)


def _range(lo: int, hi: int) -> str:
    return "-" if hi == lo else f"{lo}..{hi - 1}"


def format_alignment(al: Alignment) -> str:
    return "".join(f"{_range(b.x0, b.x1)}\t{_range(b.y0, b.y1)}\n" for b in al)


def write_alignment(path, al: Alignment) -> None:
    Path(path).write_text(format_alignment(al), encoding="utf-8")


def _parse_range(tok: str, cursor: int, where: str) -> tuple[int, int]:
    if tok == "-":
        return cursor, cursor
    m = re.fullmatch(r"(\d+)\.\.(\d+)", tok)
    if not m:
        raise InputError(f"{where}: bad range {tok!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if hi < lo:
        raise InputError(f"{where}: inverted range {tok!r}")
    return lo, hi + 1


def read_alignment(path) -> Alignment:
    blocks, cx, cy = [], 0, 0
    for n, line in enumerate(read_text(path).splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise InputError(f"{path}:{n}: expected 'i..j<TAB>k..l'")
        x0, x1 = _parse_range(parts[0].strip(), cx, f"{path}:{n}")
        y0, y1 = _parse_range(parts[1].strip(), cy, f"{path}:{n}")
        blocks.append(AlignedBlock(x0, x1, y0, y1))
        cx, cy = x1, y1
    return Alignment(blocks)


def write_relation(path, cells) -> None:
    Path(path).write_text("".join(f"{i}\t{j}\n" for i, j in sorted(cells)), encoding="utf-8")


def _parse_value(key: str, raw: str, kind):
    raw = raw.strip()
    if kind is bool:
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise InputError(f"{key}: expected a boolean, got {raw!r}")
    if raw.lower() == "none":
        return None
    try:
        return int(raw) if kind is int else float(raw)
    except ValueError:
        raise InputError(f"{key}: expected a number, got {raw!r}") from None


def _simr_kinds() -> dict:
    return {f.name: (int if f.name in ("max_pal", "chain_size") else float)
            for f in dataclasses.fields(SimrParams)}


def read_params(path) -> tuple[SimrParams, dict]:
    """Mapper parameters and alignment settings from "key = value" lines."""
    kinds = _simr_kinds()
    simr, align = {}, {}
    for n, line in enumerate(read_text(path).splitlines(), 1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        if "=" not in s:
            raise InputError(f"{path}:{n}: expected 'key = value'")
        key, raw = (t.strip() for t in s.split("=", 1))
        if key in kinds:
            simr[key] = _parse_value(key, raw, kinds[key])
        elif key in ALIGN_KEYS:
            align[key] = _parse_value(key, raw, ALIGN_KEYS[key])
        else:
            raise InputError(f"{path}:{n}: unknown parameter {key!r}")
    return SimrParams().replace(**simr), align


def write_params(path, params: SimrParams, align: dict | None = None) -> None:
    lines = [f"{f.name} = {getattr(params, f.name)}" for f in dataclasses.fields(SimrParams)]
    lines += [f"{k} = {v}" for k, v in (align or {}).items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_manifest(path) -> list:
    """Dev-set manifest: "x_text<TAB>y_text<TAB>refs" per line, paths relative to the manifest."""
    base = Path(path).parent
    out = []
    for n, line in enumerate(read_text(path).splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) not in (3, 5):
            raise InputError(f"{path}:{n}: expected x_text, y_text, refs [, stoplist_x, stoplist_y]")
        out.append(tuple(base / p.strip() for p in parts))
    if not out:
        raise InputError(f"{path}: empty manifest")
    return out


def grid_from_files(x_bounds_path, y_bounds_path, width: int | None = None, height: int | None = None) -> SentenceGrid:
    return SentenceGrid(read_boundaries(x_bounds_path, width), read_boundaries(y_bounds_path, height))
