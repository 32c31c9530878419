"""``bimap`` command line: map, align, eval, optimize, synth, plot."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from bimap import io
from bimap.anneal import SIMR_SPACE, Schedule, anneal
from bimap.evaluation import METRICS, alignment_errors, map_error
from bimap.geometry import BimapError, BitextSpace
from bimap.gsa import GsaReport, SentenceGrid, gsa_align
from bimap.mapbuild import gap_report
from bimap.matching import StopList, TranslationLexicon
from bimap.pipeline import DevBitext, chain_size_report, dev_objective, map_bitext
from bimap.plot import render_svg
from bimap.search import SimrParams
from bimap.synth import SynthSpec, generate_synthetic

log = logging.getLogger("bimap")


def _global_flags() -> argparse.ArgumentParser:
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--params", metavar="FILE", help="'key = value' parameter file")
    g.add_argument("--seed", type=int, default=0, metavar="N")
    g.add_argument("--lexicon", metavar="FILE", help="translation lexicon, 'x<TAB>y' per line")
    g.add_argument("--stoplist-x", metavar="FILE")
    g.add_argument("--stoplist-y", metavar="FILE")
    g.add_argument("--no-second-pass", action="store_true", help="skip the gap and sandwich re-search")
    g.add_argument("--relation", action="store_true", help="align: also write the sentence relation to OUT.rel")
    g.add_argument("-v", "--verbose", action="store_true")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    p = argparse.ArgumentParser(prog="bimap", description="Geometric bitext mapping and sentence alignment. "
                                "All offsets count Unicode characters, not bytes.")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("map", parents=[common], help="map a bitext")
    m.add_argument("x_text")
    m.add_argument("y_text")
    m.add_argument("-o", "--output", required=True, help="map file to write")
    m.add_argument("--points", metavar="FILE", help="also write every correspondence point")
    m.add_argument("--gap-threshold", type=float, default=1000.0, metavar="CHARS")

    a = sub.add_parser("align", parents=[common], help="sentence-align from a map or point file")
    a.add_argument("points", help="map file or 'x<TAB>y' point file")
    a.add_argument("x_bounds")
    a.add_argument("y_bounds")
    a.add_argument("-o", "--output", required=True)
    a.add_argument("--x-text", help="check boundaries against this text's length")
    a.add_argument("--y-text")

    e = sub.add_parser("eval", parents=[common], help="score a map and/or an alignment")
    e.add_argument("--map", dest="map_file")
    e.add_argument("--refs", help="reference points, 'x<TAB>y' per line")
    e.add_argument("--alignment")
    e.add_argument("--reference")

    o = sub.add_parser("optimize", parents=[common], help="anneal mapper parameters on a dev set")
    src = o.add_mutually_exclusive_group(required=True)
    src.add_argument("--manifest", help="lines of x_text<TAB>y_text<TAB>refs")
    src.add_argument("--synthetic", type=int, metavar="N", help="use N seeded synthetic bitexts")
    o.add_argument("--synthetic-chars", type=int, default=20000)
    o.add_argument("--iterations", type=int, default=200)
    o.add_argument("--steps-per-temp", type=int, default=20)
    o.add_argument("--chain-report", action="store_true", help="report lost traces per chain size 5..10")
    o.add_argument("-o", "--output", required=True)

    s = sub.add_parser("synth", parents=[common], help="write a synthetic bitext with its planted truth")
    s.add_argument("outdir")
    s.add_argument("--chars", type=int, default=50000)
    s.add_argument("--cognate-density", type=float, default=0.25)
    s.add_argument("--noise", type=float, default=0.10)
    s.add_argument("--frequent-rate", type=float, default=0.0)
    s.add_argument("--omission", action="append", default=[], metavar="AXIS:CHARS:WHERE",
                   help="text missing from AXIS (x or y), e.g. x:2000:0.4")
    s.add_argument("--switches", type=int, default=0)

    pl = sub.add_parser("plot", parents=[common], help="render an SVG scatterplot")
    pl.add_argument("-o", "--output", required=True)
    pl.add_argument("--points", help="candidate points file")
    pl.add_argument("--chains", help="accepted chain points file")
    pl.add_argument("--map", dest="map_file")
    pl.add_argument("--width", type=int)
    pl.add_argument("--height", type=int)
    return p


def _settings(args) -> tuple[SimrParams, dict]:
    if args.params:
        return io.read_params(args.params)
    return SimrParams(), {}


def _stoplists(args):
    sx = StopList.load(args.stoplist_x) if args.stoplist_x else StopList()
    sy = StopList.load(args.stoplist_y) if args.stoplist_y else StopList()
    return sx, sy


def cmd_map(args) -> int:
    params, _ = _settings(args)
    sx, sy = _stoplists(args)
    lex = TranslationLexicon.load(args.lexicon) if args.lexicon else None
    xt, yt = io.read_text(args.x_text), io.read_text(args.y_text)
    r = map_bitext(xt, yt, params, sx, sy, lex, second=not args.no_second_pass)
    io.write_map(args.output, r.map)
    if args.points:
        io.write_points(args.points, r.map.points)
    for axis, lo, hi in gap_report(r.map, args.gap_threshold):
        print(f"gap\t{axis}\t{lo:g}\t{hi:g}")
    if not r.chains:
        print("no chains found; wrote the main diagonal", file=sys.stderr)
        return 2
    log.info("%d chains, %d anchors", len(r.chains), len(r.map))
    return 0


def cmd_align(args) -> int:
    _, align_opts = _settings(args)
    pts, m = io.read_points_or_map(args.points)
    width = len(io.read_text(args.x_text)) if args.x_text else (m.space.width if m else None)
    height = len(io.read_text(args.y_text)) if args.y_text else (m.space.height if m else None)
    grid = SentenceGrid(io.read_boundaries(args.x_bounds, width), io.read_boundaries(args.y_bounds, height))
    pts = pts[(pts[:, 0] < grid.width) & (pts[:, 1] < grid.height)] if len(pts) else pts
    report = GsaReport()
    al = gsa_align(pts, grid, report=report, **align_opts)
    io.write_alignment(args.output, al)
    if args.relation:
        io.write_relation(str(args.output) + ".rel", report.relation)
    return 0


def cmd_eval(args) -> int:
    did = False
    if args.map_file or args.refs:
        if not (args.map_file and args.refs):
            raise BimapError("--map and --refs go together")
        m = io.read_map(args.map_file)
        refs = io.read_points(args.refs)
        print(f"{'metric':<14}{'rms':>12}{'median':>12}{'p99':>12}")
        for metric in METRICS:
            st = map_error(m, refs, metric)
            print(f"{metric:<14}{st.rms:>12.3f}{st.median_abs:>12.3f}{st.p99:>12.3f}")
        did = True
    if args.alignment or args.reference:
        if not (args.alignment and args.reference):
            raise BimapError("--alignment and --reference go together")
        ref = io.read_alignment(args.reference)
        n = alignment_errors(io.read_alignment(args.alignment), ref)
        print(f"alignment errors\t{n}\tof {len(ref)} reference blocks")
        did = True
    if not did:
        raise BimapError("nothing to evaluate: give --map/--refs and/or --alignment/--reference")
    return 0


def cmd_optimize(args) -> int:
    params, align_opts = _settings(args)
    lex = TranslationLexicon.load(args.lexicon) if args.lexicon else None
    if args.manifest:
        dev = []
        for entry in io.read_manifest(args.manifest):
            sx = StopList.load(entry[3]) if len(entry) > 3 else StopList()
            sy = StopList.load(entry[4]) if len(entry) > 3 else StopList()
            dev.append(DevBitext(io.read_text(entry[0]), io.read_text(entry[1]), io.read_points(entry[2]), sx, sy))
    else:
        dev = [DevBitext.from_synthetic(generate_synthetic(SynthSpec(n_chars=args.synthetic_chars, seed=args.seed + i)))
               for i in range(args.synthetic)]
    objective = dev_objective(dev, lex, second=not args.no_second_pass)
    if not args.verbose:
        # every trial rebuilds maps; per-trial duplicate-point warnings are noise here
        logging.getLogger("bimap.mapbuild").setLevel(logging.ERROR)
    sched = Schedule(max_iterations=args.iterations, steps_per_temp=args.steps_per_temp)
    res = anneal(objective, params, SIMR_SPACE, sched, seed=args.seed)
    io.write_params(args.output, res.best, align_opts)
    print(f"objective\t{res.initial_value:.3f} -> {res.best_value:.3f}\t({res.evaluations} evaluations)")
    if args.chain_report:
        for k, lost in chain_size_report(dev, res.best).items():
            print(f"chain_size {k}\tlost {lost} of {len(dev)}")
    return 0


def _omission(spec: str):
    try:
        axis, n, where = spec.split(":")
        return (axis, int(n), float(where))
    except ValueError:
        raise BimapError(f"bad --omission {spec!r}; expected AXIS:CHARS:WHERE") from None


def cmd_synth(args) -> int:
    spec = SynthSpec(n_chars=args.chars, cognate_density=args.cognate_density, noise_rate=args.noise,
                     frequent_rate=args.frequent_rate, omissions=tuple(_omission(o) for o in args.omission),
                     switches=args.switches, seed=args.seed)
    b = generate_synthetic(spec)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "x.txt").write_text(b.x_text, encoding="utf-8")
    (out / "y.txt").write_text(b.y_text, encoding="utf-8")
    io.write_boundaries(out / "x.bounds", b.grid.x_bounds)
    io.write_boundaries(out / "y.bounds", b.grid.y_bounds)
    io.write_points(out / "refs.tsv", b.tpcs)
    io.write_alignment(out / "alignment.txt", b.alignment)
    (out / "stop_x.txt").write_text("\n".join(sorted(b.stop_x)) + "\n", encoding="utf-8")
    (out / "stop_y.txt").write_text("\n".join(sorted(b.stop_y)) + "\n", encoding="utf-8")
    (out / "planted.txt").write_text(
        "".join(f"{k} = {getattr(spec, k)}\n" for k in
                ("n_chars", "cognate_density", "noise_rate", "frequent_rate", "omissions", "switches", "seed"))
        + "".join(f"gap = {a}:{lo}:{hi}\n" for a, lo, hi in b.gaps), encoding="utf-8")
    print(f"wrote {out} ({len(b.x_text)} x {len(b.y_text)} chars, {b.grid.n_x} x {b.grid.n_y} sentences)")
    return 0


def cmd_plot(args) -> int:
    m = io.read_map(args.map_file) if args.map_file else None
    if m is not None:
        space = m.space
    elif args.width and args.height:
        space = BitextSpace(args.width, args.height)
    else:
        raise BimapError("plot needs --map or both --width and --height")
    cands = io.read_points(args.points) if args.points else np.zeros((0, 2))
    chains = io.read_points(args.chains) if args.chains else np.zeros((0, 2))
    Path(args.output).write_text(render_svg(space, cands, chains, m), encoding="utf-8")
    return 0


COMMANDS = {"map": cmd_map, "align": cmd_align, "eval": cmd_eval, "optimize": cmd_optimize,
            "synth": cmd_synth, "plot": cmd_plot}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (BimapError, ValueError, OSError) as exc:
        print(f"bimap {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
