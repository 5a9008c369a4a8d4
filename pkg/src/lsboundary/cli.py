"""Command line entry point: ``lsboundary <command> ...``."""
from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import experiments as ex
from .deformation import EarthquakePath, earthquake_path_sample
from .holonomy import curve_lengths
from .pants import (MulticurveLamination, parse_curve_document, parse_lamination,
                    parse_surface_spec, surface_to_json)
from .spectra import CurveFamily, length_spectrum, spectrum_csv, spectrum_metadata
from .zoo import K_CAP, ZooRule, enumerate_taut_words, enumerate_walks, make_zoo_surface, parse_rule

EXPERIMENTS = ("earthquake-limit", "metric-compare", "bounded-norm", "shiga")


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _grid(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed grid {text!r}") from None


def cmd_build(args) -> int:
    s = parse_surface_spec(_read(args.surface))
    _emit(surface_to_json(s) + "\n", args.out)
    return 0


def cmd_length(args) -> int:
    s = parse_surface_spec(_read(args.surface))
    words = parse_curve_document(_read(args.curves), s.graph)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["curve_id", "length"])
    for word, length in zip(words, curve_lengths(s, words)):
        w.writerow([str(word), repr(float(length))])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_spectrum(args) -> int:
    s = parse_surface_spec(_read(args.surface))
    fam = CurveFamily(parse_curve_document(_read(args.curves), s.graph))
    _emit(spectrum_csv(length_spectrum(s, fam)), args.out)
    if args.out:
        Path(args.out + ".meta.json").write_text(spectrum_metadata(s, fam) + "\n")
    return 0


def cmd_quake(args) -> int:
    s = parse_surface_spec(_read(args.surface))
    mu = parse_lamination(_read(args.mu), s.graph)
    path = EarthquakePath(s, mu, tuple(args.t))
    surfaces = earthquake_path_sample(path)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if args.curves:
        fam = CurveFamily(parse_curve_document(_read(args.curves), s.graph))
        w.writerow(["t", "curve_id", "base_length", "length", "normalized_value"])
        for t, st in zip(path.grid, surfaces):
            u = length_spectrum(st, fam)
            for cid, b, v in zip(u.ids, u.base, u.values):
                w.writerow([repr(t), cid, repr(float(b)), repr(float(v)), repr(float(v / b))])
        if args.out:
            Path(args.out + ".meta.json").write_text(spectrum_metadata(s, fam, path.grid) + "\n")
    else:
        w.writerow(["t", "cuff_id", "length", "twist"])
        for t, st in zip(path.grid, surfaces):
            fn = st.fn
            for label in st.graph.labels():
                w.writerow([repr(t), label, repr(fn.length(label)), repr(fn.twist(label))])
    _emit(buf.getvalue(), args.out)
    return 0


def default_mu(s) -> MulticurveLamination:
    """Weights 1, 0.5, 2 on the interior cuffs at a quarter, half and three
    quarters of the chain."""
    interior = s.graph.interior_labels()
    n = len(interior)
    picks = sorted({min(n - 1, max(0, round(n * q) - 1)) for q in (0.25, 0.5, 0.75)})
    return MulticurveLamination({interior[i]: w for i, w in zip(picks, (1.0, 0.5, 2.0))})


def run_experiment(args) -> ex.ExperimentReport:
    name = args.name
    if name == "shiga":
        return ex.run_shiga_boundary(N=args.N or 10, growth=args.growth,
                                     max_segments=args.max_segments or 4, max_winding=args.max_winding)
    rule = ZooRule("flute", parse_rule(args.growth or "const:2"), N=args.N or 20,
                   names={"cuff": args.growth or "const:2"})
    if name == "bounded-norm":
        s = make_zoo_surface(rule)
        fam = CurveFamily(enumerate_taut_words(s, args.max_segments or 2, args.max_winding))
        return ex.run_bounded_norm_check(rule, fam, seed=args.seed)
    s = make_zoo_surface(rule)
    if args.surface:
        s = parse_surface_spec(_read(args.surface))
    if name == "earthquake-limit":
        mu = parse_lamination(_read(args.mu), s.graph) if args.mu else default_mu(s)
        fam = CurveFamily(*enumerate_walks(s, args.max_segments or 4, args.max_winding))
        return ex.run_earthquake_limit(s, mu, fam, args.t or (1.0, 10.0, 100.0, 1000.0))
    fam = CurveFamily(enumerate_taut_words(s, args.max_segments or 2, args.max_winding))
    return ex.run_metric_comparison(s, fam, n_pairs=args.pairs, seed=args.seed)


def cmd_experiment(args) -> int:
    try:
        rep = run_experiment(args)
    except ex.ExperimentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(rep.to_csv(), args.out)
    print(f"{rep.name}: {'pass' if rep.verdict else 'fail'} worst_margin={rep.worst_margin:.6g} "
          f"runtime={rep.runtime:.2f}s", file=sys.stderr)
    return 0 if rep.verdict else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lsboundary", description="Length spectra of infinite hyperbolic surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="validate a surface document and print it normalised")
    b.add_argument("surface")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    for name, func, helptext in (("length", cmd_length, "geodesic lengths of curve words"),
                                 ("spectrum", cmd_spectrum, "length spectrum CSV with metadata sidecar")):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("surface")
        c.add_argument("curves")
        c.add_argument("--out")
        c.set_defaults(func=func)

    q = sub.add_parser("quake", help="sample an earthquake path")
    q.add_argument("surface")
    q.add_argument("mu")
    q.add_argument("--t", type=_grid, required=True, help="times, e.g. '0,1,10'")
    q.add_argument("--curves", help="curve document; emit spectra instead of FN data")
    q.add_argument("--out")
    q.set_defaults(func=cmd_quake)

    e = sub.add_parser("experiment", help="run an experiment and write its CSV report")
    e.add_argument("name", choices=EXPERIMENTS)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out")
    e.add_argument("--N", type=int)
    e.add_argument("--growth", help="cuff rule, e.g. const:2 or exp:1 (shiga default: sweep exp:c)")
    e.add_argument("--max-segments", type=int)
    e.add_argument("--max-winding", type=int, default=K_CAP)
    e.add_argument("--surface", help="surface document (earthquake-limit, metric-compare)")
    e.add_argument("--mu", help="lamination document (earthquake-limit)")
    e.add_argument("--t", type=_grid, help="earthquake times (earthquake-limit)")
    e.add_argument("--pairs", type=int, default=100, help="sample size (metric-compare)")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
