"""Command-line interface: ``shamap gen | embed | plot | eval``.

Exit codes: 0 success, 2 usage error, 3 data/format error (including I/O),
4 algorithmic precondition failure.
"""
from __future__ import annotations

import argparse
import logging
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import ingest, metrics, synth
from .dataset import LabelSet, PointCloud, Reference
from .errors import DataError, ShamapError
from .graph import WeightMode
from .spectral import isomap_embed, sammon_embed, shamap_embed, shamap_matrices

EXIT_USAGE = 2
EXIT_DATA = 3

log = logging.getLogger("shamap")

_PI_EXPR = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*\*?\s*(pi|π)?\s*$")


def angle_value(text: str) -> float:
    """Parse a float, optionally suffixed by ``pi`` (``10pi``, ``0.05pi``, ``pi``)."""
    m = _PI_EXPR.match(text)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    value = float(m.group(1)) if m.group(1) is not None else 1.0
    return value * math.pi if m.group(2) else value


def selection(text: str) -> tuple[int, int]:
    try:
        cls, count = text.split(":")
        return int(cls), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected CLASS:COUNT, got {text!r}") from None


def _out(path, text: str):
    Path(path).write_text(text)


# ---------------------------------------------------------------- gen

def _helix_spec(args) -> synth.HelixSpec:
    return synth.HelixSpec(args.t_start, args.t_end, args.t_step, args.pitch,
                           args.phase, args.radius)


def cmd_gen(args) -> int:
    labels = None
    if args.kind == "helix":
        cloud = synth.gen_helix(_helix_spec(args))
    elif args.kind == "double-helix":
        cloud, labels = synth.gen_double_helix(_helix_spec(args))
    elif args.kind == "protein":
        cloud = synth.gen_toy_protein(args.helix_turns, args.sheet_periods, args.samples,
                                      radius=args.radius, pitch=args.pitch,
                                      sheet_amplitude=args.amplitude)
    else:
        cloud, truth = synth.gen_embedded_plane(args.n, args.ambient, args.seed)
        if args.truth:
            ingest.write_csv(args.truth, truth)
    ingest.write_csv(args.output, cloud, labels)
    print(f"wrote {cloud.n} rows x {cloud.dim} columns to {args.output}")
    return 0


# ---------------------------------------------------------------- embed

def _pgm_label(path: Path) -> int:
    m = re.match(r"obj(\d+)__", path.name)
    return int(m.group(1)) if m else 0


def load_input(path, labels_path=None, selections=()):
    """Load a cloud (CSV, IDX images, PGM file or PGM directory) with optional labels."""
    path = Path(path)
    labels = None
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if p.suffix.lower() in (".pgm", ".pnm"))
        if not files:
            raise DataError(f"no .pgm files in {path}")
        cloud = ingest.images_to_cloud([ingest.read_pgm(p) for p in files])
        labels = LabelSet([_pgm_label(p) for p in files])
    else:
        head = path.read_bytes()[:2]
        if path.suffix.lower() == ".csv":
            cloud, labels = ingest.read_csv(path)
        elif head in (b"P5", b"P2"):
            cloud = ingest.images_to_cloud([ingest.read_pgm(path)])
        elif head in (b"\x00\x00", b"\x1f\x8b"):
            tensor = ingest.read_idx(path)
            arr = tensor.array()
            if arr.ndim == 3:
                cloud = ingest.images_to_cloud(arr)
            elif arr.ndim == 2:
                cloud = PointCloud(arr.astype(np.float64))
            else:
                raise DataError(f"IDX input must be 2-D or 3-D, got dims {list(tensor.dims)}")
        else:
            raise DataError(f"cannot tell the format of {path}")
    if labels_path:
        lab = ingest.read_idx(labels_path).array().reshape(-1)
        labels = LabelSet(lab)
    if labels is not None:
        labels.check_pairs(cloud)
    if selections:
        if labels is None:
            raise DataError("--select needs labels")
        idx = np.concatenate([ingest.label_indices(labels, c, k) for c, k in selections])
        cloud = cloud.subset(idx)
        labels = LabelSet(labels.labels[idx])
    return cloud, labels


def _reference(text: str):
    low = text.strip().lower()
    if low in ("origin", "centroid"):
        return Reference(low)
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise DataError(f"bad reference {text!r}: use origin, centroid or x,y,...") from None


def _matrix_text(m) -> str:
    buf = []
    ingest.write_csv(_Sink(buf), m)
    return "".join(buf)


class _Sink:
    def __init__(self, buf):
        self.buf = buf

    def write(self, s):
        self.buf.append(s)


def cmd_embed(args, parser) -> int:
    if args.method != "sammon" and sum(x is not None and x is not False
                                       for x in (args.k, args.eps, args.complete or None)) != 1:
        parser.error("give exactly one of --k, --eps or --complete")
    cloud, labels = load_input(args.input, args.labels, args.select)
    if args.method == "shamap":
        emb = shamap_embed(cloud, _reference(args.ref), k=args.k, eps=args.eps, d=args.dim,
                           weight_mode=WeightMode(args.weight_mode),
                           largest_component=args.largest_component,
                           clamp_negative=args.clamp_negative, center=args.center)
        if args.dump_angles:
            mats = shamap_matrices(cloud, _reference(args.ref), k=args.k, eps=args.eps,
                                   weight_mode=WeightMode(args.weight_mode),
                                   largest_component=args.largest_component)
            _out(f"{args.dump_angles}_theta.csv", _matrix_text(mats.theta))
            _out(f"{args.dump_angles}_cosine.csv", _matrix_text(mats.cosine))
    elif args.method == "isomap":
        emb = isomap_embed(cloud, k=args.k, eps=args.eps, complete=args.complete, d=args.dim,
                           largest_component=args.largest_component,
                           clamp_negative=args.clamp_negative)
    else:
        emb = sammon_embed(cloud, d=args.dim, max_iters=args.max_iters,
                           step_size=args.step_size)
        print(f"sammon stress {emb.info['stress']:.6g} after {emb.info['iterations']} "
              f"iterations (converged: {emb.info['converged']})")
    if emb.kept.size < cloud.n:
        dropped = np.setdiff1d(np.arange(cloud.n), emb.kept)
        print(f"dropped {dropped.size} point(s) outside the largest component: "
              f"{dropped.tolist()}", file=sys.stderr)
    out_labels = None if labels is None else labels.labels[emb.kept]
    ingest.write_csv(args.output, emb.coords, out_labels)
    if args.spectrum:
        lines = ["eigenvalue"] + [ingest.format_float(v) for v in emb.spectrum]
        _out(args.spectrum, "\n".join(lines) + "\n")
    print(f"wrote {emb.n} x {emb.d} {emb.method.value} embedding to {args.output}")
    return 0


# ---------------------------------------------------------------- plot

def cmd_plot(args) -> int:
    from .plot import scatter_svg

    emb, labels = ingest.read_csv(args.embedding)
    svg = scatter_svg(emb.points, None if labels is None else labels.labels, args.title)
    _out(args.output, svg)
    print(f"wrote {emb.n} markers to {args.output}")
    return 0


# ---------------------------------------------------------------- eval

METRICS = ["winding", "nn-accuracy", "procrustes", "spectral-ratio", "separation", "stress"]


def read_spectrum(path) -> np.ndarray:
    lines = Path(path).read_text().split()
    if lines and lines[0] == "eigenvalue":
        lines = lines[1:]
    try:
        return np.array([float(v) for v in lines])
    except ValueError:
        raise DataError(f"bad spectrum file {path}") from None


def cmd_eval(args, parser) -> int:
    emb, labels = ingest.read_csv(args.embedding)
    rows = []
    for name in args.metric:
        if name == "winding":
            center = (np.array([float(v) for v in args.center.split(",")])
                      if args.center else emb.points.mean(axis=0))
            rows.append(("winding", metrics.winding_count(emb.points, center)))
        elif name == "nn-accuracy":
            if labels is None:
                parser.error("nn-accuracy needs a label column")
            rows.append(("nn_accuracy", metrics.nn_label_accuracy(emb.points, labels)))
        elif name == "procrustes":
            if not args.truth:
                parser.error("procrustes needs --truth")
            truth, _ = ingest.read_csv(args.truth)
            rep = metrics.procrustes(truth.points, emb.points, allow_scale=args.allow_scale)
            rows.append(("procrustes_rmse", rep.rmse))
        elif name == "spectral-ratio":
            if not args.spectrum:
                parser.error("spectral-ratio needs --spectrum")
            rows.append(("spectral_ratio", metrics.spectral_ratio(read_spectrum(args.spectrum))))
        elif name == "separation":
            if labels is None:
                parser.error("separation needs a label column")
            a = emb.points[labels.labels == args.classes[0]]
            b = emb.points[labels.labels == args.classes[1]]
            mn, haus = metrics.set_separation(a, b)
            rows += [("min_cross_distance", mn), ("hausdorff", haus)]
        elif name == "stress":
            if not args.high:
                parser.error("stress needs --high")
            high, _ = ingest.read_csv(args.high)
            rows.append(("sammon_stress", metrics.sammon_stress(high.points, emb.points)))
    width = max(len(r[0]) for r in rows)
    for key, value in rows:
        print(f"{key:<{width}}  {value:.10g}")
    if args.csv:
        _out(args.csv, "metric,value\n" + "".join(
            f"{k},{ingest.format_float(v)}\n" for k, v in rows))
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shamap", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic dataset as CSV")
    gen.add_argument("kind", choices=["helix", "double-helix", "protein", "plane"])
    gen.add_argument("-o", "--output", required=True)
    gen.add_argument("--t-start", type=angle_value, default=0.0)
    gen.add_argument("--t-end", type=angle_value, default=10 * math.pi)
    gen.add_argument("--t-step", type=angle_value, default=0.05 * math.pi)
    gen.add_argument("--pitch", type=float, default=0.1)
    gen.add_argument("--phase", type=angle_value, default=0.0)
    gen.add_argument("--radius", type=float, default=1.0)
    gen.add_argument("--helix-turns", type=float, default=2.5)
    gen.add_argument("--sheet-periods", type=int, default=1)
    gen.add_argument("--samples", type=int, default=100, help="samples per protein segment")
    gen.add_argument("--amplitude", type=float, default=1.0, help="sheet amplitude")
    gen.add_argument("--n", type=int, default=200)
    gen.add_argument("--ambient", type=int, default=5)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--truth", help="plane: also write the 2-D ground truth here")

    emb = sub.add_parser("embed", help="embed a dataset")
    emb.add_argument("input", help="CSV, IDX image file, PGM file or directory of PGMs")
    emb.add_argument("-o", "--output", required=True)
    emb.add_argument("--labels", help="IDX label file paired with an IDX image input")
    emb.add_argument("--select", type=selection, action="append", default=[],
                     metavar="CLASS:COUNT", help="keep the first COUNT samples of CLASS "
                     "(repeatable; selections are concatenated)")
    emb.add_argument("--method", choices=["shamap", "isomap", "sammon"], default="shamap")
    emb.add_argument("--k", type=int)
    emb.add_argument("--eps", type=float)
    emb.add_argument("--complete", action="store_true", help="isomap on the complete graph")
    emb.add_argument("--ref", default="origin", help="origin, centroid or x,y,...")
    emb.add_argument("--dim", type=int, default=2)
    emb.add_argument("--weight-mode", choices=["euclidean", "angular"], default="euclidean")
    emb.add_argument("--largest-component", action="store_true")
    emb.add_argument("--clamp-negative", action="store_true")
    emb.add_argument("--center", action="store_true", help="double-centre the cosine matrix")
    emb.add_argument("--max-iters", type=int, default=500)
    emb.add_argument("--step-size", type=float, default=0.1)
    emb.add_argument("--spectrum", help="write the eigenvalue spectrum here")
    emb.add_argument("--dump-angles", metavar="PREFIX",
                     help="shamap: write PREFIX_theta.csv and PREFIX_cosine.csv")

    plot = sub.add_parser("plot", help="render a 2-D embedding CSV as SVG")
    plot.add_argument("embedding")
    plot.add_argument("-o", "--output", required=True)
    plot.add_argument("--title", default="")

    ev = sub.add_parser("eval", help="compute embedding metrics")
    ev.add_argument("embedding")
    ev.add_argument("--metric", action="append", choices=METRICS, required=True)
    ev.add_argument("--truth", help="ground-truth CSV for procrustes")
    ev.add_argument("--allow-scale", action="store_true")
    ev.add_argument("--high", help="high-dimensional CSV for stress")
    ev.add_argument("--spectrum", help="spectrum sidecar for spectral-ratio")
    ev.add_argument("--center", help="winding center x,y (default: centroid)")
    ev.add_argument("--classes", type=int, nargs=2, default=[0, 1], metavar=("A", "B"))
    ev.add_argument("--csv", help="also write the table as CSV")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "embed":
            return cmd_embed(args, parser)
        if args.command == "plot":
            return cmd_plot(args)
        return cmd_eval(args, parser)
    except ShamapError as exc:
        print(f"shamap: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"shamap: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
