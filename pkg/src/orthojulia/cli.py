"""Command-line entry point: ``orthojulia <command> ...``.

Exit codes: 0 success, 1 failed acceptance criteria, 2 invalid input,
3 rank deficiency, 4 empty filled Julia set on the requested window.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import acceptance, dynamics, measures, orthopoly, potential, setmetrics
from .errors import (
    DegenerateMeasureError,
    EmptySetError,
    OrthoJuliaError,
    RankDeficiencyError,
)
from .polynomial import Polynomial
from .samples import SetSample

log = logging.getLogger("orthojulia")

EXIT_OK, EXIT_CRITERIA, EXIT_INVALID, EXIT_RANK, EXIT_EMPTY = 0, 1, 2, 3, 4
BLUE, RED, WHITE = (40, 70, 200), (200, 40, 40), (255, 255, 255)


class CliError(Exception):
    def __init__(self, message, code=EXIT_INVALID):
        super().__init__(message)
        self.code = code


def parse_coefficients(text: str) -> Polynomial:
    """Highest-degree-first comma separated coefficients; ``a+bi`` tokens allowed."""
    try:
        values = [complex(tok.strip().replace("i", "j")) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise CliError(f"bad coefficient list {text!r}: {exc}") from exc
    if not values:
        raise CliError("empty coefficient list")
    return Polynomial.from_highest_first(values)


def parse_vertices(text: str):
    pts = []
    for pair in text.split(";"):
        x, y = (float(v) for v in pair.split(","))
        pts.append(complex(x, y))
    return pts


def load_config(path):
    if path is None:
        return {}
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    p = Path(path)
    if not p.exists():
        raise CliError(f"config file {path} does not exist")
    with open(p, "rb") as fh:
        try:
            return tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise CliError(f"config {path}: {exc}") from exc


def _out_path(args, name):
    if name is None:
        return None
    p = Path(name)
    if args.out_dir and not p.is_absolute():
        p = Path(args.out_dir) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _existing(path):
    if not Path(path).exists():
        raise CliError(f"file {path} does not exist")
    return path


# -- commands --------------------------------------------------------------------------

def cmd_measure(args, config):
    kind = args.kind
    if kind == "circle":
        m = measures.build_circle(complex(args.center.replace("i", "j")), args.radius, args.nodes)
    elif kind == "interval":
        m = measures.build_interval_arcsine(args.a, args.b, args.nodes)
    elif kind == "polygon":
        if args.vertices:
            verts = parse_vertices(args.vertices)
        elif args.preset == "boomerang":
            verts = measures.boomerang_vertices(args.scale)
        else:
            verts = [v * args.scale for v in acceptance.SQUARE]
        m = measures.build_polygon_boundary(verts, args.nodes)
    elif kind == "brolin":
        seed = args.seed if args.seed is not None else config.get("seed", 0)
        m = measures.build_brolin(parse_coefficients(args.poly), args.samples, seed)
    elif kind == "two-disks":
        m = measures.build_symmetric_disks(args.offset, args.radius, args.nodes)
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(f"unknown measure kind {kind}")
    out = _out_path(args, args.output)
    measures.save_measure(m, out)
    print(f"wrote {out}: {len(m)} nodes, label {m.label}")
    return EXIT_OK


def cmd_ortho(args, config):
    m = measures.load_measure(_existing(args.measure))
    seq = orthopoly.orthonormalize(m, args.N)
    print(f"{'n':>3}  {'gamma_n':>14}  {'Cpct(K_n)':>12}")
    for n, g in enumerate(seq.gammas):
        cap = g ** (-1.0 / (n - 1)) if n >= 2 else float("nan")
        print(f"{n:>3}  {g:>14.6f}  {cap:>12.6f}")
    if args.output:
        out = _out_path(args, args.output)
        seq.save(out)
        print(f"wrote {out}")
    return EXIT_OK


def _grid_from_args(args):
    x0, x1, y0, y1 = args.window
    return dynamics.GridSpec(x0, x1, y0, y1, args.pixels[0], args.pixels[1],
                             args.escape_radius, args.max_iter)


def render_julia(c: dynamics.GridClassification) -> np.ndarray:
    img = np.full(c.escape_iter.shape, 128, dtype=np.uint8)
    img[c.bounded] = 255
    img[c.boundary_mask()] = 0
    return img


def render_bands(c: dynamics.GridClassification, green: dynamics.GreensField, band_width: float):
    parity = np.floor(green.values / band_width).astype(np.int64) % 2
    gray = np.where(parity == 0, 64, 160).astype(np.uint8)
    gray[c.bounded] = 255
    rgb = np.where(parity[..., None] == 0, np.array(BLUE, np.uint8), np.array(RED, np.uint8)).astype(np.uint8)
    rgb[c.bounded] = WHITE
    return gray, rgb


def _write_png(path, array):
    try:
        from PIL import Image
    except ImportError:
        log.info("Pillow not installed; skipping %s", path)
        return False
    Image.fromarray(array).save(path, optimize=False)
    return True


def cmd_render(args, config):
    seq = orthopoly.OrthoSequence.load(_existing(args.sequence))
    if not 2 <= args.n <= seq.max_degree:
        raise CliError(f"n must lie in 2..{seq.max_degree}")
    grid = _grid_from_args(args)
    c, green = dynamics.classify_with_green(seq[args.n], grid)
    if not c.bounded.any():
        raise EmptySetError(f"K_{args.n} has no pixel in the window; enlarge the window or --max-iter")
    stem = _out_path(args, args.output)
    if args.mode == "julia":
        gray = render_julia(c)
        color = gray
    else:
        gray, color = render_bands(c, green, args.band_width)
    pgm = stem.with_suffix(".pgm")
    dynamics.write_pgm(pgm, gray)
    Path(str(pgm) + ".json").write_text(json.dumps(dict(grid.to_dict(), n=args.n, mode=args.mode), indent=1) + "\n")
    written = [pgm]
    if _write_png(stem.with_suffix(".png"), color):
        written.append(stem.with_suffix(".png"))
    print(f"K_{args.n}: {int(c.bounded.sum())} pixels; wrote " + ", ".join(map(str, written)))
    return EXIT_OK


def _load_sample(path):
    path = _existing(path)
    if str(path).endswith(".json"):
        m = measures.load_measure(path)
        return m.as_sample()
    return SetSample.from_csv(path)


def cmd_hausdorff(args, config):
    a, b = _load_sample(args.first), _load_sample(args.second)
    rep = setmetrics.distance(a, b, brute_force=args.brute_force)
    print(json.dumps({"semi_LM": rep.semi_LM, "semi_ML": rep.semi_ML, "full": rep.full,
                      "resolution": rep.resolution}, indent=1))
    return EXIT_OK


def cmd_capacity(args, config):
    s = _load_sample(args.sample)
    est = potential.leja_capacity(s, args.m)
    out = {"value": est.value, "n_points_used": est.n_points_used, "method": est.method,
           "d_m": est.diameter_m, "d_2m": est.diameter_2m, "delta": est.delta, "polar": est.polar}
    if args.sequence:
        seq = orthopoly.OrthoSequence.load(_existing(args.sequence))
        rep = potential.capacity_formula_check(seq, args.n, s, args.m)
        out.update(formula_lhs=rep.lhs, formula_rhs=rep.rhs, relative_gap=rep.relative_gap)
    print(json.dumps(out, indent=1))
    return EXIT_OK


def cmd_verify(args, config):
    try:
        cfg = acceptance.VerifyConfig.from_mapping(config.get("verify", {}))
    except (ValueError, TypeError) as exc:
        raise CliError(f"config: {exc}") from exc
    if args.seed is not None:
        cfg.seed = args.seed
    only = None
    if args.criteria:
        only = {int(x) for x in args.criteria.split(",")}
    results = acceptance.run_all(cfg, only)
    out_dir = Path(args.out_dir or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = {"passed": all(r.passed for r in results),
               "criteria": [r.to_dict() for r in results]}
    (out_dir / "verify_summary.json").write_text(json.dumps(summary, indent=1) + "\n")
    with open(out_dir / "verify_checks.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["criterion", "name", "measured", "threshold", "passed", "detail"])
        for r in results:
            for c in r.checks:
                w.writerow([c.criterion, c.name, repr(c.measured), repr(c.threshold), c.passed, c.detail])
    for r in results:
        for c in r.checks:
            print(c.line())
        print(f"C{r.number} {r.title}: {'PASS' if r.passed else 'FAIL'} ({r.runtime:.1f}s)")
    failing = [r.number for r in results if not r.passed]
    if failing:
        print("failing criteria: " + ", ".join(map(str, failing)), file=sys.stderr)
        return EXIT_CRITERIA
    return EXIT_OK


# -- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def add_globals(p, default):
        p.add_argument("--config", default=default(None), help="TOML configuration file")
        p.add_argument("--out-dir", default=default(None), help="directory for all outputs")
        p.add_argument("--seed", type=int, default=default(None))
        p.add_argument("--threads", type=int, default=default(None), help="worker threads for grid kernels")
        p.add_argument("-v", "--verbose", action="store_true", default=default(False))

    parser = argparse.ArgumentParser(prog="orthojulia", description=__doc__.splitlines()[0])
    add_globals(parser, lambda v: v)
    # global flags are also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    add_globals(common, lambda v: argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **kw: _add(*a, parents=[common], **kw)

    p = sub.add_parser("measure", help="build a discrete measure")
    p.add_argument("kind", choices=["circle", "interval", "polygon", "brolin", "two-disks"])
    p.add_argument("--center", default="0")
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--a", type=float, default=-2.0)
    p.add_argument("--b", type=float, default=2.0)
    p.add_argument("--vertices", help='"x,y;x,y;..."')
    p.add_argument("--preset", choices=["square", "boomerang"], default="square")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--poly", help="highest-degree-first coefficients, e.g. 1,0,-1")
    p.add_argument("--samples", type=int, default=2**16)
    p.add_argument("--offset", type=float, default=2.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("ortho", help="orthonormal polynomials of a measure file")
    p.add_argument("measure")
    p.add_argument("-N", type=int, default=orthopoly.DEFAULT_MAX_DEGREE)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ortho)

    p = sub.add_parser("render", help="render K_n / J_n or Green's bands")
    p.add_argument("sequence")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--window", type=float, nargs=4, default=[-2.0, 2.0, -2.0, 2.0],
                   metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
    p.add_argument("--pixels", type=int, nargs=2, default=[800, 800], metavar=("W", "H"))
    p.add_argument("--max-iter", type=int, default=dynamics.DEFAULT_MAX_ITER)
    p.add_argument("--escape-radius", type=float, default=None)
    p.add_argument("--mode", choices=["julia", "green-bands"], default="julia")
    p.add_argument("--band-width", type=float, default=0.05)
    p.add_argument("-o", "--output", required=True, help="output stem; .pgm (and .png) appended")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("hausdorff", help="Hausdorff distances between two samples")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--brute-force", action="store_true")
    p.set_defaults(func=cmd_hausdorff)

    p = sub.add_parser("capacity", help="Leja capacity of a sample (CSV or measure JSON)")
    p.add_argument("sample")
    p.add_argument("--m", type=int, default=potential.DEFAULT_LEJA_M)
    p.add_argument("--sequence", help="also compare with gamma_n^(-1/(n-1))")
    p.add_argument("-n", type=int, default=10)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--criteria", help="comma separated subset, e.g. 1,2,5")
    p.set_defaults(func=cmd_verify)
    return parser


_MEASURE_DEFAULTS = {"circle": (1.0, 512), "interval": (None, 2048), "polygon": (None, 400),
                     "two-disks": (0.5, 256), "brolin": (None, None)}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config)
        if args.out_dir is None:
            args.out_dir = config.get("out_dir")
        if args.seed is None and "seed" in config:
            args.seed = int(config["seed"])
        threads = args.threads or config.get("threads")
        if threads:
            import numba

            numba.set_num_threads(min(int(threads), numba.config.NUMBA_NUM_THREADS))
        if args.command == "measure":
            radius, nodes = _MEASURE_DEFAULTS[args.kind]
            args.radius = radius if args.radius is None else args.radius
            args.nodes = nodes if args.nodes is None else args.nodes
            if args.kind == "brolin" and not args.poly:
                raise CliError("--poly is required for brolin measures")
        return args.func(args, config)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (RankDeficiencyError, DegenerateMeasureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANK
    except EmptySetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (OrthoJuliaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
