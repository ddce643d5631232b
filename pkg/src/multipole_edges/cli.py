"""Command-line front end.

    multipole-edges INPUT.pgm [--out-dipole P.pgm] [--out-quadrupole Q.pgm]
                              [--dump-fields DIR] [--global] [options]

Exit status: 0 on success, 1 on bad flags or unreadable image data,
2 on I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

import numpy as np

from .core import ANCHORS, BOUNDARIES, MEAN_NORMS, ORIGINS, Bitmap, ConfigError, PipelineConfig
from .moments import charge_map, fast_moment_fields, global_dipole, global_quadrupole, local_mean_map
from .pgm import PgmError, read_pgm, write_pgm
from .pipeline import detect_edges

EXIT_USAGE = 1
EXIT_IO = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="multipole-edges", description="Dipole and quadrupole edge maps of a PGM image.")
    p.add_argument("input", help="input PGM (P2 or P5)")
    p.add_argument("--out-dipole", metavar="PATH", help="write the tone-mapped dipole magnitude map")
    p.add_argument("--out-quadrupole", metavar="PATH", help="write the tone-mapped |det Q| map")
    p.add_argument("--dump-fields", metavar="DIR",
                   help="write M, q, px, py, qxx, qxy as text grids into DIR")
    p.add_argument("--window", default="2x2", help="window size HxW (default 2x2)")
    p.add_argument("--anchor", choices=ANCHORS,
                   help="window anchoring (default: inferred from window parity)")
    p.add_argument("--boundary", choices=BOUNDARIES, default="clamp")
    p.add_argument("--origin", choices=ORIGINS, default="window-center")
    p.add_argument("--qxy-factor", type=int, choices=(1, 2), default=2)
    p.add_argument("--alpha", type=float, default=0.5, help="dipole tone-map exponent")
    p.add_argument("--beta", type=float, default=0.25, help="quadrupole tone-map exponent")
    p.add_argument("--mean-norm", choices=MEAN_NORMS, default="pixel-count")
    p.add_argument("--format", choices=("P2", "P5"), default="P5", help="output PGM encoding")
    p.add_argument("--global", dest="global_", action="store_true",
                   help="print whole-image dipole and quadrupole moments")
    return p


def parse_window(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2 or not all(s.strip().isdigit() for s in parts):
        raise UsageError(f"--window must look like HxW, got {text!r}")
    h, w = (int(s) for s in parts)
    if h < 1 or w < 1:
        raise UsageError(f"--window dimensions must be positive, got {text!r}")
    return h, w


def infer_anchor(h: int, w: int) -> str:
    dims = [d for d in (h, w) if d > 1]
    if dims and all(d % 2 == 1 for d in dims):
        return "centered-odd"
    if all(d % 2 == 0 for d in dims):
        return "topleft-even"
    raise UsageError(f"window {h}x{w} mixes odd and even sides; no anchor fits")


def config_from_args(args) -> PipelineConfig:
    h, w = parse_window(args.window)
    anchor = args.anchor or infer_anchor(h, w)
    return PipelineConfig(
        window_height=h,
        window_width=w,
        window_anchor=anchor,
        boundary=args.boundary,
        origin=args.origin,
        qxy_factor=args.qxy_factor,
        alpha=args.alpha,
        beta=args.beta,
        mean_normalization=args.mean_norm,
    )


def _fmt(v: float) -> str:
    return f"{v + 0.0:.9g}"


def format_global(bm: Bitmap) -> str:
    d = global_dipole(bm)
    q = global_quadrupole(bm)
    return f"{_fmt(d.px)} {_fmt(d.py)}\n{_fmt(q.qxx)} {_fmt(q.qyy)} {_fmt(q.qxy)}\n"


def format_grid(values: np.ndarray) -> str:
    """'height width' line followed by rows in 9-significant-digit scientific notation."""
    h, w = values.shape
    rows = [" ".join(f"{v + 0.0:.8e}" for v in row) for row in values]
    return f"{h} {w}\n" + "\n".join(rows) + "\n"


def atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # --help exits 0, argparse usage errors exit EXIT_USAGE
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if not (args.out_dipole or args.out_quadrupole or args.dump_fields or args.global_):
            raise UsageError("nothing to do: request --out-dipole, --out-quadrupole, --dump-fields or --global")
        cfg = config_from_args(args)
    except (UsageError, ConfigError) as exc:
        print(f"multipole-edges: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        with open(args.input, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        print(f"multipole-edges: cannot read {args.input}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    try:
        bm = read_pgm(data)
    except PgmError as exc:
        print(f"multipole-edges: {args.input}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    # compute everything before touching the filesystem
    outputs: list[tuple[str, bytes]] = []
    if args.out_dipole or args.out_quadrupole:
        res = detect_edges(bm, cfg)
        if args.out_dipole:
            outputs.append((args.out_dipole, write_pgm(res.dipole_bitmap, args.format)))
        if args.out_quadrupole:
            outputs.append((args.out_quadrupole, write_pgm(res.quadrupole_bitmap, args.format)))
    if args.dump_fields:
        df, qf = fast_moment_fields(bm, cfg)
        grids = {
            "M": local_mean_map(bm, cfg).values,
            "q": charge_map(bm, cfg).values,
            "px": df.px,
            "py": df.py,
            "qxx": qf.qxx,
            "qxy": qf.qxy,
        }
        for name, values in grids.items():
            outputs.append((os.path.join(args.dump_fields, f"{name}.txt"), format_grid(values).encode("ascii")))

    try:
        if args.dump_fields:
            os.makedirs(args.dump_fields, exist_ok=True)
        for path, payload in outputs:
            atomic_write(path, payload)
    except OSError as exc:
        print(f"multipole-edges: write failed: {exc}", file=sys.stderr)
        return EXIT_IO

    if args.global_:
        sys.stdout.write(format_global(bm))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
