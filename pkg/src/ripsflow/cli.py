"""Command-line front end.

Exit status: 0 success, 1 usage error, 2 input error, 3 capacity error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass
from typing import Sequence

from .diagram import load_diagram_file, write_diagram
from .errors import CapacityError, InputParseError, NotSupportedError
from .metric_io import FORMATS, load_metric_file
from .reduction_core import (anti_transpose, compress, oblivious_reduce, read_boundary_matrix,
                             scan_metadata, standard_reduce, twist_reduce)
from .vr_engine import vr_barcode
from .wasserstein import approx_w1_report, exact_w1_report

__all__ = ["RunConfig", "main", "build_parser"]

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3
PRECISION = 9


@dataclass(frozen=True)
class RunConfig:
    """Validated options of one invocation."""

    command: str
    inputs: tuple[str, ...]
    dim: int = 1
    threshold: float | None = None
    fmt: str = "lower-distance"
    mode: str = "oblivious"
    include_zero: bool = False
    out: str | None = None
    s: float = 40.0
    exact: bool = False
    seed: int = 0
    report: bool = False
    algorithm: str = "standard"
    anti_transpose: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.fmt == "sparse" and self.threshold is None:
            raise UsageError("sparse input requires --threshold")
        if self.dim < 0:
            raise UsageError("--dim must be non-negative")
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")
        if self.command == "wasserstein" and self.s <= 2:
            raise UsageError("--s must exceed 2")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads for parallel stages (default 1)")
    p = _Parser(prog="ripsflow", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("barcode", parents=[common], help="Rips persistence barcodes")
    b.add_argument("file")
    b.add_argument("--dim", type=int, default=1, help="top homology dimension (default 1)")
    b.add_argument("--threshold", type=float, default=None,
                   help="largest diameter (default: enclosing radius)")
    b.add_argument("--format", dest="fmt", choices=FORMATS, default="lower-distance")
    b.add_argument("--mode", choices=("oblivious", "vmatrix"), default="oblivious")
    b.add_argument("--include-zero", action="store_true", help="keep zero-length bars")
    b.add_argument("--out", default=None, help="output stem (default: input path sans suffix)")

    w = sub.add_parser("wasserstein", parents=[common], help="1-Wasserstein distance")
    w.add_argument("a")
    w.add_argument("b")
    w.add_argument("--s", type=float, default=40.0, help="spanner separation (default 40)")
    w.add_argument("--exact", action="store_true", help="solve the full bipartite network")
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--report", action="store_true", help="also print a JSON report")

    r = sub.add_parser("reduce", parents=[common], help="explicit boundary-matrix reduction")
    r.add_argument("file")
    r.add_argument("--algorithm", choices=("standard", "twist", "compress", "oblivious"), default="standard")
    r.add_argument("--anti-transpose", action="store_true")
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    if ns.command == "barcode":
        return RunConfig("barcode", (ns.file,), dim=ns.dim, threshold=ns.threshold, fmt=ns.fmt,
                         mode=ns.mode, include_zero=ns.include_zero, out=ns.out,
                         threads=ns.threads)
    if ns.command == "wasserstein":
        return RunConfig("wasserstein", (ns.a, ns.b), s=ns.s, exact=ns.exact, seed=ns.seed,
                         report=ns.report, threads=ns.threads)
    return RunConfig("reduce", (ns.file,), algorithm=ns.algorithm,
                     anti_transpose=ns.anti_transpose, threads=ns.threads)


def _g(x: float) -> str:
    return f"{x:.{PRECISION}g}"


def run_barcode(cfg: RunConfig, out=None) -> None:
    out = out or sys.stdout
    D = load_metric_file(cfg.inputs[0], cfg.fmt)
    res = vr_barcode(D, cfg.dim, cfg.threshold, cfg.mode, cfg.include_zero, cfg.threads)
    stem = cfg.out if cfg.out is not None else os.path.splitext(cfg.inputs[0])[0]
    print(f"points {D.n}", file=out)
    print(f"threshold {_g(res.threshold)}", file=out)
    for dgm, st in zip(res.diagrams, res.stats):
        path = f"{stem}.dim{dgm.dim}.txt"
        with open(path, "w") as fh:
            fh.write(write_diagram(dgm, PRECISION))
        line = (f"dim {dgm.dim}: {dgm.finite.shape[0]} finite, {dgm.infinite.shape[0]} infinite"
                f"; columns {st.columns}")
        if dgm.dim > 0:
            line += (f", cleared {st.cleared}, apparent {st.apparent}, emergent {st.emergent}"
                     f", reduced {st.reduced}, essential {st.essential}"
                     f", additions {st.additions}")
        print(line, file=out)
        print(f"wrote {path}", file=out)


def run_wasserstein(cfg: RunConfig, out=None) -> None:
    out = out or sys.stdout
    A = load_diagram_file(cfg.inputs[0])
    B = load_diagram_file(cfg.inputs[1])
    if A.infinite.shape[0] != B.infinite.shape[0]:
        warnings.warn(f"infinite bar counts differ ({A.infinite.shape[0]} vs "
                      f"{B.infinite.shape[0]}); infinite bars are ignored", stacklevel=2)
    rep = exact_w1_report(A, B) if cfg.exact else approx_w1_report(A, B, cfg.s, cfg.seed)
    print(_g(rep.value), file=out)
    if cfg.report:
        print(json.dumps(rep.as_dict(), sort_keys=True), file=out)


def run_reduce(cfg: RunConfig, out=None) -> None:
    out = out or sys.stdout
    with open(cfg.inputs[0], "rb") as fh:
        M = read_boundary_matrix(fh.read())
    n = M.n
    target = anti_transpose(M) if cfg.anti_transpose else M
    if cfg.algorithm == "standard":
        pivots = standard_reduce(target)[1]
    elif cfg.algorithm == "twist":
        pivots = twist_reduce(target)
    elif cfg.algorithm == "oblivious":
        pivots = oblivious_reduce(target)
    else:
        pivots = standard_reduce(compress(target, scan_metadata(target)))[1]
    pairs = pivots.items()
    if cfg.anti_transpose:
        pairs = [(n - 1 - c, n - 1 - r) for r, c in pairs]
    for r, c in sorted(pairs, key=lambda rc: rc[1]):
        print(f"{r} {c}", file=out)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        cfg = _config(parser.parse_args(argv))
    except UsageError as exc:
        print(f"ripsflow: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    warnings.simplefilter("default")
    try:
        {"barcode": run_barcode, "wasserstein": run_wasserstein,
         "reduce": run_reduce}[cfg.command](cfg)
    except CapacityError as exc:
        print(f"ripsflow: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InputParseError, NotSupportedError, ValueError, OSError) as exc:
        print(f"ripsflow: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
