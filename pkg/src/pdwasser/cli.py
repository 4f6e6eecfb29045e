"""Command-line interface.

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 invariant
violation, 4 size limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import io as pdio
from .diagram import check_order
from .exceptions import (
    DiagramParseError,
    InvalidPointError,
    IsometryViolation,
    SizeLimitExceeded,
)
from .hilbert import DEFAULT_CAP, FAMILIES, certificate_to_dict, certify, distortion_probe, mds_embed, probe_csv
from .lemma import embedding_constant, lemma_embed, verify_isometry
from .matching import brute_force_wasserstein, wasserstein
from .metric import FiniteMetricSpace

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_LIMIT = 4

CAP_ENV = "PD_WASSERSTEIN_CAP"
MANIFEST = "manifest.json"


def _fmt(x: float) -> str:
    return f"{x:.12f}"


def _order(text: str) -> float:
    try:
        return check_order(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> float:
    val = float(text)
    if not val > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return val


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be a comma list of integers, got {text!r}") from None
    if not sizes or any(s < 1 for s in sizes):
        raise argparse.ArgumentTypeError(f"sizes must be positive integers, got {text!r}")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise argparse.ArgumentTypeError(f"sizes must be ascending, got {text!r}")
    return sizes


def _print_result(res, show_matching: bool) -> None:
    print(_fmt(res.distance))
    if show_matching:
        m = res.matching
        print("pairs: " + " ".join(f"{i}-{j}" for i, j in m.pairs))
        print("unmatched1: " + " ".join(str(i) for i in m.unmatched1))
        print("unmatched2: " + " ".join(str(j) for j in m.unmatched2))


def cmd_dist(args) -> int:
    d1, d2 = pdio.read_diagram(args.d1), pdio.read_diagram(args.d2)
    _print_result(wasserstein(d1, d2, args.p), args.matching)
    return EXIT_OK


def cmd_oracle(args) -> int:
    d1, d2 = pdio.read_diagram(args.d1), pdio.read_diagram(args.d2)
    _print_result(brute_force_wasserstein(d1, d2, args.p), args.matching)
    return EXIT_OK


def cmd_embed(args) -> int:
    pts = pdio.read_point_set(args.points)
    c = embedding_constant(pts, args.p)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for i, dgm in enumerate(lemma_embed(pts, args.p, c=c), start=1):
        name = f"D_{i}.csv"
        pdio.write_diagram(dgm, out / name)
        files.append(name)
    manifest = {"c": c, "p": args.p, "d": int(pts.shape[1]), "n": int(pts.shape[0]), "files": files}
    (out / MANIFEST).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(files)} diagrams to {out} (c = {c:.12g})")
    return EXIT_OK


def _load_embedded(directory: Path):
    manifest = directory / MANIFEST
    if manifest.exists():
        names = json.loads(manifest.read_text(encoding="utf-8"))["files"]
    else:
        names = sorted(
            (f.name for f in directory.glob("D_*.csv")), key=lambda s: int(s[2:-4])
        )
    return [pdio.read_diagram(directory / name) for name in names]


def cmd_verify(args) -> int:
    pts = pdio.read_point_set(args.points)
    diagrams = _load_embedded(Path(args.diagrams)) if args.diagrams else None
    try:
        report = verify_isometry(pts, args.p, diagrams=diagrams, rtol=args.tol)
    except IsometryViolation as exc:
        print(f"FAIL {exc}", file=sys.stderr)
        print(f"pairs {len(pts) * (len(pts) - 1) // 2} max_residual {exc.residual:.12g}")
        return EXIT_VERIFY
    print(f"pairs {len(report.pairs)} max_residual {report.max_residual:.12g}")
    return EXIT_OK


def cmd_certify(args) -> int:
    ms = FiniteMetricSpace(pdio.read_matrix(args.matrix))
    cert = certify(ms, args.tol)
    _, report = mds_embed(ms, args.tol)
    record = certificate_to_dict(cert, p=args.p, distortion_value=report.multiplicative_distortion)
    print(json.dumps(record, indent=2))
    return EXIT_OK


def cmd_probe(args) -> int:
    cap = args.cap
    if cap is None:
        cap = int(os.environ.get(CAP_ENV, DEFAULT_CAP))
    rows = distortion_probe(args.family, args.p, args.sizes, args.seed, cap=cap, dim=args.dim, tol=args.tol)
    text = probe_csv(rows)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdwasser",
        description="Exact p-Wasserstein distances between persistence diagrams, "
        "l_p-to-diagram embeddings and Hilbert embeddability certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, helptext in (
        ("dist", cmd_dist, "p-Wasserstein distance via the assignment solver"),
        ("oracle", cmd_oracle, "p-Wasserstein distance by enumerating all partial matchings"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("d1")
        sp.add_argument("d2")
        sp.add_argument("--p", type=_order, default=2.0)
        sp.add_argument("--matching", action="store_true", help="also print the optimal matching")
        sp.set_defaults(func=func)

    sp = sub.add_parser("embed", help="write one diagram per point of an l_p point set")
    sp.add_argument("points")
    sp.add_argument("--p", type=_order, default=2.0)
    sp.add_argument("--out", required=True, help="output directory")
    sp.set_defaults(func=cmd_embed)

    sp = sub.add_parser("verify", help="check that embedded diagrams reproduce l_p distances")
    sp.add_argument("points")
    sp.add_argument("--p", type=_order, default=2.0)
    sp.add_argument("--diagrams", help="directory written by 'embed' to check instead of fresh diagrams")
    sp.add_argument("--tol", type=_positive, default=1e-9)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("certify", help="Schoenberg certificate for a distance matrix (JSON)")
    sp.add_argument("matrix")
    sp.add_argument("--tol", type=_positive, default=1e-9)
    sp.add_argument("--p", type=_order, default=None, help="recorded in the output only")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("probe", help="certificate growth table for a point family (CSV)")
    sp.add_argument("--family", choices=FAMILIES, required=True)
    sp.add_argument("--p", type=_order, default=2.0)
    sp.add_argument("--sizes", type=_sizes, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.add_argument("--cap", type=int, default=None, help=f"size cap (default ${CAP_ENV} or {DEFAULT_CAP})")
    sp.add_argument("--dim", type=int, default=4, help="ambient dimension of sampled families")
    sp.add_argument("--tol", type=_positive, default=1e-9)
    sp.set_defaults(func=cmd_probe)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DiagramParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidPointError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except SizeLimitExceeded as exc:
        print(f"size limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (OSError, ValueError) as exc:
        # invalid matrices, point sets or unreadable paths
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT if isinstance(exc, ValueError) else EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
