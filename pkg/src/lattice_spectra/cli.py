"""Command-line front end: gen, verify, search, sweep.

Exit codes: 0 success, 1 an inequality record failed, 2 I/O or usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .eigensolver import full_spectrum, spectral_checks, spectrum_hash, write_spectrum
from .errors import LatticeError
from .inequalities import full_report
from .operator import assemble, write_coo
from .proof import build_proof_data, proof_records, write_proof_dump
from .region import (
    ball_region,
    box_region,
    is_connected,
    random_connected_region,
    read_region,
    dumps_region,
)
from .report import (
    RunManifest,
    manifest_path,
    records_to_csv,
    records_to_json,
    summary_line,
    trace_to_csv,
    write_manifest,
)
from .search import CHECKERS, FAMILIES, SearchConfig, anneal, sweep_family

EXIT_OK, EXIT_FAIL, EXIT_IO = 0, 1, 2
THREADS_ENV = "LATTICE_SPECTRA_THREADS"

log = logging.getLogger("lattice_spectra")


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _size_range(text: str) -> list[int]:
    """'2..6' (inclusive) or '2,3,5'."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 2..6 or a list like 2,3,5, got {text!r}")


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


# -- subcommands -----------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    if args.shape == "box":
        if not args.dims:
            raise UsageError("--shape box needs --dims")
        if args.n is not None and args.n != len(args.dims):
            raise UsageError(f"--n {args.n} does not match {len(args.dims)} dims")
        region = box_region(args.dims)
        config = {"shape": "box", "dims": args.dims}
    elif args.shape == "ball":
        if args.n is None or args.radius is None:
            raise UsageError("--shape ball needs --n and --radius")
        region = ball_region(args.n, args.radius, metric=args.metric)
        config = {"shape": "ball", "n": args.n, "radius": args.radius, "metric": args.metric}
    else:
        if args.n is None or args.size is None or args.seed is None:
            raise UsageError("--shape random needs --n, --size and --seed")
        region = random_connected_region(args.n, args.size, args.seed)
        config = {"shape": "random", "n": args.n, "size": args.size, "seed": args.seed}
    out = Path(args.out)
    _write(out, dumps_region(region, manifest=manifest_path(out).name))
    seeds = [args.seed] if args.seed is not None else []
    write_manifest(RunManifest("gen", config, seeds=seeds, outputs=[str(out)]), out)
    print(f"wrote {out} (N={region.N}, n={region.n})")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        region = read_region(args.region)
    except (OSError, LatticeError, ValueError) as exc:
        print(f"error: cannot read region {args.region}: {exc}", file=sys.stderr)
        return EXIT_IO
    region_id = Path(args.region).stem
    op = assemble(region)
    spec = full_spectrum(op)
    diag = spectral_checks(spec, op)
    connected = is_connected(region)
    records = full_report(spec, connected)
    if args.proof_internals:
        records += proof_records(spec, region, args.proof_kmax)
    rows = [(region_id, r) for r in records]

    out = Path(args.out)
    outputs = [str(out)]
    _write(out, records_to_csv(rows))
    if args.json:
        jpath = out.with_suffix(".json")
        _write(jpath, records_to_json(rows, manifest_path(out).name))
        outputs.append(str(jpath))
    if args.spectrum_out:
        write_spectrum(spec, args.spectrum_out, include_vectors=args.with_vectors)
        outputs.append(args.spectrum_out)
    if args.matrix_out:
        write_coo(op, args.matrix_out)
        outputs.append(args.matrix_out)
    if args.proof_dump:
        top = min(args.proof_kmax or (spec.N - 1), spec.N - 1)
        items = [build_proof_data(spec, region, k, a) for k in range(1, top + 1) for a in range(1, region.n + 1)]
        write_proof_dump(items, args.proof_dump, region_id)
        outputs.append(args.proof_dump)
    config = {"region": args.region, "proof_internals": args.proof_internals, "proof_kmax": args.proof_kmax}
    write_manifest(RunManifest("verify", config, inputs=[args.region], outputs=outputs), out)

    print(f"N={spec.N} n={spec.n} connected={str(connected).lower()} spectrum={spectrum_hash(spec)}")
    print(f"solver residual={diag.max_residual:.3e} orthonormality={diag.max_orthonormality_defect:.3e}")
    failing = [r for r in records if not r.passed]
    for r in failing:
        print(f"  failed: {r.inequality_id} k={r.k} lhs={r.lhs!r} rhs={r.rhs!r} slack={r.slack!r}")
    print(summary_line(records))
    return EXIT_FAIL if failing or not diag.passed else EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    config = SearchConfig(
        n=args.n,
        region_size=args.size,
        inequality_id=args.ineq,
        k=args.k,
        steps=args.steps,
        seed=args.seed,
        initial_temperature=args.t0,
        decay=args.decay,
    )
    config.validate()
    trace = anneal(config)
    out = Path(args.out)
    _write(out, trace_to_csv(trace))
    outputs = [str(out)]
    if args.best_out:
        _write(Path(args.best_out), dumps_region(trace.best_region, manifest=manifest_path(out).name))
        outputs.append(args.best_out)
    write_manifest(RunManifest("search", vars(config), seeds=[args.seed], outputs=outputs), out)
    print(f"best slack {trace.best_slack!r} after {len(trace)} steps")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    ineqs = [s for s in args.ineq.split(",") if s] if args.ineq else None
    rows = sweep_family(args.family, args.n, args.sizes, ineqs, workers=worker_count())
    out = Path(args.out)
    _write(out, records_to_csv(rows))
    outputs = [str(out)]
    if args.json:
        jpath = out.with_suffix(".json")
        _write(jpath, records_to_json(rows, manifest_path(out).name))
        outputs.append(str(jpath))
    config = {"family": args.family, "n": args.n, "sizes": args.sizes, "ineq": ineqs}
    write_manifest(RunManifest("sweep", config, outputs=outputs), out)
    blocks = len({rid for rid, _ in rows})
    records = [r for _, r in rows]
    print(f"{blocks} report blocks, {len(rows)} records")
    print(summary_line(records))
    return EXIT_OK if all(r.passed for r in records) else EXIT_FAIL


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lattice-spectra", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a region file")
    g.add_argument("--shape", choices=["box", "ball", "random"], required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--dims", type=_int_list)
    g.add_argument("--radius", type=int)
    g.add_argument("--metric", choices=["l1", "linf"], default="l1")
    g.add_argument("--size", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check every inequality on a region")
    v.add_argument("--region", required=True)
    v.add_argument("--out", required=True)
    v.add_argument("--json", action="store_true", help="also write a JSON mirror next to --out")
    v.add_argument("--proof-internals", action="store_true")
    v.add_argument("--proof-kmax", type=int, default=None)
    v.add_argument("--proof-dump", help="diagnostic JSON of a, b, K_g, I_g per (k, alpha)")
    v.add_argument("--spectrum-out")
    v.add_argument("--with-vectors", action="store_true")
    v.add_argument("--matrix-out", help="coordinate-list dump of the operator")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="anneal toward small slack")
    s.add_argument("--ineq", choices=sorted(CHECKERS), required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--t0", type=float, default=None)
    s.add_argument("--decay", type=float, default=0.995)
    s.add_argument("--out", required=True)
    s.add_argument("--best-out")
    s.set_defaults(func=cmd_search)

    w = sub.add_parser("sweep", help="full reports over a family of regions")
    w.add_argument("--family", choices=FAMILIES, required=True)
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--sizes", type=_size_range, required=True)
    w.add_argument("--ineq", default="")
    w.add_argument("--json", action="store_true")
    w.add_argument("--out", required=True)
    w.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
    except (LatticeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
