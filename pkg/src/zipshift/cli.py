"""Command line interface: ``zipshift entropy|folding|verify|baker``.

Every command prints one JSON report on stdout; diagnostics go to stderr.
Exit status: 0 all checks pass, 1 some check failed, 2 usage or input error,
3 a check was skipped for budget reasons (and none failed).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Sequence

from . import baker as bk
from .folding import (
    disintegration_check,
    fiber_entropy,
    folding_entropy,
    quotient_measure_check,
)
from .partition import (
    DEFAULT_BUDGET,
    PreconditionError,
    cylinder_partition,
    ks_entropy,
    partition_entropy,
    verify_correfinement_lemma,
)
from .spec import BudgetExceeded, ZipShiftError, ZipShiftSpec
from .specfile import load_spec
from .symbolic import measure_preservation_check
from .verdict import FAIL, PASS, SKIPPED, Verdict

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SKIPPED = 0, 1, 2, 3


def _rational(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def _round(obj):
    """Floats to 12 significant digits, recursively."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite value in report: {obj!r}")
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _header(command: str, spec: ZipShiftSpec, units: str) -> dict:
    m = spec.measures
    return {
        "command": command,
        "label": spec.label,
        "units": units,
        "p_minus": {t.name: _rational(m.p_minus[t]) for t in spec.s_minus},
        "q": {t.name: {s.name: _rational(w) for s, w in m.q[t].items()} for t in spec.s_minus},
    }


def _scale(units: str) -> float:
    return 1.0 / math.log(2) if units == "bits" else 1.0


def _basic_entropies(spec: ZipShiftSpec) -> tuple[float, float]:
    return (
        partition_entropy(spec, cylinder_partition(spec, 0)),
        partition_entropy(spec, cylinder_partition(spec, -1)),
    )


def cmd_entropy(spec: ZipShiftSpec, units: str = "nats", budget: int = DEFAULT_BUDGET) -> dict:
    c = _scale(units)
    h0, h1 = _basic_entropies(spec)
    ks = ks_entropy(spec, budget=budget)
    report = _header("entropy", spec, units)
    report.update(
        H_C0=h0 * c,
        H_C_minus1=h1 * c,
        ks_entropy=ks.value * c,
        convergence=[
            dict(row.to_dict(), h_nk=row.h * c, closed_form=row.closed_form * c, error_bound=row.error_bound * c)
            for row in ks.table
        ],
    )
    return report


def cmd_folding(spec: ZipShiftSpec, units: str = "nats") -> dict:
    c = _scale(units)
    h0, h1 = _basic_entropies(spec)
    f = folding_entropy(spec)
    report = _header("folding", spec, units)
    report.update(
        H_C0=h0 * c,
        H_C_minus1=h1 * c,
        ks_entropy=h0 * c,
        fiber_entropies={t.name: fiber_entropy(spec, t) * c for t in spec.s_minus},
        folding_entropy={
            "fiber_sum": f.fiber_sum * c,
            "difference": f.difference * c,
            "residual": f.residual * c,
        },
        identity={
            "ks_entropy": h0 * c,
            "folding_plus_H_C_minus1": (f.fiber_sum + h1) * c,
            "residual": abs(h0 - (f.fiber_sum + h1)) * c,
        },
    )
    return report


def cmd_verify(spec: ZipShiftSpec, n: int = 1, k: int = 2, depth: int = 3, budget: int = DEFAULT_BUDGET) -> dict:
    """Run the four checks.  Raises PreconditionError when k < 2n."""
    verdicts: list[Verdict] = []
    try:
        verdicts.append(verify_correfinement_lemma(spec, n, k, budget))
    except BudgetExceeded as e:
        verdicts.append(Verdict(f"correfinement_lemma(n={n},k={k})", SKIPPED, detail=str(e)))
    verdicts.append(measure_preservation_check(spec, depth))
    verdicts.append(quotient_measure_check(spec, depth))
    verdicts.append(disintegration_check(spec, depth))
    statuses = {v.status for v in verdicts}
    overall = FAIL if FAIL in statuses else SKIPPED if SKIPPED in statuses else PASS
    report = _header("verify", spec, "nats")
    report.update(
        parameters={"n": n, "k": k, "depth": depth, "budget": budget},
        verdicts=[v.to_dict() for v in verdicts],
        overall=overall,
    )
    return report


def _parse_point(text: str) -> bk.Point:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}") from None
    try:
        return bk.Point(x, y)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def cmd_baker(
    spec: ZipShiftSpec,
    action: str,
    samples: int = 100_000,
    block: int = 4,
    seed: int = 42,
    point: bk.Point | None = None,
    back: int = 2,
    fwd: int = 3,
    units: str = "nats",
    workers: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> dict:
    b = bk.BakerSystem(spec)
    c = _scale(units)
    report = _header(f"baker {action}", spec, units)
    if action == "simulate":
        h0, h1 = _basic_entropies(spec)
        block_est = bk.empirical_block_entropy(b, samples, block, seed, workers, budget)
        fold_est = bk.empirical_folding_entropy(b, samples, seed, workers)
        report.update(
            parameters={"samples": samples, "block": block, "seed": seed},
            block_entropy={
                "estimate": block_est.value * c,
                "stderr": block_est.stderr * c,
                "target": h0 * c,
                "error": abs(block_est.value - h0) * c,
            },
            folding_entropy={
                "estimate": fold_est.value * c,
                "stderr": fold_est.stderr * c,
                "target": (h0 - h1) * c,
                "error": abs(fold_est.value - (h0 - h1)) * c,
            },
        )
    elif action == "preimages":
        if point is None:
            raise PreconditionError("preimages needs --point x,y")
        pre = bk.baker_preimages(b, point)
        report.update(
            point=[point.x, point.y],
            band=spec.s_minus[int(b.band_of(point.y))].name,
            preimages=[
                {"strip": spec.s_plus[int(b.strip_of(p.x))].name, "point": [p.x, p.y]} for p in pre
            ],
        )
    elif action == "encode":
        if point is None:
            raise PreconditionError("encode needs --point x,y")
        word = bk.encode(b, point, back, fwd)
        report.update(point=[point.x, point.y], window=[-back, fwd], word=[s.name for s in word])
    else:
        raise PreconditionError(f"unknown baker action {action!r}")
    return report


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="zipshift", description=__doc__.splitlines()[0], formatter_class=fmt)
    sub = parser.add_subparsers(dest="command", required=True)

    def units(p):
        p.add_argument("--units", choices=["nats", "bits"], default="nats", help="entropy units")

    p = sub.add_parser("entropy", help="metric entropy and its finite approximants", formatter_class=fmt)
    p.add_argument("spec", help="spec JSON file")
    units(p)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max words enumerated per approximant")

    p = sub.add_parser("folding", help="folding entropy by both formulas", formatter_class=fmt)
    p.add_argument("spec", help="spec JSON file")
    units(p)

    p = sub.add_parser("verify", help="brute-force partition and measure checks", formatter_class=fmt)
    p.add_argument("spec", help="spec JSON file")
    p.add_argument("--n", type=int, default=1, help="half-width of the base cylinder partition")
    p.add_argument("--k", type=int, default=2, help="number of dynamical refinements (k >= 2n)")
    p.add_argument("--depth", type=int, default=3, help="index range for the measure identities")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max words to enumerate")

    p = sub.add_parser("baker", help="geometric baker map realization", formatter_class=fmt)
    p.add_argument("action", choices=["simulate", "preimages", "encode"])
    p.add_argument("spec", help="spec JSON file")
    p.add_argument("--samples", type=int, default=100_000, help="Monte-Carlo sample count")
    p.add_argument("--block", type=int, default=4, help="word length for the block entropy")
    p.add_argument("--seed", type=int, default=42, help="PRNG seed")
    p.add_argument("--point", type=_parse_point, help="point 'x,y' in [0,1)^2")
    p.add_argument("--back", type=int, default=2, help="backward symbols to encode")
    p.add_argument("--fwd", type=int, default=3, help="forward symbols to encode")
    p.add_argument("--workers", type=int, default=1, help="sampling threads (result does not depend on it)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max distinct block words")
    units(p)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        spec = load_spec(args.spec)
        if args.command == "entropy":
            report = cmd_entropy(spec, args.units, args.budget)
        elif args.command == "folding":
            report = cmd_folding(spec, args.units)
        elif args.command == "verify":
            report = cmd_verify(spec, args.n, args.k, args.depth, args.budget)
        else:
            report = cmd_baker(
                spec, args.action, args.samples, args.block, args.seed, args.point,
                args.back, args.fwd, args.units, args.workers, args.budget,
            )
    except BudgetExceeded as e:
        print(f"zipshift: skipped: {e}", file=sys.stderr)
        return EXIT_SKIPPED
    except bk.BoundaryPoint as e:
        print(f"zipshift: {type(e).__name__}: {e} (coordinate {e.coordinate}, depth {e.depth})", file=sys.stderr)
        return EXIT_USAGE
    except (ZipShiftError, ValueError) as e:
        print(f"zipshift: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(json.dumps(_round(report), indent=2) + "\n")
    status = report.get("overall", PASS)
    return {PASS: EXIT_OK, FAIL: EXIT_FAIL, SKIPPED: EXIT_SKIPPED}[status]


if __name__ == "__main__":
    sys.exit(main())
