"""Command-line front end.

Subcommands: analyze, report, curves, cdf, gen, oracle. Exit codes:
0 ok, 2 input error, 3 degenerate input, 4 oracle mismatch. All output is
deterministic for fixed inputs and flags; floats are printed with 17
significant digits.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from math import fsum, sqrt
from typing import Any, Sequence

import numpy as np

from . import gen as generators
from .dist import ValueDistribution, build_distribution, quantile
from .errors import (
    DegenerateDiceError,
    DegenerateMarginalError,
    SegoptError,
)
from .field import MarginalField, ensemble_marginal
from .io import dumps_json, load_field, load_mask, save_field, save_mask
from .metrics import accuracy, dice
from .optimize import (
    DEFAULT_TOLERANCE,
    Metric,
    OptimalResult,
    is_optimal_member,
    maximize_accuracy,
    maximize_dice,
)
from .oracle import brute_force
from .reduced import accuracy_curve, delta, dice_curve

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_MISMATCH = 4


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _metric_doc(res: OptimalResult, l1: float, with_threshold: bool) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "value": res.value,
        "volumes": [res.volumes.lo, res.volumes.hi],
        "bounds": [res.bound_lo, res.bound_hi],
        "volume_ratio_lo": res.volumes.lo / l1 if l1 > 0.0 else None,
        "volume_ratio_hi": res.volumes.hi / l1 if l1 > 0.0 else None,
    }
    if with_threshold:
        doc["threshold"] = res.threshold
    return doc


def _analyze_document(field: MarginalField, tolerance: float) -> tuple[dict, int]:
    d = build_distribution(field)
    l1 = d.l1_mass
    flags: list[str] = []
    acc = maximize_accuracy(d, field, tolerance=tolerance)
    if acc.tie_tolerance_fired:
        flags.append("tie_tolerance_accuracy")
    doc: dict[str, Any] = {"l1_mass": l1, "accuracy": _metric_doc(acc, l1, False)}
    code = EXIT_OK
    try:
        dres = maximize_dice(d, field, tolerance=tolerance)
    except DegenerateMarginalError:
        doc["dice"] = None
        doc["ordering_holds"] = None
        flags.append("degenerate_marginal")
        code = EXIT_DEGENERATE
    else:
        if dres.tie_tolerance_fired:
            flags.append("tie_tolerance_dice")
        doc["dice"] = _metric_doc(dres, l1, True)
        doc["ordering_holds"] = acc.volumes.hi <= dres.volumes.lo + 1e-12
        if not (acc.within_bounds and dres.within_bounds):
            flags.append("bounds_violation")
    doc["flags"] = flags
    return doc, code


def _load_input(args: argparse.Namespace) -> MarginalField:
    if args.masks:
        return ensemble_marginal([load_mask(p) for p in args.masks])
    if not args.input:
        raise SegoptError("provide an input file or --masks")
    return load_field(args.input)


def cmd_analyze(args: argparse.Namespace) -> int:
    field = _load_input(args)
    doc, code = _analyze_document(field, args.tolerance)
    _emit(dumps_json(doc) + "\n", args.out)
    return code


def _case_ratios(path: str, tolerance: float, lower: bool):
    """(group, ratio_acc, ratio_dice) for one case file, or an error note."""
    field = load_field(path)
    group = "all"
    if field.meta and isinstance(field.meta, dict):
        group = str(field.meta.get("group", "all"))
    d = build_distribution(field)
    if d.l1_mass == 0.0:
        raise DegenerateMarginalError("zero-mass case")
    acc = maximize_accuracy(d, tolerance=tolerance)
    dres = maximize_dice(d, tolerance=tolerance)
    pick = (lambda r: r.volumes.lo) if lower else (lambda r: r.volumes.hi)
    return group, pick(acc) / d.l1_mass, pick(dres) / d.l1_mass


def _population_std(xs: Sequence[float], mean: float) -> float:
    return sqrt(fsum((x - mean) ** 2 for x in xs) / len(xs))


def cmd_report(args: argparse.Namespace) -> int:
    paths = sorted(
        os.path.join(args.directory, name)
        for name in os.listdir(args.directory)
        if name.endswith(".json")
    )
    if not paths:
        sys.stderr.write(f"no case files in {args.directory}\n")
        return EXIT_INPUT

    def one(path: str):
        try:
            return _case_ratios(path, args.tolerance, args.lower)
        except (SegoptError, OSError, ValueError) as exc:
            return ("__error__", path, str(exc))

    with ThreadPoolExecutor(max_workers=min(8, len(paths))) as pool:
        results = list(pool.map(one, paths))

    groups: dict[str, list[tuple[float, float]]] = {}
    failures: list[tuple[str, str]] = []
    for item in results:
        if item[0] == "__error__":
            failures.append((item[1], item[2]))
        else:
            groups.setdefault(item[0], []).append((item[1], item[2]))
    for path, msg in failures:
        sys.stderr.write(f"warning: skipped {path}: {msg}\n")
    if not groups:
        sys.stderr.write("all case files failed\n")
        return EXIT_INPUT

    header = [
        "group", "n",
        "acc_ratio_mean", "acc_ratio_std", "acc_ratio_min", "acc_ratio_max",
        "dice_ratio_mean", "dice_ratio_std", "dice_ratio_min", "dice_ratio_max",
    ]
    rows: list[list[str]] = []
    for group in sorted(groups):
        ra = [a for a, _ in groups[group]]
        rd = [b for _, b in groups[group]]
        stats: list[float] = []
        for xs in (ra, rd):
            mean = fsum(xs) / len(xs)
            stats += [mean, _population_std(xs, mean), min(xs), max(xs)]
        rows.append([group, str(len(ra))] + [_fmt(x) for x in stats])

    if args.out:
        csv_text = ",".join(header) + "\n" + "".join(",".join(r) + "\n" for r in rows)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def _curve_rows(d: ValueDistribution, samples: int) -> list[str]:
    vs = np.union1d(d.cum, np.linspace(0.0, 1.0, samples))
    rows = ["v,quantile,accuracy,dice,delta"]
    for v in vs:
        v = float(v)
        try:
            dv = _fmt(dice_curve(d, v))
        except DegenerateDiceError:
            dv = ""
        dl = _fmt(delta(d, v)) if v > 0.0 else ""
        rows.append(
            f"{_fmt(v)},{_fmt(quantile(d, v))},{_fmt(accuracy_curve(d, v))},{dv},{dl}"
        )
    return rows


def cmd_curves(args: argparse.Namespace) -> int:
    field = load_field(args.input)
    d = build_distribution(field)
    _emit("\n".join(_curve_rows(d, args.samples)) + "\n", args.out)
    return EXIT_OK


def cmd_cdf(args: argparse.Namespace) -> int:
    field = load_field(args.input)
    d = build_distribution(field)
    rows = ["kind,x,y"]
    for t, c in zip(d.levels, d.cum):
        rows.append(f"cdf,{_fmt(t)},{_fmt(c)}")
    for c, t in zip(d.cum, d.levels):
        rows.append(f"quantile,{_fmt(c)},{_fmt(t)}")
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    case = args.case
    if case == "acc-lower":
        field = generators.gen_acc_lower(args.v, args.cells)
    elif case == "acc-upper":
        field = generators.gen_acc_upper(args.v, args.cells)
    elif case == "dice-sharp":
        field = generators.gen_dice_sharp(args.vp, args.cells)
    elif case == "fig3":
        field = generators.gen_fig3(args.cells if args.cells else 10)
    elif case == "fig4":
        field = generators.gen_fig4(args.cells if args.cells else 25)
    elif case == "ensemble":
        masks = generators.gen_ensemble(
            args.seed, args.cells, args.axes, args.annotators, args.jitter
        )
        if args.masks_dir:
            os.makedirs(args.masks_dir, exist_ok=True)
            for i, m in enumerate(masks):
                save_mask(m, os.path.join(args.masks_dir, f"mask_{i:03d}.smk.json"))
        field = ensemble_marginal(masks)
        meta = {
            "case": "ensemble",
            "seed": args.seed,
            "cells": args.cells,
            "axes": args.axes,
            "annotators": args.annotators,
            "jitter": args.jitter,
        }
        if args.group:
            meta["group"] = args.group
        field = MarginalField(field.shape, field.values, meta=meta)
    else:  # pragma: no cover - argparse restricts choices
        raise SegoptError(f"unknown case {case!r}")
    if args.group and case != "ensemble":
        meta = dict(field.meta or {})
        meta["group"] = args.group
        field = MarginalField(field.shape, field.values, meta=meta)
    save_field(field, args.out)
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    field = load_field(args.input)
    d = build_distribution(field)
    rows = [("metric", "analytic", "brute_force", "vol_lo", "vol_hi", "ok")]
    ok_all = True
    for metric, solver in ((Metric.ACCURACY, maximize_accuracy), (Metric.DICE, maximize_dice)):
        try:
            res = solver(d, field, tolerance=args.tolerance)
            ref = brute_force(field, metric)
        except DegenerateMarginalError:
            rows.append((metric.value, "degenerate", "degenerate", "", "", "skip"))
            continue
        ok = abs(res.value - ref.best_value) <= 1e-12
        ok &= all(res.volumes.contains(v, slack=1e-12) for v in ref.optimal_volumes)
        ok &= all(is_optimal_member(mk, field, res) for mk in ref.optimal_masks)
        metric_fn = accuracy if metric is Metric.ACCURACY else dice
        ok &= abs(metric_fn(res.s_upper, field) - ref.best_value) <= 1e-12
        ok_all &= ok
        rows.append(
            (
                metric.value,
                _fmt(res.value),
                _fmt(ref.best_value),
                _fmt(res.volumes.lo),
                _fmt(res.volumes.hi),
                "ok" if ok else "MISMATCH",
            )
        )
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        sys.stdout.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")
    return EXIT_OK if ok_all else EXIT_MISMATCH


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="segopt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", default=None, help="write output here instead of stdout")
        p.add_argument(
            "--tolerance",
            type=float,
            default=DEFAULT_TOLERANCE,
            help="level-match tolerance for optimizer threshold queries",
        )

    p = sub.add_parser("analyze", help="optimal values, volumes, bounds as JSON")
    p.add_argument("input", nargs="?", help=".smf.json/.smk.json/raw sidecar")
    p.add_argument("--masks", nargs="+", default=None, help="mask files to average first")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("report", help="aggregate volume-ratio table over case files")
    p.add_argument("directory")
    p.add_argument("--lower", action="store_true", help="use strict-threshold volumes")
    common(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("curves", help="CSV of quantile/accuracy/dice/delta curves")
    p.add_argument("input")
    p.add_argument("--samples", type=int, default=512)
    common(p)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("cdf", help="CSV of CDF and quantile breakpoints")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_cdf)

    p = sub.add_parser("gen", help="write a synthetic fixture")
    p.add_argument(
        "case", choices=["acc-lower", "acc-upper", "dice-sharp", "fig3", "fig4", "ensemble"]
    )
    p.add_argument("--v", type=float, default=0.4, help="target mass for acc cases")
    p.add_argument("--vp", type=float, default=0.4, help="target mass for dice-sharp")
    p.add_argument("--cells", type=int, default=0, help="grid cells (per axis for ensemble)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--axes", type=int, default=1, choices=[1, 2])
    p.add_argument("--annotators", type=int, default=5)
    p.add_argument("--jitter", type=float, default=0.0)
    p.add_argument("--group", default=None, help="group tag stored in meta")
    p.add_argument("--masks-dir", default=None, help="also dump individual ensemble masks")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="compare analytic optima against brute force")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if getattr(args, "cells", None) == 0 and args.command == "gen":
        if args.case in ("acc-lower", "acc-upper"):
            args.cells = 400
        elif args.case == "dice-sharp":
            args.cells = 400
        elif args.case == "ensemble":
            args.cells = 64
    try:
        return args.func(args)
    except DegenerateMarginalError as exc:
        sys.stderr.write(f"degenerate input: {exc}\n")
        return EXIT_DEGENERATE
    except (SegoptError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
