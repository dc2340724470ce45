"""Command-line front end.

Subcommands: simulate, fit, fit-table, reproduce, ann-sweep, ann-train,
ann-predict.  Every command is deterministic under --seed, writes CSV (or the
JSON model format) plus a `<output>.manifest.json` sidecar, and uses exit
codes 0 (success), 1 (tolerance failure under --check), 2 (usage error),
3 (numerical breakdown).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import __version__
from .fosystems import (
    ExcitationKind,
    FractionalSystem,
    HorizonError,
    SystemClass,
    TimeGrid,
    fo_response,
)
from .gafit import FitResult, GAConfig, UnreliableSeriesError, fit_system, fit_table, write_fit_csv
from .neuralpredictor import (
    Dataset,
    NetworkSpec,
    TrainingFailure,
    load_model,
    predict_table,
    save_model,
    sweep,
    train_best_of,
)
from .refmodel import FitCriterion
from .reference import (
    CANONICAL_ALPHAS,
    GA_RESULTS,
    PREDICTOR_RESULTS,
    TABLE_CLASSES,
    itse_dataset,
)
from .specfun import DomainError

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_USAGE = 2
EXIT_BREAKDOWN = 3

# reproduction tolerances
TAU_XI_TOL = 0.05
JMIN_REL_TOL = 0.25

_BEST_SPEC = NetworkSpec(1, 5, ("logsig",))

_CLASS_BY_NAME = {c.value: c for c in SystemClass}
_CRITERION_BY_NAME = {c.value: c for c in FitCriterion}


def parse_grid(text: str) -> list[float]:
    """`start:stop:step` (inclusive, snapped to 1e-9), a comma list, or one value."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"bad grid {text!r}: need step > 0 and stop >= start")
        n = int(math.floor((stop - start) / step + 1e-9))
        return [round(start + i * step, 9) for i in range(n + 1)]
    return [round(float(p), 9) for p in text.split(",")]


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _write_manifest(command: str, params: dict, seed: Optional[int],
                    outputs: Sequence[Path], started: float) -> None:
    primary = Path(outputs[0])
    doc = {
        "command": command,
        "parameters": params,
        "seed": seed,
        "version": __version__,
        "outputs": [str(p) for p in outputs],
        "duration_s": round(time.time() - started, 3),
    }
    path = primary.parent / (primary.name + ".manifest.json")
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def _load_dataset(args: argparse.Namespace) -> Dataset:
    if args.dataset_csv:
        rows = []
        with open(args.dataset_csv) as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"alpha", "tau", "xi"} <= set(reader.fieldnames):
                raise ValueError(f"{args.dataset_csv}: need columns alpha,tau,xi")
            for rec in reader:
                rows.append((float(rec["alpha"]), float(rec["tau"]), float(rec["xi"])))
        return Dataset.from_rows(rows, provenance=str(args.dataset_csv))
    return itse_dataset(_CLASS_BY_NAME[args.dataset])


# ---------------------------------------------------------------------------
# command handlers


def cmd_simulate(args: argparse.Namespace) -> int:
    started = time.time()
    system = FractionalSystem(_CLASS_BY_NAME[args.klass], args.alpha)
    grid = TimeGrid(dt=args.dt, t_max=args.t_max)
    series = fo_response(system, ExcitationKind(args.input), grid,
                         allow_beyond_horizon=args.allow_beyond_horizon)
    out = Path(args.out or f"response_{args.klass}_{args.alpha:g}_{args.input}.csv")
    with open(out, "w") as fh:
        series.write_csv(fh)
    _write_manifest("simulate", _params(args), None, [out], started)
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    started = time.time()
    system = FractionalSystem(_CLASS_BY_NAME[args.klass], args.alpha)
    result = fit_system(system, _CRITERION_BY_NAME[args.criterion], GAConfig(seed=args.seed))
    out = Path(args.out or f"fit_{args.klass}_{args.alpha:g}_{args.criterion}.csv")
    with open(out, "w") as fh:
        write_fit_csv([result], fh)
    _write_manifest("fit", _params(args), args.seed, [out], started)
    return EXIT_OK


def cmd_fit_table(args: argparse.Namespace) -> int:
    started = time.time()
    alphas = parse_grid(args.alphas)
    results = fit_table(_CLASS_BY_NAME[args.klass], _CRITERION_BY_NAME[args.criterion],
                        alphas, GAConfig(seed=args.seed))
    out = Path(args.out or f"fit_table_{args.klass}_{args.criterion}.csv")
    with open(out, "w") as fh:
        write_fit_csv(results, fh)
    _write_manifest("fit-table", _params(args), args.seed, [out], started)
    return EXIT_OK


def _reproduce_fit_rows(klass: SystemClass, seed: int) -> tuple[list[str], bool]:
    lines = ["alpha,criterion,jmin,tau,xi,ref_jmin,ref_tau,ref_xi,"
             "dev_tau,dev_xi,rel_dev_jmin,within_tol"]
    all_ok = True
    for criterion in (FitCriterion.ISE, FitCriterion.ITSE):
        refs = GA_RESULTS[(klass, criterion)]
        results = {round(r.alpha, 9): r for r in
                   fit_table(klass, criterion, [r.alpha for r in refs], GAConfig(seed=seed))}
        for ref in refs:
            res = results.get(round(ref.alpha, 9))
            if res is None:
                all_ok = False
                lines.append(f"{_fmt(ref.alpha)},{criterion.value},nan,nan,nan,"
                             f"{_fmt(ref.j_min)},{_fmt(ref.tau)},{_fmt(ref.xi)},nan,nan,nan,0")
                continue
            dev_tau = abs(res.tau - ref.tau)
            dev_xi = abs(res.xi - ref.xi)
            rel_j = abs(res.j_min - ref.j_min) / ref.j_min
            ok = dev_tau <= TAU_XI_TOL and dev_xi <= TAU_XI_TOL and rel_j <= JMIN_REL_TOL
            all_ok = all_ok and ok
            lines.append(
                f"{_fmt(ref.alpha)},{criterion.value},{_fmt(res.j_min)},{_fmt(res.tau)},"
                f"{_fmt(res.xi)},{_fmt(ref.j_min)},{_fmt(ref.tau)},{_fmt(ref.xi)},"
                f"{_fmt(dev_tau)},{_fmt(dev_xi)},{_fmt(rel_j)},{int(ok)}"
            )
    return lines, all_ok


def _reproduce_prediction_rows(seed: int) -> tuple[list[str], bool]:
    # The checked tolerance is against the GA ITSE targets the model is trained
    # on; the reference predictions are reported alongside but are themselves
    # up to ~0.07 from their own targets, so they are informational only.
    lines = ["class,alpha,tau,xi,target_tau,target_xi,dev_tau,dev_xi,"
             "ref_tau,ref_xi,ref_dev_tau,ref_dev_xi,within_tol"]
    all_ok = True
    for i, klass in enumerate(TABLE_CLASSES.values()):
        data = itse_dataset(klass)
        report = train_best_of(_BEST_SPEC, data, runs=25, seed=seed + 1000 * i)
        if report.best_weights is None:
            raise TrainingFailure(f"all 25 runs failed for {klass.value}")
        preds = predict_table(report.best_weights, CANONICAL_ALPHAS)
        targets = {round(a, 9): (t, x) for a, t, x in zip(data.alphas, data.taus, data.xis)}
        for (alpha, tau, xi), (ref_a, ref_tau, ref_xi) in zip(preds, PREDICTOR_RESULTS[klass]):
            assert round(alpha, 9) == round(ref_a, 9)
            tgt_tau, tgt_xi = targets[round(alpha, 9)]
            dev_tau = abs(tau - tgt_tau)
            dev_xi = abs(xi - tgt_xi)
            ok = dev_tau <= TAU_XI_TOL and dev_xi <= TAU_XI_TOL
            all_ok = all_ok and ok
            lines.append(
                f"{klass.value},{_fmt(alpha)},{_fmt(tau)},{_fmt(xi)},"
                f"{_fmt(tgt_tau)},{_fmt(tgt_xi)},{_fmt(dev_tau)},{_fmt(dev_xi)},"
                f"{_fmt(ref_tau)},{_fmt(ref_xi)},{_fmt(abs(tau - ref_tau))},"
                f"{_fmt(abs(xi - ref_xi))},{int(ok)}"
            )
    return lines, all_ok


def cmd_reproduce(args: argparse.Namespace) -> int:
    started = time.time()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.table in TABLE_CLASSES:
        lines, all_ok = _reproduce_fit_rows(TABLE_CLASSES[args.table], args.seed)
    else:  # table 7
        lines, all_ok = _reproduce_prediction_rows(args.seed)
    out = out_dir / f"table{args.table}.csv"
    out.write_text("\n".join(lines) + "\n")
    _write_manifest("reproduce", _params(args), args.seed, [out], started)
    if args.check and not all_ok:
        print(f"reproduce --table {args.table}: tolerances exceeded, see {out}",
              file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_ann_sweep(args: argparse.Namespace) -> int:
    started = time.time()
    data = _load_dataset(args)
    reports = sweep(data, runs=args.runs, seed=args.seed, max_epochs=args.max_epochs)
    out = Path(args.out or "ann_sweep.csv")
    with open(out, "w") as fh:
        fh.write("layers,neurons,act1,act2,avg_mse,min_mse,std_mse,failed_runs\n")
        for rep in reports:
            s = rep.spec
            act2 = s.activations[1] if s.hidden_layers == 2 else ""
            fh.write(f"{s.hidden_layers},{s.neurons_per_layer},{s.activations[0]},{act2},"
                     f"{_fmt(rep.avg_mse)},{_fmt(rep.min_mse)},{_fmt(rep.std_mse)},"
                     f"{rep.failed_runs}\n")
    _write_manifest("ann-sweep", _params(args), args.seed, [out], started)
    return EXIT_OK


def cmd_ann_train(args: argparse.Namespace) -> int:
    started = time.time()
    data = _load_dataset(args)
    spec = NetworkSpec(args.layers, args.neurons, tuple(args.activations.split(",")))
    report = train_best_of(spec, data, runs=args.runs, seed=args.seed,
                           max_epochs=args.max_epochs)
    if report.best_weights is None:
        raise TrainingFailure("all training runs failed")
    out = Path(args.out or "model.json")
    save_model(report.best_weights, str(out))
    print(f"best of {args.runs} runs: mse={report.min_mse:.6g} "
          f"(avg {report.avg_mse:.6g}, {report.failed_runs} failed)")
    _write_manifest("ann-train", _params(args), args.seed, [out], started)
    return EXIT_OK


def cmd_ann_predict(args: argparse.Namespace) -> int:
    started = time.time()
    model = load_model(args.model)
    alphas = parse_grid(args.alphas)
    rows = predict_table(model, alphas)
    out = Path(args.out or "predictions.csv")
    with open(out, "w") as fh:
        fh.write("alpha,tau,xi\n")
        for alpha, tau, xi in rows:
            fh.write(f"{_fmt(alpha)},{_fmt(tau)},{_fmt(xi)}\n")
    _write_manifest("ann-predict", _params(args), None, [out], started)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _params(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--dataset", choices=sorted(_CLASS_BY_NAME),
                   default="pseudo", help="bundled ITSE reference dataset")
    g.add_argument("--dataset-csv", help="CSV with columns alpha,tau,xi")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fodamp",
        description="Fractional-order pseudo/meta-damping toolkit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write a step/impulse response CSV")
    p.add_argument("--class", dest="klass", choices=sorted(_CLASS_BY_NAME), required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--input", choices=["step", "impulse"], default="step")
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--t-max", type=float, default=25.0)
    p.add_argument("--allow-beyond-horizon", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="GA-fit (tau, xi) for one system")
    p.add_argument("--class", dest="klass", choices=sorted(_CLASS_BY_NAME), required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--criterion", choices=sorted(_CRITERION_BY_NAME), default="ise")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("fit-table", help="GA-fit a whole alpha grid")
    p.add_argument("--class", dest="klass", choices=sorted(_CLASS_BY_NAME), required=True)
    p.add_argument("--criterion", choices=sorted(_CRITERION_BY_NAME), default="ise")
    p.add_argument("--alphas", default="1.1:1.9:0.1")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit_table)

    p = sub.add_parser("reproduce", help="regenerate a reference table and compare")
    p.add_argument("--table", type=int, required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--check", action="store_true",
                   help="exit 1 if any row misses its tolerance")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("ann-sweep", help="25-run consistency sweep over 30 architectures")
    _add_dataset_args(p)
    p.add_argument("--runs", type=int, default=25)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-epochs", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ann_sweep)

    p = sub.add_parser("ann-train", help="train a predictor, keep the best run")
    _add_dataset_args(p)
    p.add_argument("--layers", type=int, choices=[1, 2], default=1)
    p.add_argument("--neurons", type=int, choices=[5, 10, 15, 20, 25], default=5)
    p.add_argument("--activations", default="logsig",
                   help="comma-separated, one per hidden layer")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-epochs", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ann_train)

    p = sub.add_parser("ann-predict", help="evaluate a saved model on an alpha grid")
    p.add_argument("--model", required=True)
    p.add_argument("--alphas", default="1.1:1.9:0.1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ann_predict)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "reproduce" and args.table not in (1, 2, 3, 7):
            if args.table in (4, 5, 6):
                parser.error("tables 4-6 are consistency sweeps whose absolute MSEs are "
                             "initialization-dependent; run `ann-sweep` for the trend checks")
            parser.error(f"unknown table {args.table}; choose from 1, 2, 3, 7")
    except SystemExit as exc:  # argparse reports usage errors via exit
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (HorizonError, UnreliableSeriesError, TrainingFailure) as exc:
        print(f"error (numerical breakdown): {exc}", file=sys.stderr)
        return EXIT_BREAKDOWN
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
