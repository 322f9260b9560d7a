"""Command line entry point: ``egdss <command> ...``."""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import re
import sys
from dataclasses import asdict

import numpy as np

from . import __version__, datasets, published
from ._validation import ValidationError, check_rate
from .gof import goodness_of_fit
from .inference import ConvergenceError, estimate_r, fit_mle
from .reliability import QuadratureError, r_closed_form, r_numeric_oracle
from .simulation import CSV_HEADER, SimulationSpec, run_table

EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CONVERGENCE = 4
EXIT_QUADRATURE = 5


class DataError(ValueError):
    """Input file could not be parsed into positive observations."""


_SPLIT = re.compile(r"[,\s]+")


def parse_numbers(text: str, source: str = "<input>") -> np.ndarray:
    """Numbers separated by commas and/or whitespace; ``#`` starts a comment."""
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for token in _SPLIT.split(line.strip()):
            if not token:
                continue
            try:
                v = float(token)
            except ValueError:
                raise DataError(f"{source}:{lineno}: cannot parse {token!r} as a number") from None
            if not math.isfinite(v) or v <= 0.0:
                raise DataError(f"{source}:{lineno}: value {token!r} must be positive and finite")
            values.append(v)
    if not values:
        raise DataError(f"{source}: no observations found")
    return np.array(values)


def load_data(ref: str) -> np.ndarray:
    """An existing file path, else the name of an embedded dataset."""
    if os.path.exists(ref):
        with open(ref, encoding="utf-8") as fh:
            return parse_numbers(fh.read(), ref)
    if ref in datasets.DATASETS:
        return datasets.load(ref)
    raise DataError(
        f"{ref}: no such file or embedded dataset (embedded: {', '.join(sorted(datasets.DATASETS))})"
    )


def digest(values: np.ndarray) -> str:
    return "sha256:" + hashlib.sha256(np.ascontiguousarray(values, dtype="<f8").tobytes()).hexdigest()


def render_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _text_block(pairs) -> str:
    width = max(len(k) for k, _ in pairs)
    return "".join(f"{k:<{width}}  {_fmt(v)}\n" for k, v in pairs)


def envelope(args, result, digests=None, seed=None) -> dict:
    out = {
        "command": args.command,
        "argv": list(args.argv),
        "input_digest": digests,
        "result": result,
        "version": __version__,
    }
    if seed is not None:
        out["seed"] = seed
    return out


def _sizes(text: str):
    sizes = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        n, _, m = tok.partition(":")
        try:
            sizes.append((int(n), int(m or n)))
        except ValueError:
            raise ValidationError(f"bad size {tok!r}; use N or N:M") from None
    return sizes


# ---------------------------------------------------------------- commands


def cmd_fit(args):
    x = load_data(args.data)
    res = fit_mle(x, label=args.data)
    payload = asdict(res)
    if args.out == "json":
        return render_json(envelope(args, payload, {"data": digest(x)}))
    return _text_block(
        [("data", args.data), ("n", res.n), ("lambda_hat", res.lam_hat), ("std_err", res.std_err),
         ("loglik", res.loglik), ("score", res.score_at_mle), ("observed_info", res.observed_info),
         ("iterations", res.iterations), ("converged", res.converged)]
    )


def cmd_reliability(args):
    lam1 = check_rate(args.lambda1, "lambda1")
    lam2 = check_rate(args.lambda2, "lambda2")
    closed = r_closed_form(lam1, lam2)
    oracle = r_numeric_oracle(lam1, lam2)
    payload = {"lambda1": lam1, "lambda2": lam2, "r_closed_form": closed,
               "r_quadrature": oracle, "abs_difference": abs(closed - oracle)}
    if args.out == "json":
        return render_json(envelope(args, payload))
    return _text_block([("lambda1", lam1), ("lambda2", lam2), ("R (closed form)", closed),
                        ("R (quadrature)", oracle), ("|difference|", f"{abs(closed - oracle):.3e}")])


def cmd_estimate_r(args):
    xs = _load_labeled(args.strength, "strength")
    ys = _load_labeled(args.stress, "stress")
    est = estimate_r(xs, ys, level=args.level)
    payload = {
        "lambda1_hat": est.strength_fit.lam_hat,
        "lambda2_hat": est.stress_fit.lam_hat,
        "r_hat": est.r_hat,
        "avar": est.avar,
        "ci_low": est.ci_low,
        "ci_high": est.ci_high,
        "level": est.level,
    }
    if args.out == "json":
        return render_json(envelope(args, payload, {"strength": digest(xs), "stress": digest(ys)}))
    return _text_block([("lambda1_hat", est.strength_fit.lam_hat), ("lambda2_hat", est.stress_fit.lam_hat),
                        ("R_hat", est.r_hat), ("avar", est.avar),
                        (f"{100 * est.level:g}% CI", f"({est.ci_low:.6g}, {est.ci_high:.6g})")])


def _load_labeled(ref, label):
    try:
        return load_data(ref)
    except DataError as exc:
        raise DataError(f"{label}: {exc}") from None


def cmd_gof(args):
    x = load_data(args.data)
    fit = fit_mle(x, label=args.data)
    g = goodness_of_fit(x, fit.lam_hat, ks_method=args.ks_method)
    payload = {"lambda_hat": fit.lam_hat, **asdict(g)}
    if args.out == "json":
        return render_json(envelope(args, payload, {"data": digest(x)}))
    return _text_block([("data", args.data), ("lambda_hat", fit.lam_hat), ("KS", g.ks_stat), ("KS p-value", g.ks_p),
                        ("CvM", g.cvm_stat), ("CvM p-value", g.cvm_p), ("n", g.n)])


def _table_text(table) -> str:
    lines = [f"lambda1={table.spec.lam1:g} lambda2={table.spec.lam2:g} true R={table.r_true:.4f} "
             f"replications={table.spec.replications} seed={table.spec.master_seed}"]
    lines.append(f"{'(n,m)':<10}{'mean_l1':>11}{'bias_l1':>11}{'mse_l1':>11}{'mean_l2':>11}{'bias_l2':>11}"
                 f"{'mse_l2':>11}{'ci_low':>11}{'ci_high':>11}{'fail':>6}")
    for r in table.rows:
        flag = "  UNRELIABLE" if r.unreliable else ""
        lines.append(
            f"{f'({r.n},{r.m})':<10}" + "".join(f"{_fmt(v):>11}" for v in (
                r.mean_l1, r.bias_l1, r.mse_l1, r.mean_l2, r.bias_l2, r.mse_l2, r.r_ci_low, r.r_ci_high))
            + f"{r.failures:>6}{flag}"
        )
    return "\n".join(lines) + "\n"


def _table_csv(table) -> str:
    rows = [CSV_HEADER]
    rows += [",".join(repr(v) if isinstance(v, float) else str(v) for v in r.csv_fields()) for r in table.rows]
    return "\n".join(rows) + "\n"


def cmd_simulate(args):
    spec = SimulationSpec(args.lambda1, args.lambda2, _sizes(args.sizes), args.reps, args.level, args.seed)
    table = run_table(spec, threads=args.threads)
    if args.out == "json":
        return render_json(envelope(args, table.to_dict(), seed=spec.master_seed))
    if args.out == "csv":
        return _table_csv(table)
    return _table_text(table)


def _repro_simulation(args):
    ref = published.SIMULATION_TABLES[args.table]
    spec = SimulationSpec(ref["lam1"], ref["lam2"], published.SIZES, args.reps, 0.95, args.seed)
    table = run_table(spec, threads=args.threads)
    names = ("mean_l1", "bias_l1", "mse_l1", "mean_l2", "bias_l2", "mse_l2")
    ses = ("se_mean_l1", "se_mean_l1", "se_mse_l1", "se_mean_l2", "se_mean_l2", "se_mse_l2")
    entries = []
    for row in table.rows:
        printed = ref["rows"][(row.n, row.m)]
        for name, se_name, want in zip(names, ses, printed):
            got, se = getattr(row, name), getattr(row, se_name)
            entries.append({"cell": f"({row.n},{row.m})", "quantity": name, "reproduced": got,
                            "published": want, "abs_difference": abs(got - want),
                            "mc_se": se, "z": (got - want) / se if se > 0 else math.nan})
    extra = {"lam1": spec.lam1, "lam2": spec.lam2, "r_true": spec.r_true, "published_r": published.TRUE_R[(spec.lam1, spec.lam2)]}
    return entries, extra, spec.master_seed


def _repro_gof(args):
    entries = []
    fits = {}
    for name, ref in published.GOF_TABLE.items():
        x = datasets.load(name)
        fit = fit_mle(x, label=name)
        fits[name] = fit
        g = goodness_of_fit(x, fit.lam_hat)
        for key, got in (("lam_hat", fit.lam_hat), ("cvm", g.cvm_stat), ("cvm_p", g.cvm_p),
                         ("ks", g.ks_stat), ("ks_p", g.ks_p)):
            entries.append({"cell": name, "quantity": key, "reproduced": got, "published": ref[key],
                            "abs_difference": abs(got - ref[key])})
    est = estimate_r(datasets.load("jute10"), datasets.load("jute20"), 0.95)
    for key, got in (("r_hat", est.r_hat), ("ci_low", est.ci_low), ("ci_high", est.ci_high)):
        want = published.RELIABILITY[key]
        entries.append({"cell": "jute10 vs jute20", "quantity": key, "reproduced": got, "published": want,
                        "abs_difference": abs(got - want)})
    return entries, {}, None


def cmd_repro(args):
    if args.table == 4:
        entries, extra, seed = _repro_gof(args)
    else:
        entries, extra, seed = _repro_simulation(args)
    if args.out == "json":
        return render_json(envelope(args, {"table": args.table, **extra, "entries": entries}, seed=seed))
    head = f"table {args.table}"
    if extra:
        head += (f": lambda1={extra['lam1']:g} lambda2={extra['lam2']:g} R={extra['r_true']:.4f} "
                 f"(published {extra['published_r']}) seed={seed} replications={args.reps}")
    lines = [head, f"{'cell':<18}{'quantity':<10}{'reproduced':>13}{'published':>13}{'|diff|':>12}{'z':>8}"]
    for e in entries:
        z = f"{e['z']:+8.2f}" if "z" in e else ""
        lines.append(f"{e['cell']:<18}{e['quantity']:<10}{_fmt(e['reproduced']):>13}"
                     f"{_fmt(e['published']):>13}{e['abs_difference']:>12.3g}{z}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- parser


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", choices=("text", "json", "csv"), default=argparse.SUPPRESS,
                        help="output format (csv only for simulate)")
    common.add_argument("--threads", type=_positive_int, default=argparse.SUPPRESS,
                        help="worker processes for simulations")
    common.add_argument("--seed", type=_seed, default=argparse.SUPPRESS, help="master seed for simulations")

    parser = argparse.ArgumentParser(
        prog="egdss", parents=[common],
        description="Stress-strength reliability under the Exponential-Gamma(3, lambda) distribution.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[common], help="maximum-likelihood rate for one sample")
    p.add_argument("--data", required=True, help="file path or embedded dataset (jute10, jute20)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("reliability", parents=[common], help="R = P(X > Y) for given rates")
    p.add_argument("--lambda1", type=float, required=True)
    p.add_argument("--lambda2", type=float, required=True)
    p.set_defaults(func=cmd_reliability)

    p = sub.add_parser("estimate-r", parents=[common], help="MLE of R with a confidence interval")
    p.add_argument("--strength", required=True)
    p.add_argument("--stress", required=True)
    p.add_argument("--level", type=float, default=0.95)
    p.set_defaults(func=cmd_estimate_r)

    p = sub.add_parser("gof", parents=[common], help="KS and CvM tests against the fitted model")
    p.add_argument("--data", required=True)
    p.add_argument("--ks-method", choices=("auto", "exact", "asymptotic"), default="auto")
    p.set_defaults(func=cmd_gof)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo study of the estimators")
    p.add_argument("--lambda1", type=float, required=True)
    p.add_argument("--lambda2", type=float, required=True)
    p.add_argument("--sizes", default="10,15,25,30,50,75", help="comma list of N or N:M")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--level", type=float, default=0.95)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("repro", parents=[common], help="rerun a published table side by side")
    p.add_argument("--table", type=int, choices=(1, 2, 3, 4), required=True)
    p.add_argument("--reps", type=_positive_int, default=1000)
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    args.out = getattr(args, "out", "text")
    args.threads = getattr(args, "threads", 1)
    args.seed = getattr(args, "seed", 42)
    if args.out == "csv" and args.command != "simulate":
        parser.error("--out csv is only available for simulate")
    try:
        text = args.func(args)
    except DataError as exc:
        print(f"error [parse]: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"error [validation]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        r = exc.result
        print(f"error [convergence]: {exc} (iterations={r.iterations}, lambda={r.lam_hat!r})", file=sys.stderr)
        return EXIT_CONVERGENCE
    except QuadratureError as exc:
        print(f"error [quadrature]: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
