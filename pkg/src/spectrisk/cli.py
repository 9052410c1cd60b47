"""Command-line surface: theory curves, seeded simulations, comparisons.

Tabular results are CSV with fixed 17-significant-digit formatting so reruns
diff cleanly; verdicts and manifests are JSON. Every file written is
accompanied by a manifest sufficient to reproduce it (modulo the timestamp).

Exit codes: 0 success, 2 configuration error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, montecarlo, rda_theory, ridge_theory, spectra
from .errors import (
    BadArgument,
    GridMismatch,
    NoConvergence,
    SingularDerivative,
    SingularSolve,
    SpectriskError,
)

_SOLVER_ERRORS = (NoConvergence, SingularDerivative, SingularSolve)


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _parse_spectrum(text: str) -> spectra.SpectralDistribution:
    raw = Path(text[1:]).read_text() if text.startswith("@") else text
    try:
        spec = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise BadArgument(f"--spectrum: invalid JSON ({exc})") from exc
    return spectra.from_json_dict(spec)


def _parse_lambda_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise BadArgument("--lambda-grid: expected LO:HI:N")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise BadArgument(f"--lambda-grid: {exc}") from exc
    if lo <= 0 or hi <= 0:
        raise BadArgument("--lambda-grid: lambda values must be positive")
    if hi < lo or count < 1:
        raise BadArgument("--lambda-grid: need HI >= LO and N >= 1")
    if count == 1:
        return [lo]
    return list(np.geomspace(lo, hi, count))


def _write_csv(path, header: list[str], rows) -> None:
    writer = csv.writer(path, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])


def _manifest(command: str, config: dict, outputs: list[str], seed=None) -> dict:
    return {
        "command": command,
        "config": config,
        "tool_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "outputs": outputs,
        "seed": seed,
    }


def _emit_table(args, command: str, config: dict, header, rows) -> None:
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", newline="") as fh:
            _write_csv(fh, header, rows)
        manifest = _manifest(command, config, [str(out)])
        with open(out.with_suffix(out.suffix + ".manifest.json"), "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        _write_csv(sys.stdout, header, rows)


def _emit_json(args, command: str, config: dict, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        manifest = _manifest(command, config, [str(out)])
        out.with_suffix(out.suffix + ".manifest.json").write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


# -- theory subcommands ------------------------------------------------------

def _cmd_theory_ridge(args) -> None:
    dist = _parse_spectrum(args.spectrum)
    lambdas = _parse_lambda_grid(args.lambda_grid)
    if args.gamma <= 0 or args.alpha2 <= 0:
        raise BadArgument("--gamma and --alpha2 must be positive")
    lam_star, risk_star = ridge_theory.optimal_risk(dist, args.gamma, args.alpha2)
    est = ridge_theory.estimation_risk(dist, args.gamma, args.alpha2)
    rows = [
        (lam, ridge_theory.predictive_risk(dist, args.gamma, args.alpha2, lam),
         risk_star, lam_star, est)
        for lam in lambdas
    ]
    config = {"spectrum": dist.to_json_dict(), "gamma": args.gamma,
              "alpha2": args.alpha2, "lambda_grid": args.lambda_grid}
    _emit_table(args, "theory ridge", config,
                ["lambda", "risk", "risk_star", "lambda_star", "estimation_risk"], rows)


def _cmd_theory_rda(args) -> None:
    dist = _parse_spectrum(args.spectrum)
    lambdas = _parse_lambda_grid(args.lambda_grid)
    if args.gamma <= 0 or args.alpha2 <= 0:
        raise BadArgument("--gamma and --alpha2 must be positive")
    rows = []
    for lam in lambdas:
        rep = rda_theory.error_report(dist, args.gamma, args.alpha2, lam)
        rows.append((lam, rep.tau, rep.eta, rep.xi, rep.theta, rep.error,
                     rep.bayes_margin, rep.bayes_error, rep.cosine))
    config = {"spectrum": dist.to_json_dict(), "gamma": args.gamma,
              "alpha2": args.alpha2, "lambda_grid": args.lambda_grid}
    _emit_table(args, "theory rda", config,
                ["lambda", "tau", "eta", "xi", "theta", "error",
                 "bayes_margin", "bayes_error", "cosine"], rows)


def _cmd_theory_regimes(args) -> None:
    dist = _parse_spectrum(args.spectrum)
    if args.gamma <= 0:
        raise BadArgument("--gamma must be positive")
    rep = ridge_theory.regimes(dist, args.gamma)
    config = {"spectrum": dist.to_json_dict(), "gamma": args.gamma}
    _emit_json(args, "theory regimes", config, {
        "gamma": rep.gamma,
        "weak_signal_slope": rep.weak_slope,
        "strong_signal_kind": rep.strong_kind,
        "strong_signal_coefficient": rep.strong_coefficient,
    })


def _cmd_theory_worst_case(args) -> None:
    rep = rda_theory.worst_case(args.k1, args.k2, args.gamma, args.alpha2)
    config = {"k1": args.k1, "k2": args.k2, "gamma": args.gamma, "alpha2": args.alpha2}
    _emit_json(args, "theory worst-case", config, {
        "k1": rep.k1,
        "k2": rep.k2,
        "gamma": rep.gamma,
        "alpha2": rep.alpha2,
        "ir_margin": rep.ir_margin,
        "ir_least_favorable": rep.ir_least_favorable.to_json_dict(),
        "lda_margin": rep.lda_margin,
        "lda_least_favorable": (rep.lda_least_favorable.to_json_dict()
                                if rep.lda_least_favorable is not None else None),
        "ir_beats_lda": rep.ir_beats_lda,
    })


# -- sim subcommands ---------------------------------------------------------

def _worker_cap() -> int | None:
    raw = os.environ.get("SPECTRISK_THREADS")
    if raw is None:
        return None
    try:
        cap = int(raw)
    except ValueError as exc:
        raise BadArgument(f"SPECTRISK_THREADS: expected an integer, got {raw!r}") from exc
    if cap < 1:
        raise BadArgument("SPECTRISK_THREADS must be >= 1")
    return cap


def _load_sim_config(path: str) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise BadArgument(f"--config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise BadArgument(f"--config: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise BadArgument("--config: expected a JSON object")
    return raw


def _cov_tag(model: montecarlo.CovarianceModel) -> str:
    if model.kind == "ar1":
        return f"ar1_{model.rho:g}"
    if model.kind == "binary_tree":
        return f"tree{model.depth}"
    if model.kind == "exponential_quantiles":
        return "exp"
    return model.kind


def _sim_runs(raw: dict):
    covs = raw.get("covariance")
    if covs is None:
        raise BadArgument("--config: missing field 'covariance'")
    cov_list = covs if isinstance(covs, list) else [covs]
    gammas = raw.get("gamma")
    if gammas is None:
        raise BadArgument("--config: missing field 'gamma'")
    gamma_list = gammas if isinstance(gammas, list) else [gammas]
    for cov_spec in cov_list:
        model = montecarlo.CovarianceModel.from_json_dict(cov_spec)
        for gamma in gamma_list:
            yield model, float(gamma)


def _resolve_lambdas(raw: dict) -> list[float]:
    grid = raw.get("lambda_grid")
    if grid is None:
        raise BadArgument("--config: missing field 'lambda_grid'")
    if isinstance(grid, str):
        return _parse_lambda_grid(grid)
    values = [float(x) for x in grid]
    if not all(x > 0 for x in values):
        raise BadArgument("--config: lambda_grid values must be positive")
    return values


def _require(raw: dict, name: str):
    if name not in raw:
        raise BadArgument(f"--config: missing field {name!r}")
    return raw[name]


def _run_sim(args, kind: str) -> None:
    raw = _load_sim_config(args.config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    lambdas = _resolve_lambdas(raw)
    p = int(_require(raw, "p"))
    replicates = int(_require(raw, "replicates"))
    cap = _worker_cap()
    workers = int(raw.get("workers", 1))
    if cap is not None:
        workers = min(workers, cap)

    outputs, run_configs = [], []
    for model, gamma in _sim_runs(raw):
        if kind == "ridge":
            cfg = montecarlo.RidgeSimConfig(
                covariance=model, p=p, gamma=gamma, lambdas=tuple(lambdas),
                replicates=replicates, seed=args.seed,
                alpha2=float(raw.get("alpha2", 1.0)),
                test_size=int(raw.get("test_size", 0)),
                evaluation=raw.get("evaluation", "realized"), workers=workers)
            result = montecarlo.simulate_ridge(cfg)
            header = ["lambda", "empirical_mean", "standard_error", "theory"]
        else:
            cfg = montecarlo.RdaSimConfig(
                covariance=model, p=p, gamma=gamma, lambdas=tuple(lambdas),
                replicates=replicates, seed=args.seed,
                alpha2=raw.get("alpha2"), bayes_error=raw.get("bayes_error"),
                n_plus=raw.get("n_plus"), n_minus=raw.get("n_minus"),
                offset_c=float(raw.get("offset_c", 0.0)),
                pi_plus=float(raw.get("pi_plus", 0.5)),
                test_size=int(raw.get("test_size", 0)),
                mu_bar_mode=raw.get("mu_bar_mode", "zero"), workers=workers)
            result = montecarlo.simulate_rda(cfg)
            header = ["lambda", "empirical_mean", "standard_error", "theory", "oracle"]
        name = f"sim_{kind}_{_cov_tag(model)}_gamma{gamma:g}.csv"
        path = out_dir / name
        with open(path, "w", newline="") as fh:
            _write_csv(fh, header, ([row[h] for h in header] for row in result.rows()))
        outputs.append(str(path))
        run_configs.append(result.provenance)

    manifest = _manifest(f"sim {kind}", {"file": args.config, "resolved_runs": run_configs},
                         outputs, seed=args.seed)
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {len(outputs)} table(s) to {out_dir}", file=sys.stderr)


# -- compare -----------------------------------------------------------------

def _read_csv_columns(path: str) -> dict[str, list[float]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        columns: dict[str, list[float]] = {name: [] for name in reader.fieldnames or []}
        for row in reader:
            for name, value in row.items():
                columns[name].append(float(value))
    return columns


def _cmd_compare(args) -> None:
    theory_cols = _read_csv_columns(args.theory_csv)
    sim_cols = _read_csv_columns(args.sim_csv)
    for cols, path in ((theory_cols, args.theory_csv), (sim_cols, args.sim_csv)):
        if "lambda" not in cols:
            raise BadArgument(f"{path}: no 'lambda' column")
    lam_t = np.asarray(theory_cols["lambda"])
    lam_s = np.asarray(sim_cols["lambda"])
    if lam_t.size != lam_s.size or not np.allclose(lam_t, lam_s, rtol=1e-12, atol=0):
        raise GridMismatch("lambda grids differ between the two files")
    theory_name = next((c for c in ("risk", "error", "theory") if c in theory_cols), None)
    if theory_name is None:
        raise BadArgument(f"{args.theory_csv}: no risk/error/theory column")
    sim_name = "empirical_mean" if "empirical_mean" in sim_cols else theory_name
    gaps = np.abs(np.asarray(sim_cols[sim_name]) - np.asarray(theory_cols[theory_name]))
    payload = {
        "lambda": [float(x) for x in lam_t],
        "abs_gap": [float(g) for g in gaps],
        "max_abs_gap": float(gaps.max()),
        "theory_column": theory_name,
        "sim_column": sim_name,
        "tolerance": args.tolerance,
        "pass": bool(gaps.max() <= args.tolerance),
    }
    # the verdict is data, not an error: exit 0 either way
    _emit_json(args, "compare",
               {"theory_csv": args.theory_csv, "sim_csv": args.sim_csv}, payload)


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectrisk",
        description="Asymptotic risk of ridge regression and regularized "
                    "discriminant analysis, with seeded Monte Carlo checks.")
    parser.add_argument("--version", action="version", version=f"spectrisk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    theory = sub.add_parser("theory", help="evaluate limiting formulas")
    tsub = theory.add_subparsers(dest="subcommand", required=True)

    t_ridge = tsub.add_parser("ridge", help="ridge predictive risk curve")
    t_ridge.add_argument("--spectrum", required=True, help="spectrum JSON (or @file)")
    t_ridge.add_argument("--gamma", type=float, required=True)
    t_ridge.add_argument("--alpha2", type=float, required=True)
    t_ridge.add_argument("--lambda-grid", required=True, help="LO:HI:N, log-spaced")
    t_ridge.add_argument("--out", help="CSV path (stdout if omitted)")
    t_ridge.set_defaults(func=_cmd_theory_ridge)

    t_rda = tsub.add_parser("rda", help="RDA margin/error curve")
    for flag in ("--spectrum", "--lambda-grid"):
        t_rda.add_argument(flag, required=True)
    t_rda.add_argument("--gamma", type=float, required=True)
    t_rda.add_argument("--alpha2", type=float, required=True)
    t_rda.add_argument("--out")
    t_rda.set_defaults(func=_cmd_theory_rda)

    t_reg = tsub.add_parser("regimes", help="weak/strong-signal regime report")
    t_reg.add_argument("--spectrum", required=True)
    t_reg.add_argument("--gamma", type=float, required=True)
    t_reg.add_argument("--out")
    t_reg.set_defaults(func=_cmd_theory_regimes)

    t_wc = tsub.add_parser("worst-case", help="worst-case LDA/IR margins")
    t_wc.add_argument("--k1", type=float, required=True)
    t_wc.add_argument("--k2", type=float, required=True)
    t_wc.add_argument("--gamma", type=float, required=True)
    t_wc.add_argument("--alpha2", type=float, required=True)
    t_wc.add_argument("--out")
    t_wc.set_defaults(func=_cmd_theory_worst_case)

    sim = sub.add_parser("sim", help="seeded Monte Carlo simulations")
    ssub = sim.add_subparsers(dest="subcommand", required=True)
    for name in ("ridge", "rda"):
        s = ssub.add_parser(name)
        s.add_argument("--config", required=True, help="JSON simulation config")
        s.add_argument("--seed", type=int, required=True)
        s.add_argument("--out", required=True, help="output directory")
        s.set_defaults(func=lambda a, kind=name: _run_sim(a, kind))

    cmp_parser = sub.add_parser("compare", help="max |empirical - theory| verdict")
    cmp_parser.add_argument("--theory-csv", required=True)
    cmp_parser.add_argument("--sim-csv", required=True)
    cmp_parser.add_argument("--tolerance", type=float, default=0.0)
    cmp_parser.add_argument("--out")
    cmp_parser.set_defaults(func=_cmd_compare)
    return parser


def main(argv=None) -> None:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except _SOLVER_ERRORS as exc:
        print(f"spectrisk: solver failure: {exc}", file=sys.stderr)
        sys.exit(3)
    except (SpectriskError, OSError) as exc:
        print(f"spectrisk: {exc}", file=sys.stderr)
        sys.exit(2)


if __name__ == "__main__":
    main()
