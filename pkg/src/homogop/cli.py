"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage or
parameter errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from . import analysis, kernels, suites
from .params import ParameterError, ParameterSet

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_TOL = 1e-9
TOL_ENV = "HOMOGOP_TOL"

REPORT_SCHEMA = {
    "type": "object",
    "required": ["config", "checks", "summary"],
    "properties": {
        "config": {"type": "object"},
        "timestamp": {"type": "string"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "value", "tolerance", "runtime_ms"],
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": ["pass", "fail"]},
                    "value": {"type": ["number", "null"]},
                    "tolerance": {"type": "number"},
                    "runtime_ms": {"type": "number"},
                },
            },
        },
        "summary": {
            "type": "object",
            "required": ["passed", "failed"],
            "properties": {
                "passed": {"type": "integer", "minimum": 0},
                "failed": {"type": "integer", "minimum": 0},
            },
        },
    },
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    m: int
    lam: float
    mu: tuple[float, ...]
    degree: int = 12
    n_max: int = 200
    tol: float = DEFAULT_TOL
    tol_given: bool = False
    seed: int = 0
    samples: int = 200
    fmt: str | None = None
    out: str | None = None
    deterministic: bool = False

    def params(self) -> ParameterSet:
        return ParameterSet(self.m, self.lam, self.mu)

    def echo(self) -> dict:
        return {
            "m": self.m,
            "lambda": self.lam,
            "mu": list(self.mu),
            "degree": self.degree,
            "n_max": self.n_max,
            "tol": self.tol,
            "seed": self.seed,
            "samples": self.samples,
        }


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(f"cannot parse number list {text!r}") from exc


def _complex_pair(text: str) -> tuple[complex, complex]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--eval expects 'z,w', got {text!r}")
    try:
        return complex(parts[0].replace(" ", "")), complex(parts[1].replace(" ", ""))
    except ValueError as exc:
        raise UsageError(f"cannot parse complex pair {text!r}") from exc


def _resolve_tol(flag: float | None) -> tuple[float, bool]:
    if flag is not None:
        return flag, True
    env = os.environ.get(TOL_ENV)
    if env:
        try:
            return float(env), True
        except ValueError as exc:
            raise UsageError(f"{TOL_ENV}={env!r} is not a number") from exc
    return DEFAULT_TOL, False


def config_from_args(args) -> RunConfig:
    m = args.m if args.m is not None else 0
    mu = _floats(args.mu) if args.mu else (1.0,) * (m + 1)
    tol, given = _resolve_tol(args.tol)
    return RunConfig(
        m=m,
        lam=args.lam if args.lam is not None else m / 2 + 1,
        mu=mu,
        degree=args.degree,
        n_max=args.n_max,
        tol=tol,
        tol_given=given,
        seed=args.seed,
        samples=args.samples,
        fmt=args.format,
        out=args.out,
        deterministic=args.deterministic,
    )


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _num(x: float) -> str:
    return format(float(x), ".17g")


def series_csv(series) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s", "t", "row", "col", "re", "im"])
    n, d = series.degree + 1, series.dim
    for s in range(n):
        for t in range(n):
            for r in range(d):
                for c in range(d):
                    v = series.coeffs[s, t, r, c]
                    w.writerow([s, t, r, c, _num(v.real), _num(v.imag)])
    return buf.getvalue()


def matrix_json(mat: np.ndarray) -> dict:
    return {"re": mat.real.tolist(), "im": mat.imag.tolist()}


def report_json(config: dict, checks: list[dict], deterministic: bool, **extra) -> str:
    passed = sum(c["status"] == "pass" for c in checks)
    report = {"config": config}
    if not deterministic:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    report["checks"] = checks
    report.update(extra)
    report["summary"] = {"passed": passed, "failed": len(checks) - passed}
    return json.dumps(report, indent=2) + "\n"


def cmd_kernel(cfg: RunConfig, evals, method: str) -> int:
    p = cfg.params()
    fmt = cfg.fmt or ("json" if evals else "csv")
    if evals:
        records = []
        for z, w in evals:
            mat = kernels.kernel_eval(p, z, w)
            records.append(
                {"z": [z.real, z.imag], "w": [w.real, w.imag], "matrix": matrix_json(mat)}
            )
        if fmt == "csv":
            raise UsageError("pointwise evaluations are written as JSON only")
        _emit(json.dumps({"config": cfg.echo(), "evaluations": records}, indent=2) + "\n", cfg.out)
        return EXIT_OK
    build = kernels.kernel_from_onb if method == "onb" else kernels.kernel_closed_form
    series = build(p, cfg.degree)
    if fmt == "csv":
        _emit(series_csv(series), cfg.out)
    else:
        coeffs = [
            {"s": s, "t": t, **matrix_json(series.coeffs[s, t])}
            for s in range(series.degree + 1)
            for t in range(series.degree + 1)
        ]
        _emit(json.dumps({"config": cfg.echo(), "coefficients": coeffs}, indent=2) + "\n", cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, selector: str) -> int:
    p = cfg.params()
    scfg = suites.SuiteConfig(
        params=p,
        degree=cfg.degree,
        n_max=cfg.n_max,
        seed=cfg.seed,
        samples=cfg.samples,
        tol=cfg.tol if cfg.tol_given else None,
    )
    checks = [c.as_dict(cfg.deterministic) for c in suites.run(scfg, selector)]
    config = cfg.echo() | {"suite": selector}
    _emit(report_json(config, checks, cfg.deterministic), cfg.out)
    return EXIT_OK if all(c["status"] == "pass" for c in checks) else EXIT_FAIL


def parse_set(text: str) -> ParameterSet:
    """``LAMBDA:MU0,MU1,...``; m is the number of mu entries minus one."""
    if ":" not in text:
        raise UsageError(f"--set expects LAMBDA:MU0,MU1,..., got {text!r}")
    lam_text, mu_text = text.split(":", 1)
    try:
        lam = float(lam_text)
    except ValueError as exc:
        raise UsageError(f"cannot parse lambda in {text!r}") from exc
    mu = _floats(mu_text)
    return ParameterSet(len(mu) - 1, lam, mu)


def cmd_compare(cfg: RunConfig, sets: list[str]) -> int:
    if len(sets) < 2:
        raise UsageError("compare needs at least two --set entries")
    params = [parse_set(s) for s in sets]
    ms = {p.m for p in params}
    if len(ms) != 1:
        raise ParameterError(f"all parameter sets must share m, got {sorted(ms)}")
    k = len(params)
    matrix = [[False] * k for _ in range(k)]
    checks = []
    for i in range(k):
        for j in range(k):
            matrix[i][j] = analysis.equivalence_check(params[i], params[j])
    for i in range(k):
        for j in range(i + 1, k):
            bi = np.diag(kernels.b_origin(params[i]))
            bj = np.diag(kernels.b_origin(params[j]))
            distance = max(float(np.abs(bi - bj).max()), abs(params[i].lam - params[j].lam))
            equivalent = matrix[i][j]
            consistent = (distance == 0.0) if equivalent else (distance > 0.0)
            checks.append(
                suites.Check(f"compare[{i},{j}]", consistent, distance, 0.0).as_dict(True)
            )
    config = {
        "sets": [{"m": p.m, "lambda": p.lam, "mu": list(p.mu)} for p in params],
    }
    _emit(report_json(config, checks, cfg.deterministic, equivalence=matrix), cfg.out)
    return EXIT_OK if all(c["status"] == "pass" for c in checks) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, default=None, help="vector dimension minus one")
    common.add_argument("--lambda", dest="lam", type=float, default=None)
    common.add_argument("--mu", default=None, help="comma separated mu_0..mu_m (mu_0 = 1)")
    common.add_argument("--degree", type=int, default=12, help="series truncation order")
    common.add_argument("--n-max", dest="n_max", type=int, default=200)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=200)
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--out", default=None, metavar="PATH")
    common.add_argument("--deterministic", action="store_true", help="omit timestamps and timings")

    parser = argparse.ArgumentParser(
        prog="homogop", description="Homogeneous multiplication operators on the disc."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", parents=[common], help="kernel coefficients or values")
    k.add_argument("--eval", dest="evals", action="append", default=[], metavar="Z,W")
    k.add_argument("--method", choices=("closed", "onb"), default="closed")

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("suite", nargs="?", default="all", choices=("all",) + suites.SUITES)

    c = sub.add_parser("compare", parents=[common], help="pairwise equivalence of parameter sets")
    c.add_argument("--set", dest="sets", action="append", default=[], metavar="LAMBDA:MU0,...")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        if args.command == "kernel":
            return cmd_kernel(cfg, [_complex_pair(e) for e in args.evals], args.method)
        if args.command == "verify":
            return cmd_verify(cfg, args.suite)
        return cmd_compare(cfg, args.sets)
    except (ParameterError, UsageError) as exc:
        print(f"homogop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
