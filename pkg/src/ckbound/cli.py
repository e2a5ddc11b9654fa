"""``ckbound`` command line.

Exit codes: 0 success, 1 verification failure, 2 usage or validation error,
3 order budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import jsonschema

from . import bounds, cm
from .errors import BudgetExceeded, CKBoundError, NotFoundBelowCap
from .hilbert import (
    CONJECTURAL,
    CURVE_SCHEMA,
    CurveData,
    G_series,
    extract_exponents,
    global_series,
    hs_R,
    local_series,
)
from .reports import jsonable, unlimited_int_digits
from .series import QSeries
from .suites import SUITES, parse_grid, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

SERIES_KINDS = ("local", "global", "hsr", "G", "cm-local", "cm-global", "polylog-local")


@dataclass(frozen=True)
class RunConfig:
    order_budget: int = bounds.DEFAULT_BUDGET
    output_format: str = "text"
    precision_goal: float = 1e-6
    seed: int = 0
    order: int | None = None

    def __post_init__(self):
        if self.order_budget < 1:
            raise CKBoundError("order budget must be >= 1")
        if self.precision_goal <= 0:
            raise CKBoundError("precision goal must be positive")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common(sub: bool) -> argparse.ArgumentParser:
    # the same flags work before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if sub else (lambda v: v)
    p.add_argument("--order", type=int, default=d(None), help="truncation order")
    p.add_argument("--format", choices=("text", "json"), default=d("text"), dest="output_format")
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomised checks")
    p.add_argument("--budget", type=int, default=d(None),
                   help="order budget (default $CKBOUND_BUDGET or 4096)")
    p.add_argument("--precision", type=float, default=d(1e-6), dest="precision_goal",
                   help="width goal for certified decimals")
    return p


def _curve_args(p: argparse.ArgumentParser, required=False):
    p.add_argument("--g", type=int, required=required)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--n1", type=int)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--rho", type=int, default=None)
    p.add_argument("--d-closed", type=int, dest="d_closed")


def build_parser() -> argparse.ArgumentParser:
    common = _common(sub=True)
    parser = _Parser(prog="ckbound", parents=[_common(sub=False)],
                     description="Hilbert series, minimal weights and point-count bounds.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("series", parents=[common], help="expand a Hilbert series")
    p.add_argument("--kind", choices=SERIES_KINDS, required=True)
    _curve_args(p)

    p = sub.add_parser("bound", parents=[common], help="explicit bound from a curve JSON file")
    p.add_argument("input")
    p.add_argument("--mode", choices=("exact", "simplified"), default="exact")

    p = sub.add_parser("find-m", parents=[common], help="minimal m for the partial-sum inequality")
    p.add_argument("input", nargs="?")
    _curve_args(p)
    p.add_argument("--cap", type=int)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--grid", help="e.g. r=0..2,s=0..2,rho=1,d=all")

    p = sub.add_parser("extract-exponents", parents=[common],
                       help="exponents e_k of prod (1-t^k)^(-e_k)")
    p.add_argument("--kind", choices=SERIES_KINDS)
    p.add_argument("--coeffs", help="comma-separated coefficients, constant term first")
    p.add_argument("--input", help="series JSON file")
    _curve_args(p)

    p = sub.add_parser("cm", parents=[common], help="punctured CM elliptic curves")
    cm_sub = p.add_subparsers(dest="cm_command", required=True, parser_class=_Parser)
    q = cm_sub.add_parser("find-m", parents=[common])
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--s", type=int, default=0)
    q.add_argument("--kind", choices=("tilde", "a", "A"), default="tilde")
    q = cm_sub.add_parser("bound", parents=[common])
    q.add_argument("input")
    q.add_argument("--mode", choices=("exact", "asymptotic"), default="exact")

    p = sub.add_parser("polylog", parents=[common], help="thrice-punctured line")
    pl_sub = p.add_subparsers(dest="polylog_command", required=True, parser_class=_Parser)
    q = pl_sub.add_parser("find-m", parents=[common])
    q.add_argument("--s", type=int, required=True)
    return parser


# ---------------------------------------------------------------------------

def _curve_from_args(a) -> CurveData:
    if a.g is None:
        raise UsageError("--g is required")
    rho = a.rho if a.rho is not None else (1 if a.g else 0)
    return CurveData(a.g, a.n, r=a.r, s=a.s, rho=rho, d_closed=a.d_closed, n1=a.n1)


def _load_json(path: str, schema: dict):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.path))
    if errors:
        e = errors[0]
        field = ".".join(str(x) for x in e.path) or "(root)"
        raise UsageError(f"{path}: field {field}: {e.message} (constraint: {e.validator})")
    return data


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    with unlimited_int_digits():
        if cfg.output_format == "json":
            print(json.dumps(jsonable(payload), indent=2))
        else:
            print(text)


def _series_for(kind: str, a, order: int) -> tuple[QSeries, dict]:
    meta = {"kind": kind, "order": order}
    if kind in ("local", "global", "hsr", "G"):
        c = _curve_from_args(a)
        meta["curve"] = c.to_json()
        if kind == "local":
            return local_series(c, order), meta
        if kind == "G":
            return G_series(c, order), meta
        if kind == "hsr":
            return hs_R(c, order), meta
        meta["conjectural"] = True
        meta["assumptions"] = CONJECTURAL
        return global_series(c, order), meta
    if kind == "cm-local":
        return cm.cm_local_series(order), meta
    if kind == "cm-global":
        meta["conjectural"] = True
        return cm.cm_global_series(a.r, a.s, order), meta
    return cm.polylog_local_series(order), meta


def _table(series: QSeries) -> str:
    rows = [(str(k), str(series[k])) for k in range(series.order + 1)]
    w = max(len(r[0]) for r in rows)
    return "\n".join(f"{k.rjust(w)}  {v}" for k, v in rows)


def cmd_series(a, cfg: RunConfig) -> int:
    order = 16 if cfg.order is None else cfg.order
    series, meta = _series_for(a.kind, a, order)
    text = _table(series)
    if meta.get("conjectural"):
        text = f"# {CONJECTURAL}\n" + text
    _emit(cfg, {**meta, "series": series.to_json()}, text)
    return EXIT_OK


def cmd_bound(a, cfg: RunConfig) -> int:
    c = CurveData.from_json(_load_json(a.input, CURVE_SCHEMA))
    report = bounds.compute_bound(c, a.mode, cfg.order_budget)
    j = report.to_json()
    lines = [
        f"mode            {j['mode']}",
        f"m               {j['m']}",
        f"M               {j['M']}",
        f"s_bar           {j['s_bar']}",
        f"kappa_p         {j['kappa_p']['symbolic']} <= {j['kappa_p']['upper']}",
        f"bound log10     <= {j['bound_log10']}",
        f"bound digits    {j['bound_exact_digits']}",
        f"simplified exp  {report.factors['simplified_exponent']}",
        f"exact<=simpl.   {j['exact_le_simplified']}",
        f"conjectural     {j['conjectural']}",
    ]
    lines += [f"note            {n}" for n in j["notes"]]
    _emit(cfg, j, "\n".join(lines))
    return EXIT_OK


def cmd_find_m(a, cfg: RunConfig) -> int:
    if a.input:
        c = CurveData.from_json(_load_json(a.input, CURVE_SCHEMA))
    else:
        c = _curve_from_args(a)
    M = bounds.cap_M(c)
    cap = a.cap if a.cap is not None else M
    m = bounds.find_minimal_m(c, cap, cfg.order_budget)
    _emit(cfg, {"m": m, "M": M, "cap": cap, "within_M": m <= M, "conjectural": True},
          f"m = {m}  (M = {M})")
    return EXIT_OK


def cmd_verify(a, cfg: RunConfig) -> int:
    grid = parse_grid(a.grid) if a.grid else None
    # suites keep their own defaults unless a budget was given explicitly
    budget = cfg.order_budget if a.budget is not None or "CKBOUND_BUDGET" in os.environ else None
    results = run_suite(a.suite, grid, cfg.order, budget, cfg.seed)
    failed = [r for r in results if not r.holds and not r.skipped]
    skipped = sum(r.skipped for r in results)
    payload = {
        "suite": a.suite,
        "results": [r.to_json() for r in results],
        "passed": len(results) - len(failed) - skipped,
        "failed": len(failed),
        "skipped": skipped,
    }
    text = "\n".join(r.line() for r in results)
    text += f"\n{payload['passed']} passed, {len(failed)} failed, {skipped} skipped"
    if failed:
        text += "\nfirst counterexample: " + failed[0].line()
    _emit(cfg, payload, text)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_extract(a, cfg: RunConfig) -> int:
    if a.coeffs:
        values = [x.strip() for x in a.coeffs.split(",") if x.strip()]
        series = QSeries.from_coeffs(values)
    elif a.input:
        with open(a.input) as fh:
            series = QSeries.from_json(json.load(fh))
    elif a.kind:
        series, _ = _series_for(a.kind, a, 16 if cfg.order is None else cfg.order)
    else:
        raise UsageError("give one of --coeffs, --input or --kind")
    if cfg.order is not None and cfg.order < series.order:
        series = series.truncate(cfg.order)
    ev = extract_exponents(series)
    text = "\n".join(f"e_{k} = {v}" for k, v in ev.as_dict().items())
    _emit(cfg, ev.to_json(), text)
    return EXIT_OK


def cmd_cm(a, cfg: RunConfig) -> int:
    if a.cm_command == "find-m":
        m = cm.cm_find_minimal_m(a.r, a.s, cfg.order_budget, a.kind)
        _emit(cfg, {"m": m, "r_prime": a.r + a.s, "kind": a.kind, "conjectural": True},
              f"m = {m}  (r' = {a.r + a.s}, kind {a.kind})")
        return EXIT_OK
    d = cm.CMData.from_json(_load_json(a.input, cm.CM_SCHEMA))
    report = cm.cm_bound(d, a.mode, cfg.order_budget)
    j = report.to_json()
    lines = [f"{k:<20}{j[k]}" for k in ("mode", "m", "m_A", "r_prime", "kappa",
                                        "bound_log10", "closed_form_log10",
                                        "bound_exact_digits", "unconditional",
                                        "conjectural")]
    _emit(cfg, j, "\n".join(lines))
    return EXIT_OK


def cmd_polylog(a, cfg: RunConfig) -> int:
    m = cm.polylog_find_minimal_m(a.s, cfg.order_budget)
    _emit(cfg, {"m": m, "s": a.s}, f"m = {m}  (s = {a.s})")
    return EXIT_OK


COMMANDS = {
    "series": cmd_series,
    "bound": cmd_bound,
    "find-m": cmd_find_m,
    "verify": cmd_verify,
    "extract-exponents": cmd_extract,
    "cm": cmd_cm,
    "polylog": cmd_polylog,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = RunConfig(order_budget=bounds.order_budget(args.budget),
                        output_format=args.output_format,
                        precision_goal=args.precision_goal, seed=args.seed, order=args.order)
        if cfg.order is not None and cfg.order < 0:
            raise UsageError("--order must be >= 0")
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except NotFoundBelowCap as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except CKBoundError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
