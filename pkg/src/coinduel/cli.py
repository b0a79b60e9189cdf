"""The ``coinduel`` command line.

Every subcommand prints human-readable text by default, or a single JSON
document with ``--json``. Logs go to standard error. Probabilities are read
as exact decimals or fractions, never as binary floats.

Exit codes: 0 success, 1 a verification failure, 2 invalid input, 3 a sign
that could not be certified within the precision limit.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from collections import Counter
from typing import Any, Dict, List, Optional

import mpmath

from . import __version__
from .bounds import bound_set
from .exact_oracle import brute_force_f
from .indicator import STRATEGIES, IndicatorQuery, indicator_sign
from .model import GameParams
from .nullcline import trace
from .numerics import CoinDuelError, InvalidProbability, PrecisionConfig, UncertifiedSign, format_probability
from .optimizer import auto_precision, optimal_n
from .regions import DEFAULT_N_CAP, sample_region
from .winprob import f_series

SCHEMA_VERSION = "1.0"
PRECISION_ENV = "COINDUEL_PRECISION"
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_UNCERTIFIED = 3

log = logging.getLogger("coinduel")


class CommandResult:
    def __init__(self, inputs: Dict[str, Any], result: Dict[str, Any], text: List[str], precision: int = 0,
                 exit_code: int = 0):
        self.inputs = inputs
        self.result = result
        self.text = text
        self.precision = precision
        self.exit_code = exit_code


def _precision(args) -> Optional[int]:
    if args.precision is not None:
        return args.precision
    env = os.environ.get(PRECISION_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise InvalidProbability(f"{PRECISION_ENV} must be an integer, got {env!r}") from None
    return None


def _cfg(args, upper: int = 1) -> PrecisionConfig:
    digits = _precision(args)
    cfg = auto_precision(upper)
    if digits is not None:
        cfg = PrecisionConfig(digits, max(cfg.max_digits, digits))
    return cfg


def _params(args) -> GameParams:
    return GameParams.parse(args.q, args.p)


def _pq_inputs(params: GameParams) -> Dict[str, str]:
    return {"q": format_probability(params.q), "p": format_probability(params.p)}


# -- subcommands --------------------------------------------------------------------

def cmd_optimal_n(args) -> CommandResult:
    params = _params(args)
    bounds = bound_set(params)
    cfg = _cfg(args, bounds.upper)
    res = optimal_n(params, cfg)
    methods = Counter(p.method.value for p in res.method_trace)
    digits = max((p.digits for p in res.method_trace), default=0)
    result = {
        "N": str(res.N),
        "tie": res.tie,
        "reflected": res.reflected,
        "bounds": {k: (None if v is None else str(v) if isinstance(v, int) and not isinstance(v, bool) else v)
                   for k, v in bounds.as_dict().items()},
        "probes": res.probes,
        "methods": dict(sorted(methods.items())),
    }
    text = [f"N = {res.N}", f"tie = {res.tie}", f"probes = {res.probes} ({', '.join(f'{k}: {v}' for k, v in sorted(methods.items())) or 'closed form'})"]
    text += [f"{k} = {v}" for k, v in bounds.as_dict().items()]
    return CommandResult({**_pq_inputs(params), "precision": _precision(args)}, result, text, max(digits, cfg.working_digits))


def cmd_win_prob(args) -> CommandResult:
    params = _params(args)
    if args.n_max < 1:
        raise InvalidProbability("--n-max must be at least 1")
    if params.slack == 0:
        values = [(n, brute_force_f(params, n), 0.0) for n in range(args.n_max + 1)]
        best = max(v[1] for v in values[1:])
        top = next(n for n, f, _ in values[1:] if f == best)
        digits = 0
        with mpmath.workdps(40):
            rows = [(n, mpmath.nstr(mpmath.mpf(f.numerator) / f.denominator, 20), e) for n, f, e in values]
    else:
        cfg = None if _precision(args) is None else PrecisionConfig(_precision(args), 10**5)
        series = f_series(params, args.n_max, cfg)
        top = series.argmax()
        digits = series.digits
        rows = [(v.n, mpmath.nstr(v.f, 20), v.abs_error) for v in series.values]
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write("n,f,abs_error,is_argmax\n")
            for n, f, e in rows:
                fh.write(f"{n},{f},{e:.3e},{int(n == top)}\n")
    result = {
        "argmax": top,
        "values": [{"n": n, "f": f, "abs_error": f"{e:.3e}", "is_argmax": n == top} for n, f, e in rows],
    }
    text = [f"{n:>6}  {f}  +/- {e:.1e}{'  <- max' if n == top else ''}" for n, f, e in rows]
    return CommandResult({**_pq_inputs(params), "n_max": args.n_max}, result, text, digits)


def cmd_indicator(args) -> CommandResult:
    params = _params(args)
    if args.n < 0:
        raise InvalidProbability("--n must be non-negative")
    cfg = _cfg(args, max(args.n, 1))
    res = indicator_sign(IndicatorQuery(params, args.n), cfg, strategy=args.strategy)
    label = {1: "Positive", 0: "Zero", -1: "Negative"}[int(res.sign)]
    result = {"sign": label, "method": res.method.value, "digits_used": res.digits_used}
    return CommandResult({**_pq_inputs(params), "n": str(args.n), "strategy": args.strategy},
                         result, [f"J_{args.n} is {label} ({res.method.value})"], res.digits_used)


def cmd_bounds(args) -> CommandResult:
    params = _params(args)
    b = bound_set(params)
    result = {k: (str(v) if isinstance(v, int) and not isinstance(v, bool) else v) for k, v in b.as_dict().items()}
    result["lower"] = str(b.lower)
    result["upper"] = str(b.upper)
    text = [f"{k} = {v}" for k, v in result.items()]
    return CommandResult(_pq_inputs(params), result, text, 0)


def cmd_nullcline(args) -> CommandResult:
    if args.n < 1 or args.samples < 2:
        raise InvalidProbability("--n must be >= 1 and --samples >= 2")
    tr = trace(args.n, args.step_control, samples=args.samples)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write("q,p,dp_dq\n")
            for s in tr.samples:
                fh.write(f"{s.q:.17g},{s.p:.17g},{s.dp_dq:.17g}\n")
    result = {
        "n": args.n,
        "domain": list(tr.domain),
        "steps": tr.steps,
        "rejected": tr.rejected,
        "invariant_violations": tr.violations,
        "samples": [{"q": s.q, "p": s.p, "dp_dq": s.dp_dq} for s in tr.samples],
    }
    text = [f"{s.q:.12f}  {s.p:.12f}  {s.dp_dq:.9f}" for s in tr.samples]
    text.append(f"# {tr.steps} steps, {tr.rejected} rejected, {len(tr.violations)} invariant violations")
    return CommandResult({"n": args.n, "samples": args.samples, "step_control": args.step_control},
                         result, text, 15, EXIT_VERIFY_FAILED if tr.violations else 0)


def cmd_region_map(args) -> CommandResult:
    region = sample_region(args.count, args.mode, args.seed, args.n_cap, args.workers)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            region.write_csv(fh, args.digits)
    if args.svg:
        with open(args.svg, "w") as fh:
            region.write_svg(fh, args.svg_field)
    fr = {k: v.as_dict() for k, v in region.fractions().items()}
    result = {
        "points": len(region),
        "capped": int(region.capped.sum()),
        "recomputed_exactly": region.recomputed,
        "fractions": fr,
    }
    text = [f"{len(region)} points, {result['capped']} above the cap, {region.recomputed} recomputed exactly"]
    text += [f"{k:<28} {v['value']:.4f} +/- {v['sigma']:.4f}" for k, v in fr.items()]
    return CommandResult({"mode": args.mode, "count": args.count, "seed": args.seed, "n_cap": args.n_cap},
                         result, text, 15)


def cmd_verify(args) -> CommandResult:
    from . import verify

    report = None if args.json else (lambda line: print(line, flush=True))
    results = verify.run(args.level, report)
    ok = all(r.passed for r in results)
    result = {
        "passed": ok,
        "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
    }
    text = [] if report else [r.line() for r in results]
    text.append("all checks passed" if ok else "VERIFICATION FAILED")
    return CommandResult({"level": args.level}, result, text, 0, 0 if ok else EXIT_VERIFY_FAILED)


# -- plumbing -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coinduel", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, pq=True):
        if pq:
            p.add_argument("--q", required=True, help="underdog heads probability (decimal or a/b)")
            p.add_argument("--p", required=True, help="favourite heads probability (decimal or a/b)")
        p.add_argument("--json", action="store_true", help="emit one JSON document")
        p.add_argument("--precision", type=int, default=None,
                       help=f"working digits (default: automatic, or ${PRECISION_ENV})")
        return p

    p = common(sub.add_parser("optimal-n", help="optimal game length N(q, p)"))
    p.set_defaults(func=cmd_optimal_n)

    p = common(sub.add_parser("win-prob", help="win probability series f(0..n_max)"))
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--csv", help="also write the series to this CSV file")
    p.set_defaults(func=cmd_win_prob)

    p = common(sub.add_parser("indicator", help="certified sign of J_n(q, p)"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default=None)
    p.set_defaults(func=cmd_indicator)

    p = common(sub.add_parser("bounds", help="analytic bounds on N(q, p)"))
    p.set_defaults(func=cmd_bounds)

    p = common(sub.add_parser("nullcline", help="trace the curve J_n = 0"), pq=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--step-control", type=float, default=1e-12)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_nullcline)

    p = common(sub.add_parser("region-map", help="classify sample points of the triangle"), pq=False)
    p.add_argument("--mode", choices=("monte-carlo", "grid"), default="monte-carlo")
    p.add_argument("--count", type=int, default=100_000,
                   help="number of points (monte-carlo) or grid resolution (grid)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-cap", type=int, default=DEFAULT_N_CAP)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv")
    p.add_argument("--digits", type=int, default=17, help="significant digits in the CSV")
    p.add_argument("--svg")
    p.add_argument("--svg-field", default="N")
    p.set_defaults(func=cmd_region_map)

    p = common(sub.add_parser("verify", help="run the oracle cross-check suites"), pq=False)
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.set_defaults(func=cmd_verify)
    return parser


def envelope(command: str, out: CommandResult, elapsed_ms: float) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": out.inputs,
        "result": out.result,
        "timing_ms": round(elapsed_ms, 3),
        "precision_used": out.precision,
    }


def _fail(message: str) -> None:
    print(f"coinduel: error: {message}", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    t0 = time.perf_counter()
    try:
        out = args.func(args)
    except UncertifiedSign as exc:
        _fail(f"uncertified sign: {exc}")
        return EXIT_UNCERTIFIED
    except (InvalidProbability, ValueError) as exc:
        _fail(f"invalid input: {exc}")
        return EXIT_INVALID
    except CoinDuelError as exc:
        _fail(str(exc))
        return EXIT_INVALID
    elapsed = (time.perf_counter() - t0) * 1000
    if args.json:
        json.dump(envelope(args.command, out, elapsed), sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        for line in out.text:
            print(line)
    return out.exit_code


if __name__ == "__main__":
    sys.exit(main())
