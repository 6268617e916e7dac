"""Command-line front end.

Every command writes one CSV (to ``--output`` or stdout) whose first line
is a ``# config:`` comment holding the full configuration. All times and
phases are in units of omega t (radians). Exit codes: 0 ok, 2 bad flags,
3 computation error, 4 I/O error; failures print a one-line JSON error
record on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import analysis, checks, csvio, quantum, rng, semiclassical as sc, wigner
from .errors import InvalidGrid, MissingClassicalN, NegativeParameter, NonFinite, RevivalError, TooFewSamples
from .params import ModelParams, TimeGrid, validate

EXIT_OK, EXIT_BAD_FLAG, EXIT_COMPUTATION, EXIT_IO = 0, 2, 3, 4

COMMANDS = ("visibility", "wigner", "negativity", "sweep-fig1", "divisibility", "tti", "compare", "oracle-check")

CHECK_SUITES = {
    "visibility": ["params", "quantum", "semiclassical"],
    "oracle-check": ["quantum"],
    "wigner": ["wigner"],
    "negativity": ["wigner"],
    "sweep-fig1": ["wigner"],
    "divisibility": ["analysis"],
    "tti": ["analysis"],
    "compare": ["semiclassical", "analysis"],
}

DEFAULT_LAMBDAS = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0"
DEFAULT_NBARS = "0,0.25,0.5,1,2"

# never recorded in the CSV config: they do not change the numbers
VOLATILE = ("output", "workers", "check")


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _pairs(text: str) -> List[tuple]:
    out = []
    for item in text.split(","):
        try:
            a, b = item.split(":")
            out.append((float(a), float(b)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected t1:t2 pairs, got {item!r}") from None
    return out


def _physics(p: argparse.ArgumentParser, nc: bool = False) -> None:
    p.add_argument("--lambda", dest="lam", type=float, default=0.1, help="coupling g/omega")
    p.add_argument("--nbar", type=float, default=0.0, help="thermal phonon number")
    if nc:
        p.add_argument("--nc", type=float, default=None,
                       help="classical phonon number for model sc1 (default nbar + 1/2)")


def _time(p: argparse.ArgumentParser, tmax: float = 4 * math.pi, steps: int = 400) -> None:
    p.add_argument("--tmin", type=float, default=0.0, help="first omega t")
    p.add_argument("--tmax", type=float, default=tmax, help="last omega t")
    p.add_argument("--steps", type=int, default=steps, help="number of intervals")


class _Parser(argparse.ArgumentParser):
    """argparse that also reports flag errors as a JSON record."""

    def error(self, message):
        self.print_usage(sys.stderr)
        _fail("BadFlag", message, EXIT_BAD_FLAG)
        sys.exit(EXIT_BAD_FLAG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="revival", description=__doc__.split("\n\n")[0])
    parser.add_argument("--check", action="store_true",
                        help="run the invariant suite (of the given command's module, or all) and exit")
    sub = parser.add_subparsers(dest="command")

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")
        p.add_argument("--check", action="store_true", help="run this module's invariant suite and exit")
        return p

    p = add("visibility", "visibility curve of one model")
    _physics(p, nc=True)
    _time(p)
    p.add_argument("--model", default="quantum", choices=["quantum", "oracle", *sc.MODELS])
    p.add_argument("--samples", type=int, default=0, help="Monte Carlo samples (0: closed form)")
    p.add_argument("--seed", type=int, default=rng.DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cutoff", type=int, default=None, help="Fock cutoff for --model oracle (default auto)")

    p = add("wigner", "Wigner function on a (Q, P) grid")
    _physics(p)
    p.add_argument("--qmax", type=float, default=4.0)
    p.add_argument("--pmax", type=float, default=4.0)
    p.add_argument("--nq", type=int, default=81)
    p.add_argument("--np", dest="np_", type=int, default=81)

    p = add("negativity", "Wigner negativity at one (lambda, nbar)")
    _physics(p)
    p.add_argument("--tol", type=float, default=1e-6)

    p = add("sweep-fig1", "negativity over a lambda x nbar grid")
    p.add_argument("--lambdas", type=_floats, default=_floats(DEFAULT_LAMBDAS))
    p.add_argument("--nbars", type=_floats, default=_floats(DEFAULT_NBARS))
    p.add_argument("--tol", type=float, default=1e-6)

    p = add("divisibility", "semigroup-law violation of a visibility curve")
    _physics(p, nc=True)
    p.add_argument("--model", default="sc1", choices=["quantum", *sc.MODELS])
    p.add_argument("--pairs", type=_pairs, default=[(math.pi, math.pi)], help="t1:t2 pairs (default pi:pi)")

    p = add("tti", "time-translation invariance of a semiclassical model")
    _physics(p, nc=True)
    p.add_argument("--model", default="sc1", choices=list(sc.MODELS))
    p.add_argument("--taus", type=_floats, default=None, help="tau values (default 10 points in (0, 2 pi])")
    p.add_argument("--times", type=_floats, default=None, help="start times (default 10 points in [0, 2 pi))")
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=rng.DEFAULT_SEED)

    p = add("compare", "quantum curve next to semiclassical curves")
    _physics(p, nc=True)
    _time(p)
    p.add_argument("--models", default="sc1,sc2,sc3",
                   help=f"comma-separated subset of {','.join(sc.MODELS)}")

    p = add("oracle-check", "Fock-space oracle against the closed form")
    _physics(p)
    _time(p, steps=40)
    p.add_argument("--cutoff", type=int, default=None)
    return parser


def _params(args) -> ModelParams:
    nc = getattr(args, "nc", None)
    if nc is None and hasattr(args, "nc"):
        nc = args.nbar + 0.5
    return validate(ModelParams(args.lam, args.nbar, nc))


def _model(name: str, params: ModelParams) -> sc.StochasticPhaseModel:
    return sc.model_by_name(name, params)


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in VOLATILE}


def cmd_visibility(args) -> str:
    params = _params(args)
    t = TimeGrid(args.tmin, args.tmax, args.steps).points()
    if args.model == "quantum":
        return csvio.render(["omega_t", "v"], zip(t, quantum.visibility_quantum(params, t)), _config(args))
    if args.model == "oracle":
        v, cuts = quantum.oracle_curve(params, t, args.cutoff)
        return csvio.render(["omega_t", "v", "cutoff"], zip(t, v, cuts.tolist()), _config(args))
    model = _model(args.model, params)
    if args.samples:
        v, err = sc.visibility_mc_curve(model, t, args.samples, args.seed, args.workers)
        return csvio.render(["omega_t", "v", "stderr"], zip(t, v, err), _config(args))
    return csvio.render(["omega_t", "v"], zip(t, sc.visibility_analytic(model, t)), _config(args))


def cmd_wigner(args) -> str:
    grid = wigner.wigner_grid(wigner.WignerSpec(args.lam, args.nbar), args.qmax, args.pmax, args.nq, args.np_)
    return csvio.render(["q", "p", "w"], grid.rows(), _config(args))


NEG_COLUMNS = ["lambda", "nbar", "delta", "est_abs_error", "bound"]


def _neg_row(r: wigner.NegativityResult):
    return [r.spec.lam, r.spec.nbar, r.delta, r.est_abs_error, r.bound]


def cmd_negativity(args) -> str:
    r = wigner.negativity(wigner.WignerSpec(args.lam, args.nbar), args.tol)
    footer = {"bound_advisory": wigner.bound_is_advisory(r.spec)}
    return csvio.render(NEG_COLUMNS, [_neg_row(r)], _config(args), footer)


def cmd_sweep(args) -> str:
    table = wigner.figure1_sweep(args.lambdas, args.nbars, args.tol)
    rows_ok, cols_ok = wigner.sweep_monotonicity(table, 2 * args.tol)
    rows = [_neg_row(r) for row in table for r in row]
    footer = {"nondecreasing_in_lambda": rows_ok, "nonincreasing_in_nbar": cols_ok}
    return csvio.render(NEG_COLUMNS, rows, _config(args), footer)


def _source(args, params):
    if args.model == "quantum":
        return lambda t: quantum.visibility_quantum(params, t)
    return _model(args.model, params)


def cmd_divisibility(args) -> str:
    params = _params(args)
    source = _source(args, params)
    report = analysis.semigroup_violation(source, args.pairs)
    curve = analysis.as_curve(source)
    rows = []
    for (t1, t2), dev in zip(report.times, report.deviations):
        v1, v2, v12 = (float(curve(np.array(x))) for x in (t1, t2, t1 + t2))
        rows.append([t1, t2, v1, v2, v12, dev])
    horizon = max(a + b for a, b in report.times)
    scan = analysis.monotonicity_scan(source, horizon if horizon > 0 else 1.0)
    footer = {"violation": report.violation, "monotone": report.monotone, "first_increase": scan.first_violation}
    return csvio.render(["t1", "t2", "v_t1", "v_t2", "v_t1_plus_t2", "deviation"], rows, _config(args), footer)


def cmd_tti(args) -> str:
    params = _params(args)
    taus = args.taus if args.taus is not None else np.linspace(2 * math.pi / 10, 2 * math.pi, 10)
    times = args.times if args.times is not None else np.linspace(0.0, 2 * math.pi, 10, endpoint=False)
    report = analysis.tti_check(_model(args.model, params), taus, times, args.samples, args.seed)
    if report.mc_spread is None:
        rows = zip(report.tau_grid, report.max_spread)
        return csvio.render(["tau", "max_spread"], rows, _config(args))
    rows = zip(report.tau_grid, report.max_spread, report.mc_spread, report.mc_stderr)
    return csvio.render(["tau", "max_spread", "mc_spread", "mc_stderr"], rows, _config(args))


def cmd_compare(args) -> str:
    params = _params(args)
    names = [n for n in args.models.split(",") if n]
    models = {name: _model(name, params) for name in names}
    table = analysis.compare_curves(params, models, TimeGrid(args.tmin, args.tmax, args.steps))
    footer = {f"max_deviation_{k}": v for k, v in table.max_deviation.items()}
    return csvio.render(table.columns(), table.rows(), _config(args), footer)


def cmd_oracle_check(args) -> str:
    params = _params(args)
    t = TimeGrid(args.tmin, args.tmax, args.steps).points()
    v_or, cuts = quantum.oracle_curve(params, t, args.cutoff)
    v_an = quantum.visibility_quantum(params, t)
    rows = zip(t, v_an, v_or, np.abs(v_or - v_an), cuts.tolist())
    footer = {"max_abs_diff": float(np.max(np.abs(v_or - v_an)))}
    return csvio.render(["omega_t", "v_analytic", "v_oracle", "abs_diff", "cutoff"], rows, _config(args), footer)


HANDLERS = {
    "visibility": cmd_visibility,
    "wigner": cmd_wigner,
    "negativity": cmd_negativity,
    "sweep-fig1": cmd_sweep,
    "divisibility": cmd_divisibility,
    "tti": cmd_tti,
    "compare": cmd_compare,
    "oracle-check": cmd_oracle_check,
}


def _fail(category: str, message: str, code: int) -> int:
    print(json.dumps({"error": category, "message": message}), file=sys.stderr)
    return code


def _run_checks(suites, out) -> int:
    results = checks.run(suites)
    for name, ok, detail in results:
        out.write(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "") + "\n")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_COMPUTATION


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.check:
        return _run_checks(CHECK_SUITES.get(args.command), sys.stdout)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return _fail("BadFlag", "a command is required", EXIT_BAD_FLAG)
    try:
        text = HANDLERS[args.command](args)
    except (NegativeParameter, NonFinite, MissingClassicalN, InvalidGrid, TooFewSamples) as exc:
        # parameter values rejected by validation are flag errors
        return _fail("BadFlag", f"{type(exc).__name__}: {exc}", EXIT_BAD_FLAG)
    except (RevivalError, ValueError, ArithmeticError) as exc:
        return _fail("ComputationError", f"{type(exc).__name__}: {exc}", EXIT_COMPUTATION)
    if args.output is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        return _fail("IoError", str(exc), EXIT_IO)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
