"""Quick invariant suites, run by ``revival --check``.

Each check returns ``(name, passed, detail)``. They use reduced grids so
the whole suite finishes in a few seconds; the test suite covers the full
grids.
"""

from __future__ import annotations

import math
from typing import Callable, Dict, List, Tuple

import numpy as np

from . import analysis, quantum, semiclassical as sc, wigner
from .params import ModelParams, validate

CheckResult = Tuple[str, bool, str]

TWO_PI = 2.0 * math.pi


def _params_checks() -> List[CheckResult]:
    p = ModelParams(0.1, 0.5, 1.0)
    same = validate(validate(p)) == validate(p)
    return [("params: validate is idempotent", same, "")]


def _quantum_checks() -> List[CheckResult]:
    out = []
    grid = [(lam, nbar) for lam in (0.05, 0.1, 0.5) for nbar in (0.0, 0.5, 2.0)]
    worst = max(abs(quantum.visibility_quantum(ModelParams(l, n), TWO_PI * k) - 1.0)
                for l, n in grid for k in range(11))
    out.append(("quantum: full revival at 2 pi n", worst <= 1e-12, f"max |V - 1| = {worst:.2e}"))
    t = np.linspace(0.0, TWO_PI, 6284)
    v = quantum.visibility_quantum(ModelParams(0.3, 1.0), t)
    tmin = float(t[np.argmin(v)])
    out.append(("quantum: minimum at pi", abs(tmin - math.pi) <= 1e-3, f"argmin = {tmin:.6f}"))
    period = np.max(np.abs(quantum.visibility_quantum(ModelParams(0.2, 1.0), t)
                           - quantum.visibility_quantum(ModelParams(0.2, 1.0), t + TWO_PI)))
    out.append(("quantum: 2 pi periodicity", period <= 1e-12, f"max diff = {period:.2e}"))
    diffs = []
    for lam, nbar in [(0.1, 0.0), (0.3, 2.0)]:
        ts = np.linspace(0.0, 4 * math.pi, 9)
        v_or, _ = quantum.oracle_curve(ModelParams(lam, nbar), ts)
        diffs.append(np.max(np.abs(v_or - quantum.visibility_quantum(ModelParams(lam, nbar), ts))))
    out.append(("quantum: Fock oracle matches closed form", max(diffs) <= 1e-6, f"max diff = {max(diffs):.2e}"))
    d = quantum.unitary_factorization_check(ModelParams(0.1), math.pi, 64)
    out.append(("quantum: three-factor propagator", d <= 1e-8, f"norm distance = {d:.2e}"))
    return out


def _semiclassical_checks() -> List[CheckResult]:
    out = []
    p = ModelParams(0.1, 0.5, 1.0)
    t = np.linspace(0.0, 4 * math.pi, 1001)
    vq = quantum.visibility_quantum(p, t)
    total = lambda x: sc.target_variance(p, x)
    models = [sc.model2(p), sc.model3(p), sc.model1_matched(p),
              sc.build_from_characteristic([lambda x: 0.3 * total(x), lambda x: 0.7 * total(x)], p)]
    worst = max(np.max(np.abs(sc.visibility_analytic(m, t) - vq)) for m in models)
    out.append(("semiclassical: condition equation", worst <= 1e-12, f"max diff = {worst:.2e}"))
    rev = max(abs(sc.visibility_analytic(m, TWO_PI * k) - 1.0) for m in models for k in range(4))
    out.append(("semiclassical: revival certainty", rev <= 1e-12, f"max |V - 1| = {rev:.2e}"))
    cons = max(sc.hamiltonian_phase_consistency(m, 4 * math.pi, 10_000)
               for m in (sc.model1(p), sc.model2(p), sc.model3(p)))
    out.append(("semiclassical: Hamiltonian reproduces phase", cons <= 1e-6, f"max discrepancy = {cons:.2e}"))
    m = sc.model2(p)
    ts = np.linspace(0.1, 6.0, 5)
    v, e = sc.visibility_mc_curve(m, ts, 20_000, seed=7)
    z = np.max(np.abs(v - sc.visibility_analytic(m, ts)) / e)
    out.append(("semiclassical: Monte Carlo within 5 stderr", z <= 5, f"max z = {z:.2f}"))
    ok = True
    for tt in ts:
        rho = sc.channel_apply(m, tt)
        ok &= abs(np.trace(rho) - 1) < 1e-12 and np.linalg.eigvalsh(rho).min() > -1e-12
    out.append(("semiclassical: channel output is a state", bool(ok), ""))
    return out


def _wigner_checks() -> List[CheckResult]:
    out = []
    worst = 0.0
    for lam, nbar in [(0.0, 0.0), (0.5, 1.0), (1.0, 4.0)]:
        total, _ = wigner.normalization(wigner.WignerSpec(lam, nbar))
        worst = max(worst, abs(total - 1.0))
    out.append(("wigner: normalization", worst <= 1e-8, f"max |int W - 1| = {worst:.2e}"))
    rng = np.random.default_rng(0)
    q, p = rng.uniform(-3, 3, 1000), rng.uniform(-3, 3, 1000)
    spec = wigner.WignerSpec(0.4, 0.5)
    comp = np.max(np.abs(sum(wigner.wigner_components(spec, q, p)) - wigner.wigner_value(spec, q, p)))
    out.append(("wigner: components sum to W", comp <= 1e-12, f"max diff = {comp:.2e}"))
    excess = max(wigner.negativity(wigner.WignerSpec(lam, 0.0)).delta - math.tanh(4 * lam**2)
                 for lam in np.linspace(0.0, 1.0, 6))
    out.append(("wigner: negativity below tanh(4 lam^2)", excess <= 1e-6, f"max excess = {excess:.2e}"))
    return out


def _analysis_checks() -> List[CheckResult]:
    out = []
    p = ModelParams(0.1, 0.0, 0.5)
    flags = [analysis.monotonicity_scan(m, TWO_PI).monotone
             for m in (sc.model1(p), sc.model2(p), sc.model3(p))]
    out.append(("analysis: coupled models are non-monotone", not any(flags), ""))
    viol = analysis.semigroup_violation(sc.model1(p), [(math.pi, math.pi)]).violation
    # V(2 pi) = 1 while V(pi)^2 = exp(-32 lam^2 n_c)
    expected = 1.0 - math.exp(-32 * 0.01 * 0.5)
    out.append(("analysis: model 1 semigroup violation", abs(viol - expected) <= 1e-12, f"{viol:.10f}"))
    exp_curve = analysis.semigroup_violation(lambda t: np.exp(-0.3 * t), [(0.5, 1.0), (2.0, 3.0)]).violation
    out.append(("analysis: exponential decay is a semigroup", exp_curve <= 1e-12, f"{exp_curve:.2e}"))
    tti = analysis.tti_check_model1(p, np.linspace(0.1, 6.0, 10), np.linspace(0.0, 5.0, 10)).worst
    out.append(("analysis: model 1 time-translation invariance", tti <= 1e-12, f"spread = {tti:.2e}"))
    return out


SUITES: Dict[str, Callable[[], List[CheckResult]]] = {
    "params": _params_checks,
    "quantum": _quantum_checks,
    "semiclassical": _semiclassical_checks,
    "wigner": _wigner_checks,
    "analysis": _analysis_checks,
}


def run(suites=None) -> List[CheckResult]:
    results = []
    for name in suites or SUITES:
        results.extend((label, bool(ok), detail) for label, ok, detail in SUITES[name]())
    return results
