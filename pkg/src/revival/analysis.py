"""Diagnostics of the premises behind the monotone-visibility theorem.

A dephasing channel with fixed populations is fixed by its scalar
dephasing factor, so divisibility and time-translation invariance are
tested on visibilities: a one-parameter semigroup needs
V(t1 + t2) = V(t1) V(t2), and translation invariance needs the visibility
of the phase increment over [t, t + tau] to be independent of t.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from . import rng
from .params import ModelParams, TimeGrid, validate
from .quantum import visibility_quantum
from .semiclassical import PhaseTerm, StochasticPhaseModel, model1, visibility_analytic, visibility_mc_curve

VisibilitySource = Union[StochasticPhaseModel, Callable[[np.ndarray], np.ndarray]]


def as_curve(source: VisibilitySource) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(source, StochasticPhaseModel):
        return lambda t: np.asarray(visibility_analytic(source, np.asarray(t, dtype=float)))
    return lambda t: np.asarray(source(np.asarray(t, dtype=float)), dtype=float)


@dataclass(frozen=True)
class MonotonicityResult:
    monotone: bool
    first_violation: Optional[float]


def monotonicity_scan(source: VisibilitySource, t_max: float, steps: int = 1000, atol: float = 1e-13) -> MonotonicityResult:
    """Whether V is nonincreasing on ``steps + 1`` evenly spaced points of [0, t_max].

    ``first_violation`` is the first grid time at which V rises by more than
    ``atol`` over its predecessor.
    """
    if steps < 100:
        raise ValueError(f"need at least 100 steps, got {steps}")
    t = np.linspace(0.0, t_max, steps + 1)
    v = np.broadcast_to(as_curve(source)(t), t.shape)
    rises = np.nonzero(np.diff(v) > atol)[0]
    if len(rises) == 0:
        return MonotonicityResult(True, None)
    return MonotonicityResult(False, float(t[rises[0] + 1]))


@dataclass(frozen=True)
class DivisibilityReport:
    times: Tuple[Tuple[float, float], ...]
    deviations: Tuple[float, ...]
    violation: float
    monotone: bool


def semigroup_violation(source: VisibilitySource, pairs: Sequence[Tuple[float, float]]) -> DivisibilityReport:
    """Max |V(t1 + t2) - V(t1) V(t2)| over ``pairs``.

    ``monotone`` comes from a scan of the same curve over [0, max(t1 + t2)].
    """
    if len(pairs) == 0:
        raise ValueError("pairs must be nonempty")
    curve = as_curve(source)
    t1 = np.array([a for a, _ in pairs], dtype=float)
    t2 = np.array([b for _, b in pairs], dtype=float)
    dev = np.abs(curve(t1 + t2) - curve(t1) * curve(t2))
    horizon = float(np.max(t1 + t2))
    monotone = monotonicity_scan(source, horizon if horizon > 0 else 1.0).monotone
    return DivisibilityReport(
        tuple((float(a), float(b)) for a, b in pairs),
        tuple(float(d) for d in np.broadcast_to(dev, t1.shape)),
        float(np.max(dev)),
        monotone,
    )


# ---------------------------------------------------------------------------
# time-translation invariance


def increment_model(model: StochasticPhaseModel, t: float) -> StochasticPhaseModel:
    """phi(t + tau) - phi(t) as a model in tau, driven by the same coefficients."""
    terms = tuple(
        PhaseTerm(lambda x, e=term.envelope: e(t + np.asarray(x)) - e(t), term.sigma)
        for term in model.terms
    )
    offset = None
    if model.offset is not None:
        offset = lambda x, o=model.offset: o(t + np.asarray(x)) - o(t)
    return StochasticPhaseModel(f"{model.name}-increment@{t:g}", terms, offset)


def increment_visibility(model: StochasticPhaseModel, t: float, tau):
    return visibility_analytic(increment_model(model, t), tau)


@dataclass(frozen=True)
class TtiReport:
    tau_grid: Tuple[float, ...]
    t_grid: Tuple[float, ...]
    max_spread: Tuple[float, ...]
    mc_spread: Optional[Tuple[float, ...]] = None
    mc_stderr: Optional[Tuple[float, ...]] = None

    @property
    def worst(self) -> float:
        return max(self.max_spread)


def tti_check(
    model: StochasticPhaseModel,
    tau_grid: Sequence[float],
    t_grid: Sequence[float],
    samples: int = 0,
    seed: int = rng.DEFAULT_SEED,
) -> TtiReport:
    """Spread over t of the increment visibility |<exp(i(phi(t + tau) - phi(t)))>|.

    With ``samples > 0`` the same spread is also estimated by Monte Carlo,
    using one shared set of coefficient draws for every (t, tau); the
    reported stderr per tau is the largest one met on that row.
    """
    taus = np.asarray(tau_grid, dtype=float)
    ts = np.asarray(t_grid, dtype=float)
    spread, mc_spread, mc_err = [], [], []
    for tau in taus:
        ref = increment_visibility(model, 0.0, tau)
        vals = np.array([increment_visibility(model, t, tau) for t in ts])
        spread.append(float(np.max(np.abs(vals - ref))))
        if samples:
            v0, e0 = visibility_mc_curve(increment_model(model, 0.0), [tau], samples, seed)
            worst, err = 0.0, float(e0[0])
            for t in ts:
                v, e = visibility_mc_curve(increment_model(model, float(t)), [tau], samples, seed)
                worst = max(worst, abs(float(v[0]) - float(v0[0])))
                err = max(err, float(e[0]))
            mc_spread.append(worst)
            mc_err.append(err)
    return TtiReport(
        tuple(float(x) for x in taus),
        tuple(float(x) for x in ts),
        tuple(spread),
        tuple(mc_spread) if samples else None,
        tuple(mc_err) if samples else None,
    )


def tti_check_model1(params: ModelParams, tau_grid: Sequence[float], t_grid: Sequence[float], samples: int = 0,
                     seed: int = rng.DEFAULT_SEED) -> TtiReport:
    """Translation-invariance check for the classical-oscillator model.

    Analytically var(phi(t + tau) - phi(t)) = 16 lam^2 n_c (1 - cos tau), free of t.
    """
    return tti_check(model1(params), tau_grid, t_grid, samples, seed)


def model1_increment_variance(params: ModelParams, tau):
    validate(params)
    return 16.0 * params.lam**2 * params.classical_n * (1.0 - np.cos(tau))


# ---------------------------------------------------------------------------
# curve comparison


@dataclass(frozen=True)
class CurveTable:
    omega_t: np.ndarray
    v_quantum: np.ndarray
    models: Dict[str, np.ndarray]

    @property
    def max_deviation(self) -> Dict[str, float]:
        """Per model, max |V_model - V_quantum| over the grid."""
        return {name: float(np.max(np.abs(v - self.v_quantum))) for name, v in self.models.items()}

    def pairwise_deviation(self) -> Dict[Tuple[str, str], float]:
        curves = {"quantum": self.v_quantum, **self.models}
        names = list(curves)
        return {
            (a, b): float(np.max(np.abs(curves[a] - curves[b])))
            for i, a in enumerate(names) for b in names[i + 1:]
        }

    def columns(self) -> List[str]:
        return ["omega_t", "v_quantum"] + [f"v_{name}" for name in self.models]

    def rows(self):
        for i, t in enumerate(self.omega_t):
            yield [float(t), float(self.v_quantum[i])] + [float(v[i]) for v in self.models.values()]


def compare_curves(params: ModelParams, models: Union[Sequence[StochasticPhaseModel], Mapping[str, StochasticPhaseModel]],
                   grid: TimeGrid) -> CurveTable:
    """Quantum visibility next to the closed-form visibility of each model."""
    validate(params)
    if not isinstance(models, Mapping):
        models = {m.name: m for m in models}
    t = grid.points()
    return CurveTable(
        t,
        np.asarray(visibility_quantum(params, t)),
        {name: np.asarray(visibility_analytic(m, t)) for name, m in models.items()},
    )
