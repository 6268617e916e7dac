"""Random-unitary dephasing channels for the atom alone.

The atom picks up a random phase phi(omega_t) on |1>. Each model writes
phi as a deterministic offset plus a sum of deterministic envelopes times
independent zero-mean Gaussian coefficients, so the averaged coherence is
known in closed form and Monte Carlo estimates have an exact reference.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_simpson

from . import rng
from .errors import MissingClassicalN, MissingGenerator, SplitMismatch, TooFewSamples, TooFewSteps
from .params import ModelParams, validate

SQRT2 = math.sqrt(2.0)

Envelope = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PhaseTerm:
    """One ``envelope(omega_t) * z`` contribution with ``z ~ N(0, sigma^2)``.

    ``rate`` is the matching Hamiltonian coefficient G(omega_t) per unit
    ``z`` (atom Hamiltonian G sigma_z, phase = -2 * integral of G), when the
    model comes with one.
    """

    envelope: Envelope
    sigma: float
    rate: Optional[Envelope] = None

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma!r}")


@dataclass(frozen=True)
class StochasticPhaseModel:
    name: str
    terms: Tuple[PhaseTerm, ...] = ()
    offset: Optional[Envelope] = None
    offset_rate: Optional[Envelope] = None

    @property
    def sigmas(self) -> np.ndarray:
        return np.array([term.sigma for term in self.terms], dtype=float)

    def envelopes(self, omega_t) -> np.ndarray:
        """Envelope values, shape ``(n_terms,) + shape(omega_t)``."""
        t = np.asarray(omega_t, dtype=float)
        if not self.terms:
            return np.zeros((0,) + t.shape)
        return np.stack([np.broadcast_to(term.envelope(t), t.shape) for term in self.terms])

    def mean(self, omega_t):
        t = np.asarray(omega_t, dtype=float)
        if self.offset is None:
            return np.zeros(t.shape)
        return np.broadcast_to(self.offset(t), t.shape).astype(float)

    def variance(self, omega_t):
        env = self.envelopes(omega_t)
        sig2 = self.sigmas**2
        return np.tensordot(sig2, env**2, axes=(0, 0)) if len(sig2) else np.zeros(env.shape[1:])

    def phase(self, omega_t, coefficients) -> np.ndarray:
        """phi for given coefficient draws, shape ``(n_draws,) + shape(omega_t)``."""
        env = self.envelopes(omega_t)
        z = np.atleast_2d(np.asarray(coefficients, dtype=float))
        return self.mean(omega_t) + np.tensordot(z, env, axes=(1, 0))


@dataclass(frozen=True)
class ChannelSnapshot:
    omega_t: float
    dephasing_factor: complex


@dataclass(frozen=True)
class McEstimate:
    value: float
    stderr: float
    samples: int
    seed: int


def _require_nc(params: ModelParams) -> float:
    validate(params)
    if params.classical_n is None:
        raise MissingClassicalN("the classical-oscillator model needs classical_n")
    return params.classical_n


def model1(params: ModelParams) -> StochasticPhaseModel:
    """Mean-field coupling to a classical thermal oscillator.

    phi = -2 sqrt(2) lam (x0 sin wt + p0 (1 - cos wt)) with x0, p0 Boltzmann
    distributed, i.e. Gaussian of standard deviation sqrt(n_c).
    """
    return _model1(params.lam, math.sqrt(_require_nc(params)), "sc1")


def model1_matched(params: ModelParams) -> StochasticPhaseModel:
    """Classical oscillator whose initial spread is widened to sqrt(nbar + 1/2)."""
    validate(params)
    return _model1(params.lam, math.sqrt(params.nbar + 0.5), "sc1-matched")


def _model1(lam: float, width: float, name: str) -> StochasticPhaseModel:
    c = -2.0 * SQRT2 * lam
    g = SQRT2 * lam
    return StochasticPhaseModel(name, (
        PhaseTerm(lambda t: c * np.sin(t), width, lambda t: g * np.cos(t)),
        PhaseTerm(lambda t: c * (1.0 - np.cos(t)), width, lambda t: g * np.sin(t)),
    ))


def model2(params: ModelParams) -> StochasticPhaseModel:
    """Single Gaussian amplitude with a half-frequency envelope -4 sqrt(2) lam sin(wt/2)."""
    validate(params)
    lam = params.lam
    c = -4.0 * SQRT2 * lam
    return StochasticPhaseModel("sc2", (
        PhaseTerm(lambda t: c * np.sin(t / 2.0), math.sqrt(params.nbar + 0.5),
                  lambda t: SQRT2 * lam * np.cos(t / 2.0)),
    ))


def model3(params: ModelParams) -> StochasticPhaseModel:
    """Two Gaussian amplitudes splitting the target variance as sin^2 wt and cos^2 wt."""
    validate(params)
    lam = params.lam
    c = 4.0 * SQRT2 * lam
    g = -lam / SQRT2
    width = math.sqrt(params.nbar + 0.5)
    return StochasticPhaseModel("sc3", (
        PhaseTerm(lambda t: c * np.sin(t / 2.0) * np.sin(t), width,
                  lambda t: g * (3.0 * np.sin(1.5 * t) - np.sin(0.5 * t))),
        PhaseTerm(lambda t: c * np.sin(t / 2.0) * np.cos(t), width,
                  lambda t: g * (3.0 * np.cos(1.5 * t) - np.cos(0.5 * t))),
    ))


def zero_model(name: str = "zero") -> StochasticPhaseModel:
    """phi = 0 identically; the identity channel."""
    return StochasticPhaseModel(name, (PhaseTerm(np.zeros_like, 0.0, np.zeros_like),))


MODELS = {"sc1": model1, "sc1-matched": model1_matched, "sc2": model2, "sc3": model3}


def model_by_name(name: str, params: ModelParams) -> StochasticPhaseModel:
    try:
        return MODELS[name](params)
    except KeyError:
        raise ValueError(f"unknown model {name!r}; choose from {sorted(MODELS)}") from None


def target_variance(params: ModelParams, omega_t):
    """Phase variance 32 lam^2 (nbar + 1/2) sin^2(wt/2) that reproduces the quantum visibility."""
    s = np.sin(np.asarray(omega_t, dtype=float) / 2.0)
    return 32.0 * params.lam**2 * (params.nbar + 0.5) * s * s


# ---------------------------------------------------------------------------
# visibilities


def dephasing_factor(model: StochasticPhaseModel, omega_t: float) -> ChannelSnapshot:
    """Closed-form <e^{i phi}> for a Gaussian phase."""
    mu = float(model.mean(omega_t))
    var = float(model.variance(omega_t))
    return ChannelSnapshot(float(omega_t), complex(np.exp(1j * mu - 0.5 * var)))


def visibility_analytic(model: StochasticPhaseModel, omega_t):
    """|<e^{i phi}>| = exp(-var(phi) / 2); scalar or array ``omega_t``."""
    v = np.exp(-0.5 * model.variance(omega_t))
    return float(v) if np.ndim(v) == 0 else v


def channel_apply(model: StochasticPhaseModel, omega_t: float) -> np.ndarray:
    """Average of U |+><+| U^dag over the phase, with U = |0><0| + e^{i phi}|1><1|."""
    f = dephasing_factor(model, omega_t).dephasing_factor
    return np.array([[0.5, 0.5 * np.conj(f)], [0.5 * f, 0.5]], dtype=complex)


def _block_sums(model, times, seed, block, count):
    z = rng.standard_normals(seed, block, count, len(model.terms)) * model.sigmas
    phi = model.phase(times, z)
    c, s = np.cos(phi), np.sin(phi)
    return np.stack([c.sum(0), s.sum(0), (c * c).sum(0), (s * s).sum(0), (c * s).sum(0)])


def visibility_mc_curve(
    model: StochasticPhaseModel,
    omega_t: Sequence[float],
    samples: int,
    seed: int = rng.DEFAULT_SEED,
    workers: int = 1,
):
    """Monte Carlo visibilities at several times from one shared set of draws.

    Returns ``(values, stderrs)``. Results are bit-identical for any
    ``workers``: each block of draws is fixed by ``(seed, block)`` and the
    block sums are accumulated in block order.
    """
    if samples < 100:
        raise TooFewSamples(f"need at least 100 samples, got {samples}")
    times = np.atleast_1d(np.asarray(omega_t, dtype=float))
    blocks = list(rng.block_ranges(samples))

    def work(item):
        return _block_sums(model, times, seed, *item)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, blocks))
    else:
        parts = [work(item) for item in blocks]
    total = parts[0].copy()
    for part in parts[1:]:
        total += part

    n = float(samples)
    mc, ms = total[0] / n, total[1] / n
    vcc = np.maximum(total[2] - n * mc * mc, 0.0) / (n - 1)
    vss = np.maximum(total[3] - n * ms * ms, 0.0) / (n - 1)
    vcs = (total[4] - n * mc * ms) / (n - 1)
    value = np.hypot(mc, ms)
    with np.errstate(invalid="ignore", divide="ignore"):
        uc = np.where(value > 0, mc / value, 0.0)
        us = np.where(value > 0, ms / value, 0.0)
    # delta-method variance of |mean|; falls back to the total spread at |mean| = 0
    var = np.where(value > 0, uc * uc * vcc + us * us * vss + 2 * uc * us * vcs, vcc + vss)
    stderr = np.sqrt(np.maximum(var, 0.0) / n)
    return value, stderr


def visibility_mc(
    model: StochasticPhaseModel,
    omega_t: float,
    samples: int,
    seed: int = rng.DEFAULT_SEED,
    workers: int = 1,
) -> McEstimate:
    """Sample-average estimate of |<e^{i phi(omega_t)}>|."""
    value, stderr = visibility_mc_curve(model, [omega_t], samples, seed, workers)
    return McEstimate(float(value[0]), float(stderr[0]), samples, seed)


# ---------------------------------------------------------------------------
# Hamiltonian <-> phase relation


def hamiltonian_phase_consistency(model: StochasticPhaseModel, omega_t_max: float, steps: int = 10_000) -> float:
    """Max |(-2 * integral of G) - phi| over [0, omega_t_max] for unit coefficients.

    G is assembled from each term's ``rate`` and integrated with the
    cumulative Simpson rule; phi is the model's closed-form phase.
    """
    if steps < 1000:
        raise TooFewSteps(f"need at least 1000 steps, got {steps}")
    if any(term.rate is None for term in model.terms):
        raise MissingGenerator(f"model {model.name!r} has terms without a Hamiltonian rate")
    if model.offset is not None and model.offset_rate is None:
        raise MissingGenerator(f"model {model.name!r} has an offset without a rate")
    t = np.linspace(0.0, omega_t_max, steps + 1)
    g = np.zeros_like(t)
    for term in model.terms:
        g = g + np.broadcast_to(term.rate(t), t.shape)
    if model.offset_rate is not None:
        g = g + np.broadcast_to(model.offset_rate(t), t.shape)
    integrated = -2.0 * cumulative_simpson(g, x=t, initial=0.0)
    closed = model.phase(t, np.ones(len(model.terms)))[0]
    return float(np.max(np.abs(integrated - closed)))


# ---------------------------------------------------------------------------
# characteristic-function construction


def _validation_grid() -> np.ndarray:
    return np.linspace(0.0, 4.0 * math.pi, 1001)


def build_from_characteristic(
    variance_split: Sequence[Envelope],
    params: ModelParams,
    tol: float = 1e-9,
    name: str = "charfn",
) -> StochasticPhaseModel:
    """Independent unit Gaussians whose variances are the given split functions.

    The product of the Gaussian characteristic functions reproduces the
    quantum visibility exactly when the split sums to the target variance
    32 lam^2 (nbar + 1/2) sin^2(wt/2); that is checked on a 1001-point grid
    over [0, 4 pi].

    Raises:
        SplitMismatch: the pieces do not add up to the target, or one is negative.
    """
    validate(params)
    if not variance_split:
        raise SplitMismatch("variance split is empty")
    t = _validation_grid()
    parts = np.stack([np.broadcast_to(f(t), t.shape) for f in variance_split])
    if parts.min() < -tol:
        raise SplitMismatch(f"split function takes negative value {parts.min():.3e}")
    gap = np.max(np.abs(parts.sum(0) - target_variance(params, t)))
    if gap > tol:
        raise SplitMismatch(f"split misses the target variance by {gap:.3e}")
    terms = tuple(
        PhaseTerm(lambda x, f=f: np.sqrt(np.maximum(f(np.asarray(x, dtype=float)), 0.0)), 1.0)
        for f in variance_split
    )
    return StochasticPhaseModel(name, terms)
