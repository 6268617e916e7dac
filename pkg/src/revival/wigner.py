"""Wigner function of the oscillator at half a mechanical period.

The oscillator starts thermal, evolves with the atom for omega_t = pi and
is then decoupled by projecting the atom onto |+>. In dimensionless
quadratures (Q, P) its Wigner function is two displaced thermal Gaussians
plus an interference term oscillating as cos(8 lam P).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.special import erf, erfc

from . import cubature
from .errors import NegativeParameter, NonFinite

SQRT2 = math.sqrt(2.0)
SQRT8 = math.sqrt(8.0)


@dataclass(frozen=True)
class WignerSpec:
    lam: float
    nbar: float = 0.0

    def __post_init__(self):
        for name in ("lam", "nbar"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise NonFinite(f"{name} must be finite, got {value!r}")
            if value < 0:
                raise NegativeParameter(f"{name} must be >= 0, got {value!r}")

    @property
    def width(self) -> float:
        """2 nbar + 1."""
        return 2.0 * self.nbar + 1.0

    @property
    def norm(self) -> float:
        s = self.width
        return math.pi * s * (1.0 + math.exp(-8.0 * self.lam**2 * s))


def wigner_value(spec: WignerSpec, q, p):
    """W(Q, P) in the compact exp-cosh plus cosine form."""
    s, lam = spec.width, spec.lam
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    gauss = np.exp((-2.0 * p * p - 2.0 * q * q) / s)
    w = (2.0 / spec.norm) * gauss * (
        math.exp(-8.0 * lam**2 / s) * np.cosh(8.0 * q * lam / s) + np.cos(8.0 * p * lam)
    )
    return float(w) if w.ndim == 0 else w


def wigner_components(spec: WignerSpec, q, p):
    """The two displaced Gaussians and the interference term, ``(w_plus, w_minus, w_int)``."""
    s, lam, n = spec.width, spec.lam, spec.norm
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    w_plus = np.exp((-2.0 * p * p - (SQRT2 * q + SQRT8 * lam) ** 2) / s) / n
    w_minus = np.exp((-2.0 * p * p - (SQRT2 * q - SQRT8 * lam) ** 2) / s) / n
    w_int = (2.0 / n) * np.exp((-2.0 * p * p - 2.0 * q * q) / s) * np.cos(8.0 * p * lam)
    return w_plus, w_minus, w_int


def negativity_bound(spec: WignerSpec) -> float:
    """tanh(4 lam^2); derived for the ground state, advisory when nbar > 0."""
    return math.tanh(4.0 * spec.lam**2)


def bound_is_advisory(spec: WignerSpec) -> bool:
    return spec.nbar > 0


# ---------------------------------------------------------------------------
# tails and integration domain


def envelope_tail(spec: WignerSpec, half_width: float) -> float:
    """Mass of |W| outside the square [-L, L]^2, bounded by the triangle inequality."""
    s, lam, L = spec.width, spec.lam, half_width
    b = math.sqrt(2.0 / s)
    g = math.sqrt(math.pi * s / 2.0)
    # each Gaussian factor integrates to g over the line; count the strips |P|>L and |Q|>L
    p_tail = 4.0 * g * g * erfc(b * L)
    q_tail = g * g * (erfc(b * (L - 2 * lam)) + erfc(b * (L + 2 * lam)) + 2.0 * erfc(b * L))
    return (p_tail + q_tail) / spec.norm


def cosine_tail(spec: WignerSpec, half_width: float) -> float:
    """Mass of the interference envelope (2/N) e^{-2(P^2+Q^2)/s} outside [-L, L]^2."""
    s = spec.width
    inside = erf(math.sqrt(2.0 / s) * half_width) ** 2
    return (2.0 / spec.norm) * (math.pi * s / 2.0) * (1.0 - inside)


def domain_half_width(spec: WignerSpec, eps: float) -> float:
    """sqrt(s/2) sqrt(ln(1/eps)) + sqrt(8) lam + 1, the truncated box half-width."""
    return math.sqrt(spec.width / 2.0) * math.sqrt(math.log(1.0 / eps)) + SQRT8 * spec.lam + 1.0


def crossover_q(spec: WignerSpec) -> float:
    """|Q| beyond which the exp-cosh term alone exceeds 1, so W >= 0 there."""
    if spec.lam == 0:
        return 0.0
    s = spec.width
    return s / (8.0 * spec.lam) * math.acosh(math.exp(8.0 * spec.lam**2 / s))


def trough_strips(spec: WignerSpec, p_max: float) -> List[Tuple[float, float]]:
    """P-intervals in [0, p_max] where cos(8 lam P) < -exp(-8 lam^2 / s).

    Outside them W cannot be negative.
    """
    if spec.lam == 0:
        return []
    k = 8.0 * spec.lam
    half = math.acos(math.exp(-8.0 * spec.lam**2 / spec.width))
    strips = []
    n = 0
    while True:
        centre = (2 * n + 1) * math.pi
        lo, hi = (centre - half) / k, (centre + half) / k
        if lo >= p_max:
            break
        if hi > lo:
            strips.append((max(lo, 0.0), min(hi, p_max)))
        n += 1
    return strips


# ---------------------------------------------------------------------------
# negativity


@dataclass(frozen=True)
class NegativityResult:
    delta: float
    est_abs_error: float
    spec: WignerSpec

    @property
    def bound(self) -> float:
        return negativity_bound(self.spec)


def _box(spec: WignerSpec, eps: float, tail) -> float:
    L = domain_half_width(spec, eps)
    while tail(spec, L) > eps:
        L += 0.5
    return L


def negativity(spec: WignerSpec, tol: float = 1e-6, order: int = 6) -> NegativityResult:
    """delta = integral of |W| - 1 by adaptive cubature.

    Since W integrates to one, delta equals twice the integrated negative part,
    which is what gets integrated; it is supported only inside the trough
    strips with |Q| below the exp-cosh crossover, and by symmetry one
    quadrant suffices. The box is truncated where the Gaussian tail of the
    negative part drops below tol / 10.

    Raises:
        QuadratureNonConvergence: refinement budget exhausted.
    """
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol!r}")
    eps = tol / 10.0
    L = _box(spec, eps / 2.0, cosine_tail)
    tail = 2.0 * cosine_tail(spec, L)
    q_hi = min(crossover_q(spec), L)
    strips = trough_strips(spec, L)
    if q_hi <= 0 or not strips:
        return NegativityResult(0.0, tail, spec)

    def negative_part(q, p):
        return np.maximum(-wigner_value(spec, q, p), 0.0)

    cells = np.concatenate([
        cubature.initial_cells(cubature.uniform_edges(0.0, q_hi, 4), cubature.uniform_edges(lo, hi, 4))
        for lo, hi in strips
    ])
    # delta = 2 * (4 quadrants) * quadrant integral
    res = cubature.integrate(negative_part, cells, tol=0.9 * tol / 8.0, order=order)
    return NegativityResult(8.0 * res.value, float(8.0 * res.error + tail), spec)


def normalization(spec: WignerSpec, tol: float = 1e-10, order: int = 6) -> Tuple[float, float]:
    """Integral of W over the plane and its estimated error, by the same cubature."""
    eps = tol / 10.0
    L = _box(spec, eps, envelope_tail)
    edges = cubature.uniform_edges(0.0, L, 8)
    res = cubature.integrate(lambda q, p: wigner_value(spec, q, p),
                             cubature.initial_cells(edges, edges), tol=0.9 * tol / 4.0, order=order)
    return 4.0 * res.value, float(4.0 * res.error + envelope_tail(spec, L))


def figure1_sweep(lambdas: Sequence[float], nbars: Sequence[float], tol: float = 1e-6) -> List[List[NegativityResult]]:
    """Negativity table indexed ``[nbar_index][lambda_index]``."""
    if len(lambdas) == 0 or len(nbars) == 0:
        raise ValueError("sweep grids must be nonempty")
    return [[negativity(WignerSpec(lam, nbar), tol) for lam in lambdas] for nbar in nbars]


def sweep_monotonicity(table: List[List[NegativityResult]], slack: float) -> Tuple[bool, bool]:
    """(nondecreasing in lam along every row, nonincreasing in nbar down every column)."""
    d = np.array([[r.delta for r in row] for row in table])
    rows_ok = bool(np.all(np.diff(d, axis=1) >= -slack))
    cols_ok = bool(np.all(np.diff(d, axis=0) <= slack))
    return rows_ok, cols_ok


# ---------------------------------------------------------------------------
# sampled grids


@dataclass(frozen=True)
class WignerGrid:
    spec: WignerSpec
    q_extent: float
    p_extent: float
    nq: int
    np_: int
    values: np.ndarray

    @property
    def q(self) -> np.ndarray:
        return np.linspace(-self.q_extent, self.q_extent, self.nq)

    @property
    def p(self) -> np.ndarray:
        return np.linspace(-self.p_extent, self.p_extent, self.np_)

    def riemann_sum(self) -> float:
        dq = 2 * self.q_extent / (self.nq - 1)
        dp = 2 * self.p_extent / (self.np_ - 1)
        return float(self.values.sum() * dq * dp)

    def negativity_estimate(self) -> float:
        dq = 2 * self.q_extent / (self.nq - 1)
        dp = 2 * self.p_extent / (self.np_ - 1)
        return float(np.abs(self.values).sum() * dq * dp - 1.0)

    def rows(self):
        """``(q, p, w)`` triples, q varying slowest."""
        for i, q in enumerate(self.q):
            for j, p in enumerate(self.p):
                yield float(q), float(p), float(self.values[i, j])


def wigner_grid(spec: WignerSpec, q_extent: float, p_extent: float, nq: int, np_: int) -> WignerGrid:
    if nq < 2 or np_ < 2:
        raise ValueError("grid needs at least two points per axis")
    q = np.linspace(-q_extent, q_extent, nq)
    p = np.linspace(-p_extent, p_extent, np_)
    values = wigner_value(spec, q[:, None], p[None, :])
    return WignerGrid(spec, q_extent, p_extent, nq, np_, values)
