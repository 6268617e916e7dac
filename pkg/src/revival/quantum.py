"""Fully quantum qubit-oscillator model.

Closed-form predictions for H = a^dag a + lam (a + a^dag) sigma_z (in units
of omega), plus a truncated Fock-space propagator that serves as an
independent brute-force check on them.

Qubit conventions: sigma_z = |1><1| - |0><0|, the interferometer prepares
|+> = (|0> + |1>)/sqrt(2). Joint states are stored with index
``qubit * cutoff + n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from .errors import CutoffTooSmall, DegenerateScan, EmptyScan
from .params import ModelParams, validate

TAIL_LIMIT = 1e-12
LEAKAGE_LIMIT = 1e-10
MAX_AUTO_CUTOFF = 4096


def visibility_quantum(params: ModelParams, omega_t):
    """Interferometric visibility exp(-16 lam^2 (nbar + 1/2) sin^2(omega_t / 2)).

    ``omega_t`` may be a scalar or an array.
    """
    validate(params)
    s = np.sin(np.asarray(omega_t, dtype=float) / 2.0)
    v = np.exp(-16.0 * params.lam**2 * (params.nbar + 0.5) * s * s)
    return float(v) if v.ndim == 0 else v


def interferometer_probability(params: ModelParams, omega_t, phi_a):
    """Probability of finding the atom in |0> after the second Hadamard."""
    v = visibility_quantum(params, omega_t)
    p = 0.5 + 0.5 * np.asarray(v) * np.cos(phi_a)
    return float(p) if np.ndim(p) == 0 else p


def visibility_from_scan(probabilities: Iterable[Tuple[float, float]]) -> float:
    """Fringe contrast (max - min) / (max + min) of a phase scan.

    Args:
        probabilities: pairs ``(phi, P)``; the phases should span a full
            period so that both extremes of the fringe are sampled.
    """
    values = np.array([p for _, p in probabilities], dtype=float)
    if values.size == 0:
        raise EmptyScan("phase scan contains no points")
    hi, lo = values.max(), values.min()
    if hi + lo == 0:
        raise DegenerateScan("max + min of the scan is zero")
    return float((hi - lo) / (hi + lo))


@dataclass(frozen=True)
class CoherentLabel:
    re: float
    im: float

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @classmethod
    def of(cls, z: complex) -> "CoherentLabel":
        z = complex(z)
        return cls(z.real, z.imag)


@dataclass(frozen=True)
class BranchEvolution:
    alpha_plus: CoherentLabel
    alpha_minus: CoherentLabel
    theta: float


def branch_evolve(alpha: CoherentLabel, params: ModelParams, omega_t: float) -> BranchEvolution:
    """Evolve |+>|alpha>; returns the branch amplitudes and the relative phase.

    The state after time ``omega_t`` is, up to a global phase,
    (e^{i theta}|0>|alpha_+> + e^{-i theta}|1>|alpha_->) / sqrt(2).
    """
    validate(params)
    a = alpha.value
    rot = complex(math.cos(omega_t), -math.sin(omega_t))
    shift = params.lam * (1.0 - rot)
    theta = params.lam * (a * (1.0 - rot)).imag
    return BranchEvolution(CoherentLabel.of(a * rot + shift), CoherentLabel.of(a * rot - shift), theta)


# ---------------------------------------------------------------------------
# truncated Fock-space oracle


@dataclass(frozen=True)
class QubitOscState:
    """Joint qubit-oscillator density matrix, shape (2 cutoff, 2 cutoff)."""

    cutoff: int
    matrix: np.ndarray

    def block(self, a: int, b: int) -> np.ndarray:
        n = self.cutoff
        return self.matrix[a * n:(a + 1) * n, b * n:(b + 1) * n]

    def qubit_reduced(self) -> np.ndarray:
        return np.array([[np.trace(self.block(a, b)) for b in range(2)] for a in range(2)])

    def oscillator_populations(self) -> np.ndarray:
        return np.real(np.diag(self.block(0, 0)) + np.diag(self.block(1, 1)))

    def check(self, trace_tol=1e-10, herm_tol=1e-12, psd_tol=1e-10) -> None:
        """Raise ``ValueError`` if the matrix is not a valid density matrix."""
        m = self.matrix
        if abs(np.trace(m) - 1.0) > trace_tol:
            raise ValueError(f"trace deviates from 1 by {abs(np.trace(m) - 1.0):.3e}")
        herm = np.max(np.abs(m - m.conj().T))
        if herm > herm_tol:
            raise ValueError(f"matrix is not Hermitian (max deviation {herm:.3e})")
        lo = np.linalg.eigvalsh(m).min()
        if lo < -psd_tol:
            raise ValueError(f"negative eigenvalue {lo:.3e}")


def annihilation(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1)


def thermal_populations(nbar: float, cutoff: int) -> Tuple[np.ndarray, float]:
    """Truncated, renormalized Bose-Einstein populations and the discarded tail mass."""
    n = np.arange(cutoff)
    if nbar == 0:
        p = np.zeros(cutoff)
        p[0] = 1.0
        return p, 0.0
    ratio = nbar / (nbar + 1.0)
    p = ratio**n / (nbar + 1.0)
    tail = ratio**cutoff
    return p / p.sum(), float(tail)


@lru_cache(maxsize=64)
def _branch_eigensystem(lam: float, cutoff: int, sign: int):
    """Eigendecomposition of a^dag a + sign * lam (a + a^dag) in the truncated space."""
    a = annihilation(cutoff)
    h = np.diag(np.arange(cutoff, dtype=float)) + sign * lam * (a + a.T)
    energies, vectors = np.linalg.eigh(h)
    energies.setflags(write=False)
    vectors.setflags(write=False)
    return energies, vectors


def branch_propagator(lam: float, cutoff: int, sign: int, omega_t: float) -> np.ndarray:
    """exp(-i omega_t H_sign) for the qubit eigenvalue ``sign`` of sigma_z."""
    energies, vectors = _branch_eigensystem(float(lam), int(cutoff), int(sign))
    return (vectors * np.exp(-1j * omega_t * energies)) @ vectors.T


def initial_cutoff(params: ModelParams) -> int:
    guess = math.ceil((4.0 * math.sqrt(params.nbar) + 2.0 * params.lam + 6.0) ** 2)
    return max(16, guess)


def _propagate(params: ModelParams, omega_t: float, cutoff: int):
    pops, tail = thermal_populations(params.nbar, cutoff)
    u0 = branch_propagator(params.lam, cutoff, -1, omega_t)
    u1 = branch_propagator(params.lam, cutoff, +1, omega_t)
    # rho_th is diagonal, so U rho_th V^dag = (U * p) @ V^dag
    blocks = [[0.5 * (ua * pops) @ ub.conj().T for ub in (u0, u1)] for ua in (u0, u1)]
    matrix = np.block(blocks)
    matrix = 0.5 * (matrix + matrix.conj().T)
    state = QubitOscState(cutoff, matrix)
    pop = state.oscillator_populations()
    leakage = float(pop[-2:].sum())
    return state, tail, leakage


def fock_propagate(params: ModelParams, omega_t: float, cutoff: Optional[int] = None) -> QubitOscState:
    """Evolve |+><+| (x) rho_th exactly inside a truncated Fock space.

    The Hamiltonian is block diagonal in sigma_z, so each block is diagonalized
    once and the evolution is exact up to truncation. With ``cutoff=None`` the
    dimension starts from a heuristic and doubles until both the discarded
    thermal tail and the population of the top two levels are below 1e-12.

    Raises:
        CutoffTooSmall: an explicit cutoff loses more than 1e-12 of the thermal
            distribution or leaks more than 1e-10 into the top two levels.
    """
    validate(params)
    if cutoff is None:
        n = initial_cutoff(params)
        while True:
            state, tail, leakage = _propagate(params, omega_t, n)
            if tail < TAIL_LIMIT and leakage < TAIL_LIMIT:
                return state
            n *= 2
            if n > MAX_AUTO_CUTOFF:
                raise CutoffTooSmall(f"no cutoff <= {MAX_AUTO_CUTOFF} meets the truncation limits")
    if cutoff < 4:
        raise CutoffTooSmall(f"cutoff must be >= 4, got {cutoff}")
    state, tail, leakage = _propagate(params, omega_t, cutoff)
    if tail > TAIL_LIMIT:
        raise CutoffTooSmall(f"thermal tail mass {tail:.3e} beyond cutoff {cutoff}")
    if leakage > LEAKAGE_LIMIT:
        raise CutoffTooSmall(f"top-level population {leakage:.3e} at cutoff {cutoff}")
    return state


def visibility_oracle(state: QubitOscState) -> float:
    """Twice the magnitude of the qubit's reduced coherence <0|rho|1>."""
    return float(2.0 * abs(np.trace(state.block(0, 1))))


def product_state(nbar: float, cutoff: int) -> QubitOscState:
    """|+><+| (x) rho_th without any evolution."""
    pops, _ = thermal_populations(nbar, cutoff)
    rho = np.diag(pops).astype(complex)
    plus = np.full((2, 2), 0.5, dtype=complex)
    return QubitOscState(cutoff, np.kron(plus, rho))


# ---------------------------------------------------------------------------
# factorized propagator


def conditional_displacement(lam: float, omega_t: float, cutoff: int) -> np.ndarray:
    """exp(-lam ((e^{i wt} - 1) a^dag - (e^{-i wt} - 1) a) sigma_z) on the joint space."""
    a = annihilation(cutoff)
    c = np.exp(1j * omega_t) - 1.0
    gen = -lam * (c * a.T - np.conj(c) * a)
    sz = np.diag([-1.0, 1.0])
    return expm(np.kron(sz, gen))


def factorized_propagator(lam: float, omega_t: float, cutoff: int) -> np.ndarray:
    """Product of the geometric phase, free rotation and conditional displacement."""
    # sigma_z^2 = 1, so the nonlinear factor is a pure phase
    phase = np.exp(1j * lam**2 * (omega_t - math.sin(omega_t)))
    free = np.kron(np.eye(2), np.diag(np.exp(-1j * omega_t * np.arange(cutoff))))
    return phase * free @ conditional_displacement(lam, omega_t, cutoff)


def direct_propagator(lam: float, omega_t: float, cutoff: int) -> np.ndarray:
    """exp(-i omega_t H) by dense matrix exponentiation of the joint Hamiltonian."""
    a = annihilation(cutoff)
    sz = np.diag([-1.0, 1.0])
    h = np.kron(np.eye(2), np.diag(np.arange(cutoff, dtype=float))) + lam * np.kron(sz, a + a.T)
    return expm(-1j * omega_t * h)


def interior_projector(cutoff: int, interior: Optional[int] = None) -> np.ndarray:
    """Columns selecting Fock levels below ``interior`` (default cutoff // 2) in both qubit blocks."""
    interior = cutoff // 2 if interior is None else interior
    keep = [q * cutoff + n for q in range(2) for n in range(interior)]
    return np.eye(2 * cutoff)[:, keep]


def unitary_factorization_check(params: ModelParams, omega_t: float, cutoff: int = 64) -> float:
    """Operator-norm distance between exp(-iHt) and its three-factor product.

    Only the action on the lower half of the Fock ladder is compared; the
    truncated ladder operators distort the top levels.
    """
    validate(params)
    if cutoff < 4:
        raise CutoffTooSmall(f"cutoff must be >= 4, got {cutoff}")
    proj = interior_projector(cutoff)
    diff = (direct_propagator(params.lam, omega_t, cutoff)
            - factorized_propagator(params.lam, omega_t, cutoff)) @ proj
    return float(np.linalg.norm(diff, 2))


def displacement_identity_distance(params: ModelParams, omega_t: float, cutoff: int = 64) -> float:
    """Operator-norm distance of the conditional displacement from the identity (interior block)."""
    validate(params)
    proj = interior_projector(cutoff)
    d = conditional_displacement(params.lam, omega_t, cutoff) - np.eye(2 * cutoff)
    return float(np.linalg.norm(d @ proj, 2))


def oracle_curve(params: ModelParams, omega_t: Sequence[float], cutoff: Optional[int] = None):
    """Fock-space visibilities and the cutoffs actually used, one per time."""
    vis, cuts = [], []
    for t in omega_t:
        state = fock_propagate(params, float(t), cutoff)
        vis.append(visibility_oracle(state))
        cuts.append(state.cutoff)
    return np.array(vis), np.array(cuts)
