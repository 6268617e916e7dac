"""Collapse and revival of interferometric visibility for a qubit coupled to a harmonic oscillator."""

from .errors import RevivalError
from .params import ModelParams, TimeGrid, from_physical, validate
from .quantum import (
    branch_evolve,
    fock_propagate,
    interferometer_probability,
    unitary_factorization_check,
    visibility_from_scan,
    visibility_oracle,
    visibility_quantum,
)
from .semiclassical import (
    StochasticPhaseModel,
    build_from_characteristic,
    channel_apply,
    hamiltonian_phase_consistency,
    model1,
    model1_matched,
    model2,
    model3,
    visibility_analytic,
    visibility_mc,
)
from .wigner import WignerSpec, negativity, negativity_bound, wigner_components, wigner_value
from .analysis import compare_curves, monotonicity_scan, semigroup_violation, tti_check_model1

__version__ = "0.1.0"
