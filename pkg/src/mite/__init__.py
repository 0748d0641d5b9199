"""Deterministic ground-state preparation from weak measurements.

The protocol measures each Hamiltonian term weakly, so that each two-outcome
measurement is a stochastic cousin of a small imaginary-time step. An
outcome-conditioned correction unitary then returns the target ray to itself
every round, which turns the random measurement walk into deterministic
convergence to the target state.

Layering: ``linalg`` (dense state/operator primitives) -> ``measurement``
(weak-measurement Kraus pairs and the pointer backend) -> ``trotter``
(sequence operators, signed Hamiltonians, exact imaginary-time reference)
-> ``stabilizer`` (fixed points, correction tables) -> ``models`` (the three
reference systems) -> ``evolution`` (trajectories/ensembles) -> ``config`` /
``experiments`` / ``checks`` / ``cli`` (experiment plumbing).
"""

from .errors import (
    AnnihilatedTargetError,
    ConfigError,
    DegenerateFixedPointError,
    InsufficientDataError,
    MiteError,
    PositivityError,
)
from .linalg import Operator, PauliString, StateVector, fidelity, materialize
from .measurement import HamiltonianTerm, KrausPair, build_kraus_pair
from .trotter import ModelHamiltonian, exact_ite, sequence_operator, signed_hamiltonian
from .stabilizer import CorrectionTable, TargetSpec, build_table, fixed_point
from .models import (
    ModelBundle,
    SearchInstance,
    search_model,
    single_qubit_model,
    tfim_model,
)
from .evolution import (
    EnsembleSummary,
    TrajectoryRecord,
    fit_log_infidelity,
    run_ensemble,
    run_trajectory,
)
from .config import RunConfig, SweepConfig

__version__ = "0.1.0"

__all__ = [
    "AnnihilatedTargetError",
    "ConfigError",
    "CorrectionTable",
    "DegenerateFixedPointError",
    "EnsembleSummary",
    "HamiltonianTerm",
    "InsufficientDataError",
    "KrausPair",
    "MiteError",
    "ModelBundle",
    "ModelHamiltonian",
    "Operator",
    "PauliString",
    "PositivityError",
    "RunConfig",
    "SearchInstance",
    "StateVector",
    "SweepConfig",
    "TargetSpec",
    "TrajectoryRecord",
    "build_kraus_pair",
    "build_table",
    "exact_ite",
    "fidelity",
    "fit_log_infidelity",
    "fixed_point",
    "materialize",
    "run_ensemble",
    "run_trajectory",
    "search_model",
    "sequence_operator",
    "signed_hamiltonian",
    "single_qubit_model",
    "tfim_model",
    "__version__",
]
