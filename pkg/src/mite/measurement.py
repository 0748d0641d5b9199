"""Weak-measurement Kraus pairs and outcome sampling.

Each Hamiltonian term H with shifted spectrum in [0, s_max] yields the pair

    M0 = (I - eps*H) / sqrt(2),      M1 = sqrt(I - M0^dag M0),

a two-outcome measurement whose no-jump branch approximates e^{-eps*H}/sqrt(2).
A second, independent realization prepares an ancilla pointer in
(|P0>+|P1>)/sqrt(2), couples it through exp(-i eps H (x) Y_P) and measures the
ancilla projectively.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import PositivityError
from .linalg import (
    Operator,
    PauliString,
    StateVector,
    hermitian_sqrt,
    materialize,
)

COMPLETENESS_TOL = 1e-10

# Stricter than bare positivity; enforced at the configuration layer only.
VALIDITY_BOUND = 0.5


class HamiltonianTerm:
    """One summand of the model Hamiltonian, shifted to be PSD.

    ``shift`` is the identity offset added on top of the Pauli strings, so
    reported energies can be un-shifted later.
    """

    __slots__ = ("label", "strings", "shift", "num_qubits", "matrix", "spectral_max")

    def __init__(
        self,
        label: str,
        strings: Sequence[PauliString],
        shift: float,
        num_qubits: int,
    ):
        mat = shift * np.eye(2**num_qubits, dtype=complex)
        for s in strings:
            mat = mat + materialize(s, num_qubits).entries
        if np.linalg.norm(mat - mat.conj().T) > 1e-10:
            raise ValueError(f"term {label!r} is not Hermitian")
        eigs = np.linalg.eigvalsh(mat)
        if eigs[0] < -1e-10:
            raise ValueError(
                f"term {label!r} is not PSD after shift: min eigenvalue {eigs[0]!r}"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "strings", tuple(strings))
        object.__setattr__(self, "shift", float(shift))
        object.__setattr__(self, "num_qubits", int(num_qubits))
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "spectral_max", float(eigs[-1]))

    def __setattr__(self, name, value):
        raise AttributeError("HamiltonianTerm is immutable")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"HamiltonianTerm({self.label!r}, L={self.num_qubits})"


@dataclass(frozen=True)
class KrausPair:
    """The matrices (M0, M1) for one term at one epsilon."""

    m0: np.ndarray
    m1: np.ndarray
    epsilon: float
    term: HamiltonianTerm


@dataclass(frozen=True)
class OutcomeRecord:
    outcome: int
    probability: float
    post_state: StateVector


def build_kraus_pair(term: HamiltonianTerm, epsilon: float) -> KrausPair:
    """Construct the weak-measurement pair; requires eps * spectral_max < 1."""
    if epsilon <= 0:
        raise PositivityError(f"epsilon must be positive, got {epsilon}")
    if epsilon * term.spectral_max >= 1.0:
        raise PositivityError(
            f"positivity violated for term {term.label!r}: "
            f"eps={epsilon} times eigenvalue {term.spectral_max} reaches 1"
        )
    dim = term.dim
    m0 = (np.eye(dim) - epsilon * term.matrix) / np.sqrt(2.0)
    m1 = hermitian_sqrt(Operator(np.eye(dim) - m0.conj().T @ m0)).entries
    defect = np.linalg.norm(m0.conj().T @ m0 + m1.conj().T @ m1 - np.eye(dim))
    if defect > COMPLETENESS_TOL:
        raise PositivityError(f"completeness defect {defect!r} for {term.label!r}")
    m0.setflags(write=False)
    return KrausPair(m0=m0, m1=m1, epsilon=float(epsilon), term=term)


def collapse(
    m0: np.ndarray, m1: np.ndarray, amps: np.ndarray, rng
) -> tuple[int, float, np.ndarray]:
    """Sample one two-outcome measurement on raw amplitudes.

    Consumes exactly one uniform draw from ``rng``. Returns the outcome bit,
    its Born probability and the collapsed (normalized) amplitudes.
    """
    v0 = m0 @ amps
    p0 = float(np.vdot(v0, v0).real)
    if not -1e-12 <= p0 <= 1.0 + 1e-12:
        raise RuntimeError(f"broken Kraus pair: outcome-0 probability {p0!r}")
    if rng.random() < p0:
        return 0, p0, v0 / np.sqrt(p0)
    v1 = m1 @ amps
    p1 = float(np.vdot(v1, v1).real)
    return 1, p1, v1 / np.sqrt(p1)


def sample(pair: KrausPair, psi: StateVector, rng) -> OutcomeRecord:
    """Born-rule sampling of a Kraus pair on a state."""
    bit, prob, amps = collapse(pair.m0, pair.m1, psi.amplitudes, rng)
    return OutcomeRecord(outcome=bit, probability=prob, post_state=StateVector(amps))


class PointerKit:
    """Effective system-side operators of the pointer-state measurement.

    A0 and A1 are the maps <P_a| exp(-i eps H (x) Y_P) |P_+> on the system;
    they form a complete pair by construction of the joint unitary.
    """

    __slots__ = ("a0", "a1", "epsilon", "term")

    def __init__(self, term: HamiltonianTerm, epsilon: float):
        dim = term.dim
        y_pointer = np.array([[0.0, -1.0j], [1.0j, 0.0]])
        joint = scipy.linalg.expm(-1j * epsilon * np.kron(term.matrix, y_pointer))
        plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
        # Ancilla occupies the low-order index bit: joint row = sys*2 + anc.
        blocks = joint.reshape(dim, 2, dim, 2)
        a0 = np.tensordot(blocks[:, 0, :, :], plus, axes=([2], [0]))
        a1 = np.tensordot(blocks[:, 1, :, :], plus, axes=([2], [0]))
        a0.setflags(write=False)
        a1.setflags(write=False)
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "epsilon", float(epsilon))
        object.__setattr__(self, "term", term)

    def __setattr__(self, name, value):
        raise AttributeError("PointerKit is immutable")


def pointer_sample(
    term: HamiltonianTerm, epsilon: float, psi: StateVector, rng
) -> OutcomeRecord:
    """Sample a term through the pointer-state backend."""
    kit = PointerKit(term, epsilon)
    bit, prob, amps = collapse(kit.a0, kit.a1, psi.amplitudes, rng)
    return OutcomeRecord(outcome=bit, probability=prob, post_state=StateVector(amps))
