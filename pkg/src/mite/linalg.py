"""Dense complex linear algebra over L-qubit registers.

Conventions used everywhere in this package:

* Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
  the computational basis index.
* All spectral operations go through Hermitian eigendecomposition with a
  default tolerance of 1e-10.
* Global phases are fixed by making the largest-magnitude amplitude real
  and positive ("gauge" below).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

NORM_TOL = 1e-12
HERMITICITY_TOL = 1e-10

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def _as_readonly(a: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=complex)
    out.setflags(write=False)
    return out


def _infer_num_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


class StateVector:
    """Normalized amplitude vector over the 2^L computational basis."""

    __slots__ = ("amplitudes", "num_qubits")

    def __init__(self, amplitudes, num_qubits: int | None = None):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        inferred = _infer_num_qubits(amps.size)
        if num_qubits is not None and num_qubits != inferred:
            raise ValueError(
                f"length {amps.size} does not match num_qubits={num_qubits}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state vector norm {norm!r} deviates from 1")
        object.__setattr__(self, "amplitudes", _as_readonly(amps))
        object.__setattr__(self, "num_qubits", inferred)

    def __setattr__(self, name, value):
        raise AttributeError("StateVector is immutable")

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        """Build from an unnormalized amplitude array."""
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / norm)

    def __repr__(self):
        return f"StateVector(num_qubits={self.num_qubits})"


class Operator:
    """Dense square matrix acting on a 2^L-dimensional register."""

    __slots__ = ("entries", "num_qubits")

    def __init__(self, entries, num_qubits: int | None = None):
        mat = np.asarray(entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator must be square, got shape {mat.shape}")
        inferred = _infer_num_qubits(mat.shape[0])
        if num_qubits is not None and num_qubits != inferred:
            raise ValueError(
                f"dimension {mat.shape[0]} does not match num_qubits={num_qubits}"
            )
        object.__setattr__(self, "entries", _as_readonly(mat))
        object.__setattr__(self, "num_qubits", inferred)

    def __setattr__(self, name, value):
        raise AttributeError("Operator is immutable")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        m = self.entries
        return float(np.linalg.norm(m - m.conj().T)) <= tol

    def is_unitary(self, tol: float = HERMITICITY_TOL) -> bool:
        m = self.entries
        return float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]))) <= tol

    def __repr__(self):
        return f"Operator(num_qubits={self.num_qubits})"


@dataclass(frozen=True)
class PauliString:
    """A real coefficient times a product of single-qubit Pauli factors.

    ``factors`` maps qubit index to one of "X", "Y", "Z"; absent indices act
    as identity. An empty map is a multiple of the identity.
    """

    coefficient: float
    factors: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        for idx, letter in self.factors.items():
            if letter not in ("X", "Y", "Z"):
                raise ValueError(f"unknown Pauli letter {letter!r} on qubit {idx}")
            if idx < 0:
                raise ValueError(f"negative qubit index {idx}")
        object.__setattr__(self, "factors", dict(self.factors))


def materialize(p: PauliString, num_qubits: int) -> Operator:
    """Dense matrix of a Pauli string on an L-qubit register."""
    for idx in p.factors:
        if idx >= num_qubits:
            raise ValueError(
                f"qubit index {idx} out of range for num_qubits={num_qubits}"
            )
    mat = np.ones((1, 1), dtype=complex)
    for q in range(num_qubits):
        mat = np.kron(mat, PAULI[p.factors.get(q, "I")])
    return Operator(p.coefficient * mat)


def expectation(state: StateVector, a: Operator) -> float:
    """<s|A|s> for Hermitian A; the (tiny) imaginary part is checked, then dropped."""
    if a.dim != state.dim:
        raise ValueError(f"dimension mismatch: operator {a.dim}, state {state.dim}")
    if not a.is_hermitian():
        raise ValueError("expectation requires a Hermitian operator")
    val = complex(np.vdot(state.amplitudes, a.entries @ state.amplitudes))
    if abs(val.imag) >= HERMITICITY_TOL:
        raise ValueError(f"expectation has non-negligible imaginary part {val.imag}")
    return val.real


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2, clipped into [0, 1] against rounding spill."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return float(min(1.0, abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2))


def hermitian_sqrt(a: Operator) -> Operator:
    """Hermitian square root of a PSD operator via eigendecomposition.

    Eigenvalues in [-1e-12, 0) are clamped to zero; anything more negative is
    an error (it signals an epsilon too large for the term's spectral range).
    """
    if not a.is_hermitian():
        raise ValueError("hermitian_sqrt requires a Hermitian operator")
    w, v = np.linalg.eigh(a.entries)
    if w[0] < -1e-12:
        raise ValueError(f"matrix is not PSD: eigenvalue {w[0]!r} < -1e-12")
    w = np.clip(w, 0.0, None)
    b = (v * np.sqrt(w)) @ v.conj().T
    return Operator((b + b.conj().T) / 2)


def matrix_exp_hermitian(a: Operator, t: float) -> Operator:
    """e^{-A t} for Hermitian A, via eigendecomposition."""
    if not a.is_hermitian():
        raise ValueError("matrix_exp_hermitian requires a Hermitian operator")
    w, v = np.linalg.eigh(a.entries)
    m = (v * np.exp(-w * t)) @ v.conj().T
    return Operator((m + m.conj().T) / 2)


def gauge_phase(amps: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude amplitude is real positive."""
    amps = np.asarray(amps, dtype=complex)
    i = int(np.argmax(np.abs(amps)))
    z = amps[i]
    if abs(z) == 0.0:
        return amps.copy()
    return amps * (z.conjugate() / abs(z))


def basis_state(num_qubits: int, index: int) -> StateVector:
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[index] = 1.0
    return StateVector(amps)


def random_state(dim: int, rng: np.random.Generator) -> StateVector:
    """Haar-distributed pure state (normalized complex Gaussian vector)."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector.normalized(v)
