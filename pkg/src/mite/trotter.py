"""Measurement sequences over all terms and the exact imaginary-time oracle.

One round measures every term j = 1..N once. The round operator for an
outcome bitstring k = (k_1, ..., k_N) is the product of the sampled Kraus
matrices with j = 1 applied first (rightmost factor):

    M_k = M_{k_N}^{(N)} ... M_{k_1}^{(1)}  ~  2^{-N/2} e^{-eps H_k},

where H_k = sum_j (-1)^{k_j} H^{(j)} flips the sign of the terms that
reported outcome 1.
"""
from __future__ import annotations

import itertools
import warnings
from typing import Sequence

import numpy as np

from .linalg import Operator, StateVector, matrix_exp_hermitian
from .measurement import HamiltonianTerm, KrausPair, build_kraus_pair

OutcomeBitstring = tuple  # sequence of N bits, k_1 first


class ModelHamiltonian:
    """An ordered list of Hamiltonian terms sharing one register."""

    __slots__ = ("terms", "num_qubits")

    def __init__(self, terms: Sequence[HamiltonianTerm], num_qubits: int):
        terms = tuple(terms)
        if not terms:
            raise ValueError("a model needs at least one term")
        for t in terms:
            if t.num_qubits != num_qubits:
                raise ValueError(
                    f"term {t.label!r} acts on {t.num_qubits} qubits, "
                    f"model has {num_qubits}"
                )
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "num_qubits", int(num_qubits))

    def __setattr__(self, name, value):
        raise AttributeError("ModelHamiltonian is immutable")

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    @property
    def dim(self) -> int:
        return 2**self.num_qubits

    def total_matrix(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for t in self.terms:
            out = out + t.matrix
        return out


def all_bitstrings(num_terms: int):
    """All outcome bitstrings in lexicographic order, k_1 varying slowest."""
    return [tuple(k) for k in itertools.product((0, 1), repeat=num_terms)]


def bits_to_str(bits: OutcomeBitstring) -> str:
    return "".join(str(b) for b in bits)


def _check_bits(model: ModelHamiltonian, bits: OutcomeBitstring):
    if len(bits) != model.num_terms:
        raise ValueError(
            f"bitstring length {len(bits)} does not match {model.num_terms} terms"
        )


def signed_hamiltonian(model: ModelHamiltonian, bits: OutcomeBitstring) -> Operator:
    """H_k = sum_j (-1)^{k_j} H^{(j)}."""
    _check_bits(model, bits)
    out = np.zeros((model.dim, model.dim), dtype=complex)
    for k, term in zip(bits, model.terms):
        out = out + (-1.0) ** k * term.matrix
    return Operator(out)


def kraus_pairs(model: ModelHamiltonian, epsilon: float) -> list[KrausPair]:
    """One Kraus pair per term at a common epsilon."""
    return [build_kraus_pair(t, epsilon) for t in model.terms]


def sequence_operator(
    model: ModelHamiltonian,
    bits: OutcomeBitstring,
    epsilon: float,
    pairs: Sequence[KrausPair] | None = None,
) -> Operator:
    """Round operator M_k with term 1 applied first (rightmost factor)."""
    _check_bits(model, bits)
    if pairs is None:
        pairs = kraus_pairs(model, epsilon)
    out = np.eye(model.dim, dtype=complex)
    for k, pair in zip(bits, pairs):
        out = (pair.m0 if k == 0 else pair.m1) @ out
    return Operator(out)


def exact_ite(model: ModelHamiltonian, tau: float, psi0: StateVector) -> StateVector:
    """Normalized e^{-H tau} |psi0>, the ground-truth imaginary-time oracle."""
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    h = Operator(model.total_matrix())
    w, v = np.linalg.eigh(h.entries)
    ground = v[:, w < w[0] + 1e-9]
    overlap = float(np.linalg.norm(ground.conj().T @ psi0.amplitudes))
    if overlap <= 1e-12:
        warnings.warn(
            "initial state is orthogonal to the ground space; "
            "imaginary-time evolution cannot reach it",
            stacklevel=2,
        )
    evolved = matrix_exp_hermitian(h, tau).entries @ psi0.amplitudes
    return StateVector.normalized(evolved)
