"""Reference systems: single qubit, transverse-field Ising chain, search.

Each factory returns a :class:`ModelBundle` holding the Hamiltonian terms,
the target recipe (basis-change unitary applied to the anchor fixed point),
per-step observables to record, and the conventional initial state.

The search section also provides the operator algebra built purely from
oracle reflections: the composed reflection product, the group-commutator
rotation, and exact subspace Y-rotations derived from the commutator. None
of these read the solution index directly; it enters only through the
oracle constructor.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ConfigError
from .linalg import (
    Operator,
    PauliString,
    StateVector,
    PAULI,
    basis_state,
    materialize,
    random_state,
)
from .measurement import HamiltonianTerm
from .stabilizer import TargetSpec, bloch_angle, subspace_restriction
from .trotter import ModelHamiltonian

BUDGET_FRACTION = 0.25


@dataclass(frozen=True)
class ModelBundle:
    """A ready-to-run system: Hamiltonian, target recipe, and conventions."""

    name: str
    hamiltonian: ModelHamiltonian
    target_spec: TargetSpec
    params: dict = field(default_factory=dict)
    observables: tuple = ()
    default_initial: str = "haar"


def single_qubit_model() -> ModelBundle:
    """One qubit, a single field term with ground state |0>, target |+>."""
    term = HamiltonianTerm(
        label="field",
        strings=(PauliString(-1.0, {0: "Z"}),),
        shift=1.0,
        num_qubits=1,
    )
    v = scipy.linalg.expm(-1j * (np.pi / 4) * PAULI["Y"])
    spec = TargetSpec(v=v, description="quarter Y-rotation of the anchor fixed point")
    return ModelBundle(
        name="single_qubit",
        hamiltonian=ModelHamiltonian((term,), 1),
        target_spec=spec,
        params={},
        observables=(("Z", Operator(PAULI["Z"].astype(complex))),),
        default_initial="minus",
    )


def tfim_model(num_qubits: int, lam: float = 1.0, omega: float = 1.0) -> ModelBundle:
    """Open-boundary Ising chain split into a field term and a coupling term.

    Both terms are shifted to be PSD with minimum eigenvalue zero. lam = 0 or
    omega = 0 is accepted; the resulting ground degeneracy surfaces later as
    a degenerate-fixed-point error during table construction.
    """
    if num_qubits < 2:
        raise ValueError(f"chain needs at least 2 qubits, got {num_qubits}")
    if lam < 0 or omega < 0:
        raise ValueError("field and coupling strengths must be non-negative")
    L = num_qubits
    field_term = HamiltonianTerm(
        label="transverse_field",
        strings=tuple(PauliString(-lam, {n: "X"}) for n in range(L)),
        shift=lam * L,
        num_qubits=L,
    )
    coupling_term = HamiltonianTerm(
        label="ising_coupling",
        strings=tuple(PauliString(-omega, {n: "Z", n + 1: "Z"}) for n in range(L - 1)),
        shift=omega * (L - 1),
        num_qubits=L,
    )
    y_last = materialize(PauliString(1.0, {L - 1: "Y"}), L).entries
    v = scipy.linalg.expm(1j * (np.pi / 8) * y_last)
    spec = TargetSpec(v=v, description="eighth Y-rotation on the last site")
    return ModelBundle(
        name="tfim",
        hamiltonian=ModelHamiltonian((field_term, coupling_term), L),
        target_spec=spec,
        params={"num_qubits": L, "lambda": lam, "omega": omega},
        observables=(),
        default_initial="haar",
    )


@dataclass(frozen=True)
class SearchInstance:
    """An unstructured-search problem over D = 2^L basis states."""

    num_qubits: int
    solution_index: int

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("need at least one qubit")
        if not 0 <= self.solution_index < self.dimension:
            raise ValueError(
                f"solution index {self.solution_index} outside [0, {self.dimension})"
            )

    @property
    def dimension(self) -> int:
        return 2**self.num_qubits


def search_states(instance: SearchInstance) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(|S>, |perp>, |+>) as dense vectors.

    |perp> is the uniform superposition over non-solution states; together
    with |S> it spans the subspace the whole protocol lives in.
    """
    d = instance.dimension
    s = basis_state(instance.num_qubits, instance.solution_index).amplitudes
    plus = np.full(d, 1.0 / np.sqrt(d), dtype=complex)
    perp = (np.sqrt(d) * plus - s) / np.sqrt(d - 1)
    return s, perp, plus


def subspace_basis(instance: SearchInstance) -> np.ndarray:
    """Columns [|S>, |perp>]; 2x2 restrictions use this ordering."""
    s, perp, _ = search_states(instance)
    return np.column_stack([s, perp])


def _oracle_projector_strings(instance: SearchInstance) -> tuple[PauliString, ...]:
    """-|S><S| as a Z-string expansion, identity part split off into the shift.

    |S><S| = prod_i (I + (-1)^{s_i} Z_i) / 2; expanding gives coefficient
    (1/D) * (-1)^{sum of solution bits inside the subset} per Z-subset.
    """
    L = instance.num_qubits
    bits = [(instance.solution_index >> (L - 1 - i)) & 1 for i in range(L)]
    strings = []
    for r in range(1, L + 1):
        for subset in itertools.combinations(range(L), r):
            sign = (-1) ** sum(bits[i] for i in subset)
            coeff = -sign / instance.dimension
            strings.append(PauliString(coeff, {i: "Z" for i in subset}))
    return tuple(strings)


def _y_subspace(instance: SearchInstance) -> np.ndarray:
    """Pauli Y on span{|S>, |perp>} (|S> plays |0>), zero elsewhere."""
    s, perp, _ = search_states(instance)
    return 1j * np.outer(perp, s.conj()) - 1j * np.outer(s, perp.conj())


def search_model(instance: SearchInstance) -> ModelBundle:
    """H = -|S><S| + I (shifted PSD), target (|S> + |perp>)/sqrt(2)."""
    d = instance.dimension
    term = HamiltonianTerm(
        label="oracle",
        strings=_oracle_projector_strings(instance),
        shift=1.0 - 1.0 / d,
        num_qubits=instance.num_qubits,
    )
    v = scipy.linalg.expm(-1j * (np.pi / 4) * _y_subspace(instance))
    spec = TargetSpec(v=v, description="quarter Y-rotation inside the search subspace")
    return ModelBundle(
        name="search",
        hamiltonian=ModelHamiltonian((term,), instance.num_qubits),
        target_spec=spec,
        params={
            "num_qubits": instance.num_qubits,
            "dimension": d,
            "solution_index": instance.solution_index,
        },
        observables=(),
        default_initial="plus",
    )


def oracle_hamiltonians(instance: SearchInstance) -> tuple[np.ndarray, np.ndarray]:
    """(H_O, H_G) = (-|S><S|, -|+><+|), the two reflection generators."""
    s, _, plus = search_states(instance)
    return -np.outer(s, s.conj()), -np.outer(plus, plus.conj())


def grover_rotation(instance: SearchInstance) -> Operator:
    """One reflection product: phase inversion after the diffusion reflection.

    Returns (I - 2|S><S|)(2|+><+| - I). Restricted to span{|S>, |perp>} this
    equals ((D-2)/D) I - 2i (sqrt(D-1)/D) Y: a rotation whose spinor angle is
    exactly 2*arcsin(1/sqrt(D)). The same matrix with the reflections in the
    transposed roles flips the identity coefficient's sign, so the factor
    order here is the one that makes the subspace identity hold.
    """
    d = instance.dimension
    h_o, h_g = oracle_hamiltonians(instance)
    o = np.eye(d) + 2 * h_o
    diffusion = -np.eye(d) - 2 * h_g
    return Operator(o @ diffusion)


def commutator_rotation(instance: SearchInstance, phi: float, n: int) -> Operator:
    """Group-commutator product converging to e^{[H_O, H_G] phi}.

    Each cycle is e^{-i H_G t} e^{-i H_O t} e^{i H_G t} e^{i H_O t} with
    t = sqrt(|phi|/n); negative phi swaps the roles of the two generators,
    flipping the commutator's sign.
    """
    if n < 1:
        raise ValueError("need at least one product cycle")
    d = instance.dimension
    if phi == 0.0:
        return Operator(np.eye(d, dtype=complex))
    h_o, h_g = oracle_hamiltonians(instance)
    first, second = (h_g, h_o) if phi > 0 else (h_o, h_g)
    t = np.sqrt(abs(phi) / n)
    cycle = (
        scipy.linalg.expm(-1j * t * first)
        @ scipy.linalg.expm(-1j * t * second)
        @ scipy.linalg.expm(1j * t * first)
        @ scipy.linalg.expm(1j * t * second)
    )
    return Operator(np.linalg.matrix_power(cycle, n))


def angle_budget(dimension: int) -> float:
    """Per-step Bloch-angle budget 2*arcsin(1/sqrt(D)).

    A single reflection product realizes twice this; the budget keeps the
    conservative reading and epsilon selection applies BUDGET_FRACTION on
    top, so scaling exponents are unaffected by the convention.
    """
    return float(2.0 * np.arcsin(1.0 / np.sqrt(dimension)))


def search_correction(
    instance: SearchInstance,
    theta_bloch: float,
    allow_commutator: bool = True,
) -> Operator:
    """Exact Y-rotation by ``theta_bloch`` in the search subspace.

    The generator is recovered from the commutator of the two oracle-derived
    reflection Hamiltonians, i[H_O, H_G] = -(sqrt(D-1)/D) Y_sub, so the
    solution index is never consulted. With ``allow_commutator`` off only
    angles reachable by a single reflection product (|theta| up to twice the
    budget) are admitted.
    """
    d = instance.dimension
    if not allow_commutator:
        single_call = 2.0 * angle_budget(d)
        if abs(theta_bloch) > single_call + 1e-9:
            raise ValueError(
                f"angle {theta_bloch!r} exceeds the single-call budget "
                f"{single_call!r} and the commutator path is disabled"
            )
    h_o, h_g = oracle_hamiltonians(instance)
    commutator = 1j * (h_o @ h_g - h_g @ h_o)
    y_oracle = -(d / np.sqrt(d - 1)) * commutator
    return Operator(scipy.linalg.expm(1j * (theta_bloch / 2.0) * y_oracle))


def grover_bloch_angle(instance: SearchInstance) -> float:
    """Bloch angle of one reflection product, restricted to the subspace."""
    sub = subspace_restriction(grover_rotation(instance).entries, subspace_basis(instance))
    return bloch_angle(sub)


def subspace_sampler(instance: SearchInstance):
    """Random pure states inside span{|S>, |perp>}, one per generator call.

    The protocol's corrections act as identity on the orthogonal complement,
    so random-start studies draw from the working subspace the dynamics
    actually lives in.
    """
    basis = subspace_basis(instance)

    def sample(rng: np.random.Generator) -> StateVector:
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        return StateVector.normalized(basis @ z)

    return sample


def initial_state(bundle: ModelBundle, rng: np.random.Generator | None = None) -> StateVector:
    """The model's conventional starting state; ``haar`` draws from ``rng``."""
    dim = bundle.hamiltonian.dim
    if bundle.default_initial == "minus":
        amps = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)
        return StateVector(amps)
    if bundle.default_initial == "plus":
        return StateVector(np.full(dim, 1.0 / np.sqrt(dim), dtype=complex))
    if bundle.default_initial == "haar":
        if rng is None:
            raise ValueError("haar-random initial state needs a generator")
        return random_state(dim, rng)
    raise ValueError(f"unknown initial-state kind {bundle.default_initial!r}")


def build_bundle(
    model: str,
    num_qubits: int | None = None,
    lam: float = 1.0,
    omega: float = 1.0,
    dimension: int | None = None,
    solution_index: int | None = None,
) -> ModelBundle:
    """Dispatch a model name + parameters to the right factory."""
    if model == "single_qubit":
        return single_qubit_model()
    if model == "tfim":
        if num_qubits is None:
            raise ConfigError("tfim requires the number of qubits")
        return tfim_model(num_qubits, lam, omega)
    if model == "search":
        if dimension is None:
            if num_qubits is None:
                raise ConfigError("search requires a dimension or qubit count")
            dimension = 2**num_qubits
        L = int(dimension).bit_length() - 1
        if 2**L != dimension or dimension < 2:
            raise ConfigError(f"search dimension must be a power of two, got {dimension}")
        if solution_index is None:
            raise ConfigError("search requires a solution index")
        return search_model(SearchInstance(L, solution_index))
    raise ConfigError(f"unknown model {model!r}")
