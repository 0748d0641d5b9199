"""Fixed points, target construction and correction unitaries.

For every outcome bitstring k the protocol needs a unitary U_k with

    U_k M_k |T> ~ |T>   (proportional),

so the target ray survives each round regardless of the observed outcomes.
The condition only constrains U_k on the single ray M_k|T>; the remaining
freedom is used in two ways:

* ``span``       -- the minimal rotation inside span{|T>, M_k|T>}, identity
                    on the orthogonal complement (closed form, exact).
* ``span_stir``  -- the span rotation composed with a fixed, seeded unitary
                    that acts only on the tangent space of |T>. The extra
                    mixing spreads contraction over all tangent directions,
                    which multi-term models need for a clean exponential
                    approach of the ensemble mean.

An ansatz optimizer of product-of-exponentials form is provided for the
Ising chain as well; it is not on the default path.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import AnnihilatedTargetError, DegenerateFixedPointError
from .linalg import Operator, StateVector, gauge_phase, materialize, PauliString
from .measurement import KrausPair
from .trotter import ModelHamiltonian, all_bitstrings, bits_to_str, kraus_pairs, sequence_operator

DOMINANCE_GAP = 1e-6
RESIDUAL_TOL = 1e-8
UNITARITY_TOL = 1e-10

STIR_SEED = 0x5EED
STIR_ANGLE = 1.2


@dataclass(frozen=True)
class TargetSpec:
    """Recipe for the target: |T> = V |E0^(anchor)>.

    ``anchor`` selects which sequence operator's fixed point seeds the target
    (all-zeros outcome by default); ``v`` is the basis-change unitary.
    """

    v: np.ndarray
    anchor: tuple = ()
    description: str = ""

    def anchor_bits(self, num_terms: int) -> tuple:
        return self.anchor if self.anchor else (0,) * num_terms


@dataclass(frozen=True)
class CorrectionTable:
    target: StateVector
    v: Operator
    corrections: Mapping[tuple, Operator]
    residuals: Mapping[tuple, float]
    strategy: str

    def __post_init__(self):
        for bits, u in self.corrections.items():
            if not u.is_unitary(UNITARITY_TOL):
                raise ValueError(f"correction for k={bits_to_str(bits)} is not unitary")
        for bits, r in self.residuals.items():
            if r > RESIDUAL_TOL:
                raise ValueError(
                    f"residual {r!r} for k={bits_to_str(bits)} exceeds {RESIDUAL_TOL}"
                )


def fixed_point(m: Operator | np.ndarray) -> StateVector:
    """Dominant right eigenvector, gauge-fixed; unique dominance required."""
    mat = m.entries if isinstance(m, Operator) else np.asarray(m)
    eigvals, eigvecs = np.linalg.eig(mat)
    order = np.argsort(-np.abs(eigvals))
    lead = float(np.abs(eigvals[order[0]]))
    sub = float(np.abs(eigvals[order[1]]))
    if lead < (1.0 + DOMINANCE_GAP) * sub:
        gap = lead / sub - 1.0 if sub > 0 else float("inf")
        raise DegenerateFixedPointError(
            f"dominant eigenvalue not unique: |l1|={lead:.17g}, |l2|={sub:.17g}, "
            f"gap {gap:.3g} < {DOMINANCE_GAP}"
        )
    vec = eigvecs[:, order[0]]
    return StateVector.normalized(gauge_phase(vec))


def correction_span_rotation(m_k: Operator | np.ndarray, target: StateVector) -> Operator:
    """Minimal unitary carrying normalize(M_k|T>) to |T> inside their span."""
    mat = m_k.entries if isinstance(m_k, Operator) else np.asarray(m_k)
    t = target.amplitudes
    w = mat @ t
    norm = float(np.linalg.norm(w))
    if norm <= 1e-12:
        raise AnnihilatedTargetError("M_k annihilates the target state")
    w = w / norm
    c = complex(np.vdot(t, w))
    resid = w - c * t
    s = float(np.linalg.norm(resid))
    dim = t.size
    if s <= 1e-13:
        # already proportional: undo the residual phase on the target ray
        u = np.eye(dim, dtype=complex) + (np.conj(c) - 1.0) * np.outer(t, t.conj())
        return Operator(u)
    v = resid / s
    u = np.eye(dim, dtype=complex)
    u = u + (np.conj(c) - 1.0) * np.outer(t, t.conj())
    u = u + s * np.outer(t, v.conj())
    u = u - s * np.outer(v, t.conj())
    u = u + (c - 1.0) * np.outer(v, v.conj())
    return Operator(u)


def stabilization_residual(
    u: Operator | np.ndarray, m_k: Operator | np.ndarray, target: StateVector
) -> float:
    """1 - fidelity(normalize(U M_k |T>), |T>)."""
    umat = u.entries if isinstance(u, Operator) else np.asarray(u)
    mmat = m_k.entries if isinstance(m_k, Operator) else np.asarray(m_k)
    w = umat @ (mmat @ target.amplitudes)
    norm = np.linalg.norm(w)
    if norm <= 1e-12:
        return 1.0
    overlap = abs(np.vdot(target.amplitudes, w)) / norm
    return float(max(0.0, 1.0 - overlap**2))


def tangent_basis(target: StateVector) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of |T>, deterministic."""
    t = target.amplitudes
    dim = t.size
    cols = [t] + [np.eye(dim, dtype=complex)[:, i] for i in range(dim)]
    q, _ = np.linalg.qr(np.column_stack(cols))
    basis = q[:, 1:dim]
    # QR keeps the first column parallel to |T>; the rest span its complement.
    return basis


def tangent_stirrer(
    target: StateVector, seed: int = STIR_SEED, angle: float = STIR_ANGLE
) -> Operator:
    """Seeded unitary fixing |T> exactly and mixing its tangent space."""
    dim = target.dim
    if dim < 3:
        return Operator(np.eye(dim, dtype=complex))
    basis = tangent_basis(target)
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim - 1, dim - 1)) + 1j * rng.normal(size=(dim - 1, dim - 1))
    a = (a + a.conj().T) / 2
    a = a / np.linalg.norm(a, 2)
    block = scipy.linalg.expm(1j * angle * a)
    t = target.amplitudes
    u = basis @ block @ basis.conj().T + np.outer(t, t.conj())
    return Operator(u)


def _pauli_sum(num_qubits: int, entries: Sequence[tuple[float, dict]]) -> np.ndarray:
    out = np.zeros((2**num_qubits, 2**num_qubits), dtype=complex)
    for coeff, factors in entries:
        out = out + materialize(PauliString(coeff, factors), num_qubits).entries
    return out


def _ansatz_unitary(params: np.ndarray, num_qubits: int) -> np.ndarray:
    """U = e^{i sum theta_n Y_n} e^{i sum chi_n Z_n Y_{n+1}} e^{i sum xi_n Y_n}."""
    L = num_qubits
    theta, chi, xi = params[:L], params[L : 2 * L - 1], params[2 * L - 1 :]
    g1 = _pauli_sum(L, [(t, {n: "Y"}) for n, t in enumerate(theta)])
    g2 = _pauli_sum(L, [(c, {n: "Z", n + 1: "Y"}) for n, c in enumerate(chi)])
    g3 = _pauli_sum(L, [(x, {n: "Y"}) for n, x in enumerate(xi)])
    return (
        scipy.linalg.expm(1j * g1)
        @ scipy.linalg.expm(1j * g2)
        @ scipy.linalg.expm(1j * g3)
    )


def solve_tfim_ansatz(
    m_k: Operator | np.ndarray,
    target: StateVector,
    num_qubits: int,
    restarts: int = 4,
    seed: int = 11,
) -> tuple[Operator, np.ndarray, float]:
    """Optimize the product-of-exponentials ansatz for one outcome.

    Maximizes the stabilization fidelity over {theta_n, chi_n, xi_n} with
    nearest-neighbor ZY couplings. Returns (U, params, residual); a residual
    above 1e-6 is reported, not raised.
    """
    mmat = m_k.entries if isinstance(m_k, Operator) else np.asarray(m_k)
    t = target.amplitudes
    w = mmat @ t
    norm = np.linalg.norm(w)
    if norm <= 1e-12:
        raise AnnihilatedTargetError("M_k annihilates the target state")
    w = w / norm
    nparams = 3 * num_qubits - 1

    def cost(p):
        u = _ansatz_unitary(p, num_qubits)
        return 1.0 - abs(np.vdot(t, u @ w)) ** 2

    rng = np.random.default_rng(seed)
    best_p, best_c = np.zeros(nparams), cost(np.zeros(nparams))
    for trial in range(restarts):
        p0 = np.zeros(nparams) if trial == 0 else rng.normal(scale=0.5, size=nparams)
        res = scipy.optimize.minimize(
            cost, p0, method="L-BFGS-B", options={"ftol": 1e-18, "gtol": 1e-14}
        )
        if res.fun < best_c:
            best_p, best_c = res.x, float(res.fun)
        if best_c <= 1e-12:
            break
    return Operator(_ansatz_unitary(best_p, num_qubits)), best_p, float(max(0.0, best_c))


def _auto_strategy(model: ModelHamiltonian) -> str:
    # Single-term models (two-level effective dynamics) need no extra mixing,
    # and search must stay confined to its two-dimensional working subspace.
    return "span" if model.num_terms == 1 else "span_stir"


def build_table(
    model: ModelHamiltonian,
    epsilon: float,
    target_spec: TargetSpec,
    strategy: str = "auto",
    pairs: Sequence[KrausPair] | None = None,
) -> CorrectionTable:
    """Enumerate all 2^N outcomes and solve each correction unitary."""
    if strategy == "auto":
        strategy = _auto_strategy(model)
    if strategy not in ("span", "span_stir", "ansatz"):
        raise ValueError(f"unknown correction strategy {strategy!r}")
    if pairs is None:
        pairs = kraus_pairs(model, epsilon)

    anchor = target_spec.anchor_bits(model.num_terms)
    m_anchor = sequence_operator(model, anchor, epsilon, pairs=pairs)
    e0 = fixed_point(m_anchor)
    target = StateVector.normalized(gauge_phase(target_spec.v @ e0.amplitudes))

    stir = tangent_stirrer(target).entries if strategy == "span_stir" else None

    corrections: dict[tuple, Operator] = {}
    residuals: dict[tuple, float] = {}
    for bits in all_bitstrings(model.num_terms):
        m_k = sequence_operator(model, bits, epsilon, pairs=pairs)
        if strategy == "ansatz":
            u_raw, _, _ = solve_tfim_ansatz(m_k, target, model.num_qubits)
            # exact span cleanup keeps the table invariant airtight
            u = correction_span_rotation(
                Operator(u_raw.entries @ m_k.entries), target
            ).entries @ u_raw.entries
        else:
            u = correction_span_rotation(m_k, target).entries
            if stir is not None:
                u = stir @ u
        corrections[bits] = Operator(u)
        residuals[bits] = stabilization_residual(u, m_k, target)

    return CorrectionTable(
        target=target,
        v=Operator(target_spec.v),
        corrections=corrections,
        residuals=residuals,
        strategy=strategy,
    )


def bloch_angle(u2: np.ndarray) -> float:
    """Rotation angle of a 2x2 unitary in the convention U = e^{i theta Y / 2}."""
    return float(2.0 * np.arctan2(u2[0, 1].real, u2[0, 0].real))


def subspace_restriction(mat: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Matrix of ``mat`` in the (orthonormal) columns of ``basis``."""
    return basis.conj().T @ mat @ basis


def serialize_table(table: CorrectionTable) -> str:
    """Text export: per outcome, the bitstring, residual and U_k row-major.

    Matrix entries are written as "re,im" pairs separated by spaces, one
    matrix row per line.
    """
    lines = [
        "# correction table",
        f"# strategy: {table.strategy}",
        "# entry format: re,im pairs, row-major, one matrix row per line",
    ]
    for bits in sorted(table.corrections):
        u = table.corrections[bits].entries
        lines.append(f"k={bits_to_str(bits)} residual={table.residuals[bits]:.17g}")
        for row in u:
            lines.append(" ".join(f"{z.real:.17g},{z.imag:.17g}" for z in row))
    return "\n".join(lines) + "\n"
