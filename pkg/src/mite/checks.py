"""Built-in invariant suite behind the ``verify`` subcommand.

Every check is deterministic: random states come from one fixed-seed
generator created per check. The ``tamper_m0_scale`` hook exists for
negative-control testing; scaling one Kraus operator must break the
completeness check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .linalg import random_state
from .measurement import PointerKit, build_kraus_pair
from .models import (
    SearchInstance,
    grover_rotation,
    search_model,
    single_qubit_model,
    subspace_basis,
    tfim_model,
)
from .stabilizer import build_table, subspace_restriction
from .trotter import (
    all_bitstrings,
    sequence_operator,
    signed_hamiltonian,
)

CHECK_SEED = 7777


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _reference_bundles():
    return (
        single_qubit_model(),
        tfim_model(2, 1.0, 1.0),
        search_model(SearchInstance(2, 1)),
    )


def check_completeness(tamper_m0_scale: float | None = None) -> CheckResult:
    """M0^† M0 + M1^† M1 = I for every model term and epsilon."""
    worst = 0.0
    where = ""
    for bundle in _reference_bundles():
        for term in bundle.hamiltonian.terms:
            for eps in (0.01, 0.05, 0.1):
                pair = build_kraus_pair(term, eps)
                m0 = pair.m0 * tamper_m0_scale if tamper_m0_scale else pair.m0
                gram = m0.conj().T @ m0 + pair.m1.conj().T @ pair.m1
                err = np.linalg.norm(gram - np.eye(term.dim))
                if err > worst:
                    worst, where = err, f"{bundle.name}/{term.label} eps={eps}"
    return CheckResult(
        "completeness", worst <= 1e-10, f"max |M0^T M0 + M1^T M1 - I| = {worst:.3g} ({where})"
    )


def check_unitarity() -> CheckResult:
    worst = 0.0
    for bundle, eps in zip(_reference_bundles(), (0.1, 0.05, 0.1)):
        table = build_table(bundle.hamiltonian, eps, bundle.target_spec)
        for u in table.corrections.values():
            err = np.linalg.norm(u.entries @ u.entries.conj().T - np.eye(u.entries.shape[0]))
            worst = max(worst, err)
    return CheckResult("unitarity", worst <= 1e-10, f"max |U U^dag - I| = {worst:.3g}")


def check_stabilization() -> CheckResult:
    worst = 0.0
    for bundle, eps in zip(_reference_bundles(), (0.1, 0.05, 0.1)):
        table = build_table(bundle.hamiltonian, eps, bundle.target_spec)
        worst = max(worst, max(table.residuals.values()))
    return CheckResult(
        "stabilization", worst <= 1e-8, f"max corrected-target residual = {worst:.3g}"
    )


def check_trotter_scaling() -> CheckResult:
    """Distance to the ideal split-exponential shrinks ~4x when eps halves."""
    lo, hi = 3.4, 4.6
    worst_ratio = None
    detail = ""
    ok = True
    for bundle in _reference_bundles():
        model = bundle.hamiltonian
        norm = 2.0 ** (model.num_terms / 2.0)
        for bits in all_bitstrings(model.num_terms):
            h_k = signed_hamiltonian(model, bits)
            errs = []
            for eps in (0.1, 0.05):
                m_k = sequence_operator(model, bits, eps)
                ideal = scipy.linalg.expm(-eps * h_k.entries) / norm
                errs.append(np.linalg.norm(m_k.entries - ideal, 2))
            ratio = errs[0] / errs[1]
            if worst_ratio is None or abs(ratio - 4.0) > abs(worst_ratio - 4.0):
                worst_ratio = ratio
                detail = f"{bundle.name} k={bits}"
            if not lo <= ratio <= hi:
                ok = False
    return CheckResult(
        "trotter_scaling", ok, f"halving-ratio furthest from 4: {worst_ratio:.4g} ({detail})"
    )


def check_backend_equivalence() -> CheckResult:
    """Kraus and pointer backends agree to the weak-measurement order."""
    bundle = single_qubit_model()
    term = bundle.hamiltonian.terms[0]
    rng = np.random.default_rng(CHECK_SEED)
    ok = True
    worst_p, worst_f = 0.0, 0.0
    for eps in (0.1, 0.05):
        pair = build_kraus_pair(term, eps)
        kit = PointerKit(term, eps)
        for _ in range(50):
            psi = random_state(2, rng).amplitudes
            for kraus_op, pointer_op in ((pair.m0, kit.a0), (pair.m1, kit.a1)):
                wk = kraus_op @ psi
                wp = pointer_op @ psi
                pk, pp = float(np.vdot(wk, wk).real), float(np.vdot(wp, wp).real)
                dp = abs(pk - pp)
                fid = abs(np.vdot(wk, wp)) ** 2 / (pk * pp)
                worst_p = max(worst_p, dp / eps**2)
                worst_f = max(worst_f, (1.0 - fid) / eps**2)
                if dp > 5 * eps**2 or fid < 1 - 10 * eps**2:
                    ok = False
    return CheckResult(
        "backend_equivalence",
        ok,
        f"prob gap <= {worst_p:.3g} eps^2, infidelity <= {worst_f:.3g} eps^2",
    )


def check_subspace_confinement() -> CheckResult:
    """The search protocol never leaks out of span{|S>, |perp>}."""
    instance = SearchInstance(3, 5)
    bundle = search_model(instance)
    table = build_table(bundle.hamiltonian, 0.1, bundle.target_spec)
    basis = subspace_basis(instance)
    projector = basis @ basis.conj().T
    dim = bundle.hamiltonian.dim
    plus = np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)

    from .measurement import collapse

    pair = build_kraus_pair(bundle.hamiltonian.terms[0], 0.1)
    corrections = {bits: u.entries for bits, u in table.corrections.items()}
    rng = np.random.Generator(np.random.Philox(CHECK_SEED))
    amps = plus.copy()
    worst = 0.0
    for _ in range(200):
        bit, _, amps = collapse(pair.m0, pair.m1, amps, rng)
        amps = corrections[(bit,)] @ amps
        amps = amps / np.linalg.norm(amps)
        worst = max(worst, float(np.linalg.norm(amps - projector @ amps)))
    return CheckResult(
        "subspace_confinement", worst <= 1e-10, f"max leakage over 200 steps = {worst:.3g}"
    )


def check_go_identity() -> CheckResult:
    worst = 0.0
    y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    for L in (2, 3, 4, 6):
        d = 2**L
        instance = SearchInstance(L, d // 3)
        sub = subspace_restriction(
            grover_rotation(instance).entries, subspace_basis(instance)
        )
        expect = ((d - 2) / d) * np.eye(2) - 2j * (np.sqrt(d - 1) / d) * y
        worst = max(worst, float(np.linalg.norm(sub - expect, 2)))
    return CheckResult(
        "go_identity", worst <= 1e-10, f"max restriction distance = {worst:.3g}"
    )


def run_checks(tamper_m0_scale: float | None = None) -> list[CheckResult]:
    return [
        check_completeness(tamper_m0_scale),
        check_unitarity(),
        check_stabilization(),
        check_trotter_scaling(),
        check_backend_equivalence(),
        check_subspace_confinement(),
        check_go_identity(),
    ]
