"""Trajectory execution: repeated weak measurement plus conditional correction.

One protocol step measures every Hamiltonian term in order, collects the
outcome bits into a bitstring k, and (when correction is on) applies the
table's U_k. After the final step the target's basis-change unitary is
undone. Fidelity is recorded against the target state each step, before
that final change of basis.

Randomness contract: trajectory i of an ensemble uses seed ``base_seed ^ i``
feeding a counter-based generator, and consumes exactly one uniform draw per
term per step (plus the initial-state draw when no start state is given), so
records are bit-identical across runs and execution orders.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InsufficientDataError
from .linalg import Operator, StateVector, random_state
from .measurement import PointerKit, build_kraus_pair, collapse
from .stabilizer import CorrectionTable
from .trotter import ModelHamiltonian

FIT_WINDOW = (0.2, 0.99)
MIN_FIT_POINTS = 10


@dataclass(frozen=True)
class TrajectoryRecord:
    seed: int
    outcomes: tuple
    fidelity_vs_step: np.ndarray
    observables: dict
    final_state: StateVector

    def __post_init__(self):
        if np.any(self.fidelity_vs_step < 0) or np.any(self.fidelity_vs_step > 1):
            raise ValueError("fidelity values must lie in [0, 1]")


@dataclass(frozen=True)
class EnsembleSummary:
    num_trajectories: int
    mean_fidelity_vs_step: np.ndarray
    log_infidelity_slope: float | None
    log_infidelity_intercept: float | None
    slope_r2: float | None


class FitResult(NamedTuple):
    slope: float
    intercept: float
    r2: float


def _term_operators(model: ModelHamiltonian, epsilon: float, backend: str) -> list:
    """Per-term (op_outcome0, op_outcome1) under the requested backend."""
    ops = []
    for term in model.terms:
        if backend == "kraus":
            pair = build_kraus_pair(term, epsilon)
            ops.append((pair.m0, pair.m1))
        elif backend == "pointer":
            kit = PointerKit(term, epsilon)
            ops.append((kit.a0, kit.a1))
        else:
            raise ValueError(f"unknown backend {backend!r}")
    return ops


def run_trajectory(
    model: ModelHamiltonian,
    table: CorrectionTable,
    psi0: StateVector | None,
    num_steps: int,
    seed: int,
    epsilon: float,
    correction: bool = True,
    backend: str = "kraus",
    observables: Sequence[tuple[str, Operator]] = (),
    term_ops: list | None = None,
) -> TrajectoryRecord:
    """Run one seeded trajectory for ``num_steps`` protocol steps."""
    if num_steps < 1:
        raise ValueError("need at least one protocol step")
    rng = np.random.Generator(np.random.Philox(seed))
    if psi0 is None:
        psi0 = random_state(model.dim, rng)
    elif callable(psi0):
        # custom initial-state sampler; drawn from the trajectory's own
        # generator before any measurement so records stay seed-determined
        psi0 = psi0(rng)
    if term_ops is None:
        term_ops = _term_operators(model, epsilon, backend)

    target = table.target.amplitudes
    corrections = {bits: u.entries for bits, u in table.corrections.items()}
    obs_entries = [(label, op.entries) for label, op in observables]

    amps = psi0.amplitudes.copy()
    outcomes = []
    fidelities = np.empty(num_steps)
    traces = {label: np.empty(num_steps) for label, _ in obs_entries}

    for step in range(num_steps):
        bits = []
        for m0, m1 in term_ops:
            bit, _, amps = collapse(m0, m1, amps, rng)
            bits.append(bit)
        bits = tuple(bits)
        outcomes.append(bits)
        if correction:
            amps = corrections[bits] @ amps
            amps = amps / np.linalg.norm(amps)
        if not np.all(np.isfinite(amps)):
            raise RuntimeError(f"non-finite amplitude at step {step + 1}")
        fidelities[step] = min(1.0, abs(np.vdot(target, amps)) ** 2)
        for label, matrix in obs_entries:
            traces[label][step] = np.real(np.vdot(amps, matrix @ amps))

    final = table.v.entries.conj().T @ amps
    final = final / np.linalg.norm(final)
    return TrajectoryRecord(
        seed=seed,
        outcomes=tuple(outcomes),
        fidelity_vs_step=fidelities,
        observables=traces,
        final_state=StateVector(final),
    )


def trajectory_seed(base_seed: int, index: int) -> int:
    """Seed for ensemble member ``index``: a reversible XOR split."""
    return base_seed ^ index


def run_ensemble(
    model: ModelHamiltonian,
    table: CorrectionTable,
    psi0: StateVector | None,
    num_steps: int,
    num_trajectories: int,
    base_seed: int,
    epsilon: float,
    correction: bool = True,
    backend: str = "kraus",
    observables: Sequence[tuple[str, Operator]] = (),
    keep_records: bool = False,
) -> tuple[EnsembleSummary, list[TrajectoryRecord]]:
    """Run ``num_trajectories`` independent trajectories and average them.

    The mean is the arithmetic mean of fidelities at each step. Returns the
    summary plus the individual records (empty list unless ``keep_records``).
    """
    if num_trajectories < 1:
        raise ValueError("need at least one trajectory")
    term_ops = _term_operators(model, epsilon, backend)
    total = np.zeros(num_steps)
    records: list[TrajectoryRecord] = []
    for i in range(num_trajectories):
        rec = run_trajectory(
            model,
            table,
            psi0,
            num_steps,
            trajectory_seed(base_seed, i),
            epsilon,
            correction=correction,
            backend=backend,
            observables=observables,
            term_ops=term_ops,
        )
        total += rec.fidelity_vs_step
        if keep_records:
            records.append(rec)
    mean = total / num_trajectories
    try:
        fit = fit_log_infidelity(mean)
        slope, intercept, r2 = fit.slope, fit.intercept, fit.r2
    except InsufficientDataError:
        slope = intercept = r2 = None
    summary = EnsembleSummary(
        num_trajectories=num_trajectories,
        mean_fidelity_vs_step=mean,
        log_infidelity_slope=slope,
        log_infidelity_intercept=intercept,
        slope_r2=r2,
    )
    return summary, records


def fit_log_infidelity(
    mean_fidelity: np.ndarray | EnsembleSummary,
    window: tuple[float, float] = FIT_WINDOW,
) -> FitResult:
    """Least-squares line through (step, ln(1 - mean fidelity)).

    Only steps with mean fidelity inside ``window`` (and strictly below
    1 - 1e-12, so the logarithm is finite) participate; fewer than 10 such
    points is an error. Steps are 1-based.
    """
    if isinstance(mean_fidelity, EnsembleSummary):
        mean_fidelity = mean_fidelity.mean_fidelity_vs_step
    f = np.asarray(mean_fidelity, dtype=float)
    steps = np.arange(1, f.size + 1, dtype=float)
    lo, hi = window
    mask = (f >= lo) & (f <= hi) & (f < 1.0 - 1e-12)
    if int(mask.sum()) < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"insufficient points in the fit window: {int(mask.sum())} < {MIN_FIT_POINTS}"
        )
    x, y = steps[mask], np.log(1.0 - f[mask])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 0.0
    return FitResult(float(slope), float(intercept), float(r2))


def first_passage_step(fidelity_vs_step: np.ndarray, threshold: float) -> int | None:
    """1-based first step with fidelity >= threshold, or None if never."""
    hits = np.nonzero(np.asarray(fidelity_vs_step) >= threshold)[0]
    return int(hits[0]) + 1 if hits.size else None
