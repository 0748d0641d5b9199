"""Fixed points, correction construction, and the exported table format.

The quadratic fixed-point bounds below were frozen from dense
diagonalization: 1 - |<E0(M_k)|ground(H_k)>|^2, divided by eps^2, stays
bounded by a constant per model (largest observed 25.9 for the 3-site
chain at the (1,0) outcome), and the anchor outcome is far tighter.
"""
import numpy as np
import pytest

from mite.errors import AnnihilatedTargetError, DegenerateFixedPointError
from mite.linalg import Operator, StateVector, basis_state
from mite.models import single_qubit_model, tfim_model
from mite.stabilizer import (
    RESIDUAL_TOL,
    CorrectionTable,
    TargetSpec,
    bloch_angle,
    build_table,
    correction_span_rotation,
    fixed_point,
    serialize_table,
    solve_tfim_ansatz,
    stabilization_residual,
    subspace_restriction,
    tangent_basis,
    tangent_stirrer,
)
from mite.trotter import all_bitstrings, sequence_operator, signed_hamiltonian

THETA0 = -0.22131444234779124
THETA1 = +0.15314024387857597


def seeded_unitary(dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


@pytest.fixture(scope="module")
def single_table():
    bundle = single_qubit_model()
    return build_table(bundle.hamiltonian, 0.1, bundle.target_spec)


@pytest.fixture(scope="module")
def tfim_table():
    bundle = tfim_model(2)
    return build_table(bundle.hamiltonian, 0.05, bundle.target_spec)


class TestFixedPoint:
    def test_known_dominant_eigenvector(self):
        q = seeded_unitary(4, 3)
        m = q @ np.diag([3.0, 1.0, 0.5, 0.2]) @ q.conj().T
        fp = fixed_point(m)
        assert abs(np.vdot(fp.amplitudes, q[:, 0])) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_gauge_leading_amplitude_real_positive(self):
        q = seeded_unitary(4, 3)
        fp = fixed_point(q @ np.diag([3.0, 1.0, 0.5, 0.2]) @ q.conj().T)
        lead = fp.amplitudes[int(np.argmax(np.abs(fp.amplitudes)))]
        assert lead.imag == pytest.approx(0.0, abs=1e-12)
        assert lead.real > 0

    def test_degenerate_dominance_raises(self):
        with pytest.raises(DegenerateFixedPointError, match="not unique"):
            fixed_point(np.array([[0.0, 1.0], [2.0, 0.0]]))
        with pytest.raises(DegenerateFixedPointError):
            fixed_point(np.eye(3))


class TestSpanRotation:
    @pytest.mark.parametrize("dim,seed", [(2, 0), (4, 1), (8, 2), (4, 7)])
    def test_unitary_and_exact_stabilization(self, dim, seed):
        rng = np.random.default_rng(seed)
        m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        t = StateVector.normalized(rng.normal(size=dim) + 1j * rng.normal(size=dim))
        u = correction_span_rotation(m, t)
        assert u.is_unitary(1e-12)
        assert stabilization_residual(u, m, t) <= 1e-12

    def test_identity_outside_the_span(self):
        rng = np.random.default_rng(4)
        m = rng.normal(size=(4, 4))
        t = basis_state(2, 0)
        u = correction_span_rotation(m, t).entries
        w = m @ t.amplitudes
        v = w - np.vdot(t.amplitudes, w) * t.amplitudes
        v = v / np.linalg.norm(v)
        # orthonormalize a probe against the rotation plane {t, v}
        x = rng.normal(size=4) + 1j * rng.normal(size=4)
        x = x - np.vdot(t.amplitudes, x) * t.amplitudes
        x = x - np.vdot(v, x) * v
        x = x / np.linalg.norm(x)
        np.testing.assert_allclose(u @ x, x, atol=1e-12)

    def test_proportional_branch_cancels_phase(self):
        t = basis_state(1, 0)
        u = correction_span_rotation(1j * np.eye(2), t)
        assert u.is_unitary(1e-12)
        assert stabilization_residual(u, 1j * np.eye(2), t) <= 1e-14
        out = u.entries @ (1j * np.eye(2)) @ t.amplitudes
        assert out[0] == pytest.approx(1.0, abs=1e-12)

    def test_annihilated_target_raises(self):
        t = basis_state(1, 1)
        projector = np.diag([1.0, 0.0])
        with pytest.raises(AnnihilatedTargetError):
            correction_span_rotation(projector, t)


class TestTangentTools:
    def test_tangent_basis_orthonormal_complement(self):
        t = StateVector.normalized([1.0, 1.0j, -1.0, 0.5])
        basis = tangent_basis(t)
        assert basis.shape == (4, 3)
        np.testing.assert_allclose(
            basis.conj().T @ basis, np.eye(3), atol=1e-12
        )
        np.testing.assert_allclose(basis.conj().T @ t.amplitudes, 0, atol=1e-12)

    def test_stirrer_fixes_target_and_is_unitary(self):
        t = StateVector.normalized([1.0, 1.0j, -1.0, 0.5])
        u = tangent_stirrer(t)
        assert u.is_unitary(1e-12)
        np.testing.assert_allclose(u.entries @ t.amplitudes, t.amplitudes, atol=1e-12)

    def test_stirrer_is_deterministic(self):
        t = StateVector.normalized([1.0, 1.0j, -1.0, 0.5])
        np.testing.assert_array_equal(
            tangent_stirrer(t).entries, tangent_stirrer(t).entries
        )

    def test_stirrer_trivial_on_a_single_qubit(self):
        np.testing.assert_allclose(
            tangent_stirrer(basis_state(1, 0)).entries, np.eye(2)
        )


class TestBuildTable:
    def test_single_qubit_uses_span(self, single_table):
        assert single_table.strategy == "span"
        assert set(single_table.corrections) == {(0,), (1,)}

    def test_multi_term_uses_span_stir(self, tfim_table):
        assert tfim_table.strategy == "span_stir"
        assert set(tfim_table.corrections) == set(all_bitstrings(2))

    def test_residuals_within_tolerance(self, single_table, tfim_table):
        for table in (single_table, tfim_table):
            assert max(table.residuals.values()) <= RESIDUAL_TOL

    def test_frozen_single_qubit_angles(self, single_table):
        assert bloch_angle(single_table.corrections[(0,)].entries) == pytest.approx(
            THETA0, abs=1e-9
        )
        assert bloch_angle(single_table.corrections[(1,)].entries) == pytest.approx(
            THETA1, abs=1e-9
        )

    def test_unknown_strategy_rejected(self):
        bundle = single_qubit_model()
        with pytest.raises(ValueError, match="strategy"):
            build_table(bundle.hamiltonian, 0.1, bundle.target_spec, strategy="foo")

    def test_ansatz_strategy_stabilizes(self):
        bundle = tfim_model(2)
        table = build_table(bundle.hamiltonian, 0.05, bundle.target_spec, strategy="ansatz")
        assert table.strategy == "ansatz"
        assert max(table.residuals.values()) <= RESIDUAL_TOL

    def test_target_matches_rotated_anchor_fixed_point(self, single_table):
        bundle = single_qubit_model()
        m0 = sequence_operator(bundle.hamiltonian, (0,), 0.1)
        e0 = fixed_point(m0)
        want = bundle.target_spec.v @ e0.amplitudes
        overlap = abs(np.vdot(want, single_table.target.amplitudes))
        assert overlap == pytest.approx(1.0, abs=1e-12)


class TestFixedPointQuality:
    @pytest.mark.parametrize("num_qubits", [2, 3])
    @pytest.mark.parametrize("eps", [0.1, 0.05])
    def test_quadratic_distance_to_signed_ground_states(self, num_qubits, eps):
        model = tfim_model(num_qubits).hamiltonian
        for bits in all_bitstrings(model.num_terms):
            m_k = sequence_operator(model, bits, eps)
            fp = fixed_point(m_k)
            w, v = np.linalg.eigh(signed_hamiltonian(model, bits).entries)
            assert w[1] - w[0] > 1e-6  # frozen: every signed spectrum is gapped
            infid = 1.0 - abs(np.vdot(v[:, 0], fp.amplitudes)) ** 2
            assert infid <= 120.0 * eps**2
            if bits == (0, 0):
                assert infid <= eps**2


class TestAnsatzSolver:
    def test_exactly_stabilizes_every_outcome(self, tfim_table):
        bundle = tfim_model(2)
        model = bundle.hamiltonian
        for bits in all_bitstrings(2):
            m_k = sequence_operator(model, bits, 0.05)
            u, params, residual = solve_tfim_ansatz(m_k, tfim_table.target, 2)
            assert params.shape == (5,)
            assert u.is_unitary(1e-10)
            assert residual <= 1e-9


class TestCorrectionTableValidation:
    def test_rejects_non_unitary_entries(self):
        t = basis_state(1, 0)
        with pytest.raises(ValueError, match="not unitary"):
            CorrectionTable(
                target=t,
                v=Operator(np.eye(2)),
                corrections={(0,): Operator(np.diag([1.0, 0.5]))},
                residuals={(0,): 0.0},
                strategy="span",
            )

    def test_rejects_excess_residuals(self):
        t = basis_state(1, 0)
        with pytest.raises(ValueError, match="residual"):
            CorrectionTable(
                target=t,
                v=Operator(np.eye(2)),
                corrections={(0,): Operator(np.eye(2))},
                residuals={(0,): 1e-3},
                strategy="span",
            )


class TestHelpers:
    def test_anchor_bits_default_and_explicit(self):
        spec = TargetSpec(v=np.eye(2))
        assert spec.anchor_bits(3) == (0, 0, 0)
        spec = TargetSpec(v=np.eye(2), anchor=(1, 0))
        assert spec.anchor_bits(2) == (1, 0)

    def test_bloch_angle_convention(self):
        theta = 0.37
        u = np.array(
            [[np.cos(theta / 2), np.sin(theta / 2)],
             [-np.sin(theta / 2), np.cos(theta / 2)]]
        )
        assert bloch_angle(u) == pytest.approx(theta, abs=1e-12)

    def test_subspace_restriction(self):
        basis = np.eye(4)[:, 1:3]
        mat = np.diag([0.0, 5.0, 7.0, 0.0])
        np.testing.assert_allclose(
            subspace_restriction(mat, basis), np.diag([5.0, 7.0])
        )

    def test_serialize_table_format(self, single_table):
        text = serialize_table(single_table)
        assert text.startswith("# correction table")
        assert "# strategy: span" in text
        assert "k=0 residual=" in text and "k=1 residual=" in text
        # every matrix line parses back into complex pairs
        for line in text.splitlines():
            if line.startswith("#") or line.startswith("k="):
                continue
            for pair in line.split(" "):
                re, im = pair.split(",")
                complex(float(re), float(im))
        assert text == serialize_table(single_table)
