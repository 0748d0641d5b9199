"""Dense linear-algebra primitives: containers, conventions, spectral helpers."""
import numpy as np
import pytest

from mite.linalg import (
    PAULI,
    Operator,
    PauliString,
    StateVector,
    basis_state,
    expectation,
    fidelity,
    gauge_phase,
    hermitian_sqrt,
    materialize,
    matrix_exp_hermitian,
    random_state,
)

PLUS = np.array([1.0, 1.0]) / np.sqrt(2.0)


class TestStateVector:
    def test_accepts_normalized(self):
        psi = StateVector(PLUS)
        assert psi.dim == 2
        assert psi.num_qubits == 1

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="norm"):
            StateVector([1.0, 1.0])

    def test_rejects_non_power_of_two_length(self):
        with pytest.raises(ValueError, match="power of two"):
            StateVector(np.ones(3) / np.sqrt(3.0))

    def test_rejects_mismatched_qubit_count(self):
        with pytest.raises(ValueError, match="num_qubits"):
            StateVector(PLUS, num_qubits=2)

    def test_normalized_constructor(self):
        psi = StateVector.normalized([3.0, 4.0])
        np.testing.assert_allclose(psi.amplitudes, [0.6, 0.8])

    def test_normalized_rejects_zero(self):
        with pytest.raises(ValueError, match="zero"):
            StateVector.normalized([0.0, 0.0])

    def test_immutable(self):
        psi = StateVector(PLUS)
        with pytest.raises(AttributeError):
            psi.amplitudes = np.zeros(2)
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 5.0


class TestOperator:
    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            Operator(np.ones((2, 3)))

    def test_hermitian_and_unitary_flags(self):
        assert Operator(PAULI["Y"]).is_hermitian()
        assert Operator(PAULI["Y"]).is_unitary()
        upper = Operator([[0.0, 1.0], [0.0, 0.0]])
        assert not upper.is_hermitian()
        assert not upper.is_unitary()

    def test_immutable(self):
        op = Operator(np.eye(2))
        with pytest.raises(AttributeError):
            op.entries = np.zeros((2, 2))


class TestPauliString:
    def test_rejects_unknown_letter(self):
        with pytest.raises(ValueError, match="letter"):
            PauliString(1.0, {0: "W"})

    def test_rejects_negative_index(self):
        with pytest.raises(ValueError, match="negative"):
            PauliString(1.0, {-1: "Z"})

    def test_materialize_zz(self):
        op = materialize(PauliString(1.0, {0: "Z", 1: "Z"}), 2)
        np.testing.assert_allclose(op.entries, np.diag([1, -1, -1, 1]))

    def test_qubit_zero_is_most_significant(self):
        # Z on qubit 0 of a 2-qubit register flips sign on indices 2 and 3.
        op = materialize(PauliString(1.0, {0: "Z"}), 2)
        np.testing.assert_allclose(op.entries, np.diag([1, 1, -1, -1]))

    def test_materialize_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            materialize(PauliString(1.0, {2: "X"}), 2)

    def test_coefficient_scales(self):
        op = materialize(PauliString(-0.5, {0: "X"}), 1)
        np.testing.assert_allclose(op.entries, -0.5 * PAULI["X"])


class TestExpectationAndFidelity:
    def test_expectation_known_values(self):
        z = Operator(PAULI["Z"])
        assert expectation(StateVector(PLUS), z) == pytest.approx(0.0, abs=1e-15)
        assert expectation(basis_state(1, 0), z) == pytest.approx(1.0)
        assert expectation(basis_state(1, 1), z) == pytest.approx(-1.0)

    def test_expectation_requires_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            expectation(StateVector(PLUS), Operator([[0.0, 1.0], [0.0, 0.0]]))

    def test_expectation_dimension_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            expectation(basis_state(2, 0), Operator(PAULI["Z"]))

    def test_fidelity_orthogonal_and_equal(self):
        assert fidelity(basis_state(1, 0), basis_state(1, 1)) == 0.0
        assert fidelity(StateVector(PLUS), StateVector(PLUS)) == pytest.approx(1.0, abs=1e-15)

    def test_fidelity_never_exceeds_one(self):
        a = StateVector(PLUS)
        assert fidelity(a, a) <= 1.0

    def test_fidelity_dimension_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            fidelity(basis_state(1, 0), basis_state(2, 0))


class TestSpectralHelpers:
    def test_hermitian_sqrt_diagonal(self):
        root = hermitian_sqrt(Operator(np.diag([4.0, 9.0])))
        np.testing.assert_allclose(root.entries, np.diag([2.0, 3.0]), atol=1e-12)

    def test_hermitian_sqrt_rejects_negative(self):
        with pytest.raises(ValueError, match="PSD"):
            hermitian_sqrt(Operator(np.diag([-1.0, 1.0])))

    def test_hermitian_sqrt_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            hermitian_sqrt(Operator([[0.0, 1.0], [0.0, 0.0]]))

    def test_matrix_exp_hermitian(self):
        out = matrix_exp_hermitian(Operator(PAULI["Z"]), 0.3)
        np.testing.assert_allclose(
            out.entries, np.diag([np.exp(-0.3), np.exp(0.3)]), atol=1e-14
        )

    def test_gauge_phase_makes_leading_amp_real_positive(self):
        out = gauge_phase(np.array([0.0, 1.0j]))
        np.testing.assert_allclose(out, [0.0, 1.0], atol=1e-15)
        out = gauge_phase(np.exp(0.7j) * np.array([0.8, 0.6]))
        np.testing.assert_allclose(out, [0.8, 0.6], atol=1e-15)

    def test_gauge_phase_zero_vector(self):
        np.testing.assert_allclose(gauge_phase(np.zeros(2)), np.zeros(2))


def test_basis_state():
    np.testing.assert_allclose(basis_state(2, 3).amplitudes, [0, 0, 0, 1])


def test_random_state_is_normalized_and_seeded():
    a = random_state(8, np.random.default_rng(5))
    b = random_state(8, np.random.default_rng(5))
    assert np.linalg.norm(a.amplitudes) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_array_equal(a.amplitudes, b.amplitudes)
