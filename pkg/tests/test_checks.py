"""Built-in invariant suite: all green on a healthy build, and the tamper
hook must be able to break it (guards against vacuous checks)."""
import pytest

from mite.checks import run_checks

EXPECTED = [
    "completeness",
    "unitarity",
    "stabilization",
    "trotter_scaling",
    "backend_equivalence",
    "subspace_confinement",
    "go_identity",
]


@pytest.fixture(scope="module")
def results():
    return run_checks()


def test_names_and_order(results):
    assert [r.name for r in results] == EXPECTED


def test_all_pass(results):
    failing = [f"{r.name}: {r.detail}" for r in results if not r.passed]
    assert not failing, "; ".join(failing)


def test_details_are_informative(results):
    for r in results:
        assert r.detail


def test_tampered_kraus_pair_fails_completeness():
    results = {r.name: r for r in run_checks(tamper_m0_scale=1.01)}
    assert not results["completeness"].passed
    # the tamper hook is scoped to the completeness check alone
    assert results["unitarity"].passed
    assert results["go_identity"].passed
