import math

import numpy as np
import pytest

from src.models import DensityMatrix, Effect, HermitianOperator, PureState2Q, SymmetrizedStrategy
from src.utils.errors import DimensionError, InfeasibleInput, ParameterError
from src.utils import qcore


def test_state_vector_and_basis():
    state = PureState2Q(math.pi / 8)
    basis = qcore.ordered_basis(state)
    np.testing.assert_allclose(basis.T @ basis, np.eye(4), atol=1e-15)
    np.testing.assert_allclose(basis[:, 0], qcore.state_vector(state).real)
    assert np.linalg.norm(qcore.state_vector(state)) == pytest.approx(1.0)


def test_pure_state_rejects_theta_outside_range():
    with pytest.raises(ParameterError):
        PureState2Q(1.0)


def test_partial_transpose_is_involution(rng):
    matrix = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    twice = qcore.partial_transpose_matrix(qcore.partial_transpose_matrix(matrix))
    np.testing.assert_allclose(twice, matrix)


def test_partial_transpose_moves_coherence():
    matrix = np.zeros((4, 4))
    matrix[0, 3] = matrix[3, 0] = 1.0
    transposed = qcore.partial_transpose_matrix(matrix)
    assert transposed[1, 2] == 1.0 and transposed[2, 1] == 1.0
    assert transposed[0, 3] == 0.0


def test_maximally_entangled_projector_is_not_ppt():
    state = PureState2Q(math.pi / 4)
    omega = Effect(qcore.projector(state))
    assert qcore.min_pt_eigenvalue(omega.entries) == pytest.approx(-0.5)
    assert not qcore.is_ppt(omega)
    assert qcore.is_ppt(Effect(np.eye(4)))


def test_partial_transpose_requires_two_qubits():
    with pytest.raises(DimensionError):
        qcore.partial_transpose_matrix(np.eye(3))
    with pytest.raises(DimensionError):
        qcore.partial_transpose(HermitianOperator(np.eye(2)))


def test_error_probabilities():
    state = PureState2Q(math.pi / 8)
    rho0 = DensityMatrix(qcore.projector(state))
    sigma = DensityMatrix(np.eye(4) / 4)
    p01, p10 = qcore.error_probabilities(Effect(np.eye(4)), rho0, sigma)
    assert p01 == pytest.approx(0.0, abs=1e-15)
    assert p10 == pytest.approx(1.0)

    p01, p10 = qcore.error_probabilities(Effect(qcore.projector(state)), rho0, sigma)
    assert p01 == pytest.approx(0.0, abs=1e-12)
    assert p10 == pytest.approx(0.25)


def test_error_probabilities_dimension_mismatch():
    state = PureState2Q(0.0)
    rho0 = DensityMatrix(qcore.projector(state))
    with pytest.raises(DimensionError):
        qcore.error_probabilities(Effect(np.eye(2)), rho0, rho0)


def test_effect_validation():
    with pytest.raises(InfeasibleInput):
        Effect(2 * np.eye(4))
    with pytest.raises(ParameterError):
        HermitianOperator(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ParameterError):
        DensityMatrix(np.eye(4))


def test_closed_form_twirl_matches_discrete_average(random_effect, twirl_oracle):
    for _ in range(20):
        omega = random_effect()
        np.testing.assert_allclose(
            qcore.symmetrize_matrix(omega.entries), twirl_oracle(omega.entries), atol=1e-12
        )


def test_symmetrize_embed_round_trip(random_effect):
    state = PureState2Q(0.3)
    omega = random_effect()
    strategy = qcore.symmetrize(omega, state)
    np.testing.assert_allclose(
        qcore.embed(strategy, state).entries, qcore.symmetrize_matrix(omega.entries), atol=1e-12
    )


def test_symmetrize_preserves_fidelity_and_ppt(rng):
    state = PureState2Q(math.pi / 8)
    psi = qcore.state_vector(state)
    for _ in range(10):
        a, b = rng.uniform(0, 1, size=2), rng.uniform(0, 1, size=2)
        u, v = np.linalg.qr(rng.normal(size=(2, 2)))[0], np.linalg.qr(rng.normal(size=(2, 2)))[0]
        local_a = (u * a) @ u.T
        local_b = (v * b) @ v.T
        omega = Effect(np.kron(local_a, local_b))
        strategy = qcore.symmetrize(omega, state)
        symmetrized = qcore.embed(strategy, state)
        assert symmetrized.expectation(psi) == pytest.approx(omega.expectation(psi), abs=1e-12)
        assert qcore.is_ppt(symmetrized)
        assert strategy.ppt_margin(state) >= -1e-12


def test_ppt_margin_matches_partial_transpose():
    state = PureState2Q(math.pi / 8)
    inside = SymmetrizedStrategy(t=0.5, z=0.1, x=0.2, omega=0.25)
    outside = SymmetrizedStrategy(t=0.5, z=0.1, x=0.2, omega=0.15)
    assert inside.ppt_margin(state) == pytest.approx(0.25 - 0.3 * math.sqrt(0.5))
    assert qcore.is_ppt(qcore.embed(inside, state))
    assert outside.ppt_margin(state) < 0
    assert not qcore.is_ppt(qcore.embed(outside, state))
    lowest = qcore.min_pt_eigenvalue(qcore.embed(outside, state).entries)
    assert lowest == pytest.approx(outside.ppt_margin(state), abs=1e-12)


def test_symmetrized_strategy_rejects_infeasible_block():
    with pytest.raises(InfeasibleInput):
        SymmetrizedStrategy(t=0.9, z=0.0, x=0.5, omega=0.0)


def test_project_to_effect_clips_spectrum():
    matrix = np.diag([-0.5, 0.2, 0.7, 1.5])
    np.testing.assert_allclose(np.linalg.eigvalsh(qcore.project_to_effect(matrix)),
                               [0.0, 0.2, 0.7, 1.0], atol=1e-15)


@pytest.mark.parametrize('theta', [0.0, 0.1, math.pi / 8, 0.6, math.pi / 4])
def test_partial_transpose_spectrum_of_state(theta):
    state = PureState2Q(theta)
    transposed = qcore.partial_transpose(HermitianOperator(qcore.projector(state)))
    lowest = np.linalg.eigvalsh(transposed.entries)[0]
    assert lowest == pytest.approx(-math.sin(theta) * math.cos(theta), abs=1e-12)


def test_partial_transpose_preserves_trace(random_effect):
    for _ in range(10):
        omega = random_effect()
        transposed = qcore.partial_transpose(omega)
        assert np.trace(transposed.entries) == pytest.approx(np.trace(omega.entries), abs=1e-12)


@pytest.mark.parametrize('theta', [0.0, math.pi / 8, math.pi / 4])
def test_symmetrize_examples(theta):
    state = PureState2Q(theta)
    strategy = qcore.symmetrize(Effect(qcore.projector(state)), state)
    assert (strategy.t, strategy.z, strategy.x, strategy.omega) == \
        pytest.approx((0.5, 0.5, 0.0, 0.0), abs=1e-12)

    ket01 = np.zeros(4)
    ket01[1] = 1.0
    strategy = qcore.symmetrize(Effect(np.outer(ket01, ket01)), state)
    assert (strategy.t, strategy.z, strategy.x, strategy.omega) == \
        pytest.approx((0.0, 0.0, 0.0, 0.5), abs=1e-12)


def test_symmetrize_preserves_overlap_with_invariant_states(rng, random_effect):
    state = PureState2Q(math.pi / 8)
    psi = qcore.state_vector(state)
    for _ in range(100):
        omega = random_effect()
        raw = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        sigma = qcore.symmetrize_matrix(raw @ raw.conj().T)
        sigma = sigma / np.trace(sigma).real
        symmetrized = qcore.embed(qcore.symmetrize(omega, state), state)
        assert np.trace(sigma @ symmetrized.entries).real == \
            pytest.approx(np.trace(sigma @ omega.entries).real, abs=1e-12)
        assert symmetrized.expectation(psi) == pytest.approx(omega.expectation(psi), abs=1e-12)


def test_embed_ppt_matches_closed_condition(rng):
    for _ in range(1000):
        theta = rng.uniform(0.0, math.pi / 4)
        state = PureState2Q(theta)
        upper, lower = np.sort(rng.uniform(0.0, 1.0, size=2))[::-1]
        angle = rng.uniform(0.0, math.pi)
        half = 0.5 * (upper - lower)
        strategy = SymmetrizedStrategy(
            t=0.5 * (upper + lower), z=half * math.cos(2 * angle),
            x=half * math.sin(2 * angle), omega=rng.uniform(0.0, 1.0),
        )
        bound = abs(strategy.x * math.cos(2 * theta) + strategy.z * math.sin(2 * theta))
        expected = strategy.omega >= bound - 1e-10
        assert qcore.is_ppt(qcore.embed(strategy, state)) == expected
