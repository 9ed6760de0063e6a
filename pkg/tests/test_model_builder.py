import math

import numpy as np
import pytest

from src.models import PureState2Q, Scenario, SdpSettings
from src.services.analytic_service import analytic_service
from src.services.model_builder import Formulation, model_builder
from src.services.oracle_service import oracle_service
from src.services.sdp_solver import sdp_solver
from src.utils import qcore
from src.utils.errors import SolverFailure


@pytest.mark.parametrize('which', list(Formulation))
@pytest.mark.parametrize('delta', [0.0, 0.3, 0.7])
def test_maximally_entangled_eps1(which, delta):
    value = model_builder.p10(Scenario(math.pi / 4, delta, 1.0), which)
    assert value == pytest.approx((1 - delta) / 3, abs=1e-6)


@pytest.mark.parametrize('which', list(Formulation))
def test_eps1_closed_form(which):
    assert model_builder.p10(Scenario(math.pi / 8, 0.1, 1.0), which) == pytest.approx(
        0.0880354, abs=1e-6
    )


@pytest.mark.parametrize('theta', [math.pi / 16, math.pi / 8, 3 * math.pi / 16])
@pytest.mark.parametrize('epsilon', [0.25, 0.75])
def test_zero_delta_is_commuting(theta, epsilon):
    expected = 1 - epsilon / (1 + math.sin(theta) * math.cos(theta))
    assert model_builder.p10(Scenario(theta, 0.0, epsilon), Formulation.FULL) == pytest.approx(
        expected, abs=1e-6
    )


def test_product_state_rejects_perfectly():
    assert model_builder.p10(Scenario(0.0, 0.4, 1.0), Formulation.FULL) == pytest.approx(
        0.0, abs=1e-8
    )


def test_full_and_reduced_agree(rng):
    for _ in range(8):
        sc = Scenario(rng.uniform(0, math.pi / 4), rng.uniform(0, 1), rng.uniform(0.05, 1))
        full = model_builder.p10(sc, Formulation.FULL)
        reduced = model_builder.p10(sc, Formulation.REDUCED)
        assert full == pytest.approx(reduced, abs=1e-6)


def test_full_problem_shape():
    problem = model_builder.build_full_sdp(Scenario(math.pi / 8, 0.1, 0.9))
    assert problem.num_vars == 12
    assert problem.variable_names[-2:] == ('y1', 'y2')
    assert all(block.size <= 8 for block in problem.lmi_blocks)

    pinned = model_builder.build_full_sdp(Scenario(math.pi / 8, 0.0, 1.0))
    assert 'w00' not in pinned.variable_names
    assert 'y2' not in pinned.variable_names


def test_reduced_problem_pins_x_at_extremes():
    assert 'x' not in model_builder.build_reduced_sdp(Scenario(0.3, 0.0, 0.5)).variable_names
    assert 'x' not in model_builder.build_reduced_sdp(Scenario(0.3, 1.0, 0.5)).variable_names
    assert 'x' in model_builder.build_reduced_sdp(Scenario(0.3, 0.5, 0.5)).variable_names


@pytest.mark.parametrize('which', list(Formulation))
def test_extracted_strategy_is_feasible_and_optimal(which, pi8_scenario):
    solution = model_builder.solve(pi8_scenario, which)
    omega, dual = model_builder.extract_strategy(solution, which, pi8_scenario)
    state = PureState2Q(pi8_scenario.theta)
    psi = qcore.state_vector(state)

    assert qcore.is_ppt(omega)
    assert omega.expectation(psi) >= 1 - pi8_scenario.delta - 1e-7
    worst = oracle_service.inner_max(omega, state, pi8_scenario.epsilon).value
    assert worst == pytest.approx(solution.primal_value, abs=1e-6)
    assert dual.y1 + (1 - pi8_scenario.epsilon) * dual.y2 == pytest.approx(
        solution.primal_value, abs=1e-7
    )


def test_extracted_dual_at_eps1():
    sc = Scenario(math.pi / 8, 0.1, 1.0)
    solution = model_builder.solve(sc, Formulation.REDUCED)
    _, dual = model_builder.extract_strategy(solution, Formulation.REDUCED, sc)
    assert dual.y2 == 0.0


def test_kkt_of_model_solutions(pi8_scenario):
    for which in Formulation:
        problem = model_builder.build(pi8_scenario, which)
        solution = sdp_solver.solve(problem)
        assert sdp_solver.check_kkt(problem, solution, 1e-6)


def test_commuting_upper_bound(rng):
    for _ in range(5):
        sc = Scenario(rng.uniform(0, math.pi / 4), rng.uniform(0, 1), rng.uniform(0.05, 1))
        value = model_builder.p10(sc, Formulation.REDUCED)
        assert value <= analytic_service.p10_commuting(sc).value + 1e-8
        assert value >= (1 - sc.delta) * (1 - sc.epsilon) - 1e-8


def test_extract_requires_optimal_solution(pi8_scenario):
    problem = model_builder.build_reduced_sdp(pi8_scenario)
    truncated = sdp_solver.solve(problem, SdpSettings(max_iter=1))
    with pytest.raises(SolverFailure):
        model_builder.extract_strategy(truncated, Formulation.REDUCED, pi8_scenario)


def test_zero_delta_extracts_commuting_optimum():
    sc = Scenario(math.pi / 8, 0.0, 0.5)
    solution = model_builder.solve(sc, Formulation.REDUCED)
    omega, _ = model_builder.extract_strategy(solution, Formulation.REDUCED, sc)
    np.testing.assert_allclose(omega.entries, analytic_service.commuting_optimum(sc).entries,
                               atol=1e-6)
    state = PureState2Q(sc.theta)
    strategy = qcore.symmetrize(omega, state)
    assert strategy.t + strategy.z == pytest.approx(1.0, abs=1e-7)
    assert strategy.omega == pytest.approx(state.sin2 / (2 + state.sin2), abs=1e-6)


@pytest.mark.parametrize('which', list(Formulation))
def test_full_rejection_extracts_null_effect(which):
    sc = Scenario(0.3, 1.0, 0.5)
    solution = model_builder.solve(sc, which)
    omega, _ = model_builder.extract_strategy(solution, which, sc)
    assert np.linalg.eigvalsh(omega.entries).max() <= 1e-7
