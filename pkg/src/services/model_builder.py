"""Traduccion de las optimizaciones de p10 a instancias SdpProblem.

Forma completa: Omega real simetrica 4x4 parametrizada en la base ordenada
{|psi>, |psi_perp>, |01>, |10>} (Omega = R W R^T), separabilidad como PPT.
Forma reducida: variables (z, x, omega, y1, y2) del bloque simetrizado con
t = 1 - delta - z.

Las igualdades que las LMI imponen en los extremos (delta = 0 fija la primera
fila de W; delta in {0, 1} fija x = 0 en la forma reducida) se sustituyen antes
de llegar al solver para conservar un punto interior. Para epsilon = 1 el dual
interno usa y1 * 1 >= Omega comprimido a psi_perp, pues el optimo exige y2 -> inf.
"""
import logging
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..models.quantum_models import Effect, PureState2Q, SymmetrizedStrategy
from ..models.scenario_models import DualPoint, Scenario
from ..models.sdp_models import LmiBlock, SdpProblem, SdpSettings, SdpSolution
from ..utils.errors import SolverFailure
from ..utils.qcore import (
    embed, min_pt_eigenvalue, ordered_basis, partial_transpose_matrix, project_to_effect
)
from .sdp_solver import sdp_solver

logger = logging.getLogger(__name__)

PIN_TOL = 1e-12


class Formulation(Enum):
    FULL = 'full'
    REDUCED = 'reduced'


class _LmiAssembler:
    """Acumula bloques F0 + sum_i x_i F_i por nombre de variable"""

    def __init__(self, names: List[str]):
        self.names = list(names)
        self.blocks: List[LmiBlock] = []

    def add(self, constant, terms: Dict[str, np.ndarray]):
        constant = np.atleast_2d(np.asarray(constant, dtype=float))
        coefficients = []
        for name in self.names:
            matrix = terms.get(name)
            if matrix is None:
                coefficients.append(np.zeros_like(constant))
            else:
                coefficients.append(np.atleast_2d(np.asarray(matrix, dtype=float)))
        self.blocks.append(LmiBlock(constant, tuple(coefficients)))

    def problem(self, objective: Dict[str, float]) -> SdpProblem:
        vector = np.array([objective.get(name, 0.0) for name in self.names])
        return SdpProblem(len(self.names), vector, tuple(self.blocks), tuple(self.names))


def _unit(i: int, j: int, size: int = 4) -> np.ndarray:
    matrix = np.zeros((size, size))
    matrix[i, j] = matrix[j, i] = 1.0
    return matrix


def _full_parametrization(sc: Scenario):
    """Devuelve (W0, [(nombre, E_k)], fila_fijada) para W = W0 + sum w_k E_k"""
    pinned = sc.delta <= PIN_TOL
    start = 1 if pinned else 0
    fixed = np.zeros((4, 4))
    if pinned:
        fixed[0, 0] = 1.0
    free = [(f'w{i}{j}', _unit(i, j)) for i in range(start, 4) for j in range(i, 4)]
    return fixed, free, pinned


class ModelBuilder:
    """Construye y resuelve las formulaciones SDP de p10(delta, epsilon)"""

    # ==================== FORMA COMPLETA ====================

    def build_full_sdp(self, sc: Scenario) -> SdpProblem:
        state = PureState2Q(sc.theta)
        basis = ordered_basis(state)
        fixed, free, pinned = _full_parametrization(sc)
        eps_one = sc.epsilon >= 1.0
        names = [name for name, _ in free] + (['y1'] if eps_one else ['y1', 'y2'])
        lmi = _LmiAssembler(names)

        sub = slice(1, 4) if pinned else slice(0, 4)
        size = 3 if pinned else 4
        # 0 <= W <= 1 (sobre la parte libre)
        lmi.add(fixed[sub, sub], {name: e[sub, sub] for name, e in free})
        lmi.add(np.eye(size) - fixed[sub, sub], {name: -e[sub, sub] for name, e in free})

        # Separabilidad: (R W R^T)^{T_B} >= 0
        def pt(w):
            return partial_transpose_matrix(basis @ w @ basis.T)
        lmi.add(pt(fixed), {name: pt(e) for name, e in free})

        if not pinned:
            lmi.add([[-(1.0 - sc.delta)]], {name: [[e[0, 0]]] for name, e in free})

        if eps_one:
            lmi.add(-fixed[1:, 1:], dict({name: -e[1:, 1:] for name, e in free},
                                         y1=np.eye(3)))
        else:
            lmi.add(-fixed, dict({name: -e for name, e in free},
                                 y1=np.eye(4), y2=_unit(0, 0)))
            lmi.add([[0.0]], {'y2': [[1.0]]})

        return lmi.problem({'y1': 1.0, 'y2': 1.0 - sc.epsilon})

    # ==================== FORMA REDUCIDA ====================

    def build_reduced_sdp(self, sc: Scenario) -> SdpProblem:
        pin_x = sc.delta <= PIN_TOL or sc.delta >= 1.0 - PIN_TOL
        eps_one = sc.epsilon >= 1.0
        names = ['z'] + ([] if pin_x else ['x']) + ['omega', 'y1'] + ([] if eps_one else ['y2'])
        lmi = _LmiAssembler(names)
        d = sc.delta
        off = np.array([[0.0, 1.0], [1.0, 0.0]])
        lower = np.array([[0.0, 0.0], [0.0, 1.0]])

        # 0 <= [[1-d, x], [x, 1-d-2z]] <= 1
        if pin_x:
            lmi.add([[1.0 - d]], {'z': [[-2.0]]})
            lmi.add([[d]], {'z': [[2.0]]})
        else:
            lmi.add((1.0 - d) * np.eye(2), {'z': -2.0 * lower, 'x': off})
            lmi.add(d * np.eye(2), {'z': 2.0 * lower, 'x': -off})

        # omega >= |x cos2theta + z sin2theta|, 0 <= omega <= 1
        lmi.add([[0.0]], {'omega': [[1.0]], 'z': [[-sc.sin2]], 'x': [[-sc.cos2]]})
        lmi.add([[0.0]], {'omega': [[1.0]], 'z': [[sc.sin2]], 'x': [[sc.cos2]]})
        lmi.add([[0.0]], {'omega': [[1.0]]})
        lmi.add([[1.0]], {'omega': [[-1.0]]})

        if eps_one:
            lmi.add([[-(1.0 - d)]], {'y1': [[1.0]], 'z': [[2.0]]})
        else:
            lmi.add(-(1.0 - d) * np.eye(2), {
                'y1': np.eye(2), 'y2': np.diag([1.0, 0.0]), 'x': -off, 'z': 2.0 * lower,
            })
            lmi.add([[0.0]], {'y2': [[1.0]]})
        lmi.add([[0.0]], {'y1': [[1.0]], 'omega': [[-1.0]]})

        return lmi.problem({'y1': 1.0, 'y2': 1.0 - sc.epsilon})

    def build(self, sc: Scenario, which: Formulation) -> SdpProblem:
        if which is Formulation.FULL:
            return self.build_full_sdp(sc)
        return self.build_reduced_sdp(sc)

    # ==================== EXTRACCION ====================

    def extract_strategy(self, sol: SdpSolution, which: Formulation,
                         sc: Scenario) -> Tuple[Effect, DualPoint]:
        """Reconstruye Omega y (y1, y2) a partir de una solucion optima"""
        if not sol.is_optimal:
            raise SolverFailure('no se puede extraer una estrategia', sol.status.value)
        problem = self.build(sc, which)
        values = dict(zip(problem.variable_names, sol.x))
        state = PureState2Q(sc.theta)

        if which is Formulation.FULL:
            fixed, free, _ = _full_parametrization(sc)
            w = fixed + sum(values[name] * e for name, e in free)
            basis = ordered_basis(state)
            matrix = project_to_effect(basis @ w @ basis.T)
        else:
            z = values['z']
            x = values.get('x', 0.0)
            t = 1.0 - sc.delta - z
            block = project_to_effect(np.array([[t + z, x], [x, t - z]]))
            t = 0.5 * (block[0, 0] + block[1, 1])
            z = 0.5 * (block[0, 0] - block[1, 1])
            x = block[0, 1]
            omega = min(1.0, max(values['omega'], abs(x * sc.cos2 + z * sc.sin2)))
            matrix = embed(SymmetrizedStrategy(t, z, x, omega), state).entries

        matrix = self._repair_ppt(matrix)
        dual = DualPoint(y1=values['y1'], y2=max(0.0, values.get('y2', 0.0)))
        return Effect(matrix), dual

    @staticmethod
    def _repair_ppt(matrix: np.ndarray) -> np.ndarray:
        """Mezcla con 1/2 lo justo para absorber violaciones PPT del orden de tol"""
        lowest = min_pt_eigenvalue(matrix)
        if lowest >= 0.0:
            return matrix
        eta = min(1.0, 2.0 * abs(lowest) * (1.0 + 1e-6) + 1e-15)
        return (1.0 - eta) * matrix + 0.5 * eta * np.eye(4)

    # ==================== EVALUACION ====================

    def solve(self, sc: Scenario, which: Formulation,
              settings: Optional[SdpSettings] = None) -> SdpSolution:
        """Resuelve la formulacion pedida; lanza SolverFailure si no es optima"""
        problem = self.build(sc, which)
        solution = sdp_solver.solve(problem, settings)
        if not solution.is_optimal:
            logger.warning('SDP %s sin optimo en %s: %s', which.value, sc, solution.status.value)
            raise SolverFailure(f'SDP {which.value} no resuelto', solution.status.value)
        return solution

    def p10(self, sc: Scenario, which: Formulation,
            settings: Optional[SdpSettings] = None) -> float:
        return self.solve(sc, which, settings).primal_value


# Instancia global
model_builder = ModelBuilder()
