"""Caminos de verificacion independientes de los SDP.

El problema interno max Tr(Omega sigma) s.a. <psi|sigma|psi> <= 1 - eps tiene
el dual de una variable

    g(y2) = lambda_max(Omega - y2 |psi><psi|) + (1 - eps) y2,   y2 >= 0,

convexo. Como g(y2) >= lambda_max(Omega comprimido a psi_perp) + (1 - eps) y2 y
g(0) = lambda_max(Omega), el minimizador queda en [0, lambda_max(Omega)/(1 - eps)];
se busca en [0, max(2/eps, lambda_max(Omega)/(1 - eps))]. Para eps = 1 el valor es
exactamente lambda_max de Omega comprimido a psi_perp.
"""
import logging
from typing import Optional, Tuple

import numpy as np

from ..config.settings import Config
from ..models.quantum_models import (
    DensityMatrix, Effect, HermitianOperator, PureState2Q, SymmetrizedStrategy
)
from ..models.scenario_models import (
    Certification, OracleMethod, OracleReport, Scenario, Violation
)
from ..utils.errors import ParameterError
from ..utils.qcore import (
    embed, error_probabilities, min_pt_eigenvalue, ordered_basis, projector,
    state_vector,
)
from ..utils.search import StripSearch, golden_section
from .analytic_service import feasible_x_max, z_bounds

logger = logging.getLogger(__name__)

CERTIFY_TOL = 1e-8
WITNESS_STEP = 1e-9


def _fix_phase(vector: np.ndarray) -> np.ndarray:
    """Fase determinista: la componente de mayor modulo (la primera) real positiva"""
    k = int(np.argmax(np.abs(vector) > np.abs(vector).max() - 1e-12))
    return vector * (abs(vector[k]) / vector[k])


def _top_vector(matrix: np.ndarray) -> np.ndarray:
    _, vectors = np.linalg.eigh(matrix)
    return _fix_phase(vectors[:, -1])


class OracleService:
    """Dual 1-D del problema interno, oraculo por rejilla y certificador"""

    def __init__(self, iterations: Optional[int] = None):
        self.iterations = iterations or Config.GOLDEN_ITERATIONS

    # ==================== PROBLEMA INTERNO ====================

    def _dual_curve(self, matrix: np.ndarray, proj: np.ndarray, epsilon: float):
        def g(y2):
            y2 = np.asarray(y2, dtype=float)
            shifted = matrix[None, ...] - y2.reshape(-1, 1, 1) * proj[None, ...]
            top = np.linalg.eigvalsh(shifted)[:, -1]
            return (top + (1.0 - epsilon) * y2.reshape(-1)).reshape(y2.shape)
        return g

    def _solve_dual(self, matrix: np.ndarray, state: PureState2Q,
                    epsilon: float) -> Tuple[float, float, int]:
        """Devuelve (valor, y2*, evaluaciones); y2* = inf para eps = 1"""
        if epsilon >= 1.0:
            perp = ordered_basis(state)[:, 1:]
            compressed = perp.T @ matrix @ perp
            return float(np.linalg.eigvalsh(compressed)[-1]), np.inf, 1

        proj = projector(state)
        g = self._dual_curve(matrix, proj, epsilon)
        top = max(float(np.linalg.eigvalsh(matrix)[-1]), 0.0)
        upper = max(2.0 / epsilon, top / (1.0 - epsilon))
        y2, value = golden_section(g, 0.0, upper, self.iterations)
        return float(value), float(y2), 2 * self.iterations + 4

    def _witness(self, matrix: np.ndarray, state: PureState2Q, epsilon: float,
                 y2: float) -> DensityMatrix:
        """sigma factible que alcanza el valor del dual

        Mezcla los autovectores dominantes de Omega - y |psi><psi| a ambos lados
        de y2*, con pesos que saturan la restriccion de fidelidad.
        """
        psi = state_vector(state)
        if not np.isfinite(y2):
            perp = ordered_basis(state)[:, 1:]
            vector = perp @ _top_vector(perp.T @ matrix @ perp)
            return DensityMatrix(np.outer(vector, vector.conj()))

        proj = np.outer(psi, psi.conj())
        step = WITNESS_STEP * max(1.0, y2)
        above = _top_vector(matrix - (y2 + step) * proj)
        below = _top_vector(matrix - max(y2 - step, 0.0) * proj)
        f_above = abs(np.vdot(psi, above)) ** 2
        f_below = abs(np.vdot(psi, below)) ** 2
        target = 1.0 - epsilon

        weight = 0.0
        if f_below > f_above + 1e-15 and f_above < target:
            weight = min(max((target - f_above) / (f_below - f_above), 0.0), 1.0)
        sigma = (weight * np.outer(below, below.conj())
                 + (1.0 - weight) * np.outer(above, above.conj()))
        return DensityMatrix(0.5 * (sigma + sigma.conj().T))

    def inner_max(self, omega: HermitianOperator, state: PureState2Q,
                  epsilon: float) -> OracleReport:
        """Peor caso max Tr(Omega sigma) sobre <psi|sigma|psi> <= 1 - eps

        Args:
            omega: Efecto 4x4
            state: Estado |psi>
            epsilon: Separacion de fidelidad en (0, 1]

        Returns:
            OracleReport con el valor dual, y2* en argmin y el sigma testigo
        """
        if not (0.0 < epsilon <= 1.0):
            raise ParameterError(f'epsilon={epsilon} fuera de (0, 1]')
        matrix = np.asarray(omega.entries, dtype=complex)
        value, y2, evaluations = self._solve_dual(matrix, state, epsilon)
        witness = self._witness(matrix, state, epsilon, y2)
        return OracleReport(
            value=min(max(value, 0.0), 1.0), method=OracleMethod.DUAL_1D,
            evaluations=evaluations, witness_sigma=witness, argmin=(y2,),
        )

    # ==================== ORACULO POR REJILLA ====================

    def _block_values(self, z, x, sc: Scenario) -> np.ndarray:
        """Dual 1-D vectorizado para estrategias simetrizadas con t = 1-delta-z"""
        z = np.asarray(z, dtype=float)
        x = np.asarray(x, dtype=float)
        top, low = 1.0 - sc.delta, 1.0 - sc.delta - 2.0 * z
        omega = np.abs(x * sc.cos2 + z * sc.sin2)
        if sc.epsilon >= 1.0:
            return np.maximum(omega, low)

        def g(y2):
            half_trace = 0.5 * (top - y2 + low)
            half_gap = 0.5 * (top - y2 - low)
            block_top = half_trace + np.hypot(half_gap, x)
            return np.maximum(block_top, omega) + (1.0 - sc.epsilon) * y2

        lam = np.maximum(0.5 * (top + low) + np.hypot(0.5 * (top - low), x), omega)
        upper = np.maximum(2.0 / sc.epsilon, lam / (1.0 - sc.epsilon))
        _, value = golden_section(g, np.zeros_like(upper), upper, self.iterations)
        return value

    def grid_p10(self, sc: Scenario, grid_n: int) -> OracleReport:
        """Cota superior de p10 explorando estrategias simetrizadas

        Rejilla grid_n x grid_n sobre (z, x) factibles, omega en su cota PPT,
        pulido local; el valor final es inner_max del Omega 4x4 encontrado.
        """
        if grid_n < 50:
            raise ParameterError(f'grid_n={grid_n} debe ser >= 50')
        z_lo, z_hi = z_bounds(sc.delta)
        search = StripSearch(
            lambda z, x: self._block_values(z, x, sc), z_lo, z_hi,
            lambda z: feasible_x_max(z, sc.delta), grid_n,
        )
        best = search.run()

        state = PureState2Q(sc.theta)
        strategy = SymmetrizedStrategy(
            t=1.0 - sc.delta - best.z, z=best.z, x=best.x,
            omega=min(1.0, abs(best.x * sc.cos2 + best.z * sc.sin2)),
        )
        report = self.inner_max(embed(strategy, state), state, sc.epsilon)
        logger.debug('grid_p10 %s: rejilla %.12g, 4x4 %.12g', sc, best.value, report.value)
        return OracleReport(
            value=report.value, method=OracleMethod.GRID_POLISH,
            evaluations=best.evaluations + report.evaluations,
            witness_sigma=report.witness_sigma, argmin=(best.z, best.x),
        )

    # ==================== CERTIFICACION ====================

    def certify_strategy(self, omega: HermitianOperator, sc: Scenario) -> Certification:
        """Verifica las restricciones de Omega y reporta los errores de peor caso

        Nunca lanza por restricciones violadas: las lista en violations.
        """
        matrix = np.asarray(omega.entries, dtype=complex)
        state = PureState2Q(sc.theta)
        spectrum = np.linalg.eigvalsh(matrix)
        psi = state_vector(state)
        fidelity = float(np.real(np.vdot(psi, matrix @ psi)))

        residuals = {
            'min_eigenvalue': float(spectrum[0]),
            'max_eigenvalue': float(spectrum[-1]),
            'min_pt_eigenvalue': min_pt_eigenvalue(matrix),
            'fidelity_margin': fidelity - (1.0 - sc.delta),
        }
        checks = (
            ('psd', residuals['min_eigenvalue']),
            ('below_identity', 1.0 - residuals['max_eigenvalue']),
            ('ppt', residuals['min_pt_eigenvalue']),
            ('fidelity', residuals['fidelity_margin']),
        )
        violations = [Violation(name, value) for name, value in checks if value < -CERTIFY_TOL]

        value, y2, _ = self._solve_dual(matrix, state, sc.epsilon)
        p01_worst = 1.0 - fidelity
        p10_worst = value
        if spectrum[0] >= -Config.PSD_TOL and spectrum[-1] <= 1.0 + Config.PSD_TOL:
            effect = Effect(0.5 * (matrix + matrix.conj().T))
            witness = self._witness(matrix, state, sc.epsilon, y2)
            rho0 = DensityMatrix(projector(state))
            p01_worst, p10_witness = error_probabilities(effect, rho0, witness)
            residuals['witness_gap'] = value - p10_witness

        for violation in violations:
            logger.info('restriccion %s violada (residuo %.3e)', violation.constraint,
                        violation.residual)
        return Certification(
            feasible=not violations, p01_worst=p01_worst, p10_worst=p10_worst,
            violations=violations, residuals=residuals,
        )


# Instancia global
oracle_service = OracleService()
