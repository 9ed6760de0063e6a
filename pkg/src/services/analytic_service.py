"""Evaluadores en forma cerrada y minimizacion reducida en (z, x).

Notacion de la forma reducida (t eliminado como 1 - delta - z):
    omega   = |x cos2theta + z sin2theta|
    y1_hat  = (1 - delta - 2z) + sqrt((1-eps)/eps) |x|
    lam_max = 1 - delta - z + sqrt(x^2 + z^2)
Region I: y1_hat <= omega; region II: omega < y1_hat <= lam_max; region III: resto.
"""
import logging
import math
from typing import Tuple

import numpy as np

from ..config.settings import Config
from ..models.quantum_models import Effect, PureState2Q, SymmetrizedStrategy
from ..models.scenario_models import (
    CommutingOptimum, Eps1Geometry, InnerBranch, InnerSolution, Region, Scenario
)
from ..utils.errors import InfeasibleInput
from ..utils.qcore import embed
from ..utils.search import StripSearch

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-10
SMALL_EPSILON = 1e-6
REGION_TIE_TOL = 1e-12


def z_bounds(delta: float) -> Tuple[float, float]:
    """Intervalo de z compatible con 0 <= [[1-d, x], [x, 1-d-2z]] <= 1"""
    return -delta / 2.0, (1.0 - delta) / 2.0


def feasible_x_max(z, delta: float):
    """Mayor |x| factible para cada z (funciona con escalares y arreglos)"""
    z = np.asarray(z, dtype=float)
    upper = np.maximum(0.0, (1.0 - delta) * (1.0 - delta - 2.0 * z))
    lower = np.maximum(0.0, delta * (delta + 2.0 * z))
    return np.sqrt(np.minimum(upper, lower))


def _check_block(t: float, z: float, x: float):
    radius = math.hypot(x, z)
    if t - radius < -FEASIBILITY_TOL or t + radius > 1.0 + FEASIBILITY_TOL:
        raise InfeasibleInput(f'(t, z, x) = ({t}, {z}, {x}) viola 0 <= bloque <= 1')


class AnalyticService:
    """Soluciones cerradas del problema interno, estrategia conmutativa y epsilon = 1"""

    # ==================== PROBLEMA INTERNO ====================

    def inner_value_commuting(self, t: float, z: float, sc: Scenario) -> InnerSolution:
        """Solucion del problema interno para x = 0

        y1* = max(t - z, |z sin2theta|), valor y1* + (1-eps) max(0, t + z - y1*).
        """
        if not (-FEASIBILITY_TOL <= t - z <= 1.0 + FEASIBILITY_TOL
                and -FEASIBILITY_TOL <= t + z <= 1.0 + FEASIBILITY_TOL):
            raise InfeasibleInput(f'(t, z) = ({t}, {z}) no factible')
        y1_star = max(t - z, abs(z * sc.sin2))
        value = y1_star + (1.0 - sc.epsilon) * max(0.0, t + z - y1_star)
        return InnerSolution(
            y1_star=y1_star, value=value, branch=InnerBranch.COMMUTING,
            lambda_max=t + abs(z),
        )

    def inner_value_noncommuting(self, t: float, z: float, x: float,
                                 sc: Scenario) -> InnerSolution:
        """Solucion del problema interno para x != 0

        Args:
            t, z, x: Bloque [[t+z, x], [x, t-z]] de la estrategia
            sc: Escenario (theta, delta, epsilon)

        Returns:
            InnerSolution con la rama activa (AtOmega, AtStationary, AtLambdaMax)
        """
        if x == 0.0:
            raise InfeasibleInput('x = 0: usar la via conmutativa')
        _check_block(t, z, x)
        omega = abs(x * sc.cos2 + z * sc.sin2)
        lambda_max = t + math.hypot(x, z)
        y1_hat = (t - z) + sc.ratio * abs(x)

        if y1_hat <= omega:
            y1_star, branch = omega, InnerBranch.AT_OMEGA
        elif y1_hat < lambda_max:
            y1_star, branch = y1_hat, InnerBranch.AT_STATIONARY
        else:
            y1_star, branch = lambda_max, InnerBranch.AT_LAMBDA_MAX

        value = y1_star
        if sc.epsilon < 1.0:
            bracket = (t + z) - y1_star + x * x / (y1_star - (t - z))
            value += (1.0 - sc.epsilon) * max(0.0, bracket)
        return InnerSolution(
            y1_star=y1_star, value=value, branch=branch,
            lambda_max=lambda_max, y1_hat=y1_hat,
        )

    def inner_value(self, t: float, z: float, x: float, sc: Scenario) -> InnerSolution:
        if x == 0.0:
            return self.inner_value_commuting(t, z, sc)
        return self.inner_value_noncommuting(t, z, x, sc)

    # ==================== ESTRATEGIA CONMUTATIVA ====================

    def p10_commuting(self, sc: Scenario) -> CommutingOptimum:
        """Optimo con x = 0: (1-delta) [1 - eps / (1 + sin theta cos theta)]"""
        s2 = sc.sin2
        value = (1.0 - sc.delta) * (1.0 - sc.epsilon / (1.0 + 0.5 * s2))
        return CommutingOptimum(
            z_star=(1.0 - sc.delta) / (2.0 + s2),
            omega_star=(1.0 - sc.delta) * s2 / (2.0 + s2),
            value=min(max(value, 0.0), 1.0),
        )

    def commuting_optimum(self, sc: Scenario) -> Effect:
        """Omega* = diag(1-delta, w*, w*, w*) en la base ordenada"""
        optimum = self.p10_commuting(sc)
        top, omega = 1.0 - sc.delta, optimum.omega_star
        strategy = SymmetrizedStrategy(
            t=0.5 * (top + omega), z=0.5 * (top - omega), x=0.0, omega=omega,
        )
        return embed(strategy, PureState2Q(sc.theta))

    # ==================== EPSILON = 1 ====================

    def p10_eps1(self, theta: float, delta: float) -> Tuple[float, Eps1Geometry]:
        """Solucion cerrada para epsilon = 1 con la geometria de la region factible"""
        sc = Scenario(theta, delta, 1.0)
        s2, c2 = sc.sin2, sc.cos2
        x0 = (1.0 - delta) * (c2 - math.sqrt(1.0 + 2.0 * s2)) / (2.0 + s2)
        x1 = -(delta * c2 + math.sqrt(delta ** 2 * (1.0 + 2.0 * s2)
                                      + 2.0 * delta * (2.0 + s2))) / (2.0 + s2)
        x_star = max(x0, x1)
        value = self.p10_commuting(sc).value + x_star * 2.0 * c2 / (2.0 + s2)
        geometry = Eps1Geometry(x0=x0, x1=x1, x_star=x_star, x_kink=self.kink(theta, delta))
        return max(value, 0.0), geometry

    @staticmethod
    def kink(theta: float, delta: float) -> float:
        """Abscisa del quiebre de K, -(1-delta) tan(2theta) / 2"""
        c2 = math.cos(2 * theta)
        if abs(c2) < 1e-15:
            return -math.inf if delta < 1.0 else 0.0
        return -(1.0 - delta) * math.tan(2 * theta) / 2.0

    def eps1_feasible_membership(self, z: float, x: float, theta: float,
                                 delta: float) -> Tuple[bool, bool, bool]:
        """Pertenencia de (z, x) a las regiones P0, P1 y K"""
        tol = 1e-12
        s2, c2 = math.sin(2 * theta), math.cos(2 * theta)
        if delta >= 1.0:
            in_p0 = abs(x) <= tol and z <= tol
        else:
            in_p0 = z <= -x * x / (2.0 * (1.0 - delta)) + (1.0 - delta) / 2.0 + tol
        if delta <= 0.0:
            in_p1 = abs(x) <= tol and z >= -tol
        else:
            in_p1 = z >= x * x / (2.0 * delta) - delta / 2.0 - tol
        if x <= self.kink(theta, delta):
            in_k = z >= (1.0 - delta + x * c2) / (2.0 - s2) - tol
        else:
            in_k = z >= (1.0 - delta - x * c2) / (2.0 + s2) - tol
        return bool(in_p0), bool(in_p1), bool(in_k)

    # ==================== FORMA REDUCIDA ====================

    def objective_grid(self, z, x, sc: Scenario) -> np.ndarray:
        """Objetivo reducido vectorizado (todas las ramas)"""
        z = np.asarray(z, dtype=float)
        x = np.asarray(x, dtype=float)
        top = 1.0 - sc.delta
        low = top - 2.0 * z
        omega = np.abs(x * sc.cos2 + z * sc.sin2)
        lambda_max = top - z + np.hypot(x, z)
        y1_hat = low + sc.ratio * np.abs(x)

        y1_nc = np.where(y1_hat <= omega, omega, np.where(y1_hat < lambda_max, y1_hat, lambda_max))
        y1_c = np.maximum(low, np.abs(z * sc.sin2))
        commuting = x == 0.0
        y1_star = np.where(commuting, y1_c, y1_nc)
        if sc.epsilon >= 1.0:
            return y1_star
        with np.errstate(divide='ignore', invalid='ignore'):
            excess = np.where(commuting, 0.0, x * x / (y1_star - low))
        bracket = np.maximum(0.0, top - y1_star + excess)
        return y1_star + (1.0 - sc.epsilon) * bracket

    def _check_reduced(self, z: float, x: float, sc: Scenario):
        _check_block(1.0 - sc.delta - z, z, x)

    def objective_reduced(self, z: float, x: float, sc: Scenario) -> float:
        self._check_reduced(z, x, sc)
        return self.inner_value(1.0 - sc.delta - z, z, x, sc).value

    def region_classify(self, z: float, x: float, sc: Scenario) -> Region:
        self._check_reduced(z, x, sc)
        y1_hat = 1.0 - sc.delta - 2.0 * z + sc.ratio * abs(x)
        if y1_hat <= abs(x * sc.cos2 + z * sc.sin2) + REGION_TIE_TOL:
            return Region.I
        if y1_hat <= 1.0 - sc.delta - z + math.hypot(x, z) + REGION_TIE_TOL:
            return Region.II
        return Region.III

    def solve_reduced(self, sc: Scenario, grid_n: int = None) -> Tuple[float, float, float]:
        """Minimo global del objetivo reducido: rejilla + pulido local

        Returns:
            (valor, z, x) del minimizador; en empates se prefiere x = 0
        """
        commuting = self.p10_commuting(sc)
        if sc.epsilon < SMALL_EPSILON:
            logger.info('epsilon=%g por debajo de %g: se usa el valor conmutativo',
                        sc.epsilon, SMALL_EPSILON)
            return commuting.value, commuting.z_star, 0.0

        z_lo, z_hi = z_bounds(sc.delta)
        search = StripSearch(
            lambda z, x: self.objective_grid(z, x, sc), z_lo, z_hi,
            lambda z: feasible_x_max(z, sc.delta), grid_n or Config.GRID_N,
        )
        best = search.run()
        commuting_value = float(self.objective_grid(commuting.z_star, 0.0, sc))
        logger.debug('solve_reduced %s: rejilla %.12g, conmutativo %.12g (%d evaluaciones)',
                     sc, best.value, commuting_value, best.evaluations)
        if commuting_value <= best.value + 1e-12:
            return commuting_value, commuting.z_star, 0.0
        return best.value, best.z, best.x


# Instancia global
analytic_service = AnalyticService()
