"""Bateria de aceptacion ejecutada por el comando selftest."""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from ..models.quantum_models import PureState2Q
from ..models.scenario_models import Scenario
from ..models.tradeoff_models import Method
from .analytic_service import analytic_service, feasible_x_max, z_bounds
from .model_builder import Formulation, model_builder
from .oracle_service import oracle_service
from .tradeoff_service import tradeoff_service

logger = logging.getLogger(__name__)

QUARTER_ANGLES = (math.pi / 16, math.pi / 8, 3 * math.pi / 16, math.pi / 4)
TENTHS = tuple(round(0.1 * k, 10) for k in range(10))


@dataclass(frozen=True)
class AcceptanceResult:
    criterion: int
    description: str
    passed: bool
    worst: float
    detail: str = ''

    def to_dict(self) -> dict:
        return {
            'criterion': self.criterion, 'description': self.description,
            'passed': self.passed, 'worst': self.worst, 'detail': self.detail,
        }


def _p10(theta: float, delta: float, epsilon: float, method: Method, grid_n: int = None) -> float:
    point, _ = tradeoff_service.evaluate_point(Scenario(theta, delta, epsilon), method, grid_n)
    return point.p10


def _random_scenarios(count: int, seed: int = 7) -> List[Scenario]:
    rng = np.random.default_rng(seed)
    return [
        Scenario(float(rng.uniform(0.0, math.pi / 4)), float(rng.uniform(0.0, 0.95)),
                 float(rng.uniform(0.05, 1.0)))
        for _ in range(count)
    ]


class AcceptanceService:
    """Criterios de aceptacion numerados del 1 al 8

    En modo rapido se reducen rejillas y numero de escenarios; los umbrales
    no cambian.
    """

    def __init__(self, quick: bool = False):
        self.quick = quick
        self.grid_n = 100 if quick else 400

    def run(self) -> List[AcceptanceResult]:
        checks: List[Callable[[], AcceptanceResult]] = [
            self.maximally_entangled, self.eps1_closed_form, self.zero_delta_commuting,
            self.product_state, self.commuting_suboptimal, self.figure_sweep,
            self.property_suite, self.oracle_equivalence,
        ]
        results = []
        for check in checks:
            result = check()
            logger.info('criterio %d: %s (peor %.3e)', result.criterion,
                        'OK' if result.passed else 'FALLA', result.worst)
            results.append(result)
        return results

    # ==================== CRITERIOS ====================

    def maximally_entangled(self) -> AcceptanceResult:
        deltas = (0.0, 0.5) if self.quick else TENTHS
        worst_exact, worst_oracle = 0.0, 0.0
        for delta in deltas:
            expected = (1.0 - delta) / 3.0
            for method in (Method.SDP_FULL, Method.SDP_REDUCED, Method.ANALYTIC_EPS1):
                worst_exact = max(worst_exact, abs(_p10(math.pi / 4, delta, 1.0, method) - expected))
            oracle = _p10(math.pi / 4, delta, 1.0, Method.ORACLE, self.grid_n)
            worst_oracle = max(worst_oracle, abs(oracle - expected))
        return AcceptanceResult(
            1, 'p10 = (1-delta)/3 en theta = pi/4, epsilon = 1',
            worst_exact <= 1e-6 and worst_oracle <= 1e-3, max(worst_exact, worst_oracle),
            f'exactos {worst_exact:.3e}, oraculo {worst_oracle:.3e}',
        )

    def eps1_closed_form(self) -> AcceptanceResult:
        thetas = QUARTER_ANGLES[1::2] if self.quick else QUARTER_ANGLES
        deltas = (0.1, 0.6) if self.quick else TENTHS
        worst = max(
            abs(analytic_service.p10_eps1(theta, delta)[0] - _p10(theta, delta, 1.0, Method.SDP_FULL))
            for theta in thetas for delta in deltas
        )
        return AcceptanceResult(2, 'forma cerrada epsilon = 1 frente a sdp-full', worst <= 1e-6, worst)

    def zero_delta_commuting(self) -> AcceptanceResult:
        thetas = QUARTER_ANGLES[:2] if self.quick else QUARTER_ANGLES
        worst = 0.0
        for theta in thetas:
            for epsilon in (0.25, 0.5, 0.75, 1.0):
                expected = 1.0 - epsilon / (1.0 + math.sin(theta) * math.cos(theta))
                worst = max(worst, abs(_p10(theta, 0.0, epsilon, Method.SDP_FULL) - expected))
        return AcceptanceResult(3, 'delta = 0 recupera el optimo conmutativo', worst <= 1e-6, worst)

    def product_state(self) -> AcceptanceResult:
        deltas = (0.0, 0.5) if self.quick else TENTHS
        worst_zero = max(_p10(0.0, delta, 1.0, Method.SDP_FULL) for delta in deltas)
        smallest = min(
            _p10(theta, 0.5, 1.0, Method.SDP_FULL)
            for theta in (math.pi / 16, math.pi / 8, math.pi / 4)
        )
        return AcceptanceResult(
            4, 'rechazo perfecto solo para estados producto',
            worst_zero <= 1e-8 and smallest > 1e-3, worst_zero,
            f'max p10(theta=0) {worst_zero:.3e}, min p10(theta>0) {smallest:.3e}',
        )

    def commuting_suboptimal(self) -> AcceptanceResult:
        point, _ = tradeoff_service.evaluate_point(
            Scenario(math.pi / 8, 0.1, 1.0), Method.SDP_FULL
        )
        deviation = abs(point.gap - 0.1470)
        thetas = QUARTER_ANGLES[1:2] if self.quick else QUARTER_ANGLES[:3]
        deltas = (0.3,) if self.quick else TENTHS[1:]
        smallest_gap = min(
            tradeoff_service.evaluate_point(Scenario(theta, delta, 1.0), Method.SDP_FULL)[0].gap
            for theta in thetas for delta in deltas
        )
        return AcceptanceResult(
            5, 'la estrategia conmutativa no es optima para 0 < theta < pi/4',
            deviation <= 1e-3 and smallest_gap > 0.0, deviation,
            f'gap(pi/8, 0.1) = {point.gap:.6f}, gap minimo {smallest_gap:.3e}',
        )

    def figure_sweep(self) -> AcceptanceResult:
        delta_step, eps_step = (0.25, 0.1) if self.quick else (0.05, 0.02)
        deltas = np.round(np.arange(0.0, 1.0 + 1e-9, delta_step), 10)
        epsilons = np.round(np.arange(0.5, 1.0 + 1e-9, eps_step), 10)
        rows = []
        for delta in deltas:
            for epsilon in epsilons:
                point, _ = tradeoff_service.evaluate_point(
                    Scenario(math.pi / 8, float(delta), float(epsilon)), Method.SDP_REDUCED
                )
                rows.append(point)
        lowest = min(p.gap for p in rows)
        low_eps = max(p.gap for p in rows if p.epsilon <= 0.8 + 1e-12)
        top = max(rows, key=lambda p: p.gap)
        passed = lowest >= -1e-6 and low_eps < 1e-2 and top.epsilon >= 0.95
        return AcceptanceResult(
            6, 'barrido en theta = pi/8: gap despreciable para epsilon <= 0.8',
            passed, low_eps,
            f'gap minimo {lowest:.3e}, gap maximo {top.gap:.3e} en epsilon={top.epsilon}',
        )

    def property_suite(self) -> AcceptanceResult:
        scenarios = _random_scenarios(20 if self.quick else 200)
        failures = []
        worst = 0.0
        for sc in scenarios:
            full = model_builder.solve(sc, Formulation.FULL)
            reduced = model_builder.solve(sc, Formulation.REDUCED)
            p10 = full.primal_value
            commuting = analytic_service.p10_commuting(sc).value

            if not ((1 - sc.delta) * (1 - sc.epsilon) - 1e-8 <= p10 <= commuting + 1e-8):
                failures.append(f'cotas en {sc}')
            agreement = abs(p10 - reduced.primal_value)
            if agreement > 1e-6:
                failures.append(f'full/reducido {agreement:.2e} en {sc}')

            looser_delta = Scenario(sc.theta, min(1.0, sc.delta + 0.05), sc.epsilon)
            looser_eps = Scenario(sc.theta, sc.delta, min(1.0, sc.epsilon + 0.05))
            for other in (looser_delta, looser_eps):
                if model_builder.p10(other, Formulation.REDUCED) > reduced.primal_value + 1e-7:
                    failures.append(f'monotonia en {sc}')

            omega, dual = model_builder.extract_strategy(full, Formulation.FULL, sc)
            inner = oracle_service.inner_max(omega, PureState2Q(sc.theta), sc.epsilon).value
            duality = abs(inner - (dual.y1 + (1 - sc.epsilon) * dual.y2))
            if duality > 1e-6:
                failures.append(f'dualidad interna {duality:.2e} en {sc}')

            jump = self._boundary_jump(sc)
            if jump > 1e-10:
                failures.append(f'salto en frontera {jump:.2e} en {sc}')
            worst = max(worst, agreement, duality, jump)
        return AcceptanceResult(
            7, 'propiedades en escenarios aleatorios', not failures, worst,
            '; '.join(failures[:5]),
        )

    @staticmethod
    def _boundary_jump(sc: Scenario) -> float:
        """Mayor salto del objetivo reducido al cruzar fronteras entre regiones"""
        jump = 0.0
        z_lo, z_hi = z_bounds(sc.delta)
        for z in np.linspace(z_lo, z_hi, 9)[1:-1]:
            x_max = float(feasible_x_max(z, sc.delta))
            if x_max <= 0.0:
                continue
            xs = np.linspace(-x_max, x_max, 64)
            regions = [analytic_service.region_classify(z, x, sc) for x in xs]
            for k in range(len(xs) - 1):
                if regions[k] is regions[k + 1]:
                    continue
                lo, hi = xs[k], xs[k + 1]
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    if analytic_service.region_classify(z, mid, sc) is regions[k]:
                        lo = mid
                    else:
                        hi = mid
                jump = max(jump, abs(analytic_service.objective_reduced(z, lo, sc)
                                     - analytic_service.objective_reduced(z, hi, sc)))
        return jump

    def oracle_equivalence(self) -> AcceptanceResult:
        scenarios = _random_scenarios(3 if self.quick else 20, seed=11)
        worst, below = 0.0, 0.0
        for sc in scenarios:
            grid = oracle_service.grid_p10(sc, self.grid_n).value
            exact = model_builder.p10(sc, Formulation.REDUCED)
            worst = max(worst, abs(grid - exact))
            below = max(below, exact - grid)
        return AcceptanceResult(
            8, 'oraculo por rejilla frente a sdp-reduced',
            worst <= 1e-3 and below <= 1e-9, worst,
            f'diferencia maxima {worst:.3e}, maximo por debajo {below:.3e}',
        )

