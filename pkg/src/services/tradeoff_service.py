"""Evaluacion de puntos, barridos y archivos de estrategia."""
import csv
import json
import logging
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from ..config.settings import Config
from ..models.quantum_models import Effect, HermitianOperator, PureState2Q, SymmetrizedStrategy
from ..models.scenario_models import Scenario
from ..models.sdp_models import SdpSettings
from ..models.tradeoff_models import CSV_HEADER, Method, OutputFormat, SweepSpec, TradeoffPoint
from ..utils.errors import ParameterError, QvsepError, StrategyFileError
from ..utils.qcore import embed
from .analytic_service import analytic_service
from .model_builder import Formulation, model_builder
from .oracle_service import oracle_service

logger = logging.getLogger(__name__)

STATUS_EXACT = 'Exact'
STATUS_SEARCH = 'GridPolish'

_FORMULATIONS = {
    Method.SDP_FULL: Formulation.FULL,
    Method.SDP_REDUCED: Formulation.REDUCED,
}


def _clamp(value: float) -> float:
    return min(max(float(value), 0.0), 1.0)


def _symmetrized_effect(sc: Scenario, z: float, x: float) -> Effect:
    strategy = SymmetrizedStrategy(
        t=1.0 - sc.delta - z, z=z, x=x,
        omega=min(1.0, abs(x * sc.cos2 + z * sc.sin2)),
    )
    return embed(strategy, PureState2Q(sc.theta))


class TradeoffService:
    """Motor de los comandos point y sweep"""

    def evaluate_point(self, sc: Scenario, method: Method, grid_n: Optional[int] = None,
                       settings: Optional[SdpSettings] = None
                       ) -> Tuple[TradeoffPoint, Optional[Effect]]:
        """Evalua p10 con el metodo pedido y la referencia conmutativa

        Args:
            sc: Escenario (theta, delta, epsilon)
            method: Metodo de evaluacion
            grid_n: Tamano de rejilla para analytic-reduced y oracle
            settings: Parametros del solver SDP

        Returns:
            (TradeoffPoint, Omega optimo o None si el metodo no lo produce)
        """
        grid_n = grid_n or Config.GRID_N
        strategy = None

        if method in _FORMULATIONS:
            which = _FORMULATIONS[method]
            solution = model_builder.solve(sc, which, settings)
            strategy, _ = model_builder.extract_strategy(solution, which, sc)
            p10, status = solution.primal_value, solution.status.value
        elif method is Method.ANALYTIC_COMMUTING:
            p10, status = analytic_service.p10_commuting(sc).value, STATUS_EXACT
            strategy = analytic_service.commuting_optimum(sc)
        elif method is Method.ANALYTIC_EPS1:
            if sc.epsilon != 1.0:
                raise ParameterError('analytic-eps1 requiere epsilon = 1')
            p10, _ = analytic_service.p10_eps1(sc.theta, sc.delta)
            status = STATUS_EXACT
        elif method is Method.ANALYTIC_REDUCED:
            p10, z, x = analytic_service.solve_reduced(sc, grid_n)
            strategy, status = _symmetrized_effect(sc, z, x), STATUS_SEARCH
        elif method is Method.ORACLE:
            report = oracle_service.grid_p10(sc, grid_n)
            p10, status = report.value, STATUS_SEARCH
            strategy = _symmetrized_effect(sc, *report.argmin)
        else:
            raise ParameterError(f'metodo desconocido: {method}')

        point = TradeoffPoint(
            theta=sc.theta, delta=sc.delta, epsilon=sc.epsilon, method=method.value,
            p10=_clamp(p10), p10_commuting=analytic_service.p10_commuting(sc).value,
            solver_status=status,
        )
        logger.info('%s %s -> p10=%.12g', method.value, sc, point.p10)
        return point, strategy

    # ==================== BARRIDOS ====================

    def run_sweep(self, spec: SweepSpec, workers: Optional[int] = None,
                  settings: Optional[SdpSettings] = None) -> List[TradeoffPoint]:
        """Ejecuta el barrido y escribe el archivo de salida

        Las filas siguen el orden theta, delta, epsilon, metodo sin importar
        el orden en que terminan las celdas. Si algo falla no queda archivo.
        """
        workers = workers or Config.SWEEP_WORKERS
        cells = list(spec.cells())
        logger.info('barrido de %d celdas con %d hilos', len(cells), workers)

        def evaluate(cell):
            theta, delta, epsilon, method = cell
            point, _ = self.evaluate_point(
                Scenario(theta, delta, epsilon), method, spec.grid_n, settings
            )
            return point

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                points = list(executor.map(evaluate, cells))
        else:
            points = [evaluate(cell) for cell in cells]

        self.write_points(points, spec.output_path, spec.format)
        return points

    def write_points(self, points: List[TradeoffPoint], output_path: str,
                     output_format: OutputFormat = OutputFormat.CSV,
                     digits: Optional[int] = None):
        """Escritura atomica: archivo temporal en el mismo directorio y rename"""
        digits = digits or Config.CSV_DIGITS
        target = Path(output_path)
        target.parent.mkdir(parents=True, exist_ok=True)
        handle, temp_path = tempfile.mkstemp(dir=target.parent, suffix='.tmp')
        try:
            with os.fdopen(handle, 'w', newline='') as stream:
                if output_format is OutputFormat.CSV:
                    writer = csv.writer(stream)
                    writer.writerow(CSV_HEADER)
                    for point in points:
                        writer.writerow(point.to_row(digits))
                else:
                    json.dump([point.to_dict() for point in points], stream, indent=2)
            os.replace(temp_path, target)
        except BaseException:
            if os.path.exists(temp_path):
                os.remove(temp_path)
            raise

    @staticmethod
    def read_points(path: str) -> List[dict]:
        """Lee un CSV de barrido como lista de diccionarios con floats"""
        with open(path, newline='') as stream:
            rows = list(csv.DictReader(stream))
        for row in rows:
            for name in ('theta', 'delta', 'epsilon', 'p10', 'p10_commuting', 'gap'):
                row[name] = float(row[name])
        return rows

    # ==================== ARCHIVOS DE ESTRATEGIA ====================

    @staticmethod
    def read_strategy(path: str) -> HermitianOperator:
        """Lee {"dim": 4, "re": [[...]], "im": [[...]]}

        Raises:
            StrategyFileError: si el archivo no existe o no tiene el formato
        """
        try:
            with open(path) as stream:
                data = json.load(stream)
        except (OSError, ValueError) as e:
            raise StrategyFileError(f'no se pudo leer {path}: {e}')
        if not isinstance(data, dict) or data.get('dim') != 4:
            raise StrategyFileError('se esperaba un objeto con "dim": 4')
        try:
            real = np.array(data['re'], dtype=float)
            imag = np.array(data.get('im', np.zeros((4, 4))), dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise StrategyFileError(f'entradas "re"/"im" invalidas: {e}')
        if real.shape != (4, 4) or imag.shape != (4, 4):
            raise StrategyFileError('"re" e "im" deben ser matrices 4x4')
        try:
            return HermitianOperator(real + 1j * imag)
        except QvsepError as e:
            raise StrategyFileError(str(e))

    @staticmethod
    def write_strategy(path: str, omega: HermitianOperator):
        matrix = np.asarray(omega.entries, dtype=complex)
        data = {'dim': 4, 're': matrix.real.tolist(), 'im': matrix.imag.tolist()}
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(data, indent=2))


# Instancia global
tradeoff_service = TradeoffService()
