import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

from ..utils.errors import ParameterError

CSV_HEADER = (
    'theta', 'delta', 'epsilon', 'method', 'p10', 'p10_commuting', 'gap', 'solver_status'
)


class Method(Enum):
    """Metodos disponibles para evaluar p10"""
    SDP_FULL = 'sdp-full'
    SDP_REDUCED = 'sdp-reduced'
    ANALYTIC_COMMUTING = 'analytic-commuting'
    ANALYTIC_EPS1 = 'analytic-eps1'
    ANALYTIC_REDUCED = 'analytic-reduced'
    ORACLE = 'oracle'

    @classmethod
    def choices(cls) -> Tuple[str, ...]:
        return tuple(m.value for m in cls)


class OutputFormat(Enum):
    CSV = 'csv'
    JSON = 'json'


def _check_grid(name: str, values: Tuple[float, ...], low: float, high: float,
                open_low: bool = False):
    if not values:
        raise ParameterError(f'la rejilla {name} esta vacia')
    for value in values:
        below = value <= low if open_low else value < low
        if below or value > high or math.isnan(value):
            raise ParameterError(f'{name}={value} fuera del dominio')


@dataclass(frozen=True)
class SweepSpec:
    """Descripcion de un barrido de parametros"""

    theta_grid: Tuple[float, ...]
    delta_grid: Tuple[float, ...]
    epsilon_grid: Tuple[float, ...]
    methods: Tuple[Method, ...]
    output_path: str
    format: OutputFormat = OutputFormat.CSV
    grid_n: int = 400

    def __post_init__(self):
        for name in ('theta_grid', 'delta_grid', 'epsilon_grid', 'methods'):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        _check_grid('theta', self.theta_grid, 0.0, math.pi / 4 + 1e-15)
        _check_grid('delta', self.delta_grid, 0.0, 1.0)
        _check_grid('epsilon', self.epsilon_grid, 0.0, 1.0, open_low=True)
        if not self.methods:
            raise ParameterError('no se indico ningun metodo')
        if Method.ANALYTIC_EPS1 in self.methods and set(self.epsilon_grid) != {1.0}:
            raise ParameterError('analytic-eps1 solo admite epsilon_grid = {1}')

    def cells(self):
        """Celdas en orden determinista: theta, delta, epsilon, metodo"""
        for theta in self.theta_grid:
            for delta in self.delta_grid:
                for epsilon in self.epsilon_grid:
                    for method in self.methods:
                        yield theta, delta, epsilon, method


@dataclass(frozen=True)
class TradeoffPoint:
    theta: float
    delta: float
    epsilon: float
    method: str
    p10: float
    p10_commuting: float
    solver_status: str = 'Optimal'
    gap: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, 'gap', self.p10_commuting - self.p10)

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in CSV_HEADER}

    def to_row(self, digits: int = 12) -> list:
        row = []
        for name in CSV_HEADER:
            value = getattr(self, name)
            row.append(f'{value:.{digits}g}' if isinstance(value, float) else value)
        return row
