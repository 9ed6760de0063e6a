import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from ..utils.errors import ParameterError
from .quantum_models import DensityMatrix


@dataclass(frozen=True)
class Scenario:
    """Punto (theta, delta, epsilon) del espacio de parametros"""

    theta: float
    delta: float
    epsilon: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi / 4 + 1e-15):
            raise ParameterError(f'theta={self.theta} fuera de [0, pi/4]')
        if not (0.0 <= self.delta <= 1.0):
            raise ParameterError(f'delta={self.delta} fuera de [0, 1]')
        if not (0.0 < self.epsilon <= 1.0):
            raise ParameterError(f'epsilon={self.epsilon} fuera de (0, 1]')

    @property
    def sin2(self) -> float:
        return math.sin(2 * self.theta)

    @property
    def cos2(self) -> float:
        return math.cos(2 * self.theta)

    @property
    def ratio(self) -> float:
        """sqrt((1-epsilon)/epsilon); cero en epsilon = 1"""
        if self.epsilon >= 1.0:
            return 0.0
        return math.sqrt((1.0 - self.epsilon) / self.epsilon)

    def to_dict(self) -> dict:
        return {'theta': self.theta, 'delta': self.delta, 'epsilon': self.epsilon}


@dataclass(frozen=True)
class DualPoint:
    """Variables duales (y1, y2) del problema interno"""

    y1: float
    y2: float

    def __post_init__(self):
        if self.y2 < -1e-10:
            raise ParameterError(f'y2={self.y2} negativo')


class InnerBranch(Enum):
    """Rama activa de la solucion cerrada del problema interno"""
    AT_OMEGA = 'AtOmega'
    AT_STATIONARY = 'AtStationary'
    AT_LAMBDA_MAX = 'AtLambdaMax'
    COMMUTING = 'Commuting'


@dataclass(frozen=True)
class InnerSolution:
    y1_star: float
    value: float
    branch: InnerBranch
    lambda_max: float
    y1_hat: Optional[float] = None


@dataclass(frozen=True)
class Eps1Geometry:
    """Abscisas relevantes de la region factible para epsilon = 1"""

    x0: float
    x1: float
    x_star: float
    x_kink: float


@dataclass(frozen=True)
class CommutingOptimum:
    z_star: float
    omega_star: float
    value: float


class Region(Enum):
    I = 'I'
    II = 'II'
    III = 'III'


class OracleMethod(Enum):
    DUAL_1D = 'Dual1D'
    GRID_POLISH = 'GridPolish'


@dataclass(frozen=True)
class OracleReport:
    value: float
    method: OracleMethod
    evaluations: int
    witness_sigma: Optional[DensityMatrix] = None
    argmin: Tuple[float, ...] = ()

    def __post_init__(self):
        if not (-1e-9 <= self.value <= 1.0 + 1e-9):
            raise ParameterError(f'valor de oraculo {self.value} fuera de [0, 1]')


@dataclass(frozen=True)
class Violation:
    constraint: str
    residual: float

    def to_dict(self) -> dict:
        return {'constraint': self.constraint, 'residual': self.residual}


@dataclass(frozen=True)
class Certification:
    """Resultado de certificar una estrategia Omega"""

    feasible: bool
    p01_worst: float
    p10_worst: float
    violations: List[Violation] = field(default_factory=list)
    residuals: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'feasible': self.feasible,
            'p01_worst': self.p01_worst,
            'p10_worst': self.p10_worst,
            'residuals': dict(self.residuals),
            'violations': [v.to_dict() for v in self.violations],
        }
