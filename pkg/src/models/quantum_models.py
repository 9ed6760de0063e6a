import math
from dataclasses import dataclass, field

import numpy as np

from ..config.settings import Config
from ..utils.errors import DimensionError, InfeasibleInput, ParameterError


@dataclass(frozen=True)
class PureState2Q:
    """Estado cos(theta)|00> + sin(theta)|11>, parametrizado por el angulo de Schmidt"""

    theta: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi / 4 + 1e-15):
            raise ParameterError(f'theta={self.theta} fuera de [0, pi/4]')

    @property
    def cos2(self) -> float:
        return math.cos(2 * self.theta)

    @property
    def sin2(self) -> float:
        return math.sin(2 * self.theta)


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Operador hermitico denso en la base |00>,|01>,|10>,|11>"""

    entries: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        matrix = np.array(self.entries, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError(f'se esperaba una matriz cuadrada, forma {matrix.shape}')
        if not np.allclose(matrix, matrix.conj().T, atol=Config.HERMITIAN_TOL, rtol=0.0):
            raise ParameterError('la matriz no es hermitica')
        matrix.setflags(write=False)
        object.__setattr__(self, 'entries', matrix)
        object.__setattr__(self, 'dim', matrix.shape[0])
        self._validate()

    def _validate(self):
        pass

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def expectation(self, vector: np.ndarray) -> float:
        return float(np.real(np.vdot(vector, self.entries @ vector)))

    def trace(self) -> float:
        return float(np.real(np.trace(self.entries)))


class DensityMatrix(HermitianOperator):
    """Matriz densidad: semidefinida positiva y de traza uno"""

    def _validate(self):
        if self.eigenvalues().min() < -Config.PSD_TOL:
            raise ParameterError('la matriz densidad tiene autovalores negativos')
        if abs(self.trace() - 1.0) > Config.PSD_TOL:
            raise ParameterError(f'traza {self.trace()} distinta de 1')


class Effect(HermitianOperator):
    """Elemento de POVM Omega con 0 <= Omega <= 1"""

    def _validate(self):
        spectrum = self.eigenvalues()
        if spectrum.min() < -Config.PSD_TOL or spectrum.max() > 1.0 + Config.PSD_TOL:
            raise InfeasibleInput(
                f'espectro [{spectrum.min():.3e}, {spectrum.max():.3e}] fuera de [0, 1]'
            )


@dataclass(frozen=True)
class SymmetrizedStrategy:
    """Parametros reales (t, z, x, omega) de la medida simetrizada

    En la base ordenada {|psi>, |psi_perp>, |01>, |10>} el operador es
    [[t+z, x], [x, t-z]] (+) omega * 1.
    """

    t: float
    z: float
    x: float
    omega: float

    def __post_init__(self):
        radius = math.hypot(self.x, self.z)
        low, high = self.t - radius, self.t + radius
        if low < -Config.PSD_TOL or high > 1.0 + Config.PSD_TOL:
            raise InfeasibleInput(
                f'bloque 2x2 con autovalores ({low:.3e}, {high:.3e}) fuera de [0, 1]'
            )
        if not (-Config.PSD_TOL <= self.omega <= 1.0 + Config.PSD_TOL):
            raise InfeasibleInput(f'omega={self.omega} fuera de [0, 1]')

    @property
    def block(self) -> np.ndarray:
        return np.array([[self.t + self.z, self.x], [self.x, self.t - self.z]])

    def ppt_margin(self, state: PureState2Q) -> float:
        """omega - |x cos2theta + z sin2theta|; no negativo si y solo si es PPT"""
        return self.omega - abs(self.x * state.cos2 + self.z * state.sin2)
