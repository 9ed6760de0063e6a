from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from ..utils.errors import ParameterError


class SolverStatus(Enum):
    """Estados de salida del solver"""
    OPTIMAL = 'Optimal'
    MAX_ITERATIONS = 'MaxIterations'
    INFEASIBLE = 'Infeasible'
    UNBOUNDED = 'Unbounded'


@dataclass(frozen=True)
class LmiBlock:
    """Bloque F0 + sum_i x_i F_i >= 0"""

    f0: np.ndarray
    coefficients: Tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, 'f0', np.atleast_2d(np.asarray(self.f0, dtype=float)))
        object.__setattr__(self, 'coefficients', tuple(
            np.atleast_2d(np.asarray(fi, dtype=float)) for fi in self.coefficients
        ))

    @property
    def size(self) -> int:
        return self.f0.shape[0]

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        value = self.f0.copy()
        for xi, fi in zip(x, self.coefficients):
            value = value + xi * fi
        return value


@dataclass(frozen=True)
class SdpProblem:
    """Problema en forma estandar: min c^T x  s.a.  F_b(x) >= 0 para cada bloque b"""

    num_vars: int
    objective: np.ndarray
    lmi_blocks: Tuple[LmiBlock, ...]
    variable_names: Tuple[str, ...] = ()

    def __post_init__(self):
        objective = np.asarray(self.objective, dtype=float)
        object.__setattr__(self, 'objective', objective)
        object.__setattr__(self, 'lmi_blocks', tuple(self.lmi_blocks))
        if objective.shape != (self.num_vars,):
            raise ParameterError('el vector objetivo no coincide con num_vars')
        if not self.lmi_blocks:
            raise ParameterError('el problema no tiene bloques LMI')
        for block in self.lmi_blocks:
            if len(block.coefficients) != self.num_vars:
                raise ParameterError('bloque con numero de variables inconsistente')
            if block.size > 8:
                raise ParameterError(f'bloque de tamano {block.size} > 8')
            for matrix in (block.f0,) + tuple(block.coefficients):
                if matrix.shape != (block.size, block.size):
                    raise ParameterError('matrices de un bloque con formas distintas')
                if not np.allclose(matrix, matrix.T, atol=1e-12, rtol=0.0):
                    raise ParameterError('matriz F no simetrica')
        if self.variable_names and len(self.variable_names) != self.num_vars:
            raise ParameterError('variable_names no coincide con num_vars')

    def index(self, name: str) -> int:
        return self.variable_names.index(name)

    def with_objective(self, objective: np.ndarray) -> 'SdpProblem':
        return SdpProblem(self.num_vars, objective, self.lmi_blocks, self.variable_names)


@dataclass(frozen=True)
class SdpSettings:
    """Parametros del metodo de punto interior"""

    tol: float = 1e-9
    max_iter: int = 200
    step_fraction: float = 0.98

    def __post_init__(self):
        if self.tol <= 0:
            raise ParameterError('tol debe ser positivo')
        if self.max_iter < 1:
            raise ParameterError('max_iter debe ser >= 1')
        if not (0.0 < self.step_fraction < 1.0):
            raise ParameterError('step_fraction debe estar en (0, 1)')


@dataclass(frozen=True)
class SdpSolution:
    """Salida del solver con certificado de brecha de dualidad"""

    status: SolverStatus
    x: np.ndarray
    primal_value: float
    dual_value: float
    gap: float
    iterations: int = 0
    dual_blocks: Tuple[np.ndarray, ...] = field(default=(), repr=False)

    @property
    def is_optimal(self) -> bool:
        return self.status is SolverStatus.OPTIMAL
