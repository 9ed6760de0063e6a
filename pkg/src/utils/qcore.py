"""Nucleo de algebra lineal cuantica para dos qubits.

Todas las matrices 4x4 usan la base computacional ordenada
|00>, |01>, |10>, |11>. La base de trabajo de las estrategias simetrizadas es
{|psi>, |psi_perp>, |01>, |10>} con |psi_perp> = -sin(theta)|00> + cos(theta)|11>.
"""
from typing import Tuple

import numpy as np

from ..config.settings import Config
from ..models.quantum_models import (
    DensityMatrix, Effect, HermitianOperator, PureState2Q, SymmetrizedStrategy
)
from .errors import DimensionError, ParameterError

# Carga de fase de cada vector de la base bajo U_phi (x) U_-phi
_PHASE_CHARGE = np.array([0, -1, 1, 0])
_TWIRL_MASK = (_PHASE_CHARGE[:, None] == _PHASE_CHARGE[None, :]).astype(float)
_SWAP = np.eye(4)[[0, 2, 1, 3]]


def state_vector(state: PureState2Q) -> np.ndarray:
    """Devuelve (cos theta, 0, 0, sin theta) como vector complejo"""
    return np.array([np.cos(state.theta), 0.0, 0.0, np.sin(state.theta)], dtype=complex)


def projector(state: PureState2Q) -> np.ndarray:
    vector = state_vector(state)
    return np.outer(vector, vector.conj())


def ordered_basis(state: PureState2Q) -> np.ndarray:
    """Matriz real ortogonal cuyas columnas son |psi>, |psi_perp>, |01>, |10>"""
    c, s = np.cos(state.theta), np.sin(state.theta)
    return np.array([
        [c, -s, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [s, c, 0.0, 0.0],
    ])


def _require_two_qubits(*operators: HermitianOperator):
    for operator in operators:
        if operator.dim != 4:
            raise DimensionError(f'se esperaba dimension 4, se recibio {operator.dim}')


def error_probabilities(omega: Effect, rho0: DensityMatrix,
                        sigma: DensityMatrix) -> Tuple[float, float]:
    """Errores tipo I y tipo II de la prueba {Omega, 1 - Omega}

    Args:
        omega: Elemento que acepta la hipotesis nula
        rho0: Estado de la hipotesis nula
        sigma: Estado de la hipotesis alternativa

    Returns:
        (p01, p10) = (Tr(rho0 (1 - Omega)), Tr(sigma Omega))
    """
    _require_two_qubits(omega, rho0, sigma)
    p01 = float(np.real(np.trace(rho0.entries @ (np.eye(4) - omega.entries))))
    p10 = float(np.real(np.trace(sigma.entries @ omega.entries)))
    for name, value in (('p01', p01), ('p10', p10)):
        if value < -Config.PSD_TOL or value > 1.0 + Config.PSD_TOL:
            raise ParameterError(f'{name}={value} fuera de [0, 1]')
    return min(max(p01, 0.0), 1.0), min(max(p10, 0.0), 1.0)


def partial_transpose_matrix(matrix: np.ndarray) -> np.ndarray:
    """Transpone el segundo factor de una matriz 4x4 interpretada como 2 (x) 2"""
    matrix = np.asarray(matrix)
    if matrix.shape != (4, 4):
        raise DimensionError(f'se esperaba una matriz 4x4, forma {matrix.shape}')
    return matrix.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def partial_transpose(m: HermitianOperator) -> HermitianOperator:
    _require_two_qubits(m)
    return HermitianOperator(partial_transpose_matrix(m.entries))


def min_pt_eigenvalue(matrix: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(partial_transpose_matrix(matrix)).min())


def is_ppt(omega: HermitianOperator, tol: float = Config.PSD_TOL) -> bool:
    _require_two_qubits(omega)
    return min_pt_eigenvalue(omega.entries) >= -tol


def symmetrize_matrix(matrix: np.ndarray) -> np.ndarray:
    """Promedio de fase (forma cerrada), promedio con el swap y parte real"""
    twirled = np.asarray(matrix, dtype=complex) * _TWIRL_MASK
    swapped = 0.5 * (twirled + _SWAP @ twirled @ _SWAP.T)
    return np.real(swapped)


def symmetrize(omega: Effect, state: PureState2Q) -> SymmetrizedStrategy:
    _require_two_qubits(omega)
    basis = ordered_basis(state)
    block = basis.T @ symmetrize_matrix(omega.entries) @ basis
    return SymmetrizedStrategy(
        t=0.5 * (block[0, 0] + block[1, 1]),
        z=0.5 * (block[0, 0] - block[1, 1]),
        x=0.5 * (block[0, 1] + block[1, 0]),
        omega=0.5 * (block[2, 2] + block[3, 3]),
    )


def embed_matrix(s: SymmetrizedStrategy, state: PureState2Q) -> np.ndarray:
    basis = ordered_basis(state)
    block = np.zeros((4, 4))
    block[:2, :2] = s.block
    block[2, 2] = block[3, 3] = s.omega
    return basis @ block @ basis.T


def embed(s: SymmetrizedStrategy, state: PureState2Q) -> Effect:
    """Construye el operador 4x4 de una estrategia simetrizada"""
    return Effect(embed_matrix(s, state))


def project_to_effect(matrix: np.ndarray) -> np.ndarray:
    """Proyecta una matriz hermitica al intervalo de operadores [0, 1]"""
    matrix = 0.5 * (matrix + np.asarray(matrix).conj().T)
    values, vectors = np.linalg.eigh(matrix)
    values = np.clip(values, 0.0, 1.0)
    return (vectors * values) @ vectors.conj().T
