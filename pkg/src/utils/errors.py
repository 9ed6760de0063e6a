from typing import Optional


class QvsepError(Exception):
    """Error base de la herramienta, con codigo legible por maquina"""

    codigo = 'INTERNAL_ERROR'
    exit_code = 3

    def __init__(self, message: str, codigo: Optional[str] = None):
        super().__init__(message)
        if codigo:
            self.codigo = codigo

    def to_dict(self) -> dict:
        return {'error': str(self), 'codigo': self.codigo}


class ParameterError(QvsepError):
    """Parametros fuera del dominio (theta, delta, epsilon, rejilla...)"""
    codigo = 'INVALID_PARAMETERS'
    exit_code = 2


class DimensionError(ParameterError):
    """Operadores con dimension distinta de 4 (dos qubits)"""
    codigo = 'DIMENSION_MISMATCH'


class InfeasibleInput(ParameterError):
    """Punto fuera de la region factible de una formula cerrada"""
    codigo = 'INFEASIBLE_INPUT'


class StrategyFileError(QvsepError):
    """Archivo de estrategia mal formado"""
    codigo = 'MALFORMED_STRATEGY_FILE'
    exit_code = 2


class SolverFailure(QvsepError):
    """El solver SDP no alcanzo el estado Optimal"""
    codigo = 'SOLVER_FAILURE'
    exit_code = 3

    def __init__(self, message: str, status: str):
        super().__init__(f'{message} (estado del solver: {status})')
        self.status = status

    def to_dict(self) -> dict:
        data = super().to_dict()
        data['solver_status'] = self.status
        return data
