"""Opciones y manejo de errores compartidos por los comandos."""
import functools
import json
import logging
import math
import sys
from fractions import Fraction
from typing import Iterable, Optional, Tuple

import click

from ..config.settings import Config
from ..models.sdp_models import SdpSettings
from ..utils.errors import ParameterError, QvsepError

logger = logging.getLogger(__name__)


def emit(data):
    """Imprime un objeto JSON en stdout"""
    click.echo(json.dumps(data, indent=2, sort_keys=False))


def handle_errors(command):
    """Convierte QvsepError en {"error", "codigo"} por stderr y su codigo de salida"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except QvsepError as e:
            logger.debug('comando abortado', exc_info=True)
            click.echo(json.dumps(e.to_dict()), err=True)
            sys.exit(e.exit_code)
    return wrapper


def parse_theta_frac(text: str) -> float:
    """'p/q' -> pi * p / q"""
    try:
        fraction = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f'--theta-frac invalido: {text!r} (se espera p/q)')
    return math.pi * fraction.numerator / fraction.denominator


def resolve_theta(theta: Optional[float], theta_frac: Optional[str]) -> float:
    if (theta is None) == (theta_frac is None):
        raise ParameterError('indique exactamente uno de --theta o --theta-frac')
    return float(theta) if theta is not None else parse_theta_frac(theta_frac)


def _items(value) -> Iterable[str]:
    if isinstance(value, (list, tuple)):
        return [str(v) for v in value]
    return [part for part in str(value).split(',') if part.strip()]


def parse_grid(value) -> Tuple[float, ...]:
    """Rejilla como 'a,b,c', 'inicio:fin:paso' (fin incluido) o lista JSON"""
    if isinstance(value, str) and ':' in value:
        try:
            start, stop, step = (float(part) for part in value.split(':'))
        except ValueError:
            raise ParameterError(f'rejilla invalida: {value!r}')
        if step <= 0 or stop < start:
            raise ParameterError(f'rejilla invalida: {value!r}')
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + k * step, 12) for k in range(count))
    try:
        return tuple(float(item) for item in _items(value))
    except ValueError:
        raise ParameterError(f'rejilla invalida: {value!r}')


def theta_grid(theta, theta_frac) -> Tuple[float, ...]:
    if (theta is None) == (theta_frac is None):
        raise ParameterError('indique exactamente uno de --theta o --theta-frac')
    if theta is not None:
        return parse_grid(theta)
    return tuple(parse_theta_frac(item) for item in _items(theta_frac))


def solver_settings(tol: Optional[float], max_iter: Optional[int] = None) -> SdpSettings:
    """Parametros del solver: bandera > --config > entorno > defecto"""
    return SdpSettings(
        tol=tol if tol is not None else Config.SDP_TOL,
        max_iter=max_iter if max_iter is not None else Config.SDP_MAX_ITER,
        step_fraction=Config.SDP_STEP_FRACTION,
    )


def solver_options(command):
    command = click.option('--max-iter', type=int, default=None,
                           help='Iteraciones maximas del solver SDP')(command)
    command = click.option('--tol', type=float, default=None,
                           help='Tolerancia del solver SDP')(command)
    command = click.option('--grid-n', type=int, default=None,
                           help='Tamano de rejilla de los metodos por busqueda')(command)
    return command
