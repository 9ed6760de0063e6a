import logging

import click

from ..config.settings import Config
from ..models.tradeoff_models import Method, OutputFormat, SweepSpec
from ..services.tradeoff_service import tradeoff_service
from .common import emit, handle_errors, parse_grid, solver_options, solver_settings, theta_grid

logger = logging.getLogger(__name__)


@click.command('sweep')
@click.option('--theta', default=None, help="Rejilla de theta: 'a,b,c' o 'inicio:fin:paso'")
@click.option('--theta-frac', default=None, help="Rejilla de theta como fracciones de pi: '1/8,1/4'")
@click.option('--delta', required=True, help='Rejilla de delta')
@click.option('--epsilon', required=True, help='Rejilla de epsilon')
@click.option('--method', 'methods', multiple=True, type=click.Choice(Method.choices()),
              help='Metodo (repetible); por defecto sdp-full')
@solver_options
@click.option('--output', type=click.Path(dir_okay=False), default=None,
              help='Archivo de salida (por defecto OUTPUT_FOLDER/sweep.<formato>)')
@click.option('--format', 'output_format', type=click.Choice(['csv', 'json']), default='csv',
              show_default=True)
@click.option('--workers', type=int, default=None, help='Hilos para evaluar celdas')
@handle_errors
def sweep_command(theta, theta_frac, delta, epsilon, methods, grid_n, tol, max_iter, output,
                  output_format, workers):
    """Barrido de (theta, delta, epsilon) con una fila por celda y metodo"""
    # 1. Construir la especificacion del barrido
    if output is None:
        Config.create_directories()
        output = str(Config.OUTPUT_FOLDER / f'sweep.{output_format}')
    spec = SweepSpec(
        theta_grid=theta_grid(theta, theta_frac),
        delta_grid=parse_grid(delta),
        epsilon_grid=parse_grid(epsilon),
        methods=tuple(Method(m) for m in (methods or (Method.SDP_FULL.value,))),
        output_path=output,
        format=OutputFormat(output_format),
        grid_n=grid_n or Config.GRID_N,
    )

    # 2. Ejecutar y escribir
    points = tradeoff_service.run_sweep(spec, workers, solver_settings(tol, max_iter))

    emit({
        'output': output,
        'rows': len(points),
        'max_gap': max(p.gap for p in points),
        'min_gap': min(p.gap for p in points),
    })
