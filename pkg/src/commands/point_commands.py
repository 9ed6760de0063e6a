import click

from ..models.scenario_models import Scenario
from ..models.tradeoff_models import Method
from ..services.tradeoff_service import tradeoff_service
from ..utils.errors import ParameterError
from .common import emit, handle_errors, resolve_theta, solver_options, solver_settings


@click.command('point')
@click.option('--theta', type=float, default=None, help='Angulo de Schmidt en radianes')
@click.option('--theta-frac', default=None, help='Angulo como fraccion p/q de pi')
@click.option('--delta', type=float, required=True, help='Tolerancia de fidelidad para H0')
@click.option('--epsilon', type=float, required=True, help='Separacion de fidelidad de H1')
@click.option('--method', type=click.Choice(Method.choices()), default=Method.SDP_FULL.value,
              show_default=True)
@solver_options
@click.option('--strategy-output', type=click.Path(dir_okay=False), default=None,
              help='Escribe el Omega optimo en formato de archivo de estrategia')
@handle_errors
def point_command(theta, theta_frac, delta, epsilon, method, grid_n, tol, max_iter,
                  strategy_output):
    """Evalua p10 en un punto (theta, delta, epsilon)"""
    # 1. Validar parametros
    scenario = Scenario(resolve_theta(theta, theta_frac), delta, epsilon)
    method = Method(method)

    # 2. Evaluar con el metodo pedido (la referencia conmutativa siempre se calcula)
    point, strategy = tradeoff_service.evaluate_point(
        scenario, method, grid_n, solver_settings(tol, max_iter)
    )

    # 3. Guardar la estrategia si se pidio
    if strategy_output:
        if strategy is None:
            raise ParameterError(f'el metodo {method.value} no produce una estrategia')
        tradeoff_service.write_strategy(strategy_output, strategy)

    emit(point.to_dict())
