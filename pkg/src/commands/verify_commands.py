import sys

import click

from ..models.scenario_models import Scenario
from ..services.oracle_service import oracle_service
from ..services.tradeoff_service import tradeoff_service
from .common import emit, handle_errors, resolve_theta


@click.command('verify')
@click.argument('strategy_file', type=click.Path(dir_okay=False))
@click.option('--theta', type=float, default=None, help='Angulo de Schmidt en radianes')
@click.option('--theta-frac', default=None, help='Angulo como fraccion p/q de pi')
@click.option('--delta', type=float, required=True)
@click.option('--epsilon', type=float, required=True)
@handle_errors
def verify_command(strategy_file, theta, theta_frac, delta, epsilon):
    """Certifica una estrategia Omega leida de STRATEGY_FILE

    Sale con 0 si es factible y con 1 si viola alguna restriccion.
    """
    omega = tradeoff_service.read_strategy(strategy_file)
    scenario = Scenario(resolve_theta(theta, theta_frac), delta, epsilon)
    certification = oracle_service.certify_strategy(omega, scenario)

    report = certification.to_dict()
    report.update(scenario.to_dict())
    emit(report)
    sys.exit(0 if certification.feasible else 1)
