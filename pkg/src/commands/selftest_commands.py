import sys

import click

from ..services.acceptance_service import AcceptanceService
from .common import emit, handle_errors


@click.command('selftest')
@click.option('--quick', is_flag=True, help='Rejillas y muestras reducidas')
@handle_errors
def selftest_command(quick):
    """Ejecuta los criterios de aceptacion; sale con 1 si alguno falla"""
    results = AcceptanceService(quick=quick).run()
    emit({
        'quick': quick,
        'passed': all(r.passed for r in results),
        'criteria': [r.to_dict() for r in results],
    })
    sys.exit(0 if all(r.passed for r in results) else 1)
