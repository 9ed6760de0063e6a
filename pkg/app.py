import json
import logging
import sys

import click

# Importar configuracion
from src.config.settings import Config

# Importar comandos
from src.commands.point_commands import point_command
from src.commands.sweep_commands import sweep_command
from src.commands.verify_commands import verify_command
from src.commands.selftest_commands import selftest_command
from src.utils.errors import ParameterError

COMMANDS = (point_command, sweep_command, verify_command, selftest_command)

# Claves del archivo --config cuyo nombre de parametro difiere de la bandera
_PARAM_ALIASES = {
    'sweep': {'method': 'methods', 'format': 'output_format'},
}


def configure_logging(level: str):
    """Logs a stderr para que stdout quede limpio (JSON / CSV)"""
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.WARNING),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
        force=True,
    )


def load_config(path: str) -> dict:
    """Lee el JSON plano de --config y lo reparte como default_map por comando"""
    try:
        with open(path) as stream:
            data = json.load(stream)
    except (OSError, ValueError) as e:
        raise ParameterError(f'no se pudo leer el archivo de configuracion: {e}')
    if not isinstance(data, dict):
        raise ParameterError('el archivo de configuracion debe ser un objeto JSON')

    default_map = {}
    for command in COMMANDS:
        params = {p.name for p in command.params}
        aliases = _PARAM_ALIASES.get(command.name, {})
        values = {}
        for key, value in data.items():
            name = aliases.get(key.replace('-', '_'), key.replace('-', '_'))
            if name not in params:
                continue
            if name == 'methods':
                value = [value] if isinstance(value, str) else list(value)
            elif name == 'method' and isinstance(value, list):
                value = value[0]
            elif isinstance(value, list):
                value = ','.join(str(v) for v in value)
            values[name] = value
        default_map[command.name] = values
    return default_map


def create_cli():
    """Factory function para crear el grupo de comandos"""

    @click.group()
    @click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False),
                  default=None, help='Archivo JSON con valores por defecto de las banderas')
    @click.option('--log-level', default=None, help='DEBUG, INFO, WARNING, ERROR')
    @click.pass_context
    def cli(ctx, config_path, log_level):
        """Error tipo II de peor caso en la verificacion de estados de dos qubits"""
        configure_logging(log_level or Config.LOG_LEVEL)
        if config_path:
            try:
                ctx.default_map = load_config(config_path)
            except ParameterError as e:
                click.echo(json.dumps(e.to_dict()), err=True)
                ctx.exit(e.exit_code)

    # Registrar comandos
    for command in COMMANDS:
        cli.add_command(command)

    return cli


# Crear instancia de la aplicacion
cli = create_cli()

if __name__ == '__main__':
    cli()
