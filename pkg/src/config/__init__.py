# Configuracion del sistema
from .settings import Config
