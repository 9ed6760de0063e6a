import os
from pathlib import Path
from dotenv import load_dotenv

# Cargar variables de entorno
load_dotenv()


class Config:
    """Configuracion central de la herramienta"""

    # Base paths
    BASE_DIR = Path(__file__).resolve().parent.parent.parent

    # Solver SDP
    SDP_TOL = float(os.getenv('QVSEP_SDP_TOL', 1e-9))
    SDP_MAX_ITER = int(os.getenv('QVSEP_SDP_MAX_ITER', 200))
    SDP_STEP_FRACTION = float(os.getenv('QVSEP_SDP_STEP_FRACTION', 0.98))

    # Oraculo y minimizacion por rejilla
    GRID_N = int(os.getenv('QVSEP_GRID_N', 400))
    GOLDEN_ITERATIONS = int(os.getenv('QVSEP_GOLDEN_ITERATIONS', 200))

    # Salida
    CSV_DIGITS = int(os.getenv('QVSEP_CSV_DIGITS', 12))
    SWEEP_WORKERS = int(os.getenv('QVSEP_SWEEP_WORKERS', 1))

    # Development
    LOG_LEVEL = os.getenv('QVSEP_LOG_LEVEL', 'WARNING').upper()

    # Directories
    OUTPUT_FOLDER = BASE_DIR / os.getenv('QVSEP_OUTPUT_DIR', 'output')

    # Tolerancias numericas fijas
    HERMITIAN_TOL = 1e-12
    PSD_TOL = 1e-10

    @classmethod
    def create_directories(cls):
        """Crea los directorios necesarios"""
        cls.OUTPUT_FOLDER.mkdir(exist_ok=True)
