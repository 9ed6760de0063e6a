# Objetos de valor del dominio
from .quantum_models import (
    PureState2Q, HermitianOperator, DensityMatrix, Effect, SymmetrizedStrategy
)
from .sdp_models import LmiBlock, SdpProblem, SdpSettings, SdpSolution, SolverStatus
from .scenario_models import (
    Scenario, DualPoint, InnerBranch, InnerSolution, Eps1Geometry,
    CommutingOptimum, Region, OracleMethod, OracleReport, Violation, Certification
)
from .tradeoff_models import SweepSpec, TradeoffPoint, Method
