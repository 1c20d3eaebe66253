from src.main.constants.common import (CanonicalRegisters, DefaultSolverConfig, DefaultToleranceConfig,
                                       DefaultCostConfig, DefaultExperimentConfig, DefaultOutputConfig)
from src.main.constants.enums import (ExitCode, Party, SolveStatus, ConstraintKind, Sense, ChannelFamily,
                                      CommutantName, CovarianceMode, ParamDomain, LpFamily, OutputFormat)
from src.main.constants.error_messages import COMMON_ERROR_UNEXPECTED_ERROR

__all__ = ["CanonicalRegisters", "DefaultSolverConfig", "DefaultToleranceConfig", "DefaultCostConfig",
           "DefaultExperimentConfig", "DefaultOutputConfig", "ExitCode", "Party", "SolveStatus",
           "ConstraintKind", "Sense", "ChannelFamily", "CommutantName", "CovarianceMode", "ParamDomain",
           "LpFamily", "OutputFormat", "COMMON_ERROR_UNEXPECTED_ERROR"]
