class CanonicalRegisters:
    A0 = "A0"
    B0 = "B0"
    A1 = "A1"
    B1 = "B1"
    ORDER = ("A0", "B0", "A1", "B1")
    INPUTS = ("A0", "B0")
    OUTPUTS = ("A1", "B1")
    BOB = ("B0", "B1")


class DefaultSolverConfig:
    BACKEND = "cvxpy"
    METHOD = "CLARABEL"
    FEAS_TOL = 1e-8
    GAP_TOL = 1e-8
    MAX_ITER = 1000
    RESIDUAL_TOL = 1e-6


class DefaultToleranceConfig:
    HERMITIAN_TOL = 1e-10
    HINT_TOL = 1e-12
    CHOI_TOL = 1e-9
    KRAUS_TOL = 1e-10
    PROBABILITY_TOL = 1e-12
    DIAGONAL_TOL = 1e-12


class DefaultCostConfig:
    EQ_TOL = 1e-5
    DUALITY_TOL = 1e-6


class DefaultExperimentConfig:
    GAMMA_GRID = tuple(round(0.02 * i, 2) for i in range(11))
    LAMBDA = 0.5
    COPIES = (1, 2, 3)


class DefaultOutputConfig:
    SIGNIFICANT_DIGITS = 9
