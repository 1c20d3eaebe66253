from enum import Enum, IntEnum


class ExitCode(IntEnum):
    OK = 0
    UNEXPECTED = 1
    PARSE_ERROR = 2
    SOLVER_FAILURE = 3
    INVARIANT_VIOLATION = 4


class Party(str, Enum):
    ALICE = "alice"
    BOB = "bob"


class SolveStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    NUMERICAL_TROUBLE = "NumericalTrouble"


class ConstraintKind(str, Enum):
    PSD = "PSD"
    ZERO = "Zero"


class Sense(str, Enum):
    MAX = "max"
    MIN = "min"


class ChannelFamily(str, Enum):
    DEPOL_BIPARTITE = "depol_bipartite"
    DEPOL_PP = "depol_pp"
    DEPOL_SWAP = "depol_swap"
    WERNER_HOLEVO_0 = "werner_holevo_0"
    WERNER_HOLEVO_1 = "werner_holevo_1"
    AMPLITUDE_DAMPING = "amplitude_damping"
    REPLACER = "replacer"
    CLASSICAL = "classical"
    EXPLICIT_CHOI = "explicit_choi"
    PARALLEL = "parallel"


class CommutantName(str, Enum):
    ISOTROPIC_PAIR = "isotropic_pair"
    CROSS_ISOTROPIC_PAIR = "cross_isotropic_pair"
    SINGLE_ISOTROPIC = "single_isotropic"
    DIAGONAL = "diagonal"


class CovarianceMode(str, Enum):
    COVARIANT = "covariant"
    CROSS_COVARIANT = "cross_covariant"


class ParamDomain(str, Enum):
    BOX = "box"
    SIMPLEX = "simplex"


class LpFamily(str, Enum):
    BIPARTITE = "bipartite"
    PP = "pp"
    SWAP = "swap"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
