# Common execution errors

COMMON_ERROR_UNEXPECTED_ERROR = "Unexpected error"

# Tensor registers

DUPLICATE_LABEL_ERROR = "Duplicate register label"
UNKNOWN_LABEL_ERROR = "Unknown register label"
NOT_A_PERMUTATION_ERROR = "Register order is not a permutation of the existing labels"
DIMENSION_MISMATCH_ERROR = "Dimension mismatch"
NON_HERMITIAN_ERROR = "Matrix is not Hermitian within tolerance"

# Channels

NOT_TRACE_PRESERVING_ERROR = "Kraus operators are not trace preserving"
INVALID_CHOI_ERROR = "Operator violates the Choi invariants"
NOISE_OUT_OF_RANGE_ERROR = "Noise parameter must lie in [0, 1]"
WERNER_HOLEVO_DIMENSION_ERROR = "Werner-Holevo channel with index 1 requires d >= 2"
NOT_STOCHASTIC_ERROR = "Matrix is not column stochastic"
INVALID_ENSEMBLE_ERROR = "Ensemble probabilities must be nonnegative and sum to one"
INCOMPATIBLE_CHANNELS_ERROR = "Channels do not share register dimensions and ownership"

# Programs

EMPTY_PARAMETER_SET_ERROR = "Parameter set is empty"
K_MUST_BE_POSITIVE = "k must be ≥ 1"
LAMBDA_OUT_OF_RANGE = "lambda must lie strictly between 0 and 1"
NOT_BINARY_ENSEMBLE_ERROR = "Program requires exactly two channels"
NOT_DIAGONAL_ERROR = "Choi operator is not diagonal"
SOLVER_FAILURE_ERROR = "Solver did not reach an optimal solution"
DUALITY_MISMATCH_ERROR = "Global value and diamond dual disagree"
NO_K_FOUND_ERROR = "No k reached the global value up to the upper bound"

# Command line

SPEC_PARSE_ERROR = "Cannot parse channel spec"
INLINE_FAMILY_ERROR = "Family requires a JSON spec file"
COPIES_OUT_OF_RANGE = "copies must be 1, 2 or 3"
EMPTY_GRID_ERROR = "Grid must not be empty"
