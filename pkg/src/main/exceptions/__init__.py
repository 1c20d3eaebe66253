from src.main.exceptions.common_exception import (CustomException, ValidationException, SolverException,
                                                  InvariantViolationException)

__all__ = ["CustomException", "ValidationException", "SolverException", "InvariantViolationException"]
