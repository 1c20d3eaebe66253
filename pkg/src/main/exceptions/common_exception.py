from src.main.constants.enums import ExitCode


class CustomException(Exception):
    def __init__(self, detail: str, exit_code: int = ExitCode.UNEXPECTED):
        super().__init__(detail)
        self.detail = detail
        self.exit_code = exit_code


class ValidationException(CustomException):
    def __init__(self, detail: str):
        super().__init__(detail, ExitCode.PARSE_ERROR)


class SolverException(CustomException):
    def __init__(self, detail: str, status: str = "", diagnostics: dict = None):
        super().__init__(detail, ExitCode.SOLVER_FAILURE)
        self.status = status
        self.diagnostics = diagnostics or {}


class InvariantViolationException(CustomException):
    def __init__(self, detail: str, diagnostics: dict = None):
        super().__init__(detail, ExitCode.INVARIANT_VIOLATION)
        self.diagnostics = diagnostics or {}
