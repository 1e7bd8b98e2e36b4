class LoopFormulasError(Exception):
    """
    Base class for all errors raised by `loopformulas`.
    """


class GuardExceeded(LoopFormulasError):
    """
    Raised when an enumeration would range over more elements than allowed.
    """

    def __init__(self, size: int, limit: int, what: str):
        super().__init__(f"{what}: size {size} exceeds the enumeration limit of {limit}")
        self.size = size
        self.limit = limit
        self.what = what


class PreconditionViolated(LoopFormulasError, ValueError):
    """
    Raised when an operation is called outside of its documented domain.
    """


class PropertyViolation(LoopFormulasError):
    """
    Raised when a property which must hold on every instance fails.
    """

    def __init__(self, name: str, detail: str = "", program: str = ""):
        super().__init__(f"{name}: {detail}" if detail else name)
        self.name = name
        self.detail = detail
        self.program = program


class ProgramSyntaxError(SyntaxError):
    """
    Raised when program text does not follow the rule grammar.

    The standard `SyntaxError` attributes are populated, so `filename`,
    `lineno` and `offset` locate the problem (1-based).
    """

    def __init__(self, message: str, origin: str, line: int, column: int, text: str):
        super().__init__(message, (origin, line, column, text))

    def __str__(self) -> str:
        return f"{self.filename}:{self.lineno}:{self.offset}: {self.msg}"
