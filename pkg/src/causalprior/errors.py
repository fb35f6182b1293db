"""Exception hierarchy.

Every error raised by the library derives from :class:`CausalPriorError`.
The CLI maps the four intermediate bases onto its exit codes.
"""


class CausalPriorError(Exception):
    pass


class DataError(CausalPriorError):
    """Malformed input files or inconsistent inputs (exit code 2)."""


class EndpointFailure(CausalPriorError):
    """LLM transport problems (exit code 3)."""


class ConstraintError(CausalPriorError):
    """Unusable constraint sets (exit code 4)."""


class ParseError(DataError):
    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class UndeclaredVariable(DataError):
    pass


class RowNotNormalized(DataError):
    pass


class UnknownSymbol(DataError):
    pass


class UnknownLabel(DataError):
    pass


class RaggedRow(DataError):
    pass


class EmptyDataset(DataError):
    pass


class SizeMismatch(DataError):
    pass


class TooLarge(DataError):
    pass


class EmptyVariableTable(DataError):
    pass


class CycleRejected(CausalPriorError):
    pass


class MissingEdge(CausalPriorError):
    pass


class ConfidenceOutOfRange(ConstraintError):
    pass


class SelfLoopStatement(ConstraintError):
    pass


class WrongKind(ConstraintError):
    pass


class NonAncestralConstraint(ConstraintError):
    pass


class ConflictingConstraints(ConstraintError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"conflicting constraints: {report.describe()}")


class EndpointError(EndpointFailure):
    pass


class FixtureMissing(EndpointFailure):
    pass
