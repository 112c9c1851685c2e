"""Exception types shared across modules."""


class EisgenError(Exception):
    pass


class NotPrime(EisgenError):
    pass


class TooLarge(EisgenError):
    pass


class BudgetExceeded(EisgenError):
    def __init__(self, needed, budget):
        super().__init__(f"enumeration needs {needed} candidates, budget is {budget}")
        self.needed = needed
        self.budget = budget


class ParseError(EisgenError):
    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} at column {position}")
        self.position = position


class UnclassifiablePlace(EisgenError):
    pass


class PoleOnContour(EisgenError):
    pass


class InconsistentCounts(EisgenError):
    pass


class WeilViolation(EisgenError):
    pass


class NonLaurentInput(EisgenError):
    pass


class PrecisionExceeded(EisgenError):
    pass


class RelationViolation(EisgenError):
    def __init__(self, relation, detail=""):
        super().__init__(f"{relation}: {detail}" if detail else relation)
        self.relation = relation


class LedgerMismatch(EisgenError):
    def __init__(self, row, detail=""):
        super().__init__(f"row {row}: {detail}")
        self.row = row


class VerificationFailure(EisgenError):
    pass


class DomainError(EisgenError, ValueError):
    pass


class OutOfStableRange(EisgenError, ValueError):
    pass


class CharacterMismatch(EisgenError):
    def __init__(self, key, lhs, rhs):
        super().__init__(f"characters differ at {key}: {lhs} vs {rhs}")
        self.key = key
        self.lhs = lhs
        self.rhs = rhs


class NotAPole(EisgenError, ValueError):
    pass
