"""
evasilab errors
Every failure the toolkit reports is an EvasiLabError; the CLI turns them
into exit code 2 and the web frontend into a 400 with {"error": ...}.
"""


class EvasiLabError(Exception):
    """Base class for all evasilab errors."""


# ── Input / domain errors ───────────────────────────────────

class NonPrime(EvasiLabError):
    pass


class FieldOverflow(EvasiLabError):
    pass


class FieldMismatch(EvasiLabError):
    pass


class DivisionByZero(EvasiLabError):
    pass


class NotDivisor(EvasiLabError):
    pass


class NotCoprime(EvasiLabError):
    pass


class OddD(EvasiLabError):
    pass


class BadPartition(EvasiLabError):
    pass


class BadShape(EvasiLabError):
    pass


class NotAnAction(EvasiLabError):
    pass


class NotDownwardClosed(EvasiLabError):
    pass


class EmptyComplex(EvasiLabError):
    pass


class ConfigError(EvasiLabError):
    pass


# ── Size caps ───────────────────────────────────────────────

class TooLarge(EvasiLabError):
    pass


class DomainTooLarge(TooLarge):
    pass


class OrderTooLarge(TooLarge):
    pass


class TooManyOrbits(TooLarge):
    pass


class CapExceeded(TooLarge):
    pass


class BudgetExceeded(EvasiLabError):
    """Search ran out of nodes; lo <= D(f) <= hi still holds."""

    def __init__(self, lo, hi, message=""):
        self.lo = lo
        self.hi = hi
        super().__init__(message or f"node budget exhausted, bounds [{lo}, {hi}]")


# ── Search outcomes (conjecture-dependent shortfalls) ──────

class NoPartition(EvasiLabError):
    pass


class PoolExhausted(EvasiLabError):
    pass


class NoValidT(EvasiLabError):
    pass


class NoPrimeInWindow(EvasiLabError):
    def __init__(self, lo, hi, message=""):
        self.lo = lo
        self.hi = hi
        super().__init__(message or f"no prime in window [{lo}, {hi}]")


class ShapeMismatch(EvasiLabError):
    pass
