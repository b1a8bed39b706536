from typing import Optional, Tuple


class PinvError(Exception):
    """Base class for every error raised by the library"""

    exit_code = 2

    def __init__(self, message: str, root: Optional[Tuple[int, int]] = None):
        self.message = message
        self.root = tuple(root) if root is not None else None
        super().__init__(self.__str__())

    def __str__(self) -> str:
        if self.root is None:
            return self.message
        return f"{self.message} (at root ({self.root[0]},{self.root[1]}))"


# Input errors: malformed blocks, points, files or formats.

class InputError(PinvError):
    pass


class EmptyInput(InputError):
    pass


class NonPositive(InputError):
    pass


class UnsupportedFormat(InputError):
    pass


class BadIndices(InputError):
    pass


class ZeroDiagonal(InputError):
    pass


class ZeroCoefficient(InputError):
    pass


class WrongSupport(InputError):
    pass


class NotYPoint(InputError):
    pass


class MissingValue(InputError):
    pass


class MissingVariable(InputError):
    pass


# Algebra errors

class AlgebraError(PinvError):
    pass


class NotSquare(AlgebraError):
    pass


class SizeCapExceeded(AlgebraError):
    pass


class NotAdmissible(AlgebraError):
    pass


class VanishingDenominator(AlgebraError, ZeroDivisionError):
    pass


# General position

class DegenerateInput(PinvError):
    """A coordinate or denominator required to be nonzero vanishes"""


class DegenerateOrbit(PinvError, ZeroDivisionError):
    """Division by zero while solving for canonical coefficients"""


# Consistency errors signal an upstream bug rather than bad input.

class ConsistencyError(PinvError):
    pass


class InternalContradiction(ConsistencyError):
    pass


class CertificateFailure(ConsistencyError):
    pass


class MissingWitness(ConsistencyError):
    pass


class CaseMismatch(ConsistencyError):
    pass


class SupportLeak(ConsistencyError):
    pass
