"""Exception hierarchy shared by every layer of the toolkit."""


class WSSpectraError(Exception):
    """Base class for all toolkit errors."""


class InvalidState(WSSpectraError, ValueError):
    """Quantum numbers do not describe an allowed state (e.g. N <= l)."""


class ComplexEnergy(WSSpectraError, ArithmeticError):
    """A closed-form energy came out complex: no bound level for that index."""

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class InvalidExponents(WSSpectraError, ValueError):
    """Jacobi parameters outside (-1, inf): the eigenfunction is not normalizable."""


class NonNormalizable(InvalidExponents):
    pass


class DivergentIntegral(WSSpectraError, ArithmeticError):
    pass


class DegreeTooLarge(WSSpectraError, ValueError):
    pass


class OutOfRegion(WSSpectraError, ValueError):
    pass


class NoBoundState(WSSpectraError):
    """The node count never reaches the target below the continuum threshold."""


class BracketAmbiguous(WSSpectraError):
    pass


class ConfigError(WSSpectraError, ValueError):
    pass
