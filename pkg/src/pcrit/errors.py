"""Exception taxonomy shared by every engine.

Computation errors derive from :class:`PcritError`; the CLI maps them to exit
code 1. Malformed input files raise :class:`MalformedInput` (exit code 2).
"""


class PcritError(Exception):
    """Base class for all computation errors."""


class MalformedInput(PcritError):
    """An input file or argument could not be parsed."""


# -- rings and classes --------------------------------------------------------

class InvalidRingSpec(PcritError):
    pass


class NonAssociative(InvalidRingSpec):
    pass


class NonCommutative(InvalidRingSpec):
    pass


class DuplicateLabel(InvalidRingSpec):
    pass


class MissingFundamental(InvalidRingSpec):
    pass


class MissingUnit(InvalidRingSpec):
    pass


class UnknownLabel(PcritError):
    pass


class WrongDegree(PcritError):
    pass


class RingMismatch(PcritError):
    pass


class OutOfRange(PcritError):
    pass


# -- equations ------------------------------------------------------------------

class DegreeMismatch(PcritError):
    pass


class DegenerateVolume(PcritError):
    pass


class PositivityViolated(PcritError):
    pass


class VanishingCharge(PcritError):
    pass


class DegenerateEquationWarning(UserWarning):
    """All coefficients of a built equation vanish."""


# -- stability ------------------------------------------------------------------

class Unnormalized(PcritError):
    pass


class NormalizationBroken(PcritError):
    pass


class DimensionMismatch(PcritError):
    pass


class ZeroDenominator(PcritError):
    pass


class OutOfValidityBox(PcritError):
    pass


class ConsistencyError(PcritError):
    """Two independent routes to the same number disagree."""


# -- moment-map model -------------------------------------------------------------

class LevelImbalance(PcritError):
    pass


class ShapeMismatch(PcritError):
    pass


class NotInLieAlgebra(PcritError):
    pass


class NotCritical(PcritError):
    pass


class UnsupportedMultiplicity(PcritError):
    pass


class NoConvergence(PcritError):
    """The flow did not reach the gradient tolerance before ``t_max``.

    The partial :class:`~pcrit.moment_flow.flow.FlowResult` is attached as
    ``result``.
    """

    def __init__(self, t_max, result=None):
        super().__init__(f"flow did not converge before t_max={t_max:g}")
        self.t_max = t_max
        self.result = result
