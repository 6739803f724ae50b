"""Exception types raised by the bonusmalus package."""


class BonusMalusError(Exception):
    """Base class for all package errors."""


class NonIncreasingThresholds(BonusMalusError):
    pass


class DegenerateType(BonusMalusError):
    pass


class NegativeDeductible(BonusMalusError):
    pass


class EmptyBand(BonusMalusError):
    pass


class ZeroPenalty(BonusMalusError):
    pass


class NotRegularError(BonusMalusError):
    """The chain support is not entrywise positive within the power budget."""

    def __init__(self, max_power):
        self.max_power = max_power
        super().__init__(f"no power up to {max_power} has all entries positive")


class SingularSystem(BonusMalusError):
    pass


class NonFiniteIntegrand(BonusMalusError):
    pass


class QuadratureDivergence(BonusMalusError):
    pass


class NoMalusZone(BonusMalusError):
    pass


class NotInMalusZone(BonusMalusError):
    pass


class Assumption2Violation(BonusMalusError):
    pass


class AlphaOutOfRange(BonusMalusError):
    pass


class MonotonicityViolation(BonusMalusError):
    pass


class InfeasibleProportional(BonusMalusError):
    pass


class ManualDInconsistent(BonusMalusError):
    pass


class ConfigError(BonusMalusError):
    pass
