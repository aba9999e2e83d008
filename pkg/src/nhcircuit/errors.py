"""Exception and warning types raised by nhcircuit."""


class NHCircuitError(Exception):
    """Base class for numerical failures inside the library."""


class DegenerateDetuning(NHCircuitError, ValueError):
    """A detuning that appears in a denominator is exactly zero."""


class NonPositiveResonatorLoss(NHCircuitError, ValueError):
    """The resonator decay rate must be strictly positive."""


class ResidualCheckFailed(NHCircuitError, ArithmeticError):
    """Closed-form eigenpairs disagree with a direct eigendecomposition."""


class DegenerateDecay(NHCircuitError):
    """Both eigenmodes decay at the same rate, so no unique long-time limit exists."""


class IllConditionedEigenbasis(NHCircuitError):
    """Eigenvector matrix is too close to singular to diagonalize safely."""


class NonFiniteState(NHCircuitError, FloatingPointError):
    """Density matrix became inf/nan during time evolution."""

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"non-finite density matrix at step {step}")


class SlowModeAmbiguity(NHCircuitError):
    """The slow (qubit-like) modes of a full model cannot be identified."""


class ConfigError(Exception):
    """Invalid run configuration."""


class ParseError(ConfigError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnknownKey(ConfigError):
    def __init__(self, key, section, suggestion=None):
        self.key = key
        self.section = section
        self.suggestion = suggestion
        hint = f"; did you mean {suggestion!r}?" if suggestion else ""
        super().__init__(f"unknown key {key!r} in [{section}]{hint}")


class UnitSanityWarning(UserWarning):
    """A value looks like it was entered in the wrong unit (GHz vs MHz)."""


class DispersiveWarning(UserWarning):
    """A coupling is not small compared with the detuning it is divided by."""
