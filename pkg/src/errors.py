"""Error hierarchy shared by the algebra, reduction engine, experiments and CLI.

Every error carries the process exit code the CLI reports for it:
2 for bad input (parse, config, files), 3 for mathematical validation failures,
4 when a finite window or word runs out.
"""


class PetLabError(Exception):
    exit_code = 1


# --- input / parse / config (exit 2) ---------------------------------------

class InputError(PetLabError):
    exit_code = 2


class ParseError(InputError):
    def __init__(self, message, column=None, text=None):
        self.column = column
        self.text = text
        if column is not None:
            message = f"{message} (at column {column})"
        super().__init__(message)


class CanonicalOrderError(ParseError):
    pass


class ConfigError(InputError):
    pass


class InvalidModel(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class DuplicateElement(InputError):
    pass


class InadmissiblePattern(InputError):
    pass


class EmptyWindow(InputError):
    pass


class WindowMismatch(InputError):
    pass


# --- mathematical validation (exit 3) --------------------------------------

class AlgebraError(PetLabError):
    exit_code = 3


class ModelMismatch(AlgebraError):
    pass


class NotIntegral(AlgebraError):
    pass


class InternalNotIntegral(NotIntegral):
    """A coordinate map produced a non integer-valued polynomial: the model is broken."""


class NoRepresentation(AlgebraError):
    pass


class NotInPG0(AlgebraError):
    pass


class PreconditionViolated(AlgebraError):
    pass


class NotMinimal(AlgebraError):
    pass


class IdentityElement(AlgebraError):
    pass


class PrecedenceViolation(AlgebraError):
    pass


class NonDegenerate(AlgebraError):
    pass


class DegreeGuardExceeded(AlgebraError):
    pass


class SearchExhausted(AlgebraError):
    pass


class Undecided(SearchExhausted):
    pass


class StepBudgetExceeded(AlgebraError):
    pass


class GroupLawViolation(AlgebraError):
    pass


class ConstructionError(AlgebraError):
    """A nested return construction whose chains fail their own containment check"""


# --- finite approximation (exit 4) -----------------------------------------

class WindowExhausted(PetLabError):
    exit_code = 4
