"""Exception hierarchy.

``InputError`` and its subclasses mean the input presentation itself is
malformed; the command line maps them to exit code 2.  Everything else
derived from ``WgdblError`` reports a failed property of a well-formed input.
"""


class WgdblError(Exception):
    pass


class InputError(WgdblError):
    pass


class ParseError(InputError):
    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class UnknownCommand(InputError):
    pass


class CategoryAxiomError(InputError):
    def __init__(self, message, arrows=()):
        self.arrows = tuple(arrows)
        super().__init__(message)


class MissingComposite(CategoryAxiomError):
    pass


class AssociativityViolation(CategoryAxiomError):
    pass


class IdentityViolation(CategoryAxiomError):
    pass


class FunctorViolation(WgdblError):
    def __init__(self, message, data=()):
        self.data = tuple(data)
        super().__init__(message)


class NaturalityViolation(WgdblError):
    def __init__(self, message, data=()):
        self.data = tuple(data)
        super().__init__(message)


class InternalCategoryAxiomViolation(InputError):
    def __init__(self, axiom, message, data=()):
        self.axiom = axiom
        self.data = tuple(data)
        super().__init__(f"{axiom}: {message}")


class InterchangeViolation(InputError):
    def __init__(self, message, cells=()):
        self.cells = tuple(cells)
        super().__init__(message)


class NotWeaklyGlobular(WgdblError):
    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class NotGroupoidal(WgdblError):
    def __init__(self, message, verdict=None):
        self.verdict = verdict
        super().__init__(message)


class VerticalNotInvertible(WgdblError):
    pass


class ConditionsFailed(WgdblError):
    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class InconsistentFrame(InputError):
    pass


class PastingUndefined(WgdblError):
    def __init__(self, row, message):
        self.row = row
        super().__init__(f"{row}: {message}")


class UnsupportedBicategory(InputError):
    pass


class BicategoryAxiomError(InputError):
    def __init__(self, message, data=()):
        self.data = tuple(data)
        super().__init__(message)


class PentagonViolation(BicategoryAxiomError):
    pass


class TriangleViolation(BicategoryAxiomError):
    pass


class BicategoryInterchangeViolation(BicategoryAxiomError):
    pass


class CoherenceSearchFailed(WgdblError):
    pass
