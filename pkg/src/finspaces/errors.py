"""Exception hierarchy.  Every error carries the offending data in ``witness``."""


class FinSpacesError(Exception):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class CycleDetected(FinSpacesError):
    pass


class UnknownElement(FinSpacesError):
    pass


class DuplicateName(FinSpacesError):
    pass


class NotAComplex(FinSpacesError):
    pass


class ElementNotInChain(FinSpacesError):
    pass


class NotARelativeCycle(FinSpacesError):
    pass


class NotAntichainInduced(FinSpacesError):
    pass


class ClassExpressionFailed(FinSpacesError):
    pass


class NotOpen(FinSpacesError):
    pass


class NotConvex(FinSpacesError):
    pass


class NotACover(FinSpacesError):
    pass


class NotQuasicellular(FinSpacesError):
    pass


class NotAdmissible(FinSpacesError):
    """A Morse edge whose punctured down-set is not acyclic."""


class RhoMismatch(FinSpacesError):
    pass


class PreconditionFailed(FinSpacesError):
    pass


class ColoringNotAdmissible(FinSpacesError):
    pass


class NotHomologySimplyConnected(FinSpacesError):
    pass


class SchemaError(FinSpacesError):
    pass
