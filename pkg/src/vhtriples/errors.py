"""Exception types shared across the package."""


class VHError(Exception):
    """Base class for every error raised by vhtriples."""


# rings
class NotAUnit(VHError):
    pass


class RingMismatch(VHError):
    pass


class ZeroElement(VHError):
    pass


class BadParameter(VHError):
    pass


# plain hyperfields
class NotInCarrier(VHError):
    pass


class AxiomViolation(VHError):
    pass


class NotASubgroup(VHError):
    pass


# valued hyperfields
class BadLevel(VHError):
    pass


class BadWeight(VHError):
    pass


class ZeroInverse(VHError):
    pass


class MismatchedVH(VHError):
    pass


class WindowTooSmall(VHError):
    pass


class RamificationMismatch(VHError):
    pass


# triples
class TripleMismatch(VHError):
    pass


class BadPowers(VHError):
    pass


class NotComposable(VHError):
    pass


# functors
class NonIntegralRamification(VHError):
    pass


class EndpointMismatch(VHError):
    pass


class NotAHyperfieldIso(VHError):
    pass


# spec documents
class SpecError(VHError):
    """Problem with a spec document; ``line``/``col`` are 1-based when known."""

    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)
        self.line = line
        self.col = col


class SpecSyntaxError(SpecError):
    pass


class UnknownField(SpecError):
    pass


class UnresolvedReference(SpecError):
    pass
