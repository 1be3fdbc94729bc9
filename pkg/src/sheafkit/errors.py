"""Error taxonomy shared by every layer of the engine.

Each class names the contract it reports a violation of; constructors take a
human-readable message plus optional structured context kept on the instance
so callers (and the CLI) can render evidence deterministically.
"""


class SheafError(Exception):
    """Base class. `context` holds structured evidence for reports."""

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = dict(context)


class CycleError(SheafError):
    """The declared covering relation contains a directed cycle."""


class UnknownElement(SheafError):
    """A referenced element id is not declared in the poset."""


class NotMonotone(SheafError):
    """A map between posets fails to preserve order on some cover."""


class EmptyComplex(SheafError):
    """An operation that needs support got an everywhere-zero object."""


class ShapeError(SheafError):
    """A matrix has the wrong shape for its declared position."""


class NotDifferential(SheafError):
    """d composed with d is nonzero in some degree."""


class FieldMismatch(SheafError):
    """Two exact objects over different fields were combined."""


class BaseMismatch(SheafError):
    """Two functors over different posets were combined."""


class NotFunctorial(SheafError):
    """Two covering paths with equal endpoints compose differently."""


class NotCompact(SheafError):
    """A compact-only operation received a non-compact object."""


class NotVerified(SheafError):
    """A verified bireflection was required but the check refuted it."""


class UnsupportedSystem(SheafError):
    """compactness_witness received a directed system outside the
    supported families (finite chains, truncation towers)."""


class StrideMismatch(SheafError):
    """Tail operations combined tails with incompatible strides."""


class TameClassError(SheafError):
    """The requested operation leaves the decidable class of values
    (for example tensoring two tails, or composing kernels with tails)."""


class ParseError(SheafError):
    """Concrete-syntax error; carries file, line and token context."""

    def __init__(self, message, path=None, line=None, token=None):
        super().__init__(message, path=path, line=line, token=token)
        self.path = path
        self.line = line
        self.token = token

    def __str__(self):
        loc = []
        if self.path is not None:
            loc.append(str(self.path))
        if self.line is not None:
            loc.append("line %d" % self.line)
        if self.token is not None:
            loc.append("token %r" % self.token)
        base = super().__str__()
        if loc:
            return "%s (%s)" % (base, ", ".join(loc))
        return base
