"""Exact computations with diagrams of chain complexes on finite posets."""

__version__ = "0.1.0"

from .field import F2, QQ, GF, Field
from .errors import (
    BaseMismatch,
    CycleError,
    EmptyComplex,
    FieldMismatch,
    NotCompact,
    NotDifferential,
    NotFunctorial,
    NotMonotone,
    NotVerified,
    ParseError,
    ShapeError,
    SheafError,
    StrideMismatch,
    TameClassError,
    UnknownElement,
    UnsupportedSystem,
)
