"""Heights of one- and two-sided congruence lattices of finite semigroups."""

from conglat.errors import (
    ConglatError,
    GroupTooLarge,
    IndexOutOfRange,
    LatticeTooLarge,
    MissingQ,
    NotASubalgebra,
    NotAssociative,
    OutOfValidityRange,
    QNotPrimePower,
    TooLarge,
)

__version__ = "0.1.0"

__all__ = [
    "ConglatError",
    "GroupTooLarge",
    "IndexOutOfRange",
    "LatticeTooLarge",
    "MissingQ",
    "NotASubalgebra",
    "NotAssociative",
    "OutOfValidityRange",
    "QNotPrimePower",
    "TooLarge",
]
