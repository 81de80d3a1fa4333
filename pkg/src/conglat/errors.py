class ConglatError(Exception):
    """Base class for all errors raised by conglat."""


class LimitError(ConglatError):
    """A configured size limit was exceeded."""


class NotAssociative(ConglatError):
    def __init__(self, a, b, c):
        super().__init__(f"product is not associative: a={a}, b={b}, c={c}")
        self.witness = (a, b, c)


class IndexOutOfRange(ConglatError):
    pass


class GroupTooLarge(LimitError):
    pass


class TooLarge(LimitError):
    pass


class LatticeTooLarge(LimitError):
    pass


class MissingQ(ConglatError):
    pass


class QNotPrimePower(ConglatError):
    pass


class NotASubalgebra(ConglatError):
    pass


class OutOfValidityRange(ConglatError):
    """Raised by closed forms outside their stated range of validity.

    ``general_value`` carries the height produced by the D-class engine and
    ``formula_value`` the literal evaluation of the closed form, so callers can
    compare the two.
    """

    def __init__(self, message, general_value=None, formula_value=None):
        super().__init__(message)
        self.general_value = general_value
        self.formula_value = formula_value

    @property
    def agrees(self):
        return self.general_value == self.formula_value
