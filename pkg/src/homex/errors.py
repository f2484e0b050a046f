"""Exception types raised by constructors and checkers.

These are contract violations (bad input data), as opposed to Verdict
values, which report mathematical outcomes of well-posed questions.
"""


class HomexError(Exception):
    """Base class for all package-specific errors."""


class NonAdmissible(HomexError):
    """Presentation is rejected: relations not length-homogeneous of length
    >= 2, arrow ideal not nilpotent within the cap, or the path count
    explodes past the safety bound."""


class AlgebraMismatch(HomexError):
    """Operands live over different algebras or different base fields."""


class NotUnital(HomexError):
    """Claimed embedding does not send 1 to 1."""


class NotMultiplicative(HomexError):
    """Claimed embedding or product map fails multiplicativity."""


class NotInjective(HomexError):
    """Claimed embedding has a kernel."""


class NotBimoduleMorphism(HomexError):
    """Product map on a bimodule is not a bimodule morphism in each slot."""


class NotAssociative(HomexError):
    """Product map on a bimodule fails internal associativity."""


class NotNilpotent(HomexError):
    """Bimodule product has no vanishing power, so the extension would not
    preserve the radical bookkeeping this package relies on."""


class ArrowInRelations(HomexError):
    """The arrow slated for removal occurs in some defining relation."""


class TestsetNotCertified(HomexError):
    """An orthogonality test set contains a module whose own membership
    check did not come back certified."""


class NotSplit(HomexError):
    """The inclusion of the subalgebra admits no splitting retraction as a
    bimodule map, so the kernel-of-retraction construction is unavailable."""


class ParseError(HomexError):
    """Source text rejected; carries 1-based position and what was expected."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
