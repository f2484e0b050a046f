"""homex: exact-arithmetic homological algebra for quiver algebras."""

from .config import Cutoffs, DEFAULT_CUTOFFS
from .exact import Field, GF, Mat, QQ, kernel_basis, rref, solve
from .verdict import Verdict, certified, inconclusive, refuted

__version__ = "0.1.0"
