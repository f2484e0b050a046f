"""Exact dense linear algebra over Q and prime fields F_p.

Everything downstream (module homs, resolutions, Tor/Ext ranks) reduces to
the kernels in this file: rref, kernel_basis, solve, and the incremental
RowSpace echelon.  No floating point anywhere; ranks are exact.

Scalars are plain Python objects: `fractions.Fraction` over Q, `int` (in
[0, p)) over F_p.  Hot loops use native `+`/`*` for both and reduce mod p
at write-back; the Field object carries the few operations that differ.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """Field descriptor.  char == 0 means Q, otherwise F_char (char prime)."""

    char: int = 0

    def __post_init__(self):
        if self.char != 0 and not _is_prime(self.char):
            raise ValueError(f"field characteristic must be 0 or prime, got {self.char}")

    @property
    def zero(self):
        return Fraction(0) if self.char == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.char == 0 else 1

    def scalar(self, x):
        """Coerce an int / Fraction / (num, den) pair into this field."""
        if self.char == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            num = x.numerator % self.char
            den = x.denominator % self.char
            return num * pow(den, -1, self.char) % self.char
        return x % self.char

    def inv(self, x):
        if self.char == 0:
            return 1 / x
        return pow(x, -1, self.char)

    def neg(self, x):
        if self.char == 0:
            return -x
        return (-x) % self.char

    def reduce(self, x):
        """Normalize an arithmetic temporary back into canonical form."""
        return x if self.char == 0 else x % self.char

    def __str__(self):
        return "Q" if self.char == 0 else f"F{self.char}"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


class Mat:
    """Dense matrix with exact entries.  Rows are plain lists; immutable by
    convention (no method mutates self; operations return new matrices)."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: Sequence[Sequence],
                 ncols: Optional[int] = None):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        # ncols keeps the width of a 0-row matrix meaningful
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged rows")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zeros(field: Field, nrows: int, ncols: int) -> "Mat":
        z = field.zero
        return Mat(field, [[z] * ncols for _ in range(nrows)], ncols=ncols)

    @staticmethod
    def identity(field: Field, n: int) -> "Mat":
        z, o = field.zero, field.one
        rows = [[z] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = o
        return Mat(field, rows)

    @staticmethod
    def from_int_rows(field: Field, rows: Sequence[Sequence[int]]) -> "Mat":
        return Mat(field, [[field.scalar(x) for x in r] for r in rows])

    @staticmethod
    def column(field: Field, vec: Sequence) -> "Mat":
        return Mat(field, [[x] for x in vec])

    # -- basics --------------------------------------------------------

    def copy_rows(self) -> list[list]:
        return [row[:] for row in self.rows]

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"Mat({self.nrows}x{self.ncols} over {self.field})"

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for row in self.rows for x in row)

    def transpose(self) -> "Mat":
        if not self.rows:
            return Mat.zeros(self.field, self.ncols, 0)
        return Mat(self.field, [list(col) for col in zip(*self.rows)],
                   ncols=self.nrows)

    def col(self, j: int) -> list:
        return [row[j] for row in self.rows]

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "Mat") -> "Mat":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        red = self.field.reduce
        return Mat(self.field, [[red(a + b) for a, b in zip(r1, r2)]
                                for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "Mat") -> "Mat":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        red = self.field.reduce
        return Mat(self.field, [[red(a - b) for a, b in zip(r1, r2)]
                                for r1, r2 in zip(self.rows, other.rows)])

    def scale(self, c) -> "Mat":
        red = self.field.reduce
        return Mat(self.field, [[red(c * x) for x in row] for row in self.rows])

    def __matmul__(self, other: "Mat") -> "Mat":
        return self.mul(other)

    def mul(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in product")
        f = self.field
        z = f.zero
        red = f.reduce
        ocols = other.ncols
        out = []
        for row in self.rows:
            acc = [z] * ocols
            for k, a in enumerate(row):
                if a == z:
                    continue
                orow = other.rows[k]
                for j in range(ocols):
                    b = orow[j]
                    if b != z:
                        acc[j] = acc[j] + a * b
            out.append([red(x) for x in acc])
        return Mat(f, out, ncols=ocols)

    def apply(self, vec: Sequence) -> list:
        """Matrix times column vector (vec as plain list)."""
        f = self.field
        z = f.zero
        red = f.reduce
        out = []
        for row in self.rows:
            acc = z
            for a, x in zip(row, vec):
                if a != z and x != z:
                    acc = acc + a * x
            out.append(red(acc))
        return out

    # -- block helpers ---------------------------------------------------

    @staticmethod
    def vstack(field: Field, mats: Iterable["Mat"]) -> "Mat":
        rows: list[list] = []
        ncols = None
        for m in mats:
            if ncols is None:
                ncols = m.ncols
            elif m.ncols != ncols:
                raise ValueError("vstack width mismatch")
            rows.extend(m.copy_rows())
        if ncols is None:
            ncols = 0
        return Mat(field, rows) if rows else Mat.zeros(field, 0, ncols)

    @staticmethod
    def hstack(field: Field, mats: Sequence["Mat"]) -> "Mat":
        if not mats:
            return Mat.zeros(field, 0, 0)
        n = mats[0].nrows
        for m in mats:
            if m.nrows != n:
                raise ValueError("hstack height mismatch")
        rows = [sum((m.rows[i] for m in mats), []) for i in range(n)]
        return Mat(field, rows)

    @staticmethod
    def block_diag(field: Field, mats: Sequence["Mat"]) -> "Mat":
        nr = sum(m.nrows for m in mats)
        nc = sum(m.ncols for m in mats)
        out = Mat.zeros(field, nr, nc)
        r0 = c0 = 0
        for m in mats:
            for i, row in enumerate(m.rows):
                out.rows[r0 + i][c0:c0 + m.ncols] = row[:]
            r0 += m.nrows
            c0 += m.ncols
        return out

    def kron(self, other: "Mat") -> "Mat":
        """Kronecker product; index (i, j) of the result pairs row i of self
        with row j of other (row-major pair order, matching tensor bases)."""
        f = self.field
        z = f.zero
        red = f.reduce
        out_rows = []
        for arow in self.rows:
            for brow in other.rows:
                row = []
                for a in arow:
                    if a == z:
                        row.extend([z] * len(brow))
                    else:
                        row.extend(red(a * b) for b in brow)
                out_rows.append(row)
        if not out_rows:
            return Mat.zeros(f, 0, self.ncols * other.ncols)
        return Mat(f, out_rows)


# ---------------------------------------------------------------------------
# Echelon kernels
# ---------------------------------------------------------------------------


class RowSpace:
    """Incremental fully-reduced row echelon basis of a subspace of F^n.

    Pivots are normalized to 1 and eliminated from all other rows, so the
    stored basis is the (unique) RREF basis of the span given the ambient
    coordinate order.  Supports membership, residues, and coordinates.
    """

    __slots__ = ("field", "n", "rows", "pivots", "_pivot_set")

    def __init__(self, field: Field, ambient_dim: int):
        self.field = field
        self.n = ambient_dim
        self.rows: list[list] = []
        self.pivots: list[int] = []          # pivots[i] = pivot column of rows[i]
        self._pivot_set: dict[int, int] = {}  # pivot column -> row index

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce_vec(self, vec: Sequence) -> list:
        """Residue of vec modulo the span (does not mutate self)."""
        f = self.field
        z = f.zero
        red = f.reduce
        v = list(vec)
        for i, j in enumerate(self.pivots):
            c = v[j]
            if c != z:
                row = self.rows[i]
                for k in range(j, self.n):
                    rk = row[k]
                    if rk != z:
                        v[k] = red(v[k] - c * rk)
        return v

    def add(self, vec: Sequence) -> bool:
        """Insert vec's residue; returns True if the dimension grew."""
        f = self.field
        z = f.zero
        red = f.reduce
        v = self.reduce_vec(vec)
        piv = next((j for j in range(self.n) if v[j] != z), None)
        if piv is None:
            return False
        c = f.inv(v[piv])
        v = [red(c * x) for x in v]
        # eliminate the new pivot from existing rows to keep full reduction
        for i, row in enumerate(self.rows):
            d = row[piv]
            if d != z:
                self.rows[i] = [red(a - d * b) for a, b in zip(row, v)]
        # insert keeping pivot order
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < piv:
            pos += 1
        self.rows.insert(pos, v)
        self.pivots.insert(pos, piv)
        self._pivot_set = {j: i for i, j in enumerate(self.pivots)}
        return True

    def extend(self, vecs: Iterable[Sequence]) -> None:
        for v in vecs:
            self.add(v)

    def contains(self, vec: Sequence) -> bool:
        z = self.field.zero
        return all(x == z for x in self.reduce_vec(vec))

    def coords_of(self, vec: Sequence) -> Optional[list]:
        """Coordinates of vec in the stored RREF basis, or None if outside."""
        f = self.field
        z = f.zero
        red = f.reduce
        v = list(vec)
        coords = [z] * len(self.rows)
        for i, j in enumerate(self.pivots):
            c = v[j]
            if c != z:
                coords[i] = c
                row = self.rows[i]
                for k in range(j, self.n):
                    rk = row[k]
                    if rk != z:
                        v[k] = red(v[k] - c * rk)
        if any(x != z for x in v):
            return None
        return coords

    def free_coordinates(self) -> list[int]:
        return [j for j in range(self.n) if j not in self._pivot_set]


def rref(m: Mat) -> tuple[Mat, list[int], int]:
    """Reduced row echelon form.  Returns (R, pivot_columns, rank); R has the
    same shape as m (zero rows kept at the bottom), row space preserved."""
    f = m.field
    z = f.zero
    red = f.reduce
    rows = m.copy_rows()
    nr, nc = m.nrows, m.ncols
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        sel = next((i for i in range(r, nr) if rows[i][c] != z), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = f.inv(rows[r][c])
        if inv != f.one:
            rows[r] = [red(inv * x) for x in rows[r]]
        prow = rows[r]
        for i in range(nr):
            if i != r:
                d = rows[i][c]
                if d != z:
                    rows[i] = [red(a - d * b) for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return Mat(f, rows), pivots, len(pivots)


def rank(m: Mat) -> int:
    return rref(m)[2]


def kernel_basis(m: Mat) -> Mat:
    """Basis of the right null space, returned as the columns of a matrix
    with cols(m) rows and (cols - rank) columns."""
    f = m.field
    z, o = f.zero, f.one
    R, pivots, rk = rref(m)
    nc = m.ncols
    free = [j for j in range(nc) if j not in set(pivots)]
    cols = []
    for fd in free:
        v = [z] * nc
        v[fd] = o
        for i, pc in enumerate(pivots):
            c = R.rows[i][fd]
            if c != z:
                v[pc] = f.neg(c)
        cols.append(v)
    if not cols:
        return Mat.zeros(f, nc, 0)
    return Mat(f, [[col[i] for col in cols] for i in range(nc)])


def solve(a: Mat, b: Mat) -> Optional[Mat]:
    """One solution x of a·x = b (columnwise), or None if inconsistent."""
    if a.nrows != b.nrows:
        raise ValueError("solve: row count mismatch")
    f = a.field
    z = f.zero
    aug = Mat.hstack(f, [a, b])
    R, pivots, _ = rref(aug)
    na = a.ncols
    if any(p >= na for p in pivots):
        return None
    x = Mat.zeros(f, na, b.ncols)
    for i, pc in enumerate(pivots):
        x.rows[pc] = [R.rows[i][na + j] for j in range(b.ncols)]
    return x


def vec_is_zero(field: Field, vec: Sequence) -> bool:
    z = field.zero
    return all(x == z for x in vec)


def vec_add(field: Field, u: Sequence, v: Sequence) -> list:
    red = field.reduce
    return [red(a + b) for a, b in zip(u, v)]


def vec_sub(field: Field, u: Sequence, v: Sequence) -> list:
    red = field.reduce
    return [red(a - b) for a, b in zip(u, v)]


def vec_scale(field: Field, c, v: Sequence) -> list:
    red = field.reduce
    return [red(c * x) for x in v]


def unit_vec(field: Field, n: int, i: int) -> list:
    v = [field.zero] * n
    v[i] = field.one
    return v


# ---------------------------------------------------------------------------
# Subspaces and quotients (shared plumbing for submodules / quotient modules)
# ---------------------------------------------------------------------------


class Subspace:
    """A subspace of F^n with an RREF basis; converts between ambient
    coordinates and internal coordinates."""

    def __init__(self, field: Field, ambient_dim: int, spanning: Iterable[Sequence] = ()):
        self.space = RowSpace(field, ambient_dim)
        self.space.extend(spanning)

    @property
    def field(self) -> Field:
        return self.space.field

    @property
    def ambient_dim(self) -> int:
        return self.space.n

    @property
    def dim(self) -> int:
        return self.space.dim

    def basis_rows(self) -> list[list]:
        return [row[:] for row in self.space.rows]

    def embed(self, coords: Sequence) -> list:
        """Internal coordinates -> ambient vector."""
        f = self.field
        z = f.zero
        red = f.reduce
        v = [z] * self.ambient_dim
        for c, row in zip(coords, self.space.rows):
            if c != z:
                for k in range(self.ambient_dim):
                    if row[k] != z:
                        v[k] = red(v[k] + c * row[k])
        return v

    def coords_of(self, vec: Sequence) -> list:
        c = self.space.coords_of(vec)
        if c is None:
            raise ValueError("vector not in subspace")
        return c

    def contains(self, vec: Sequence) -> bool:
        return self.space.contains(vec)


class QuotientSpace:
    """F^n modulo a subspace.  The quotient basis is the image of the unit
    vectors at the RREF-free coordinates of the subspace."""

    def __init__(self, field: Field, ambient_dim: int, denominator: Iterable[Sequence] = ()):
        self.space = RowSpace(field, ambient_dim)
        self.space.extend(denominator)
        self.free = self.space.free_coordinates()
        self._index = {j: t for t, j in enumerate(self.free)}

    @property
    def field(self) -> Field:
        return self.space.field

    @property
    def ambient_dim(self) -> int:
        return self.space.n

    @property
    def dim(self) -> int:
        return len(self.free)

    def project(self, vec: Sequence) -> list:
        res = self.space.reduce_vec(vec)
        return [res[j] for j in self.free]

    def lift(self, coords: Sequence) -> list:
        """Canonical ambient representative of a quotient vector."""
        f = self.field
        v = [f.zero] * self.ambient_dim
        for c, j in zip(coords, self.free):
            v[j] = c
        return v
