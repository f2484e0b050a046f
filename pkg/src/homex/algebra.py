"""Finite-dimensional unital algebras as structure-constant tables.

Tables are built from quiver presentations with length-homogeneous
relations, or derived from existing tables (opposite, tensor product,
direct product, enveloping algebra).  Every table carries its primitive
orthogonal idempotents and a radical basis as data; the constructors
propagate both by closed formulas, so no radical algorithm runs in
positive characteristic.

Only elementary algebras appear here (every simple is one-dimensional).
All constructors preserve that property.

Path composition is right-to-left: multiply(x, y) applies y first, so the
product of arrows written b*a is the path that traverses a, then b.
Internally a path is the tuple of its arrows in traversal order.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import AlgebraMismatch, NonAdmissible
from .exact import Field, Mat, QQ, RowSpace, kernel_basis

# sparse row: tuple of (basis index, coefficient), indices strictly increasing
SparseRow = tuple

MAX_PATHS_PER_DEGREE = 100_000
FULL_ASSOC_DIM = 48          # full basis-triple associativity check up to here
SAMPLED_ASSOC_TRIPLES = 1500


# ---------------------------------------------------------------------------
# Quivers and presentations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Quiver:
    """vertices: label tuple; arrows: (name, source, target) triples."""

    vertices: tuple
    arrows: tuple

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        if set(names) & set(self.vertices):
            raise ValueError("arrow names must differ from vertex labels")
        vs = set(self.vertices)
        for name, s, t in self.arrows:
            if s not in vs or t not in vs:
                raise ValueError(f"arrow {name}: undeclared endpoint")

    def vertex_index(self, v) -> int:
        return self.vertices.index(v)

    def arrow_index(self, name) -> int:
        for i, a in enumerate(self.arrows):
            if a[0] == name:
                return i
        raise KeyError(name)


def _path_endpoints(q: Quiver, path: tuple) -> tuple:
    """(source, target) of a traversal-ordered arrow-name tuple; raises on a
    non-composable sequence."""
    by_name = {a[0]: a for a in q.arrows}
    src = None
    prev_target = None
    for name in path:
        if name not in by_name:
            raise NonAdmissible(f"unknown arrow {name!r} in relation path")
        _, s, t = by_name[name]
        if src is None:
            src = s
        elif s != prev_target:
            raise NonAdmissible(f"non-composable path {'*'.join(reversed(path))}")
        prev_target = t
    return src, prev_target


@dataclass(frozen=True)
class Presentation:
    """A quiver plus length-homogeneous parallel relations.

    Each relation is a tuple of (coefficient, path) terms; a path is the
    tuple of arrow names in traversal order (so the displayed product b*a
    is stored as ("a", "b")).  All paths inside one relation must share
    length >= 2, source, and target.
    """

    quiver: Quiver
    relations: tuple = ()

    def __post_init__(self):
        for idx, rel in enumerate(self.relations):
            if not rel:
                raise NonAdmissible(f"relation #{idx + 1} is empty")
            shape = None
            for coeff, path in rel:
                if len(path) < 2:
                    raise NonAdmissible(
                        f"relation #{idx + 1}: path of length {len(path)} < 2")
                src, tgt = _path_endpoints(self.quiver, tuple(path))
                this = (len(path), src, tgt)
                if shape is None:
                    shape = this
                elif this != shape:
                    raise NonAdmissible(
                        f"relation #{idx + 1} is not homogeneous: "
                        f"mixes (length, source, target) {shape} with {this}")


# ---------------------------------------------------------------------------
# The table
# ---------------------------------------------------------------------------


class AlgebraTable:
    """Unital associative algebra by structure constants.

    mult[i][j] is the sparse expansion of basis_i * basis_j.  idempotents
    are a complete set of primitive orthogonal idempotents; radical_rows
    spans the Jacobson radical.  peirce[i], when present, is the pair
    (l, r) of idempotent positions with e_l * b_i * e_r = b_i; every
    constructor in this package produces such a homogeneous basis.
    """

    _serials = itertools.count(1)

    __slots__ = (
        "field", "dim", "labels", "mult", "unit", "idempotents",
        "radical_rows", "peirce", "name", "kind", "factors", "presentation",
        "basis_paths", "basis_vertex", "serial", "gen_indices",
        "idempotent_positions", "rad_basis_indices",
        "_ops", "_mods", "_left_mats", "_right_mats", "_rad_space",
        "_label_index",
    )

    def __init__(self, field: Field, labels: Sequence[str], mult,
                 unit: Sequence, idempotents: Sequence[Sequence],
                 radical_rows: Sequence[Sequence], *,
                 peirce: Optional[list] = None, name: str = "",
                 kind: str = "raw", factors: Optional[tuple] = None,
                 presentation: Optional[Presentation] = None,
                 basis_paths: Optional[list] = None,
                 basis_vertex: Optional[list] = None,
                 gen_indices: Optional[list] = None,
                 check: bool = True):
        self.field = field
        self.labels = list(labels)
        self.dim = len(self.labels)
        if len(set(self.labels)) != self.dim:
            raise ValueError("duplicate basis labels")
        self.mult = [[tuple(cell) for cell in row] for row in mult]
        if len(self.mult) != self.dim or any(len(r) != self.dim for r in self.mult):
            raise ValueError("mult table shape mismatch")
        self.unit = list(unit)
        if len(self.unit) != self.dim:
            raise ValueError("unit vector length mismatch")
        self.idempotents = [list(e) for e in idempotents]
        self.radical_rows = [list(r) for r in radical_rows]
        self.peirce = list(peirce) if peirce is not None else None
        self.name = name
        self.kind = kind
        self.factors = factors
        self.presentation = presentation
        self.basis_paths = basis_paths
        self.basis_vertex = basis_vertex
        self.serial = next(AlgebraTable._serials)
        # basis positions whose span generates the algebra (with the unit);
        # module machinery only imposes constraints at these indices
        self.gen_indices = (list(gen_indices) if gen_indices is not None
                            else list(range(self.dim)))
        # positions of idempotents that sit at a single basis coordinate
        pos = []
        for e in self.idempotents:
            nz = [i for i, c in enumerate(e) if c != field.zero]
            if len(nz) == 1 and e[nz[0]] == field.one:
                pos.append(nz[0])
            else:
                pos = None
                break
        self.idempotent_positions = pos
        # when the radical is a coordinate subspace, remember which coordinates
        idx = []
        for r in self.radical_rows:
            nz = [i for i, c in enumerate(r) if c != field.zero]
            if len(nz) == 1 and r[nz[0]] == field.one:
                idx.append(nz[0])
            else:
                idx = None
                break
        self.rad_basis_indices = sorted(idx) if idx is not None else None
        self._ops: dict = {}
        self._mods: dict = {}
        self._left_mats: dict = {}
        self._right_mats: dict = {}
        self._rad_space: Optional[RowSpace] = None
        self._label_index: Optional[dict] = None
        if check:
            self._structural_check()

    # -- basic vector helpers -------------------------------------------

    def zero_vec(self) -> list:
        return [self.field.zero] * self.dim

    def basis_vec(self, i: int) -> list:
        v = self.zero_vec()
        v[i] = self.field.one
        return v

    def label_index(self, label: str) -> int:
        if self._label_index is None:
            self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        return self._label_index[label]

    def mult_vector(self, i: int, j: int) -> list:
        v = self.zero_vec()
        for k, c in self.mult[i][j]:
            v[k] = c
        return v

    def mul(self, x: Sequence, y: Sequence) -> list:
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("coefficient vector length mismatch")
        f = self.field
        z = f.zero
        out = [z] * self.dim
        for i, xi in enumerate(x):
            if xi == z:
                continue
            row_i = self.mult[i]
            for j, yj in enumerate(y):
                if yj == z:
                    continue
                c = xi * yj
                for k, s in row_i[j]:
                    out[k] = out[k] + c * s
        red = f.reduce
        return [red(t) for t in out]

    def left_mult_matrix(self, i: int) -> Mat:
        """Matrix of x -> b_i * x in the basis (column j is b_i * b_j)."""
        m = self._left_mats.get(i)
        if m is None:
            z = self.field.zero
            rows = [[z] * self.dim for _ in range(self.dim)]
            for j in range(self.dim):
                for k, c in self.mult[i][j]:
                    rows[k][j] = c
            m = Mat(self.field, rows)
            self._left_mats[i] = m
        return m

    def right_mult_matrix(self, j: int) -> Mat:
        """Matrix of x -> x * b_j in the basis (column i is b_i * b_j)."""
        m = self._right_mats.get(j)
        if m is None:
            z = self.field.zero
            rows = [[z] * self.dim for _ in range(self.dim)]
            for i in range(self.dim):
                for k, c in self.mult[i][j]:
                    rows[k][i] = c
            m = Mat(self.field, rows)
            self._right_mats[j] = m
        return m

    def rad_space(self) -> RowSpace:
        if self._rad_space is None:
            rs = RowSpace(self.field, self.dim)
            rs.extend(self.radical_rows)
            self._rad_space = rs
        return self._rad_space

    def in_radical(self, vec: Sequence) -> bool:
        return self.rad_space().contains(vec)

    # -- construction-time checks ---------------------------------------

    def _structural_check(self):
        f = self.field
        z = f.zero
        # unit is two-sided identity
        for i in range(self.dim):
            if self.mul(self.unit, self.basis_vec(i)) != self.basis_vec(i):
                raise ValueError(f"unit fails on the left of basis {self.labels[i]}")
            if self.mul(self.basis_vec(i), self.unit) != self.basis_vec(i):
                raise ValueError(f"unit fails on the right of basis {self.labels[i]}")
        # idempotent system
        n = len(self.idempotents)
        for i in range(n):
            for j in range(n):
                prod = self.mul(self.idempotents[i], self.idempotents[j])
                want = self.idempotents[i] if i == j else self.zero_vec()
                if prod != [f.reduce(c) for c in want]:
                    raise ValueError(f"idempotents {i}, {j} fail orthogonality")
        total = self.zero_vec()
        for e in self.idempotents:
            total = [f.reduce(a + b) for a, b in zip(total, e)]
        if total != [f.reduce(c) for c in self.unit]:
            raise ValueError("idempotents do not sum to the unit")
        # peirce homogeneity claims
        if self.peirce is not None:
            for i, (li, ri) in enumerate(self.peirce):
                bi = self.basis_vec(i)
                if self.mul(self.idempotents[li], bi) != bi:
                    raise ValueError(f"peirce left index wrong at basis {i}")
                if self.mul(bi, self.idempotents[ri]) != bi:
                    raise ValueError(f"peirce right index wrong at basis {i}")
        # associativity: complete at small dim, sampled above
        if self.dim <= FULL_ASSOC_DIM:
            triples = itertools.product(range(self.dim), repeat=3)
        else:
            rng = random.Random(0xA550C + self.dim)
            triples = (tuple(rng.randrange(self.dim) for _ in range(3))
                       for _ in range(SAMPLED_ASSOC_TRIPLES))
        for i, j, k in triples:
            if not self._assoc_ok(i, j, k):
                raise ValueError(
                    f"associativity fails at basis triple "
                    f"({self.labels[i]}, {self.labels[j]}, {self.labels[k]})")

    def _assoc_ok(self, i: int, j: int, k: int) -> bool:
        f = self.field
        z = f.zero
        left: dict = {}
        for m, c in self.mult[i][j]:
            for n, d in self.mult[m][k]:
                left[n] = left.get(n, z) + c * d
        right: dict = {}
        for m, c in self.mult[j][k]:
            for n, d in self.mult[i][m]:
                right[n] = right.get(n, z) + c * d
        keys = set(left) | set(right)
        red = f.reduce
        return all(red(left.get(n, z) - right.get(n, z)) == z for n in keys)

    def __repr__(self):
        nm = self.name or "algebra"
        return f"<{nm}: dim {self.dim} over {self.field}>"


# ---------------------------------------------------------------------------
# Path algebra modulo a homogeneous admissible ideal
# ---------------------------------------------------------------------------


class _Degree:
    """Paths of one length, the ideal component inside them, and the free
    (surviving) paths that become basis elements."""

    __slots__ = ("paths", "index", "ideal", "free_global", "free_local")

    def __init__(self, paths, index, ideal, free_global, free_local):
        self.paths = paths              # list of arrow-index tuples
        self.index = index              # path tuple -> local position
        self.ideal = ideal              # RowSpace over the local coordinates
        self.free_global = free_global  # local free position -> basis index
        self.free_local = free_local    # list of local free positions


def from_presentation(p: Presentation, field: Field = QQ,
                      max_degree: int = 64, name: str = "") -> AlgebraTable:
    """Build the table of the (admissible, length-homogeneous) quotient.

    Basis: trivial paths, then the surviving paths degree by degree; the
    degreewise quotient is computed by row reduction against the graded
    ideal component.  Stops at the first vanishing component (all higher
    ones vanish too); raises NonAdmissible at max_degree otherwise.
    """
    q = p.quiver
    nv = len(q.vertices)
    arrows = q.arrows
    na = len(arrows)
    asrc = [q.vertex_index(a[1]) for a in arrows]
    atgt = [q.vertex_index(a[2]) for a in arrows]

    # relations, grouped by length, as (coeff, arrow-index tuple)
    rel_by_len: dict = {}
    for rel in p.relations:
        terms = [(field.scalar(c), tuple(q.arrow_index(nm) for nm in path))
                 for c, path in rel]
        rel_by_len.setdefault(len(terms[0][1]), []).append(terms)

    labels = [f"e_{v}" for v in q.vertices]
    basis_paths: list = [() for _ in range(nv)]
    basis_vertex: list = list(range(nv))
    peirce = [(v, v) for v in range(nv)]
    degrees: dict = {}

    # complete path lists per degree: normal forms must be able to reduce a
    # product whose concatenation is any composable path, not only survivors
    prev_paths = [((), v) for v in range(nv)]  # (arrow tuple, target) at deg 0
    deg = 0
    while True:
        deg += 1
        if deg > max_degree:
            raise NonAdmissible(
                f"graded components still nonzero at degree {max_degree}; "
                f"the ideal is not admissible within the cap")
        paths = []
        for pt, tgt in prev_paths:
            for ai in range(na):
                if asrc[ai] == tgt:
                    paths.append((pt + (ai,), atgt[ai]))
        if len(paths) > MAX_PATHS_PER_DEGREE:
            raise NonAdmissible(
                f"path count {len(paths)} at degree {deg} exceeds the safety bound")
        if not paths:
            break
        index = {pt: i for i, (pt, _) in enumerate(paths)}
        ideal = RowSpace(field, len(paths))
        # ideal component: arrow extensions of the previous component ...
        if deg - 1 in degrees:
            prev = degrees[deg - 1]
            for row in prev.ideal.rows:
                for ai in range(na):
                    late = [field.zero] * len(paths)
                    early = [field.zero] * len(paths)
                    any_late = any_early = False
                    for loc, c in enumerate(row):
                        if c == field.zero:
                            continue
                        pt = prev.paths[loc]
                        if atgt[pt[-1]] == asrc[ai]:     # traverse arrow after
                            late[index[pt + (ai,)]] = c
                            any_late = True
                        if atgt[ai] == asrc[pt[0]]:      # traverse arrow before
                            early[index[(ai,) + pt]] = c
                            any_early = True
                    if any_late:
                        ideal.add(late)
                    if any_early:
                        ideal.add(early)
        # ... plus the relations living in exactly this degree
        for terms in rel_by_len.get(deg, ()):
            vec = [field.zero] * len(paths)
            for c, pt in terms:
                vec[index[pt]] = field.reduce(vec[index[pt]] + c)
            ideal.add(vec)

        free_local = ideal.free_coordinates()
        free_global = {}
        for loc in free_local:
            pt = paths[loc][0]
            free_global[loc] = len(labels)
            labels.append("*".join(arrows[ai][0] for ai in reversed(pt)))
            basis_paths.append(pt)
            basis_vertex.append(None)
            peirce.append((atgt[pt[-1]], asrc[pt[0]]))
        degrees[deg] = _Degree([pt for pt, _ in paths], index, ideal,
                               free_global, free_local)
        if not free_local:
            break
        prev_paths = paths

    dim = len(labels)
    top_degree = max((d for d, dd in degrees.items() if dd.free_local), default=0)

    nf_cache: dict = {}

    def normal_form(pt: tuple) -> tuple:
        """Sparse expansion of a composable path in the surviving basis."""
        l = len(pt)
        if l > top_degree or l not in degrees:
            return ()
        got = nf_cache.get(pt)
        if got is not None:
            return got
        dd = degrees[l]
        loc = dd.index[pt]
        vec = [field.zero] * len(dd.paths)
        vec[loc] = field.one
        res = dd.ideal.reduce_vec(vec)
        out = tuple((dd.free_global[j], res[j]) for j in dd.free_local
                    if res[j] != field.zero)
        nf_cache[pt] = out
        return out

    mult = [[() for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        pi = basis_paths[i]
        li, ri = peirce[i]
        for j in range(dim):
            pj = basis_paths[j]
            lj, rj = peirce[j]
            # product b_i * b_j traverses b_j first: need target(j) = source(i)
            if ri != lj:
                continue
            if not pi:
                mult[i][j] = ((j, field.one),)
            elif not pj:
                mult[i][j] = ((i, field.one),)
            else:
                mult[i][j] = normal_form(pj + pi)

    unit = [field.zero] * dim
    for v in range(nv):
        unit[v] = field.one
    idempotents = [[field.one if t == v else field.zero for t in range(dim)]
                   for v in range(nv)]
    radical_rows = [[field.one if t == i else field.zero for t in range(dim)]
                    for i in range(nv, dim)]

    gen_indices = list(range(nv)) + [i for i in range(dim)
                                     if len(basis_paths[i]) == 1]
    return AlgebraTable(
        field, labels, mult, unit, idempotents, radical_rows,
        peirce=peirce, name=name or "kQ/I", kind="presentation",
        presentation=p, basis_paths=basis_paths, basis_vertex=basis_vertex,
        gen_indices=gen_indices, check=True)


# ---------------------------------------------------------------------------
# Derived tables
# ---------------------------------------------------------------------------


def opposite(a: AlgebraTable) -> AlgebraTable:
    """Same space, reversed multiplication; involutive via the cache."""
    got = a._ops.get("op")
    if got is not None:
        return got
    mult = [[a.mult[j][i] for j in range(a.dim)] for i in range(a.dim)]
    peirce = [(r, l) for l, r in a.peirce] if a.peirce is not None else None
    op = AlgebraTable(
        a.field, a.labels, mult, a.unit, a.idempotents, a.radical_rows,
        peirce=peirce, name=(a.name + "^op") if a.name else "op",
        kind="opposite", factors=(a,), gen_indices=a.gen_indices, check=False)
    a._ops["op"] = op
    op._ops["op"] = a
    return op


def tensor_algebra(a: AlgebraTable, b: AlgebraTable) -> AlgebraTable:
    """Componentwise product on the pair basis; index (i, j) -> i*dim_b + j."""
    if a.field != b.field:
        raise AlgebraMismatch(f"field mismatch: {a.field} vs {b.field}")
    key = ("tensor", b.serial)
    got = a._ops.get(key)
    if got is not None:
        return got
    f = a.field
    da, db = a.dim, b.dim
    dim = da * db
    labels = [f"{la}|{lb}" for la in a.labels for lb in b.labels]
    red = f.reduce
    mult = [[() for _ in range(dim)] for _ in range(dim)]
    for i1 in range(da):
        arow = a.mult[i1]
        for j1 in range(db):
            r1 = i1 * db + j1
            brow = b.mult[j1]
            mrow = mult[r1]
            for i2 in range(da):
                acell = arow[i2]
                if not acell:
                    continue
                for j2 in range(db):
                    bcell = brow[j2]
                    if not bcell:
                        continue
                    mrow[i2 * db + j2] = tuple(
                        (k1 * db + k2, red(c1 * c2))
                        for k1, c1 in acell for k2, c2 in bcell)

    def kron_vec(u, v):
        out = [f.zero] * dim
        for i, ui in enumerate(u):
            if ui == f.zero:
                continue
            base = i * db
            for j, vj in enumerate(v):
                if vj != f.zero:
                    out[base + j] = red(ui * vj)
        return out

    unit = kron_vec(a.unit, b.unit)
    idempotents = [kron_vec(ea, eb) for ea in a.idempotents for eb in b.idempotents]
    rad = RowSpace(f, dim)
    for r in a.radical_rows:
        for j in range(db):
            rad.add(kron_vec(r, b.basis_vec(j)))
    for i in range(da):
        bi = a.basis_vec(i)
        for r in b.radical_rows:
            rad.add(kron_vec(bi, r))
    peirce = None
    if a.peirce is not None and b.peirce is not None:
        nb = len(b.idempotents)
        peirce = [(la * nb + lb, ra * nb + rb)
                  for la, ra in a.peirce for lb, rb in b.peirce]
    gens = [i * db + j for i in a.gen_indices for j in b.gen_indices]
    t = AlgebraTable(
        f, labels, mult, unit, idempotents, [row[:] for row in rad.rows],
        peirce=peirce,
        name=f"{a.name or 'A'}(x){b.name or 'B'}",
        kind="tensor", factors=(a, b), gen_indices=gens, check=False)
    a._ops[key] = t
    return t


def enveloping(a: AlgebraTable) -> AlgebraTable:
    """a tensor opposite(a); left modules over it are a-a-bimodules."""
    got = a._ops.get("env")
    if got is not None:
        return got
    e = tensor_algebra(a, opposite(a))
    a._ops["env"] = e
    return e


def product_algebra(a: AlgebraTable, b: AlgebraTable) -> AlgebraTable:
    """Direct product, block diagonal on the concatenated bases."""
    if a.field != b.field:
        raise AlgebraMismatch(f"field mismatch: {a.field} vs {b.field}")
    key = ("product", b.serial)
    got = a._ops.get(key)
    if got is not None:
        return got
    f = a.field
    da, db = a.dim, b.dim
    dim = da + db
    labels = [f"{la}@1" for la in a.labels] + [f"{lb}@2" for lb in b.labels]
    mult = [[() for _ in range(dim)] for _ in range(dim)]
    for i in range(da):
        for j in range(da):
            mult[i][j] = a.mult[i][j]
    for i in range(db):
        for j in range(db):
            mult[da + i][da + j] = tuple((da + k, c) for k, c in b.mult[i][j])

    def pad_a(v):
        return list(v) + [f.zero] * db

    def pad_b(v):
        return [f.zero] * da + list(v)

    unit = pad_a(a.unit)
    for i, c in enumerate(b.unit):
        unit[da + i] = c
    idempotents = [pad_a(e) for e in a.idempotents] + [pad_b(e) for e in b.idempotents]
    radical_rows = [pad_a(r) for r in a.radical_rows] + [pad_b(r) for r in b.radical_rows]
    peirce = None
    if a.peirce is not None and b.peirce is not None:
        na = len(a.idempotents)
        peirce = list(a.peirce) + [(na + l, na + r) for l, r in b.peirce]
    gens = list(a.gen_indices) + [da + g for g in b.gen_indices]
    t = AlgebraTable(
        f, labels, mult, unit, idempotents, radical_rows, peirce=peirce,
        name=f"{a.name or 'A'}x{b.name or 'B'}",
        kind="product", factors=(a, b), gen_indices=gens, check=False)
    a._ops[key] = t
    return t


def multiply(a: AlgebraTable, x: Sequence, y: Sequence) -> list:
    """Bilinear extension of the structure constants to coefficient vectors."""
    return a.mul(x, y)


# ---------------------------------------------------------------------------
# Raw input and validation helpers
# ---------------------------------------------------------------------------


def table_from_constants(field: Field, labels, dense_mult, unit, idempotents,
                         radical_rows=None, name: str = "") -> AlgebraTable:
    """Build a table from dense structure constants.

    dense_mult[i][j] is the coefficient vector of basis_i * basis_j.  When
    radical_rows is omitted the radical is recovered from the trace form of
    the regular representation; that recovery is only valid over Q, so it
    is refused in positive characteristic.
    """
    dim = len(labels)
    mult = [[tuple((k, c) for k, c in enumerate(dense_mult[i][j]) if c != field.zero)
             for j in range(dim)] for i in range(dim)]
    if radical_rows is None:
        if field.char != 0:
            raise ValueError("radical basis required in positive characteristic")
        probe = AlgebraTable(field, labels, mult, unit, idempotents, [],
                             name=name, check=False)
        gram = [[None] * dim for _ in range(dim)]
        lmats = [probe.left_mult_matrix(i) for i in range(dim)]
        for i in range(dim):
            for j in range(dim):
                prod = lmats[i].mul(lmats[j])
                gram[i][j] = sum((prod.rows[k][k] for k in range(dim)),
                                 field.zero)
        ker = kernel_basis(Mat(field, gram))
        radical_rows = [ker.col(c) for c in range(ker.ncols)]
    t = AlgebraTable(field, labels, mult, unit, idempotents, radical_rows,
                     peirce=_infer_peirce(field, labels, mult, idempotents),
                     name=name, kind="raw", check=True)
    # elementary algebras only: the semisimple quotient must be k x ... x k
    if t.dim != len(t.idempotents) + t.rad_space().dim:
        raise ValueError("table is not elementary for the given idempotents")
    return t


def _infer_peirce(field, labels, mult, idempotents):
    dim = len(labels)

    def mul(x, y):
        z = field.zero
        out = [z] * dim
        for i, xi in enumerate(x):
            if xi == z:
                continue
            for j, yj in enumerate(y):
                if yj == z:
                    continue
                c = xi * yj
                for k, s in mult[i][j]:
                    out[k] = out[k] + c * s
        return [field.reduce(t) for t in out]

    peirce = []
    for i in range(dim):
        b = [field.zero] * dim
        b[i] = field.one
        left = [l for l, e in enumerate(idempotents) if mul(list(e), b) == b]
        right = [r for r, e in enumerate(idempotents) if mul(b, list(e)) == b]
        if len(left) != 1 or len(right) != 1:
            return None
        peirce.append((left[0], right[0]))
    return peirce


def validate_table(a: AlgebraTable, deep: bool = False) -> None:
    """Re-run the construction invariants; with deep=True also certify the
    radical (two-sided ideal, nilpotent, elementary quotient) and run the
    complete associativity check regardless of dimension."""
    a._structural_check()
    if not deep:
        return
    f = a.field
    for i, j, k in itertools.product(range(a.dim), repeat=3):
        if not a._assoc_ok(i, j, k):
            raise ValueError(f"associativity fails at triple ({i},{j},{k})")
    rs = a.rad_space()
    if rs.dim + len(a.idempotents) != a.dim:
        raise ValueError("radical codimension is not the idempotent count")
    for r in a.radical_rows:
        for i in range(a.dim):
            if not rs.contains(a.mul(a.basis_vec(i), r)):
                raise ValueError("radical is not a left ideal")
            if not rs.contains(a.mul(r, a.basis_vec(i))):
                raise ValueError("radical is not a right ideal")
    # nilpotency: multiply layers until they die
    layer = [row[:] for row in rs.rows]
    for _ in range(a.dim + 1):
        if not layer:
            return
        nxt = RowSpace(f, a.dim)
        for u in layer:
            for r in a.radical_rows:
                nxt.add(a.mul(u, r))
        layer = [row[:] for row in nxt.rows]
    raise ValueError("radical failed to vanish within dim steps")


def radical_layer_dims(a: AlgebraTable) -> list:
    """Dimensions of rad^n / rad^(n+1) for n = 0, 1, ... until zero."""
    f = a.field
    layers = []
    cur = a.rad_space()
    prev_dim = a.dim
    while True:
        layers.append(prev_dim - cur.dim)
        if cur.dim == 0:
            break
        prev_dim = cur.dim
        nxt = RowSpace(f, a.dim)
        for u in cur.rows:
            for r in a.radical_rows:
                nxt.add(a.mul(u, r))
        cur = nxt
    return layers
