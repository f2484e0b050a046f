"""Minimal projective resolutions, syzygies, projective dimension, Tor, Ext.

Resolutions grow lazily and cache on the module, so repeated queries with a
larger cutoff extend rather than recompute.  Every term is a tagged sum of
standard projectives A e_u, which turns the functors into weight-space
transport: tensoring against A e_u is the right weight space M e_u, homming
out of A e_u is the left weight space e_u N, and the differentials act
through their generator images.  No generic linear solve appears anywhere in
Tor or Ext.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .algebra import AlgebraTable, opposite
from .errors import AlgebraMismatch
from .exact import Mat, rref
from .fdmod import (FDModule, ModuleHom, _infer_over, _left_structure,
                    _right_structure, kernel_of, projective_cover,
                    weight_space, zero_module)
from .verdict import Verdict, certified, inconclusive


@dataclass
class Resolution:
    """Front of a minimal projective resolution ... -> P_1 -> P_0 -> m -> 0.

    diffs[0] is the cover P_0 -> m; diffs[i] maps P_i -> P_{i-1}.
    syzygies[i] is the kernel of diffs[i] (the (i+1)-st syzygy).
    complete means the last syzygy is zero, so the resolution stops.
    """

    target: FDModule
    terms: list
    diffs: list
    syzygies: list
    complete: bool
    minimal: bool = True

    @property
    def truncated_at(self) -> int:
        return len(self.terms) - 1

    def term_dims(self) -> list:
        return [t.dim for t in self.terms]


def _res_state(m: FDModule) -> dict:
    state = m._cache.get("minres")
    if state is None:
        state = {"terms": [], "diffs": [], "syz": [], "incl": [],
                 "complete": m.dim == 0}
        m._cache["minres"] = state
    return state


def minimal_resolution(m: FDModule, cutoff: int = 32) -> Resolution:
    """Extend the cached minimal resolution until complete or until terms
    P_0 .. P_cutoff exist."""
    state = _res_state(m)
    while not state["complete"] and len(state["terms"]) <= cutoff:
        if not state["terms"]:
            source = m
        else:
            source = state["syz"][-1]
        p, cover = projective_cover(source)
        if state["terms"]:
            cover = ModuleHom(p, state["terms"][-1],
                              state["incl"][-1].matrix.mul(cover.matrix))
        state["terms"].append(p)
        state["diffs"].append(cover)
        ker, incl = kernel_of(cover)
        state["syz"].append(ker)
        state["incl"].append(incl)
        if ker.dim == 0:
            state["complete"] = True
    return Resolution(m, list(state["terms"]), list(state["diffs"]),
                      list(state["syz"]), state["complete"])


def syzygy(m: FDModule, n: int, cutoff: int = 32) -> FDModule:
    """The n-th syzygy from the cached minimal resolution; syzygy(m, 0) = m."""
    if n < 0:
        raise ValueError("syzygy index must be nonnegative")
    if n == 0:
        return m
    if m.dim == 0:
        return m
    res = minimal_resolution(m, cutoff=max(n - 1, 0))
    if n - 1 < len(res.syzygies):
        return res.syzygies[n - 1]
    if res.complete:
        return zero_module(m.algebra)
    raise ValueError(f"resolution cutoff {cutoff} too small for syzygy {n}")


def projective_dimension(m: FDModule, cutoff: int = 32) -> Verdict:
    """Certified(value=pd) when the minimal resolution terminates within the
    cutoff; Inconclusive otherwise; never Refuted.  pd(0) = -1."""
    if m.dim == 0:
        return certified(value=-1)
    res = minimal_resolution(m, cutoff)
    if res.complete:
        return certified(value=len(res.terms) - 1,
                         term_dims=res.term_dims())
    return inconclusive(resolved_through=res.truncated_at,
                        last_syzygy_dim=res.syzygies[-1].dim,
                        term_dims=res.term_dims())


# ---------------------------------------------------------------------------
# Dimension sequences with a certified trust window
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DimSeq:
    """Requested homology dimensions plus how far they can be trusted.

    values maps each requested degree to its dimension, or to None when the
    resolution was truncated before that degree became certain.  complete
    resolutions certify every degree (zero beyond the last term)."""

    kind: str
    values: tuple
    trusted_through: Optional[int]
    complete: bool

    def get(self, i: int) -> Optional[int]:
        for d, v in self.values:
            if d == i:
                return v
        raise KeyError(f"degree {i} was not requested")

    def trusted(self, i: int) -> bool:
        return self.complete or (self.trusted_through is not None
                                 and i <= self.trusted_through)

    def all_trusted(self) -> bool:
        return all(self.trusted(d) for d, _ in self.values)

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "values": {str(d): v for d, v in self.values},
                "trusted_through": self.trusted_through,
                "complete": self.complete}


def _normalize_degrees(degrees: Union[int, Sequence[int]]) -> list:
    if isinstance(degrees, int):
        ds = list(range(degrees + 1))
    else:
        ds = sorted(set(int(d) for d in degrees))
    if ds and ds[0] < 0:
        raise ValueError("homological degrees are nonnegative")
    return ds


def _any_right_action(m: FDModule, a: AlgebraTable):
    """Resolver for a right a-action on m, seeing through both tensor
    factors: a left X-action is canonically a right opposite(X)-action."""
    alg = m.algebra
    cands = []
    if alg is opposite(a):
        cands.append(m.action_of)
    if alg.kind == "tensor":
        x, z = alg.factors
        if z is opposite(a):
            cands.append(_right_structure(m)[1])
        if x is opposite(a):
            cands.append(_left_structure(m)[1])
    if len(cands) > 1:
        raise AlgebraMismatch("ambiguous right action; restrict explicitly")
    return cands[0] if cands else None


def _any_left_action(m: FDModule, a: AlgebraTable):
    alg = m.algebra
    cands = []
    if alg is a:
        cands.append(m.action_of)
    if alg.kind == "tensor":
        x, z = alg.factors
        if x is a:
            cands.append(_left_structure(m)[1])
        if z is a:
            cands.append(_right_structure(m)[1])
    if len(cands) > 1:
        raise AlgebraMismatch("ambiguous left action; restrict explicitly")
    return cands[0] if cands else None


def _restrict_right(m: FDModule, a: AlgebraTable) -> FDModule:
    """m with only its right a-action kept, as a left opposite(a)-module."""
    if m.algebra is opposite(a):
        return m
    key = ("as_right", a.serial)
    got = m._cache.get(key)
    if got is None:
        act = _any_right_action(m, a)
        if act is None:
            raise AlgebraMismatch("module carries no right action of the base")
        mats = [act(a.basis_vec(j)) for j in range(a.dim)]
        got = FDModule(opposite(a), mats, name=(m.name or "m") + "|r",
                       check=False)
        m._cache[key] = got
    return got


def _restrict_left(m: FDModule, a: AlgebraTable) -> FDModule:
    """m with only its left a-action kept."""
    if m.algebra is a:
        return m
    key = ("as_left", a.serial)
    got = m._cache.get(key)
    if got is None:
        act = _any_left_action(m, a)
        if act is None:
            raise AlgebraMismatch("module carries no left action of the base")
        mats = [act(a.basis_vec(j)) for j in range(a.dim)]
        got = FDModule(a, mats, name=(m.name or "m") + "|l", check=False)
        m._cache[key] = got
    return got


def _block_gen_images(diff: ModuleHom, source_tag, target_tag):
    """Per source summand t: the differential image of its generator,
    split into (target summand s, local coefficient list) pieces."""
    out = []
    for t in range(len(source_tag.summands)):
        col = diff.matrix.col(source_tag.gens[t])
        pieces = []
        for s in range(len(target_tag.summands)):
            off = target_tag.offsets[s]
            blist = target_tag.basis_lists[s]
            coeffs = col[off:off + len(blist)]
            pieces.append((s, blist, coeffs))
        out.append(pieces)
    return out


def tor(m: FDModule, n: FDModule, degrees: Union[int, Sequence[int]],
        over: Optional[AlgebraTable] = None, cutoff: int = 32,
        resolve_first: bool = False) -> DimSeq:
    """Tor_i^a(m, n): m a right a-module, n a left a-module (bimodules are
    restricted).  Resolves n by default; resolve_first=True resolves m
    instead, which computes the same groups through the opposite algebra."""
    a = over if over is not None else _infer_over(m, n)
    if resolve_first:
        return tor(n, m, degrees, over=opposite(a), cutoff=cutoff)
    mr = _restrict_right(m, a)
    nl = _restrict_left(n, a)
    ds = _normalize_degrees(degrees)
    if not ds:
        return DimSeq("tor", (), None, True)
    if mr.dim == 0 or nl.dim == 0:
        return DimSeq("tor", tuple((d, 0) for d in ds), None, True)
    need = ds[-1] + 1
    res = minimal_resolution(nl, cutoff=min(need, cutoff))
    f = a.field
    top = len(res.terms) - 1

    wspaces = {}

    def wspace(u):
        if u not in wspaces:
            wspaces[u] = weight_space(mr, u)
        return wspaces[u]

    cdims = [sum(wspace(u).dim for u in term.tag.summands)
             for term in res.terms]

    ranks = {0: 0}
    for i in range(1, top + 1):
        tag_s, tag_t = res.terms[i].tag, res.terms[i - 1].tag
        gens = _block_gen_images(res.diffs[i], tag_s, tag_t)
        rows_dim = cdims[i - 1]
        offs_t = []
        acc = 0
        for u in tag_t.summands:
            offs_t.append(acc)
            acc += wspace(u).dim
        cols = []
        for t, u_t in enumerate(tag_s.summands):
            wu = wspace(u_t)
            for b in wu.basis_rows():
                col = [f.zero] * rows_dim
                for s, blist, coeffs in gens[t]:
                    v_s = tag_t.summands[s]
                    wv = wspace(v_s)
                    if wv.dim == 0:
                        continue
                    amb = [f.zero] * mr.dim
                    for k, bi in enumerate(blist):
                        c = coeffs[k]
                        if c == f.zero:
                            continue
                        img = mr.mats[bi].apply(b)
                        for r in range(mr.dim):
                            if img[r] != f.zero:
                                amb[r] = amb[r] + c * img[r]
                    amb = [f.reduce(x) for x in amb]
                    for p, cp in enumerate(wv.coords_of(amb)):
                        if cp != f.zero:
                            col[offs_t[s] + p] = f.reduce(
                                col[offs_t[s] + p] + cp)
                cols.append(col)
        if rows_dim == 0 or not cols:
            ranks[i] = 0
        else:
            mat = Mat(f, [[cols[c][r] for c in range(len(cols))]
                          for r in range(rows_dim)])
            _, _, rk = rref(mat)
            ranks[i] = rk
    return _assemble_dimseq("tor", ds, cdims, ranks, res.complete, top)


def ext(m: FDModule, n: FDModule, degrees: Union[int, Sequence[int]],
        over: Optional[AlgebraTable] = None, cutoff: int = 32) -> DimSeq:
    """Ext^i_a(m, n) for left a-modules, resolving m."""
    a = over if over is not None else m.algebra
    ml = _restrict_left(m, a)
    nl = _restrict_left(n, a)
    ds = _normalize_degrees(degrees)
    if not ds:
        return DimSeq("ext", (), None, True)
    if ml.dim == 0 or nl.dim == 0:
        return DimSeq("ext", tuple((d, 0) for d in ds), None, True)
    need = ds[-1] + 1
    res = minimal_resolution(ml, cutoff=min(need, cutoff))
    f = a.field
    top = len(res.terms) - 1

    wspaces = {}

    def wspace(u):
        if u not in wspaces:
            wspaces[u] = weight_space(nl, u)
        return wspaces[u]

    cdims = [sum(wspace(u).dim for u in term.tag.summands)
             for term in res.terms]

    ranks = {0: 0}
    for i in range(1, top + 1):
        tag_s, tag_t = res.terms[i].tag, res.terms[i - 1].tag
        gens = _block_gen_images(res.diffs[i], tag_s, tag_t)
        # delta^i : C^{i-1} -> C^i, rows indexed by source-of-d summands
        rows_dim = cdims[i]
        offs_rows = []
        acc = 0
        for u in tag_s.summands:
            offs_rows.append(acc)
            acc += wspace(u).dim
        offs_cols = []
        acc = 0
        for u in tag_t.summands:
            offs_cols.append(acc)
            acc += wspace(u).dim
        cols_dim = cdims[i - 1]
        cols = []
        for s, v_s in enumerate(tag_t.summands):
            wv = wspace(v_s)
            for y in wv.basis_rows():
                col = [f.zero] * rows_dim
                for t, u_t in enumerate(tag_s.summands):
                    wu = wspace(u_t)
                    if wu.dim == 0:
                        continue
                    _, blist, coeffs = gens[t][s]
                    amb = [f.zero] * nl.dim
                    hitting = False
                    for k, bi in enumerate(blist):
                        c = coeffs[k]
                        if c == f.zero:
                            continue
                        hitting = True
                        img = nl.mats[bi].apply(y)
                        for r in range(nl.dim):
                            if img[r] != f.zero:
                                amb[r] = amb[r] + c * img[r]
                    if not hitting:
                        continue
                    amb = [f.reduce(x) for x in amb]
                    for p, cp in enumerate(wu.coords_of(amb)):
                        if cp != f.zero:
                            col[offs_rows[t] + p] = f.reduce(
                                col[offs_rows[t] + p] + cp)
                cols.append(col)
        assert len(cols) == cols_dim
        if rows_dim == 0 or not cols:
            ranks[i] = 0
        else:
            mat = Mat(f, [[cols[c][r] for c in range(len(cols))]
                          for r in range(rows_dim)])
            _, _, rk = rref(mat)
            ranks[i] = rk
    return _assemble_dimseq("ext", ds, cdims, ranks, res.complete, top)


def _assemble_dimseq(kind: str, ds: list, cdims: list, ranks: dict,
                     complete: bool, top: int) -> DimSeq:
    values = []
    for d in ds:
        if d > top:
            values.append((d, 0 if complete else None))
            continue
        r_in = ranks.get(d, 0)
        if d + 1 <= top:
            r_out = ranks[d + 1]
        elif complete:
            r_out = 0
        else:
            values.append((d, None))
            continue
        values.append((d, cdims[d] - r_in - r_out))
    trusted = None if complete else top - 1
    return DimSeq(kind, tuple(values), trusted, complete)
