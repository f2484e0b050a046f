"""Orthogonal-subcategory membership, Gorenstein projectivity, and
Morita-type-with-level certificate verification.

Everything here is a finite-bound test.  perp_check decides vanishing of
Ext^i(X, A) up to a bound and upgrades to a full certificate when the
resolution terminates or the regular module has small enough injective
dimension; gproj_check packages total reflexivity (both-sided vanishing
plus an invertible evaluation map X -> X**); gproj_perp_check is always
relative to an explicit testset, never to the whole subcategory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import AlgebraTable, opposite
from .config import Cutoffs, DEFAULT_CUTOFFS
from .errors import AlgebraMismatch, TestsetNotCertified
from .exact import Mat, Subspace, rref
from .fdmod import (FDModule, algebra_bimodule, dual_module, hom_space,
                    random_iso_test, regular_module,
                    strip_projective_summands, tensor_over)
from .homology import (_restrict_left, _restrict_right, ext,
                       projective_dimension, syzygy)
from .verdict import Verdict, certified, inconclusive, refuted


def _dual_regular(a: AlgebraTable) -> FDModule:
    """k-dual of the left regular module, a module over the opposite
    algebra; its projective dimension is the injective dimension of the
    regular module."""
    got = a._mods.get("dual_regular")
    if got is None:
        got = dual_module(regular_module(a))
        a._mods["dual_regular"] = got
    return got


def self_injective_dimension(a: AlgebraTable, side: str = "left",
                             cutoff: int = 32) -> Verdict:
    """Injective dimension of the regular module on the given side."""
    if side == "left":
        return projective_dimension(_dual_regular(a), cutoff=cutoff)
    if side == "right":
        return projective_dimension(_dual_regular(opposite(a)), cutoff=cutoff)
    raise ValueError("side must be 'left' or 'right'")


def hom_dual(x: FDModule) -> FDModule:
    """Hom(X, A) with its right A-action, packaged over opposite(A).

    The chosen basis is the row-reduced basis of the intertwiner space
    X -> A, so coordinates are deterministic for a fixed x.  The basis
    matrices and the flattened subspace are kept on the result for the
    evaluation-map construction."""
    got = x._cache.get("hom_dual")
    if got is not None:
        return got
    a = x.algebra
    f = a.field
    op = opposite(a)
    homs = hom_space(x, regular_module(a))
    amb = a.dim * x.dim
    sp = Subspace(f, amb, [sum(h.matrix.rows, []) for h in homs])
    k = sp.dim
    basis = [Mat(f, [row[i * x.dim:(i + 1) * x.dim] for i in range(a.dim)],
                 ncols=x.dim)
             for row in sp.basis_rows()]
    mats = []
    for i in range(a.dim):
        r = a.right_mult_matrix(i)
        cols = [sp.coords_of(sum(r.mul(hm).rows, [])) for hm in basis]
        mats.append(Mat(f, [[cols[c][q] for c in range(k)]
                            for q in range(k)], ncols=k))
    mod = FDModule(op, mats, name=(x.name or "X") + "*", check=True)
    mod._cache["hom_dual_basis"] = basis
    mod._cache["hom_dual_space"] = sp
    x._cache["hom_dual"] = mod
    return mod


def evaluation_check(x: FDModule) -> Verdict:
    """Certify that the evaluation map X -> X** is an isomorphism.

    The map sends v to 'evaluate at v'; its matrix is assembled in the
    deterministic bases of hom_dual and verified to intertwine the module
    actions before the rank test."""
    a = x.algebra
    f = a.field
    if x.dim == 0:
        return certified(note="zero module")
    xstar = hom_dual(x)
    xdd = hom_dual(xstar)
    star_basis = xstar._cache["hom_dual_basis"]
    dd_space = xdd._cache["hom_dual_space"]
    k = xstar.dim
    cols = []
    for j in range(x.dim):
        ev_rows = [[star_basis[i].rows[r][j] for i in range(k)]
                   for r in range(a.dim)]
        flat = sum(ev_rows, [])
        try:
            cols.append(dd_space.coords_of(flat))
        except ValueError:
            return refuted(reason="evaluation image escapes the double "
                                  "dual; this flags a computation defect",
                           at_basis_vector=j)
    ev = Mat(f, [[cols[c][r] for c in range(x.dim)]
                 for r in range(xdd.dim)], ncols=x.dim)
    for i in range(a.dim):
        lhs = ev.mul(x.mats[i])
        rhs = xdd.mats[i].mul(ev)
        if lhs.rows != rhs.rows:
            return refuted(reason="evaluation map fails to intertwine the "
                                  "actions; this flags a computation defect",
                           at_generator=i)
    if xdd.dim != x.dim:
        return refuted(reason="double dual has a different dimension",
                       dims=[x.dim, xdd.dim])
    from .exact import rref
    _, _, rank = rref(ev)
    if rank != x.dim:
        return refuted(reason="evaluation map is not invertible", rank=rank)
    return certified(dim=x.dim)


def perp_check(x: FDModule, bound: int = 12,
               cutoffs: Cutoffs = DEFAULT_CUTOFFS) -> Verdict:
    """Vanishing of Ext^i(X, A) for 1 <= i <= bound.

    Certified when the window is zero and higher degrees are forced: either
    the resolution of x terminates within the bound, or the regular module
    has certified injective dimension <= bound.  A zero window without
    either upgrade is reported as inconclusive with bounded_certified
    evidence; a nonzero entry refutes with the least violating degree."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    a = x.algebra
    if x.dim == 0:
        return certified(note="zero module", dims=[])
    reg = regular_module(a)
    degrees = list(range(1, bound + 1))
    seq = ext(x, reg, degrees, over=a, cutoff=bound + 1)
    dims = []
    for d in degrees:
        if not seq.trusted(d):
            return inconclusive(reason="Ext window truncated", at=d,
                                dims=dims)
        v = seq.get(d)
        dims.append(v)
        if v != 0:
            return refuted(least_violating=d, dim=v, dims=dims)
    if seq.complete:
        return certified(dims=dims, upgraded_by="resolution terminated")
    inj = self_injective_dimension(a, "left", cutoff=bound + 1)
    if inj.is_certified and inj.witness["value"] <= bound:
        return certified(dims=dims,
                         upgraded_by="injective dimension of the regular "
                                     "module within bound",
                         injective_dimension=inj.witness["value"])
    return inconclusive(bounded_certified=bound, dims=dims,
                        note="vanishing verified through the bound only")


@dataclass
class GpWitness:
    """Evidence bundle for Gorenstein projectivity via total reflexivity.

    left_vanishing: dims of Ext^i(X, A) for i = 1..bound;
    dual_vanishing: the same over the opposite algebra for X* = Hom(X, A);
    reflexivity: verdict for the evaluation map X -> X**.
    verdict is Certified only when every listed dimension is zero and
    reflexivity is Certified."""

    module: FDModule
    bound: int
    left_vanishing: list
    dual_vanishing: list
    reflexivity: Verdict
    verdict: Verdict

    @property
    def is_certified(self) -> bool:
        return self.verdict.is_certified

    def to_json(self) -> dict:
        return {
            "module": self.module.name or "?",
            "bound": self.bound,
            "left_vanishing": list(self.left_vanishing),
            "dual_vanishing": list(self.dual_vanishing),
            "reflexivity": self.reflexivity.to_json(),
            "verdict": self.verdict.to_json(),
        }


def gproj_check(x: FDModule, bound: int = 12,
                cutoffs: Cutoffs = DEFAULT_CUTOFFS) -> GpWitness:
    """Total-reflexivity test: Ext^i(X, A) and Ext^i(X*, A-op) vanish for
    1 <= i <= bound and the evaluation X -> X** is an isomorphism.

    Certified through the bound this is equivalent to a complete resolution
    existing through that degree (splice the minimal resolution of x with
    the dual of the minimal resolution of x*)."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    a = x.algebra
    if x.dim == 0:
        v = certified(note="zero module")
        return GpWitness(x, bound, [], [], certified(note="zero module"), v)
    degrees = list(range(1, bound + 1))
    seq_left = ext(x, regular_module(a), degrees, over=a, cutoff=bound + 1)
    xstar = hom_dual(x)
    op = opposite(a)
    seq_dual = ext(xstar, regular_module(op), degrees, over=op,
                   cutoff=bound + 1)
    left = [seq_left.get(d) if seq_left.trusted(d) else None for d in degrees]
    dual = [seq_dual.get(d) if seq_dual.trusted(d) else None for d in degrees]
    refl = evaluation_check(x)

    problems = []
    for d, v in zip(degrees, left):
        if v not in (None, 0):
            problems.append({"side": "module", "i": d, "dim": v})
    for d, v in zip(degrees, dual):
        if v not in (None, 0):
            problems.append({"side": "dual", "i": d, "dim": v})
    if problems:
        verdict = refuted(reason="Ext against the regular module is nonzero",
                          witnesses=problems)
    elif refl.is_refuted:
        verdict = refuted(reason="evaluation map is not an isomorphism",
                          reflexivity=refl.witness)
    elif None in left or None in dual:
        verdict = inconclusive(reason="Ext window truncated")
    else:
        verdict = certified(bound=bound)
    return GpWitness(x, bound, left, dual, refl, verdict)


def gproj_perp_check(x: FDModule, testset: Sequence[FDModule],
                     bound: int = 12,
                     cutoffs: Cutoffs = DEFAULT_CUTOFFS) -> Verdict:
    """Ext^i(U, X) = 0 for every U in the testset and 1 <= i <= bound.

    The verdict is explicitly relative to the testset; each member must
    first pass gproj_check at the same bound or TestsetNotCertified is
    raised naming the offender."""
    for u in testset:
        w = gproj_check(u, bound, cutoffs)
        if not w.verdict.is_certified:
            raise TestsetNotCertified(
                f"testset member {u.name or '?'} is not certified: "
                f"{w.verdict.status}")
    if not testset:
        return certified(note="empty testset", relative_to=[])
    degrees = list(range(1, bound + 1))
    failures = []
    holes = []
    for idx, u in enumerate(testset):
        seq = ext(u, x, degrees, cutoff=bound + 1)
        for d in degrees:
            if not seq.trusted(d):
                holes.append({"member": u.name or str(idx), "i": d})
                continue
            v = seq.get(d)
            if v != 0:
                failures.append({"member": u.name or str(idx), "i": d,
                                 "dim": v})
    if failures:
        return refuted(reason="Ext from a testset member is nonzero",
                       witnesses=failures)
    if holes:
        return inconclusive(reason="Ext window truncated", holes=holes)
    return certified(relative_to=[u.name or str(i)
                                  for i, u in enumerate(testset)],
                     bound=bound)


def gorenstein_check(a: AlgebraTable, bound: int = 12,
                     cutoffs: Cutoffs = DEFAULT_CUTOFFS) -> Verdict:
    """Certified(left, right) when the regular module has finite injective
    dimension on both sides within the bound."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    dl = self_injective_dimension(a, "left", cutoff=bound + 1)
    dr = self_injective_dimension(a, "right", cutoff=bound + 1)
    if dl.is_certified and dr.is_certified:
        return certified(left=dl.witness["value"], right=dr.witness["value"])
    evidence = {}
    for side, v in (("left", dl), ("right", dr)):
        evidence[side] = (v.witness["value"] if v.is_certified
                          else {"resolved_through":
                                v.witness.get("resolved_through")})
    return inconclusive(reason="injective dimension unresolved within bound",
                        bound=bound, sides=evidence)


def omega_condition_check(x: FDModule, t: int,
                          perp_samples: Sequence[FDModule],
                          bound: int = 12,
                          cutoffs: Cutoffs = DEFAULT_CUTOFFS) -> Verdict:
    """For each sample U: form X (x) U over the right-acting base, take the
    t-th syzygy over the left-acting algebra, and require the perp test.

    x must carry two one-sided actions (a module over tensor(G, op(L)));
    samples are left L-modules that themselves pass perp_check over L at
    the bound, at least in its bounded form."""
    alg = x.algebra
    if alg.kind != "tensor" or alg.factors[1].kind != "opposite":
        raise AlgebraMismatch("the tested module must carry a left action "
                              "and a right action")
    lam = alg.factors[1].factors[0]
    if t < 0:
        raise ValueError("t must be nonnegative")
    if not perp_samples:
        return certified(note="empty sample list", samples=[])
    rows = []
    worst = "certified"
    for idx, u in enumerate(perp_samples):
        label = u.name or f"U{idx}"
        pre = perp_check(u, bound, cutoffs)
        if pre.is_refuted or (pre.is_inconclusive
                              and "bounded_certified" not in pre.witness):
            return inconclusive(reason="sample fails its own vanishing "
                                       "precondition",
                                sample=label, detail=pre.to_json())
        y = tensor_over(x, u, over=lam).module
        z = syzygy(y, t, cutoff=max(cutoffs.resolution, t + 1))
        res = perp_check(z, bound, cutoffs)
        rows.append({"sample": label, "tensor_dim": y.dim,
                     "syzygy_dim": z.dim, "verdict": res.to_json()})
        if res.is_refuted:
            return refuted(reason="a shifted tensor fails the perp test",
                           sample=label, detail=res.witness, rows=rows)
        if not res.is_certified:
            worst = "inconclusive"
    if worst == "certified":
        return certified(t=t, bound=bound, rows=rows)
    return inconclusive(reason="some samples only bounded-certified",
                        t=t, bound=bound, rows=rows)


def smt_level_verify(a: AlgebraTable, b: AlgebraTable, m: FDModule,
                     n: FDModule, level: int,
                     seed: Optional[int] = None,
                     cutoffs: Cutoffs = DEFAULT_CUTOFFS) -> Verdict:
    """Verify a singular-equivalence-of-Morita-type-with-level certificate.

    Checks, with nothing assumed: m is projective as a left a-module and as
    a right b-module, n the other way around; m (x)_b n is stably
    isomorphic to the level-th bimodule syzygy of a, and n (x)_a m to that
    of b.  Stable isomorphism = isomorphism after stripping projective
    summands from both sides."""
    if level < 0:
        raise ValueError("level must be nonnegative")
    if seed is None:
        seed = cutoffs.seed
    clauses = {}
    side_checks = [
        ("m_left_projective", _restrict_left(m, a)),
        ("m_right_projective", _restrict_right(m, b)),
        ("n_left_projective", _restrict_left(n, b)),
        ("n_right_projective", _restrict_right(n, a)),
    ]
    for label, mod in side_checks:
        v = projective_dimension(mod, cutoff=cutoffs.resolution)
        if v.is_certified and v.witness["value"] <= 0:
            clauses[label] = certified(pd=v.witness["value"])
        elif v.is_certified:
            clauses[label] = refuted(pd=v.witness["value"])
        else:
            clauses[label] = inconclusive(
                resolved_through=v.witness.get("resolved_through"))

    def stable_compare(label, prod_mod, reference_alg):
        target = syzygy(algebra_bimodule(reference_alg), level,
                        cutoff=max(cutoffs.resolution, level + 1))
        core_l, stripped_l = strip_projective_summands(prod_mod)
        core_r, stripped_r = strip_projective_summands(target)
        v = random_iso_test(core_l, core_r, trials=cutoffs.iso_trials,
                            seed=seed)
        w = dict(v.witness)
        w.update({"product_dim": prod_mod.dim, "core_dims":
                  [core_l.dim, core_r.dim],
                  "stripped": [len(stripped_l), len(stripped_r)]})
        clauses[label] = Verdict(v.status, w)

    stable_compare("a_side_stable_iso", tensor_over(m, n, over=b).module, a)
    stable_compare("b_side_stable_iso", tensor_over(n, m, over=a).module, b)

    payload = {k: v.to_json() for k, v in clauses.items()}
    statuses = {v.status for v in clauses.values()}
    if "refuted" in statuses:
        bad = [k for k, v in clauses.items() if v.is_refuted]
        return refuted(reason="failing clauses", clauses=payload,
                       failing=bad)
    if "inconclusive" in statuses:
        open_ = [k for k, v in clauses.items() if v.is_inconclusive]
        return inconclusive(reason="unresolved clauses", clauses=payload,
                            unresolved=open_)
    return certified(level=level, clauses=payload)
