"""Executable property checkers.

Each ``check_*`` function takes one instance and returns a
:class:`CheckReport`.  A ``fails`` report always carries a witness that can
be re-checked by running the same function on the same instance.  The
``scan_*`` helpers enumerate the instances of one group or extension.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from selab.actions import (
    PointSubobject,
    SplitExtension,
    action_core,
    action_core_by_intersection,
    action_core_by_join,
    action_of_split_extension,
    conjugation_extension,
    enumerate_subpoints,
    fibrewise_right_adjoint,
    point_homs,
    pullback_point,
    split_extension_core,
)
from selab.errors import InputError
from selab.groups import FiniteGroup, GroupHom
from selab.lattice import (
    Subgroup,
    SubgroupLattice,
    generate,
    generate_counted,
    is_normal,
    join_family,
    lattice,
    meet,
    normal_core,
    normal_core_by_conjugates,
    quotient,
)

HOLDS = "holds"
FAILS = "fails"
SKIPPED = "skipped-capacity"

DEFAULT_SEED = 0xC0FFEE
EXHAUSTIVE_LIMIT = 12  # families over at most 2**12 subsets are enumerated


@dataclass
class CheckReport:
    check: str
    instance: str
    verdict: str
    witness: object = None
    millis: float = 0.0
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict != FAILS

    def to_record(self) -> dict:
        rec = {"check": self.check, "instance": self.instance, "verdict": self.verdict, "millis": round(self.millis, 3)}
        if self.witness is not None:
            rec["witness"] = self.witness
        if self.detail:
            rec["detail"] = self.detail
        return rec

    def line(self) -> str:
        w = f" witness={self.witness}" if self.witness is not None else ""
        d = f" ({self.detail})" if self.detail else ""
        return f"{self.verdict.upper():8s} {self.check} [{self.instance}]{d}{w}"


def _report(check: str, instance: str, start: float, witness=None, detail: str = "") -> CheckReport:
    verdict = HOLDS if witness is None else FAILS
    return CheckReport(check, instance, verdict, witness, (time.perf_counter() - start) * 1000, detail)


def _subs(subs: Iterable[Subgroup]) -> list[list[int]]:
    return [list(H.elems) for H in subs]


def minimize_witness(items: Sequence, fails: Callable[[list], bool]) -> list:
    """Greedily drop items while ``fails`` stays true."""
    current = list(items)
    i = 0
    while i < len(current):
        trial = current[:i] + current[i + 1:]
        if fails(trial):
            current = trial
        else:
            i += 1
    return current


def _subset_joins(L: SubgroupLattice, idx: Sequence[int], transform: Callable[[int], int] = lambda i: i) -> list[int]:
    """join of transform(idx[j]) over every subset mask of idx (mask 0 -> bottom)."""
    k = len(idx)
    out = [L.bottom] * (1 << k)
    items = [transform(i) for i in idx]
    for mask in range(1, 1 << k):
        low = (mask & -mask).bit_length() - 1
        out[mask] = L.join(out[mask & (mask - 1)], items[low])
    return out


# -- decompositions and the intersection theorem ------------------------------


def _check_decomposition(L: SubgroupLattice, k: int, b: int) -> None:
    if not L.normal[k]:
        raise InputError(f"K = {L[k]} is not normal")
    if L.meet(k, b) != L.bottom or L.join(k, b) != L.top:
        raise InputError("need K ∧ B = 0 and K ∨ B = X")


def decompositions(X: FiniteGroup, max_order: int = 48) -> list[tuple[Subgroup, Subgroup]]:
    """All (K, B) with K normal, K ∧ B = 0 and K ∨ B = X."""
    L = lattice(X, max_order, force=True)
    out = []
    for k in L.normal_indices:
        for b in range(len(L)):
            if len(L[k]) * len(L[b]) == X.order and L.meet(k, b) == L.bottom:
                out.append((L[k], L[b]))
    return out


def _instance(X: FiniteGroup, **subs: Subgroup) -> str:
    parts = [X.label] + [f"{name}={list(H.elems)}" for name, H in subs.items()]
    return "; ".join(parts)


def check_intersections_binary(X: FiniteGroup, K: Subgroup, B: Subgroup) -> CheckReport:
    """K ∧ (U ∨ V) = (K ∧ U) ∨ (K ∧ V) for every U, V containing B."""
    start = time.perf_counter()
    L = lattice(X, force=True)
    k, b = L.index(K), L.index(B)
    _check_decomposition(L, k, b)
    above = L.above(b)
    for i, u in enumerate(above):
        for v in above[i:]:
            lhs = L.meet(k, L.join(u, v))
            rhs = L.join(L.meet(k, u), L.meet(k, v))
            if lhs != rhs:
                return _report("intersections_binary", _instance(X, K=K, B=B), start, _subs([L[u], L[v]]))
    return _report("intersections_binary", _instance(X, K=K, B=B), start, detail=f"{len(above)} subpoints")


def check_intersections_family(
    X: FiniteGroup,
    K: Subgroup,
    B: Subgroup,
    families: Sequence[Sequence[Subgroup]] | None = None,
    seed: int = DEFAULT_SEED,
    samples: int = 1000,
) -> CheckReport:
    """K ∧ ⋁U_i = ⋁(K ∧ U_i) for families of subgroups containing B.

    Without explicit ``families`` every subset of the filter above B is
    checked when there are at most 2**12 of them, otherwise ``samples``
    seeded random subsets are drawn.
    """
    start = time.perf_counter()
    L = lattice(X, force=True)
    k, b = L.index(K), L.index(B)
    _check_decomposition(L, k, b)
    name, inst = "intersections_family", _instance(X, K=K, B=B)

    def holds(fam: list[int]) -> bool:
        return L.meet(k, L.join_all(fam)) == L.join_all(L.meet(k, u) for u in fam)

    def failure(fam: list[int]) -> CheckReport:
        small = minimize_witness(fam, lambda f: not holds(f))
        return _report(name, inst, start, _subs(L[i] for i in small))

    if families is not None:
        for fam in families:
            idx = [L.index(U) for U in fam]
            if any(not L.leq(b, i) for i in idx):
                raise InputError("every family member must contain B")
            if not holds(idx):
                return failure(idx)
        return _report(name, inst, start, detail=f"{len(families)} given families")
    above = L.above(b)
    if len(above) <= EXHAUSTIVE_LIMIT:
        joins = _subset_joins(L, above)
        kjoins = _subset_joins(L, above, lambda u: L.meet(k, u))
        for mask in range(1 << len(above)):
            if L.meet(k, joins[mask]) != kjoins[mask]:
                return failure([above[j] for j in range(len(above)) if mask >> j & 1])
        return _report(name, inst, start, detail=f"exhaustive, {1 << len(above)} families")
    rng = random.Random(seed)
    for _ in range(samples):
        size = rng.randint(0, len(above))
        fam = rng.sample(above, size)
        if not holds(fam):
            return failure(fam)
    return _report(name, inst, start, detail=f"sampled, {samples} families of {len(above)} subpoints")


def check_kernel_geometric(ext: SplitExtension, family: Sequence[PointSubobject]) -> CheckReport:
    """If the subpoints jointly cover A then their kernel parts cover kappa(X)."""
    start = time.perf_counter()
    inst = f"{ext.describe()}; family of {len(family)}"
    A = ext.A
    covered = join_family([P.U for P in family], A)
    if not covered.is_whole:
        return _report("kernel_geometric", inst, start, detail="premise false")
    kernels = join_family([P.kernel_part for P in family], A)
    if kernels != ext.kernel_sub:
        return _report("kernel_geometric", inst, start, _subs(P.U for P in family))
    return _report("kernel_geometric", inst, start)


def scan_kernel_geometric(ext: SplitExtension, limit: int = 10, seed: int = DEFAULT_SEED, samples: int = 1000) -> CheckReport:
    """Kernel geometricity over every family of subpoints (sampled above 2**limit)."""
    start = time.perf_counter()
    L = lattice(ext.A, force=True)
    pts = L.above(L.index(ext.section_sub))
    kern = L.index(ext.kernel_sub)
    inst = ext.describe()
    meets = {u: L.meet(u, kern) for u in pts}

    def bad(fam: list[int]) -> bool:
        return L.join_all(fam) == L.top and L.join_all(meets[u] for u in fam) != kern

    if len(pts) <= limit:
        joins = _subset_joins(L, pts)
        kjoins = _subset_joins(L, pts, meets.__getitem__)
        for mask in range(1 << len(pts)):
            if joins[mask] == L.top and kjoins[mask] != kern:
                fam = minimize_witness([pts[j] for j in range(len(pts)) if mask >> j & 1], bad)
                return _report("kernel_geometric", inst, start, _subs(L[i] for i in fam))
        return _report("kernel_geometric", inst, start, detail=f"exhaustive, {1 << len(pts)} families")
    rng = random.Random(seed)
    for _ in range(samples):
        fam = rng.sample(pts, rng.randint(1, len(pts)))
        if bad(fam):
            fam = minimize_witness(fam, bad)
            return _report("kernel_geometric", inst, start, _subs(L[i] for i in fam))
    return _report("kernel_geometric", inst, start, detail=f"sampled, {samples} families of {len(pts)} subpoints")


# -- normality, commutators -----------------------------------------------------


def check_join_normals_normal(X: FiniteGroup) -> CheckReport:
    """Every join of normal subgroups is normal.

    Families are enumerated outright when there are at most 2**12 of them;
    otherwise the closure of the normal subgroups under binary joins is
    computed, which is exactly the set of all family joins.
    """
    start = time.perf_counter()
    L = lattice(X, force=True)
    normals = L.normal_indices
    if len(normals) <= EXHAUSTIVE_LIMIT:
        joins = _subset_joins(L, normals)
        for mask, j in enumerate(joins):
            if not L.normal[j]:
                fam = [normals[t] for t in range(len(normals)) if mask >> t & 1]
                fam = minimize_witness(fam, lambda f: not L.normal[L.join_all(f)])
                return _report("join_normals_normal", X.label, start, _subs(L[i] for i in fam))
        return _report("join_normals_normal", X.label, start, detail=f"exhaustive, {len(joins)} families")
    closed = set(normals)
    frontier = list(normals)
    while frontier:
        nxt = []
        for a in frontier:
            for c in normals:
                j = L.join(a, c)
                if not L.normal[j]:
                    return _report("join_normals_normal", X.label, start, _subs([L[a], L[c]]))
                if j not in closed:
                    closed.add(j)
                    nxt.append(j)
        frontier = nxt
    return _report("join_normals_normal", X.label, start, detail=f"join closure of {len(normals)} normals")


def check_higgins_normality(X: FiniteGroup) -> CheckReport:
    """H is normal iff [H, X] ≤ H, for every subgroup H."""
    start = time.perf_counter()
    L = lattice(X, force=True)
    for i, H in enumerate(L.subgroups):
        criterion = L.leq(L.commutator(i, L.top), i)
        if criterion != is_normal(H):
            return _report("higgins_normality", X.label, start, list(H.elems))
    return _report("higgins_normality", X.label, start, detail=f"{len(L)} subgroups")


def check_commutator_join(X: FiniteGroup, chain: Sequence[Subgroup]) -> CheckReport:
    """[⋁N_i, X] = ⋁[N_i, X] for an ascending chain of normal subgroups."""
    start = time.perf_counter()
    L = lattice(X, force=True)
    idx = [L.index(N) for N in chain]
    for a, c in zip(idx, idx[1:]):
        if not L.leq(a, c):
            raise InputError("chain must be ascending")
    for i in idx:
        if not L.normal[i]:
            raise InputError(f"{L[i]} is not normal")
    lhs = L.commutator(L.join_all(idx), L.top)
    rhs = L.join_all(L.commutator(i, L.top) for i in idx)
    inst = f"{X.label}; chain of {len(idx)}"
    if lhs != rhs:
        return _report("commutator_join", inst, start, _subs(chain))
    return _report("commutator_join", inst, start)


def normal_chains(X: FiniteGroup, cap: int = 20000) -> list[list[Subgroup]]:
    """Every non-empty ascending chain of normal subgroups (at most ``cap``)."""
    L = lattice(X, force=True)
    normals = L.normal_indices
    ups = {a: [c for c in normals if c != a and L.leq(a, c)] for a in normals}
    out: list[list[int]] = []

    def rec(chain: list[int]):
        if len(out) >= cap:
            return
        out.append(list(chain))
        for c in ups[chain[-1]]:
            chain.append(c)
            rec(chain)
            chain.pop()

    for a in normals:
        rec([a])
    return [[L[i] for i in ch] for ch in out]


def check_three_subobjects(X: FiniteGroup) -> CheckReport:
    """[K,[L,M]] ≤ [M,[K,L]] ∨ [L,[M,K]] for all ordered triples of normal subgroups."""
    start = time.perf_counter()
    Lat = lattice(X, force=True)
    c = Lat.commutator
    normals = Lat.normal_indices
    for k, l, m in itertools.product(normals, repeat=3):
        lhs = c(k, c(l, m))
        rhs = Lat.join(c(m, c(k, l)), c(l, c(m, k)))
        if not Lat.leq(lhs, rhs):
            return _report("three_subobjects", X.label, start, _subs([Lat[k], Lat[l], Lat[m]]))
    return _report("three_subobjects", X.label, start, detail=f"{len(normals) ** 3} triples")


# -- cores ----------------------------------------------------------------------


def check_normal_core_oracle(X: FiniteGroup) -> CheckReport:
    """Join of contained normals equals the intersection of conjugates, for every subgroup."""
    start = time.perf_counter()
    L = lattice(X, force=True)
    for S in L.subgroups:
        joined = join_family([L[i] for i in L.normal_indices if L[i] <= S], X)
        if joined != normal_core_by_conjugates(S):
            return _report("normal_core_oracle", X.label, start, list(S.elems))
    return _report("normal_core_oracle", X.label, start, detail=f"{len(L)} subgroups")


def check_core_adjunction(ext: SplitExtension) -> CheckReport:
    """(U ∩ kappa(X) ≤ kappa(S)) iff U ≤ core-point(S), for all subpoints U and S ≤ X."""
    start = time.perf_counter()
    LX = lattice(ext.X, force=True)
    pts = enumerate_subpoints(ext)
    cores = [split_extension_core(S, ext).middle for S in LX.subgroups]
    for S, middle in zip(LX.subgroups, cores):
        kS = ext.kernel_image(S)
        for P in pts:
            if (P.kernel_part <= kS) != (P.U <= middle):
                return _report("core_adjunction", ext.describe(), start, {"U": list(P.U.elems), "S": list(S.elems)})
    return _report("core_adjunction", ext.describe(), start, detail=f"{len(pts)} subpoints x {len(LX)} subgroups")


def check_core_terminality(ext: SplitExtension) -> CheckReport:
    """For every S ≤ X: u, v injective, core kernel invariant and inside S,
    and every subpoint with kernel part in kappa(S) factors through v."""
    start = time.perf_counter()
    LX = lattice(ext.X, force=True)
    act = action_of_split_extension(ext)
    pts = enumerate_subpoints(ext)
    for S in LX.subgroups:
        core = split_extension_core(S, ext)
        problems = []
        if not core.u.is_injective() or not core.v.is_injective():
            problems.append("mono")
        if not core.kernel <= S or not act.is_invariant(core.kernel):
            problems.append("kernel")
        if core.kernel != action_core_by_intersection(S, act):
            problems.append("oracle")
        kS = ext.kernel_image(S)
        if any(P.kernel_part <= kS and not P.U <= core.middle for P in pts):
            problems.append("terminality")
        if problems:
            return _report("core_terminality", ext.describe(), start, {"S": list(S.elems), "failed": problems})
    return _report("core_terminality", ext.describe(), start, detail=f"{len(LX)} subgroups, {len(pts)} subpoints")


def check_action_core_oracles(ext: SplitExtension) -> CheckReport:
    """Generator iteration, full intersection and invariant-join give the same action core."""
    start = time.perf_counter()
    act = action_of_split_extension(ext)
    for S in lattice(ext.X, force=True).subgroups:
        a = action_core(S, act)
        if a != action_core_by_intersection(S, act) or a != action_core_by_join(S, act):
            return _report("action_core_oracles", ext.describe(), start, list(S.elems))
    return _report("action_core_oracles", ext.describe(), start)


def check_normal_core_pullback(S: Subgroup) -> CheckReport:
    """Quotienting by the normal core N gives a pullback square with S/N -> X/N
    injective and of trivial normal core."""
    start = time.perf_counter()
    X = S.parent
    inst = _instance(X, S=S)
    N = normal_core(S, force=True)
    top = quotient(N)
    r = top.projection
    Sg = S.as_group()
    NinS = Subgroup(Sg, tuple(S.local(n) for n in N.elems))
    bottom = quotient(NinS)
    sbar_map = tuple(r.map[S.elems[c[0]]] for c in bottom.cosets)
    try:
        sbar = GroupHom(bottom.group, top.group, sbar_map)
    except Exception as exc:  # the induced map must be a homomorphism
        return _report("normal_core_pullback", inst, start, {"induced_map": list(sbar_map), "error": str(exc)})
    if not sbar.is_injective():
        return _report("normal_core_pullback", inst, start, {"induced_map": list(sbar_map)})
    # fibre count of {(c, x) : sbar(c) = r(x)} against |S|
    fibre = {}
    for x in X:
        fibre[r.map[x]] = fibre.get(r.map[x], 0) + 1
    size = sum(fibre.get(sbar.map[c], 0) for c in bottom.group)
    if size != S.order:
        return _report("normal_core_pullback", inst, start, {"pullback_order": size, "S_order": S.order})
    img = sbar.image()
    if not normal_core(img, force=True).is_trivial:
        return _report("normal_core_pullback", inst, start, {"image": list(img.elems)})
    return _report("normal_core_pullback", inst, start, detail=f"|N|={N.order}")


def clot_restricts(N: Subgroup) -> bool:
    """Whether the conjugation extension of X restricts to one with kernel N."""
    X = N.parent
    ext = conjugation_extension(X)
    Y = generate(ext.A, {ext.kappa.map[n] for n in N.elems} | set(ext.beta.map))
    return meet(Y, ext.kernel_sub) == ext.kernel_image(N)


def check_clots(N: Subgroup) -> CheckReport:
    """The conjugation extension restricts to kernel N iff N is normal."""
    start = time.perf_counter()
    restricts = clot_restricts(N)
    normal = is_normal(N)
    inst = _instance(N.parent, N=N)
    if restricts != normal:
        return _report("clots", inst, start, {"N": list(N.elems), "restricts": restricts, "normal": normal})
    return _report("clots", inst, start, detail="restricts" if restricts else "does not restrict")


# -- fibrewise adjoint -----------------------------------------------------------


def check_fibrewise_adjoint(
    p: GroupHom, sec: GroupHom, D: SplitExtension, points_over_B: Sequence[SplitExtension]
) -> CheckReport:
    """|Hom(p*A', D)| = |Hom(A', R(D))| for each given point A' over B."""
    start = time.perf_counter()
    R = fibrewise_right_adjoint(p, sec, D)
    inst = f"p={list(p.map)}; sec={list(sec.map)}; D={D.describe()}"
    for Ap in points_over_B:
        lhs = len(point_homs(pullback_point(Ap, p), D))
        rhs = len(point_homs(Ap, R))
        if lhs != rhs:
            return _report("fibrewise_adjoint", inst, start, {"point": Ap.to_record(), "lhs": lhs, "rhs": rhs})
    return _report("fibrewise_adjoint", inst, start, detail=f"{len(points_over_B)} test points, |ker R|={R.X.order}")


# -- generation oracle ------------------------------------------------------------


def naive_closure(X: FiniteGroup, seed: Iterable[int]) -> frozenset[int]:
    """One element at a time: keep multiplying known elements until nothing new appears."""
    known = [0]
    seen = {0}
    for s in seed:
        if s not in seen:
            seen.add(s)
            known.append(s)
    i = 0
    while i < len(known):
        a = known[i]
        for j in range(i + 1):
            b = known[j]
            for c in (X.mul[a][b], X.mul[b][a]):
                if c not in seen:
                    seen.add(c)
                    known.append(c)
        i += 1
    return frozenset(seen)


def check_generate_oracle(X: FiniteGroup, seeds: Sequence[Sequence[int]]) -> CheckReport:
    start = time.perf_counter()
    worst = 0
    for seed in seeds:
        H, steps = generate_counted(X, seed)
        worst = max(worst, steps)
        if H.set != naive_closure(X, seed) or steps > X.order:
            return _report("generate_oracle", X.label, start, {"seed": list(seed), "steps": steps})
    return _report("generate_oracle", X.label, start, detail=f"{len(seeds)} seeds, max steps {worst}")


__all__ = [name for name in dir() if name.startswith(("check_", "scan_"))] + [
    "CheckReport",
    "FAILS",
    "HOLDS",
    "SKIPPED",
    "clot_restricts",
    "decompositions",
    "minimize_witness",
    "naive_closure",
    "normal_chains",
]
