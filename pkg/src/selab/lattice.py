"""Subgroups of a finite group and the lattice they form."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from selab.errors import CapacityError, ConsistencyError, InputError, ValidationError
from selab.groups import FiniteGroup, GroupHom

DEFAULT_ENUM_BOUND = 48


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup of ``parent`` stored as a sorted tuple of element indices."""

    parent: FiniteGroup
    elems: tuple[int, ...]
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        elems = tuple(sorted(set(int(e) for e in self.elems)))
        object.__setattr__(self, "elems", elems)
        n = self.parent.order
        if elems and not (0 <= elems[0] and elems[-1] < n):
            raise InputError(f"subgroup indices out of range for {self.parent.label}")
        if self.check:
            s = self.set
            if 0 not in s:
                raise ValidationError("subgroup identity", (0,), "0 not in subset")
            m, inv = self.parent.mul, self.parent.inv
            for a in elems:
                if inv[a] not in s:
                    raise ValidationError("subgroup inverse", (a,))
                row = m[a]
                for b in elems:
                    if row[b] not in s:
                        raise ValidationError("subgroup closure", (a, b))

    @cached_property
    def set(self) -> frozenset[int]:
        return frozenset(self.elems)

    @cached_property
    def mask(self) -> int:
        m = 0
        for e in self.elems:
            m |= 1 << e
        return m

    @property
    def order(self) -> int:
        return len(self.elems)

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __contains__(self, x) -> bool:
        return x in self.set

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.elems == other.elems and self.parent == other.parent

    def __hash__(self):
        return hash(self.elems)

    def __le__(self, other: Subgroup) -> bool:
        _same_parent(self, other)
        return self.mask & other.mask == self.mask

    def __lt__(self, other: Subgroup) -> bool:
        return self <= other and self.elems != other.elems

    def __repr__(self):
        return f"Subgroup({self.parent.label}, {list(self.elems)})"

    @property
    def is_trivial(self) -> bool:
        return len(self.elems) == 1

    @property
    def is_whole(self) -> bool:
        return len(self.elems) == self.parent.order

    @cached_property
    def _as_group(self) -> tuple[FiniteGroup, GroupHom]:
        pos = {e: i for i, e in enumerate(self.elems)}
        m = self.parent.mul
        table = tuple(tuple(pos[m[a][b]] for b in self.elems) for a in self.elems)
        names = None
        if self.parent.elements is not None:
            names = tuple(self.parent.elements[e] for e in self.elems)
        G = FiniteGroup(table, f"{self.parent.label}{list(self.elems)}" if not self.is_whole else self.parent.label, names)
        return G, GroupHom(G, self.parent, self.elems, check=False)

    def as_group(self) -> FiniteGroup:
        """This subgroup as a group in its own right (elements renumbered in sorted order)."""
        return self._as_group[0]

    def inclusion(self) -> GroupHom:
        return self._as_group[1]

    def local(self, x: int) -> int:
        """Index of parent element ``x`` inside ``as_group()``."""
        return self._local[x]

    @cached_property
    def _local(self) -> dict[int, int]:
        return {e: i for i, e in enumerate(self.elems)}


def _same_parent(*subs: Subgroup) -> FiniteGroup:
    X = subs[0].parent
    for H in subs[1:]:
        if H.parent is not X and H.parent != X:
            raise InputError(f"subgroups live in different groups ({X.label} vs {H.parent.label})")
    return X


def trivial(X: FiniteGroup) -> Subgroup:
    return Subgroup(X, (0,), check=False)


def whole(X: FiniteGroup) -> Subgroup:
    return Subgroup(X, tuple(range(X.order)), check=False)


def subgroup(X: FiniteGroup, elems: Iterable[int]) -> Subgroup:
    return Subgroup(X, tuple(elems))


# -- generation ----------------------------------------------------------------


def generate_counted(X: FiniteGroup, seed: Iterable[int]) -> tuple[Subgroup, int]:
    """Least subgroup containing ``seed`` and the number of iteration steps.

    Runs J_0 = seed + {0}, J_{n+1} = J_n + m(J_n x J_n) + inv(J_n) up to the
    first fixpoint.  Each step only multiplies pairs that involve an element
    added by the previous step; older pairs were already absorbed, so the
    sets J_n are exactly those of the plain iteration.  The count includes
    the final step that detects the fixpoint.
    """
    seed = list(seed)
    n = X.order
    for s in seed:
        if not 0 <= s < n:
            raise InputError(f"seed element {s} outside group of order {n}")
    J = set(seed)
    J.add(0)
    fresh = list(J)
    m, inv = X.mul, X.inv
    steps = 0
    while True:
        steps += 1
        old = list(J)
        added: set[int] = set()
        for a in fresh:
            row = m[a]
            for b in old:
                c = row[b]
                if c not in J:
                    added.add(c)
                c = m[b][a]
                if c not in J:
                    added.add(c)
            c = inv[a]
            if c not in J:
                added.add(c)
        if not added:
            break
        J |= added
        fresh = list(added)
    return Subgroup(X, tuple(J), check=False), steps


def generate(X: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    return generate_counted(X, seed)[0]


def meet(H: Subgroup, K: Subgroup) -> Subgroup:
    X = _same_parent(H, K)
    return Subgroup(X, tuple(H.set & K.set), check=False)


def join(H: Subgroup, K: Subgroup) -> Subgroup:
    X = _same_parent(H, K)
    if H <= K:
        return K
    if K <= H:
        return H
    return generate(X, H.set | K.set)


def join_family(subs: Sequence[Subgroup], parent: FiniteGroup | None = None) -> Subgroup:
    """Join of a family; the empty family joins to the trivial subgroup."""
    subs = list(subs)
    if not subs:
        if parent is None:
            raise InputError("empty family needs an explicit parent group")
        return trivial(parent)
    X = _same_parent(*subs)
    if parent is not None:
        _same_parent(subs[0], trivial(parent))
    union: set[int] = set()
    for H in subs:
        union |= H.set
    return generate(X, union)


def meet_family(subs: Sequence[Subgroup], parent: FiniteGroup | None = None) -> Subgroup:
    subs = list(subs)
    if not subs:
        if parent is None:
            raise InputError("empty family needs an explicit parent group")
        return whole(parent)
    X = _same_parent(*subs)
    common = set(subs[0].set)
    for H in subs[1:]:
        common &= H.set
    return Subgroup(X, tuple(common), check=False)


# -- enumeration and the lattice ----------------------------------------------


class SubgroupLattice:
    """All subgroups of a group, indexed, with memoized meets and joins.

    Subgroups are listed in canonical order: by size, then by their sorted
    element tuples.  Index 0 is the trivial subgroup and the last index is the
    whole group.
    """

    def __init__(self, X: FiniteGroup, subgroups: list[Subgroup]):
        self.group = X
        self.subgroups = subgroups
        self._by_mask = {H.mask: i for i, H in enumerate(subgroups)}
        self._joins: dict[tuple[int, int], int] = {}
        self._comms: dict[tuple[int, int], int] = {}

    def __len__(self):
        return len(self.subgroups)

    def __getitem__(self, i: int) -> Subgroup:
        return self.subgroups[i]

    def index(self, H: Subgroup) -> int:
        return self._by_mask[H.mask]

    def index_of_mask(self, mask: int) -> int:
        return self._by_mask[mask]

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.subgroups) - 1

    @cached_property
    def masks(self) -> list[int]:
        return [H.mask for H in self.subgroups]

    def leq(self, i: int, j: int) -> bool:
        a = self.masks[i]
        return a & self.masks[j] == a

    def meet(self, i: int, j: int) -> int:
        return self._by_mask[self.masks[i] & self.masks[j]]

    def join(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        key = (i, j)
        r = self._joins.get(key)
        if r is None:
            if self.leq(i, j):
                r = j
            elif self.leq(j, i):
                r = i
            else:
                r = self.index(join(self.subgroups[i], self.subgroups[j]))
            self._joins[key] = r
        return r

    def join_all(self, indices: Iterable[int]) -> int:
        r = self.bottom
        for i in indices:
            r = self.join(r, i)
        return r

    def meet_all(self, indices: Iterable[int]) -> int:
        r = self.top
        for i in indices:
            r = self.meet(r, i)
        return r

    def commutator(self, i: int, j: int) -> int:
        key = (i, j)
        r = self._comms.get(key)
        if r is None:
            r = self.index(higgins_commutator(self.subgroups[i], self.subgroups[j]))
            self._comms[key] = r
        return r

    @cached_property
    def normal(self) -> tuple[bool, ...]:
        return tuple(is_normal(H) for H in self.subgroups)

    @cached_property
    def normal_indices(self) -> list[int]:
        return [i for i, n in enumerate(self.normal) if n]

    def above(self, i: int) -> list[int]:
        return [j for j in range(len(self.subgroups)) if self.leq(i, j)]

    def below(self, i: int) -> list[int]:
        return [j for j in range(len(self.subgroups)) if self.leq(j, i)]


def _enumerate_masks(X: FiniteGroup) -> list[Subgroup]:
    cyclic_subs: dict[int, Subgroup] = {}
    for a in X:
        H = Subgroup(X, tuple(X.closure([a])), check=False)
        cyclic_subs.setdefault(H.mask, H)
    cyclics = list(cyclic_subs.values())
    found: dict[int, Subgroup] = dict(cyclic_subs)
    frontier = list(cyclics)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclics:
                if C.mask & H.mask == C.mask:
                    continue
                J = generate(X, H.set | C.set)
                if J.mask not in found:
                    found[J.mask] = J
                    nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=lambda H: (len(H.elems), H.elems))


@lru_cache(maxsize=512)
def _lattice(X: FiniteGroup) -> SubgroupLattice:
    return SubgroupLattice(X, _enumerate_masks(X))


def lattice(X: FiniteGroup, max_order: int = DEFAULT_ENUM_BOUND, force: bool = False) -> SubgroupLattice:
    if X.order > max_order and not force:
        raise CapacityError(f"enumerate_subgroups({X.label})", X.order, max_order)
    return _lattice(X)


def enumerate_subgroups(
    X: FiniteGroup, normal_only: bool = False, max_order: int = DEFAULT_ENUM_BOUND, force: bool = False
) -> list[Subgroup]:
    L = lattice(X, max_order, force)
    if normal_only:
        return [L[i] for i in L.normal_indices]
    return list(L.subgroups)


# -- normality, commutators, cores -------------------------------------------


def is_normal(H: Subgroup) -> bool:
    X = H.parent
    s = H.set
    return all(X.conj(x, h) in s for x in X for h in H.elems)


def conjugate(H: Subgroup, g: int) -> Subgroup:
    X = H.parent
    return Subgroup(X, tuple(X.conj(g, h) for h in H.elems), check=False)


def normal_closure(S: Subgroup) -> Subgroup:
    X = S.parent
    return generate(X, {X.conj(x, s) for x in X for s in S.elems})


def higgins_commutator(H: Subgroup, K: Subgroup) -> Subgroup:
    """Subgroup generated by all h k h^-1 k^-1 with h in H, k in K."""
    X = _same_parent(H, K)
    return generate(X, {X.commutator(h, k) for h in H.elems for k in K.elems})


def centralizer(S: Subgroup) -> Subgroup:
    X = S.parent
    m = X.mul
    return Subgroup(X, tuple(x for x in X if all(m[x][s] == m[s][x] for s in S.elems)), check=False)


def center(X: FiniteGroup) -> Subgroup:
    return centralizer(whole(X))


def normal_core_by_conjugates(S: Subgroup) -> Subgroup:
    """Intersection of all conjugates x S x^-1."""
    X = S.parent
    common = set(S.elems)
    for x in X:
        common &= {X.conj(x, s) for s in S.elems}
    return Subgroup(X, tuple(common), check=False)


def normal_core(S: Subgroup, max_order: int = DEFAULT_ENUM_BOUND, force: bool = False) -> Subgroup:
    """Largest normal subgroup of the parent contained in S.

    Built as the join of every normal subgroup lying inside S and checked
    against the intersection of the conjugates of S.
    """
    X = S.parent
    L = lattice(X, max_order, force)
    inside = [L[i] for i in L.normal_indices if L[i] <= S]
    core = join_family(inside, X)
    oracle = normal_core_by_conjugates(S)
    if core != oracle:
        raise ConsistencyError(f"normal core of {S}: join gives {core.elems}, conjugates give {oracle.elems}")
    return core


# -- quotients -----------------------------------------------------------------


@dataclass(frozen=True)
class Quotient:
    group: FiniteGroup
    projection: GroupHom
    cosets: tuple[tuple[int, ...], ...]


def quotient(N: Subgroup) -> Quotient:
    """X/N for a normal subgroup N; cosets are ordered by their least element."""
    X = N.parent
    if not is_normal(N):
        raise InputError(f"{N} is not normal")
    coset_of = [-1] * X.order
    cosets = []
    for x in X:
        if coset_of[x] == -1:
            c = tuple(sorted(X.mul[x][n] for n in N.elems))
            for y in c:
                coset_of[y] = len(cosets)
            cosets.append(c)
    table = tuple(tuple(coset_of[X.mul[a[0]][b[0]]] for b in cosets) for a in cosets)
    Q = FiniteGroup(table, f"{X.label}/{list(N.elems)}")
    return Quotient(Q, GroupHom(X, Q, tuple(coset_of), check=False), tuple(cosets))
