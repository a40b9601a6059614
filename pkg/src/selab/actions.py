"""Group actions, split extensions and the cores built from them.

A B-action on X is kept as a full ``|B| x |X|`` table.  Split extensions are
triples of homomorphisms ``kappa: X -> A``, ``alpha: A -> B``,
``beta: B -> A``; the semidirect product turns an action into one and
conjugation by the section turns one back into an action.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

from selab.errors import InputError, ValidationError
from selab.groups import (
    AutomorphismGroup,
    FiniteGroup,
    GroupHom,
    GroupIso,
    automorphism_group,
    compose,
    direct_product,
    hom_enumerate,
    hom_search,
)
from selab.lattice import (
    Subgroup,
    generate,
    join_family,
    lattice,
    meet,
)


def _compound(label: str) -> str:
    return f"({label})" if any(c in label for c in "x:*") else label


# -- actions -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BAction:
    """An action of ``B`` on ``X`` by automorphisms; ``table[b][x]`` is b.x."""

    B: FiniteGroup
    X: FiniteGroup
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        table = tuple(tuple(int(v) for v in row) for row in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.B.order or any(len(r) != self.X.order for r in table):
            raise InputError(f"action table must be {self.B.order}x{self.X.order}")
        for row in table:
            for v in row:
                if not 0 <= v < self.X.order:
                    raise InputError(f"action entry {v} outside {self.X.label}")
        self._validate()

    def _validate(self):
        B, X, a = self.B, self.X, self.table
        for x in X:
            if a[0][x] != x:
                raise ValidationError("action unit", (0, 0, x), f"e.{x} = {a[0][x]}")
        bm, xm = B.mul, X.mul
        for b in B:
            for b2 in B:
                bb = a[bm[b][b2]]
                ab, ab2 = a[b], a[b2]
                for x in X:
                    if ab[ab2[x]] != bb[x]:
                        raise ValidationError("action composition", (b, b2, x))
        for b in B:
            ab = a[b]
            for x in X:
                row = xm[x]
                for y in X:
                    if ab[row[y]] != xm[ab[x]][ab[y]]:
                        raise ValidationError("action by homomorphisms", (b, x, y))

    def __call__(self, b: int, x: int) -> int:
        return self.table[b][x]

    def __eq__(self, other):
        if not isinstance(other, BAction):
            return NotImplemented
        return self.table == other.table and self.B == other.B and self.X == other.X

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"BAction({self.B.label} on {self.X.label})"

    def automorphism(self, b: int) -> tuple[int, ...]:
        return self.table[b]

    def as_hom(self, aut: AutomorphismGroup | None = None) -> GroupHom:
        """The homomorphism B -> Aut(X) this action curries to."""
        aut = aut or automorphism_group(self.X, force=True)
        return GroupHom(self.B, aut.group, tuple(aut.index(self.table[b]) for b in self.B))

    def image(self, b: int, S: Subgroup) -> Subgroup:
        row = self.table[b]
        return Subgroup(self.X, tuple(row[s] for s in S.elems), check=False)

    def is_invariant(self, S: Subgroup) -> bool:
        s = S.set
        return all(row[x] in s for row in self.table for x in S.elems)

    def is_trivial(self) -> bool:
        ident = tuple(range(self.X.order))
        return all(row == ident for row in self.table)


def trivial_action(B: FiniteGroup, X: FiniteGroup) -> BAction:
    row = tuple(range(X.order))
    return BAction(B, X, (row,) * B.order)


def conjugation_action(X: FiniteGroup) -> BAction:
    """X acting on itself by g.x = g x g^-1."""
    return BAction(X, X, tuple(tuple(X.conj(g, x) for x in X) for g in X))


def action_from_hom(h: GroupHom | Sequence[int], aut: AutomorphismGroup, B: FiniteGroup | None = None) -> BAction:
    """Action of B on aut.base with b.x = h(b)(x).

    ``h`` is either a homomorphism into ``aut.group`` or the raw list of
    automorphism indices (then ``B`` must be given); either way the action
    axioms are re-checked on the resulting table.
    """
    if isinstance(h, GroupHom):
        if h.cod != aut.group:
            raise InputError("homomorphism does not land in the given automorphism group")
        B, images = h.dom, h.map
    else:
        if B is None:
            raise InputError("raw image lists need the acting group B")
        images = tuple(h)
        if len(images) != B.order or any(not 0 <= i < aut.group.order for i in images):
            raise InputError("image list does not match B and Aut(X)")
    return BAction(B, aut.base, tuple(aut.isos[i].map for i in images))


def actions_of(B: FiniteGroup, X: FiniteGroup, max_order: int = 1000) -> list[BAction]:
    """Every action of B on X, one per homomorphism B -> Aut(X)."""
    aut = automorphism_group(X, force=True)
    return [action_from_hom(h, aut) for h in hom_enumerate(B, aut.group, max_order=max_order)]


# -- split extensions ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SplitExtension:
    """X --kappa--> A <==alpha/beta==> B with alpha∘beta = 1 and X the kernel."""

    kappa: GroupHom
    alpha: GroupHom
    beta: GroupHom
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        k, a, b = self.kappa, self.alpha, self.beta
        if k.cod != a.dom or b.cod != a.dom or a.cod != b.dom:
            raise InputError("split extension maps do not compose")
        if not self.check:
            return
        for x in self.B:
            if a.map[b.map[x]] != x:
                raise ValidationError("alpha∘beta = 1", (x,))
        if not k.is_injective():
            raise ValidationError("kappa injective", ())
        K, S = self.kernel_sub, self.section_sub
        if K != a.kernel():
            raise ValidationError("image(kappa) = ker(alpha)", tuple(K.set ^ a.kernel().set))
        if not meet(K, S).is_trivial:
            raise ValidationError("kernel meets section trivially", tuple(sorted(K.set & S.set)))
        if not join_family([K, S]).is_whole:
            raise ValidationError("kernel and section generate A", ())

    @property
    def X(self) -> FiniteGroup:
        return self.kappa.dom

    @property
    def A(self) -> FiniteGroup:
        return self.alpha.dom

    @property
    def B(self) -> FiniteGroup:
        return self.alpha.cod

    @cached_property
    def kernel_sub(self) -> Subgroup:
        return Subgroup(self.A, self.kappa.map, check=False)

    @cached_property
    def section_sub(self) -> Subgroup:
        return Subgroup(self.A, self.beta.map, check=False)

    def kernel_image(self, S: Subgroup) -> Subgroup:
        """kappa(S) as a subgroup of A."""
        return Subgroup(self.A, tuple(self.kappa.map[x] for x in S.elems), check=False)

    def kernel_preimage(self, U: Subgroup) -> Subgroup:
        """kappa^-1(U) as a subgroup of X."""
        u = U.set
        return Subgroup(self.X, tuple(x for x in self.X if self.kappa.map[x] in u), check=False)

    @cached_property
    def _kappa_inv(self) -> dict[int, int]:
        return {a: x for x, a in enumerate(self.kappa.map)}

    def kappa_inverse(self, a: int) -> int:
        return self._kappa_inv[a]

    def describe(self) -> str:
        return f"{self.X.label} -> {self.A.label} <=> {self.B.label}"

    def to_record(self) -> dict:
        return {
            "X": self.X.label,
            "A": self.A.label,
            "B": self.B.label,
            "kappa": list(self.kappa.map),
            "alpha": list(self.alpha.map),
            "beta": list(self.beta.map),
        }


def semidirect_product(act: BAction, label: str | None = None) -> SplitExtension:
    """X ⋊ B with (x, b)(x', b') = (x·(b.x'), bb'); (x, b) sits at x*|B| + b."""
    X, B = act.X, act.B
    nb = B.order
    xm, bm, a = X.mul, B.mul, act.table
    table = tuple(
        tuple(xm[x][a[b][x2]] * nb + bm[b][b2] for x2 in range(X.order) for b2 in range(nb))
        for x in range(X.order)
        for b in range(nb)
    )
    if label is None:
        sep = "x" if act.is_trivial() else ":"
        label = f"{_compound(X.label)}{sep}{_compound(B.label)}"
    A = FiniteGroup(table, label, tuple((x, b) for x in range(X.order) for b in range(nb)))
    return SplitExtension(
        kappa=GroupHom(X, A, tuple(x * nb for x in range(X.order)), check=False),
        alpha=GroupHom(A, B, tuple(i % nb for i in range(A.order)), check=False),
        beta=GroupHom(B, A, tuple(range(nb)), check=False),
    )


def action_of_split_extension(ext: SplitExtension) -> BAction:
    """b.x = kappa^-1(beta(b) kappa(x) beta(b)^-1)."""
    A = ext.A
    k, b = ext.kappa.map, ext.beta.map
    return BAction(ext.B, ext.X, tuple(tuple(ext.kappa_inverse(A.conj(b[g], k[x])) for x in ext.X) for g in ext.B))


def point_isomorphism(ext: SplitExtension) -> GroupIso:
    """(x, b) -> kappa(x) beta(b) from the rebuilt semidirect product onto ext.A.

    The returned isomorphism commutes with the kernel inclusions, the
    projections and the sections; a ValidationError is raised otherwise.
    """
    sd = semidirect_product(action_of_split_extension(ext))
    nb = ext.B.order
    A, k, b = ext.A, ext.kappa.map, ext.beta.map
    phi = GroupIso(sd.A, A, tuple(A.mul[k[i // nb]][b[i % nb]] for i in range(sd.A.order)))
    if compose(ext.alpha, phi).map != sd.alpha.map:
        raise ValidationError("iso commutes with alpha", ())
    if compose(phi, sd.beta).map != ext.beta.map:
        raise ValidationError("iso commutes with beta", ())
    if compose(phi, sd.kappa).map != ext.kappa.map:
        raise ValidationError("iso commutes with kappa", ())
    return phi


def extension_from_decomposition(K: Subgroup, B: Subgroup) -> SplitExtension:
    """The split extension K -> X <=> B of a normal K with K ∧ B = 0 and K ∨ B = X."""
    X = K.parent
    if B.parent != X or K.order * B.order != X.order or not meet(K, B).is_trivial:
        raise InputError("K and B do not decompose their group")
    Kg, Bg = K.as_group(), B.as_group()
    to_b = [-1] * X.order
    for b in B.elems:
        for k in K.elems:
            to_b[X.mul[k][b]] = B.local(b)
    return SplitExtension(
        kappa=GroupHom(Kg, X, K.elems, check=False),
        alpha=GroupHom(X, Bg, tuple(to_b)),
        beta=GroupHom(Bg, X, B.elems, check=False),
    )


@lru_cache(maxsize=64)
def conjugation_extension(X: FiniteGroup) -> SplitExtension:
    """X --<1,0>--> X x X <==pi2/<1,1>==> X."""
    P = direct_product(X, X)
    G = P.group
    return SplitExtension(
        kappa=GroupHom(X, G, tuple(P.pair(x, 0) for x in X), check=False),
        alpha=P.proj2,
        beta=P.diagonal(),
    )


# -- subpoints and cores -------------------------------------------------------


@dataclass(frozen=True)
class PointSubobject:
    """A subgroup U of ext.A containing beta(B): a subobject of the point."""

    ext: SplitExtension
    U: Subgroup

    def __post_init__(self):
        if not self.ext.section_sub <= self.U:
            raise InputError(f"{self.U} does not contain the section image")

    @cached_property
    def kernel_part(self) -> Subgroup:
        """U ∩ kappa(X), a subgroup of A."""
        return meet(self.U, self.ext.kernel_sub)

    @cached_property
    def kernel_in_X(self) -> Subgroup:
        return self.ext.kernel_preimage(self.U)


def enumerate_subpoints(ext: SplitExtension) -> list[PointSubobject]:
    L = lattice(ext.A, force=True)
    base = L.index(ext.section_sub)
    return [PointSubobject(ext, L[j]) for j in L.above(base)]


def action_core(S: Subgroup, act: BAction) -> Subgroup:
    """Largest B-invariant subgroup of X contained in S.

    Iterates Y <- Y ∩ g.Y over the generators g of B until nothing changes.
    A fixpoint satisfies Y ⊆ g.Y with |g.Y| = |Y|, hence g.Y = Y for every
    generator and so for all of B.
    """
    if S.parent != act.X:
        raise InputError(f"{S} is not a subgroup of {act.X.label}")
    Y = set(S.elems)
    gens = act.B.generators
    changed = True
    while changed:
        changed = False
        for g in gens:
            row = act.table[g]
            moved = {row[y] for y in Y}
            smaller = Y & moved
            if len(smaller) != len(Y):
                Y = smaller
                changed = True
    return Subgroup(act.X, tuple(Y), check=False)


def action_core_by_intersection(S: Subgroup, act: BAction) -> Subgroup:
    """Oracle: the intersection of b.S over every b in B."""
    if S.parent != act.X:
        raise InputError(f"{S} is not a subgroup of {act.X.label}")
    common = set(S.elems)
    for b in act.B:
        common &= {act.table[b][s] for s in S.elems}
    return Subgroup(act.X, tuple(common), check=False)


def action_core_by_join(S: Subgroup, act: BAction) -> Subgroup:
    """Oracle: the join of every B-invariant subgroup contained in S."""
    L = lattice(act.X, force=True)
    family = [H for H in L.subgroups if H <= S and act.is_invariant(H)]
    return join_family(family, act.X)


@dataclass(frozen=True)
class SplitExtensionCore:
    """The terminal lifting of S ≤ X to a sub-split-extension of ``ext``.

    ``kernel`` (in X) and ``middle`` (in A) are the subgroups carrying the
    core; ``core`` is the extension they form, ``u`` embeds its kernel in S
    and ``v`` its middle object in A.
    """

    ext: SplitExtension
    S: Subgroup
    kernel: Subgroup
    middle: Subgroup
    core: SplitExtension
    u: GroupHom
    v: GroupHom

    def terminality_violations(self) -> list[PointSubobject]:
        """Subpoints whose kernel part lies in kappa(S) but which miss v."""
        kS = self.ext.kernel_image(self.S)
        return [P for P in enumerate_subpoints(self.ext) if P.kernel_part <= kS and not P.U <= self.middle]

    def verify(self) -> None:
        if not (self.u.is_injective() and self.v.is_injective()):
            raise ValidationError("core maps are monomorphisms", ())
        act = action_of_split_extension(self.ext)
        if not (self.kernel <= self.S and act.is_invariant(self.kernel)):
            raise ValidationError("core kernel is invariant and inside S", tuple(self.kernel.elems))
        bad = self.terminality_violations()
        if bad:
            raise ValidationError("terminality", tuple(bad[0].U.elems))


def split_extension_core(S: Subgroup, ext: SplitExtension, verify: bool = False) -> SplitExtensionCore:
    if S.parent != ext.X:
        raise InputError(f"{S} is not a subgroup of the kernel {ext.X.label}")
    act = action_of_split_extension(ext)
    Xbar = action_core(S, act)
    k = ext.kappa.map
    Abar = generate(ext.A, {k[x] for x in Xbar.elems} | set(ext.beta.map))
    Xg, Ag, Sg = Xbar.as_group(), Abar.as_group(), S.as_group()
    core = SplitExtension(
        kappa=GroupHom(Xg, Ag, tuple(Abar.local(k[x]) for x in Xbar.elems), check=False),
        alpha=GroupHom(Ag, ext.B, tuple(ext.alpha.map[a] for a in Abar.elems), check=False),
        beta=GroupHom(ext.B, Ag, tuple(Abar.local(a) for a in ext.beta.map), check=False),
    )
    u = GroupHom(Xg, Sg, tuple(S.local(x) for x in Xbar.elems), check=False)
    result = SplitExtensionCore(ext, S, Xbar, Abar, core, u, Abar.inclusion())
    if verify:
        result.verify()
    return result


# -- points, pullbacks and the fibrewise right adjoint -------------------------


def _pair_group(pairs: list[tuple[int, int]], G: FiniteGroup, H: FiniteGroup, label: str) -> tuple[FiniteGroup, dict]:
    """Subgroup of G x H given by its (sorted) element pairs, as a group."""
    pairs = sorted(pairs)
    pos = {p: i for i, p in enumerate(pairs)}
    gm, hm = G.mul, H.mul
    table = tuple(tuple(pos[gm[a][c], hm[b][d]] for (c, d) in pairs) for (a, b) in pairs)
    return FiniteGroup(table, label, tuple(pairs)), pos


def pullback_point(ext: SplitExtension, f: GroupHom) -> SplitExtension:
    """Change of base of ext (over B) along f: Z -> B.

    The middle object is {(z, a) : f(z) = alpha(a)} with the first
    projection, the section z -> (z, beta(f(z))) and kernel x -> (0, kappa(x)).
    """
    if f.cod != ext.B:
        raise InputError("pullback map must land in the base of the point")
    Z, A = f.dom, ext.A
    al = ext.alpha.map
    fibres: dict[int, list[int]] = {}
    for a in A:
        fibres.setdefault(al[a], []).append(a)
    pairs = [(z, a) for z in Z for a in fibres.get(f.map[z], [])]
    P, pos = _pair_group(pairs, Z, A, f"{_compound(Z.label)}*{_compound(A.label)}")
    return SplitExtension(
        kappa=GroupHom(ext.X, P, tuple(pos[0, ext.kappa.map[x]] for x in ext.X), check=False),
        alpha=GroupHom(P, Z, tuple(z for z, _ in P.elements), check=False),
        beta=GroupHom(Z, P, tuple(pos[z, ext.beta.map[f.map[z]]] for z in Z), check=False),
    )


@dataclass(frozen=True)
class FibreProduct:
    ext: SplitExtension
    kernel_product: object  # DirectProduct of the two kernels


def fibre_product(e1: SplitExtension, e2: SplitExtension) -> FibreProduct:
    """Product of two points over the same base, with kernel X1 x X2."""
    if e1.B != e2.B:
        raise InputError("points live over different bases")
    A1, A2 = e1.A, e2.A
    fibres: dict[int, list[int]] = {}
    for a in A2:
        fibres.setdefault(e2.alpha.map[a], []).append(a)
    pairs = [(a, c) for a in A1 for c in fibres.get(e1.alpha.map[a], [])]
    P, pos = _pair_group(pairs, A1, A2, f"{_compound(A1.label)}*{_compound(A2.label)}")
    K = direct_product(e1.X, e2.X)
    k1, k2 = e1.kappa.map, e2.kappa.map
    ext = SplitExtension(
        kappa=GroupHom(K.group, P, tuple(pos[k1[x], k2[y]] for x, y in K.group.elements), check=False),
        alpha=GroupHom(P, e1.B, tuple(e1.alpha.map[a] for a, _ in P.elements), check=False),
        beta=GroupHom(e1.B, P, tuple(pos[e1.beta.map[b], e2.beta.map[b]] for b in e1.B), check=False),
    )
    return FibreProduct(ext, K)


def fibrewise_right_adjoint(p: GroupHom, sec: GroupHom, ext: SplitExtension) -> SplitExtension:
    """Right adjoint of change of base along the split epi p: E -> B.

    For a point (gamma, delta, iota) over E with kernel Y, pull it back along
    sec∘p, take the split extension core of the diagonal Y -> Y x Y in the
    fibre product of the two points, and pull the result back along sec.
    """
    E, B = p.dom, p.cod
    if sec.dom != B or sec.cod != E:
        raise InputError("section must go B -> E")
    if any(p.map[sec.map[b]] != b for b in B):
        raise InputError("p∘sec is not the identity")
    if ext.B != E:
        raise InputError("the point must live over the domain of p")
    sp = compose(sec, p)
    shifted = pullback_point(ext, sp)
    prod = fibre_product(ext, shifted)
    K = prod.kernel_product
    diag = Subgroup(K.group, tuple(K.pair(y, y) for y in ext.X), check=False)
    core = split_extension_core(diag, prod.ext).core
    return pullback_point(core, sec)


def point_homs(P1: SplitExtension, P2: SplitExtension) -> list[tuple[int, ...]]:
    """Morphisms of points f: A1 -> A2 (alpha2∘f = alpha1, f∘beta1 = beta2).

    Brute force over homomorphisms A1 -> A2, searched on the generators
    beta1(B) and kappa1(X1) with the section images pinned.
    """
    if P1.B != P2.B:
        raise InputError("points live over different bases")
    A1, A2 = P1.A, P2.A
    bgens = list(P1.B.generators)
    xgens = list(P1.X.generators)
    gens = [P1.beta.map[g] for g in bgens] + [P1.kappa.map[x] for x in xgens]
    orders2 = A2.element_orders
    kern2 = P2.kappa.map
    candidates = [[P2.beta.map[g]] for g in bgens] + [
        [y for y in kern2 if A1.element_order(g) % orders2[y] == 0] for g in gens[len(bgens):]
    ]
    out = []
    for m in hom_search(A1, A2, gens, candidates):
        if all(P2.alpha.map[m[a]] == P1.alpha.map[a] for a in A1) and all(
            m[P1.beta.map[b]] == P2.beta.map[b] for b in P1.B
        ):
            out.append(m)
    return sorted(set(out))


def equivariant_homs(act1: BAction, act2: BAction) -> list[tuple[int, ...]]:
    """Homomorphisms X1 -> X2 commuting with the two B-actions."""
    if act1.B != act2.B:
        raise InputError("actions of different groups")
    out = []
    for m in hom_search(act1.X, act2.X):
        if all(m[act1.table[b][x]] == act2.table[b][m[x]] for b in act1.B for x in act1.X):
            out.append(m)
    return sorted(out)


def split_epis(E: FiniteGroup, B: FiniteGroup) -> Iterator[tuple[GroupHom, GroupHom]]:
    """Every pair (p, sec) with p: E -> B, sec: B -> E and p∘sec = 1."""
    sections = hom_enumerate(B, E, force=True)
    for p in hom_enumerate(E, B, force=True):
        if not p.is_surjective():
            continue
        for s in sections:
            if all(p.map[s.map[b]] == b for b in B):
                yield p, s


def transport(ext: SplitExtension, iso: GroupIso) -> SplitExtension:
    """Re-base a point along an isomorphism iso: B' -> B."""
    return pullback_point(ext, iso)
