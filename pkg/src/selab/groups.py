"""Finite groups as exact Cayley tables.

Every group stores its full multiplication table with the identity at index
0.  Constructors produce tables in a deterministic element order, so labels,
reports and subgroup index sets are stable between runs.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from selab.errors import CapacityError, InputError, ValidationError

Table = tuple[tuple[int, ...], ...]

DEFAULT_AUT_BOUND = 24
DEFAULT_HOM_BOUND = 12
MAX_PERM_DEGREE = 5


def _check_table(rows: Sequence[Sequence[int]]) -> tuple[Table, tuple[int, ...]]:
    """Validate a raw table and return it with its inverse map."""
    n = len(rows)
    if n == 0:
        raise ValidationError("shape", (), "empty table")
    table = tuple(tuple(int(v) for v in row) for row in rows)
    for i, row in enumerate(table):
        if len(row) != n:
            raise ValidationError("shape", (i,), f"row {i} has {len(row)} entries, expected {n}")
        for j, v in enumerate(row):
            if not 0 <= v < n:
                raise ValidationError("closure", (i, j), f"entry {v} outside [0, {n})")
    for a in range(n):
        if table[0][a] != a or table[a][0] != a:
            raise ValidationError("identity", (0, a), "index 0 is not a two-sided identity")
    inv = []
    for a in range(n):
        row = table[a]
        try:
            b = row.index(0)
        except ValueError:
            raise ValidationError("inverse", (a,), f"no right inverse for {a}") from None
        if table[b][a] != 0:
            raise ValidationError("inverse", (a, b), f"{b} is a right but not a left inverse of {a}")
        inv.append(b)
    m = np.asarray(table, dtype=np.int32)
    for a in range(n):
        # (a*b)*c versus a*(b*c) for all b, c at once
        left = m[m[a]]
        right = m[a][m]
        bad = np.argwhere(left != right)
        if bad.size:
            b, c = (int(v) for v in bad[0])
            raise ValidationError("associativity", (a, b, c))
    return table, tuple(inv)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table.

    ``mul[a][b]`` is the index of the product ``a*b``; index 0 is the
    identity.  ``elements`` optionally names each index (permutation tuples,
    pairs for products) and is used only for display and lookup.
    """

    mul: Table
    label: str = "G"
    elements: tuple | None = None
    inv: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        table, inv = _check_table(self.mul)
        object.__setattr__(self, "mul", table)
        object.__setattr__(self, "inv", inv)
        if self.elements is not None:
            if len(self.elements) != len(table):
                raise InputError(f"{len(self.elements)} element names for a group of order {len(table)}")
            object.__setattr__(self, "elements", tuple(self.elements))

    @property
    def order(self) -> int:
        return len(self.mul)

    @property
    def identity(self) -> int:
        return 0

    def __len__(self) -> int:
        return len(self.mul)

    def __iter__(self) -> Iterator[int]:
        return iter(range(len(self.mul)))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return self._hash

    @cached_property
    def _key(self):
        return self.mul

    @cached_property
    def _hash(self) -> int:
        return hash(self.mul)

    def __repr__(self):
        return f"FiniteGroup({self.label}, order={self.order})"

    def op(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def product(self, *xs: int) -> int:
        r = 0
        for x in xs:
            r = self.mul[r][x]
        return r

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul[self.mul[g][x]][self.inv[g]]

    def commutator(self, h: int, k: int) -> int:
        """h k h^-1 k^-1."""
        m = self.mul
        return m[m[m[h][k]][self.inv[h]]][self.inv[k]]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv[a], -k
        r = 0
        for _ in range(k):
            r = self.mul[r][a]
        return r

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        orders = []
        for a in range(self.order):
            k, x = 1, a
            while x != 0:
                x = self.mul[x][a]
                k += 1
            orders.append(k)
        return tuple(orders)

    def element_order(self, a: int) -> int:
        return self.element_orders[a]

    def is_abelian(self) -> bool:
        m = self.mul
        return all(m[a][b] == m[b][a] for a in range(self.order) for b in range(a))

    def index(self, element) -> int:
        """Index of a named element (permutation tuple, pair, ...)."""
        if self.elements is None:
            raise InputError(f"{self.label} has no element names")
        try:
            return self._element_index[element]
        except KeyError:
            raise InputError(f"{element!r} is not an element of {self.label}") from None

    @cached_property
    def _element_index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def closure(self, gens: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by ``gens`` via a breadth-first word search."""
        gens = [g for g in set(gens) if g != 0]
        seen = {0}
        frontier = [0]
        m = self.mul
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = m[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A greedily chosen irredundant generating set.

        Elements are tried in order of decreasing element order; an element
        is kept when it enlarges the subgroup generated so far.
        """
        orders = self.element_orders
        gens: list[int] = []
        current = frozenset([0])
        for a in sorted(range(1, self.order), key=lambda x: (-orders[x], x)):
            if a in current:
                continue
            gens.append(a)
            current = self.closure(gens)
            if len(current) == self.order:
                break
        # a later generator can make an earlier one redundant
        for g in list(gens):
            rest = [h for h in gens if h != g]
            if len(self.closure(rest)) == self.order:
                gens = rest
        return tuple(gens)

    def name(self, a: int) -> str:
        if self.elements is None:
            return str(a)
        return str(self.elements[a])


# -- catalog constructors ----------------------------------------------------


def _perm_group(perms: Iterable[tuple[int, ...]], label: str) -> FiniteGroup:
    elems = sorted(set(perms))
    index = {p: i for i, p in enumerate(elems)}
    table = tuple(tuple(index[tuple(p[q[i]] for i in range(len(q)))] for q in elems) for p in elems)
    return FiniteGroup(table, label, tuple(elems))


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InputError(f"cyclic group needs n >= 1, got {n}")
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return FiniteGroup(table, f"C{n}", tuple(range(n)))


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; element (k, e) is r^k s^e."""
    if n < 3:
        raise InputError(f"dihedral group needs n >= 3, got {n}")
    elems = [(k, e) for e in (0, 1) for k in range(n)]
    index = {x: i for i, x in enumerate(elems)}

    def mult(x, y):
        (k, e), (l, f) = x, y
        return ((k + (l if e == 0 else -l)) % n, (e + f) % 2)

    table = tuple(tuple(index[mult(x, y)] for y in elems) for x in elems)
    return FiniteGroup(table, f"D{n}", tuple(elems))


def symmetric(n: int) -> FiniteGroup:
    if not 1 <= n <= MAX_PERM_DEGREE:
        raise InputError(f"symmetric group degree must be in [1, {MAX_PERM_DEGREE}], got {n}")
    return _perm_group(itertools.permutations(range(n)), f"S{n}")


def _is_even(p: tuple[int, ...]) -> bool:
    inversions = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inversions % 2 == 0


def alternating(n: int) -> FiniteGroup:
    if not 1 <= n <= MAX_PERM_DEGREE:
        raise InputError(f"alternating group degree must be in [1, {MAX_PERM_DEGREE}], got {n}")
    return _perm_group((p for p in itertools.permutations(range(n)) if _is_even(p)), f"A{n}")


_QUAT_UNITS = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def quaternion8() -> FiniteGroup:
    elems = [(s, u) for u in "1ijk" for s in (1, -1)]
    index = {x: i for i, x in enumerate(elems)}

    def mult(x, y):
        sign, unit = _QUAT_UNITS[x[1], y[1]]
        return (x[0] * y[0] * sign, unit)

    table = tuple(tuple(index[mult(x, y)] for y in elems) for x in elems)
    names = tuple(("" if s > 0 else "-") + u for s, u in elems)
    return FiniteGroup(table, "Q8", names)


def _compound(label: str) -> str:
    return f"({label})" if any(c in label for c in "x:") else label


@dataclass(frozen=True)
class DirectProduct:
    """X x Y with its canonical injections and projections."""

    group: FiniteGroup
    left: FiniteGroup
    right: FiniteGroup
    inj1: GroupHom
    inj2: GroupHom
    proj1: GroupHom
    proj2: GroupHom

    def pair(self, x: int, y: int) -> int:
        return x * self.right.order + y

    def split(self, a: int) -> tuple[int, int]:
        return divmod(a, self.right.order)

    def diagonal(self) -> GroupHom:
        """<1, 1>: X -> X x X (only when both factors coincide)."""
        if self.left != self.right:
            raise InputError("diagonal needs equal factors")
        return GroupHom(self.left, self.group, tuple(self.pair(x, x) for x in self.left))


def direct_product(X: FiniteGroup, Y: FiniteGroup, label: str | None = None) -> DirectProduct:
    """Componentwise product; element (x, y) sits at index x*|Y| + y."""
    nx, ny = X.order, Y.order
    mx, my = X.mul, Y.mul
    table = tuple(
        tuple(mx[x1][x2] * ny + my[y1][y2] for x2 in range(nx) for y2 in range(ny))
        for x1 in range(nx)
        for y1 in range(ny)
    )
    elems = tuple((x, y) for x in range(nx) for y in range(ny))
    G = FiniteGroup(table, label or f"{_compound(X.label)}x{_compound(Y.label)}", elems)
    return DirectProduct(
        G, X, Y,
        inj1=GroupHom(X, G, tuple(x * ny for x in range(nx))),
        inj2=GroupHom(Y, G, tuple(range(ny))),
        proj1=GroupHom(G, X, tuple(a // ny for a in range(G.order))),
        proj2=GroupHom(G, Y, tuple(a % ny for a in range(G.order))),
    )


# -- Cayley table text format ------------------------------------------------


def parse_table_text(text: str) -> list[list[int]]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValidationError("shape", (), "empty table file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "order" or not head[1].isdigit():
        raise ValidationError("shape", (), f"first line must be 'order n', got {lines[0]!r}")
    n = int(head[1])
    rows = lines[1:]
    if len(rows) != n:
        raise ValidationError("shape", (len(rows),), f"expected {n} rows, found {len(rows)}")
    try:
        return [[int(v) for v in row.split()] for row in rows]
    except ValueError as exc:
        raise ValidationError("shape", (), f"non-integer entry: {exc}") from None


def format_table(G: FiniteGroup) -> str:
    lines = [f"order {G.order}"]
    lines += [" ".join(str(v) for v in row) for row in G.mul]
    return "\n".join(lines) + "\n"


def read_table(path: str | Path, label: str | None = None) -> FiniteGroup:
    path = Path(path)
    rows = parse_table_text(path.read_text())
    return FiniteGroup(rows, label or path.stem)


def write_table(G: FiniteGroup, path: str | Path) -> None:
    Path(path).write_text(format_table(G))


_SPEC_RE = re.compile(r"\s*([a-z_0-9]+)\s*\((.*)\)\s*$", re.S)


def _split_args(s: str) -> list[str]:
    args, depth, cur = [], 0, []
    for ch in s:
        if ch == "," and depth == 0:
            args.append("".join(cur).strip())
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    if "".join(cur).strip():
        args.append("".join(cur).strip())
    return args


def construct_group(spec: str) -> FiniteGroup:
    """Build a group from a catalog spec such as ``direct_product(cyclic(2), symmetric(3))``."""
    m = _SPEC_RE.match(spec)
    if not m:
        if spec.strip() == "quaternion8":
            return quaternion8()
        raise InputError(f"malformed group spec {spec!r}")
    name, rest = m.group(1), m.group(2)
    args = _split_args(rest)
    simple = {"cyclic": cyclic, "dihedral": dihedral, "symmetric": symmetric, "alternating": alternating}
    if name in simple:
        if len(args) != 1 or not args[0].isdigit():
            raise InputError(f"{name} takes one integer argument, got {rest!r}")
        return simple[name](int(args[0]))
    if name == "quaternion8":
        if args:
            raise InputError("quaternion8 takes no arguments")
        return quaternion8()
    if name == "direct_product":
        if len(args) != 2:
            raise InputError(f"direct_product takes two group specs, got {rest!r}")
        return direct_product(construct_group(args[0]), construct_group(args[1])).group
    if name == "from_table":
        if len(args) != 1:
            raise InputError("from_table takes one path")
        return read_table(args[0].strip("'\""))
    raise InputError(f"unknown group constructor {name!r}")


# -- homomorphisms -------------------------------------------------------------


def is_homomorphism(mapping: Sequence[int], dom: FiniteGroup, cod: FiniteGroup) -> bool:
    if len(mapping) != dom.order:
        raise InputError(f"map has length {len(mapping)}, domain order is {dom.order}")
    for v in mapping:
        if not 0 <= v < cod.order:
            raise InputError(f"map entry {v} outside codomain of order {cod.order}")
    if mapping[0] != 0:
        return False
    dm, cm = dom.mul, cod.mul
    return all(mapping[dm[a][b]] == cm[mapping[a]][mapping[b]] for a in range(dom.order) for b in range(dom.order))


@dataclass(frozen=True, eq=False)
class GroupHom:
    dom: FiniteGroup
    cod: FiniteGroup
    map: tuple[int, ...]
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(v) for v in self.map))
        if self.check and not is_homomorphism(self.map, self.dom, self.cod):
            a, b = self._failure()
            raise ValidationError("homomorphism", (a, b), f"map({a}*{b}) != map({a})*map({b})")

    def _failure(self) -> tuple[int, int]:
        if self.map[0] != 0:
            return (0, 0)
        dm, cm, f = self.dom.mul, self.cod.mul, self.map
        for a in range(self.dom.order):
            for b in range(self.dom.order):
                if f[dm[a][b]] != cm[f[a]][f[b]]:
                    return (a, b)
        return (-1, -1)

    def __call__(self, x: int) -> int:
        return self.map[x]

    def __eq__(self, other):
        if not isinstance(other, GroupHom):
            return NotImplemented
        return self.map == other.map and self.dom == other.dom and self.cod == other.cod

    def __hash__(self):
        return hash(self.map)

    def __repr__(self):
        return f"GroupHom({self.dom.label} -> {self.cod.label}, {list(self.map)})"

    def is_injective(self) -> bool:
        return len(set(self.map)) == self.dom.order

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.cod.order

    def then(self, g: GroupHom) -> GroupHom:
        """g after self."""
        return compose(g, self)

    def image(self):
        from selab.lattice import Subgroup

        return Subgroup(self.cod, self.map)

    def kernel(self):
        from selab.lattice import Subgroup

        return Subgroup(self.dom, [x for x in self.dom if self.map[x] == 0])

    def image_of(self, elems: Iterable[int]) -> list[int]:
        return sorted({self.map[x] for x in elems})


def compose(g: GroupHom, f: GroupHom) -> GroupHom:
    """g ∘ f."""
    if f.cod != g.dom:
        raise InputError(f"cannot compose {f.dom.label}->{f.cod.label} with {g.dom.label}->{g.cod.label}")
    return GroupHom(f.dom, g.cod, tuple(g.map[v] for v in f.map), check=False)


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, tuple(range(G.order)), check=False)


def zero_hom(G: FiniteGroup, H: FiniteGroup) -> GroupHom:
    return GroupHom(G, H, (0,) * G.order, check=False)


class GroupIso(GroupHom):
    """A bijective homomorphism with its inverse map cached."""

    def __post_init__(self):
        super().__post_init__()
        if self.dom.order != self.cod.order or not self.is_injective():
            raise ValidationError("bijectivity", (), f"{self.map} is not a bijection")
        inv = [0] * self.dom.order
        for x, y in enumerate(self.map):
            inv[y] = x
        object.__setattr__(self, "inverse_map", tuple(inv))

    def inverse(self) -> GroupIso:
        return GroupIso(self.cod, self.dom, self.inverse_map, check=False)


# -- hom search ----------------------------------------------------------------


def _extend(X: FiniteGroup, Y: FiniteGroup, gens: Sequence[int], images: Sequence[int]) -> list[int] | None:
    """Extend generator images to the subgroup they generate, or None on conflict."""
    img = [-1] * X.order
    img[0] = 0
    queue = [0]
    mx, my = X.mul, Y.mul
    pairs = list(zip(gens, images))
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        fx = img[x]
        row, yrow = mx[x], my[fx]
        for g, y in pairs:
            z = row[g]
            w = yrow[y]
            iz = img[z]
            if iz == -1:
                img[z] = w
                queue.append(z)
            elif iz != w:
                return None
    return img


def hom_search(
    X: FiniteGroup,
    Y: FiniteGroup,
    gens: Sequence[int] | None = None,
    candidates: Sequence[Sequence[int]] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield every homomorphism X -> Y, as a map tuple, by backtracking.

    Generator images are assigned one at a time; after each assignment the
    partial map is extended over the subgroup generated so far and the
    branch is cut on the first inconsistency.  ``candidates[i]`` restricts
    the images of ``gens[i]``; by default any element whose order divides
    the generator's order is tried.
    """
    gens = list(X.generators if gens is None else gens)
    if candidates is None:
        yo = Y.element_orders
        candidates = [[y for y in Y if X.element_order(g) % yo[y] == 0] for g in gens]
    if len(X.closure(gens)) != X.order:
        raise InputError("generators do not generate the domain")

    chosen: list[int] = []

    def rec(k: int):
        if k == len(gens):
            img = _extend(X, Y, gens, chosen)
            if img is not None:
                yield tuple(img)
            return
        for y in candidates[k]:
            chosen.append(y)
            if _extend(X, Y, gens[: k + 1], chosen) is not None:
                yield from rec(k + 1)
            chosen.pop()

    yield from rec(0)


def hom_enumerate(X: FiniteGroup, Y: FiniteGroup, max_order: int = DEFAULT_HOM_BOUND, force: bool = False) -> list[GroupHom]:
    """All homomorphisms X -> Y, sorted by map tuple."""
    if not force:
        for G in (X, Y):
            if G.order > max_order:
                raise CapacityError(f"hom_enumerate({X.label}, {Y.label})", G.order, max_order)
    maps = sorted(set(hom_search(X, Y)))
    return [GroupHom(X, Y, m, check=False) for m in maps]


# -- automorphisms -------------------------------------------------------------


@dataclass(frozen=True)
class AutomorphismGroup:
    """Aut(X) as a finite group together with the automorphisms it indexes.

    ``group`` has one element per entry of ``isos`` (same index) and its
    multiplication is composition: ``a*b`` acts as ``isos[a] ∘ isos[b]``.
    """

    base: FiniteGroup
    group: FiniteGroup
    isos: tuple[GroupIso, ...]

    def evaluate(self, a: int, x: int) -> int:
        return self.isos[a].map[x]

    def index(self, mapping: Sequence[int]) -> int:
        return self._index[tuple(mapping)]

    @cached_property
    def _index(self) -> dict:
        return {iso.map: i for i, iso in enumerate(self.isos)}


def automorphism_maps(X: FiniteGroup) -> list[tuple[int, ...]]:
    """Automorphisms by backtracking over images of a generating set."""
    orders = X.element_orders
    gens = list(X.generators)
    candidates = [[y for y in X if orders[y] == orders[g]] for g in gens]
    return sorted(m for m in hom_search(X, X, gens, candidates) if len(set(m)) == X.order)


def automorphism_maps_brute_force(X: FiniteGroup) -> list[tuple[int, ...]]:
    """Oracle: scan every bijection fixing the identity."""
    out = []
    for rest in itertools.permutations(range(1, X.order)):
        m = (0,) + rest
        if is_homomorphism(m, X, X):
            out.append(m)
    return out


def automorphism_group(X: FiniteGroup, max_order: int = DEFAULT_AUT_BOUND, force: bool = False) -> AutomorphismGroup:
    if X.order > max_order and not force:
        raise CapacityError(f"automorphism_group({X.label})", X.order, max_order)
    maps = automorphism_maps(X)
    index = {m: i for i, m in enumerate(maps)}
    table = tuple(tuple(index[tuple(f[v] for v in g)] for g in maps) for f in maps)
    A = FiniteGroup(table, f"Aut({X.label})", tuple(maps))
    isos = tuple(GroupIso(X, X, m, check=False) for m in maps)
    return AutomorphismGroup(X, A, isos)
