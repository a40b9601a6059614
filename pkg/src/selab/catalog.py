"""The shipped corpus of small groups and its manifest file format.

A manifest lists one constructor spec per line (``#`` starts a comment).
Besides the group-kernel specs it accepts ``semidirect(X, B, k)``, the
semidirect product of X by B for the k-th homomorphism B -> Aut(X) in
:func:`~selab.groups.hom_enumerate` order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from selab.actions import SplitExtension, action_from_hom, semidirect_product, trivial_action
from selab.errors import InputError
from selab.groups import (
    FiniteGroup,
    automorphism_group,
    construct_group,
    hom_enumerate,
    read_table,
    write_table,
)
from selab.groups import _SPEC_RE, _split_args

log = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = 24


@dataclass(frozen=True)
class CatalogEntry:
    spec: str
    group: FiniteGroup
    extension: SplitExtension | None = field(default=None, compare=False)
    kind: str = "base"

    @property
    def label(self) -> str:
        return self.group.label

    @property
    def order(self) -> int:
        return self.group.order


@dataclass
class Catalog:
    entries: list[CatalogEntry] = field(default_factory=list)

    def __iter__(self) -> Iterator[CatalogEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def groups(self, max_order: int | None = None) -> list[FiniteGroup]:
        return [e.group for e in self.entries if max_order is None or e.order <= max_order]

    def get(self, label: str) -> CatalogEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def extensions(self, max_order: int | None = None) -> list[SplitExtension]:
        """Split extensions carried by the product entries: each semidirect
        product, and both factor orders of each direct product."""
        out = []
        for e in self.entries:
            if max_order is not None and e.order > max_order:
                continue
            if e.extension is not None:
                out.append(e.extension)
            if e.kind == "direct":
                X, Y = _direct_factors(e.spec)
                out.append(semidirect_product(trivial_action(Y, X)))
                out.append(semidirect_product(trivial_action(X, Y)))
        return out


def _direct_factors(spec: str) -> tuple[FiniteGroup, FiniteGroup]:
    m = _SPEC_RE.match(spec)
    a, b = _split_args(m.group(2))
    return build_entry(a).group, build_entry(b).group


_CACHE: dict[str, CatalogEntry] = {}


def build_entry(spec: str, base_dir: Path | None = None) -> CatalogEntry:
    """Construct a catalog entry from one manifest spec."""
    spec = spec.strip()
    m = _SPEC_RE.match(spec)
    name = m.group(1) if m else spec
    if name == "from_table":
        path = Path(_split_args(m.group(2))[0].strip("'\""))
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return CatalogEntry(spec, read_table(path), kind="table")
    if spec in _CACHE:
        return _CACHE[spec]
    if name == "semidirect":
        args = _split_args(m.group(2))
        if len(args) != 3 or not args[2].isdigit():
            raise InputError(f"semidirect takes (X, B, hom_index), got {spec!r}")
        X, B = build_entry(args[0]).group, build_entry(args[1]).group
        aut = automorphism_group(X, force=True)
        homs = hom_enumerate(B, aut.group, force=True)
        k = int(args[2])
        if not 0 <= k < len(homs):
            raise InputError(f"{spec}: only {len(homs)} homomorphisms {B.label} -> Aut({X.label})")
        ext = semidirect_product(action_from_hom(homs[k], aut), label=f"{X.label}:{B.label}#{k}")
        entry = CatalogEntry(spec, ext.A, ext, kind="semidirect")
    else:
        kind = "direct" if name == "direct_product" else "base"
        entry = CatalogEntry(spec, construct_group(spec), kind=kind)
    _CACHE[spec] = entry
    return entry


def default_specs(max_order: int = DEFAULT_MAX_ORDER) -> list[str]:
    """Cyclic C1-C16, dihedral D3-D8, Q8, S3, S4, A4, then every direct product
    of two nontrivial base groups and every semidirect product of a base group
    by a nontrivial action of another, up to ``max_order``."""
    base = [f"cyclic({n})" for n in range(1, 17)]
    base += [f"dihedral({n})" for n in range(3, 9)]
    base += ["quaternion8", "symmetric(3)", "symmetric(4)", "alternating(4)"]
    groups = {s: construct_group(s) for s in base}
    specs = [s for s in base if groups[s].order <= max_order]
    nontrivial = [s for s in base if groups[s].order > 1]
    for i, a in enumerate(nontrivial):
        for b in nontrivial[i:]:
            if groups[a].order * groups[b].order <= max_order:
                specs.append(f"direct_product({a}, {b})")
    for x in nontrivial:
        X = groups[x]
        for b in nontrivial:
            B = groups[b]
            if X.order * B.order > max_order:
                continue
            aut = automorphism_group(X, force=True)
            for k, h in enumerate(hom_enumerate(B, aut.group, force=True)):
                if any(h.map):
                    specs.append(f"semidirect({x}, {b}, {k})")
    return specs


def default_catalog(max_order: int = DEFAULT_MAX_ORDER) -> Catalog:
    return Catalog([build_entry(s) for s in default_specs(max_order)])


def load_catalog(path: str | Path) -> Catalog:
    path = Path(path)
    entries = []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            entries.append(build_entry(line, path.parent))
        except InputError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from None
    log.debug("loaded %d catalog entries from %s", len(entries), path)
    return Catalog(entries)


def save_catalog(catalog: Catalog, path: str | Path) -> None:
    """Write a manifest; groups read from tables get their table written alongside."""
    path = Path(path)
    lines = []
    for e in catalog:
        if e.kind == "table":
            table = f"{e.label}.table"
            write_table(e.group, path.parent / table)
            lines.append(f"from_table({table})")
        else:
            lines.append(e.spec)
    path.write_text("".join(line + "\n" for line in lines))


def catalog_io(mode: str, path: str | Path, catalog: Catalog | None = None) -> Catalog | None:
    if mode == "load":
        return load_catalog(path)
    if mode == "save":
        if catalog is None:
            raise InputError("save needs a catalog")
        save_catalog(catalog, path)
        return None
    raise InputError(f"catalog_io mode must be 'load' or 'save', got {mode!r}")


__all__ = [
    "Catalog",
    "CatalogEntry",
    "build_entry",
    "catalog_io",
    "default_catalog",
    "default_specs",
    "load_catalog",
    "save_catalog",
]
