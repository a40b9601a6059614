"""Batch runs of the checkers over the catalog.

:func:`run_suite` is what the command line calls; the ``*_reports``
functions build the report list for one family of checks and are also used
directly by the acceptance tests.
"""

from __future__ import annotations

import logging
import random
import time
from typing import Callable, Iterable, Sequence

from selab import omega, theorems
from selab.actions import (
    SplitExtension,
    actions_of,
    conjugation_extension,
    extension_from_decomposition,
    semidirect_product,
    split_epis,
)
from selab.catalog import Catalog, build_entry, default_catalog
from selab.errors import CapacityError
from selab.groups import FiniteGroup
from selab.lattice import lattice
from selab.theorems import FAILS, HOLDS, SKIPPED, CheckReport

log = logging.getLogger(__name__)

SUITES = ("all", "cores", "theorems", "omega")
DEFAULT_MAX_ORDER = 16
OMEGA_LEVELS = (1, 2, 4, 8)

# every group of order at most 12, one per isomorphism class
SMALL_GROUP_SPECS = (
    "cyclic(1)", "cyclic(2)", "cyclic(3)", "cyclic(4)", "direct_product(cyclic(2), cyclic(2))",
    "cyclic(5)", "cyclic(6)", "symmetric(3)", "cyclic(7)",
    "cyclic(8)", "direct_product(cyclic(2), cyclic(4))",
    "direct_product(cyclic(2), direct_product(cyclic(2), cyclic(2)))", "dihedral(4)", "quaternion8",
    "cyclic(9)", "direct_product(cyclic(3), cyclic(3))", "cyclic(10)", "dihedral(5)", "cyclic(11)",
    "cyclic(12)", "direct_product(cyclic(2), cyclic(6))", "alternating(4)", "dihedral(6)",
    "semidirect(cyclic(3), cyclic(4), 1)",
)


def small_groups(max_order: int = 12) -> list[FiniteGroup]:
    groups = [build_entry(s).group for s in SMALL_GROUP_SPECS]
    return [G for G in groups if G.order <= max_order]


def combine(check: str, instance: str, reports: Iterable[CheckReport]) -> CheckReport:
    """Fold many reports of one check into one: the first failure, else holds."""
    start = time.perf_counter()
    n = 0
    millis = 0.0
    skipped = 0
    for r in reports:
        n += 1
        millis += r.millis
        if r.verdict == FAILS:
            return CheckReport(check, f"{instance}; {r.instance}", FAILS, r.witness, millis, r.detail)
        skipped += r.verdict == SKIPPED
    millis += (time.perf_counter() - start) * 1000
    verdict = SKIPPED if n and skipped == n else HOLDS
    return CheckReport(check, instance, verdict, None, millis, f"{n} instances")


def guarded(check: str, instance: str, fn: Callable[[], CheckReport]) -> CheckReport:
    """Run one checker, turning a capacity refusal into a skipped report."""
    try:
        return fn()
    except CapacityError as exc:
        return CheckReport(check, instance, SKIPPED, None, 0.0, str(exc))


# -- instance families ---------------------------------------------------------------


def catalog_extensions(catalog: Catalog, max_order: int) -> list[SplitExtension]:
    """Semidirect and direct product points of the catalog, plus conjugation
    points X x X of base groups, all with middle order at most ``max_order``."""
    exts = catalog.extensions(max_order)
    for e in catalog:
        if e.kind == "base" and e.order ** 2 <= max_order:
            exts.append(conjugation_extension(e.group))
    return exts


def decomposition_instances(groups: Sequence[FiniteGroup]):
    for X in groups:
        for K, B in theorems.decompositions(X):
            yield X, K, B


def generate_seed_sets(groups: Sequence[FiniteGroup], count: int = 1000, seed: int = theorems.DEFAULT_SEED):
    """``count`` random (group, seed set) pairs, grouped by group."""
    rng = random.Random(seed)
    by_group: dict[int, list[list[int]]] = {}
    for _ in range(count):
        g = rng.randrange(len(groups))
        X = groups[g]
        by_group.setdefault(g, []).append([rng.randrange(X.order) for _ in range(rng.randint(0, 3))])
    return [(groups[g], by_group[g]) for g in sorted(by_group)]


def points_over(B: FiniteGroup, max_middle: int) -> list[SplitExtension]:
    """One semidirect point per action of B on each small group, middle order bounded."""
    out = []
    for X in small_groups(max_middle // B.order):
        for act in actions_of(B, X):
            out.append(semidirect_product(act))
    return out


def fibrewise_instances(max_E: int = 8, max_B: int = 4, max_middle: int = 12):
    """(p, sec, D, test points over B) for every split epi p: E -> B with section."""
    for E in small_groups(max_E):
        over_E = points_over(E, max_middle)
        for B in small_groups(max_B):
            if E.order % B.order:
                continue
            over_B = points_over(B, max_middle)
            for p, sec in split_epis(E, B):
                for D in over_E:
                    yield p, sec, D, over_B


# -- report families -------------------------------------------------------------------


def group_theorem_reports(groups: Sequence[FiniteGroup]) -> list[CheckReport]:
    out = []
    for X in groups:
        L = lattice(X, force=True)
        out.append(theorems.check_higgins_normality(X))
        out.append(theorems.check_join_normals_normal(X))
        out.append(theorems.check_three_subobjects(X))
        out.append(combine("commutator_join", X.label, (theorems.check_commutator_join(X, ch) for ch in theorems.normal_chains(X))))
        out.append(combine("clots", X.label, (theorems.check_clots(N) for N in L.subgroups)))
    return out


def decomposition_reports(groups: Sequence[FiniteGroup], seed: int = theorems.DEFAULT_SEED) -> list[CheckReport]:
    out = []
    for X, K, B in decomposition_instances(groups):
        out.append(theorems.check_intersections_binary(X, K, B))
        out.append(theorems.check_intersections_family(X, K, B, seed=seed))
        out.append(theorems.scan_kernel_geometric(extension_from_decomposition(K, B), seed=seed))
    return out


def generate_reports(groups: Sequence[FiniteGroup], count: int = 1000, seed: int = theorems.DEFAULT_SEED) -> list[CheckReport]:
    return [theorems.check_generate_oracle(X, seeds) for X, seeds in generate_seed_sets(groups, count, seed)]


def core_reports(groups: Sequence[FiniteGroup], exts: Sequence[SplitExtension]) -> list[CheckReport]:
    out = []
    for X in groups:
        out.append(theorems.check_normal_core_oracle(X))
        subs = lattice(X, force=True).subgroups
        out.append(combine("normal_core_pullback", X.label, (theorems.check_normal_core_pullback(S) for S in subs)))
    for ext in exts:
        out.append(theorems.check_action_core_oracles(ext))
    return out


def verify_reports(exts: Sequence[SplitExtension], adjunction_order: int = 16) -> list[CheckReport]:
    out = []
    for ext in exts:
        out.append(theorems.check_core_terminality(ext))
        if ext.A.order <= adjunction_order:
            out.append(theorems.check_core_adjunction(ext))
    return out


def fibrewise_reports(max_E: int = 8, max_B: int = 4, max_middle: int = 12) -> list[CheckReport]:
    return [theorems.check_fibrewise_adjoint(p, sec, D, pts) for p, sec, D, pts in fibrewise_instances(max_E, max_B, max_middle)]


def omega_reports(samples: int = 1000, seed: int = theorems.DEFAULT_SEED) -> list[CheckReport]:
    out = [omega.verify_witness()]
    for i in OMEGA_LEVELS:
        out.append(omega.verify_Ni_invariance(i, omega.Ni_samples(i, samples, seed)))
    return out


# -- the runner ----------------------------------------------------------------------------


def run_suite(
    selector: str = "all",
    max_order: int = DEFAULT_MAX_ORDER,
    seed: int = theorems.DEFAULT_SEED,
    verify: bool = False,
    catalog: Catalog | None = None,
    strict: bool = False,
) -> tuple[int, list[CheckReport]]:
    """Run one suite and return (exit code, reports sorted by check name).

    Exit code 0 when nothing fails, 1 on any failure, 3 when ``strict`` and
    some check was skipped for capacity.
    """
    if selector not in SUITES:
        raise ValueError(f"unknown suite {selector!r}; choose from {', '.join(SUITES)}")
    catalog = default_catalog(max(max_order, 1)) if catalog is None else catalog
    groups = catalog.groups(max_order)
    reports: list[CheckReport] = []
    if selector in ("all", "theorems"):
        log.info("theorems over %d groups", len(groups))
        reports += group_theorem_reports(groups)
        reports += decomposition_reports(groups, seed)
        reports += generate_reports(groups, seed=seed)
    if selector in ("all", "cores"):
        exts = catalog_extensions(catalog, max_order)
        log.info("cores over %d groups and %d extensions", len(groups), len(exts))
        reports += core_reports(groups, exts)
        if verify:
            reports += verify_reports(exts)
            reports.append(guarded("fibrewise_adjoint", "|E|<=8, |B|<=4, middle<=12", lambda: combine(
                "fibrewise_adjoint", "|E|<=8, |B|<=4, middle<=12", fibrewise_reports())))
    if selector in ("all", "omega"):
        reports += omega_reports(seed=seed)
    reports.sort(key=lambda r: r.check)
    if any(r.verdict == FAILS for r in reports):
        return 1, reports
    if strict and any(r.verdict == SKIPPED for r in reports):
        return 3, reports
    return 0, reports
