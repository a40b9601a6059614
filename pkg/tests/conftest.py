import itertools

import pytest
from hypothesis import HealthCheck, settings

from selab.groups import FiniteGroup, construct_group

settings.register_profile("selab", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("selab")

SMALL_SPECS = [
    "cyclic(1)",
    "cyclic(2)",
    "cyclic(4)",
    "cyclic(6)",
    "direct_product(cyclic(2), cyclic(2))",
    "symmetric(3)",
    "dihedral(4)",
    "quaternion8",
    "direct_product(cyclic(2), cyclic(4))",
    "dihedral(5)",
    "alternating(4)",
]


@pytest.fixture(scope="session")
def S3() -> FiniteGroup:
    return construct_group("symmetric(3)")


@pytest.fixture(scope="session")
def small_groups() -> list[FiniteGroup]:
    return [construct_group(s) for s in SMALL_SPECS]


def brute_subgroups(X: FiniteGroup) -> set[frozenset[int]]:
    """Every subset containing 0 and closed under multiplication."""
    out = set()
    rest = list(range(1, X.order))
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            s = frozenset((0,) + combo)
            if all(X.mul[a][b] in s for a in s for b in s):
                out.add(s)
    return out


def brute_homs(X: FiniteGroup, Y: FiniteGroup) -> set[tuple[int, ...]]:
    out = set()
    for rest in itertools.product(range(Y.order), repeat=X.order - 1):
        m = (0,) + rest
        if all(m[X.mul[a][b]] == Y.mul[m[a]][m[b]] for a in X for b in X):
            out.add(m)
    return out


# S3 element indices (permutations of {0,1,2} in lexicographic order)
S3_ID, S3_T23, S3_T12, S3_C123, S3_C132, S3_T13 = range(6)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
