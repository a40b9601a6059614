import pytest
from hypothesis import given, strategies as st

from conftest import S3_C123, S3_T12, S3_T13, SMALL_SPECS, brute_subgroups
from selab.errors import CapacityError, InputError, ValidationError
from selab.groups import construct_group, cyclic, dihedral, quaternion8, symmetric
from selab.lattice import (
    Subgroup,
    center,
    centralizer,
    enumerate_subgroups,
    generate,
    generate_counted,
    higgins_commutator,
    is_normal,
    join,
    join_family,
    lattice,
    meet,
    meet_family,
    normal_closure,
    normal_core,
    normal_core_by_conjugates,
    quotient,
    subgroup,
    trivial,
    whole,
)
from selab.theorems import naive_closure


@pytest.fixture(scope="module")
def A3(S3):
    return generate(S3, [S3_C123])


@pytest.fixture(scope="module")
def T12(S3):
    return generate(S3, [S3_T12])


def test_generate_examples(S3):
    assert generate(S3, []).elems == (0,)
    assert generate(S3, [S3_T12]).elems == (0, S3_T12)
    assert generate(S3, [S3_T12, S3_C123]).is_whole


def test_generate_rejects_out_of_range(S3):
    with pytest.raises(InputError):
        generate(S3, [6])


def test_subgroup_validation(S3, A3):
    assert subgroup(S3, [0, S3_C123, 4]) == A3
    with pytest.raises(ValidationError):
        Subgroup(S3, (0, S3_T12, S3_C123))
    with pytest.raises(ValidationError):
        Subgroup(S3, (S3_T12,))


def test_meet_join_examples(S3, A3, T12):
    assert join(T12, T12) == T12
    assert meet(A3, T12).is_trivial
    assert join(T12, generate(S3, [S3_T13])).is_whole


def test_parent_mismatch(S3):
    with pytest.raises(InputError):
        meet(whole(S3), whole(cyclic(6)))


def test_empty_family_conventions(S3):
    assert join_family([], S3) == trivial(S3)
    assert meet_family([], S3) == whole(S3)
    with pytest.raises(InputError):
        join_family([])


@pytest.mark.parametrize(
    "spec, count, normals",
    [
        ("cyclic(1)", 1, 1),
        ("symmetric(3)", 6, 3),
        ("direct_product(cyclic(2), cyclic(2))", 5, 5),
        ("dihedral(4)", 10, 6),
        ("quaternion8", 6, 6),
        ("alternating(4)", 10, 3),
        ("symmetric(4)", 30, 4),
        ("cyclic(12)", 6, 6),
    ],
)
def test_subgroup_counts(spec, count, normals):
    X = construct_group(spec)
    assert len(enumerate_subgroups(X)) == count
    assert len(enumerate_subgroups(X, normal_only=True)) == normals


@pytest.mark.parametrize("spec", [s for s in SMALL_SPECS if construct_group(s).order <= 12])
def test_enumeration_matches_brute_force(spec):
    X = construct_group(spec)
    subs = enumerate_subgroups(X)
    assert {H.set for H in subs} == brute_subgroups(X)
    keys = [(len(H), H.elems) for H in subs]
    assert keys == sorted(keys)


def test_enumeration_capacity():
    with pytest.raises(CapacityError):
        enumerate_subgroups(symmetric(5))


def test_lattice_indices(S3):
    L = lattice(S3)
    assert L.bottom == 0 and L[L.top].is_whole
    for i in range(len(L)):
        for j in range(len(L)):
            assert L[L.meet(i, j)] == meet(L[i], L[j])
            assert L[L.join(i, j)] == join(L[i], L[j])
            assert L.leq(i, j) == (L[i] <= L[j])


def test_normality_examples(S3, A3, T12):
    assert is_normal(trivial(S3))
    assert is_normal(A3)
    assert not is_normal(T12)


def test_normal_closure_examples(S3, A3, T12):
    assert normal_closure(A3) == A3
    assert normal_closure(T12).is_whole
    assert normal_closure(trivial(S3)).is_trivial


def test_higgins_commutator_examples(S3, A3):
    X = whole(S3)
    assert higgins_commutator(trivial(S3), X).is_trivial
    assert higgins_commutator(X, X) == A3
    assert higgins_commutator(A3, X) == A3


def test_centralizer_examples(S3):
    C6 = cyclic(6)
    assert centralizer(whole(C6)).is_whole
    assert centralizer(whole(S3)).is_trivial
    assert centralizer(trivial(S3)).is_whole
    assert center(dihedral(4)).order == 2
    assert center(quaternion8()).order == 2


def test_normal_core_examples(S3, A3, T12):
    assert normal_core(A3) == A3
    assert normal_core(T12).is_trivial
    assert normal_core(whole(S3)).is_whole


def test_quotient(S3, A3):
    Q = quotient(A3)
    assert Q.group.order == 2
    assert Q.projection.kernel() == A3
    with pytest.raises(InputError):
        quotient(generate(S3, [S3_T12]))


# -- properties -------------------------------------------------------------------------

groups = st.sampled_from(SMALL_SPECS).map(construct_group)


@given(groups, st.data())
def test_generate_equals_naive_closure(X, data):
    seed = data.draw(st.lists(st.integers(0, X.order - 1), max_size=4))
    H, steps = generate_counted(X, seed)
    assert H.set == naive_closure(X, seed)
    assert steps <= X.order
    assert set(seed) <= H.set


@given(groups, st.data())
def test_join_family_order_insensitive(X, data):
    subs = lattice(X).subgroups
    fam = data.draw(st.lists(st.sampled_from(subs), max_size=4))
    perm = data.draw(st.permutations(fam))
    J = join_family(fam, X)
    assert join_family(perm, X) == J
    if len(fam) >= 2:
        assert join(join_family(fam[:1], X), join_family(fam[1:], X)) == J
    for H in fam:
        assert H <= J
    # least upper bound among all subgroups
    uppers = [U for U in subs if all(H <= U for H in fam)]
    assert all(J <= U for U in uppers)


@given(groups)
def test_higgins_characterises_normality(X):
    W = whole(X)
    for H in lattice(X).subgroups:
        assert is_normal(H) == (higgins_commutator(H, W) <= H)


@given(groups, st.data())
def test_normal_core_is_maximum_normal_below(X, data):
    subs = lattice(X).subgroups
    S = data.draw(st.sampled_from(subs))
    N = normal_core(S)
    assert N == normal_core_by_conjugates(S)
    below = [H for H in subs if is_normal(H) and H <= S]
    assert N in below
    assert all(H <= N for H in below)


@given(groups, st.data())
def test_binary_join_of_normals_is_normal(X, data):
    normals = enumerate_subgroups(X, normal_only=True)
    H = data.draw(st.sampled_from(normals))
    K = data.draw(st.sampled_from(normals))
    assert is_normal(join(H, K))


@given(groups, st.data())
def test_centralizer_is_largest_commuting_subgroup(X, data):
    S = data.draw(st.sampled_from(lattice(X).subgroups))
    C = centralizer(S)
    Subgroup(X, C.elems)  # validates closure
    for H in lattice(X).subgroups:
        commutes = all(X.mul[h][s] == X.mul[s][h] for h in H for s in S)
        assert commutes == (H <= C)
