import itertools
import math

import pytest
from hypothesis import given, strategies as st

from conftest import S3_C123, S3_C132, S3_T12, SMALL_SPECS, brute_homs
from selab.errors import CapacityError, InputError, ValidationError
from selab.groups import (
    FiniteGroup,
    GroupHom,
    GroupIso,
    alternating,
    automorphism_group,
    automorphism_maps,
    automorphism_maps_brute_force,
    compose,
    construct_group,
    cyclic,
    dihedral,
    direct_product,
    format_table,
    hom_enumerate,
    is_homomorphism,
    parse_table_text,
    quaternion8,
    read_table,
    symmetric,
    write_table,
)


@pytest.mark.parametrize(
    "spec, order",
    [
        ("cyclic(1)", 1),
        ("cyclic(7)", 7),
        ("symmetric(3)", 6),
        ("symmetric(4)", 24),
        ("symmetric(5)", 120),
        ("alternating(4)", 12),
        ("alternating(5)", 60),
        ("dihedral(4)", 8),
        ("dihedral(8)", 16),
        ("quaternion8", 8),
        ("direct_product(symmetric(3), cyclic(2))", 12),
    ],
)
def test_construct_orders(spec, order):
    G = construct_group(spec)
    assert G.order == order
    assert construct_group(spec).label == G.label


def test_labels_are_deterministic():
    assert construct_group("dihedral(4)").label == "D4"
    assert construct_group("direct_product(cyclic(2), symmetric(3))").label == "C2xS3"
    assert construct_group("direct_product(cyclic(2), direct_product(cyclic(2), cyclic(2)))").label == "C2x(C2xC2)"


def test_dihedral_matches_presentation():
    # closure of r, s under r^n = s^2 = 1, s r s = r^-1, built by hand on pairs
    for n in range(3, 9):
        D = dihedral(n)
        orders = sorted(D.element_orders)
        expected = sorted([1] + [n // math.gcd(k, n) for k in range(1, n)] + [2] * n)
        assert orders == expected
        assert not D.is_abelian()


def test_quaternion_orders():
    Q = quaternion8()
    assert sorted(Q.element_orders) == [1, 2, 4, 4, 4, 4, 4, 4]
    assert not Q.is_abelian()


def test_permutation_groups_have_identity_first():
    for G in (symmetric(3), symmetric(4), alternating(4), alternating(5)):
        assert G.elements[0] == tuple(range(len(G.elements[0])))
    assert symmetric(3).mul[S3_T12][S3_T12] == 0


@pytest.mark.parametrize("bad", ["cyclic(0)", "dihedral(2)", "symmetric(6)", "alternating(7)", "nonsense(3)", "cyclic(x)"])
def test_construct_rejects(bad):
    with pytest.raises(InputError):
        construct_group(bad)


# -- table validation -----------------------------------------------------------------


def test_non_square_table():
    with pytest.raises(ValidationError) as exc:
        FiniteGroup(((0, 1), (1,)))
    assert exc.value.axiom == "shape"


def test_identity_must_be_index_zero():
    with pytest.raises(ValidationError) as exc:
        FiniteGroup(((1, 0), (0, 1)))
    assert exc.value.axiom == "identity"


def test_missing_inverse():
    with pytest.raises(ValidationError) as exc:
        FiniteGroup(((0, 1, 2), (1, 1, 1), (2, 1, 2)))
    assert exc.value.axiom == "inverse"


def test_non_associative_witness():
    table = ((0, 1, 2), (1, 0, 2), (2, 2, 0))
    with pytest.raises(ValidationError) as exc:
        FiniteGroup(table)
    assert exc.value.axiom == "associativity"
    a, b, c = exc.value.witness
    assert table[table[a][b]][c] != table[a][table[b][c]]


def test_out_of_range_entry():
    with pytest.raises(ValidationError) as exc:
        FiniteGroup(((0, 1), (1, 5)))
    assert exc.value.axiom == "closure"


def test_table_text_round_trip(tmp_path):
    G = dihedral(5)
    assert parse_table_text(format_table(G)) == [list(r) for r in G.mul]
    path = tmp_path / "d5.table"
    write_table(G, path)
    H = read_table(path)
    assert H == G
    assert path.read_text().splitlines()[0] == "order 10"


def test_table_text_order_mismatch():
    with pytest.raises(ValidationError):
        FiniteGroup(parse_table_text("order 3\n0 1\n1 0\n"))


# -- homomorphisms --------------------------------------------------------------------


def test_identity_and_zero_are_homs(S3):
    assert is_homomorphism(tuple(range(6)), S3, S3)
    assert is_homomorphism((0,) * 6, S3, S3)


def test_inconsistent_map_is_not_a_hom():
    C4 = cyclic(4)
    # generator 1 to the involution 2, but 2 -> 1 breaks 1*1 = 2
    assert not is_homomorphism((0, 2, 1, 2), C4, C4)
    with pytest.raises(ValidationError) as exc:
        GroupHom(C4, C4, (0, 2, 1, 2))
    assert exc.value.axiom == "homomorphism"


def test_is_homomorphism_checks_shape(S3):
    with pytest.raises(InputError):
        is_homomorphism((0, 1), S3, S3)
    with pytest.raises(InputError):
        is_homomorphism((0, 1, 2, 3, 4, 9), S3, S3)


@pytest.mark.parametrize("x, y, count", [("cyclic(2)", "cyclic(3)", 1), ("cyclic(2)", "cyclic(2)", 2), ("symmetric(3)", "cyclic(1)", 1)])
def test_hom_counts(x, y, count):
    assert len(hom_enumerate(construct_group(x), construct_group(y))) == count


@pytest.mark.parametrize(
    "x, y",
    [
        ("cyclic(4)", "cyclic(2)"),
        ("symmetric(3)", "cyclic(2)"),
        ("cyclic(2)", "symmetric(3)"),
        ("direct_product(cyclic(2), cyclic(2))", "symmetric(3)"),
        ("cyclic(3)", "symmetric(3)"),
        ("symmetric(3)", "symmetric(3)"),
        ("cyclic(6)", "cyclic(4)"),
    ],
)
def test_hom_enumerate_matches_brute_force(x, y):
    X, Y = construct_group(x), construct_group(y)
    found = [h.map for h in hom_enumerate(X, Y)]
    assert found == sorted(found)
    assert set(found) == brute_homs(X, Y)
    assert len(found) == len(set(found))


def test_hom_count_invariant_under_relabelling():
    X, Y = dihedral(4), symmetric(3)
    base = len(hom_enumerate(X, Y))
    for a in automorphism_maps(X)[:5]:
        inv = [0] * X.order
        for i, v in enumerate(a):
            inv[v] = i
        # relabel X along the automorphism: mul'(i, j) = a^-1(a(i) a(j))
        table = tuple(tuple(inv[X.mul[a[i]][a[j]]] for j in X) for i in X)
        assert len(hom_enumerate(FiniteGroup(table), Y)) == base


def test_hom_capacity():
    with pytest.raises(CapacityError):
        hom_enumerate(symmetric(4), cyclic(2))
    assert len(hom_enumerate(symmetric(4), cyclic(2), force=True)) == 2


def test_compose_and_iso(S3):
    A = automorphism_group(S3)
    f, g = A.isos[1], A.isos[2]
    fg = compose(f, g)
    assert fg.map == tuple(f.map[g.map[x]] for x in S3)
    inv = f.inverse()
    assert compose(f, inv).map == tuple(range(6))
    with pytest.raises(ValidationError):
        GroupIso(S3, S3, (0,) * 6)


def test_kernel_and_image(S3):
    sign = next(h for h in hom_enumerate(S3, cyclic(2)) if any(h.map))
    assert sign.kernel().elems == (0, S3_C123, S3_C132)
    assert sign.image().elems == (0, 1)
    assert sign.is_surjective() and not sign.is_injective()


# -- automorphisms ----------------------------------------------------------------------


@pytest.mark.parametrize(
    "spec, order",
    [
        ("cyclic(1)", 1),
        ("cyclic(2)", 1),
        ("cyclic(8)", 4),
        ("symmetric(3)", 6),
        ("direct_product(cyclic(2), cyclic(2))", 6),
        ("dihedral(4)", 8),
        ("quaternion8", 24),
        ("alternating(4)", 24),
        ("symmetric(4)", 24),
    ],
)
def test_automorphism_orders(spec, order):
    assert automorphism_group(construct_group(spec)).group.order == order


@pytest.mark.parametrize("spec", [s for s in SMALL_SPECS if construct_group(s).order <= 8])
def test_automorphisms_match_brute_force(spec):
    X = construct_group(spec)
    assert automorphism_maps(X) == automorphism_maps_brute_force(X)


def test_automorphism_group_structure():
    X = quaternion8()
    A = automorphism_group(X)
    for a, b in itertools.product(range(A.group.order), repeat=2):
        ab = A.group.mul[a][b]
        assert all(A.evaluate(ab, x) == A.evaluate(a, A.evaluate(b, x)) for x in X)
    assert A.isos[0].map == tuple(range(8))
    assert A.index(A.isos[5].map) == 5


def test_automorphism_capacity():
    with pytest.raises(CapacityError):
        automorphism_group(cyclic(30))


# -- direct products ---------------------------------------------------------------------


def test_direct_product_structure(S3):
    P = direct_product(S3, cyclic(2))
    assert P.group.order == 12
    for h in (P.inj1, P.inj2, P.proj1, P.proj2):
        assert is_homomorphism(h.map, h.dom, h.cod)
    assert compose(P.proj1, P.inj1).map == tuple(range(6))
    diag = direct_product(S3, S3)
    assert compose(diag.proj2, diag.diagonal()).map == tuple(range(6))


def test_trivial_factor_is_unit(S3):
    P = direct_product(cyclic(1), S3)
    assert P.group.mul == S3.mul


@given(st.sampled_from(SMALL_SPECS), st.sampled_from(SMALL_SPECS[:6]))
def test_direct_product_is_componentwise(x, y):
    X, Y = construct_group(x), construct_group(y)
    P = direct_product(X, Y)
    for a in P.group:
        for b in P.group:
            (x1, y1), (x2, y2) = P.split(a), P.split(b)
            assert P.group.mul[a][b] == P.pair(X.mul[x1][x2], Y.mul[y1][y2])


@given(st.sampled_from(SMALL_SPECS), st.data())
def test_group_laws(spec, data):
    G = construct_group(spec)
    a, b, c = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    m = G.mul
    assert m[m[a][b]][c] == m[a][m[b][c]]
    assert m[a][G.inv[a]] == 0 == m[G.inv[a]][a]
    assert m[0][a] == a == m[a][0]
    assert G.conj(a, G.conj(b, c)) == G.conj(m[a][b], c)
    assert G.power(a, G.element_orders[a]) == 0
