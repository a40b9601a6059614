import pytest
from hypothesis import given, strategies as st

from conftest import S3_C123, S3_C132, S3_T12, brute_homs
from selab.actions import (
    BAction,
    PointSubobject,
    SplitExtension,
    action_core,
    action_core_by_intersection,
    action_core_by_join,
    action_from_hom,
    action_of_split_extension,
    actions_of,
    conjugation_action,
    conjugation_extension,
    enumerate_subpoints,
    equivariant_homs,
    extension_from_decomposition,
    fibre_product,
    fibrewise_right_adjoint,
    point_homs,
    point_isomorphism,
    pullback_point,
    semidirect_product,
    split_epis,
    split_extension_core,
    transport,
    trivial_action,
)
from selab.errors import InputError, ValidationError
from selab.groups import (
    GroupHom,
    GroupIso,
    automorphism_group,
    construct_group,
    cyclic,
    dihedral,
    hom_enumerate,
    identity_hom,
    quaternion8,
    symmetric,
    zero_hom,
)
from selab.lattice import generate, is_normal, lattice, normal_core, trivial, whole
from selab.theorems import decompositions


def inversion_action(n: int) -> BAction:
    C = cyclic(n)
    return BAction(cyclic(2), C, (tuple(C), tuple(C.inv)))


# -- actions -----------------------------------------------------------------------------


def test_trivial_hom_gives_trivial_action():
    X = cyclic(3)
    aut = automorphism_group(X)
    act = action_from_hom(zero_hom(cyclic(2), aut.group), aut)
    assert act.is_trivial() and act == trivial_action(cyclic(2), X)


def test_inversion_action_of_c2_on_c3():
    X = cyclic(3)
    aut = automorphism_group(X)
    h = [h for h in hom_enumerate(cyclic(2), aut.group) if any(h.map)][0]
    act = action_from_hom(h, aut)
    assert act.table == ((0, 1, 2), (0, 2, 1))
    assert act == inversion_action(3)


def test_unit_axiom_rejected():
    X = cyclic(3)
    aut = automorphism_group(X)
    with pytest.raises(ValidationError) as exc:
        action_from_hom([1, 1], aut, B=cyclic(2))
    assert exc.value.axiom == "action unit"


def test_composition_axiom_witness():
    # C4 acting on C3 with the generator inverting and its square trivial breaks b.(b.x) = b^2.x
    X, B = cyclic(3), cyclic(4)
    inv = tuple(X.inv)
    ident = tuple(X)
    with pytest.raises(ValidationError) as exc:
        BAction(B, X, (ident, inv, ident, ident))
    assert exc.value.axiom == "action composition"
    b, b2, x = exc.value.witness
    t = (ident, inv, ident, ident)
    assert t[b][t[b2][x]] != t[B.mul[b][b2]][x]


def test_non_automorphism_rejected():
    X, B = cyclic(4), cyclic(2)
    with pytest.raises(ValidationError) as exc:
        BAction(B, X, (tuple(X), (0, 2, 1, 3)))
    assert exc.value.axiom == "action by homomorphisms"


def test_conjugation_action_examples(S3):
    act = conjugation_action(S3)
    assert act(S3_T12, S3_C123) == S3_C132
    assert all(act(0, x) == x for x in S3)
    assert conjugation_action(cyclic(5)).is_trivial()


def test_as_hom_round_trip():
    X = quaternion8()
    aut = automorphism_group(X)
    for act in actions_of(cyclic(2), X)[:6]:
        h = act.as_hom(aut)
        assert action_from_hom(h, aut) == act


def test_actions_count_equals_homs_into_aut():
    X = cyclic(2)
    Y = construct_group("direct_product(cyclic(2), cyclic(2))")
    aut = automorphism_group(Y)
    assert len(actions_of(X, Y)) == len(brute_homs(X, aut.group)) == 4


# -- semidirect products and split extensions -----------------------------------------


def test_trivial_action_gives_abelian_product():
    ext = semidirect_product(trivial_action(cyclic(2), cyclic(3)))
    assert ext.A.order == 6 and ext.A.is_abelian()
    assert 6 in ext.A.element_orders


def test_inversion_gives_nonabelian_product():
    ext = semidirect_product(inversion_action(3))
    A = ext.A
    assert A.order == 6 and not A.is_abelian()
    assert sorted(A.element_orders) == sorted(symmetric(3).element_orders)
    assert A.label == "C3:C2"


def test_trivial_base_gives_kernel_group():
    X = dihedral(4)
    ext = semidirect_product(trivial_action(cyclic(1), X))
    assert ext.A.mul == X.mul


def test_semidirect_carrier_layout():
    act = inversion_action(3)
    ext = semidirect_product(act)
    nb = 2
    for i in ext.A:
        for j in ext.A:
            (x, b), (x2, b2) = divmod(i, nb), divmod(j, nb)
            assert ext.A.mul[i][j] == act.X.mul[x][act(b, x2)] * nb + act.B.mul[b][b2]


def test_round_trip_tablewise():
    for act in actions_of(cyclic(2), dihedral(4)):
        assert action_of_split_extension(semidirect_product(act)) == act


def test_conjugation_extension_gives_conjugation_action(S3):
    assert action_of_split_extension(conjugation_extension(S3)) == conjugation_action(S3)


def test_point_isomorphism_commutes(S3):
    for K, B in decompositions(S3):
        ext = extension_from_decomposition(K, B)
        phi = point_isomorphism(ext)
        assert isinstance(phi, GroupIso)


def test_split_extension_validation(S3):
    A3 = generate(S3, [S3_C123])
    T = generate(S3, [S3_T12])
    ext = extension_from_decomposition(A3, T)
    assert ext.X.order == 3 and ext.B.order == 2
    with pytest.raises(ValidationError):
        SplitExtension(ext.kappa, ext.alpha, GroupHom(ext.B, ext.A, (0, 0)))
    with pytest.raises(InputError):
        extension_from_decomposition(A3, A3)


def test_transport_along_identity():
    ext = semidirect_product(inversion_action(3))
    moved = transport(ext, GroupIso(ext.B, ext.B, tuple(ext.B)))
    assert moved.A.order == ext.A.order
    assert len(point_homs(ext, moved)) == len(point_homs(ext, ext))


# -- subpoints and cores -----------------------------------------------------------------


def test_subpoint_extremes():
    ext = semidirect_product(inversion_action(3))
    pts = enumerate_subpoints(ext)
    assert pts[0].U == ext.section_sub and pts[0].kernel_part.is_trivial
    assert pts[-1].U.is_whole and pts[-1].kernel_part == ext.kernel_sub
    # S3 has exactly two subgroups containing a fixed transposition
    assert len(pts) == 2
    with pytest.raises(InputError):
        PointSubobject(ext, trivial(ext.A))


def test_action_core_examples(S3):
    X = dihedral(4)
    L = lattice(X)
    triv = trivial_action(cyclic(3), X)
    for S in L.subgroups:
        assert action_core(S, triv) == S
    conj = conjugation_action(S3)
    for S in lattice(S3).subgroups:
        assert action_core(S, conj) == normal_core(S)
        if is_normal(S):
            assert action_core(S, conj) == S


@pytest.mark.parametrize("spec", ["dihedral(4)", "quaternion8", "direct_product(cyclic(2), cyclic(4))", "alternating(4)"])
def test_action_core_oracles_agree(spec):
    X = construct_group(spec)
    for act in actions_of(cyclic(2), X)[:8] + actions_of(cyclic(3), X)[:4]:
        for S in lattice(X).subgroups:
            core = action_core(S, act)
            assert core == action_core_by_intersection(S, act) == action_core_by_join(S, act)
            assert act.is_invariant(core) and core <= S


def test_split_core_examples(S3):
    ext = conjugation_extension(S3)
    for S in lattice(S3).subgroups:
        core = split_extension_core(S, ext, verify=True)
        assert core.kernel == normal_core(S)
    act_ext = semidirect_product(inversion_action(3))
    whole_core = split_extension_core(whole(act_ext.X), act_ext, verify=True)
    assert whole_core.middle.is_whole and whole_core.kernel.is_whole
    zero_core = split_extension_core(trivial(act_ext.X), act_ext, verify=True)
    assert zero_core.middle == act_ext.section_sub and zero_core.core.X.order == 1


def test_split_core_maps_are_monos():
    for act in actions_of(cyclic(2), dihedral(4)):
        ext = semidirect_product(act)
        for S in lattice(ext.X).subgroups:
            c = split_extension_core(S, ext)
            assert c.u.is_injective() and c.v.is_injective()
            assert c.terminality_violations() == []


def test_split_core_rejects_foreign_subgroup(S3):
    ext = semidirect_product(inversion_action(3))
    with pytest.raises(InputError):
        split_extension_core(whole(S3), ext)


# -- pullbacks and the fibrewise adjoint ----------------------------------------------------


def test_pullback_along_identity_preserves_order():
    ext = semidirect_product(inversion_action(3))
    pb = pullback_point(ext, identity_hom(ext.B))
    assert pb.A.order == ext.A.order and pb.X == ext.X


def test_fibre_product_orders():
    e1 = semidirect_product(inversion_action(3))
    e2 = semidirect_product(trivial_action(cyclic(2), cyclic(2)))
    fp = fibre_product(e1, e2)
    assert fp.ext.A.order == 3 * 2 * 2
    assert fp.ext.X.order == 6


def test_split_epis_of_s3_onto_c2(S3):
    pairs = list(split_epis(S3, cyclic(2)))
    # one sign map, three transpositions to choose from as section
    assert len(pairs) == 3


def test_adjoint_of_identity_is_isomorphic():
    ext = semidirect_product(inversion_action(3))
    B = ext.B
    R = fibrewise_right_adjoint(identity_hom(B), identity_hom(B), ext)
    assert R.A.order == ext.A.order
    assert len(point_homs(ext, R)) == len(point_homs(ext, ext))


def test_adjoint_with_trivial_kernel_has_trivial_kernel(S3):
    ext = semidirect_product(trivial_action(S3, cyclic(1)))
    for p, sec in split_epis(S3, cyclic(2)):
        assert fibrewise_right_adjoint(p, sec, ext).X.order == 1


def test_adjoint_hom_count_bijection_over_terminal_base(S3):
    p = zero_hom(S3, cyclic(1))
    sec = zero_hom(cyclic(1), S3)
    over_B = [semidirect_product(trivial_action(cyclic(1), construct_group(s))) for s in ("cyclic(2)", "cyclic(3)", "symmetric(3)")]
    for D in [semidirect_product(a) for a in actions_of(S3, cyclic(2)) + actions_of(S3, cyclic(3))]:
        R = fibrewise_right_adjoint(p, sec, D)
        for Ap in over_B:
            assert len(point_homs(pullback_point(Ap, p), D)) == len(point_homs(Ap, R))


def test_equivariant_homs_match_point_homs():
    a1, a2 = inversion_action(3), inversion_action(3)
    assert len(equivariant_homs(a1, a2)) == len(point_homs(semidirect_product(a1), semidirect_product(a2))) == 3


@given(st.sampled_from(["cyclic(3)", "cyclic(4)", "direct_product(cyclic(2), cyclic(2))", "cyclic(6)", "symmetric(3)"]), st.data())
def test_extension_invariants_hold_for_every_action(spec, data):
    X = construct_group(spec)
    B = data.draw(st.sampled_from([cyclic(2), cyclic(3), cyclic(4)]))
    act = data.draw(st.sampled_from(actions_of(B, X)))
    ext = semidirect_product(act)
    assert all(ext.alpha(ext.beta(b)) == b for b in B)
    assert ext.kernel_sub == ext.alpha.kernel()
    assert action_of_split_extension(ext) == act
    S = data.draw(st.sampled_from(lattice(X).subgroups))
    core = split_extension_core(S, ext)
    assert core.kernel <= S and act.is_invariant(core.kernel)
