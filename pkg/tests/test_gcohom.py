from fractions import Fraction

import pytest

from cohw import exactla
from cohw.cosimpl import (
    FiniteHom, TableGroup, UnipotentCarrier, cyclic_group, symmetric_group,
)
from cohw.gcohom import (
    GroupAction, cochain_cosimplicial, h0_fixed_points, h0_h1, h1_classes,
    inflation_restriction, les_group_cohomology, serre_twist,
    serre_twist_matches_cosimplicial, trivial_action, z1_enumerate,
)
from cohw.nilpotent import heisenberg

F = Fraction


def _inversion_action(n):
    G = cyclic_group(2)
    U = cyclic_group(n)
    inv = FiniteHom(U, U, {u: U.inv(u) for u in U.elements()}, check=True)
    return GroupAction.from_generator_images(G, U, {1: inv})


def test_c2_inverting_c3():
    act = _inversion_action(3)
    res = h0_h1(act)
    # only 0 is fixed by inversion; every cocycle is a coboundary
    assert res["mode"] == "cosimplicial"
    assert res["h0"] == [0]
    assert res["h1_count"] == 1


def test_c2_trivial_on_c2():
    act = trivial_action(cyclic_group(2), cyclic_group(2))
    res = h0_h1(act)
    assert sorted(res["h0"]) == [0, 1]
    # H^1 = Hom(C2, Z/2): two classes
    assert res["h1_count"] == 2


def test_c2_inverting_c4():
    act = _inversion_action(4)
    res = h0_h1(act)
    # fixed points {0, 2}; cocycles are all of Z/4, coboundaries are -2u
    assert sorted(res["h0"]) == [0, 2]
    assert res["h1_count"] == 2


def test_z1_enumeration_matches_definition():
    act = _inversion_action(4)
    G, U = act.G, act.carrier
    # brute force over all functions with f(0) = 0
    brute = []
    for v in U.elements():
        f = {0: 0, 1: v}
        if all(f[G.mul(g, h)] == U.mul(f[g], act.act(g, f[h]))
               for g in G.elements() for h in G.elements()):
            brute.append(f)
    found = z1_enumerate(act)
    assert len(found) == len(brute) == 4


def test_unipotent_trivial_action_h1_single_class():
    G = cyclic_group(2)
    D = UnipotentCarrier(heisenberg())
    act = trivial_action(G, D)
    res = h0_h1(act)
    assert res["mode"] == "unipotent"
    # everything is fixed
    assert len(res["h0_basis"]) == 3
    dec = res["deciders"]
    C = res["cochain"]
    ident = C.objects[1].identity()
    assert dec["is_trivial"](ident)
    # uniquely divisible target: H^1 of a finite group is a single class,
    # so the tangent space at the base cocycle vanishes
    assert dec["tangent_dimension_at"](ident) == 0


def test_unipotent_sign_action():
    from cohw.cosimpl import LinearHom
    from cohw.nilpotent import abelian_lie_algebra
    G = cyclic_group(2)
    D = UnipotentCarrier(abelian_lie_algebra(1))
    neg = LinearHom(D, D, [[F(-1)]])
    act = GroupAction.from_generator_images(G, D, {1: neg})
    res = h0_h1(act)
    assert res["h0_basis"] == []
    dec = res["deciders"]
    C = res["cochain"]
    # a cochain f with f(e) = 0, f(g) = 1
    cand = [F(0)] * C.objects[1].dim
    cand[C.tuple_index[1][(1,)]] = F(1)
    cand = tuple(cand)
    assert dec["is_cocycle"](cand)
    assert dec["is_trivial"](cand)


def test_serre_twist_abelian():
    act = _inversion_action(3)
    alpha = {0: 0, 1: 1}
    assert serre_twist_matches_cosimplicial(act, alpha)


def test_serre_twist_nonabelian():
    # C2 acting on S3 by conjugation by a transposition
    G = cyclic_group(2)
    S3 = symmetric_group(3)
    t = S3.perms.index((1, 0, 2))
    conj = FiniteHom(S3, S3, {u: S3.mul(S3.mul(t, u), S3.inv(t))
                              for u in S3.elements()}, check=True)
    act = GroupAction.from_generator_images(G, S3, {1: conj})
    # find a nontrivial cocycle: f(g) with f(g) (g.f(g)) = e
    found = None
    for f in z1_enumerate(act):
        if f[1] != S3.identity():
            found = f
            break
    assert found is not None
    assert serre_twist_matches_cosimplicial(act, found)


def test_inflation_restriction():
    G = cyclic_group(4)
    U = cyclic_group(2)
    act = trivial_action(G, U)
    report = inflation_restriction(act, [0, 2])
    assert report["injective"]
    assert report["exact_middle"]
    assert report["h1_quotient"] == 2
    assert report["h1_total"] == 2
    assert report["h1_sub"] == 2


def _mod4_extension(action_on_U):
    """central extension 0 -> Z/2 -> Z/4 -> Z/2 -> 0 with the given
    G-action on Z/4 (must fix {0, 2} and descend)."""
    G = action_on_U.G
    U = action_on_U.carrier
    Z = cyclic_group(2)
    Q = cyclic_group(2)
    incl = {0: 0, 1: 2}
    proj = {u: u % 2 for u in U.elements()}
    actZ = GroupAction(G, Z, {
        g: FiniteHom(Z, Z, {z: {0: 0, 2: 1}[action_on_U.act(g, incl[z])]
                            for z in Z.elements()}, check=False)
        for g in G.elements()}, check=True)
    actQ = GroupAction(G, Q, {
        g: FiniteHom(Q, Q, {q: action_on_U.act(g, q) % 2
                            for q in Q.elements()}, check=False)
        for g in G.elements()}, check=True)
    return actZ, action_on_U, actQ, incl, proj


def test_les_trivial_action_nontrivial_connecting():
    act = trivial_action(cyclic_group(2), cyclic_group(4))
    actZ, actU, actQ, incl, proj = _mod4_extension(act)
    seq = les_group_cohomology(actZ, actU, actQ, incl, proj)
    rep = seq.verify()
    assert rep["ok"], rep
    # the nontrivial hom C2 -> Z/2 does not lift to Z/4 with odd values,
    # so its connecting image in H^2 is nontrivial
    assert len(seq.nodes[6]["elements"]) == 2


def test_les_inversion_action():
    act = _inversion_action(4)
    actZ, actU, actQ, incl, proj = _mod4_extension(act)
    seq = les_group_cohomology(actZ, actU, actQ, incl, proj)
    rep = seq.verify()
    assert rep["ok"], rep


def test_cochain_identities_verified():
    # the constructor checks the cosimplicial identities for small levels
    act = _inversion_action(3)
    C = cochain_cosimplicial(act, N=2)
    assert C.N == 2
