import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from pgi.errors import DedekindError, LatticeTooLargeError, SpecError
from pgi.families import FamilySpec, build_group, cyclic_spec
from pgi.lattice import (
    abelian_invariants,
    agemo,
    all_subgroups,
    center,
    centralizer_of_element,
    cyclic_subgroup,
    derived_subgroup,
    generated_subgroup,
    is_dedekind,
    is_normal,
    normal_closure,
    normalizer,
    omega,
    r_of_g,
    r_of_g_cyclic,
    whole,
)

SMALL = ["C4", "E4", "C8", "E8", "D8", "Q8", "A4", "D16", "Q16", "E16"]


def lattice_sets(G, **kw):
    return {frozenset(S.elements.tolist()) for S in all_subgroups(G, **kw).subgroups}


@pytest.mark.parametrize("name", SMALL)
def test_lattice_matches_subset_oracle(group, name):
    G = group(name)
    assert lattice_sets(G) == oracles.subgroups_by_subsets(oracles.table(G))


@pytest.mark.parametrize("spec", [
    FamilySpec("f1", n=3, extra_factors=[1], s="neg_one", bsq=[1, 0]),
    FamilySpec("f2", n=3, astar_factors=[1], s="neg_one", z=[1], bsq=[0, 0]),
    FamilySpec("f1", n=4, extra_factors=[1], s="neg_one_plus", bsq=[0, 1]),
    FamilySpec("f2", n=4, astar_factors=[1, 1], s="neg_one_plus", z=[1, 1], bsq=[1, 0, 0]),
    FamilySpec("sharpness_example", p=3, k=1),
])
def test_lattice_matches_join_oracle(spec):
    G = build_group(spec)
    assert lattice_sets(G) == oracles.subgroups_by_joins(oracles.table(G))


def test_both_enumeration_methods_agree(group):
    for name in ("D16", "Q8xC4", "A4", "SD32"):
        G = group(name)
        ext = {S.members for S in all_subgroups(G, method="extension").subgroups}
        joins = {S.members for S in all_subgroups(G, method="join").subgroups}
        assert ext == joins


def test_extension_method_rejects_nonsolvable(group):
    with pytest.raises(SpecError):
        all_subgroups(build_group(FamilySpec("perm_group", generators=[[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]])),
                      method="extension")


def test_subgroup_counts(group):
    assert len(all_subgroups(group("Q8"))) == 6
    assert len(all_subgroups(group("D8"))) == 10
    for p in (2, 3, 5, 7):
        assert len(all_subgroups(build_group(cyclic_spec(p, p)))) == p + 3


def test_subgroup_cap():
    G = build_group(cyclic_spec(2, 2, 2, 2, 2))
    with pytest.raises(LatticeTooLargeError):
        all_subgroups(G, cap=20)


def test_generated_subgroup(group):
    G = group("Q8")
    assert generated_subgroup(G, []).order == 1
    assert generated_subgroup(G, [int(np.flatnonzero(G.elem_order == 4)[0])]).order == 4
    A4 = group("A4")
    assert generated_subgroup(A4, [int(np.flatnonzero(A4.elem_order == 2)[0])]).order == 2


def test_normality_examples(group):
    D8 = group("D8")
    refl = [g for g in range(8) if D8.elem_order[g] == 2 and g not in center(D8)]
    H = cyclic_subgroup(D8, refl[0])
    assert not is_normal(H)
    assert normalizer(H).order == 4 and normal_closure(D8, H).order == 4
    assert is_normal(center(D8))


def test_a4_normalizer_equals_normal_closure(group):
    A4 = group("A4")
    g = int(np.flatnonzero(A4.elem_order == 2)[0])
    H = cyclic_subgroup(A4, g)
    V = normalizer(H)
    assert V.order == 4 and V == normal_closure(A4, H)
    assert A4.order // V.order == 3 and normal_closure(A4, H).order // H.order == 2


def test_centralizer_and_center(group):
    G = group("D16")
    for g in range(G.order):
        C = centralizer_of_element(G, g)
        assert cyclic_subgroup(G, g) <= C and center(G) <= C
        assert set(C.elements.tolist()) == oracles.centralizer(oracles.table(G), g)
    assert centralizer_of_element(G, 0) == whole(G)
    assert center(group("D8")).order == 2
    G = build_group(FamilySpec("sharpness_example", p=3, k=1))
    Z = center(G)
    assert Z.order == 9
    assert (G.elem_order[~Z.mask] == 9).all()


def test_omega_agemo_derived(group):
    C8xC2 = build_group(cyclic_spec(8, 2))
    assert omega(whole(C8xC2), 2, 1).order == 4
    assert agemo(whole(C8xC2), 2, 1).order == 4
    assert agemo(whole(C8xC2), 2, 0) == whole(C8xC2)
    assert omega(whole(C8xC2), 2, 10) == whole(C8xC2)
    assert omega(whole(C8xC2), 2, 0).order == 1
    assert omega(group("Q8"), 2, 1).order == 2
    assert agemo(group("D8"), 2, 1) == center(group("D8"))
    assert derived_subgroup(group("Q8")).order == 2
    assert derived_subgroup(group("A4")).order == 4
    assert derived_subgroup(group("C8")).order == 1
    with pytest.raises(SpecError):
        omega(group("A4"), 2, 1)


def test_abelian_invariants(group):
    assert abelian_invariants(build_group(cyclic_spec(8, 2))) == [8, 2]
    assert abelian_invariants(group("E4")) == [2, 2]
    assert abelian_invariants(build_group(cyclic_spec(2, 4, 2))) == [4, 2, 2]
    assert abelian_invariants(build_group(cyclic_spec(2, 3))) == [6]
    with pytest.raises(SpecError):
        abelian_invariants(group("Q8"))


def test_dedekind(group):
    assert is_dedekind(group("Q8")) and is_dedekind(group("C8"))
    assert not is_dedekind(group("D8"))
    for name in SMALL + ["Q8xC4", "A5"]:
        G = group(name)
        lat = all_subgroups(G)
        assert is_dedekind(G) == bool(lat.normal.all())


def test_r_of_g(group):
    assert r_of_g(group("D8")).order == 1
    assert r_of_g(group("Q16")).order == 2
    assert r_of_g(group("Q8xC4")).order == 2
    assert r_of_g(group("Q16")) == r_of_g_cyclic(group("Q16"))
    with pytest.raises(DedekindError):
        r_of_g(group("Q8"))


def test_normal_flags_match_oracle(group):
    for name in ("D16", "A4", "Q8xC4"):
        G = group(name)
        mul = oracles.table(G)
        lat = all_subgroups(G)
        for S, flag, N in zip(lat.subgroups, lat.normal, lat.norm_masks):
            els = frozenset(S.elements.tolist())
            assert bool(flag) == oracles.is_normal(mul, els)
            assert set(np.flatnonzero(N).tolist()) == oracles.normalizer(mul, els)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 31), min_size=0, max_size=3))
def test_generated_subgroup_matches_closure_oracle(seed):
    from conftest import named
    G = named("Q8xC4")
    assert set(generated_subgroup(G, seed).elements.tolist()) == oracles.closure(oracles.table(G), seed)
