import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgi.abelian import AbelianAutomorphism, AbelianPresentation, abelian_group, cyclic_extension, element_of
from pgi.errors import ExtensionError, SizeLimitError, SpecError
from pgi.families import (
    FamilySpec,
    build_group,
    construct_sharpness_example,
    expected_order,
    k1_family_spec,
    named_spec,
    parse_s,
)
from pgi.lattice import center, cyclic_subgroup, is_normal, omega, from_elements
from pgi.recognizers import is_generalized_quaternion


# -- abelian presentations and cyclic extensions --------------------------------------


def test_abelian_group_examples():
    C4 = abelian_group(AbelianPresentation((4,)))
    assert sorted(C4.elem_order.tolist()) == [1, 2, 4, 4]
    G = abelian_group(AbelianPresentation((8, 2)))
    assert G.order == 16 and G.exponent == 8
    G = abelian_group(AbelianPresentation((9, 3)))
    assert int((G.elem_order <= 3).sum()) == 9


def test_abelian_vector_bijection():
    pres = AbelianPresentation((4, 2, 3))
    G = abelian_group(pres)
    vecs = [element_of(G, v) for v in pres.vectors()]
    assert sorted(vecs) == list(range(G.order))


def test_automorphism_checks():
    pres = AbelianPresentation((4, 2))
    swapish = AbelianAutomorphism(pres, ((1, 1), (2, 1)))
    assert swapish.is_homomorphism() and swapish.is_bijective()
    bad = AbelianAutomorphism(pres, ((0, 1), (1, 0)))  # a1 -> a2 has order 2, not 4
    assert not bad.is_homomorphism()
    assert (AbelianAutomorphism.power_map(pres, 3) ** 2).is_identity()


def _cyc4(a0, s):
    pres = AbelianPresentation((4,))
    return cyclic_extension(pres, AbelianAutomorphism.power_map(pres, s), 2, a0)


def test_cyclic_extension_quaternion_and_dihedral():
    Q8 = _cyc4((2,), -1)
    assert Q8.order == 8 and int((Q8.elem_order == 2).sum()) == 1
    D8 = _cyc4((0,), -1)
    assert D8.order == 8 and int((D8.elem_order == 2).sum()) == 5


def test_cyclic_extension_conjugation_matches_alpha():
    G = _cyc4((2,), -1)
    b, A = G.marks["b"], G.marks["A"]
    for a in A:
        assert G.conj[b, a] == G.power(a, -1)


def test_cyclic_extension_rejects_moved_a0():
    pres = AbelianPresentation((4,))
    with pytest.raises(ExtensionError):
        cyclic_extension(pres, AbelianAutomorphism.power_map(pres, 3), 2, (1,))


def test_cyclic_extension_rejects_wrong_period():
    pres = AbelianPresentation((8,))
    with pytest.raises(ExtensionError):
        cyclic_extension(pres, AbelianAutomorphism.power_map(pres, 3), 3, (0,))


# -- family specs ------------------------------------------------------------------


def test_spec_json_roundtrip_and_version():
    spec = FamilySpec.from_json('{"kind":"f1","n":4,"extra_factors":[1],"s":"neg_one","bsq":[1,0]}')
    d = json.loads(spec.to_json())
    assert d["v"] == 1
    assert FamilySpec.from_json(spec.to_json()) == spec
    assert spec.group_id == FamilySpec.from_dict(d).group_id
    assert spec.group_id != FamilySpec("f1", n=4, extra_factors=[1], s="neg_one", bsq=[0, 1]).group_id


@pytest.mark.parametrize("text,needle", [
    ('{"kind":"f1","n":4,', "line 1 column"),
    ('{"kind":"f7"}', "unknown kind"),
    ('{"kind":"f1","n":2,"s":"neg_one_plus","bsq":[0]}', "n >= 3"),
    ('{"kind":"f1","n":3,"bsq":[0,1]}', "bsq"),
    ('{"kind":"f1","n":3,"bsq":[2]}', "bsq"),
    ('{"kind":"f1","n":3,"bsq":[0],"colour":1}', "colour"),
    ('{"kind":"f2","n":3,"astar_factors":[1],"z":[0],"bsq":[0,0]}', "z"),
    ('{"kind":"f2","n":1,"astar_factors":[1],"z":[1],"bsq":[0,0]}', "n >= 2"),
    ('{"v":2,"kind":"f1","n":3,"bsq":[0]}', "schema version"),
    ('[1,2]', "JSON object"),
])
def test_spec_errors_name_the_problem(text, needle):
    with pytest.raises(SpecError, match=needle):
        FamilySpec.from_json(text)


def test_parse_s_accepts_spellings():
    assert parse_s("-1") == "neg_one"
    assert parse_s("-1+2^(n-1)") == "neg_one_plus"
    with pytest.raises(SpecError):
        parse_s("3")


def test_f1_dihedral_member():
    G = build_group(FamilySpec("f1", n=3, extra_factors=[], s="neg_one", bsq=[0]))
    assert G.order == 16 and int((G.elem_order == 2).sum()) == 9


def test_f1_action_and_center():
    spec = FamilySpec("f1", n=4, extra_factors=[2, 1], s="neg_one_plus", bsq=[1, 0, 1])
    G = build_group(spec)
    A = from_elements(G, G.marks["A"])
    b = G.marks["b"]
    s = G.marks["s"]
    assert G.order == expected_order(spec) == 2 * 16 * 4 * 2
    for a in A.elements:
        assert G.conj[b, a] == G.power(int(a), s)
    assert center(G) == omega(A, 2, 1)


def test_presentation_two_group():
    # <a, b | a^8 = b^4 = 1, a^b = a^-1> as a family member with A = <a> x <b^2>
    G = build_group(k1_family_spec(5))
    assert G.order == 32
    H = build_group(FamilySpec("f1", n=3, extra_factors=[1], s="neg_one", bsq=[0, 1]))
    assert sorted(G.elem_order.tolist()) == sorted(H.elem_order.tolist())


def test_f2_remark_group():
    G = build_group(FamilySpec("f2", n=2, astar_factors=[1], s="neg_one", z=[1], bsq=[1, 0]))
    assert G.order == 16
    assert not is_normal(cyclic_subgroup(G, G.marks["basis"][0]))


def test_f2_action_twists_a1():
    G = build_group(FamilySpec("f2", n=3, astar_factors=[1], s="neg_one", z=[1], bsq=[0, 0]))
    b, z, a1 = G.marks["b"], G.marks["z"], G.marks["basis"][0]
    assert G.conj[b, a1] == G.mul[G.power(a1, -1), z]
    assert G.order == 32
    A = from_elements(G, G.marks["A"])
    assert center(G) == omega(A, 2, 1)


def test_f2_alpha_squared_checked_directly():
    ok = FamilySpec("f2", n=3, astar_factors=[3], s="neg_one_plus", z=[1], bsq=[0, 0])
    assert build_group(ok).order == 2 * 8 * 8


def test_sharpness_example():
    G = construct_sharpness_example(3, 1)
    assert G.order == 81 and center(G).order == 9
    assert (G.elem_order[~center(G).mask] == 9).all()
    assert construct_sharpness_example(2, 1).order == 16
    with pytest.raises(SizeLimitError):
        construct_sharpness_example(5, 2, cap=2048)


def test_named_specs():
    assert build_group(named_spec("Q16")).order == 16
    assert is_generalized_quaternion(build_group(named_spec("Q32"))) == 5
    assert build_group(named_spec("Q8xQ8")).order == 64
    assert build_group(named_spec("A5")).order == 60
    with pytest.raises(SpecError):
        named_spec("X9")


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.lists(st.integers(1, 2), max_size=2), st.booleans(), st.data())
def test_f1_grid_orders_and_axioms(n, extra, plus, data):
    extra = sorted((f for f in extra if f <= n), reverse=True)
    s = "neg_one_plus" if plus and n >= 3 else "neg_one"
    bsq = data.draw(st.lists(st.integers(0, 1), min_size=1 + len(extra), max_size=1 + len(extra)))
    spec = FamilySpec("f1", n=n, extra_factors=extra, s=s, bsq=bsq)
    G = build_group(spec)
    assert G.order == expected_order(spec)
    assert G.check_axioms()
    b = G.marks["b"]
    assert G.elem_order[G.mul[b, b]] <= 2
    assert np.array_equal(build_group(spec).mul, G.mul)
