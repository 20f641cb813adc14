"""Epicenter / capability decision procedures and product theorems."""

import pytest

from capkit.abelian import VarietyDescriptor
from capkit.capability import (PairOfGroups, corollary33_applicable,
                               epicenter, exterior_g_center, is_capable,
                               is_capable_pair, pair_product_check,
                               product_epicenter_check,
                               theorem22_zero_map_check, varietal_capability)
from capkit.errors import (EngineUnavailableError, NotNormalError)
from capkit.groups import (center, construct_group, derived_subgroup,
                           subgroup_closure, trivial_group, trivial_subgroup,
                           whole_subgroup)

EPICENTER_ORACLES = [
    ("perm:(1 2);(1 2 3)", 1),     # S3: trivial center forces Z* = 1
    ("cyclic:6", 6),
    ("cyclic:2 x cyclic:2", 1),
    ("dihedral:4", 1),
    ("quaternion:8", 2),
    ("cyclic:4 x cyclic:2", 2),
    ("perm:(1 2);(1 2 3) x cyclic:3", 3),
    ("dihedral:6", 1),
]


@pytest.mark.parametrize("spec,order", EPICENTER_ORACLES)
def test_epicenter_oracles(spec, order):
    g = construct_group(spec)
    epi = epicenter(g)
    assert epi.order == order
    assert epi.member_set() <= center(g).member_set()


def test_engine_dispatch():
    c6 = construct_group("cyclic:6")
    assert epicenter(c6, engine="bar").members == \
        epicenter(c6, engine="abelian").members
    s3 = construct_group("perm:(1 2);(1 2 3)")
    with pytest.raises(EngineUnavailableError):
        epicenter(s3, engine="abelian")
    with pytest.raises(EngineUnavailableError):
        epicenter(construct_group("cyclic:25 x cyclic:5"), engine="bar")


def test_is_capable():
    assert is_capable(construct_group("cyclic:6")).verdict.status \
        == "not_capable"
    assert is_capable(construct_group("cyclic:6 x cyclic:6")).verdict.status \
        == "capable"
    assert is_capable(trivial_group()).verdict.status == "capable"
    rep = is_capable(construct_group("quaternion:8"))
    assert rep.engine == "homology"
    assert rep.epicenter_factors == (2,)


def test_varietal_capability():
    g444 = construct_group("abelian:[4,4,4]")
    rep = varietal_capability(g444, VarietyDescriptor.parse("PN:1,2"))
    assert rep.verdict.status == "capable" and rep.engine == "classifier"
    rep2 = varietal_capability(construct_group("cyclic:6 x cyclic:6"),
                               VarietyDescriptor.abelian())
    assert rep2.verdict.status == "capable"
    rep3 = varietal_capability(construct_group("dihedral:4"),
                               VarietyDescriptor.nilpotent(2))
    assert rep3.verdict.status == "undetermined"


class TestPairs:
    def test_pair_requires_normal(self):
        g = construct_group("dihedral:4")
        refl = subgroup_closure(g, [4])
        with pytest.raises(NotNormalError):
            PairOfGroups(g, refl)

    def test_example_pairs(self):
        c6 = construct_group("cyclic:6")
        p = PairOfGroups(c6, subgroup_closure(c6, [2]))  # (C6, C3)
        z = exterior_g_center(p)
        assert z.order == 3  # the whole C3
        assert is_capable_pair(p).verdict.status == "not_capable"

        g = construct_group("cyclic:6 x cyclic:6")
        n = subgroup_closure(g, [12, 2])  # (2,0), (0,2): C3 x C3
        p2 = PairOfGroups(g, n)
        assert exterior_g_center(p2).is_trivial
        assert is_capable_pair(p2).verdict.status == "capable"

    def test_trivial_subgroup_always_capable(self):
        g = construct_group("cyclic:6")
        p = PairOfGroups(g, trivial_subgroup(g))
        assert is_capable_pair(p).verdict.status == "capable"

    def test_capable_group_gives_capable_pairs(self):
        # Z*(G) = 1 forces Z*(G) & N = 1 for every normal N
        g = construct_group("dihedral:4")
        assert is_capable(g).verdict.status == "capable"
        for n in [center(g), derived_subgroup(g), whole_subgroup(g)]:
            assert is_capable_pair(PairOfGroups(g, n)).verdict.status \
                == "capable"


class TestProductChecks:
    def test_coprime_equality(self):
        chk = product_epicenter_check(construct_group("cyclic:2"),
                                      construct_group("cyclic:3"))
        assert chk.inclusion_holds and chk.equality_holds and chk.coprime

    def test_strict_witness_c2_c2(self):
        c2 = construct_group("cyclic:2")
        chk = product_epicenter_check(c2, construct_group("cyclic:2"))
        assert chk.inclusion_holds and not chk.equality_holds and chk.strict

    def test_s3_c3(self):
        chk = product_epicenter_check(
            construct_group("perm:(1 2);(1 2 3)"), construct_group("cyclic:3"))
        assert chk.equality_holds and chk.coprime

    def test_pair_product(self):
        c2 = construct_group("cyclic:2")
        c3 = construct_group("cyclic:3")
        p1 = PairOfGroups(c2, whole_subgroup(c2))
        p2 = PairOfGroups(c3, whole_subgroup(c3))
        chk = pair_product_check(p1, p2)
        assert chk.equality_holds and chk.coprime

    def test_pair_product_noncoprime_reported(self):
        c6 = construct_group("cyclic:6")
        p = PairOfGroups(c6, subgroup_closure(c6, [2]))
        chk = pair_product_check(p, p)
        assert not chk.coprime
        assert isinstance(chk.equality_holds, bool)


class TestTheorem22:
    def test_coprime_true(self):
        assert theorem22_zero_map_check([construct_group("cyclic:4"),
                                         construct_group("cyclic:9")])

    def test_trivial_epicenter_true(self):
        assert theorem22_zero_map_check(
            [construct_group("perm:(1 2);(1 2 3)"),
             construct_group("cyclic:3")])

    def test_c4_c4_false(self):
        c4 = construct_group("cyclic:4")
        assert not theorem22_zero_map_check([c4, c4])

    def test_implies_product_equality(self):
        cases = [("cyclic:2", "cyclic:3"), ("cyclic:4", "cyclic:4"),
                 ("cyclic:2", "cyclic:2"), ("cyclic:4", "cyclic:9")]
        for sa, sb in cases:
            a, b = construct_group(sa), construct_group(sb)
            if theorem22_zero_map_check([a, b]):
                assert product_epicenter_check(a, b).equality_holds, (sa, sb)


class TestCorollary33:
    def test_abelian_coprime(self):
        assert corollary33_applicable(
            [construct_group("cyclic:4"), construct_group("cyclic:9")],
            VarietyDescriptor.polynilpotent(2, 1))

    def test_class_too_big(self):
        assert not corollary33_applicable(
            [construct_group("dihedral:4"), construct_group("cyclic:3")],
            VarietyDescriptor.polynilpotent(1, 1))

    def test_not_coprime(self):
        c6 = construct_group("cyclic:6")
        assert not corollary33_applicable(
            [c6, c6], VarietyDescriptor.polynilpotent(2, 1))

    def test_factorwise_fallback(self):
        # force the factor-wise path with a tiny max_order
        assert corollary33_applicable(
            [construct_group("cyclic:4"), construct_group("cyclic:9")],
            VarietyDescriptor.polynilpotent(1, 1), max_order=6)
