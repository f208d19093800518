import json
import os

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multigraded.cohomo import free_resolution
from multigraded.lattice import box
from multigraded.rees import (CapTooSmall, MonomialIdeal, product_of_powers, rees_build, rees_depth,
                              rees_veronese_depth, rees_veronese_depth_lc, stabilization)

from conftest import GOLDEN

PRINCIPAL = MonomialIdeal([(1,)])
MAXIMAL = MonomialIdeal([(1, 0), (0, 1)])
MAXIMAL_SQUARE = MonomialIdeal([(2, 0), (1, 1), (0, 2)])
NON_CM = MonomialIdeal([(4, 0), (3, 1), (1, 3), (0, 4)])


def test_generators_are_minimalized():
    assert MonomialIdeal([(2, 0), (1, 1), (2, 1), (3, 3)]).generators == ((2, 0), (1, 1))


def test_powers_and_products():
    assert MAXIMAL.power(2) == MAXIMAL_SQUARE
    assert product_of_powers([MAXIMAL, MAXIMAL], (1, 1)) == MAXIMAL_SQUARE
    assert MAXIMAL.power(0) == MonomialIdeal([(0, 0)])


def test_principal_ideal_has_no_relations():
    pres = rees_build([PRINCIPAL])
    assert pres.relations == ()
    assert rees_depth(pres) == 2


def test_maximal_ideal_blowup_relation():
    pres = rees_build([MAXIMAL])
    assert pres.ring.names == ("x", "y", "z1", "z2")
    (rel,) = pres.relations
    assert pres.ring.format_poly(rel[0]) == "x*z2 - y*z1"
    assert pres.module.rel_shifts == ((1, 1, 1),)
    assert rees_depth(pres) == 3


def test_two_principal_ideals_give_a_polynomial_ring():
    pres = rees_build([MonomialIdeal([(1, 0)]), MonomialIdeal([(0, 1)])])
    assert pres.relations == ()
    assert pres.ring.q == 4
    assert rees_depth(pres) == 4


def test_hilbert_fidelity_on_build():
    for ideals in ([MAXIMAL], [MAXIMAL_SQUARE], [NON_CM], [MAXIMAL, MonomialIdeal([(1, 1)])]):
        pres = rees_build(ideals)
        M, ring = pres.module, pres.ring
        for n in box((0,) * ring.q, (5,) * (ring.q - pres.r) + (2,) * pres.r):
            assert M.dim(n) == pres.expected_dim(n)


def test_non_cm_witness_depth():
    pres = rees_build([NON_CM])
    res = free_resolution(pres.module)
    assert res.betti_numbers() == [1, 9, 18, 15, 6, 1]
    assert res.verify()
    assert rees_depth(pres) == 1 < pres.ring.q


def test_unit_index_is_rees_depth():
    for I in (MAXIMAL, MAXIMAL_SQUARE):
        assert rees_veronese_depth([I], (1,)) == rees_depth(rees_build([I]))


def test_standard_graduation_identity():
    # building R(I^2) directly is the same as building R of the power ideal
    assert rees_veronese_depth([MAXIMAL], (2,)) == rees_depth(rees_build([MAXIMAL_SQUARE]))


@pytest.mark.parametrize("a,b", [((1,), (0,)), ((2,), (0,)), ((1,), (1,)), ((2,), (1,)), ((3,), (0,))])
def test_resolution_and_local_cohomology_routes_agree(a, b):
    base = rees_build([MAXIMAL])
    assert rees_veronese_depth([MAXIMAL], a, b) == rees_veronese_depth_lc(base, a, b)


def test_local_cohomology_route_on_non_cm_witness():
    base = rees_build([NON_CM])
    assert rees_veronese_depth_lc(base, (1,)) == rees_depth(base) == 1
    assert rees_veronese_depth_lc(base, (2,)) == 3


def test_local_cohomology_route_needs_the_rees_algebra_itself():
    with pytest.raises(ValueError):
        rees_veronese_depth_lc(rees_build([MAXIMAL], powers=(2,)), (1,))


def test_cap_too_small():
    with pytest.raises(CapTooSmall) as info:
        rees_build([MAXIMAL.power(3)], relation_cap=4)
    assert info.value.cap == 4
    assert rees_build([MAXIMAL.power(3)], doublings=0).relation_cap == 8


def test_build_rejects_bad_input():
    with pytest.raises(ValueError):
        rees_build([MAXIMAL, PRINCIPAL])
    with pytest.raises(ValueError):
        rees_build([MAXIMAL], powers=(0,))
    with pytest.raises(ValueError):
        rees_build([])


def test_stabilization_of_maximal_ideal():
    table, onset = stabilization([MAXIMAL], [(1,), (2,), (3,), (4,)])
    assert set(table.values()) == {3} and onset == (1,)


def test_stabilization_routes_agree_on_maximal_square():
    # a = 3 would put 9 variables in the ambient ring of the direct resolution
    lc, onset_lc = stabilization([MAXIMAL_SQUARE], [(1,), (2,)], route="local-cohomology")
    res, onset_res = stabilization([MAXIMAL_SQUARE], [(1,), (2,)])
    assert lc == res == {(1,): 3, (2,): 3} and onset_lc == onset_res == (1,)


def test_golden_tables_are_well_formed():
    for name, want in (("maximal", [3, 3, 3, 3]), ("maximal_square", [3, 3, 3, 3]),
                       ("non_cm", [1, 3, 3, 3, 3])):
        with open(os.path.join(GOLDEN, "rees", name + ".json"), encoding="utf-8") as fh:
            frozen = json.load(fh)
        assert [row["depth"] for row in frozen["table"]] == want
        assert "resolution" in frozen["table"][0]["routes"]


@settings(max_examples=10, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(any), min_size=1, max_size=3))
def test_random_ideals_satisfy_hilbert_fidelity(gens):
    pres = rees_build([MonomialIdeal(gens)])
    for n in box((0, 0, 0), (6, 6, 2)):
        assert pres.module.dim(n) == pres.expected_dim(n)
