import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multigraded.cohomo import (Inconclusive, Unstable, cech_oracle, cohomology, depth_ab, ext_piece,
                                free_resolution, gamma_fg, gdepth, lc_piece, region_vertex, transform_nonzero,
                                vad_estimate, veronese_depth, veronese_depth_exact, veronese_gdepth)
from multigraded.cohomo.cech import CechOracle
from multigraded.kernel import GradedRing, PrimeField
from multigraded.lattice import box
from multigraded.modcat import FGModule, free_module, module_from_monomial_ideals, monomial_quotient

from conftest import corpus_module

STD = GradedRing("xy", [(1,), (1,)])
BI = GradedRing("xy", [(1, 0), (0, 1)])
KX = GradedRing("x", [(1,)])
SEGRE = GradedRing(["x1", "x2", "y1", "y2"], [(1, 0), (1, 0), (0, 1), (0, 1)])
WINDOW = range(-6, 7)


def binomial_module(ring=SEGRE):
    """S/(x1*y1 - x2*y2): not monomial, so only the generic sweep applies."""
    return FGModule(ring, [(0, 0)], [{0: {(1, 0, 1, 0): 1, (0, 1, 0, 1): -1}}])


# -- resolutions ----------------------------------------------------------------------------------

def test_koszul_resolution():
    res = free_resolution(monomial_quotient(STD, [(1, 0), (0, 1)]))
    assert res.betti_numbers() == [1, 2, 1] and res.proj_dim == 2
    assert res.verify()


def test_resolution_of_x2_xy():
    res = free_resolution(monomial_quotient(STD, [(2, 0), (1, 1)]))
    assert res.proj_dim == 2
    assert res.betti_degrees() == [[(0,)], [(2,), (2,)], [(3,)]]
    assert res.verify()


def test_free_module_resolution_has_length_zero():
    res = free_resolution(free_module(STD))
    assert res.length == 0 and res.proj_dim == 0


def test_generic_sweep_resolution_is_verified():
    res = free_resolution(binomial_module())
    assert not res.exact
    assert res.betti_numbers() == [1, 1]
    assert res.verify()


@pytest.mark.parametrize("name", ["segre_sum", "tri_xy1_y22", "scaled_x1y", "bi_x2_xy", "tri_shifted"])
def test_corpus_resolutions_satisfy_invariants(name):
    assert free_resolution(corpus_module(name)).verify()


def test_fine_and_sweep_routes_agree():
    from multigraded.cohomo.resolution import _resolve_sweep
    for gens in ([(2, 0), (1, 1)], [(1, 1)], [(3, 0), (0, 2), (1, 1)]):
        M = monomial_quotient(BI, gens)
        fine, sweep = free_resolution(M), _resolve_sweep(M)
        assert fine.exact and not sweep.exact
        assert fine.betti_degrees() == sweep.betti_degrees()
        C_fine, C_sweep = cohomology(M), cohomology(M, generic=True)
        for j in range(3):
            for n in box((-4, -4), (4, 4)):
                assert C_fine.ext_dim(j, n) == C_sweep.ext_dim(j, n)


# -- depth ----------------------------------------------------------------------------------------

def test_depth_examples():
    assert depth_ab(free_module(STD)) == 2
    assert depth_ab(monomial_quotient(STD, [(1, 0), (0, 1)])) == 0
    direct_sum = module_from_monomial_ideals(STD, [[(1, 0)], []], [(0,), (0,)])
    assert depth_ab(direct_sum) == 1


def test_depth_plus_projective_dimension():
    for name in ("bi_x2_xy", "segre_x1y1_x2", "tri_xy", "std_m2"):
        C = cohomology(corpus_module(name))
        assert C.depth + C.proj_dim == C.mu


def test_depth_of_zero_module_is_sentinel():
    assert depth_ab(FGModule(STD, [])) == 3


# -- Ext and local cohomology ---------------------------------------------------------------------

def test_ext_of_ring_is_canonical_module():
    S = free_module(STD)
    assert ext_piece(S, 0, (2,)) == 1
    assert [ext_piece(S, 0, (n,)) for n in range(2, 6)] == [1, 2, 3, 4]
    assert all(ext_piece(S, j, (n,)) == 0 for j in (1, 2) for n in WINDOW)


def test_ext_of_residue_field_is_one_dimensional():
    M = monomial_quotient(STD, [(1, 0), (0, 1)])
    dims = {n: ext_piece(M, 2, (n,)) for n in WINDOW}
    assert sum(dims.values()) == 1 and dims[0] == 1


def test_local_cohomology_of_one_variable():
    S = free_module(KX)
    assert all(lc_piece(S, 1, (n,)) == (1 if n <= -1 else 0) for n in WINDOW)
    assert all(lc_piece(S, 0, (n,)) == 0 for n in WINDOW)


def test_local_cohomology_of_finite_length_module():
    M = monomial_quotient(BI, [(1, 0), (0, 1)])
    for n in box((-4, -4), (4, 4)):
        assert lc_piece(M, 0, n) == (1 if n == (0, 0) else 0)
        assert lc_piece(M, 1, n) == lc_piece(M, 2, n) == 0


def test_local_cohomology_of_x2_xy():
    # H^0 is the x-torsion socle k*x in degree 1; H^1 is the k[y] dual pattern below 0
    M = monomial_quotient(STD, [(2, 0), (1, 1)])
    assert [lc_piece(M, 0, (n,)) for n in WINDOW] == [int(n == 1) for n in WINDOW]
    assert [lc_piece(M, 1, (n,)) for n in WINDOW] == [int(n <= -1) for n in WINDOW]
    oracle = CechOracle(M)
    for i in range(3):
        for n in WINDOW:
            assert lc_piece(M, i, (n,)) == cech_oracle(M, i, (n,), oracle=oracle)


def test_cech_examples():
    assert cech_oracle(free_module(KX), 1, (-2,), truncation=4) == 1
    M = monomial_quotient(KX, [(1,)])
    assert cech_oracle(M, 0, (0,)) == 1
    assert all(cech_oracle(M, 1, (n,)) == 0 for n in WINDOW)


def test_cech_agrees_with_duality_on_xy():
    M = monomial_quotient(STD, [(1, 1)])
    assert all(lc_piece(M, 0, (n,)) == 0 for n in WINDOW)
    assert any(lc_piece(M, 1, (n,)) for n in WINDOW)
    for i in range(3):
        for n in range(-8, 9):
            assert lc_piece(M, i, (n,)) == cech_oracle(M, i, (n,))


def test_cech_reports_instability_at_too_small_truncation():
    # at T=2 only the fine degree (-2,-2) reaches n=-4; at T=3 three do
    M = free_module(STD)
    with pytest.raises(Unstable):
        cech_oracle(M, 2, (-4,), truncation=2)
    assert cech_oracle(M, 2, (-4,)) == 3


def test_cech_needs_monomial_quotient():
    with pytest.raises(ValueError):
        CechOracle(binomial_module())


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(any), min_size=1, max_size=3),
       st.tuples(st.integers(-2, 2), st.integers(-2, 2)))
def test_duality_matches_cech_on_random_bigraded_quotients(gens, shift):
    M = monomial_quotient(BI, gens, shift=shift)
    oracle = CechOracle(M)
    for i in range(3):
        for n in box((-4, -4), (4, 4)):
            assert lc_piece(M, i, n) == cech_oracle(M, i, n, oracle=oracle)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(any), min_size=1, max_size=3))
def test_depth_is_first_nonzero_local_cohomology(gens):
    M = monomial_quotient(BI, gens)
    C = cohomology(M)
    first = next(i for i in range(3) if any(C.lc_dim(i, n) for n in box((-8, -8), (8, 8))))
    assert first == C.depth


def test_prime_field_agrees_with_rationals():
    for name in ("bi_x2_xy", "tri_xy1_y22"):
        M = corpus_module(name)
        from multigraded.cli.parse import format_module, parse_text
        Mp = parse_text(format_module(M), "p:32771").modules[0]
        assert Mp.ring.field == PrimeField(32771)
        C, Cp = cohomology(M), cohomology(Mp)
        assert C.depth == Cp.depth
        for i in range(M.ring.nvars + 1):
            for n in box((-4, -4), (4, 4)):
                assert C.lc_dim(i, n) == Cp.lc_dim(i, n)


# -- gdepth and Gamma-fg --------------------------------------------------------------------------

def test_gdepth_of_ring_is_mu():
    v = gdepth(free_module(BI))
    assert v.value == 2 and not v.infinite


def test_gdepth_bounds_depth():
    for name in ("bi_x", "segre_x1y1", "tri_xy", "std_x2_xy", "segre_sum"):
        M = corpus_module(name)
        assert gdepth(M).value >= cohomology(M).depth


def test_finite_length_module_has_infinite_gdepth():
    v = gdepth(monomial_quotient(BI, [(1, 0), (0, 1)]))
    assert v.infinite and v.value == 3


def test_gdepth_and_gamma_fg_of_bigraded_x():
    M = monomial_quotient(BI, [(1, 0)])
    assert gdepth(M).value == gamma_fg(M).value == 3


def test_gdepth_and_gamma_fg_of_standard_x():
    M = monomial_quotient(STD, [(1, 0)])
    assert gdepth(M).value == gamma_fg(M).value == 1


def test_gamma_fg_examples():
    assert gamma_fg(free_module(BI)).value == 2
    v = gamma_fg(corpus_module("bi_x2y2"))
    assert v.infinite and v.window == (-8, 8)


def test_gamma_fg_needs_almost_standard_grading():
    with pytest.raises(ValueError):
        gamma_fg(corpus_module("tri_xy"))


def test_generic_gdepth_on_binomial_module():
    M = binomial_module()
    v = gdepth(M, power_cap=12)
    assert not v.exact
    assert v.value == gamma_fg(M).value


def test_gdepth_power_cap_is_reported():
    # x^3 kills H^0 of k[x]/(x^3) only at the third power
    M = monomial_quotient(KX, [(3,)])
    with pytest.raises(Inconclusive):
        gdepth(M, power_cap=2)
    assert gdepth(M, power_cap=3).infinite


# -- Veronese depth and vad -----------------------------------------------------------------------

def test_veronese_depth_identity_index_is_depth():
    for name in ("bi_x2_xy", "segre_x1y1_x2", "std_m2", "tri_xy1_y22"):
        M = corpus_module(name)
        r = M.ring.degree_matrix.r
        assert veronese_depth(M, (1,) * r, (0,) * r) == cohomology(M).depth


def test_veronese_depth_of_one_variable():
    assert veronese_depth(free_module(KX), (2,), (0,)) == 1


def test_exact_veronese_depth_matches_window():
    for name in ("bi_x2_xy", "bi_x2y2", "segre_x1y1"):
        M = corpus_module(name)
        for a in box((1, 1), (3, 3)):
            for b in box((0, 0), (2, 2)):
                if transform_nonzero(M, a, b, 6):
                    assert veronese_depth_exact(M, a, b) == veronese_depth(M, a, b, 6)


def test_veronese_depth_constant_in_region():
    M = monomial_quotient(BI, [(2, 2)])
    s = vad_estimate(M)
    beta = region_vertex(M, s)
    from multigraded.lattice import veronese_region
    for b in box(beta, tuple(x + 2 for x in beta)):
        a0 = veronese_region(beta, b, M.ring.degree_matrix)
        for a in box(a0, tuple(x + 1 for x in a0)):
            if transform_nonzero(M, a, b):
                assert veronese_depth(M, a, b) == s


def test_vad_examples():
    assert vad_estimate(free_module(BI)) == 2
    for name in ("even_x2y", "scaled_x1y", "segre_x1y1_x2", "std_x", "segre_binomial"):
        M = corpus_module(name)
        assert cohomology(M).depth == gdepth(M, 12).value
        assert vad_estimate(M) == cohomology(M).depth
    finite = monomial_quotient(BI, [(1, 0), (0, 1)])
    assert transform_nonzero(finite, (1, 1), (1, 1))
    assert not transform_nonzero(finite, (2, 2), (1, 1))
    assert vad_estimate(finite, samples=[((2, 2), (1, 1))]) == 2


def test_veronese_gdepth_commutation_route():
    for name in ("bi_x2_xy", "segre_x1y1", "std_x2_xy"):
        M = corpus_module(name)
        r = M.ring.degree_matrix.r
        for a in box((1,) * r, (2,) * r):
            assert veronese_gdepth(M, a, (0,) * r).value == gdepth(M).value
