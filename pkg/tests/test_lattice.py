from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multigraded.lattice import (ConeRegion, DegreeMatrix, GammaSupport, NoWitness, beta_vertex, box,
                                 cone_contains, cone_intersect, gamma_witness, in_subgroup, phi, phi_a,
                                 star, veronese_region, veronese_region_nonzero)


def triangular(r):
    """Strategy for r x r upper-triangular degree matrices with small entries."""
    def build(entries):
        cols = []
        it = iter(entries)
        for l in range(r):
            col = [0] * r
            for i in range(l + 1):
                col[i] = next(it)
                if i == l:
                    col[i] += 1
            cols.append(tuple(col))
        return DegreeMatrix(cols)
    size = r * (r + 1) // 2
    return st.lists(st.integers(0, 3), min_size=size, max_size=size).map(build)


matrices = st.integers(1, 3).flatmap(triangular)


# -- DegreeMatrix ---------------------------------------------------------------------------------

def test_degree_matrix_rejects_lower_entries():
    with pytest.raises(ValueError):
        DegreeMatrix([(1, 1), (0, 1)])


def test_degree_matrix_rejects_zero_diagonal():
    with pytest.raises(ValueError):
        DegreeMatrix([(1, 0), (1, 0)])


def test_degree_matrix_rejects_negative_entries():
    with pytest.raises(ValueError):
        DegreeMatrix([(1, 0), (-1, 1)])


def test_almost_standard_flag():
    assert DegreeMatrix.diagonal((2, 3)).is_almost_standard
    assert not DegreeMatrix([(1, 0), (1, 1)]).is_almost_standard


# -- phi, phi_a, star -----------------------------------------------------------------------------

def test_phi_identity():
    assert phi(DegreeMatrix.identity(2), (2, 3)) == (2, 3)


def test_phi_column_sums():
    assert phi(DegreeMatrix([(2, 0), (1, 3)]), (1, 1)) == (3, 3)
    assert phi(DegreeMatrix([(1, 0), (1, 1)]), (0, 2)) == (2, 2)


def test_phi_dimension_mismatch():
    with pytest.raises(ValueError):
        phi(DegreeMatrix.identity(2), (1, 2, 3))


def test_phi_a_examples():
    assert phi_a(DegreeMatrix.identity(2), (2, 3), (1, 1)) == (2, 3)
    assert phi_a(DegreeMatrix([(2, 0), (1, 3)]), (2, 1), (1, 2)) == (6, 6)


def test_phi_a_rejects_nonpositive_index():
    with pytest.raises(ValueError):
        phi_a(DegreeMatrix.identity(2), (0, 1), (1, 1))


@given(matrices, st.data())
def test_phi_a_with_unit_index_is_phi(G, data):
    n = data.draw(st.tuples(*[st.integers(-10, 10)] * G.r))
    assert phi_a(G, (1,) * G.r, n) == phi(G, n)


def test_star_examples():
    assert star((-2, 3)) == (2, 3)
    assert star((0, 0)) == (0, 0)
    assert star((-1, -4)) == (1, 4)


# -- cones ----------------------------------------------------------------------------------------

def test_cone_contains_examples():
    G = DegreeMatrix.diagonal((2, 3))
    assert cone_contains(ConeRegion((4, 6), G), (6, 9))
    assert not cone_contains(ConeRegion((4, 6), G), (3, 9))
    assert cone_contains(ConeRegion((0, 0), DegreeMatrix([(1, 0), (1, 2)])), (3, 2))


def test_cone_solve_gives_the_certificate():
    assert DegreeMatrix([(1, 0), (1, 2)]).solve((3, 2)) == (Fraction(2), Fraction(1))


def test_cone_vertex_must_be_nonnegative():
    with pytest.raises(ValueError):
        ConeRegion((-1, 0), DegreeMatrix.identity(2))


@settings(max_examples=60)
@given(matrices, st.data())
def test_cone_contains_every_nonnegative_combination(G, data):
    beta = data.draw(st.tuples(*[st.integers(0, 5)] * G.r))
    cone = ConeRegion(beta, G)
    for lam in box((0,) * G.r, (5,) * G.r):
        assert cone_contains(cone, tuple(b + x for b, x in zip(beta, phi(G, lam))))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_almost_standard_membership_is_termwise(r):
    reach = 10 if r < 3 else 4
    for diag in product((1, 2, 3), repeat=r):
        G = DegreeMatrix.diagonal(diag)
        cone = ConeRegion((2,) * r, G)
        for n in box((-reach,) * r, (reach,) * r):
            assert cone_contains(cone, n) == all(x >= 2 for x in n)


def test_general_membership_matches_rational_solution():
    # the fast diagonal path must not be taken for a triangular matrix
    G = DegreeMatrix([(1, 0), (2, 1)])
    cone = ConeRegion((0, 0), G)
    assert not cone_contains(cone, (1, 1))
    assert cone_contains(cone, (2, 1))


def test_cone_intersect_examples():
    G = DegreeMatrix.identity(2)
    assert cone_intersect(ConeRegion((1, 2), G), ConeRegion((3, 0), G)).vertex == (3, 2)
    assert cone_intersect(ConeRegion((1, 2), G), ConeRegion((1, 2), G)).vertex == (1, 2)
    assert cone_intersect(ConeRegion((0, 0), G), ConeRegion((5, 5), G)).vertex == (5, 5)


def test_cone_intersect_rejects_triangular():
    G = DegreeMatrix([(1, 0), (1, 1)])
    with pytest.raises(ValueError):
        cone_intersect(ConeRegion((0, 0), G), ConeRegion((1, 1), G))


# -- betaVertex -----------------------------------------------------------------------------------

def test_beta_vertex_examples():
    assert beta_vertex(2, (3,), DegreeMatrix.diagonal((2,))) == (7,)
    assert beta_vertex(1, (1, 1), DegreeMatrix.identity(2)) == (2, 2)
    assert beta_vertex(1, (0, 0), DegreeMatrix([(1, 0), (1, 1)])) == (2, 1)


@given(matrices, st.integers(0, 4), st.data())
def test_beta_vertex_dominates_alpha_and_grows_with_u(G, u, data):
    alpha = data.draw(st.tuples(*[st.integers(0, 5)] * G.r))
    lo, hi = beta_vertex(u, alpha, G), beta_vertex(u + 1, alpha, G)
    assert all(x >= y for x, y in zip(lo, alpha))
    assert all(x > y for x, y in zip(hi, lo))


# -- veroneseRegion -------------------------------------------------------------------------------

def test_veronese_region_examples():
    assert veronese_region((2, 2), (2, 2), DegreeMatrix.identity(2)) == (4, 4)
    assert veronese_region((4, 6), (4, 6), DegreeMatrix.diagonal((2, 3))) == (4, 4)
    assert veronese_region((0, 0), (0, 0), DegreeMatrix.identity(2)) == (1, 1)


def test_veronese_region_needs_b_above_beta():
    with pytest.raises(ValueError):
        veronese_region((2, 2), (1, 3), DegreeMatrix.identity(2))


def test_veronese_region_needs_diagonal_matrix():
    with pytest.raises(ValueError):
        veronese_region((0, 0), (0, 0), DegreeMatrix([(1, 0), (1, 1)]))


def _fits(G, beta, a, b, n):
    return cone_contains(ConeRegion(beta, G), star(tuple(x + y for x, y in zip(phi_a(G, a, n), b))))


def test_veronese_region_fits_cone_r2_exhaustive():
    # every diagonal, beta, b >= beta in [0,4]^2 and n in [-10,10]^2
    points = box((-10, -10), (10, 10))
    for diag in product((1, 2, 3), repeat=2):
        G = DegreeMatrix.diagonal(diag)
        for beta in box((0, 0), (4, 4)):
            for b in box(beta, (4, 4)):
                a = veronese_region(beta, b, G)
                assert all(_fits(G, beta, a, b, n) for n in points), (diag, beta, b)


@given(st.integers(1, 3).flatmap(lambda r: st.tuples(
    st.tuples(*[st.integers(1, 3)] * r), st.tuples(*[st.integers(0, 6)] * r),
    st.tuples(*[st.integers(0, 6)] * r), st.tuples(*[st.integers(-10, 10).filter(bool)] * r))))
def test_region_without_b_clause_on_nonzero_entries(args):
    diag, beta, b, n = args
    G = DegreeMatrix.diagonal(diag)
    a = veronese_region_nonzero(beta, b, G)
    assert _fits(G, beta, a, b, n)


def test_region_without_b_clause_can_fail_at_zero_entries():
    # n = 0 gives b itself, which is outside C_beta when b < beta
    G = DegreeMatrix.identity(1)
    a = veronese_region_nonzero((3,), (1,), G)
    assert not _fits(G, (3,), a, (1,), (0,))


# -- gammaWitness ---------------------------------------------------------------------------------

def test_gamma_witness_examples():
    I2 = DegreeMatrix.identity(2)
    alpha, t, n = gamma_witness(GammaSupport(((0, 0),), I2), (1, 1), 3)
    assert alpha == (3, 3) and t == (3, 3) and n == (2, 2)
    alpha, t, n = gamma_witness(GammaSupport(((2, 5),), I2), (2, 5), 0)
    assert alpha == (2, 5) and t == (0, 0)
    alpha, _, _ = gamma_witness(GammaSupport(((1, 1),), DegreeMatrix.diagonal((2, 2))), (3, 3), 5)
    assert alpha == (5, 5)


def test_gamma_witness_without_common_coset():
    with pytest.raises(NoWitness):
        gamma_witness(GammaSupport(((0,),), DegreeMatrix.diagonal((2,))), (1,), 0)


@settings(max_examples=80)
@given(matrices, st.integers(0, 8), st.data())
def test_gamma_witness_certificate(G, c, data):
    r = G.r
    beta = data.draw(st.tuples(*[st.integers(-4, 4)] * r))
    offset = data.draw(st.tuples(*[st.integers(-4, 4)] * r))
    supp = GammaSupport((tuple(x + y for x, y in zip(beta, phi(G, offset))),), G)
    alpha, t, n = gamma_witness(supp, beta, c)
    assert all(x >= c for x in alpha)
    assert supp.contains(alpha)
    assert in_subgroup(G, tuple(x - y for x, y in zip(alpha, beta)))
    assert all(x >= 0 for x in t) and all(x >= 0 for x in n)
    assert phi(G, n) == tuple(x - y for x, y in zip(alpha, beta))
