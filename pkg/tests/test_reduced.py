import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtrace.errors import NotTriangulable
from qtrace.lattice import ambient_index
from qtrace.reduced import (anti_identity, expected_P_i, expected_S_i, g_prime, im_mu_size,
                            im_nu_check_size, mu_triangulation, reduced_blocks,
                            reduced_boundary_generators, reduced_center_check,
                            reduced_center_report, reduced_rank, reduced_rank_formula,
                            reversal_properties)
from qtrace.surface import SurfaceSpec, parse_surface, spec_from_triangles
from qtrace.trace import g_matrix, kbar_matrix
from qtrace.unity import derive_params

from conftest import tri


def polygon(r):
    return parse_surface(spec_from_triangles(f"poly{r}", [(1, k, k + 1) for k in range(2, r)]))


def test_mu_s4_two_fans_on_the_diagonal():
    mu = mu_triangulation(tri("S4"))
    assert len(mu.tri.faces) == 2 and len(mu.tri.edges) == 5
    assert [k for _, k in mu.fans[0]] == [1, 2]


def test_mu_p5_faces():
    mu = mu_triangulation(tri("P5"))
    assert len(mu.tri.faces) == 3 and len(mu.fans[0]) == 2
    # e_5 lies in the third face, the one that is not a fan
    assert mu.labels[0][4][0] == 2


def test_mu_a11_keeps_triangulation():
    t = tri("A11")
    mu = mu_triangulation(t)
    assert mu.tri is t and mu.r == [1, 1]


def test_mu_refuses_triangle_and_other_surfaces():
    with pytest.raises(NotTriangulable):
        mu_triangulation(tri("T3"))
    # a triangle and a square side by side: two boundary components, not a polygon
    two = SurfaceSpec("two", (0, 1, 2), (((1, 0), (2, 0)),))
    with pytest.raises(NotTriangulable):
        mu_triangulation(parse_surface(two))


def test_block_examples():
    assert (expected_P_i(3, 1) == -3 * np.eye(2, dtype=object) + 3 * anti_identity(3)).all()
    assert expected_S_i(3, 1).tolist() == [[3, 3], [3, 3]]
    assert (g_prime(3) == g_matrix(3)[::-1]).all()
    P = expected_P_i(2, 4)
    assert P.tolist() == [[-2, 0, 2, 0], [0, -2, 0, 2], [0, 2, -2, 0], [2, 0, 0, -2]]


@pytest.mark.parametrize("r", range(4, 10))
@pytest.mark.parametrize("n", [2, 3, 4])
def test_polygon_blocks(r, n):
    _, rep = reduced_blocks(mu_triangulation(polygon(r)), n)
    assert rep.ok, [(c.lemma, c.where) for c in rep.checks if not c.ok]


@pytest.mark.parametrize("name", ["S4", "P5", "A11"])
def test_fixture_blocks_n2(name):
    _, rep = reduced_blocks(mu_triangulation(tri(name)), 2)
    assert rep.ok


def test_annulus_p_prime_reaches_2n():
    # two skeleton pieces of the face centre land in the boundary triangle
    for n in (3, 4):
        M, rep = reduced_blocks(mu_triangulation(tri("A11")), n)
        o = M.order
        Pp = M.KQ.sub(o.interior, o.boundary).data
        assert set(np.unique(Pp.astype(int))) == {0, n, 2 * n}
        assert all(c.ok for c in rep.checks if c.lemma != "P' in {0,n}")


def test_boundary_generator_counts():
    for n in (2, 3, 4, 5):
        s4 = mu_triangulation(tri("S4")).tri
        p5 = mu_triangulation(tri("P5")).tri
        assert len(reduced_boundary_generators(s4, n, kbar_matrix(s4, n).rows)) == n - 1
        assert len(reduced_boundary_generators(p5, n, kbar_matrix(p5, n).rows)) == n // 2


@pytest.mark.parametrize("name,rank", [("S4", 81), ("A11", 9), ("P5", 729)])
def test_reduced_rank_spot_values(name, rank):
    p = derive_params(2, 3)
    mu = mu_triangulation(tri(name))
    assert reduced_center_check(mu, 2, p)
    assert reduced_rank(mu, 2, p) == rank == reduced_rank_formula(mu.tri, p)


def test_reduced_center_p5_n3():
    assert reduced_center_check(mu_triangulation(tri("P5")), 3, derive_params(3, 5))


@pytest.mark.parametrize("name", ["S4", "P5", "A11"])
@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("m2", [3, 5, 9, 15])
def test_reduced_theorems_grid(name, n, m2):
    p = derive_params(n, m2, warn=False)
    mu = mu_triangulation(tri(name))
    rep = reduced_center_report(mu, n, p)
    assert rep["equal"] and rep["boundary_in_center"]
    assert ambient_index(rep["center"]) == reduced_rank_formula(mu.tri, p)


def test_counting_examples():
    assert im_mu_size(3, 3) == 3
    assert im_nu_check_size(3, 3) == 1
    assert im_mu_size(3, 5) == 25


@given(st.integers(2, 5), st.sampled_from([1, 3, 5, 7, 9, 11, 13, 15]), st.integers(0, 99))
def test_reversal_properties(n, m1, seed):
    rep = reversal_properties(n, m1, samples=20, seed=seed)
    assert rep["ok"], rep
