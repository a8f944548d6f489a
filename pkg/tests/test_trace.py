import numpy as np
import pytest

from qtrace.errors import NoAdmissibleRotation
from qtrace.lattice import determinant
from qtrace.ntriang import extended_sets, h_matrix, n_triangulation
from qtrace.surface import attach_triangles
from qtrace.trace import (c_matrix, e_matrix, expected_det_b_minus_a, f_matrix, g_matrix,
                          identity_checks, k_matrix, kbar_matrix, kbar_p3, p_bar, p_lambda,
                          skeleton, verify_blocks)

from conftest import FIXTURES, tri


def test_kbar_p3_examples():
    assert kbar_p3((1, 1, 1), (0, 2, 1), 3) == 1
    assert kbar_p3((1, 1, 1), (1, 1, 1), 3) == 3
    assert kbar_p3((1, 1, 0), (1, 0, 1), 2) == 0
    with pytest.raises(NoAdmissibleRotation):
        kbar_p3((1, 1, 0), (1, 1, 1), 2)


def test_single_face_skeleton_is_the_vertex():
    nt = n_triangulation(tri("T3"), 3)
    v = nt.vertex(0, (1, 1, 1))
    assert skeleton(nt, v, 0) == [(1, 1, 1)]


def test_t3_kbar_times_hbar():
    t = tri("T3")
    KH = (kbar_matrix(t, 2) @ h_matrix(t, 2)).data
    assert (KH == 2 * np.eye(3, dtype=object)).all()


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_identities(name, n):
    failed = [(c.lemma, c.where) for c in identity_checks(tri(name), n) if not c.ok]
    assert not failed


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_block_lemmas(name, n):
    rep = verify_blocks(tri(name), n)
    assert rep.ok, [(c.lemma, c.where, c.detail) for c in rep.checks if not c.ok]


def test_c_rows_on_base_are_unit_vectors():
    ext = attach_triangles(tri("S4"))
    C = c_matrix(ext, 3)
    base = set(extended_sets(ext, 3).base)
    for a, v in enumerate(C.rows):
        if v in base:
            assert sorted(int(x) for x in C.data[a] if x) == [1]


def test_efg_n3():
    assert e_matrix(3).tolist() == [[1, 0], [2, 1]]
    assert f_matrix(3).tolist() == [[2, 1], [-3, 0]]
    assert g_matrix(3).tolist() == [[2, 1], [1, 2]]
    assert (e_matrix(3).dot(f_matrix(3)) == g_matrix(3)).all()


@pytest.mark.parametrize("n", range(2, 8))
def test_ef_equals_g(n):
    assert (e_matrix(n).dot(f_matrix(n)) == g_matrix(n)).all()


def test_det_b_minus_a_values():
    assert expected_det_b_minus_a(2, 1) == 4
    assert expected_det_b_minus_a(2, 3) == 16
    # r=1 by hand: B−A = (2) − (−2)
    assert determinant([[4]]) == 4


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("n", [2, 3])
def test_p_matrices_antisymmetric_in_nz(name, n):
    for P in (p_lambda(attach_triangles(tri(name)), n).data, p_bar(tri(name), n).data):
        assert (P == -P.T).all()
        assert (P % n == 0).all()


def test_k_shape():
    ext = attach_triangles(tri("T3"))
    K = k_matrix(ext, 2)
    assert K.data.shape == (6, 6)
