import pytest
from hypothesis import given, strategies as st

from qtrace.errors import (DuplicateGluing, NoBoundary, OrientationInconsistency,
                           SelfFoldedTriangle, SelfGluedSlot, SpecFormatError)
from qtrace.surface import (SurfaceSpec, attach_triangles, builtin, builtin_examples,
                            classify, load_surface, parse_surface, spec_from_triangles)

from conftest import tri


def test_t3_counts():
    t = tri("T3")
    assert len(t.boundary_edges) == 3 and len(t.punctures) == 3


def test_s4_counts():
    t = tri("S4")
    assert len(t.boundary_edges) == 4 and len(t.punctures) == 4
    assert len(t.edges) - len(t.boundary_edges) == 1


@pytest.mark.parametrize("name,expected", [
    ("T3", dict(n_boundary_edges=3, chi_bar=1, chi=1, r=2, b=1, r_i=(3,), t=0)),
    ("S4", dict(n_boundary_edges=4, chi=1, r=3, b=1, r_i=(4,), t=1)),
    ("P5", dict(n_boundary_edges=5, chi=1, r=4, b=1, r_i=(5,), t=0)),
    ("A11", dict(vertices=2, edges=4, faces=2, n_boundary_edges=2, chi_bar=0, chi=0,
                 r=2, b=2, r_i=(1, 1), t=0)),
])
def test_classify(name, expected):
    inv = classify(tri(name))
    for k, v in expected.items():
        assert getattr(inv, k) == v, k
    assert inv.essentially_bordered and inv.no_interior_punctures


def test_attach_triangles_face_counts():
    assert len(attach_triangles(tri("T3")).tri.faces) == 1 + 3
    assert len(attach_triangles(tri("S4")).tri.faces) == 2 + 4


def test_closed_surface_has_no_boundary():
    sphere = SurfaceSpec("sphere", (0, 1), (((0, 0), (1, 0)), ((0, 1), (1, 2)), ((0, 2), (1, 1))))
    with pytest.raises(NoBoundary):
        attach_triangles(parse_surface(sphere))


def test_validation_errors():
    with pytest.raises(DuplicateGluing):
        parse_surface(SurfaceSpec("d", (0, 1, 2), (((0, 0), (1, 0)), ((0, 0), (2, 0)))))
    with pytest.raises(SelfGluedSlot):
        parse_surface(SurfaceSpec("s", (0,), (((0, 1), (0, 1)),)))
    with pytest.raises(SelfFoldedTriangle):
        parse_surface(SurfaceSpec("f", (0,), (((0, 0), (0, 1)),)))
    with pytest.raises(SpecFormatError):
        parse_surface(SurfaceSpec("u", (0,), (((0, 0), (5, 0)),)))
    with pytest.raises(OrientationInconsistency):
        SurfaceSpec.from_dict({"faces": [0, 1], "gluings": [
            {"a": [0, "e1"], "b": [1, "e1"], "reversed": False}]})
    with pytest.raises(SpecFormatError):
        SurfaceSpec.from_dict({"faces": [0], "gluings": [{"a": [0, "e9"], "b": [0, "e1"]}]})


def test_builtins_round_trip(tmp_path):
    assert [s.name for s in builtin_examples()] == ["T3", "S4", "P5", "A11"]
    for spec in builtin_examples():
        path = tmp_path / f"{spec.name}.json"
        path.write_text(spec.to_json())
        assert load_surface(path).canonical() == spec.canonical()
        assert load_surface(spec.name) is builtin(spec.name)


def test_boundary_components_follow_next_boundary(fixture_name):
    t = tri(fixture_name)
    for comp in t.boundary_components:
        for a, b in zip(comp, comp[1:] + comp[:1]):
            assert t.next_boundary(a) == b


@given(st.integers(3, 12))
def test_polygon_fans(k):
    t = parse_surface(spec_from_triangles("poly", [(1, j, j + 1) for j in range(2, k)]))
    inv = classify(t)
    assert (inv.b, inv.r_i, inv.chi, inv.r) == (1, (k,), 1, k - 1)
    assert inv.t == (1 if k % 2 == 0 else 0)


@given(st.integers(3, 9))
def test_interior_puncture_is_detected(k):
    t = parse_surface(spec_from_triangles("wheel", [(0, j, j % k + 1) for j in range(1, k + 1)]))
    inv = classify(t)
    assert inv.p_int == 1 and not inv.no_interior_punctures
