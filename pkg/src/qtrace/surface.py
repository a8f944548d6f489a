"""Combinatorial ideal triangulations of punctured bordered surfaces.

A face has three slots ``e1, e2, e3`` (stored as 0, 1, 2) running
counterclockwise; slot ``s`` goes from corner ``s`` to corner ``s+1``.
Every gluing is orientation reversing, so gluing slot ``s`` of ``f`` to
slot ``t`` of ``g`` identifies corner ``s`` of ``f`` with corner ``t+1``
of ``g`` and corner ``s+1`` of ``f`` with corner ``t`` of ``g``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (DuplicateGluing, NoBoundary, OrientationInconsistency,
                     SelfFoldedTriangle, SelfGluedSlot, SpecFormatError)

SLOT_NAMES = ("e1", "e2", "e3")
Side = tuple[int, int]  # (face, slot)


def slot_index(name) -> int:
    if name in SLOT_NAMES:
        return SLOT_NAMES.index(name)
    raise SpecFormatError(f"unknown slot {name!r}; expected one of {SLOT_NAMES}")


@dataclass(frozen=True)
class SurfaceSpec:
    name: str
    faces: tuple[int, ...]
    gluings: tuple[tuple[Side, Side], ...]

    @staticmethod
    def from_dict(d: Mapping) -> "SurfaceSpec":
        try:
            name = str(d.get("name", "surface"))
            faces = tuple(int(f) for f in d["faces"])
            raw = d.get("gluings", [])
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecFormatError(f"malformed surface spec: {exc}") from exc
        gl = []
        for g in raw:
            if not isinstance(g, Mapping) or "a" not in g or "b" not in g:
                raise SpecFormatError(f"malformed gluing {g!r}")
            if g.get("reversed", True) is not True or g.get("orientation", "reversing") != "reversing":
                raise OrientationInconsistency(
                    f"gluing {g!r} asks for an orientation-preserving identification")
            a = (int(g["a"][0]), slot_index(g["a"][1]))
            b = (int(g["b"][0]), slot_index(g["b"][1]))
            gl.append((a, b))
        return SurfaceSpec(name, faces, tuple(gl))

    @staticmethod
    def from_json(source: str | Path) -> "SurfaceSpec":
        p = Path(source)
        text = p.read_text() if p.exists() else str(source)
        return SurfaceSpec.from_dict(json.loads(text))

    def canonical(self) -> "SurfaceSpec":
        gl = sorted(tuple(sorted(pair)) for pair in self.gluings)
        return SurfaceSpec(self.name, tuple(sorted(self.faces)), tuple(gl))

    def to_dict(self) -> dict:
        c = self.canonical()
        return {
            "name": c.name,
            "faces": list(c.faces),
            "gluings": [{"a": [a[0], SLOT_NAMES[a[1]]], "b": [b[0], SLOT_NAMES[b[1]]]}
                        for a, b in c.gluings],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            if b < a:
                a, b = b, a
            self.parent[b] = a


@dataclass(eq=False)
class Triangulation:
    spec: SurfaceSpec
    faces: tuple[int, ...]
    partner: dict[Side, Side]
    corner_class: dict[tuple[int, int], tuple[int, int]]
    punctures: tuple[tuple[tuple[int, int], ...], ...]
    edges: tuple[tuple[Side, ...], ...]
    boundary_edges: tuple[Side, ...]
    boundary_components: tuple[tuple[Side, ...], ...] = field(default=())

    def is_boundary(self, side: Side) -> bool:
        return side not in self.partner

    def next_boundary(self, side: Side) -> Side:
        """Boundary edge that follows ``side`` along the boundary orientation."""
        f, s = side
        cur = (f, (s + 1) % 3)
        seen = set()
        while cur in self.partner:
            if cur in seen:
                raise AssertionError("corner walk did not reach the boundary")
            seen.add(cur)
            g, t = self.partner[cur]
            cur = (g, (t + 1) % 3)
        return cur

    def interior_punctures(self) -> list[tuple[tuple[int, int], ...]]:
        out = []
        for cls in self.punctures:
            if not any((f, c) not in self.partner or (f, (c + 2) % 3) not in self.partner
                       for f, c in cls):
                out.append(cls)
        return out

    def face_components(self) -> list[list[int]]:
        uf = _UnionFind()
        for f in self.faces:
            uf.find(f)
        for (f, _), (g, _) in self.partner.items():
            uf.union(f, g)
        groups: dict[int, list[int]] = {}
        for f in self.faces:
            groups.setdefault(uf.find(f), []).append(f)
        return sorted(groups.values())


def parse_surface(spec: SurfaceSpec) -> Triangulation:
    return _parse(spec.canonical())


@lru_cache(maxsize=256)
def _parse(spec: SurfaceSpec) -> Triangulation:
    faces = spec.faces
    if len(set(faces)) != len(faces):
        raise SpecFormatError("duplicate face ids")
    fset = set(faces)
    partner: dict[Side, Side] = {}
    for a, b in spec.gluings:
        for side in (a, b):
            if side[0] not in fset:
                raise SpecFormatError(f"gluing refers to unknown face {side[0]}")
        if a == b:
            raise SelfGluedSlot(f"slot {SLOT_NAMES[a[1]]} of face {a[0]} glued to itself")
        for side in (a, b):
            if side in partner:
                raise DuplicateGluing(
                    f"slot {SLOT_NAMES[side[1]]} of face {side[0]} appears in two gluings")
        if a[0] == b[0]:
            # two slots of one triangle always share a corner; a reversing
            # identification of them folds the triangle onto itself
            raise SelfFoldedTriangle(f"face {a[0]} glued to itself along "
                                     f"{SLOT_NAMES[a[1]]} and {SLOT_NAMES[b[1]]}")
        partner[a] = b
        partner[b] = a

    uf = _UnionFind()
    for f in faces:
        for c in range(3):
            uf.find((f, c))
    for (f, s), (g, t) in partner.items():
        uf.union((f, s), (g, (t + 1) % 3))
        uf.union((f, (s + 1) % 3), (g, t))
    classes: dict = {}
    for f in faces:
        for c in range(3):
            classes.setdefault(uf.find((f, c)), []).append((f, c))
    corner_class = {x: uf.find(x) for x in uf.parent}
    punctures = tuple(sorted(tuple(sorted(v)) for v in classes.values()))

    edges = []
    seen = set()
    for f in faces:
        for s in range(3):
            if (f, s) in seen:
                continue
            if (f, s) in partner:
                other = partner[(f, s)]
                seen.update({(f, s), other})
                edges.append(((f, s), other))
            else:
                seen.add((f, s))
                edges.append(((f, s),))
    boundary = tuple(sorted(e[0] for e in edges if len(e) == 1))

    t = Triangulation(spec, faces, partner, corner_class, punctures,
                      tuple(edges), boundary)
    comps = []
    todo = set(boundary)
    for start in boundary:
        if start not in todo:
            continue
        cyc = [start]
        todo.discard(start)
        nxt = t.next_boundary(start)
        while nxt != start:
            cyc.append(nxt)
            todo.discard(nxt)
            nxt = t.next_boundary(nxt)
        comps.append(tuple(cyc))
    t.boundary_components = tuple(comps)
    return t


@dataclass(frozen=True)
class SurfaceInvariants:
    faces: int
    edges: int
    vertices: int
    p_int: int
    p_bdy: int
    n_boundary_edges: int
    chi_bar: int
    chi: int
    r: int
    b: int
    r_i: tuple[int, ...]
    t: int
    essentially_bordered: bool
    no_interior_punctures: bool
    triangulable: bool

    def to_json(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["r_i"] = list(self.r_i)
        return d


def classify(t: Triangulation) -> SurfaceInvariants:
    F = len(t.faces)
    E = len(t.edges)
    V = len(t.punctures)
    p_int = len(t.interior_punctures())
    chi_bar = V - E + F
    chi = chi_bar - p_int
    nb = len(t.boundary_edges)
    r_i = tuple(len(c) for c in t.boundary_components)
    bordered_faces = {f for f, _ in t.boundary_edges}
    essentially = all(any(f in bordered_faces for f in comp) for comp in t.face_components())
    return SurfaceInvariants(
        faces=F, edges=E, vertices=V, p_int=p_int, p_bdy=V - p_int,
        n_boundary_edges=nb, chi_bar=chi_bar, chi=chi, r=nb - chi,
        b=len(r_i), r_i=r_i, t=sum(1 for x in r_i if x % 2 == 0),
        essentially_bordered=essentially and F > 0,
        no_interior_punctures=p_int == 0,
        triangulable=F > 0,
    )


@dataclass(eq=False)
class ExtendedTriangulation:
    """λ* : the base triangulation with one face attached per boundary edge.

    ``attached`` maps each new face to the base boundary edge it is glued
    to along its ``e1`` slot.
    """

    base: Triangulation
    tri: Triangulation
    attached: dict[int, Side]

    @property
    def original_faces(self) -> tuple[int, ...]:
        return self.base.faces

    def attached_face(self, side: Side) -> int:
        return self._by_edge[side]

    def __post_init__(self):
        self._by_edge = {e: f for f, e in self.attached.items()}


def attach_triangles(t: Triangulation) -> ExtendedTriangulation:
    return _attach(t.spec)


@lru_cache(maxsize=128)
def _attach(spec: SurfaceSpec) -> ExtendedTriangulation:
    t = _parse(spec)
    inv = classify(t)
    if not t.boundary_edges or not inv.essentially_bordered:
        raise NoBoundary(f"surface {spec.name!r} has a component without boundary")
    nf = max(t.faces) + 1
    attached = {}
    gl = list(spec.gluings)
    for e in t.boundary_edges:
        attached[nf] = e
        gl.append(((nf, 0), e))
        nf += 1
    ext_spec = SurfaceSpec(spec.name + "*", spec.faces + tuple(attached), tuple(gl))
    return ExtendedTriangulation(t, _parse(ext_spec.canonical()), attached)


def spec_from_triangles(name: str, triangles: Iterable[tuple]) -> SurfaceSpec:
    """Spec of a disk-like complex given by counterclockwise vertex triples.

    Faces are numbered in the given order; slot ``s`` of face ``(a, b, c)``
    runs along the directed pair (a, b), (b, c), (c, a). Two slots with
    opposite directed pairs are glued.
    """
    tris = list(triangles)
    directed = {}
    for f, tri in enumerate(tris):
        for s in range(3):
            key = (tri[s], tri[(s + 1) % 3])
            if key in directed:
                raise SpecFormatError(f"directed edge {key} used twice")
            directed[key] = (f, s)
    gl = []
    for (u, v), side in directed.items():
        other = directed.get((v, u))
        if other is not None and side < other:
            gl.append((side, other))
    return SurfaceSpec(name, tuple(range(len(tris))), tuple(gl))


_BUILTIN = {
    "T3": SurfaceSpec("T3", (0,), ()),
    "S4": SurfaceSpec("S4", (0, 1), (((0, 0), (1, 0)),)),
    "P5": SurfaceSpec("P5", (0, 1, 2), (((0, 0), (1, 0)), ((1, 1), (2, 0)))),
    "A11": SurfaceSpec("A11", (0, 1), (((0, 0), (1, 0)), ((0, 1), (1, 1)))),
}


def builtin_examples() -> list[SurfaceSpec]:
    """T3 (triangle), S4 (square), P5 (pentagon fan), A11 (annulus, one puncture per side)."""
    return list(_BUILTIN.values())


def builtin(name: str) -> SurfaceSpec:
    try:
        return _BUILTIN[name]
    except KeyError:
        raise KeyError(f"no built-in surface {name!r}; have {sorted(_BUILTIN)}") from None


def load_surface(source: str | Path) -> SurfaceSpec:
    """Built-in name or path to a JSON spec."""
    if str(source) in _BUILTIN:
        return _BUILTIN[str(source)]
    return SurfaceSpec.from_json(Path(source).read_text())
