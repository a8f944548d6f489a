"""n-triangulations: small vertices, quiver matrices and H matrices.

A small vertex of face ``f`` has barycentric coordinates ``(i, j, k)`` with
``i + j + k = n``; coordinate ``c`` equals ``n`` at corner ``c``. Points on
slot ``s`` have coordinate ``(s + 2) % 3`` equal to zero. A vertex lying on
a glued edge has one representative per face; the canonical one is the
smallest ``(face, coords)`` pair.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, InteriorPuncture, NonIntegerHalf
from .lattice import Lattice, kernel_mod
from .surface import ExtendedTriangulation, Side, Triangulation, _UnionFind, classify

Coords = tuple[int, int, int]

# unit steps c -> c + step parallel to slot 0, 1, 2
_STEPS = ((-1, 1, 0), (0, -1, 1), (1, 0, -1))


class SmallVertex(NamedTuple):
    face: int
    coords: Coords

    def label(self) -> str:
        return f"{self.face}:{','.join(map(str, self.coords))}"


@lru_cache(maxsize=None)
def coords(n: int) -> tuple[Coords, ...]:
    """All small-vertex coordinates of one face, corners excluded."""
    return tuple((i, j, n - i - j) for i in range(n + 1) for j in range(n + 1 - i)
                 if max(i, j, n - i - j) < n)


def on_slot(c: Coords, s: int) -> bool:
    return c[(s + 2) % 3] == 0


def edge_image(c: Coords, s: int, t: int, n: int) -> Coords:
    """Position on slot ``t`` of the partner face of a point on slot ``s``."""
    out = [0, 0, 0]
    out[(t + 1) % 3] = c[s]
    out[t] = n - c[s]
    return tuple(out)


class VertexSet:
    """Ordered, duplicate-free tuple of small vertices."""

    __slots__ = ("items", "_pos")

    def __init__(self, items: Iterable[SmallVertex]):
        self.items = tuple(items)
        self._pos = {v: i for i, v in enumerate(self.items)}
        if len(self._pos) != len(self.items):
            raise ValueError("vertex set has duplicates")

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __contains__(self, v):
        return v in self._pos

    def __eq__(self, other):
        return isinstance(other, VertexSet) and self.items == other.items

    def __hash__(self):
        return hash(self.items)

    def __add__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.items + other.items)

    def position(self, v: SmallVertex) -> int:
        return self._pos[v]

    def positions(self, vs: Iterable[SmallVertex]) -> list[int]:
        return [self._pos[v] for v in vs]

    def where(self, pred: Callable[[SmallVertex], bool]) -> "VertexSet":
        return VertexSet(v for v in self.items if pred(v))

    def labels(self) -> list[str]:
        return [v.label() for v in self.items]


@dataclass(frozen=True, eq=False)
class LabeledIntMatrix:
    rows: VertexSet
    cols: VertexSet
    data: np.ndarray  # dtype=object, Python ints

    def __post_init__(self):
        if self.data.shape != (len(self.rows), len(self.cols)):
            raise DimensionMismatch(f"shape {self.data.shape} vs labels "
                                    f"{len(self.rows)}x{len(self.cols)}")

    @staticmethod
    def zeros(rows: VertexSet, cols: VertexSet) -> "LabeledIntMatrix":
        return LabeledIntMatrix(rows, cols, np.zeros((len(rows), len(cols)), dtype=object))

    @property
    def shape(self):
        return self.data.shape

    def __getitem__(self, key):
        u, v = key
        return self.data[self.rows.position(u), self.cols.position(v)]

    def sub(self, rows: VertexSet, cols: VertexSet) -> "LabeledIntMatrix":
        r = self.rows.positions(rows)
        c = self.cols.positions(cols)
        return LabeledIntMatrix(rows, cols, self.data[np.ix_(r, c)])

    def __matmul__(self, other: "LabeledIntMatrix") -> "LabeledIntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch("inner index sets differ")
        return LabeledIntMatrix(self.rows, other.cols, self.data.dot(other.data))

    def __sub__(self, other: "LabeledIntMatrix") -> "LabeledIntMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch("index sets differ")
        return LabeledIntMatrix(self.rows, self.cols, self.data - other.data)

    def scale(self, x: int) -> "LabeledIntMatrix":
        return LabeledIntMatrix(self.rows, self.cols, self.data * x)

    @property
    def T(self) -> "LabeledIntMatrix":
        return LabeledIntMatrix(self.cols, self.rows, self.data.T.copy())

    def equals(self, other: "LabeledIntMatrix") -> bool:
        return (self.rows == other.rows and self.cols == other.cols
                and bool((self.data == other.data).all()))

    def is_scalar(self, x: int) -> bool:
        n = len(self.rows)
        return (self.rows == self.cols
                and bool((self.data == x * np.eye(n, dtype=object)).all()))

    def to_lists(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.data]

    def to_json(self) -> dict:
        return {"rows": self.rows.labels(), "cols": self.cols.labels(),
                "data": self.to_lists()}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def int_array(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


class NTriangulation:
    """Small vertices of a triangulation with gluing identifications resolved."""

    def __init__(self, tri: Triangulation, n: int):
        if n < 2:
            raise ValueError("n must be at least 2")
        self.tri = tri
        self.n = n
        uf = _UnionFind()
        for f in tri.faces:
            for c in coords(n):
                uf.find((f, c))
        for (f, s), (g, t) in tri.partner.items():
            for c in coords(n):
                if on_slot(c, s):
                    uf.union((f, c), (g, edge_image(c, s, t, n)))
        self.rep: dict[tuple[int, Coords], SmallVertex] = {
            (f, c): SmallVertex(*uf.find((f, c))) for f in tri.faces for c in coords(n)}
        self.vertices = VertexSet(sorted(set(self.rep.values())))
        self.reps_of: dict[SmallVertex, list[tuple[int, Coords]]] = {}
        for key, v in self.rep.items():
            self.reps_of.setdefault(v, []).append(key)
        self.on_boundary: dict[SmallVertex, set[Side]] = {}
        for f, s in tri.boundary_edges:
            for c in coords(n):
                if on_slot(c, s):
                    self.on_boundary.setdefault(self.rep[(f, c)], set()).add((f, s))

    def vertex(self, face: int, c: Sequence[int]) -> SmallVertex:
        return self.rep[(face, tuple(c))]

    def ring_interior(self) -> VertexSet:
        """Vertices not lying on a boundary edge."""
        return self.vertices.where(lambda v: v not in self.on_boundary)

    def face_vertices(self, f: int) -> list[SmallVertex]:
        return [self.rep[(f, c)] for c in coords(self.n)]

    def quiver(self) -> np.ndarray:
        """Signed adjacency matrix on ``self.vertices`` (canonical order)."""
        n, V = self.n, self.vertices
        cset = set(coords(n))
        Q = int_array(len(V), len(V))
        for f in self.tri.faces:
            for c in coords(n):
                for d, st in enumerate(_STEPS):
                    c2 = (c[0] + st[0], c[1] + st[1], c[2] + st[2])
                    if c2 not in cset:
                        continue
                    w = 1 if on_slot(c, d) and on_slot(c2, d) else 2
                    a = V.position(self.rep[(f, c)])
                    b = V.position(self.rep[(f, c2)])
                    Q[a, b] -= w
                    Q[b, a] += w
        return Q

    def h(self, Q: np.ndarray | None = None) -> np.ndarray:
        if Q is None:
            Q = self.quiver()
        V = self.vertices
        N = len(V)
        H = int_array(N, N)
        for a in range(N):
            ea = self.on_boundary.get(V[a], set())
            for b in range(N):
                if ea and ea & self.on_boundary.get(V[b], set()):
                    if a == b:
                        H[a, b] = 1
                    else:
                        H[a, b] = -1 if Q[a, b] > 0 else 0
                else:
                    if Q[a, b] % 2:
                        raise NonIntegerHalf(f"odd quiver entry at {V[a]}, {V[b]}")
                    H[a, b] = -(Q[a, b] // 2)
        return H


@lru_cache(maxsize=128)
def _ntri(tri: Triangulation, n: int) -> NTriangulation:
    return NTriangulation(tri, n)


def n_triangulation(tri: Triangulation, n: int) -> NTriangulation:
    return _ntri(tri, n)


@dataclass(eq=False)
class ExtendedVertexSets:
    """Index sets of λ*.

    ``full`` is V̄_{λ*} ordered as (interior, W, U); ``V`` = interior + W,
    ``Vp`` = interior + U. ``base`` is V̄_λ (vertices of original faces).
    """

    nt: NTriangulation
    interior: VertexSet
    W: VertexSet
    U: VertexSet
    base: VertexSet
    w_key: dict  # w vertex -> (component, edge, k), all 1-based
    u_key: dict

    @property
    def full(self) -> VertexSet:
        return self.interior + self.W + self.U

    @property
    def V(self) -> VertexSet:
        return self.interior + self.W

    @property
    def Vp(self) -> VertexSet:
        return self.interior + self.U

    attached: frozenset = frozenset()

    def p(self, v: SmallVertex) -> SmallVertex:
        """(i, j, k) in an attached face -> (0, n-k, k) in the same face."""
        if v.face not in self.attached or v.coords[2] == 0:
            raise ValueError(f"{v} is not off the attaching edge of an attached face")
        n, k = self.nt.n, v.coords[2]
        return self.nt.vertex(v.face, (0, n - k, k))

    def block(self, rows: str, cols: str) -> tuple[VertexSet, VertexSet]:
        named = {"I": self.interior, "W": self.W, "U": self.U}
        return named[rows], named[cols]


def boundary_order(tri: Triangulation) -> list[tuple[Side, int, int]]:
    """(edge, component index, edge index) following the boundary orientation."""
    out = []
    for i, comp in enumerate(tri.boundary_components, start=1):
        for j, e in enumerate(comp, start=1):
            out.append((e, i, j))
    return out


@lru_cache(maxsize=64)
def _ext_sets(ext: ExtendedTriangulation, n: int) -> ExtendedVertexSets:
    nt = n_triangulation(ext.tri, n)
    base_tri = ext.base
    b = len(base_tri.boundary_components)
    r = [len(c) for c in base_tri.boundary_components]
    w_key, u_key = {}, {}
    for e, i, j in boundary_order(base_tri):
        f = ext.attached_face(e)
        for k in range(1, n):
            w_key[nt.vertex(f, (0, k, n - k))] = (i, j, k)
            u_key[nt.vertex(f, (k, 0, n - k))] = (i, j, k)

    def order(key):
        i, j, k = key
        return (b - i, r[i - 1] - j, n - k)

    W = VertexSet(sorted(w_key, key=lambda v: order(w_key[v])))
    U = VertexSet(sorted(u_key, key=lambda v: order(u_key[v])))
    interior = nt.vertices.where(lambda v: v not in w_key and v not in u_key)
    base_faces = set(base_tri.faces)
    base = VertexSet(sorted({nt.rep[(f, c)] for f in base_faces for c in coords(n)}))
    return ExtendedVertexSets(nt, interior, W, U, base, w_key, u_key,
                              frozenset(ext.attached))


def extended_sets(ext: ExtendedTriangulation, n: int) -> ExtendedVertexSets:
    return _ext_sets(ext, n)


def require_no_interior_punctures(tri: Triangulation) -> None:
    if tri.interior_punctures():
        raise InteriorPuncture(f"surface {tri.spec.name!r} has interior punctures")


# ---------------------------------------------------------------- public ops

def small_vertices(t: Triangulation | ExtendedTriangulation, n: int) -> VertexSet:
    """V̄ of a triangulation; for λ* the ordered V̄_{λ*} = (interior, W, U)."""
    if isinstance(t, ExtendedTriangulation):
        return extended_sets(t, n).full
    return n_triangulation(t, n).vertices


@lru_cache(maxsize=128)
def _quiver_full(tri: Triangulation, n: int) -> LabeledIntMatrix:
    nt = n_triangulation(tri, n)
    return LabeledIntMatrix(nt.vertices, nt.vertices, nt.quiver())


@lru_cache(maxsize=128)
def _h_full(tri: Triangulation, n: int) -> LabeledIntMatrix:
    nt = n_triangulation(tri, n)
    return LabeledIntMatrix(nt.vertices, nt.vertices, nt.h(_quiver_full(tri, n).data))


def quiver_matrix(t: Triangulation | ExtendedTriangulation, n: int,
                  full: bool = False) -> LabeledIntMatrix:
    """Q̄_λ; for λ* the restriction Q_λ to V_λ x V_λ (or Q̄_{λ*} if ``full``)."""
    if isinstance(t, ExtendedTriangulation):
        sets = extended_sets(t, n)
        Q = _quiver_full(t.tri, n)
        S = sets.full if full else sets.V
        return Q.sub(S, S)
    return _quiver_full(t, n)


def h_matrix(t: Triangulation | ExtendedTriangulation, n: int,
             full: bool = False) -> LabeledIntMatrix:
    """H̄_λ; for λ* the restriction H_λ to V_λ x V′_λ (or H̄_{λ*} if ``full``)."""
    if isinstance(t, ExtendedTriangulation):
        sets = extended_sets(t, n)
        H = _h_full(t.tri, n)
        if full:
            return H.sub(sets.full, sets.full)
        return H.sub(sets.V, sets.Vp)
    return _h_full(t, n)


def balanced_lattice(t: Triangulation | ExtendedTriangulation, n: int) -> Lattice:
    """{k : k H ≡ 0 mod n} on V̄_λ (or on V_λ for λ*)."""
    return kernel_mod(h_matrix(t, n).data, n)


def pr_vector(nt: NTriangulation, face: int, which: int, order: VertexSet) -> list[int]:
    """Zero-extension of the projection (i, j, k) -> coordinate ``which`` on ``face``."""
    out = [0] * len(order)
    for c in coords(nt.n):
        v = nt.vertex(face, c)
        if v in order:
            out[order.position(v)] = c[which]
    return out


def cardinality_formulas(t: Triangulation, n: int) -> dict:
    inv = classify(t)
    return {"V": (n * n - 1) * inv.r,
            "Vbar": (n * n - 1) * inv.r - n * (n - 1) // 2 * inv.n_boundary_edges}
