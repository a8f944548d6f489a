"""Cellular cochains of the closed-up surface over Z_k and cocycle counts.

0-cells are punctures, 1-cells are the edges of the triangulation (boundary
edges included) and 2-cells are its faces. Each edge is oriented by its
first side in (face, slot) order, running from corner s to corner s+1.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod

from .errors import NotADivisor
from .lattice import Matrix, ambient_index, kernel_mod, matmul, smith_invariants, transpose
from .ntriang import h_matrix
from .surface import ExtendedTriangulation, SurfaceSpec, Triangulation, attach_triangles, parse_surface


@dataclass(frozen=True)
class CochainComplex:
    delta0: Matrix  # edges x punctures
    delta1: Matrix  # faces x edges
    modulus: int | None = None

    @property
    def shape(self) -> tuple[int, int, int]:
        return len(self.delta0[0]) if self.delta0 else 0, len(self.delta1[0]) if self.delta1 else 0, len(self.delta1)

    def is_complex(self) -> bool:
        D = matmul(self.delta1, self.delta0)
        k = self.modulus
        return all((x % k == 0) if k else x == 0 for row in D for x in row)


def _tri(t) -> Triangulation:
    if isinstance(t, SurfaceSpec):
        return parse_surface(t)
    if isinstance(t, ExtendedTriangulation):
        return t.base
    return t


def cochain_complex(t, k: int | None = None) -> CochainComplex:
    tri = _tri(t)
    corner = {c: i for i, cls in enumerate(tri.punctures) for c in cls}
    edges = [tuple(sorted(e)) for e in tri.edges]
    edges.sort()
    edge_of = {}
    for j, e in enumerate(edges):
        for side in e:
            edge_of[side] = (j, 1 if side == e[0] else -1)
    d0 = [[0] * len(tri.punctures) for _ in edges]
    for j, e in enumerate(edges):
        f, s = e[0]
        d0[j][corner[(f, (s + 1) % 3)]] += 1
        d0[j][corner[(f, s)]] -= 1
    faces = sorted(tri.faces)
    d1 = [[0] * len(edges) for _ in faces]
    for a, f in enumerate(faces):
        for s in range(3):
            j, sign = edge_of[(f, s)]
            d1[a][j] += sign
    return CochainComplex(d0, d1, k)


def _z1(delta1: Matrix, n_edges: int, k: int) -> int:
    inv = smith_invariants(delta1) if delta1 else []
    inv = list(inv) + [0] * (n_edges - len(inv))
    return prod(gcd(d, k) for d in inv[:n_edges])


def cocycle_count(t, k: int) -> int:
    """|Z¹(Σ̄, Z_k)|."""
    cx = cochain_complex(t, k)
    return _z1(cx.delta1, len(cx.delta0), k)


def restricted_cocycle_count(t, n: int, l: int) -> int:
    """|l·C¹(Σ̄, Z_n) ∩ Z¹(Σ̄, Z_n)|."""
    if l <= 0 or n % l:
        raise NotADivisor(f"{l} does not divide {n}")
    cx = cochain_complex(t, n)
    E = len(cx.delta0)
    if E == 0:
        return 1
    # y ≡ 0 mod l and δ₁y ≡ 0 mod n
    M = [list(row) + [(n // l) if i == j else 0 for j in range(E)]
         for i, row in enumerate(transpose(cx.delta1) if cx.delta1 else [[] for _ in range(E)])]
    return n ** E // ambient_index(kernel_mod(M, n))


def exact_sequence_check(t, n: int, k: int, reduced: bool = False) -> dict:
    """Compare [Λ ∩ kZ^V : N·Z^V] with |Z¹(Σ̄, Z_n)_l| for l = gcd(k, n), N = kn/l.

    Λ is the balanced lattice: on V̄_λ with H̄_λ when ``reduced``, otherwise
    on V_λ with H_λ.
    """
    tri = _tri(t)
    l = gcd(k, n)
    N = k * n // l
    H = h_matrix(tri, n) if reduced else h_matrix(attach_triangles(tri), n)
    rows = H.data.tolist()
    V = len(rows)
    M = [[(N // n) * x for x in row] + [(N // k) if i == j else 0 for j in range(V)]
         for i, row in enumerate(rows)]
    lhs = N ** V // ambient_index(kernel_mod(M, N))
    rhs = restricted_cocycle_count(tri, n, l)
    return {"n": n, "k": k, "l": l, "N": N, "index": lhs, "cocycles": rhs, "equal": lhs == rhs}
