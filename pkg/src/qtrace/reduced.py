"""Reduced quantum tori: the μ-triangulation, its block matrices and the
palindromic boundary lattice.

Boundary edges of a component are labeled e_1, ..., e_r following the
boundary orientation, with e_k running from p_k to p_{k+1}. A fan face
(p_{2k+1}, p_{2k-1}, p_{2k}) is read as an attached triangle: its slot e1 is
the arc, slot e2 = e_{2k-1} carries W and slot e3 = e_{2k} carries U.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import BlockMismatch, FormulaMismatch, NotTriangulable, PropertyViolation
from .lattice import (Lattice, ambient_index, kernel_mod, lattice_equal, lattice_sum)
from .ntriang import (LabeledIntMatrix, SmallVertex, VertexSet, h_matrix,
                      int_array, n_triangulation, quiver_matrix,
                      require_no_interior_punctures)
from .surface import (Side, SurfaceSpec, Triangulation, classify, parse_surface,
                      spec_from_triangles)
from .torus import center_lattice
from .trace import Check, _eq_check, g_matrix, kbar_matrix
from .unity import RootParams


@dataclass(eq=False)
class MuTriangulation:
    """A triangulation together with the boundary labels used by the reduced lemmas.

    ``labels[i]`` lists the boundary edges e_1..e_r of component i+1.
    ``fans[i]`` lists (face, k) for the fan faces of that component (empty
    when r_i = 1).
    """

    tri: Triangulation
    labels: tuple[tuple[Side, ...], ...]
    fans: tuple[tuple[tuple[int, int], ...], ...]
    note: str = ""

    @property
    def r(self) -> list[int]:
        return [len(c) for c in self.labels]


def _polygon_mu(name: str, r: int) -> tuple[SurfaceSpec, list[Side], list[tuple[int, int]]]:
    if r < 4:
        raise NotTriangulable(
            f"a {r}-gon has no room for the boundary fan arcs (they would be isotopic "
            "to boundary edges)")
    p = lambda i: (i - 1) % r + 1
    tris = []
    fans = []
    for k in range(1, r // 2 + 1):
        tris.append((p(2 * k + 1), p(2 * k - 1), p(2 * k)))
        fans.append((len(tris) - 1, k))
    # odd r: p1, p3, ..., p_r, so the last inner triangle closes along e_r
    inner = list(range(1, r + 1, 2)) if r % 2 else list(range(1, r, 2))
    for a, b in zip(inner[1:-1], inner[2:]):
        tris.append((inner[0], a, b))
    spec = spec_from_triangles(name + "-mu", tris)
    sides = {}
    for f, tri in enumerate(tris):
        for s in range(3):
            sides[(tri[s], tri[(s + 1) % 3])] = (f, s)
    labels = [sides[(p(k), p(k + 1))] for k in range(1, r + 1)]
    return spec, labels, fans


def mu_triangulation(t: Triangulation | SurfaceSpec) -> MuTriangulation:
    tri = parse_surface(t) if isinstance(t, SurfaceSpec) else t
    require_no_interior_punctures(tri)
    inv = classify(tri)
    if all(len(c) == 1 for c in tri.boundary_components):
        return MuTriangulation(tri, tri.boundary_components,
                               tuple(() for _ in tri.boundary_components),
                               "every boundary component has one puncture; λ kept")
    if inv.b == 1 and inv.chi == 1 and len(tri.face_components()) == 1:
        spec, labels, fans = _polygon_mu(tri.spec.name, inv.r_i[0])
        mu = parse_surface(spec)
        # labels were computed on the uncanonicalized spec; faces and slots are unchanged
        return MuTriangulation(mu, (tuple(labels),), (tuple(fans),), "polygon fans")
    raise NotTriangulable(
        "μ construction is implemented for polygons and for surfaces whose boundary "
        "components each carry a single puncture")


# ---------------------------------------------------------------- helper blocks

def _blk(blocks) -> np.ndarray:
    return np.block(blocks).astype(object) if blocks else int_array(0, 0)


def _O(n):
    return int_array(n - 1, n - 1)


def _I(n):
    return np.eye(n - 1, dtype=object)


def anti_identity(n: int) -> np.ndarray:
    """I′: ones on the anti-diagonal."""
    return _I(n)[::-1].copy()


def g_prime(n: int) -> np.ndarray:
    """G with its rows reversed."""
    return g_matrix(n)[::-1].copy()


def _cyclic(X, O, i, wrap):
    rows = []
    for p in range(i):
        row = []
        for q in range(i):
            if p == q + 1 or (wrap and p == 0 and q == i - 1):
                row.append(X)
            else:
                row.append(O)
        rows.append(row)
    return _blk(rows)


def block_B(n, i):
    return _cyclic(n * _I(n), _O(n), i, True)


def block_B_O(n, i):
    return _cyclic(n * _I(n), _O(n), i, False)


def block_A(n, i):
    return _blk([[-n * _I(n) if p == q else _O(n) for q in range(i)] for p in range(i)])


def block_E(n, i):
    return _blk([[_O(n)] * (i - 1) + [n * _I(n)]])


def block_E_T(n, i):
    return _blk([[n * anti_identity(n)]] + [[_O(n)] for _ in range(i - 1)])


def block_G_tilde(n, i):
    return _cyclic(g_matrix(n), _O(n), i, True)


def block_G_tilde_O(n, i):
    return _cyclic(g_matrix(n), _O(n), i, False)


def block_G(n, i):
    return _blk([[g_matrix(n) if p == q else _O(n) for q in range(i)] for p in range(i)])


def block_G_O(n, i):
    return _blk([[g_matrix(n) if p == q and p > 0 else _O(n) for q in range(i)]
                 for p in range(i)])


def block_E_G(n, i):
    return _blk([[_O(n)] * (i - 1) + [g_matrix(n)]])


def block_E_G_T(n, i):
    return _blk([[g_prime(n)]] + [[_O(n)] for _ in range(i - 1)])


def _zero(a, b):
    return int_array(a, b)


def expected_P_i(n: int, r: int) -> np.ndarray:
    if r == 1:
        return -n * _I(n) + n * anti_identity(n)
    h = r // 2
    if r % 2 == 0:
        return _blk([[block_A(n, h), -block_A(n, h)], [block_B(n, h), block_A(n, h)]])
    k = (r - 1) // 2
    m = k * (n - 1)
    return _blk([
        [block_A(n, k), -block_A(n, k), _zero(m, n - 1)],
        [block_B_O(n, k), block_A(n, k), block_E_T(n, k)],
        [block_E(n, k), _zero(n - 1, m), -n * _I(n)],
    ])


def expected_S_i(n: int, r: int) -> np.ndarray:
    G = g_matrix(n)
    if r == 1:
        return G + g_prime(n)
    h = r // 2
    if r % 2 == 0:
        return _blk([[block_G(n, h), block_G(n, h)], [block_G_tilde(n, h), block_G(n, h)]])
    k = (r - 1) // 2
    m = k * (n - 1)
    return _blk([
        [block_G(n, k), block_G(n, k), _zero(m, n - 1)],
        [block_G_tilde_O(n, k), block_G(n, k), block_E_G_T(n, k)],
        [block_E_G(n, k), _zero(n - 1, m), G],
    ])


# ---------------------------------------------------------------- vertex orders

def _edge_points(nt, side: Side) -> list[SmallVertex]:
    """Small vertices of a boundary edge listed along the boundary orientation."""
    f, s = side
    n = nt.n
    out = []
    for j in range(1, n):
        c = [0, 0, 0]
        c[(s + 1) % 3] = j
        c[s] = n - j
        out.append(nt.vertex(f, c))
    return out


@dataclass(eq=False)
class ReducedOrder:
    interior: VertexSet
    components: list[tuple[VertexSet, VertexSet, VertexSet]]  # (W_i, U_i, V_i)

    @property
    def boundary(self) -> VertexSet:
        out = ()
        for W, U, V in self.components:
            out += W.items + U.items + V.items
        return VertexSet(out)

    @property
    def full(self) -> VertexSet:
        return self.interior + self.boundary


def reduced_order(mu: MuTriangulation, n: int) -> ReducedOrder:
    nt = n_triangulation(mu.tri, n)
    comps = []
    for labels, fans in zip(mu.labels, mu.fans):
        r = len(labels)
        Wk, Uk = [], []
        for f, k in fans:
            j_w, j_u = 2 * k - 1, 2 * k
            for kk in range(1, n):
                Wk.append(((r - j_w, n - kk), nt.vertex(f, (0, kk, n - kk))))
                Uk.append(((r - j_u, n - kk), nt.vertex(f, (kk, 0, n - kk))))
        W = VertexSet(v for _, v in sorted(Wk))
        U = VertexSet(v for _, v in sorted(Uk))
        if r % 2:
            a = _edge_points(nt, labels[-1])  # a_1 .. a_{n-1} along the orientation
            V = VertexSet(reversed(a))        # a_j > a_k iff j < k
        else:
            V = VertexSet(())
        comps.append((W, U, V))
    bd = set()
    for W, U, V in comps:
        bd.update(W.items + U.items + V.items)
    interior = nt.vertices.where(lambda v: v not in bd)
    return ReducedOrder(interior, comps)


# ---------------------------------------------------------------- block lemmas

@dataclass
class ReducedBlockReport:
    surface: str
    n: int
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def raise_on_failure(self):
        for c in self.checks:
            if not c.ok:
                raise BlockMismatch(c.lemma, c.where, c.detail)

    def to_json(self) -> dict:
        return {"surface": self.surface, "n": self.n, "ok": self.ok, "reduced": True,
                "checks": [c.to_json() for c in self.checks]}


@dataclass(eq=False)
class ReducedMatrices:
    order: ReducedOrder
    K: LabeledIntMatrix
    Q: LabeledIntMatrix
    P: LabeledIntMatrix
    KQ: LabeledIntMatrix


def reduced_matrices(mu: MuTriangulation, n: int) -> ReducedMatrices:
    order = reduced_order(mu, n)
    S = order.full
    K = kbar_matrix(mu.tri, n).sub(S, S)
    Q = quiver_matrix(mu.tri, n).sub(S, S)
    KQ = K @ Q
    return ReducedMatrices(order, K, Q, KQ @ K.T, KQ)


def reduced_blocks(mu: MuTriangulation, n: int) -> tuple[ReducedMatrices, ReducedBlockReport]:
    M = reduced_matrices(mu, n)
    o = M.order
    I, B = o.interior, o.boundary
    rep = ReducedBlockReport(mu.tri.spec.name, n)
    rep.checks.append(_eq_check("lemKQ:-2nI", M.KQ.sub(I, I), -2 * n * np.eye(len(I), dtype=object)))
    rep.checks.append(_eq_check("lemKQ:O", M.KQ.sub(B, I), _zero(len(B), len(I))))
    Pp = M.KQ.sub(I, B).data
    bad = np.argwhere((Pp != 0) & (Pp != n))
    rep.checks.append(Check("P' in {0,n}", len(bad) == 0,
                            None if len(bad) == 0 else (I[bad[0][0]], B[bad[0][1]])))
    P = M.KQ.sub(B, B).data
    Kd = M.K.sub(B, B).data
    Pexp = _zero(len(B), len(B))
    Sexp = _zero(len(B), len(B))
    pos = 0
    for i, ((W, U, V), r) in enumerate(zip(o.components, mu.r), start=1):
        size = len(W) + len(U) + len(V)
        sl = slice(pos, pos + size)
        Pexp[sl, sl] = expected_P_i(n, r)
        Sexp[sl, sl] = expected_S_i(n, r)
        pos += size
    rep.checks.append(_eq_check("reduced-P", LabeledIntMatrix(B, B, P), Pexp))
    rep.checks.append(_eq_check("reduced-K", LabeledIntMatrix(B, B, Kd), Sexp))
    H = h_matrix(mu.tri, n).sub(o.full, o.full)
    rep.checks.append(_eq_check("KbarHbar=nI", M.K @ H, n * np.eye(len(o.full), dtype=object)))
    Pf = M.P.data
    rep.checks.append(Check("Pbar antisymmetric", bool((Pf == -Pf.T).all())))
    rep.checks.append(Check("Pbar in nZ", bool((Pf % n == 0).all())))
    return M, rep


# ---------------------------------------------------------------- lattices

@dataclass(frozen=True)
class ReducedLattices:
    lambda_m1: Lattice
    boundary_generators: tuple[tuple[int, ...], ...]
    boundary_span: Lattice
    lambda_z: Lattice
    order: VertexSet


def reduced_boundary_generators(tri: Triangulation, n: int, order: VertexSet) -> list[list[int]]:
    """Generators of the palindromic boundary lattice on ``order``."""
    nt = n_triangulation(tri, n)
    gens = []
    for comp in tri.boundary_components:
        r = len(comp)
        pts = [_edge_points(nt, e) for e in comp]
        if r % 2 == 0:
            basis = [[int(x == j) for x in range(n - 1)] for j in range(n - 1)]
        else:
            basis = []
            for j in range((n - 1 + 1) // 2):
                b = [0] * (n - 1)
                b[j] = 1
                b[n - 2 - j] = 1
                basis.append(b)
        for b in basis:
            g = [0] * len(order)
            for t, edge in enumerate(pts):
                # consecutive edges pair u_{t,i} with u_{t+1,n-i}
                row = b if t % 2 == 0 else b[::-1]
                for v, x in zip(edge, row):
                    g[order.position(v)] = x
            gens.append(g)
    return gens


def reduced_lattices(t: MuTriangulation | Triangulation, n: int,
                     params: RootParams) -> ReducedLattices:
    tri = t.tri if isinstance(t, MuTriangulation) else t
    params.require_odd()
    require_no_interior_punctures(tri)
    K = kbar_matrix(tri, n)
    lm = kernel_mod(K.data, params.m1)
    gens = reduced_boundary_generators(tri, n, K.rows)
    span = Lattice.from_generators(gens, len(K.rows))
    return ReducedLattices(lm, tuple(map(tuple, gens)), span, lattice_sum(lm, span), K.rows)


def reduced_rank_formula(tri: Triangulation, params: RootParams) -> int:
    inv = classify(tri)
    n = params.n
    vbar = (n * n - 1) * inv.r - n * (n - 1) // 2 * inv.n_boundary_edges
    e = vbar - inv.t * (n - 1) - (inv.b - inv.t) * (n // 2)
    return params.d ** (inv.r - inv.t) * params.m ** e


def reduced_center_report(t: MuTriangulation | Triangulation, n: int,
                          params: RootParams) -> dict:
    from .trace import p_bar

    tri = t.tri if isinstance(t, MuTriangulation) else t
    lat = reduced_lattices(tri, n, params)
    P = p_bar(tri, n)
    Z = center_lattice(P.data, params.m2)
    return {"equal": lattice_equal(Z, lat.lambda_z), "center": Z, "lattices": lat,
            "boundary_in_center": all(g in Z for g in lat.boundary_generators)}


def reduced_center_check(t: MuTriangulation | Triangulation, n: int,
                         params: RootParams) -> bool:
    """Center lattice of P̄ equals Λ̄_{m′} + Λ̄_∂."""
    return reduced_center_report(t, n, params)["equal"]


def reduced_rank(t: MuTriangulation | Triangulation, n: int, params: RootParams,
                 strict: bool = True) -> int:
    from .trace import p_bar

    tri = t.tri if isinstance(t, MuTriangulation) else t
    params.require_odd()
    rank = ambient_index(center_lattice(p_bar(tri, n).data, params.m2))
    want = reduced_rank_formula(tri, params)
    if strict and rank != want:
        raise FormulaMismatch(f"reduced rank {rank} differs from closed form {want}")
    return rank


def reduced_pattern(tri: Triangulation, n: int, invariants, zero_count) -> dict:
    from .torus import antisym_pattern

    inv = classify(tri)
    vbar = (n * n - 1) * inv.r - n * (n - 1) // 2 * inv.n_boundary_edges
    first = (inv.r - inv.t) // 2
    total = (vbar - inv.t * (n - 1) - (inv.b - inv.t) * (n // 2)) // 2
    return antisym_pattern(invariants, zero_count, n, first, total)


# ---------------------------------------------------------------- G reversal

def _image_size(vectors, n, m1) -> int:
    G2 = (2 * g_matrix(n)) % m1
    seen = set()
    for p in vectors:
        img = tuple(int(x) % m1 for x in np.array(p, dtype=object).dot(G2))
        seen.add(img)
    return len(seen)


def im_mu_size(n: int, m1: int) -> int:
    """|{2pG : p in Z_{m′}^{n-1}}| by enumeration."""
    return _image_size(itertools.product(range(m1), repeat=n - 1), n, m1)


def palindromes(n: int, m1: int):
    half = (n - 1 + 1) // 2
    for head in itertools.product(range(m1), repeat=half):
        yield list(head) + list(reversed(head[: (n - 1) // 2]))


def im_nu_check_size(n: int, m1: int) -> int:
    """|{2pG : p palindromic in Z_{m′}^{n-1}}| by enumeration."""
    return _image_size(palindromes(n, m1), n, m1)


def reversal_properties(n: int, m1: int, samples: int = 50, seed: int = 0) -> dict:
    import random

    if m1 % 2 == 0:
        raise PropertyViolation("m′ must be odd")
    rng = random.Random(seed)
    G = g_matrix(n)
    Gp = g_prime(n)
    ok_a = ok_b = True
    for _ in range(samples):
        k = np.array([rng.randint(-9, 9) for _ in range(n - 1)], dtype=object)
        kG = k.dot(G)
        ok_a &= bool((k[::-1].dot(G) == k.dot(Gp)).all() and (k.dot(Gp) == kG[::-1]).all())
        lhs = (k + k[::-1]).dot(G + Gp)
        ok_b &= bool((lhs == 2 * kG + 2 * kG[::-1]).all())
    m = m1 // gcd(2 * n, m1)
    nu = im_nu_check_size(n, m1)
    mu = im_mu_size(n, m1)
    out = {"reverse": ok_a, "palindromic_sum": ok_b,
           "im_nu": nu, "im_nu_expected": m ** (n // 2),
           "im_mu": mu, "im_mu_expected": m1 * m ** (n - 2)}
    out["ok"] = ok_a and ok_b and nu == out["im_nu_expected"] and mu == out["im_mu_expected"]
    return out
