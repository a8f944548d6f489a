"""Skeletons, quantum-trace matrices and their block structure.

Skeleton rule: a vertex ``c`` of face ``f`` contributes ``c`` itself to
``f``. For each slot ``s`` with ``a = c[s] > 0`` its leg leaves through slot
``s``; while that slot is glued to slot ``t`` of ``g`` the elongated arc adds
the point with ``y[(t+1)%3] = a, y[t] = n-a`` to ``g`` and turns left, i.e.
continues through slot ``(t+1) % 3`` of ``g``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import (BlockMismatch, ElongationLoop, NoAdmissibleRotation,
                     WellDefinednessViolation)
from .lattice import determinant
from .ntriang import (Coords, ExtendedVertexSets, LabeledIntMatrix, NTriangulation,
                      SmallVertex, VertexSet, coords, extended_sets, int_array,
                      n_triangulation, quiver_matrix, h_matrix,
                      require_no_interior_punctures)
from .surface import ExtendedTriangulation, Triangulation, attach_triangles


def kbar_p3(v: Coords, w: Coords, n: int | None = None) -> int:
    """Triangle kernel jk′ + ki′ + i′j after a common rotation with i′ ≤ i, j′ ≥ j."""
    if n is not None and (sum(v) != n or sum(w) != n):
        raise NoAdmissibleRotation(f"coordinates {v}, {w} do not sum to {n}")
    for _ in range(3):
        if w[0] <= v[0] and w[1] >= v[1]:
            i, j, k = v
            i2, _, k2 = w
            return j * k2 + k * i2 + i2 * j
        v = (v[1], v[2], v[0])
        w = (w[1], w[2], w[0])
    raise NoAdmissibleRotation(f"no rotation of {v}, {w} is admissible")


@dataclass(frozen=True)
class Skeleton:
    """Pieces of the elongated tripod of a vertex, grouped by face."""

    face: int
    coords: Coords
    pieces: dict = field(hash=False, compare=False)

    def in_face(self, tau: int) -> list[Coords]:
        return sorted(self.pieces.get(tau, []))


def face_skeleton(tri: Triangulation, n: int, f: int, c: Coords) -> Skeleton:
    pieces: dict[int, list[Coords]] = {f: [c]}
    for s in range(3):
        a = c[s]
        if a == 0:
            continue
        face, slot = f, s
        seen = set()
        while (face, slot) in tri.partner:
            g, t = tri.partner[(face, slot)]
            if (g, t) in seen:
                raise ElongationLoop(f"arc from {(f, c)} circles slot {(g, t)}")
            seen.add((g, t))
            y = [0, 0, 0]
            y[(t + 1) % 3] = a
            y[t] = n - a
            pieces.setdefault(g, []).append(tuple(y))
            face, slot = g, (t + 1) % 3
    return Skeleton(f, c, pieces)


def skeleton(nt: NTriangulation, v: SmallVertex, tau: int | None = None):
    """skl(v), or the list of its pieces inside face ``tau``."""
    require_no_interior_punctures(nt.tri)
    sk = face_skeleton(nt.tri, nt.n, v.face, v.coords)
    return sk if tau is None else sk.in_face(tau)


def _kbar(nt: NTriangulation) -> np.ndarray:
    require_no_interior_punctures(nt.tri)
    V = nt.vertices
    N = len(V)
    reps = [nt.reps_of[v] for v in V]
    K = int_array(N, N)
    for a in range(N):
        row = None
        for f, c in reps[a]:
            sk = face_skeleton(nt.tri, nt.n, f, c).pieces
            cur = []
            for b in range(N):
                vals = {sum(kbar_p3(y, cb) for y in sk.get(g, ())) for g, cb in reps[b]}
                if len(vals) != 1:
                    raise WellDefinednessViolation(
                        f"K({V[a]}, {V[b]}) depends on the face chosen for the column")
                cur.append(vals.pop())
            if row is None:
                row = cur
            elif row != cur:
                raise WellDefinednessViolation(
                    f"row of {V[a]} depends on the face chosen for it")
        K[a, :] = row
    return K


@lru_cache(maxsize=128)
def _kbar_full(tri: Triangulation, n: int) -> LabeledIntMatrix:
    nt = n_triangulation(tri, n)
    return LabeledIntMatrix(nt.vertices, nt.vertices, _kbar(nt))


def kbar_matrix(t: Triangulation | ExtendedTriangulation, n: int) -> LabeledIntMatrix:
    """K̄_λ; for λ* the matrix K̄_{λ*} indexed by (interior, W, U)."""
    if isinstance(t, ExtendedTriangulation):
        S = extended_sets(t, n).full
        return _kbar_full(t.tri, n).sub(S, S)
    return _kbar_full(t, n)


def c_matrix(ext: ExtendedTriangulation, n: int) -> LabeledIntMatrix:
    """C on V′_λ x V̄_{λ*}: 1 on the diagonal, -1 at (v, p(v)) off V̄_λ."""
    sets = extended_sets(ext, n)
    C = LabeledIntMatrix.zeros(sets.Vp, sets.full)
    for a, v in enumerate(sets.Vp):
        C.data[a, sets.full.position(v)] = 1
        if v not in sets.base:
            C.data[a, sets.full.position(sets.p(v))] -= 1
    return C


def ck_matrix(ext: ExtendedTriangulation, n: int) -> LabeledIntMatrix:
    return c_matrix(ext, n) @ kbar_matrix(ext, n)


def k_matrix(ext: ExtendedTriangulation, n: int) -> LabeledIntMatrix:
    """K_λ = (C K̄_{λ*}) restricted to V′_λ x V_λ."""
    sets = extended_sets(ext, n)
    return ck_matrix(ext, n).sub(sets.Vp, sets.V)


def k_sharp(ext: ExtendedTriangulation, n: int) -> LabeledIntMatrix:
    """K_λ · (C restricted to V′ x V)ᵀ, a square matrix on V′_λ."""
    sets = extended_sets(ext, n)
    Cv = c_matrix(ext, n).sub(sets.Vp, sets.V)
    return k_matrix(ext, n) @ Cv.T


def p_matrices(ext: ExtendedTriangulation, n: int) -> tuple[LabeledIntMatrix, LabeledIntMatrix]:
    """(P_λ, P̄_λ) with P_λ = K_λ Q_λ K_λᵀ and P̄_λ = K̄_λ Q̄_λ K̄_λᵀ."""
    return p_lambda(ext, n), p_bar(ext.base, n)


@lru_cache(maxsize=128)
def p_lambda(ext: ExtendedTriangulation, n: int) -> LabeledIntMatrix:
    K = k_matrix(ext, n)
    return K @ quiver_matrix(ext, n) @ K.T


@lru_cache(maxsize=128)
def p_bar(tri: Triangulation, n: int) -> LabeledIntMatrix:
    K = kbar_matrix(tri, n)
    return K @ quiver_matrix(tri, n) @ K.T


@dataclass(eq=False)
class TraceMatrices:
    n: int
    sets: ExtendedVertexSets
    kbar: LabeledIntMatrix        # K̄_λ on the base
    kbar_ext: LabeledIntMatrix    # K̄_{λ*}
    hbar: LabeledIntMatrix        # H̄_λ
    hbar_ext: LabeledIntMatrix    # H̄_{λ*}
    qbar: LabeledIntMatrix
    qbar_ext: LabeledIntMatrix
    C: LabeledIntMatrix
    K: LabeledIntMatrix
    Q: LabeledIntMatrix
    H: LabeledIntMatrix
    P: LabeledIntMatrix
    Pbar: LabeledIntMatrix


def trace_matrices(t: Triangulation | ExtendedTriangulation, n: int) -> TraceMatrices:
    ext = t if isinstance(t, ExtendedTriangulation) else attach_triangles(t)
    base = ext.base
    return TraceMatrices(
        n=n, sets=extended_sets(ext, n),
        kbar=kbar_matrix(base, n), kbar_ext=kbar_matrix(ext, n),
        hbar=h_matrix(base, n), hbar_ext=h_matrix(ext, n, full=True),
        qbar=quiver_matrix(base, n), qbar_ext=quiver_matrix(ext, n, full=True),
        C=c_matrix(ext, n), K=k_matrix(ext, n), Q=quiver_matrix(ext, n),
        H=h_matrix(ext, n), P=p_lambda(ext, n), Pbar=p_bar(base, n),
    )


# ---------------------------------------------------------------- identities

@dataclass
class Check:
    lemma: str
    ok: bool
    where: object = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"lemma": self.lemma, "ok": self.ok,
                "where": None if self.where is None else str(self.where),
                "detail": self.detail}


def _first_diff(A: np.ndarray, B: np.ndarray, rows=None, cols=None):
    diff = np.argwhere(A != B)
    if len(diff) == 0:
        return None
    i, j = diff[0]
    r = rows[i] if rows is not None else int(i)
    c = cols[j] if cols is not None else int(j)
    return (r, c, int(A[i, j]), int(B[i, j]))


def _eq_check(lemma, A: LabeledIntMatrix, expected: np.ndarray) -> Check:
    d = _first_diff(A.data, expected, A.rows, A.cols)
    return Check(lemma, d is None, d)


def identity_checks(t: Triangulation | ExtendedTriangulation, n: int) -> list[Check]:
    """K̄H̄ = nI, KH = nI, n(K♯ - K♯ᵀ) = P_λ, CK̄ vanishes off V_λ, antisymmetry."""
    M = trace_matrices(t, n)
    s = M.sets
    eye = lambda m: n * np.eye(m, dtype=object)
    out = [
        _eq_check("KbarHbar=nI", M.kbar @ M.hbar, eye(len(M.kbar.rows))),
        _eq_check("KbarHbar=nI(ext)", M.kbar_ext @ M.hbar_ext, eye(len(s.full))),
        _eq_check("KH=nI", M.K @ M.H, eye(len(s.Vp))),
    ]
    CK = M.C @ M.kbar_ext
    out.append(_eq_check("CKbar=0 off V", CK.sub(s.Vp, s.U), np.zeros((len(s.Vp), len(s.U)), dtype=object)))
    Ks = k_sharp(t if isinstance(t, ExtendedTriangulation) else attach_triangles(t), n)
    out.append(_eq_check("n(K-K^T)=P", M.P, n * (Ks.data - Ks.data.T)))
    out.append(_eq_check("P antisymmetric", M.P, -M.P.data.T))
    out.append(Check("P in nZ", bool((M.P.data % n == 0).all())))
    out.append(_eq_check("Pbar antisymmetric", M.Pbar, -M.Pbar.data.T))
    out.append(Check("Pbar in nZ", bool((M.Pbar.data % n == 0).all())))
    out.append(_eq_check("Q antisymmetric", M.qbar_ext, -M.qbar_ext.data.T))
    return out


# ---------------------------------------------------------------- E, F, G

def g_matrix(n: int) -> np.ndarray:
    G = int_array(n - 1, n - 1)
    for i in range(1, n):
        for j in range(1, n):
            G[i - 1, j - 1] = i * (n - j) if i <= j else j * (n - i)
    return G


def e_matrix(n: int) -> np.ndarray:
    E = int_array(n - 1, n - 1)
    for i in range(1, n):
        for j in range(1, i + 1):
            E[i - 1, j - 1] = i - j + 1
    return E


def f_matrix(n: int) -> np.ndarray:
    F = int_array(n - 1, n - 1)
    for j in range(1, n):
        F[0, j - 1] = n - j
    for j in range(1, n - 1):
        F[j, j - 1] = -n
    return F


def expected_det_b_minus_a(n: int, r: int) -> int:
    return 2 ** (n - 1) * n ** (r * (n - 1))


# ---------------------------------------------------------------- blocks

@dataclass
class BlockReport:
    surface: str
    n: int
    checks: list[Check]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def raise_on_failure(self) -> None:
        for c in self.checks:
            if not c.ok:
                raise BlockMismatch(c.lemma, c.where, c.detail)

    def to_json(self) -> dict:
        return {"surface": self.surface, "n": self.n, "ok": self.ok,
                "checks": [c.to_json() for c in self.checks]}


def _component_cols(keys: dict, S: VertexSet, i: int) -> VertexSet:
    return S.where(lambda v: keys[v][0] == i)


def verify_blocks(t: Triangulation | ExtendedTriangulation, n: int) -> BlockReport:
    ext = t if isinstance(t, ExtendedTriangulation) else attach_triangles(t)
    s = extended_sets(ext, n)
    I, W, U = s.interior, s.W, s.U
    Kx = kbar_matrix(ext, n)
    KQ = Kx @ quiver_matrix(ext, n, full=True)
    checks = []
    z = lambda a, b: np.zeros((len(a), len(b)), dtype=object)
    eye = lambda a: np.eye(len(a), dtype=object)

    checks.append(_eq_check("lemKQ:-2nI", KQ.sub(I, I), -2 * n * eye(I)))
    checks.append(_eq_check("lemKQ:O(W)", KQ.sub(W, I), z(W, I)))
    checks.append(_eq_check("lemKQ:O(U)", KQ.sub(U, I), z(U, I)))
    A = KQ.sub(W, W)
    checks.append(_eq_check("matrixA", A, -n * eye(W)))

    rvals = [len(c) for c in ext.base.boundary_components]
    B = KQ.sub(U, W)
    Bexp = z(U, W)
    Lexp = z(U, W)
    G = g_matrix(n)
    for a, u in enumerate(U):
        iu, ju, ku = s.u_key[u]
        for b, w in enumerate(W):
            iw, jw, kw = s.w_key[w]
            if iu != iw:
                continue
            r = rvals[iu - 1]
            nxt = jw == ju % r + 1
            if nxt and ku == kw:
                Bexp[a, b] = n
            if jw == ju:
                Lexp[a, b] -= G[ku - 1, kw - 1]
            if nxt:
                Lexp[a, b] += G[ku - 1, kw - 1]
    checks.append(_eq_check("matrixB", B, Bexp))

    C = c_matrix(ext, n)
    C1 = C.sub(I, W)
    D = KQ.sub(I, W)
    DC = D.data + C1.data.dot(A.data)
    bad = np.argwhere(DC % n != 0)
    checks.append(Check("matrixDC", len(bad) == 0,
                        None if len(bad) == 0 else (I[bad[0][0]], W[bad[0][1]])))

    K = k_matrix(ext, n)
    checks.append(_eq_check("matrixK", K.sub(U, W), Lexp))

    KQl = K @ quiver_matrix(ext, n)
    expect = np.block([[-2 * n * eye(I), DC], [z(U, I), B.data - A.data]]) if len(I) else \
        np.block([[B.data - A.data]])
    checks.append(_eq_check("KQ form", KQl, expect))

    for i, r in enumerate(rvals, start=1):
        if r % 2 == 0:
            continue
        Ui = _component_cols(s.u_key, U, i)
        Wi = _component_cols(s.w_key, W, i)
        BA = B.sub(Ui, Wi).data - A.sub(Wi, Wi).data
        det = determinant(BA.tolist())
        want = expected_det_b_minus_a(n, r)
        checks.append(Check(f"invertibility[{i}]", det == want, None, f"det={det}, expected {want}"))

    EF = e_matrix(n).dot(f_matrix(n))
    checks.append(Check("matrixG", bool((EF == G).all())))
    return BlockReport(ext.base.spec.name, n, checks)
