"""Exact integer linear algebra over Python ints.

Matrices are plain lists of row lists. Anything indexable (numpy object
arrays included) is accepted on input and converted with :func:`as_rows`.

Conventions: vectors are rows and act on the left, so ``kernel_mod(M, N)``
is ``{k : k M = 0 mod N}``. Lattices are stored by a row-echelon Hermite
basis: pivot columns strictly increase down the rows, pivots are positive and
every entry above a pivot lies in ``[0, pivot)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd, isqrt, prod
from typing import Iterable, Sequence

from .errors import NotAntisymmetric, NotSublattice

Matrix = list[list[int]]


class _Infinite:
    """Index of a sublattice of smaller rank."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITE"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return 0


INFINITE = _Infinite()


# ---------------------------------------------------------------- helpers

def as_rows(M) -> Matrix:
    return [[int(x) for x in row] for row in M]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def transpose(M: Matrix) -> Matrix:
    return [list(col) for col in zip(*M)] if M else []


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = transpose(B)
    if not Bt:
        return [[] for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def vecmat(v: Sequence[int], M: Matrix) -> list[int]:
    if not M:
        return []
    out = [0] * len(M[0])
    for x, row in zip(v, M):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] += x * y
    return out


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def determinant(M: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [row[:] for row in as_rows(M)]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def odd_part(l: int) -> int:
    """Largest odd divisor of ``l >= 1``."""
    if l < 1:
        raise ValueError("odd_part needs a positive integer")
    while l % 2 == 0:
        l //= 2
    return l


# ---------------------------------------------------------------- Smith

def smith_normal_form(M) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U M V = D, U and V unimodular, d_i | d_{i+1}."""
    A = as_rows(M)
    m = len(A)
    c = len(A[0]) if m else 0
    U, V = identity(m), identity(c)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        A[dst] = [x - q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(m, c)):
        best = None
        for i in range(t, m):
            for j in range(t, c):
                if A[i][j] and (best is None or abs(A[i][j]) < best[0]):
                    best = (abs(A[i][j]), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // A[t][t])
                    if A[i][t]:
                        swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, c):
                if A[t][j]:
                    add_col(j, t, A[t][j] // A[t][t])
                    if A[t][j]:
                        swap_cols(j, t)
                        dirty = True
            if dirty:
                continue
            p = A[t][t]
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, c)
                        if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad[0]])]
            U[t] = [x + y for x, y in zip(U[t], U[bad[0]])]
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return U, A, V


def smith_invariants(M) -> list[int]:
    """Diagonal of the Smith form (length min(rows, cols), zeros included)."""
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


# ---------------------------------------------------------------- Hermite

def _reduce_above(rows: Matrix, pivots: list[int]) -> None:
    for i, (row, j) in enumerate(zip(rows, pivots)):
        p = row[j]
        for k in range(i):
            q = rows[k][j] // p
            if q:
                rows[k] = [x - q * y for x, y in zip(rows[k], row)]


def _hnf_plain(rows: Matrix, m: int) -> tuple[Matrix, list[int]]:
    rows = [r[:] for r in rows if any(r)]
    out, pivots = [], []
    for j in range(m):
        piv = None
        rest = []
        for r in rows:
            if r[j] == 0:
                rest.append(r)
            elif piv is None:
                piv = r
            else:
                g, s, t = egcd(piv[j], r[j])
                a, b = piv[j] // g, r[j] // g
                newp = [s * x + t * y for x, y in zip(piv, r)]
                newr = [a * y - b * x for x, y in zip(piv, r)]
                piv = newp
                if any(newr):
                    rest.append(newr)
        rows = rest
        if piv is not None:
            if piv[j] < 0:
                piv = [-x for x in piv]
            out.append(piv)
            pivots.append(j)
    _reduce_above(out, pivots)
    return out, pivots


def _hnf_mod(rows: Matrix, m: int, D: int) -> tuple[Matrix, list[int]]:
    """Hermite basis of span(rows) + D Z^m, always of full rank m."""
    rows = [[x % D for x in r] for r in rows]
    rows = [r for r in rows if any(r)]
    out = []
    for j in range(m):
        piv = None
        rest = []
        for r in rows:
            if r[j] == 0:
                rest.append(r)
            elif piv is None:
                piv = r
            else:
                g, s, t = egcd(piv[j], r[j])
                a, b = piv[j] // g, r[j] // g
                newp = [(s * x + t * y) % D for x, y in zip(piv, r)]
                newr = [(a * y - b * x) % D for x, y in zip(piv, r)]
                piv = newp
                if any(newr):
                    rest.append(newr)
        if piv is None:
            row = [0] * m
            row[j] = D
        else:
            g, s, _ = egcd(piv[j], D)
            row = [(s * x) % D for x in piv]
            row[j] = g
            extra = [((D // g) * x) % D for x in piv]
            if any(extra):
                rest.append(extra)
        out.append(row)
        rows = rest
    pivots = list(range(m))
    _reduce_above(out, pivots)
    return out, pivots


def hermite_normal_form(M, modulus: int | None = None) -> Matrix:
    """Row-echelon Hermite basis of the row lattice of ``M``.

    With ``modulus`` D the lattice span(M) + D Z^m is returned instead,
    computed with all entries reduced mod D.
    """
    rows = as_rows(M)
    m = len(rows[0]) if rows else 0
    if modulus is not None:
        return _hnf_mod(rows, m, modulus)[0]
    return _hnf_plain(rows, m)[0]


# ---------------------------------------------------------------- lattices

@dataclass(frozen=True)
class Lattice:
    """Subgroup of Z^dim given by a canonical Hermite basis."""

    dim: int
    basis: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_generators(gens: Iterable[Sequence[int]], dim: int,
                        modulus: int | None = None) -> "Lattice":
        rows = [list(map(int, g)) for g in gens]
        for r in rows:
            if len(r) != dim:
                raise ValueError("generator has wrong length")
        if modulus is not None:
            H, _ = _hnf_mod(rows, dim, modulus)
        else:
            H, _ = _hnf_plain(rows, dim)
        return Lattice(dim, tuple(tuple(r) for r in H))

    @staticmethod
    def full(dim: int) -> "Lattice":
        return Lattice(dim, tuple(tuple(r) for r in identity(dim)))

    @staticmethod
    def scaled(dim: int, N: int) -> "Lattice":
        return Lattice(dim, tuple(tuple(N * x for x in r) for r in identity(dim)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(r) if x) for r in self.basis]

    def determinant(self) -> int | None:
        """Product of pivots for full-rank lattices, else None."""
        if self.rank != self.dim:
            return None
        return prod(r[j] for r, j in zip(self.basis, self.pivots))

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Integer c with c·basis = v, or None if v is not in the lattice."""
        v = list(map(int, v))
        c = []
        for row, j in zip(self.basis, self.pivots):
            q, r = divmod(v[j], row[j])
            if r:
                return None
            c.append(q)
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return c if not any(v) else None

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.basis]


def _modulus_hint(L: Lattice) -> int | None:
    return L.determinant()


def lattice_sum(L1: Lattice, L2: Lattice) -> Lattice:
    if L1.dim != L2.dim:
        raise ValueError("dimension mismatch")
    hints = [d for d in (_modulus_hint(L1), _modulus_hint(L2)) if d]
    mod = reduce(gcd, hints) if hints else None
    return Lattice.from_generators(list(L1.basis) + list(L2.basis), L1.dim, mod)


def lattice_equal(L1: Lattice, L2: Lattice) -> bool:
    return L1.dim == L2.dim and L1.basis == L2.basis


def index(L1: Lattice, L2: Lattice):
    """|L1 / L2| for L2 ⊆ L1; INFINITE when rank L2 < rank L1."""
    if L1.dim != L2.dim:
        raise ValueError("dimension mismatch")
    coords = []
    for v in L2.basis:
        c = L1.coordinates(v)
        if c is None:
            raise NotSublattice(f"vector {list(v)} is not in the larger lattice")
        coords.append(c)
    if L2.rank < L1.rank:
        return INFINITE
    if L1.rank == 0:
        return 1
    inv = smith_invariants(coords)
    return prod(inv)


def ambient_index(L: Lattice):
    """|Z^dim / L|."""
    d = L.determinant()
    return INFINITE if d is None else d


def kernel_mod(M, N: int) -> Lattice:
    """{k in Z^m : k M = 0 mod N}, M an m x c integer matrix.

    The rows (M_i | e_i) together with N Z^{c+m} span a lattice whose
    elements with vanishing first c coordinates are exactly (0, k) for k in
    the kernel; a Hermite basis mod N exposes them as its last m rows.
    """
    if N < 1:
        raise ValueError("modulus must be positive")
    rows = as_rows(M)
    m = len(rows)
    if N == 1 or m == 0:
        return Lattice.full(m)
    c = len(rows[0])
    if c == 0:
        return Lattice.full(m)
    aug = [[x % N for x in r] + [int(i == j) for j in range(m)] for i, r in enumerate(rows)]
    H, _ = _hnf_mod(aug, c + m, N)
    return Lattice(m, tuple(tuple(r[c:]) for r in H[c:]))


def kernel_mod_snf(M, N: int) -> Lattice:
    """kernel_mod computed from a Smith decomposition; kept as a cross-check."""
    rows = as_rows(M)
    m = len(rows)
    if N == 1 or m == 0 or not rows[0]:
        return Lattice.full(m)
    c = len(rows[0])
    U, D, _ = smith_normal_form(rows)
    gens = []
    for i in range(m):
        d = D[i][i] if i < c else 0
        gens.append([(N // gcd(N, d)) * x for x in U[i]])
    return Lattice.from_generators(gens, m, modulus=N)


def integer_kernel(M) -> Lattice:
    """{k in Z^m : k M = 0} exactly."""
    rows = as_rows(M)
    m = len(rows)
    if m == 0:
        return Lattice(0, ())
    c = len(rows[0])
    if c == 0:
        return Lattice.full(m)
    U, D, _ = smith_normal_form(rows)
    r = sum(1 for i in range(min(m, c)) if D[i][i])
    return Lattice.from_generators(U[r:], m)


# ---------------------------------------------------------------- Newman

@dataclass(frozen=True)
class AntisymNF:
    """X^T P X = blocks [[0, h], [-h, 0]] followed by zeros."""

    X: tuple[tuple[int, ...], ...]
    invariants: tuple[int, ...]
    zero_count: int

    def block_matrix(self) -> Matrix:
        m = len(self.X)
        B = zeros(m, m)
        for i, h in enumerate(self.invariants):
            B[2 * i][2 * i + 1] = h
            B[2 * i + 1][2 * i] = -h
        return B


def is_antisymmetric(P: Matrix) -> bool:
    return all(P[i][j] == -P[j][i] for i in range(len(P)) for j in range(len(P)))


def antisym_normal_form(P) -> AntisymNF:
    """Unimodular congruence to the skew Smith form (Newman)."""
    A = as_rows(P)
    m = len(A)
    if any(len(r) != m for r in A) or not is_antisymmetric(A):
        raise NotAntisymmetric("matrix is not square anti-symmetric")
    X = identity(m)

    # congruence moves: every column operation is mirrored on rows
    def swap(i, j):
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in X:
            row[i], row[j] = row[j], row[i]

    def addmul(dst, src, q):  # e_dst += q e_src
        for row in A:
            row[dst] += q * row[src]
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        for row in X:
            row[dst] += q * row[src]

    invariants = []
    t = 0
    while t + 1 < m:
        best = None
        for i in range(t, m):
            for j in range(i + 1, m):
                if A[i][j] and (best is None or abs(A[i][j]) < best[0]):
                    best = (abs(A[i][j]), i, j)
        if best is None:
            break
        _, i, j = best
        swap(t, i)
        swap(t + 1, j if j != t else i)
        if A[t][t + 1] < 0:
            swap(t, t + 1)
        while True:
            h = A[t][t + 1]
            dirty = False
            for k in range(t + 2, m):
                if A[t][k]:
                    addmul(k, t + 1, -(A[t][k] // h))
                if A[t + 1][k]:
                    addmul(k, t, A[t + 1][k] // h)
                if A[t][k] or A[t + 1][k]:
                    dirty = True
            if dirty:
                # a smaller remainder appeared: pivot on it
                k = next(k for k in range(t + 2, m) if A[t][k] or A[t + 1][k])
                if A[t][k]:
                    swap(t + 1, k)
                else:
                    swap(t, k)
                    swap(t, t + 1)
                if A[t][t + 1] < 0:
                    swap(t, t + 1)
                continue
            bad = next(((a, b) for a in range(t + 2, m) for b in range(a + 1, m)
                        if A[a][b] % h), None)
            if bad is None:
                break
            addmul(t, bad[0], 1)
        invariants.append(A[t][t + 1])
        t += 2
    nf = AntisymNF(tuple(tuple(r) for r in X), tuple(invariants), m - 2 * len(invariants))
    check = matmul(matmul(transpose(X), as_rows(P)), X)
    if check != nf.block_matrix():
        raise AssertionError("antisymmetric normal form failed verification")
    if abs(determinant(X)) != 1:
        raise AssertionError("transform is not unimodular")
    return nf


def is_perfect_square(x: int) -> bool:
    return x >= 0 and isqrt(x) ** 2 == x
