"""Quantum tori, their centers at roots of unity, and ranks over the center.

In T(P) the Weyl-normalized monomials multiply by

    x^a x^b = q̂^{<a,b>} x^{a+b},   <a,b> = a P bᵀ,

so x^a x^b = q̂^{2<a,b>} x^b x^a. At a root of unity the q̂-exponent is kept
modulo 2m″ (m″ is the order of q̂²); in generic mode it is an integer.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt, prod
from typing import Iterable, Sequence

from .errors import (DimensionMismatch, InteriorPuncture, NotAntisymmetric,
                     NotPerfectSquare)
from .lattice import (INFINITE, Lattice, ambient_index, antisym_normal_form, as_rows,
                      integer_kernel, is_antisymmetric, kernel_mod, lattice_equal,
                      lattice_sum, odd_part, vecmat)
from .ntriang import extended_sets
from .surface import ExtendedTriangulation, Triangulation, attach_triangles, classify
from .unity import RootParams


@dataclass(frozen=True)
class TorusMonomial:
    """q̂^scalar · x^exponent (Weyl normalized)."""

    exponent: tuple[int, ...]
    scalar: int = 0


class QuantumTorus:
    def __init__(self, P, order: int | None = None):
        self.P = as_rows(P)
        self.dim = len(self.P)
        if any(len(r) != self.dim for r in self.P) or not is_antisymmetric(self.P):
            raise NotAntisymmetric("quantum torus needs a square anti-symmetric matrix")
        self.order = order
        self.modulus = None if order is None else 2 * order

    def _norm(self, e: int) -> int:
        return e if self.modulus is None else e % self.modulus

    def _check(self, k: Sequence[int]) -> tuple[int, ...]:
        if len(k) != self.dim:
            raise DimensionMismatch(f"exponent of length {len(k)} in a torus of rank {self.dim}")
        return tuple(int(x) for x in k)

    def form(self, a: Sequence[int], b: Sequence[int]) -> int:
        return sum(x * y for x, y in zip(vecmat(self._check(a), self.P), self._check(b)))

    def weyl(self, k: Sequence[int]) -> TorusMonomial:
        return TorusMonomial(self._check(k), 0)

    def generator(self, i: int) -> TorusMonomial:
        e = [0] * self.dim
        e[i] = 1
        return TorusMonomial(tuple(e), 0)

    def mul(self, a: TorusMonomial, b: TorusMonomial) -> TorusMonomial:
        e = tuple(x + y for x, y in zip(a.exponent, b.exponent))
        return TorusMonomial(e, self._norm(a.scalar + b.scalar + self.form(a.exponent, b.exponent)))

    def scale(self, a: TorusMonomial, s: int) -> TorusMonomial:
        return TorusMonomial(a.exponent, self._norm(a.scalar + s))

    def power(self, a: TorusMonomial, p: int) -> TorusMonomial:
        out = self.one()
        base = a if p >= 0 else self.inverse(a)
        for _ in range(abs(p)):
            out = self.mul(out, base)
        return out

    def inverse(self, a: TorusMonomial) -> TorusMonomial:
        return TorusMonomial(tuple(-x for x in a.exponent), self._norm(-a.scalar))

    def one(self) -> TorusMonomial:
        return TorusMonomial((0,) * self.dim, 0)

    def ordered_product(self, k: Sequence[int]) -> TorusMonomial:
        """x_1^{k_1} ⋯ x_m^{k_m} as a scalar multiple of a Weyl monomial."""
        out = self.one()
        for i, p in enumerate(self._check(k)):
            out = self.mul(out, self.power(self.generator(i), p))
        return out

    def element(self, terms: dict | None = None) -> "TorusElement":
        return TorusElement(self, terms or {})

    def from_monomial(self, a: TorusMonomial, coeff: int = 1) -> "TorusElement":
        return TorusElement(self, {a.exponent: {a.scalar: coeff}})


class TorusElement:
    """Finite sum of coefficient · x^k; coefficients are Laurent polynomials in q̂."""

    def __init__(self, torus: QuantumTorus, terms: dict):
        self.torus = torus
        self.terms: dict[tuple[int, ...], dict[int, int]] = {}
        for k, poly in terms.items():
            for e, c in poly.items():
                self._add(tuple(k), torus._norm(e), c)

    def _add(self, k, e, c):
        if not c:
            return
        poly = self.terms.setdefault(k, {})
        poly[e] = poly.get(e, 0) + c
        if poly[e] == 0:
            del poly[e]
        if not poly:
            del self.terms[k]

    def __add__(self, other: "TorusElement") -> "TorusElement":
        out = TorusElement(self.torus, self.terms)
        for k, poly in other.terms.items():
            for e, c in poly.items():
                out._add(k, e, c)
        return out

    def __neg__(self) -> "TorusElement":
        return TorusElement(self.torus, {k: {e: -c for e, c in p.items()}
                                         for k, p in self.terms.items()})

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        return self + (-other)

    def __mul__(self, other: "TorusElement") -> "TorusElement":
        T = self.torus
        out = TorusElement(T, {})
        for k1, p1 in self.terms.items():
            for k2, p2 in other.terms.items():
                m = T.mul(TorusMonomial(k1, 0), TorusMonomial(k2, 0))
                for e1, c1 in p1.items():
                    for e2, c2 in p2.items():
                        out._add(m.exponent, T._norm(m.scalar + e1 + e2), c1 * c2)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, TorusElement) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms


def weyl(k: Sequence[int], P, order: int | None = None) -> TorusMonomial:
    return QuantumTorus(P, order).weyl(k)


def is_central(k: Sequence[int], P, m2: int) -> bool:
    """x^k is central iff k P ≡ 0 mod m″."""
    P = as_rows(P)
    if len(k) != len(P):
        raise DimensionMismatch("exponent length differs from matrix size")
    return all(x % m2 == 0 for x in vecmat(list(k), P))


def center_lattice(P, m2: int) -> Lattice:
    return kernel_mod(P, m2)


def generic_center(P) -> Lattice:
    return integer_kernel(P)


def rank_over_center(P, m2: int) -> int:
    r = ambient_index(center_lattice(P, m2))
    if r is INFINITE or isqrt(r) ** 2 != r:
        raise NotPerfectSquare(f"rank {r} is not a perfect square")
    return r


def pi_degree_from_invariants(invariants: Iterable[int], m2: int) -> int:
    return prod(m2 // gcd(m2, h) for h in invariants)


def pi_degree(P, m2: int) -> int:
    """Square root of the rank, cross-checked against the skew Smith invariants."""
    r = rank_over_center(P, m2)
    root = isqrt(r)
    nf = antisym_normal_form(P)
    other = pi_degree_from_invariants(nf.invariants, m2)
    if other != root:
        raise NotPerfectSquare(f"index gives {root}, invariants give {other}")
    return root


# ---------------------------------------------------------------- skein side

def rank_formula(t: Triangulation, params: RootParams) -> int:
    inv = classify(t)
    n, r, tt = params.n, inv.r, inv.t
    return params.d ** (r - tt) * params.m ** ((n * n - 1) * r - tt * (n - 1))


@dataclass(frozen=True)
class CenterLattices:
    lambda_m1: Lattice
    boundary_generators: tuple[tuple[int, ...], ...]
    boundary_span: Lattice
    lambda_z: Lattice


def boundary_generators(ext: ExtendedTriangulation, n: int) -> list[list[int]]:
    """k_{j,∂i} on V′_λ: (-1)^{k-1} at u_j on the k-th edge of each even component."""
    s = extended_sets(ext, n)
    Vp = s.Vp
    rvals = [len(c) for c in ext.base.boundary_components]
    by_key = {key: u for u, key in s.u_key.items()}
    gens = []
    for i, r in enumerate(rvals, start=1):
        if r % 2:
            continue
        for j in range(1, n):
            g = [0] * len(Vp)
            for k in range(1, r + 1):
                g[Vp.position(by_key[(i, k, j)])] = (-1) ** (k - 1)
            gens.append(g)
    return gens


def skein_center_lattices(t: Triangulation | ExtendedTriangulation, n: int,
                          params: RootParams) -> CenterLattices:
    from .trace import k_matrix

    ext = t if isinstance(t, ExtendedTriangulation) else attach_triangles(t)
    params.require_odd()
    if ext.base.interior_punctures():
        raise InteriorPuncture("center lattices need a surface without interior punctures")
    K = k_matrix(ext, n)
    lm = kernel_mod(K.data, params.m1)
    gens = boundary_generators(ext, n)
    dim = len(K.rows)
    span = Lattice.from_generators(gens, dim)
    return CenterLattices(lm, tuple(map(tuple, gens)), span, lattice_sum(lm, span))


def center_theorem_check(t: Triangulation, n: int, params: RootParams) -> dict:
    from .trace import p_lambda

    ext = attach_triangles(t)
    params.require_odd()
    P = p_lambda(ext, n)
    Z = center_lattice(P.data, params.m2)
    lat = skein_center_lattices(ext, n, params)
    boundary_central = all(is_central(g, P.data, params.m2) for g in lat.boundary_generators)
    rank = ambient_index(Z)
    formula = rank_formula(t, params)
    return {
        "equal": lattice_equal(Z, lat.lambda_z),
        "boundary_central": boundary_central,
        "rank": rank,
        "rank_formula": formula,
        "rank_match": rank == formula,
        "center": Z,
        "lattices": lat,
    }


def antisym_pattern(invariants: Sequence[int], zero_count: int, n: int,
                    first: int, total: int) -> dict:
    """Odd parts of z_i = h_i / n: 1 for i <= first, Odd(n) up to i = total."""
    ok = len(invariants) == total and all(h % n == 0 for h in invariants)
    odd = [odd_part(h // n) for h in invariants] if ok else []
    want = [1] * first + [odd_part(n)] * (total - first)
    return {"ok": ok and odd == want, "odd_parts": odd, "expected": want,
            "zero_count": zero_count}


def nonreduced_pattern(t: Triangulation, n: int, invariants, zero_count) -> dict:
    inv = classify(t)
    r, tt = inv.r, inv.t
    first = (r - tt) // 2
    total = first + (n * n * r - tt * n - 2 * r + 2 * tt) // 2
    return antisym_pattern(invariants, zero_count, n, first, total)


def commutation_check(P, order: int | None, samples: int = 1000, seed: int = 0,
                      spread: int = 3) -> dict:
    """x^a x^b = q̂^{2<a,b>} x^b x^a and x^a x^{-a} = 1 on random exponents."""
    import random

    T = QuantumTorus(P, order)
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        a = [rng.randint(-spread, spread) for _ in range(T.dim)]
        b = [rng.randint(-spread, spread) for _ in range(T.dim)]
        xa, xb = T.weyl(a), T.weyl(b)
        lhs = T.mul(xa, xb)
        rhs = T.scale(T.mul(xb, xa), 2 * T.form(a, b))
        if lhs != rhs or T.mul(xa, T.weyl([-x for x in a])) != T.one():
            bad.append((a, b))
    return {"samples": samples, "seed": seed, "failures": len(bad), "ok": not bad,
            "first_failure": bad[0] if bad else None}
