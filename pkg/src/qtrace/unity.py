"""Root-of-unity parameters derived from (n, m″).

m″ is the order of q̂². The derived quantities are

    d′ = gcd(n, m″),  m′ = m″ / d′,  d = gcd(2n, m′),  m = m′ / d.
"""
from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass
from math import gcd

from .errors import OddOrderRequired


@dataclass(frozen=True)
class RootParams:
    n: int
    m2: int  # m″
    d1: int  # d′
    m1: int  # m′
    d: int
    m: int

    @property
    def odd_order(self) -> bool:
        return self.m2 % 2 == 1

    def require_odd(self) -> None:
        if not self.odd_order:
            raise OddOrderRequired(f"order m''={self.m2} is even")

    def to_json(self) -> dict:
        out = asdict(self)
        out["odd_order"] = self.odd_order
        return out


def derive_params(n: int, m2: int, warn: bool = True) -> RootParams:
    if n < 2:
        raise ValueError("n must be at least 2")
    if m2 < 1:
        raise ValueError("m'' must be positive")
    d1 = gcd(n, m2)
    m1 = m2 // d1
    d = gcd(2 * n, m1)
    m = m1 // d
    p = RootParams(n, m2, d1, m1, d, m)
    if warn and not p.odd_order:
        warnings.warn(f"m''={m2} is even; center and rank theorems need odd order",
                      stacklevel=2)
    return p
