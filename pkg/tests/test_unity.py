import warnings
from math import gcd

import pytest
from hypothesis import given, strategies as st

from qtrace.errors import OddOrderRequired
from qtrace.unity import derive_params


@pytest.mark.parametrize("n,m2,expected", [
    (3, 5, (1, 5, 1, 5)),
    (3, 9, (3, 3, 3, 1)),
    (2, 3, (1, 3, 1, 3)),
])
def test_examples(n, m2, expected):
    p = derive_params(n, m2)
    assert (p.d1, p.m1, p.d, p.m) == expected


def test_even_order_warns_and_refuses_theorems():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        p = derive_params(2, 4)
    assert caught and not p.odd_order
    with pytest.raises(OddOrderRequired):
        p.require_odd()


@given(st.integers(2, 8), st.integers(1, 60).map(lambda x: 2 * x - 1))
def test_products(n, m2):
    p = derive_params(n, m2)
    assert p.d1 * p.m1 == m2 and p.d * p.m == p.m1
    assert p.d1 == gcd(n, m2) and p.d == gcd(2 * n, p.m1)
