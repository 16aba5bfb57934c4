import random

import pytest

from cyclodescent.delta import (
    DeltaRingElement,
    acts_by_scalar,
    branch_decomposition,
    branch_project,
    discrete_log_mod_p,
    idempotent,
    one,
)
from cyclodescent.errors import ActionOrderInvalid, PrecisionMismatch
from cyclodescent.modules import FinitePModule, random_module


def test_idempotents_small():
    assert idempotent(0, 3, 2).coeffs == (5, 5)
    assert idempotent(1, 3, 2).coeffs == (5, 4)


def test_group_ring_product_matches_definition():
    rng = random.Random(1)
    for p in (3, 5, 7, 13, 37):
        for N in (1, 4):
            a = DeltaRingElement(p, N, tuple(rng.randrange(p**N) for _ in range(p - 1)))
            b = DeltaRingElement(p, N, tuple(rng.randrange(p**N) for _ in range(p - 1)))
            out = [0] * (p - 1)
            for x in range(1, p):
                for y in range(1, p):
                    out[x * y % p - 1] += a[x] * b[y]
            assert a * b == DeltaRingElement(p, N, tuple(out))
    with pytest.raises(PrecisionMismatch):
        one(5, 2) * one(5, 3)


def test_branch_examples():
    M = FinitePModule(5, (1,), ((1,),), ((1,),))
    parts = branch_decomposition(M)
    assert parts[0].orders == (1,) and all(parts[j].orders == () for j in (1, 2, 3))
    M = FinitePModule(5, (2,), ((7,),), ((1,),))
    parts = branch_decomposition(M)
    assert parts[1].orders == (2,) and all(parts[j].orders == () for j in (0, 2, 3))
    M = FinitePModule(5, (1, 1), ((2, 0), (0, 4)), ((1, 0), (0, 1)))
    parts = branch_decomposition(M)
    assert parts[1].orders == (1,) and parts[2].orders == (1,)
    with pytest.raises(ActionOrderInvalid):
        FinitePModule(5, (2,), ((2,),), None)


def test_decomposition_is_complete():
    rng = random.Random(2)
    for _ in range(100):
        p = rng.choice([3, 5, 7])
        M = random_module(rng, p, 3, 3)
        parts = branch_decomposition(M)
        assert sum(b.log_order for b in parts.values()) == M.log_order
        for j, b in parts.items():
            assert acts_by_scalar(b, j)


def test_branch_projection_is_idempotent():
    rng = random.Random(3)
    for _ in range(40):
        M = random_module(rng, 7, 3, 2)
        j = rng.randrange(6)
        B = branch_project(M, j)
        if B.rank:
            assert branch_project(B, j).orders == B.orders
            assert branch_project(B, j + 1).orders == ()


def test_discrete_log_mod_p():
    assert [discrete_log_mod_p(d, 5) for d in (1, 2, 4, 3)] == [0, 1, 2, 3]
