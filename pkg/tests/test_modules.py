import random

import pytest

from cyclodescent.errors import (
    ActionOrderInvalid,
    IllDefinedEndomorphism,
    LevelTooSmall,
    MissingAction,
    NonInvertibleAction,
    ValidationError,
)
from cyclodescent.modules import (
    FinitePModule,
    automorphism_inverse,
    compose,
    conjugate,
    cyclic,
    direct_sum,
    endo_ker_coker,
    image,
    kernel,
    pontryagin_dual,
    quotient,
    random_automorphism,
    random_endo,
    random_module,
    scalar_shift,
    submodule,
)
from cyclodescent.oracle import brute_force_h01, brute_ker_coker, subgroup_orders


def test_ker_coker_examples():
    M = FinitePModule(5, (2, 1))
    pieces = endo_ker_coker(M, [[5, 0], [0, 0]])
    assert pieces.ker_part.orders == (1, 1) and pieces.coker_part.orders == (1, 1)
    assert brute_ker_coker(M, [[5, 0], [0, 0]]) == ((1, 1), (1, 1))
    pieces = endo_ker_coker(M, [[1, 0], [0, 1]])
    assert pieces.ker_part.orders == () and pieces.coker_part.orders == ()
    pieces = endo_ker_coker(M, [[0, 0], [0, 0]])
    assert pieces.ker_part.orders == (2, 1) and pieces.coker_part.orders == (2, 1)


def test_ill_defined_endomorphism():
    with pytest.raises(IllDefinedEndomorphism):
        endo_ker_coker(FinitePModule(5, (2, 1)), [[1, 1], [0, 1]])


def test_construction_errors():
    with pytest.raises(NonInvertibleAction):
        FinitePModule(5, (1,), None, ((0,),))
    with pytest.raises(ActionOrderInvalid):
        FinitePModule(5, (2,), ((6,),), None)
    with pytest.raises(ValidationError):
        FinitePModule(5, (1, 2))
    with pytest.raises(ValidationError):
        # delta and gamma must commute
        FinitePModule(5, (1, 1), ((1, 0), (0, 4)), ((1, 1), (0, 1)))
    with pytest.raises(MissingAction):
        FinitePModule(5, (1,)).require("gamma_action")


def test_dual_examples():
    D = pontryagin_dual(cyclic(5, 1))
    assert D.orders == (1,) and D.gamma_action == ((1,),)
    D = pontryagin_dual(FinitePModule(3, (2,), None, ((4,),)))
    assert D.gamma_action == ((7,),)
    assert pontryagin_dual(FinitePModule(5, (2, 1))).orders == (2, 1)


def test_ker_coker_against_oracle():
    rng = random.Random(11)
    for _ in range(200):
        p = rng.choice([3, 5, 7])
        M = random_module(rng, p, 3, 3, max_log_order=4 if p == 3 else 3)
        psi = random_endo(rng, p, M.orders)
        pieces = endo_ker_coker(M, psi)
        assert (pieces.coker_part.orders, pieces.ker_part.orders) == brute_ker_coker(M, psi)


def test_subquotients_carry_actions():
    rng = random.Random(12)
    for _ in range(60):
        p = rng.choice([3, 5])
        M = random_module(rng, p, 3, 3, max_log_order=4)
        if not M.rank:
            continue
        psi = scalar_shift(M, M.gamma_action, 1)
        K, I = kernel(M, psi), image(M, psi)
        assert K.module.log_order + I.module.log_order == M.log_order
        # the generators of ker(gamma - 1) really are killed
        for g in K.generators:
            assert all(x % p ** a == 0 for x, a in zip(M.apply(psi, g), M.orders))
        Q = quotient(M, I.generators)
        assert Q.module.log_order == K.module.log_order
        sub = submodule(M, I.generators)
        assert sub.module.orders == I.module.orders


def test_dual_is_involutive_up_to_isomorphism():
    rng = random.Random(13)
    for _ in range(100):
        p = rng.choice([3, 5, 7])
        M = random_module(rng, p, 3, 3, max_log_order=4)
        DD = pontryagin_dual(pontryagin_dual(M))
        assert DD.orders == M.orders
        if M.rank:
            for c in (1, 1 + p):
                a = endo_ker_coker(M, scalar_shift(M, M.gamma_action, c))
                b = endo_ker_coker(DD, scalar_shift(DD, DD.gamma_action, c))
                assert a.ker_part.orders == b.ker_part.orders


def test_automorphisms_and_conjugation():
    rng = random.Random(14)
    for _ in range(60):
        p = rng.choice([3, 5, 7])
        M = random_module(rng, p, 3, 3)
        if not M.rank:
            continue
        P = random_automorphism(rng, p, M.orders)
        Pinv = automorphism_inverse(M, P)
        ident = tuple(tuple(int(i == j) for j in range(M.rank)) for i in range(M.rank))
        assert tuple(map(tuple, compose(M, P, Pinv))) == ident
        C = conjugate(M, P)
        psi = scalar_shift(M, M.gamma_action, 1)
        phi = scalar_shift(C, C.gamma_action, 1)
        assert endo_ker_coker(M, psi).ker_part.orders == endo_ker_coker(C, phi).ker_part.orders


def test_direct_sum_orders():
    S = direct_sum(cyclic(5, 1), cyclic(5, 3), cyclic(5, 2))
    assert S.orders == (3, 2, 1)


def test_cyclic_oracle_examples():
    assert brute_force_h01(1, cyclic(5, 1)) == ((1,), (1,))
    M = FinitePModule(3, (2,), None, ((4,),))
    assert brute_force_h01(2, M) == ((1,), (1,))
    with pytest.raises(LevelTooSmall):
        brute_force_h01(0, M)


def test_json_roundtrip():
    rng = random.Random(15)
    M = random_module(rng, 5, 3, 3)
    assert FinitePModule.from_json(M.to_json()) == M
    with pytest.raises(ValidationError):
        FinitePModule.from_json({"p": 5, "orders": [1], "extra": 1})


def test_subgroup_orders_helper():
    import numpy as np

    X = np.array([[0], [5], [10], [15], [20]])
    assert subgroup_orders(5, np.array([25]), X, 2) == (1,)
