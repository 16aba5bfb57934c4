import json
import random
from pathlib import Path

import pytest

from cyclodescent.errors import (
    BranchZeroUnsupported,
    LevelTooSmall,
    MissingAction,
    PrecisionMismatch,
    ValidationError,
)
from cyclodescent.descent import (
    BRANCH_ZERO_NOTE,
    HData,
    TwistCharacter,
    brute_force_h01,
    brute_force_twist,
    gamma1_cohomology,
    h1_dual_route,
    load_fixtures,
    parse_fixture,
    run_fixture,
    twist_cohomology,
    zero_module,
)
from cyclodescent.modules import FinitePModule, cyclic, random_module
from cyclodescent.padic import PadicInt

DATA = Path(__file__).resolve().parent / "data"


def test_gamma1_cohomology_examples():
    ker, coker = gamma1_cohomology(FinitePModule(3, (2,), None, ((4,),)))
    assert ker.orders == (1,) and coker.orders == (1,)
    ker, coker = gamma1_cohomology(cyclic(7, 1))
    assert ker.orders == (1,) and coker.orders == (1,)
    ker, coker = gamma1_cohomology(zero_module(5))
    assert ker.orders == () and coker.orders == ()
    with pytest.raises(MissingAction):
        gamma1_cohomology(FinitePModule(5, (1,)))


def test_cyclic_oracle_examples():
    assert brute_force_h01(1, cyclic(5, 1))[1] == (1,)
    assert brute_force_h01(2, FinitePModule(3, (2,), None, ((4,),)))[1] == (1,)
    # 4^3 = 1 mod 9 so level 1 is allowed, but there the norm 1 + 4 + 16 kills
    # exactly (gamma - 1)M and H^1 of the finite quotient drops to 0
    assert brute_force_h01(1, FinitePModule(3, (2,), None, ((4,),)))[1] == ()
    with pytest.raises(LevelTooSmall):
        brute_force_h01(0, FinitePModule(3, (2,), None, ((4,),)))


def _h1_example():
    h0 = cyclic(5, 1)
    h1 = FinitePModule(5, (2,), ((18,),), ((21,),))  # omega^-1 on Delta, u^-1 on gamma
    return HData(h0, h1), TwistCharacter.tate(5, 1, 4)


def test_twist_examples():
    theta = TwistCharacter.tate(5, 1, 5)
    pieces = twist_cohomology(HData(cyclic(5, 3), zero_module(5)), theta, 0)
    assert pieces.coker_part.orders == () and pieces.ker_part.orders == ()
    H, theta = _h1_example()
    q1 = twist_cohomology(H, theta, 1)
    assert q1.coker_part.orders == () and q1.ker_part.orders == (2,)
    q2 = twist_cohomology(H, theta, 2)
    assert q2.coker_part.orders == (2,) and q2.ker_part.orders == ()
    b0, b1 = brute_force_twist(H.h1, theta)
    assert b0 == (2,)
    assert h1_dual_route(H, theta).orders == (2,)


def test_branch_zero_is_flagged():
    theta = TwistCharacter.tate(5, 4, 5)
    H = HData(cyclic(5, 1), zero_module(5))
    pieces = twist_cohomology(H, theta, 0)
    assert pieces.notes == (BRANCH_ZERO_NOTE,)
    assert pieces.ker_part.orders == (1,)
    with pytest.raises(BranchZeroUnsupported):
        twist_cohomology(H, theta, 1, require_guarantees=True)
    twist_cohomology(H, theta, 2, require_guarantees=True)


def test_precision_and_degree_errors():
    H = HData(cyclic(5, 3), zero_module(5))
    with pytest.raises(PrecisionMismatch):
        twist_cohomology(H, TwistCharacter.tate(5, 1, 3), 0)
    with pytest.raises(ValidationError):
        twist_cohomology(H, TwistCharacter.tate(5, 1, 5), 3)
    with pytest.raises(ValidationError):
        TwistCharacter(5, 1, PadicInt(5, 3, 2))
    with pytest.raises(MissingAction):
        HData(FinitePModule(5, (1,)), zero_module(5))


def test_descent_against_oracle_random():
    rng = random.Random(21)
    for _ in range(150):
        p = rng.choice([3, 5, 7])
        M = random_module(rng, p, 3, 3, max_log_order=4 if p == 3 else 3)
        N = M.exponent + 2
        theta = TwistCharacter(p, rng.randrange(p - 1), PadicInt(p, N, 1 + p * rng.randrange(p**N)))
        b0, b1 = brute_force_twist(M, theta)
        H = HData(M, M)
        assert twist_cohomology(H, theta, 0).ker_part.orders == b0
        q1 = twist_cohomology(H, theta, 1)
        assert (q1.coker_part.orders, q1.ker_part.orders) == (b1, b0)
        assert twist_cohomology(H, theta, 2).coker_part.orders == b1
        assert h1_dual_route(H, theta).orders == b0


def test_fixture_file():
    results = [run_fixture(fx) for fx in load_fixtures(DATA / "descent_fixtures.jsonl")]
    assert len(results) == 4
    assert all(r["ok"] for r in results), results


def test_fixture_errors():
    with pytest.raises(ValidationError):
        parse_fixture("not json")
    with pytest.raises(ValidationError):
        parse_fixture(json.dumps({"module": {"p": 5, "orders": [1]}, "theta": {"m": 1}, "bogus": 1}))
    with pytest.raises(ValidationError):
        parse_fixture(json.dumps({"module": {"p": 5, "orders": [1], "delta": [[1]], "gamma": [[1]]}}))
    with pytest.raises(ValidationError):
        parse_fixture(json.dumps({"theta": {"m": 1}}))
    with pytest.raises(ValidationError) as exc:
        parse_fixture(json.dumps({"module": {"p": 4, "orders": [1]}, "theta": {"m": 1}}), 7)
    assert exc.value.path == "line 7.module.p"


def test_theta_json_roundtrip():
    theta = TwistCharacter.tate(7, 3, 5)
    back = TwistCharacter.from_json(7, theta.to_json())
    assert back == theta
