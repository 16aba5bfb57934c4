"""Quick oracle suites behind ``cyclodescent selftest``."""

from __future__ import annotations

import random

from .delta import idempotent, one
from .descent import HData, TwistCharacter, brute_force_twist, twist_cohomology, zero_module
from .lseries import even_branches, interpolation_points, iwasawa_series, lp_value
from .modules import endo_ker_coker, random_endo, random_module
from .oracle import brute_ker_coker
from .padic import PadicInt, teichmuller
from .series import evaluate_at


def check_teichmuller(primes=(3, 5, 7, 13, 37), N=6) -> bool:
    for p in primes:
        mod = p**N
        for a in range(1, p):
            w = teichmuller(a, p, N).value
            if pow(w, p - 1, mod) != 1 or (w - a) % p:
                return False
        es = [idempotent(j, p, N) for j in range(p - 1)]
        total = es[0]
        for e in es[1:]:
            total = total + e
        if total != one(p, N):
            return False
    return True


def check_ker_coker(trials=100, seed=1) -> bool:
    rng = random.Random(seed)
    for _ in range(trials):
        p = rng.choice([3, 5, 7])
        M = random_module(rng, p, 3, 3, max_log_order=4 if p == 3 else 3)
        psi = random_endo(rng, p, M.orders)
        pieces = endo_ker_coker(M, psi)
        if (pieces.coker_part.orders, pieces.ker_part.orders) != brute_ker_coker(M, psi):
            return False
    return True


def check_descent(trials=100, seed=2) -> bool:
    rng = random.Random(seed)
    for _ in range(trials):
        p = rng.choice([3, 5, 7])
        M = random_module(rng, p, 3, 3, max_log_order=4 if p == 3 else 3)
        N = M.exponent + 2
        theta = TwistCharacter(p, rng.randrange(p - 1), PadicInt(p, N, 1 + p * rng.randrange(p**N)))
        H = HData(M, zero_module(p))
        h0, h1 = brute_force_twist(M, theta)
        if twist_cohomology(H, theta, 0).ker_part.orders != h0:
            return False
        if twist_cohomology(H, theta, 1).coker_part.orders != h1:
            return False
    return True


def check_lseries(primes=(5, 7), N=6, M=8) -> bool:
    for p in primes:
        for j in even_branches(p):
            bs = iwasawa_series(p, j, N, M)
            digits = min(N - 2, bs.value_precision)
            for k in interpolation_points(p, j, 3):
                c = PadicInt(p, N, pow(bs.u, k, p**N) - 1)
                if (evaluate_at(bs.series, c).value - lp_value(p, j, k, N).value) % p**digits:
                    return False
    return True


SUITES = {
    "teichmuller": check_teichmuller,
    "ker_coker": check_ker_coker,
    "descent": check_descent,
    "lseries": check_lseries,
}


def run_selftest() -> dict:
    return {name: bool(fn()) for name, fn in SUITES.items()}


__all__ = ["run_selftest", "SUITES"]
