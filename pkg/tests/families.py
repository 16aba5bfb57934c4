"""Module families shared by the test suites."""

from __future__ import annotations

import itertools
from functools import lru_cache

from cyclodescent.modules import FinitePModule, _compose, _identity_endo, _mat_pow, is_automorphism
from cyclodescent.padic import primitive_root, teichmuller


def partitions_upto(total, largest=None):
    """Descending tuples of positive integers with sum at most ``total``."""
    largest = total if largest is None else largest
    yield ()
    for a in range(min(total, largest), 0, -1):
        for rest in partitions_upto(total - a, a):
            yield (a,) + rest


def branch_assignments(p, orders):
    """Delta-characters per generator, up to reordering inside equal-order blocks."""
    blocks = [list(g) for _, g in itertools.groupby(range(len(orders)), key=lambda i: orders[i])]
    per_block = [list(itertools.combinations_with_replacement(range(p - 1), len(b))) for b in blocks]
    for choice in itertools.product(*per_block):
        yield tuple(j for part in choice for j in part)


def _key(A):
    return tuple(tuple(row) for row in A)


def _is_pro_p(p, orders, A):
    identity = _identity_endo(orders)
    for _ in range(max(orders) + len(orders) + 1):
        if A == identity:
            return True
        A = _mat_pow(p, orders, A, p)
    return A == identity


def _admissible_gammas(p, orders, js):
    r = len(orders)
    slots = []
    for i in range(r):
        for j in range(r):
            if js[i] % (p - 1) != js[j] % (p - 1):
                slots.append([0])
            else:
                step = p ** max(0, orders[i] - orders[j])
                slots.append(range(0, p ** orders[i], step))
    for flat in itertools.product(*slots):
        A = [list(flat[i * r:(i + 1) * r]) for i in range(r)]
        if is_automorphism(p, orders, A) and _is_pro_p(p, orders, A):
            yield _key(A)


def _conjugators(p, orders, js):
    """Pairs (g, g^-1) generating the Delta-equivariant automorphisms."""
    r = len(orders)
    gens = []
    # a primitive root mod p^2 generates (Z/p^a)^x for every a
    g = primitive_root(p)
    while pow(g, p - 1, p * p) == 1:
        g += p
    for i in range(r):
        S = [[int(a == b) for b in range(r)] for a in range(r)]
        Si = [row[:] for row in S]
        S[i][i] = g % p ** orders[i]
        Si[i][i] = pow(g, -1, p ** orders[i])
        gens.append((S, Si))
    for i in range(r):
        for j in range(r):
            if i == j or js[i] % (p - 1) != js[j] % (p - 1):
                continue
            c = p ** max(0, orders[i] - orders[j])
            E = [[int(a == b) for b in range(r)] for a in range(r)]
            Ei = [row[:] for row in E]
            E[i][j] = c % p ** orders[i]
            Ei[i][j] = -c % p ** orders[i]
            gens.append((E, Ei))
    return gens


@lru_cache(maxsize=None)
def gamma_orbit_representatives(p, orders, js):
    """One admissible gamma per conjugacy class under Delta-equivariant automorphisms."""
    gens = _conjugators(p, orders, js)
    remaining = set(_admissible_gammas(p, orders, js))
    reps = []
    while remaining:
        start = min(remaining)
        remaining.discard(start)
        reps.append(start)
        frontier = [start]
        while frontier:
            nxt = []
            for A in frontier:
                for g, gi in gens:
                    B = _key(_compose(p, orders, _compose(p, orders, g, A), gi))
                    if B in remaining:
                        remaining.discard(B)
                        nxt.append(B)
            frontier = nxt
    return tuple(reps)


def _jordan_representatives(p, js):
    """Unipotent classes on an F_p-vector space, one Jordan form per branch block."""
    r = len(js)
    blocks = {}
    for i, j in enumerate(js):
        blocks.setdefault(j, []).append(i)
    per_block = []
    for idx in blocks.values():
        shapes = [s for s in partitions_upto(len(idx)) if sum(s) == len(idx)]
        per_block.append([(idx, s) for s in shapes])
    for choice in itertools.product(*per_block):
        A = [[int(a == b) for b in range(r)] for a in range(r)]
        for idx, shape in choice:
            pos = 0
            for size in shape:
                for k in range(size - 1):
                    A[idx[pos + k]][idx[pos + k + 1]] = 1
                pos += size
        yield _key(A)


def gamma_representatives(p, orders, js):
    if all(a == 1 for a in orders):
        return tuple(_jordan_representatives(p, js))
    return gamma_orbit_representatives(p, orders, js)


def delta_matrix(p, orders, js):
    top = orders[0] if orders else 1
    w = teichmuller(primitive_root(p), p, top).value
    r = len(orders)
    return tuple(tuple(pow(w, js[i], p ** orders[i]) if i == j else 0 for j in range(r)) for i in range(r))


def exhaustive_modules(p=3, max_log_order=4):
    """Every finite module with |M| <= p^max_log_order up to isomorphism of (Delta, gamma)-modules."""
    out = []
    for orders in partitions_upto(max_log_order):
        if not orders:
            continue
        for js in branch_assignments(p, orders):
            D = delta_matrix(p, orders, js)
            for G in gamma_representatives(p, orders, js):
                out.append(FinitePModule(p, orders, D, G))
    return out
