"""Brute-force enumeration oracles for finite modules and group cohomology.

These never touch a normal form.  Elements are enumerated in mixed radix and
subgroup structure is read off from counts: for a finite abelian p-group Q,
the number of cyclic factors of order at least ``p^k`` is
``log_p(|Q[p^k]| / |Q[p^{k-1}]|)``.
"""

from __future__ import annotations

import numpy as np

from .errors import LevelTooSmall, ValidationError
from .modules import FinitePModule, compose, mat_pow

ENUMERATION_LIMIT = 10**4


def _check_size(M: FinitePModule, limit=ENUMERATION_LIMIT):
    if M.size > limit:
        raise ValidationError(f"|M| = {M.size} is too large to enumerate (limit {limit})")


class Enumerator:
    """All elements of ``M`` as rows of an int64 array, with mixed-radix codes."""

    def __init__(self, M: FinitePModule):
        _check_size(M, ENUMERATION_LIMIT * 10)
        self.M = M
        self.mods = np.array([M.p**a for a in M.orders], dtype=np.int64)
        self.size = M.size
        strides = np.ones(M.rank, dtype=np.int64)
        for i in range(M.rank - 2, -1, -1):
            strides[i] = strides[i + 1] * self.mods[i + 1]
        self.strides = strides
        idx = np.arange(self.size, dtype=np.int64)
        self.elements = (idx[:, None] // strides[None, :]) % self.mods[None, :] if M.rank else np.zeros((1, 0), np.int64)

    def encode(self, X):
        if self.M.rank == 0:
            return np.zeros(len(X), dtype=np.int64)
        return (X % self.mods) @ self.strides

    def apply(self, A, X=None):
        X = self.elements if X is None else X
        if self.M.rank == 0:
            return X
        A = np.array(A, dtype=np.int64)
        return (X @ A.T) % self.mods

    def scale(self, c, X=None):
        X = self.elements if X is None else X
        return (X * c) % self.mods


def _identity(r):
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


def _structure_from_counts(p, counts):
    """``counts[k] = |Q[p^k]|``, ``k = 0, 1, ...`` up to stabilisation."""
    logs = [_logp(p, c) for c in counts]
    ge = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
    orders = []
    for k in range(len(ge)):
        nxt = ge[k + 1] if k + 1 < len(ge) else 0
        orders.extend([k + 1] * (ge[k] - nxt))
    return tuple(sorted(orders, reverse=True))


def _logp(p, n):
    e = 0
    while n > 1:
        if n % p:
            raise ArithmeticError(f"{n} is not a power of {p}")
        n //= p
        e += 1
    return e


def subgroup_orders(p, mods, X, exponent):
    """Invariant factors of the subgroup whose elements are the rows of ``X``."""
    counts = []
    for k in range(exponent + 1):
        counts.append(int(np.count_nonzero(np.all((X * p**k) % mods == 0, axis=1))))
    return _structure_from_counts(p, counts)


def quotient_orders(p, mods, Z, in_B, exponent):
    """Invariant factors of ``Z / B``; ``in_B`` tests rows for membership in ``B``."""
    size_B = int(np.count_nonzero(in_B(Z)))
    counts = []
    for k in range(exponent + 1):
        hits = int(np.count_nonzero(in_B((Z * p**k) % mods)))
        if hits % size_B:
            raise ArithmeticError("inconsistent subgroup counts")
        counts.append(hits // size_B)
    return _structure_from_counts(p, counts)


def brute_ker_coker(M: FinitePModule, psi):
    """``(coker orders, ker orders)`` of ``psi`` by enumeration."""
    _check_size(M)
    E = Enumerator(M)
    img = E.apply(psi)
    ker = E.elements[np.all(img == 0, axis=1)]
    ker_orders = subgroup_orders(M.p, E.mods, ker, M.exponent)
    mask = np.zeros(E.size, dtype=bool)
    mask[E.encode(img)] = True
    coker_orders = quotient_orders(M.p, E.mods, E.elements, lambda X: mask[E.encode(X)], M.exponent)
    return coker_orders, ker_orders


def _is_identity(M, A):
    return tuple(map(tuple, A)) == _identity(M.rank)


def _norm(M, A, order):
    """``1 + A + ... + A^{order-1}`` as an endomorphism, by repeated doubling."""
    r = M.rank
    if order == 1:
        return _identity(r)
    # S_{2k} = S_k (1 + A^k), S_{k+1} = 1 + A S_k
    def add(X, Y):
        return tuple(tuple((X[i][j] + Y[i][j]) % M.p ** M.orders[i] for j in range(r)) for i in range(r))

    S = _identity(r)
    Ak = A
    k = 1
    for bit in bin(order)[3:]:
        S = compose(M, S, add(_identity(r), Ak))
        Ak = compose(M, Ak, Ak)
        k *= 2
        if bit == "1":
            S = add(_identity(r), compose(M, A, S))
            Ak = compose(M, Ak, A)
            k += 1
    return S


def p_power_order(M: FinitePModule, A) -> int:
    """Smallest ``s`` with ``A^{p^s} = 1``; raises if the order is not a power of p."""
    cur = A
    for s in range(0, 4 * (M.exponent + 1) + 8):
        if _is_identity(M, cur):
            return s
        cur = mat_pow(M, cur, M.p)
    raise ValidationError("gamma action does not have p-power order")


def brute_force_h01(n: int, M: FinitePModule):
    """``H^0`` and ``H^1`` of the cyclic group of order ``p^n`` generated by ``gamma``.

    Returns invariant-factor tuples.  Cocycles are determined by the image
    ``y`` of the generator, subject to the norm condition ``N y = 0``.
    """
    G = M.require("gamma_action")
    _check_size(M)
    if not _is_identity(M, mat_pow(M, G, M.p**n)):
        raise LevelTooSmall(f"gamma^({M.p}^{n}) is not the identity on M")
    E = Enumerator(M)
    p = M.p
    gx = E.apply(G)
    fixed = E.elements[np.all(gx == E.elements, axis=1)]
    h0 = subgroup_orders(p, E.mods, fixed, M.exponent)
    Nn = _norm(M, G, p**n)
    Z = E.elements[np.all(E.apply(Nn) == 0, axis=1)]
    mask = np.zeros(E.size, dtype=bool)
    mask[E.encode((gx - E.elements) % E.mods)] = True
    h1 = quotient_orders(p, E.mods, Z, lambda X: mask[E.encode(X)], M.exponent)
    return h0, h1


def default_level(M: FinitePModule, gamma) -> int:
    """A level at which finite-group cohomology agrees with the continuous one."""
    return p_power_order(M, gamma) + M.exponent


def brute_force_delta_gamma(M: FinitePModule, delta, gamma, n=None):
    """``H^0`` and ``H^1`` of ``Delta x C_{p^n}`` acting through ``delta`` and ``gamma``.

    A crossed homomorphism is a pair ``(x, y) = (f(delta), f(gamma))`` with
    ``N_delta x = 0``, ``N_gamma y = 0`` and ``(delta - 1) y = (gamma - 1) x``;
    the pairs are found by a hash join on the two sides of the last equation.
    """
    _check_size(M, 400)
    p = M.p
    if n is None:
        n = default_level(M, gamma)
    if not _is_identity(M, mat_pow(M, gamma, p**n)):
        raise LevelTooSmall(f"gamma^({p}^{n}) is not the identity on M")
    if not _is_identity(M, mat_pow(M, delta, p - 1)):
        raise ValidationError(f"delta does not have order dividing {p - 1}")
    E = Enumerator(M)
    X = E.elements
    dX = (E.apply(delta) - X) % E.mods
    gX = (E.apply(gamma) - X) % E.mods
    fixed = X[np.all((dX == 0) & (gX == 0), axis=1)]
    h0 = subgroup_orders(p, E.mods, fixed, M.exponent)

    xs = X[np.all(E.apply(_norm(M, delta, p - 1)) == 0, axis=1)]
    ys = X[np.all(E.apply(_norm(M, gamma, p**n)) == 0, axis=1)]
    kx = E.encode((E.apply(gamma, xs) - xs) % E.mods)
    ky = E.encode((E.apply(delta, ys) - ys) % E.mods)
    ox, oy = np.argsort(kx, kind="stable"), np.argsort(ky, kind="stable")
    kx, ky, xs, ys = kx[ox], ky[oy], xs[ox], ys[oy]
    pairs = []
    for key in np.intersect1d(kx, ky):
        a0, a1 = np.searchsorted(kx, key), np.searchsorted(kx, key, side="right")
        b0, b1 = np.searchsorted(ky, key), np.searchsorted(ky, key, side="right")
        xa, yb = xs[a0:a1], ys[b0:b1]
        pairs.append(np.hstack([np.repeat(xa, len(yb), axis=0), np.tile(yb, (len(xa), 1))]))
    r = M.rank
    Z = np.vstack(pairs) if pairs else np.zeros((0, 2 * r), dtype=np.int64)
    mods2 = np.concatenate([E.mods, E.mods])
    size = E.size
    mask = np.zeros(size * size, dtype=bool)
    mask[E.encode(dX) * size + E.encode(gX)] = True

    def in_B(W):
        return mask[E.encode(W[:, :r]) * size + E.encode(W[:, r:])]

    h1 = quotient_orders(p, mods2, Z, in_B, M.exponent)
    return h0, h1
