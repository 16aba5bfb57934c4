"""Truncated Iwasawa algebra ``Z_p[[T]] / (p^N, T^M)``.

The variable ``T`` stands for ``gamma^{-1} - 1``, so that
``f_m = gamma^{-1} - u^{-m}`` becomes the linear polynomial ``T - (u^{-m} - 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    InsufficientPrecision,
    LambdaOverflow,
    NotDistinguished,
    PointNotInMaximalIdeal,
    PrecisionMismatch,
    ValidationError,
)
from .padic import PadicInt, check_prime, vp

VARIABLE_CONVENTION = "T=gamma^-1-1"


@dataclass(frozen=True)
class PowerSeries:
    p: int
    N: int
    M: int
    coeffs: tuple

    def __post_init__(self):
        check_prime(self.p)
        if self.N < 1 or self.M < 1:
            raise ValidationError("precision pair must be positive", "precision")
        mod = self.p**self.N
        cs = [int(c) % mod for c in self.coeffs]
        if len(cs) > self.M:
            if any(cs[self.M:]):
                raise ValidationError(f"{len(cs)} coefficients do not fit below T^{self.M}")
            cs = cs[: self.M]
        cs.extend([0] * (self.M - len(cs)))
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_coeffs(cls, p, N, M, coeffs: Sequence[int]) -> PowerSeries:
        """Build from a coefficient list, dropping terms of degree >= M."""
        return cls(p, N, M, tuple(coeffs[:M]))

    @classmethod
    def zero(cls, p, N, M):
        return cls(p, N, M, ())

    @classmethod
    def one(cls, p, N, M):
        return cls(p, N, M, (1,))

    @property
    def modulus(self):
        return self.p**self.N

    def _check(self, other: PowerSeries):
        if (self.p, self.N, self.M) != (other.p, other.N, other.M):
            raise PrecisionMismatch(
                f"(p, N, M) = {(self.p, self.N, self.M)} vs {(other.p, other.N, other.M)}"
            )

    def _lift(self, other):
        if isinstance(other, int):
            return PowerSeries(self.p, self.N, self.M, (other,))
        if isinstance(other, PadicInt):
            return PowerSeries(self.p, self.N, self.M, (other.value,))
        return other

    def __add__(self, other):
        other = self._lift(other)
        self._check(other)
        return PowerSeries(self.p, self.N, self.M, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        self._check(other)
        return PowerSeries(self.p, self.N, self.M, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return PowerSeries(self.p, self.N, self.M, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        other = self._lift(other)
        self._check(other)
        M, mod = self.M, self.modulus
        a, b = self.coeffs, other.coeffs
        out = [0] * M
        for i, ai in enumerate(a):
            if ai:
                for k in range(M - i):
                    out[i + k] += ai * b[k]
        return PowerSeries(self.p, self.N, M, tuple(c % mod for c in out))

    __rmul__ = __mul__

    def scale(self, c: int) -> PowerSeries:
        return PowerSeries(self.p, self.N, self.M, tuple(c * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def degree(self) -> int:
        """Degree of the truncated polynomial; -1 for zero."""
        for i in range(self.M - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def reduce(self, N: int | None = None, M: int | None = None) -> PowerSeries:
        N = self.N if N is None else N
        M = self.M if M is None else M
        if N > self.N or M > self.M:
            raise PrecisionMismatch("cannot raise precision by reduction")
        return PowerSeries(self.p, N, M, self.coeffs[:M])

    def inverse(self) -> PowerSeries:
        """Inverse of a series with unit constant term."""
        if self.coeffs[0] % self.p == 0:
            raise ValidationError("constant term is not a unit")
        mod = self.modulus
        inv0 = pow(self.coeffs[0], -1, mod)
        a = self.coeffs
        out = [0] * self.M
        out[0] = inv0
        for n in range(1, self.M):
            s = sum(a[k] * out[n - k] for k in range(1, n + 1))
            out[n] = (-s * inv0) % mod
        return PowerSeries(self.p, self.N, self.M, tuple(out))

    def __repr__(self):
        terms = [f"{c}*T^{i}" for i, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms) if terms else "0"
        return f"PowerSeries({body} mod ({self.p}^{self.N}, T^{self.M}))"


def series_arith(f: PowerSeries, g: PowerSeries, op: str) -> PowerSeries:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValidationError(f"unknown operation {op!r}", "op")


def mu_lambda(f: PowerSeries) -> tuple[int, int]:
    """``mu`` = least coefficient valuation, ``lambda`` = first index attaining it."""
    best = None
    for i, c in enumerate(f.coeffs):
        if c:
            v = vp(c, f.p)
            if best is None or v < best[0]:
                best = (v, i)
    if best is None:
        raise InsufficientPrecision(f"series vanishes modulo ({f.p}^{f.N}, T^{f.M})")
    return best


@dataclass(frozen=True)
class WeierstrassData:
    """``f = p^mu * unit * distinguished``; the factors carry precision ``N - mu``."""

    mu: int
    lam: int
    distinguished: PowerSeries
    unit: PowerSeries

    @property
    def certified(self) -> bool:
        return self.mu == 0

    def reconstruct(self) -> PowerSeries:
        P, U = self.distinguished, self.unit
        N = P.N + self.mu
        scale = P.p**self.mu
        prod = P * U
        return PowerSeries(P.p, N, P.M, tuple(scale * c for c in prod.coeffs))


def _poly_divmod(g: list[int], P: list[int], mod: int) -> tuple[list[int], list[int]]:
    """Divide the polynomial ``g`` by the monic polynomial ``P`` over ``Z/mod``."""
    d = len(P) - 1
    r = [c % mod for c in g]
    if len(r) <= d:
        return [0], r + [0] * (d - len(r))
    q = [0] * (len(r) - d)
    for k in range(len(r) - 1, d - 1, -1):
        c = r[k]
        if c:
            q[k - d] = c
            for i in range(d):
                r[k - d + i] = (r[k - d + i] - c * P[i]) % mod
            r[k] = 0
    return q, r[:d]


def _poly_mul_mod(a: list[int], b: list[int], P: list[int], mod: int) -> list[int]:
    """``a * b`` reduced modulo the monic polynomial ``P``."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for k, bk in enumerate(b):
                prod[i + k] += ai * bk
    return _poly_divmod(prod, P, mod)[1]


def _inverse_mod_poly(q: list[int], P: list[int], p: int, mod: int, n_digits: int) -> list[int]:
    """Inverse of ``q`` in ``(Z/mod)[T] / (P)``; needs ``q(0)`` a unit and ``P`` distinguished."""
    d = len(P) - 1
    q = _poly_divmod(q, P, mod)[1]
    x = [0] * d
    x[0] = pow(q[0], -1, mod)
    # the ideal (p, T) is topologically nilpotent in Z_p[T]/(P); Newton doubles the accuracy
    steps = 0
    while True:
        qx = _poly_mul_mod(q, x, P, mod)
        err = [(-c) % mod for c in qx]
        err[0] = (err[0] + 1) % mod
        if not any(err):
            return x
        corr = _poly_mul_mod(x, err, P, mod)
        x = [(a + b) % mod for a, b in zip(x, corr)]
        steps += 1
        if steps > 8 * (n_digits * d + 4).bit_length() + 16:
            raise InsufficientPrecision("inverse modulo distinguished polynomial did not converge")


def weierstrass_prepare(f: PowerSeries, certify: bool = False) -> WeierstrassData:
    """Factor the truncated series as ``p^mu * U * P``.

    The truncation is read as a polynomial of degree < M; its distinguished
    factor is found by iterated division with quadratic convergence, so the
    identity ``p^mu * U * P == f`` holds exactly modulo ``(p^N, T^M)``.

    With ``mu > 0`` a dropped coefficient beyond ``T^M`` could still have
    smaller valuation, so the invariants are then only those of the
    truncation; ``certify=True`` turns that case into ``LambdaOverflow``.
    """
    mu, lam = mu_lambda(f)
    if certify and mu > 0:
        raise LambdaOverflow(f"no unit coefficient below T^{f.M}; mu and lambda are not certified")
    p = f.p
    n = f.N - mu
    mod = p**n
    g = [(c // p**mu) % mod for c in f.coeffs]
    while len(g) > lam + 1 and g[-1] == 0:
        g.pop()
    if lam == 0:
        P = PowerSeries(p, n, f.M, (1,))
        return WeierstrassData(mu, 0, P, PowerSeries(p, n, f.M, tuple(g)))
    poly = [0] * lam + [1]
    for _ in range(4 * n + 8):
        q, r = _poly_divmod(g, poly, mod)
        if not any(r):
            break
        x = _inverse_mod_poly(q, poly, p, mod, n)
        delta = _poly_mul_mod(r, x, poly, mod)
        poly = [(a + b) % mod for a, b in zip(poly[:lam], delta)] + [1]
    else:
        raise InsufficientPrecision("Weierstrass iteration did not converge")
    return WeierstrassData(mu, lam, PowerSeries(p, n, f.M, tuple(poly)), PowerSeries(p, n, f.M, tuple(q)))


def is_distinguished(P: PowerSeries) -> bool:
    d = P.degree()
    if d < 0 or P.coeffs[d] != 1:
        return False
    return all(c % P.p == 0 for c in P.coeffs[:d])


def divide_by_distinguished(g: PowerSeries, P: PowerSeries) -> tuple[PowerSeries, PowerSeries]:
    """Weierstrass division ``g = q * P + r`` with ``deg r < deg P``."""
    g._check(P)
    if not is_distinguished(P):
        raise NotDistinguished(f"{P!r} is not a distinguished polynomial")
    d = P.degree()
    if d >= g.M:
        raise NotDistinguished(f"degree {d} does not fit below T^{g.M}")
    q, r = _poly_divmod(list(g.coeffs), list(P.coeffs[: d + 1]), g.modulus)
    return PowerSeries.from_coeffs(g.p, g.N, g.M, q), PowerSeries.from_coeffs(g.p, g.N, g.M, r)


def _point(f: PowerSeries, c) -> int:
    cv = c.value if isinstance(c, PadicInt) else int(c)
    if isinstance(c, PadicInt) and c.p != f.p:
        raise PrecisionMismatch("point and series have different primes")
    if cv % f.p:
        raise PointNotInMaximalIdeal(f"{cv} is a unit; evaluation needs a point of pZ_p")
    return cv


def effective_precision(f: PowerSeries, c) -> int:
    """Digits of ``f(c)`` unaffected by the dropped tail ``T^M * (...)``."""
    cv = _point(f, c)
    vc = f.N if cv % f.modulus == 0 else vp(cv, f.p)
    return min(f.N, f.M * vc)


def evaluate_at(f: PowerSeries, c) -> PadicInt:
    """Value at a point of ``pZ_p``, at the precision the truncation supports."""
    cv = _point(f, c)
    mod = f.modulus
    acc = 0
    for a in reversed(f.coeffs):
        acc = (acc * cv + a) % mod
    return PadicInt(f.p, effective_precision(f, c), acc)


@dataclass(frozen=True)
class OrderAt:
    order: int
    certified: bool
    residual: PadicInt  # value of f / (T - c)^order at c

    def __iter__(self):
        return iter((self.order, self.certified))


def ord_at(f: PowerSeries, c) -> OrderAt:
    """Order of vanishing at ``T = c`` by repeated synthetic division.

    The count is certified once the first non-vanishing remainder has
    valuation below ``prec - k``; a smaller gap leaves open that the order grows
    under refinement.
    """
    cv = _point(f, c)
    if f.is_zero():
        raise InsufficientPrecision("series vanishes at working precision; order unbounded")
    prec = effective_precision(f, c)
    mod = f.modulus
    cur = list(f.coeffs)
    k = 0
    while True:
        if not any(cur):
            raise InsufficientPrecision(f"order at {cv} exceeds {k} at working precision")
        q, r = _poly_divmod(cur, [(-cv) % mod, 1], mod)
        rem = r[0] % mod
        if rem:
            v = vp(rem, f.p)
            return OrderAt(k, v < prec - k, PadicInt(f.p, f.N, rem))
        cur = q
        k += 1
