"""Fixed-precision p-adic integers, Teichmüller lifts and the unit decomposition.

A :class:`PadicInt` is a residue modulo ``p**N`` standing for an element of
``Z_p`` known to ``N`` digits.  All arithmetic is exact modulo ``p**N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import NonUnit, NotCoprime, PrecisionMismatch, ValidationError


@lru_cache(maxsize=None)
def is_odd_prime(p: int) -> bool:
    if not isinstance(p, int) or p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p, path="p"):
    if not is_odd_prime(p):
        raise ValidationError(f"{p!r} is not an odd prime", path)


def vp(n: int, p: int) -> int | None:
    """p-adic valuation of a nonzero integer; None for zero."""
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Smallest primitive root modulo p."""
    check_prime(p)
    q = p - 1
    factors = []
    n, d = q, 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    for g in range(2, p):
        if all(pow(g, q // f, p) != 1 for f in factors):
            return g
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class PadicInt:
    """Element of ``Z/p^N``; ``value`` is kept reduced into ``[0, p^N)``."""

    p: int
    N: int
    value: int

    def __post_init__(self):
        check_prime(self.p)
        if not isinstance(self.N, int) or self.N < 1:
            raise ValidationError(f"precision must be a positive integer, got {self.N!r}", "N")
        object.__setattr__(self, "value", int(self.value) % self.p**self.N)

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def _coerce(self, other) -> int:
        if isinstance(other, PadicInt):
            if (other.p, other.N) != (self.p, self.N):
                raise PrecisionMismatch(
                    f"operands differ: (p={self.p}, N={self.N}) vs (p={other.p}, N={other.N})"
                )
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def _new(self, value: int) -> PadicInt:
        return PadicInt(self.p, self.N, value)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def __pow__(self, e: int):
        if e < 0:
            return unit_inverse(self) ** (-e)
        return self._new(pow(self.value, e, self.modulus))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, PadicInt):
            return (self.p, self.N, self.value) == (other.p, other.N, other.value)
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.N, self.value))

    def __repr__(self):
        return f"PadicInt({self.value} mod {self.p}^{self.N})"

    def reduce(self, N: int) -> PadicInt:
        if N > self.N:
            raise PrecisionMismatch(f"cannot raise precision from {self.N} to {N}")
        return PadicInt(self.p, N, self.value)

    def valuation(self) -> int:
        return valuation(self)

    def is_unit(self) -> bool:
        return self.value % self.p != 0


def valuation(x: PadicInt) -> int:
    """Largest ``v <= N`` with ``p^v | x``.

    A return value equal to ``x.N`` means the element is zero at this
    precision, i.e. its true valuation is at least ``N``.
    """
    if x.value == 0:
        return x.N
    return vp(x.value, x.p)


def format_valuation(x: PadicInt) -> str:
    v = valuation(x)
    return f">= {x.N}" if x.value == 0 else str(v)


def unit_inverse(x: PadicInt) -> PadicInt:
    if x.value % x.p == 0:
        raise NonUnit(f"{x!r} is not a unit")
    return x._new(pow(x.value, -1, x.modulus))


def teichmuller(a: int, p: int, N: int) -> PadicInt:
    """Teichmüller lift of ``a mod p`` to ``Z/p^N`` by iterating ``x -> x^p``."""
    check_prime(p)
    if a % p == 0:
        raise NotCoprime(f"{a} is divisible by {p}", "a")
    return PadicInt(p, N, _teichmuller_value(a % p, p, N))


@lru_cache(maxsize=4096)
def _teichmuller_value(a: int, p: int, N: int) -> int:
    mod = p**N
    x = a % mod
    # the error x^(p-1) - 1 gains a digit per step, so N steps always suffice
    for _ in range(N + 1):
        y = pow(x, p, mod)
        if y == x:
            return x
        x = y
    raise AssertionError("Frobenius iteration did not stabilise")


@dataclass(frozen=True)
class UnitDecomposition:
    teich: PadicInt
    principal: PadicInt


def unit_decompose(a: PadicInt) -> UnitDecomposition:
    """Split a unit as ``omega(a) * <a>`` with ``<a> = 1 mod p``."""
    if not a.is_unit():
        raise NonUnit(f"{a!r} is not a unit")
    w = teichmuller(a.value, a.p, a.N)
    return UnitDecomposition(w, a * unit_inverse(w))


def default_generator(p: int) -> int:
    return 1 + p
