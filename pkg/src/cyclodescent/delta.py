"""The group ring ``(Z/p^N)[Delta]`` with ``Delta = (Z/p)^x`` and its branch idempotents.

On a module, ``Delta`` acts through the matrix of the chosen generator
``delta_0`` (the smallest primitive root mod p), so ``[delta_0^k]`` acts as
``D^k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import PrecisionMismatch, ValidationError
from .modules import FinitePModule, Subquotient, compose, image, linear_combination, mat_pow
from .padic import PadicInt, check_prime, primitive_root, teichmuller, unit_inverse


@dataclass(frozen=True)
class DeltaRingElement:
    p: int
    N: int
    coeffs: tuple  # coefficient of [d] at index d - 1, d = 1 .. p-1

    def __post_init__(self):
        check_prime(self.p)
        if len(self.coeffs) != self.p - 1:
            raise ValidationError(f"expected {self.p - 1} coefficients", "coeffs")
        mod = self.p**self.N
        object.__setattr__(self, "coeffs", tuple(int(c) % mod for c in self.coeffs))

    @classmethod
    def from_dict(cls, p, N, mapping: dict) -> DeltaRingElement:
        cs = [0] * (p - 1)
        for d, c in mapping.items():
            if d % p == 0:
                raise ValidationError(f"{d} is not in (Z/{p})^x")
            cs[d % p - 1] += c
        return cls(p, N, tuple(cs))

    @classmethod
    def group_element(cls, d: int, p: int, N: int) -> DeltaRingElement:
        return cls.from_dict(p, N, {d: 1})

    def __getitem__(self, d: int) -> int:
        return self.coeffs[d % self.p - 1]

    def as_dict(self) -> dict:
        return {d: self.coeffs[d - 1] for d in range(1, self.p)}

    def _check(self, other):
        if (self.p, self.N) != (other.p, other.N):
            raise PrecisionMismatch("group ring elements at different (p, N)")

    def __add__(self, other):
        self._check(other)
        return DeltaRingElement(self.p, self.N, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return DeltaRingElement(self.p, self.N, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if isinstance(other, int):
            return DeltaRingElement(self.p, self.N, tuple(other * a for a in self.coeffs))
        self._check(other)
        p, n = self.p, self.p - 1
        powers = _power_table(p)
        # in the basis [delta_0^k] the product is a cyclic convolution; pack
        # both sides into one integer each and multiply once
        bits = 2 * (p**self.N).bit_length() + n.bit_length() + 1
        x = sum(self.coeffs[powers[k] - 1] << (bits * k) for k in range(n))
        y = sum(other.coeffs[powers[k] - 1] << (bits * k) for k in range(n))
        z = x * y
        mask = (1 << bits) - 1
        out = [0] * n
        for k in range(2 * n - 1):
            out[powers[k % n] - 1] += (z >> (bits * k)) & mask
        return DeltaRingElement(p, self.N, tuple(out))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DeltaRingElement):
            return NotImplemented
        return (self.p, self.N, self.coeffs) == (other.p, other.N, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.N, self.coeffs))

    def __repr__(self):
        terms = [f"{c}[{d}]" for d, c in enumerate(self.coeffs, start=1) if c]
        return " + ".join(terms) if terms else "0"


@lru_cache(maxsize=None)
def _power_table(p: int) -> tuple:
    """``delta_0^k mod p`` for ``k = 0 .. p-2``."""
    g = primitive_root(p)
    return tuple(pow(g, k, p) for k in range(p - 1))


def one(p, N) -> DeltaRingElement:
    return DeltaRingElement.group_element(1, p, N)


def idempotent(j: int, p: int, N: int) -> DeltaRingElement:
    """``e_j = (p-1)^{-1} sum_d omega^{-j}(d) [d]``."""
    check_prime(p)
    inv = unit_inverse(PadicInt(p, N, p - 1)).value
    mod = p**N
    cs = []
    for d in range(1, p):
        w = teichmuller(d, p, N).value
        cs.append(inv * pow(w, (-j) % (p - 1), mod))
    return DeltaRingElement(p, N, tuple(cs))


def discrete_log_mod_p(d: int, p: int) -> int:
    """``k`` with ``delta_0^k = d mod p``."""
    g = primitive_root(p)
    x = 1
    for k in range(p - 1):
        if x == d % p:
            return k
        x = x * g % p
    raise ValidationError(f"{d} is not a unit mod {p}")


def act(M: FinitePModule, e: DeltaRingElement):
    """Matrix by which the group ring element ``e`` acts on ``M``."""
    D = M.require("delta_action")
    if M.rank and e.N < M.exponent:
        raise PrecisionMismatch(f"group ring precision {e.N} below module exponent {M.exponent}")
    g = primitive_root(M.p)
    terms = []
    power = mat_pow(M, D, 0)
    x = 1
    for _ in range(M.p - 1):
        terms.append((e[x], power))
        power = compose(M, power, D)
        x = x * g % M.p
    return linear_combination(M, terms)


def branch_projector(M: FinitePModule, j: int):
    return act(M, idempotent(j, M.p, max(M.exponent, 1)))


def branch_submodule(M: FinitePModule, j: int) -> Subquotient:
    return image(M, branch_projector(M, j))


def branch_project(M: FinitePModule, j: int) -> FinitePModule:
    """``e_j M`` with the induced Delta- and gamma-actions."""
    return branch_submodule(M, j).module


def branch_decomposition(M: FinitePModule) -> dict[int, FinitePModule]:
    return {j: branch_project(M, j) for j in range(M.p - 1)}


def acts_by_scalar(M: FinitePModule, j: int) -> bool:
    """True when ``delta_0`` acts on ``M`` as the scalar ``omega^j(delta_0)``."""
    if M.rank == 0:
        return True
    D = M.require("delta_action")
    w = teichmuller(primitive_root(M.p), M.p, M.exponent).value
    return D == linear_combination(M, [(pow(w, j % (M.p - 1)), mat_pow(M, D, 0))])
