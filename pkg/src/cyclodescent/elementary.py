"""Structure calculus for elementary Lambda-modules at ``f_m = T - (u^{-m} - 1)``.

An elementary module ``Lambda^r + sum Lambda/p^{l_i} + sum Lambda/F_j^{n_j}``
is described by its exponents alone.  Specialising at ``f_m`` reads off

* ``Lambda/f_m = Z_p`` and ``Lambda[f_m] = 0``,
* ``(Lambda/p^l)/f_m = Z/p^l`` and ``(Lambda/p^l)[f_m] = 0``,
* ``(Lambda/F^n)/f_m = Z_p/F(c)^n`` with ``c = u^{-m} - 1`` when ``F(c) != 0``,
* ``(Lambda/f_m^k)/f_m = (Lambda/f_m^k)[f_m] = Z_p``, one copy per factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import BranchZero, NotDistinguished, UncertifiedValuation, ValidationError
from .padic import PadicInt, check_prime, default_generator, vp
from .series import PowerSeries, is_distinguished

NEAR_MISS_DIGITS = 2


@dataclass(frozen=True)
class ElementaryModule:
    p: int
    rank: int = 0
    p_power_parts: tuple = ()
    poly_parts: tuple = ()  # pairs (PowerSeries, multiplicity)

    def __post_init__(self):
        check_prime(self.p)
        if self.rank < 0:
            raise ValidationError("rank must be non-negative", "rank")
        if any(l < 1 for l in self.p_power_parts):
            raise ValidationError("p-power exponents must be positive", "p_powers")
        object.__setattr__(self, "p_power_parts", tuple(sorted(self.p_power_parts, reverse=True)))
        parts = []
        for k, (F, n) in enumerate(self.poly_parts):
            if F.p != self.p:
                raise ValidationError("polynomial over the wrong prime", f"polys[{k}]")
            if not is_distinguished(F) or F.degree() < 1:
                raise NotDistinguished(f"polys[{k}] is not a distinguished polynomial of positive degree")
            if n < 1:
                raise ValidationError("multiplicity must be positive", f"polys[{k}].mult")
            parts.append((F, int(n)))
        object.__setattr__(self, "poly_parts", tuple(parts))

    @classmethod
    def build(cls, p, N, rank=0, p_powers=(), polys=()) -> ElementaryModule:
        """Convenience constructor; ``polys`` holds ``(coefficients, multiplicity)`` pairs."""
        M = max([len(c) for c, _ in polys] + [2])
        return cls(p, rank, tuple(p_powers), tuple((PowerSeries.from_coeffs(p, N, M, c), n) for c, n in polys))

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "p_powers": list(self.p_power_parts),
            "polys": [{"coeffs": list(F.coeffs[: F.degree() + 1]), "mult": n} for F, n in self.poly_parts],
        }

    @classmethod
    def from_json(cls, data: dict, p: int, N: int, path: str = "elementary") -> ElementaryModule:
        if not isinstance(data, dict):
            raise ValidationError("expected an object", path)
        unknown = set(data) - {"rank", "p_powers", "polys"}
        if unknown:
            raise ValidationError(f"unknown keys {sorted(unknown)}", path)
        polys = []
        for k, item in enumerate(data.get("polys", [])):
            if not isinstance(item, dict) or "coeffs" not in item:
                raise ValidationError("expected {coeffs, mult}", f"{path}.polys[{k}]")
            polys.append((item["coeffs"], item.get("mult", 1)))
        try:
            return cls.build(p, N, data.get("rank", 0), data.get("p_powers", []), polys)
        except ValidationError as exc:
            raise ValidationError(str(exc), path) from exc


@dataclass(frozen=True)
class ZpModuleStructure:
    """``Z_p^free_rank + sum Z/p^{a}``; ``provenance`` is "exact" or "up to finite ambiguity"."""

    free_rank: int
    torsion_orders: tuple = ()
    provenance: str = "exact"
    notes: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "torsion_orders", tuple(sorted((a for a in self.torsion_orders if a), reverse=True)))

    def to_json(self) -> dict:
        return {
            "free_rank": self.free_rank,
            "torsion_orders": list(self.torsion_orders),
            "provenance": self.provenance,
            "notes": list(self.notes),
        }


def _check_branch(p: int, m: int):
    if m % (p - 1) == 0:
        raise BranchZero(f"m = {m} is 0 mod {p - 1}")


def evaluation_point(p: int, m: int, N: int, u: Optional[int] = None) -> PadicInt:
    """``c = u^{-m} - 1`` at precision ``N``."""
    u = default_generator(p) if u is None else u
    return PadicInt(p, N, u) ** (-m) - 1


def polynomial_value(F: PowerSeries, c: PadicInt) -> PadicInt:
    """``F(c)`` for a polynomial ``F``; no tail is dropped, so all ``N`` digits hold."""
    mod = F.modulus
    acc = 0
    for a in reversed(F.coeffs[: F.degree() + 1]):
        acc = (acc * c.value + a) % mod
    return PadicInt(F.p, F.N, acc)


@dataclass(frozen=True)
class FactorReport:
    index: int
    is_fm: bool
    valuation: Optional[int]  # of F(c); None for an f_m factor
    near_miss: bool


def classify_factors(E: ElementaryModule, m: int, u: Optional[int] = None) -> list[FactorReport]:
    """Split the polynomial factors into ``f_m``-factors and the rest.

    A factor counts as ``f_m`` only when it is linear and vanishes at ``c`` to
    full working precision.  A vanishing value of a higher-degree factor cannot
    be resolved without factoring it and raises.
    """
    _check_branch(E.p, m)
    out = []
    for k, (F, _) in enumerate(E.poly_parts):
        c = evaluation_point(E.p, m, F.N, u)
        val = polynomial_value(F, c)
        if val.value == 0:
            if F.degree() == 1:
                out.append(FactorReport(k, True, None, False))
                continue
            raise UncertifiedValuation(f"polys[{k}] vanishes at u^-{m}-1 to {val.N} digits")
        v = vp(val.value, E.p)
        near = F.degree() == 1 and v >= max(2, val.N - NEAR_MISS_DIGITS)
        out.append(FactorReport(k, False, v, near))
    return out


def t_count(E: ElementaryModule, m: int, u: Optional[int] = None) -> int:
    return sum(1 for f in classify_factors(E, m, u) if f.is_fm)


def _near_miss_notes(reports):
    return tuple(
        f"polys[{f.index}] is linear and agrees with f_m to {f.valuation} digits; kept as non-f_m"
        for f in reports
        if f.near_miss
    )


def quotient_mod_fm(E: ElementaryModule, m: int, u: Optional[int] = None) -> ZpModuleStructure:
    """Structure of ``E / f_m E`` as a Z_p-module."""
    reports = classify_factors(E, m, u)
    t = sum(1 for f in reports if f.is_fm)
    torsion = list(E.p_power_parts)
    for f in reports:
        if not f.is_fm:
            torsion.append(E.poly_parts[f.index][1] * f.valuation)
    return ZpModuleStructure(E.rank + t, tuple(torsion), "exact", _near_miss_notes(reports))


def torsion_mod_fm(E: ElementaryModule, m: int, u: Optional[int] = None) -> ZpModuleStructure:
    """Structure of ``E[f_m]``: one ``Z_p`` per ``f_m``-factor, nothing else."""
    reports = classify_factors(E, m, u)
    t = sum(1 for f in reports if f.is_fm)
    return ZpModuleStructure(t, (), "exact", _near_miss_notes(reports))


def rank_formula(m: int, p: int) -> int:
    """``rank e_m X_S``: 1 for odd ``m``, 0 for even ``m``."""
    _check_branch(p, m)
    return m % 2


@dataclass(frozen=True)
class CorankStructures:
    h1: ZpModuleStructure
    h2: ZpModuleStructure

    def to_json(self) -> dict:
        return {"h1": self.h1.to_json(), "h2": self.h2.to_json()}


def h_structures(E: ElementaryModule, m: int, u: Optional[int] = None) -> CorankStructures:
    """Coranks of ``H^1`` and ``H^2`` of the twist by ``m``, from a model ``E`` of ``e_m X_S``.

    The free rank of ``H^1`` is exact; its finite part is only known up to the
    finite error of the pseudo-isomorphism onto ``E``.
    """
    q = quotient_mod_fm(E, m, u)
    tors = torsion_mod_fm(E, m, u)
    notes = q.notes
    if E.rank != rank_formula(m, E.p):
        notes += (f"model rank {E.rank} differs from the expected branch rank {rank_formula(m, E.p)}",)
    h1 = ZpModuleStructure(q.free_rank, q.torsion_orders, "up to finite ambiguity", notes)
    h2 = ZpModuleStructure(tors.free_rank, (), "exact")
    return CorankStructures(h1, h2)


def fm_polynomial(p: int, m: int, N: int, M: int = 2, u: Optional[int] = None) -> PowerSeries:
    """``f_m = T - (u^{-m} - 1)``."""
    c = evaluation_point(p, m, N, u)
    return PowerSeries.from_coeffs(p, N, M, [-c.value, 1])


def twists_with_fm_factors(E: ElementaryModule, ms: Sequence[int], u: Optional[int] = None) -> list[int]:
    """The ``m`` in ``ms`` (nonzero mod p-1) for which ``E`` has an ``f_m``-factor."""
    return [m for m in ms if m % (E.p - 1) and t_count(E, m, u) > 0]


__all__ = [
    "ElementaryModule",
    "ZpModuleStructure",
    "CorankStructures",
    "quotient_mod_fm",
    "torsion_mod_fm",
    "rank_formula",
    "h_structures",
    "fm_polynomial",
    "evaluation_point",
    "t_count",
]
