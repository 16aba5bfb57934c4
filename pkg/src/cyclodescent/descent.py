"""Cyclotomic descent at finite level.

For a twist ``theta`` with ``theta|_Delta = omega^m`` the cohomology
``H^q(G, A(theta))`` sits in a short exact sequence whose outer terms are

* ``coker(gamma - theta(gamma)^{-1})`` on ``e_{-m} H^{q-1}(H, A)`` and
* ``ker(gamma - theta(gamma)^{-1})`` on ``e_{-m} H^q(H, A)``,

with ``H^{-1} = H^2 = 0``.  Both pieces are reported with the total order; no
splitting is claimed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from . import oracle
from .delta import branch_project
from .errors import (
    BranchZeroUnsupported,
    MissingAction,
    PrecisionMismatch,
    ValidationError,
)
from .modules import (
    FinitePModule,
    automorphism_inverse,
    GradedPieces,
    cokernel,
    endo_ker_coker,
    linear_combination,
    pontryagin_dual,
    scalar_shift,
)
from .padic import PadicInt, check_prime, default_generator, primitive_root, teichmuller, unit_inverse

BRANCH_ZERO_NOTE = "branch zero: m = 0 mod p-1, vanishing guarantees do not apply"


@dataclass(frozen=True)
class TwistCharacter:
    p: int
    branch_exponent: int
    gamma_value: PadicInt

    def __post_init__(self):
        check_prime(self.p)
        if self.gamma_value.p != self.p:
            raise ValidationError("gamma_value has the wrong prime", "gamma_value")
        if self.gamma_value.value % self.p != 1:
            raise ValidationError("gamma_value must be 1 mod p", "gamma_value")
        object.__setattr__(self, "branch_exponent", self.branch_exponent % (self.p - 1))

    @classmethod
    def tate(cls, p: int, m: int, N: int, u: Optional[int] = None) -> TwistCharacter:
        """The twist ``chi^m``: ``omega^m`` on Delta and ``u^m`` on gamma."""
        u = default_generator(p) if u is None else u
        return cls(p, m, PadicInt(p, N, u) ** m)

    @property
    def is_branch_zero(self) -> bool:
        return self.branch_exponent == 0

    def inverse_gamma_value(self) -> PadicInt:
        return unit_inverse(self.gamma_value)

    def to_json(self) -> dict:
        g = self.gamma_value
        return {"m": self.branch_exponent, "gamma_value": g.value, "N": g.N}

    @classmethod
    def from_json(cls, p: int, data: dict, path: str = "theta") -> TwistCharacter:
        if not isinstance(data, dict):
            raise ValidationError("expected an object", path)
        unknown = set(data) - {"m", "gamma_value", "N", "u"}
        if unknown:
            raise ValidationError(f"unknown keys {sorted(unknown)}", path)
        if "m" not in data:
            raise ValidationError("missing key", f"{path}.m")
        N = data.get("N", 8)
        if "gamma_value" in data:
            return cls(p, data["m"], PadicInt(p, N, data["gamma_value"]))
        return cls.tate(p, data["m"], N, data.get("u"))


@dataclass(frozen=True)
class HData:
    """Finite-level models of ``H^0(H, A)`` and ``H^1(H, A)``; ``H^2(H, A)`` is taken to vanish."""

    h0: FinitePModule
    h1: FinitePModule
    h2_is_zero: bool = True

    def __post_init__(self):
        for name in ("h0", "h1"):
            M = getattr(self, name)
            if M.p != self.h0.p:
                raise ValidationError("h0 and h1 live over different primes", name)
            if M.rank and (M.delta_action is None or M.gamma_action is None):
                raise MissingAction(f"{name} needs both Delta- and gamma-actions")
        if not self.h2_is_zero:
            raise ValidationError("only H^2(H, A) = 0 is supported", "h2_is_zero")

    @property
    def p(self):
        return self.h0.p

    def degree(self, q: int) -> Optional[FinitePModule]:
        return {0: self.h0, 1: self.h1}.get(q)


def zero_module(p: int) -> FinitePModule:
    return FinitePModule(p, (), (), ())


def gamma1_cohomology(M: FinitePModule) -> tuple[FinitePModule, FinitePModule]:
    """``(ker(gamma - 1), coker(gamma - 1))``: the cohomology of ``Gamma_1`` in degrees 0 and 1."""
    G = M.require("gamma_action")
    pieces = endo_ker_coker(M, scalar_shift(M, G, 1))
    return pieces.ker_part, pieces.coker_part


def _theta_scalar(theta: TwistCharacter, exponent: int) -> int:
    if theta.gamma_value.N < exponent + 1:
        raise PrecisionMismatch(
            f"twist known to {theta.gamma_value.N} digits; module exponent {exponent} needs {exponent + 1}"
        )
    return theta.inverse_gamma_value().value


def _twisted_endo(M: FinitePModule, c: int):
    return scalar_shift(M, M.require("gamma_action"), c)


def twist_cohomology(
    H: HData, theta: TwistCharacter, q: int, require_guarantees: bool = False
) -> GradedPieces:
    """Graded pieces of ``H^q(G, A(theta))`` for ``q`` in 0..2."""
    if q not in (0, 1, 2):
        raise ValidationError(f"degree {q} is not in 0..2", "q")
    if theta.p != H.p:
        raise ValidationError("twist and modules use different primes", "theta")
    notes = ()
    if theta.is_branch_zero:
        if require_guarantees and q <= 1:
            raise BranchZeroUnsupported("m = 0 mod p-1 lies outside the supported hypotheses")
        notes = (BRANCH_ZERO_NOTE,)
    m = theta.branch_exponent
    zero = zero_module(H.p)
    lower, upper = H.degree(q - 1), H.degree(q)
    exponent = max(M.exponent for M in (H.h0, H.h1))
    c = _theta_scalar(theta, exponent)

    def branch_piece(M, which):
        if M is None or M.rank == 0:
            return zero.structure()
        B = branch_project(M, -m)
        if B.rank == 0:
            return B.structure()
        pieces = endo_ker_coker(B, _twisted_endo(B, c))
        return pieces.coker_part if which == "coker" else pieces.ker_part

    return GradedPieces(branch_piece(lower, "coker"), branch_piece(upper, "ker"), notes)


def h1_dual_route(H: HData, theta: TwistCharacter) -> FinitePModule:
    """``ker_part`` of ``H^1`` recomputed on the dual side.

    ``ker(gamma - c)`` on ``e_{-m} h1`` is dual to
    ``coker(gamma^{-1} - c)`` on ``e_m(h1^dual)``; finite groups are
    self-dual so the invariant factors must agree.
    """
    m = theta.branch_exponent
    c = _theta_scalar(theta, max(H.h0.exponent, H.h1.exponent))
    if H.h1.rank == 0:
        return H.h1.structure()
    Dual = branch_project(pontryagin_dual(H.h1), m)
    if Dual.rank == 0:
        return Dual.structure()
    Ginv = automorphism_inverse(Dual, Dual.gamma_action)
    return cokernel(Dual, scalar_shift(Dual, Ginv, c), actions=()).module


def twisted_actions(M: FinitePModule, theta: TwistCharacter):
    """Actions of ``delta_0`` and ``gamma`` on ``M(theta)``."""
    p = M.p
    e = max(M.exponent, 1)
    w = teichmuller(primitive_root(p), p, e).value
    wm = pow(w, theta.branch_exponent, p**e)
    g = theta.gamma_value.value
    D = linear_combination(M, [(wm, M.require("delta_action"))])
    G = linear_combination(M, [(g, M.require("gamma_action"))])
    return D, G


def brute_force_h01(n: int, M: FinitePModule):
    """Cocycle oracle for the cyclic quotient of order ``p^n``; returns invariant factors."""
    return oracle.brute_force_h01(n, M)


def brute_force_twist(M: FinitePModule, theta: TwistCharacter, n: Optional[int] = None):
    """``H^0`` and ``H^1`` of ``Delta x Gamma_1/Gamma_1^{p^n}`` on ``M(theta)`` by enumeration."""
    D, G = twisted_actions(M, theta)
    return oracle.brute_force_delta_gamma(M, D, G, n)


def total_log_order(pieces: GradedPieces) -> int:
    return pieces.log_order


# fixtures -------------------------------------------------------------------


def parse_fixture(line: str, lineno: int = 0) -> dict:
    path = f"line {lineno}"
    try:
        data = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc.msg}", path) from exc
    if not isinstance(data, dict):
        raise ValidationError("expected an object", path)
    unknown = set(data) - {"module", "h0", "h1", "theta", "q", "expected", "name"}
    if unknown:
        raise ValidationError(f"unknown keys {sorted(unknown)}", path)
    if "theta" not in data:
        raise ValidationError("missing key", f"{path}.theta")
    if "module" in data:
        M = FinitePModule.from_json(data["module"], f"{path}.module")
        H = HData(M, zero_module(M.p))
    elif "h0" in data or "h1" in data:
        h0 = FinitePModule.from_json(data["h0"], f"{path}.h0") if "h0" in data else None
        h1 = FinitePModule.from_json(data["h1"], f"{path}.h1") if "h1" in data else None
        p = (h0 or h1).p
        H = HData(h0 or zero_module(p), h1 or zero_module(p))
    else:
        raise ValidationError("needs 'module' or 'h0'/'h1'", path)
    theta = TwistCharacter.from_json(H.p, data["theta"], f"{path}.theta")
    q = data.get("q")
    if q is not None and q not in (0, 1, 2):
        raise ValidationError("degree must be 0, 1 or 2", f"{path}.q")
    return {"name": data.get("name", path), "H": H, "theta": theta, "q": q, "expected": data.get("expected")}


def load_fixtures(path) -> list[dict]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.strip():
                out.append(parse_fixture(line, lineno))
    return out


def run_fixture(fx: dict) -> dict:
    """Evaluate a parsed fixture; ``ok`` is None when it carries no expectation."""
    degrees = [fx["q"]] if fx["q"] is not None else [0, 1, 2]
    results = {}
    for q in degrees:
        results[q] = twist_cohomology(fx["H"], fx["theta"], q).to_json()
    ok = None
    exp = fx["expected"]
    if exp is not None:
        if fx["q"] is not None:
            exp = {str(fx["q"]): exp}
        ok = all(
            results[int(q)]["coker_part"] == list(e.get("coker_part", []))
            and results[int(q)]["ker_part"] == list(e.get("ker_part", []))
            for q, e in exp.items()
        )
    return {"name": fx["name"], "pieces": {str(q): v for q, v in results.items()}, "ok": ok}


__all__ = [
    "TwistCharacter",
    "HData",
    "gamma1_cohomology",
    "twist_cohomology",
    "h1_dual_route",
    "brute_force_h01",
    "brute_force_twist",
    "twisted_actions",
    "load_fixtures",
    "run_fixture",
]
