"""Kubota-Leopoldt p-adic L-series on the even Teichmüller branches.

The branch series ``G_j`` is built from the Stickelberger sum at level ``n``

    G_j(T) = -(1/p^{n+1}) sum_{a < p^{n+1}, p not | a} a omega^{j-1}(a) (u^{-1}(1+T))^{iota(a)}

where ``<a> = u^{iota(a)} mod p^{n+1}``.  It satisfies
``G_j(u^k - 1) = L_p(1-k, omega^j) = -(1 - p^{k-1}) B_k / k`` for ``k = j mod p-1``.
Which of the sign choices is used is not assumed but calibrated against the
Bernoulli values; the winning choice is recorded as ``convention_id``.

Precision at level ``n``: values at points of ``pZ_p`` are good to ``n+1``
digits, and the coefficient of ``T^i`` to ``n - v_p(i)`` digits, hence to
``n - floor(log_p(M-1))`` digits below ``T^M``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional

import numpy as np

from .errors import (
    BranchMismatch,
    BranchZero,
    CalibrationFailed,
    ConventionUnresolved,
    InsufficientPrecision,
    NonIntegralResult,
    OddBranch,
    ValidationError,
)
from .padic import PadicInt, check_prime, default_generator, primitive_root, teichmuller, vp
from .series import PowerSeries, evaluate_at, mu_lambda, ord_at, weierstrass_prepare

GUARD_DIGITS = 2
CALIBRATION_DIGITS = 3

# (sign of the sum, sign of the exponent of u^{-1}(1+T)) for the weight omega^{j-1}
CANDIDATES = {
    "stick-w(j-1)-s-e+": (-1, 1),
    "stick-w(j-1)-s-e-": (-1, -1),
    "stick-w(j-1)-s+e+": (1, 1),
    "stick-w(j-1)-s+e-": (1, -1),
}

_INT64_SAFE = 2**62

# computed series for this process, keyed by (p, j, N, M, u, level)
_MEMO: dict = {}


# Bernoulli numbers and interpolation values ----------------------------------


_BERNOULLI = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """``B_n`` with ``B_1 = -1/2``, from ``sum_k C(n+1, k) B_k = 0``."""
    if n < 0:
        raise ValidationError("n must be non-negative", "n")
    while len(_BERNOULLI) <= n:
        k = len(_BERNOULLI)
        s = sum(math.comb(k + 1, i) * _BERNOULLI[i] for i in range(k))
        _BERNOULLI.append(-s / (k + 1))
    return _BERNOULLI[n]


def _check_even_branch(p: int, j: int):
    if j % 2:
        raise OddBranch(f"branch {j} is odd; the series vanishes identically there")
    if j % (p - 1) == 0:
        raise BranchZero(f"branch {j} is 0 mod {p - 1}")


def lp_value(p: int, j: int, n: int, N: int) -> PadicInt:
    """``L_p(1-n, omega^j) = -(1 - p^{n-1}) B_n / n`` in ``Z/p^N``."""
    check_prime(p)
    _check_even_branch(p, j)
    if n < 2 or (n - j) % (p - 1):
        raise BranchMismatch(f"n = {n} is not a positive integer = {j} mod {p - 1}")
    v = -(1 - Fraction(p) ** (n - 1)) * bernoulli(n) / n
    if v.denominator % p == 0:
        raise NonIntegralResult(f"L-value {v} is not p-integral")
    return PadicInt(p, N, v.numerator * pow(v.denominator, -1, p**N))


def interpolation_points(p: int, j: int, count: int) -> list[int]:
    first = j % (p - 1) or (p - 1)
    return [first + k * (p - 1) for k in range(count)]


# discrete logarithm ------------------------------------------------------------


def _padic_log(x: int, p: int, T: int) -> int:
    """``log(x)`` modulo ``p^T`` for ``x = 1 mod p``."""
    y = x - 1
    total = 0
    k = 1
    while k - math.floor(math.log(k, p)) - 1 < T + 2 or k < 2:
        v = vp(k, p)
        mod = p ** (T + v)
        term = pow(y, k, mod) // p**v * pow(k // p**v, -1, p**T)
        total += term if k % 2 else -term
        k += 1
    return total % p**T


def discrete_log(a: int, p: int, n: int, u: Optional[int] = None) -> int:
    """``iota`` in ``[0, p^n)`` with ``u^iota = <a> mod p^{n+1}``, via p-adic logarithms."""
    u = default_generator(p) if u is None else u
    T = n + 3
    w = teichmuller(a, p, T + 1)
    principal = a * pow(w.value, -1, p ** (T + 1)) % p ** (T + 1)
    la = _padic_log(principal, p, T + 1)
    lu = _padic_log(u, p, T + 1)
    if la % p or lu % p**2 == 0:
        raise ValidationError("u must be a topological generator of 1 + pZ_p")
    iota = (la // p) * pow(lu // p, -1, p**T) % p**n
    if pow(u, iota, p ** (n + 1)) != principal % p ** (n + 1):
        raise ArithmeticError("discrete logarithm check failed")
    return iota


# modular helpers on int64 arrays ------------------------------------------------


def mulmod(a, b, R: int):
    """``a * b mod R`` elementwise for int64 arrays with entries in ``[0, R)``."""
    if R < 2**31:
        return (a * b) % R
    if R >= 2**46:
        raise OverflowError("modulus too large for the int64 kernel")
    res = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    nlimbs = (R.bit_length() + 15) // 16
    for k in range(nlimbs - 1, -1, -1):
        limb = (b >> (16 * k)) & 0xFFFF
        res = (res * 65536 + a * limb) % R
    return res


def _power_vector(base: int, length: int, R: int):
    """``base^i mod R`` for ``i < length``, via a baby-step/giant-step outer product."""
    B = max(1, math.isqrt(length - 1) + 1) if length > 1 else 1
    small = np.array([pow(base, i, R) for i in range(B)], dtype=np.int64)
    step = pow(base, B, R)
    big = np.array([pow(step, k, R) for k in range((length + B - 1) // B)], dtype=np.int64)
    out = mulmod(big[:, None], small[None, :], R).reshape(-1)
    return out[:length]


def _cumsum_mod(x, R: int):
    block = max(1, _INT64_SAFE // R)
    if len(x) <= block:
        return np.cumsum(x) % R
    out = np.empty_like(x)
    carry = 0
    for s in range(0, len(x), block):
        c = (np.cumsum(x[s : s + block]) + carry) % R
        out[s : s + block] = c
        carry = int(c[-1])
    return out


def _sum_mod(x, R: int) -> int:
    block = max(1, _INT64_SAFE // R)
    return sum(int(x[s : s + block].sum()) for s in range(0, len(x), block)) % R


# Stickelberger sums --------------------------------------------------------------


def _group_ring_coeffs_numpy(p, j, n, N, sign, e, u):
    """Coefficients of ``(1+T)^i``, ``i < p^n``, of the level-``n`` sum, as an int64 array."""
    Q, R, pn = p ** (n + 1), p**N, p**n
    PW = p ** (N + n + 1)
    ui = _power_vector(u, pn, Q)
    t = teichmuller(primitive_root(p), p, N + n + 1).value
    tw = pow(t, (j - 1) % (p - 1), PW)
    acc_lo = np.zeros(pn, dtype=np.int64)
    acc_hi = np.zeros(pn, dtype=np.int64)
    tk, wk = 1, 1
    for _ in range(p - 1):
        w_lo, w_hi = wk % Q, wk // Q
        a = (tk % Q * ui) % Q
        acc_lo += w_lo * a
        acc_hi = (acc_hi + mulmod(a % R, np.int64(w_hi), R)) % R
        tk, wk = tk * t % PW, wk * tw % PW
    if np.any(acc_lo % Q):
        raise NonIntegralResult("Stickelberger sum is not divisible by p^(n+1)")
    S = (acc_lo // Q % R + acc_hi) % R
    if sign < 0:
        S = (R - S) % R
    # (u^{-1}(1+T))^{e iota}: weight u^{-e iota}, position e*iota mod p^n
    twist = _power_vector(pow(u, -e, R), pn, R)
    S = mulmod(S, twist, R)
    if e > 0:
        return S
    out = np.empty_like(S)
    out[(-np.arange(pn)) % pn] = S
    return out


def _binomial_transform(C, M: int, R: int) -> list[int]:
    """``sum_i C_i (1+T)^i`` truncated to ``T^M``: coefficient ``k`` is ``sum_i C_i binom(i, k)``."""
    coeffs = []
    b = np.ones(len(C), dtype=np.int64)
    for k in range(M):
        if k:
            cs = _cumsum_mod(b, R)
            b = np.concatenate([[0], cs[:-1]]).astype(np.int64)
        coeffs.append(_sum_mod(mulmod(C, b, R), R))
    return coeffs


def _kernel_fits(p, n, N) -> bool:
    Q = p ** (n + 1)
    return Q * Q * (p - 1) < _INT64_SAFE and p**N < 2**46


def stickelberger_series(
    p: int, j: int, n: int, N: int, M: int, candidate: str, u: Optional[int] = None
) -> PowerSeries:
    """Level-``n`` Stickelberger series of branch ``j`` under a sign ``candidate``."""
    check_prime(p)
    _check_even_branch(p, j)
    if candidate not in CANDIDATES:
        raise ValidationError(f"unknown candidate {candidate!r}", "candidate")
    u = default_generator(p) if u is None else u
    sign, e = CANDIDATES[candidate]
    if not _kernel_fits(p, n, N):
        return stickelberger_series_reference(p, j, n, N, M, candidate, u)
    C = _group_ring_coeffs_numpy(p, j, n, N, sign, e, u)
    return PowerSeries.from_coeffs(p, N, M, _binomial_transform(C, M, p**N))


def stickelberger_series_reference(
    p: int, j: int, n: int, N: int, M: int, candidate: str, u: Optional[int] = None
) -> PowerSeries:
    """Same sum in plain Python: loop over ``a`` with p-adic discrete logarithms."""
    _check_even_branch(p, j)
    u = default_generator(p) if u is None else u
    sign, e = CANDIDATES[candidate]
    Q, R, pn = p ** (n + 1), p**N, p**n
    PW = p ** (N + n + 1)
    group = [0] * pn
    for a in range(1, Q):
        if a % p == 0:
            continue
        iota = discrete_log(a, p, n, u)
        w = pow(teichmuller(a, p, N + n + 1).value, (j - 1) % (p - 1), PW)
        group[iota] += a * w
    R_u = pow(u, -e, R)
    C = [0] * pn
    for iota, s in enumerate(group):
        s %= PW
        if s % Q:
            raise NonIntegralResult("Stickelberger sum is not divisible by p^(n+1)")
        C[(e * iota) % pn] = sign * (s // Q) * pow(R_u, iota, R) % R
    coeffs = [sum(c * math.comb(i, k) for i, c in enumerate(C)) % R for k in range(M)]
    return PowerSeries.from_coeffs(p, N, M, coeffs)


# calibrated branch series --------------------------------------------------------


def base_level(p: int, M: int) -> int:
    """Smallest ``n`` with ``p^n >= p M``."""
    n = 1
    while p**n < p * M:
        n += 1
    return n


def value_precision(p: int, n: int, N: int) -> int:
    return min(N, n + 1)


def coefficient_precision(p: int, n: int, N: int, M: int) -> int:
    drop = 0
    while p ** (drop + 1) <= M - 1:
        drop += 1
    return max(0, min(N, n - drop))


@dataclass(frozen=True)
class BranchSeries:
    p: int
    j: int
    series: PowerSeries
    convention_id: str
    level_used: int
    u: int
    value_precision: int
    coefficient_precision: int
    stabilization_digits: Optional[int] = None
    notes: tuple = field(default=())

    @property
    def N(self):
        return self.series.N

    @property
    def M(self):
        return self.series.M

    def certified_series(self) -> PowerSeries:
        """The series reduced to the digits every coefficient is known to."""
        return self.series.reduce(N=max(1, self.coefficient_precision))

    def value_at(self, c: PadicInt) -> PadicInt:
        v = evaluate_at(self.series, c)
        return v.reduce(min(v.N, self.value_precision))


def _validate_generator(p, u):
    if u % p != 1 or u % (p * p) == 1:
        raise ValidationError(f"u = {u} is not a topological generator of 1 + {p}Z_{p}", "u")


@lru_cache(maxsize=None)
def _calibrate_cached(p, j, N, M, u):
    # wrong candidates can agree with the Bernoulli values to two digits, so
    # calibrate where three digits survive a single guard digit
    n = base_level(p, M)
    while value_precision(p, n, N) < min(N, CALIBRATION_DIGITS + 1):
        n += 1
    prec = value_precision(p, n, N) - 1
    if prec < CALIBRATION_DIGITS:
        raise CalibrationFailed(f"N = {N} leaves fewer than {CALIBRATION_DIGITS} digits for calibration")
    points = interpolation_points(p, j, 2)
    matches = {}
    for cid in CANDIDATES:
        f = stickelberger_series(p, j, n, N, M, cid, u)
        ok = True
        for k in points:
            c = PadicInt(p, N, pow(u, k, p**N) - 1)
            got = evaluate_at(f, c).value % p**prec
            if got != lp_value(p, j, k, N).value % p**prec:
                ok = False
                break
        if ok:
            matches[cid] = (n, f)
    if len(matches) != 1:
        raise CalibrationFailed(f"{len(matches)} convention candidates match the Bernoulli values for (p={p}, j={j})")
    ((cid, (n, f)),) = matches.items()
    return cid, n, f


def calibrate(p: int, j: int, N: int = 8, M: int = 16, u: Optional[int] = None) -> str:
    """The unique candidate matching ``lp_value`` at two interpolation points."""
    u = default_generator(p) if u is None else u
    _check_even_branch(p, j)
    _validate_generator(p, u)
    return _calibrate_cached(p, j, N, M, u)[0]


def iwasawa_series(
    p: int,
    j: int,
    N: int = 8,
    M: int = 16,
    u: Optional[int] = None,
    min_value_digits: Optional[int] = None,
    cache=None,
) -> BranchSeries:
    """Calibrated branch series ``G_{omega^j}`` with a level-stabilisation check.

    The level is one above ``base_level``, raised further if
    ``min_value_digits`` asks for more certified digits in values.
    """
    check_prime(p)
    _check_even_branch(p, j)
    j %= p - 1
    u = default_generator(p) if u is None else u
    _validate_generator(p, u)
    level = base_level(p, M) + 1
    if min_value_digits is not None:
        if min_value_digits > N:
            raise InsufficientPrecision(f"{min_value_digits} digits requested at N = {N}")
        while value_precision(p, level, N) < min_value_digits:
            level += 1
    key = (p, j, N, M, u, level)
    if key in _MEMO:
        hit = _MEMO[key]
        if cache is not None and not cache.path_for(hit).exists():
            cache.store(hit)
        return hit
    if cache is not None:
        hit = cache.lookup(p, j, N, M, u, min_level=level)
        if hit is not None:
            _MEMO[key] = hit
            return hit
    cid, n_cal, f_cal = _calibrate_cached(p, j, N, M, u)
    prev = f_cal if n_cal == level - 1 else stickelberger_series(p, j, level - 1, N, M, cid, u)
    cur = stickelberger_series(p, j, level, N, M, cid, u)
    digits = coefficient_precision(p, level - 1, N, M)
    if digits < 1 or prev.reduce(N=digits) != cur.reduce(N=digits):
        raise CalibrationFailed(f"levels {level - 1} and {level} disagree modulo p^{digits}")
    out = BranchSeries(
        p,
        j,
        cur,
        cid,
        level,
        u,
        value_precision(p, level, N),
        coefficient_precision(p, level, N, M),
        digits,
    )
    if cache is not None:
        cache.store(out)
    _MEMO[key] = out
    return out


@dataclass(frozen=True)
class Invariants:
    lam: int
    mu: int
    certified: bool

    def __iter__(self):
        return iter((self.lam, self.mu))


def branch_invariants(bs: BranchSeries) -> Invariants:
    """``(lambda, mu)``; certified when a unit coefficient occurs below ``T^M``."""
    f = bs.certified_series()
    mu, lam = mu_lambda(f)
    return Invariants(lam, mu, mu == 0)


def locate_zero(bs: BranchSeries) -> Optional[PadicInt]:
    """The zero in ``pZ_p`` of a branch series with ``lambda = 1``, to ``value_precision`` digits.

    Starts from the distinguished factor of the certified coefficients, then
    Newton steps on the full truncation; ``G'`` is a unit at the zero.
    """
    inv = branch_invariants(bs)
    if not inv.certified or inv.lam != 1:
        return None
    W = weierstrass_prepare(bs.certified_series())
    p, N = bs.p, bs.N
    mod = p**N
    alpha = (-W.distinguished.coeffs[0]) % mod
    coeffs = bs.series.coeffs
    deriv = [(i * c) % mod for i, c in enumerate(coeffs)][1:]
    for _ in range(2 * N + 2):
        g = sum(c * pow(alpha, i, mod) for i, c in enumerate(coeffs)) % mod
        if g == 0:
            break
        d = sum(c * pow(alpha, i, mod) for i, c in enumerate(deriv)) % mod
        alpha = (alpha - g * pow(d, -1, mod)) % mod
    return PadicInt(p, bs.value_precision, alpha)


# t_m -------------------------------------------------------------------------


@dataclass(frozen=True)
class TInvariant:
    m: int
    t: Optional[int]
    certified: bool
    branch: Optional[int]
    certificate: dict

    def to_json(self) -> dict:
        return {"m": self.m, "t": self.t, "certified": self.certified, "branch": self.branch, "certificate": self.certificate}


def default_branch(p: int, m: int) -> int:
    """``j(m) = -m mod p-1``, only meaningful for even ``m``."""
    if m % 2:
        raise ConventionUnresolved(f"odd m = {m} needs an explicit branch map")
    return (-m) % (p - 1)


def resolve_branch(p: int, m: int, branch_map: Optional[Mapping[int, int]] = None) -> int:
    if m % (p - 1) == 0:
        raise BranchZero(f"m = {m} is 0 mod {p - 1}")
    if branch_map is not None and m in branch_map:
        j = branch_map[m] % (p - 1)
        _check_even_branch(p, j)
        return j
    return default_branch(p, m)


def t_from_series(bs: BranchSeries, m: int) -> TInvariant:
    """Order of vanishing of the branch series at ``u^{-m} - 1``, with a witness."""
    p = bs.p
    c = PadicInt(p, bs.N, pow(bs.u, -m, p**bs.N) - 1)
    val = bs.value_at(c)
    prec = val.N
    cert = {"point": c.value, "value_digits": prec}
    inv = branch_invariants(bs)
    cert["lambda"], cert["mu"] = inv.lam, inv.mu
    zero = locate_zero(bs) if inv.lam == 1 else None
    if zero is not None:
        cert["zero"] = zero.value
        cert["zero_digits"] = zero.N
        diff = (c.value - zero.value) % p**zero.N
        cert["distance_valuation"] = vp(diff, p) if diff else f">= {zero.N}"
    if val.value:
        cert["value"] = val.value
        cert["value_valuation"] = vp(val.value, p)
        return TInvariant(m, 0, True, bs.j, cert)
    cert["value"] = 0
    cert["note"] = f"value vanishes to {prec} digits; order not certified (at most lambda = {inv.lam})"
    # apparent order on the truncation, as information only
    try:
        apparent = ord_at(bs.series.reduce(N=prec), c.reduce(prec)).order
    except InsufficientPrecision:
        apparent = None
    return TInvariant(m, apparent, False, bs.j, cert)


def t_invariant(
    p: int,
    m: int,
    branch_map: Optional[Mapping[int, int]] = None,
    N: int = 8,
    M: int = 16,
    u: Optional[int] = None,
    cache=None,
    min_value_digits: Optional[int] = None,
) -> TInvariant:
    j = resolve_branch(p, m, branch_map)
    bs = iwasawa_series(p, j, N, M, u, min_value_digits=min_value_digits, cache=cache)
    return t_from_series(bs, m)


def branch_independent_t(p: int, m: int, series: Mapping[int, BranchSeries]) -> Optional[TInvariant]:
    """``t_m = 0`` when every even branch is nonvanishing at ``u^{-m} - 1``, whatever the map."""
    results = {j: t_from_series(bs, m) for j, bs in series.items()}
    if all(r.certified and r.t == 0 for r in results.values()):
        cert = {"branches": {str(j): r.certificate.get("value_valuation") for j, r in sorted(results.items())}}
        cert["note"] = "nonvanishing on every even branch; independent of the branch map"
        return TInvariant(m, 0, True, None, cert)
    return None


def even_branches(p: int) -> list[int]:
    return [j for j in range(2, p - 1, 2)]


__all__ = [
    "bernoulli",
    "lp_value",
    "discrete_log",
    "stickelberger_series",
    "stickelberger_series_reference",
    "calibrate",
    "iwasawa_series",
    "branch_invariants",
    "locate_zero",
    "t_invariant",
    "BranchSeries",
    "TInvariant",
]
