"""Run configuration: JSON in, validated :class:`RunConfig` out."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import ValidationError
from .padic import default_generator, is_odd_prime

DEFAULT_N = 8
DEFAULT_M = 16

KNOWN_KEYS = {
    "p",
    "m_range",
    "precision",
    "u",
    "branch_map",
    "cache_dir",
    "format",
    "fixtures",
    "elementary",
    "min_value_digits",
}


@dataclass(frozen=True)
class RunConfig:
    primes: tuple
    m_range: Optional[tuple] = None  # inclusive; None means 1 .. 2(p-1) for each p
    N: int = DEFAULT_N
    M: int = DEFAULT_M
    u: Optional[int] = None
    branch_map: dict = field(default_factory=dict)
    cache_dir: Optional[str] = None
    format: str = "json"
    fixtures: tuple = ()
    elementary: dict = field(default_factory=dict)
    min_value_digits: Optional[int] = None

    def ms(self, p: int) -> list[int]:
        lo, hi = self.m_range if self.m_range is not None else (1, 2 * (p - 1))
        return list(range(lo, hi + 1))

    def generator(self, p: int) -> int:
        return default_generator(p) if self.u is None else self.u

    def flagged(self, p: int) -> list[int]:
        """The ``m`` in range that are 0 mod p-1."""
        return [m for m in self.ms(p) if m % (p - 1) == 0]


def _int(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"expected an integer, got {value!r}", path)
    if minimum is not None and value < minimum:
        raise ValidationError(f"must be at least {minimum}", path)
    return value


def _prime(value, path):
    _int(value, path)
    if not is_odd_prime(value):
        raise ValidationError(f"{value} is not an odd prime", path)
    return value


def parse_config(data) -> RunConfig:
    """Validate a config given as a JSON string or an already-decoded object."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc.msg}", "config") from exc
    if not isinstance(data, dict):
        raise ValidationError("expected an object", "config")
    unknown = sorted(set(data) - KNOWN_KEYS)
    if unknown:
        raise ValidationError(f"unknown key {unknown[0]!r}", unknown[0])
    if "p" not in data:
        raise ValidationError("missing required key", "p")

    raw_p = data["p"]
    if isinstance(raw_p, list):
        if not raw_p:
            raise ValidationError("empty list of primes", "p")
        primes = tuple(_prime(v, f"p[{i}]") for i, v in enumerate(raw_p))
    else:
        primes = (_prime(raw_p, "p"),)

    m_range = None
    if data.get("m_range") is not None:
        mr = data["m_range"]
        if not isinstance(mr, list) or len(mr) != 2:
            raise ValidationError("expected [m_from, m_to]", "m_range")
        lo, hi = _int(mr[0], "m_range[0]"), _int(mr[1], "m_range[1]")
        if lo > hi:
            raise ValidationError("m_from exceeds m_to", "m_range")
        m_range = (lo, hi)

    N, M = DEFAULT_N, DEFAULT_M
    prec = data.get("precision")
    if prec is not None:
        if isinstance(prec, dict):
            extra = sorted(set(prec) - {"N", "M"})
            if extra:
                raise ValidationError(f"unknown key {extra[0]!r}", f"precision.{extra[0]}")
            N = _int(prec.get("N", N), "precision.N", 2)
            M = _int(prec.get("M", M), "precision.M", 2)
        elif isinstance(prec, list) and len(prec) == 2:
            N, M = _int(prec[0], "precision[0]", 2), _int(prec[1], "precision[1]", 2)
        else:
            raise ValidationError("expected {N, M} or [N, M]", "precision")

    u = data.get("u")
    if u is not None:
        _int(u, "u")
        for p in primes:
            if u % p != 1 or u % (p * p) == 1:
                raise ValidationError(f"{u} does not generate 1 + {p}Z_{p} topologically", "u")

    branch_map = {}
    bm = data.get("branch_map") or {}
    if not isinstance(bm, dict):
        raise ValidationError("expected an object mapping m to a branch", "branch_map")
    for key, j in bm.items():
        try:
            m = int(key)
        except ValueError as exc:
            raise ValidationError("keys must be integers", f"branch_map.{key}") from exc
        _int(j, f"branch_map.{key}")
        if j % 2:
            raise ValidationError("branch must be even", f"branch_map.{key}")
        branch_map[m] = j

    fmt = data.get("format", "json")
    if fmt not in ("json", "text"):
        raise ValidationError("expected 'json' or 'text'", "format")

    cache_dir = data.get("cache_dir")
    if cache_dir is not None and not isinstance(cache_dir, str):
        raise ValidationError("expected a path", "cache_dir")

    fixtures = data.get("fixtures") or []
    if isinstance(fixtures, str):
        fixtures = [fixtures]
    if not isinstance(fixtures, list) or not all(isinstance(f, str) for f in fixtures):
        raise ValidationError("expected a list of paths", "fixtures")

    elementary = data.get("elementary") or {}
    if not isinstance(elementary, dict):
        raise ValidationError("expected an object mapping m to a module", "elementary")
    elem = {}
    for key, val in elementary.items():
        try:
            elem[int(key)] = val
        except ValueError as exc:
            raise ValidationError("keys must be integers", f"elementary.{key}") from exc

    mvd = data.get("min_value_digits")
    if mvd is not None:
        _int(mvd, "min_value_digits", 1)
        if mvd > N:
            raise ValidationError(f"cannot exceed N = {N}", "min_value_digits")

    return RunConfig(primes, m_range, N, M, u, branch_map, cache_dir, fmt, tuple(fixtures), elem, mvd)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def load_branch_map(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc.msg}", "branch_map") from exc
    return parse_config({"p": 3, "branch_map": data}).branch_map
