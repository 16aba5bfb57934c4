"""On-disk cache of calibrated branch series.

One JSON file per ``(p, j, N, M, u, convention_id)``.  The payload carries a
sha256 checksum over its canonical encoding; files are written to a temporary
name and renamed into place so readers never see a partial entry.
"""

from __future__ import annotations

import glob
import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional

from .errors import CorruptCache, VersionMismatch
from .lseries import BranchSeries
from .series import VARIABLE_CONVENTION, PowerSeries

FORMAT_VERSION = 2


def _canonical(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()


def series_to_payload(bs: BranchSeries) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "p": bs.p,
        "j": bs.j,
        "N": bs.N,
        "M": bs.M,
        "u": bs.u,
        "variable": VARIABLE_CONVENTION,
        "convention_id": bs.convention_id,
        "level_used": bs.level_used,
        "value_precision": bs.value_precision,
        "coefficient_precision": bs.coefficient_precision,
        "stabilization_digits": bs.stabilization_digits,
        "coeffs": [str(c) for c in bs.series.coeffs],
    }


def payload_to_series(payload: dict) -> BranchSeries:
    try:
        p, N, M = payload["p"], payload["N"], payload["M"]
        coeffs = [int(c) for c in payload["coeffs"]]
        if len(coeffs) != M:
            raise CorruptCache(f"expected {M} coefficients, found {len(coeffs)}")
        return BranchSeries(
            p,
            payload["j"],
            PowerSeries(p, N, M, tuple(coeffs)),
            payload["convention_id"],
            payload["level_used"],
            payload["u"],
            payload["value_precision"],
            payload["coefficient_precision"],
            payload["stabilization_digits"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptCache(f"malformed cache payload: {exc}") from exc


def dumps(bs: BranchSeries) -> str:
    payload = series_to_payload(bs)
    doc = {"payload": payload, "sha256": hashlib.sha256(_canonical(payload)).hexdigest()}
    return json.dumps(doc, sort_keys=True, indent=1)


def loads(text: str) -> BranchSeries:
    try:
        doc = json.loads(text)
        payload, digest = doc["payload"], doc["sha256"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CorruptCache(f"unreadable cache file: {exc}") from exc
    if hashlib.sha256(_canonical(payload)).hexdigest() != digest:
        raise CorruptCache("checksum mismatch")
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatch(
            f"cache format {version}, expected {FORMAT_VERSION}; "
            "delete the entry or rerun with an empty --cache-dir to regenerate it"
        )
    return payload_to_series(payload)


class SeriesCache:
    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def filename(p, j, N, M, u, convention_id) -> str:
        safe = "".join(ch if ch.isalnum() or ch in "-+" else "_" for ch in convention_id)
        return f"p{p}_j{j}_N{N}_M{M}_u{u}_{safe}.json"

    def path_for(self, bs: BranchSeries) -> Path:
        return self.dir / self.filename(bs.p, bs.j, bs.N, bs.M, bs.u, bs.convention_id)

    def store(self, bs: BranchSeries) -> Path:
        target = self.path_for(bs)
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(dumps(bs))
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target

    def load(self, path) -> BranchSeries:
        return loads(Path(path).read_text(encoding="utf-8"))

    def lookup(self, p, j, N, M, u, min_level: int = 0) -> Optional[BranchSeries]:
        """Best cached entry for the key at level ``>= min_level``, any convention id."""
        pattern = str(self.dir / f"p{p}_j{j}_N{N}_M{M}_u{u}_*.json")
        best = None
        for path in sorted(glob.glob(pattern)):
            bs = self.load(path)
            if bs.level_used >= min_level and (best is None or bs.level_used > best.level_used):
                best = bs
        return best


def cache_roundtrip(bs: BranchSeries, directory) -> BranchSeries:
    cache = SeriesCache(directory)
    return cache.load(cache.store(bs))
