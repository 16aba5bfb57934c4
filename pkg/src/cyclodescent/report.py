"""Corank tables for ``H^1`` and ``H^2`` of ``Q_p/Z_p(m)`` over the cyclotomic tower."""

from __future__ import annotations

import json
from typing import Optional

from .cache import SeriesCache
from .config import RunConfig
from .elementary import ElementaryModule, h_structures, rank_formula
from .errors import ConventionUnresolved, CycloError
from .lseries import (
    branch_independent_t,
    branch_invariants,
    even_branches,
    iwasawa_series,
    resolve_branch,
    t_from_series,
)
from .padic import primitive_root
from .series import VARIABLE_CONVENTION

SCHEMA_VERSION = 1
BRANCH_ZERO_FLAG = "outside hypotheses: m = 0 mod p-1"


def _error_record(exc: CycloError) -> dict:
    return {"type": type(exc).__name__, "message": str(exc)}


class _SeriesSource:
    def __init__(self, config: RunConfig, p: int):
        self.config = config
        self.p = p
        self.cache = SeriesCache(config.cache_dir) if config.cache_dir else None
        self.used = {}

    def get(self, j: int):
        if j not in self.used:
            c = self.config
            self.used[j] = iwasawa_series(
                self.p, j, c.N, c.M, c.generator(self.p), min_value_digits=c.min_value_digits, cache=self.cache
            )
        return self.used[j]


def _t_for(p: int, m: int, config: RunConfig, source: _SeriesSource):
    try:
        j = resolve_branch(p, m, config.branch_map)
    except ConventionUnresolved:
        # odd m without a map: settle t_m = 0 if no even branch can vanish there
        series = {j: source.get(j) for j in even_branches(p)}
        res = branch_independent_t(p, m, series)
        if res is None:
            raise ConventionUnresolved(
                f"odd m = {m}: some even branch vanishes at u^-m-1; supply a branch map"
            ) from None
        return res, "branch-independent"
    mode = "explicit" if m in config.branch_map else "default-even"
    return t_from_series(source.get(j), m), mode


def _entry(p: int, m: int, config: RunConfig, source: _SeriesSource) -> dict:
    entry = {"m": m}
    if m % (p - 1) == 0:
        entry["flag"] = BRANCH_ZERO_FLAG
        return entry
    try:
        r = rank_formula(m, p)
        t, mode = _t_for(p, m, config, source)
    except CycloError as exc:
        entry["error"] = _error_record(exc)
        return entry
    entry["r_m"] = r
    entry["t_m"] = t.t
    entry["t_certified"] = t.certified
    entry["t_branch"] = t.branch
    entry["t_branch_mode"] = mode
    entry["t_certificate"] = t.certificate
    if t.certified:
        entry["corank_h1"] = r + t.t
        entry["corank_h2"] = t.t
        entry["corank_status"] = "certified up to working precision"
    else:
        entry["corank_h1"] = None
        entry["corank_h2"] = None
        entry["corank_status"] = "t_m not certified at working precision"
    if m in config.elementary:
        try:
            E = ElementaryModule.from_json(config.elementary[m], p, config.N, f"elementary.{m}")
            entry["elementary"] = h_structures(E, m, config.generator(p)).to_json()
        except CycloError as exc:
            entry["elementary"] = {"error": _error_record(exc)}
    return entry


def report_for_prime(p: int, config: RunConfig) -> dict:
    source = _SeriesSource(config, p)
    entries = [_entry(p, m, config, source) for m in config.ms(p)]
    ranks = sum(rank_formula(m, p) for m in range(1, p - 1))
    branches = {}
    for j, bs in sorted(source.used.items()):
        inv = branch_invariants(bs)
        branches[str(j)] = {
            "lambda": inv.lam,
            "mu": inv.mu,
            "mu_certified": inv.certified,
            "level_used": bs.level_used,
            "value_digits": bs.value_precision,
            "coefficient_digits": bs.coefficient_precision,
            "stabilization_digits": bs.stabilization_digits,
        }
    conventions = sorted({bs.convention_id for bs in source.used.values()})
    return {
        "p": p,
        "ledger": {
            "u": config.generator(p),
            "delta0": primitive_root(p),
            "variable": VARIABLE_CONVENTION,
            "branch_map": {str(k): v for k, v in sorted(config.branch_map.items())},
            "branch_map_default": "j(m) = -m mod p-1 for even m",
            "convention_id": conventions[0] if len(conventions) == 1 else conventions,
            "precision": {"N": config.N, "M": config.M},
        },
        "branches": branches,
        "entries": entries,
        "cross_check": {"sum_r_m": ranks, "expected": (p - 1) // 2, "ok": ranks == (p - 1) // 2},
    }


def run_report(config: RunConfig) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "reports": [report_for_prime(p, config) for p in config.primes],
    }


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def _cell(value) -> str:
    return "-" if value is None else str(value)


def _structure_text(st: dict) -> str:
    parts = [f"Z_p^{st['free_rank']}"] if st["free_rank"] else []
    parts += [f"Z/p^{a}" for a in st["torsion_orders"]]
    return f"{' + '.join(parts) or '0'} ({st['provenance']})"


def render_text(report: dict) -> str:
    lines = []
    for rep in report["reports"]:
        led = rep["ledger"]
        lines.append(
            f"p = {rep['p']}   u = {led['u']}   delta0 = {led['delta0']}   "
            f"N = {led['precision']['N']}   M = {led['precision']['M']}   convention = {led['convention_id']}"
        )
        header = ("m", "r_m", "t_m", "cert", "corank H^1", "corank H^2", "note")
        rows = []
        for e in rep["entries"]:
            if "flag" in e:
                rows.append((e["m"], "-", "-", "-", "-", "-", e["flag"]))
            elif "error" in e:
                rows.append((e["m"], "-", "-", "-", "-", "-", f"{e['error']['type']}: {e['error']['message']}"))
            else:
                rows.append(
                    (
                        e["m"],
                        e["r_m"],
                        _cell(e["t_m"]),
                        "yes" if e["t_certified"] else "no",
                        _cell(e["corank_h1"]),
                        _cell(e["corank_h2"]),
                        e["t_branch_mode"],
                    )
                )
        table = [tuple(map(str, header))] + [tuple(map(str, r)) for r in rows]
        widths = [max(len(r[i]) for r in table) for i in range(len(header))]
        for r in table:
            lines.append("  ".join(c.rjust(w) if i < 6 else c for i, (c, w) in enumerate(zip(r, widths))).rstrip())
        cc = rep["cross_check"]
        lines.append(f"sum of r_m over one period = {cc['sum_r_m']} (expected {cc['expected']})")
        for e in rep["entries"]:
            el = e.get("elementary")
            if el is None:
                continue
            if "error" in el:
                lines.append(f"elementary m = {e['m']}: {el['error']['type']}: {el['error']['message']}")
            else:
                lines.append(f"elementary m = {e['m']}: H^1 = {_structure_text(el['h1'])}, H^2 = {_structure_text(el['h2'])}")
        lines.append("")
    for fx in report.get("fixtures", []):
        lines.append(f"fixture {fx['name']}: {fx['pieces']} ok={fx['ok']}")
    return "\n".join(lines)


def render(report: dict, fmt: Optional[str] = "json") -> str:
    return render_text(report) if fmt == "text" else render_json(report)
