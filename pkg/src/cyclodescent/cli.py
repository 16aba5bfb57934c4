"""Command-line entry point.

Exit codes: 0 success, 2 invalid input, 3 computation failure, 4 cache failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import __version__
from .cache import SeriesCache
from .config import load_branch_map, load_config, parse_config
from .delta import idempotent
from .descent import load_fixtures, run_fixture
from .errors import CacheError, ComputationError, CycloError, ValidationError
from .lseries import branch_invariants, even_branches, iwasawa_series, t_invariant
from .padic import primitive_root, teichmuller
from .report import render, run_report
from .selftest import run_selftest

EXIT_OK, EXIT_VALIDATION, EXIT_COMPUTATION, EXIT_CACHE = 0, 2, 3, 4


def _precision(text: str):
    try:
        N, M = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected N,M") from exc
    return N, M


def _add_common(sp, need_p=True):
    if need_p:
        sp.add_argument("--p", type=int, required=True, help="odd prime")
    sp.add_argument("--precision", type=_precision, default=None, help="N,M (default 8,16)")
    sp.add_argument("--generator", type=int, default=None, help="u, default 1+p")
    sp.add_argument("--cache-dir", default=None)
    sp.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyclodescent", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("teichmuller", help="Teichmüller lifts of 1..p-1")
    _add_common(sp)

    sp = sub.add_parser("idempotents", help="branch idempotents e_j in (Z/p^N)[Delta]")
    _add_common(sp)

    sp = sub.add_parser("series", help="calibrated branch series G_j")
    _add_common(sp)
    sp.add_argument("--j", type=int, required=True)

    sp = sub.add_parser("invariants", help="lambda and mu on every even branch")
    _add_common(sp)

    sp = sub.add_parser("tmap", help="t_m over a range of m")
    _add_common(sp)
    sp.add_argument("--m-from", type=int, default=1)
    sp.add_argument("--m-to", type=int, default=None)
    sp.add_argument("--branch-map", default=None, help="JSON file mapping m to an even branch")

    sp = sub.add_parser("cohomology", help="graded pieces for fixture modules")
    sp.add_argument("--fixtures", required=True, help="JSON-lines fixture file")
    sp.add_argument("--format", choices=("json", "text"), default="json")

    sp = sub.add_parser("report", help="corank table for H^1 and H^2")
    sp.add_argument("--config", default=None, help="JSON config file")
    sp.add_argument("--p", type=int, action="append", default=None)
    sp.add_argument("--m-from", type=int, default=None)
    sp.add_argument("--m-to", type=int, default=None)
    sp.add_argument("--precision", type=_precision, default=None)
    sp.add_argument("--generator", type=int, default=None)
    sp.add_argument("--cache-dir", default=None)
    sp.add_argument("--format", choices=("json", "text"), default=None)
    sp.add_argument("--branch-map", default=None)
    sp.add_argument("--fixtures", default=None)

    sp = sub.add_parser("selftest", help="run the oracle suites")
    sp.add_argument("--format", choices=("json", "text"), default="json")
    return ap


def _config_from_args(args, p=None):
    data = {"p": p if p is not None else args.p}
    if getattr(args, "precision", None):
        data["precision"] = list(args.precision)
    if getattr(args, "generator", None) is not None:
        data["u"] = args.generator
    if getattr(args, "cache_dir", None):
        data["cache_dir"] = args.cache_dir
    return parse_config(data)


def _emit(obj, fmt, text_fn=None):
    if fmt == "text" and text_fn is not None:
        print(text_fn(obj))
    else:
        print(json.dumps(obj, sort_keys=True, indent=2))


def _kv_text(obj):
    return "\n".join(f"{k}: {v}" for k, v in obj.items())


def cmd_teichmuller(args):
    cfg = _config_from_args(args)
    p = cfg.primes[0]
    out = {str(a): teichmuller(a, p, cfg.N).value for a in range(1, p)}
    _emit({"p": p, "N": cfg.N, "omega": out}, args.format, lambda o: _kv_text(o["omega"]))


def cmd_idempotents(args):
    cfg = _config_from_args(args)
    p = cfg.primes[0]
    out = {str(j): list(idempotent(j, p, cfg.N).coeffs) for j in range(p - 1)}
    _emit({"p": p, "N": cfg.N, "delta0": primitive_root(p), "idempotents": out}, args.format, lambda o: _kv_text(o["idempotents"]))


def _cache(cfg):
    return SeriesCache(cfg.cache_dir) if cfg.cache_dir else None


def cmd_series(args):
    cfg = _config_from_args(args)
    p = cfg.primes[0]
    bs = iwasawa_series(p, args.j, cfg.N, cfg.M, cfg.generator(p), cache=_cache(cfg))
    inv = branch_invariants(bs)
    out = {
        "p": p,
        "j": bs.j,
        "u": bs.u,
        "convention_id": bs.convention_id,
        "level_used": bs.level_used,
        "value_digits": bs.value_precision,
        "coefficient_digits": bs.coefficient_precision,
        "lambda": inv.lam,
        "mu": inv.mu,
        "mu_certified": inv.certified,
        "coeffs": [str(c) for c in bs.series.coeffs],
    }
    _emit(out, args.format, _kv_text)


def cmd_invariants(args):
    cfg = _config_from_args(args)
    p = cfg.primes[0]
    cache = _cache(cfg)
    rows = {}
    for j in even_branches(p):
        bs = iwasawa_series(p, j, cfg.N, cfg.M, cfg.generator(p), cache=cache)
        inv = branch_invariants(bs)
        rows[str(j)] = {"lambda": inv.lam, "mu": inv.mu, "certified": inv.certified}
    _emit({"p": p, "branches": rows}, args.format, lambda o: _kv_text(o["branches"]))


def cmd_tmap(args):
    cfg = _config_from_args(args)
    p = cfg.primes[0]
    bmap = load_branch_map(args.branch_map) if args.branch_map else None
    hi = args.m_to if args.m_to is not None else 2 * (p - 1)
    rows = {}
    cache = _cache(cfg)
    for m in range(args.m_from, hi + 1):
        if m % (p - 1) == 0:
            rows[str(m)] = {"flag": "outside hypotheses: m = 0 mod p-1"}
            continue
        try:
            rows[str(m)] = t_invariant(p, m, bmap, cfg.N, cfg.M, cfg.generator(p), cache=cache).to_json()
        except ComputationError as exc:
            rows[str(m)] = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    _emit({"p": p, "t": rows}, args.format, lambda o: _kv_text(o["t"]))


def cmd_cohomology(args):
    results = [run_fixture(fx) for fx in load_fixtures(args.fixtures)]
    _emit({"results": results}, args.format, lambda o: "\n".join(f"{r['name']}: {r['pieces']} ok={r['ok']}" for r in o["results"]))
    if any(r["ok"] is False for r in results):
        return EXIT_COMPUTATION
    return EXIT_OK


def cmd_report(args):
    if args.config:
        cfg = load_config(args.config)
    else:
        if not args.p:
            raise ValidationError("give --p or --config", "p")
        cfg = parse_config({"p": args.p if len(args.p) > 1 else args.p[0]})
    changes = {}
    if args.p and args.config:
        changes["primes"] = parse_config({"p": args.p}).primes
    if args.m_from is not None or args.m_to is not None:
        lo = args.m_from if args.m_from is not None else 1
        hi = args.m_to if args.m_to is not None else 2 * (max(cfg.primes) - 1)
        changes["m_range"] = parse_config({"p": 3, "m_range": [lo, hi]}).m_range
    if args.precision:
        checked = parse_config({"p": 3, "precision": list(args.precision)})
        changes["N"], changes["M"] = checked.N, checked.M
    if args.generator is not None:
        changes["u"] = parse_config({"p": list(cfg.primes), "u": args.generator}).u
    if args.cache_dir:
        changes["cache_dir"] = args.cache_dir
    if args.format:
        changes["format"] = args.format
    if args.branch_map:
        changes["branch_map"] = load_branch_map(args.branch_map)
    if args.fixtures:
        changes["fixtures"] = (args.fixtures,)
    cfg = replace(cfg, **changes)
    report = run_report(cfg)
    if cfg.fixtures:
        report["fixtures"] = [run_fixture(fx) for path in cfg.fixtures for fx in load_fixtures(path)]
    print(render(report, cfg.format))


def cmd_selftest(args):
    results = run_selftest()
    _emit({"selftest": results}, args.format, lambda o: _kv_text(o["selftest"]))
    return EXIT_OK if all(results.values()) else EXIT_COMPUTATION


COMMANDS = {
    "teichmuller": cmd_teichmuller,
    "idempotents": cmd_idempotents,
    "series": cmd_series,
    "invariants": cmd_invariants,
    "tmap": cmd_tmap,
    "cohomology": cmd_cohomology,
    "report": cmd_report,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CacheError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return EXIT_CACHE
    except (ComputationError, CycloError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
