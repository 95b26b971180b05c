"""Command-line front end.

Subcommands: locus, hecke, spectrum, equidist, power, satake, splitting,
stirling, modpoly-check.  Every run emits a self-describing report
document (JSON, or CSV rows for tabular payloads) with all numeric
payloads as decimal strings.  Exit codes: 0 success, 1 an internal
assertion failed, 2 usage/input error, 3 missing data file.

Flags may also be supplied through an INI config file (section per
command plus [common]); explicit flags win.  Output bytes are
deterministic for a fixed (config, seed, tool version) when
SOURCE_DATE_EPOCH is set.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, equidist, satake, supersingular
from .equidist import StratumFunction
from .ffpoly import is_prime
from .number_field import (
    NumberFieldSpec,
    RamifiedPrimeError,
    factor_squarefree,
    splitting_data,
)
from .supersingular import (
    DEFAULT_LEVELS,
    MassFormulaError,
    MissingDataError,
    ModularPolynomialError,
    enumerate_locus,
    hecke_squarefree,
    load_cache,
    load_library,
    load_modular_polynomial,
    save_cache,
)

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_USAGE = 2
EXIT_MISSING_DATA = 3

DEFAULT_SEED = 20260810


class UsageError(ValueError):
    pass


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}, expected A..B") from exc


def _field_from(text: str | None) -> NumberFieldSpec:
    if text is None:
        return NumberFieldSpec.rationals()
    try:
        return NumberFieldSpec.from_list(_parse_int_list(text))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def _document(command: str, config: dict, payload, passed: bool) -> dict:
    return {
        "schema": f"heckedist/{command}",
        "schemaVersion": 1,
        "tool": f"heckedist {__version__}",
        "timestamp": _timestamp(),
        "config": {k: str(v) for k, v in sorted(config.items()) if v is not None},
        "passed": passed,
        "payload": payload,
    }


def _locus_payload(locus) -> dict:
    return {
        "p": str(locus.p),
        "basisNs": str(locus.field.ns),
        "size": str(locus.size),
        "points": [[str(a), str(b)] for a, b in locus.points],
        "weights": [str(w) for w in locus.weights],
        "masses": [f"{m.numerator}/{m.denominator}" for m in locus.masses],
        "massOk": True,
    }


def _locus_summary(p: int) -> dict:
    locus = enumerate_locus(p)
    counts = {}
    for w in locus.weights:
        counts[str(w)] = counts.get(str(w), 0) + 1
    return {
        "p": str(p),
        "size": str(locus.size),
        "weightCounts": {k: str(v) for k, v in sorted(counts.items())},
        "massOk": True,
    }


def _locus_and_matrices(p, levels, data_dir, cache_dir):
    """Build (or load from cache) the locus and the prime-level matrices."""
    library = load_library(levels=tuple(sorted(set(levels))), data_dir=data_dir)
    cache_path = Path(cache_dir) / f"locus_p{p}.json" if cache_dir else None
    locus, mats = None, {}
    if cache_path is not None and cache_path.exists():
        locus, mats = load_cache(cache_path)
        if locus.p != p:
            raise UsageError(f"cache {cache_path} is for p={locus.p}")
    if locus is None:
        locus = enumerate_locus(p)
    missing = [ell for ell in levels if ell not in mats]
    mats = equidist.prime_matrices(locus, list(levels), library, mats)
    if cache_path is not None and (missing or not cache_path.exists()):
        cache_path.parent.mkdir(parents=True, exist_ok=True)
        save_cache(cache_path, locus, mats)
    return locus, mats, library


def _initial_vectors(locus, which: str, seed: int):
    rng = np.random.default_rng(seed)
    out = []
    if which in ("random", "both"):
        out.append(("random-unit", StratumFunction.random_unit(locus, rng)))
    if which in ("indicator", "both"):
        out.append(("indicator-0", StratumFunction.indicator(locus, 0)))
    if not out:
        raise UsageError(f"unknown initial vector kind {which!r}")
    return out


# ----------------------------------------------------------------- commands


def cmd_locus(args) -> tuple[dict, list[dict], bool]:
    if (args.p is None) == (args.range is None):
        raise UsageError("give exactly one of --p or --range")
    if args.p is not None:
        p = args.p
        if p < 5 or not is_prime(p):
            raise UsageError(f"p = {p} must be a prime >= 5")
        payload = _locus_payload(enumerate_locus(p))
        rows = [{"p": payload["p"], "size": payload["size"], "massOk": "true"}]
        return payload, rows, True
    lo, hi = _parse_range(args.range)
    primes = [p for p in range(max(lo, 5), hi + 1) if is_prime(p)]
    if not primes:
        raise UsageError(f"no primes >= 5 in {args.range}")
    jobs = args.jobs or os.cpu_count() or 1
    if jobs > 1 and len(primes) > 4:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            summaries = list(pool.map(_locus_summary, primes))
    else:
        summaries = [_locus_summary(p) for p in primes]
    rows = [
        {
            "p": s["p"],
            "size": s["size"],
            "weightCounts": ";".join(f"{k}:{v}" for k, v in s["weightCounts"].items()),
            "massOk": "true",
        }
        for s in summaries
    ]
    return {"perPrime": summaries}, rows, True


def cmd_hecke(args) -> tuple[dict, list[dict], bool]:
    if args.p is None or args.m is None:
        raise UsageError("hecke requires --p and --m")
    if not is_prime(args.p) or args.p < 5:
        raise UsageError(f"p = {args.p} must be a prime >= 5")
    if args.m % args.p == 0:
        raise UsageError(f"gcd(m, p) != 1 for m={args.m}, p={args.p}")
    try:
        primes = factor_squarefree(args.m)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    locus, mats, library = _locus_and_matrices(args.p, primes or [], args.data_dir, args.cache_dir)
    t_m = hecke_squarefree(locus, args.m, library, prime_matrices=mats)
    payload = {
        "p": str(args.p),
        "m": str(args.m),
        "degree": str(t_m.degree),
        "levels": [str(ell) for ell in t_m.levels],
        "matrix": [[str(int(x)) for x in row] for row in t_m.entries],
    }
    rows = [
        {"i": str(i), **{f"c{k}": str(int(x)) for k, x in enumerate(row)}}
        for i, row in enumerate(t_m.entries)
    ]
    return payload, rows, True


def cmd_spectrum(args) -> tuple[dict, list[dict], bool]:
    if args.p is None or args.ell is None:
        raise UsageError("spectrum requires --p and --ell")
    locus, mats, _ = _locus_and_matrices(args.p, [args.ell], args.data_dir, args.cache_dir)
    rep = equidist.spectrum(locus, mats[args.ell])
    payload = rep.to_payload()
    passed = rep.max_nontrivial is None or rep.max_nontrivial <= rep.bound + 1e-9
    rows = [{"ell": str(rep.ell), "k": str(k), "eigenvalue": repr(x)}
            for k, x in enumerate(rep.eigenvalues)]
    return payload, rows, passed


def _convergence_rows(rep) -> list[dict]:
    return [r.to_payload() for r in rep.rows]


def cmd_equidist(args) -> tuple[dict, list[dict], bool]:
    if args.p is None:
        raise UsageError("equidist requires --p")
    primes = args.primes or list(DEFAULT_LEVELS)
    if args.p in primes:
        raise UsageError("p must not be one of the Hecke primes")
    locus, mats, library = _locus_and_matrices(args.p, primes, args.data_dir, args.cache_dir)
    reports = []
    for name, vec in _initial_vectors(locus, args.initial, args.seed):
        rep = equidist.run_squarefree_experiment(
            locus, primes, vec, library, initial=name, matrices=mats
        )
        reports.append(rep)
    passed = all(r.inequality_ok for r in reports)
    payload = {"experiments": [r.to_payload() for r in reports]}
    rows = []
    for rep in reports:
        for r in rep.rows:
            rows.append({"initial": rep.initial, **r.to_payload()})
    return payload, rows, passed


def cmd_power(args) -> tuple[dict, list[dict], bool]:
    if args.p is None or args.ell is None:
        raise UsageError("power requires --p and --ell")
    locus, mats, library = _locus_and_matrices(args.p, [args.ell], args.data_dir, args.cache_dir)
    which = "random" if args.initial == "both" else args.initial
    ((name, vec),) = _initial_vectors(locus, which, args.seed)
    rep = equidist.run_power_experiment(
        locus, args.ell, vec, args.count, library, initial=name, matrices=mats
    )
    return rep.to_payload(), _convergence_rows(rep), rep.inequality_ok


def cmd_satake(args) -> tuple[dict, list[dict], bool]:
    if args.n is None or args.r is None or args.m is None:
        raise UsageError("satake requires --n, --r and --m")
    fld = _field_from(args.field)
    rows = []
    all_ok = True
    for m in args.m:
        try:
            spec = satake.GlobalOperatorSpec(args.n, args.r, m, fld)
            rb = satake.ratio_and_bound(spec)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        rows.append(
            {
                "n": str(args.n),
                "r": str(args.r),
                "m": str(m),
                "fieldPolynomial": ",".join(str(c) for c in fld.coeffs),
                "degree": str(rb.degree),
                "normSquared": str(rb.norm.squared()),
                "ratioSquared": f"{rb.ratio_squared.numerator}/{rb.ratio_squared.denominator}",
                "boundSquared": f"{rb.bound_squared.numerator}/{rb.bound_squared.denominator}",
                "satisfied": rb.satisfied,
            }
        )
        all_ok = all_ok and rb.satisfied
    return {"rows": rows}, rows, all_ok


def cmd_splitting(args) -> tuple[dict, list[dict], bool]:
    if args.m is None:
        raise UsageError("splitting requires --m")
    fld = _field_from(args.field)
    rows = []
    for m in args.m:
        try:
            for ell in factor_squarefree(m):
                data = splitting_data(fld, ell)
                rows.append(
                    {
                        "m": str(m),
                        "ell": str(ell),
                        "residueDegrees": ",".join(str(f) for f in data.residue_degrees),
                        "residueCardinalities": ",".join(
                            str(q) for q in data.residue_cardinalities
                        ),
                        "places": str(data.c),
                    }
                )
        except (ValueError, RamifiedPrimeError) as exc:
            raise UsageError(str(exc)) from exc
    return {"rows": rows}, rows, True


def cmd_stirling(args) -> tuple[dict, list[dict], bool]:
    if args.n is None or args.r is None or args.eps is None:
        raise UsageError("stirling requires --n, --r and --eps")
    try:
        eps = Fraction(args.eps)
        threshold = satake.stirling_threshold(args.n, args.r, eps)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc
    payload = {"n": str(args.n), "r": str(args.r), "eps": str(eps), "threshold": str(threshold)}
    return payload, [payload], True


def cmd_modpoly_check(args) -> tuple[dict, list[dict], bool]:
    levels = args.levels or list(DEFAULT_LEVELS)
    base = Path(args.data_dir) if args.data_dir else supersingular.packaged_data_dir()
    rows = []
    ok = True
    for ell in levels:
        path = base / f"modpoly_ell{ell}.txt"
        if not path.exists():
            raise MissingDataError(f"no modular polynomial data for level {ell} ({path})")
        try:
            phi = load_modular_polynomial(path)
            status = "ok" if phi.level == ell else f"level mismatch ({phi.level})"
        except ModularPolynomialError as exc:
            status = str(exc)
        if status != "ok":
            ok = False
        rows.append({"ell": str(ell), "file": str(path), "status": status})
    return {"rows": rows}, rows, ok


# ------------------------------------------------------------------- driver


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heckedist",
        description="Supersingular Hecke equidistribution experiments and exact Satake bounds",
    )
    parser.add_argument("--version", action="version", version=f"heckedist {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the report to this path instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default=None)
        sp.add_argument("--data-dir", dest="data_dir", help="modular polynomial data directory")
        sp.add_argument("--cache-dir", dest="cache_dir", help="locus/matrix cache directory")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--jobs", type=int, default=None)
        sp.add_argument("--config", help="INI config file; flags override it")

    sp = sub.add_parser("locus", help="enumerate the supersingular locus")
    sp.add_argument("--p", type=int)
    sp.add_argument("--range", help="prime range A..B")
    common(sp)

    sp = sub.add_parser("hecke", help="Hecke matrix T_m")
    sp.add_argument("--p", type=int)
    sp.add_argument("--m", type=int)
    common(sp)

    sp = sub.add_parser("spectrum", help="eigenvalues of the symmetrized T_ell")
    sp.add_argument("--p", type=int)
    sp.add_argument("--ell", type=int)
    common(sp)

    sp = sub.add_parser("equidist", help="squarefree-modulus convergence experiment")
    sp.add_argument("--p", type=int)
    sp.add_argument("--primes", type=_parse_int_list)
    sp.add_argument("--initial", choices=("random", "indicator", "both"), default="both")
    common(sp)

    sp = sub.add_parser("power", help="power-sequence contraction experiment")
    sp.add_argument("--p", type=int)
    sp.add_argument("--ell", type=int)
    sp.add_argument("--count", type=int, default=400)
    sp.add_argument("--initial", choices=("random", "indicator"), default="random")
    common(sp)

    sp = sub.add_parser("satake", help="exact degree/norm/bound table")
    sp.add_argument("--n", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--m", type=_parse_int_list)
    sp.add_argument("--field", help="field polynomial, constant term first (default: rationals)")
    common(sp)

    sp = sub.add_parser("splitting", help="residue degrees of primes dividing m")
    sp.add_argument("--m", type=_parse_int_list)
    sp.add_argument("--field", help="field polynomial, constant term first (default: rationals)")
    common(sp)

    sp = sub.add_parser("stirling", help="threshold M for C(n,r)^omega(m) <= m^eps")
    sp.add_argument("--n", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--eps")
    common(sp)

    sp = sub.add_parser("modpoly-check", help="validate modular polynomial data files")
    sp.add_argument("--levels", type=_parse_int_list)
    common(sp)

    return parser


_CONFIG_CONVERTERS = {
    "p": int, "ell": int, "m": _parse_int_list, "n": int, "r": int,
    "count": int, "seed": int, "jobs": int, "primes": _parse_int_list,
    "levels": _parse_int_list, "range": str, "field": str, "eps": str,
    "initial": str, "out": str, "format": str, "data_dir": str, "cache_dir": str,
}


def _apply_config(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    cp = configparser.ConfigParser()
    read = cp.read(args.config)
    if not read:
        raise MissingDataError(f"config file {args.config} not found")
    for section in ("common", args.command):
        if not cp.has_section(section):
            continue
        for key, raw in cp.items(section):
            attr = key.replace("-", "_")
            if attr not in _CONFIG_CONVERTERS:
                raise UsageError(f"unknown config key {key!r} in [{section}]")
            if getattr(args, attr, None) is None:
                setattr(args, attr, _CONFIG_CONVERTERS[attr](raw))


_COMMANDS = {
    "locus": cmd_locus,
    "hecke": cmd_hecke,
    "spectrum": cmd_spectrum,
    "equidist": cmd_equidist,
    "power": cmd_power,
    "satake": cmd_satake,
    "splitting": cmd_splitting,
    "stirling": cmd_stirling,
    "modpoly-check": cmd_modpoly_check,
}


def _emit(args, doc: dict, rows: list[dict]) -> None:
    fmt = args.format or "json"
    if fmt == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _merge_dash_values(argv: list[str]) -> list[str]:
    """Join `--field -5,0,1` into `--field=-5,0,1` so argparse does not
    mistake a leading negative coefficient for an option."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--field":
            val = next(it, None)
            if val is None:
                out.append(tok)
            else:
                out.append(f"--field={val}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    argv = _merge_dash_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:  # raised by argument type converters
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _apply_config(args)
        if getattr(args, "seed", None) is None:
            args.seed = DEFAULT_SEED
        payload, rows, passed = _COMMANDS[args.command](args)
    except MissingDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING_DATA
    except (MassFormulaError, ModularPolynomialError, ArithmeticError) as exc:
        print(f"assertion failure: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    config_echo = {
        k: v for k, v in vars(args).items() if k not in ("command",) and v is not None
    }
    doc = _document(args.command, config_echo, payload, passed)
    _emit(args, doc, rows)
    return EXIT_OK if passed else EXIT_ASSERTION


if __name__ == "__main__":
    sys.exit(main())
