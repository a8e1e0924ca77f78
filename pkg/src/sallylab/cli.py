"""Command-line front end.

    sallylab compute  (--catalog ID [--param k=v ...] | FILE)
    sallylab check    (--catalog ID | FILE) --checks C1,C3|all
    sallylab sweep    --catalog ID --param q=1..4 --out rows.csv
    sallylab catalog

Exit codes: 0 success, 2 input error, 3 computation failure, 4 check failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from filelock import FileLock

from .config import DEFAULT_CONFIG, Config
from .constructions import (HYPOTHESIS_FLAGS, Instance, catalog, catalog_ids, catalog_params,
                            fitting_ideal_I1)
from .groebner import ideal_equal
from .invariants import COMPUTE_ERRORS, NOT_FOUND, InstanceInvariants
from .localring import RingSpec
from .poly import PolyError
from .verify import CHECKS, CheckContext, check as run_checks, parse_check_list

FORMAT_VERSION = 1
EXIT_OK, EXIT_INPUT, EXIT_COMPUTE, EXIT_CHECK = 0, 2, 3, 4


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# instance files
# ---------------------------------------------------------------------------

_SECTIONS = {
    "instance": {"format_version", "name"},
    "ring": {"variables", "characteristic", "relations", "dimension"},
    "ideal": {"I", "Q"},
    "hypotheses": set(HYPOTHESIS_FLAGS),
    "config": {"seed", "trunc_cap", "red_cap", "n_max", "n_max_extended", "retries", "samples"},
}
_TRUE = {"true", "yes", "1", "on"}
_FALSE = {"false", "no", "0", "off"}


def _split_list(text: str) -> List[str]:
    return [p.strip() for chunk in text.splitlines() for p in chunk.split(",") if p.strip()]


def _int(value: str, what: str) -> int:
    try:
        return int(value.strip())
    except ValueError:
        raise InputError(f"{what} must be an integer, got {value!r}") from None


def load_instance_file(path, characteristic: Optional[int] = None) -> Tuple[Instance, Dict[str, int]]:
    """Parse an instance file; returns the instance and its [config] overrides.

    Unknown sections or keys are rejected.  ``characteristic`` (from the
    command line) takes precedence over the file.
    """
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__")
    parser.optionxform = str  # keys are case sensitive (I, Q, I_equals_IS)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except configparser.Error as exc:
        raise InputError(f"{path}: {exc}") from None
    for section in parser.sections():
        if section not in _SECTIONS:
            raise InputError(f"unknown section [{section}]")
        unknown = set(parser[section]) - _SECTIONS[section]
        if unknown:
            raise InputError(f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")
    if not parser.has_option("instance", "format_version"):
        raise InputError("missing format_version in [instance]")
    version = _int(parser["instance"]["format_version"], "format_version")
    if version != FORMAT_VERSION:
        raise InputError(f"unsupported format_version {version}")
    if not parser.has_option("ring", "variables"):
        raise InputError("missing variables in [ring]")
    if not parser.has_option("ideal", "I"):
        raise InputError("missing I in [ideal]")
    ring = parser["ring"]
    variables = _split_list(ring["variables"])
    char = characteristic
    if char is None:
        char = _int(ring["characteristic"], "characteristic") if "characteristic" in ring else DEFAULT_CONFIG.characteristic
    relations = _split_list(ring.get("relations", ""))
    dimension = _int(ring["dimension"], "dimension") if ring.get("dimension", "").strip() else None
    try:
        spec = RingSpec(variables, char, relations, dimension)
        I = spec.ideal(_split_list(parser["ideal"]["I"]))
        Q = spec.ideal(_split_list(parser["ideal"]["Q"])) if parser["ideal"].get("Q", "").strip() else None
    except (PolyError, ValueError) as exc:
        raise InputError(str(exc)) from None
    flags: Dict[str, Optional[bool]] = {}
    if parser.has_section("hypotheses"):
        for key, value in parser["hypotheses"].items():
            v = value.strip().lower()
            if v in _TRUE:
                flags[key] = True
            elif v in _FALSE:
                flags[key] = False
            elif v not in ("", "unknown", "none"):
                raise InputError(f"hypothesis {key} must be true, false or unknown")
    overrides: Dict[str, int] = {}
    if parser.has_section("config"):
        for key, value in parser["config"].items():
            overrides[key] = _int(value, key)
    name = parser.get("instance", "name", fallback=Path(path).stem)
    return Instance(name, spec, I, Q, {}, {}, flags), overrides


def parse_params(items: Sequence[str]) -> Dict[str, int]:
    out: Dict[str, int] = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise InputError(f"--param expects k=v, got {item!r}")
        out[key.strip()] = _int(value, f"parameter {key.strip()}")
    return out


def parse_range(text: str) -> List[int]:
    """'1..4' (inclusive), '1,3,5' or a single integer."""
    text = text.strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        return list(range(_int(lo, "range start"), _int(hi, "range end") + 1))
    return [_int(v, "parameter value") for v in text.split(",") if v.strip()]


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def instance_digest(inst: Instance) -> str:
    return hashlib.sha256(inst.digest_text().encode()).hexdigest()[:16]


def describe_instance(inst: Instance, Q=None) -> dict:
    spec = inst.spec
    Q = Q if Q is not None else inst.Q
    return {
        "id": inst.id,
        "digest": instance_digest(inst),
        "params": dict(sorted(inst.params.items())),
        "ring": {
            "variables": list(spec.variables),
            "characteristic": spec.characteristic,
            "relations": [str(g) for g in spec.relations.generators],
            "dimension": spec.dimension,
        },
        "I": [str(g) for g in inst.I.generators],
        "Q": None if Q is None else [str(g) for g in Q.generators],
        "Q_source": "given" if inst.Q is not None else "random minimal reduction",
        "hypotheses": {k: inst.flags.get(k) for k in HYPOTHESIS_FLAGS},
    }


def _expected_value(key: str, inst: Instance, inv: InstanceInvariants, expected):
    if key == "lambda_RI":
        return inv.lambda_RI()
    if key == "lambda_IQ":
        return inv.lambda_IQ()
    if key == "lambda_I2_QI":
        return inv.fiber_length(1)
    if key == "rQ":
        return inv.rQ()
    if key == "e0":
        return inv.e()[0]
    if key == "e1":
        return inv.e()[1]
    if key == "e1Q":
        return inv.eQ()[1]
    if key == "sQ":
        return inv.sQ()
    if key == "f0":
        return inv.f0()
    if key == "nuI":
        return inv.nuI()
    if key == "fiber_lengths":
        return tuple(inv.fiber_lengths()[:len(expected)])
    if key == "integral_over_Q":
        r = inv.rQ()
        return "NO_UP_TO_CAP" if r is NOT_FOUND else f"YES({r})"
    if key == "I1_phi":
        if inst.northcott is None:
            raise InputError("I1_phi needs a Northcott instance")
        target = inst.spec.ideal(list(expected))
        return tuple(expected) if ideal_equal(fitting_ideal_I1(inst.northcott), target) else "different ideal"
    raise KeyError(key)


def expected_comparisons(inst: Instance, inv: InstanceInvariants) -> List[dict]:
    """Compare each recorded expectation of a catalog instance with the computed value."""
    out = []
    for key, exp in inst.expected.items():
        entry = {"key": key, "claim": exp.claim, "expected": _plain(exp.value)}
        try:
            got = _expected_value(key, inst, inv, exp.value)
            entry["computed"] = _plain(got)
            entry["match"] = _plain(got) == _plain(exp.value)
        except COMPUTE_ERRORS as exc:
            entry["computed"] = None
            entry["match"] = None
            entry["error"] = f"{type(exc).__name__}: {exc}"
        out.append(entry)
    return out


def _plain(v):
    if isinstance(v, (tuple, list)):
        return [_plain(x) for x in v]
    if v is NOT_FOUND:
        return "NOT_FOUND"
    return v


def build_report(command: str, inst: Instance, config: Config, checks: Optional[List[str]] = None,
                 timings: bool = False) -> dict:
    inv = InstanceInvariants(inst.spec, inst.I, inst.Q, config)
    clock: Dict[str, float] = {}
    verdicts = None
    if checks is not None:
        t0 = time.perf_counter()
        verdicts = run_checks(inst, checks, config, CheckContext(inst, config, inv))
        clock["checks"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    record = inv.record()
    clock["invariants"] = time.perf_counter() - t0
    try:
        Q = inv.Q
    except COMPUTE_ERRORS:
        Q = None
    report = {
        "format_version": FORMAT_VERSION,
        "command": command,
        "instance": describe_instance(inst, Q),
        "config": config.as_dict(),
        "invariants": record.as_dict(),
        "expected": expected_comparisons(inst, inv),
    }
    if verdicts is not None:
        report["verdicts"] = [v.as_dict() for v in verdicts]
        report["summary"] = {
            "requested": len(verdicts),
            "evaluated": sum(v.evaluated for v in verdicts),
            "passed": sum(v.passed is True for v in verdicts),
            "failed": sum(v.passed is False for v in verdicts),
            "unevaluated": [v.check_id for v in verdicts if not v.evaluated],
        }
    if timings:
        report["timings"] = {k: round(v, 3) for k, v in clock.items()}
    return report


def report_exit_code(report: dict) -> int:
    if report["command"] == "check":
        return EXIT_CHECK if report["summary"]["failed"] else EXIT_OK
    return EXIT_COMPUTE if report["invariants"]["diagnostics"] else EXIT_OK


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def render_table(report: dict) -> str:
    """Plain-text rendering of the same data as the JSON report."""
    buf = io.StringIO()
    inst = report["instance"]
    ring = inst["ring"]
    w = buf.write
    w(f"instance   {inst['id']}  digest {inst['digest']}\n")
    if inst["params"]:
        w("params     " + ", ".join(f"{k}={v}" for k, v in inst["params"].items()) + "\n")
    rel = ", ".join(ring["relations"]) or "0"
    w(f"ring       F_{ring['characteristic']}[{', '.join(ring['variables'])}] / ({rel}), dim {ring['dimension']}\n")
    w(f"I          ({', '.join(inst['I'])})\n")
    if inst["Q"] is not None:
        w(f"Q          ({', '.join(inst['Q'])})  [{inst['Q_source']}]\n")
    cfg = report["config"]
    w(f"config     seed {cfg['seed']}, truncation cap {cfg['trunc_cap']}, reduction cap {cfg['red_cap']}\n\n")
    rec = report["invariants"]
    rows = [(k, v) for k, v in rec.items() if k not in ("diagnostics", "skipped")]
    width = max(len(k) for k, _ in rows)
    w("invariants\n")
    for k, v in rows:
        if k in rec["diagnostics"]:
            shown = "failed: " + rec["diagnostics"][k]
        elif k in rec["skipped"]:
            shown = "skipped: " + rec["skipped"][k]
        else:
            shown = "-" if v is None else json.dumps(v)
        w(f"  {k:<{width}}  {shown}\n")
    if report["expected"]:
        w("\nexpected values\n")
        for e in report["expected"]:
            mark = {True: "ok", False: "MISMATCH", None: "n/a"}[e["match"]]
            w(f"  {e['key']:<14} expected {json.dumps(e['expected'])}, computed {json.dumps(e['computed'])}  {mark}\n")
    if "verdicts" in report:
        w("\nchecks\n")
        for v in report["verdicts"]:
            res = {True: "PASS", False: "FAIL", None: "not evaluated"}[v["pass"]]
            rel = ""
            if v["pass"] is not None:
                rel = f"  {json.dumps(v['lhs'])} {v['relation']} {json.dumps(v['rhs'])}"
            w(f"  {v['check_id']:<4} {v['name']:<26} {v['hypothesis_status']:<17} {res}{rel}\n")
            if v["note"]:
                w(f"       {v['note']}\n")
        s = report["summary"]
        w(f"\n{s['passed']} passed, {s['failed']} failed, {len(s['unevaluated'])} not evaluated\n")
    if "timings" in report:
        w("\ntimings    " + ", ".join(f"{k} {v:.3f}s" for k, v in report["timings"].items()) + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------

def default_cache_path() -> Path:
    env = os.environ.get("SALLYLAB_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(Path.home(), ".cache")
    return Path(base) / "sallylab" / "results.jsonl"


class ResultCache:
    """Append-only JSON-lines file keyed by (instance digest, operation, config digest)."""

    def __init__(self, path):
        self.path = Path(path)
        self.lock = FileLock(str(self.path) + ".lock")

    @staticmethod
    def key(inst_digest: str, op: str, config: Config) -> str:
        return f"{inst_digest}:{op}:{config.digest()}"

    def get(self, key: str) -> Optional[dict]:
        if not self.path.exists():
            return None
        found = None
        with self.lock:
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    try:
                        entry = json.loads(line)
                    except ValueError:
                        continue  # a torn line from an interrupted writer
                    if entry.get("key") == key:
                        found = entry.get("report")
        return found

    def put(self, key: str, report: dict) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        line = json.dumps({"key": key, "report": report}, sort_keys=False)
        with self.lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")


def cached_report(command: str, inst: Instance, config: Config, checks: Optional[List[str]],
                  cache: Optional[ResultCache], timings: bool = False) -> dict:
    op = command if checks is None else f"{command}:{','.join(checks)}"
    key = ResultCache.key(instance_digest(inst), op, config)
    if cache is not None and not timings:
        hit = cache.get(key)
        if hit is not None:
            return hit
    report = build_report(command, inst, config, checks, timings)
    if cache is not None:
        stored = {k: v for k, v in report.items() if k != "timings"}
        cache.put(key, stored)
    return report


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _config_from(args, overrides: Optional[Dict[str, int]] = None) -> Config:
    cfg = DEFAULT_CONFIG.replace(**(overrides or {}))
    return cfg.replace(characteristic=args.char, seed=args.seed, trunc_cap=args.trunc_cap,
                       red_cap=args.red_cap)


def _load(args) -> Tuple[Instance, Config]:
    if args.catalog and args.file:
        raise InputError("give either --catalog or an instance file, not both")
    if args.catalog:
        params = parse_params(args.param)
        try:
            inst = catalog(args.catalog, params, args.char or DEFAULT_CONFIG.characteristic)
        except (PolyError, ValueError) as exc:
            raise InputError(str(exc)) from None
        return inst, _config_from(args)
    if args.file:
        if args.param:
            raise InputError("--param only applies to catalog instances")
        inst, overrides = load_instance_file(args.file, args.char)
        return inst, _config_from(args, overrides).replace(characteristic=inst.spec.characteristic)
    raise InputError("no instance: give --catalog ID or an instance file")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cache_for(args) -> Optional[ResultCache]:
    if args.no_cache:
        return None
    return ResultCache(args.cache or default_cache_path())


def cmd_compute(args, checks: Optional[List[str]] = None) -> int:
    inst, config = _load(args)
    command = "compute" if checks is None else "check"
    report = cached_report(command, inst, config, checks, _cache_for(args), args.timings)
    _emit(dumps(report) if args.format == "json" else render_table(report), args.out)
    code = report_exit_code(report)
    if code == EXIT_COMPUTE:
        print("warning: some invariants could not be computed; see diagnostics", file=sys.stderr)
    if checks is not None and report["summary"]["unevaluated"]:
        print("warning: not evaluated (hypotheses unmet or unknown): "
              + ", ".join(report["summary"]["unevaluated"]), file=sys.stderr)
    return code


def cmd_check(args) -> int:
    try:
        checks = parse_check_list(args.checks)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return cmd_compute(args, checks)


SWEEP_COLUMNS = (
    ("lambda_R_mod_I", "length of R/I"),
    ("e0_I", "multiplicity e_0(I)"),
    ("e1_I", "Hilbert coefficient e_1(I)"),
    ("e_I", "all Hilbert-Samuel coefficients e_0..e_d of I"),
    ("e1_Q", "Hilbert coefficient e_1(Q)"),
    ("r_Q", "reduction number of I with respect to Q"),
    ("fiber_lengths", "lambda(I^(n+1)/QI^n) for n = 1..r-1"),
    ("s_Q", "Sally multiplicity s_Q(I)"),
    ("f0_I", "multiplicity of the special fiber ring"),
    ("nu_I", "minimal number of generators of I"),
    ("nu_m", "embedding dimension"),
    ("order_I", "largest n with I inside m^n"),
    ("rossi_index", "e_1 - e_0 + lambda(R/I) + 1"),
    ("buchsbaum_invariant", "sum of (-1)^i e_i(Q), i = 1..d"),
    ("error", "failures for this row, empty if none"),
)


def sweep_header(param: str) -> List[str]:
    return [param] + [name for name, _ in SWEEP_COLUMNS]


def sweep_legend(param: str) -> str:
    lines = [f"{param}: catalog parameter"] + [f"{name}: {desc}" for name, desc in SWEEP_COLUMNS]
    return "\n".join(lines) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return str(v)


def sweep_row(cat_id: str, param: str, value: int, fixed: Dict[str, int], config: Config,
              cache_path: Optional[str]) -> List[str]:
    """One CSV row; exceptions are folded into the error column."""
    params = dict(fixed)
    params[param] = value
    try:
        inst = catalog(cat_id, params, config.characteristic)
        cache = ResultCache(cache_path) if cache_path else None
        rec = cached_report("compute", inst, config, None, cache)["invariants"]
    except (PolyError, ValueError, ArithmeticError, RecursionError) as exc:
        return [str(value)] + [""] * (len(SWEEP_COLUMNS) - 1) + [f"{type(exc).__name__}: {exc}"]
    e = rec["e"] or []
    eQ = rec["eQ"] or []
    errors = "; ".join(f"{k}: {msg}" for k, msg in rec["diagnostics"].items())
    cells = [rec["lambda_RI"], e[0] if e else None, e[1] if len(e) > 1 else None, e or None,
             eQ[1] if len(eQ) > 1 else None, rec["rQ"], rec["fiber_lengths"], rec["sQ"], rec["f0"],
             rec["nuI"], rec["nu_m"], rec["oI"], rec["rossi_index"], rec["buchsbaum_I"], errors]
    return [str(value)] + [_cell(c) for c in cells]


def cmd_sweep(args) -> int:
    if not args.catalog:
        raise InputError("sweep needs --catalog")
    names = catalog_params(args.catalog) if args.catalog in catalog_ids() else None
    if names is None:
        raise InputError(f"unknown catalog id {args.catalog!r}")
    ranges = [p for p in args.param or () if ".." in p or "," in p.partition("=")[2]]
    fixed = parse_params([p for p in args.param or () if p not in ranges])
    if len(ranges) > 1:
        raise InputError("sweep takes one ranged parameter")
    if ranges:
        param, _, text = ranges[0].partition("=")
        param = param.strip()
        values = parse_range(text)
    else:
        if len(fixed) != 1:
            raise InputError("sweep needs a parameter range such as q=1..4")
        param, value = fixed.popitem()
        values = [value]
    if param not in names:
        raise InputError(f"{args.catalog} has no parameter {param!r}")
    config = _config_from(args)
    cache = None if args.no_cache else str(args.cache or default_cache_path())
    jobs = max(1, args.jobs or 1)
    if jobs > 1 and len(values) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(sweep_row, args.catalog, param, v, fixed, config, cache) for v in values]
            rows = [f.result() for f in futures]
    else:
        rows = [sweep_row(args.catalog, param, v, fixed, config, cache) for v in values]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(sweep_header(param))
    writer.writerows(rows)
    _emit(buf.getvalue(), args.out)
    return EXIT_COMPUTE if any(r[-1] for r in rows) else EXIT_OK


def cmd_catalog(args) -> int:
    entries = []
    for cid in catalog_ids():
        params = catalog_params(cid)
        sample = {p: 1 for p in params}
        inst = catalog(cid, sample)
        entries.append({
            "id": cid,
            "params": list(params),
            "variables": list(inst.spec.variables),
            "relations": [str(g) for g in inst.spec.relations.generators],
            "expected": {k: {"value": _plain(e.value), "claim": e.claim} for k, e in inst.expected.items()},
        })
    if args.format == "json":
        text = json.dumps({"format_version": FORMAT_VERSION, "catalog": entries}, indent=2) + "\n"
    else:
        lines = []
        for e in entries:
            p = f"  (params: {', '.join(e['params'])})" if e["params"] else ""
            lines.append(f"{e['id']}{p}")
            for item in e["expected"].values():
                lines.append(f"    {item['claim']}")
        lines.append("expected values of parameterized entries are shown for parameter value 1")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, instance: bool = True) -> None:
    if instance:
        p.add_argument("file", nargs="?", help="instance file")
    p.add_argument("--catalog", metavar="ID", help="catalog instance id")
    p.add_argument("--param", action="append", default=[], metavar="K=V", help="catalog parameter")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--seed", type=int, help="seed for random minimal reductions (default 0)")
    p.add_argument("--char", type=int, help="field characteristic (default 32003)")
    p.add_argument("--trunc-cap", type=int, help="largest truncation degree for local lengths")
    p.add_argument("--red-cap", type=int, help="largest reduction number searched")
    p.add_argument("--no-cache", action="store_true", help="neither read nor write the result cache")
    p.add_argument("--cache", metavar="PATH", help="cache file (default $SALLYLAB_CACHE or ~/.cache/sallylab)")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sallylab", description="Reduction numbers, Hilbert coefficients "
                                     "and Sally modules of m-primary ideals in local rings.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("compute", help="compute all invariants of an instance")
    _common(p)
    p = sub.add_parser("check", help="evaluate numeric checks on an instance")
    _common(p)
    p.add_argument("--checks", default="all", metavar="LIST",
                   help="comma separated ids (" + ", ".join(CHECKS) + ") or 'all'")
    p = sub.add_parser("sweep", help="tabulate invariants over a catalog parameter range",
                       epilog="CSV columns:\n" + sweep_legend("<param>"),
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _common(p, instance=False)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p = sub.add_parser("catalog", help="list catalog instances")
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("--out", metavar="PATH")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    handlers = {"compute": cmd_compute, "check": cmd_check, "sweep": cmd_sweep, "catalog": cmd_catalog}
    try:
        return handlers[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
