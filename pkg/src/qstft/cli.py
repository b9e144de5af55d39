"""Command line entry point: ``qstft run --config CONFIG --out REPORT``.

Exit status is 0 when every check passes, 1 when any check fails and 2 when
the configuration is rejected.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
from importlib import resources
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from ._backend import BACKEND
from .dstft import TFContext, make_context
from .errors import ConfigError, QstftError
from .suites import DEFAULT_SAMPLES, DEFAULT_TOLERANCES, SUITES, Runner, run_suites

SCHEMA_VERSION = "1.0.0"
PRESET_KINDS = ("delta", "constant", "indicator", "random")
WINDOW_ROLES = ("g", "u", "v", "sigma")


@dataclass
class SuiteConfig:
    groups: list  # [(factors, generators, point_weight)]
    suites: list
    seed: int = 0
    trials: int = 1000
    samples: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    windows: dict = field(default_factory=dict)
    regions: list = field(default_factory=list)
    radon: dict = field(default_factory=dict)
    contexts: list = field(default_factory=list, repr=False)

    def echo(self) -> dict:
        return {
            "groups": [
                {"factors": list(f), "subgroup": [list(g) for g in gens], "point_weight": str(w)}
                for f, gens, w in self.groups
            ],
            "suites": list(self.suites),
            "seed": self.seed,
            "trials": self.trials,
            "samples": dict(sorted(self.samples.items())),
            "tolerances": dict(sorted(self.tolerances.items())),
            "windows": self.windows,
            "regions": self.regions,
            "radon": self.radon,
        }


def _int(value, ptr, lo=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(ptr, f"expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise ConfigError(ptr, f"must be at least {lo}, got {value}")
    return value


def _int_list(value, ptr):
    if not isinstance(value, list):
        raise ConfigError(ptr, f"expected an array of integers, got {value!r}")
    return [_int(x, f"{ptr}/{i}") for i, x in enumerate(value)]


def _parse_group(spec, ptr):
    if not isinstance(spec, dict):
        raise ConfigError(ptr, "group spec must be an object with 'factors' and 'subgroup'")
    unknown = set(spec) - {"factors", "subgroup", "point_weight"}
    if unknown:
        raise ConfigError(ptr, f"unknown keys {sorted(unknown)}")
    if "factors" not in spec:
        raise ConfigError(ptr, "missing 'factors'")
    factors = _int_list(spec["factors"], f"{ptr}/factors")
    for i, n in enumerate(factors):
        if n < 1:
            raise ConfigError(f"{ptr}/factors/{i}", f"invalid factors: {n} is not a positive integer")
    gens_raw = spec.get("subgroup", [])
    if not isinstance(gens_raw, list):
        raise ConfigError(f"{ptr}/subgroup", "expected an array of generator tuples")
    gens = []
    for j, g in enumerate(gens_raw):
        gp = f"{ptr}/subgroup/{j}"
        g = _int_list(g, gp)
        if len(g) != len(factors):
            raise ConfigError(gp, f"generator {g} has {len(g)} components, group has rank {len(factors)}")
        for i, (x, n) in enumerate(zip(g, factors)):
            if not 0 <= x < n:
                raise ConfigError(f"{gp}/{i}", f"residue {x} outside [0, {n}): not an element of the group")
        gens.append(tuple(g))
    try:
        weight = Fraction(str(spec.get("point_weight", 1)))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{ptr}/point_weight", f"not a rational number: {spec.get('point_weight')!r}") from None
    if weight <= 0:
        raise ConfigError(f"{ptr}/point_weight", "must be positive")
    try:
        ctx = make_context(factors, gens, weight)
    except QstftError as exc:
        raise ConfigError(ptr, str(exc)) from None
    return (tuple(factors), tuple(gens), weight), ctx


def _parse_window(spec, ptr):
    if not isinstance(spec, dict) or spec.get("kind") not in PRESET_KINDS:
        raise ConfigError(ptr, f"window preset must be an object with kind in {list(PRESET_KINDS)}")
    kind = spec["kind"]
    if kind == "delta":
        _int(spec.get("index", 0), f"{ptr}/index", 0)
    elif kind == "constant":
        v = spec.get("value", 1.0)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{ptr}/value", "constant value must be a number")
    elif kind == "indicator":
        idx = _int_list(spec.get("indices", []), f"{ptr}/indices")
        if not idx:
            raise ConfigError(f"{ptr}/indices", "indicator needs at least one index")
    return dict(spec)


def parse_config(text: str) -> SuiteConfig:
    """Validate a JSON config document and fill defaults.

    Errors are :class:`ConfigError` with a JSON pointer to the offending value.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("", "config must be a JSON object")
    known = {"groups", "suites", "seed", "trials", "samples", "tolerances", "windows", "regions", "radon"}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError("", f"unknown keys {sorted(unknown)}")

    groups = doc.get("groups")
    if not isinstance(groups, list) or not groups:
        raise ConfigError("/groups", "at least one group is required")
    parsed, contexts = [], []
    for i, g in enumerate(groups):
        spec, ctx = _parse_group(g, f"/groups/{i}")
        parsed.append(spec)
        contexts.append(ctx)

    suites = doc.get("suites")
    if not isinstance(suites, list) or not suites:
        raise ConfigError("/suites", "at least one suite is required")
    for i, s in enumerate(suites):
        if s not in SUITES:
            raise ConfigError(f"/suites/{i}", f"unknown suite {s!r}; expected one of {list(SUITES)}")
    suites = [s for s in SUITES if s in suites]  # canonical order, duplicates dropped

    seed = _int(doc.get("seed", 0), "/seed", 0)
    trials = _int(doc.get("trials", 1000), "/trials", 1)

    samples = dict(DEFAULT_SAMPLES)
    raw = doc.get("samples", {})
    if isinstance(raw, int) and not isinstance(raw, bool):
        samples = {k: _int(raw, "/samples", 1) for k in samples}
    elif isinstance(raw, dict):
        for k, v in raw.items():
            if k not in SUITES:
                raise ConfigError(f"/samples/{k}", f"unknown suite {k!r}")
            samples[k] = _int(v, f"/samples/{k}", 1)
    else:
        raise ConfigError("/samples", "expected an integer or an object keyed by suite")

    tolerances = dict(DEFAULT_TOLERANCES)
    raw = doc.get("tolerances", {})
    if not isinstance(raw, dict):
        raise ConfigError("/tolerances", "expected an object")
    for k, v in raw.items():
        if k not in DEFAULT_TOLERANCES:
            raise ConfigError(f"/tolerances/{k}", f"unknown tolerance {k!r}")
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not v >= 0:
            raise ConfigError(f"/tolerances/{k}", "tolerance must be a nonnegative number")
        tolerances[k] = float(v)

    windows = {}
    raw = doc.get("windows", {})
    if not isinstance(raw, dict):
        raise ConfigError("/windows", "expected an object keyed by role")
    for role, spec in raw.items():
        if role not in WINDOW_ROLES:
            raise ConfigError(f"/windows/{role}", f"unknown role {role!r}; expected one of {list(WINDOW_ROLES)}")
        windows[role] = _parse_window(spec, f"/windows/{role}")

    regions = []
    raw = doc.get("regions", [])
    if not isinstance(raw, list):
        raise ConfigError("/regions", "expected an array")
    for i, reg in enumerate(raw):
        ptr = f"/regions/{i}"
        if not isinstance(reg, dict):
            raise ConfigError(ptr, "region must be an object")
        gi = _int(reg.get("group", 0), f"{ptr}/group", 0)
        if gi >= len(contexts):
            raise ConfigError(f"{ptr}/group", f"no group with index {gi}")
        ctx: TFContext = contexts[gi]
        sizes = {"c1": ctx.group.order, "c2": ctx.group.order, "d": ctx.quotient.order, "omega": ctx.dual.order}
        out = {"group": gi}
        for key, n in sizes.items():
            if key not in reg:
                raise ConfigError(ptr, f"missing region {key!r}")
            idx = _int_list(reg[key], f"{ptr}/{key}")
            if not idx:
                raise ConfigError(f"{ptr}/{key}", "region must be nonempty")
            for j, x in enumerate(idx):
                if not 0 <= x < n:
                    raise ConfigError(f"{ptr}/{key}/{j}", f"index {x} outside [0, {n})")
            if 0 not in idx:
                raise ConfigError(f"{ptr}/{key}", "region must contain the identity (index 0)")
            out[key] = sorted(set(idx))
        regions.append(out)

    radon = {}
    raw = doc.get("radon", {})
    if not isinstance(raw, dict):
        raise ConfigError("/radon", "expected an object")
    if "sizes" in raw:
        radon["sizes"] = [_int(n, f"/radon/sizes/{i}", 1) for i, n in enumerate(_as_list(raw["sizes"], "/radon/sizes"))]
    if "image" in raw:
        img = raw["image"]
        if not isinstance(img, list) or not img or any(not isinstance(r, list) or len(r) != len(img) for r in img):
            raise ConfigError("/radon/image", "image must be a square array of rows")
        for i, row in enumerate(img):
            for j, x in enumerate(row):
                if isinstance(x, bool) or not isinstance(x, (int, float)):
                    raise ConfigError(f"/radon/image/{i}/{j}", "pixel must be a number")
        radon["image"] = img

    return SuiteConfig(parsed, suites, seed, trials, samples, tolerances, windows, regions, radon, contexts)


def _as_list(x, ptr):
    if not isinstance(x, list):
        raise ConfigError(ptr, "expected an array")
    return x


def run_suite(config: SuiteConfig) -> dict:
    R = Runner(
        seed=config.seed,
        trials=config.trials,
        samples=dict(config.samples),
        tolerances=dict(config.tolerances),
        presets={k: v for k, v in config.windows.items() if v["kind"] != "random"},
        regions=list(config.regions),
        radon_sizes=tuple(config.radon.get("sizes", (4, 6))),
        radon_image=config.radon.get("image"),
    )
    records = run_suites(R, config.contexts, config.suites)
    by_suite = {}
    for r in records:
        s = by_suite.setdefault(r["suite"], {"total": 0, "passed": 0, "failed": 0})
        s["total"] += 1
        s["passed" if r["pass"] else "failed"] += 1
    failed = sum(1 for r in records if not r["pass"])
    return {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "backend": BACKEND,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "config": config.echo(),
        "checks": records,
        "summary": {
            "total": len(records),
            "passed": len(records) - failed,
            "failed": failed,
            "pass": failed == 0,
            "by_suite": by_suite,
        },
    }


def _canon(obj) -> str:
    """Canonical JSON: sorted keys, no spaces, floats with 17 significant digits."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        return "%.17g" % x
    if isinstance(obj, complex):
        return "[" + _canon(obj.real) + "," + _canon(obj.imag) + "]"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=True)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ",".join(json.dumps(k) + ":" + _canon(v) for k, v in items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(_canon(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(report: dict) -> str:
    return _canon(report) + "\n"


def emit_report(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_report(report))


def strip_timestamp(text: str) -> str:
    doc = json.loads(text)
    doc.pop("timestamp", None)
    return json.dumps(doc, sort_keys=True)


def schema() -> dict:
    """The published JSON Schema for reports."""
    text = resources.files("qstft").joinpath("schema/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qstft", description="Run seeded property suites for the quotient-window STFT.")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run suites from a JSON config and write a JSON report")
    run.add_argument("--config", required=True, help="path to the JSON config")
    run.add_argument("--out", required=True, help="where to write the JSON report")
    run.add_argument("--seed", type=int, help="override the config seed")
    run.add_argument("--suites", help="comma-separated suites, overriding the config")
    run.add_argument("--trials", type=int, help="random trials per sampled L^p lower bound")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            doc = json.loads(fh.read())
        if args.seed is not None:
            doc["seed"] = args.seed
        if args.suites is not None:
            doc["suites"] = [s.strip() for s in args.suites.split(",") if s.strip()]
        if args.trials is not None:
            doc["trials"] = args.trials
        config = parse_config(json.dumps(doc))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    report = run_suite(config)
    emit_report(report, args.out)
    s = report["summary"]
    print(f"{s['passed']}/{s['total']} checks passed" + ("" if s["pass"] else f", {s['failed']} failed"))
    return 0 if s["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
