"""Command-line surface: verify / classify / search / sweep.

Configs are flat ``key = value`` text (section headers are ignored) or a
JSON object with the same keys; flags override config values.  Exit codes
are a function of computed verdicts only: 0 success / inequality holds,
1 violation found, 2 configuration or evaluation error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import search as search_mod
from .classify import (
    CONDITION_L1,
    CONDITION_L2,
    CONDITION_P2P3,
    CONDITION_THM_A,
    CONDITION_THM_B,
    classify_pair,
)
from .generators import Generator, GeneratorError, common_domain, parse_generator
from .means import WellDefinednessError, gap
from .measure import MeasureSpace, SimpleFunction, random_simple_function
from .search import Scenario, sweep, violate_four_point

DEFAULT_VERIFY_TOL = 1e-9


class ConfigError(ValueError):
    """Malformed config; the message carries the file/line diagnostic."""


@dataclass
class RunConfig:
    f_desc: Optional[str] = None
    g_desc: Optional[str] = None
    x_weights: Optional[tuple[float, ...]] = None
    y_weights: Optional[tuple[float, ...]] = None
    mode: Optional[str] = None
    trials: int = 1000
    seed: int = 0
    tolerance: float = DEFAULT_VERIFY_TOL
    out: Optional[str] = None
    h_grid: Optional[list[list[float]]] = None
    h_random: Optional[tuple] = None  # (m, n, seed, lo, hi)
    scenarios: list[Scenario] = field(default_factory=list)


def _parse_weights(text: str, where: str) -> tuple[float, ...]:
    text = text.strip().strip("[]()")
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"{where}: bad weight list {text!r}") from exc


def _parse_h(text: str, where: str, cfg: RunConfig) -> None:
    text = text.strip()
    if text.startswith("random(") and text.endswith(")"):
        parts = text[len("random("):-1].split(",")
        if len(parts) != 5:
            raise ConfigError(f"{where}: random(...) takes m, n, seed, lo, hi")
        m, n, seed = int(parts[0]), int(parts[1]), int(parts[2])
        lo, hi = float(parts[3]), float(parts[4])
        cfg.h_random = (m, n, seed, lo, hi)
        return
    try:
        cfg.h_grid = [
            [float(v) for v in row.split(",") if v.strip()]
            for row in text.split(";")
        ]
    except ValueError as exc:
        raise ConfigError(f"{where}: bad grid {text!r}") from exc


def _parse_scenario(text: str, where: str) -> Scenario:
    parts = [p.strip() for p in text.split("|")]
    if len(parts) != 5:
        raise ConfigError(f"{where}: scenario needs 'id | f | g | X | Y', got {text!r}")
    return Scenario(
        scenario_id=parts[0],
        f_desc=parts[1],
        g_desc=parts[2],
        x_weights=_parse_weights(parts[3], where),
        y_weights=_parse_weights(parts[4], where),
    )


def _apply_key(cfg: RunConfig, key: str, value, where: str) -> None:
    key = key.strip().lower()
    if key in ("f", "f_desc"):
        cfg.f_desc = str(value).strip()
    elif key in ("g", "g_desc"):
        cfg.g_desc = str(value).strip()
    elif key in ("space.x", "x"):
        cfg.x_weights = (
            tuple(float(v) for v in value) if isinstance(value, (list, tuple))
            else _parse_weights(str(value), where)
        )
    elif key in ("space.y", "y"):
        cfg.y_weights = (
            tuple(float(v) for v in value) if isinstance(value, (list, tuple))
            else _parse_weights(str(value), where)
        )
    elif key == "mode":
        cfg.mode = str(value).strip().lower()
    elif key == "trials":
        cfg.trials = int(value)
    elif key == "seed":
        cfg.seed = int(value)
    elif key in ("tol", "tolerance"):
        cfg.tolerance = float(value)
    elif key == "out":
        cfg.out = str(value).strip()
    elif key == "h":
        _parse_h(str(value), where, cfg)
    elif key == "scenario":
        cfg.scenarios.append(_parse_scenario(str(value), where))
    else:
        raise ConfigError(f"{where}: unknown key {key!r}")


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    cfg = RunConfig()
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        for key, value in data.items():
            if key.lower() == "scenarios":
                for i, sc in enumerate(value):
                    cfg.scenarios.append(
                        Scenario(
                            scenario_id=str(sc["id"]),
                            f_desc=str(sc["f"]),
                            g_desc=str(sc["g"]),
                            x_weights=tuple(float(v) for v in sc["X"]),
                            y_weights=tuple(float(v) for v in sc["Y"]),
                        )
                    )
            else:
                _apply_key(cfg, key, value, f"{path}:{key}")
        return cfg
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("["):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        _apply_key(cfg, key, value.strip(), f"{path}:{lineno}")
    return cfg


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise ConfigError(f"missing config keys: {', '.join(missing)}")


def _build_instance(cfg: RunConfig):
    _require(cfg, "f_desc", "g_desc", "x_weights", "y_weights")
    try:
        f = parse_generator(cfg.f_desc)
        g = parse_generator(cfg.g_desc)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return f, g, MeasureSpace(cfg.x_weights), MeasureSpace(cfg.y_weights)


def _value_box(f: Generator, g: Generator) -> tuple[float, float]:
    lo_e, hi_e = search_mod._exponent_box(f, g)
    lo_e, hi_e = max(lo_e, -3.0), min(hi_e, 3.0)
    return 10.0 ** lo_e, 10.0 ** hi_e


def cmd_verify(cfg: RunConfig) -> int:
    f, g, X, Y = _build_instance(cfg)
    dom = common_domain(f, g)
    instances = []
    if cfg.h_grid is not None:
        instances.append(SimpleFunction(np.array(cfg.h_grid, dtype=float), dom))
    elif cfg.h_random is not None:
        m, n, seed, lo, hi = cfg.h_random
        instances.append(random_simple_function(dom, m, n, seed, (lo, hi)))
    else:
        rng = np.random.default_rng(cfg.seed)
        box = _value_box(f, g)
        shape = (len(X), len(Y))
        for _ in range(cfg.trials):
            vals = np.exp(rng.uniform(math.log(box[0]), math.log(box[1]), size=shape))
            instances.append(SimpleFunction(vals, dom))

    gaps = []
    worst = None
    for h in instances:
        rep = gap(f, g, X, Y, h)
        gaps.append(rep.gap)
        if worst is None or rep.gap < worst[0]:
            worst = (rep.gap, rep, h)
    min_gap = min(gaps)
    mean_gap = math.fsum(gaps) / len(gaps)
    print(f"instances = {len(gaps)}")
    print(f"min_gap  = {min_gap:.17g}")
    print(f"mean_gap = {mean_gap:.17g}")
    if min_gap < -cfg.tolerance:
        _, rep, h = worst
        print("VIOLATION")
        print(f"lhs = {rep.lhs:.17g}")
        print(f"rhs = {rep.rhs:.17g}")
        rows = ";".join(",".join(f"{v:.17g}" for v in row) for row in h.values)
        print(f"witness_h = {rows}")
        return 1
    print("inequality holds on all sampled instances")
    return 0


_CONDITION_NOTES = {
    CONDITION_THM_B: "commutes on all finite measure spaces: f = c*g",
    CONDITION_THM_A: "commutes on probability spaces: f = a*g + b",
    CONDITION_L1: "subcommutes: g increasing and f = a*g^b with b >= 1",
    CONDITION_L2: "subcommutes: g decreasing and f = a*g^b with non-zero b <= 1",
    CONDITION_P2P3: "subcommutes: f, g increasing and the mixture map is convex",
}


def cmd_classify(cfg: RunConfig) -> int:
    f, g, X, Y = _build_instance(cfg)
    cls = classify_pair(f, g, X, Y, seed=cfg.seed)
    for key, value in cls.to_record().items():
        print(f"{key} = {value}")
    note = _CONDITION_NOTES.get(cls.condition)
    if note is None:
        note = f"unclassified; predicted verdict: {cls.predicted}"
    print(note)
    return 0


def cmd_search(cfg: RunConfig) -> int:
    f, g, X, Y = _build_instance(cfg)
    if len(X) != 2 or len(Y) != 2:
        raise ConfigError("search needs two-atom spaces on both sides")
    result = violate_four_point(
        f, g, *X.weights, *Y.weights, seed=cfg.seed
    )
    print(f"best_gap = {result.best_gap:.17g}")
    print("witness  = " + ",".join(f"{v:.17g}" for v in result.witness))
    print(f"iterations = {result.iterations}")
    if result.converged:
        print("violation found")
    else:
        print("no violation found")
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    rows = sweep(
        cfg.scenarios, trials=cfg.trials, seed=cfg.seed, out=cfg.out
    )
    if cfg.out is None:
        sys.stdout.write(search_mod.sweep_csv_text(rows))
    else:
        print(f"wrote {len(rows)} rows to {cfg.out}")
    return 0


_COMMANDS = {
    "verify": cmd_verify,
    "classify": cmd_classify,
    "search": cmd_search,
    "sweep": cmd_sweep,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qamlab",
        description="Mixed quasi-arithmetic mean inequality laboratory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key=value or JSON config file")
        p.add_argument("--f", dest="f_desc", help="generator description for f")
        p.add_argument("--g", dest="g_desc", help="generator description for g")
        p.add_argument("--X", dest="x_weights", help="comma-separated X weights")
        p.add_argument("--Y", dest="y_weights", help="comma-separated Y weights")
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--tol", type=float)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.f_desc is not None:
            cfg.f_desc = args.f_desc
        if args.g_desc is not None:
            cfg.g_desc = args.g_desc
        if args.x_weights is not None:
            cfg.x_weights = _parse_weights(args.x_weights, "--X")
        if args.y_weights is not None:
            cfg.y_weights = _parse_weights(args.y_weights, "--Y")
        if args.trials is not None:
            cfg.trials = args.trials
        if args.seed is not None:
            cfg.seed = args.seed
        if args.out is not None:
            cfg.out = args.out
        if args.tol is not None:
            cfg.tolerance = args.tol
        return _COMMANDS[args.command](cfg)
    except (ConfigError, GeneratorError, WellDefinednessError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
