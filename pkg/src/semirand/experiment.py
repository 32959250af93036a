"""Monte Carlo estimation of success probabilities over (n, t) grids."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .hypergraph import Hypergraph, load, parse, serialize
from .oracle import contains_copy
from .process import ProcessConfig, run
from .stats import wilson_interval
from .strategies import DegeneracyBuilder, K6Builder, LooseCycleBuilder, PassiveStrategy, StarplusBuilder
from .strategies.base import Strategy, StrategyMismatch
from .structure import (
    _is_k6_3,
    _loose_cycle_shape,
    degeneracy,
    exponent_degeneracy,
    exponent_starplus,
    find_starplus_center,
    k6_exponent,
    loose_cycle_exponent,
)

log = logging.getLogger(__name__)

CSV_COLUMNS = ["n", "t", "c", "trials", "successes", "p_hat", "ci_low", "ci_high", "mean_rounds_success", "seed"]


class SoundnessError(RuntimeError):
    """A strategy reported success on a host that does not contain the pattern."""


class InfeasibleCell(ValueError):
    """A grid cell the strategy cannot run at (for example n too small)."""


# ---------------------------------------------------------------------------
# strategies by name

def _loose(pattern: Hypergraph, r: int, params: dict) -> Strategy:
    shape = _loose_cycle_shape(pattern)
    if shape is None:
        raise StrategyMismatch("loose_cycle strategy needs a loose-cycle pattern")
    try:
        return LooseCycleBuilder(pattern.s, shape[0], shape[1], r)
    except ValueError as exc:
        raise StrategyMismatch(str(exc)) from exc


def _k6(pattern: Hypergraph, r: int, params: dict) -> Strategy:
    if not _is_k6_3(pattern) or r != 2:
        raise StrategyMismatch("k6 strategy needs the K_6^(3) pattern and r = 2")
    return K6Builder(omega=params.get("omega", 8.0), t1=params.get("t1"))


def _starplus(pattern: Hypergraph, r: int, params: dict) -> Strategy:
    try:
        return StarplusBuilder(pattern, r, omega=params.get("omega", 8.0), t1=params.get("t1"))
    except ValueError as exc:
        raise StrategyMismatch(str(exc)) from exc


STRATEGIES: dict[str, Callable[[Hypergraph, int, dict], Strategy]] = {
    "passive": lambda g, r, p: PassiveStrategy(g),
    "degeneracy": lambda g, r, p: DegeneracyBuilder(g),
    "starplus": _starplus,
    "k6": _k6,
    "loose_cycle": _loose,
}


def build_strategy(name: str, pattern: Hypergraph, r: int, params: dict | None = None) -> Strategy:
    if name not in STRATEGIES:
        raise StrategyMismatch(f"unknown strategy {name!r}; choose from {sorted(STRATEGIES)}")
    return STRATEGIES[name](pattern, r, dict(params or {}))


def strategy_exponent(name: str, pattern: Hypergraph, r: int) -> Fraction:
    """The exponent a strategy is designed around, used by ``kappa = "auto"``."""
    if name == "degeneracy" or (name == "passive" and r == 1):
        return exponent_degeneracy(degeneracy(pattern)[0])
    if name == "starplus" or name == "passive":
        found = find_starplus_center(pattern, r)
        if found is None:
            raise ValueError("no automatic exponent: pattern is not a starplus")
        return exponent_starplus(r, pattern.s, pattern.n, len(found[1])).exponent
    if name == "k6":
        return k6_exponent().exponent
    if name == "loose_cycle":
        shape = _loose_cycle_shape(pattern)
        if shape is None:
            raise ValueError("pattern is not a loose cycle")
        return loose_cycle_exponent(r, pattern.s, shape[0], shape[1]).exponent
    raise ValueError(f"unknown strategy {name!r}")


# ---------------------------------------------------------------------------
# configuration

@dataclass
class ExperimentConfig:
    pattern: Any
    r: int
    strategy: str
    n: list[int]
    t: list[int] | None = None
    c: list[float] | None = None
    kappa: Any = "auto"
    trials: int = 100
    seed: int = 0
    workers: int | None = None
    out: str | None = None
    params: dict = field(default_factory=dict)
    level: float = 0.95

    def __post_init__(self):
        if isinstance(self.pattern, (str, os.PathLike)):
            self.pattern_source = str(self.pattern)
            self.pattern = load(self.pattern)
        else:
            self.pattern_source = None
        if not isinstance(self.pattern, Hypergraph):
            raise ValueError("pattern must be an s-uniform hypergraph document")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.n:
            raise ValueError("n list is empty")
        if (self.t is None) == (self.c is None):
            raise ValueError("give exactly one of an explicit t list or a c list")
        if self.t is not None and any(t < 0 for t in self.t):
            raise ValueError("t must be non-negative")
        if self.workers is None:
            self.workers = os.cpu_count() or 1

    @classmethod
    def from_dict(cls, doc: dict, base: str | os.PathLike | None = None) -> "ExperimentConfig":
        doc = dict(doc)
        pattern = doc.pop("pattern")
        if isinstance(pattern, dict):
            pattern = parse(json.dumps(pattern))
        elif base is not None and not os.path.isabs(pattern):
            pattern = os.path.join(base, pattern)
        if isinstance(doc.get("kappa"), dict):
            doc["kappa"] = Fraction(doc["kappa"]["num"], doc["kappa"]["den"])
        return cls(pattern=pattern, **doc)

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh), base=os.path.dirname(os.path.abspath(path)))

    def resolved_kappa(self) -> Fraction | float:
        if self.kappa == "auto":
            return strategy_exponent(self.strategy, self.pattern, self.r)
        if isinstance(self.kappa, str):
            return Fraction(self.kappa)
        return self.kappa

    def cells(self) -> list["Cell"]:
        out = []
        if self.t is not None:
            for n in self.n:
                out.extend(Cell(n, int(t), None) for t in self.t)
        else:
            kappa = float(self.resolved_kappa())
            for n in self.n:
                out.extend(Cell(n, math.ceil(c * float(n) ** kappa), c) for c in self.c)
        return out

    def echo(self) -> dict:
        kappa = self.kappa
        if isinstance(kappa, Fraction):
            kappa = {"num": kappa.numerator, "den": kappa.denominator}
        return {
            "pattern": self.pattern_source or json.loads(serialize(self.pattern)),
            "r": self.r,
            "strategy": self.strategy,
            "params": self.params,
            "n": self.n,
            "t": self.t,
            "c": self.c,
            "kappa": kappa,
            "trials": self.trials,
            "seed": self.seed,
            "level": self.level,
        }


@dataclass(frozen=True)
class Cell:
    n: int
    t: int
    c: float | None


@dataclass
class CellResult:
    n: int
    t: int
    c: float | None
    trials: int
    successes: int
    p_hat: float
    ci_low: float
    ci_high: float
    mean_rounds_success: float | None
    seed: int

    def row(self) -> list:
        return [
            self.n, self.t, "" if self.c is None else self.c, self.trials, self.successes,
            self.p_hat, self.ci_low, self.ci_high,
            "" if self.mean_rounds_success is None else self.mean_rounds_success, self.seed,
        ]


@dataclass
class ExperimentResult:
    records: list[CellResult]
    manifest: dict

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rec in self.records:
            w.writerow(rec.row())
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"records": [asdict(r) for r in self.records], "manifest": self.manifest}, indent=2)


# ---------------------------------------------------------------------------
# execution

def trial_seed(master: int, cell_index: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(master, spawn_key=(cell_index, trial))


def _run_trials(job: tuple) -> list[tuple[bool, int]]:
    """Worker entry point: run a contiguous block of trials of one cell."""
    pattern_text, r, name, params, n, t, master, cell_index, lo, hi = job
    pattern = parse(pattern_text)
    out = []
    for i in range(lo, hi):
        strategy = build_strategy(name, pattern, r, params)
        config = ProcessConfig(n=n, r=r, s=pattern.s, seed=0, t_max=t)
        rng = np.random.Generator(np.random.PCG64(trial_seed(master, cell_index, i)))
        res = run(config, strategy, rng=rng)
        if res.success and not contains_copy(res.state.hypergraph, pattern):
            raise SoundnessError(
                f"{name} claimed success at n={n}, t={t}, trial {i} but the host has no copy"
            )
        out.append((res.success, res.rounds_used))
    return out


def _blocks(trials: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, trials))
    step = math.ceil(trials / parts)
    return [(lo, min(lo + step, trials)) for lo in range(0, trials, step)]


def estimate_success(config: ExperimentConfig, cell: Cell, cell_index: int = 0,
                     pool: ProcessPoolExecutor | None = None) -> CellResult:
    """Run ``config.trials`` independent trials of one cell; every success is oracle-checked."""
    probe = build_strategy(config.strategy, config.pattern, config.r, config.params)
    try:
        probe.start(ProcessConfig(n=cell.n, r=config.r, s=config.pattern.s, seed=0, t_max=cell.t))
    except StrategyMismatch:
        raise
    except ValueError as exc:
        raise InfeasibleCell(str(exc)) from exc
    text = serialize(config.pattern)
    parts = 1 if pool is None else 4 * (config.workers or 1)
    jobs = [
        (text, config.r, config.strategy, config.params, cell.n, cell.t, config.seed, cell_index, lo, hi)
        for lo, hi in _blocks(config.trials, parts)
    ]
    mapper = map if pool is None else pool.map
    outcomes = [o for block in mapper(_run_trials, jobs) for o in block]
    wins = [rounds for ok, rounds in outcomes if ok]
    k = len(wins)
    lo, hi = wilson_interval(k, config.trials, config.level)
    return CellResult(
        n=cell.n, t=cell.t, c=cell.c, trials=config.trials, successes=k, p_hat=k / config.trials,
        ci_low=lo, ci_high=hi, mean_rounds_success=(sum(wins) / k) if k else None, seed=config.seed,
    )


def quantile_estimates(records: list[CellResult], target: float = 0.9) -> dict:
    """Per n, the smallest simulated t whose estimated success rate reaches ``target``."""
    out = {}
    for n in sorted({r.n for r in records}):
        hits = [r.t for r in records if r.n == n and r.p_hat >= target]
        out[str(n)] = min(hits) if hits else None
    return out


def sweep(config: ExperimentConfig) -> ExperimentResult:
    """Evaluate every cell of the grid and, if ``config.out`` is set, write CSV plus manifest."""
    started = time.perf_counter()
    records, skipped = [], []
    cells = config.cells()
    pool = ProcessPoolExecutor(max_workers=config.workers) if config.workers > 1 else None
    try:
        for idx, cell in enumerate(cells):
            try:
                records.append(estimate_success(config, cell, idx, pool))
            except InfeasibleCell as exc:
                log.warning("skipping cell n=%s t=%s: %s", cell.n, cell.t, exc)
                skipped.append({"n": cell.n, "t": cell.t, "reason": str(exc)})
            log.info("cell %d/%d done", idx + 1, len(cells))
    finally:
        if pool is not None:
            pool.shutdown()
    manifest = {
        "config": config.echo(),
        "version": __version__,
        "wall_time_s": round(time.perf_counter() - started, 3),
        "skipped": skipped,
        "estimated_t_at_p_0.9": {
            "note": "estimate: smallest simulated t with p_hat >= 0.9, not an interpolated quantile",
            "values": quantile_estimates(records),
        },
    }
    result = ExperimentResult(records, manifest)
    if config.out:
        write_result(result, config.out)
    return result


def write_result(result: ExperimentResult, out: str | os.PathLike, fmt: str = "csv") -> Path:
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path.write_text(result.to_json(), encoding="utf-8")
    else:
        path.write_text(result.csv_text(), encoding="utf-8")
        sidecar = path.with_name(path.name + ".manifest.json")
        sidecar.write_text(json.dumps(result.manifest, indent=2), encoding="utf-8")
    return path
