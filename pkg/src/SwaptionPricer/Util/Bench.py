"""Comparison table over a set of experiments.

A set file is JSON:

    {
      "base": "ber_k000",
      "thresholds": [0.110, 0.120],
      "entries": [
        {"label": "TNN(64,64)", "overrides": {"method": "bsde-tnn"}},
        ...
      ]
    }

Entries without "base" inherit the set's one. A failing entry is recorded in
its row and the bench moves on.
"""

import json
import math
import time
import traceback
from dataclasses import dataclass
from dataclasses import field

import numpy as np
import pandas as pd

from SwaptionPricer.Model.Swaption import ExerciseStyle
from SwaptionPricer.NN.Network import arch_param_count
from SwaptionPricer.Pricers.IPricer import RunResult
from SwaptionPricer.Pricers.PricerManager import run_all
from SwaptionPricer.Pricers.Training import chain_epochs_to_threshold
from SwaptionPricer.Pricers.Training import epochs_to_threshold
from SwaptionPricer.Pricers.Training import price_from_traces
from SwaptionPricer.Pricers.Training import RunSummary
from SwaptionPricer.Util.ExperimentConfig import ConfigError
from SwaptionPricer.Util.ExperimentConfig import ExperimentConfig
import SwaptionPricer.Util.Logs as Logs
from SwaptionPricer.Util.PathInfo import PathInfo

################################################################################


DEFAULT_THRESHOLDS = (0.110, 0.120)


@dataclass(frozen=True)
class BenchEntry:
    label: str
    config: ExperimentConfig


@dataclass(frozen=True)
class BenchSet:
    entries: list[BenchEntry]
    thresholds: tuple[float, ...] = field(default=DEFAULT_THRESHOLDS)


def load_set(
    source: str, path_info: PathInfo, overrides=None, environ=None
) -> BenchSet:
    """Entries of a set file; command-line overrides win over the entry ones."""
    try:
        path = path_info.resolve_set(source)
    except PathInfo.NotFound as e:
        raise ConfigError("set", str(e)) from e
    with open(path, "r") as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError("set", f"'{path}' is not valid JSON: {e}") from e

    unknown = sorted(set(raw) - {"base", "thresholds", "entries"})
    if unknown:
        raise ConfigError(f"set.{unknown[0]}", "unknown key")
    entries = []
    for i, item in enumerate(raw.get("entries", [])):
        base = item.get("base", raw.get("base"))
        if base is None:
            raise ConfigError(f"set.entries[{i}].base", "missing")
        try:
            config = ExperimentConfig.load(
                base,
                path_info,
                {**item.get("overrides", {}), **(overrides or {})},
                environ,
            )
        except ConfigError as e:
            raise ConfigError(f"set.entries[{i}].{e.field}", e.message) from e
        entries.append(BenchEntry(item.get("label", config.name), config))
    thresholds = tuple(
        float(t) for t in raw.get("thresholds", DEFAULT_THRESHOLDS)
    )
    return BenchSet(entries, thresholds)


def set_from_configs(configs: list[ExperimentConfig]) -> BenchSet:
    return BenchSet([BenchEntry(c.name, c) for c in configs])


################################################################################


def entry_param_count(config: ExperimentConfig) -> int | None:
    if not config.method.startswith("bsde"):
        return None
    kind = "tnn" if config.method == "bsde-tnn" else "dnn"
    return arch_param_count(config.arch_spec(kind))


def summarize(method: str, results: list[RunResult]) -> RunSummary:
    if method.startswith("bsde"):
        return price_from_traces([r.trace for r in results])
    if len(results) == 1:
        r = results[0]
        return RunSummary(r.price, r.stderr, 1.96 * r.stderr, 1)
    prices = np.array([r.price for r in results])
    stderr = float(prices.std(ddof=1) / math.sqrt(prices.size))
    return RunSummary(float(prices.mean()), stderr, 1.96 * stderr, prices.size)


def run_bench(
    bench: BenchSet, params_only: bool = False, jobs: int = 1
) -> pd.DataFrame:
    if not bench.entries:
        raise ConfigError("bench", "empty config set")
    rows = [
        _bench_row(entry, bench.thresholds, params_only, jobs)
        for entry in bench.entries
    ]
    frame = pd.DataFrame(rows, columns=_columns(bench.thresholds))
    frame["param_count"] = frame["param_count"].astype("Int64")
    return frame


def _columns(thresholds) -> list[str]:
    return [
        "label",
        "method",
        "arch",
        "param_count",
        "runs",
        "price",
        "stderr",
        "ci_half_width",
        "wall_clock",
        *(f"epochs_to_{t:.3f}" for t in thresholds),
        "error",
    ]


def _bench_row(
    entry: BenchEntry, thresholds, params_only: bool, jobs: int
) -> dict:
    config = entry.config
    count = entry_param_count(config)
    row = {
        "label": entry.label,
        "method": config.method,
        "arch": _arch_label(config),
        "param_count": count,
        "runs": config.training.runs,
        "price": math.nan,
        "stderr": math.nan,
        "ci_half_width": math.nan,
        "wall_clock": math.nan,
        "error": "",
    }
    for t in thresholds:
        row[f"epochs_to_{t:.3f}"] = math.nan
    if params_only:
        return row

    Logs.user(f"bench entry '{entry.label}' ({config.method})")
    start = time.perf_counter()
    try:
        results = run_all(config, jobs)
    except Exception as e:
        Logs.error(f"bench entry '{entry.label}' failed: {e}")
        Logs.dev(traceback.format_exc())
        row["error"] = f"{type(e).__name__}: {e}"
        return row
    row["wall_clock"] = time.perf_counter() - start

    summary = summarize(config.method, results)
    row["price"], row["stderr"] = summary.price, summary.stderr
    row["ci_half_width"] = (
        math.nan if summary.half_width is None else summary.half_width
    )
    if config.method.startswith("bsde"):
        chain = config.swaption().style is ExerciseStyle.BERMUDAN
        for t in thresholds:
            row[f"epochs_to_{t:.3f}"] = _mean_epochs(results, t, chain)
    return row


def _mean_epochs(results: list[RunResult], threshold: float, chain: bool):
    """Mean over runs that reached threshold; a Bermudan chain counts all
    its networks."""
    counts = [
        chain_epochs_to_threshold(r.trace, threshold)
        if chain
        else epochs_to_threshold(r.trace, threshold)
        for r in results
    ]
    reached = [c for c in counts if c is not None]
    return float(np.mean(reached)) if reached else math.nan


def _arch_label(config: ExperimentConfig) -> str:
    if not config.method.startswith("bsde"):
        return ""
    kind = "tnn" if config.method == "bsde-tnn" else "dnn"
    return config.arch_spec(kind).label
