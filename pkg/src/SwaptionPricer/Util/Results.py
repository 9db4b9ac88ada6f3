"""CSV and manifest writers.

CSV bodies depend only on the configuration and the seeds; timestamps and
versions are confined to manifest.json.
"""

import json
import platform
from datetime import datetime
from datetime import timezone
from importlib import metadata

import pandas as pd

from SwaptionPricer.Pricers.IPricer import RunResult
from SwaptionPricer.Pricers.Training import TrainTrace
from SwaptionPricer.Util.ExperimentConfig import ExperimentConfig

################################################################################


FLOAT_FORMAT = "%.12g"

TRACE_COLUMNS = ["epoch", "price", "loss", "lr"]
BSDE_SUMMARY_COLUMNS = ["run_id", "final_price", "final_loss", "seed"]
ORACLE_SUMMARY_COLUMNS = ["method", "degree", "n_paths", "price", "stderr", "seed"]


def write_frame(frame: pd.DataFrame, path: str) -> None:
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_trace(trace: TrainTrace, path: str) -> None:
    write_frame(trace.to_frame(), path)


def summary_frame(method: str, results: list[RunResult]) -> pd.DataFrame:
    if method.startswith("bsde"):
        rows = [
            {
                "run_id": r.run_id,
                "final_price": r.price,
                "final_loss": r.final_loss,
                "seed": r.seed,
            }
            for r in results
        ]
        return pd.DataFrame(rows, columns=BSDE_SUMMARY_COLUMNS)
    rows = [
        {
            "method": method,
            "degree": r.degree,
            "n_paths": r.n_paths,
            "price": r.price,
            "stderr": r.stderr,
            "seed": r.seed,
        }
        for r in results
    ]
    frame = pd.DataFrame(rows, columns=ORACLE_SUMMARY_COLUMNS)
    frame["degree"] = frame["degree"].astype("Int64")
    return frame


def package_versions() -> dict[str, str]:
    versions = {"python": platform.python_version()}
    for name in ("SwaptionPricer", "numpy", "scipy", "pandas"):
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def write_manifest(
    path: str,
    command: str,
    configs: list[ExperimentConfig],
    seeds: list[int],
    extra: dict | None = None,
) -> dict:
    manifest = {
        "command": command,
        "configs": [
            {
                "name": c.name,
                "hash": c.config_hash(),
                "config": c.to_dict(),
            }
            for c in configs
        ],
        "seeds": seeds,
        "versions": package_versions(),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    if extra:
        manifest.update(extra)
    with open(path, "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return manifest
