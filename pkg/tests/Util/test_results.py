import json

import pandas as pd

from SwaptionPricer.Pricers.IPricer import RunResult
from SwaptionPricer.Pricers.Training import EpochRecord
from SwaptionPricer.Pricers.Training import TrainTrace
from SwaptionPricer.Util.ExperimentConfig import ExperimentConfig
from SwaptionPricer.Util.Results import BSDE_SUMMARY_COLUMNS
from SwaptionPricer.Util.Results import ORACLE_SUMMARY_COLUMNS
from SwaptionPricer.Util.Results import summary_frame
from SwaptionPricer.Util.Results import write_frame
from SwaptionPricer.Util.Results import write_manifest
from SwaptionPricer.Util.Results import write_trace


def test_trace_csv(tmp_path):
    trace = TrainTrace(records=[EpochRecord(0, 0.1, 2.5e-3, 1e-2), EpochRecord(1, 0.105, 1e-3, 1e-2)])
    path = tmp_path / "trace.csv"
    write_trace(trace, str(path))
    assert path.read_text().splitlines() == [
        "epoch,price,loss,lr",
        "0,0.1,0.0025,0.01",
        "1,0.105,0.001,0.01",
    ]


def test_summary_frames():
    bsde = summary_frame("bsde-tnn", [RunResult(0, 7, 0.108, 1e-4, 2e-3)])
    assert list(bsde.columns) == BSDE_SUMMARY_COLUMNS
    assert bsde.iloc[0].final_loss == 2e-3

    oracle = summary_frame("mc", [RunResult(0, 7, 0.108, 1e-4, n_paths=1000)])
    assert list(oracle.columns) == ORACLE_SUMMARY_COLUMNS
    assert pd.isna(oracle.iloc[0].degree)


def test_write_frame_is_byte_stable(tmp_path):
    frame = pd.DataFrame({"a": [1, 2], "b": [0.1 + 0.2, 1.0 / 3.0]})
    first, second = tmp_path / "1.csv", tmp_path / "2.csv"
    write_frame(frame, str(first))
    write_frame(frame, str(second))
    assert first.read_bytes() == second.read_bytes()
    assert b"\r" not in first.read_bytes()


def test_manifest(tmp_path):
    config = ExperimentConfig.from_dict({"method": "mc"}, name="mc_test")
    path = tmp_path / "manifest.json"
    write_manifest(str(path), "price", [config], [11, 12], {"price": 0.1})
    manifest = json.loads(path.read_text())
    assert manifest["command"] == "price"
    assert manifest["seeds"] == [11, 12]
    assert manifest["price"] == 0.1
    assert manifest["configs"][0]["name"] == "mc_test"
    assert manifest["configs"][0]["hash"] == config.config_hash()
    assert {"numpy", "scipy", "pandas", "python"} <= set(manifest["versions"])
    assert "timestamp" in manifest
