import pytest

from SwaptionPricer.Pricers.IPricer import IPricer
from SwaptionPricer.Pricers.PricerManager import get_pricer
from SwaptionPricer.Pricers.PricerManager import METHODS
from SwaptionPricer.Pricers.PricerManager import run_all
from SwaptionPricer.Pricers.PricerManager import run_seeds
from SwaptionPricer.Util.ExperimentConfig import ExperimentConfig


def _mc_config(runs=1):
    return ExperimentConfig.from_dict(
        {
            "method": "mc",
            "model": {"factors": 1},
            "grid": {"t_end": 2.0, "n_steps": 20},
            "instrument": {"tenor": [1.0, 2.0]},
            "training": {"seed": 3, "runs": runs},
            "mc": {"n_paths": 400, "block_size": 128},
        }
    )


def test_methods():
    assert METHODS == ("mc", "ls", "bsde-dense", "bsde-tnn")


def test_unknown_method():
    config = _mc_config()
    object.__setattr__(config, "method", "sabr")
    with pytest.raises(IPricer.Unsupported):
        get_pricer(config)


def test_pricer_parameter_counts():
    config = ExperimentConfig.from_dict({"method": "bsde-tnn", "training": {"epochs": 8}})
    assert get_pricer(config).param_count() == 897
    assert get_pricer(_mc_config()).param_count() is None


def test_run_seeds_are_distinct_and_stable():
    seeds = [s.seed for s in run_seeds(_mc_config(runs=3))]
    assert len(set(seeds)) == 3
    assert seeds == [s.seed for s in run_seeds(_mc_config(runs=3))]
    assert run_seeds(_mc_config(runs=3))[0].block_size == 128


def test_independent_runs():
    results = run_all(_mc_config(runs=2))
    assert [r.run_id for r in results] == [0, 1]
    assert results[0].price != results[1].price
    assert all(r.n_paths == 400 for r in results)
    assert run_all(_mc_config(runs=2))[1].price == results[1].price


def test_bsde_run_produces_trace():
    config = ExperimentConfig.from_dict(
        {
            "method": "bsde-dense",
            "model": {"factors": 1},
            "grid": {"t_end": 2.0, "n_steps": 20},
            "instrument": {"tenor": [1.0, 2.0]},
            "arch": {"widths": [4, 4]},
            "training": {"epochs": 4, "batch_size": 4},
        }
    )
    (result,) = run_all(config)
    assert len(result.trace.records) == 4
    assert result.final_loss == result.trace.final_loss
    assert result.price == result.trace.final_price
