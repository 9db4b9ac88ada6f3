from concurrent.futures import ProcessPoolExecutor

from SwaptionPricer.Pricers.BsdePricer import BsdePricer
from SwaptionPricer.Pricers.IPricer import IPricer
from SwaptionPricer.Pricers.IPricer import RunResult
from SwaptionPricer.Pricers.LongstaffSchwartz import LongstaffSchwartzPricer
from SwaptionPricer.Pricers.MonteCarlo import MonteCarloPricer
from SwaptionPricer.Simulation.Paths import RngSpec
import SwaptionPricer.Util.Logs as Logs

################################################################################


_pricer_map = {
    "mc": lambda: MonteCarloPricer(),
    "ls": lambda: LongstaffSchwartzPricer(),
    "bsde-dense": lambda: BsdePricer("dnn"),
    "bsde-tnn": lambda: BsdePricer("tnn"),
}

METHODS = tuple(_pricer_map)

################################################################################


def get_pricer(config) -> IPricer:
    alias = config.method
    if alias not in _pricer_map:
        raise IPricer.Unsupported(
            f"Incorrect method alias '{alias}'. Supported methods: {METHODS}"
        )
    pricer = _pricer_map[alias]()
    pricer.init(config)
    Logs.dev(f"'{alias}' pricer constructed")
    return pricer


def run_seeds(config) -> list[RngSpec]:
    """Per-run streams derived from (master seed, run index)."""
    master = RngSpec(config.training.seed, config.block_size)
    return [master.derive(run_id) for run_id in range(config.training.runs)]


def run_all(config, jobs: int = 1) -> list[RunResult]:
    """All independent runs of config; in a process pool when jobs > 1."""
    seeds = run_seeds(config)
    if jobs <= 1 or len(seeds) == 1:
        pricer = get_pricer(config)
        return [pricer.run(run_id, rng) for run_id, rng in enumerate(seeds)]

    with ProcessPoolExecutor(
        max_workers=jobs,
        initializer=Logs.detach,
        initargs=(Logs.is_verbose(),),
    ) as pool:
        futures = [
            pool.submit(_run_one, config, run_id, rng)
            for run_id, rng in enumerate(seeds)
        ]
        return [f.result() for f in futures]


def _run_one(config, run_id: int, rng: RngSpec) -> RunResult:
    return get_pricer(config).run(run_id, rng)
