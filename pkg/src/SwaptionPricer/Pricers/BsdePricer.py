from dataclasses import replace

from SwaptionPricer.Model.Swaption import ExerciseStyle
from SwaptionPricer.NN.Network import arch_param_count
from SwaptionPricer.Pricers.BermudanBSDE import train_bermudan
from SwaptionPricer.Pricers.EuropeanBSDE import train_european
from SwaptionPricer.Pricers.IPricer import IPricer
from SwaptionPricer.Pricers.IPricer import RunResult
from SwaptionPricer.Simulation.Paths import RngSpec

################################################################################


class BsdePricer(IPricer):
    """Deep-BSDE pricer on dense ("dnn") or MPO ("tnn") hidden layers."""

    def __init__(self, kind: str):
        self.kind = kind

    def init(self, config) -> None:
        self.params = config.model_params()
        self.spec = config.swaption()
        self.grid = config.time_grid()
        self.arch = config.arch_spec(self.kind)
        self.train = config.train_config()

    def run(self, run_id: int, rng: RngSpec) -> RunResult:
        cfg = replace(self.train, seed=rng.seed)
        if self.spec.style is ExerciseStyle.BERMUDAN:
            trace = train_bermudan(self.params, self.spec, self.grid, self.arch, cfg)
        else:
            trace = train_european(self.params, self.spec, self.grid, self.arch, cfg)
        return RunResult(
            run_id,
            rng.seed,
            trace.final_price,
            trace.final_stderr,
            trace.final_loss,
            n_paths=cfg.batch_size,
            trace=trace,
        )

    def param_count(self) -> int:
        return arch_param_count(self.arch)
