import sys
import traceback

from SwaptionPricer.NN.Checkpoint import save_checkpoint
from SwaptionPricer.NN.Network import arch_param_count
from SwaptionPricer.NN.Network import ArchSpec

# Pricers
from SwaptionPricer.Pricers.IPricer import IPricer
from SwaptionPricer.Pricers.IPricer import RunResult
from SwaptionPricer.Pricers.PricerManager import run_all
from SwaptionPricer.Pricers.PricerManager import run_seeds
from SwaptionPricer.Simulation.Paths import dump_paths
from SwaptionPricer.Simulation.Paths import RngSpec
from SwaptionPricer.Simulation.Paths import simulate_paths

# Other
from SwaptionPricer.Util.Bench import load_set
from SwaptionPricer.Util.Bench import run_bench
from SwaptionPricer.Util.Bench import set_from_configs
from SwaptionPricer.Util.Bench import summarize
from SwaptionPricer.Util.ExperimentConfig import ConfigError
from SwaptionPricer.Util.ExperimentConfig import ExperimentConfig
import SwaptionPricer.Util.Logs as Logs
from SwaptionPricer.Util.ParseArgs import overrides_from
from SwaptionPricer.Util.ParseArgs import parse_args
from SwaptionPricer.Util.PathInfo import PathInfo
from SwaptionPricer.Util.Results import summary_frame
from SwaptionPricer.Util.Results import write_frame
from SwaptionPricer.Util.Results import write_manifest
from SwaptionPricer.Util.Results import write_trace

################################################################################


EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


class CLI:
    def __init__(self, argv: list[str] | None = None):
        self.argv = argv

    def start(self) -> int:
        try:
            self._prologue()
            return self._commands[self.args.command](self)
        except (ConfigError, PathInfo.NotFound, IPricer.Unsupported) as e:
            Logs.error(f"Invalid configuration. {e}")
            return EXIT_CONFIG
        except Exception as e:
            Logs.error(
                f"Unexpected error. Emergency termination of the program.\n{e}"
            )
            Logs.dev(traceback.format_exc())
            return EXIT_RUNTIME
        finally:
            Logs.close()

    def _prologue(self) -> None:
        self.args = parse_args(self.argv)
        self.path_info = PathInfo()
        if hasattr(self.args, "out_dir"):
            self.path_info.set_out_dir(self.args.out_dir)
        Logs.init(self.path_info.logs_path, self.args.verbose)
        Logs.dev(f"arguments: {vars(self.args)}")

    def _load_config(self, source: str) -> ExperimentConfig:
        config = ExperimentConfig.load(
            source, self.path_info, overrides_from(self.args)
        )
        Logs.user(
            f"config '{config.name}' loaded, method '{config.method}', "
            f"hash {config.config_hash()[:12]}"
        )
        return config

    ############################################################################

    # Commands

    def _simulate(self) -> int:
        config = self._load_config(self.args.config)
        rng = RngSpec(config.training.seed, config.block_size)
        Logs.user(f"Simulating {self.args.paths} paths")
        batch = simulate_paths(
            config.model_params(), config.time_grid(), self.args.paths, rng
        )
        path = self.path_info.paths_dump_path(self.args.binary)
        dump_paths(batch, path, self.args.binary)
        write_manifest(
            self.path_info.manifest_path(), "simulate", [config], [rng.seed]
        )
        Logs.user(f"paths written to '{path}'")
        return EXIT_OK

    def _price(self) -> int:
        config = self._load_config(self.args.config)
        results = run_all(config, self.args.jobs)
        for result in results:
            self._save_run(config, result)
        write_frame(
            summary_frame(config.method, results),
            self.path_info.summary_path(),
        )
        summary = summarize(config.method, results)
        band = (
            "undefined"
            if summary.half_width is None
            else f"+- {summary.half_width:.6f}"
        )
        Logs.user(
            f"{config.method} price {summary.price:.6f} (95% band {band}) "
            f"over {summary.runs} run(s)"
        )
        write_manifest(
            self.path_info.manifest_path(),
            "price",
            [config],
            [r.seed for r in results],
            {
                "price": summary.price,
                "stderr": summary.stderr,
                "ci_half_width": summary.half_width,
            },
        )
        return EXIT_OK

    def _bench(self) -> int:
        if self.args.set is not None:
            bench = load_set(
                self.args.set, self.path_info, overrides_from(self.args)
            )
        else:
            bench = set_from_configs(
                [self._load_config(c) for c in self.args.config]
            )
        frame = run_bench(bench, self.args.params_only, self.args.jobs)
        write_frame(frame, self.path_info.bench_path())
        seeds = [s.seed for e in bench.entries for s in run_seeds(e.config)]
        write_manifest(
            self.path_info.manifest_path(),
            "bench",
            [e.config for e in bench.entries],
            seeds,
        )
        failed = int((frame["error"] != "").sum())
        Logs.user(
            f"bench of {len(frame)} entries written to "
            f"'{self.path_info.bench_path()}', {failed} failed"
        )
        return EXIT_OK

    def _params(self) -> int:
        input_width = 2 * self.args.factors + 1
        for text in self.args.arch:
            try:
                arch = ArchSpec.parse(text, self.args.chi, input_width)
            except ValueError as e:
                raise ConfigError("arch", str(e)) from e
            Logs.user(
                f"{arch.label} chi={arch.chi}: {arch_param_count(arch)} "
                "parameters"
            )
        return EXIT_OK

    def _save_run(self, config: ExperimentConfig, result: RunResult) -> None:
        trace = result.trace
        if trace is None:
            return
        write_trace(trace, self.path_info.trace_path(result.run_id))
        if not config.training.save_networks:
            return
        for m, net in enumerate(trace.networks):
            save_checkpoint(
                self.path_info.checkpoint_path(result.run_id, m),
                net,
                result.seed,
            )

    _commands = {
        "simulate": _simulate,
        "price": _price,
        "bench": _bench,
        "params": _params,
    }

    argv: list[str] | None
    args: object
    path_info: PathInfo


def main():
    cli = CLI()
    sys.exit(cli.start())


if __name__ == "__main__":
    main()
