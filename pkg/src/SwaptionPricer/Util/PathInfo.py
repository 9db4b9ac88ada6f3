import os

################################################################################


_package_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
_data_dir = os.path.join(_package_dir, "data")

config_extension = "json"

################################################################################


def default_curve_path() -> str:
    return os.path.join(_data_dir, "discount_curve.csv")


def experiments_dir() -> str:
    return os.path.join(_data_dir, "experiments")


def _resolve(name: str, folder: str, kind: str) -> str:
    if os.path.isfile(name):
        return os.path.abspath(name)
    candidate = os.path.join(folder, f"{name}.{config_extension}")
    if os.path.isfile(candidate):
        return candidate
    raise PathInfo.NotFound(
        f"{kind} '{name}' is neither a file nor a bundled name in '{folder}'"
    )


################################################################################


class PathInfo:
    # Exceptions
    class NotFound(ValueError):
        pass

    # API
    def __init__(self):
        self.package_dir = _package_dir
        self.data_dir = _data_dir
        self.experiments_dir = experiments_dir()
        self.sets_dir = os.path.join(self.experiments_dir, "sets")
        self.curve_path = default_curve_path()
        self.out_dir = ""
        self.logs_path = None

    def set_out_dir(self, path: str) -> None:
        self.out_dir = os.path.abspath(path)
        os.makedirs(self.out_dir, exist_ok=True)
        self.logs_path = os.path.join(self.out_dir, "run.log")

    def resolve_config(self, name: str) -> str:
        return _resolve(name, self.experiments_dir, "config")

    def resolve_set(self, name: str) -> str:
        return _resolve(name, self.sets_dir, "config set")

    def resolve_curve(self, path: str | None) -> str:
        if path is None:
            return self.curve_path
        if os.path.isfile(path):
            return os.path.abspath(path)
        bundled = os.path.join(self.data_dir, path)
        if os.path.isfile(bundled):
            return bundled
        raise PathInfo.NotFound(f"curve file '{path}' does not exist")

    def bundled_configs(self) -> list[str]:
        names = os.listdir(self.experiments_dir)
        return sorted(
            os.path.join(self.experiments_dir, n)
            for n in names
            if n.endswith(f".{config_extension}")
        )

    def trace_path(self, run_id: int) -> str:
        return os.path.join(self.out_dir, f"trace_run{run_id:03d}.csv")

    def summary_path(self) -> str:
        return os.path.join(self.out_dir, "summary.csv")

    def manifest_path(self) -> str:
        return os.path.join(self.out_dir, "manifest.json")

    def bench_path(self) -> str:
        return os.path.join(self.out_dir, "bench.csv")

    def paths_dump_path(self, binary: bool) -> str:
        return os.path.join(self.out_dir, "paths.npz" if binary else "paths.csv")

    def checkpoint_path(self, run_id: int, network: int) -> str:
        return os.path.join(
            self.out_dir, f"network_run{run_id:03d}_m{network}.npz"
        )

    # set by __init__
    package_dir: str
    data_dir: str
    experiments_dir: str
    sets_dir: str
    curve_path: str

    # set by program args
    out_dir: str
    logs_path: str | None
