import json

import numpy as np

from SwaptionPricer.NN.Network import ArchSpec
from SwaptionPricer.NN.Network import build_network
from SwaptionPricer.NN.Network import Network

################################################################################


FORMAT_VERSION = 1


class CheckpointError(ValueError):
    pass


def save_checkpoint(path: str, net: Network, seed: int) -> None:
    if net.arch is None:
        raise CheckpointError("only networks built from an ArchSpec can be saved")
    with open(path, "wb") as f:
        np.savez(
            f,
            format_version=np.array(FORMAT_VERSION, dtype="<i8"),
            arch=np.array(json.dumps(net.arch.to_dict(), sort_keys=True)),
            seed=np.array(seed, dtype="<u8"),
            params=net.flat_parameters().astype("<f8"),
            time_origin=np.array(net.time_origin, dtype="<f8"),
        )


def load_checkpoint(path: str) -> tuple[Network, int]:
    with np.load(path, allow_pickle=False) as archive:
        version = int(archive["format_version"])
        if version != FORMAT_VERSION:
            raise CheckpointError(
                f"checkpoint format {version} is not supported "
                f"(expected {FORMAT_VERSION})"
            )
        arch = ArchSpec.from_dict(json.loads(str(archive["arch"])))
        seed = int(archive["seed"])
        params = archive["params"].astype(np.float64)
        # absent in files written before networks carried a time origin
        time_origin = (
            float(archive["time_origin"])
            if "time_origin" in archive.files
            else 0.0
        )
    net = build_network(arch)
    net.load_flat_parameters(params)
    net.time_origin = time_origin
    return net, seed
