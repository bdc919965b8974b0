"""Self-describing JSON checkpoints.

Header carries the structural fields; arrays are flat row-major float
lists keyed "block<k>.<field>". json round-trips IEEE doubles exactly
(shortest-repr decimals), so save -> load is bit-exact on every
parameter. Loaders reject unknown format versions.
"""

import json

import numpy as np

from .errors import CorruptCheckpoint, FormatVersionMismatch
from .network import DetectorNetwork, IterationBlock, MultilevelSigmoid, _BLOCK_FIELDS

FORMAT_VERSION = 1


def write_document(path, header: dict, arrays: dict):
    doc = dict(header)
    doc["format_version"] = FORMAT_VERSION
    doc["arrays"] = {name: np.asarray(a, dtype=np.float64).ravel().tolist()
                     for name, a in arrays.items()}
    with open(path, "w", encoding="ascii") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def read_document(path) -> dict:
    try:
        with open(path, "r", encoding="ascii") as fh:
            doc = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError, OSError) as exc:
        raise CorruptCheckpoint(f"{path}: {exc}") from exc
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise CorruptCheckpoint(f"{path}: missing format_version")
    if doc["format_version"] != FORMAT_VERSION:
        raise FormatVersionMismatch(
            f"{path}: format_version {doc['format_version']!r}, expected {FORMAT_VERSION}")
    return doc


def save_checkpoint(net: DetectorNetwork, path):
    header = {
        "n": net.n,
        "M": len(net.levels),
        "K": net.k_iter,
        "xi_size": net.xi_size,
        "head": net.head,
        "activation": {
            "shifts": list(net.activation.shifts),
            "offset": net.activation.offset,
            "level_scale": net.activation.level_scale,
        },
        "seed": net.seed,
        "levels": list(net.levels),
        "hidden_activation": net.hidden,
        "init_policy": net.init_policy,
    }
    write_document(path, header, dict(net.parameters()))


def load_checkpoint(path) -> DetectorNetwork:
    doc = read_document(path)
    try:
        n = int(doc["n"])
        m = int(doc["M"])
        k_iter = int(doc["K"])
        xi = int(doc["xi_size"])
        head = doc["head"]
        act = doc["activation"]
        levels = tuple(int(v) for v in doc["levels"])
        activation = MultilevelSigmoid(act["shifts"], act["offset"], act["level_scale"])
        if len(levels) != m:
            raise CorruptCheckpoint(f"{path}: M={m} but {len(levels)} levels")
        arrays = doc["arrays"]
        out_dim = n * m if head == "one_hot" else n
        shapes = {
            "W1_a": (xi, n), "W1_b": (xi, n), "W1_c": (xi, n), "W1_d": (xi, n),
            "bi1": (xi,), "W2": (out_dim, xi), "bias2": (out_dim,),
            "W3": (n, xi), "bias3": (n,),
        }
        blocks = []
        for k in range(k_iter):
            vals = []
            for field in _BLOCK_FIELDS:
                flat = np.array(arrays[f"block{k}.{field}"], dtype=np.float64)
                shape = shapes[field]
                if flat.size != int(np.prod(shape)):
                    raise CorruptCheckpoint(
                        f"{path}: block{k}.{field} has {flat.size} values, "
                        f"expected {int(np.prod(shape))}")
                vals.append(flat.reshape(shape))
            blocks.append(IterationBlock(*vals))
        return DetectorNetwork(
            n, k_iter, xi, levels, blocks, activation, head=head,
            hidden=doc.get("hidden_activation", "multilevel"),
            init_policy=doc.get("init_policy", "zf"), seed=int(doc.get("seed", 0)))
    except CorruptCheckpoint:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptCheckpoint(f"{path}: {exc!r}") from exc
