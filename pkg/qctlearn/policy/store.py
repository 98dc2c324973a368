"""
Policy model files.

Layout::

    [magic b"QCTM" (4B)][length (4B big endian)][CRC32 (4B big endian)][payload]

The payload is MessagePack: ``{"header": ModelHeader, "layers": [{"w": bytes,
"b": bytes}, ...]}`` where each array is little-endian float64 ('<f8'),
row-major, shaped by ``header.layer_dims``.
"""
import struct
import zlib
from pathlib import Path
from typing import Optional, Union

import msgpack  # type: ignore
import numpy as np
from pydantic import ValidationError

from qctlearn.arch.graph import ArchGraph
from qctlearn.exceptions import CorruptModelError, ModelVersionError
from qctlearn.models import ModelHeader
from qctlearn.policy.network import FORMAT_VERSION, PolicyModel
from qctlearn.utils.logging import get_logger

logger = get_logger("ModelStore")

MAGIC = b"QCTM"
_FRAME = struct.Struct(">II")


def dumps(m: PolicyModel) -> bytes:
    layers = [
        {"w": w.astype("<f8").tobytes(), "b": b.astype("<f8").tobytes()}
        for w, b in zip(m.weights, m.biases)
    ]
    payload = msgpack.packb({"header": m.header.model_dump(mode="json"), "layers": layers})
    crc = zlib.crc32(payload) & 0xffffffff
    return MAGIC + _FRAME.pack(len(payload), crc) + payload


def loads(data: bytes) -> PolicyModel:
    if len(data) < len(MAGIC) + _FRAME.size or data[:len(MAGIC)] != MAGIC:
        raise CorruptModelError("not a policy model file (bad magic or truncated header)")
    length, stored_crc = _FRAME.unpack_from(data, len(MAGIC))
    payload = data[len(MAGIC) + _FRAME.size:]
    if len(payload) < length:
        raise CorruptModelError(f"truncated model file: {len(payload)} of {length} payload bytes")
    payload = payload[:length]
    if zlib.crc32(payload) & 0xffffffff != stored_crc:
        raise CorruptModelError("model file checksum mismatch")

    try:
        doc = msgpack.unpackb(payload)
        raw_header = doc["header"]
        version = raw_header.get("format_version")
    except (ValueError, KeyError, TypeError, AttributeError, msgpack.exceptions.UnpackException) as e:
        raise CorruptModelError(f"unreadable model payload: {e}") from e
    if version != FORMAT_VERSION:
        raise ModelVersionError(f"model format version {version} is not supported (expected {FORMAT_VERSION})")

    try:
        header = ModelHeader.model_validate(raw_header)
    except ValidationError as e:
        raise CorruptModelError(f"invalid model header: {e}") from e

    dims = header.layer_dims
    layers = doc.get("layers", [])
    if len(layers) != len(dims) - 1:
        raise CorruptModelError(f"model has {len(layers)} layers, header declares {len(dims) - 1}")
    weights, biases = [], []
    try:
        for i, layer in enumerate(layers):
            weights.append(np.frombuffer(layer["w"], dtype="<f8").reshape(dims[i], dims[i + 1]).astype(np.float64))
            biases.append(np.frombuffer(layer["b"], dtype="<f8").reshape(dims[i + 1]).astype(np.float64))
    except (KeyError, ValueError) as e:
        raise CorruptModelError(f"weight arrays do not match the header: {e}") from e
    return PolicyModel(header, weights, biases)


def save(m: PolicyModel, path: Union[str, Path]) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_bytes(dumps(m))
    logger.info(f"Saved {m!r} to {p}")
    return p


def load(path: Union[str, Path], graph: Optional[ArchGraph] = None, n_l: Optional[int] = None) -> PolicyModel:
    """
    Reads a model file; with `graph` (and optionally `n_l`) the model must
    match it.

    Raises:
        CorruptModelError: bad magic, truncation, checksum or shape errors.
        ModelVersionError: unsupported format version.
        ModelMismatchError: metadata does not match `graph` / `n_l`.
    """
    m = loads(Path(path).read_bytes())
    if graph is not None:
        m.check_compatible(graph, n_l)
    return m
