import struct
import zlib

import msgpack
import numpy as np
import pytest

from qctlearn.arch.graph import build_grid
from qctlearn.exceptions import CorruptModelError, ModelMismatchError, ModelVersionError
from qctlearn.policy import store


def _repack(data: bytes, mutate) -> bytes:
    payload = data[12:]
    doc = msgpack.unpackb(payload)
    mutate(doc)
    payload = msgpack.packb(doc)
    return store.MAGIC + struct.pack(">II", len(payload), zlib.crc32(payload) & 0xffffffff) + payload


def test_round_trip(random_model, grid2x3, tmp_path):
    path = store.save(random_model, tmp_path / "models" / "policy.qctm")
    loaded = store.load(path, grid2x3, n_l=3)
    assert loaded.header == random_model.header
    for a, b in zip(loaded.parameters(), random_model.parameters()):
        assert np.array_equal(a, b)

def test_bad_magic(random_model):
    data = store.dumps(random_model)
    with pytest.raises(CorruptModelError):
        store.loads(b"XXXX" + data[4:])
    with pytest.raises(CorruptModelError):
        store.loads(b"QC")

def test_checksum_and_truncation(random_model):
    data = bytearray(store.dumps(random_model))
    with pytest.raises(CorruptModelError):
        store.loads(bytes(data[:-5]))
    data[40] ^= 0xFF
    with pytest.raises(CorruptModelError, match="checksum"):
        store.loads(bytes(data))

def test_unsupported_version(random_model):
    def bump(doc):
        doc["header"]["format_version"] = 2

    with pytest.raises(ModelVersionError):
        store.loads(_repack(store.dumps(random_model), bump))

def test_layer_count_mismatch(random_model):
    def drop(doc):
        doc["layers"] = doc["layers"][:1]

    with pytest.raises(CorruptModelError):
        store.loads(_repack(store.dumps(random_model), drop))

def test_wrong_graph(random_model, tmp_path):
    path = store.save(random_model, tmp_path / "policy.qctm")
    with pytest.raises(ModelMismatchError):
        store.load(path, build_grid(3, 3))
    with pytest.raises(ModelMismatchError):
        store.load(path, build_grid(2, 3), n_l=5)
