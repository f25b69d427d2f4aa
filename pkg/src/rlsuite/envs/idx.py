"""Reader for the IDX binary format used by the MNIST distribution files.

Layout (big endian): 4-byte magic ``0x000008TT`` where the low byte ``TT``
counts dimensions, then one uint32 per dimension, then the uint8 payload.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801

TRAIN_IMAGES = "train-images-idx3-ubyte"
TRAIN_LABELS = "train-labels-idx1-ubyte"


class IdxParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


def parse_idx(data: bytes) -> np.ndarray:
    """Parse an IDX image or label file.

    Images come back as float64 ``(M, 784)`` scaled into [0, 1]; labels as
    int64 ``(M,)`` checked to lie in 0..9.
    """
    if len(data) < 4:
        raise IdxParseError("truncated magic number", 0)
    (magic,) = struct.unpack_from(">I", data, 0)
    if magic == IMAGES_MAGIC:
        ndim = 3
    elif magic == LABELS_MAGIC:
        ndim = 1
    else:
        raise IdxParseError(f"bad magic number 0x{magic:08x}", 0)

    header = 4 + 4 * ndim
    if len(data) < header:
        raise IdxParseError("truncated dimension header", len(data))
    dims = struct.unpack_from(f">{ndim}I", data, 4)
    if ndim == 3 and dims[1:] != (28, 28):
        raise IdxParseError(f"image dimensions {dims[1]}x{dims[2]} != 28x28", 8)

    expected = int(np.prod(dims))
    payload = len(data) - header
    if payload < expected:
        raise IdxParseError(f"payload has {payload} bytes, header declares {expected}", len(data))
    if payload > expected:
        raise IdxParseError(f"{payload - expected} trailing bytes after payload", header + expected)

    raw = np.frombuffer(data, dtype=np.uint8, count=expected, offset=header)
    if ndim == 3:
        return raw.reshape(dims[0], 28 * 28).astype(np.float64) / 255.0
    labels = raw.astype(np.int64)
    if labels.size and labels.max() > 9:
        bad = int(np.argmax(labels > 9))
        raise IdxParseError(f"label {labels[bad]} outside 0..9", header + bad)
    return labels


def encode_idx(array: np.ndarray) -> bytes:
    """Inverse of ``parse_idx`` for uint8 arrays; used to build fixtures."""
    array = np.asarray(array, dtype=np.uint8)
    if array.ndim == 1:
        magic = LABELS_MAGIC
    elif array.ndim == 3:
        magic = IMAGES_MAGIC
    else:
        raise ValueError("expected labels (M,) or images (M, 28, 28)")
    header = struct.pack(">I", magic) + struct.pack(f">{array.ndim}I", *array.shape)
    return header + array.tobytes()


class MnistDataset:
    """Immutable (images, labels) pair."""

    def __init__(self, images: np.ndarray, labels: np.ndarray):
        if len(images) != len(labels):
            raise ValueError(f"{len(images)} images but {len(labels)} labels")
        self.images = images
        self.labels = labels
        self.images.flags.writeable = False
        self.labels.flags.writeable = False

    def __len__(self) -> int:
        return len(self.labels)

    @classmethod
    def load(cls, directory: str | Path) -> MnistDataset:
        directory = Path(directory)
        images = parse_idx((directory / TRAIN_IMAGES).read_bytes())
        labels = parse_idx((directory / TRAIN_LABELS).read_bytes())
        return cls(images, labels)


def write_idx_dataset(directory: str | Path, images: np.ndarray, labels: np.ndarray) -> Path:
    """Write uint8 images (M, 28, 28) and labels (M,) under the training-split file names."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / TRAIN_IMAGES).write_bytes(encode_idx(images))
    (directory / TRAIN_LABELS).write_bytes(encode_idx(labels))
    return directory
