"""
Versioned Binary Tensor Files
Shared container for weight archives and dataset caches.

Layout (all integers little-endian):
    magic        4 bytes
    version      uint16
    meta_len     uint32, followed by meta_len bytes of UTF-8 JSON
    n_tensors    uint32
    per tensor:  name_len uint16, name (UTF-8), ndim uint8,
                 ndim x uint32 dimensions, float64 payload (little-endian, C order)
    checksum     SHA-256 of every preceding byte (32 bytes)
"""

import hashlib
import json
import logging
import struct
from collections import OrderedDict
from pathlib import Path
from typing import Dict, Tuple

import numpy as np

from .exceptions import ArchiveChecksumError, ArchiveError, ArchiveVersionError

logger = logging.getLogger(__name__)

DIGEST_SIZE = 32


def write_tensor_file(path: Path, magic: bytes, version: int, meta: Dict,
                      tensors: Dict[str, np.ndarray]) -> Path:
    if len(magic) != 4:
        raise ValueError("Magic must be exactly four bytes")
    meta_bytes = json.dumps(meta, sort_keys=True).encode('utf-8')
    chunks = [magic, struct.pack('<HI', version, len(meta_bytes)), meta_bytes,
              struct.pack('<I', len(tensors))]
    for name, tensor in tensors.items():
        array = np.ascontiguousarray(tensor, dtype='<f8')
        name_bytes = name.encode('utf-8')
        chunks.append(struct.pack('<H', len(name_bytes)) + name_bytes)
        chunks.append(struct.pack('<B', array.ndim) + struct.pack(f'<{array.ndim}I', *array.shape))
        chunks.append(array.tobytes(order='C'))

    body = b''.join(chunks)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(body + hashlib.sha256(body).digest())
    logger.debug(f"Wrote {len(tensors)} tensors to {path}")
    return path


def read_tensor_file(path: Path, magic: bytes, version: int
                     ) -> Tuple[Dict, 'OrderedDict[str, np.ndarray]']:
    data = Path(path).read_bytes()
    if len(data) < len(magic) + 10 + DIGEST_SIZE:
        raise ArchiveError(f"{path} is too short to be a tensor file")

    body, digest = data[:-DIGEST_SIZE], data[-DIGEST_SIZE:]
    if hashlib.sha256(body).digest() != digest:
        raise ArchiveChecksumError(f"Checksum mismatch in {path}")
    if body[:4] != magic:
        raise ArchiveVersionError(f"{path} has magic {body[:4]!r}, expected {magic!r}")

    found_version, meta_len = struct.unpack_from('<HI', body, 4)
    if found_version != version:
        raise ArchiveVersionError(f"{path} has format version {found_version}, expected {version}")

    offset = 10
    meta = json.loads(body[offset:offset + meta_len].decode('utf-8'))
    offset += meta_len
    (count,) = struct.unpack_from('<I', body, offset)
    offset += 4

    tensors = OrderedDict()
    for _ in range(count):
        (name_len,) = struct.unpack_from('<H', body, offset)
        offset += 2
        name = body[offset:offset + name_len].decode('utf-8')
        offset += name_len
        (ndim,) = struct.unpack_from('<B', body, offset)
        offset += 1
        shape = struct.unpack_from(f'<{ndim}I', body, offset)
        offset += 4 * ndim
        size = int(np.prod(shape, dtype=np.int64))
        tensors[name] = np.frombuffer(body, dtype='<f8', count=size, offset=offset).reshape(shape).astype(np.float64)
        offset += 8 * size

    if offset != len(body):
        raise ArchiveError(f"{path} has {len(body) - offset} trailing bytes")
    return meta, tensors
