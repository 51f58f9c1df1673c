"""Content-addressed blob store standing in for a distributed file system.

Blobs are keyed by the SHA-256 of their bytes; only these hashes go on
the ledger.  Two backends share one interface: an in-memory dict for
tests and a directory tree for persistence.  Writes are atomic
(write-temp-then-rename) and every get re-hashes the bytes it returns.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .abe_core import Ciphertext, TransformKey
from .access_policy import ReconstructionCoefficients

__all__ = [
    "ContentHash", "TaskData", "NotFoundError", "IntegrityError",
    "MemoryStore", "DirectoryStore",
]


class NotFoundError(KeyError):
    pass


class IntegrityError(ValueError):
    """Stored bytes no longer hash to their key."""


@dataclass(frozen=True)
class ContentHash:
    digest: bytes

    def __post_init__(self):
        if len(self.digest) != 32:
            raise ValueError("content hash must be 32 bytes")

    @property
    def hex(self) -> str:
        return self.digest.hex()

    @classmethod
    def of(cls, data: bytes) -> "ContentHash":
        return cls(hashlib.sha256(data).digest())

    @classmethod
    def from_hex(cls, text: str) -> "ContentHash":
        return cls(bytes.fromhex(text))

    def to_canonical_bytes(self) -> bytes:
        return self.digest

    @classmethod
    def from_canonical(cls, reader) -> "ContentHash":
        return cls(reader.take(32))


@dataclass(frozen=True)
class TaskData:
    """The public outsourcing payload: ciphertext, transform key, coefficients.

    Its canonical encoding is exactly the preimage of the dispute
    statement's inner hash, so the stored blob and the on-ledger digest
    are bound to each other.
    """

    ct: Ciphertext
    tk: TransformKey
    w: ReconstructionCoefficients

    def to_canonical_bytes(self) -> bytes:
        return (self.ct.to_canonical_bytes()
                + self.tk.to_canonical_bytes()
                + self.w.to_canonical_bytes())

    @classmethod
    def from_canonical(cls, reader) -> "TaskData":
        return cls(Ciphertext.from_canonical(reader),
                   TransformKey.from_canonical(reader),
                   ReconstructionCoefficients.from_canonical(reader))


class MemoryStore:
    """Dict-backed store; contents live for the process lifetime."""

    def __init__(self):
        self._blobs: dict[bytes, bytes] = {}

    def put(self, data: bytes) -> ContentHash:
        h = ContentHash.of(data)
        self._blobs[h.digest] = bytes(data)
        return h

    def get(self, h: ContentHash) -> bytes:
        try:
            data = self._blobs[h.digest]
        except KeyError:
            raise NotFoundError(h.hex) from None
        if ContentHash.of(data) != h:
            raise IntegrityError(h.hex)
        return data

    def __contains__(self, h: ContentHash) -> bool:
        return h.digest in self._blobs


class DirectoryStore:
    """Directory tree keyed <root>/<first-2-hex>/<full-hex>, raw bytes."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, h: ContentHash) -> Path:
        return self.root / h.hex[:2] / h.hex

    def put(self, data: bytes) -> ContentHash:
        h = ContentHash.of(data)
        path = self._path(h)
        if path.exists():
            return h
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return h

    def get(self, h: ContentHash) -> bytes:
        path = self._path(h)
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            raise NotFoundError(h.hex) from None
        if ContentHash.of(data) != h:
            raise IntegrityError(h.hex)
        return data

    def __contains__(self, h: ContentHash) -> bool:
        return self._path(h).exists()
