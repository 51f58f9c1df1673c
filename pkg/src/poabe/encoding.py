"""Canonical binary encoding shared by storage, hashing, and the dispute
statement.

Every encodable value implements ``to_canonical_bytes()`` and a
``from_canonical(reader)`` classmethod.  Encodings are injective and
deterministic: compressed points, fixed-width big-endian scalars, 4-byte
big-endian length prefixes on variable-length sequences, and attribute
sets sorted lexicographically.  Non-canonical inputs are rejected, never
normalized; digest integrity depends on that.
"""

from __future__ import annotations

from .group_math import EncodingError

__all__ = [
    "EncodingError", "Reader", "canonical_encode", "canonical_decode",
    "encode_u32", "encode_bytes", "encode_str", "encode_str_set",
]


class Reader:
    """Cursor over an immutable byte string; decoders consume from it."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise EncodingError("truncated encoding")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def take_u32(self) -> int:
        return int.from_bytes(self.take(4), "big")

    def take_bytes(self) -> bytes:
        return self.take(self.take_u32())

    def take_str(self) -> str:
        raw = self.take_bytes()
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EncodingError("invalid utf-8 in string field") from exc

    def take_str_set(self) -> frozenset[str]:
        count = self.take_u32()
        items = [self.take_str() for _ in range(count)]
        encoded = [s.encode() for s in items]
        if encoded != sorted(encoded) or len(set(items)) != len(items):
            raise EncodingError("attribute set not in canonical order")
        return frozenset(items)

    def expect_end(self):
        if self.pos != len(self.data):
            raise EncodingError("trailing bytes after encoding")


def encode_u32(n: int) -> bytes:
    if not 0 <= n < 2 ** 32:
        raise EncodingError("length out of range")
    return n.to_bytes(4, "big")


def encode_bytes(b: bytes) -> bytes:
    return encode_u32(len(b)) + b


def encode_str(s: str) -> bytes:
    return encode_bytes(s.encode("utf-8"))


def encode_str_set(attrs) -> bytes:
    items = sorted(set(attrs), key=lambda s: s.encode())
    return encode_u32(len(items)) + b"".join(encode_str(s) for s in items)


def canonical_encode(value) -> bytes:
    """Injective byte encoding of any scalar, group, or composite value."""
    try:
        return value.to_canonical_bytes()
    except AttributeError:
        raise EncodingError(f"type {type(value).__name__} is not canonically encodable")


def canonical_decode(cls, data: bytes):
    """Inverse of canonical_encode for the given type; rejects trailing bytes."""
    reader = Reader(data)
    value = cls.from_canonical(reader)
    reader.expect_end()
    return value
