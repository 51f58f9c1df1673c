"""Bilinear group API: scalars, source/target group elements, attribute
hashing, key derivation, and a replayable randomness tape.

The pairing is the type-3 optimal ate pairing on BN254 (see _bn254).  All
values are immutable and safe to share; arithmetic is written
multiplicatively (``a * b`` is the group operation, ``a ** k`` scalar
exponentiation) to match the usual pairing-crypto notation.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from . import _bn254 as bn

__all__ = [
    "Scalar", "G1Element", "G2Element", "GtElement", "RandomTape",
    "EncodingError", "pairing", "multi_pairing", "pairing_count",
    "hash_to_scalar", "attr_to_g1", "attr_to_g2", "kdf",
    "g1_generator", "g2_generator", "gt_generator",
]

_P_BYTES = 32
_FLAG_INF = 0x40
_FLAG_SIGN = 0x80


class EncodingError(ValueError):
    """Raised when a canonical encoding is malformed or non-canonical."""


def _sha256(*parts: bytes) -> bytes:
    h = hashlib.sha256()
    for part in parts:
        h.update(part)
    return h.digest()


@dataclass(frozen=True)
class Scalar:
    """Element of Z_p for the group order p."""

    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % int(bn.order))

    def __add__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.value + other.value)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.value - other.value)

    def __mul__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.value * other.value)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.value)

    def inverse(self) -> "Scalar":
        if self.value == 0:
            raise ZeroDivisionError("scalar 0 has no inverse")
        return Scalar(int(bn.invert(self.value, bn.order)))

    def is_zero(self) -> bool:
        return self.value == 0

    def to_canonical_bytes(self) -> bytes:
        return self.value.to_bytes(_P_BYTES, "big")

    @classmethod
    def from_canonical(cls, reader) -> "Scalar":
        raw = reader.take(_P_BYTES)
        v = int.from_bytes(raw, "big")
        if v >= bn.order:
            raise EncodingError("scalar out of range")
        return cls(v)


def _g1_sign(y: int) -> int:
    return y & 1


def _g2_sign(y) -> int:
    # y = [imag, real]; parity of the real part, falling back to the
    # imaginary part when the real part is zero.  Flips under negation.
    if y[1] != 0:
        return int(y[1]) & 1
    return int(y[0]) & 1


@dataclass(frozen=True)
class G1Element:
    """Point in the prime-order group on the base curve."""

    point: tuple = field(repr=False)  # Jacobian [x, y, z] from _bn254

    def __mul__(self, other: "G1Element") -> "G1Element":
        return G1Element(bn.curve_add(self.point, other.point))

    def __pow__(self, k: Scalar | int) -> "G1Element":
        e = k.value if isinstance(k, Scalar) else int(k) % int(bn.order)
        return G1Element(bn.curve_mul(self.point, e))

    def inverse(self) -> "G1Element":
        return G1Element(bn.curve_neg(self.point))

    def is_identity(self) -> bool:
        return bn.curve_is_inf(self.point)

    def __eq__(self, other) -> bool:
        return isinstance(other, G1Element) and bn.curve_eq(self.point, other.point)

    def __hash__(self):
        return hash(self.to_canonical_bytes())

    def to_canonical_bytes(self) -> bytes:
        pt = bn.curve_affine(self.point)
        if bn.curve_is_inf(pt):
            return bytes([_FLAG_INF]) + bytes(_P_BYTES - 1)
        raw = bytearray(int(pt[0]).to_bytes(_P_BYTES, "big"))
        if _g1_sign(int(pt[1])):
            raw[0] |= _FLAG_SIGN
        return bytes(raw)

    @classmethod
    def from_canonical(cls, reader) -> "G1Element":
        raw = bytearray(reader.take(_P_BYTES))
        flags = raw[0] & (_FLAG_INF | _FLAG_SIGN)
        raw[0] &= ~(_FLAG_INF | _FLAG_SIGN) & 0xFF
        x = int.from_bytes(raw, "big")
        if flags & _FLAG_INF:
            if x != 0 or flags & _FLAG_SIGN:
                raise EncodingError("non-canonical G1 identity")
            return cls(bn.curve_inf)
        if x >= bn.p:
            raise EncodingError("G1 x out of range")
        y = bn.fq_sqrt((x * x % bn.p * x + bn.curve_b) % bn.p)
        if y is None:
            raise EncodingError("G1 x not on curve")
        if _g1_sign(int(y)) != bool(flags & _FLAG_SIGN):
            y = bn.fq_neg(y)
        return cls([bn.mpz(x), y, bn.mpz(1)])


@dataclass(frozen=True)
class G2Element:
    """Point in the prime-order subgroup on the sextic twist."""

    point: tuple = field(repr=False)

    def __mul__(self, other: "G2Element") -> "G2Element":
        return G2Element(bn.twist_add(self.point, other.point))

    def __pow__(self, k: Scalar | int) -> "G2Element":
        e = k.value if isinstance(k, Scalar) else int(k) % int(bn.order)
        return G2Element(bn.twist_mul(self.point, e))

    def inverse(self) -> "G2Element":
        return G2Element(bn.twist_neg(self.point))

    def is_identity(self) -> bool:
        return bn.twist_is_inf(self.point)

    def __eq__(self, other) -> bool:
        return isinstance(other, G2Element) and bn.twist_eq(self.point, other.point)

    def __hash__(self):
        return hash(self.to_canonical_bytes())

    def to_canonical_bytes(self) -> bytes:
        pt = bn.twist_affine(self.point)
        if bn.twist_is_inf(pt):
            return bytes([_FLAG_INF]) + bytes(2 * _P_BYTES - 1)
        raw = bytearray(int(pt[0][0]).to_bytes(_P_BYTES, "big")
                        + int(pt[0][1]).to_bytes(_P_BYTES, "big"))
        if _g2_sign(pt[1]):
            raw[0] |= _FLAG_SIGN
        return bytes(raw)

    @classmethod
    def from_canonical(cls, reader) -> "G2Element":
        raw = bytearray(reader.take(2 * _P_BYTES))
        flags = raw[0] & (_FLAG_INF | _FLAG_SIGN)
        raw[0] &= ~(_FLAG_INF | _FLAG_SIGN) & 0xFF
        x_im = int.from_bytes(raw[:_P_BYTES], "big")
        x_re = int.from_bytes(raw[_P_BYTES:], "big")
        if flags & _FLAG_INF:
            if x_im != 0 or x_re != 0 or flags & _FLAG_SIGN:
                raise EncodingError("non-canonical G2 identity")
            return cls(bn.twist_inf)
        if x_im >= bn.p or x_re >= bn.p:
            raise EncodingError("G2 x out of range")
        x = [bn.mpz(x_im), bn.mpz(x_re)]
        rhs = bn.fq2_add(bn.fq2_mul(bn.fq2_square(x), x), bn.twist_b)
        y = bn.fq2_sqrt(rhs)
        if y is None:
            raise EncodingError("G2 x not on twist")
        if _g2_sign(y) != bool(flags & _FLAG_SIGN):
            y = bn.fq2_neg(y)
        point = [x, y, bn.fq2_one]
        if not bn.twist_in_subgroup(point):
            raise EncodingError("G2 point outside prime-order subgroup")
        return cls(point)


@dataclass(frozen=True)
class GtElement:
    """Element of the order-p subgroup of the pairing target field."""

    value: tuple = field(repr=False)  # fq12 from _bn254

    def __mul__(self, other: "GtElement") -> "GtElement":
        return GtElement(bn.fq12_mul(self.value, other.value))

    def __pow__(self, k: Scalar | int) -> "GtElement":
        e = k.value if isinstance(k, Scalar) else int(k) % int(bn.order)
        return GtElement(bn.fq12_exp(self.value, e))

    def inverse(self) -> "GtElement":
        # conjugation inverts elements of the cyclotomic subgroup
        return GtElement(bn.fq12_conj(self.value))

    def is_identity(self) -> bool:
        return bn.fq12_is_one(self.value)

    def __eq__(self, other) -> bool:
        return isinstance(other, GtElement) and self.value == other.value

    def __hash__(self):
        return hash(self.to_canonical_bytes())

    def to_canonical_bytes(self) -> bytes:
        out = bytearray()
        for fq6 in self.value:
            for fq2 in fq6:
                for c in fq2:
                    out += int(c).to_bytes(_P_BYTES, "big")
        return bytes(out)

    @classmethod
    def from_canonical(cls, reader) -> "GtElement":
        coeffs = []
        for _ in range(12):
            v = int.from_bytes(reader.take(_P_BYTES), "big")
            if v >= bn.p:
                raise EncodingError("GT coefficient out of range")
            coeffs.append(bn.mpz(v))
        value = [[[coeffs[0], coeffs[1]], [coeffs[2], coeffs[3]], [coeffs[4], coeffs[5]]],
                 [[coeffs[6], coeffs[7]], [coeffs[8], coeffs[9]], [coeffs[10], coeffs[11]]]]
        if not bn.fq12_in_gt(value):
            raise EncodingError("GT element outside order-p subgroup")
        return cls(value)


_G1_GEN = G1Element(bn.g1_gen)
_G2_GEN = G2Element(bn.g2_gen)
_GT_GEN = GtElement(bn.pairing(bn.g2_gen, bn.g1_gen))


def g1_generator() -> G1Element:
    return _G1_GEN


def g2_generator() -> G2Element:
    return _G2_GEN


def gt_generator() -> GtElement:
    """e(g1, g2), a generator of the target group."""
    return _GT_GEN


def pairing(a: G1Element, b: G2Element) -> GtElement:
    """Bilinear map e(a, b); inputs are subgroup-checked by construction."""
    return GtElement(bn.pairing(b.point, a.point))


def multi_pairing(pairs) -> GtElement:
    """Product of e(a_i, b_i) over (G1, G2) pairs, one shared final exponentiation."""
    return GtElement(bn.multi_pairing([(b.point, a.point) for a, b in pairs]))


def pairing_count() -> int:
    """Miller loops evaluated so far (work measure for cost assertions)."""
    return bn.miller_count


def hash_to_scalar(label: bytes | str) -> Scalar:
    """Deterministic map from a label to Z_p (the attribute hash h)."""
    if isinstance(label, str):
        label = label.encode()
    return Scalar(int.from_bytes(_sha256(b"attr:", label), "big"))


def attr_to_g1(attr: bytes | str) -> G1Element:
    """g1^{h(attr)}: attribute map into the ciphertext-side group."""
    return _G1_GEN ** hash_to_scalar(attr)


def attr_to_g2(attr: bytes | str) -> G2Element:
    """g2^{h(attr)}: attribute map into the key-side group."""
    return _G2_GEN ** hash_to_scalar(attr)


def kdf(k: GtElement) -> bytes:
    """32-byte symmetric key derived from a target-group element."""
    return _sha256(b"kdf:", k.to_canonical_bytes())


class RandomTape:
    """Deterministic, replayable stream of scalars and bytes.

    The same seed and draw sequence always reproduces the same values,
    which makes every "choose a random value" step in the scheme testable.
    """

    def __init__(self, seed: bytes):
        if len(seed) != 32:
            raise ValueError("tape seed must be 32 bytes")
        self.seed = seed
        self.counter = 0

    @classmethod
    def from_int(cls, seed: int) -> "RandomTape":
        return cls(_sha256(b"tape-seed:", seed.to_bytes(16, "big", signed=True)))

    def _next_block(self) -> bytes:
        block = _sha256(b"tape:", self.seed, self.counter.to_bytes(8, "big"))
        self.counter += 1
        return block

    def draw_scalar(self) -> Scalar:
        return Scalar(int.from_bytes(self._next_block(), "big"))

    def draw_nonzero_scalar(self) -> Scalar:
        while True:
            s = self.draw_scalar()
            if not s.is_zero():
                return s

    def draw_bytes(self, n: int) -> bytes:
        out = bytearray()
        while len(out) < n:
            out += self._next_block()
        return bytes(out[:n])

    def draw_gt(self) -> GtElement:
        return _GT_GEN ** self.draw_scalar()

    def fork(self, label: str) -> "RandomTape":
        """Independent tape derived from this tape's seed and a label."""
        return RandomTape(_sha256(b"tape-fork:", self.seed, label.encode()))
