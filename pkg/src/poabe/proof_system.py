"""Dispute proofs for the outsourced-decryption transform.

The public statement is a digest binding the task data (ciphertext,
transform key, coefficients) to the claimed partial decryption T.  The
interface is backend-agnostic (preprocess / prove / verify); the one
implemented backend reveals the witness and has the verifier recompute
everything.  That is sound and complete but neither succinct nor
zero-knowledge, which is acceptable here because the revealed values are
already public task data on the content store.  A succinct backend can
slot in behind the same interface under a new tag.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from . import abe_core, encoding
from .abe_core import Ciphertext, TransformKey, TransformInputError
from .access_policy import ReconstructionCoefficients
from .group_math import EncodingError, GtElement, Scalar

__all__ = [
    "Statement", "Witness", "ProvingKey", "VerifyingKey", "ProofBundle",
    "UnknownRelationError", "StatementMismatchError",
    "TRANSFORM_RELATION", "REVEAL_TAG",
    "statement_digest", "preprocess", "prove", "verify", "coefficients_valid",
]

TRANSFORM_RELATION = "transform-v1"
REVEAL_TAG = 0x01


class UnknownRelationError(ValueError):
    pass


class StatementMismatchError(ValueError):
    """The witness does not reproduce the claimed statement digest."""


@dataclass(frozen=True)
class Statement:
    """Public input: H("stmt:" || H("stmt:" || CT || TK || w) || T)."""

    digest: bytes

    def __post_init__(self):
        if len(self.digest) != 32:
            raise ValueError("statement digest must be 32 bytes")

    def to_canonical_bytes(self) -> bytes:
        return self.digest

    @classmethod
    def from_canonical(cls, reader) -> "Statement":
        return cls(reader.take(32))


@dataclass(frozen=True)
class Witness:
    ct: Ciphertext
    tk: TransformKey
    w: ReconstructionCoefficients
    t: GtElement

    def to_canonical_bytes(self) -> bytes:
        return (self.ct.to_canonical_bytes()
                + self.tk.to_canonical_bytes()
                + self.w.to_canonical_bytes()
                + self.t.to_canonical_bytes())

    @classmethod
    def from_canonical(cls, reader) -> "Witness":
        return cls(Ciphertext.from_canonical(reader),
                   TransformKey.from_canonical(reader),
                   ReconstructionCoefficients.from_canonical(reader),
                   GtElement.from_canonical(reader))


@dataclass(frozen=True)
class ProvingKey:
    relation: str


@dataclass(frozen=True)
class VerifyingKey:
    relation: str


@dataclass(frozen=True)
class ProofBundle:
    """Container: 1-byte backend tag, 4-byte length, body."""

    tag: int
    body: bytes

    def to_bytes(self) -> bytes:
        return bytes([self.tag]) + encoding.encode_u32(len(self.body)) + self.body

    @classmethod
    def from_bytes(cls, data: bytes) -> "ProofBundle":
        if len(data) < 5:
            raise EncodingError("proof bundle too short")
        length = int.from_bytes(data[1:5], "big")
        if len(data) != 5 + length:
            raise EncodingError("proof bundle length mismatch")
        return cls(data[0], data[5:])


def statement_digest(ct: Ciphertext, tk: TransformKey,
                     w: ReconstructionCoefficients, t: GtElement) -> Statement:
    inner = hashlib.sha256(b"stmt:" + ct.to_canonical_bytes()
                           + tk.to_canonical_bytes()
                           + w.to_canonical_bytes()).digest()
    outer = hashlib.sha256(b"stmt:" + inner + t.to_canonical_bytes()).digest()
    return Statement(outer)


def preprocess(relation: str) -> tuple[ProvingKey, VerifyingKey]:
    """Backend setup; the reveal backend needs no parameters beyond the id."""
    if relation != TRANSFORM_RELATION:
        raise UnknownRelationError(relation)
    return ProvingKey(relation), VerifyingKey(relation)


def prove(pk: ProvingKey, x: Statement, w: Witness) -> ProofBundle:
    """Reveal backend: the proof is the canonical witness itself."""
    if pk.relation != TRANSFORM_RELATION:
        raise UnknownRelationError(pk.relation)
    if statement_digest(w.ct, w.tk, w.w, w.t) != x:
        raise StatementMismatchError("witness does not match statement")
    return ProofBundle(REVEAL_TAG, w.to_canonical_bytes())


def coefficients_valid(w: Witness) -> bool:
    """Sum of w_i * M_i over rows owned by tk.attrs must be (1, 0, ..., 0)."""
    matrix = w.ct.policy
    total = [Scalar(0)] * matrix.n_cols
    for i, omega in w.w.entries.items():
        if i >= matrix.n_rows or matrix.rho[i] not in w.tk.attrs:
            return False
        for j, m_ij in enumerate(matrix.rows[i]):
            total[j] = total[j] + omega * m_ij
    return total[0] == Scalar(1) and all(c.is_zero() for c in total[1:])


def verify(vk: VerifyingKey, x: Statement, proof: ProofBundle | bytes) -> bool:
    """Accept iff the revealed witness matches the digest, its coefficients
    reconstruct the unit vector, and the recomputed pairing product equals
    the claimed T.  Any malformed input rejects; nothing raises.
    """
    if vk.relation != TRANSFORM_RELATION:
        return False
    try:
        if isinstance(proof, bytes):
            proof = ProofBundle.from_bytes(proof)
        if proof.tag != REVEAL_TAG:
            return False
        witness = encoding.canonical_decode(Witness, proof.body)
        if statement_digest(witness.ct, witness.tk, witness.w, witness.t) != x:
            return False
        if not coefficients_valid(witness):
            return False
        recomputed = abe_core.transform(witness.tk, witness.ct, witness.w)
        return recomputed is not None and recomputed.t == witness.t
    except (EncodingError, TransformInputError, ValueError):
        return False
