"""Ciphertext-policy ABE with outsourced decryption, in the KEM setting.

Six algorithms: setup, keygen, encapsulate, tkgen, transform, retrieve.
The encapsulated value is a target-group element; ``hybrid_encrypt`` /
``hybrid_decrypt`` wrap it into an authenticated symmetric layer so a
wrong transform result surfaces as an authentication failure at the user.

Group placement: ciphertext components (C', C_i, D_i) live in the first
source group, key components (K, L, K_x) in the second.  The attribute
map is realized on both sides with a shared scalar hash, so the pairing
cancellations of the symmetric-group scheme carry over unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import ChaCha20Poly1305

from . import encoding
from .access_policy import (LsssMatrix, PolicyFormula, ReconstructionCoefficients,
                            share_secret, to_lsss)
from .group_math import (EncodingError, G1Element, G2Element, GtElement, RandomTape,
                         Scalar, attr_to_g1, attr_to_g2, g1_generator, g2_generator,
                         gt_generator, kdf, multi_pairing)

__all__ = [
    "PublicKey", "MasterKey", "SecretKey", "TransformKey", "RetrieveKey",
    "Ciphertext", "TransformedCiphertext", "HybridPackage",
    "AbeError", "EmptyAttributeSetError", "TransformInputError", "AuthenticationError",
    "setup", "keygen", "encapsulate", "tkgen", "transform", "retrieve",
    "hybrid_encrypt", "hybrid_decrypt", "secret_key_well_formed",
]

_NONCE_LEN = 12
_TAG_LEN = 16


class AbeError(Exception):
    pass


class EmptyAttributeSetError(AbeError):
    pass


class TransformInputError(AbeError):
    """Coefficients reference rows the transform key cannot serve."""


class AuthenticationError(AbeError):
    """Symmetric layer failed to authenticate: wrong key or corrupt payload."""


def _sorted_attrs(attrs) -> tuple[str, ...]:
    return tuple(sorted(attrs, key=lambda s: s.encode()))


@dataclass(frozen=True)
class PublicKey:
    e_gg_alpha: GtElement
    g1_a: G1Element
    g2_a: G2Element

    @property
    def g1(self) -> G1Element:
        return g1_generator()

    @property
    def g2(self) -> G2Element:
        return g2_generator()

    def to_canonical_bytes(self) -> bytes:
        return (self.e_gg_alpha.to_canonical_bytes()
                + self.g1_a.to_canonical_bytes()
                + self.g2_a.to_canonical_bytes())

    @classmethod
    def from_canonical(cls, reader) -> "PublicKey":
        return cls(GtElement.from_canonical(reader),
                   G1Element.from_canonical(reader),
                   G2Element.from_canonical(reader))


@dataclass(frozen=True)
class MasterKey:
    g_alpha: G2Element
    alpha: Scalar  # retained so tests can recompute public values

    def to_canonical_bytes(self) -> bytes:
        return self.g_alpha.to_canonical_bytes() + self.alpha.to_canonical_bytes()

    @classmethod
    def from_canonical(cls, reader) -> "MasterKey":
        return cls(G2Element.from_canonical(reader), Scalar.from_canonical(reader))


@dataclass(frozen=True)
class SecretKey:
    attrs: frozenset
    k: G2Element
    l: G2Element
    k_x: dict  # attribute -> G2Element

    def to_canonical_bytes(self) -> bytes:
        out = [encoding.encode_str_set(self.attrs),
               self.k.to_canonical_bytes(),
               self.l.to_canonical_bytes()]
        out.extend(self.k_x[a].to_canonical_bytes() for a in _sorted_attrs(self.attrs))
        return b"".join(out)

    @classmethod
    def from_canonical(cls, reader) -> "SecretKey":
        attrs = reader.take_str_set()
        k = G2Element.from_canonical(reader)
        l = G2Element.from_canonical(reader)
        k_x = {a: G2Element.from_canonical(reader) for a in _sorted_attrs(attrs)}
        return cls(attrs, k, l, k_x)


@dataclass(frozen=True)
class TransformKey:
    attrs: frozenset
    k: G2Element
    l: G2Element
    k_x: dict

    to_canonical_bytes = SecretKey.to_canonical_bytes

    @classmethod
    def from_canonical(cls, reader) -> "TransformKey":
        attrs = reader.take_str_set()
        k = G2Element.from_canonical(reader)
        l = G2Element.from_canonical(reader)
        k_x = {a: G2Element.from_canonical(reader) for a in _sorted_attrs(attrs)}
        return cls(attrs, k, l, k_x)


@dataclass(frozen=True)
class RetrieveKey:
    z: Scalar

    def to_canonical_bytes(self) -> bytes:
        return self.z.to_canonical_bytes()

    @classmethod
    def from_canonical(cls, reader) -> "RetrieveKey":
        return cls(Scalar.from_canonical(reader))


@dataclass(frozen=True)
class Ciphertext:
    policy: LsssMatrix
    c: GtElement            # M * e(g,g)^{alpha s}
    c_prime: G1Element      # g^s
    rows: tuple             # per policy row: (C_i, D_i) in the first group

    def __post_init__(self):
        if len(self.rows) != self.policy.n_rows:
            raise ValueError("ciphertext rows must match policy rows")

    def to_canonical_bytes(self) -> bytes:
        out = [self.policy.to_canonical_bytes(),
               self.c.to_canonical_bytes(),
               self.c_prime.to_canonical_bytes()]
        for c_i, d_i in self.rows:
            out.append(c_i.to_canonical_bytes())
            out.append(d_i.to_canonical_bytes())
        return b"".join(out)

    @classmethod
    def from_canonical(cls, reader) -> "Ciphertext":
        policy = LsssMatrix.from_canonical(reader)
        c = GtElement.from_canonical(reader)
        c_prime = G1Element.from_canonical(reader)
        rows = tuple((G1Element.from_canonical(reader), G1Element.from_canonical(reader))
                     for _ in range(policy.n_rows))
        return cls(policy, c, c_prime, rows)


@dataclass(frozen=True)
class TransformedCiphertext:
    c: GtElement
    t: GtElement

    def to_canonical_bytes(self) -> bytes:
        return self.c.to_canonical_bytes() + self.t.to_canonical_bytes()

    @classmethod
    def from_canonical(cls, reader) -> "TransformedCiphertext":
        return cls(GtElement.from_canonical(reader), GtElement.from_canonical(reader))


@dataclass(frozen=True)
class HybridPackage:
    ct: Ciphertext
    nonce: bytes
    tag: bytes
    body: bytes

    def to_canonical_bytes(self) -> bytes:
        return (self.ct.to_canonical_bytes()
                + encoding.encode_bytes(self.nonce)
                + encoding.encode_bytes(self.tag)
                + encoding.encode_bytes(self.body))

    @classmethod
    def from_canonical(cls, reader) -> "HybridPackage":
        ct = Ciphertext.from_canonical(reader)
        nonce = reader.take_bytes()
        tag = reader.take_bytes()
        body = reader.take_bytes()
        if len(nonce) != _NONCE_LEN or len(tag) != _TAG_LEN:
            raise EncodingError("bad nonce or tag length")
        return cls(ct, nonce, tag, body)


def setup(tape: RandomTape) -> tuple[PublicKey, MasterKey]:
    """Draws a then alpha from the tape and derives (PK, MSK)."""
    a = tape.draw_scalar()
    alpha = tape.draw_scalar()
    pk = PublicKey(e_gg_alpha=gt_generator() ** alpha,
                   g1_a=g1_generator() ** a,
                   g2_a=g2_generator() ** a)
    msk = MasterKey(g_alpha=g2_generator() ** alpha, alpha=alpha)
    return pk, msk


def keygen(pk: PublicKey, msk: MasterKey, attrs, tape: RandomTape) -> SecretKey:
    """K = g^alpha g^{ar}, L = g^r, K_x = F(x)^r for each attribute."""
    attrs = frozenset(attrs)
    if not attrs:
        raise EmptyAttributeSetError("attribute set must be non-empty")
    r = tape.draw_nonzero_scalar()
    return SecretKey(
        attrs=attrs,
        k=msk.g_alpha * (pk.g2_a ** r),
        l=g2_generator() ** r,
        k_x={x: attr_to_g2(x) ** r for x in attrs},
    )


def encapsulate(pk: PublicKey, policy: PolicyFormula,
                tape: RandomTape) -> tuple[Ciphertext, GtElement]:
    """Encrypt a fresh target-group element under the policy.

    Tape draw order: the encapsulated element, then s, then the blinding
    vector, then one t_i per row.
    """
    matrix = to_lsss(policy)
    m = tape.draw_gt()
    s = tape.draw_scalar()
    shares = share_secret(matrix, s, tape)

    c = m * (pk.e_gg_alpha ** s)
    c_prime = g1_generator() ** s
    rows = []
    for lam, attr in zip(shares.shares, matrix.rho):
        t_i = tape.draw_scalar()
        c_i = (pk.g1_a ** lam) * (attr_to_g1(attr) ** (-t_i))
        d_i = g1_generator() ** t_i
        rows.append((c_i, d_i))
    return Ciphertext(matrix, c, c_prime, tuple(rows)), m


def tkgen(sk: SecretKey, tape: RandomTape) -> tuple[TransformKey, RetrieveKey]:
    """Blind the secret key by 1/z; z is redrawn on zero so the op is total."""
    z = tape.draw_nonzero_scalar()
    z_inv = z.inverse()
    tk = TransformKey(
        attrs=sk.attrs,
        k=sk.k ** (-z_inv),
        l=sk.l ** z_inv,
        k_x={x: v ** z_inv for x, v in sk.k_x.items()},
    )
    return tk, RetrieveKey(z)


def transform(tk: TransformKey, ct: Ciphertext,
              w: Optional[ReconstructionCoefficients]) -> Optional[TransformedCiphertext]:
    """Server-side pairing product T; returns None when w is absent.

    Uses only pairings, exponentiations, and multiplications.  Raises
    TransformInputError when w references rows outside the policy or rows
    whose attribute the key does not hold.
    """
    if w is None or not w.entries:
        return None
    for i in w.entries:
        if i >= ct.policy.n_rows:
            raise TransformInputError(f"row {i} outside policy")
        if ct.policy.rho[i] not in tk.attrs:
            raise TransformInputError(f"key lacks attribute {ct.policy.rho[i]!r} for row {i}")

    c_prod = None
    pairs = []
    for i, omega in sorted(w.entries.items()):
        c_i, d_i = ct.rows[i]
        term = c_i ** omega
        c_prod = term if c_prod is None else c_prod * term
        pairs.append((d_i ** omega, tk.k_x[ct.policy.rho[i]]))
    t = multi_pairing([(ct.c_prime, tk.k), (c_prod, tk.l)] + pairs)
    return TransformedCiphertext(ct.c, t)


def retrieve(ct_t: TransformedCiphertext, rk: RetrieveKey) -> GtElement:
    """Local finish: C * T^z."""
    return ct_t.c * (ct_t.t ** rk.z)


def hybrid_encrypt(pk: PublicKey, policy: PolicyFormula, plaintext: bytes,
                   tape: RandomTape) -> HybridPackage:
    """KEM-DEM: encapsulate a key element, then seal the payload under it."""
    ct, m = encapsulate(pk, policy, tape)
    nonce = tape.draw_bytes(_NONCE_LEN)
    sealed = ChaCha20Poly1305(kdf(m)).encrypt(nonce, plaintext, None)
    return HybridPackage(ct, nonce, sealed[-_TAG_LEN:], sealed[:-_TAG_LEN])


def hybrid_decrypt(pkg: HybridPackage, m: GtElement) -> bytes:
    """Open the payload; authentication failure reveals a bad transform result."""
    try:
        return ChaCha20Poly1305(kdf(m)).decrypt(pkg.nonce, pkg.body + pkg.tag, None)
    except InvalidTag as exc:
        raise AuthenticationError("payload failed to authenticate") from exc


def secret_key_well_formed(pk: PublicKey, sk: SecretKey) -> bool:
    """Pairing checks tying SK components to the public key."""
    from .group_math import pairing
    lhs = pairing(g1_generator(), sk.k)
    rhs = pk.e_gg_alpha * pairing(pk.g1_a, sk.l)
    if lhs != rhs:
        return False
    return all(pairing(attr_to_g1(x), sk.l) == pairing(g1_generator(), sk.k_x[x])
               for x in sk.attrs)
