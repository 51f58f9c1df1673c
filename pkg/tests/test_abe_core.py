"""The six scheme algorithms and the hybrid layer.

The central oracle is round-trip identity: retrieve(transform(...)) must
equal the encapsulated element, and every tampering of a component must
break it (surfacing as an authentication failure in the hybrid layer).
"""

import pytest

from poabe import abe_core as ac
from poabe.access_policy import find_coefficients, parse_policy
from poabe.encoding import canonical_decode, canonical_encode
from poabe.group_math import RandomTape, Scalar, gt_generator, pairing, g1_generator

POLICIES = [
    "A",
    "A AND B",
    "A OR B",
    "(A AND B) OR (C AND D)",
    "A AND (B OR C) AND D",
]


def make_world(policy_text, attrs, seed=0):
    tape = RandomTape.from_int(seed)
    pk, msk = ac.setup(tape)
    sk = ac.keygen(pk, msk, attrs, tape)
    ct, m = ac.encapsulate(pk, parse_policy(policy_text), tape)
    tk, rk = ac.tkgen(sk, tape)
    return pk, msk, sk, ct, m, tk, rk


@pytest.mark.parametrize("policy,attrs", [
    ("A", {"A"}),
    ("A AND B", {"A", "B"}),
    ("A OR B", {"B"}),
    ("(A AND B) OR (C AND D)", {"C", "D"}),
    ("A AND (B OR C) AND D", {"A", "C", "D"}),
])
def test_roundtrip(policy, attrs):
    pk, msk, sk, ct, m, tk, rk = make_world(policy, attrs)
    w = find_coefficients(ct.policy, tk.attrs)
    assert w is not None
    out = ac.transform(tk, ct, w)
    assert ac.retrieve(out, rk) == m


@pytest.mark.parametrize("policy,attrs", [
    ("A AND B", {"A"}),
    ("(A AND B) OR (C AND D)", {"A", "C"}),
    ("A", {"B"}),
])
def test_unsatisfying_attrs_produce_nothing(policy, attrs):
    pk, msk, sk, ct, m, tk, rk = make_world(policy, attrs)
    w = find_coefficients(ct.policy, tk.attrs)
    assert w is None
    assert ac.transform(tk, ct, w) is None


def test_setup_consistency():
    tape = RandomTape.from_int(1)
    pk, msk = ac.setup(tape)
    # e(g1, g2^alpha) must equal the published e(g,g)^alpha
    assert pairing(g1_generator(), msk.g_alpha) == pk.e_gg_alpha
    assert pk.e_gg_alpha == gt_generator() ** msk.alpha


def test_keygen_requires_attributes():
    tape = RandomTape.from_int(2)
    pk, msk = ac.setup(tape)
    with pytest.raises(ac.EmptyAttributeSetError):
        ac.keygen(pk, msk, set(), tape)


def test_secret_key_well_formedness_check():
    pk, msk, sk, ct, m, tk, rk = make_world("A AND B", {"A", "B"})
    assert ac.secret_key_well_formed(pk, sk)
    forged = ac.SecretKey(sk.attrs, sk.k ** 2, sk.l, sk.k_x)
    assert not ac.secret_key_well_formed(pk, forged)
    forged = ac.SecretKey(sk.attrs, sk.k, sk.l,
                          {a: v ** 2 for a, v in sk.k_x.items()})
    assert not ac.secret_key_well_formed(pk, forged)


def test_transform_rejects_foreign_coefficient_rows():
    pk, msk, sk, ct, m, tk, rk = make_world("A AND B", {"A", "B"})
    from poabe.access_policy import ReconstructionCoefficients
    out_of_range = ReconstructionCoefficients({5: Scalar(1)})
    with pytest.raises(ac.TransformInputError):
        ac.transform(tk, ct, out_of_range)
    pk2, msk2, sk2, ct2, m2, tk2, rk2 = make_world("A AND B", {"A"}, seed=3)
    w = find_coefficients(ct.policy, {"A", "B"})
    with pytest.raises(ac.TransformInputError):
        ac.transform(tk2, ct, w)  # key lacks B but w uses B's row


def test_wrong_retrieve_key_breaks_roundtrip():
    pk, msk, sk, ct, m, tk, rk = make_world("A AND B", {"A", "B"})
    w = find_coefficients(ct.policy, tk.attrs)
    out = ac.transform(tk, ct, w)
    wrong = ac.RetrieveKey(rk.z + Scalar(1))
    assert ac.retrieve(out, wrong) != m


def test_tampered_transform_output_detected_by_hybrid_layer():
    tape = RandomTape.from_int(4)
    pk, msk = ac.setup(tape)
    sk = ac.keygen(pk, msk, {"A", "B"}, tape)
    pkg = ac.hybrid_encrypt(pk, parse_policy("A AND B"), b"top secret", tape)
    tk, rk = ac.tkgen(sk, tape)
    w = find_coefficients(pkg.ct.policy, tk.attrs)
    out = ac.transform(tk, pkg.ct, w)

    honest = ac.retrieve(out, rk)
    assert ac.hybrid_decrypt(pkg, honest) == b"top secret"

    corrupted = ac.TransformedCiphertext(out.c, out.t * gt_generator())
    with pytest.raises(ac.AuthenticationError):
        ac.hybrid_decrypt(pkg, ac.retrieve(corrupted, rk))


def test_hybrid_rejects_ciphertext_tamper():
    tape = RandomTape.from_int(5)
    pk, msk = ac.setup(tape)
    sk = ac.keygen(pk, msk, {"A"}, tape)
    pkg = ac.hybrid_encrypt(pk, parse_policy("A"), b"payload bytes", tape)
    tk, rk = ac.tkgen(sk, tape)
    w = find_coefficients(pkg.ct.policy, tk.attrs)
    m = ac.retrieve(ac.transform(tk, pkg.ct, w), rk)
    flipped = ac.HybridPackage(pkg.ct, pkg.nonce, pkg.tag,
                               bytes([pkg.body[0] ^ 1]) + pkg.body[1:])
    with pytest.raises(ac.AuthenticationError):
        ac.hybrid_decrypt(flipped, m)


def test_tkgen_blinding_cancels():
    # honest T equals e(g1,g2)^(-alpha*s/z); check via retrieve identity
    pk, msk, sk, ct, m, tk, rk = make_world("A OR B", {"A"})
    w = find_coefficients(ct.policy, tk.attrs)
    out = ac.transform(tk, ct, w)
    assert out.c * (out.t ** rk.z) == m


def test_encapsulate_deterministic_under_tape():
    tape1 = RandomTape.from_int(6)
    tape2 = RandomTape.from_int(6)
    pk, _ = ac.setup(RandomTape.from_int(7))
    ct1, m1 = ac.encapsulate(pk, parse_policy("A AND B"), tape1)
    ct2, m2 = ac.encapsulate(pk, parse_policy("A AND B"), tape2)
    assert canonical_encode(ct1) == canonical_encode(ct2)
    assert m1 == m2


def test_all_value_encodings_roundtrip():
    tape = RandomTape.from_int(8)
    pk, msk = ac.setup(tape)
    sk = ac.keygen(pk, msk, {"A", "B"}, tape)
    pkg = ac.hybrid_encrypt(pk, parse_policy("A AND B"), b"x" * 100, tape)
    tk, rk = ac.tkgen(sk, tape)
    w = find_coefficients(pkg.ct.policy, tk.attrs)
    out = ac.transform(tk, pkg.ct, w)
    for obj, cls in [(pk, ac.PublicKey), (msk, ac.MasterKey), (sk, ac.SecretKey),
                     (tk, ac.TransformKey), (rk, ac.RetrieveKey),
                     (pkg.ct, ac.Ciphertext), (out, ac.TransformedCiphertext),
                     (pkg, ac.HybridPackage)]:
        assert canonical_decode(cls, canonical_encode(obj)) == obj


def test_ciphertext_row_count_checked():
    pk, msk, sk, ct, m, tk, rk = make_world("A AND B", {"A", "B"})
    with pytest.raises(ValueError):
        ac.Ciphertext(ct.policy, ct.c, ct.c_prime, ct.rows[:1])
