"""Group element API: encodings, arithmetic, hashing, and the random tape."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poabe import _bn254 as bn
from poabe.encoding import Reader, canonical_decode, canonical_encode
from poabe.group_math import (EncodingError, G1Element, G2Element, GtElement,
                              RandomTape, Scalar, attr_to_g1, attr_to_g2,
                              g1_generator, g2_generator, gt_generator,
                              hash_to_scalar, kdf, multi_pairing, pairing)

ORDER = int(bn.order)

scalars = st.integers(min_value=0, max_value=ORDER - 1)


@given(a=scalars, b=scalars)
@settings(max_examples=50)
def test_scalar_arithmetic_matches_int_oracle(a, b):
    assert (Scalar(a) + Scalar(b)).value == (a + b) % ORDER
    assert (Scalar(a) - Scalar(b)).value == (a - b) % ORDER
    assert (Scalar(a) * Scalar(b)).value == (a * b) % ORDER
    assert (-Scalar(a)).value == (-a) % ORDER


@given(a=st.integers(min_value=1, max_value=ORDER - 1))
@settings(max_examples=20)
def test_scalar_inverse(a):
    s = Scalar(a)
    assert (s * s.inverse()).value == 1


def test_scalar_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        Scalar(0).inverse()


@given(a=scalars)
@settings(max_examples=30)
def test_scalar_encoding_roundtrip(a):
    s = Scalar(a)
    assert canonical_decode(Scalar, canonical_encode(s)) == s


def test_scalar_decode_rejects_out_of_range():
    with pytest.raises(EncodingError):
        canonical_decode(Scalar, ORDER.to_bytes(32, "big"))
    with pytest.raises(EncodingError):
        canonical_decode(Scalar, (2 ** 256 - 1).to_bytes(32, "big"))


def test_decode_rejects_trailing_bytes():
    with pytest.raises(EncodingError):
        canonical_decode(Scalar, canonical_encode(Scalar(5)) + b"\x00")


@pytest.mark.parametrize("k", [0, 1, 2, 12345, ORDER - 1])
def test_g1_encoding_roundtrip(k):
    p = g1_generator() ** k
    data = canonical_encode(p)
    assert len(data) == 32
    assert canonical_decode(G1Element, data) == p


@pytest.mark.parametrize("k", [0, 1, 2, 98765, ORDER - 1])
def test_g2_encoding_roundtrip(k):
    p = g2_generator() ** k
    data = canonical_encode(p)
    assert len(data) == 64
    assert canonical_decode(G2Element, data) == p


@pytest.mark.parametrize("k", [0, 1, 2, 31337])
def test_gt_encoding_roundtrip(k):
    e = gt_generator() ** k
    data = canonical_encode(e)
    assert len(data) == 384
    assert canonical_decode(GtElement, data) == e


def test_g1_decode_rejects_non_curve_x():
    # x = 4 gives x^3 + 3 = 67, a quadratic non-residue for this prime
    bad = bytearray(32)
    bad[-1] = 4
    with pytest.raises(EncodingError):
        canonical_decode(G1Element, bytes(bad))


def test_g1_decode_rejects_noncanonical_identity():
    bad = bytearray(canonical_encode(g1_generator() ** 0))
    bad[-1] = 1  # identity flag with nonzero x
    with pytest.raises(EncodingError):
        canonical_decode(G1Element, bytes(bad))


def test_g2_decode_rejects_point_outside_subgroup():
    # a point on the twist but of wrong order: scan x values on the full
    # curve; cofactor > 1 means most sqrt-able x give non-subgroup points
    found = False
    for x_re in range(1, 40):
        x = [bn.mpz(0), bn.mpz(x_re)]
        rhs = bn.fq2_add(bn.fq2_mul(bn.fq2_square(x), x), bn.twist_b)
        y = bn.fq2_sqrt(rhs)
        if y is None or bn.twist_in_subgroup([x, y, bn.fq2_one]):
            continue
        raw = bytearray(int(x[0]).to_bytes(32, "big") + int(x[1]).to_bytes(32, "big"))
        with pytest.raises(EncodingError):
            canonical_decode(G2Element, bytes(raw))
        found = True
        break
    assert found, "no off-subgroup twist point found in scan range"


def test_gt_decode_rejects_non_subgroup_element():
    raw = bytearray(384)
    raw[-1] = 2  # the constant 2 is not in the order-p subgroup
    with pytest.raises(EncodingError):
        canonical_decode(GtElement, bytes(raw))


def test_group_inverses():
    a = g1_generator() ** 7
    assert (a * a.inverse()).is_identity()
    b = g2_generator() ** 7
    assert (b * b.inverse()).is_identity()
    c = gt_generator() ** 7
    assert (c * c.inverse()).is_identity()


def test_pairing_bilinearity_api():
    a, b = Scalar(1182), Scalar(9917)
    assert pairing(g1_generator() ** a, g2_generator() ** b) \
        == gt_generator() ** (a * b)


def test_multi_pairing_matches_single():
    pairs = [(g1_generator() ** k, g2_generator() ** (k + 1)) for k in range(1, 4)]
    product = pairs[0][0] ** 0  # placeholder; build identity in Gt instead
    expected = gt_generator() ** 0
    for g1e, g2e in pairs:
        expected = expected * pairing(g1e, g2e)
    assert multi_pairing(pairs) == expected


def test_attr_maps_share_one_exponent():
    # F1(x) and F2(x) must use the same scalar so pairings cancel
    x = "clearance:top"
    assert pairing(attr_to_g1(x), g2_generator()) \
        == pairing(g1_generator(), attr_to_g2(x))
    assert attr_to_g1(x) == g1_generator() ** hash_to_scalar(x)


def test_hash_to_scalar_deterministic_and_spread():
    assert hash_to_scalar("a") == hash_to_scalar("a")
    assert hash_to_scalar("a") != hash_to_scalar("b")
    assert hash_to_scalar(b"a") == hash_to_scalar("a")


def test_kdf_shape():
    k1 = kdf(gt_generator() ** 3)
    k2 = kdf(gt_generator() ** 4)
    assert len(k1) == 32 and k1 != k2
    assert kdf(gt_generator() ** 3) == k1


def test_tape_determinism_and_forks():
    t1, t2 = RandomTape.from_int(9), RandomTape.from_int(9)
    assert [t1.draw_scalar() for _ in range(5)] == [t2.draw_scalar() for _ in range(5)]
    assert t1.draw_bytes(100) == t2.draw_bytes(100)
    f1, f2 = t1.fork("x"), t1.fork("y")
    assert f1.draw_scalar() != f2.draw_scalar()
    assert t1.fork("x").draw_scalar() == RandomTape.from_int(9).fork("x").draw_scalar()


def test_tape_seed_length_checked():
    with pytest.raises(ValueError):
        RandomTape(b"short")


def test_tape_draw_gt_in_subgroup():
    e = RandomTape.from_int(3).draw_gt()
    assert canonical_decode(GtElement, canonical_encode(e)) == e


def test_reader_truncation():
    r = Reader(b"abc")
    with pytest.raises(EncodingError):
        r.take(4)
