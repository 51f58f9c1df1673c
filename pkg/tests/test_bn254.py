"""Properties of the underlying pairing arithmetic.

These tests check the group law and the pairing against algebraic
identities that an incorrect implementation would fail with overwhelming
probability: bilinearity in both slots, non-degeneracy, and agreement
between single and batched pairings.
"""

import random

import pytest

from poabe import _bn254 as bn

rng = random.Random(1234)


def rand_scalar():
    return rng.randrange(1, int(bn.order))


def test_generators_on_curve_and_in_subgroup():
    assert bn.curve_on_curve(bn.g1_gen)
    assert bn.twist_on_curve(bn.g2_gen)
    assert bn.curve_is_inf(bn.curve_mul(bn.g1_gen, int(bn.order)))
    assert bn.twist_is_inf(bn.twist_mul(bn.g2_gen, int(bn.order)))
    assert bn.twist_in_subgroup(bn.g2_gen)


def test_group_law_matches_scalar_arithmetic():
    a, b = rand_scalar(), rand_scalar()
    lhs = bn.curve_add(bn.curve_mul(bn.g1_gen, a), bn.curve_mul(bn.g1_gen, b))
    rhs = bn.curve_mul(bn.g1_gen, (a + b) % int(bn.order))
    assert bn.curve_eq(lhs, rhs)
    lhs = bn.twist_add(bn.twist_mul(bn.g2_gen, a), bn.twist_mul(bn.g2_gen, b))
    rhs = bn.twist_mul(bn.g2_gen, (a + b) % int(bn.order))
    assert bn.twist_eq(lhs, rhs)


def test_doubling_agrees_with_addition():
    p = bn.curve_mul(bn.g1_gen, rand_scalar())
    assert bn.curve_eq(bn.curve_double(p), bn.curve_mul(p, 2))
    q = bn.twist_mul(bn.g2_gen, rand_scalar())
    assert bn.twist_eq(bn.twist_double(q), bn.twist_mul(q, 2))


def test_pairing_nondegenerate_and_in_gt():
    e = bn.pairing(bn.g2_gen, bn.g1_gen)
    assert not bn.fq12_is_one(e)
    assert bn.fq12_in_gt(e)


@pytest.mark.parametrize("trial", range(3))
def test_pairing_bilinear(trial):
    a, b = rand_scalar(), rand_scalar()
    lhs = bn.pairing(bn.twist_mul(bn.g2_gen, b), bn.curve_mul(bn.g1_gen, a))
    rhs = bn.fq12_exp(bn.pairing(bn.g2_gen, bn.g1_gen), a * b % int(bn.order))
    assert lhs == rhs


def test_pairing_with_identity_is_one():
    assert bn.fq12_is_one(bn.pairing(bn.twist_inf, bn.g1_gen))
    assert bn.fq12_is_one(bn.pairing(bn.g2_gen, bn.curve_inf))


def test_multi_pairing_matches_product_of_pairings():
    pairs = [(bn.twist_mul(bn.g2_gen, rand_scalar()),
              bn.curve_mul(bn.g1_gen, rand_scalar())) for _ in range(4)]
    product = bn.fq12_one
    for q, p in pairs:
        product = bn.fq12_mul(product, bn.pairing(q, p))
    assert bn.multi_pairing(pairs) == product


def test_pairing_inverse_slot():
    # e(-P, Q) = e(P, Q)^{-1}
    p = bn.curve_mul(bn.g1_gen, rand_scalar())
    e = bn.pairing(bn.g2_gen, p)
    e_neg = bn.pairing(bn.g2_gen, bn.curve_neg(p))
    assert bn.fq12_is_one(bn.fq12_mul(e, e_neg))


def test_fq2_sqrt_roundtrip():
    for _ in range(10):
        x = [bn.mpz(rng.randrange(bn.p)), bn.mpz(rng.randrange(bn.p))]
        square = bn.fq2_square(x)
        root = bn.fq2_sqrt(square)
        assert root is not None
        assert bn.fq2_square(root) == square


def test_fq12_exp_order_annihilates():
    e = bn.pairing(bn.g2_gen, bn.curve_mul(bn.g1_gen, rand_scalar()))
    assert bn.fq12_is_one(bn.fq12_exp(e, int(bn.order)))


def test_miller_count_increments():
    before = bn.miller_count
    bn.pairing(bn.g2_gen, bn.g1_gen)
    assert bn.miller_count == before + 1
    bn.multi_pairing([(bn.g2_gen, bn.g1_gen)] * 3)
    assert bn.miller_count == before + 4
