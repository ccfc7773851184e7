"""Field arithmetic: frozen examples, axioms, Lagrange weights, counting."""

import random

import pytest

from gaskit.field import (
    FieldElement,
    MulCounter,
    Prime,
    is_probable_prime,
    lagrange_coeff,
    lagrange_coeff_at_zero,
)

F17 = Prime(17)
F2027 = Prime(2027)


def el(v, q=F17):
    return FieldElement(v, q)


# --- primality ------------------------------------------------------------

def test_prime_accepts_primes():
    for p in (3, 17, 257, 2017, 2027, 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFF7FFFFFFF):
        assert is_probable_prime(p)


def test_prime_rejects_composites():
    for n in (1, 4, 561, 2035, 2047, 10**10):  # 561 is a Carmichael number
        assert not is_probable_prime(n)
    with pytest.raises(ValueError):
        Prime(15)
    with pytest.raises(ValueError):
        Prime(2)  # < 3


# --- frozen operation examples ---------------------------------------------

def test_add_examples():
    assert (el(5) + el(13)).residue == 1
    assert (el(0) + el(9)).residue == 9
    assert (el(16) + el(1)).residue == 0


def test_mul_examples():
    assert (el(5) * el(7)).residue == 1  # 35 mod 17
    assert (el(1) * el(12)).residue == 12
    assert (el(0) * el(12)).residue == 0


def test_inv_examples():
    assert el(5).inv().residue == 7  # 5*7 = 35 = 1 mod 17
    assert el(1).inv().residue == 1
    with pytest.raises(ZeroDivisionError):
        el(0).inv()


def test_pow_examples():
    assert FieldElement(7, F2027).pow(0).residue == 1
    assert el(2).pow(4).residue == 16
    # Fermat's little theorem
    rng = random.Random(1)
    for q in (F17, F2027):
        for _ in range(20):
            g = FieldElement(rng.randrange(1, q.value), q)
            assert g.pow(q.value - 1).residue == 1


def test_lagrange_examples():
    xs = [el(1), el(2)]
    assert lagrange_coeff_at_zero(0, xs).residue == 2   # -2/(1-2)
    assert lagrange_coeff_at_zero(1, xs).residue == 16  # -1/(2-1) = -1
    assert lagrange_coeff_at_zero(0, [el(5)]).residue == 1  # empty product


def test_lagrange_duplicate_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        lagrange_coeff_at_zero(0, [el(3), el(3)])
    with pytest.raises(IndexError):
        lagrange_coeff_at_zero(2, [el(1), el(2)])
    with pytest.raises(ValueError):
        lagrange_coeff_at_zero(0, [])


# --- modulus discipline ----------------------------------------------------

def test_cross_modulus_rejected():
    with pytest.raises(ValueError, match="mismatch"):
        el(1) + FieldElement(1, F2027)
    with pytest.raises(ValueError, match="mismatch"):
        el(1) * FieldElement(1, F2027)
    with pytest.raises(TypeError):
        el(1) + 3


def test_residue_reduced_and_immutable():
    assert el(40).residue == 6
    assert el(-1).residue == 16
    with pytest.raises(AttributeError):
        el(1).residue = 5


# --- axioms (randomized) ----------------------------------------------------

@pytest.mark.parametrize("qv", [17, 2027, 37])
def test_field_axioms(qv):
    q = Prime(qv)
    rng = random.Random(qv)
    for _ in range(1000):
        a, b, c = (q.random_element(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c


def test_inverse_exhaustive_small_fields():
    for qv in (37, 257):
        q = Prime(qv)
        one = FieldElement(1, q)
        for a in range(1, qv):
            assert FieldElement(a, q).inv() * FieldElement(a, q) == one


def test_lagrange_partition_of_unity():
    rng = random.Random(99)
    for _ in range(500):
        q = Prime(rng.choice([37, 257, 2027]))
        k = rng.randrange(1, 8)
        xs_vals = rng.sample(range(1, q.value), k)
        xs = [FieldElement(v, q) for v in xs_vals]
        total = FieldElement(0, q)
        for i in range(k):
            total = total + lagrange_coeff_at_zero(i, xs)
        assert total.residue == 1


def test_pow_additivity():
    rng = random.Random(7)
    q = F2027
    for _ in range(500):
        g = FieldElement(rng.randrange(1, q.value), q)
        a, b = rng.randrange(0, 5000), rng.randrange(0, 5000)
        assert g.pow(a + b) == g.pow(a) * g.pow(b)


def test_lagrange_coeff_general_point():
    # interpolating f(x) = x at "at" must reproduce "at"
    q = Prime(37)
    xs = [FieldElement(v, q) for v in (1, 5, 9)]
    at = FieldElement(20, q)
    acc = FieldElement(0, q)
    for i, x in enumerate(xs):
        acc = acc + x * lagrange_coeff(i, xs, at)
    assert acc == at


# --- counting ---------------------------------------------------------------

def test_counter_counts_muls():
    with MulCounter() as ops:
        el(5) * el(7)
        el(2) * el(3)
    assert ops.field_muls == 2
    assert ops.ec_scalar_muls == 0


def test_counter_pow_square_and_multiply():
    # exp = 0b1101: bitlen-1 squarings + popcount multiplies
    with MulCounter() as ops:
        el(3).pow(0b1101)
    assert ops.field_muls == (4 - 1) + 3
    with MulCounter() as ops:
        el(3).pow(0)
    assert ops.field_muls == 0


def test_counter_ignores_inversions():
    with MulCounter() as ops:
        el(5).inv()
    assert ops.field_muls == 0


def test_counter_scoped():
    el(5) * el(7)  # no active counter: must not raise
    with MulCounter() as outer:
        el(5) * el(7)
        with MulCounter() as inner:
            el(5) * el(7)
        el(5) * el(7)
    assert inner.field_muls == 1
    assert outer.field_muls == 2
