"""Secret sharing: frozen examples, round trips, exhaustive threshold secrecy."""

import io
import random

import pytest

from gaskit.field import FieldElement, Prime
from gaskit.sss import (
    SecretPolynomial,
    Share,
    ThresholdError,
    commit,
    dealer_polynomial_with_nonzero_shares,
    issue_shares,
    read_shares,
    reconstruct,
    sample_polynomial,
    verify_commitment,
    write_shares,
)

F17 = Prime(17)
F37 = Prime(37)


def el(v, q=F17):
    return FieldElement(v, q)


def poly_5_3():
    return SecretPolynomial((el(5), el(3)))  # f(x) = 5 + 3x mod 17


# --- sampling ----------------------------------------------------------------

def test_sample_t1_constant():
    rng = random.Random(0)
    poly = sample_polynomial(1, el(9), rng)
    shares = issue_shares(poly, [el(1), el(4), el(11)])
    assert all(s.y.residue == 9 for s in shares)


def test_sample_constant_term_and_degree():
    rng = random.Random(1)
    for t in range(1, 9):
        poly = sample_polynomial(t, el(5, F37), rng)
        assert poly.secret.residue == 5
        assert poly.threshold == t
        if t >= 2:
            assert poly.coefficients[-1].residue != 0


def test_sample_rejects_bad_threshold():
    rng = random.Random(2)
    with pytest.raises(ValueError):
        sample_polynomial(0, el(5), rng)
    with pytest.raises(ValueError, match="capacity"):
        sample_polynomial(17, el(5), rng)  # t > q - 1


def test_polynomial_invariants():
    with pytest.raises(ValueError, match="leading"):
        SecretPolynomial((el(5), el(0)))
    with pytest.raises(ValueError):
        SecretPolynomial(())


# --- issuing -----------------------------------------------------------------

def test_issue_shares_frozen_example():
    shares = issue_shares(poly_5_3(), [el(1), el(2)])
    assert [(s.x.residue, s.y.residue) for s in shares] == [(1, 8), (2, 11)]
    assert [s.member_id for s in shares] == ["U1", "U2"]


def test_issue_rejects_zero_and_duplicate_x():
    with pytest.raises(ValueError, match="reveal"):
        issue_shares(poly_5_3(), [el(0)])
    with pytest.raises(ValueError, match="duplicate"):
        issue_shares(poly_5_3(), [el(2), el(2)])
    assert issue_shares(poly_5_3(), []) == []


def test_share_type_rejects_zero_x():
    with pytest.raises(ValueError):
        Share(x=el(0), y=el(5), member_id="U1")


# --- reconstruction ----------------------------------------------------------

def test_reconstruct_frozen_example():
    shares = issue_shares(poly_5_3(), [el(1), el(2)])
    assert reconstruct(shares, 2).residue == 5  # 8*2 + 11*16 mod 17


def test_reconstruct_t1_single_share():
    share = Share(x=el(3), y=el(9), member_id="U1")
    assert reconstruct([share], 1).residue == 9


def test_reconstruct_below_threshold():
    shares = issue_shares(poly_5_3(), [el(1)])
    with pytest.raises(ThresholdError):
        reconstruct(shares, 2)


def test_reconstruct_duplicate_x():
    s = Share(x=el(1), y=el(8), member_id="U1")
    with pytest.raises(ValueError, match="duplicate"):
        reconstruct([s, s], 2)


def test_round_trip_many_cases():
    rng = random.Random(42)
    q = Prime(2027)
    for _ in range(500):
        t = rng.randrange(1, 9)
        m = t + rng.randrange(0, 6)
        secret = q.random_element(rng)
        poly = sample_polynomial(t, secret, rng)
        xs_vals = rng.sample(range(1, q.value), m)
        shares = issue_shares(poly, [FieldElement(v, q) for v in xs_vals])
        assert reconstruct(shares, t) == secret


def test_reconstruct_order_and_subset_independent():
    rng = random.Random(3)
    q = F37
    poly = sample_polynomial(3, el(21, q), rng)
    shares = issue_shares(poly, [FieldElement(v, q) for v in (1, 2, 3, 4, 5)])
    secret = reconstruct(shares, 3)
    shuffled = shares[:]
    rng.shuffle(shuffled)
    assert reconstruct(shuffled, 3) == secret
    assert reconstruct(shares[2:], 3) == secret
    assert reconstruct([shares[4], shares[0], shares[2]], 3) == secret


def test_single_corruption_changes_result():
    rng = random.Random(4)
    q = F37
    poly = sample_polynomial(3, el(21, q), rng)
    shares = issue_shares(poly, [FieldElement(v, q) for v in (2, 9, 30)])
    true = reconstruct(shares, 3)
    for i in range(3):
        bad = shares[:]
        bad[i] = Share(bad[i].x, bad[i].y + el(1, q), bad[i].member_id)
        assert reconstruct(bad, 3) != true


# --- commitment ----------------------------------------------------------------

def test_commitment_roundtrip():
    s = el(11)
    c = commit(s)
    assert verify_commitment(s, c)
    assert not verify_commitment(s + el(1), c)
    assert commit(s).digest == c.digest
    assert len(c.digest) == 32


# --- threshold secrecy (exhaustive, desk scale) --------------------------------

def test_threshold_secrecy_exhaustive_f37():
    """With t-1 = 2 shares over F_37, enumerate every degree <= 2 polynomial:
    each candidate secret is attained by a consistent polynomial."""
    q = F37
    rng = random.Random(5)
    poly = sample_polynomial(3, q.random_element(rng), rng)
    observed = issue_shares(poly, [FieldElement(1, q), FieldElement(2, q)])
    attained = set()
    attained_exact_degree = set()
    for d in range(37):
        for a1 in range(37):
            for a2 in range(37):
                f = lambda x: (d + a1 * x + a2 * x * x) % 37
                if all(f(s.x.residue) == s.y.residue for s in observed):
                    attained.add(d)
                    if a2 != 0:
                        attained_exact_degree.add(d)
    assert attained == set(range(37))
    # the dealer's exact-degree policy gives up at most one candidate
    assert len(attained_exact_degree) >= 36


def test_threshold_secrecy_constructive_f257():
    """Same statement over F_257 via direct interpolation through
    (0, candidate) plus the observed t-1 shares."""
    from gaskit.field import lagrange_coeff

    q = Prime(257)
    rng = random.Random(6)
    poly = sample_polynomial(3, q.random_element(rng), rng)
    observed = issue_shares(poly, [FieldElement(3, q), FieldElement(7, q)])
    nodes = [FieldElement(0, q)] + [s.x for s in observed]
    for candidate in range(257):
        ys = [FieldElement(candidate, q)] + [s.y for s in observed]
        def value_at(x):
            acc = FieldElement(0, q)
            for i in range(3):
                acc = acc + ys[i] * lagrange_coeff(i, nodes, x)
            return acc
        assert all(value_at(s.x) == s.y for s in observed)
        assert value_at(FieldElement(0, q)).residue == candidate


# --- dealer with nonzero shares -------------------------------------------------

def test_dealer_avoids_zero_shares():
    q = F37
    xs = [FieldElement(v, q) for v in range(1, 13)]
    for seed in range(50):
        rng = random.Random(seed)
        poly, shares = dealer_polynomial_with_nonzero_shares(3, q, xs, rng)
        assert poly.secret.residue != 0
        assert all(s.y.residue != 0 for s in shares)
        assert reconstruct(shares[:3], 3) == poly.secret


# --- share file format -----------------------------------------------------------

def test_share_file_roundtrip():
    shares = issue_shares(poly_5_3(), [el(1), el(2)])
    buf = io.StringIO()
    write_shares(buf, shares)
    lines = buf.getvalue().strip().splitlines()
    assert len(lines) == 2
    assert '"member_id"' in lines[0]
    buf.seek(0)
    again = read_shares(buf, F17)
    assert again == shares
