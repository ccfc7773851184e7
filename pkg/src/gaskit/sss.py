"""Shamir secret sharing over a prime field.

A dealer embeds the group secret as the constant term of a random
polynomial of degree exactly t-1 and hands each member one evaluation
point.  Any t points reconstruct the secret by Lagrange interpolation at
zero; the dealer also publishes a hash commitment so reconstructors can
check what they recovered.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import random
from dataclasses import dataclass

from .field import FieldElement, Prime, lagrange_coeff_at_zero

__all__ = [
    "ThresholdError",
    "SecretPolynomial",
    "Share",
    "SecretCommitment",
    "sample_polynomial",
    "issue_shares",
    "reconstruct",
    "commit",
    "verify_commitment",
    "write_shares",
    "read_shares",
]

_REDRAW_LIMIT = 1000


class ThresholdError(ValueError):
    """Fewer shares supplied than the threshold requires."""


@dataclass(frozen=True)
class SecretPolynomial:
    """Coefficients constant-term first; degree exactly t-1 for t >= 2."""

    coefficients: tuple[FieldElement, ...]

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise ValueError("polynomial needs at least a constant term")
        if len(self.coefficients) >= 2 and self.coefficients[-1].residue == 0:
            raise ValueError("leading coefficient must be nonzero")

    @property
    def threshold(self) -> int:
        return len(self.coefficients)

    @property
    def secret(self) -> FieldElement:
        return self.coefficients[0]

    @property
    def field(self) -> Prime:
        return self.coefficients[0].modulus

    def evaluate(self, x: FieldElement) -> FieldElement:
        acc = FieldElement(0, self.field)
        for coeff in reversed(self.coefficients):
            acc = acc * x + coeff
        return acc


@dataclass(frozen=True)
class Share:
    """One member's point on the dealer polynomial: public x, private y."""

    x: FieldElement
    y: FieldElement
    member_id: str

    def __post_init__(self) -> None:
        if self.x.residue == 0:
            raise ValueError("share x must be nonzero (x=0 evaluates to the secret)")


@dataclass(frozen=True)
class SecretCommitment:
    digest: bytes

    def __post_init__(self) -> None:
        if len(self.digest) != hashlib.sha256().digest_size:
            raise ValueError("commitment digest must be 32 bytes")

    def hex(self) -> str:
        return self.digest.hex()


def sample_polynomial(
    t: int, secret: FieldElement, rng: random.Random
) -> SecretPolynomial:
    """Random degree-(t-1) polynomial with the given constant term.

    The leading coefficient is re-drawn until nonzero so the degree is
    exactly t-1 and the threshold is sharp.
    """
    if t < 1:
        raise ValueError("threshold must be >= 1")
    q = secret.modulus
    if t > q.value - 1:
        raise ValueError(f"threshold {t} exceeds field capacity (q={q.value})")
    coeffs = [secret]
    coeffs += [q.random_element(rng) for _ in range(t - 2)]
    if t >= 2:
        lead = q.random_element(rng)
        while lead.residue == 0:
            lead = q.random_element(rng)
        coeffs.append(lead)
    return SecretPolynomial(tuple(coeffs))


def issue_shares(
    poly: SecretPolynomial,
    xs: list[FieldElement],
    member_ids: list[str] | None = None,
) -> list[Share]:
    """Evaluate the polynomial at each x (Horner); x's distinct and nonzero."""
    if member_ids is None:
        member_ids = [f"U{i + 1}" for i in range(len(xs))]
    if len(member_ids) != len(xs):
        raise ValueError("one member id per x")
    seen: set[int] = set()
    for x in xs:
        if x.residue == 0:
            raise ValueError("x=0 would reveal the secret")
        if x.residue in seen:
            raise ValueError(f"duplicate x-coordinate {x.residue}")
        seen.add(x.residue)
    return [
        Share(x=x, y=poly.evaluate(x), member_id=mid)
        for x, mid in zip(xs, member_ids)
    ]


def reconstruct(shares: list[Share], t: int) -> FieldElement:
    """Interpolate the constant term from m >= t shares."""
    if len(shares) < t:
        raise ThresholdError(f"need at least {t} shares, got {len(shares)}")
    xs = [s.x for s in shares]
    if len({x.residue for x in xs}) != len(xs):
        raise ValueError("duplicate x-coordinates in share set")
    acc = FieldElement(0, xs[0].modulus)
    for i, share in enumerate(shares):
        acc = acc + share.y * lagrange_coeff_at_zero(i, xs)
    return acc


def commit(secret: FieldElement) -> SecretCommitment:
    """SHA-256 over the canonical fixed-width encoding of the secret."""
    return SecretCommitment(hashlib.sha256(secret.to_bytes()).digest())


def verify_commitment(candidate: FieldElement, commitment: SecretCommitment) -> bool:
    return hmac.compare_digest(commit(candidate).digest, commitment.digest)


def dealer_polynomial_with_nonzero_shares(
    t: int,
    secret_field: Prime,
    xs: list[FieldElement],
    rng: random.Random,
) -> tuple[SecretPolynomial, list[Share]]:
    """Draw a polynomial whose secret and every issued share are nonzero.

    A zero share would map to the point at infinity when broadcast, which
    the protocol layer rejects; re-drawing keeps honest runs on small
    fields from tripping over that edge.
    """
    for _ in range(_REDRAW_LIMIT):
        secret = secret_field.random_element(rng)
        if secret.residue == 0:
            continue
        poly = sample_polynomial(t, secret, rng)
        shares = issue_shares(poly, xs)
        if all(s.y.residue != 0 for s in shares):
            return poly, shares
    raise ValueError(
        f"could not find a polynomial with nonzero shares for {len(xs)} members"
        f" over F_{secret_field.value}"
    )


# ---------------------------------------------------------------------------
# Share file format: JSON lines, one record per member.

def write_shares(fh, shares: list[Share]) -> None:
    for share in shares:
        fh.write(
            json.dumps(
                {
                    "member_id": share.member_id,
                    "x": str(share.x.residue),
                    "y": str(share.y.residue),
                }
            )
            + "\n"
        )


def read_shares(fh, modulus: Prime) -> list[Share]:
    shares = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        shares.append(
            Share(
                x=FieldElement(int(rec["x"]), modulus),
                y=FieldElement(int(rec["y"]), modulus),
                member_id=rec["member_id"],
            )
        )
    return shares
