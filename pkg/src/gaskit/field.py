"""Prime-field arithmetic with an optional per-context multiplication counter.

Everything downstream (curve group, secret sharing, the Harn baseline) is
built on `FieldElement`.  Multiplications are the cost unit of the whole
toolkit, so `FieldElement.__mul__` and `pow` report into whatever
`MulCounter` is active in the current execution context.  Inversions are
*not* counted: they are tracked as separate unit operations in the cost
model, matching how the per-user operation counts are broken down.
"""

from __future__ import annotations

import contextvars
import random
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "Prime",
    "FieldElement",
    "MulCounter",
    "active_counter",
    "is_probable_prime",
    "lagrange_coeff",
    "lagrange_coeff_at_zero",
]

_MR_ROUNDS = 64
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


def is_probable_prime(n: int, rounds: int = _MR_ROUNDS) -> bool:
    """Miller-Rabin with deterministic bases derived from n (reproducible)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    rng = random.Random(n)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True, slots=True)
class Prime:
    """A checked prime modulus (>= 3)."""

    value: int

    def __post_init__(self) -> None:
        if self.value < 3:
            raise ValueError(f"modulus must be >= 3, got {self.value}")
        if not is_probable_prime(self.value):
            raise ValueError(f"modulus {self.value} is not prime")

    @property
    def byte_length(self) -> int:
        return (self.value.bit_length() + 7) // 8

    def element(self, residue: int) -> "FieldElement":
        return FieldElement(residue, self)

    def random_element(self, rng: random.Random) -> "FieldElement":
        return FieldElement(rng.randrange(self.value), self)

    def __repr__(self) -> str:
        return f"Prime({self.value})"


@lru_cache(maxsize=None)
def cached_prime(value: int) -> Prime:
    """Primality checking is expensive; reuse Prime instances by value."""
    return Prime(value)


# The active counter is confined to one execution context (one simulated
# node); `contextvars` keeps it isolated across threads/tasks.
_ACTIVE: contextvars.ContextVar["MulCounter | None"] = contextvars.ContextVar(
    "gaskit_mul_counter", default=None
)


class MulCounter:
    """Counts field multiplications and EC scalar multiplications (TEM events).

    Used as a context manager::

        with MulCounter() as ops:
            ...
        assert ops.ec_scalar_muls == 1
    """

    __slots__ = ("field_muls", "ec_scalar_muls", "_token")

    def __init__(self) -> None:
        self.field_muls = 0
        self.ec_scalar_muls = 0
        self._token = None

    def __enter__(self) -> "MulCounter":
        self._token = _ACTIVE.set(self)
        return self

    def __exit__(self, *exc) -> None:
        _ACTIVE.reset(self._token)
        self._token = None

    def __repr__(self) -> str:
        return f"MulCounter(field_muls={self.field_muls}, ec_scalar_muls={self.ec_scalar_muls})"


def active_counter() -> MulCounter | None:
    return _ACTIVE.get()


def _tally_muls(n: int) -> None:
    counter = _ACTIVE.get()
    if counter is not None:
        counter.field_muls += n


class FieldElement:
    """Residue modulo a prime. Immutable; cross-modulus operations raise."""

    __slots__ = ("residue", "modulus")

    def __init__(self, residue: int, modulus: Prime):
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "residue", residue % modulus.value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if self.modulus.value != other.modulus.value:
            raise ValueError(
                f"modulus mismatch: {self.modulus.value} vs {other.modulus.value}"
            )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.residue + other.residue, self.modulus)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.residue - other.residue, self.modulus)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        _tally_muls(1)
        return FieldElement(self.residue * other.residue, self.modulus)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self * other.inv()

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.residue, self.modulus)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElement)
            and self.residue == other.residue
            and self.modulus.value == other.modulus.value
        )

    def __hash__(self) -> int:
        return hash((self.residue, self.modulus.value))

    def __repr__(self) -> str:
        return f"FieldElement({self.residue} mod {self.modulus.value})"

    def inv(self) -> "FieldElement":
        """Multiplicative inverse (not counted as a multiplication)."""
        if self.residue == 0:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(pow(self.residue, -1, self.modulus.value), self.modulus)

    def pow(self, exp: int) -> "FieldElement":
        """base**exp by square-and-multiply; tallies every multiplication."""
        if exp < 0:
            raise ValueError("exponent must be non-negative")
        q = self.modulus.value
        result = 1
        base = self.residue
        muls = 0
        e = exp
        while e:
            if e & 1:
                result = result * base % q
                muls += 1
            e >>= 1
            if e:
                base = base * base % q
                muls += 1
        _tally_muls(muls)
        return FieldElement(result, self.modulus)

    def to_bytes(self) -> bytes:
        """Canonical encoding: big-endian, fixed width of the modulus."""
        return self.residue.to_bytes(self.modulus.byte_length, "big")


def lagrange_coeff(idx: int, xs: list[FieldElement], at: FieldElement) -> FieldElement:
    """L_idx(at) = prod_{r != idx} (at - x_r) / (x_idx - x_r).

    `idx` is a 0-based position into `xs`; the x's must be pairwise distinct.
    An empty product (single-node xs) is one.
    """
    if not 0 <= idx < len(xs):
        raise IndexError(f"idx {idx} out of range for {len(xs)} nodes")
    x_i = xs[idx]
    num = FieldElement(1, x_i.modulus)
    den = FieldElement(1, x_i.modulus)
    for r, x_r in enumerate(xs):
        if r == idx:
            continue
        diff = x_i - x_r
        if diff.residue == 0:
            raise ValueError(f"duplicate x-coordinate {x_r.residue}")
        num = num * (at - x_r)
        den = den * diff
    return num * den.inv()


def lagrange_coeff_at_zero(idx: int, xs: list[FieldElement]) -> FieldElement:
    """The interpolation weight prod_{r != idx} (-x_r)/(x_idx - x_r)."""
    if not xs:
        raise ValueError("empty node list")
    return lagrange_coeff(idx, xs, FieldElement(0, xs[0].modulus))
