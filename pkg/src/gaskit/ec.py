"""Short-Weierstrass elliptic-curve group over a prime field.

Affine coordinates with chord-tangent addition.  Protocol scalars are
expected to live modulo `CurveParams.subgroup_order`: the builtin parameter
sets publish a generator of that prime-order subgroup, and the secret
sharing layer uses the same prime as its field modulus so that Lagrange
arithmetic and scalar arithmetic agree.

Builtin parameter sets (see ``data/``):

* ``test2017``  - y^2 = x^3 + 6x + 36 mod 2017.  Group order 2035 = 5*11*37;
  the published generator (1368, 374) spans the prime subgroup of order 37.
* ``secp160r1`` - the standard 160-bit SECG curve (prime order, cofactor 1).
* ``toy5``      - y^2 = x^3 + 1 mod 5, order 6; only useful for exhaustive
  unit tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .field import FieldElement, Prime, active_counter, cached_prime

__all__ = [
    "CurvePoint",
    "CurveParams",
    "is_on_curve",
    "add",
    "negate",
    "scalar_mul",
    "brute_force_order",
    "builtin_curve",
    "load_curve",
    "curve_from_dict",
    "curve_to_dict",
    "BUILTIN_CURVES",
]

_BRUTE_FORCE_LIMIT = 10**6


class CurvePoint:
    """Affine point (x, y) or the point at infinity."""

    __slots__ = ("x", "y")

    def __init__(self, x: FieldElement | None, y: FieldElement | None):
        if (x is None) != (y is None):
            raise ValueError("both coordinates or neither")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name, value):
        raise AttributeError("CurvePoint is immutable")

    @classmethod
    def infinity(cls) -> "CurvePoint":
        return _INFINITY

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __eq__(self, other) -> bool:
        if not isinstance(other, CurvePoint):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self) -> int:
        return hash((self.x, self.y))

    def __repr__(self) -> str:
        if self.is_infinity:
            return "CurvePoint(infinity)"
        return f"CurvePoint({self.x.residue}, {self.y.residue})"


_INFINITY = CurvePoint(None, None)


@dataclass(frozen=True)
class CurveParams:
    """y^2 = x^3 + Ax + B over F_p, plus a published generator.

    `order` is the full group order (optional until computed for toy
    curves); `subgroup_order` is the prime order of the generator, the
    modulus protocol scalars are drawn from.
    """

    a: FieldElement
    b: FieldElement
    modulus: Prime
    generator: CurvePoint
    order: int | None = None
    subgroup_order: int | None = None
    name: str = ""

    def __post_init__(self) -> None:
        p = self.modulus.value
        disc = (4 * self.a.residue**3 + 27 * self.b.residue**2) % p
        if disc == 0:
            raise ValueError("singular curve: 4A^3 + 27B^2 = 0")
        if not is_on_curve(self.generator, self):
            raise ValueError("generator is not on the curve")
        if self.generator.is_infinity:
            raise ValueError("generator must not be the point at infinity")
        if self.subgroup_order is not None:
            if not is_probable_subgroup(self):
                raise ValueError("subgroup_order does not annihilate the generator")

    @property
    def coord_byte_length(self) -> int:
        return self.modulus.byte_length

    def scalar_field(self) -> Prime:
        """The prime scalar ring; requires a published subgroup order."""
        if self.subgroup_order is None:
            raise ValueError(f"curve {self.name or '<anonymous>'} has no subgroup_order")
        return cached_prime(self.subgroup_order)

    def point(self, x: int, y: int) -> CurvePoint:
        return CurvePoint(
            FieldElement(x, self.modulus), FieldElement(y, self.modulus)
        )


def is_probable_subgroup(curve: CurveParams) -> bool:
    if scalar_mul(curve.subgroup_order, curve.generator, curve, _count=False) != _INFINITY:
        return False
    return curve.order is None or curve.order % curve.subgroup_order == 0


def is_on_curve(pt: CurvePoint, curve: CurveParams) -> bool:
    """Raw-integer membership check (does not touch the mul counter)."""
    if pt.is_infinity:
        return True
    p = curve.modulus.value
    if pt.x.modulus.value != p:
        return False
    x, y = pt.x.residue, pt.y.residue
    return (y * y - (x * x * x + curve.a.residue * x + curve.b.residue)) % p == 0


def _require_on_curve(pt: CurvePoint, curve: CurveParams) -> None:
    if not is_on_curve(pt, curve):
        raise ValueError(f"point {pt!r} is not on curve {curve.name or '<anonymous>'}")


def negate(pt: CurvePoint) -> CurvePoint:
    if pt.is_infinity:
        return pt
    return CurvePoint(pt.x, -pt.y)


def add(p1: CurvePoint, p2: CurvePoint, curve: CurveParams) -> CurvePoint:
    """Chord-tangent group law; infinity is the identity."""
    _require_on_curve(p1, curve)
    _require_on_curve(p2, curve)
    return _add_unchecked(p1, p2, curve)


def _add_unchecked(p1: CurvePoint, p2: CurvePoint, curve: CurveParams) -> CurvePoint:
    if p1.is_infinity:
        return p2
    if p2.is_infinity:
        return p1
    if p1.x == p2.x:
        if (p1.y + p2.y).residue == 0:
            return _INFINITY
        # doubling: lambda = (3x^2 + A) / (2y)
        two = FieldElement(2, curve.modulus)
        three = FieldElement(3, curve.modulus)
        lam = (three * p1.x * p1.x + curve.a) / (two * p1.y)
    else:
        lam = (p2.y - p1.y) / (p2.x - p1.x)
    x3 = lam * lam - p1.x - p2.x
    y3 = lam * (p1.x - x3) - p1.y
    return CurvePoint(x3, y3)


def scalar_mul(
    k: int, pt: CurvePoint, curve: CurveParams, *, _count: bool = True
) -> CurvePoint:
    """k * pt by double-and-add.  Records one TEM event when counting."""
    if k < 0:
        raise ValueError("scalar must be non-negative")
    _require_on_curve(pt, curve)
    if _count:
        counter = active_counter()
        if counter is not None:
            counter.ec_scalar_muls += 1
    acc = _INFINITY
    addend = pt
    while k:
        if k & 1:
            acc = _add_unchecked(acc, addend, curve)
        k >>= 1
        if k:
            addend = _add_unchecked(addend, addend, curve)
    return acc


def brute_force_order(curve: CurveParams) -> int:
    """Point count by exhaustive enumeration (test oracle, modulus <= 1e6)."""
    p = curve.modulus.value
    if p > _BRUTE_FORCE_LIMIT:
        raise ValueError(f"modulus {p} too large to enumerate")
    square_counts = [0] * p
    for y in range(p):
        square_counts[y * y % p] += 1
    a, b = curve.a.residue, curve.b.residue
    count = 1  # infinity
    for x in range(p):
        count += square_counts[(x * x * x + a * x + b) % p]
    return count


# ---------------------------------------------------------------------------
# Parameter files: JSON with decimal-string fields
# {p, A, B, Gx, Gy, order, subgroup_order}.

BUILTIN_CURVES = ("test2017", "secp160r1", "toy5")


def curve_from_dict(data: dict, name: str = "") -> CurveParams:
    try:
        p = Prime(int(data["p"]))
        a = FieldElement(int(data["A"]), p)
        b = FieldElement(int(data["B"]), p)
        gx = FieldElement(int(data["Gx"]), p)
        gy = FieldElement(int(data["Gy"]), p)
    except KeyError as exc:
        raise ValueError(f"curve file missing field {exc}") from exc
    order = int(data["order"]) if data.get("order") else None
    sub = int(data["subgroup_order"]) if data.get("subgroup_order") else None
    return CurveParams(
        a=a,
        b=b,
        modulus=p,
        generator=CurvePoint(gx, gy),
        order=order,
        subgroup_order=sub,
        name=name or data.get("name", ""),
    )


def curve_to_dict(curve: CurveParams) -> dict:
    return {
        "name": curve.name,
        "p": str(curve.modulus.value),
        "A": str(curve.a.residue),
        "B": str(curve.b.residue),
        "Gx": str(curve.generator.x.residue),
        "Gy": str(curve.generator.y.residue),
        "order": str(curve.order) if curve.order is not None else None,
        "subgroup_order": (
            str(curve.subgroup_order) if curve.subgroup_order is not None else None
        ),
    }


def load_curve(path) -> CurveParams:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return curve_from_dict(data, name=str(path))


@lru_cache(maxsize=None)
def builtin_curve(name: str) -> CurveParams:
    if name not in BUILTIN_CURVES:
        raise ValueError(f"unknown builtin curve {name!r}; valid: {BUILTIN_CURVES}")
    text = resources.files("gaskit.data").joinpath(f"{name}.json").read_text("utf-8")
    return curve_from_dict(json.loads(text), name=name)
