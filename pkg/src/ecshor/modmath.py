"""Classical number theory and elliptic-curve reference arithmetic.

Everything here works on plain Python integers. ``WideUInt`` is a thin checked
wrapper for callers that want the bit width carried alongside the value; every
function accepts either form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Union

__all__ = [
    "WideUInt",
    "CurvePoint",
    "CurveParams",
    "INFINITY",
    "NotInvertibleError",
    "KeySearchError",
    "is_prime",
    "mod_add",
    "mod_sub",
    "mod_neg",
    "mod_dbl",
    "mod_mul",
    "mod_inv",
    "montgomery_encode",
    "montgomery_decode",
    "montgomery_mul",
    "ec_neg",
    "ec_add",
    "ec_scalar_mul",
    "tangent_slope",
    "enumerate_points",
    "point_order",
    "key_search",
    "load_curve",
    "toy_curve",
    "TOY_CURVES",
]


class NotInvertibleError(ArithmeticError):
    pass


class KeySearchError(LookupError):
    """No candidate key reproduces the public key."""


@dataclass(frozen=True)
class WideUInt:
    """Unsigned integer with an explicit bit width (value < 2**bit_width)."""

    value: int
    bit_width: int

    def __post_init__(self):
        if self.bit_width < 0:
            raise ValueError("bit_width must be nonnegative")
        if not 0 <= self.value < (1 << self.bit_width) and not (self.value == 0 and self.bit_width == 0):
            raise OverflowError(f"{self.value} does not fit in {self.bit_width} bits")

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    @classmethod
    def of(cls, value: int, bit_width: int | None = None) -> "WideUInt":
        return cls(value, value.bit_length() if bit_width is None else bit_width)


IntLike = Union[int, WideUInt]


def _unwrap(*vals: IntLike) -> tuple[list[int], int | None]:
    widths = {v.bit_width for v in vals if isinstance(v, WideUInt)}
    if len(widths) > 1:
        raise ValueError(f"mismatched operand widths {sorted(widths)}")
    return [int(v) for v in vals], (widths.pop() if widths else None)


def _wrap(result: int, width: int | None) -> IntLike:
    return result if width is None else WideUInt(result, width)


def _check_reduced(p: int, *vals: int) -> None:
    for v in vals:
        if not 0 <= v < p:
            raise ValueError(f"operand {v} not reduced mod {p}")


def mod_add(a: IntLike, b: IntLike, p: IntLike) -> IntLike:
    (a, b, p), w = _unwrap(a, b, p)
    _check_reduced(p, a, b)
    return _wrap((a + b) % p, w)


def mod_sub(a: IntLike, b: IntLike, p: IntLike) -> IntLike:
    """Return a - b mod p."""
    (a, b, p), w = _unwrap(a, b, p)
    _check_reduced(p, a, b)
    return _wrap((a - b) % p, w)


def mod_neg(a: IntLike, p: IntLike) -> IntLike:
    (a, p), w = _unwrap(a, p)
    _check_reduced(p, a)
    return _wrap(-a % p, w)


def mod_dbl(a: IntLike, p: IntLike) -> IntLike:
    (a, p), w = _unwrap(a, p)
    _check_reduced(p, a)
    return _wrap(2 * a % p, w)


def mod_mul(a: IntLike, b: IntLike, p: IntLike) -> IntLike:
    (a, b, p), w = _unwrap(a, b, p)
    _check_reduced(p, a, b)
    return _wrap(a * b % p, w)


def mod_inv(a: IntLike, p: IntLike) -> IntLike:
    """Inverse by the extended Euclidean algorithm."""
    (a, p), w = _unwrap(a, p)
    old_r, r = a % p, p
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise NotInvertibleError(f"{a} has no inverse mod {p}")
    return _wrap(old_s % p, w)


# Deterministic for n < 3.3e24; beyond that it is a strong probabilistic test.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 1 << 20:
        if n % 2 == 0:
            return n == 2
        for d in range(3, math.isqrt(n) + 1, 2):
            if n % d == 0:
                return False
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _mont_radix(p: int, n: int) -> int:
    if p % 2 == 0:
        raise ValueError("Montgomery arithmetic needs an odd modulus")
    if p >= 1 << n:
        raise ValueError(f"modulus {p} does not fit in {n} bits")
    return 1 << n


def montgomery_encode(x: IntLike, p: IntLike, n: int) -> IntLike:
    """x * 2**n mod p."""
    (x, p), w = _unwrap(x, p)
    _check_reduced(p, x)
    return _wrap(x * _mont_radix(p, n) % p, w)


def montgomery_decode(x: IntLike, p: IntLike, n: int) -> IntLike:
    (x, p), w = _unwrap(x, p)
    _check_reduced(p, x)
    return _wrap(x * pow(_mont_radix(p, n), -1, p) % p, w)


def montgomery_mul(a: IntLike, b: IntLike, p: IntLike, n: int) -> IntLike:
    """a * b * 2**-n mod p, computed by word-serial Montgomery reduction."""
    (a, b, p), w = _unwrap(a, b, p)
    _check_reduced(p, a, b)
    _mont_radix(p, n)
    t = a * b
    pinv = pow(-p, -1, 1 << n)
    m = (t * pinv) % (1 << n)
    u = (t + m * p) >> n
    if u >= p:
        u -= p
    return _wrap(u, w)


@dataclass(frozen=True)
class CurvePoint:
    """Affine point; the group identity is stored as (0, 0)."""

    x: int
    y: int

    @property
    def is_infinity(self) -> bool:
        return self.x == 0 and self.y == 0

    def __iter__(self) -> Iterator[int]:
        yield self.x
        yield self.y


INFINITY = CurvePoint(0, 0)


@dataclass(frozen=True)
class CurveParams:
    """Short Weierstrass curve y^2 = x^3 + c1 x + c2 over GF(p).

    ``order_r`` is the order of the base point, so [order_r]P is the identity
    and [order_r + 1]P = P. c2 must be nonzero so that (0, 0) is not a curve
    point and can stand in for the identity.
    """

    p: int
    c1: int
    c2: int
    base_point: CurvePoint
    order_r: int
    name: str = ""
    check: bool = True

    def __post_init__(self):
        if not self.check:
            return
        p = self.p
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        if not (0 <= self.c1 < p and 0 <= self.c2 < p):
            raise ValueError("curve constants must be reduced mod p")
        if self.c2 == 0:
            raise ValueError("c2 = 0 puts (0,0) on the curve; it is reserved for the identity")
        if (4 * pow(self.c1, 3, p) + 27 * pow(self.c2, 2, p)) % p == 0:
            raise ValueError("singular curve")
        if self.base_point.is_infinity or not self.on_curve(self.base_point):
            raise ValueError(f"base point {self.base_point} is not on the curve")
        if not ec_scalar_mul(self.order_r, self.base_point, self).is_infinity:
            raise ValueError("order_r is not the order of the base point")

    @property
    def bits(self) -> int:
        return self.p.bit_length()

    def on_curve(self, pt: CurvePoint) -> bool:
        if pt.is_infinity:
            return True
        x, y, p = pt.x, pt.y, self.p
        if not (0 <= x < p and 0 <= y < p):
            return False
        return (y * y - (x * x * x + self.c1 * x + self.c2)) % p == 0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "p": str(self.p),
            "c1": str(self.c1),
            "c2": str(self.c2),
            "Px": str(self.base_point.x),
            "Py": str(self.base_point.y),
            "r": str(self.order_r),
            "bits": self.bits,
        }

    @classmethod
    def from_json(cls, data: dict, check: bool = True) -> "CurveParams":
        params = cls(
            p=int(data["p"]),
            c1=int(data["c1"]),
            c2=int(data["c2"]),
            base_point=CurvePoint(int(data["Px"]), int(data["Py"])),
            order_r=int(data["r"]),
            name=data.get("name", ""),
            check=check,
        )
        if "bits" in data and int(data["bits"]) != params.bits:
            raise ValueError(f"declared bits {data['bits']} != bit length of p ({params.bits})")
        return params


def ec_neg(pt: CurvePoint, params: CurveParams) -> CurvePoint:
    return pt if pt.is_infinity else CurvePoint(pt.x, -pt.y % params.p)


def tangent_slope(pt: CurvePoint, params: CurveParams) -> int:
    """(3a^2 + c1) / (2b); 0 when the slope is undefined (identity or b = 0)."""
    a, b = pt
    if pt.is_infinity or b == 0:
        return 0
    p = params.p
    return (3 * a * a + params.c1) * mod_inv(2 * b % p, p) % p


def ec_add(p1: CurvePoint, p2: CurvePoint, params: CurveParams) -> CurvePoint:
    p = params.p
    if p1.is_infinity:
        return p2
    if p2.is_infinity:
        return p1
    a, b = p1
    x, y = p2
    if a == x and (b + y) % p == 0:
        return INFINITY
    if p1 == p2:
        lam = tangent_slope(p1, params)
    else:
        assert x != a
        lam = (y - b) * mod_inv((x - a) % p, p) % p
    xr = (lam * lam - x - a) % p
    yr = (lam * (a - xr) - b) % p
    return CurvePoint(xr, yr)


def ec_scalar_mul(k: int, pt: CurvePoint, params: CurveParams) -> CurvePoint:
    """[k]P by left-to-right double-and-add."""
    k = int(k)
    if k < 0:
        return ec_scalar_mul(-k, ec_neg(pt, params), params)
    acc = INFINITY
    for bit in bin(k)[2:] if k else "":
        acc = ec_add(acc, acc, params)
        if bit == "1":
            acc = ec_add(acc, pt, params)
    return acc


def enumerate_points(params: CurveParams) -> list[CurvePoint]:
    """All affine points plus the identity, by exhaustive search (small p only)."""
    p = params.p
    roots: dict[int, list[int]] = {}
    for y in range(p):
        roots.setdefault(y * y % p, []).append(y)
    pts = [INFINITY]
    for x in range(p):
        rhs = (x * x * x + params.c1 * x + params.c2) % p
        pts.extend(CurvePoint(x, y) for y in roots.get(rhs, ()))
    return pts


def point_order(pt: CurvePoint, params: CurveParams, limit: int | None = None) -> int:
    limit = limit or 2 * params.p + 2
    acc, k = pt, 1
    while not acc.is_infinity:
        acc = ec_add(acc, pt, params)
        k += 1
        if k > limit:
            raise ValueError("order exceeds search limit")
    return k


def key_search(
    c: int,
    ck_high_bits: int,
    missing_bits: int,
    q: CurvePoint,
    params: CurveParams,
) -> int:
    """Recover k from the top bits of the rescaled key ck = c*k mod r.

    ``ck_high_bits`` is ck >> missing_bits. Every completion of the low bits is
    tried; the first candidate k = ck * c^-1 mod r with [k]P = Q is returned.
    """
    if not 0 <= missing_bits <= 24:
        raise ValueError("missing_bits must be in [0, 24]")
    r = params.order_r
    c_inv = mod_inv(c % r, r)
    base = ck_high_bits << missing_bits
    for low in range(1 << missing_bits):
        ck = base | low
        if ck >= r:
            break
        k = ck * c_inv % r
        if ec_scalar_mul(k, params.base_point, params) == q:
            return k
    raise KeySearchError("no candidate key matches the public key")


_DATA = Path(__file__).parent / "data"


def load_curve(path: str | Path, check: bool = True) -> CurveParams:
    with open(path) as fh:
        return CurveParams.from_json(json.load(fh), check=check)


TOY_CURVES = ("toy7", "toy11", "toy97", "toy251", "toy65521", "p256")


def toy_curve(name: str) -> CurveParams:
    """Named curve from the bundled corpus (see data/curves/)."""
    if name not in TOY_CURVES:
        raise KeyError(f"unknown curve {name!r}; choose from {TOY_CURVES}")
    return load_curve(_DATA / "curves" / f"{name}.json")
