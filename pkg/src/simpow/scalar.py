"""Exact scalar arithmetic: roots of unity, residue rings, and phi_k.

Roots of unity are stored as reduced rational angles k/m, meaning the
complex number exp(2*pi*i*k/m).  All angle arithmetic is exact integer
arithmetic; conversion to floating point happens only in
:func:`rou_to_complex` and :func:`phi_k`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import AmbiguousSnapError, NotInvertibleError

PHI_BRANCH_TOL = 1e-8


@dataclass(frozen=True)
class RootOfUnity:
    """The number exp(2*pi*i*num/order), stored as a reduced angle.

    The constructor reduces ``num/order`` modulo 1, so the multiplicative
    order of the represented number is exactly ``order``.
    """

    num: int
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        num = self.num % self.order
        g = math.gcd(num, self.order)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "order", self.order // g)

    @property
    def angle(self) -> Fraction:
        return Fraction(self.num, self.order)

    def __str__(self) -> str:
        return f"{self.num}/{self.order}"

    @classmethod
    def from_str(cls, text: str) -> "RootOfUnity":
        num, _, order = text.partition("/")
        return cls(int(num), int(order or "1"))


ONE = RootOfUnity(0, 1)
MINUS_ONE = RootOfUnity(1, 2)


@dataclass(frozen=True)
class Residue:
    """An element of Z/modulus, normalized to 0 <= value < modulus."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def to_json(self) -> dict:
        return {"value": self.value, "modulus": self.modulus}


@dataclass(frozen=True)
class ExponentPair:
    """A coprime exponent pair (p, q) with |p| + |q| > 2."""

    p: int
    q: int

    def __post_init__(self):
        if math.gcd(abs(self.p), abs(self.q)) != 1:
            raise ValueError(f"p={self.p} and q={self.q} are not coprime")
        if abs(self.p) + abs(self.q) <= 2:
            raise ValueError(f"need |p|+|q| > 2, got p={self.p}, q={self.q}")

    def swapped(self) -> "ExponentPair":
        return ExponentPair(self.q, self.p)


def rou_mul(a: RootOfUnity, b: RootOfUnity) -> RootOfUnity:
    """Multiply two roots of unity (add angles mod 1)."""
    return RootOfUnity(a.num * b.order + b.num * a.order, a.order * b.order)


def rou_pow(a: RootOfUnity, e: int) -> RootOfUnity:
    """Raise a root of unity to any integer power (e reduced mod order first)."""
    return RootOfUnity(a.num * (e % a.order), a.order)


def rou_to_complex(a: RootOfUnity) -> complex:
    """Evaluate the angle as a complex number on the unit circle."""
    theta = 2.0 * math.pi * a.num / a.order
    return complex(math.cos(theta), math.sin(theta))


def mod_inverse(a: int, modulus: int) -> Residue:
    """Inverse of a modulo ``modulus``; raises NotInvertibleError if none."""
    if modulus < 1:
        raise ValueError(f"modulus must be >= 1, got {modulus}")
    if modulus == 1:
        return Residue(0, 1)
    g = math.gcd(a % modulus, modulus)
    if g != 1:
        raise NotInvertibleError(f"{a} is not invertible mod {modulus} (gcd={g})")
    return Residue(pow(a % modulus, -1, modulus), modulus)


def _simplest_in_interval(lo: Fraction, hi: Fraction) -> Fraction:
    """Fraction with the smallest denominator in the closed interval [lo, hi]."""
    if lo > hi:
        raise ValueError("empty interval")
    n = math.ceil(lo)
    if n <= hi:
        return Fraction(n)
    # both endpoints strictly inside the same integer gap
    fl = math.floor(lo)
    inner = _simplest_in_interval(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / inner


def _candidates_at_order(lo: Fraction, hi: Fraction, m: int) -> int:
    """Distinct angles k/m (mod 1) inside the closed interval [lo, hi]."""
    return min(math.floor(hi * m) - math.ceil(lo * m) + 1, m)


def snap_to_root_of_unity(z: complex, max_order: int, tol: float) -> RootOfUnity | None:
    """Find the root of unity of smallest order within ``tol`` of z.

    Returns None when no k/m with m <= max_order matches.  If two distinct
    roots of the same minimal order both lie within tolerance the result
    would be arbitrary, so AmbiguousSnapError is raised instead.
    """
    if max_order < 1:
        raise ValueError(f"max_order must be >= 1, got {max_order}")
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    r = abs(z)
    radial_sq = (r - 1.0) ** 2
    if radial_sq > tol * tol or r == 0.0:
        return None
    # |z - e^{2 pi i a}|^2 = (|z|-1)^2 + 4|z| sin^2(pi(theta-a))
    sin_sq = (tol * tol - radial_sq) / (4.0 * r)
    if sin_sq >= 1.0:
        half_width = Fraction(1, 2)
    else:
        half_width = Fraction(math.asin(math.sqrt(sin_sq)) / math.pi)
    theta = Fraction(cmath.phase(z) / (2.0 * math.pi))
    lo, hi = theta - half_width, theta + half_width
    best = _simplest_in_interval(lo, hi)
    if best.denominator > max_order:
        return None
    m = best.denominator
    if _candidates_at_order(lo, hi, m) >= 2:
        raise AmbiguousSnapError(f"several roots of order {m} within tol={tol} of {z}")
    return RootOfUnity(best.numerator % m, m)


def phi_k(t: complex, k: int, branch_tol: float = PHI_BRANCH_TOL) -> complex:
    """Off-diagonal growth factor of k-th powers of triangular SL2 matrices.

    For t*t != 1 this is (1 - t^(2k)) / (t^(k-1) * (1 - t^2)); the removable
    singularities at t = 1 and t = -1 take the limit values k and
    (-1)^(k-1)*k.  Within ``branch_tol`` of t^2 = 1 the limit value of the
    nearer branch point is used.
    """
    if t == 0:
        raise ValueError("phi_k is undefined at t = 0")
    t2 = t * t
    if abs(t2 - 1.0) < branch_tol:
        if abs(t - 1.0) <= abs(t + 1.0):
            return complex(k)
        return complex(-k if k % 2 == 0 else k)
    return (1.0 - t ** (2 * k)) / (t ** (k - 1) * (1.0 - t2))
