"""Two-isogeny descent on y^2 = x(x^2 + a x + b) and its quadratic twists."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from .arith import class_mul, factor, is_perfect_square, is_squarefree, kernel, signed_squarefree_divisors
from .errors import DegenerateSpace, EngineDefect, InvalidTwist, SingularCurve
from .localsolve import INF, HomogeneousSpace, Place, locally_solvable


class Side(str, enum.Enum):
    PHI = "phi"
    PHIHAT = "phihat"


@dataclass(frozen=True)
class Curve:
    """y^2 = x(x^2 + a x + b), optionally remembering x(x+A)(x+B) and a twist."""

    a: int
    b: int
    provenance: Optional[tuple[int, int]] = None
    twist_by: int = 1

    def __post_init__(self):
        if self.b * (self.a * self.a - 4 * self.b) == 0:
            raise SingularCurve(f"b(a^2-4b) = 0 for (a, b) = ({self.a}, {self.b})")

    @property
    def disc_factor(self) -> int:
        return self.a * self.a - 4 * self.b

    def __str__(self) -> str:
        return f"y^2 = x(x^2 + {self.a}x + {self.b})"


def curve_from_full_torsion(A: int, B: int) -> Curve:
    if A * B * (A - B) == 0:
        raise SingularCurve(f"A*B*(A-B) = 0 for (A, B) = ({A}, {B})")
    return Curve(A + B, A * B, provenance=(A, B))


def twist(C: Curve, d: int) -> Curve:
    if d == 0 or not is_squarefree(d):
        raise InvalidTwist(f"twist parameter must be nonzero squarefree, got {d}")
    if d == 1:
        return C
    return replace(C, a=C.a * d, b=C.b * d * d, twist_by=C.twist_by * d)


def isogenous_coeffs(C: Curve, side: Side) -> tuple[int, int]:
    """Quartic coefficients (a1, b1) of the homogeneous spaces on ``side``.

    The phi-hat spaces use the curve's own coefficients; the phi spaces
    carry those of the isogenous curve Y^2 = X(X^2 - 2a X + a^2 - 4b).
    """
    if Side(side) is Side.PHIHAT:
        return C.a, C.b
    return -2 * C.a, C.disc_factor


def bad_places(C: Curve) -> list[Place]:
    odd = [p for p in factor(C.b * C.disc_factor).primes if p != 2]
    return [INF, Place(2)] + [Place(p) for p in odd]


@dataclass(frozen=True)
class SelmerGroup:
    side: Side
    classes: tuple[int, ...]

    def __post_init__(self):
        members = set(self.classes)
        if 1 not in members:
            raise EngineDefect(f"{self.side.value}-Selmer set lacks the identity")
        if any(class_mul(x, y) not in members for x in members for y in members):
            raise EngineDefect(f"{self.side.value}-Selmer set {sorted(members)} is not a group")
        if len(members) & (len(members) - 1):
            raise EngineDefect(f"Selmer group order {len(members)} is not a power of 2")

    @property
    def dim2(self) -> int:
        return len(self.classes).bit_length() - 1

    def __contains__(self, d: int) -> bool:
        return d in self.classes


def selmer(C: Curve, side: Side) -> SelmerGroup:
    side = Side(side)
    return _selmer_cached(C.a, C.b, side)


@lru_cache(maxsize=8192)
def _selmer_cached(a: int, b: int, side: Side) -> SelmerGroup:
    C = Curve(a, b)
    a1, b1 = isogenous_coeffs(C, side)
    places = bad_places(C)
    kept = [
        d
        for d in signed_squarefree_divisors(b1)
        if locally_solvable(HomogeneousSpace(d, a1, b1), places).everywhere
    ]
    return SelmerGroup(side, tuple(kept))


def close_under_mul(classes) -> frozenset[int]:
    group = {1}
    for c in classes:
        group |= {class_mul(c, g) for g in group}
    return frozenset(group)


def expected_global_classes(a1: int, b1: int) -> frozenset[int]:
    """Square classes with a rational point on the space: 1, b1, and the
    factors of b1 when the quadratic splits over Q."""
    disc = a1 * a1 - 4 * b1
    if b1 * disc == 0:
        raise DegenerateSpace(f"b1*(a1^2-4b1) = 0 for ({a1}, {b1})")
    gens = [kernel(b1)]
    if is_perfect_square(disc):
        s = math.isqrt(disc)
        gens += [kernel((-a1 + s) // 2), kernel((-a1 - s) // 2)]
    return close_under_mul(gens)


class RankBound(NamedTuple):
    dim_phi: int
    dim_phihat: int
    bound: int


def fundamental_bound(dim_phi: int, dim_phihat: int) -> int:
    """Rank bound with the Sha terms dropped (they are nonnegative)."""
    return dim_phi + dim_phihat - 2


def rank_upper_bound(C: Curve) -> RankBound:
    dphi = selmer(C, Side.PHI).dim2
    dhat = selmer(C, Side.PHIHAT).dim2
    return RankBound(dphi, dhat, fundamental_bound(dphi, dhat))


class RationalPoint(NamedTuple):
    x: Fraction
    y: Fraction
    torsion: bool


def _double(C: Curve, x: Fraction, y: Fraction) -> tuple[Fraction, Fraction]:
    lam = (3 * x * x + 2 * C.a * x + C.b) / (2 * y)
    x3 = lam * lam - C.a - 2 * x
    return x3, lam * (x - x3) - y


def is_torsion(C: Curve, x: Fraction, y: Fraction, steps: int = 16) -> bool:
    """Bounded doubling; a non-integral coordinate proves infinite order."""
    seen = set()
    for _ in range(steps):
        if y == 0:
            return True
        if (x, y) in seen:
            return True
        if x.denominator != 1 or y.denominator != 1:
            return False
        seen.add((x, y))
        x, y = _double(C, x, y)
    return y == 0


# squares modulo these are used to discard most x before exact testing
_FILTER_MODULI = (64, 63, 65, 11, 17, 19, 23, 29, 31)


def point_search(C: Curve, H: int) -> list[RationalPoint]:
    """Points with x = m/n^2, |m| <= H^2, 1 <= n <= H, gcd(m, n) = 1."""
    if H <= 0:
        return []
    points = []
    m_all = np.arange(-H * H, H * H + 1, dtype=np.int64)
    tables = {q: np.isin(np.arange(q), (np.arange(q) ** 2) % q) for q in _FILTER_MODULI}
    for n in range(1, H + 1):
        m = m_all[np.gcd(m_all, n) == 1]
        keep = np.ones(m.shape, dtype=bool)
        for q, table in tables.items():
            mq = m % q
            n2 = n * n % q
            cubic = mq * ((mq * mq + C.a % q * mq % q * n2 + C.b % q * (n2 * n2 % q)) % q) % q
            keep &= table[cubic]
        for mi in m[keep].tolist():
            value = mi * (mi * mi + C.a * mi * n * n + C.b * n**4)
            if value < 0:
                continue
            root = math.isqrt(value)
            if root * root != value:
                continue
            x = Fraction(mi, n * n)
            for y in {Fraction(root, n**3), Fraction(-root, n**3)}:
                points.append(RationalPoint(x, y, is_torsion(C, x, y)))
    return sorted(points)
