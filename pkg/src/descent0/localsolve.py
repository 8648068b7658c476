"""Local solvability of the quartics d*W^2 = d^2 t^4 + a1*d t^2 z^2 + b1 z^4.

The decision procedure works with the binary form

    F(t, z) = d^3 t^4 + a1 d^2 t^2 z^2 + b1 d z^4

(the right-hand side times d).  A point exists over Q_p iff some primitive
(t, z) makes F(t, z) a square in Z_p, zero included.  Two charts cover the
primitive pairs: z = 1 with t in Z_p, and t = 1 with z in pZ_p.

``oracle_solvable_mod`` is a brute-force enumeration modulo p^k that
shares nothing with the refinement code; it exists to check it.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .arith import is_prime, is_squarefree, jacobi, valuation
from .errors import (
    BudgetExceeded,
    DegenerateSpace,
    DepthExceeded,
    EmptyInput,
    InvalidInput,
)

ORACLE_BUDGET = 10**8


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: ``p=None`` is the real place."""

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise InvalidInput(f"place must be a prime, got {self.p}")

    @property
    def is_real(self) -> bool:
        return self.p is None

    def __str__(self) -> str:
        return "inf" if self.p is None else str(self.p)

    def to_json(self):
        return "inf" if self.p is None else self.p

    @classmethod
    def parse(cls, text) -> "Place":
        if text in ("inf", "oo", "infinity", None):
            return INF
        return cls(int(text))


INF = Place(None)


@dataclass(frozen=True)
class HomogeneousSpace:
    d: int
    a1: int
    b1: int

    def __post_init__(self):
        if self.d == 0:
            raise DegenerateSpace("d must be nonzero")
        if not is_squarefree(self.d):
            raise InvalidInput(f"d must be squarefree, got {self.d}")

    @property
    def nondegenerate(self) -> bool:
        return self.b1 * (self.a1 * self.a1 - 4 * self.b1) != 0

    def form(self) -> tuple[int, int, int]:
        """Coefficients of t^4, t^2 z^2, z^4 in F."""
        d = self.d
        return d**3, self.a1 * d * d, self.b1 * d

    def __call__(self, t: int, z: int) -> int:
        c4, c2, c0 = self.form()
        return c4 * t**4 + c2 * t * t * z * z + c0 * z**4


def real_solvable(S: HomogeneousSpace) -> bool:
    if S.d > 0 or S.b1 <= 0:
        return True
    # d < 0: need d^2 X^2 + a1 d X + b1 <= 0 for some X = t^2 >= 0
    return S.a1 >= 0 and S.a1 * S.a1 - 4 * S.b1 >= 0


def _require_nondegenerate(S: HomogeneousSpace) -> None:
    if not S.nondegenerate:
        raise DegenerateSpace(f"b1*(a1^2-4b1) = 0 for {S}")


def depth_cap(S: HomogeneousSpace, p: int) -> int:
    disc = 16 * S.d**4 * S.b1**2 * (S.a1 * S.a1 - 4 * S.b1) ** 2
    return valuation(disc, p) + 5


def _vp(n: int, p: int) -> float:
    return math.inf if n == 0 else valuation(n, p)


def _shift(f: Sequence[int], c: int, p: int) -> list[int]:
    """Coefficients (low first) of f(c + p*y)."""
    g = list(f)
    n = len(g)
    # Taylor shift by c via repeated synthetic division
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            g[j] += c * g[j + 1]
    scale = 1
    for i in range(n):
        g[i] *= scale
        scale *= p
    return g


def _unit_is_square(x: int, p: int) -> bool:
    """For x of even valuation, decide squareness from its leading digits."""
    u = x // p ** valuation(x, p)
    if p == 2:
        return u % 8 == 1
    return jacobi(u, p) == 1


def _square_value_exists(f: list[int], p: int, cap: int, depth: int) -> bool:
    """Is f(y) in Z_p^2 (zero allowed) for some y in Z_p?"""
    nonzero = [c for c in f if c]
    if not nonzero:
        return True
    content = min(valuation(c, p) for c in nonzero)
    strip = p ** (2 * (content // 2))
    f = [c // strip for c in f]
    content %= 2
    deriv = [i * f[i] for i in range(1, len(f))]
    guard = 3 if p == 2 else 1

    for y0 in range(p):
        g = _shift(f, y0, p)
        value = g[0]
        if value == 0:
            return True
        v0 = valuation(value, p)
        rest = min((_vp(c, p) for c in g[1:]), default=math.inf)
        if v0 < rest:
            # valuation is v0 throughout the disc
            if v0 % 2:
                continue
            if rest - v0 >= guard:
                if _unit_is_square(value, p):
                    return True
                continue
        slope = sum(c * y0**i for i, c in enumerate(deriv))
        if slope and v0 - content > 2 * (valuation(slope, p) - content):
            return True  # Hensel: a root of f lies in this disc
        if depth >= cap:
            raise DepthExceeded(f"refinement depth {cap} exceeded at p={p}")
        if _square_value_exists(g, p, cap, depth + 1):
            return True
    return False


def padic_solvable(S: HomogeneousSpace, p: int) -> bool:
    """Does S have a nontrivial point over Q_p?"""
    _require_nondegenerate(S)
    c4, c2, c0 = S.form()
    cap = depth_cap(S, p)
    if _square_value_exists([c0, 0, c2, 0, c4], p, cap, 0):
        return True
    return _square_value_exists([c4, 0, c2 * p * p, 0, c0 * p**4], p, cap, 0)


def solvable_at(S: HomogeneousSpace, place: Place) -> bool:
    if place.is_real:
        return real_solvable(S)
    return padic_solvable(S, place.p)


class LocalReport(NamedTuple):
    everywhere: bool
    first_failure: Optional[Place]


def locally_solvable(S: HomogeneousSpace, places: Sequence[Place]) -> LocalReport:
    if not places:
        raise EmptyInput("no places given")
    _require_nondegenerate(S)
    for place in places:
        if not solvable_at(S, place):
            return LocalReport(False, place)
    return LocalReport(True, None)


class Verdict(enum.Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


@lru_cache(maxsize=64)
def _square_table(p: int, k: int) -> np.ndarray:
    n = p**k
    x = np.arange(n, dtype=np.int64)
    table = np.zeros(n, dtype=bool)
    table[x * x % n] = True
    return table


def _chart_values(S: HomogeneousSpace, p: int, k: int) -> np.ndarray:
    n = p**k
    c4, c2, c0 = (c % n for c in S.form())
    t = np.arange(n, dtype=np.int64)
    t2 = t * t % n
    chart_z1 = (c4 * t2 % n * t2 + c2 * t2 + c0) % n
    z = np.arange(0, n, p, dtype=np.int64)
    z2 = z * z % n
    chart_t1 = (c4 + c2 * z2 + c0 * z2 % n * z2) % n
    return np.concatenate([chart_z1, chart_t1])


def oracle_solvable_mod(S: HomogeneousSpace, p: int, k: int) -> Verdict:
    """Brute-force local solvability evidence modulo p^k.

    NO and YES are both sound; UNKNOWN means precision k was not enough.
    """
    if k < 1:
        raise InvalidInput("k must be positive")
    if p**k > ORACLE_BUDGET:
        raise BudgetExceeded(f"{p}^{k} exceeds the enumeration budget")
    values = _chart_values(S, p, k)
    if not _square_table(p, k)[values].any():
        return Verdict.NO

    units = values[values != 0]
    m = np.zeros(units.shape, dtype=np.int64)
    divisible = units % p == 0
    while divisible.any():
        units = np.where(divisible, units // p, units)
        m += divisible
        divisible = units % p == 0
    if p == 2:
        ok = (m % 2 == 0) & (m + 3 <= k) & (units % 8 == 1)
    else:
        residues = _square_table(p, 1)
        ok = (m % 2 == 0) & (m < k) & residues[units % p]
    if ok.any():
        return Verdict.YES
    return Verdict.UNKNOWN


DEFAULT_ORACLE_PRIMES = (2, 3, 5, 7, 11, 13, 23, 79)


def oracle_max_k(p: int) -> int:
    if p == 2:
        return 12
    return 6 if p <= 13 else 3


@dataclass
class OracleCampaign:
    seed: int
    count: int = 0
    sound_disagreements: list = field(default_factory=list)
    decided_at_max_k: int = 0
    by_prime: dict = field(default_factory=dict)

    @property
    def decided_fraction(self) -> float:
        return self.decided_at_max_k / self.count if self.count else 0.0


def oracle_campaign(seed: int, count: int, primes=DEFAULT_ORACLE_PRIMES, max_k=None) -> OracleCampaign:
    """Compare padic_solvable with the mod p^k oracle on random spaces.

    Spaces have squarefree |d| <= 100 and |a1|, |b1| <= 10^4; the oracle
    runs at every k up to ``oracle_max_k(p)`` (optionally capped).
    """
    rng = random.Random(seed)
    report = OracleCampaign(seed, by_prime={p: [0, 0] for p in primes})
    while report.count < count:
        d = rng.randint(-100, 100)
        a1 = rng.randint(-10**4, 10**4)
        b1 = rng.randint(-10**4, 10**4)
        p = rng.choice(primes)
        if d == 0 or not is_squarefree(d):
            continue
        S = HomogeneousSpace(d, a1, b1)
        if not S.nondegenerate:
            continue
        report.count += 1
        engine = padic_solvable(S, p)
        top = oracle_max_k(p) if max_k is None else min(max_k, oracle_max_k(p))
        verdict = Verdict.UNKNOWN
        for k in range(1, top + 1):
            verdict = oracle_solvable_mod(S, p, k)
            if (engine and verdict is Verdict.NO) or (not engine and verdict is Verdict.YES):
                report.sound_disagreements.append(
                    {"d": d, "a1": a1, "b1": b1, "p": p, "k": k, "engine": engine, "oracle": verdict.value}
                )
        decided = verdict is not Verdict.UNKNOWN
        report.decided_at_max_k += decided
        report.by_prime[p][0] += 1
        report.by_prime[p][1] += decided
    return report
