"""Exact integer arithmetic: factoring, square classes, residue symbols.

Square classes in Q*/(Q*)^2 are represented by plain squarefree ints.
``kernel(n)`` maps any nonzero integer to its class, and ``class_mul``
is the group law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple, Optional, Union

from .errors import EvenModulus, NonPositiveModulus, NonResidue, ZeroInput

Rational = Union[int, Fraction]

TRIAL_LIMIT = 10**6
MAX_INPUT = 2**96


def _primes_upto(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


_SMALL_PRIMES = _primes_upto(1000)
_TRIAL_PRIMES: Optional[list[int]] = None

# First 13 primes as Miller-Rabin bases are deterministic below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_BOUND = 3317044064679887385961981
_MR_EXTRA_BASES = (43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def _trial_primes() -> list[int]:
    global _TRIAL_PRIMES
    if _TRIAL_PRIMES is None:
        _TRIAL_PRIMES = _primes_upto(TRIAL_LIMIT)
    return _TRIAL_PRIMES


def _mr_witness(n: int, a: int) -> bool:
    """True if ``a`` proves ``n`` composite."""
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x in (1, n - 1):
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    bases = _MR_BASES if n < _MR_DETERMINISTIC_BOUND else _MR_BASES + _MR_EXTRA_BASES
    return not any(_mr_witness(n, a % n) for a in bases if a % n)


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite ``n``."""
    for c in range(1, 200):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")


def _split_into(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    root = math.isqrt(n)
    if root * root == n:
        _split_into(root, out)
        _split_into(root, out)
        return
    f = _pollard_brent(n)
    _split_into(f, out)
    _split_into(n // f, out)


@dataclass(frozen=True)
class Factorization:
    value: int
    sign: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def radical(self) -> int:
        return math.prod(self.primes)

    @property
    def kernel(self) -> int:
        return self.sign * math.prod(p for p, e in self.factors if e % 2)

    @property
    def is_prime(self) -> bool:
        return self.sign == 1 and len(self.factors) == 1 and self.factors[0][1] == 1


@lru_cache(maxsize=1 << 16)
def factor(n: int) -> Factorization:
    """Factor a nonzero integer of absolute value at most 2**96.

    Trial division runs over small primes first; anything left that is
    not prime continues through trial division to 10**6 and then
    Brent's variant of Pollard rho.
    """
    if n == 0:
        raise ZeroInput("cannot factor 0")
    if abs(n) > MAX_INPUT:
        raise ValueError(f"|n| exceeds 2**96: {n}")
    sign = -1 if n < 0 else 1
    m = abs(n)
    found: dict[int, int] = {}

    def strip(p: int) -> None:
        nonlocal m
        while m % p == 0:
            m //= p
            found[p] = found.get(p, 0) + 1

    for p in _SMALL_PRIMES:
        if p * p > m:
            break
        strip(p)
    if m > 1 and not is_prime(m) and m > _SMALL_PRIMES[-1] ** 2:
        for p in _trial_primes():
            if p <= _SMALL_PRIMES[-1]:
                continue
            if p * p > m:
                break
            strip(p)
    if m > 1:
        _split_into(m, found)
    return Factorization(n, sign, tuple(sorted(found.items())))


def kernel(n: int) -> int:
    """Squarefree kernel: the squarefree integer in the square class of ``n``."""
    return factor(n).kernel


def class_mul(x: int, y: int) -> int:
    """Product of square classes."""
    g = math.gcd(x, y)
    # x, y squarefree: x*y = g^2 * (x/g)(y/g) with the cofactor squarefree
    return (x // g) * (y // g)


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for _, e in factor(n).factors)


def is_perfect_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def signed_squarefree_divisors(M: int) -> list[int]:
    """All positive and negative squarefree divisors of ``M``, ascending."""
    if M == 0:
        raise ZeroInput("M must be nonzero")
    primes = factor(M).primes
    positive = [
        math.prod(combo)
        for k in range(len(primes) + 1)
        for combo in combinations(primes, k)
    ]
    return sorted(positive + [-d for d in positive])


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ZeroInput("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1; negative ``a`` is reduced mod n."""
    if n < 1:
        raise NonPositiveModulus(f"modulus must be >= 1, got {n}")
    if n % 2 == 0:
        raise EvenModulus(f"modulus must be odd, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod_prime(a: int, p: int) -> int:
    """Smaller square root of ``a`` modulo the odd prime ``p`` (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if jacobi(a, p) != 1:
        raise NonResidue(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        s = pow(a, (p + 1) // 4, p)
    else:
        q, e = p - 1, 0
        while q % 2 == 0:
            q //= 2
            e += 1
        z = 2
        while jacobi(z, p) != -1:
            z += 1
        c = pow(z, q, p)
        s = pow(a, (q + 1) // 2, p)
        t = pow(a, q, p)
        m = e
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            s = s * b % p
            c = b * b % p
            t = t * c % p
            m = i
    return min(s, p - s)


class QvSquare(NamedTuple):
    is_square: bool
    valuation: int
    unit_class: int


def square_class_in_Qv(x: Rational, p: Optional[int]) -> QvSquare:
    """Classify ``x`` in Q_v*/(Q_v*)^2; ``p=None`` is the real place.

    ``unit_class`` is the unit part mod p for odd p, mod 8 for p = 2,
    and the sign at the real place.
    """
    x = Fraction(x)
    if x == 0:
        raise ZeroInput("0 has no square class")
    if p is None:
        return QvSquare(x > 0, 0, 1 if x > 0 else -1)
    num, den = x.numerator, x.denominator
    v = valuation(num, p) - valuation(den, p)
    num //= p ** valuation(num, p)
    den //= p ** valuation(den, p)
    if p == 2:
        unit = num * pow(den, -1, 8) % 8
        return QvSquare(v % 2 == 0 and unit == 1, v, unit)
    unit = num * pow(den, -1, p) % p
    return QvSquare(v % 2 == 0 and jacobi(unit, p) == 1, v, unit)
