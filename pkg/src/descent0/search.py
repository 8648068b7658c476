"""Admissible twist primes as residue classes, sieving, and density.

Every condition on the twist prime r is a sign condition on quadratic
characters of r.  By reciprocity those characters only depend on r mod 8
and on the Legendre symbols (r/p) for the odd primes p of the modulus, so
an admissible set is stored as a set of *cells*

    (r mod 8, ((r/p_1), ..., (r/p_w)))

rather than as a list of residues.  A cell covers prod((p-1)/2) classes
of (Z/M)*, which makes the density an exact rational and intersection of
several families a matter of comparing cells.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from .arith import factor, is_prime, jacobi
from .descent import Curve, curve_from_full_torsion
from .errors import (
    BadModulus,
    DuplicateCurve,
    EmptyInput,
    InvalidInput,
    NotFound,
)
from .theorems import (
    THM2_VARIANTS,
    THM4_VARIANTS,
    ConditionReport,
    Rank0Certificate,
    check_thm2,
    check_thm3,
    check_thm4,
    thm2_static_items,
    thm3_static_items,
    thm4_static_items,
    verify_rank0,
)

UNITS_MOD_8 = (1, 3, 5, 7)

Signs = dict  # odd prime -> Legendre symbol (r/p)


def _odd_primes(*values: int) -> tuple[int, ...]:
    primes = set()
    for v in values:
        primes.update(p for p in factor(v).primes if p != 2)
    return tuple(sorted(primes))


def symbol_in_cell(A: int, rho8: int, signs: Signs) -> int:
    """(A/r) for any prime r in the cell, by quadratic reciprocity."""
    fac = factor(A)
    value = 1
    if fac.sign < 0 and rho8 % 4 == 3:
        value = -value
    for p, e in fac.factors:
        if e % 2 == 0:
            continue
        if p == 2:
            if rho8 in (3, 5):
                value = -value
            continue
        value *= signs[p]
        if p % 4 == 3 and rho8 % 4 == 3:
            value = -value
    return value


def symbol_from_residue(A: int, rho: int, M: int) -> int:
    """Common value of (A/r) over the primes r = rho (mod M)."""
    if A == 0:
        raise InvalidInput("A must be nonzero")
    if M % 8 or any(M % p for p in _odd_primes(A)):
        raise BadModulus(f"modulus {M} must be divisible by 8 and by the odd primes of {A}")
    if math.gcd(rho, M) != 1:
        raise BadModulus(f"residue {rho} is not coprime to {M}")
    signs = {p: jacobi(rho, p) for p in _odd_primes(A)}
    return symbol_in_cell(A, rho % 8, signs)


# -- families -----------------------------------------------------------------


@dataclass(frozen=True)
class T2Family:
    A: int
    B: int
    variant: str = "literal"
    expected_dims = (0, 2)

    @property
    def key(self):
        return ("curve", self.A + self.B, self.A * self.B)

    def curve(self) -> Curve:
        return curve_from_full_torsion(self.A, self.B)

    def static_items(self):
        return thm2_static_items(self.A, self.B, self.variant)

    def symbol_primes(self) -> tuple[int, ...]:
        return _odd_primes(self.A, self.B, self.A - self.B)

    def cell_ok(self, rho8: int, signs: Signs) -> bool:
        if rho8 != 7:
            return False
        if symbol_in_cell(self.A, rho8, signs) != -1 or symbol_in_cell(self.B, rho8, signs) != -1:
            return False
        for p in _odd_primes(self.A - self.B):
            if jacobi(-self.B, p) * signs[p] != -1:
                return False
        return True

    def check(self, r: int) -> ConditionReport:
        return check_thm2(self.A, self.B, r, self.variant)

    def describe(self) -> dict:
        return {"family": "T2", "A": self.A, "B": self.B, "variant": self.variant}


@dataclass(frozen=True)
class T3Family:
    A: int
    B: int
    expected_dims = (0, 2)

    @property
    def key(self):
        return ("curve", self.A + self.B, self.A * self.B)

    @property
    def variant(self) -> str:
        return "literal"

    def curve(self) -> Curve:
        return curve_from_full_torsion(self.A, self.B)

    def static_items(self):
        return thm3_static_items(self.A, self.B)

    def symbol_primes(self) -> tuple[int, ...]:
        return _odd_primes(self.A * self.B * (self.A - self.B))

    def cell_ok(self, rho8: int, signs: Signs) -> bool:
        return rho8 == 7 and all(s == 1 for s in signs.values())

    def check(self, r: int) -> ConditionReport:
        return check_thm3(self.A, self.B, r)

    def describe(self) -> dict:
        return {"family": "T3", "A": self.A, "B": self.B}


@dataclass(frozen=True)
class T4Family:
    """The residue cells capture (i), (ii), branch 1 and the prerequisites
    of branch 2.  Branch 2's root symbols are not functions of r mod M;
    they are applied by the checker after sieving."""

    a: int
    b: int
    variant: str = "derived"
    expected_dims = (1, 1)

    @property
    def key(self):
        return ("curve", self.a, self.b)

    def curve(self) -> Curve:
        return Curve(self.a, self.b)

    def static_items(self):
        return thm4_static_items(self.a, self.b)

    def symbol_primes(self) -> tuple[int, ...]:
        return _odd_primes(self.b * (self.a * self.a - 4 * self.b))

    def cell_ok(self, rho8: int, signs: Signs) -> bool:
        if rho8 != 7 or any(s != 1 for s in signs.values()):
            return False
        sb = symbol_in_cell(self.b, rho8, signs)
        sd = symbol_in_cell(self.a * self.a - 4 * self.b, rho8, signs)
        return sb == sd

    @property
    def residues_exact(self) -> bool:
        return False

    def check(self, r: int) -> ConditionReport:
        return check_thm4(self.a, self.b, r, self.variant)

    def describe(self) -> dict:
        return {"family": "T4", "a": self.a, "b": self.b, "variant": self.variant}


Family = Union[T2Family, T3Family, T4Family]


@dataclass(frozen=True)
class TwistSearchSpec:
    family: Family
    limit: int

    def __post_init__(self):
        if self.limit < 1:
            raise InvalidInput("search limit must be positive")
        variant = getattr(self.family, "variant", None)
        if isinstance(self.family, T2Family) and variant not in THM2_VARIANTS:
            raise InvalidInput(f"unknown variant {variant!r}")
        if isinstance(self.family, T4Family) and variant not in THM4_VARIANTS:
            raise InvalidInput(f"unknown variant {variant!r}")
        failed = [it.condition_id for it in self.family.static_items() if not it.holds]
        if failed:
            raise InvalidInput(f"static conditions fail for {self.family}: {failed}")


# -- residue class sets -------------------------------------------------------


def _cell_key(rho8_index: int, bits: int, width: int) -> int:
    return (rho8_index << width) | bits


@dataclass(frozen=True)
class ResidueClassSet:
    primes: tuple[int, ...]
    cells: frozenset  # of (rho8, signs-tuple)

    @property
    def modulus(self) -> int:
        return 8 * math.prod(self.primes)

    @property
    def predicted_density(self) -> Fraction:
        return Fraction(len(self.cells), 4 * 2 ** len(self.primes))

    @cached_property
    def _table(self) -> np.ndarray:
        width = len(self.primes)
        table = np.zeros(4 << width, dtype=bool)
        for rho8, signs in self.cells:
            bits = sum(1 << j for j, s in enumerate(signs) if s == -1)
            table[_cell_key(UNITS_MOD_8.index(rho8), bits, width)] = True
        return table

    def mask(self, values: np.ndarray) -> np.ndarray:
        """Membership for an integer array (entries not coprime to M are False)."""
        values = np.asarray(values, dtype=np.int64)
        width = len(self.primes)
        coprime = values % 2 == 1
        keys = ((values % 8) // 2).astype(np.int64) << width
        for j, p in enumerate(self.primes):
            residues = values % p
            coprime &= residues != 0
            keys |= _nonresidue_table(p)[residues].astype(np.int64) << j
        return coprime & self._table[keys]

    def __contains__(self, rho: int) -> bool:
        return bool(self.mask(np.array([rho]))[0])

    @cached_property
    def allowed(self) -> frozenset:
        rho = np.arange(self.modulus, dtype=np.int64)
        return frozenset(rho[self.mask(rho)].tolist())

    def phi_modulus(self) -> int:
        return 4 * math.prod(p - 1 for p in self.primes)

    def count(self) -> int:
        return len(self.cells) * math.prod((p - 1) // 2 for p in self.primes)


@lru_cache(maxsize=None)
def _nonresidue_table(p: int) -> np.ndarray:
    table = np.ones(p, dtype=bool)
    table[(np.arange(p, dtype=np.int64) ** 2) % p] = False
    return table


def _all_cells(primes: Sequence[int]) -> Iterable[tuple[int, tuple[int, ...]]]:
    for rho8 in UNITS_MOD_8:
        for signs in itertools.product((1, -1), repeat=len(primes)):
            yield rho8, signs


def admissible_residues(spec: Union[TwistSearchSpec, Family]) -> ResidueClassSet:
    family = spec.family if isinstance(spec, TwistSearchSpec) else spec
    primes = family.symbol_primes()
    cells = frozenset(
        (rho8, signs)
        for rho8, signs in _all_cells(primes)
        if family.cell_ok(rho8, dict(zip(primes, signs)))
    )
    return ResidueClassSet(primes, cells)


def intersect(sets: Sequence[ResidueClassSet]) -> ResidueClassSet:
    """Residues admissible for every set, on the union of their primes."""
    primes = tuple(sorted(set().union(*(s.primes for s in sets))))
    index = {p: j for j, p in enumerate(primes)}
    cells = frozenset(
        (rho8, signs)
        for rho8, signs in _all_cells(primes)
        if all((rho8, tuple(signs[index[p]] for p in s.primes)) in s.cells for s in sets)
    )
    return ResidueClassSet(primes, cells)


# -- sieving ------------------------------------------------------------------


@lru_cache(maxsize=4)
def primes_upto(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.flatnonzero(sieve).astype(np.int64)


def find_twist_primes(spec: TwistSearchSpec) -> list[int]:
    residues = admissible_residues(spec)
    primes = primes_upto(spec.limit)
    candidates = primes[residues.mask(primes)].tolist()
    return [r for r in candidates if spec.family.check(r).overall]


class DensityReport(NamedTuple):
    count: int
    prime_count: int
    empirical: Fraction
    predicted: Fraction
    relative_error: float


def density_report(spec: TwistSearchSpec) -> DensityReport:
    residues = admissible_residues(spec)
    primes = primes_upto(spec.limit)
    coprime = primes[np.gcd(primes, residues.modulus) == 1]
    count = int(residues.mask(coprime).sum())
    prime_count = int(coprime.size)
    empirical = Fraction(count, prime_count) if prime_count else Fraction(0)
    predicted = residues.predicted_density
    error = 0.0 if predicted == 0 else float(abs(empirical - predicted) / predicted)
    return DensityReport(count, prime_count, empirical, predicted, error)


@dataclass(frozen=True)
class SimultaneousResult:
    limit: int
    joint_density: Fraction
    r: Optional[int] = None
    certificates: tuple[Rank0Certificate, ...] = ()

    @property
    def found(self) -> bool:
        return self.r is not None

    @property
    def all_certified(self) -> bool:
        return self.found and all(c.passed for c in self.certificates)


def simultaneous_twists(families: Sequence[Family], limit: int) -> SimultaneousResult:
    """Least prime r <= limit admissible for every family at once."""
    if not families:
        raise EmptyInput("no families given")
    keys = [f.key for f in families]
    if len(set(keys)) != len(keys):
        raise DuplicateCurve("the same curve appears twice")
    specs = [TwistSearchSpec(f, limit) for f in families]
    joint = intersect([admissible_residues(s) for s in specs])
    primes = primes_upto(limit)
    for r in primes[joint.mask(primes)].tolist():
        if all(f.check(r).overall for f in families):
            certs = tuple(verify_rank0(f.curve(), r, f.expected_dims) for f in families)
            return SimultaneousResult(limit, joint.predicted_density, r, certs)
    return SimultaneousResult(limit, joint.predicted_density)


# -- simultaneous rank zero for several curves --------------------------------


def _primes_in_class(residue: int, start: int = 3):
    n = start
    while True:
        if n % 8 == residue and is_prime(n):
            yield n
        n += 1


@dataclass(frozen=True)
class Thm1Report:
    k: int
    variant: str
    q: int
    ps: tuple[int, ...]
    result: SimultaneousResult
    attempts: tuple[tuple[int, bool], ...]


def choose_thm1_curves(k: int, variant: str = "literal", q_tries: int = 20, p_pool: int = 60):
    """Greedily pick q and p_1 < ... < p_k (all = 1 mod 8) so that the joint
    admissible set stays nonempty.  Yields candidate (q, ps) choices."""
    if k < 1:
        raise InvalidInput("k must be at least 1")
    q_class = 3 if variant == "literal" else 5
    p_pool_list = list(itertools.islice(_primes_in_class(1), p_pool))
    for q in itertools.islice(_primes_in_class(q_class), q_tries):
        chosen: list[int] = []
        sets: list[ResidueClassSet] = []
        for p in p_pool_list:
            family = T2Family(p, q, variant)
            if not all(it.holds for it in family.static_items()):
                continue
            trial = sets + [admissible_residues(family)]
            if intersect(trial).cells:
                chosen.append(p)
                sets = trial
                if len(chosen) == k:
                    yield q, tuple(chosen)
                    break


def thm1_demo(k: int, x_max: int = 10**7, variant: str = "literal", x_start: int = 1000) -> Thm1Report:
    """Find k curves y^2 = x(x+p_i)(x+q) with a common certified rank-zero prime twist."""
    if k < 1:
        raise InvalidInput("k must be at least 1")
    for q, ps in choose_thm1_curves(k, variant):
        families = [T2Family(p, q, variant) for p in ps]
        attempts = []
        limit = x_start
        while True:
            result = simultaneous_twists(families, min(limit, x_max))
            attempts.append((result.limit, result.found))
            if result.all_certified:
                return Thm1Report(k, variant, q, ps, result, tuple(attempts))
            if result.found or limit >= x_max:
                break
            limit *= 2
    raise NotFound(f"no common certified twist prime up to {x_max} for k={k}")
