from fractions import Fraction

import pytest

from descent0.arith import is_prime, jacobi
from descent0.errors import BadModulus, DuplicateCurve, EmptyInput, InvalidInput
from descent0.search import (
    T2Family,
    T3Family,
    T4Family,
    TwistSearchSpec,
    admissible_residues,
    density_report,
    find_twist_primes,
    intersect,
    simultaneous_twists,
    symbol_from_residue,
    thm1_demo,
)


def brute_allowed_t2(A, B, M):
    """Residues rho mod M where every r-condition holds, using Legendre
    symbols at an actual prime in each class."""
    allowed = set()
    for rho in range(1, M):
        if rho % 2 == 0 or any(rho % p == 0 for p in (3, 5, 11, 17) if M % p == 0):
            continue
        r = rho
        while not is_prime(r):
            r += M
        ok = r % 8 == 7 and jacobi(A, r) == -1 and jacobi(B, r) == -1
        for p in (3, 5, 7, 11, 13):
            if (A - B) % p == 0:
                ok &= jacobi(-B * r, p) == -1
        if ok:
            allowed.add(rho)
    return allowed


def test_symbol_from_residue():
    assert symbol_from_residue(17, 23, 8 * 17) == -1
    assert symbol_from_residue(1, 7, 8) == 1
    assert symbol_from_residue(-1, 7, 8) == -1
    with pytest.raises(BadModulus):
        symbol_from_residue(17, 23, 8)
    with pytest.raises(BadModulus):
        symbol_from_residue(3, 9, 24)


def test_admissible_t2_17_5_proof():
    R = admissible_residues(TwistSearchSpec(T2Family(17, 5, "proof"), 100))
    assert R.modulus == 2040
    assert len(R.allowed) == 16
    assert R.predicted_density == Fraction(1, 32)
    assert 23 in R
    assert R.allowed == brute_allowed_t2(17, 5, 2040)


def test_admissible_t2_17_minus5_literal():
    R = admissible_residues(TwistSearchSpec(T2Family(17, -5, "literal"), 100))
    assert R.modulus == 7480
    assert len(R.allowed) == 80
    assert R.predicted_density == Fraction(1, 32)
    assert R.allowed == brute_allowed_t2(17, -5, 7480)


def test_find_twist_primes():
    assert find_twist_primes(TwistSearchSpec(T2Family(17, 5, "proof"), 100)) == [23]
    assert find_twist_primes(TwistSearchSpec(T2Family(17, -5, "literal"), 100)) == [79]
    assert find_twist_primes(TwistSearchSpec(T2Family(17, 5, "proof"), 2)) == []


def test_spec_rejects_failing_static_conditions():
    with pytest.raises(InvalidInput):
        TwistSearchSpec(T2Family(17, 5, "literal"), 100)  # 5 is not 3 mod 8
    with pytest.raises(InvalidInput):
        TwistSearchSpec(T3Family(2, 3), 100)  # A is not 1 mod 8


def test_density_small_sample():
    rep = density_report(TwistSearchSpec(T2Family(17, 5, "proof"), 1000))
    assert rep.predicted == Fraction(1, 32)
    assert rep.prime_count == 168 - 4  # primes 2, 3, 5, 17 divide M


def test_density_empty_set():
    # T4 with (b/r) and (a^2-4b/r) forced to differ: no admissible classes
    for a in range(-10, 11):
        for b in range(-10, 11):
            fam = T4Family(a, b)
            try:
                spec = TwistSearchSpec(fam, 1000)
            except InvalidInput:
                continue
            if not admissible_residues(spec).cells:
                rep = density_report(spec)
                assert rep.predicted == 0 and rep.empirical == 0 and rep.relative_error == 0
                return
    pytest.skip("no family with an empty admissible set in range")


def test_simultaneous_single():
    res = simultaneous_twists([T2Family(17, 5, "proof")], 100)
    assert res.r == 23 and len(res.certificates) == 1 and res.all_certified


def test_simultaneous_errors():
    with pytest.raises(EmptyInput):
        simultaneous_twists([], 100)
    with pytest.raises(DuplicateCurve):
        simultaneous_twists([T2Family(17, 5, "proof"), T2Family(17, 5, "proof")], 100)


def test_simultaneous_not_found_is_a_result():
    res = simultaneous_twists([T2Family(17, 5, "proof")], 20)
    assert not res.found and res.limit == 20


def test_intersection_density_of_independent_sets():
    a = admissible_residues(T2Family(17, 3, "literal"))
    b = admissible_residues(T2Family(41, 3, "literal"))
    joint = intersect([a, b])
    assert joint.cells
    assert joint.predicted_density <= min(a.predicted_density, b.predicted_density)


def test_thm1_demo_k1():
    rep = thm1_demo(1, x_max=10**4)
    assert len(rep.ps) == 1 and rep.result.all_certified


def test_thm1_demo_k0():
    with pytest.raises(InvalidInput):
        thm1_demo(0)
