from fractions import Fraction

import pytest

from descent0.arith import (
    class_mul,
    factor,
    is_prime,
    jacobi,
    kernel,
    signed_squarefree_divisors,
    sqrt_mod_prime,
    square_class_in_Qv,
)
from descent0.errors import EvenModulus, NonPositiveModulus, NonResidue, ZeroInput


def naive_factor(n):
    n, out, p = abs(n), [], 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def euler(a, p):
    v = pow(a % p, (p - 1) // 2, p)
    return -1 if v == p - 1 else v


def test_factor_negative():
    f = factor(-12)
    assert f.sign == -1 and f.factors == ((2, 2), (3, 1))
    assert f.radical == 6 and f.kernel == -3 and not f.is_prime


def test_factor_prime():
    f = factor(79)
    assert f.is_prime and f.radical == 79 and f.kernel == 79


def test_factor_44965_against_trial_division():
    expected = naive_factor(44965)
    assert expected == [(5, 1), (17, 1), (23, 2)]
    f = factor(44965)
    assert list(f.factors) == expected
    assert f.radical == 1955 and f.kernel == 85


@pytest.mark.parametrize("n", [2**61 - 1, (2**31 - 1) * (2**61 - 1), 1000003 * 1000033 * 7, -(999983**2) * 1000003, 2**89 - 1])
def test_factor_large(n):
    f = factor(n)
    prod = f.sign
    for p, e in f.factors:
        assert is_prime(p)
        prod *= p**e
    assert prod == n


def test_factor_semiprime_beyond_trial_limit():
    p, q = 1000000007, 998244353
    assert factor(p * q).factors == ((q, 1), (p, 1))


def test_factor_zero():
    with pytest.raises(ZeroInput):
        factor(0)


def test_divisors():
    assert signed_squarefree_divisors(6) == [-6, -3, -2, -1, 1, 2, 3, 6]
    assert signed_squarefree_divisors(12) == signed_squarefree_divisors(6)
    assert signed_squarefree_divisors(1) == [-1, 1]
    with pytest.raises(ZeroInput):
        signed_squarefree_divisors(0)


def test_jacobi_examples():
    assert jacobi(2, 7) == 1
    assert jacobi(3, 79) == euler(3, 79) == -1
    assert jacobi(85, 79) == euler(85, 79) == -1
    assert jacobi(-1, 7) == -1
    assert jacobi(21, 15) == 0


def test_jacobi_errors():
    with pytest.raises(EvenModulus):
        jacobi(3, 8)
    with pytest.raises(NonPositiveModulus):
        jacobi(3, -7)


def test_sqrt_mod_prime():
    assert sqrt_mod_prime(2, 7) == 3
    assert sqrt_mod_prime(0, 7) == 0
    with pytest.raises(NonResidue):
        sqrt_mod_prime(3, 7)


@pytest.mark.parametrize("p", [17, 41, 73, 97, 257, 65537])
def test_sqrt_mod_prime_1_mod_8(p):
    # p = 1 mod 8 exercises the full Tonelli-Shanks loop
    for a in range(1, 60):
        if euler(a, p) == 1:
            s = sqrt_mod_prime(a, p)
            assert s * s % p == a % p and s <= p - s


def test_kernel_and_mul():
    assert kernel(-12) == -3
    assert kernel(72) == 2
    assert class_mul(6, 10) == 15
    assert class_mul(-3, -3) == 1


def test_square_class_in_Qv():
    assert square_class_in_Qv(17, 2).is_square
    assert not square_class_in_Qv(-4, None).is_square
    q = square_class_in_Qv(18, 3)
    assert q.valuation == 2 and q.unit_class == 2 and not q.is_square
    assert square_class_in_Qv(Fraction(9, 4), 2).is_square
    assert square_class_in_Qv(Fraction(1, 7), 3).valuation == 0
    with pytest.raises(ZeroInput):
        square_class_in_Qv(0, 5)
