import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgspq.arith import (
    PqParams,
    UniqueStructureRegime,
    divisors,
    element_of_order,
    euler_phi,
    factorize,
    is_prime,
    mult_order,
    pq_parameters,
    sigma0,
)


def test_factorize_examples():
    assert factorize(12) == [(2, 2), (3, 1)]
    assert factorize(1) == []
    assert factorize(30) == [(2, 1), (3, 1), (5, 1)]


def test_factorize_rejects_zero():
    with pytest.raises(ValueError):
        factorize(0)


@given(st.integers(min_value=1, max_value=10**12))
@settings(max_examples=200, deadline=None)
def test_factorize_reconstructs(n):
    fac = factorize(n)
    prod = 1
    for p, e in fac:
        assert is_prime(p)
        prod *= p**e
    assert prod == n
    assert [p for p, _ in fac] == sorted({p for p, _ in fac})


def test_mult_order_examples():
    assert mult_order(2, 7) == 3
    assert mult_order(1, 13) == 1
    assert mult_order(3, 7) == 6


def test_mult_order_rejects_nonunit():
    with pytest.raises(ValueError):
        mult_order(7, 7)


@given(st.sampled_from([3, 5, 7, 11, 13, 101, 257]), st.integers(min_value=1, max_value=10**6))
@settings(max_examples=100, deadline=None)
def test_mult_order_is_minimal(p, a):
    a = a % p
    if a == 0:
        a = 1
    k = mult_order(a, p)
    assert pow(a, k, p) == 1
    assert (p - 1) % k == 0
    for ell, _ in factorize(k):
        assert pow(a, k // ell, p) != 1


def test_element_of_order_examples():
    # exhaustive scan over 1..6 gives 2 as the least element of order 3 mod 7
    assert element_of_order(3, 7) == 2
    assert element_of_order(1, 13) == 1
    assert element_of_order(2, 13) == 12  # -1 is the unique involution


def test_element_of_order_rejects_nondivisor():
    with pytest.raises(ValueError):
        element_of_order(5, 7)


@given(st.sampled_from([7, 13, 31, 101, 151]))
@settings(deadline=None)
def test_element_of_order_properties(p):
    for r in divisors(p - 1):
        a = element_of_order(r, p)
        assert pow(a, r, p) == 1
        for ell, _ in factorize(r):
            assert pow(a, r // ell, p) != 1


def test_euler_phi_divisors_sigma0():
    assert euler_phi(9) == 6
    assert divisors(6) == [1, 2, 3, 6]
    assert sigma0(4) == 3


@given(st.integers(min_value=1, max_value=10**6))
@settings(max_examples=300, deadline=None)
def test_sigma0_counts_divisors(n):
    assert sigma0(n) == len(divisors(n))


def test_pq_parameters_7_3():
    params = pq_parameters(7, 3)
    assert params == PqParams(p=7, q=3, e0=1, ell=(2,), e=(1,), f=(1,), s=2)


def test_pq_parameters_13_3():
    params = pq_parameters(13, 3)
    assert (params.e0, params.ell, params.e, params.f, params.s) == (1, (2,), (2,), (1,), 4)


def test_pq_parameters_unique_regime():
    with pytest.raises(UniqueStructureRegime):
        pq_parameters(5, 3)


def test_pq_parameters_rejects_bad_input():
    for p, q in [(6, 3), (7, 2), (3, 7), (7, 7)]:
        with pytest.raises(ValueError):
            pq_parameters(p, q)


def test_pq_parameters_ell_only_in_q_side():
    # 29 - 1 = 7 * 4 and 7 - 1 = 6: the prime 3 divides q-1 only
    params = pq_parameters(29, 7)
    i = params.ell.index(3)
    assert params.e[i] == 0 and params.f[i] == 1


@given(
    st.sampled_from(
        [(7, 3), (13, 3), (31, 3), (11, 5), (31, 5), (29, 7), (43, 7), (211, 3), (101, 5)]
    )
)
@settings(deadline=None)
def test_pq_parameters_reconstruct(pq):
    p, q = pq
    params = pq_parameters(p, q)
    lhs = q**params.e0
    for ell, e in zip(params.ell, params.e):
        lhs *= ell**e
    assert lhs == p - 1
    rhs = 1
    for ell, f in zip(params.ell, params.f):
        rhs *= ell**f
    assert rhs == q - 1
    assert params.s == (p - 1) // q**params.e0
