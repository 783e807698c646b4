import pytest

from sumnets.galois import MAX_MODULUS, Felt, FieldMismatchError, PrimeField, is_prime


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_field_axioms_exhaustive(p):
    f = PrimeField(p)
    els = [Felt(v, f) for v in range(p)]
    zero, one = Felt(0, f), Felt(1, f)
    for a in els:
        assert a + zero == a
        assert a * one == a
        assert a * zero == zero
        assert a + (-a) == zero
        if a != zero:
            assert a * a.inverse() == one
        for b in els:
            assert a + b == b + a
            assert a * b == b * a
            for c in els:
                assert (a + b) + c == a + (b + c)
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_reduce_is_zero_exactly_when_p_divides(p):
    f = PrimeField(p)
    for n in range(-3 * p, 3 * p + 1):
        assert (f.reduce(n).value == 0) == (n % p == 0)


def test_reduce_examples():
    assert PrimeField(2).reduce(2).value == 0
    assert PrimeField(3).reduce(2).value == 2
    assert PrimeField(5).reduce(-1).value == 4


def test_arithmetic_examples():
    f5 = PrimeField(5)
    assert (Felt(3, f5) + Felt(4, f5)).value == 2
    assert (Felt(3, f5) * Felt(4, f5)).value == 2
    assert Felt(3, f5).inverse().value == 2
    f2 = PrimeField(2)
    assert (Felt(1, f2) + Felt(1, f2)).value == 0
    f3 = PrimeField(3)
    assert (Felt(2, f3) * Felt(2, f3)).value == 1
    assert Felt(2, f3).inverse().value == 2
    f7 = PrimeField(7)
    assert f7.inv(f7.one) == f7.one


def test_inverse_of_zero_rejected():
    f = PrimeField(5)
    with pytest.raises(ZeroDivisionError):
        Felt(0, f).inverse()


def test_mismatched_fields_rejected():
    a = Felt(1, PrimeField(3))
    b = Felt(1, PrimeField(5))
    with pytest.raises(FieldMismatchError):
        a + b
    with pytest.raises(FieldMismatchError):
        a * b


@pytest.mark.parametrize("bad", [0, 1, 4, 6, 9, 15, 100])
def test_non_prime_moduli_rejected(bad):
    with pytest.raises(ValueError):
        PrimeField(bad)


def test_modulus_ceiling():
    # 2147483659 is the first prime above the 2^31 ceiling.
    assert MAX_MODULUS + 11 == 2147483659
    with pytest.raises(ValueError):
        PrimeField(2147483659)


def test_is_prime():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29}
    for n in range(2, 30):
        assert is_prime(n) == (n in primes)
