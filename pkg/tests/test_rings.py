import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latfrob.errors import IntegrityError
from latfrob.rings import (
    BaseSetup,
    FiniteField,
    FqPolyRing,
    FqTruncRing,
    IntegerRing,
    IntegersMod,
    coeff_ring_make,
    is_irreducible_mod_p,
)


def test_integers_q_power_and_pi(zz2):
    R = coeff_ring_make(zz2, "integers")
    assert R.pow(5, zz2.q) == 25
    assert R.pi == 2
    assert R.div_pi(12) == 6
    with pytest.raises(IntegrityError):
        R.div_pi(7)


def test_integers_mod_64():
    R = coeff_ring_make(BaseSetup("char-zero", 2, K=6), "mod")
    assert R.descriptor == "ZZ/64"
    assert R.mul(9, 15) == 135 % 64
    assert R.inverse(3) * 3 % 64 == 1
    assert not R.is_unit(6)


def test_integers_mod_requires_prime_power():
    assert IntegersMod.from_modulus(2, 64).K == 6
    with pytest.raises(ValueError):
        IntegersMod.from_modulus(2, 48)


def test_f4_modulus_irreducibility():
    F = FiniteField(2, 2, (1, 1, 1))
    assert F.q == 4
    with pytest.raises(ValueError):
        FiniteField(2, 2, (1, 0, 1))  # u^2 + 1 = (u + 1)^2


def test_irreducible_quadratics_over_f2_enumerated():
    quads = [(c0, c1, 1) for c0 in range(2) for c1 in range(2)]
    assert [m for m in quads if is_irreducible_mod_p(m, 2)] == [(1, 1, 1)]


@pytest.mark.parametrize("q,p,e", [(4, 2, 2), (8, 2, 3), (9, 3, 2)])
def test_default_moduli_give_fields(q, p, e):
    F = FiniteField(p, e)
    for a in range(1, q):
        assert F.pow(a, q - 1) == F.one
    assert F.pow(2, q) == 2  # q-power fixes F_q


def test_char_zero_rejects_e_above_one():
    with pytest.raises(ValueError):
        BaseSetup("char-zero", 2, e=2)


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        BaseSetup("char-zero", 4)


def test_fq_poly_ring_div_pi(fq2):
    R = fq2.ring
    assert isinstance(R, FqPolyRing)
    t = R.pi
    a = R.add(R.mul(t, t), t)
    assert R.div_pi(a) == R.add(t, R.one)
    with pytest.raises(IntegrityError):
        R.div_pi(R.one)


def test_fq_trunc_inverse(fq2):
    R = fq2.point_ring
    assert isinstance(R, FqTruncRing)
    a = R.add(R.one, R.pi)
    assert R.mul(a, R.inverse(a)) == R.one
    assert R.pow(R.pi, fq2.K) == R.zero


def test_q_power_is_additive_in_char_p():
    s = BaseSetup("char-p", 2, e=2)
    R = s.point_ring
    import random

    rng = random.Random(1)
    for _ in range(50):
        a, b = R.random(rng), R.random(rng)
        assert R.pow(R.add(a, b), s.q) == R.add(R.pow(a, s.q), R.pow(b, s.q))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 3**5 - 1), st.integers(0, 3**5 - 1), st.integers(0, 3**5 - 1))
def test_integers_mod_ring_axioms(a, b, c):
    R = IntegersMod(3, 5)
    assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
    assert R.add(a, R.neg(a)) == 0


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_f9_field_axioms(a, b, c):
    F = FiniteField(3, 2)
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == F.zero


def test_setup_key_and_json_roundtrip():
    s = BaseSetup("char-p", 3, e=2, K=4)
    assert BaseSetup.from_json(s.to_json()) == s
    assert s.key() == "p-p3-e2"
    assert IntegerRing(2) == IntegerRing(3)
