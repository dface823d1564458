from fractions import Fraction

import numpy as np
import pytest

from group_type_planar.config import ScalarDomainError
from group_type_planar.scalars import ScalarRing, rational_root


def test_rational_root():
    assert rational_root(Fraction(16, 81), 4) == Fraction(2, 3)
    assert rational_root(Fraction(2), 2) is None


@pytest.mark.parametrize("m, degree", [(1, 1), (16, 1), (4, 2), (Fraction(1, 4), 2), (2, 4), (3, 4)])
def test_ring_degree(m, degree):
    assert ScalarRing(m).degree == degree


def test_non_positive_m_is_rejected():
    with pytest.raises(ScalarDomainError):
        ScalarRing(0)


@pytest.mark.parametrize("m", [1, 2, 4, Fraction(1, 2), 16])
def test_fourth_power_of_r_is_m(m):
    ring = ScalarRing(m)
    assert ring.r ** 4 == ring.rational(m)
    assert ring.power(-2) * ring.power(2) == 1
    assert ring.power(7) == ring.r ** 7


def test_rational_r_collapses():
    ring = ScalarRing(16)
    assert ring.r == 2
    assert ring.r.to_float() == 2.0


def test_inverse_in_degree_four():
    ring = ScalarRing(2)
    x = ring.one + ring.r
    assert x * x.inverse() == 1
    assert (ring.power(3) + 5) / (ring.power(3) + 5) == 1
    assert 1 / ring.r == ring.power(-1)


def test_division_by_zero():
    ring = ScalarRing(2)
    with pytest.raises(ScalarDomainError):
        ring.one / 0
    with pytest.raises(ScalarDomainError):
        ring.zero.inverse()


def test_delta_and_square_roots():
    ring = ScalarRing(2)
    assert ring.delta(1) ** 2 == 2
    assert ring.sqrt_ratio(2, 1) == ring.power(2)
    assert ring.sqrt_ratio(1, 2) == ring.power(-2)
    assert ring.sqrt_ratio(3, 3) == 1
    with pytest.raises(ScalarDomainError):
        ring.sqrt_ratio(3, 1)
    assert ScalarRing(1).delta(2) == 2


def test_rings_do_not_mix():
    with pytest.raises(ScalarDomainError):
        ScalarRing(2).one + ScalarRing(1).one
    assert ScalarRing(2).one != ScalarRing(1).one


def test_text_and_dict():
    ring = ScalarRing(2)
    assert (ring.one - ring.r).to_text() == "1 - 1*r"
    assert (ring.power(2) * 3).to_text() == "3*r^2"
    assert ring.zero.to_text() == "0"
    assert ring.rational(Fraction(1, 2)).to_text() == "1/2"
    assert ScalarRing(1).rational(2).to_dict() == {"c0": "2", "c1": "0", "c2": "0", "c3": "0"}


def test_rational_extraction():
    ring = ScalarRing(4)
    assert ring.power(4).to_fraction() == 4
    # r^2 = 2 is rational when m = 4
    assert ring.power(2).is_rational
    with pytest.raises(ScalarDomainError):
        ring.r.to_fraction()


def random_scalar(ring, rng):
    nums = rng.integers(-9, 10, size=4)
    dens = rng.integers(1, 6, size=4)
    return ring.scalar([Fraction(int(n), int(d)) for n, d in zip(nums, dens)])


@pytest.mark.parametrize("m", [1, 2, 4, Fraction(1, 2), 3, 16])
def test_arithmetic_matches_floats(m):
    ring = ScalarRing(m)
    rng = np.random.default_rng(11)
    for _ in range(100):
        x, y = random_scalar(ring, rng), random_scalar(ring, rng)
        assert (x * y).to_float() == pytest.approx(x.to_float() * y.to_float(), rel=1e-9, abs=1e-9)
        assert (x + y).to_float() == pytest.approx(x.to_float() + y.to_float(), rel=1e-9, abs=1e-9)
        assert (x - y).to_float() == pytest.approx(x.to_float() - y.to_float(), rel=1e-9, abs=1e-9)
        if y:
            assert (x / y).to_float() == pytest.approx(x.to_float() / y.to_float(), rel=1e-7, abs=1e-9)


@pytest.mark.parametrize("m", [1, 2, 4, Fraction(1, 2), 3, 16])
def test_zero_test_agrees_with_floats(m):
    ring = ScalarRing(m)
    rng = np.random.default_rng(5)
    assert not (ring.r ** 4 - m)
    assert not (ring.power(2) * ring.power(2) - ring.rational(m))
    for _ in range(100):
        x, y = random_scalar(ring, rng), random_scalar(ring, rng)
        for value in (x, x * y - y * x, (x + y) * (x - y) - (x * x - y * y)):
            assert bool(value) == (abs(value.to_float()) > 1e-9)
        if x:
            assert not (x * x.inverse() - 1)


@pytest.mark.parametrize("m", [1, 2, 4, Fraction(1, 2), 3, 16])
def test_canonical_form_is_idempotent(m):
    ring = ScalarRing(m)
    rng = np.random.default_rng(3)
    for _ in range(50):
        coeffs = [Fraction(int(n), 3) for n in rng.integers(-9, 10, size=4)]
        once = ring.canonical(coeffs)
        assert ring.canonical(once) == once
        assert ring.scalar(once) == ring.scalar(coeffs)
