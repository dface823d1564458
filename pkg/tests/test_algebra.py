from fractions import Fraction

import numpy as np
import pytest

from group_type_planar.algebra import exact_rank, sample_tuples
from group_type_planar.config import ConfigError, LevelMismatchError
from group_type_planar.groups import Side


def test_delta(algebra_a, algebra_d):
    assert algebra_a.delta == 2
    assert algebra_d.delta ** 2 == 2
    assert algebra_d.ring.degree == 4


def test_identity_is_a_unit(reference_algebra):
    algebra = reference_algebra
    for n in range(3):
        one = algebra.identity(n)
        for x in algebra.basis(n):
            assert algebra.mult(one, x) == x
            assert algebra.mult(x, one) == x


def test_multiplication_is_associative(algebra_a):
    basis = algebra_a.basis(2)
    for x in basis:
        for y in basis:
            for z in basis:
                assert (x * y) * z == x * (y * z)


def test_star_is_an_antimultiplicative_involution(reference_algebra):
    algebra = reference_algebra
    basis = algebra.basis(2)
    for x in basis:
        assert algebra.star(algebra.star(x)) == x
        for y in basis:
            assert algebra.star(x * y) == algebra.star(y) * algebra.star(x)


def test_trace_of_identity(algebra_a, algebra_d):
    for algebra in (algebra_a, algebra_d):
        for n in range(3):
            assert algebra.trace(algebra.identity(n)) == 1


@pytest.mark.parametrize("name, markov", [("A", Fraction(1, 4)), ("B", Fraction(1, 4)), ("D", Fraction(1, 2))])
def test_jones_projection(make_algebra, name, markov):
    algebra = make_algebra(name, max_level=3)
    e1 = algebra.jones_projection(1)
    assert e1 * e1 == e1
    assert algebra.star(e1) == e1
    assert algebra.trace(e1) == markov
    assert algebra.jones(1) == e1.scale(algebra.delta)


@pytest.mark.parametrize("name", ["A", "D"])
def test_temperley_lieb_relation(make_algebra, name):
    algebra = make_algebra(name, max_level=3)
    e1 = algebra.tl_generator(1, 3)
    e2 = algebra.tl_generator(2, 3)
    tl = 1 / algebra.delta ** 2
    assert e1 * e2 * e1 == e1.scale(tl)
    assert e2 * e1 * e2 == e2.scale(tl)
    assert e2 * e2 == e2


def test_expectation_undoes_inclusion(reference_algebra):
    algebra = reference_algebra
    for n in range(3):
        for x in algebra.basis(n):
            assert algebra.expect_right(algebra.include(x)) == x


def test_left_expectation_preserves_trace(algebra_a, algebra_d):
    for algebra in (algebra_a, algebra_d):
        for x in algebra.basis(2):
            assert algebra.trace(algebra.expect_left(x)) == algebra.trace(x)


def test_cond_exp_on_level_one(algebra_a):
    x = algebra_a.basis_element((0, 0))
    assert algebra_a.cond_exp_right(x) == algebra_a.scalar_element(2)
    assert algebra_a.cond_exp_left(x) == algebra_a.scalar_element(2)
    with pytest.raises(LevelMismatchError):
        algebra_a.cond_exp_right(algebra_a.scalar_element(1))


def test_left_trace_matches_trace(algebra_a, algebra_d):
    for algebra in (algebra_a, algebra_d):
        for n in range(1, 3):
            for x in algebra.basis(n):
                assert algebra.left_trace(x) == algebra.trace(x)


def test_element_errors(algebra_a):
    with pytest.raises(ConfigError):
        algebra_a.basis_element((1, 0))
    with pytest.raises(LevelMismatchError):
        algebra_a.identity(1) + algebra_a.identity(2)
    with pytest.raises(LevelMismatchError):
        algebra_a.include_to(algebra_a.identity(2), 1)


def test_text_rendering(algebra_a):
    assert algebra_a.basis_element((0, 0)).to_text() == "1 * (e,e)"
    assert algebra_a.jones_projection(1).to_text() == "1/2 * (e,e,e,e) + 1/2 * (e,b,e,b)"
    assert algebra_a.zero(1).to_text() == "0"
    payload = algebra_a.basis_element((0, 0)).to_dict()
    assert payload["level"] == 1
    assert payload["terms"][0]["word"] == ["e", "e"]


def test_gram_is_positive_semidefinite(reference_algebra):
    algebra = reference_algebra
    for n in range(3):
        matrix = algebra.gram(n)
        assert all(matrix[i][j] == matrix[j][i] for i in range(len(matrix)) for j in range(len(matrix)))
        assert algebra.gram_eigenvalues(n).min() >= -1e-9


@pytest.mark.parametrize("name", ["A", "B"])
def test_biprojection(make_algebra, name):
    report = make_algebra(name).biprojection_checks()
    assert report.passed
    assert report.centralizer_dimension == 1
    assert report.to_dict()["passed"] is True


def test_fixed_point_words(algebra_a):
    k_fixed = algebra_a.fixed_point_words(2, Side.K)
    assert k_fixed == algebra_a.ctx.with_trivial(Side.K).enumerate_basis(2)
    assert len(algebra_a.fixed_point_words(2, Side.H)) == 2


def test_exact_rank(algebra_a):
    one, two = algebra_a.ring.one, algebra_a.ring.rational(2)
    assert exact_rank([{"a": one, "b": one}, {"a": two, "b": two}]) == 1
    assert exact_rank([{"a": one}, {"b": one}, {"a": one, "b": two}]) == 2
    assert exact_rank([]) == 0


def test_sample_tuples_is_exhaustive_or_seeded():
    assert len(list(sample_tuples([1, 2, 3], 2, 100))) == 9
    drawn = list(sample_tuples(list(range(10)), 3, 5, seed=7))
    assert len(drawn) == 5
    assert drawn == list(sample_tuples(list(range(10)), 3, 5, seed=7))


def random_element(algebra, n, rng):
    element = algebra.zero(n)
    for x in algebra.basis(n):
        coeff = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
        if coeff:
            element = element + x.scale(coeff)
    return element


@pytest.mark.parametrize("name", ["A", "D", "E"])
def test_inner_product_is_the_trace_form(make_algebra, name):
    algebra = make_algebra(name)
    rng = np.random.default_rng(1)
    for n in range(3):
        for _ in range(5):
            x, y = random_element(algebra, n, rng), random_element(algebra, n, rng)
            assert algebra.inner(x, y) == algebra.trace(algebra.star(x) * y)
            assert algebra.inner(x, y) == algebra.inner(y, x)
        basis = algebra.basis(n)
        matrix = algebra.gram(n)
        for i, bi in enumerate(basis):
            for j, bj in enumerate(basis):
                assert algebra.inner(bi, bj) == matrix[i][j]


def test_nonabelian_structure(nonabelian_algebra):
    algebra = nonabelian_algebra
    for n in range(3):
        one = algebra.identity(n)
        basis = algebra.basis(n)
        for x in basis:
            assert one * x == x == x * one
        for x, y, z in sample_tuples(basis, 3, 200, seed=0):
            assert (x * y) * z == x * (y * z)
            assert algebra.star(x * y) == algebra.star(y) * algebra.star(x)
    for n in range(2):
        for x in algebra.basis(n):
            assert algebra.expect_right(algebra.include(x)) == x


def test_nonabelian_jones_projection(nonabelian_algebra):
    algebra = nonabelian_algebra
    e1 = algebra.jones_projection(1)
    assert e1 * e1 == e1
    assert algebra.star(e1) == e1
    assert algebra.trace(e1) == Fraction(1, 12)
    assert algebra.delta ** 2 == 12
    for x in algebra.basis(1):
        assert e1 * algebra.include(x) * e1 == e1.scale(algebra.expect_right(x).coefficient(()))
