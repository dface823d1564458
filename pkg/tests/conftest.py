"""Shared contexts: A = S3 with two transpositions, B = Z2 everywhere, C = Z2 * Z2, D = Z2 over a trivial K,
E = S3 over Z2, F = Z2 over S3."""

import pytest

from group_type_planar.algebra import PlanarAlgebra
from group_type_planar.config import EngineSettings
from group_type_planar.groups import FiniteGroup, GroupContext


def z2(name: str, label: str) -> FiniteGroup:
    return FiniteGroup(["e", name], [[0, 1], [1, 0]], label=label)


def s3(label: str) -> FiniteGroup:
    return FiniteGroup.from_permutations(3, [[1, 0, 2], [2, 1, 0]], label=label)


def make_context(name: str) -> GroupContext:
    if name == "A":
        G = s3("S3")
        return GroupContext.concrete(
            G,
            z2("b", "H"),
            z2("a", "K"),
            [G.identity, G.index("(0 1)")],
            [G.identity, G.index("(0 2)")],
            name="A",
        )
    if name == "B":
        return GroupContext.concrete(z2("g", "G"), z2("g", "H"), z2("g", "K"), [0, 1], [0, 1], name="B")
    if name == "C":
        return GroupContext.free_product(z2("b", "H"), z2("a", "K"), name="C")
    if name == "D":
        return GroupContext.concrete(z2("g", "G"), z2("g", "H"), FiniteGroup.trivial("K"), [0, 1], [0], name="D")
    if name in ("E", "F"):
        G = s3("G")
        everything = list(range(G.order))
        transposition = [G.identity, G.index("(0 1)")]
        if name == "E":
            return GroupContext.concrete(G, s3("H"), z2("t", "K"), everything, transposition, name="E")
        return GroupContext.concrete(G, z2("t", "H"), s3("K"), transposition, everything, name="F")
    raise ValueError(name)


@pytest.fixture
def make_ctx():
    return make_context


@pytest.fixture
def ctx_a():
    return make_context("A")


@pytest.fixture
def ctx_b():
    return make_context("B")


@pytest.fixture
def ctx_c():
    return make_context("C")


@pytest.fixture
def ctx_d():
    return make_context("D")


@pytest.fixture
def make_algebra():
    def build(name: str, max_level: int = 2, debug: bool = False) -> PlanarAlgebra:
        settings = EngineSettings(max_level=max_level, debug_checks=debug)
        return PlanarAlgebra(make_context(name), settings)

    return build


@pytest.fixture
def algebra_a(make_algebra):
    return make_algebra("A", debug=True)


@pytest.fixture
def algebra_d(make_algebra):
    return make_algebra("D", debug=True)


@pytest.fixture(params=["A", "B", "C"])
def reference_algebra(request, make_algebra):
    return make_algebra(request.param)


@pytest.fixture(params=["E", "F"])
def nonabelian_algebra(request, make_algebra):
    return make_algebra(request.param)
