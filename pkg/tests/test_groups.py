import numpy as np
import pytest

from group_type_planar.config import ConfigError, GroupError
from group_type_planar.groups import (
    FiniteGroup,
    FreeProductAmbient,
    GroupContext,
    Side,
    check_embedding,
    side_at,
)


def test_cyclic_group_table():
    z3 = FiniteGroup.cyclic(3)
    assert z3.order == 3
    assert z3.names == ("e", "g", "g^2")
    assert z3.mul(1, 2) == 0
    assert z3.inv(1) == 2
    assert z3.identity == 0


def test_non_latin_table_is_rejected():
    with pytest.raises(GroupError, match="Latin square"):
        FiniteGroup(["e", "x"], [[0, 0], [1, 1]], label="bad")


def test_non_associative_loop_is_rejected():
    # a Latin square with identity and inverses that is not a group
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(GroupError, match="not associative"):
        FiniteGroup([str(i) for i in range(5)], table, label="loop")


def test_permutation_closure_gives_s3():
    s3 = FiniteGroup.from_permutations(3, [[1, 0, 2], [1, 2, 0]], label="S3")
    assert s3.order == 6
    assert s3.name(s3.identity) == "e"
    assert s3.identity == 0
    t = s3.index("(0 1)")
    assert s3.mul(t, t) == s3.identity
    c = s3.index("(0 1 2)")
    assert s3.mul(c, s3.mul(c, c)) == s3.identity


def test_bad_generator_is_rejected():
    with pytest.raises(GroupError):
        FiniteGroup.from_permutations(3, [[0, 0, 1]])


def test_unknown_element_name():
    with pytest.raises(ConfigError):
        FiniteGroup.cyclic(2).index("h")


def test_embedding_must_be_an_injective_homomorphism():
    s3 = FiniteGroup.from_permutations(3, [[1, 0, 2], [2, 1, 0]])
    z2 = FiniteGroup.cyclic(2)
    check_embedding(z2, s3, [0, s3.index("(0 1)")], "ok")
    with pytest.raises(GroupError, match="homomorphism"):
        check_embedding(z2, s3, [0, s3.index("(0 1 2)")], "embedH")
    with pytest.raises(GroupError, match="injective"):
        check_embedding(z2, s3, [0, 0], "embedH")


def test_free_product_reduces_and_caps_length():
    H, K = FiniteGroup.cyclic(2, "H"), FiniteGroup.cyclic(2, "K")
    ambient = FreeProductAmbient(H, K, max_length=2)
    h, k = ambient.embed(Side.H, 1), ambient.embed(Side.K, 1)
    assert ambient.mul(h, h) == ambient.identity
    assert ambient.mul(h, k) == ((Side.H, 1), (Side.K, 1))
    assert ambient.preimage(Side.H, ambient.mul(h, k)) is None
    assert ambient.preimage(Side.K, k) == 1
    assert ambient.inv(ambient.mul(h, k)) == ((Side.K, 1), (Side.H, 1))
    with pytest.raises(GroupError, match="cap"):
        ambient.mul(ambient.mul(h, k), h)


def test_alternating_sides():
    assert [side_at(i) for i in range(3)] == [Side.K, Side.H, Side.K]
    assert side_at(0, Side.H) is Side.H


def test_word_spaces(ctx_a):
    assert ctx_a.word_count(3) == 8
    assert ctx_a.L(0) is ctx_a.K
    assert ctx_a.L(1) is ctx_a.H
    for s in ctx_a.words(3):
        assert ctx_a.bar(ctx_a.tilde(s)) == s
        assert ctx_a.mu(ctx_a.tilde(s)) == ctx_a.ambient.inv(ctx_a.mu(s))


@pytest.mark.parametrize(
    "name, dims",
    [("A", [1, 1, 3, 11]), ("B", [1, 2, 8, 32]), ("C", [1, 1, 3, 10])],
)
def test_basis_dimensions(make_ctx, name, dims):
    ctx = make_ctx(name)
    assert [len(ctx.enumerate_basis(n)) for n in range(4)] == dims


@pytest.mark.parametrize("name", ["A", "B", "C"])
def test_basis_matches_brute_force(make_ctx, name):
    ctx = make_ctx(name)
    for n in range(3):
        brute = [w for w in ctx.words(2 * n) if ctx.mu(w) == ctx.ambient.identity]
        assert ctx.enumerate_basis(n) == brute


def test_word_text(ctx_a):
    assert ctx_a.parse_word("(e,b)") == (0, 1)
    assert ctx_a.parse_word("a, e, e, b") == (1, 0, 0, 1)
    assert ctx_a.parse_word("()") == ()
    assert ctx_a.format_word((1, 0)) == "(a,e)"
    with pytest.raises(ConfigError):
        ctx_a.parse_word("e,a")


def test_trivial_side_context(ctx_a):
    sub = ctx_a.with_trivial(Side.K)
    assert sub.K.order == 1
    assert len(sub.enumerate_basis(2)) == 2
    assert ctx_a.is_basis_word((0, 0))
    assert not ctx_a.is_basis_word((1, 0))
    assert not ctx_a.is_basis_word((0,))


def test_free_product_context(ctx_c):
    assert isinstance(ctx_c, GroupContext)
    assert ctx_c.backend.value == "free_product"
    assert ctx_c.in_side(ctx_c.ambient.embed(Side.H, 1), Side.H)
    assert not ctx_c.in_side(ctx_c.ambient.embed(Side.H, 1), Side.K)


def test_single_entry_changes_are_rejected():
    s3 = FiniteGroup.from_permutations(3, [[1, 0, 2], [1, 2, 0]], label="S3")
    rng = np.random.default_rng(7)
    for _ in range(50):
        table = s3.table.copy()
        a, b = (int(v) for v in rng.integers(0, s3.order, size=2))
        table[a, b] = (table[a, b] + int(rng.integers(1, s3.order))) % s3.order
        with pytest.raises(GroupError):
            FiniteGroup(s3.names, table, label="tampered")
