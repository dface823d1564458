from fractions import Fraction

import pytest

from group_type_planar.config import CriticalKind, ElementaryFamily, Shading, TangleKind, TangleValidationError
from group_type_planar.scalars import ScalarRing
from group_type_planar.tangles import (
    EXTERNAL,
    Row,
    Tangle,
    compose,
    elementary_tangle,
    insert_wiggle,
    load_tangle,
    parse_tangle,
    structural_tangle,
    to_text,
    validate,
    weight_of_critical_point,
)
from group_type_planar.tangles.library import (
    annular_identity,
    capping,
    cond_exp_left,
    elementary_parameters,
    identity_tangle,
    inclusion,
    jones,
    left_inclusion,
    loop,
    multiplication,
)


def test_loop_geometry():
    summary = validate(loop()).summary()
    assert summary == {
        "faces": 2,
        "components": 3,
        "networks": 1,
        "n_plus": 1,
        "n_minus": 0,
        "maxima": 1,
        "minima": 1,
        "p_exponent": -2,
    }


def test_shaded_loop_is_a_negative_network():
    geometry = validate(loop(shaded=True))
    assert geometry.n_minus == 1
    assert geometry.p_exponent() == 2


def test_identity_geometry():
    geometry = validate(identity_tangle(1))
    assert len(geometry.faces) == 2
    assert sorted(c.external_indices for c in geometry.components) == [[1], [2]]
    assert [f.shaded for f in geometry.faces] == [False, True]
    assert all(o.owner == EXTERNAL for o in geometry.openings)


def test_jones_geometry():
    summary = validate(jones(1)).summary()
    assert summary["networks"] == 0
    assert summary["maxima"] == summary["minima"] == 1
    assert summary["p_exponent"] == -2


def test_multiplication_faces():
    assert validate(multiplication(1)).summary()["faces"] == 2
    assert validate(multiplication(2)).disc_colors == {"D1": 2, "D2": 2}


@pytest.mark.parametrize(
    "tangle, fragment, row",
    [
        (Tangle(1, (Row.cap(1),)), "needs strands", 1),
        (Tangle(2, (Row.box("D1", 1, 2),)), "shaded gap", 1),
        (Tangle(0, (Row.cup(1),)), "does not match color", 1),
        (Tangle(1, (Row.box("D1", 1, 1), Row.box("D1", 1, 1))), "duplicate", 2),
        (Tangle(1, (Row.cup(4),)), "outside width", 1),
    ],
)
def test_invalid_tangles_name_the_row(tangle, fragment, row):
    with pytest.raises(TangleValidationError, match=fragment) as excinfo:
        validate(tangle)
    assert excinfo.value.row == row


def test_shaded_tangle_must_have_color_zero():
    with pytest.raises(TangleValidationError, match="only 0-tangles"):
        validate(Tangle(1, shaded=True))


def test_structural_library():
    assert structural_tangle(TangleKind.JONES, 1) == jones(1)
    assert structural_tangle("inclusion", 2) == inclusion(2)
    assert cond_exp_left(1).shaded
    for kind in TangleKind:
        for n in range(1, 4):
            geometry = validate(structural_tangle(kind, n))
            assert geometry.color >= 0
    with pytest.raises(TangleValidationError):
        jones(0)


@pytest.mark.parametrize("family", list(ElementaryFamily))
def test_every_elementary_tangle_is_valid(family):
    for n in range(3):
        for params in elementary_parameters(family, n):
            validate(elementary_tangle(family, **params))


def test_elementary_parameter_counts():
    assert len(elementary_parameters(ElementaryFamily.CAPPING, 2)) == 3
    assert len(elementary_parameters(ElementaryFamily.CAPPING, 0)) == 0
    assert len(elementary_parameters(ElementaryFamily.CAP_INCLUSION, 1)) == 3
    assert len(elementary_parameters(ElementaryFamily.DISC_INCLUSION, 2)) == 4
    with pytest.raises(TangleValidationError):
        capping(1, 2)


def test_compose_renames_inner_discs():
    composed, renaming = compose(inclusion(1), "D1", annular_identity(1))
    assert renaming == {"D1": "D1.D1"}
    assert composed == Tangle(2, (Row.box("D1.D1", 1, 1),))

    composed, renaming = compose(multiplication(1), "D1", identity_tangle(1))
    assert renaming == {}
    assert composed == Tangle(1, (Row.box("D2", 1, 1),))


def test_compose_checks_color_and_shading():
    with pytest.raises(TangleValidationError, match="color"):
        compose(inclusion(1), "D1", identity_tangle(2))
    with pytest.raises(TangleValidationError, match="shading"):
        compose(left_inclusion(0), "D1", loop(shaded=True))
    with pytest.raises(TangleValidationError, match="no disc"):
        compose(inclusion(1), "D7", identity_tangle(1))


@pytest.mark.parametrize("left", [False, True])
def test_wiggle_keeps_weight(left):
    wiggled = insert_wiggle(identity_tangle(2), 0, 1, left=left)
    summary = validate(wiggled).summary()
    assert summary["maxima"] == summary["minima"] == 1
    assert summary["p_exponent"] == 0
    with pytest.raises(TangleValidationError):
        insert_wiggle(identity_tangle(2), 0, 3)


def test_parse_tangle():
    text = "tangle 0 shaded\n# a shaded loop\ncup 1\ncap 1\n"
    assert parse_tangle(text) == loop(shaded=True)
    assert parse_tangle(to_text(cond_exp_left(2))) == cond_exp_left(2)


@pytest.mark.parametrize(
    "text, line",
    [
        ("tangle x\n", 1),
        ("tangle 1\nbox D1 1\n", 2),
        ("tangle 1\n# comment\ncap 1\n", 3),
        ("tangle 1 striped\n", 1),
        ("cup 1\n", 1),
    ],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(TangleValidationError) as excinfo:
        parse_tangle(text)
    assert excinfo.value.line == line


def test_missing_header():
    with pytest.raises(TangleValidationError, match="header"):
        parse_tangle("# nothing\n")


@pytest.mark.parametrize("m", [1, 2, Fraction(1, 3), 16])
def test_max_and_min_weights_cancel_across_a_wiggle(m):
    ring = ScalarRing(m)
    opposite = {Shading.SHADED: Shading.UNSHADED, Shading.UNSHADED: Shading.SHADED}
    for shading in Shading:
        top = weight_of_critical_point(ring, CriticalKind.MAX, shading)
        bottom = weight_of_critical_point(ring, CriticalKind.MIN, opposite[shading])
        assert top * bottom == 1
    assert weight_of_critical_point(ring, CriticalKind.MAX, Shading.UNSHADED) == ring.r


def test_load_tangle_reports_unreadable_files(tmp_path):
    with pytest.raises(TangleValidationError, match="cannot read"):
        load_tangle(tmp_path / "missing.tangle")
    binary = tmp_path / "binary.tangle"
    binary.write_bytes(b"\xff\xfe")
    with pytest.raises(TangleValidationError, match="UTF-8"):
        load_tangle(binary)
    good = tmp_path / "loop.tangle"
    good.write_text(to_text(loop()))
    assert load_tangle(good) == loop()
