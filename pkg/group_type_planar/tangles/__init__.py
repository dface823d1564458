"""Slice-form planar tangles and their geometry."""

from group_type_planar.tangles.geometry import (
    EXTERNAL,
    WEIGHT_TABLE,
    TangleGeometry,
    validate,
    weight_of_critical_point,
)
from group_type_planar.tangles.library import elementary_tangle, structural_tangle
from group_type_planar.tangles.model import Row, RowKind, Tangle, compose, insert_wiggle
from group_type_planar.tangles.text_format import load_tangle, parse_tangle, to_text

__all__ = [
    "EXTERNAL",
    "WEIGHT_TABLE",
    "Row",
    "RowKind",
    "Tangle",
    "TangleGeometry",
    "compose",
    "elementary_tangle",
    "insert_wiggle",
    "load_tangle",
    "parse_tangle",
    "structural_tangle",
    "to_text",
    "validate",
    "weight_of_critical_point",
]
