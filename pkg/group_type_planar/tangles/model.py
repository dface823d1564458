"""Slice-form planar tangles: rows of cups, caps and boxes read bottom to top."""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Tuple

from group_type_planar.config import TangleValidationError

logger = logging.getLogger(__name__)


class RowKind(Enum):
    """Kinds of slice rows."""
    IDENTITY = "id"
    CUP = "cup"
    CAP = "cap"
    BOX = "box"


@dataclass(frozen=True)
class Row:
    """One horizontal slice. Positions are 1-based strand indices from the left wall."""

    kind: RowKind
    pos: int = 0
    disc: Optional[str] = None
    color: int = 0

    @classmethod
    def identity(cls) -> "Row":
        return cls(RowKind.IDENTITY)

    @classmethod
    def cup(cls, pos: int) -> "Row":
        return cls(RowKind.CUP, pos)

    @classmethod
    def cap(cls, pos: int) -> "Row":
        return cls(RowKind.CAP, pos)

    @classmethod
    def box(cls, disc: str, color: int, pos: int) -> "Row":
        return cls(RowKind.BOX, pos, disc, color)

    @property
    def width_change(self) -> int:
        if self.kind is RowKind.CUP:
            return 2
        if self.kind is RowKind.CAP:
            return -2
        return 0

    def shifted(self, offset: int, disc: Optional[str] = None) -> "Row":
        if self.kind is RowKind.IDENTITY:
            return self
        return replace(self, pos=self.pos + offset, disc=disc if disc is not None else self.disc)


def gap_shaded(external_shaded: bool, gap: int) -> bool:
    """Shading of gap j at any level; gap 0 is the external region on the left wall."""
    return external_shaded != (gap % 2 == 1)


@dataclass(frozen=True)
class Tangle:
    """An n-tangle with n strands meeting the bottom edge and n meeting the top edge."""

    color: int
    rows: Tuple[Row, ...] = ()
    shaded: bool = False

    def widths(self) -> List[int]:
        """Strand counts at levels 0..len(rows), without validation."""
        widths = [self.color]
        for row in self.rows:
            widths.append(widths[-1] + row.width_change)
        return widths

    @property
    def boxes(self) -> Dict[str, Row]:
        return {row.disc: row for row in self.rows if row.kind is RowKind.BOX}

    def disc_row(self, disc: str) -> int:
        for index, row in enumerate(self.rows):
            if row.kind is RowKind.BOX and row.disc == disc:
                return index
        raise TangleValidationError(f"no disc named {disc!r}")

    def is_shaded(self, gap: int) -> bool:
        return gap_shaded(self.shaded, gap)


def compose(outer: Tangle, disc: str, inner: Tangle) -> Tuple[Tangle, Dict[str, str]]:
    """Splice inner into the named disc of outer; returns the tangle and the renaming of inner discs."""
    index = outer.disc_row(disc)
    box = outer.rows[index]
    if box.color != inner.color:
        raise TangleValidationError(
            f"disc {disc!r} has color {box.color} but the inserted tangle has color {inner.color}",
            row=index + 1,
        )
    if box.color == 0 and outer.is_shaded(box.pos - 1) != inner.shaded:
        raise TangleValidationError(
            f"0-disc {disc!r} sits in a region whose shading differs from the inserted 0-tangle",
            row=index + 1,
        )

    used = {name for name in outer.boxes if name != disc}
    renaming: Dict[str, str] = {}
    for name in inner.boxes:
        fresh = f"{disc}.{name}"
        while fresh in used:
            fresh += "'"
        used.add(fresh)
        renaming[name] = fresh

    offset = box.pos - 1
    spliced = tuple(row.shifted(offset, renaming.get(row.disc)) for row in inner.rows)
    rows = outer.rows[:index] + spliced + outer.rows[index + 1:]
    logger.debug(f"Composed into {disc!r}: {len(inner.rows)} rows at offset {offset}")
    return Tangle(outer.color, rows, outer.shaded), renaming


def insert_wiggle(tangle: Tangle, level: int, strand: int, left: bool = False) -> Tangle:
    """Insert a cup/cap wiggle on a strand at a level; the tangle is unchanged up to isotopy."""
    widths = tangle.widths()
    if not 0 <= level < len(widths) or not 1 <= strand <= widths[level]:
        raise TangleValidationError(f"no strand {strand} at level {level}")
    if left:
        pair = (Row.cup(strand), Row.cap(strand + 1))
    else:
        pair = (Row.cup(strand + 1), Row.cap(strand))
    rows = tangle.rows[:level] + pair + tangle.rows[level:]
    return Tangle(tangle.color, rows, tangle.shaded)
