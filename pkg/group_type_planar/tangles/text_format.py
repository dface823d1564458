"""Reading and writing the line-based tangle text format.

    tangle <color> [shaded]
    cup <pos>
    cap <pos>
    box <name> <color> <pos>
    id

Rows are listed bottom to top; '#' starts a comment.
"""

import logging
from pathlib import Path
from typing import List, Union

from group_type_planar.config import TangleValidationError
from group_type_planar.tangles.geometry import validate
from group_type_planar.tangles.model import Row, RowKind, Tangle

logger = logging.getLogger(__name__)


def _int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise TangleValidationError(f"{what} must be an integer, got {token!r}", line=line) from None


def parse_tangle(text: str) -> Tangle:
    """Strict parser; any error names its line."""
    header = None
    rows: List[Row] = []
    row_lines: List[int] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        tokens = content.split()
        keyword = tokens[0]
        if header is None:
            if keyword != "tangle" or len(tokens) not in (2, 3):
                raise TangleValidationError("expected header 'tangle <color> [shaded]'", line=number)
            if len(tokens) == 3 and tokens[2] != "shaded":
                raise TangleValidationError(f"unknown header flag {tokens[2]!r}", line=number)
            header = (_int(tokens[1], number, "color"), len(tokens) == 3)
            continue
        if keyword == "id" and len(tokens) == 1:
            rows.append(Row.identity())
        elif keyword in ("cup", "cap") and len(tokens) == 2:
            pos = _int(tokens[1], number, "position")
            rows.append(Row.cup(pos) if keyword == "cup" else Row.cap(pos))
        elif keyword == "box" and len(tokens) == 4:
            rows.append(Row.box(tokens[1], _int(tokens[2], number, "color"), _int(tokens[3], number, "position")))
        else:
            raise TangleValidationError(f"cannot parse row {content!r}", line=number)
        row_lines.append(number)

    if header is None:
        raise TangleValidationError("missing 'tangle' header")
    tangle = Tangle(header[0], tuple(rows), header[1])
    try:
        validate(tangle)
    except TangleValidationError as exc:
        line = row_lines[exc.row - 1] if exc.row else None
        raise TangleValidationError(exc.message, row=exc.row, line=line) from None
    return tangle


def load_tangle(path: Union[str, Path]) -> Tangle:
    logger.info(f"Loading tangle from {path}")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise TangleValidationError(f"cannot read {path}: {e.strerror or e}") from None
    except UnicodeDecodeError as e:
        raise TangleValidationError(f"{path} is not UTF-8 text (byte {e.start})") from None
    return parse_tangle(text)


def to_text(tangle: Tangle) -> str:
    lines = [f"tangle {tangle.color}" + (" shaded" if tangle.shaded else "")]
    for row in tangle.rows:
        if row.kind is RowKind.IDENTITY:
            lines.append("id")
        elif row.kind is RowKind.BOX:
            lines.append(f"box {row.disc} {row.color} {row.pos}")
        else:
            lines.append(f"{row.kind.value} {row.pos}")
    return "\n".join(lines) + "\n"
