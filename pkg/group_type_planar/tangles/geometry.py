"""Geometry of a slice-form tangle: shading, openings, faces, networks and critical points.

Regions are tracked as gaps between strands at each level. Boundary components
are found by walking every region boundary with the region kept on the right:
going up along the left boundary of a gap, down along its right boundary.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Mapping, Optional, Tuple

from group_type_planar.config import CriticalKind, Shading, TangleValidationError
from group_type_planar.scalars import Scalar, ScalarRing
from group_type_planar.tangles.model import RowKind, Tangle

logger = logging.getLogger(__name__)

EXTERNAL = "<external>"

WeightTable = Mapping[Tuple[CriticalKind, bool], int]

# Exponent of r = (|H|/|K|)^(1/4) for each (kind, enclosed region shaded).
# Found by calibrate_critical_weights and frozen here.
WEIGHT_TABLE: Dict[Tuple[CriticalKind, bool], int] = {
    (CriticalKind.MAX, True): -1,
    (CriticalKind.MAX, False): 1,
    (CriticalKind.MIN, True): -1,
    (CriticalKind.MIN, False): 1,
}


def weight_of_critical_point(ring: ScalarRing, kind: CriticalKind, enclosed: Shading) -> Scalar:
    return ring.power(WEIGHT_TABLE[(kind, enclosed is Shading.SHADED)])


@dataclass(frozen=True)
class Opening:
    """Boundary arc of a disc between two consecutive marked points."""
    owner: str
    index: int
    shaded: bool


@dataclass(frozen=True)
class CriticalPoint:
    kind: CriticalKind
    enclosed_shaded: bool
    row: int


@dataclass
class BoundaryComponent:
    """A boundary cycle of a face: openings in walk order with their signs."""
    face: int
    items: Tuple[Tuple[str, int, int], ...]
    outer: bool = False

    @property
    def external_indices(self) -> List[int]:
        return [index for owner, index, _ in self.items if owner == EXTERNAL]


@dataclass
class Face:
    index: int
    shaded: bool
    outer: int = -1
    inner: List[int] = field(default_factory=list)


@dataclass
class Network:
    """A component of strings and discs touching no external point."""
    discs: Tuple[str, ...]
    strands: int
    positive: bool


@dataclass
class TangleGeometry:
    color: int
    shaded: bool
    widths: List[int]
    openings: List[Opening]
    faces: List[Face]
    components: List[BoundaryComponent]
    networks: List[Network]
    critical_points: List[CriticalPoint]
    disc_colors: Dict[str, int]

    @property
    def n_plus(self) -> int:
        return sum(1 for net in self.networks if net.positive)

    @property
    def n_minus(self) -> int:
        return sum(1 for net in self.networks if not net.positive)

    def p_exponent(self, table: Optional[WeightTable] = None) -> int:
        """p(T) = r^exponent."""
        table = table or WEIGHT_TABLE
        return sum(table[(cp.kind, cp.enclosed_shaded)] for cp in self.critical_points)

    def p_of_t(self, ring: ScalarRing, table: Optional[WeightTable] = None) -> Scalar:
        return ring.power(self.p_exponent(table))

    def summary(self) -> Dict[str, int]:
        return {
            "faces": len(self.faces),
            "components": len(self.components),
            "networks": len(self.networks),
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "maxima": sum(1 for cp in self.critical_points if cp.kind is CriticalKind.MAX),
            "minima": sum(1 for cp in self.critical_points if cp.kind is CriticalKind.MIN),
            "p_exponent": self.p_exponent(),
        }


class _UnionFind:
    def __init__(self):
        self.parent: Dict[Hashable, Hashable] = {}

    def add(self, node: Hashable) -> None:
        self.parent.setdefault(node, node)

    def find(self, node: Hashable) -> Hashable:
        self.add(node)
        root = node
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[node] != root:
            self.parent[node], node = root, self.parent[node]
        return root

    def union(self, a: Hashable, b: Hashable) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _check_rows(tangle: Tangle) -> List[int]:
    if tangle.color < 0:
        raise TangleValidationError(f"negative color {tangle.color}")
    if tangle.shaded and tangle.color > 0:
        raise TangleValidationError("only 0-tangles may have a shaded external region")

    seen = set()
    width = tangle.color
    widths = [width]
    for i, row in enumerate(tangle.rows):
        where = i + 1
        if row.kind is RowKind.CUP:
            if not 1 <= row.pos <= width + 1:
                raise TangleValidationError(f"cup at {row.pos} outside width {width}", row=where)
        elif row.kind is RowKind.CAP:
            if not 1 <= row.pos <= width - 1:
                raise TangleValidationError(f"cap at {row.pos} needs strands {row.pos},{row.pos + 1} of {width}", row=where)
        elif row.kind is RowKind.BOX:
            if not row.disc:
                raise TangleValidationError("box without a name", row=where)
            if row.disc in seen or row.disc == EXTERNAL:
                raise TangleValidationError(f"duplicate disc {row.disc!r}", row=where)
            seen.add(row.disc)
            if row.color < 0:
                raise TangleValidationError(f"disc {row.disc!r} has negative color", row=where)
            if row.color == 0:
                if not 1 <= row.pos <= width + 1:
                    raise TangleValidationError(f"0-box at {row.pos} outside width {width}", row=where)
            else:
                if row.pos < 1 or row.pos + row.color - 1 > width:
                    raise TangleValidationError(
                        f"box {row.disc!r} needs strands {row.pos}..{row.pos + row.color - 1} of {width}",
                        row=where,
                    )
                if tangle.is_shaded(row.pos - 1):
                    raise TangleValidationError(
                        f"box {row.disc!r} has its marked region in a shaded gap", row=where
                    )
        width += row.width_change
        widths.append(width)
    if width != tangle.color:
        raise TangleValidationError(
            f"top width {width} does not match color {tangle.color}", row=len(tangle.rows) or None
        )
    return widths


class _BoundaryWalker:
    """Transition map of the boundary walk over states (level, gap, going_up)."""

    def __init__(self, tangle: Tangle, widths: List[int]):
        self.tangle = tangle
        self.widths = widths
        self.top = len(tangle.rows)
        self.n0 = tangle.color

    def _top_opening(self, gap: int) -> Optional[int]:
        if self.n0 == 0:
            return None
        return 2 * self.n0 if gap == 0 else gap

    def _bottom_opening(self, gap: int) -> Optional[int]:
        if gap == 0 or gap == self.n0:
            return None
        return 2 * self.n0 - gap

    def step(self, level: int, gap: int, up: bool):
        """Next state and the opening passed on the way, as (owner, index, sign) or None."""
        if up:
            if level == self.top:
                index = self._top_opening(gap)
                return (level, gap, False), (EXTERNAL, index, 1) if index else None
            return self._up(level, gap)
        if level == 0:
            index = self._bottom_opening(gap)
            return (0, gap, True), (EXTERNAL, index, 1) if index else None
        return self._down(level, gap)

    def _up(self, i: int, j: int):
        row = self.tangle.rows[i]
        pos = row.pos
        if row.kind is RowKind.CUP:
            return ((i + 1, j, True) if j <= pos - 1 else (i + 1, j + 2, True)), None
        if row.kind is RowKind.CAP:
            if j <= pos - 1:
                return (i + 1, j, True), None
            if j == pos:
                return (i, pos, False), None
            if j == pos + 1:
                return (i, pos - 1, False), None
            return (i + 1, j - 2, True), None
        if row.kind is RowKind.BOX and row.color > 0:
            k = row.color
            if pos <= j <= pos + k - 2:
                return (i, j, False), (row.disc, 2 * k + pos - 1 - j, -1)
            if j == pos + k - 1:
                return (i + 1, j, True), (row.disc, k, -1)
        return (i + 1, j, True), None

    def _down(self, level: int, j: int):
        i = level - 1
        row = self.tangle.rows[i]
        pos = row.pos
        if row.kind is RowKind.CUP:
            if j <= pos - 2:
                return (i, j, False), None
            if j == pos - 1:
                return (level, pos + 1, True), None
            if j == pos:
                return (level, pos, True), None
            return (i, j - 2, False), None
        if row.kind is RowKind.CAP:
            return ((i, j, False) if j <= pos - 2 else (i, j + 2, False)), None
        if row.kind is RowKind.BOX and row.color > 0:
            k = row.color
            if j == pos - 1:
                return (i, j, False), (row.disc, 2 * k, -1)
            if pos <= j <= pos + k - 2:
                return (level, j, True), (row.disc, j - pos + 1, -1)
        return (i, j, False), None


def _region_union(tangle: Tangle, widths: List[int]) -> _UnionFind:
    regions = _UnionFind()
    for level, width in enumerate(widths):
        for gap in range(width + 1):
            regions.add((level, gap))
    for i, row in enumerate(tangle.rows):
        below = widths[i]
        pos = row.pos
        for j in range(below + 1):
            if row.kind is RowKind.CUP:
                regions.union((i, j), (i + 1, j if j <= pos - 1 else j + 2))
                if j == pos - 1:
                    regions.union((i, j), (i + 1, pos + 1))
            elif row.kind is RowKind.CAP:
                if j <= pos - 1:
                    regions.union((i, j), (i + 1, j))
                elif j >= pos + 1:
                    regions.union((i, j), (i + 1, j - 2))
            elif row.kind is RowKind.BOX and row.color > 0:
                if j <= pos - 1 or j >= pos + row.color - 1:
                    regions.union((i, j), (i + 1, j))
            else:
                regions.union((i, j), (i + 1, j))
    return regions


def _networks(tangle: Tangle, widths: List[int]) -> List[Network]:
    strings = _UnionFind()
    top = len(tangle.rows)
    for level, width in enumerate(widths):
        for strand in range(1, width + 1):
            strings.add(("s", level, strand))
    topmost_cap: Dict[Tuple[str, int, int], int] = {}
    for i, row in enumerate(tangle.rows):
        pos = row.pos
        below = widths[i]
        if row.kind is RowKind.CUP:
            strings.union(("s", i + 1, pos), ("s", i + 1, pos + 1))
            for x in range(1, below + 1):
                strings.union(("s", i, x), ("s", i + 1, x if x <= pos - 1 else x + 2))
        elif row.kind is RowKind.CAP:
            strings.union(("s", i, pos), ("s", i, pos + 1))
            for x in range(1, below + 1):
                if x <= pos - 1:
                    strings.union(("s", i, x), ("s", i + 1, x))
                elif x >= pos + 2:
                    strings.union(("s", i, x), ("s", i + 1, x - 2))
        elif row.kind is RowKind.BOX:
            node = ("b", row.disc)
            strings.add(node)
            for x in range(1, below + 1):
                if pos <= x <= pos + row.color - 1:
                    strings.union(("s", i, x), node)
                    strings.union(("s", i + 1, x), node)
                else:
                    strings.union(("s", i, x), ("s", i + 1, x))
        else:
            for x in range(1, below + 1):
                strings.union(("s", i, x), ("s", i + 1, x))

    members: Dict[Hashable, List[Hashable]] = {}
    for node in list(strings.parent):
        members.setdefault(strings.find(node), []).append(node)
    for i, row in enumerate(tangle.rows):
        if row.kind is RowKind.CAP:
            topmost_cap[strings.find(("s", i, row.pos))] = i

    networks = []
    for root, nodes in members.items():
        strands = [n for n in nodes if n[0] == "s"]
        if not strands:
            # an isolated 0-disc is not a network
            continue
        if any(n[1] in (0, top) for n in strands):
            continue
        cap_row = topmost_cap[root]
        above_shaded = tangle.is_shaded(tangle.rows[cap_row].pos - 1)
        networks.append(
            Network(
                discs=tuple(sorted(n[1] for n in nodes if n[0] == "b")),
                strands=len(strands),
                positive=not above_shaded,
            )
        )
    networks.sort(key=lambda net: (net.discs, net.strands, net.positive))
    return networks


def validate(tangle: Tangle) -> TangleGeometry:
    """Check a tangle and extract its geometry; raises TangleValidationError naming the row."""
    widths = _check_rows(tangle)
    walker = _BoundaryWalker(tangle, widths)
    regions = _region_union(tangle, widths)

    states = [
        (level, gap, up)
        for level, width in enumerate(widths)
        for gap in range(width + 1)
        for up in (True, False)
    ]
    visited = set()
    cycles: List[Tuple[List[Tuple[int, int, bool]], List[Tuple[str, int, int]]]] = []
    for start in states:
        if start in visited:
            continue
        path, items = [], []
        state = start
        while state not in visited:
            visited.add(state)
            path.append(state)
            state, item = walker.step(*state)
            if item is not None:
                items.append(item)
        if state != start:
            raise TangleValidationError(f"boundary walk from {start} did not close")
        cycles.append((path, items))

    face_ids: Dict[Hashable, int] = {}
    faces: List[Face] = []
    components: List[BoundaryComponent] = []
    face_top: Dict[int, Tuple[int, int]] = {}
    for path, items in cycles:
        level, gap, _ = path[0]
        root = regions.find((level, gap))
        if root not in face_ids:
            face_ids[root] = len(faces)
            faces.append(Face(index=len(faces), shaded=tangle.is_shaded(gap)))
        face = face_ids[root]
        components.append(BoundaryComponent(face=face, items=tuple(items)))
        height = max(state[0] for state in path)
        if face not in face_top or height > face_top[face][0]:
            face_top[face] = (height, len(components) - 1)
    for face in faces:
        face.outer = face_top[face.index][1]
        components[face.outer].outer = True
        face.inner = [c for c, comp in enumerate(components) if comp.face == face.index and c != face.outer]

    openings: List[Opening] = []
    disc_colors: Dict[str, int] = {}
    for comp in components:
        shaded = faces[comp.face].shaded
        for owner, index, _ in comp.items:
            openings.append(Opening(owner, index, shaded))
    for row in tangle.rows:
        if row.kind is RowKind.BOX:
            disc_colors[row.disc] = row.color
    openings.sort(key=lambda o: (o.owner != EXTERNAL, o.owner, o.index))

    critical_points = []
    for i, row in enumerate(tangle.rows):
        if row.kind is RowKind.CUP:
            critical_points.append(CriticalPoint(CriticalKind.MIN, tangle.is_shaded(row.pos), i + 1))
        elif row.kind is RowKind.CAP:
            critical_points.append(CriticalPoint(CriticalKind.MAX, tangle.is_shaded(row.pos), i + 1))

    geometry = TangleGeometry(
        color=tangle.color,
        shaded=tangle.shaded,
        widths=widths,
        openings=openings,
        faces=faces,
        components=components,
        networks=_networks(tangle, widths),
        critical_points=critical_points,
        disc_colors=disc_colors,
    )
    logger.debug(f"Validated tangle of color {tangle.color}: {geometry.summary()}")
    return geometry
