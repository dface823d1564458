"""Structural and elementary tangles in canonical slice form."""

import logging
from typing import Callable, Dict, Sequence, Tuple, Union

from group_type_planar.config import ElementaryFamily, TangleKind, TangleValidationError
from group_type_planar.tangles.model import Row, Tangle

logger = logging.getLogger(__name__)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise TangleValidationError(message)


def identity_tangle(n: int) -> Tangle:
    """n vertical strands, no discs."""
    _require(n >= 0, f"identity needs n >= 0, got {n}")
    return Tangle(n)


def annular_identity(n: int, shaded: bool = False) -> Tangle:
    """A single disc D1 wired straight to the external points."""
    _require(n >= 0, f"annular identity needs n >= 0, got {n}")
    return Tangle(n, (Row.box("D1", n, 1),), shaded and n == 0)


def multiplication(n: int) -> Tangle:
    """D1 stacked on D2; evaluates to the product D1 * D2."""
    _require(n >= 0, f"multiplication needs n >= 0, got {n}")
    return Tangle(n, (Row.box("D2", n, 1), Row.box("D1", n, 1)))


def inclusion(n: int) -> Tangle:
    """P_n -> P_{n+1}: a through-string on the right of D1."""
    _require(n >= 0, f"inclusion needs n >= 0, got {n}")
    return Tangle(n + 1, (Row.box("D1", n, 1),))


def jones(n: int) -> Tangle:
    """The n-th Jones projection tangle in P_{n+1}."""
    _require(n >= 1, f"jones needs n >= 1, got {n}")
    return Tangle(n + 1, (Row.cap(n), Row.cup(n)))


def cond_exp_right(n: int) -> Tangle:
    """P_{n+1} -> P_n: close the last strand of D1 on the right."""
    _require(n >= 0, f"cond_exp_right needs n >= 0, got {n}")
    return Tangle(n, (Row.cup(n + 1), Row.box("D1", n + 1, 1), Row.cap(n + 1)))


def cond_exp_left(n: int) -> Tangle:
    """P_n -> P_{1,n}: close the first strand of D1 on the left, inside a through-string."""
    _require(n >= 1, f"cond_exp_left needs n >= 1, got {n}")
    if n == 1:
        return Tangle(0, (Row.cup(1), Row.box("D1", 1, 2), Row.cap(1)), shaded=True)
    return Tangle(n, (Row.cup(2), Row.box("D1", n, 3), Row.cap(2)))


def _nested_cups(n: int) -> Tuple[Row, ...]:
    return tuple(Row.cup(k) for k in range(1, n + 1))


def _nested_caps(n: int) -> Tuple[Row, ...]:
    return tuple(Row.cap(k) for k in range(n, 0, -1))


def loop(shaded: bool = False) -> Tangle:
    """A closed string as a 0-tangle."""
    return Tangle(0, (Row.cup(1), Row.cap(1)), shaded)


def closure(n: int) -> Tangle:
    """Close every strand of D1 on the right; an unshaded 0-tangle."""
    _require(n >= 0, f"closure needs n >= 0, got {n}")
    return Tangle(0, _nested_cups(n) + (Row.box("D1", n, 1),) + _nested_caps(n))


def left_closure(n: int) -> Tangle:
    """Close every strand of D1 on the left; shaded when n is odd."""
    _require(n >= 0, f"left closure needs n >= 0, got {n}")
    return Tangle(
        0,
        _nested_cups(n) + (Row.box("D1", n, n + 1),) + _nested_caps(n),
        shaded=n % 2 == 1,
    )


STRUCTURAL: Dict[TangleKind, Callable[[int], Tangle]] = {
    TangleKind.IDENTITY: identity_tangle,
    TangleKind.ANNULAR_IDENTITY: annular_identity,
    TangleKind.MULTIPLICATION: multiplication,
    TangleKind.INCLUSION: inclusion,
    TangleKind.JONES: jones,
    TangleKind.COND_EXP_RIGHT: cond_exp_right,
    TangleKind.COND_EXP_LEFT: cond_exp_left,
    TangleKind.CLOSURE: closure,
    TangleKind.LEFT_CLOSURE: left_closure,
}


def structural_tangle(kind: Union[TangleKind, str], n: int) -> Tangle:
    return STRUCTURAL[TangleKind(kind)](n)


# elementary tangles


def capping(n: int, i: int) -> Tangle:
    """An n-disc inside an (n-1)-tangle with its marked points i and i+1 joined."""
    _require(n >= 1 and 1 <= i <= 2 * n - 1, f"capping needs 1 <= i <= 2n-1, got n={n}, i={i}")
    box = Row.box("D1", n, 1)
    if i < n:
        rows = (Row.cup(n), box, Row.cap(i))
    elif i == n:
        rows = (Row.cup(n), box, Row.cap(n))
    else:
        rows = (Row.cup(2 * n - i), box, Row.cap(n))
    return Tangle(n - 1, rows)


def cap_inclusion(n: int, i: int) -> Tangle:
    """An n-disc inside an (n+1)-tangle with a new string joining external points i and i+1."""
    _require(n >= 0 and 1 <= i <= 2 * n + 1, f"cap inclusion needs 1 <= i <= 2n+1, got n={n}, i={i}")
    box = Row.box("D1", n, 1)
    if i <= n:
        rows = (box, Row.cap(n), Row.cup(i))
    elif i == n + 1:
        rows = (box,)
    else:
        rows = (Row.cap(2 * n + 2 - i), Row.cup(n), box)
    return Tangle(n + 1, rows)


def left_inclusion(n: int) -> Tangle:
    """P_n -> P_{n+2}: two through-strings on the left of D1."""
    _require(n >= 0, f"left inclusion needs n >= 0, got {n}")
    return Tangle(n + 2, (Row.box("D1", n, 3),))


def disc_inclusion(p: int, q: int, r: int, prime: bool = False) -> Tangle:
    """D2 of color q acting on strands p+1..p+q of D1 of color p+q+r; p must be even."""
    _require(min(p, q, r) >= 0 and p % 2 == 0, f"disc inclusion needs p even and p, q, r >= 0, got {(p, q, r)}")
    n = p + q + r
    outer = Row.box("D1", n, 1)
    inner = Row.box("D2", q, p + 1)
    rows = (inner, outer) if prime else (outer, inner)
    return Tangle(n, rows)


def elementary_tangle(
    family: Union[ElementaryFamily, str], n: int = 0, i: int = 0, pqr: Sequence[int] = ()
) -> Tangle:
    family = ElementaryFamily(family)
    if family is ElementaryFamily.CAPPING:
        return capping(n, i)
    if family is ElementaryFamily.CAP_INCLUSION:
        return cap_inclusion(n, i)
    if family is ElementaryFamily.LEFT_INCLUSION:
        return left_inclusion(n)
    _require(len(pqr) == 3, f"disc inclusion needs (p, q, r), got {tuple(pqr)}")
    return disc_inclusion(*pqr, prime=family is ElementaryFamily.DISC_INCLUSION_PRIME)


def elementary_parameters(family: ElementaryFamily, n: int):
    """Every legal parameter set of a family at color n (total color for disc inclusions)."""
    if family is ElementaryFamily.CAPPING:
        return [dict(n=n, i=i) for i in range(1, 2 * n)] if n >= 1 else []
    if family is ElementaryFamily.CAP_INCLUSION:
        return [dict(n=n, i=i) for i in range(1, 2 * n + 2)]
    if family is ElementaryFamily.LEFT_INCLUSION:
        return [dict(n=n)]
    return [
        dict(pqr=(p, q, n - p - q))
        for p in range(0, n + 1, 2)
        for q in range(0, n - p + 1)
    ]
