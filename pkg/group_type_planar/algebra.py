"""The filtered *-algebra P = (P_n) spanned by words s in S_2n with mu(s) = e."""

import itertools
import logging
from dataclasses import dataclass, field
from numbers import Rational
from typing import Any, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, TypeVar

import numpy as np
from scipy.linalg import eigvalsh

from group_type_planar.config import ConfigError, EngineSettings, LevelMismatchError
from group_type_planar.groups import GroupContext, Side, Word, side_at
from group_type_planar.scalars import Scalar, ScalarRing

logger = logging.getLogger(__name__)

T = TypeVar("T")


class AlgebraElement:
    """A sparse linear combination of basis words of one level."""

    __slots__ = ("algebra", "level", "terms")

    def __init__(self, algebra: "PlanarAlgebra", level: int, terms: Mapping[Word, Scalar]):
        self.algebra = algebra
        self.level = level
        self.terms: Dict[Word, Scalar] = {w: c for w, c in terms.items() if c}

    def _check_level(self, other: "AlgebraElement") -> None:
        if other.level != self.level:
            raise LevelMismatchError(f"levels {self.level} and {other.level} differ")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check_level(other)
        terms = dict(self.terms)
        for word, coeff in other.terms.items():
            terms[word] = terms[word] + coeff if word in terms else coeff
        return AlgebraElement(self.algebra, self.level, terms)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.level, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.level, {w: c * factor for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra.mult(self, other)
        if isinstance(other, (Scalar, int, Rational)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Rational)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (Scalar, int, Rational)):
            return AlgebraElement(self.algebra, self.level, {w: c / other for w, c in self.terms.items()})
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.level == other.level and self.terms == other.terms

    def __hash__(self):
        return hash((self.level, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, word: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(word), self.algebra.ring.zero)

    def words(self) -> List[Word]:
        return sorted(self.terms)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for word in self.words():
            coeff = self.terms[word].to_text()
            if " " in coeff:
                coeff = f"({coeff})"
            parts.append(f"{coeff} * {self.algebra.ctx.format_word(word)}")
        return " + ".join(parts)

    def to_dict(self) -> Dict[str, Any]:
        ctx = self.algebra.ctx
        return {
            "level": self.level,
            "terms": [
                {
                    "word": [ctx.factor(side_at(i)).name(a) for i, a in enumerate(word)],
                    "coeff": self.terms[word].to_dict(),
                }
                for word in self.words()
            ],
        }

    def __repr__(self) -> str:
        return f"AlgebraElement(level={self.level}, {self.to_text()})"


@dataclass
class BiprojectionReport:
    """Outcome of the checks on q = (e,e,e,e) in P_2."""

    checks: Dict[str, bool] = field(default_factory=dict)
    p1_dimension: int = 0
    centralizer_dimension: int = 0

    @property
    def passed(self) -> bool:
        return all(self.checks.values()) and self.centralizer_dimension == 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "checks": dict(self.checks),
            "p1_dimension": self.p1_dimension,
            "centralizer_dimension": self.centralizer_dimension,
            "passed": self.passed,
        }


def exact_rank(rows: Iterable[Mapping[Hashable, Scalar]]) -> int:
    """Rank of sparse rows over the scalar field by Gaussian elimination."""
    pivots: Dict[Hashable, Dict[Hashable, Scalar]] = {}
    for row in rows:
        current = {k: v for k, v in row.items() if v}
        for key, pivot_row in pivots.items():
            coeff = current.get(key)
            if coeff:
                for k, v in pivot_row.items():
                    value = current[k] - coeff * v if k in current else -(coeff * v)
                    if value:
                        current[k] = value
                    else:
                        current.pop(k, None)
        if current:
            key = min(current)
            lead = current[key]
            pivots[key] = {k: v / lead for k, v in current.items()}
    return len(pivots)


def sample_tuples(items: Sequence[T], arity: int, limit: int, seed: int = 0) -> Iterator[Tuple[T, ...]]:
    """Every arity-tuple of items when there are at most limit of them, else limit seeded draws."""
    if len(items) ** arity <= limit:
        yield from itertools.product(items, repeat=arity)
        return
    rng = np.random.default_rng(seed)
    for row in rng.integers(0, len(items), size=(limit, arity)):
        yield tuple(items[int(i)] for i in row)


class PlanarAlgebra:
    """Structural operations on P_n given by closed formulas on basis words."""

    def __init__(self, ctx: GroupContext, settings: Optional[EngineSettings] = None):
        self.ctx = ctx
        self.settings = settings or EngineSettings()
        self.ring = ScalarRing(ctx.m)
        self.delta = self.ring.delta(ctx.K.order)
        self._evaluator = None

    # construction

    def element(self, level: int, terms: Mapping[Word, Any]) -> AlgebraElement:
        converted = {}
        for word, coeff in terms.items():
            converted[tuple(word)] = coeff if isinstance(coeff, Scalar) else self.ring.rational(coeff)
        return AlgebraElement(self, level, converted)

    def zero(self, level: int) -> AlgebraElement:
        return AlgebraElement(self, level, {})

    def scalar_element(self, value) -> AlgebraElement:
        """value * () in P_0."""
        return self.element(0, {(): value})

    def basis_element(self, word: Sequence[int]) -> AlgebraElement:
        word = tuple(word)
        if not self.ctx.is_basis_word(word):
            raise ConfigError(f"{self.ctx.format_word(word)} is not a basis word (mu != e or odd length)")
        return AlgebraElement(self, len(word) // 2, {word: self.ring.one})

    def basis(self, n: int) -> List[AlgebraElement]:
        return [AlgebraElement(self, n, {w: self.ring.one}) for w in self.ctx.enumerate_basis(n)]

    def _letter_group(self, position: int):
        return self.ctx.factor(side_at(position))

    def _e(self, position: int) -> int:
        return self._letter_group(position).identity

    # structure

    def identity(self, n: int) -> AlgebraElement:
        """1 in P_n: sum over s in S_{n-1} of (s, e, ~s, e)."""
        if n == 0:
            return self.scalar_element(1)
        h_e = self.ctx.H.identity
        terms = {}
        for s in self.ctx.words(n - 1):
            terms[s + (self._e(n - 1),) + self.ctx.tilde(s) + (h_e,)] = self.ring.one
        return AlgebraElement(self, n, terms)

    def star_word(self, word: Word) -> Word:
        n2 = len(word)
        if n2 == 0:
            return ()
        body = tuple(self._letter_group(i).inv(word[n2 - 2 - i]) for i in range(n2 - 1))
        return body + (self.ctx.H.inv(word[-1]),)

    def star(self, x: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(
            self, x.level, {self.star_word(w): c.conjugate() for w, c in x.terms.items()}
        )

    def mult_words(self, w1: Word, w2: Word) -> Optional[Word]:
        """(a1, l1, b1, h1)(a2, l2, b2, h2) = [b1 = ~a2] (a1, l1 l2, b2, h2 h1)."""
        n = len(w1) // 2
        if n == 0:
            return ()
        a1, l1, b1, h1 = w1[: n - 1], w1[n - 1], w1[n: 2 * n - 1], w1[2 * n - 1]
        a2, l2, b2, h2 = w2[: n - 1], w2[n - 1], w2[n: 2 * n - 1], w2[2 * n - 1]
        if b1 != self.ctx.tilde(a2):
            return None
        middle = self._letter_group(n - 1).mul(l1, l2)
        return a1 + (middle,) + b2 + (self.ctx.H.mul(h2, h1),)

    def mult(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        x._check_level(y)
        n = x.level
        # index y by ~a2 so each x term only meets matching y terms
        by_head: Dict[Word, List] = {}
        for w2, c2 in y.terms.items():
            key = self.ctx.tilde(w2[: n - 1]) if n else ()
            by_head.setdefault(key, []).append((w2, c2))
        terms: Dict[Word, Scalar] = {}
        for w1, c1 in x.terms.items():
            key = w1[n: 2 * n - 1] if n else ()
            for w2, c2 in by_head.get(key, ()):
                word = self.mult_words(w1, w2)
                coeff = c1 * c2
                terms[word] = terms[word] + coeff if word in terms else coeff
        return AlgebraElement(self, n, terms)

    def include(self, x: AlgebraElement) -> AlgebraElement:
        """P_n -> P_{n+1}, replacing s_n by (l1, e, l2) over all l1 l2 = s_n."""
        n = x.level
        if n == 0:
            return self.identity(1).scale(x.coefficient(()))
        group = self._letter_group(n - 1)
        e_mid = self._e(n)
        terms: Dict[Word, Scalar] = {}
        for word, coeff in x.terms.items():
            s_n = word[n - 1]
            for l1 in group.elements:
                l2 = group.mul(group.inv(l1), s_n)
                new = word[: n - 1] + (l1, e_mid, l2) + word[n:]
                terms[new] = terms[new] + coeff if new in terms else coeff
        return AlgebraElement(self, n + 1, terms)

    def include_to(self, x: AlgebraElement, level: int) -> AlgebraElement:
        if level < x.level:
            raise LevelMismatchError(f"cannot include level {x.level} into level {level}")
        while x.level < level:
            x = self.include(x)
        return x

    def jones(self, n: int) -> AlgebraElement:
        """Value of the n-th Jones projection tangle in P_{n+1}; equals delta * e_n."""
        if n < 1:
            raise LevelMismatchError(f"jones(n) needs n >= 1, got {n}")
        ctx = self.ctx
        terms: Dict[Word, Scalar] = {}
        if n == 1:
            coeff = self.ring.sqrt_ratio(ctx.K.order, ctx.H.order)
            k_e = ctx.K.identity
            for h in ctx.H.elements:
                terms[(k_e, h, k_e, ctx.H.inv(h))] = coeff
            return AlgebraElement(self, 2, terms)
        group = ctx.L(n)
        coeff = self.ring.sqrt_ratio(ctx.L(n - 1).order, group.order)
        e_other = self._e(n - 1)
        h_e = ctx.H.identity
        for s in ctx.words(n - 2):
            tail = ctx.tilde(s) + (h_e,)
            for l1 in group.elements:
                for l2 in group.elements:
                    l3 = group.inv(group.mul(l1, l2))
                    terms[s + (l1, e_other, l2, e_other, l3) + tail] = coeff
        return AlgebraElement(self, n + 1, terms)

    def jones_projection(self, n: int) -> AlgebraElement:
        """e_n = jones(n) / delta."""
        return self.jones(n) / self.delta

    def tl_generator(self, i: int, level: int) -> AlgebraElement:
        """e_i included into P_level."""
        return self.include_to(self.jones_projection(i), level)

    def cond_exp_right(self, x: AlgebraElement) -> AlgebraElement:
        """Tangle value P_{n+1} -> P_n; delta times the trace-preserving expectation."""
        level = x.level
        if level < 1:
            raise LevelMismatchError("cond_exp_right needs level >= 1")
        terms: Dict[Word, Scalar] = {}
        if level == 1:
            k_e, h_e = self.ctx.K.identity, self.ctx.H.identity
            coeff = x.coefficient((k_e, h_e))
            return self.scalar_element(coeff * self.delta)
        n = level - 1
        factor = self.ring.sqrt_ratio(self.ctx.L(n).order, self.ctx.L(n - 1).order)
        group = self._letter_group(n - 1)
        l_e = self._e(n)
        for word, coeff in x.terms.items():
            if word[n] != l_e:
                continue
            merged = group.mul(word[n - 1], word[n + 1])
            new = word[: n - 1] + (merged,) + word[n + 2: 2 * n + 1] + (word[2 * n + 1],)
            value = coeff * factor
            terms[new] = terms[new] + value if new in terms else value
        return AlgebraElement(self, n, terms)

    def cond_exp_left(self, x: AlgebraElement) -> AlgebraElement:
        """Tangle value P_n -> P_{1,n}; for n = 1 the result lies in the shaded P_0."""
        n = x.level
        if n < 1:
            raise LevelMismatchError("cond_exp_left needs level >= 1")
        K, H = self.ctx.K, self.ctx.H
        if n == 1:
            return self.scalar_element(x.coefficient((K.identity, H.identity)) * self.delta)
        factor = self.ring.sqrt_ratio(H.order, K.order)
        terms: Dict[Word, Scalar] = {}
        for word, coeff in x.terms.items():
            if word[-1] != H.identity:
                continue
            k1, middle, k2 = word[0], word[1: 2 * n - 2], word[2 * n - 2]
            target = K.mul(k2, k1)
            value = coeff * factor
            for k_prime in K.elements:
                k_second = K.mul(target, K.inv(k_prime))
                new = (k_prime,) + middle + (k_second, H.identity)
                terms[new] = terms[new] + value if new in terms else value
        return AlgebraElement(self, n, terms)

    def expect_right(self, x: AlgebraElement) -> AlgebraElement:
        return self.cond_exp_right(x) / self.delta

    def expect_left(self, x: AlgebraElement) -> AlgebraElement:
        return self.cond_exp_left(x) / self.delta

    # trace and positivity

    def trace(self, x: AlgebraElement) -> Scalar:
        """Normalized Markov trace: iterated right expectations down to P_0."""
        value = x
        while value.level > 0:
            value = self.expect_right(value)
        result = value.coefficient(())
        if self.settings.debug_checks and x.level > 0:
            left = self.left_trace(x)
            assert left == result, f"left trace {left} != right trace {result}"
        return result

    @property
    def evaluator(self):
        if self._evaluator is None:
            from group_type_planar.statesum import StateSumEvaluator
            self._evaluator = StateSumEvaluator(self)
        return self._evaluator

    def left_trace(self, x: AlgebraElement) -> Scalar:
        """Trace computed by closing every strand on the left through the state sum."""
        if x.level == 0:
            return x.coefficient(())
        from group_type_planar.tangles.library import left_closure

        value = self.evaluator.evaluate_linear(left_closure(x.level), {"D1": x})
        return value.coefficient(()) / self.delta ** x.level

    def inner(self, x: AlgebraElement, y: AlgebraElement) -> Scalar:
        return self.trace(self.mult(self.star(y), x))

    def gram(self, n: int) -> List[List[Scalar]]:
        basis = self.ctx.enumerate_basis(n)
        matrix = []
        for bi in basis:
            row = []
            for bj in basis:
                product = self.mult_words(self.star_word(bj), bi)
                if product is None:
                    row.append(self.ring.zero)
                else:
                    row.append(self.trace(AlgebraElement(self, n, {product: self.ring.one})))
            matrix.append(row)
        return matrix

    def gram_eigenvalues(self, n: int) -> np.ndarray:
        matrix = np.array([[c.to_float() for c in row] for row in self.gram(n)], dtype=float)
        if matrix.size == 0:
            return np.zeros(0)
        return eigvalsh(matrix)

    # biprojection

    def biprojection(self) -> AlgebraElement:
        return AlgebraElement(self, 2, {self.ctx.identity_word(4): self.ring.one})

    def biprojection_checks(self) -> BiprojectionReport:
        q = self.biprojection()
        e1 = self.jones_projection(1)
        report = BiprojectionReport()
        report.checks["self_adjoint"] = self.star(q) == q
        report.checks["idempotent"] = self.mult(q, q) == q
        report.checks["absorbs_e1"] = self.mult(q, e1) == e1
        report.checks["expectation"] = self.expect_right(q) == self.identity(1) / self.ctx.K.order

        p1 = self.basis(1)
        included = [self.include(b) for b in p1]
        commutators = [(self.mult(q, x) - self.mult(x, q)).terms for x in included]
        report.p1_dimension = len(p1)
        report.centralizer_dimension = len(p1) - exact_rank(commutators)
        logger.info(
            f"Biprojection checks in {self.ctx.name!r}: {report.checks}, "
            f"centralizer dimension {report.centralizer_dimension}"
        )
        return report

    # intermediate subfactors

    def fixed_point_words(self, n: int, side: Side) -> List[Word]:
        """Basis words of P_n whose letters on one side are all e."""
        e = self.ctx.factor(side).identity
        return [
            w for w in self.ctx.enumerate_basis(n)
            if all(a == e for i, a in enumerate(w) if side_at(i) is side)
        ]
