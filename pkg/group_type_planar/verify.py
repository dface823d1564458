"""Verification suites: every check is swept over basis inputs and folded into a report."""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from group_type_planar.algebra import PlanarAlgebra, sample_tuples
from group_type_planar.commutants import CommutantModel
from group_type_planar.config import (
    ElementaryFamily,
    EngineSettings,
    PlanarAlgebraError,
    SuiteName,
    TangleValidationError,
)
from group_type_planar.groups import Side, Word, side_at
from group_type_planar.statesum import StateSumEvaluator, calibrate_critical_weights
from group_type_planar.tangles import library
from group_type_planar.tangles.geometry import WEIGHT_TABLE
from group_type_planar.tangles.model import Tangle, compose
from group_type_planar.tangles.text_format import to_text

logger = logging.getLogger(__name__)

Detail = Union[str, Callable[[], str]]


@dataclass
class CheckResult:
    """One named property, swept over many cases."""

    name: str
    passed: bool = True
    cases: int = 0
    counterexample: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "counterexample": self.counterexample,
        }


@dataclass
class SuiteReport:
    suite: str
    context: str
    checks: Dict[str, CheckResult] = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks.values())

    def record(self, name: str, ok: bool, detail: Detail = "") -> None:
        check = self.checks.setdefault(name, CheckResult(name))
        check.cases += 1
        if not ok and check.passed:
            check.passed = False
            check.counterexample = detail() if callable(detail) else detail
            logger.warning(f"[{self.suite}] {name} failed: {check.counterexample}")

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks.values() if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "context": self.context,
            "passed": self.passed,
            "error": self.error,
            "checks": [c.to_dict() for c in self.checks.values()],
        }


def _sample_product(lists: Sequence[Sequence], limit: int, seed: int) -> Iterator[Tuple]:
    """The full product of lists when small enough, else limit seeded draws."""
    total = 1
    for items in lists:
        total *= len(items)
    if total <= limit:
        yield from itertools.product(*lists)
        return
    rng = np.random.default_rng(seed)
    for _ in range(limit):
        yield tuple(items[int(rng.integers(len(items)))] for items in lists)


class VerificationRunner:
    """Runs the named suites against one context."""

    def __init__(self, algebra: PlanarAlgebra, settings: Optional[EngineSettings] = None):
        self.algebra = algebra
        self.ctx = algebra.ctx
        self.settings = settings or algebra.settings
        self.model = CommutantModel(algebra)
        self.evaluator: StateSumEvaluator = algebra.evaluator

    def run(self, suite: Union[SuiteName, str] = SuiteName.ALL) -> List[SuiteReport]:
        suite = SuiteName(suite)
        if suite is SuiteName.ALL:
            names = [s for s in SuiteName if s is not SuiteName.ALL]
        else:
            names = [suite]
        return [self.run_one(name) for name in names]

    def run_one(self, suite: SuiteName) -> SuiteReport:
        report = SuiteReport(suite.value, self.ctx.name)
        handler = getattr(self, f"_suite_{suite.value}")
        logger.info(f"Running suite {suite.value} on {self.ctx.name!r} up to level {self.settings.max_level}")
        try:
            handler(report)
        except PlanarAlgebraError as e:
            logger.error(f"Suite {suite.value} stopped: {e}")
            report.error = str(e)
        logger.info(f"Suite {suite.value}: {'passed' if report.passed else 'FAILED'}")
        return report

    @property
    def _delta_inv2(self):
        return self.algebra.ring.rational(Fraction(1, self.ctx.delta_squared))

    def _words(self, n: int) -> List[Word]:
        return self.ctx.enumerate_basis(n)

    def _pairs(self, items: Sequence, arity: int = 2):
        return sample_tuples(items, arity, self.settings.sample_size, self.settings.seed)

    # suites

    def _suite_tl(self, report: SuiteReport) -> None:
        A = self.algebra
        top = self.settings.max_level
        for level in range(2, top + 1):
            gens = {i: A.tl_generator(i, level) for i in range(1, level)}
            for i, e in gens.items():
                where = f"e_{i} in P_{level}"
                report.record("idempotent", A.mult(e, e) == e, where)
                report.record("self_adjoint", A.star(e) == e, where)
                report.record("markov_trace", A.trace(e) == self._delta_inv2, where)
                for j, f in gens.items():
                    if abs(i - j) == 1:
                        ok = A.mult(A.mult(e, f), e) == e.scale(self._delta_inv2)
                        report.record("tl_relation", ok, f"i={i}, j={j} in P_{level}")
                    elif abs(i - j) >= 2:
                        report.record("far_commutation", A.mult(e, f) == A.mult(f, e), f"i={i}, j={j} in P_{level}")

        for n in range(1, top + 1):
            for (word,) in self._pairs(self._words(n), 1):
                x = A.basis_element(word)
                report.record(
                    "left_trace", A.left_trace(x) == A.trace(x), lambda: self.ctx.format_word(word)
                )

        # the same relations for the e_n living in the commutant tower
        M = self.model
        for level in range(1, top):
            gens = {i: M.tl_generator(i, level) for i in range(1, level + 1)}
            for i, e in gens.items():
                where = f"e_{i} in N'∩M_{level}"
                report.record("commutant_idempotent", e * e == e, where)
                report.record("commutant_markov_trace", M.trace_Mn(e) == self._delta_inv2, where)
                for j, f in gens.items():
                    if abs(i - j) == 1:
                        report.record("commutant_tl_relation", e * f * e == e.scale(self._delta_inv2), where)
                    elif abs(i - j) >= 2:
                        report.record("commutant_far_commutation", e * f == f * e, where)

    def _suite_assoc(self, report: SuiteReport) -> None:
        A = self.algebra
        top = self.settings.max_level
        for n in range(top + 1):
            elements = A.basis(n)
            for x, y, z in self._pairs(elements, 3):
                ok = A.mult(A.mult(x, y), z) == A.mult(x, A.mult(y, z))
                report.record("associative", ok, lambda: f"{x.to_text()} | {y.to_text()} | {z.to_text()}")
            for x, y in self._pairs(elements, 2):
                ok = A.star(A.mult(x, y)) == A.mult(A.star(y), A.star(x))
                report.record("star_antimultiplicative", ok, lambda: f"{x.to_text()} | {y.to_text()}")
                if n < top:
                    ok = A.include(A.mult(x, y)) == A.mult(A.include(x), A.include(y))
                    report.record("include_multiplicative", ok, lambda: f"{x.to_text()} | {y.to_text()}")
            for x in elements:
                report.record("star_involution", A.star(A.star(x)) == x, lambda: x.to_text())
                if n < top:
                    report.record("expectation_of_include", A.expect_right(A.include(x)) == x, lambda: x.to_text())

        for n in range(top):
            elements = self.model.basis(n)
            for x, y, z in self._pairs(elements, 3):
                report.record(
                    "commutant_associative",
                    (x * y) * z == x * (y * z),
                    lambda: f"{x.to_text()} | {y.to_text()} | {z.to_text()}",
                )
            for x in elements:
                star = self.model.comm_star
                report.record("commutant_star_involution", star(star(x)) == x, lambda: x.to_text())

    def _suite_statesum(self, report: SuiteReport) -> None:
        A = self.algebra
        Z = self.evaluator.evaluate
        top = self.settings.max_level

        delta = A.scalar_element(A.delta)
        for shaded in (False, True):
            report.record("loop", Z(library.loop(shaded)) == delta, f"shaded={shaded}")

        for n in range(top + 1):
            report.record("identity", Z(library.identity_tangle(n)) == A.identity(n), f"n={n}")
            words = self._words(n)
            for w in words:
                x = A.basis_element(w)
                where = lambda: f"n={n}, D1={self.ctx.format_word(w)}"
                report.record("annular_identity", Z(library.annular_identity(n), {"D1": w}) == x, where)
                closed = Z(library.closure(n), {"D1": w}).coefficient(())
                report.record("closure_trace", closed / A.delta ** n == A.trace(x), where)
                if n < top:
                    report.record("inclusion", Z(library.inclusion(n), {"D1": w}) == A.include(x), where)
                if n >= 1:
                    ok = Z(library.cond_exp_left(n), {"D1": w}) == A.cond_exp_left(x)
                    report.record("cond_exp_left", ok, where)
                    ok = Z(library.cond_exp_right(n - 1), {"D1": w}) == A.cond_exp_right(x)
                    report.record("cond_exp_right", ok, where)
            for w1, w2 in self._pairs(words, 2):
                ok = Z(library.multiplication(n), {"D1": w1, "D2": w2}) == A.mult(
                    A.basis_element(w1), A.basis_element(w2)
                )
                report.record(
                    "multiplication",
                    ok,
                    lambda: f"D1={self.ctx.format_word(w1)}, D2={self.ctx.format_word(w2)}",
                )
            if 1 <= n < top:
                report.record("jones", Z(library.jones(n)) == A.jones(n), f"n={n}")

    # composition

    def _elementary(self, top: int) -> List[Tangle]:
        tangles = []
        for family in ElementaryFamily:
            for n in range(top + 1):
                for params in library.elementary_parameters(family, n):
                    tangles.append(library.elementary_tangle(family, **params))
        return tangles

    def _fillers(self, color: int, elementary: Sequence[Tangle]) -> List[Tangle]:
        fillers = [
            library.identity_tangle(color),
            library.annular_identity(color),
            library.multiplication(color),
            library.cond_exp_right(color),
        ]
        if color == 0:
            fillers += [library.closure(1), library.left_closure(1), library.cond_exp_left(1)]
        if color >= 1:
            fillers.append(library.inclusion(color - 1))
        if color >= 2:
            fillers += [library.jones(color - 1), library.cond_exp_left(color)]
        return fillers + [t for t in elementary if t.color == color]

    def _suite_compose(self, report: SuiteReport) -> None:
        top = min(self.settings.max_level, self.settings.compose_max_level)
        elementary = self._elementary(top)
        outers = elementary + [library.multiplication(c) for c in range(top + 1)]
        for outer in outers:
            for disc, row in sorted(outer.boxes.items()):
                for inner in self._fillers(row.color, elementary):
                    self._compose_case(report, outer, disc, inner)

    def _compose_case(self, report: SuiteReport, outer: Tangle, disc: str, inner: Tangle) -> None:
        try:
            compose(outer, disc, inner)
        except TangleValidationError as e:
            logger.debug(f"Skipping composition into {disc}: {e}")
            return
        outer_discs = sorted(d for d in outer.boxes if d != disc)
        inner_discs = sorted(inner.boxes)
        lists = [self._words(outer.boxes[d].color) for d in outer_discs]
        lists += [self._words(inner.boxes[d].color) for d in inner_discs]
        for labels in _sample_product(lists, self.settings.compose_sample_size, self.settings.seed):
            outer_inputs = dict(zip(outer_discs, labels[: len(outer_discs)]))
            inner_inputs = dict(zip(inner_discs, labels[len(outer_discs):]))
            outcome = self.evaluator.composition_check(outer, disc, inner, outer_inputs, inner_inputs)
            report.record(
                "composition",
                outcome.ok,
                lambda: (
                    f"outer:\n{to_text(outer)}into {disc}, inner:\n{to_text(inner)}"
                    f"labels {outer_inputs} / {inner_inputs}: {outcome.counterexample()}"
                ),
            )

    def _suite_iso(self, report: SuiteReport) -> None:
        for n in range(self.settings.max_level):
            iso = self.model.verify_iso(n)
            report.record(f"psi_{n}.dimension", iso.basis_size == iso.dimension, f"{iso.basis_size} != {iso.dimension}")
            for name, ok in iso.checks.items():
                report.record(f"psi_{n}.{name}", ok, iso.counterexamples.get(name, ""))

    def _suite_biproj(self, report: SuiteReport) -> None:
        result = self.algebra.biprojection_checks()
        for name, ok in result.checks.items():
            report.record(name, ok, "q = (e,e,e,e)")
        report.record(
            "centralizer_dimension",
            result.centralizer_dimension == 1,
            f"centralizer of q in P_1 has dimension {result.centralizer_dimension}",
        )

    def _suite_gram(self, report: SuiteReport) -> None:
        A = self.algebra
        for n in range(self.settings.max_level + 1):
            matrix = A.gram(n)
            hermitian = all(
                matrix[i][j] == matrix[j][i].conjugate() for i in range(len(matrix)) for j in range(i)
            )
            report.record("hermitian", hermitian, f"n={n}")
            eigenvalues = A.gram_eigenvalues(n)
            lowest = float(eigenvalues.min()) if eigenvalues.size else 0.0
            report.record(
                "positive_semidefinite",
                lowest >= -self.settings.gram_tolerance,
                f"n={n}: smallest eigenvalue {lowest:.3e}",
            )

    def _suite_intermediate(self, report: SuiteReport) -> None:
        A = self.algebra
        for side in (Side.K, Side.H):
            sub = self.ctx.with_trivial(side)
            e = self.ctx.factor(side).identity
            for n in range(self.settings.max_level + 1):
                fixed = A.fixed_point_words(n, side)
                lifted = {
                    tuple(e if side_at(i) is side else a for i, a in enumerate(w))
                    for w in sub.enumerate_basis(n)
                }
                report.record(
                    f"range_{side.value}_trivial",
                    set(fixed) == lifted,
                    f"n={n}: {len(fixed)} fixed-point words against {len(lifted)} words with {side.value} = 1",
                )
                span = set(fixed)
                for w1, w2 in self._pairs(fixed, 2):
                    product = A.mult_words(w1, w2)
                    report.record(
                        f"closed_{side.value}_trivial",
                        product is None or product in span,
                        lambda: f"{self.ctx.format_word(w1)} * {self.ctx.format_word(w2)}",
                    )
                for w in fixed:
                    report.record(f"closed_{side.value}_trivial", A.star_word(w) in span, lambda: self.ctx.format_word(w))

    def _suite_calibration(self, report: SuiteReport) -> None:
        survivors = calibrate_critical_weights(self.algebra)
        described = lambda: "; ".join(_describe_table(t) for t in survivors) or "none"
        report.record("nonempty", bool(survivors), described)
        report.record("frozen_table_survives", dict(WEIGHT_TABLE) in survivors, described)
        if self.ctx.H.order != self.ctx.K.order:
            report.record("unique", len(survivors) == 1, described)


def _describe_table(table: Mapping) -> str:
    return ", ".join(
        f"{kind.value}/{'shaded' if shaded else 'unshaded'}: r^{exponent}"
        for (kind, shaded), exponent in table.items()
    )
