"""State-sum evaluation of labelled tangles.

With every internal disc labelled, a state is fixed by its external word s0, so
each s0 has state count 0 or 1. The admissible s0 are found component by
component: a boundary cycle with u external openings has its first u-1
unknowns chosen freely in the face group and the last one solved for.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from group_type_planar.algebra import AlgebraElement, PlanarAlgebra
from group_type_planar.config import CriticalKind, StateSumError
from group_type_planar.groups import Side, Word, side_at
from group_type_planar.scalars import Scalar
from group_type_planar.tangles import library
from group_type_planar.tangles.geometry import (
    EXTERNAL,
    WEIGHT_TABLE,
    BoundaryComponent,
    TangleGeometry,
    WeightTable,
    validate,
)
from group_type_planar.tangles.model import Tangle, compose, insert_wiggle

logger = logging.getLogger(__name__)

Label = Union[int, Tuple[Side, int]]


@dataclass
class CompositionOutcome:
    """Both sides of Z(E o T) = Z(E) o Z(T)."""

    composed: AlgebraElement
    composite: AlgebraElement

    @property
    def ok(self) -> bool:
        return self.composed == self.composite

    def __bool__(self) -> bool:
        return self.ok

    def counterexample(self) -> Optional[str]:
        if self.ok:
            return None
        return f"Z(E o T) = {self.composed.to_text()} but Z(E)(Z(T)) = {self.composite.to_text()}"


class StateSumEvaluator:
    """Evaluates tangles on basis words of P."""

    def __init__(self, algebra: PlanarAlgebra, weights: Optional[WeightTable] = None):
        self.algebra = algebra
        self.ctx = algebra.ctx
        self.weights = dict(weights or WEIGHT_TABLE)

    def coefficient(self, geometry: TangleGeometry) -> Scalar:
        """p(T) |H|^n+ |K|^n-."""
        ring = self.algebra.ring
        return (
            geometry.p_of_t(ring, self.weights)
            * self.ctx.H.order ** geometry.n_plus
            * self.ctx.K.order ** geometry.n_minus
        )

    def _check_inputs(self, geometry: TangleGeometry, inputs: Mapping[str, Sequence[int]]) -> Dict[Tuple[str, int], int]:
        labels: Dict[Tuple[str, int], int] = {}
        for disc, color in geometry.disc_colors.items():
            if disc not in inputs:
                raise StateSumError(f"disc {disc!r} is not labelled")
            word = tuple(inputs[disc])
            if len(word) != 2 * color:
                raise StateSumError(f"disc {disc!r} has color {color} but its word has {len(word)} letters")
            if not self.ctx.is_basis_word(word):
                raise StateSumError(f"label {self.ctx.format_word(word)} of {disc!r} has mu != e")
            for index, letter in enumerate(word, start=1):
                labels[(disc, index)] = letter
        return labels

    def _component_side(self, geometry: TangleGeometry, component: BoundaryComponent) -> Side:
        return Side.K if geometry.faces[component.face].shaded else Side.H

    def _solve_component(
        self, side: Side, component: BoundaryComponent, labels: Mapping[Tuple[str, int], int]
    ) -> List[Dict[int, int]]:
        ambient = self.ctx.ambient
        group = self.ctx.factor(side)
        # constant segments between external unknowns
        segments = [ambient.identity]
        unknowns: List[int] = []
        for owner, index, sign in component.items:
            if owner == EXTERNAL:
                unknowns.append(index)
                segments.append(ambient.identity)
                continue
            element = ambient.embed(side_at(index - 1), labels[(owner, index)])
            if sign < 0:
                element = ambient.inv(element)
            segments[-1] = ambient.mul(segments[-1], element)

        if not unknowns:
            return [{}] if segments[0] == ambient.identity else []

        solutions = []
        for free in itertools.product(group.elements, repeat=len(unknowns) - 1):
            product = segments[0]
            for letter, segment in zip(free, segments[1:-1]):
                product = ambient.mul(product, ambient.mul(ambient.embed(side, letter), segment))
            # product * x_u * tail = e
            last = ambient.mul(ambient.inv(product), ambient.inv(segments[-1]))
            letter = ambient.preimage(side, last)
            if letter is None:
                continue
            assignment = dict(zip(unknowns, free))
            assignment[unknowns[-1]] = letter
            solutions.append(assignment)
        return solutions

    def evaluate(
        self,
        tangle: Tangle,
        inputs: Optional[Mapping[str, Sequence[int]]] = None,
        geometry: Optional[TangleGeometry] = None,
    ) -> AlgebraElement:
        """Z_T on basis-word labels of the internal discs."""
        geometry = geometry or validate(tangle)
        labels = self._check_inputs(geometry, inputs or {})
        n0 = tangle.color

        per_component = []
        for component in geometry.components:
            side = self._component_side(geometry, component)
            solutions = self._solve_component(side, component, labels)
            if not solutions:
                logger.debug(f"No state: component {component.items} has no solution")
                return self.algebra.zero(n0)
            if component.external_indices:
                per_component.append(solutions)

        coeff = self.coefficient(geometry)
        terms: Dict[Word, Scalar] = {}
        for combination in itertools.product(*per_component):
            external: Dict[int, int] = {}
            for assignment in combination:
                external.update(assignment)
            word = tuple(external[i] for i in range(1, 2 * n0 + 1))
            if self.algebra.settings.debug_checks:
                assert self.ctx.mu(word) == self.ctx.ambient.identity, (
                    f"external word {self.ctx.format_word(word)} of a state has mu != e"
                )
            terms[word] = coeff
        return AlgebraElement(self.algebra, n0, terms)

    def evaluate_linear(self, tangle: Tangle, inputs: Mapping[str, AlgebraElement]) -> AlgebraElement:
        """Multilinear extension of evaluate to arbitrary elements."""
        geometry = validate(tangle)
        discs = sorted(geometry.disc_colors)
        result = self.algebra.zero(tangle.color)
        expansions = [list(inputs[d].terms.items()) for d in discs]
        for choice in itertools.product(*expansions):
            coeff = self.algebra.ring.one
            for _, c in choice:
                coeff = coeff * c
            words = {d: w for d, (w, _) in zip(discs, choice)}
            result = result + self.evaluate(tangle, words, geometry).scale(coeff)
        return result

    def check_state(
        self,
        tangle: Tangle,
        geometry: TangleGeometry,
        labeling: Mapping[Tuple[str, int], Label],
    ) -> bool:
        """Typing, outer-component triviality and disc triviality of a full labelling.

        Labels are letter ids, or (side, id) pairs whose side is checked against
        the face; a wrong side raises StateSumError rather than returning False.
        """
        letters: Dict[Tuple[str, int], int] = {}
        for opening in geometry.openings:
            key = (opening.owner, opening.index)
            if key not in labeling:
                raise StateSumError(f"opening {key} is not labelled")
            side = Side.K if opening.shaded else Side.H
            value = labeling[key]
            if isinstance(value, tuple):
                label_side, value = value
                if label_side is not side:
                    raise StateSumError(f"opening {key} lies in a {side.value}-face but carries a {label_side.value}-letter")
            if not 0 <= value < self.ctx.factor(side).order:
                raise StateSumError(f"opening {key}: {value} is not an element of {side.value}")
            letters[key] = value

        # disc triviality
        for disc, color in geometry.disc_colors.items():
            word = tuple(letters[(disc, i)] for i in range(1, 2 * color + 1))
            if self.ctx.mu(word) != self.ctx.ambient.identity:
                return False

        def trivial(component: BoundaryComponent) -> bool:
            ambient = self.ctx.ambient
            product = ambient.identity
            side = self._component_side(geometry, component)
            for owner, index, sign in component.items:
                element = ambient.embed(side, letters[(owner, index)])
                product = ambient.mul(product, element if sign > 0 else ambient.inv(element))
            return product == ambient.identity

        for face in geometry.faces:
            if not trivial(geometry.components[face.outer]):
                return False

        if self.algebra.settings.debug_checks:
            for face in geometry.faces:
                for inner in face.inner:
                    assert trivial(geometry.components[inner]), "inner component of a state is not trivial"
            external = tuple(letters[(EXTERNAL, i)] for i in range(1, 2 * tangle.color + 1))
            assert self.ctx.mu(external) == self.ctx.ambient.identity, "external word of a state has mu != e"
        return True

    def composition_check(
        self,
        outer: Tangle,
        disc: str,
        inner: Tangle,
        outer_inputs: Mapping[str, Sequence[int]],
        inner_inputs: Mapping[str, Sequence[int]],
    ) -> CompositionOutcome:
        """Compare Z of the composed tangle with Z(outer) applied to Z(inner)."""
        composed, renaming = compose(outer, disc, inner)
        labels = {d: w for d, w in outer_inputs.items() if d != disc}
        labels.update({renaming[d]: w for d, w in inner_inputs.items()})
        lhs = self.evaluate(composed, labels)

        rhs = self.algebra.zero(outer.color)
        outer_geometry = validate(outer)
        for word, coeff in self.evaluate(inner, inner_inputs).terms.items():
            fixed = dict(outer_inputs)
            fixed[disc] = word
            rhs = rhs + self.evaluate(outer, fixed, outer_geometry).scale(coeff)
        return CompositionOutcome(lhs, rhs)


WEIGHT_KEYS = (
    (CriticalKind.MAX, True),
    (CriticalKind.MAX, False),
    (CriticalKind.MIN, True),
    (CriticalKind.MIN, False),
)


def _satisfies_constraints(evaluator: StateSumEvaluator) -> bool:
    algebra = evaluator.algebra
    ctx = algebra.ctx
    delta_empty = algebra.scalar_element(algebra.delta)

    for shaded in (False, True):
        if evaluator.evaluate(library.loop(shaded)) != delta_empty:
            return False

    plain = library.identity_tangle(2)
    reference = evaluator.evaluate(plain)
    for strand in (1, 2):
        for left in (False, True):
            if evaluator.evaluate(insert_wiggle(plain, 0, strand, left)) != reference:
                return False

    if evaluator.evaluate(library.jones(1)) != algebra.jones(1):
        return False
    for word in ctx.enumerate_basis(2):
        x = algebra.basis_element(word)
        if evaluator.evaluate(library.cond_exp_right(1), {"D1": word}) != algebra.cond_exp_right(x):
            return False
        if evaluator.evaluate(library.cond_exp_left(2), {"D1": word}) != algebra.cond_exp_left(x):
            return False
    for word in ctx.enumerate_basis(1):
        x = algebra.basis_element(word)
        if evaluator.evaluate(library.cond_exp_right(0), {"D1": word}) != algebra.cond_exp_right(x):
            return False
    return True


def calibrate_critical_weights(algebra: PlanarAlgebra) -> List[Dict[Tuple[CriticalKind, bool], int]]:
    """All assignments of r^(+-1) to (kind, enclosed shading) that pass the calibration constraints."""
    survivors = []
    for exponents in itertools.product((-1, 1), repeat=len(WEIGHT_KEYS)):
        table = dict(zip(WEIGHT_KEYS, exponents))
        if _satisfies_constraints(StateSumEvaluator(algebra, table)):
            survivors.append(table)
    if len(survivors) > 1:
        logger.warning(
            f"Calibration in {algebra.ctx.name!r} leaves {len(survivors)} weight assignments (|H| = |K|?)"
        )
    logger.info(f"Calibration in {algebra.ctx.name!r}: {len(survivors)} surviving assignments")
    return survivors
