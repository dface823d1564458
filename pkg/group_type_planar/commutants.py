"""Matrix-unit model of the relative commutants N'∩M_n and M'∩M_n and the map psi onto P.

An N'∩M_n basis element E[s1|s2]⊗l is keyed by (s1, s2, l) with s1, s2 in S_n,
l in L_n and mu(s1) l mu(s2)^-1 in H. An M'∩M_n basis element is keyed by
(t1, t2, l) with t1, t2 in T_{n-1} and stands for the sum over k in K of
E[(k,t1)|(k k0,t2)]⊗l, where k0 = mu(t1) l mu(t2)^-1 must lie in K.

psi sends N'∩M_n onto P_{n+1}.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

from group_type_planar.algebra import AlgebraElement, PlanarAlgebra, sample_tuples
from group_type_planar.config import CommutantFlavor, ConfigError, LevelMismatchError
from group_type_planar.groups import Side, Word
from group_type_planar.scalars import Scalar

logger = logging.getLogger(__name__)

Key = Tuple[Word, Word, int]


class CommutantElement:
    """A sparse combination of commutant basis keys of one level and flavor."""

    __slots__ = ("model", "level", "flavor", "terms")

    def __init__(
        self,
        model: "CommutantModel",
        level: int,
        terms: Mapping[Key, Scalar],
        flavor: CommutantFlavor = CommutantFlavor.NCOMM,
    ):
        self.model = model
        self.level = level
        self.flavor = flavor
        self.terms: Dict[Key, Scalar] = {k: c for k, c in terms.items() if c}

    def _check(self, other: "CommutantElement") -> None:
        if other.level != self.level or other.flavor is not self.flavor:
            raise LevelMismatchError(
                f"cannot combine {self.flavor.value} level {self.level} "
                f"with {other.flavor.value} level {other.level}"
            )

    def _new(self, terms: Mapping[Key, Scalar]) -> "CommutantElement":
        return CommutantElement(self.model, self.level, terms, self.flavor)

    def __add__(self, other: "CommutantElement") -> "CommutantElement":
        if not isinstance(other, CommutantElement):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            terms[key] = terms[key] + coeff if key in terms else coeff
        return self._new(terms)

    def __neg__(self) -> "CommutantElement":
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "CommutantElement") -> "CommutantElement":
        if not isinstance(other, CommutantElement):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> "CommutantElement":
        return self._new({k: c * factor for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, CommutantElement):
            return self.model.comm_mult(self, other)
        if isinstance(other, (Scalar, int, Rational)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Rational)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, CommutantElement):
            return NotImplemented
        return self.level == other.level and self.flavor is other.flavor and self.terms == other.terms

    def __hash__(self):
        return hash((self.level, self.flavor, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, key: Key) -> Scalar:
        return self.terms.get(key, self.model.algebra.ring.zero)

    def keys(self) -> List[Key]:
        return sorted(self.terms)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in self.keys():
            coeff = self.terms[key].to_text()
            if " " in coeff:
                coeff = f"({coeff})"
            parts.append(f"{coeff} * {self.model.format_key(key, self.level, self.flavor)}")
        return " + ".join(parts)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "flavor": self.flavor.value,
            "terms": [
                {"key": self.model.format_key(key, self.level, self.flavor), "coeff": self.terms[key].to_dict()}
                for key in self.keys()
            ],
        }

    def __repr__(self) -> str:
        return f"CommutantElement({self.flavor.value}, level={self.level}, {self.to_text()})"


@dataclass
class IsoReport:
    """Outcome of checking that psi_n is a *-isomorphism onto P_{n+1}."""

    level: int
    basis_size: int = 0
    dimension: int = 0
    checks: Dict[str, bool] = field(default_factory=dict)
    counterexamples: Dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, ok: bool, detail: Union[str, Callable[[], str]] = "") -> None:
        """Fold one case into a named check, keeping the first counterexample."""
        self.checks[name] = self.checks.get(name, True) and ok
        if not ok and name not in self.counterexamples:
            self.counterexamples[name] = detail() if callable(detail) else detail

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "basis_size": self.basis_size,
            "dimension": self.dimension,
            "checks": dict(self.checks),
            "counterexamples": dict(self.counterexamples),
            "passed": self.passed,
        }


class CommutantModel:
    """The tower N ⊂ M ⊂ M_1 ⊂ ... restricted to its relative commutants."""

    def __init__(self, algebra: PlanarAlgebra):
        self.algebra = algebra
        self.ctx = algebra.ctx
        self.ring = algebra.ring
        self._ncomm: Dict[int, List[Key]] = {}
        self._mcomm: Dict[int, List[Key]] = {}

    def _fraction(self, denominator: int) -> Scalar:
        return self.ring.rational(Fraction(1, denominator))

    # membership

    def _twisted(self, w1: Word, w2: Word, l: int, n: int, first: Side):
        """mu(w1) l mu(w2)^-1 in the ambient group."""
        ambient = self.ctx.ambient
        middle = ambient.embed(self.ctx.L_side(n), l)
        return ambient.mul(
            ambient.mul(self.ctx.mu(w1, first), middle), ambient.inv(self.ctx.mu(w2, first))
        )

    def in_ncomm(self, key: Key) -> bool:
        s1, s2, l = key
        return self.ctx.in_side(self._twisted(s1, s2, l, len(s1), Side.K), Side.H)

    def mcomm_k0(self, key: Key) -> Optional[int]:
        """The K-letter k0 of an M'∩M_n key, or None if the key is not admissible."""
        t1, t2, l = key
        x = self._twisted(t1, t2, l, len(t1) + 1, Side.H)
        return self.ctx.ambient.preimage(Side.K, x)

    def ncomm_basis(self, n: int) -> List[Key]:
        if n < 0:
            raise LevelMismatchError(f"N'∩M_n needs n >= 0, got {n}")
        if n not in self._ncomm:
            words = list(self.ctx.words(n))
            self._ncomm[n] = [
                (s1, s2, l)
                for s1 in words
                for s2 in words
                for l in self.ctx.L(n).elements
                if self.in_ncomm((s1, s2, l))
            ]
            logger.debug(f"N'∩M_{n} in {self.ctx.name!r} has {len(self._ncomm[n])} basis elements")
        return list(self._ncomm[n])

    def mcomm_basis(self, n: int) -> List[Key]:
        if n < 1:
            raise LevelMismatchError(f"M'∩M_n needs n >= 1, got {n}")
        if n not in self._mcomm:
            words = list(self.ctx.words(n - 1, Side.H))
            self._mcomm[n] = [
                (t1, t2, l)
                for t1 in words
                for t2 in words
                for l in self.ctx.L(n).elements
                if self.mcomm_k0((t1, t2, l)) is not None
            ]
            logger.debug(f"M'∩M_{n} in {self.ctx.name!r} has {len(self._mcomm[n])} basis elements")
        return list(self._mcomm[n])

    # construction

    def element(
        self, level: int, terms: Mapping[Key, Any], flavor: CommutantFlavor = CommutantFlavor.NCOMM
    ) -> CommutantElement:
        converted = {}
        for key, coeff in terms.items():
            converted[key] = coeff if isinstance(coeff, Scalar) else self.ring.rational(coeff)
        return CommutantElement(self, level, converted, flavor)

    def basis_element(self, key: Key, flavor: CommutantFlavor = CommutantFlavor.NCOMM) -> CommutantElement:
        s1, s2, l = tuple(key[0]), tuple(key[1]), key[2]
        key = (s1, s2, l)
        if flavor is CommutantFlavor.NCOMM:
            if len(s1) != len(s2) or not self.in_ncomm(key):
                raise ConfigError(f"{self.format_key(key, len(s1), flavor)} is not in N'∩M_{len(s1)}")
            return CommutantElement(self, len(s1), {key: self.ring.one}, flavor)
        if len(s1) != len(s2) or self.mcomm_k0(key) is None:
            raise ConfigError(f"{self.format_key(key, len(s1) + 1, flavor)} is not in M'∩M_{len(s1) + 1}")
        return CommutantElement(self, len(s1) + 1, {key: self.ring.one}, flavor)

    def basis(self, n: int, flavor: CommutantFlavor = CommutantFlavor.NCOMM) -> List[CommutantElement]:
        keys = self.ncomm_basis(n) if flavor is CommutantFlavor.NCOMM else self.mcomm_basis(n)
        return [CommutantElement(self, n, {key: self.ring.one}, flavor) for key in keys]

    def identity(self, n: int) -> CommutantElement:
        e = self.ctx.L(n).identity
        return CommutantElement(self, n, {(s, s, e): self.ring.one for s in self.ctx.words(n)})

    def format_key(self, key: Key, level: int, flavor: CommutantFlavor) -> str:
        w1, w2, l = key
        name = self.ctx.L(level).name(l)
        if flavor is CommutantFlavor.NCOMM:
            return f"E[{self.ctx.format_word(w1)}|{self.ctx.format_word(w2)}]⊗{name}"
        return f"F[{self.ctx.format_word(w1, Side.H)}|{self.ctx.format_word(w2, Side.H)}]⊗{name}"

    # flavors

    def expand_mcomm(self, x: CommutantElement) -> CommutantElement:
        """Rewrite an M'∩M_n element in the N'∩M_n basis."""
        if x.flavor is CommutantFlavor.NCOMM:
            return x
        K = self.ctx.K
        terms: Dict[Key, Scalar] = {}
        for key, coeff in x.terms.items():
            t1, t2, l = key
            k0 = self.mcomm_k0(key)
            for k in K.elements:
                terms[((k,) + t1, (K.mul(k, k0),) + t2, l)] = coeff
        return CommutantElement(self, x.level, terms)

    def contract_mcomm(self, x: CommutantElement) -> CommutantElement:
        """Rewrite an N'∩M_n element lying in M'∩M_n in the M'∩M_n basis."""
        if x.flavor is CommutantFlavor.MCOMM:
            return x
        if x.level < 1:
            raise LevelMismatchError("M'∩M_n needs n >= 1")
        K = self.ctx.K
        terms: Dict[Key, Scalar] = {}
        for (s1, s2, l), coeff in x.terms.items():
            if s1[0] != K.identity:
                continue
            key = (s1[1:], s2[1:], l)
            if self.mcomm_k0(key) == s2[0]:
                terms[key] = coeff
        result = CommutantElement(self, x.level, terms, CommutantFlavor.MCOMM)
        if self.expand_mcomm(result) != x:
            raise LevelMismatchError(f"element of N'∩M_{x.level} does not lie in M'∩M_{x.level}")
        return result

    # structure

    def comm_mult(self, x: CommutantElement, y: CommutantElement) -> CommutantElement:
        """(E[s1|s2]⊗l)(E[s3|s4]⊗l') = [s2 = s3] E[s1|s4]⊗ll'."""
        x._check(y)
        if x.flavor is CommutantFlavor.MCOMM:
            return self.contract_mcomm(self.comm_mult(self.expand_mcomm(x), self.expand_mcomm(y)))
        group = self.ctx.L(x.level)
        by_row: Dict[Word, List] = {}
        for (s3, s4, l2), c2 in y.terms.items():
            by_row.setdefault(s3, []).append((s4, l2, c2))
        terms: Dict[Key, Scalar] = {}
        for (s1, s2, l1), c1 in x.terms.items():
            for s4, l2, c2 in by_row.get(s2, ()):
                key = (s1, s4, group.mul(l1, l2))
                if self.algebra.settings.debug_checks:
                    assert self.in_ncomm(key), f"product left N'∩M_{x.level}"
                coeff = c1 * c2
                terms[key] = terms[key] + coeff if key in terms else coeff
        return CommutantElement(self, x.level, terms)

    def comm_star(self, x: CommutantElement) -> CommutantElement:
        if x.flavor is CommutantFlavor.MCOMM:
            return self.contract_mcomm(self.comm_star(self.expand_mcomm(x)))
        group = self.ctx.L(x.level)
        return CommutantElement(
            self, x.level, {(s2, s1, group.inv(l)): c.conjugate() for (s1, s2, l), c in x.terms.items()}
        )

    def comm_include(self, x: CommutantElement) -> CommutantElement:
        """M_{n-1} -> M_n: E[s|t]⊗l goes to the sum over m of E[(s,lm)|(t,m)]⊗e."""
        if x.flavor is CommutantFlavor.MCOMM:
            return self.contract_mcomm(self.comm_include(self.expand_mcomm(x)))
        n = x.level + 1
        group = self.ctx.L(n - 1)
        e = self.ctx.L(n).identity
        terms: Dict[Key, Scalar] = {}
        for (s, t, l), coeff in x.terms.items():
            for m in group.elements:
                terms[(s + (group.mul(l, m),), t + (m,), e)] = coeff
        return CommutantElement(self, n, terms)

    def include_to(self, x: CommutantElement, level: int) -> CommutantElement:
        if level < x.level:
            raise LevelMismatchError(f"cannot include level {x.level} into level {level}")
        while x.level < level:
            x = self.comm_include(x)
        return x

    def jones_en(self, n: int) -> CommutantElement:
        """The Jones projection e_n of M_{n-1} ⊂ M_n inside N'∩M_n."""
        if n < 1:
            raise LevelMismatchError(f"jones_en needs n >= 1, got {n}")
        if n == 1:
            k_e = (self.ctx.K.identity,)
            coeff = self._fraction(self.ctx.H.order)
            return CommutantElement(self, 1, {(k_e, k_e, h): coeff for h in self.ctx.H.elements})
        group = self.ctx.L(n)
        e_last = self.ctx.L(n - 1).identity
        coeff = self._fraction(group.order)
        terms: Dict[Key, Scalar] = {}
        for u in self.ctx.words(n - 2):
            for m in group.elements:
                for l in group.elements:
                    terms[(u + (m, e_last), u + (group.mul(m, l), e_last), l)] = coeff
        return CommutantElement(self, n, terms)

    def tl_generator(self, i: int, level: int) -> CommutantElement:
        return self.include_to(self.jones_en(i), level)

    # trace and expectations

    def trace_Mn(self, x: CommutantElement) -> Scalar:
        """tr(E[s1|s2]⊗l) = [l = e][s1 = s2] / |S_n|."""
        x = self.expand_mcomm(x)
        e = self.ctx.L(x.level).identity
        total = self.ring.zero
        for (s1, s2, l), coeff in x.terms.items():
            if l == e and s1 == s2:
                total = total + coeff
        return total * self._fraction(self.ctx.word_count(x.level))

    def cond_exp_Mn(self, x: CommutantElement) -> CommutantElement:
        """Trace-preserving expectation of N'∩M_n onto N'∩M_{n-1}."""
        if x.flavor is not CommutantFlavor.NCOMM:
            raise LevelMismatchError("cond_exp_Mn acts on N'∩M_n elements")
        n = x.level
        if n < 1:
            raise LevelMismatchError("cond_exp_Mn needs n >= 1")
        e = self.ctx.L(n).identity
        group = self.ctx.L(n - 1)
        factor = self._fraction(group.order)
        terms: Dict[Key, Scalar] = {}
        for (s1, s2, l), coeff in x.terms.items():
            if l != e:
                continue
            key = (s1[:-1], s2[:-1], group.mul(s1[-1], group.inv(s2[-1])))
            value = coeff * factor
            terms[key] = terms[key] + value if key in terms else value
        result = CommutantElement(self, n - 1, terms)
        if self.algebra.settings.debug_checks:
            assert self.trace_Mn(result) == self.trace_Mn(x), "cond_exp_Mn is not trace preserving"
        return result

    def cond_exp_onto_mcomm(self, x: CommutantElement) -> CommutantElement:
        """Expectation of N'∩M_n onto M'∩M_n: average over conjugation by K."""
        if x.flavor is not CommutantFlavor.NCOMM:
            raise LevelMismatchError("cond_exp_onto_mcomm acts on N'∩M_n elements")
        if x.level < 1:
            raise LevelMismatchError("cond_exp_onto_mcomm needs n >= 1")
        K = self.ctx.K
        factor = self._fraction(K.order)
        terms: Dict[Key, Scalar] = {}
        for (s1, s2, l), coeff in x.terms.items():
            key = (s1[1:], s2[1:], l)
            # keep k1 mu(t1) l = k2 mu(t2)
            k0 = self.mcomm_k0(key)
            if k0 is None or K.mul(s1[0], k0) != s2[0]:
                continue
            value = coeff * factor
            terms[key] = terms[key] + value if key in terms else value
        result = CommutantElement(self, x.level, terms, CommutantFlavor.MCOMM)
        if self.algebra.settings.debug_checks:
            assert self.trace_Mn(result) == self.trace_Mn(x), "cond_exp_onto_mcomm is not trace preserving"
        return result

    # the isomorphism onto P

    def psi_word(self, key: Key) -> Word:
        """(s1, s2, l) -> (s1, l, ~s2, h) with mu(s1) l mu(s2)^-1 h = e."""
        s1, s2, l = key
        ambient = self.ctx.ambient
        h = ambient.preimage(Side.H, ambient.inv(self._twisted(s1, s2, l, len(s1), Side.K)))
        if h is None:
            raise LevelMismatchError(f"{self.format_key(key, len(s1), CommutantFlavor.NCOMM)} is not in N'∩M_n")
        return s1 + (l,) + self.ctx.tilde(s2) + (h,)

    def psi_inverse_key(self, word: Word) -> Key:
        n = len(word) // 2 - 1
        return word[:n], self.ctx.bar(word[n + 1: 2 * n + 1]), word[n]

    def psi(self, x: CommutantElement) -> AlgebraElement:
        """psi_n: N'∩M_n -> P_{n+1}."""
        x = self.expand_mcomm(x)
        return AlgebraElement(
            self.algebra, x.level + 1, {self.psi_word(key): c for key, c in x.terms.items()}
        )

    def verify_iso(self, n: int) -> IsoReport:
        """Check psi_n against every structural operation of P."""
        algebra = self.algebra
        settings = algebra.settings
        keys = self.ncomm_basis(n)
        target = algebra.ctx.enumerate_basis(n + 1)
        report = IsoReport(level=n, basis_size=len(keys), dimension=len(target))

        images = [self.psi_word(key) for key in keys]
        report.record(
            "bijective",
            len(set(images)) == len(images) and set(images) == set(target),
            f"{len(keys)} commutant keys against {len(target)} words of P_{n + 1}",
        )
        report.record(
            "inverse",
            all(self.psi_inverse_key(w) == key for key, w in zip(keys, images)),
            "psi_inverse_key does not undo psi_word",
        )

        elements = [CommutantElement(self, n, {key: self.ring.one}) for key in keys]
        for x, y in sample_tuples(elements, 2, settings.sample_size, settings.seed):
            ok = self.psi(x * y) == algebra.mult(self.psi(x), self.psi(y))
            report.record("multiplicative", ok, lambda: f"x = {x.to_text()}, y = {y.to_text()}")

        for x in elements:
            image = self.psi(x)
            report.record(
                "star", self.psi(self.comm_star(x)) == algebra.star(image), lambda: f"x = {x.to_text()}"
            )
            tr = self.trace_Mn(x)
            report.record(
                "trace", tr == algebra.trace(image), lambda: f"tr({x.to_text()}) = {tr.to_text()}"
            )
            if n == 0:
                scalar = algebra.scalar_element(tr)
                report.record("expect_right", algebra.expect_right(image) == scalar, lambda: f"x = {x.to_text()}")
                report.record("expect_left", algebra.expect_left(image) == scalar, lambda: f"x = {x.to_text()}")
                continue
            lowered = self.psi(self.cond_exp_Mn(x))
            report.record("expect_right", lowered == algebra.expect_right(image), lambda: f"x = {x.to_text()}")
            averaged = self.psi(self.cond_exp_onto_mcomm(x))
            report.record("expect_left", averaged == algebra.expect_left(image), lambda: f"x = {x.to_text()}")

        if n >= 1:
            e_n = self.jones_en(n)
            ok = (
                self.psi(e_n) == algebra.jones_projection(n)
                and e_n * e_n == e_n
                and self.comm_star(e_n) == e_n
            )
            report.record("jones", ok, f"e_{n} = {e_n.to_text()}")
            for x in self.basis(n - 1):
                ok = self.psi(self.comm_include(x)) == algebra.include(self.psi(x))
                report.record("include", ok, lambda: f"x = {x.to_text()}")

        logger.info(f"psi_{n} in {self.ctx.name!r}: {report.checks}")
        return report
