"""Finite groups, the two ambient backends and the alternating word spaces."""

import itertools
import logging
from enum import Enum
from fractions import Fraction
from typing import Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

from group_type_planar.config import (
    Backend,
    ConfigError,
    FREE_PRODUCT_MAX_LENGTH,
    GroupError,
)

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
AmbientElement = Hashable


class Side(Enum):
    """Which of the two subgroups a letter comes from."""
    K = "K"
    H = "H"

    @property
    def other(self) -> "Side":
        return Side.H if self is Side.K else Side.K


def side_at(position: int, first: Side = Side.K) -> Side:
    """Side of the letter at a 0-based position of an alternating word."""
    return first if position % 2 == 0 else first.other


class FiniteGroup:
    """A finite group given by its Cayley table over element ids 0..order-1."""

    def __init__(self, names: Sequence[str], cayley, label: str = ""):
        names = tuple(str(name) for name in names)
        order = len(names)
        self.label = label
        if order == 0:
            raise GroupError(f"group {label!r} has no elements")
        if len(set(names)) != order:
            raise GroupError(f"group {label!r} has duplicate element names")

        table = np.asarray(cayley, dtype=np.int64)
        if table.shape != (order, order):
            raise GroupError(
                f"group {label!r}: Cayley table has shape {table.shape}, expected {(order, order)}"
            )
        if table.min() < 0 or table.max() >= order:
            raise GroupError(f"group {label!r}: Cayley table entry out of range")

        ids = np.arange(order)
        if not (np.sort(table, axis=0) == ids[:, None]).all() or not (
            np.sort(table, axis=1) == ids[None, :]
        ).all():
            raise GroupError(f"group {label!r}: Cayley table is not a Latin square")

        identities = [
            e for e in range(order)
            if np.array_equal(table[e], ids) and np.array_equal(table[:, e], ids)
        ]
        if not identities:
            raise GroupError(f"group {label!r} has no identity element")
        identity = identities[0]

        inverse = np.argmax(table == identity, axis=1)
        if not (table[ids, inverse] == identity).all() or not (table[inverse, ids] == identity).all():
            raise GroupError(f"group {label!r}: left and right inverses differ")

        # (ab)c against a(bc) for every triple at once
        left = table[table]
        right = table[ids[:, None, None], table[None, :, :]]
        if not np.array_equal(left, right):
            a, b, c = (int(v) for v in np.argwhere(left != right)[0])
            raise GroupError(
                f"group {label!r} is not associative: ({names[a]}*{names[b]})*{names[c]} "
                f"!= {names[a]}*({names[b]}*{names[c]})"
            )

        table.setflags(write=False)
        self._table = table
        self._inverse = tuple(int(v) for v in inverse)
        self._names = names
        self._index = {name: i for i, name in enumerate(names)}
        self.identity = identity

    @classmethod
    def trivial(cls, label: str = "1") -> "FiniteGroup":
        return cls(["e"], [[0]], label=label)

    @classmethod
    def cyclic(cls, order: int, label: str = "") -> "FiniteGroup":
        """Z_order with elements e, g, g^2, ..."""
        names = ["e", "g"] + [f"g^{i}" for i in range(2, order)]
        ids = np.arange(order)
        return cls(names[:order], (ids[:, None] + ids[None, :]) % order, label=label or f"Z{order}")

    @classmethod
    def from_permutations(
        cls, degree: int, generators: Sequence[Sequence[int]], label: str = ""
    ) -> "FiniteGroup":
        """Close permutation generators (array forms) into the full group."""
        perms = []
        for gen in generators:
            if sorted(gen) != list(range(degree)):
                raise GroupError(f"group {label!r}: {list(gen)} is not a permutation of {degree} points")
            perms.append(Permutation(list(gen), size=degree))
        group = PermutationGroup(perms) if perms else PermutationGroup([Permutation(list(range(degree)), size=degree)])

        elements = sorted(group.generate(), key=lambda p: (not p.is_Identity, p.array_form))
        index = {tuple(p.array_form): i for i, p in enumerate(elements)}
        table = [[index[tuple((p * q).array_form)] for q in elements] for p in elements]
        names = [_permutation_name(p) for p in elements]
        logger.debug(f"Closed {len(perms)} generators of degree {degree} into a group of order {len(elements)}")
        return cls(names, table, label=label)

    @property
    def order(self) -> int:
        return len(self._names)

    @property
    def elements(self) -> range:
        return range(self.order)

    @property
    def table(self) -> np.ndarray:
        return self._table

    def mul(self, a: int, b: int) -> int:
        return int(self._table[a, b])

    def inv(self, a: int) -> int:
        return self._inverse[a]

    def name(self, a: int) -> str:
        return self._names[a]

    @property
    def names(self) -> Tuple[str, ...]:
        return self._names

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ConfigError(f"unknown element {name!r}", field=self.label) from None

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label!r}, order={self.order})"


def _permutation_name(perm: Permutation) -> str:
    if perm.is_Identity:
        return "e"
    return "".join(f"({' '.join(str(p) for p in cycle)})" for cycle in perm.cyclic_form)


def check_embedding(source: FiniteGroup, target: FiniteGroup, images: Sequence[int], field: str) -> None:
    """Raise unless images defines an injective homomorphism source -> target."""
    images = np.asarray(images, dtype=np.int64)
    if images.shape != (source.order,):
        raise GroupError(f"{field}: expected {source.order} images, got {len(images)}")
    if len(set(images.tolist())) != source.order:
        raise GroupError(f"{field}: embedding is not injective")
    mapped = images[source.table]
    composed = target.table[images[:, None], images[None, :]]
    if not np.array_equal(mapped, composed):
        a, b = (int(v) for v in np.argwhere(mapped != composed)[0])
        raise GroupError(
            f"{field}: not a homomorphism at {source.name(a)}*{source.name(b)}"
        )


class AmbientGroup:
    """The group G generated by the images of H and K."""

    backend: Backend

    def __init__(self, H: FiniteGroup, K: FiniteGroup):
        self.factors = {Side.H: H, Side.K: K}

    @property
    def identity(self) -> AmbientElement:
        raise NotImplementedError

    def mul(self, x: AmbientElement, y: AmbientElement) -> AmbientElement:
        raise NotImplementedError

    def inv(self, x: AmbientElement) -> AmbientElement:
        raise NotImplementedError

    def embed(self, side: Side, a: int) -> AmbientElement:
        raise NotImplementedError

    def preimage(self, side: Side, x: AmbientElement) -> Optional[int]:
        """The letter of the given side equal to x, or None if x is not in that subgroup."""
        raise NotImplementedError

    def name(self, x: AmbientElement) -> str:
        raise NotImplementedError


class ConcreteAmbient(AmbientGroup):
    """A finite G with explicit embeddings of H and K."""

    backend = Backend.CONCRETE

    def __init__(
        self,
        group: FiniteGroup,
        H: FiniteGroup,
        K: FiniteGroup,
        embed_h: Sequence[int],
        embed_k: Sequence[int],
    ):
        super().__init__(H, K)
        check_embedding(H, group, embed_h, "embedH")
        check_embedding(K, group, embed_k, "embedK")
        self.group = group
        self._embed = {Side.H: tuple(int(g) for g in embed_h), Side.K: tuple(int(g) for g in embed_k)}
        self._preimage = {
            side: {g: a for a, g in enumerate(images)} for side, images in self._embed.items()
        }

    @property
    def identity(self) -> int:
        return self.group.identity

    def mul(self, x: int, y: int) -> int:
        return self.group.mul(x, y)

    def inv(self, x: int) -> int:
        return self.group.inv(x)

    def embed(self, side: Side, a: int) -> int:
        return self._embed[side][a]

    def preimage(self, side: Side, x: int) -> Optional[int]:
        return self._preimage[side].get(x)

    def name(self, x: int) -> str:
        return self.group.name(x)


class FreeProductAmbient(AmbientGroup):
    """H * K with elements as reduced alternating words of (side, letter) pairs."""

    backend = Backend.FREE_PRODUCT

    def __init__(self, H: FiniteGroup, K: FiniteGroup, max_length: int = FREE_PRODUCT_MAX_LENGTH):
        super().__init__(H, K)
        self.max_length = max_length

    @property
    def identity(self) -> tuple:
        return ()

    def mul(self, x: tuple, y: tuple) -> tuple:
        word = list(x)
        for side, letter in y:
            if word and word[-1][0] is side:
                factor = self.factors[side]
                _, last = word.pop()
                merged = factor.mul(last, letter)
                if merged != factor.identity:
                    word.append((side, merged))
            else:
                word.append((side, letter))
        if len(word) > self.max_length:
            raise GroupError(
                f"reduced word of length {len(word)} exceeds the free-product cap {self.max_length}"
            )
        return tuple(word)

    def inv(self, x: tuple) -> tuple:
        return tuple((side, self.factors[side].inv(a)) for side, a in reversed(x))

    def embed(self, side: Side, a: int) -> tuple:
        if a == self.factors[side].identity:
            return ()
        return ((side, a),)

    def preimage(self, side: Side, x: tuple) -> Optional[int]:
        if not x:
            return self.factors[side].identity
        if len(x) == 1 and x[0][0] is side:
            return x[0][1]
        return None

    def name(self, x: tuple) -> str:
        if not x:
            return "e"
        return "*".join(self.factors[side].name(a) for side, a in x)


class GroupContext:
    """The triple (G, H, K) together with the word spaces built from it."""

    def __init__(self, H: FiniteGroup, K: FiniteGroup, ambient: AmbientGroup, name: str = ""):
        self.H = H
        self.K = K
        self.ambient = ambient
        self.name = name
        self.m = Fraction(H.order, K.order)
        self.delta_squared = H.order * K.order
        self._basis_cache: Dict[int, List[Word]] = {}

    @classmethod
    def concrete(
        cls,
        G: FiniteGroup,
        H: FiniteGroup,
        K: FiniteGroup,
        embed_h: Sequence[int],
        embed_k: Sequence[int],
        name: str = "",
    ) -> "GroupContext":
        return cls(H, K, ConcreteAmbient(G, H, K, embed_h, embed_k), name=name)

    @classmethod
    def free_product(
        cls,
        H: FiniteGroup,
        K: FiniteGroup,
        max_length: int = FREE_PRODUCT_MAX_LENGTH,
        name: str = "",
    ) -> "GroupContext":
        return cls(H, K, FreeProductAmbient(H, K, max_length), name=name)

    @property
    def backend(self) -> Backend:
        return self.ambient.backend

    def factor(self, side: Side) -> FiniteGroup:
        return self.H if side is Side.H else self.K

    def L_side(self, n: int) -> Side:
        if n < 0:
            raise ValueError(f"L_n needs n >= 0, got {n}")
        return Side.K if n % 2 == 0 else Side.H

    def L(self, n: int) -> FiniteGroup:
        """K for even n, H for odd n."""
        return self.factor(self.L_side(n))

    # words

    def words(self, length: int, first: Side = Side.K) -> Iterator[Word]:
        """All alternating words of a length, in lexicographic order."""
        ranges = [self.factor(side_at(i, first)).elements for i in range(length)]
        return itertools.product(*ranges)

    def word_count(self, length: int, first: Side = Side.K) -> int:
        count = 1
        for i in range(length):
            count *= self.factor(side_at(i, first)).order
        return count

    def identity_word(self, length: int, first: Side = Side.K) -> Word:
        return tuple(self.factor(side_at(i, first)).identity for i in range(length))

    def mu(self, word: Sequence[int], first: Side = Side.K) -> AmbientElement:
        """Product of the letters of an alternating word in G."""
        result = self.ambient.identity
        for i, letter in enumerate(word):
            result = self.ambient.mul(result, self.ambient.embed(side_at(i, first), letter))
        return result

    def tilde(self, word: Sequence[int]) -> Word:
        """S_n -> ~S_n: reverse and invert letter-wise."""
        n = len(word)
        return tuple(
            self.factor(side_at(n - 1 - j)).inv(word[n - 1 - j]) for j in range(n)
        )

    def bar(self, word: Sequence[int]) -> Word:
        """Inverse of tilde, ~S_n -> S_n."""
        n = len(word)
        return tuple(self.factor(side_at(i)).inv(word[n - 1 - i]) for i in range(n))

    def in_side(self, x: AmbientElement, side: Side) -> bool:
        return self.ambient.preimage(side, x) is not None

    def enumerate_basis(self, n: int) -> List[Word]:
        """Words s in S_{2n} with mu(s) = e, lexicographically ordered."""
        if n < 0:
            raise ValueError(f"level must be >= 0, got {n}")
        if n not in self._basis_cache:
            basis: List[Word] = []
            self._extend(basis, (), self.ambient.identity, 2 * n)
            self._basis_cache[n] = basis
            logger.debug(f"Enumerated {len(basis)} basis words of P_{n} in context {self.name!r}")
        return list(self._basis_cache[n])

    def _extend(self, out: List[Word], prefix: Word, product: AmbientElement, length: int) -> None:
        position = len(prefix)
        if position == length:
            if product == self.ambient.identity:
                out.append(prefix)
            return
        side = side_at(position)
        for letter in self.factor(side).elements:
            self._extend(
                out,
                prefix + (letter,),
                self.ambient.mul(product, self.ambient.embed(side, letter)),
                length,
            )

    def is_basis_word(self, word: Sequence[int]) -> bool:
        if len(word) % 2:
            return False
        for i, letter in enumerate(word):
            if not 0 <= letter < self.factor(side_at(i)).order:
                return False
        return self.mu(word) == self.ambient.identity

    # text

    def format_word(self, word: Sequence[int], first: Side = Side.K) -> str:
        return "(" + ",".join(self.factor(side_at(i, first)).name(a) for i, a in enumerate(word)) + ")"

    def parse_word(self, text: str, first: Side = Side.K) -> Word:
        """Comma-separated element names, optionally wrapped in parentheses."""
        text = text.strip()
        if text in ("", "()"):
            return ()
        tokens = [token.strip() for token in text.split(",")]
        first_group = self.factor(first)
        if tokens[0].startswith("(") and tokens[0] not in first_group.names:
            tokens[0] = tokens[0][1:].strip()
        last_group = self.factor(side_at(len(tokens) - 1, first))
        if tokens[-1].endswith(")") and tokens[-1] not in last_group.names:
            tokens[-1] = tokens[-1][:-1].strip()
        return tuple(self.factor(side_at(i, first)).index(token) for i, token in enumerate(tokens))

    def with_trivial(self, side: Side) -> "GroupContext":
        """The same context with one subgroup replaced by the trivial group."""
        trivial = FiniteGroup.trivial(label=f"{side.value}=1")
        H = trivial if side is Side.H else self.H
        K = trivial if side is Side.K else self.K
        name = f"{self.name}[{side.value}=1]"
        if isinstance(self.ambient, ConcreteAmbient):
            ambient = self.ambient
            embed_h = [ambient.group.identity] if side is Side.H else [ambient.embed(Side.H, a) for a in H.elements]
            embed_k = [ambient.group.identity] if side is Side.K else [ambient.embed(Side.K, a) for a in K.elements]
            return GroupContext.concrete(ambient.group, H, K, embed_h, embed_k, name=name)
        return GroupContext.free_product(H, K, self.ambient.max_length, name=name)

    def __repr__(self) -> str:
        return f"GroupContext({self.name!r}, |H|={self.H.order}, |K|={self.K.order}, {self.backend.value})"
