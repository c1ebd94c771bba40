"""Defines the Group abstract base class and the computable groups that
implement it: free groups, ℤ, ℤⁿ, finite cyclic groups, groups given by a
Cayley table, and direct products of any of these.

Elements are plain hashable payloads (a `Word`, an `int`, a tuple of `int`s,
a table index, or a pair of payloads); the group they belong to is always
passed alongside them. Every group carries a word norm with respect to a
symmetric generating set, and `ball` lists the elements of norm at most r
ordered by (norm, canonical encoding)."""
from __future__ import annotations
import abc
import itertools
import logging

from collections import deque
from functools import lru_cache
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy.algebras.quaternion import Quaternion
from sympy.combinatorics import PermutationGroup
from sympy.combinatorics.named_groups import DihedralGroup, SymmetricGroup

import coarse_maps.words as wd
from coarse_maps.errors import GroupMismatchError, MalformedInputError, PreconditionError


LOGGER = logging.getLogger('coarse_maps')

Elem = Any

# associativity is verified on every triple up to this order
ASSOCIATIVITY_CHECK_LIMIT = 64


class Group(abc.ABC):
    """Defines the interface shared by every supported group."""

    @property
    @abc.abstractmethod
    def spec(self) -> str:
        """The group spec string, e.g. `free:2` or `prod(z,cyc:6)`."""

    @abc.abstractmethod
    def identity(self) -> Elem:
        """Returns the identity element."""

    @abc.abstractmethod
    def op(self, x: Elem, y: Elem) -> Elem:
        """Returns the product xy."""

    @abc.abstractmethod
    def inv(self, x: Elem) -> Elem:
        """Returns the inverse of x."""

    @abc.abstractmethod
    def norm(self, x: Elem) -> int:
        """Word norm with respect to the canonical symmetric generating set."""

    @abc.abstractmethod
    def key(self, x: Elem) -> tuple:
        """Canonical encoding used to order elements of equal norm."""

    @abc.abstractmethod
    def contains(self, x: Elem) -> bool:
        """Tests whether x is a payload of this group."""

    @abc.abstractmethod
    def _enumerate(self, radius: int) -> Iterable[Elem]:
        """Yields every element of norm at most `radius`, in any order."""

    @abc.abstractmethod
    def parse_element(self, text: str) -> Elem:
        """Reads an element literal."""

    @abc.abstractmethod
    def format_element(self, x: Elem) -> str:
        """Writes an element literal that `parse_element` reads back."""

    @property
    def is_abelian(self) -> bool:
        return False

    @property
    def order(self) -> Optional[int]:
        """Number of elements, or None for infinite groups."""
        return None

    @property
    def diameter(self) -> Optional[int]:
        """Largest norm of an element, or None for infinite groups."""
        return None

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def sort_key(self, x: Elem) -> tuple:
        return self.norm(x), self.key(x)

    def ball(self, radius: int) -> List[Elem]:
        """Elements of norm at most `radius`, sorted by (norm, key). Cached."""
        if radius < 0:
            raise ValueError('radius must be non-negative')
        cache = self.__dict__.setdefault('_balls', {})
        if radius not in cache:
            cache[radius] = sorted(self._enumerate(radius), key=self.sort_key)
        return cache[radius]

    def ball_index(self, radius: int) -> Dict[Elem, int]:
        """Maps each element of ball(radius) to its position in that list."""
        cache = self.__dict__.setdefault('_ball_indices', {})
        if radius not in cache:
            cache[radius] = {x: i for i, x in enumerate(self.ball(radius))}
        return cache[radius]

    def elements(self) -> List[Elem]:
        if not self.is_finite:
            raise PreconditionError(f'{self.spec} is infinite')
        return self.ball(self.diameter)

    def power(self, x: Elem, exponent: int) -> Elem:
        """x raised to an integer exponent by repeated squaring."""
        base = x if exponent >= 0 else self.inv(x)
        exponent = abs(exponent)
        result = self.identity()
        while exponent:
            if exponent & 1:
                result = self.op(result, base)
            exponent >>= 1
            if exponent:
                base = self.op(base, base)
        return result

    def dist(self, x: Elem, y: Elem) -> int:
        return self.norm(self.op(self.inv(x), y))

    def conj(self, x: Elem, b: Elem) -> Elem:
        """x^b = b⁻¹xb."""
        return self.op(self.op(self.inv(b), x), b)

    def commutator(self, a: Elem, b: Elem) -> Elem:
        return self.op(self.op(self.inv(a), self.inv(b)), self.op(a, b))

    def commutes(self, x: Elem, y: Elem) -> bool:
        return self.op(x, y) == self.op(y, x)

    def check(self, x: Elem, what: str = 'element'):
        """Raises GroupMismatchError unless x belongs to this group."""
        if not self.contains(x):
            raise GroupMismatchError(f'{what} {x!r} is not in {self.spec}')

    def __eq__(self, other) -> bool:
        return isinstance(other, Group) and self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def __repr__(self) -> str:
        return f'{type(self).__name__}({self.spec!r})'

    def __str__(self) -> str:
        return self.spec


def _is_int(x: Any) -> bool:
    return isinstance(x, (int, np.integer)) and not isinstance(x, bool)


def _strip_brackets(text: str, pairs: str = '[]()') -> str:
    text = text.strip()
    for opening, closing in zip(pairs[::2], pairs[1::2]):
        if text.startswith(opening) and text.endswith(closing):
            return text[1:-1].strip()
    return text


def _parse_int(text: str) -> int:
    try:
        return int(text.strip())
    except ValueError as exc:
        raise MalformedInputError(f'{text!r} is not an integer') from exc


def split_top_level(text: str, separator: str) -> List[str]:
    """Splits on `separator` where it is not nested inside any brackets."""
    parts, depth, start = [], 0, 0
    for i, char in enumerate(text):
        if char in '([{':
            depth += 1
        elif char in ')]}':
            depth -= 1
            if depth < 0:
                raise MalformedInputError(f'unbalanced brackets in {text!r}')
        elif char == separator and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth != 0:
        raise MalformedInputError(f'unbalanced brackets in {text!r}')
    parts.append(text[start:])
    return parts


class FreeGroup(Group):
    """The free group on `rank` generators; elements are reduced `Word`s."""

    def __init__(self, rank: int):
        wd.identity(rank)
        self.rank = rank

    @property
    def spec(self) -> str:
        return f'free:{self.rank}'

    def identity(self) -> wd.Word:
        return wd.Word((), self.rank)

    def op(self, x: wd.Word, y: wd.Word) -> wd.Word:
        return wd.mul(x, y)

    def inv(self, x: wd.Word) -> wd.Word:
        return wd.inv(x)

    def norm(self, x: wd.Word) -> int:
        return len(x.letters)

    def key(self, x: wd.Word) -> tuple:
        return tuple(wd.letter_key(letter) for letter in x.letters)

    def contains(self, x: Elem) -> bool:
        return isinstance(x, wd.Word) and x.rank == self.rank

    def _enumerate(self, radius: int) -> Iterable[wd.Word]:
        return wd.ball(self.rank, radius)

    def ball(self, radius: int) -> List[wd.Word]:
        # already in shortlex order, which is the (norm, key) order
        cache = self.__dict__.setdefault('_balls', {})
        if radius not in cache:
            cache[radius] = wd.ball(self.rank, radius)
        return cache[radius]

    def parse_element(self, text: str) -> wd.Word:
        return wd.parse_word(text.strip().strip('"\''), self.rank)

    def format_element(self, x: wd.Word) -> str:
        return wd.format_word(x)

    def generator(self, index: int) -> wd.Word:
        return wd.generator(index, self.rank)


class IntegerGroup(Group):
    """The integers under addition, with the norm |n|."""

    @property
    def spec(self) -> str:
        return 'z'

    @property
    def is_abelian(self) -> bool:
        return True

    def identity(self) -> int:
        return 0

    def op(self, x: int, y: int) -> int:
        return x + y

    def inv(self, x: int) -> int:
        return -x

    def norm(self, x: int) -> int:
        return abs(x)

    def key(self, x: int) -> tuple:
        return (x < 0,)

    def contains(self, x: Elem) -> bool:
        return _is_int(x)

    def _enumerate(self, radius: int) -> Iterable[int]:
        return range(-radius, radius + 1)

    def power(self, x: int, exponent: int) -> int:
        return x * exponent

    def parse_element(self, text: str) -> int:
        return _parse_int(text)

    def format_element(self, x: int) -> str:
        return str(x)


class LatticeGroup(Group):
    """ℤⁿ under addition, with the L1 norm. Elements are tuples of ints."""

    def __init__(self, dimension: int):
        if not _is_int(dimension) or dimension < 1:
            raise MalformedInputError(f'dimension must be a positive integer, got {dimension!r}')
        self.dimension = int(dimension)

    @property
    def spec(self) -> str:
        return f'zpow:{self.dimension}'

    @property
    def is_abelian(self) -> bool:
        return True

    def identity(self) -> Tuple[int, ...]:
        return (0,) * self.dimension

    def op(self, x: Tuple[int, ...], y: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(a + b for a, b in zip(x, y))

    def inv(self, x: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(-a for a in x)

    def norm(self, x: Tuple[int, ...]) -> int:
        return sum(abs(a) for a in x)

    def key(self, x: Tuple[int, ...]) -> tuple:
        return tuple((abs(a), a < 0) for a in x)

    def contains(self, x: Elem) -> bool:
        return (isinstance(x, tuple) and len(x) == self.dimension
                and all(_is_int(a) for a in x))

    def _enumerate(self, radius: int) -> Iterable[Tuple[int, ...]]:
        for x in itertools.product(range(-radius, radius + 1), repeat=self.dimension):
            if sum(abs(a) for a in x) <= radius:
                yield x

    def power(self, x: Tuple[int, ...], exponent: int) -> Tuple[int, ...]:
        return tuple(a * exponent for a in x)

    def parse_element(self, text: str) -> Tuple[int, ...]:
        coordinates = [_parse_int(part) for part in _strip_brackets(text).split(',')]
        if len(coordinates) != self.dimension:
            raise MalformedInputError(
                f'{text!r} has {len(coordinates)} coordinates, expected {self.dimension}')
        return tuple(coordinates)

    def format_element(self, x: Tuple[int, ...]) -> str:
        return '[' + ','.join(str(a) for a in x) + ']'


class CyclicGroup(Group):
    """ℤ/m with residues 0..m-1 and the norm min(n, m-n)."""

    def __init__(self, modulus: int):
        if not _is_int(modulus) or modulus < 1:
            raise MalformedInputError(f'modulus must be a positive integer, got {modulus!r}')
        self.modulus = int(modulus)

    @property
    def spec(self) -> str:
        return f'cyc:{self.modulus}'

    @property
    def is_abelian(self) -> bool:
        return True

    @property
    def order(self) -> int:
        return self.modulus

    @property
    def diameter(self) -> int:
        return self.modulus // 2

    def identity(self) -> int:
        return 0

    def op(self, x: int, y: int) -> int:
        return (x + y) % self.modulus

    def inv(self, x: int) -> int:
        return -x % self.modulus

    def norm(self, x: int) -> int:
        return min(x, self.modulus - x)

    def key(self, x: int) -> tuple:
        return (x,)

    def contains(self, x: Elem) -> bool:
        return _is_int(x) and 0 <= x < self.modulus

    def _enumerate(self, radius: int) -> Iterable[int]:
        return (x for x in range(self.modulus) if self.norm(x) <= radius)

    def power(self, x: int, exponent: int) -> int:
        return x * exponent % self.modulus

    def parse_element(self, text: str) -> int:
        return _parse_int(text) % self.modulus

    def format_element(self, x: int) -> str:
        return str(x)


class FiniteTableGroup(Group):
    """A finite group given by its Cayley table over the indices 0..order-1
    and a generating set. The generating set is closed under inverses on
    construction; norms are breadth-first distances from the identity."""

    def __init__(self, table: Sequence[Sequence[int]], generators: Sequence[int], name: str):
        # pylint: disable=too-many-branches
        try:
            table = np.asarray(table, dtype=np.int64)
        except (TypeError, ValueError) as exc:
            raise MalformedInputError(f'{name}: table is not an integer array') from exc
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise MalformedInputError(f'{name}: table must be a non-empty square array')
        order = table.shape[0]
        indices = np.arange(order)
        if table.min() < 0 or table.max() >= order:
            raise MalformedInputError(f'{name}: table entries must lie in 0..{order - 1}')
        if not (np.all(np.sort(table, axis=0) == indices[:, None])
                and np.all(np.sort(table, axis=1) == indices[None, :])):
            raise MalformedInputError(f'{name}: table is not a Latin square')

        identity_rows = np.flatnonzero(np.all(table == indices[None, :], axis=1))
        identity = None
        for row in identity_rows:
            if np.array_equal(table[:, row], indices):
                identity = int(row)
        if identity is None:
            raise MalformedInputError(f'{name}: table has no two-sided identity')

        if order <= ASSOCIATIVITY_CHECK_LIMIT:
            # (xy)z against x(yz) over all triples
            if not np.array_equal(table[table, :], table[:, table]):
                raise MalformedInputError(f'{name}: table is not associative')
        else:
            LOGGER.warning(f'{name}: order {order} exceeds {ASSOCIATIVITY_CHECK_LIMIT}, '
                           f'associativity not verified')

        self.name = name
        self.table = table
        self._rows = table.tolist()
        self._identity = identity
        self._inverses = np.argmax(table == identity, axis=1).tolist()

        gens = set()
        for g in generators:
            if not _is_int(g) or not 0 <= g < order:
                raise MalformedInputError(f'{name}: generator {g!r} is not an element index')
            gens.update((int(g), self._inverses[g]))
        gens.discard(identity)
        self.generators = tuple(sorted(gens))
        self._norms = self._breadth_first_norms()

    def _breadth_first_norms(self) -> List[int]:
        norms = [-1] * len(self._rows)
        norms[self._identity] = 0
        queue = deque([self._identity])
        while queue:
            x = queue.popleft()
            for g in self.generators:
                y = self._rows[x][g]
                if norms[y] < 0:
                    norms[y] = norms[x] + 1
                    queue.append(y)
        if min(norms) < 0:
            raise MalformedInputError(f'{self.name}: generators do not generate the group')
        return norms

    @property
    def spec(self) -> str:
        return self.name

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @property
    def order(self) -> int:
        return len(self._rows)

    @property
    def diameter(self) -> int:
        return max(self._norms)

    def identity(self) -> int:
        return self._identity

    def op(self, x: int, y: int) -> int:
        return self._rows[x][y]

    def inv(self, x: int) -> int:
        return self._inverses[x]

    def norm(self, x: int) -> int:
        return self._norms[x]

    def key(self, x: int) -> tuple:
        return (x,)

    def contains(self, x: Elem) -> bool:
        return _is_int(x) and 0 <= x < len(self._rows)

    def _enumerate(self, radius: int) -> Iterable[int]:
        return (x for x in range(len(self._rows)) if self._norms[x] <= radius)

    def parse_element(self, text: str) -> int:
        x = _parse_int(text)
        if not self.contains(x):
            raise MalformedInputError(f'{x} is not an element index of {self.name}')
        return x

    def format_element(self, x: int) -> str:
        return str(x)


class ProductGroup(Group):
    """Direct product with componentwise operations and the sum of the
    component norms."""

    def __init__(self, left: Group, right: Group):
        self.left = left
        self.right = right

    @property
    def spec(self) -> str:
        return f'prod({self.left.spec},{self.right.spec})'

    @property
    def is_abelian(self) -> bool:
        return self.left.is_abelian and self.right.is_abelian

    @property
    def order(self) -> Optional[int]:
        if self.left.is_finite and self.right.is_finite:
            return self.left.order * self.right.order
        return None

    @property
    def diameter(self) -> Optional[int]:
        if self.is_finite:
            return self.left.diameter + self.right.diameter
        return None

    def identity(self) -> Tuple[Elem, Elem]:
        return self.left.identity(), self.right.identity()

    def op(self, x: Tuple[Elem, Elem], y: Tuple[Elem, Elem]) -> Tuple[Elem, Elem]:
        return self.left.op(x[0], y[0]), self.right.op(x[1], y[1])

    def inv(self, x: Tuple[Elem, Elem]) -> Tuple[Elem, Elem]:
        return self.left.inv(x[0]), self.right.inv(x[1])

    def norm(self, x: Tuple[Elem, Elem]) -> int:
        return self.left.norm(x[0]) + self.right.norm(x[1])

    def key(self, x: Tuple[Elem, Elem]) -> tuple:
        return self.left.sort_key(x[0]), self.right.sort_key(x[1])

    def contains(self, x: Elem) -> bool:
        return (isinstance(x, tuple) and len(x) == 2
                and self.left.contains(x[0]) and self.right.contains(x[1]))

    def _enumerate(self, radius: int) -> Iterable[Tuple[Elem, Elem]]:
        for u in self.left.ball(radius):
            for v in self.right.ball(radius - self.left.norm(u)):
                yield u, v

    def parse_element(self, text: str) -> Tuple[Elem, Elem]:
        text = text.strip()
        if not (text.startswith('(') and text.endswith(')')):
            raise MalformedInputError(f'product literal {text!r} must look like (x|y)')
        parts = split_top_level(text[1:-1], '|')
        if len(parts) != 2:
            raise MalformedInputError(f'product literal {text!r} must have exactly two parts')
        return self.left.parse_element(parts[0]), self.right.parse_element(parts[1])

    def format_element(self, x: Tuple[Elem, Elem]) -> str:
        return f'({self.left.format_element(x[0])}|{self.right.format_element(x[1])})'

    def embed_right(self, y: Elem) -> Tuple[Elem, Elem]:
        """y ↦ (1, y)."""
        return self.left.identity(), y


def _permutation_table(group: PermutationGroup) -> Tuple[List[List[int]], List[int]]:
    elements = sorted(group.generate(), key=lambda p: p.array_form)
    index = {tuple(p.array_form): i for i, p in enumerate(elements)}
    table = [[index[tuple((p * q).array_form)] for q in elements] for p in elements]
    generators = [index[tuple(g.array_form)] for g in group.generators]
    return table, generators


def _quaternion_table() -> Tuple[List[List[int]], List[int]]:
    units = []
    for position in range(4):
        for sign in (1, -1):
            coordinates = [0, 0, 0, 0]
            coordinates[position] = sign
            units.append(Quaternion(*coordinates))

    def coordinates_of(q: Quaternion) -> Tuple[int, ...]:
        return tuple(int(c) for c in (q.a, q.b, q.c, q.d))

    index = {coordinates_of(q): i for i, q in enumerate(units)}
    table = [[index[coordinates_of(p * q)] for q in units] for p in units]
    # i and j
    return table, [2, 4]


@lru_cache(maxsize=None)
def builtin_group(name: str) -> FiniteTableGroup:
    """The built-in finite tables: sym3, dih4 and quat8."""
    if name == 'sym3':
        table, generators = _permutation_table(SymmetricGroup(3))
    elif name == 'dih4':
        table, generators = _permutation_table(DihedralGroup(4))
    elif name == 'quat8':
        table, generators = _quaternion_table()
    else:
        raise MalformedInputError(f'unknown built-in group {name!r}')
    return FiniteTableGroup(table, generators, name)


BUILTIN_GROUPS = ('sym3', 'dih4', 'quat8')


def load_table(path: str) -> FiniteTableGroup:
    """Reads a table file: the order on the first line, then `order` lines of
    0-based indices, then one line listing the generator indices. Commas and
    whitespace both separate numbers."""
    try:
        with open(path, 'r') as infile:
            lines = [line.replace(',', ' ').split() for line in infile]
    except FileNotFoundError as exc:
        raise MalformedInputError(f'no table file found at {path}') from exc
    lines = [line for line in lines if line]
    try:
        order = int(lines[0][0])
        table = [[int(entry) for entry in line] for line in lines[1:order + 1]]
        generators = [int(entry) for entry in lines[order + 1]]
    except (IndexError, ValueError) as exc:
        raise MalformedInputError(f'{path} is not a valid table file') from exc
    if len(table) != order or any(len(row) != order for row in table):
        raise MalformedInputError(f'{path}: expected a {order}x{order} table')
    return FiniteTableGroup(table, generators, f'table:{path}')


def parse_group(text: str) -> Group:
    """Reads a group spec string: `free:k`, `z`, `zpow:n`, `cyc:m`, `sym3`,
    `dih4`, `quat8`, `table:<file>` or `prod(<spec>,<spec>)`."""
    text = text.strip()
    kind, _, argument = text.partition(':')
    kind = kind.lower()
    if text.lower() == 'z':
        return IntegerGroup()
    if text.lower() in BUILTIN_GROUPS:
        return builtin_group(text.lower())
    if text.lower().startswith('prod(') and text.endswith(')'):
        parts = split_top_level(text[5:-1], ',')
        if len(parts) != 2:
            raise MalformedInputError(f'{text!r}: prod takes exactly two group specs')
        return ProductGroup(parse_group(parts[0]), parse_group(parts[1]))
    if kind == 'table' and argument:
        return load_table(argument.strip())
    if kind in ('free', 'zpow', 'cyc') and argument:
        size = _parse_int(argument)
        if kind == 'free':
            return FreeGroup(size)
        if kind == 'zpow':
            return LatticeGroup(size)
        return CyclicGroup(size)
    raise MalformedInputError(f'{text!r} is not a group spec')


# Module-level forms of the group operations. They check that every operand
# belongs to G before operating.

def g_op(G: Group, x: Elem, y: Elem) -> Elem:
    G.check(x)
    G.check(y)
    return G.op(x, y)


def g_inv(G: Group, x: Elem) -> Elem:
    G.check(x)
    return G.inv(x)


def g_id(G: Group) -> Elem:
    return G.identity()


def g_eq(G: Group, x: Elem, y: Elem) -> bool:
    G.check(x)
    G.check(y)
    return x == y


def g_norm(G: Group, x: Elem) -> int:
    G.check(x)
    return G.norm(x)


def g_dist(G: Group, x: Elem, y: Elem) -> int:
    G.check(x)
    G.check(y)
    return G.dist(x, y)


def g_ball(G: Group, radius: int) -> List[Elem]:
    return list(G.ball(radius))


def subgroup_closure(G: Group, generators: Iterable[Elem]) -> FrozenSet[Elem]:
    """The subgroup of a finite group generated by `generators`."""
    if not G.is_finite:
        raise PreconditionError(f'subgroup closure needs a finite group, got {G.spec}')
    generators = [g for g in set(generators) if g != G.identity()]
    closure = {G.identity()}
    frontier = [G.identity()]
    while frontier:
        fresh = []
        for x in frontier:
            for g in generators:
                y = G.op(x, g)
                if y not in closure:
                    closure.add(y)
                    fresh.append(y)
        frontier = fresh
    return frozenset(closure)


def normal_closure(G: Group, generators: Iterable[Elem]) -> FrozenSet[Elem]:
    """The smallest normal subgroup of a finite group containing `generators`."""
    generators = set(generators)
    conjugates = {G.conj(x, g) for x in generators for g in G.elements()}
    return subgroup_closure(G, conjugates)


def centralizer(G: Group, elements: Iterable[Elem]) -> FrozenSet[Elem]:
    """Elements of a finite group commuting with every one of `elements`."""
    if not G.is_finite:
        raise PreconditionError(f'centralizer needs a finite group, got {G.spec}')
    elements = list(set(elements))
    return frozenset(g for g in G.elements() if all(G.commutes(g, x) for x in elements))
