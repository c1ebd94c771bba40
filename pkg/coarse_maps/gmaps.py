"""Contains GroupMap, the evaluable and memoizing form of a MapSpec, plus the
seeded pseudo-random families and a few helpers over maps."""
from __future__ import annotations
import hashlib
import logging

from functools import singledispatch
from typing import Callable, Dict

import coarse_maps.mapspec as ms
from coarse_maps.groups import Elem, FreeGroup, Group
from coarse_maps.errors import GroupMismatchError


LOGGER = logging.getLogger('coarse_maps')

MASK64 = (1 << 64) - 1


def mix64(seed: int, index: int) -> int:
    """The SplitMix64 finalizer applied to seed XOR index, as an unsigned
    64-bit integer."""
    z = (seed ^ index) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stable_index(group: Group, g: Elem) -> int:
    """A platform-independent 64-bit index of an element, taken from a hash of
    its canonical literal."""
    digest = hashlib.blake2b(group.format_element(g).encode('utf8'), digest_size=8).digest()
    return int.from_bytes(digest, 'big')


def random_map_eval(seed: int, dom_radius: int, tgt_radius: int, g: Elem,
                    source: Group, target: Group) -> Elem:
    """Value at g of the seeded random map: the identity at the identity and
    outside the source ball of radius `dom_radius`; otherwise the entry of the
    target ball of radius `tgt_radius` picked by mix64(seed, i), where i is the
    position of g in the source ball."""
    if g == source.identity():
        return target.identity()
    index = source.ball_index(dom_radius).get(g)
    if index is None:
        return target.identity()
    ball = target.ball(tgt_radius)
    return ball[mix64(seed, index) % len(ball)]


def brooks_count(letters, word, inverse) -> int:
    """Overlapping occurrences of `word` minus those of `inverse`, both given
    as tuples of signed indices."""
    size = len(word)
    count = 0
    for i in range(len(letters) - size + 1):
        window = letters[i:i + size]
        if window == word:
            count += 1
        elif window == inverse:
            count -= 1
    return count


class GroupMap:
    """Evaluates a MapSpec. Values are memoized per instance, so a GroupMap
    must not be shared between threads without a lock."""

    def __init__(self, spec: ms.MapSpec):
        if not isinstance(spec, ms.MapSpec):
            raise TypeError('spec must be a MapSpec')
        self.spec = spec
        self.source = spec.source
        self.target = spec.target
        self._cache: Dict[Elem, Elem] = {}
        self._compute = _evaluator(spec)

    @classmethod
    def from_text(cls, text: str, source: Group = None, target: Group = None) -> GroupMap:
        return cls(ms.parse_map(text, source, target))

    def __call__(self, g: Elem) -> Elem:
        try:
            return self._cache[g]
        except KeyError:
            value = self._compute(g)
            self._cache[g] = value
            return value

    def eval(self, g: Elem) -> Elem:
        """Like calling the map, but checks that g lies in the source group."""
        self.source.check(g)
        return self(g)

    def uncached(self, g: Elem) -> Elem:
        self.source.check(g)
        return self._compute(g)

    def clear_cache(self):
        self._cache.clear()

    @property
    def cache_size(self) -> int:
        return len(self._cache)

    def __str__(self) -> str:
        return ms.format_map(self.spec)

    def __repr__(self) -> str:
        return f'GroupMap({ms.format_map(self.spec)!r}, {self.source}->{self.target})'


def evaluate(phi: GroupMap, g: Elem) -> Elem:
    return phi.eval(g)


@singledispatch
def _evaluator(spec: ms.MapSpec) -> Callable[[Elem], Elem]:
    raise TypeError(f'no evaluator for {type(spec).__name__}')


@_evaluator.register
def _(spec: ms.Identity):
    return lambda g: g


@_evaluator.register
def _(spec: ms.Constant):
    return lambda g: spec.c


@_evaluator.register
def _(spec: ms.Hom):
    source, target = spec.source, spec.target
    if isinstance(source, FreeGroup):
        images = {}
        for i, image in enumerate(spec.images):
            images[i + 1] = image
            images[-(i + 1)] = target.inv(image)

        def hom(g):
            value = target.identity()
            for letter in g.letters:
                value = target.op(value, images[letter])
            return value
        return hom
    image = spec.images[0]
    return lambda n: target.power(image, n)


@_evaluator.register
def _(spec: ms.Brooks):
    word = spec.word.letters
    inverse = tuple(-letter for letter in reversed(word))
    return lambda g: brooks_count(g.letters, word, inverse)


@_evaluator.register
def _(spec: ms.FloorScale):
    return lambda n: (spec.p * n) // spec.q


@_evaluator.register
def _(spec: ms.Monomial):
    return lambda n: n ** spec.degree


@_evaluator.register
def _(spec: ms.FloorQuad):
    return lambda n: (spec.p * n * n) // spec.q


@_evaluator.register
def _(spec: ms.Perturb):
    base, target = GroupMap(spec.base), spec.target
    return lambda g: target.op(base(g), spec.c)


@_evaluator.register
def _(spec: ms.Shift):
    base, source = GroupMap(spec.base), spec.source
    return lambda g: base(source.op(g, spec.a))


@_evaluator.register
def _(spec: ms.Unitalize):
    base, source, target = GroupMap(spec.base), spec.source, spec.target
    correction = target.inv(base(source.identity()))
    return lambda g: target.op(base(g), correction)


@_evaluator.register
def _(spec: ms.Compose):
    outer, inner = GroupMap(spec.outer), GroupMap(spec.inner)
    return lambda g: outer(inner(g))


@_evaluator.register
def _(spec: ms.ZQuad):
    # zquad builds on this module
    from coarse_maps.zquad import QuadraticSequence, ZQuadSeed  # pylint: disable=import-outside-toplevel
    sequence = QuadraticSequence(ZQuadSeed(spec.a, spec.b, spec.target))
    return sequence.value


@_evaluator.register
def _(spec: ms.RandomMap):
    source, target = spec.source, spec.target
    return lambda g: random_map_eval(spec.seed, spec.dom_radius, spec.tgt_radius,
                                     g, source, target)


@_evaluator.register
def _(spec: ms.Jitter):
    base, source, target = GroupMap(spec.base), spec.source, spec.target
    noise = target.ball(spec.tgt_radius)

    def jitter(g):
        if g == source.identity():
            return base(g)
        return target.op(base(g), noise[mix64(spec.seed, stable_index(source, g)) % len(noise)])
    return jitter


@_evaluator.register
def _(spec: ms.Recenter):
    base, source, target = GroupMap(spec.base), spec.source, spec.target
    shift = source.inv(spec.a)
    return lambda g: target.op(base(source.op(g, shift)), spec.b)


@_evaluator.register
def _(spec: ms.Diff):
    base, source, target = GroupMap(spec.base), spec.source, spec.target
    return lambda x: target.op(base(source.op(spec.g, x)), target.inv(base(x)))


def is_unital(phi: GroupMap) -> bool:
    return phi(phi.source.identity()) == phi.target.identity()


def distance(phi: GroupMap, psi: GroupMap, radius: int) -> int:
    """Largest d(φ(x), ψ(x)) over the source ball of the given radius."""
    if phi.source != psi.source or phi.target != psi.target:
        raise GroupMismatchError(f'cannot compare {phi!r} with {psi!r}')
    return max(phi.target.dist(phi(x), psi(x)) for x in phi.source.ball(radius))


def image(phi: GroupMap, radius: int):
    """φ applied to the source ball, in ball order."""
    return [phi(x) for x in phi.source.ball(radius)]
