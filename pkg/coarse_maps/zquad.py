"""Quadratic maps out of ℤ and degree-2 relator checks.

A candidate map φ: ℤ → H is determined by a = φ(1) and b = φ(2) through the
recursion φ(n+1)φ(2)⁻¹φ(1)φ(n)⁻¹φ(n-1)φ(1)φ(n)⁻¹ = 1 with φ(0) = 1. The
recursion holds for every unital quadratic map; whether the sequence it
generates is quadratic is checked, never assumed."""
from __future__ import annotations
import itertools
import logging

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import coarse_maps.mapspec as ms
from coarse_maps.defects import DEFAULT_BUDGET, DEFAULT_SAMPLES, DEFAULT_SEED, CheckResult, index_triples
from coarse_maps.errors import ConfigurationError, PreconditionError
from coarse_maps.gmaps import GroupMap, is_unital
from coarse_maps.groups import Elem, Group, IntegerGroup


LOGGER = logging.getLogger('coarse_maps')


@dataclass(frozen=True)
class ZQuadSeed:
    a: Elem
    b: Elem
    target: Group

    def __post_init__(self):
        if not isinstance(self.target, Group):
            raise TypeError('target must be a Group')
        self.target.check(self.a, 'a')
        self.target.check(self.b, 'b')

    def formatted(self) -> Tuple[str, str]:
        return self.target.format_element(self.a), self.target.format_element(self.b)


class QuadraticSequence:
    """φ(n) for every integer n, extended lazily in both directions and kept.
    A sequence instance must not be shared between threads."""

    def __init__(self, seed: ZQuadSeed):
        H = seed.target
        self.seed = seed
        self._forward: List[Elem] = [H.identity(), seed.a, seed.b]
        self._backward: List[Elem] = [H.identity()]
        a_inverse = H.inv(seed.a)
        self._a_inverse = a_inverse
        self._a_inverse_b = H.op(a_inverse, seed.b)

    def _at(self, n: int) -> Elem:
        return self._forward[n] if n >= 0 else self._backward[-n]

    def value(self, n: int) -> Elem:
        H = self.seed.target
        op, inv = H.op, H.inv
        # φ(n+1) = φ(n)·a⁻¹·φ(n-1)⁻¹·φ(n)·a⁻¹·b
        while len(self._forward) <= n:
            k = len(self._forward) - 1
            current, previous = self._forward[k], self._forward[k - 1]
            self._forward.append(
                op(op(op(current, self._a_inverse), inv(previous)), op(current, self._a_inverse_b)))
        # φ(n-1) = φ(n)·a⁻¹·b·φ(n+1)⁻¹·φ(n)·a⁻¹
        while len(self._backward) <= -n:
            k = -(len(self._backward) - 1)
            current, following = self._at(k), self._at(k + 1)
            self._backward.append(
                op(op(op(current, self._a_inverse_b), inv(following)), op(current, self._a_inverse)))
        return self._at(n)


@lru_cache(maxsize=128)
def _sequence(seed: ZQuadSeed) -> QuadraticSequence:
    return QuadraticSequence(seed)


def extend(seed: ZQuadSeed, n: int) -> Elem:
    """φ(n) of the sequence generated by the seed."""
    return _sequence(seed).value(n)


def as_map(seed: ZQuadSeed) -> GroupMap:
    return GroupMap(ms.ZQuad(IntegerGroup(), seed.target, seed.a, seed.b))


def closed_form(seed: ZQuadSeed, n: int) -> Elem:
    """n·a + C(n,2)·(b - 2a), valid for abelian targets only."""
    H = seed.target
    if not H.is_abelian:
        raise PreconditionError(f'the closed form needs an abelian target, got {H}')
    curvature = H.op(seed.b, H.inv(H.power(seed.a, 2)))
    return H.op(H.power(seed.a, n), H.power(curvature, n * (n - 1) // 2))


def recursion_residual(seed: ZQuadSeed, n: int) -> Elem:
    """φ(n+1)φ(2)⁻¹φ(1)φ(n)⁻¹φ(n-1)φ(1)φ(n)⁻¹, the identity for every n."""
    H = seed.target
    op, inv = H.op, H.inv
    value = lambda k: extend(seed, k)  # pylint: disable=unnecessary-lambda-assignment
    head = op(op(value(n + 1), inv(seed.b)), op(seed.a, inv(value(n))))
    return op(head, op(op(value(n - 1), seed.a), inv(value(n))))


@dataclass(frozen=True)
class Pol2Relator:
    """τ(g3g2g1)τ(g2g1)⁻¹τ(g1)τ(g3g1)⁻¹τ(g3)τ(g2)τ(g3g2)⁻¹ for a source triple."""
    group: Group
    g1: Elem
    g2: Elem
    g3: Elem

    @property
    def word(self) -> Tuple[Tuple[Elem, int], ...]:
        op = self.group.op
        g1, g2, g3 = self.g1, self.g2, self.g3
        return ((op(g3, op(g2, g1)), 1), (op(g2, g1), -1), (g1, 1), (op(g3, g1), -1),
                (g3, 1), (g2, 1), (op(g3, g2), -1))

    def evaluate(self, phi: GroupMap) -> Elem:
        """Substitutes τ(g) ↦ φ(g)."""
        H = phi.target
        value = H.identity()
        for arg, sign in self.word:
            value = H.op(value, phi(arg) if sign > 0 else H.inv(phi(arg)))
        return value

    def formatted(self) -> dict:
        fmt = self.group.format_element
        return {'g1': fmt(self.g1), 'g2': fmt(self.g2), 'g3': fmt(self.g3)}


def window_check(seed: ZQuadSeed, window: int, scale: int) -> CheckResult:
    """Checks that (𝔡_{g1,g2,g3}φ)(1) vanishes for |g1|, |g2|, |g3| <= S, using
    values of the sequence on [-3S, 3S]; `window` is the largest |n| the
    caller allows the sequence to be evaluated at."""
    if scale < 0:
        raise ConfigurationError('scale must be non-negative')
    if window < 3 * scale:
        raise ConfigurationError(f'window {window} is smaller than 3·S = {3 * scale}')
    phi = as_map(seed)
    Z, H = phi.source, phi.target
    for g1, g2, g3 in itertools.product(Z.ball(scale), repeat=3):
        relator = Pol2Relator(Z, g1, g2, g3)
        value = relator.evaluate(phi)
        if value != H.identity():
            witness = relator.formatted()
            witness['value'] = H.format_element(value)
            return CheckResult('window', False, witness)
    return CheckResult('window', True, details={'scale': scale})


def l49_identity(seed: ZQuadSeed) -> bool:
    """Whether [a, b] commutes with b⁻¹a², a necessary condition for the seed
    to extend to a quadratic map."""
    H = seed.target
    commutator = H.commutator(seed.a, seed.b)
    return H.commutes(commutator, H.op(H.inv(seed.b), H.power(seed.a, 2)))


def pol2_relator_check(phi: GroupMap, radius: int, budget: int = DEFAULT_BUDGET,
                       samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> CheckResult:
    """Whether τ(g) ↦ φ(g) kills every degree-2 relator with g1, g2, g3 in
    ball(R), i.e. whether φ factors through the universal group at this scale."""
    if not is_unital(phi):
        raise PreconditionError(f'{phi} is not unital')
    G, H = phi.source, phi.target
    ball = G.ball(radius)
    triples, mode = index_triples(len(ball), budget, samples, seed)
    for i, j, k in triples:
        relator = Pol2Relator(G, ball[i], ball[j], ball[k])
        value = relator.evaluate(phi)
        if value != H.identity():
            witness = relator.formatted()
            witness['value'] = H.format_element(value)
            LOGGER.info(f'{phi}: relator not killed at {witness}')
            return CheckResult('pol2', False, witness, mode)
    return CheckResult('pol2', True, mode=mode, details={'radius': radius})


def quadratic_extension_exists(seed: ZQuadSeed, scale: int = 2) -> CheckResult:
    """Combines the commutation identity and the window check: a seed with a
    unital quadratic extension passes both."""
    identity_holds = l49_identity(seed)
    window = window_check(seed, 3 * scale, scale)
    a, b = seed.formatted()
    details = {'a': a, 'b': b, 'l49_identity': identity_holds, 'window_check': window.holds}
    return CheckResult('quadratic-extension', identity_holds and window.holds,
                       window.witness, details=details)
