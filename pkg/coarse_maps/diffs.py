"""Non-commutative difference operators (𝔡_gφ)(x) = φ(gx)φ(x)⁻¹, their
iterates, the sets P_d and quasi-polynomial degree estimation.

Iterates compose with the first shift applied last:
𝔡_{g1,...,gr} = 𝔡_{g1} ∘ ... ∘ 𝔡_{gr}."""
from __future__ import annotations
import logging

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import coarse_maps.mapspec as ms
from coarse_maps.defects import (
    DEFAULT_BUDGET,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_WINDOW,
    CheckResult,
    DefectProfile,
    DefectSet,
    SetGrower,
    grow_profile,
    grow_set,
)
from coarse_maps.errors import ConfigurationError
from coarse_maps.gmaps import GroupMap
from coarse_maps.groups import Elem, Group


LOGGER = logging.getLogger('coarse_maps')

MAX_DEGREE = 3


@dataclass(frozen=True)
class DiffSpec:
    """An iterated difference of `base` with shifts (g1, ..., gr)."""
    base: GroupMap
    shifts: Tuple[Elem, ...]

    def __post_init__(self):
        for g in self.shifts:
            self.base.source.check(g, 'difference shift')

    def leaves(self, x: Elem) -> List[Tuple[Elem, int]]:
        return leaf_terms(self.base.source, self.shifts, x)

    def value(self, x: Elem) -> Elem:
        return _evaluate_leaves(self.base, self.leaves(x))


def dg(phi: GroupMap, g: Elem) -> GroupMap:
    """The map x ↦ φ(gx)φ(x)⁻¹."""
    return GroupMap(ms.Diff(phi.source, phi.target, phi.spec, g))


def leaf_terms(group: Group, shifts: Sequence[Elem], x: Elem) -> List[Tuple[Elem, int]]:
    """Expands (𝔡_{g1,...,gr}φ)(x) into the ordered product of φ(arg)^sign,
    returned as (arg, sign) pairs. There are 2^r of them."""
    if not shifts:
        return [(x, 1)]
    head, rest = shifts[0], shifts[1:]
    moved = leaf_terms(group, rest, group.op(head, x))
    inverted = [(arg, -sign) for arg, sign in reversed(leaf_terms(group, rest, x))]
    return moved + inverted


def _evaluate_leaves(phi: GroupMap, leaves: Sequence[Tuple[Elem, int]]) -> Elem:
    H = phi.target
    value = H.identity()
    for arg, sign in leaves:
        value = H.op(value, phi(arg) if sign > 0 else H.inv(phi(arg)))
    return value


def iter_diff(phi: GroupMap, shifts: Sequence[Elem]) -> Elem:
    """(𝔡_{g1,...,gr}φ)(1) by literal expansion."""
    for g in shifts:
        phi.source.check(g, 'difference shift')
    return _evaluate_leaves(phi, leaf_terms(phi.source, shifts, phi.source.identity()))


def lemma43(phi: GroupMap, g1: Elem, g2: Elem, g3: Elem) -> Elem:
    """Closed form of (𝔡_{g1,g2,g3}φ)(1):
    φ(g3g2g1)φ(g2g1)⁻¹φ(g1)φ(g3g1)⁻¹φ(g3)φ(1)⁻¹φ(g2)φ(g3g2)⁻¹."""
    G, H = phi.source, phi.target
    op, inv = H.op, H.inv
    g2g1 = G.op(g2, g1)
    first = op(op(phi(G.op(g3, g2g1)), inv(phi(g2g1))), op(phi(g1), inv(phi(G.op(g3, g1)))))
    second = op(op(phi(g3), inv(phi(G.identity()))), op(phi(g2), inv(phi(G.op(g3, g2)))))
    return op(first, second)


def _check_degree(degree: int):
    if not 0 <= degree <= MAX_DEGREE:
        raise ConfigurationError(f'degree must be between 0 and {MAX_DEGREE}, got {degree}')


def _pd_grower(phi: GroupMap, degree: int, budget: int, samples: int, seed: int) -> SetGrower:
    _check_degree(degree)
    G = phi.source
    if degree == 2:
        def term(g1, g2, g3):
            return lemma43(phi, g1, g2, g3)
    else:
        def term(*shifts):
            return _evaluate_leaves(phi, leaf_terms(G, shifts, G.identity()))
    return SetGrower(G, phi.target, degree + 1, term, budget, samples, seed)


def set_Pd(phi: GroupMap, degree: int, radius: int,  # pylint: disable=invalid-name
           budget: int = DEFAULT_BUDGET, samples: int = DEFAULT_SAMPLES,
           seed: int = DEFAULT_SEED) -> DefectSet:
    """P_d = {(𝔡_{g1,...,g_{d+1}}φ)(1)} with shifts ranging over ball(R)^{d+1}."""
    return grow_set(_pd_grower(phi, degree, budget, samples, seed), radius)


def pd_profile(phi: GroupMap, degree: int, max_radius: int, window: int = DEFAULT_WINDOW,
               budget: int = DEFAULT_BUDGET, samples: int = DEFAULT_SAMPLES,
               seed: int = DEFAULT_SEED) -> DefectProfile:
    grower = _pd_grower(phi, degree, budget, samples, seed)
    return grow_profile(f'P_{degree}', grower, max_radius, window)


@dataclass
class DegreeEstimate:
    """Per-degree P_d profiles and the smallest degree whose profile
    plateaus, or None when none does up to the largest degree tried."""
    map_text: str
    profiles: List[DefectProfile]
    degree: Optional[int]

    def summary(self) -> Dict[str, Any]:
        return {
            'map': self.map_text,
            'degrees': [{'d': d, 'classification': p.classification.value}
                        for d, p in enumerate(self.profiles)],
            'verdict': self.degree if self.degree is not None else f'none <= {len(self.profiles) - 1}',
        }


def degree_estimate(phi: GroupMap, max_degree: int = 2, max_radius: int = 5,
                    window: int = DEFAULT_WINDOW, budget: int = DEFAULT_BUDGET,
                    samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> DegreeEstimate:
    """Computes the P_d profiles for d = 0..max_degree and reports the smallest
    d that classifies as Plateau."""
    _check_degree(max_degree)
    profiles, degree = [], None
    for d in range(max_degree + 1):
        profile = pd_profile(phi, d, max_radius, window, budget, samples, seed)
        profiles.append(profile)
        if degree is None and profile.is_plateau:
            degree = d
    LOGGER.info(f'{phi}: estimated degree {degree}')
    return DegreeEstimate(str(phi), profiles, degree)


def diff_identity_check(phi: GroupMap, radius: int = 2) -> CheckResult:
    """(𝔡_gφ)(x) = (𝔡_{gx}φ)(1)·((𝔡_xφ)(1))⁻¹ for g, x in ball(R)."""
    G, H = phi.source, phi.target
    for g in G.ball(radius):
        shifted = dg(phi, g)
        for x in G.ball(radius):
            expected = H.op(iter_diff(phi, [G.op(g, x)]), H.inv(iter_diff(phi, [x])))
            if shifted(x) != expected:
                return CheckResult('diff-identity', False,
                                   {'g': G.format_element(g), 'x': G.format_element(x)})
    LOGGER.debug(f'diff identity holds for {phi} on ball({radius})')
    return CheckResult('diff-identity', True)
