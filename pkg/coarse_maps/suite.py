"""The theorem suite: a battery of finite-scale properties every build must
satisfy. Each property returns a CheckResult; the suite passes when all of
them hold."""
from __future__ import annotations
import logging
import time

from typing import Callable, Dict, List, Tuple

import numpy as np

import coarse_maps.mapspec as ms
from coarse_maps.coarse import delta_sample, pertdelta_check, pi_comm_correspondence, pi_probe
from coarse_maps.defects import (
    EXACT,
    CheckResult,
    equiv_defect,
    lemma_aphi_check,
    perturbation_identity_check,
    profile,
)
from coarse_maps.diffs import iter_diff, lemma43
from coarse_maps.errors import ConfigurationError
from coarse_maps.gmaps import GroupMap
from coarse_maps.groups import FreeGroup, IntegerGroup, LatticeGroup, builtin_group, parse_group
from coarse_maps.normalq import CYCLIC_IMAGE, QUADRATIC_LIKE, VIOLATION, check_normality, hyperbolic_desk_check
from coarse_maps.zquad import ZQuadSeed, closed_form, extend, l49_identity, pol2_relator_check, window_check


LOGGER = logging.getLogger('coarse_maps')

FREE2 = FreeGroup(2)
Z = IntegerGroup()

# (base map, source, target, perturbation constant)
CORPUS: List[Tuple[str, str, str, str]] = [
    ('brooks{ab}', 'free:2', 'z', '2'),
    ('brooks{ba}', 'free:2', 'z', '-1'),
    ('floor_scale{1,2}', 'z', 'z', '1'),
    ('floor_scale{2,3}', 'z', 'z', '-2'),
    ('floor_scale{3,2}', 'z', 'z', '1'),
    ('hom{a->ab,b->b}', 'free:2', 'free:2', 'ab'),
    ('hom{1->a}', 'z', 'free:2', 'b'),
    ('id', 'free:2', 'free:2', 'ba'),
    ('hom{a->b,b->a}', 'free:2', 'free:2', 'A'),
    ('id', 'z', 'z', '-2'),
]

# bounded pseudo-random perturbations of the identity of F₂, which are not
# quasi-homomorphisms
UNBOUNDED = [f'jitter{{id,{seed},1}}' for seed in range(1, 6)]

PERFORMANCE_BUDGET = 3_000_000
PERFORMANCE_SECONDS = 30.0


def corpus_map(base: str, source: str, target: str) -> GroupMap:
    return GroupMap.from_text(base, parse_group(source), parse_group(target))


def perturbed_corpus() -> List[GroupMap]:
    return [corpus_map(f'perturb{{{base},{c}}}', source, target) for base, source, target, c in CORPUS]


def _fail(name: str, **witness) -> CheckResult:
    return CheckResult(name, False, {key: str(value) for key, value in witness.items()})


def lemma43_oracle(seed: int) -> CheckResult:
    """The closed form of the third difference agrees with its literal
    expansion on seeded random maps."""
    rng = np.random.default_rng(seed)
    cases = [(FREE2, FREE2, 2, 2, FREE2.ball(1)), (Z, Z, 8, 3, Z.ball(2))]
    for source, target, dom_radius, tgt_radius, shifts in cases:
        for map_seed in rng.integers(0, 2 ** 32, size=100).tolist():
            phi = GroupMap(ms.RandomMap(source, target, map_seed, dom_radius, tgt_radius))
            for g1 in shifts:
                for g2 in shifts:
                    for g3 in shifts:
                        if lemma43(phi, g1, g2, g3) != iter_diff(phi, [g1, g2, g3]):
                            return _fail('lemma43-oracle', map=phi, g1=g1, g2=g2, g3=g3)
    return CheckResult('lemma43-oracle', True, details={'maps': 200})


def middle_round_trip(seed: int) -> CheckResult:
    """Unitalized middle quasi-homomorphisms have plateauing D-profiles, and
    unbounded jitters of the identity do not."""
    del seed
    for phi in perturbed_corpus():
        unital = GroupMap(ms.Unitalize(phi.source, phi.target, phi.spec))
        if not profile('D', unital, 5, 3).is_plateau:
            return _fail('middle-round-trip', map=unital)
    for text in UNBOUNDED:
        phi = GroupMap.from_text(text, FREE2, FREE2)
        if profile('D', phi, 5, 3).is_plateau:
            return _fail('middle-round-trip', map=phi)
    return CheckResult('middle-round-trip', True)


def perturbation_identity(seed: int) -> CheckResult:
    del seed
    for base, source, target, _ in CORPUS:
        phi = corpus_map(base, source, target)
        for c in phi.target.ball(2):
            result = perturbation_identity_check(phi, c, 3)
            if not result.holds:
                return result
    return CheckResult('perturbation-identity', True)


def aphi_inclusions(seed: int) -> CheckResult:
    for phi in perturbed_corpus():
        result = lemma_aphi_check(phi, 2, seed=seed)
        if not result.holds:
            return result
    return CheckResult('lemma-aphi', True)


def zquad_anchors(seed: int) -> CheckResult:
    del seed
    a, b = FREE2.parse_element('a'), FREE2.parse_element('b')
    free_seed = ZQuadSeed(a, b, FREE2)
    if FREE2.format_element(extend(free_seed, 3)) != 'bAAbAb':
        return _fail('zquad-anchors', n=3)
    if FREE2.format_element(extend(free_seed, -1)) != 'AbAA':
        return _fail('zquad-anchors', n=-1)
    if l49_identity(free_seed) or window_check(free_seed, 6, 2).holds:
        return _fail('zquad-anchors', seed='(a, b)')
    plane = LatticeGroup(2)
    for x in plane.ball(2):
        for y in plane.ball(2):
            abelian_seed = ZQuadSeed(x, y, plane)
            if not l49_identity(abelian_seed):
                return _fail('zquad-anchors', a=x, b=y)
    lattice_seed = ZQuadSeed((1, 0), (0, 1), plane)
    for n in range(-20, 21):
        if extend(lattice_seed, n) != closed_form(lattice_seed, n):
            return _fail('zquad-anchors', closed_form_n=n)
    return CheckResult('zquad-anchors', True)


def quadratic_battery(seed: int) -> CheckResult:
    del seed
    square = GroupMap.from_text('monomial{2}')
    rounded = GroupMap.from_text('floor_quad{1,3}')
    if not pol2_relator_check(square, 5).holds:
        return _fail('quadratic-battery', map=square)
    rounded_check = pol2_relator_check(rounded, 5)
    if rounded_check.holds or not rounded_check.witness:
        return _fail('quadratic-battery', map=rounded)
    if equiv_defect(square, 4).max_norms[-1] != 0:
        return _fail('quadratic-battery', equivariance=square)
    rounded_equiv = equiv_defect(rounded, 4)
    # |μ(xt) - μ(x)| < 4/3 for ⌊n²/3⌋
    if not rounded_equiv.is_plateau or rounded_equiv.max_norms[-1] > 1:
        return _fail('quadratic-battery', equivariance=rounded)
    return CheckResult('quadratic-battery', True, details={'witness': rounded_check.witness})


def pi_battery(seed: int) -> CheckResult:
    del seed
    for base, source, target, _ in CORPUS:
        phi = corpus_map(base, source, target)
        if not phi.target.is_abelian:
            continue
        for c in phi.target.ball(2):
            norms = pi_probe(phi, c, 5).max_norms
            if norms != [phi.target.norm(c)] * 5:
                return _fail('pi-battery', map=phi, c=c)
    expected = [3, 5, 7, 9, 11]
    identity = corpus_map('id', 'free:2', 'free:2')
    if pi_probe(identity, FREE2.parse_element('a'), 5).max_norms != expected:
        return _fail('pi-battery', map=identity)
    power = corpus_map('hom{1->a}', 'z', 'free:2')
    if pi_probe(power, FREE2.parse_element('b'), 5).max_norms != expected:
        return _fail('pi-battery', map=power)
    brooks = corpus_map('brooks{ab}', 'free:2', 'z')
    if not pertdelta_check(brooks, 2, 2, 5).holds:
        return _fail('pi-battery', pertdelta=brooks)
    return CheckResult('pi-battery', True)


def coarse_correspondence(seed: int) -> CheckResult:
    """Plateau of the conjugation probe of c matches boundedness of the
    commensurator witnesses of (1, c) on the graph."""
    del seed
    cases = [
        (corpus_map('id', 'free:2', 'free:2'), ['1', 'a']),
        (corpus_map('hom{1->a}', 'z', 'free:2'), ['1', 'a', 'b']),
        (corpus_map('brooks{ab}', 'free:2', 'z'), ['0', '1']),
    ]
    floor = corpus_map('floor_scale{1,2}', 'z', 'z')
    cases.append((floor, [str(c) for c in delta_sample(floor, 2, 1).sorted()]))
    compared = 0
    for phi, constants in cases:
        for text in constants:
            result = pi_comm_correspondence(phi, phi.target.parse_element(text), radius=2,
                                            probe_radius=6, max_radius=5)
            compared += 1
            if not result.agrees:
                return _fail('coarse-correspondence', map=phi, c=text)
    return CheckResult('coarse-correspondence', True, details={'pairs': compared})


def normality_battery(seed: int) -> CheckResult:
    del seed
    sym3 = builtin_group('sym3')
    almost = GroupMap.from_text('compose{hom{1->3},random{seed=7,domR=3,tgtR=1},via=cyc:3}', Z, sym3)
    if check_normality(almost, 4, 3).passed is not True:
        return _fail('normality-battery', map=almost)
    composed = GroupMap.from_text('compose{floor_scale{1,2},monomial{2}}')
    if check_normality(composed, 4, 3).passed is not True:
        return _fail('normality-battery', map=composed)
    free_quad = GroupMap.from_text('zquad{a,b}', Z, FREE2)
    if check_normality(free_quad, 4, 3).q1.passed:
        return _fail('normality-battery', map=free_quad)
    verdicts = [
        (GroupMap.from_text('hom{1->a}', Z, FREE2), QUADRATIC_LIKE),
        (GroupMap.from_text('compose{hom{1->a},floor_quad{1,3}}', Z, FREE2), CYCLIC_IMAGE),
        (GroupMap.from_text('random{seed=2,domR=3,tgtR=3}', FREE2, FREE2), VIOLATION),
    ]
    for phi, expected in verdicts:
        verdict = hyperbolic_desk_check(phi, 3).details['verdict']
        if verdict != expected:
            return _fail('normality-battery', map=phi, verdict=verdict)
    return CheckResult('normality-battery', True)


def performance(seed: int) -> CheckResult:
    """The D-profile of brooks{ab} up to radius 6, all 1457² pairs of the last
    radius enumerated, within PERFORMANCE_SECONDS."""
    del seed
    phi = corpus_map('brooks{ab}', 'free:2', 'z')
    start = time.perf_counter()
    result = profile('D', phi, 6, 3, budget=PERFORMANCE_BUDGET)
    elapsed = time.perf_counter() - start
    LOGGER.info(f'D-profile of {phi} up to radius 6 took {elapsed:.1f}s ({result.mode})')
    details = {'seconds': round(elapsed, 1), 'plateau': result.is_plateau}
    if result.mode != EXACT or elapsed >= PERFORMANCE_SECONDS or not result.is_plateau:
        return CheckResult('performance', False,
                           {'mode': result.mode, 'seconds': f'{elapsed:.1f}',
                            'classification': result.classification.value},
                           mode=result.mode, details=details)
    return CheckResult('performance', True, mode=result.mode, details=details)


CRITERIA: Dict[str, Callable[[int], CheckResult]] = {
    'lemma43-oracle': lemma43_oracle,
    'middle-round-trip': middle_round_trip,
    'perturbation-identity': perturbation_identity,
    'lemma-aphi': aphi_inclusions,
    'zquad-anchors': zquad_anchors,
    'quadratic-battery': quadratic_battery,
    'pi-battery': pi_battery,
    'coarse-correspondence': coarse_correspondence,
    'normality-battery': normality_battery,
    'performance': performance,
}


def run_suite(seed: int = 42, only: List[str] = None) -> List[CheckResult]:
    unknown = sorted(set(only or []) - set(CRITERIA))
    if unknown:
        raise ConfigurationError(f"unknown criteria {unknown}; choose from {list(CRITERIA)}")
    results = []
    for name, criterion in CRITERIA.items():
        if only and name not in only:
            continue
        LOGGER.info(f'running {name}')
        result = criterion(seed)
        result.name = name
        LOGGER.info(f'{name}: {result.verdict}')
        results.append(result)
    return results
