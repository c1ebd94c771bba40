"""Point sets in a group, quasi-subgroup and commensurator witnesses, and the
conjugation probes of a map.

A point set is filtered by a level: for the graph of φ the level of (x, φ(x))
is ‖x‖, for other sets it is the group norm. Witness searches minimize the
witness norm and break ties by the canonical element order, so reports are
deterministic."""
from __future__ import annotations
import abc
import enum
import itertools
import logging

from dataclasses import dataclass, field
from typing import Callable, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

import coarse_maps.mapspec as ms
from coarse_maps.defects import (
    DEFAULT_BUDGET,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_WINDOW,
    EXACT,
    SAMPLED,
    CheckResult,
    DefectProfile,
    DefectSet,
    ProfileRow,
    SetGrower,
    check_profile_parameters,
    grow_profile,
    profile,
    set_D,
)
from coarse_maps.errors import ConfigurationError
from coarse_maps.gmaps import GroupMap
from coarse_maps.groups import Elem, Group, ProductGroup


LOGGER = logging.getLogger('coarse_maps')


class PointSet(abc.ABC):
    """A subset Λ of `group` whose members are produced level by level."""

    def __init__(self, group: Group, radius: int, label: str):
        if radius < 0:
            raise ConfigurationError('radius must be non-negative')
        self.group = group
        self.radius = radius
        self.label = label

    @abc.abstractmethod
    def members(self, radius: int) -> List[Elem]:
        """Members of level at most `radius`, in canonical order."""

    @property
    def elements(self) -> List[Elem]:
        return self.members(self.radius)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def translate(self, t: Elem) -> TranslatedSet:
        return TranslatedSet(self, t)

    def __repr__(self) -> str:
        return f'{type(self).__name__}({self.label!r}, radius={self.radius})'


class GraphSample(PointSet):
    """Λ = {(x, φ(x))} ⊆ G×H, levelled by ‖x‖."""

    def __init__(self, phi: GroupMap, radius: int):
        super().__init__(ProductGroup(phi.source, phi.target), radius, f'graph of {phi}')
        self.phi = phi

    def members(self, radius: int) -> List[Elem]:
        return [(x, self.phi(x)) for x in self.phi.source.ball(radius)]


class CyclicSample(PointSet):
    """The powers of `a` of norm at most the level. Only powers a^n with
    |n| <= level are produced in infinite groups, which is all of them when
    ‖a^n‖ >= |n|, as in free and free abelian groups."""

    def __init__(self, group: Group, a: Elem, radius: int):
        group.check(a, 'cyclic sample generator')
        super().__init__(group, radius, f'<{group.format_element(a)}>')
        self.a = a

    def members(self, radius: int) -> List[Elem]:
        G = self.group
        bound = G.order if G.is_finite else radius
        powers = {G.power(self.a, n) for n in range(-bound, bound + 1)}
        return sorted((x for x in powers if G.norm(x) <= radius), key=G.sort_key)


class TranslatedSet(PointSet):
    """Λ·t, levelled by the level of the untranslated point."""

    def __init__(self, base: PointSet, t: Elem):
        base.group.check(t, 'translation')
        super().__init__(base.group, base.radius, f'{base.label}·{base.group.format_element(t)}')
        self.base = base
        self.t = t

    def members(self, radius: int) -> List[Elem]:
        op = self.group.op
        return [op(x, self.t) for x in self.base.members(radius)]


def graph_sample(phi: GroupMap, radius: int) -> GraphSample:
    return GraphSample(phi, radius)


def cyclic_sample(group: Group, a: Elem, radius: int) -> CyclicSample:
    return CyclicSample(group, a, radius)


class WitnessCondition(str, enum.Enum):
    INVERSE_COVER = 'InverseCover'
    SQUARE_COVER = 'SquareCover'
    LEFT_COMM = 'LeftComm'
    RIGHT_COMM = 'RightComm'


@dataclass
class WitnessReport:
    """Minimal witnesses for one covering condition. `worst_witness_norm` is
    None when some probe has no witness, which only happens for an empty
    search pool."""
    condition: WitnessCondition
    scale: int
    probe_radius: int
    worst_witness_norm: Optional[int]
    witness_set: FrozenSet[Elem] = frozenset()
    exhausted: bool = True
    probes: int = 0

    @property
    def mode(self) -> str:
        return EXACT if self.exhausted else SAMPLED

    def summary(self, group: Group) -> dict:
        return {
            'condition': self.condition.value,
            'scale': self.scale,
            'probe_radius': self.probe_radius,
            'worst_witness_norm': self.worst_witness_norm,
            'witnesses': [group.format_element(f) for f in sorted(self.witness_set, key=group.sort_key)],
            'mode': self.mode,
        }


def _minimal_witnesses(group: Group, targets: Iterable[Elem], prefixes: Sequence[Elem]
                       ) -> Tuple[Optional[int], FrozenSet[Elem], int]:
    """For each target t, the smallest p·t over the prefixes p. Returns the
    largest of those minima, the set of minimizers and the number of targets."""
    if not prefixes:
        return None, frozenset(), 0
    worst, witnesses, count = 0, set(), 0
    op, sort_key = group.op, group.sort_key
    for t in targets:
        best = min((op(p, t) for p in prefixes), key=sort_key)
        witnesses.add(best)
        worst = max(worst, group.norm(best))
        count += 1
    return worst, frozenset(witnesses), count


def _pairs(probes: Sequence[Elem], budget: int, samples: int, seed: int):
    size = len(probes)
    if size * size <= budget:
        return itertools.product(probes, repeat=2), True
    rng = np.random.default_rng(seed)
    return [(probes[i], probes[j]) for i, j in rng.integers(0, size, size=(samples, 2)).tolist()], False


def quasi_subgroup_witness(points: PointSet, radius: int, probe_radius: int,
                           budget: int = DEFAULT_BUDGET, samples: int = DEFAULT_SAMPLES,
                           seed: int = DEFAULT_SEED) -> Tuple[WitnessReport, WitnessReport]:
    """Finite evidence for Λ⁻¹ ⊆ ΛF₁ and Λ² ⊆ ΛF₂. For every λ of level at
    most R the InverseCover witness is the smallest μ⁻¹λ⁻¹, and for every
    product λ₁λ₂ the SquareCover witness is the smallest μ⁻¹λ₁λ₂, with μ
    ranging over the members of level at most R'."""
    if probe_radius < 2 * radius:
        raise ConfigurationError(f'probe radius {probe_radius} is smaller than 2R = {2 * radius}')
    G = points.group
    probes = points.members(radius)
    prefixes = [G.inv(mu) for mu in points.members(probe_radius)]

    worst, witnesses, count = _minimal_witnesses(G, (G.inv(x) for x in probes), prefixes)
    inverse = WitnessReport(WitnessCondition.INVERSE_COVER, radius, probe_radius, worst,
                            witnesses, True, count)

    pairs, exhausted = _pairs(probes, budget, samples, seed)
    worst, witnesses, count = _minimal_witnesses(G, (G.op(x, y) for x, y in pairs), prefixes)
    square = WitnessReport(WitnessCondition.SQUARE_COVER, radius, probe_radius, worst,
                           witnesses, exhausted, count)
    LOGGER.info(f'{points.label}: inverse cover {inverse.worst_witness_norm}, '
                f'square cover {square.worst_witness_norm}')
    return inverse, square


def comm_probe(points: PointSet, a: Elem, radius: int, probe_radius: int
               ) -> Tuple[WitnessReport, WitnessReport]:
    """Finite evidence for aΛa⁻¹ ⊆ ΛF (left) and the mirrored condition
    a⁻¹Λ⁻¹a ⊆ Λ⁻¹F (right). Left witnesses are μ⁻¹aλa⁻¹, right witnesses
    μa⁻¹λ⁻¹a."""
    G = points.group
    G.check(a, 'conjugator')
    if probe_radius < radius + 2 * G.norm(a):
        raise ConfigurationError(
            f'probe radius {probe_radius} is smaller than R + 2‖a‖ = {radius + 2 * G.norm(a)}')
    probes = points.members(radius)
    pool = points.members(probe_radius)
    a_inverse = G.inv(a)

    left_targets = (G.op(G.op(a, x), a_inverse) for x in probes)
    worst, witnesses, count = _minimal_witnesses(G, left_targets, [G.inv(mu) for mu in pool])
    left = WitnessReport(WitnessCondition.LEFT_COMM, radius, probe_radius, worst, witnesses, True, count)

    right_targets = (G.op(G.op(a_inverse, G.inv(x)), a) for x in probes)
    worst, witnesses, count = _minimal_witnesses(G, right_targets, pool)
    right = WitnessReport(WitnessCondition.RIGHT_COMM, radius, probe_radius, worst, witnesses, True, count)
    return left, right


# Probes over the source balls

def _probe(kind: str, phi: GroupMap, term: Callable[[Elem], Elem], max_radius: int,
           window: int) -> DefectProfile:
    grower = SetGrower(phi.source, phi.target, 1, term)
    return grow_profile(kind, grower, max_radius, window)


def pi_probe(phi: GroupMap, c: Elem, max_radius: int,
             window: int = DEFAULT_WINDOW) -> DefectProfile:
    """Profile of ‖φ(x)⁻¹c⁻¹φ(x)‖ over x in ball(r). A plateau is evidence
    that c lies in the group of constants whose perturbation keeps φ a
    quasi-homomorphism."""
    H = phi.target
    H.check(c, 'constant')
    c_inverse = H.inv(c)
    return _probe('Pi', phi, lambda x: H.conj(c_inverse, phi(x)), max_radius, window)


def qhom_char_profile(phi: GroupMap, max_radius: int,
                      window: int = DEFAULT_WINDOW) -> DefectProfile:
    """The probe of c = φ(1): it plateaus for a middle quasi-homomorphism
    exactly when φ is a quasi-homomorphism."""
    result = pi_probe(phi, phi(phi.source.identity()), max_radius, window)
    result.kind = 'QhomChar'
    return result


def conj_class_profile(phi: GroupMap, b: Elem, max_radius: int,
                       window: int = DEFAULT_WINDOW) -> DefectProfile:
    """Profile of ‖φ(x⁻¹b⁻¹x)‖ over x in ball(r), φ restricted to the
    conjugacy class of b⁻¹."""
    G = phi.source
    G.check(b, 'class representative')
    b_inverse = G.inv(b)
    return _probe('ConjClass', phi, lambda x: phi(G.conj(b_inverse, x)), max_radius, window)


def centr_profile(phi: GroupMap, c: Elem, max_radius: int,
                  window: int = DEFAULT_WINDOW) -> DefectProfile:
    """Profile of ‖[φ(x), c]‖ over x in ball(r); identically 0 when c
    centralizes the image."""
    H = phi.target
    H.check(c, 'constant')
    return _probe('Centr', phi, lambda x: H.commutator(phi(x), c), max_radius, window)


def s_ab_probe(phi: GroupMap, pair: Tuple[Elem, Elem], max_radius: int,
               window: int = DEFAULT_WINDOW) -> DefectProfile:
    """Profile of ‖φ(z⁻¹a⁻¹z)·φ(z)⁻¹bφ(z)‖ over z in ball(r)."""
    G, H = phi.source, phi.target
    a, b = pair
    G.check(a, 'a')
    H.check(b, 'b')
    a_inverse = G.inv(a)

    def term(z):
        return H.op(phi(G.conj(a_inverse, z)), H.conj(b, phi(z)))
    return _probe('S', phi, term, max_radius, window)


def bounded_products(H: Group, generators: Iterable[Elem], length: int,
                     budget: int = DEFAULT_BUDGET) -> Tuple[FrozenSet[Elem], bool]:
    """Products of at most `length` factors from generators ∪ generators⁻¹.
    Stops early, returning exhausted=False, once more than `budget` elements
    have been found."""
    if length < 0:
        raise ConfigurationError('length must be non-negative')
    letters = set(generators)
    letters |= {H.inv(x) for x in letters}
    letters.discard(H.identity())
    letters = sorted(letters, key=H.sort_key)
    found = {H.identity()}
    frontier = [H.identity()]
    for _ in range(length):
        fresh = []
        for x in frontier:
            for g in letters:
                y = H.op(x, g)
                if y not in found:
                    found.add(y)
                    fresh.append(y)
        if len(found) > budget:
            LOGGER.warning(f'product sample stopped at {len(found)} elements')
            return frozenset(found), False
        frontier = fresh
    return frozenset(found), True


def delta_sample(phi: GroupMap, radius: int, length: int,
                 budget: int = DEFAULT_BUDGET) -> DefectSet:
    """A ball-like sample of the subgroup generated by the left defects."""
    defects = set_D(phi, radius, budget=budget)
    elements, exhausted = bounded_products(phi.target, defects, length, budget)
    mode = EXACT if exhausted and defects.mode == EXACT else SAMPLED
    return DefectSet(elements, phi.target, radius, mode)


def pertdelta_check(phi: GroupMap, radius: int, length: int, max_radius: int,
                    window: int = DEFAULT_WINDOW, budget: int = DEFAULT_BUDGET) -> CheckResult:
    """For a quasi-homomorphism φ, perturbing by any c in the defect subgroup
    keeps the D-profile on a plateau. Inconclusive when φ's own D-profile does
    not plateau."""
    base = profile('D', phi, max_radius, window, budget=budget)
    if not base.is_plateau:
        return CheckResult('pertdelta', None, details={'reason': f'D-profile is {base.classification.value}'})
    G, H = phi.source, phi.target
    constants = delta_sample(phi, radius, length, budget)
    for c in constants.sorted():
        perturbed = GroupMap(ms.Perturb(G, H, phi.spec, c))
        result = profile('D', perturbed, max_radius, window, budget=budget)
        if not result.is_plateau:
            return CheckResult('pertdelta', False, {'c': H.format_element(c)}, result.mode)
    return CheckResult('pertdelta', True, mode=constants.mode, details={'constants': len(constants)})


# Matched-scale profiles

def _cumulative_rows(reports_by_radius: Iterable[Tuple[int, Sequence[WitnessReport]]]) -> List[ProfileRow]:
    rows, worst, seen, exhausted = [], 0, set(), True
    for radius, reports in reports_by_radius:
        for report in reports:
            worst = max(worst, report.worst_witness_norm or 0)
            seen |= report.witness_set
            exhausted = exhausted and report.exhausted
        rows.append(ProfileRow(radius, len(seen), worst, EXACT if exhausted else SAMPLED))
    return rows


def comm_profile(phi: GroupMap, c: Elem, max_radius: int,
                 window: int = DEFAULT_WINDOW) -> DefectProfile:
    """Worst commensurator witness of (1, c) on the graph of φ, at R = r and
    R' = r + 2‖c‖, accumulated over r = 1..max_radius."""
    check_profile_parameters(max_radius, window)
    graph = graph_sample(phi, max_radius)
    a = graph.group.embed_right(c)
    spread = 2 * phi.target.norm(c)
    rows = _cumulative_rows((r, comm_probe(graph, a, r, r + spread))
                            for r in range(1, max_radius + 1))
    return DefectProfile('Comm', rows, window)


def translate_profile(phi: GroupMap, t: Elem, max_radius: int, window: int = DEFAULT_WINDOW,
                      budget: int = DEFAULT_BUDGET, samples: int = DEFAULT_SAMPLES,
                      seed: int = DEFAULT_SEED) -> DefectProfile:
    """Worst quasi-subgroup witness of the translated graph Γ_φ·t, at R = r
    and R' = 2r, accumulated over r = 1..max_radius."""
    check_profile_parameters(max_radius, window)
    translated = graph_sample(phi, max_radius).translate(t)
    rows = _cumulative_rows((r, quasi_subgroup_witness(translated, r, 2 * r, budget, samples, seed))
                            for r in range(1, max_radius + 1))
    return DefectProfile('Translate', rows, window)


@dataclass
class Correspondence:
    """Classifications of the conjugation probe of c and of the commensurator
    profile of (1, c), compared as Plateau against not Plateau."""
    c: str
    pi: DefectProfile
    comm: DefectProfile
    details: dict = field(default_factory=dict)

    @property
    def agrees(self) -> bool:
        return self.pi.is_plateau == self.comm.is_plateau


def pi_comm_correspondence(phi: GroupMap, c: Elem, radius: int = 2, probe_radius: int = 6,
                           max_radius: int = 5, window: int = DEFAULT_WINDOW) -> Correspondence:
    """Both profiles of c up to `max_radius`, plus the commensurator witnesses
    of (1, c) at the declared scale (R, R') = (radius, probe_radius)."""
    pi = pi_probe(phi, c, max_radius, window)
    comm = comm_profile(phi, c, max_radius, window)
    graph = graph_sample(phi, probe_radius)
    left, right = comm_probe(graph, graph.group.embed_right(c), radius, probe_radius)
    return Correspondence(phi.target.format_element(c), pi, comm,
                          {'radius': radius, 'probe_radius': probe_radius, 'max_radius': max_radius,
                           'left_worst': left.worst_witness_norm,
                           'right_worst': right.worst_witness_norm})
