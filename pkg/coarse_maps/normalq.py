"""Checks of the normal quasi-quadratic conditions (Q1) to (Q4) for a map
φ: G → H, where Ξ_φ is the subgroup generated by P₂(φ):

    Q1  P₂(φ) is bounded (its profile plateaus).
    Q2  φ(g) normalizes Ξ_φ.
    Q3  φ(G) is covered by finitely many cosets C_H(Ξ_φ)·y, y in a symmetric Y.
    Q4  Y^{n+1} ⊆ Y^n·C_H(Ξ_φ)·Ξ_φ for some n.

Abelian targets pass Q2 to Q4 outright. Finite targets are checked exactly.
Free targets rely on the fact that centralizers of nontrivial elements are
cyclic, generated by primitive roots."""
from __future__ import annotations
import logging

from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Sequence

import coarse_maps.words as wd
from coarse_maps.coarse import bounded_products
from coarse_maps.defects import DEFAULT_BUDGET, DEFAULT_WINDOW, EXACT, SAMPLED, CheckResult, DefectProfile, DefectSet
from coarse_maps.diffs import pd_profile, set_Pd
from coarse_maps.errors import PreconditionError
from coarse_maps.gmaps import GroupMap
from coarse_maps.groups import (
    Elem,
    FreeGroup,
    Group,
    IntegerGroup,
    LatticeGroup,
    centralizer,
    normal_closure,
    subgroup_closure,
)


LOGGER = logging.getLogger('coarse_maps')

ABELIAN = 'abelian'
FINITE = 'finite'
FREE = 'free'

QUADRATIC_LIKE = 'QuadraticLike'
CYCLIC_IMAGE = 'CyclicImage'
VIOLATION = 'Violation'


@dataclass
class NormalityCaps:
    """Search limits for the checks that cannot be exact in infinite targets."""
    max_transversal: int = 64
    q4_max_n: int = 6
    product_radius_factor: int = 3
    closure_cap: int = 20_000

    def __post_init__(self):
        for name in ('max_transversal', 'q4_max_n', 'product_radius_factor', 'closure_cap'):
            if getattr(self, name) < 1:
                raise ValueError(f'{name} must be positive')


def target_kind(H: Group) -> str:
    if H.is_abelian:
        return ABELIAN
    if H.is_finite:
        return FINITE
    if isinstance(H, FreeGroup):
        return FREE
    raise PreconditionError(f'normality checks do not support the target {H}')


def xi_sample(phi: GroupMap, radius: int, length: int, budget: int = DEFAULT_BUDGET) -> DefectSet:
    """Products of at most `length` factors of P₂(φ, R) ∪ P₂(φ, R)⁻¹."""
    p2 = set_Pd(phi, 2, radius, budget=budget)
    elements, exhausted = bounded_products(phi.target, p2, length, budget)
    mode = EXACT if exhausted and p2.mode == EXACT else SAMPLED
    return DefectSet(elements, phi.target, radius, mode)


class _Xi:
    """Ξ_φ as far as the target lets us know it, with membership and
    centralizer tests."""

    def __init__(self, H: Group, kind: str, generators: Sequence[Elem], sample: FrozenSet[Elem]):
        self.H = H
        self.kind = kind
        self.generators = [k for k in generators if k != H.identity()]
        self.sample = sample
        self.exact = kind != FREE
        self.root = None
        if kind == FINITE:
            self.sample = subgroup_closure(H, self.generators)
            self.centralizer = centralizer(H, self.generators)
        elif kind == FREE and self.generators:
            self.root = _common_root(self.generators)
            self.exact = self.root is not None or not self.generators

    def contains(self, x: Elem) -> Optional[bool]:
        """None when membership cannot be decided from the sample."""
        H = self.H
        if x == H.identity() or x in self.sample:
            return True
        if self.kind != FREE:
            return False
        if not self.generators:
            return False
        if self.root is not None:
            # Ξ is then a subgroup of the cyclic group generated by the root
            return _is_power(x, self.root, self.generators)
        return None

    def centralizes(self, z: Elem) -> bool:
        """Whether z commutes with every element of Ξ."""
        H = self.H
        if self.kind == ABELIAN or not self.generators:
            return True
        if self.kind == FINITE:
            return z in self.centralizer
        if self.root is not None:
            return H.commutes(z, self.root)
        return all(H.commutes(z, k) for k in self.generators)


def _common_root(words: Sequence[wd.Word]) -> Optional[wd.Word]:
    """The primitive root shared by all `words` up to inversion, or None."""
    root, _ = wd.root(words[0])
    for w in words[1:]:
        other, _ = wd.root(w)
        if other not in (root, wd.inv(root)):
            return None
    return root


def _is_power(x: wd.Word, root: wd.Word, generators: Sequence[wd.Word] = ()) -> bool:
    """Whether x is a power of root and, when generators are given, a multiple
    of the gcd of their exponents."""
    try:
        exponent = wd.power_exponent(x, root)
    except ValueError:
        return False
    if not generators:
        return True
    step = 0
    for k in generators:
        step = _gcd(step, wd.power_exponent(k, root))
    return exponent % step == 0


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


@dataclass
class Q1Result:
    profile: DefectProfile
    passed: bool


@dataclass
class Q2Result:
    passed: Optional[bool]
    counterexample: Optional[dict] = None
    exhausted: bool = True


@dataclass
class Q3Result:
    transversal: List[Elem]
    uncovered: List[Elem] = field(default_factory=list)
    exhausted: bool = True

    @property
    def passed(self) -> bool:
        return not self.uncovered


@dataclass
class Q4Result:
    passed: Optional[bool]
    n: Optional[int] = None
    exhausted: bool = True


@dataclass
class NormalityReport:
    map_text: str
    target_kind: str
    q1: Q1Result
    q2: Optional[Q2Result] = None
    q3: Optional[Q3Result] = None
    q4: Optional[Q4Result] = None

    @property
    def passed(self) -> Optional[bool]:
        """True when all four conditions hold at this scale, False when one is
        violated, None when some condition stayed undecided."""
        if not self.q1.passed:
            return False
        verdicts = [self.q2.passed, self.q3.passed, self.q4.passed]
        if False in verdicts:
            return False
        return None if None in verdicts else True

    @property
    def exhausted(self) -> bool:
        parts = [part for part in (self.q2, self.q3, self.q4) if part is not None]
        return self.q1.profile.mode == EXACT and all(part.exhausted for part in parts)

    def summary(self, H: Group) -> dict:
        result = {
            'map': self.map_text,
            'target_kind': self.target_kind,
            'q1': {'max_norms': self.q1.profile.max_norms,
                   'classification': self.q1.profile.classification.value,
                   'passed': self.q1.passed},
            'passed': self.passed,
            'exhausted': self.exhausted,
        }
        if self.q2 is not None:
            result['q2'] = {'passed': self.q2.passed, 'counterexample': self.q2.counterexample}
            result['q3'] = {'passed': self.q3.passed,
                            'transversal': [H.format_element(y) for y in self.q3.transversal],
                            'uncovered': [H.format_element(x) for x in self.q3.uncovered]}
            result['q4'] = {'passed': self.q4.passed, 'n': self.q4.n}
        return result


def _check_q2(phi: GroupMap, radius: int, xi: _Xi) -> Q2Result:
    G, H = phi.source, phi.target
    if xi.kind == ABELIAN:
        return Q2Result(True)
    exhausted = True
    for g in G.ball(radius):
        value = phi(g)
        for k in xi.generators:
            member = xi.contains(H.op(H.op(value, k), H.inv(value)))
            if member is False:
                return Q2Result(False, {'g': G.format_element(g), 'k': H.format_element(k)})
            if member is None:
                exhausted = False
    return Q2Result(True if exhausted else None, exhausted=exhausted)


def _check_q3(phi: GroupMap, radius: int, xi: _Xi, caps: NormalityCaps) -> Q3Result:
    H = phi.target
    transversal = [H.identity()]
    uncovered = []
    values = {phi(x) for x in phi.source.ball(radius)}
    values |= {H.inv(x) for x in values}
    for x in sorted(values, key=H.sort_key):
        if any(xi.centralizes(H.op(x, H.inv(y))) for y in transversal):
            continue
        if len(transversal) + 2 > caps.max_transversal:
            uncovered.append(x)
            continue
        transversal.append(x)
        if H.inv(x) not in transversal:
            transversal.append(H.inv(x))
    return Q3Result(sorted(transversal, key=H.sort_key), uncovered)


def _check_q4(H: Group, transversal: List[Elem], xi: _Xi, caps: NormalityCaps) -> Q4Result:
    if xi.kind == ABELIAN:
        return Q4Result(True, 1)
    horizon = caps.product_radius_factor * max(H.norm(y) for y in transversal)
    xi_elements = sorted(xi.sample, key=H.sort_key)
    exhausted = xi.exact
    power = {H.identity()}
    for n in range(1, caps.q4_max_n + 1):
        power = {H.op(w, y) for w in power for y in transversal}
        following = {H.op(w, y) for w in power for y in transversal}
        if len(following) > caps.closure_cap:
            LOGGER.warning(f'Y^{n + 1} exceeds {caps.closure_cap} elements, stopping')
            return Q4Result(None, exhausted=False)
        if xi.kind == FREE:
            probed = {z for z in following if H.norm(z) <= horizon}
            exhausted = exhausted and len(probed) == len(following)
        else:
            probed = following

        def covered(z):
            return any(xi.centralizes(H.op(H.op(H.inv(w), z), H.inv(k)))
                       for w in power for k in xi_elements)
        if all(covered(z) for z in probed):
            return Q4Result(True, n, exhausted)
    return Q4Result(None, exhausted=False)


def check_normality(phi: GroupMap, radius: int, length: int, caps: NormalityCaps = None,
                    window: int = DEFAULT_WINDOW, budget: int = DEFAULT_BUDGET) -> NormalityReport:
    """Runs Q1 to Q4 at scale R, with Ξ_φ sampled by products of at most
    `length` elements of P₂. Q2 to Q4 are skipped when Q1 fails."""
    caps = caps or NormalityCaps()
    H = phi.target
    kind = target_kind(H)
    p2_profile = pd_profile(phi, 2, radius, window, budget=budget)
    # P₂ of a map into a finite group is bounded
    q1 = Q1Result(p2_profile, kind == FINITE or p2_profile.is_plateau)
    report = NormalityReport(str(phi), kind, q1)
    if not q1.passed:
        LOGGER.info(f'{phi}: Q1 fails, P_2 is {p2_profile.classification.value}')
        return report

    generators = set_Pd(phi, 2, radius, budget=budget).sorted()
    sample = xi_sample(phi, radius, length, budget).elements
    xi = _Xi(H, kind, generators, sample)
    report.q2 = _check_q2(phi, radius, xi)
    report.q3 = _check_q3(phi, radius, xi, caps)
    report.q4 = _check_q4(H, report.q3.transversal, xi, caps)
    LOGGER.info(f'{phi}: normality {report.passed}')
    return report


def hyperbolic_desk_check(phi: GroupMap, radius: int, caps: NormalityCaps = None,
                          budget: int = DEFAULT_BUDGET) -> CheckResult:
    """For a map into a free group: QuadraticLike when P₂ is trivial at scale
    R, CyclicImage when φ(ball(R)) lies in one cyclic subgroup, Violation
    otherwise. At most `caps.closure_cap` distinct images are compared; a
    CyclicImage verdict on a truncated image set is inconclusive."""
    caps = caps or NormalityCaps()
    H = phi.target
    if not isinstance(H, FreeGroup):
        raise PreconditionError(f'the hyperbolic check needs a free target, got {H}')
    p2 = set_Pd(phi, 2, radius, budget=budget)
    if p2.elements == frozenset({H.identity()}):
        return CheckResult('hyperbolic', True, mode=p2.mode, details={'verdict': QUADRATIC_LIKE})
    images, truncated = set(), False
    for x in phi.source.ball(radius):
        y = phi(x)
        if y != H.identity():
            images.add(y)
        if len(images) > caps.closure_cap:
            LOGGER.warning(f'{phi}: more than {caps.closure_cap} images in ball({radius}), stopping')
            truncated = True
            break
    images = sorted(images, key=H.sort_key)[:caps.closure_cap]
    mode = SAMPLED if truncated else p2.mode
    root = _common_root(images) if images else H.identity()
    if root is not None:
        return CheckResult('hyperbolic', None if truncated else True, mode=mode,
                           details={'verdict': CYCLIC_IMAGE, 'root': H.format_element(root),
                                    'images': len(images)})
    worst = p2.sorted()[-1]
    first = images[0]
    other = next(y for y in images if not H.commutes(first, y))
    witness = {'p2': H.format_element(worst), 'x': H.format_element(first), 'y': H.format_element(other)}
    return CheckResult('hyperbolic', False, witness, mode, details={'verdict': VIOLATION})


def almost_quadratic_check(phi: GroupMap, radius: int, budget: int = DEFAULT_BUDGET) -> CheckResult:
    """Whether P₂(φ, R) lies in a finite normal subgroup of the target. In a
    finite target that is its normal closure; torsion-free targets only have
    the trivial one."""
    H = phi.target
    p2 = set_Pd(phi, 2, radius, budget=budget)
    if H.is_finite:
        closure = normal_closure(H, p2)
        return CheckResult('almost-quadratic', True, mode=p2.mode,
                           details={'normal_subgroup_order': len(closure)})
    if not isinstance(H, (FreeGroup, IntegerGroup, LatticeGroup)):
        raise PreconditionError(f'finite normal subgroups of {H} are not computed')
    holds = p2.elements == frozenset({H.identity()})
    witness = None if holds else {'p2': H.format_element(p2.sorted()[-1])}
    return CheckResult('almost-quadratic', holds, witness, p2.mode)
