# -*- coding: utf-8 -*-
"""Tests for the normal quasi-quadratic checks in coarse_maps."""
import pytest

from coarse_maps.defects import EXACT, SAMPLED
from coarse_maps.errors import PreconditionError
from coarse_maps.gmaps import GroupMap
from coarse_maps.groups import FreeGroup, IntegerGroup, ProductGroup, builtin_group
from coarse_maps.normalq import (
    ABELIAN,
    CYCLIC_IMAGE,
    FINITE,
    FREE,
    QUADRATIC_LIKE,
    VIOLATION,
    NormalityCaps,
    almost_quadratic_check,
    check_normality,
    hyperbolic_desk_check,
    target_kind,
    xi_sample,
)


FREE2 = FreeGroup(2)
Z = IntegerGroup()
SYM3 = builtin_group('sym3')

ALMOST_QUADRATIC = 'compose{hom{1->3},random{seed=7,domR=3,tgtR=1},via=cyc:3}'


def test_target_kind():
    assert target_kind(Z) == ABELIAN
    assert target_kind(SYM3) == FINITE
    assert target_kind(FREE2) == FREE
    with pytest.raises(PreconditionError):
        target_kind(ProductGroup(FREE2, FREE2))


def test_caps_are_positive():
    with pytest.raises(ValueError):
        NormalityCaps(max_transversal=0)


def test_xi_sample():
    sample = xi_sample(GroupMap.from_text('floor_quad{1,3}'), 2, 2)
    assert sample.elements == frozenset(range(-2, 3))
    assert sample.mode == 'exact'


class TestCheckNormality():

    def test_abelian_target(self):
        report = check_normality(GroupMap.from_text('compose{floor_scale{1,2},monomial{2}}'), 4, 3)
        assert report.target_kind == ABELIAN
        assert report.q1.passed
        assert report.passed is True

    def test_finite_target(self):
        report = check_normality(GroupMap.from_text(ALMOST_QUADRATIC, Z, SYM3), 4, 3)
        assert report.target_kind == FINITE
        assert report.passed is True
        assert report.exhausted

    def test_free_quadratic_sequence_fails_q1(self):
        report = check_normality(GroupMap.from_text('zquad{a,b}', Z, FREE2), 4, 3)
        assert not report.q1.passed
        assert report.q2 is None
        assert report.passed is False

    def test_free_homomorphism(self):
        report = check_normality(GroupMap.from_text('hom{1->a}', Z, FREE2), 4, 3)
        assert report.q1.profile.max_norms == [0, 0, 0, 0]
        assert report.passed is True
        assert report.q4.n == 1

    def test_unital_quasi_homomorphisms_are_normal(self):
        maps = [
            ('unitalize{perturb{brooks{ab},2}}', FREE2, Z),
            ('hom{a->ab,b->b}', FREE2, FREE2),
            ('hom{1->a}', Z, FREE2),
        ]
        for text, source, target in maps:
            phi = GroupMap.from_text(text, source, target)
            assert phi(source.identity()) == target.identity()
            assert check_normality(phi, 4, 3).passed is True

    def test_summary(self):
        report = check_normality(GroupMap.from_text('hom{1->a}', Z, FREE2), 4, 3)
        summary = report.summary(FREE2)
        assert summary['target_kind'] == FREE
        assert summary['q3']['transversal'] == ['']
        assert summary['passed'] is True


class TestHyperbolic():

    def test_verdicts(self):
        cases = [
            (GroupMap.from_text('hom{1->a}', Z, FREE2), QUADRATIC_LIKE, True),
            (GroupMap.from_text('compose{hom{1->a},floor_quad{1,3}}', Z, FREE2), CYCLIC_IMAGE, True),
            (GroupMap.from_text('random{seed=2,domR=3,tgtR=3}', FREE2, FREE2), VIOLATION, False),
        ]
        for phi, verdict, holds in cases:
            result = hyperbolic_desk_check(phi, 3)
            assert result.details['verdict'] == verdict
            assert result.holds is holds

    def test_violation_witness(self):
        result = hyperbolic_desk_check(GroupMap.from_text('random{seed=2,domR=3,tgtR=3}', FREE2, FREE2), 3)
        assert set(result.witness) == {'p2', 'x', 'y'}

    def test_needs_free_target(self):
        with pytest.raises(PreconditionError):
            hyperbolic_desk_check(GroupMap.from_text('monomial{2}'), 3)

    def test_image_cap(self):
        # images of ball(3) are a and aaa
        phi = GroupMap.from_text('compose{hom{1->a},floor_quad{1,3}}', Z, FREE2)
        full = hyperbolic_desk_check(phi, 3, NormalityCaps(closure_cap=2))
        assert full.holds is True
        assert full.mode == EXACT
        assert full.details['images'] == 2
        capped = hyperbolic_desk_check(phi, 3, NormalityCaps(closure_cap=1))
        assert capped.holds is None
        assert capped.mode == SAMPLED
        assert capped.details == {'verdict': CYCLIC_IMAGE, 'root': 'a', 'images': 1}


class TestAlmostQuadratic():

    def test_finite_target(self):
        result = almost_quadratic_check(GroupMap.from_text(ALMOST_QUADRATIC, Z, SYM3), 3)
        assert result.holds
        assert result.details['normal_subgroup_order'] in (1, 3, 6)

    def test_torsion_free_targets(self):
        assert almost_quadratic_check(GroupMap.from_text('monomial{2}'), 3).holds
        result = almost_quadratic_check(GroupMap.from_text('floor_quad{1,3}'), 3)
        assert result.holds is False
        assert result.witness == {'p2': '-1'}

    def test_unsupported_target(self):
        phi = GroupMap.from_text('const{(1|1)}', Z, ProductGroup(Z, Z))
        with pytest.raises(PreconditionError):
            almost_quadratic_check(phi, 2)
