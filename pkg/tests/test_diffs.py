# -*- coding: utf-8 -*-
"""Tests for difference operators in coarse_maps."""
import pytest

from coarse_maps.defects import profile
from coarse_maps.diffs import (
    DiffSpec,
    degree_estimate,
    dg,
    diff_identity_check,
    iter_diff,
    leaf_terms,
    lemma43,
    pd_profile,
    set_Pd,
)
from coarse_maps.errors import ConfigurationError, GroupMismatchError
from coarse_maps.gmaps import GroupMap
from coarse_maps.groups import FreeGroup, IntegerGroup


FREE2 = FreeGroup(2)
Z = IntegerGroup()
SQUARE = 'monomial{2}'


def test_iter_diff_of_square():
    assert iter_diff(GroupMap.from_text(SQUARE), [3, 5]) == 30


def test_single_difference_matches_dg():
    phi = GroupMap.from_text(SQUARE)
    assert dg(phi, 3)(1) == 15
    assert DiffSpec(phi, (3,)).value(1) == 15


def test_leaf_terms():
    leaves = leaf_terms(Z, [1, 2, 3], 0)
    assert len(leaves) == 8
    assert leaves[0] == (6, 1)
    assert sum(sign for _, sign in leaves) == 0


def test_shifts_are_checked():
    with pytest.raises(GroupMismatchError):
        iter_diff(GroupMap.from_text(SQUARE), [FREE2.parse_element('a')])


@pytest.mark.parametrize('seed', [1, 2, 3])
def test_closed_form_third_difference(seed):
    phi = GroupMap.from_text(f'random{{seed={seed},domR=3,tgtR=2}}', FREE2, FREE2)
    shifts = FREE2.ball(1)
    for g1 in shifts:
        for g2 in shifts:
            for g3 in shifts:
                assert lemma43(phi, g1, g2, g3) == iter_diff(phi, [g1, g2, g3])


def test_rounded_quadratic_second_differences():
    values = set_Pd(GroupMap.from_text('floor_quad{1,3}'), 2, 3)
    assert set(values) <= {-1, 0, 1}
    assert values.max_norm == 1


def test_pd_profile_of_square():
    assert pd_profile(GroupMap.from_text(SQUARE), 2, 3).max_norms == [0, 0, 0]
    assert pd_profile(GroupMap.from_text(SQUARE), 1, 3).max_norms == [2, 8, 18]


class TestDegreeEstimate():

    def test_polynomials(self):
        assert degree_estimate(GroupMap.from_text(SQUARE), 2, 4).degree == 2
        assert degree_estimate(GroupMap.from_text('monomial{1}'), 2, 4).degree == 1
        assert degree_estimate(GroupMap.from_text('const{5}', Z), 1, 3).degree == 0

    def test_quasimorphism_has_degree_one(self):
        assert degree_estimate(GroupMap.from_text('brooks{ab}'), 1, 3).degree == 1

    def test_no_degree_found(self):
        estimate = degree_estimate(GroupMap.from_text('monomial{3}'), 2, 3)
        assert estimate.degree is None
        assert estimate.summary()['verdict'] == 'none <= 2'

    def test_degree_cap(self):
        with pytest.raises(ConfigurationError):
            degree_estimate(GroupMap.from_text(SQUARE), 4, 3)


def test_diff_identity():
    phi = GroupMap.from_text('random{seed=4,domR=2,tgtR=2}', FREE2, FREE2)
    assert diff_identity_check(phi, 2).holds


class TestDegreeLaws():

    def test_degree_one_iff_middle_plateau(self):
        maps = [
            GroupMap.from_text('floor_scale{1,2}'),
            GroupMap.from_text('perturb{floor_scale{2,3},c=-2}'),
            GroupMap.from_text('perturb{id,c=-2}', Z, Z),
            GroupMap.from_text('perturb{brooks{ab},c=2}'),
            GroupMap.from_text('hom{1->a}', Z, FREE2),
            GroupMap.from_text(SQUARE),
            GroupMap.from_text('floor_quad{1,3}'),
        ]
        for phi in maps:
            estimate = degree_estimate(phi, 1, 5)
            assert (estimate.degree == 1) == profile('M', phi, 5).is_plateau

    def test_composition_with_a_quasi_homomorphism(self):
        phi = GroupMap.from_text('compose{floor_scale{1,2},monomial{2}}')
        assert degree_estimate(phi, 2, 4).degree == 2

    def test_sets_are_nested(self):
        phi = GroupMap.from_text('random{seed=6,domR=3,tgtR=2}', FREE2, FREE2)
        for degree in (1, 2):
            smaller = set_Pd(phi, degree, 1)
            assert smaller.elements <= set_Pd(phi, degree, 2).elements
        rounded = GroupMap.from_text('floor_quad{1,3}')
        for radius in range(1, 5):
            assert set_Pd(rounded, 2, radius).elements <= set_Pd(rounded, 2, radius + 1).elements
