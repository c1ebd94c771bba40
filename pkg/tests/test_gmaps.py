# -*- coding: utf-8 -*-
"""Tests for map evaluation in coarse_maps."""
import numpy as np
import pytest

from coarse_maps.errors import GroupMismatchError
from coarse_maps.gmaps import GroupMap, distance, image, is_unital, mix64, random_map_eval
from coarse_maps.groups import FreeGroup, IntegerGroup


FREE2 = FreeGroup(2)
Z = IntegerGroup()


def w(text: str):
    return FREE2.parse_element(text)


def test_mix64():
    assert mix64(1, 1) == 0
    assert mix64(0, 1) == mix64(1, 0)
    assert 0 <= mix64(42, 7) < 2 ** 64


class TestFamilies():

    def test_brooks_counts_overlapping_occurrences(self):
        phi = GroupMap.from_text('brooks{ab}')
        assert phi(w('abab')) == 2
        assert phi(w('BA')) == -1
        assert phi(w('aab')) == 1
        assert phi(w('')) == 0

    def test_brooks_overlaps(self):
        phi = GroupMap.from_text('brooks{aa}')
        assert phi(w('aaa')) == 2
        assert phi(w('AAA')) == -2

    def test_hom(self):
        phi = GroupMap.from_text('hom{a->ab,b->b}')
        assert FREE2.format_element(phi(w('aB'))) == 'a'
        power = GroupMap.from_text('hom{1->a}', Z, FREE2)
        assert FREE2.format_element(power(-3)) == 'AAA'

    def test_integer_families(self):
        assert [GroupMap.from_text('floor_scale{1,2}')(n) for n in (-3, -1, 0, 1, 3)] == [-2, -1, 0, 0, 1]
        assert GroupMap.from_text('monomial{3}')(-2) == -8
        assert GroupMap.from_text('floor_quad{1,3}')(4) == 5

    def test_perturb_and_unitalize(self):
        phi = GroupMap.from_text('perturb{brooks{ab},c=2}')
        assert phi(w('')) == 2
        assert not is_unital(phi)
        unital = GroupMap.from_text('unitalize{perturb{brooks{ab},c=2}}')
        assert is_unital(unital)
        assert unital(w('ab')) == 1

    def test_shift_and_recenter(self):
        shifted = GroupMap.from_text('shift{monomial{2},a=1}')
        assert shifted(2) == 9
        recentered = GroupMap.from_text('recenter{monomial{2},a=1,b=5}')
        assert recentered(3) == 9

    def test_compose(self):
        phi = GroupMap.from_text('compose{floor_scale{1,2},monomial{2}}')
        assert phi(3) == 4
        via = GroupMap.from_text('compose{hom{1->a},floor_quad{1,3}}', Z, FREE2)
        assert FREE2.format_element(via(3)) == 'aaa'

    def test_diff(self):
        phi = GroupMap.from_text('diff{monomial{2},g=3}')
        assert phi(1) == 15

    def test_zquad(self):
        phi = GroupMap.from_text('zquad{a,b}', Z, FREE2)
        assert FREE2.format_element(phi(3)) == 'bAAbAb'
        assert FREE2.format_element(phi(-1)) == 'AbAA'

    def test_random_is_seeded_and_unital(self):
        phi = GroupMap.from_text('random{seed=7,domR=3,tgtR=1}')
        psi = GroupMap.from_text('random{seed=7,domR=3,tgtR=1}')
        assert image(phi, 4) == image(psi, 4)
        assert is_unital(phi)
        assert phi(4) == 0
        assert all(abs(value) <= 1 for value in image(phi, 3))

    def test_jitter_is_bounded(self):
        base = GroupMap.from_text('id', FREE2)
        phi = GroupMap.from_text('jitter{id,seed=3,tgtR=1}', FREE2)
        assert distance(phi, base, 3) <= 1
        assert is_unital(phi)


class TestGroupMap():

    def test_memoizes(self):
        phi = GroupMap.from_text('monomial{2}')
        phi(3)
        phi(3)
        assert phi.cache_size == 1
        phi.clear_cache()
        assert phi.cache_size == 0

    def test_eval_checks_the_source(self):
        phi = GroupMap.from_text('brooks{ab}')
        with pytest.raises(GroupMismatchError):
            phi.eval(3)

    def test_distance(self):
        phi = GroupMap.from_text('floor_scale{1,2}')
        psi = GroupMap.from_text('floor_scale{1,2}')
        assert distance(phi, psi, 5) == 0
        assert distance(GroupMap.from_text('monomial{1}'), phi, 4) == 2
        with pytest.raises(GroupMismatchError):
            distance(phi, GroupMap.from_text('brooks{ab}'), 2)

    def test_str_is_canonical(self):
        assert str(GroupMap.from_text('perturb{ brooks{ab}, 2 }')) == 'perturb{brooks{ab},c=2}'


class TestRandomMapValues():

    def test_mix64_reference_values(self):
        assert mix64(0, 1) == 6238072747940578789
        assert mix64(1, 2) == 2185194620014831856
        assert mix64(0, 0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF

    def test_golden_values(self):
        # ball(2) of F₂ has 17 elements; mix64(1, i) mod 17 is 0, 2, 11, 7 for i = 1..4
        values = [random_map_eval(1, 2, 2, w(text), FREE2, FREE2) for text in ('a', 'A', 'b', 'B')]
        assert [FREE2.format_element(value) for value in values] == ['', 'A', 'ba', 'aB']

    def test_identity_and_outside_the_ball(self):
        assert random_map_eval(9, 2, 2, FREE2.identity(), FREE2, FREE2) == FREE2.identity()
        assert random_map_eval(9, 2, 2, w('aba'), FREE2, FREE2) == FREE2.identity()


class TestEvaluationLaws():

    def test_memoized_and_fresh_evaluation_agree(self):
        rng = np.random.default_rng(11)
        maps = [
            GroupMap.from_text('random{seed=5,domR=3,tgtR=2}', FREE2, FREE2),
            GroupMap.from_text('perturb{brooks{ab},c=2}'),
            GroupMap.from_text('jitter{id,seed=4,tgtR=1}', FREE2),
            GroupMap.from_text('compose{hom{1->a},floor_quad{1,3}}', Z, FREE2),
        ]
        for phi in maps:
            ball = phi.source.ball(4)
            for i in rng.integers(0, len(ball), size=250).tolist():
                assert phi(ball[i]) == phi.uncached(ball[i])

    def test_perturbations_cancel(self):
        cases = [
            ('brooks{ab}', FREE2, Z, '2', '-2'),
            ('id', FREE2, FREE2, 'ab', 'BA'),
            ('random{seed=3,domR=2,tgtR=2}', FREE2, FREE2, 'aB', 'bA'),
            ('floor_scale{2,3}', Z, Z, '-5', '5'),
        ]
        for base, source, target, c, c_inverse in cases:
            phi = GroupMap.from_text(base, source, target)
            twice = GroupMap.from_text(f'perturb{{perturb{{{base},c={c}}},c={c_inverse}}}', source, target)
            for x in source.ball(4):
                assert twice(x) == phi(x)
