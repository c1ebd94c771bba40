# -*- coding: utf-8 -*-
"""Tests for defect sets and profiles in coarse_maps."""
import pytest

import coarse_maps.defects as df
from coarse_maps.errors import ConfigurationError, MalformedInputError
from coarse_maps.gmaps import GroupMap
from coarse_maps.groups import FreeGroup, IntegerGroup


FREE2 = FreeGroup(2)
Z = IntegerGroup()

BROOKS = 'brooks{ab}'
HALF = 'floor_scale{1,2}'


class TestClassify():

    def test_plateau(self):
        assert df.classify([1, 2, 2, 2], 3) == df.Classification.PLATEAU

    def test_growing(self):
        assert df.classify([1, 2, 3], 3) == df.Classification.GROWING

    def test_inconclusive(self):
        assert df.classify([1, 2, 2], 3) == df.Classification.INCONCLUSIVE
        assert df.classify([1, 1], 3) == df.Classification.INCONCLUSIVE

    def test_profile_parameters(self):
        with pytest.raises(ConfigurationError):
            df.check_profile_parameters(2, 3)
        with pytest.raises(ConfigurationError):
            df.check_profile_parameters(5, 1)

    def test_profiles_must_be_monotone(self):
        rows = [df.ProfileRow(1, 2, 3), df.ProfileRow(2, 2, 1)]
        with pytest.raises(ValueError):
            df.DefectProfile('D', rows)


class TestDefectSets():

    def test_floor_scale_left_and_right(self):
        phi = GroupMap.from_text(HALF)
        assert df.set_D(phi, 4).sorted() == [0, 1]
        assert df.set_Dstar(phi, 4).sorted() == [0, -1]

    def test_middle_set_of_a_homomorphism(self):
        phi = GroupMap.from_text('hom{a->ab,b->b}')
        assert df.set_M(phi, 2).elements == frozenset([FREE2.identity()])

    def test_brooks_defects_are_small(self):
        phi = GroupMap.from_text(BROOKS)
        assert set(df.set_D(phi, 3)) <= {-1, 0, 1}
        assert 1 in df.set_D(phi, 1)

    def test_unknown_kind(self):
        with pytest.raises(ConfigurationError):
            df.defect_set('Q', GroupMap.from_text(HALF), 2)


class TestProfiles():

    def test_homomorphism_profile_is_zero(self):
        phi = GroupMap.from_text('hom{a->ab,b->b}')
        result = df.profile('D', phi, 4)
        assert result.max_norms == [0, 0, 0, 0]
        assert result.is_plateau
        assert result.mode == df.EXACT

    def test_brooks_plateaus_at_one(self):
        result = df.profile('D', GroupMap.from_text(BROOKS), 4)
        assert result.max_norms == [1, 1, 1, 1]
        assert result.is_plateau

    def test_square_grows(self):
        result = df.profile('D', GroupMap.from_text('monomial{2}'), 4)
        assert result.max_norms == [2, 8, 18, 32]
        assert result.classification == df.Classification.GROWING

    def test_set_sizes_are_monotone(self):
        result = df.profile('M', GroupMap.from_text('monomial{2}'), 4)
        sizes = [row.set_size for row in result.rows]
        assert sizes == sorted(sizes)

    def test_sampling_over_budget(self):
        result = df.profile('D', GroupMap.from_text(BROOKS), 3, budget=10, samples=50)
        assert result.mode == df.SAMPLED
        assert result.rows[0].mode == df.SAMPLED

    def test_sampling_is_seeded(self):
        phi = GroupMap.from_text('monomial{2}')
        first = df.profile('A', phi, 3, budget=10, samples=200, seed=5)
        second = df.profile('A', phi, 3, budget=10, samples=200, seed=5)
        assert first.rows == second.rows

    def test_perturbed_identity_grows_by_two(self):
        phi = GroupMap.from_text('perturb{id,c=a}', FREE2)
        result = df.profile('D', phi, 5)
        # φ(y)⁻¹φ(x)⁻¹φ(xy) = A·y⁻¹·A·y·a, longest at y = b^r
        assert result.max_norms == [5, 7, 9, 11, 13]
        assert result.classification == df.Classification.GROWING
        assert result.mode == df.EXACT

    def test_a_and_m_profiles_agree(self):
        maps = [
            'perturb{floor_scale{1,2},c=1}',
            'perturb{floor_scale{2,3},c=-2}',
            'perturb{floor_scale{3,2},c=1}',
            'perturb{id,c=-2}',
            'monomial{2}',
        ]
        for text in maps:
            phi = GroupMap.from_text(text)
            assert df.profile('A', phi, 5).classification == df.profile('M', phi, 5).classification
        phi = GroupMap.from_text('perturb{hom{1->a},c=b}', Z, FREE2)
        assert df.profile('A', phi, 5).is_plateau
        assert df.profile('M', phi, 5).is_plateau


class TestEquivariance():

    def test_quadratic_maps(self):
        assert df.equiv_defect(GroupMap.from_text('monomial{2}'), 4).max_norms == [0] * 4
        rounded = df.equiv_defect(GroupMap.from_text('floor_quad{1,3}'), 4)
        assert rounded.max_norms == [1] * 4

    def test_budget_counts_triples(self):
        phi = GroupMap.from_text('floor_quad{1,3}')
        # ball(3) of Z has 7 elements
        assert df.equiv_defect(phi, 3, budget=7 ** 3).mode == df.EXACT
        assert df.equiv_defect(phi, 3, budget=7 ** 3 - 1).mode == df.SAMPLED

    def test_growth_matches_brute_force(self):
        phi = GroupMap.from_text('random{seed=7,domR=3,tgtR=3}', FREE2, FREE2)
        grower = df.EquivarianceGrower(phi)
        grower.grow(1)
        grower.grow(2)
        term = df.equivariance_term(phi)
        ball = FREE2.ball(2)
        expected = {term(x1, x2, x3, t) for x1 in ball for x2 in ball for x3 in ball for t in ball}
        assert grower.values == expected
        assert grower.mode == df.EXACT

    def test_bounded_random_map(self):
        phi = GroupMap.from_text('random{seed=7,domR=3,tgtR=3}', FREE2, FREE2)
        result = df.equiv_defect(phi, 3, budget=10 ** 4)
        # values lie in ball(3), so no defect exceeds 4·3·2 = 24, which radius 2 reaches
        assert result.max_norms == [21, 24, 24]
        assert result.classification == df.Classification.INCONCLUSIVE
        assert [row.mode for row in result.rows] == [df.EXACT, df.EXACT, df.SAMPLED]


class TestQuadruples():

    def test_mu(self):
        phi = GroupMap.from_text('monomial{2}')
        assert df.mu(phi, df.Quadruple(Z, 0, 1, 3, 2)) == 4

    def test_relation_is_checked(self):
        with pytest.raises(MalformedInputError):
            df.Quadruple(Z, 0, 1, 3, 3)

    def test_from_triple(self):
        a, b = FREE2.parse_element('a'), FREE2.parse_element('b')
        q = df.Quadruple.from_triple(FREE2, a, b, a)
        assert FREE2.format_element(q.x4) == 'aBa'
        assert q.opposite().opposite() == q


class TestChecks():

    def test_perturbation_identity(self):
        phi = GroupMap.from_text(BROOKS)
        assert df.perturbation_identity_check(phi, 2, 2).holds
        free = GroupMap.from_text('id', FREE2)
        assert df.perturbation_identity_check(free, FREE2.parse_element('ab'), 2).holds

    def test_aphi_inclusions(self):
        phi = GroupMap.from_text('perturb{floor_scale{2,3},c=-2}')
        result = df.lemma_aphi_check(phi, 2)
        assert result.holds is True
        assert result.mode == df.EXACT
        assert df.lemma_aphi_check(GroupMap.from_text('perturb{brooks{ab},c=2}'), 1).holds is True

    def test_aphi_reads_the_quadruple_set(self, mocker):
        phi = GroupMap.from_text('perturb{floor_scale{2,3},c=-2}')
        set_A = mocker.patch('coarse_maps.defects.set_A', return_value=df.DefectSet(frozenset(), Z, 4))
        result = df.lemma_aphi_check(phi, 2)
        assert result.holds is False
        assert result.witness['inclusion'] == 'phi(1)M in A'
        assert set_A.called

    def test_aphi_rejects_a_foreign_quadruple_value(self, mocker):
        phi = GroupMap.from_text('perturb{floor_scale{2,3},c=-2}')
        real_set_A = df.set_A

        def corrupted(psi, radius, **kwargs):
            if radius == 2:
                return df.DefectSet(frozenset([1000]), Z, radius)
            return real_set_A(psi, radius, **kwargs)
        mocker.patch('coarse_maps.defects.set_A', side_effect=corrupted)
        result = df.lemma_aphi_check(phi, 2)
        assert result.holds is False
        assert result.witness == {'inclusion': 'A in M^-1 M', 'element': '1000'}

    def test_aphi_missing_from_sampled_set_is_undecided(self, mocker):
        phi = GroupMap.from_text('perturb{floor_scale{2,3},c=-2}')
        mocker.patch('coarse_maps.defects.set_A',
                     return_value=df.DefectSet(frozenset(), Z, 4, df.SAMPLED))
        result = df.lemma_aphi_check(phi, 2)
        assert result.holds is None
        assert result.mode == df.SAMPLED
        assert result.details['unresolved'] > 0

    def test_aphi_inclusions_sampled(self):
        phi = GroupMap.from_text('perturb{id,c=ba}', FREE2)
        result = df.lemma_aphi_check(phi, 2, budget=100, samples=500)
        assert result.holds
        assert result.mode == df.SAMPLED

    def test_x_inverse(self):
        assert df.x_inverse_check(GroupMap.from_text('perturb{floor_scale{2,3},c=-2}'), 2).holds
        assert df.x_inverse_check(GroupMap.from_text('jitter{id,seed=2,tgtR=1}', FREE2), 2).holds

    def test_product_identity(self):
        assert df.product_identity_check(GroupMap.from_text('perturb{brooks{ab},c=1}'), 1).holds

    def test_horizontal_shift(self):
        phi = GroupMap.from_text('random{seed=3,domR=3,tgtR=2}', FREE2, FREE2)
        assert df.horizontal_shift_check(phi, FREE2.parse_element('aB'), 2).holds

    def test_opposite(self):
        phi = GroupMap.from_text('random{seed=9,domR=2,tgtR=2}', FREE2, FREE2)
        assert df.opposite_check(phi, 2).holds

    def test_verdicts(self):
        assert df.CheckResult('x', True).verdict == 'holds'
        assert df.CheckResult('x', False).verdict == 'violated'
        assert df.CheckResult('x', None).verdict == 'inconclusive'
