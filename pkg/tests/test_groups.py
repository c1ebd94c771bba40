# -*- coding: utf-8 -*-
"""Tests for the groups module of coarse_maps."""
import pytest

from coarse_maps.errors import GroupMismatchError, MalformedInputError, PreconditionError
from coarse_maps.groups import (
    CyclicGroup,
    FreeGroup,
    IntegerGroup,
    LatticeGroup,
    ProductGroup,
    builtin_group,
    centralizer,
    g_op,
    normal_closure,
    parse_group,
    subgroup_closure,
)


FREE2 = FreeGroup(2)
Z = IntegerGroup()


class TestBalls():

    def test_free_ball_sizes(self):
        assert len(FREE2.ball(1)) == 5
        assert len(FREE2.ball(3)) == 53

    def test_integer_ball_order(self):
        assert Z.ball(2) == [0, 1, -1, 2, -2]

    def test_lattice_ball(self):
        plane = LatticeGroup(2)
        assert len(plane.ball(1)) == 5
        assert len(plane.ball(2)) == 13
        assert plane.ball(1)[0] == (0, 0)

    def test_cyclic_ball(self):
        assert CyclicGroup(6).ball(1) == [0, 1, 5]
        assert len(CyclicGroup(6).ball(3)) == 6

    def test_product_ball(self):
        product = ProductGroup(FREE2, Z)
        ball = product.ball(2)
        assert len(ball) == 29
        assert ball[0] == product.identity()
        assert all(product.norm(x) <= 2 for x in ball)

    def test_negative_radius(self):
        with pytest.raises(ValueError):
            Z.ball(-1)


class TestOperations():

    def test_cyclic_arithmetic(self):
        group = CyclicGroup(6)
        assert group.op(4, 5) == 3
        assert group.inv(2) == 4
        assert group.norm(4) == 2

    def test_power(self):
        assert str(FREE2.power(FREE2.parse_element('ab'), -2)) == 'BABA'
        assert Z.power(3, 4) == 12
        assert CyclicGroup(6).power(5, 3) == 3

    def test_conj_and_commutator(self):
        a, b = FREE2.parse_element('a'), FREE2.parse_element('b')
        assert FREE2.format_element(FREE2.conj(a, b)) == 'Bab'
        assert FREE2.format_element(FREE2.commutator(a, b)) == 'ABab'
        assert Z.commutator(3, 5) == 0

    def test_dist(self):
        assert FREE2.dist(FREE2.parse_element('ab'), FREE2.parse_element('aB')) == 2

    def test_checked_op_rejects_foreign_elements(self):
        with pytest.raises(GroupMismatchError):
            g_op(FREE2, FREE2.parse_element('a'), 3)
        with pytest.raises(GroupMismatchError):
            g_op(FreeGroup(3), FREE2.parse_element('a'), FREE2.parse_element('b'))

    def test_is_abelian(self):
        assert Z.is_abelian
        assert not FREE2.is_abelian
        assert ProductGroup(Z, CyclicGroup(3)).is_abelian
        assert not builtin_group('sym3').is_abelian


class TestLiterals():

    def test_lattice(self):
        plane = LatticeGroup(2)
        assert plane.parse_element('1,-2') == (1, -2)
        assert plane.parse_element('[1,-2]') == (1, -2)
        assert plane.format_element((1, -2)) == '[1,-2]'
        with pytest.raises(MalformedInputError):
            plane.parse_element('1,2,3')

    def test_product(self):
        product = ProductGroup(FREE2, Z)
        x = product.parse_element('(ab|-3)')
        assert x == (FREE2.parse_element('ab'), -3)
        assert product.format_element(x) == '(ab|-3)'
        with pytest.raises(MalformedInputError):
            product.parse_element('ab|-3')

    def test_integer(self):
        with pytest.raises(MalformedInputError):
            Z.parse_element('two')


class TestParseGroup():

    def test_specs(self):
        assert parse_group('free:2') == FREE2
        assert parse_group('Z') == Z
        assert parse_group('zpow:3') == LatticeGroup(3)
        assert parse_group('cyc:6') == CyclicGroup(6)
        assert parse_group('prod(free:2,prod(z,cyc:6))').spec == 'prod(free:2,prod(z,cyc:6))'
        assert parse_group('sym3').order == 6

    def test_bad_specs(self):
        for text in ['free', 'free:x', 'cyc:0', 'prod(z)', 'klein']:
            with pytest.raises(MalformedInputError):
                parse_group(text)

    def test_table_file(self, tmp_path):
        path = tmp_path / 'cyc3.txt'
        path.write_text('3\n0 1 2\n1 2 0\n2 0 1\n1\n')
        group = parse_group(f'table:{path}')
        assert group.order == 3
        assert group.is_abelian
        assert group.norm(1) == group.norm(2) == 1

    def test_table_file_not_a_group(self, tmp_path):
        path = tmp_path / 'bad.txt'
        path.write_text('2\n0 1\n0 1\n1\n')
        with pytest.raises(MalformedInputError):
            parse_group(f'table:{path}')

    def test_missing_table_file(self, tmp_path):
        with pytest.raises(MalformedInputError):
            parse_group(f"table:{tmp_path / 'missing.txt'}")


class TestFiniteHelpers():

    def test_builtin_orders(self):
        assert builtin_group('sym3').order == 6
        assert builtin_group('dih4').order == 8
        assert builtin_group('quat8').order == 8
        assert not builtin_group('quat8').is_abelian

    def test_closures_in_sym3(self):
        group = builtin_group('sym3')
        rotations = [x for x in group.elements()
                     if x != group.identity() and group.power(x, 3) == group.identity()]
        assert len(rotations) == 2
        assert len(subgroup_closure(group, rotations[:1])) == 3
        assert len(normal_closure(group, rotations[:1])) == 3
        flips = [x for x in group.elements() if x != group.identity() and x not in rotations]
        assert len(normal_closure(group, flips[:1])) == 6
        assert centralizer(group, group.elements()) == frozenset([group.identity()])

    def test_infinite_groups_rejected(self):
        with pytest.raises(PreconditionError):
            subgroup_closure(Z, [1])
        with pytest.raises(PreconditionError):
            Z.elements()


METRIC_GROUPS = [
    FREE2,
    Z,
    LatticeGroup(2),
    CyclicGroup(6),
    builtin_group('sym3'),
    ProductGroup(FREE2, Z),
]


class TestMetric():

    def test_left_invariance(self):
        for group in METRIC_GROUPS:
            ball = group.ball(2)
            for g in ball:
                for x in ball:
                    for y in ball:
                        assert group.dist(group.op(g, x), group.op(g, y)) == group.dist(x, y)

    def test_symmetric_norms(self):
        for group in METRIC_GROUPS:
            for x in group.ball(3):
                assert group.norm(group.inv(x)) == group.norm(x)

    def test_balls_are_nested(self):
        for group in METRIC_GROUPS:
            for radius in range(3):
                inner, outer = group.ball(radius), group.ball(radius + 1)
                assert set(inner) <= set(outer)
                assert inner == [x for x in outer if group.norm(x) <= radius]
                assert outer[:len(inner)] == inner
