# -*- coding: utf-8 -*-
"""Tests for report rendering in coarse_maps."""
import json

import pytest

from coarse_maps.defects import SAMPLED, CheckResult, DefectProfile, ProfileRow
from coarse_maps.reports import Report


CONFIG = {'command': 'defect-profile', 'map': 'brooks{ab}', 'radius': 3}

PROFILE = DefectProfile('D', [ProfileRow(1, 3, 1), ProfileRow(2, 3, 1), ProfileRow(3, 3, 1)])


def test_profile_csv():
    report = Report('defect-profile', CONFIG)
    report.add_profile(PROFILE)
    assert report.to_csv() == ('kind,radius,set_size,max_norm,mode\n'
                               'D,1,3,1,exact\n'
                               'D,2,3,1,exact\n'
                               'D,3,3,1,exact\n')


def test_check_csv():
    report = Report('pol2-check', CONFIG)
    report.add_check(CheckResult('pol2', False, {'g1': '1', 'g2': '1', 'g3': '-1'}))
    lines = report.to_csv().splitlines()
    assert lines[0] == 'name,verdict,mode,witness'
    assert lines[1].startswith('pol2,violated,exact,')
    assert '"g1"' in lines[1]


def test_json_document():
    report = Report('defect-profile', CONFIG)
    report.add_profile(PROFILE)
    document = json.loads(report.to_json())
    assert set(document) == {'config', 'results', 'witnesses', 'mode'}
    assert document['results'][0]['classification'] == 'Plateau'
    assert document['results'][0]['max_norms'] == [1, 1, 1]
    assert document['mode'] == 'exact'


def test_rendering_is_deterministic():
    first, second = Report('defect-profile', dict(CONFIG)), Report('defect-profile', dict(reversed(CONFIG.items())))
    for report in (first, second):
        report.add_profile(PROFILE)
    assert first.to_json() == second.to_json()
    assert first.render('csv') == second.render('csv')


def test_violations():
    report = Report('pol2-check', CONFIG)
    report.add_check(CheckResult('pol2', True))
    assert not report.violated
    report.add_check(CheckResult('window', None))
    assert not report.violated
    report.add_check(CheckResult('pol2', False, {'g1': '1'}))
    assert report.violated
    assert report.witnesses == [{'name': 'pol2', 'g1': '1'}]


def test_expectations():
    report = Report('defect-profile', CONFIG)
    report.expect('classification', None, 'Growing')
    report.expect('classification', 'plateau', 'Plateau')
    assert not report.violated
    report.expect('classification', 'Plateau', 'Growing')
    assert report.violated
    assert report.witnesses[-1] == {'name': 'classification', 'expected': 'Plateau', 'actual': 'Growing'}


def test_sampled_mode():
    report = Report('qsg-witness', CONFIG)
    report.add_result({'name': 'witness'}, SAMPLED)
    assert report.mode == SAMPLED
    assert json.loads(report.to_json())['mode'] == SAMPLED


def test_unknown_format():
    with pytest.raises(ValueError):
        Report('x', CONFIG).render('xml')


def test_computed_values_fill_the_verdict_column():
    report = Report('zquad', CONFIG)
    report.add_result({'name': 'extend', 'n': 3, 'value': 'bAAbAb'})
    assert report.to_csv() == 'name,verdict,mode,witness\nextend,bAAbAb,exact,\n'
