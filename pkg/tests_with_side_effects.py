#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Automatic Tests for dmod_deform

! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! !  ! ! ! ! ! ! ! ! !
There are two groups of automatic tests for dmod_deform:
* Tests without side-effects: the algebra, the Ext groups, the cover
  cohomology and the deformation engine. Pure computations.
* A system-test that runs the command line tool like a user would:
  it writes to stdout and stderr, reads corpus files and saves reports.

This file contains the latter group of tests.
! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! !  ! ! ! ! ! ! ! ! !

The system-test is much slower as every call runs the whole pipeline up
to the requested subcommand. Orders and check bounds are kept small.

To run only the tests here:
coverage run --source dmod_deform -m pytest tests_with_side_effects.py
To generate a report limited to that run afterwards:
coverage html
"""

import json
import logging

import pytest

import dmod_deform
from dmod_deform import cli
from dmod_deform import report_manager

logging.basicConfig(level=logging.DEBUG)

# #############################################################################
# HELPERS
# #############################################################################


def run_cli(capsys, *arguments: str):
    "Exit code, stdout and stderr of one call."
    exit_code = cli.main(list(arguments))
    captured = capsys.readouterr()
    return exit_code, captured.out, captured.err


# #############################################################################
# SUBCOMMANDS
# #############################################################################

def test_ext(capsys):
    exit_code, out, _ = run_cli(capsys, 'ext', '--a', '1', '--b', '1')
    assert exit_code == 0
    report = json.loads(out)
    assert report['params'] == {'a': '1/1', 'b': '1/1', 'delta': '31/1',
                                'regime': 'a_nonzero'}
    assert report['subcommand'] == 'ext'
    assert report['ext1']['dims'] == [4, 2, 5, 5, 5]
    assert report['ext1']['closed_form_bases_verified'] is True
    assert 'cohomology' not in report


def test_output_is_deterministic(capsys):
    first = run_cli(capsys, 'cohomology', '--a', '0', '--b', '1')
    second = run_cli(capsys, 'cohomology', '--a', '0', '--b', '1')
    assert first[0] == 0
    assert first[1] == second[1]
    report = json.loads(first[1])
    assert report['cohomology']['hh_dims'] == [1, 2, 1]
    assert [c['label'] for c in report['cohomology']['h0']] == \
        ['xi_1', 'xi_2']
    assert report['cohomology']['h1'][0]['representatives']['U2>=U3'] == \
        'x^2*y^-1'


def test_negative_fraction(capsys):
    exit_code, out, _ = run_cli(capsys, 'ext', '--a=-4/6', '--b', '1')
    assert exit_code == 0
    assert json.loads(out)['params']['a'] == '-2/3'


def test_cup(capsys):
    exit_code, out, _ = run_cli(capsys, 'cup', '--a', '1', '--b', '1')
    assert exit_code == 0
    cup = json.loads(out)['cup']
    assert cup['antisymmetric'] is True
    assert cup['words']['t1*t1'] == ['0/1']
    assert cup['words']['t1*t2'] != ['0/1']
    assert cup['scale'] == cup['words']['t1*t2'][0]


def test_all(capsys):
    exit_code, out, _ = run_cli(capsys, 'all', '--a', '0', '--b', '1',
                                '--order', '3', '--check-bound', '4',
                                '--timings')
    assert exit_code == 0
    report = json.loads(out)
    assert report['hull']['relations'] == ['t1*t2 - t2*t1']
    assert report['hull']['order_verified'] == 3
    assert report['hull']['relation_type'] == 'commutator'
    assert report['family']['check']['ok'] is True
    assert report['family']['residue_classical'] is True
    assert report['family']['tau']['xi_2']['U1>=U3'] == 'x^2*y^-1'
    assert 'total_wall' in report['timings']


def test_order_one(capsys):
    exit_code, out, _ = run_cli(capsys, 'all', '--a', '1', '--b', '1',
                                '--order', '1', '--check-bound', '2')
    assert exit_code == 0
    report = json.loads(out)
    assert 'hull' not in report
    assert report['family']['exponential_order'] == 1
    exit_code, _, err_text = run_cli(capsys, 'hull', '--a', '1', '--b', '1',
                                     '--order', '1')
    assert exit_code == 1
    assert 'error [usage]' in err_text


def test_check_deformation(capsys):
    exit_code, out, _ = run_cli(capsys, 'check-deformation', '--a', '1',
                                '--b', '1', '--check-bound', '3')
    assert exit_code == 0
    check = json.loads(out)['check']
    assert check['tangent']['ok'] is True
    assert check['commutator_order_2']['ok'] is True
    assert check['free_order_2']['ok'] is False
    violation = check['free_order_2']['violations'][0]
    assert violation['condition'] == 2
    assert violation['location'] == 'U2>=U3'
    assert sorted(violation['defect']) == ['t1*t2', 't2*t1']


def test_text_format(capsys):
    exit_code, out, _ = run_cli(capsys, 'ext', '--a', '1', '--b', '1',
                                '--format', 'text')
    assert exit_code == 0
    assert 'subcommand: ext' in out.splitlines()
    with pytest.raises(json.JSONDecodeError):
        json.loads(out)


# #############################################################################
# EXIT CODES
# #############################################################################

@pytest.mark.parametrize('arguments, exit_code, code', [
    (('all', '--a', '0', '--b', '0'), 2, 'singular_curve'),
    (('all', '--a', '-3', '--b', '2'), 2, 'singular_curve'),
    (('ext', '--a', '1', '--b', '1', '--degree-cap', '8'), 3,
     'stabilization_failure'),
])
def test_domain_errors(capsys, arguments, exit_code, code):
    returned, out, err_text = run_cli(capsys, *arguments)
    assert returned == exit_code
    assert out == ''
    assert f"error [{code}]" in err_text


@pytest.mark.parametrize('arguments', [
    ('ext', ),
    ('ext', '--a', '1'),
    ('bogus', '--a', '1', '--b', '1'),
    ('ext', '--a', 'x', '--b', '1'),
    ('ext', '--a', '1/0', '--b', '1'),
    ('ext', '--a', '1', '--b', '1', '--order', 'two'),
    ('ext', '--a', '1', '--b', '1', '--format', 'xml'),
    ('ext', '--a', '1', '--b', '1', '--degree-cap', '5'),
    ('corpus', ),
])
def test_usage_errors(capsys, arguments):
    assert run_cli(capsys, *arguments)[0] == 1


def test_version(capsys):
    exit_code, out, _ = run_cli(capsys, '--version')
    assert exit_code == 0
    assert dmod_deform.__version__ in out


# #############################################################################
# FILES
# #############################################################################

def test_output_dir(capsys, tmp_path):
    exit_code, out, _ = run_cli(capsys, 'ext', '--a', '1', '--b', '1',
                                '--output-dir', str(tmp_path))
    assert exit_code == 0
    saved = tmp_path / 'report_1over1_1over1_N6.json'
    assert saved.read_text(encoding='utf-8') == out
    # missing directory
    assert run_cli(capsys, 'ext', '--a', '1', '--b', '1', '--output-dir',
                   str(tmp_path / 'missing'))[0] == 1


def test_corpus_run(capsys, tmp_path):
    corpus = tmp_path / 'curves.txt'
    corpus.write_text('# curves\n1 1 2\n0 0 2\n0 1 2\n', encoding='utf-8')
    exit_code, out, _ = run_cli(capsys, 'corpus', '--corpus', str(corpus),
                                '--check-bound', '2', '--workers', '2',
                                '--output-dir', str(tmp_path))
    assert exit_code == 0
    result = json.loads(out)
    assert result['corpus']['entries'] == 3
    assert len(result['corpus']['sha256']) == 64
    reports = result['reports']
    assert reports[0]['ext1']['dims'] == [4, 2, 5, 5, 5]
    assert reports[1]['error']['code'] == 'singular_curve'
    assert reports[2]['params']['regime'] == 'a_zero'
    assert reports[2]['hull']['relations'] == []
    saved = tmp_path / 'corpus_report.json'
    assert saved.read_text(encoding='utf-8') == out
    # the same corpus with a single worker gives the same bytes
    assert run_cli(capsys, 'corpus', '--corpus', str(corpus),
                   '--check-bound', '2')[1] == out


def test_DModDeform_class(tmp_path):
    tool = dmod_deform.DModDeform({'a': '1', 'b': '1', 'order': 2,
                                   'check_bound': 2},
                                  target_directory=str(tmp_path))
    assert tool.cohomology_report()['cohomology']['hh_dims'] == [1, 2, 1]
    hull = tool.hull_report()['hull']
    assert hull['relations'] == []
    assert hull['order_verified'] == 2
    path = tool.save(tool.hull_report())
    assert path.name == 'report_1over1_1over1_N2.json'
    assert json.loads(path.read_text(encoding='utf-8'))['order'] == 2
    assert report_manager.to_json(tool.family_report()) == \
        report_manager.to_json(tool.family_report())
