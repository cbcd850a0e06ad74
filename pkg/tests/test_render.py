import json

import pytest

from ccgboot.render import (derivation_to_dict, render, render_ascii,
                            render_bracketed)

from conftest import goal_derivations
from corpus import EXAMPLE_2, HEAVY_NP


@pytest.fixture(scope='module')
def simple(lex):
    return goal_derivations('Paddington loves Betsy', lex)[0]


def test_ascii_layout(simple):
    lines = render_ascii(simple).splitlines()
    assert lines[0].split() == ['Paddington', 'loves', 'Betsy']
    assert lines[2].split() == ['NP', '(S\\NP)/NP', 'NP']
    assert lines[3].strip().endswith('>') and lines[4].strip() == 'S\\NP'
    assert lines[5].endswith('<') and lines[6].strip() == 'S'
    # the final rule spans the whole sentence
    assert len(lines[5]) >= len(lines[0].rstrip())


def test_ascii_symbols(lex):
    text = render_ascii(goal_derivations(EXAMPLE_2, lex)[0])
    for symbol in ('>T', '>B', '&'):
        assert symbol in text
    text = render_ascii(goal_derivations(HEAVY_NP, lex)[0])
    assert '<Bx' in text


def test_ascii_features(simple):
    assert 'case=acc' in render_ascii(simple, features=True)
    assert 'case=acc' not in render_ascii(simple)


def test_bracketed(simple):
    assert render_bracketed(simple) == \
        '(< S (NP Paddington) (> S\\NP ((S\\NP)/NP loves) (NP Betsy)))'


def test_json(simple):
    data = json.loads(render(simple, 'json-lines'))
    assert data == derivation_to_dict(simple)
    assert data['rule'] == 'BwdApp'
    assert [c['rule'] for c in data['children']] == ['Lex', 'FwdApp']
    assert data['children'][0]['word'] == 'Paddington'


def test_unknown_format(simple):
    with pytest.raises(ValueError):
        render(simple, 'svg')
