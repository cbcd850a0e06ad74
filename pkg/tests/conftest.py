import shutil

import pytest

from ccgboot.lexicon import Grammar, sample_lexicon_dir
from ccgboot.parser import DEFAULT_GOAL, derivations, parse


@pytest.fixture(scope='session')
def grammar():
    return Grammar.load(sample_lexicon_dir())


@pytest.fixture(scope='session')
def lex(grammar):
    return grammar.compile()


@pytest.fixture
def lexicon_copy(tmp_path):
    """A writable copy of the sample lexicon directory."""
    dest = tmp_path / 'lexicon'
    shutil.copytree(sample_lexicon_dir(), dest)
    return dest


def goal_derivations(sentence, lex, rules=None, limit=None, **kw):
    chart = parse(sentence.split(), lex, rules, **kw)
    return derivations(chart, DEFAULT_GOAL, limit)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section('acceptance criteria')
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
