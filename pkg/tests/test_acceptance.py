"""Acceptance criteria.

Each test records one PASS/FAIL line; the lines are printed at the end of
the pytest run (see ``conftest.py``) and also when this file is run as a
script.  Every threshold is pinned in the constants below.
"""

import os
import re
import time

import pytest

from ccgboot.categories import format_category, is_raised_shape, parse_category
from ccgboot.combinators import RuleName, RuleSet
from ccgboot.lexicon import (lookup, raised_texts, sample_lexicon_dir,
                             working_categories)
from ccgboot.ltag import convert_tree, load_ltag
from ccgboot.parser import (DEFAULT_GOAL, FilterConfig, brute_force_parse,
                            count_derivations, derivations, parse)
from ccgboot.unify import UnificationFailure, canonical, snapshot_hash, unify

from corpus import BAR_SENTENCES, CORPUS, EXAMPLE_1, EXAMPLE_2, HEAVY_NP
from oracle import naive_unify, node_count, random_pairs

# pinned tolerances
C1_MAX_SECONDS = 1.0
C1_MIN_DERIVATIONS = 1
C5_PAIRS = 10_000
C5_MAX_NODES = 12
C5_MAX_SECONDS = 10.0
C5_REQUIRED_AGREEMENT = 1.0          # fraction of pairs
C6_SENTENCES = 30
C6_MAX_TOKENS = 8
C6_MAX_CATEGORIES = 4
C7_MIN_REDUCED_SENTENCES = 1
C8_MIN_RAISED_PER_NP = 1
C9_REQUIRED_FRACTION = 1.0
C10_SENTENCES = 4

APP_COORD = RuleSet.from_spec('FwdApp,BwdApp,Coord')
NO_XCOMP = RuleSet().without(RuleName.BwdXComp)

DITRANS_TREE = '(alphanx0Vnx1pnx2 S () (NP !sub) (V !anchor) (NP !sub) (PP !sub))'
TRANS_TREE = '(alphanx0Vnx1 S () (NP !sub) (V !anchor) (NP !sub))'

RESULTS = {}


def record(number, ok, detail):
    RESULTS[number] = '%s criterion %2d: %s' % ('PASS' if ok else 'FAIL', number, detail)
    assert ok, RESULTS[number]


def shape(cat):
    return format_category(cat, features=False, indices=False)


def goal_derivations(sentence, lex, rules=None):
    return derivations(parse(sentence.split(), lex, rules), DEFAULT_GOAL, None)


@pytest.fixture(scope='module')
def no_raise_lex(grammar):
    return grammar.compile(raise_rules=[])


def check_1(lex, rules=APP_COORD):
    start = time.perf_counter()
    ds = goal_derivations(EXAMPLE_1, lex, rules)
    elapsed = time.perf_counter() - start
    used = set().union(*(d.rules_used() for d in ds)) if ds else set()
    allowed = {RuleName.FwdApp, RuleName.BwdApp, RuleName.Coord, RuleName.Lex}
    ok = (len(ds) >= C1_MIN_DERIVATIONS and used <= allowed
          and elapsed < C1_MAX_SECONDS and all(d.verify() for d in ds))
    return ok, len(ds), elapsed


def check_2(lex, no_raise_lex, rules=None):
    ds = goal_derivations(EXAMPLE_2, lex, rules)

    def complete(d):
        raised_leaf = any(
            n.rule is RuleName.FwdTypeRaise and n.entry.source == 'raised'
            and shape(n.category) == 'S/(S\\NP)' for n in d.nodes())
        rules_used = d.rules_used()
        return raised_leaf and {RuleName.FwdComp, RuleName.Coord} <= rules_used

    without = goal_derivations(EXAMPLE_2, no_raise_lex, rules)
    ok = bool(ds) and all(complete(d) for d in ds) and not without
    return ok, len(ds), len(without)


def test_criterion_1_vp_coordination(lex):
    ok, n, elapsed = check_1(lex)
    record(1, ok, 'VP coordination with application + coordination only: %d '
           'derivations in %.3f s (limit %.1f s)' % (n, elapsed, C1_MAX_SECONDS))


def test_criterion_2_gapping(lex, no_raise_lex):
    ok, n, without = check_2(lex, no_raise_lex)
    record(2, ok, 'gapping: %d derivations, all with raised subject, >B '
           'and &; %d without hidden raising' % (n, without))


def test_criterion_3_heavy_np_shift(lex, no_raise_lex):
    ds = goal_derivations(HEAVY_NP, lex)
    with_x = sum(RuleName.BwdXComp in d.rules_used() for d in ds)
    without = goal_derivations(HEAVY_NP, lex, NO_XCOMP)
    c1 = check_1(lex, RuleSet.from_spec('FwdApp,BwdApp,Coord', NO_XCOMP))[0]
    c2 = check_2(lex, no_raise_lex, NO_XCOMP)[0]
    ok = with_x >= 1 and not without and c1 and c2
    record(3, ok, 'heavy-NP shift: %d of %d derivations use <Bx; %d without '
           'BwdXComp; criteria 1-2 without BwdXComp: %s'
           % (with_x, len(ds), len(without), 'pass' if c1 and c2 else 'fail'))


def test_criterion_4_conversion():
    ditrans = shape(convert_tree(load_ltag(DITRANS_TREE)[0]).category)
    trans = shape(convert_tree(load_ltag(TRANS_TREE)[0]).category)
    ok = ditrans == '((S\\NP)/PP)/NP' and trans == '(S\\NP)/NP'
    record(4, ok, 'ditransitive -> %s, transitive -> %s' % (ditrans, trans))


def test_criterion_5_quasi_destructive():
    pairs = random_pairs(C5_PAIRS, seed=2024, max_nodes=C5_MAX_NODES)
    biggest = max(max(node_count(a), node_count(b)) for a, b in pairs)
    agree = intact = successes = 0
    start = time.perf_counter()
    for a, b in pairs:
        before = snapshot_hash(a), snapshot_hash(b)
        try:
            ours = canonical(unify(a, b))
            successes += 1
        except UnificationFailure:
            ours = None
        intact += (snapshot_hash(a), snapshot_hash(b)) == before
        try:
            ref = canonical(naive_unify(a, b))
        except UnificationFailure:
            ref = None
        agree += ours == ref
    elapsed = time.perf_counter() - start
    ok = (len(pairs) >= C5_PAIRS and biggest <= C5_MAX_NODES
          and agree / len(pairs) >= C5_REQUIRED_AGREEMENT
          and intact == len(pairs) and elapsed < C5_MAX_SECONDS)
    record(5, ok, '%d pairs (<= %d nodes, %d unifiable): %d agree with the '
           'copy-first oracle, %d operands intact, %.2f s (limit %.0f s)'
           % (len(pairs), biggest, successes, agree, intact, elapsed,
              C5_MAX_SECONDS))


def test_criterion_6_oracle_equivalence(lex):
    assert len(CORPUS) == C6_SENTENCES
    mismatches = []
    for sentence in CORPUS:
        tokens = sentence.split()
        assert len(tokens) <= C6_MAX_TOKENS
        assert all(len(lookup(lex, t)) <= C6_MAX_CATEGORIES for t in tokens)
        chart = parse(tokens, lex, filters=FilterConfig.disabled())
        if count_derivations(chart) != brute_force_parse(
                tokens, lex, max_tokens=C6_MAX_TOKENS,
                max_entries=C6_MAX_CATEGORIES):
            mismatches.append(sentence)
    record(6, not mismatches, '%d sentences: root categories and derivation '
           'counts equal brute force on %d' % (len(CORPUS),
                                               len(CORPUS) - len(mismatches)))


def test_criterion_7_filter_soundness(lex):
    changed = []
    reduced = 0
    for sentence in CORPUS:
        tokens = sentence.split()
        plain = parse(tokens, lex, filters=FilterConfig.disabled())
        filtered = parse(tokens, lex)
        if count_derivations(plain, DEFAULT_GOAL) != \
                count_derivations(filtered, DEFAULT_GOAL):
            changed.append(sentence)
        reduced += filtered.size() < plain.size()
        assert filtered.size() <= plain.size()
    ok = not changed and reduced >= C7_MIN_REDUCED_SENTENCES
    record(7, ok, 'span filter: goal cells changed on %d sentences, chart '
           'strictly smaller on %d' % (len(changed), reduced))


# T/(T\X) or T\(T/X) written out: both T texts identical, features included
_T = r'([A-Za-z]+\d?(?:\[[^\]]*\])?)'
RAISED_TEXT = re.compile(_T + r'/\(\1\\[^()]+\)|' + _T + r'\\\(\2/[^()]+\)')


def test_criterion_8_hidden_raising(lex):
    path = sample_lexicon_dir()
    grep_hits = []
    for name in sorted(os.listdir(path)):
        if name == 'compiled.db':
            continue
        with open(os.path.join(path, name), encoding='utf-8') as f:
            grep_hits += [line for line in f if RAISED_TEXT.search(line)]
    parsed_hits = raised_texts(working_categories(path))
    short = []
    for word in lex.words():
        entries = lookup(lex, word)
        if any(e.source == 'base' and e.category.is_atomic
               and e.category.label == 'NP' for e in entries):
            raised = [e for e in entries if e.source == 'raised'
                      and is_raised_shape(e.category)
                      and shape(e.category) == 'S/(S\\NP)']
            if len(raised) < C8_MIN_RAISED_PER_NP:
                short.append(word)
    compiled_hits = [line for line in lex.dump().splitlines()
                     if RAISED_TEXT.search(line)]
    nps = sum(1 for w in lex.words() if any(
        e.category.is_atomic and e.category.label == 'NP'
        for e in lookup(lex, w)))
    ok = (not grep_hits and not parsed_hits and not short and nps > 0
          and len(compiled_hits) >= nps * C8_MIN_RAISED_PER_NP)
    record(8, ok, 'working files: %d raised-shape categories; compiled: %d '
           'raised lines, %d of %d NP words have a raised subject entry'
           % (len(grep_hits) + len(parsed_hits), len(compiled_hits),
              nps - len(short), nps))


def test_criterion_8_grep_pattern_sanity():
    assert RAISED_TEXT.search('S/(S\\NP)')
    assert RAISED_TEXT.search('S[@1]\\(S[@1]/NP[num=sg])')
    assert not RAISED_TEXT.search('S[wh=+]/(S\\NP)')
    assert not RAISED_TEXT.search('(S\\NP0)/NP1')
    assert not RAISED_TEXT.search('S/(S/NP)')
    assert not RAISED_TEXT.search('(S[@1]\\NP[@2])\\(S[@1]\\NP[@2])')


def test_criterion_9_round_trip(grammar):
    texts = [text for entry in grammar.catdb for text, _ in entry.clauses]
    good = 0
    for text in texts:
        cat = parse_category(text, grammar.inventory.atoms)
        again = parse_category(format_category(cat), grammar.inventory.atoms)
        good += again.identical(cat) and format_category(again) == format_category(cat)
    ok = texts and good / len(texts) >= C9_REQUIRED_FRACTION
    record(9, ok, '%d of %d shipped cat.db categories survive '
           'parse -> format -> parse' % (good, len(texts)))


def test_criterion_10_bar(lex):
    assert len(BAR_SENTENCES) == C10_SENTENCES
    wrong = [s for s, expected in BAR_SENTENCES.items()
             if bool(goal_derivations(s, lex)) != expected]
    record(10, not wrong, '+BAR: %d of %d sentences behave as expected '
           '(complementizer required on sentential subjects, optional on '
           'that-complements)' % (len(BAR_SENTENCES) - len(wrong),
                                  len(BAR_SENTENCES)))


if __name__ == '__main__':
    import sys
    sys.exit(pytest.main([__file__, '-q']))
