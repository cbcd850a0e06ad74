import random
import threading

import pytest
from hypothesis import given, settings, strategies as st

from ccgboot.categories import parse_category
from ccgboot.unify import (FeatureStructure, UnificationFailure, UnifyContext,
                           canonical, copy_fs, format_fs, fs, snapshot_hash,
                           unify, unify_categories)

from oracle import naive_unify, random_fs, random_pairs


def test_idempotent_atomic():
    assert format_fs(unify(fs({'num': 'sg'}), fs({'num': 'sg'}))) == '[num=sg]'


def test_simple_merge():
    out = unify(fs({'num': 'sg'}), fs({'pers': '3'}))
    assert format_fs(out) == '[num=sg,pers=3]'


def test_clash_names_path():
    with pytest.raises(UnificationFailure) as info:
        unify(fs({'agr': {'num': 'sg'}}), fs({'agr': {'num': 'pl'}}))
    assert info.value.path == ('agr', 'num')
    assert {info.value.left, info.value.right} == {'sg', 'pl'}


def test_bottom_unifies_with_anything():
    assert format_fs(unify(FeatureStructure(), fs({'a': 'x'}))) == '[a=x]'
    assert unify(FeatureStructure(), FeatureStructure()).is_bottom


def test_atomic_against_complex_fails():
    with pytest.raises(UnificationFailure):
        unify(fs({'a': 'x'}), fs({'a': {'b': 'y'}}))


def test_reentrancy_propagates():
    shared = FeatureStructure()
    a = fs({'subj': {'agr': shared}, 'agr': shared})
    b = fs({'subj': {'agr': {'num': 'sg'}}})
    out = unify(a, b)
    assert out.get('agr.num') == 'sg'
    assert out.arcs['agr'] is out.get('subj.agr')
    # and the clash is seen through the shared node
    with pytest.raises(UnificationFailure):
        unify(out, fs({'agr': {'num': 'pl'}}))


def test_cyclic_graphs_terminate():
    a = FeatureStructure()
    a.arcs['self'] = a
    b = FeatureStructure()
    b.arcs['self'] = b
    b.arcs['x'] = FeatureStructure(value='1')
    out = unify(a, b)
    assert out.arcs['self'] is out and out.arcs['x'].value == '1'


def test_operands_untouched_on_success_and_failure():
    a = fs({'a': {'b': 'x'}, 'c': 'y'})
    b = fs({'a': {'d': 'z'}})
    c = fs({'c': 'q'})
    before = [snapshot_hash(n) for n in (a, b, c)]
    unify(a, b)
    with pytest.raises(UnificationFailure):
        unify(a, c)
    assert [snapshot_hash(n) for n in (a, b, c)] == before
    assert 'd' not in a.arcs['a'].arcs


def test_result_shares_nothing_with_operands():
    a = fs({'a': {'b': 'x'}})
    b = fs({'c': 'y'})
    out = unify(a, b)
    mine = {id(n) for n in out.nodes()}
    assert not mine & {id(n) for n in a.nodes()}
    assert not mine & {id(n) for n in b.nodes()}


def test_generation_advances_once_per_call():
    ctx = UnifyContext()
    start = ctx.advances
    unify(fs({'a': 'x'}), fs({'b': 'y'}), ctx)
    with pytest.raises(UnificationFailure):
        unify(fs({'a': 'x'}), fs({'a': 'y'}), ctx)
    assert ctx.advances == start + 2


def test_stale_scratch_is_ignored():
    # a failed call leaves forwarding pointers behind; the next generation
    # must not see them
    ctx = UnifyContext()
    a = fs({'a': {'p': 'x'}, 'b': 'y'})
    with pytest.raises(UnificationFailure):
        ctx.unify(a, fs({'a': {'q': 'z'}, 'b': 'n'}))
    assert format_fs(ctx.unify(a, fs({'c': 'w'}))) == '[a=[p=x],b=y,c=w]'


def test_copy_preserves_sharing():
    shared = fs({'n': 'sg'})
    a = fs({'x': shared, 'y': shared})
    b = copy_fs(a)
    assert b.arcs['x'] is b.arcs['y'] and b.arcs['x'] is not shared
    assert canonical(a) == canonical(b)


def test_unify_categories():
    x = parse_category('(S\\NP)/NP[case=acc]')
    y = parse_category('(S[vform=ind]\\NP)/NP')
    out = unify_categories(x, y)
    assert out == parse_category('(S[vform=ind]\\NP)/NP[case=acc]')
    with pytest.raises(UnificationFailure):
        unify_categories(x, parse_category('(S\\NP)/NP[case=nom]'))
    with pytest.raises(UnificationFailure):
        unify_categories(x, parse_category('(S/NP)/NP'))


def test_unify_categories_keeps_coindexing():
    mod = parse_category('NP[@1]/NP[@1]')
    out = unify_categories(mod, parse_category('NP/NP[num=pl]'))
    assert out.result.features.get('num') == 'pl'
    assert out.result.features is out.argument.features


def test_agrees_with_oracle_sample():
    for a, b in random_pairs(500, seed=7):
        try:
            ours = canonical(unify(a, b))
        except UnificationFailure:
            ours = None
        try:
            ref = canonical(naive_unify(a, b))
        except UnificationFailure:
            ref = None
        assert ours == ref


def test_shared_subgraph_between_operands():
    rng = random.Random(3)
    for _ in range(200):
        common = random_fs(rng, 5)
        a = fs({'l': common, 'm': 'x'})
        b = random_fs(rng, 6)
        b.arcs['l'] = common
        ha, hb = snapshot_hash(a), snapshot_hash(b)
        try:
            ours = canonical(unify(a, b))
        except UnificationFailure:
            ours = None
        try:
            ref = canonical(naive_unify(a, b))
        except UnificationFailure:
            ref = None
        assert ours == ref
        assert (snapshot_hash(a), snapshot_hash(b)) == (ha, hb)


def test_threads_use_their_own_context():
    pairs = random_pairs(300, seed=11)
    expected = []
    for a, b in pairs:
        try:
            expected.append(canonical(unify(a, b)))
        except UnificationFailure:
            expected.append(None)
    results = {}

    def work(k):
        # lexical structures are copied into each parse before unifying
        mine = [(copy_fs(a), copy_fs(b)) for a, b in pairs]
        out = []
        for a, b in mine:
            try:
                out.append(canonical(unify(a, b)))
            except UnificationFailure:
                out.append(None)
        results[k] = out

    threads = [threading.Thread(target=work, args=(k,)) for k in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == expected for r in results.values())


values = st.sampled_from(['x', 'y'])
trees = st.recursive(values, lambda kids: st.dictionaries(
    st.sampled_from('abc'), kids, max_size=3), max_leaves=8)


@settings(max_examples=200)
@given(trees, trees)
def test_commutative_up_to_canonical_form(s, t):
    if isinstance(s, str) or isinstance(t, str):
        return
    a, b = fs(s), fs(t)
    try:
        ab = canonical(unify(a, b))
    except UnificationFailure:
        ab = None
    try:
        ba = canonical(unify(b, a))
    except UnificationFailure:
        ba = None
    assert ab == ba


@settings(max_examples=200)
@given(trees)
def test_idempotent(s):
    if isinstance(s, str):
        return
    a = fs(s)
    assert canonical(unify(a, copy_fs(a))) == canonical(a)


def test_shared_node_example():
    shared = fs({'num': 'sg'})
    a = fs({'agr': shared, 'subj': shared})
    out = unify(a, fs({'subj': {'pers': '3'}}))
    assert out.arcs['agr'] is out.arcs['subj']
    assert format_fs(out.arcs['agr']) == '[num=sg,pers=3]'
    assert naive_unify(a, fs({'subj': {'pers': '3'}})) is not None


def test_snapshot_hash_ignores_sharing_identity():
    assert snapshot_hash(fs({})) == snapshot_hash(fs({}))
    s1 = fs({'n': 'sg'})
    s2 = fs({'n': 'sg'})
    assert snapshot_hash(fs({'a': s1, 'b': s1})) == snapshot_hash(fs({'a': s2, 'b': s2}))
    assert snapshot_hash(fs({'a': s1, 'b': s1})) != snapshot_hash(
        fs({'a': {'n': 'sg'}, 'b': {'n': 'sg'}}))
