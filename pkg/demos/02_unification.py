"""Quasi-destructive unification leaves both operands untouched."""

from ccgboot.unify import (UnificationFailure, format_fs, fs, snapshot_hash,
                           unify)

agr = fs({'num': 'sg'})
verb = fs({'agr': agr, 'subj': {'agr': agr}})
noun = fs({'subj': {'agr': {'pers': '3'}}})

before = snapshot_hash(verb), snapshot_hash(noun)
result = unify(verb, noun)
print('verb   ', format_fs(verb))
print('noun   ', format_fs(noun))
print('result ', format_fs(result))
print('shared in result:', result.arcs['agr'] is result.get('subj.agr'))
print('operands unchanged:', (snapshot_hash(verb), snapshot_hash(noun)) == before)

try:
    unify(result, fs({'agr': {'num': 'pl'}}))
except UnificationFailure as exc:
    print('clash:', exc)
print('still unchanged:', (snapshot_hash(verb), snapshot_hash(noun)) == before)
