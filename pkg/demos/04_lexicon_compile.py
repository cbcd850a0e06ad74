"""Resolving words against the databases and compiling in hidden raising."""

from ccgboot.lexicon import Grammar, lookup, sample_lexicon_dir

grammar = Grammar.load(sample_lexicon_dir())
for word in ('loves', 'sandwiches', 'that'):
    for entry in grammar.resolve(word):
        print('%-11s %-5s %s' % (word, entry.pos, entry.category))

lex = grammar.compile()
print()
print('base entries  ', len(lex.base_entries()))
print('raised entries', len(lex.raised_entries()))
for entry in lookup(lex, 'Paddington'):
    print('  Paddington %-7s %s' % (entry.source, entry.category))
