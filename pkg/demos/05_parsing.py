"""Parsing coordination, gapping and heavy-NP shift with the sample grammar."""

from ccgboot.combinators import RuleName, RuleSet
from ccgboot.lexicon import Grammar, sample_lexicon_dir
from ccgboot.parser import count_derivations, derivations, parse
from ccgboot.render import render_ascii

lex = Grammar.load(sample_lexicon_dir()).compile()

sentences = [
    ('Paddington makes marmalade sandwiches and eats them every day',
     RuleSet.from_spec('FwdApp,BwdApp,Coord')),
    ('Paddington loves and Betsy hates marmalade sandwiches', RuleSet()),
    ('Paddington loves dearly his very sticky marmalade sandwiches', RuleSet()),
]
for sentence, rules in sentences:
    chart = parse(sentence.split(), lex, rules)
    total = sum(count_derivations(chart, 'S[bar=-]').values())
    print('%s\n  %d derivations, %d chart items' % (sentence, total, chart.size()))
    print(render_ascii(derivations(chart, limit=1)[0]))
    print()

# without crossing composition the shifted object cannot be reached
heavy = sentences[2][0].split()
chart = parse(heavy, lex, RuleSet().without(RuleName.BwdXComp))
print('without <Bx:', len(derivations(chart)), 'derivations')
