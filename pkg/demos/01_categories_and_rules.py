"""Categories, features and the combinators, one step at a time."""

from ccgboot.categories import format_category, parse_category as C
from ccgboot.combinators import (backward_apply, backward_cross_compose,
                                 coordinate, forward_apply, forward_compose,
                                 type_raise)

loves = C('(S\\NP)/NP[case=acc]')
print('loves       ', loves)
print('  + Betsy   ', forward_apply(loves, C('NP[case=acc]')))
print('  + they    ', forward_apply(loves, C('NP[case=nom]')), '(case clash)')

vp = forward_apply(loves, C('NP'))
print('Paddington + loves Betsy =', backward_apply(C('NP'), vp))

# a raised subject composes with the verb, leaving the object pending
subject = type_raise(C('NP'), C('S'), 'forward')
print('raised subject', subject)
print('  >B loves    ', forward_compose(subject, loves))

# two such fragments coordinate
left = forward_compose(subject, loves)
print('  & its twin  ', coordinate(left, left))

# heavy-NP shift: the adverb slips between verb and object
dearly = C('(S\\NP)\\(S\\NP)')
print('loves <Bx dearly =', backward_cross_compose(C('(S\\NP)/NP'), dearly))

# coindexed features flow from argument to result
modifier = C('NP[@1]/NP[@1]')
print('modifier over plural:', format_category(
    forward_apply(modifier, C('NP[num=pl]'))))
