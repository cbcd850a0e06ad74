"""
Two-stage parsing: category selection, then a unification-based CKY chart.

Stage one looks every token up in a compiled lexicon and prunes categories
that cannot be used (the span filter) or are too unlikely (the n-best cut of
a :class:`CategoryScorer`).  Stage two fills a packed CKY chart: items with
the same span and the same category, features included, are merged and
their back-pointers accumulated.

    >>> from ccgboot.lexicon import Grammar, sample_lexicon_dir
    >>> lex = Grammar.load(sample_lexicon_dir()).compile()
    >>> chart = parse('Paddington loves Betsy'.split(), lex)
    >>> [str(d.category) for d in derivations(chart, limit=1)]
    ['S[bar=-,vform=ind,tense=pres]']
"""

import string
from dataclasses import dataclass, field

from .categories import (BACKWARD, FORWARD, as_category, directional_arity,
                         format_category, spine)
from .combinators import (RuleName, RuleSet, apply_all, coordinate,
                          type_raise)
from .lexicon import lookup
from .unify import UnificationFailure, UnifyContext

__all__ = [
    'DEFAULT_GOAL', 'FilterConfig', 'CategoryScorer', 'FrequencyScorer',
    'TokenAssignment', 'ChartItem', 'Back', 'Chart', 'Derivation',
    'tokenize', 'select_categories', 'parse', 'derivations',
    'count_derivations', 'brute_force_parse', 'BruteForceLimit',
]

DEFAULT_GOAL = 'S[bar=-]'

_PUNCT = set(string.punctuation)


def tokenize(sentence):
    """Whitespace split, trailing punctuation stripped, punctuation dropped."""
    tokens = []
    for raw in sentence.split():
        word = raw.rstrip(string.punctuation) or raw
        if all(ch in _PUNCT for ch in word):
            continue
        tokens.append(word)
    return tokens


# -- stage one: category selection ------------------------------------------

@dataclass(frozen=True)
class FilterConfig:
    span: bool = True
    exempt_raised: bool = True
    exempt_conj: bool = True
    fallback: str = None            # unknown-word policy for lookup()

    @classmethod
    def disabled(cls):
        return cls(span=False)


class CategoryScorer:
    """Interface for stage-one scoring.

    ``score`` returns a non-negative weight for one candidate entry;
    ``n_best`` (``None`` for no cut) is how many base entries per token
    survive.
    """
    n_best = None

    def score(self, token, entry, context):
        return 1.0


class FrequencyScorer(CategoryScorer):
    """Relative frequency from a ``(word, category) -> count`` table.

    Categories are keyed by their featureless text (``(S\\NP)/NP``).  Words
    missing from the table score uniformly.
    """

    def __init__(self, counts=None, n_best=None):
        self.counts = dict(counts or {})
        self.n_best = n_best
        self._totals = {}
        for (word, _), count in self.counts.items():
            self._totals[word] = self._totals.get(word, 0) + count

    def score(self, token, entry, context):
        total = self._totals.get(token)
        if not total:
            return 1.0
        key = format_category(entry.category, features=False, indices=False)
        return self.counts.get((token, key), 0) / total


@dataclass
class TokenAssignment:
    token_index: int
    token: str
    surviving: list
    filtered_out: list = field(default_factory=list)   # (entry, reason)

    @property
    def unknown(self):
        return not self.surviving and not self.filtered_out


def _absorbs(cat, slash):
    """True if some spine argument of ``cat`` is ``X slash (Y slash Z)``.

    Such a functor can take over a pending ``slash`` argument of a
    neighbour, as ``S/(S/NP)`` does for the object of ``Paddington loves``.
    """
    for s, arg in spine(cat):
        if s == slash and not arg.is_atomic and arg.slash == slash:
            return True
    return False


def _slack(entries_per_token):
    """Per token: (absorbers to the right, absorbers to the left)."""
    fwd = [any(_absorbs(e.category, FORWARD) for e in es) for es in entries_per_token]
    bwd = [any(_absorbs(e.category, BACKWARD) for e in es) for es in entries_per_token]
    n = len(entries_per_token)
    return [(sum(bwd[i + 1:]), sum(fwd[:i])) for i in range(n)]


def _span_ok(entry, i, n, slack=(0, 0)):
    left, right = directional_arity(entry.category)
    return left <= i + slack[0] and right <= n - i - 1 + slack[1]


def select_categories(tokens, lex, scorer=None, filters=None):
    """Per-token entries surviving the span filter and the n-best cut.

    The span filter drops a category needing more arguments on one side
    than there are tokens there, counting each higher-order functor on the
    opposite side as one extra slot it could absorb.

    Raised entries are ranked after base entries and are never removed by
    the n-best cut alone.
    """
    if not tokens:
        raise ValueError('no tokens')
    scorer = scorer or CategoryScorer()
    filters = filters or FilterConfig()
    n = len(tokens)
    looked_up = [lookup(lex, token, filters.fallback) for token in tokens]
    slack = _slack(looked_up)
    out = []
    for i, token in enumerate(tokens):
        entries = looked_up[i]
        assignment = TokenAssignment(i, token, [])
        candidates = []
        for order, entry in enumerate(entries):
            exempt = ((filters.exempt_raised and entry.source == 'raised') or
                      (filters.exempt_conj and entry.category.is_atomic and
                       entry.category.label == 'Conj'))
            if filters.span and not exempt and not _span_ok(entry, i, n, slack[i]):
                assignment.filtered_out.append((entry, 'span-filter'))
                continue
            score = scorer.score(token, entry, (tokens, i))
            candidates.append((entry.source == 'raised', -score, order, entry))
        candidates.sort(key=lambda c: c[:3])
        kept = 0
        for raised, _, _, entry in candidates:
            if raised or scorer.n_best is None or kept < scorer.n_best:
                assignment.surviving.append(entry)
                kept += not raised
            else:
                assignment.filtered_out.append((entry, 'n-best'))
        out.append(assignment)
    return out


# -- stage two: the chart ----------------------------------------------------

@dataclass(frozen=True)
class Back:
    """How an item was built: a rule over child items, or a lexical entry."""
    rule: RuleName
    children: tuple = ()
    entry: object = None
    token_index: int = None


class ChartItem:
    __slots__ = ('start', 'end', 'category', 'back')

    def __init__(self, start, end, category):
        if not 0 <= start < end:
            raise ValueError('bad span (%d, %d)' % (start, end))
        self.start = start
        self.end = end
        self.category = category
        self.back = []

    @property
    def span(self):
        return self.start, self.end

    def __repr__(self):
        return 'ChartItem(%d-%d %s)' % (self.start, self.end,
                                        format_category(self.category))


class Chart:

    def __init__(self, tokens, rules, assignments, ctx):
        self.tokens = list(tokens)
        self.n = len(tokens)
        self.rules = rules
        self.assignments = assignments
        self.ctx = ctx
        self.cells = {}

    def cell(self, start, end):
        return list(self.cells.get((start, end), {}).values())

    def add(self, start, end, category, back):
        """Add or pack; returns True when a new item was created."""
        items = self.cells.setdefault((start, end), {})
        item = items.get(category.key)
        created = item is None
        if created:
            item = items[category.key] = ChartItem(start, end, category)
        item.back.append(back)
        return created

    def size(self):
        return sum(len(c) for c in self.cells.values())

    def root_items(self):
        return self.cell(0, self.n)

    def goal_items(self, goal=DEFAULT_GOAL):
        goal = as_category(goal)
        out = []
        for item in self.root_items():
            try:
                self.ctx.unify_pairs([(item.category, goal)], item.category)
            except UnificationFailure:
                continue
            out.append(item)
        return out

    def dump(self):
        """One item per line: ``start-end<TAB>category<TAB>backs``.

        Backs are ``|``-separated; a lexical back reads ``lex(i)``, a rule
        back ``Rule(s-e,s-e...)`` listing the child spans.
        """
        lines = []
        for (start, end) in sorted(self.cells, key=lambda s: (s[1] - s[0], s[0])):
            for item in self.cells[(start, end)].values():
                backs = []
                for b in item.back:
                    if b.rule is RuleName.Lex or b.entry is not None:
                        backs.append('lex(%d)' % b.token_index)
                    else:
                        spans = ','.join('%d-%d' % c.span for c in b.children)
                        backs.append('%s(%s)' % (b.rule.value, spans))
                lines.append('%d-%d\t%s\t%s' % (start, end,
                                                format_category(item.category),
                                                '|'.join(backs)))
        return '\n'.join(lines) + ('\n' if lines else '')


def _is_conj(cat):
    return cat.is_atomic and cat.label == 'Conj'


def _raise_allowed(entry, rules):
    """Raised entries take part only while their raising rule is enabled."""
    if entry.source != 'raised':
        return True
    rule = (RuleName.FwdTypeRaise if entry.direction == 'forward'
            else RuleName.BwdTypeRaise)
    return rule in rules.enabled


def parse(tokens, lex, rules=None, scorer=None, filters=None):
    """Fill a packed CKY chart for ``tokens``.

    Lexical categories are copied into a private unification context before
    use, so the (shared) lexicon is never touched.
    """
    tokens = list(tokens)
    if not tokens:
        raise ValueError('no tokens')
    rules = rules or RuleSet()
    ctx = UnifyContext()
    assignments = select_categories(tokens, lex, scorer, filters)
    chart = Chart(tokens, rules, assignments, ctx)
    n = len(tokens)
    for a in assignments:
        for entry in a.surviving:
            if not _raise_allowed(entry, rules):
                continue
            chart.add(a.token_index, a.token_index + 1, entry.category.copy(),
                      Back(RuleName.Lex, entry=entry, token_index=a.token_index))
    coord = RuleName.Coord in rules.enabled
    for width in range(2, n + 1):
        for start in range(0, n - width + 1):
            end = start + width
            for mid in range(start + 1, end):
                for left in chart.cell(start, mid):
                    for right in chart.cell(mid, end):
                        for app in apply_all(left.category, right.category,
                                             rules, ctx):
                            chart.add(start, end, app.result,
                                      Back(app.rule, (left, right)))
            if not coord:
                continue
            for mid in range(start + 1, end - 1):
                conjs = [c for c in chart.cell(mid, mid + 1) if _is_conj(c.category)]
                if not conjs:
                    continue
                for left in chart.cell(start, mid):
                    for right in chart.cell(mid + 1, end):
                        result = coordinate(left.category, right.category, ctx)
                        if result is None or not rules.allows(RuleName.Coord, result):
                            continue
                        for conj in conjs:
                            chart.add(start, end, result,
                                      Back(RuleName.Coord, (left, conj, right)))
    return chart


# -- derivations -----------------------------------------------------------

@dataclass
class Derivation:
    """A derivation tree.

    Binary rule nodes have two children, coordination nodes three (left
    conjunct, conjunction, right conjunct), lexical type-raising nodes one;
    leaves carry the lexical entry.
    """
    rule: RuleName
    category: object
    children: tuple = ()
    entry: object = None
    token_index: int = None

    @property
    def is_leaf(self):
        return not self.children

    def leaves(self):
        if self.is_leaf:
            return [self]
        return [leaf for c in self.children for leaf in c.leaves()]

    def nodes(self):
        yield self
        for c in self.children:
            yield from c.nodes()

    def rules_used(self):
        return {node.rule for node in self.nodes()}

    def verify(self, rules=None):
        """Re-derive every internal node from its children."""
        from .combinators import _BINARY
        rules = rules or RuleSet(composition_depth=3)
        for node in self.nodes():
            if node.is_leaf:
                continue
            cats = [c.category for c in node.children]
            if node.rule is RuleName.Coord:
                got = coordinate(cats[0], cats[2])
            elif node.rule in (RuleName.FwdTypeRaise, RuleName.BwdTypeRaise):
                got = type_raise(cats[0], node.category.result, node.rule)
            else:
                got = _BINARY[node.rule](cats[0], cats[1],
                                         rules.composition_depth, None)
            if got is None or got != node.category:
                return False
        return True


def _leaf(back, category):
    entry = back.entry
    if entry.source == 'raised' and entry.base is not None:
        rule = (RuleName.FwdTypeRaise if entry.direction == 'forward'
                else RuleName.BwdTypeRaise)
        base = Derivation(RuleName.Lex, entry.base.category, (), entry.base,
                          back.token_index)
        return Derivation(rule, category, (base,), entry, back.token_index)
    return Derivation(RuleName.Lex, category, (), entry, back.token_index)


def _unpack(item):
    for back in item.back:
        if back.entry is not None:
            yield _leaf(back, item.category)
            continue
        for kids in _product([_unpack_lazy(c) for c in back.children]):
            yield Derivation(back.rule, item.category, tuple(kids))


def _unpack_lazy(item):
    return lambda: _unpack(item)


def _product(factories):
    if not factories:
        yield ()
        return
    first, rest = factories[0], factories[1:]
    for head in first():
        for tail in _product(rest):
            yield (head,) + tail


def derivations(chart, goal=DEFAULT_GOAL, limit=10):
    """Up to ``limit`` derivations whose root unifies with ``goal``.

    ``limit=None`` unpacks everything.
    """
    out = []
    for item in chart.goal_items(goal) if goal is not None else chart.root_items():
        for d in _unpack(item):
            if limit is not None and len(out) >= limit:
                return out
            out.append(d)
    return out


def count_derivations(chart, goal=None):
    """Derivation count per root item (packed-forest dynamic programme)."""
    memo = {}

    def count(item):
        key = id(item)
        if key not in memo:
            total = 0
            for back in item.back:
                if back.entry is not None:
                    total += 1
                else:
                    prod = 1
                    for child in back.children:
                        prod *= count(child)
                    total += prod
            memo[key] = total
        return memo[key]

    items = chart.goal_items(goal) if goal is not None else chart.root_items()
    return {item.category: count(item) for item in items}


# -- exhaustive oracle -------------------------------------------------------

class BruteForceLimit(ValueError):
    """The input is too large for exhaustive enumeration."""


def brute_force_parse(tokens, lex, rules=None, max_tokens=8, max_entries=4):
    """Root category -> derivation count, by plain enumeration.

    Every binary bracketing and every rule choice is tried with no packing
    and no filtering.  Meant as a test oracle for :func:`parse`.
    """
    tokens = list(tokens)
    rules = rules or RuleSet()
    if not tokens or len(tokens) > max_tokens:
        raise BruteForceLimit('need 1..%d tokens, got %d' % (max_tokens, len(tokens)))
    leaves = []
    for tok in tokens:
        entries = lookup(lex, tok)
        if len(entries) > max_entries:
            raise BruteForceLimit('%r has %d entries (limit %d)'
                                  % (tok, len(entries), max_entries))
        leaves.append([e.category.copy() for e in entries
                       if _raise_allowed(e, rules)])
    ctx = UnifyContext()
    coord = RuleName.Coord in rules.enabled
    memo = {}

    def trees(i, k):
        if (i, k) in memo:
            return memo[(i, k)]
        if k - i == 1:
            out = list(leaves[i])
        else:
            out = []
            for j in range(i + 1, k):
                for left in trees(i, j):
                    for right in trees(j, k):
                        out.extend(a.result for a in
                                   apply_all(left, right, rules, ctx))
            if coord:
                for j in range(i + 1, k - 1):
                    conj_count = sum(1 for c in trees(j, j + 1) if _is_conj(c))
                    if not conj_count:
                        continue
                    for left in trees(i, j):
                        for right in trees(j + 1, k):
                            result = coordinate(left, right, ctx)
                            if result is not None and rules.allows(RuleName.Coord, result):
                                out.extend([result] * conj_count)
        memo[(i, k)] = out
        return out

    counts = {}
    for cat in trees(0, len(tokens)):
        counts[cat] = counts.get(cat, 0) + 1
    return counts
