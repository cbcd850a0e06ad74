"""
The combinator inventory: application, harmonic composition, backward
crossing composition, type-raising and the coordination schema.

Every binary rule returns the derived category or ``None`` when it does not
apply.  Matching goes through :func:`ccgboot.unify.unify_categories`, so
feature clashes block a combination exactly like a label mismatch.
"""

import enum
from dataclasses import dataclass, field

from .categories import BACKWARD, FORWARD, Functor, head_atom, parse_category
from .unify import UnificationFailure, default_context

__all__ = [
    'RuleName', 'RuleSet', 'RuleApplication', 'TypeRaiseError',
    'forward_apply', 'backward_apply', 'forward_compose', 'backward_compose',
    'backward_cross_compose', 'type_raise', 'coordinate', 'apply_all',
    'BINARY_RULES',
]


class RuleName(enum.Enum):
    FwdApp = 'FwdApp'
    BwdApp = 'BwdApp'
    FwdComp = 'FwdComp'
    BwdComp = 'BwdComp'
    BwdXComp = 'BwdXComp'
    FwdTypeRaise = 'FwdTypeRaise'
    BwdTypeRaise = 'BwdTypeRaise'
    Coord = 'Coord'
    Lex = 'Lex'

    @property
    def symbol(self):
        return _SYMBOLS[self]

    @classmethod
    def parse(cls, name):
        for rule in cls:
            if name in (rule.value, rule.symbol):
                return rule
        raise ValueError('unknown rule %r' % name)


_SYMBOLS = {
    RuleName.FwdApp: '>', RuleName.BwdApp: '<', RuleName.FwdComp: '>B',
    RuleName.BwdComp: '<B', RuleName.BwdXComp: '<Bx',
    RuleName.FwdTypeRaise: '>T', RuleName.BwdTypeRaise: '<T',
    RuleName.Coord: '&', RuleName.Lex: 'lex',
}

BINARY_RULES = (RuleName.FwdApp, RuleName.BwdApp, RuleName.FwdComp,
                RuleName.BwdComp, RuleName.BwdXComp)


class TypeRaiseError(ValueError):
    """Raised for a type-raising request outside the atomic-only policy."""


@dataclass(frozen=True)
class RuleSet:
    """Which rules the parser may use.

    ``gates`` optionally restricts a rule to results whose head atom carries
    one of the listed labels.
    """
    enabled: frozenset = frozenset(RuleName)
    composition_depth: int = 1
    gates: dict = field(default_factory=dict, hash=False, compare=False)

    def __post_init__(self):
        enabled = frozenset(RuleName.parse(r) if isinstance(r, str) else r
                            for r in self.enabled)
        object.__setattr__(self, 'enabled', enabled | {RuleName.Lex})
        if self.composition_depth < 1:
            raise ValueError('composition_depth must be at least 1')

    def __contains__(self, rule):
        return rule in self.enabled

    def without(self, *rules):
        rules = {RuleName.parse(r) if isinstance(r, str) else r for r in rules}
        return RuleSet(self.enabled - rules, self.composition_depth, self.gates)

    def allows(self, rule, result):
        labels = self.gates.get(rule)
        return labels is None or head_atom(result).label in labels

    @classmethod
    def from_spec(cls, text, base=None):
        """Parse a comma list such as ``FwdApp,BwdApp,Coord`` or ``-BwdXComp``.

        Bare names replace the enabled set of ``base``; ``+NAME`` and
        ``-NAME`` add to or remove from it.
        """
        base = base or cls()
        names = [n.strip() for n in text.split(',') if n.strip()]
        bare = [n for n in names if n[0] not in '+-']
        enabled = {RuleName.parse(n) for n in bare} if bare else set(base.enabled)
        enabled |= {RuleName.parse(n[1:]) for n in names if n[0] == '+'}
        enabled -= {RuleName.parse(n[1:]) for n in names if n[0] == '-'}
        return cls(frozenset(enabled), base.composition_depth, base.gates)

    @classmethod
    def from_config(cls, text):
        """Read ``rules.cfg``: ``disable NAME``, ``enable NAME``, ``depth N``
        and ``gate NAME LABEL...`` lines."""
        enabled = set(RuleName)
        depth = 1
        gates = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            words = line.split('#', 1)[0].split()
            if not words:
                continue
            try:
                verb, args = words[0], words[1:]
                if verb == 'enable':
                    enabled |= {RuleName.parse(a) for a in args}
                elif verb == 'disable':
                    enabled -= {RuleName.parse(a) for a in args}
                elif verb == 'only':
                    enabled = {RuleName.parse(a) for a in args}
                elif verb == 'depth':
                    depth = int(args[0])
                elif verb == 'gate':
                    gates[RuleName.parse(args[0])] = frozenset(args[1:])
                else:
                    raise ValueError('unknown directive %r' % verb)
            except (ValueError, IndexError) as exc:
                raise ValueError('rules.cfg line %d: %s' % (lineno, exc)) from None
        return cls(frozenset(enabled), depth, gates)


@dataclass(frozen=True)
class RuleApplication:
    rule: RuleName
    left: object
    right: object
    result: object


def _unify(pairs, template, ctx):
    try:
        return (ctx or default_context()).unify_pairs(pairs, template)
    except UnificationFailure:
        return None


def _peel(cat, slash, depth):
    """Yield (core, [(slash, arg) ...innermost first]) for 1..depth layers,
    every peeled layer carrying ``slash``."""
    args = []
    for _ in range(depth):
        if cat.is_atomic or cat.slash != slash:
            return
        args.insert(0, cat.argument)
        cat = cat.result
        yield cat, list(args)


def _rewrap(core, slash, args):
    for arg in args:
        core = Functor(core, slash, arg)
    return core


def forward_apply(f, a, ctx=None):
    """X/Y  Y  =>  X"""
    if f.is_atomic or f.slash != FORWARD:
        return None
    return _unify([(f.argument, a)], f.result, ctx)


def backward_apply(a, f, ctx=None):
    """Y  X\\Y  =>  X"""
    if f.is_atomic or f.slash != BACKWARD:
        return None
    return _unify([(f.argument, a)], f.result, ctx)


def forward_compose(f, g, depth=1, ctx=None):
    """X/Y  Y/Z  =>  X/Z, generalised to ``depth`` forward layers of g."""
    if f.is_atomic or f.slash != FORWARD:
        return None
    for core, args in _peel(g, FORWARD, depth):
        result = _unify([(f.argument, core)],
                        _rewrap(f.result, FORWARD, args), ctx)
        if result is not None:
            return result
    return None


def backward_compose(g, f, depth=1, ctx=None):
    """Y\\Z  X\\Y  =>  X\\Z, generalised to ``depth`` backward layers of g."""
    if f.is_atomic or f.slash != BACKWARD:
        return None
    for core, args in _peel(g, BACKWARD, depth):
        result = _unify([(f.argument, core)],
                        _rewrap(f.result, BACKWARD, args), ctx)
        if result is not None:
            return result
    return None


def backward_cross_compose(f, g, depth=1, ctx=None):
    """Y/Z  X\\Y  =>  X/Z

    The forward functor on the left keeps its pending argument while the
    backward functor on the right consumes its result; used for heavy-NP
    shift (``loves dearly [his ... sandwiches]``).
    """
    if g.is_atomic or g.slash != BACKWARD:
        return None
    for core, args in _peel(f, FORWARD, depth):
        result = _unify([(g.argument, core)],
                        _rewrap(g.result, FORWARD, args), ctx)
        if result is not None:
            return result
    return None


def type_raise(x, target, direction):
    """X => T/(T\\X) (forward) or T\\(T/X) (backward).

    Only atomic categories are raised.  Both occurrences of ``T`` are the
    same object, hence share their feature nodes.
    """
    if not x.is_atomic:
        raise TypeRaiseError('only atomic categories are type-raised, got %s' % x)
    if isinstance(target, str):
        target = parse_category(target)
    if direction in ('forward', FORWARD, RuleName.FwdTypeRaise):
        return Functor(target, FORWARD, Functor(target, BACKWARD, x))
    if direction in ('backward', BACKWARD, RuleName.BwdTypeRaise):
        return Functor(target, BACKWARD, Functor(target, FORWARD, x))
    raise ValueError('direction must be forward or backward, not %r' % direction)


def coordinate(left, right, ctx=None):
    """X conj X => X"""
    return _unify([(left, right)], left, ctx)


_BINARY = {
    RuleName.FwdApp: lambda l, r, d, ctx: forward_apply(l, r, ctx),
    RuleName.BwdApp: lambda l, r, d, ctx: backward_apply(l, r, ctx),
    RuleName.FwdComp: lambda l, r, d, ctx: forward_compose(l, r, d, ctx),
    RuleName.BwdComp: lambda l, r, d, ctx: backward_compose(l, r, d, ctx),
    RuleName.BwdXComp: lambda l, r, d, ctx: backward_cross_compose(l, r, d, ctx),
}


def apply_all(left, right, rules=None, ctx=None):
    """Every enabled binary rule's output on (left, right), in rule order."""
    rules = rules or RuleSet()
    out = []
    seen = set()
    for rule in BINARY_RULES:
        if rule not in rules.enabled:
            continue
        result = _BINARY[rule](left, right, rules.composition_depth, ctx)
        if result is None or not rules.allows(rule, result):
            continue
        if (rule, result) in seen:
            continue
        seen.add((rule, result))
        out.append(RuleApplication(rule, left, right, result))
    return out
