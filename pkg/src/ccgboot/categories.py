"""
CCG categories: atoms, slashes and their text notation.

Grammar of the notation (slashes associate to the left)::

    category := term (('/' | '\\') term)*
    term     := atom | '(' category ')'
    atom     := LABEL [DIGIT] ['[' item (',' item)* ']']
    item     := attr['.'attr]* '=' value  |  '@' NUMBER

``NP1`` is an ``NP`` carrying argument index 1 (display metadata only).
``@k`` coindexes atoms: every atom tagged ``@1`` shares one feature node, so
``S[@1]/(S[@1]\\NP)`` passes whatever its argument's ``S`` learns on to its
result.
"""

import re
from dataclasses import dataclass, field
from functools import cached_property

from .unify import FeatureStructure, _Canon

__all__ = [
    'FORWARD', 'BACKWARD', 'ATOMS', 'Category', 'Atomic', 'Functor',
    'CategorySyntaxError', 'parse_category', 'format_category', 'arity',
    'directional_arity', 'is_raised_shape', 'same_skeleton', 'spine',
    'head_atom', 'subject_atom', 'set_features', 'as_category',
]

FORWARD = '/'
BACKWARD = '\\'

# Extend per grammar through features.cfg (``atoms:`` line).
ATOMS = frozenset({'S', 'NP', 'N', 'PP', 'Conj', 'Punct'})


class Category:
    """Base class; instances are immutable and hashable.

    Equality compares slash skeletons and features (reentrancy included)
    but ignores argument indices.
    """

    is_atomic = False

    @cached_property
    def key(self):
        canon = _Canon()
        out = []
        self._key(canon, out)
        return ''.join(out)

    def __eq__(self, other):
        if not isinstance(other, Category):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __str__(self):
        return format_category(self)

    def identical(self, other):
        """Equality that also compares argument indices."""
        return self == other and _indices(self) == _indices(other)

    def atoms(self):
        """Atoms in left-to-right textual order."""
        if self.is_atomic:
            return [self]
        return self.result.atoms() + self.argument.atoms()

    def copy(self):
        """Deep copy with fresh feature nodes, sharing preserved."""
        memo = {}

        def copy_node(n):
            if id(n) in memo:
                return memo[id(n)]
            new = FeatureStructure(value=n.value)
            memo[id(n)] = new
            for attr, child in n.arcs.items():
                new.arcs[attr] = copy_node(child)
            return new

        def walk(c):
            if c.is_atomic:
                return Atomic(c.label, copy_node(c.features), c.arg_index)
            return Functor(walk(c.result), c.slash, walk(c.argument))

        return walk(self)


@dataclass(frozen=True, eq=False)
class Atomic(Category):
    label: str
    features: FeatureStructure = field(default_factory=FeatureStructure)
    arg_index: int = None

    is_atomic = True

    def __post_init__(self):
        if not self.label:
            raise ValueError('empty atom label')
        if self.arg_index is not None and not 0 <= self.arg_index <= 9:
            raise ValueError('argument index out of range: %r' % self.arg_index)

    def _key(self, canon, out):
        out.append(self.label)
        canon._write(self.features, out)

    def __repr__(self):
        return 'Atomic(%s)' % format_category(self)


@dataclass(frozen=True, eq=False)
class Functor(Category):
    result: Category
    slash: str
    argument: Category

    def __post_init__(self):
        if self.slash not in (FORWARD, BACKWARD):
            raise ValueError('bad slash %r' % self.slash)

    def _key(self, canon, out):
        out.append('(')
        self.result._key(canon, out)
        out.append(self.slash)
        self.argument._key(canon, out)
        out.append(')')

    def __repr__(self):
        return 'Functor(%s)' % format_category(self)


def _indices(cat):
    return [a.arg_index for a in cat.atoms()]


def spine(cat):
    """(slash, argument) pairs from the outermost argument inwards."""
    out = []
    while not cat.is_atomic:
        out.append((cat.slash, cat.argument))
        cat = cat.result
    return out


def head_atom(cat):
    """The atom at the bottom of the result spine."""
    while not cat.is_atomic:
        cat = cat.result
    return cat


def subject_atom(cat):
    """Innermost backward argument on the spine, when it is atomic."""
    args = spine(cat)
    for slash, arg in reversed(args):
        if slash == BACKWARD:
            return arg if arg.is_atomic else None
    return None


def arity(cat):
    """Number of argument slots along the result spine."""
    return len(spine(cat))


def directional_arity(cat):
    """(backward-slash slots, forward-slash slots) along the result spine."""
    left = right = 0
    for slash, _ in spine(cat):
        if slash == BACKWARD:
            left += 1
        else:
            right += 1
    return left, right


def same_skeleton(x, y, indices=False):
    """Compare labels and slashes only."""
    if x.is_atomic != y.is_atomic:
        return False
    if x.is_atomic:
        return x.label == y.label and (not indices or x.arg_index == y.arg_index)
    return (x.slash == y.slash and same_skeleton(x.result, y.result, indices)
            and same_skeleton(x.argument, y.argument, indices))


def is_raised_shape(cat):
    """True for ``T/(T\\X)`` and ``T\\(T/X)`` with both ``T`` equal."""
    if cat.is_atomic or cat.argument.is_atomic:
        return False
    inner = cat.argument
    if inner.slash == cat.slash:
        return False
    return cat.result == inner.result


def set_features(cat, assignments):
    """Return ``cat`` with extra features unified in.

    ``assignments`` maps atom positions (indices into :meth:`Category.atoms`)
    to ``{attr: value}`` dicts.  Raises ``UnificationFailure`` on a clash.
    """
    from .unify import fs, unify_categories
    if not assignments:
        return cat
    atoms = iter(range(len(cat.atoms())))

    def patch(c):
        if c.is_atomic:
            pos = next(atoms)
            return Atomic(c.label, fs(assignments.get(pos, {})), c.arg_index)
        return Functor(patch(c.result), c.slash, patch(c.argument))

    return unify_categories(cat, patch(cat))


# -- text notation ---------------------------------------------------------


class CategorySyntaxError(ValueError):
    def __init__(self, message, text, offset):
        self.text = text
        self.offset = offset
        super().__init__('%s at offset %d in %r' % (message, offset, text))


_ATOM = re.compile(r'([A-Za-z]+?)([0-9]?)(?=[\[\]()/\\]|$)')
_ATTR = re.compile(r'[A-Za-z][A-Za-z0-9_\-]*(\.[A-Za-z][A-Za-z0-9_\-]*)*$')
_VALUE = re.compile(r'[A-Za-z0-9+\-_]+$')


class _Reader:

    def __init__(self, text, atoms):
        self.text = text
        self.pos = 0
        self.atoms = atoms
        self.coindex = {}

    def error(self, message, offset=None):
        raise CategorySyntaxError(message, self.text,
                                  self.pos if offset is None else offset)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def category(self):
        cat = self.term()
        while self.peek() in (FORWARD, BACKWARD) and self.peek():
            slash = self.peek()
            self.pos += 1
            cat = Functor(cat, slash, self.term())
        return cat

    def term(self):
        if self.peek() == '(':
            start = self.pos
            self.pos += 1
            cat = self.category()
            if self.peek() != ')':
                self.error('unbalanced parenthesis opened at %d' % start)
            self.pos += 1
            return cat
        return self.atom()

    def atom(self):
        start = self.pos
        m = _ATOM.match(self.text, self.pos)
        if not m:
            self.error('expected an atom')
        label, digit = m.group(1), m.group(2)
        if label not in self.atoms:
            self.error('unknown atom label %r' % label, start)
        self.pos = m.end()
        node = None
        if self.peek() == '[':
            node = self.feature_list()
        return Atomic(label, node if node is not None else FeatureStructure(),
                      int(digit) if digit else None)

    def feature_list(self):
        start = self.pos
        end = self.text.find(']', start)
        if end < 0:
            self.error('unterminated feature list')
        body = self.text[start + 1:end]
        self.pos = end + 1
        items = [item.strip() for item in body.split(',')] if body.strip() else []
        node = None
        pairs = []
        for item in items:
            if item.startswith('@'):
                tag = item[1:]
                if not tag.isdigit():
                    self.error('malformed coindex %r' % item, start)
                if node is not None:
                    self.error('two coindices on one atom', start)
                node = self.coindex.setdefault(tag, FeatureStructure())
                continue
            attr, eq, value = item.partition('=')
            value = value.replace('−', '-')
            if not eq or not _ATTR.match(attr) or not _VALUE.match(value):
                self.error('malformed feature %r' % item, start)
            pairs.append((attr.split('.'), value))
        if node is None:
            node = FeatureStructure()
        for path, value in pairs:
            self._put(node, path, value, start)
        return node

    def _put(self, node, path, value, offset):
        for attr in path[:-1]:
            child = node.arcs.get(attr)
            if child is None:
                child = node.arcs[attr] = FeatureStructure()
            elif child.is_atomic:
                self.error('feature %s is atomic' % attr, offset)
            node = child
        old = node.arcs.get(path[-1])
        if old is not None and old.value != value:
            self.error('conflicting values for %s' % '.'.join(path), offset)
        node.arcs[path[-1]] = FeatureStructure(value=value)


def parse_category(text, atoms=ATOMS):
    """Parse category notation, e.g. ``(S\\NP0)/NP1`` or ``S[bar=+]/S``."""
    text = ''.join(text.split())
    if not text:
        raise CategorySyntaxError('empty category', text, 0)
    reader = _Reader(text, atoms)
    cat = reader.category()
    if reader.pos != len(text):
        if reader.peek() == ')':
            reader.error('unbalanced parenthesis')
        reader.error('unexpected %r' % reader.peek())
    return cat


def as_category(value, atoms=ATOMS):
    return value if isinstance(value, Category) else parse_category(value, atoms)


def format_category(cat, features=True, indices=True, coindex=None):
    """Canonical text for ``cat``.

    Every complex daughter is parenthesised, so ``((S\\NP)/PP)/NP`` prints
    as written.  Feature nodes shared between atoms print as ``@k``.
    """
    if coindex is None:
        coindex = features
    shared = {}
    if coindex:
        counts = {}
        for atom in cat.atoms():
            counts[id(atom.features)] = counts.get(id(atom.features), 0) + 1
        shared = {k: None for k, n in counts.items() if n > 1}
    state = {'next': 1}

    def atom_text(a):
        parts = []
        key = id(a.features)
        if key in shared:
            if shared[key] is None:
                shared[key] = state['next']
                state['next'] += 1
            parts.append('@%d' % shared[key])
        if features:
            parts.extend(_flat_features(a.features))
        text = a.label
        if indices and a.arg_index is not None:
            text += str(a.arg_index)
        if parts:
            text += '[%s]' % ','.join(parts)
        return text

    def walk(c, top):
        if c.is_atomic:
            return atom_text(c)
        text = walk(c.result, False) + c.slash + walk(c.argument, False)
        return text if top else '(%s)' % text

    return walk(cat, True)


def _flat_features(node, prefix=''):
    out = []
    for attr, child in node.arcs.items():
        if child.is_atomic:
            out.append('%s%s=%s' % (prefix, attr, child.value))
        else:
            out.extend(_flat_features(child, prefix + attr + '.'))
    return out
