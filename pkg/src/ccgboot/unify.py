"""
Quasi-destructive graph unification.

Feature structures are rooted graphs of :class:`FeatureStructure` nodes.
Unification never edits the real arcs of its operands: it records forwarding
pointers and complement arcs in scratch slots stamped with the current
generation of a :class:`UnifyContext`.  On success the result is read off by
copying one operand through those slots; afterwards the generation is bumped,
which invalidates every scratch slot in constant time.

    >>> a = fs({'num': 'sg'})
    >>> b = fs({'pers': '3'})
    >>> format_fs(unify(a, b))
    '[num=sg,pers=3]'
    >>> format_fs(a)
    '[num=sg]'
"""

import hashlib
import itertools
import threading

__all__ = [
    'FeatureStructure', 'UnificationFailure', 'UnifyContext', 'fs',
    'format_fs', 'canonical', 'snapshot_hash', 'unify', 'unify_categories',
    'copy_fs', 'default_context',
]

# Generation stamps are drawn from one process-wide sequence so that stamps
# written by different contexts can never be mistaken for each other.
_generations = itertools.count(1)


class FeatureStructure:
    """A node in a feature graph.

    A node is *atomic* when ``value`` is set, *complex* when it has arcs and
    *bottom* (an unconstrained variable) otherwise.  The remaining slots are
    unification scratch space and mean nothing outside the generation that
    wrote them.
    """

    __slots__ = ('arcs', 'value', 'forward', 'forward_mark', 'comp_arcs',
                 'comp_mark', 'copy', 'copy_mark')

    def __init__(self, arcs=None, value=None):
        if arcs and value is not None:
            raise ValueError('a node is either atomic or complex, not both')
        self.arcs = dict(arcs) if arcs else {}
        self.value = value
        self.forward = None
        self.forward_mark = 0
        self.comp_arcs = None
        self.comp_mark = 0
        self.copy = None
        self.copy_mark = 0

    @property
    def is_atomic(self):
        return self.value is not None

    @property
    def is_bottom(self):
        return self.value is None and not self.arcs

    def get(self, path, default=None):
        """Follow a dotted path or tuple of attribute names."""
        if isinstance(path, str):
            path = path.split('.')
        node = self
        for attr in path:
            node = node.arcs.get(attr)
            if node is None:
                return default
        return node.value if node.is_atomic else node

    def nodes(self):
        """All nodes reachable along real arcs, each once."""
        seen = {}
        stack = [self]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen[id(node)] = node
            stack.extend(node.arcs.values())
        return list(seen.values())

    def to_dict(self):
        if self.is_atomic:
            return self.value
        return {attr: child.to_dict() for attr, child in self.arcs.items()}

    def __repr__(self):
        return 'FeatureStructure(%s)' % format_fs(self)


def fs(spec=None, **features):
    """Build a feature structure from nested dicts and strings.

    Passing the same :class:`FeatureStructure` object twice creates
    reentrancy::

        >>> shared = fs({'num': 'sg'})
        >>> agr = fs({'agr': shared, 'subj': shared})
        >>> agr.arcs['agr'] is agr.arcs['subj']
        True
    """
    if isinstance(spec, FeatureStructure):
        return spec
    if spec is None:
        spec = {}
    if isinstance(spec, str):
        return FeatureStructure(value=spec)
    spec = dict(spec, **features)
    return FeatureStructure({attr: fs(val) for attr, val in spec.items()})


def format_fs(node):
    """Human-readable text; shared complex nodes print as ``<k>``."""
    return _Canon(label_shared=True).write(node)


class _Canon:
    """Canonical serialisation used for hashing and equality.

    Atomic nodes are written by value.  Every non-atomic node is numbered in
    a fixed traversal order (attributes sorted), so two graphs serialise the
    same iff they are isomorphic, sharing included.
    """

    def __init__(self, label_shared=False):
        self.numbers = {}
        self.label_shared = label_shared
        self.refcount = None

    def write(self, node):
        if self.label_shared:
            self.refcount = _refcounts([node])
        out = []
        self._write(node, out)
        return ''.join(out)

    def _write(self, node, out):
        if node.value is not None:
            out.append(node.value)
            return
        key = id(node)
        if key in self.numbers:
            out.append('<%d>' % self.numbers[key])
            return
        number = len(self.numbers) + 1
        self.numbers[key] = number
        if not self.label_shared or self.refcount.get(key, 0) > 1:
            out.append('<%d>' % number)
        out.append('[')
        for i, attr in enumerate(sorted(node.arcs)):
            if i:
                out.append(',')
            out.append(attr)
            out.append('=')
            self._write(node.arcs[attr], out)
        out.append(']')


def _refcounts(roots):
    counts = {}
    stack = list(roots)
    while stack:
        node = stack.pop()
        seen = id(node) in counts
        counts[id(node)] = counts.get(id(node), 0) + 1
        if not seen:
            stack.extend(node.arcs.values())
    return counts


def canonical(node, _canon=None):
    """Canonical text of a feature graph, ignoring scratch slots."""
    return (_canon or _Canon()).write(node)


def snapshot_hash(node):
    """Content digest of a feature graph, ignoring scratch slots.

    Isomorphic graphs (sharing included) hash equal.
    """
    return hashlib.sha256(canonical(node).encode('utf-8')).hexdigest()


class UnificationFailure(Exception):
    """Two incompatible values met at ``path``."""

    def __init__(self, path, left, right):
        self.path = tuple(path)
        self.left = left
        self.right = right
        where = '.'.join(str(p) for p in self.path) or '<root>'
        super().__init__('clash at %s: %s vs %s' % (where, left, right))


def _describe(node):
    if node.value is not None:
        return node.value
    return '[...]' if node.arcs else '[]'


class UnifyContext:
    """Scratch-space owner for one thread of unification work.

    A context must not be used from two threads at once.  Graphs that other
    parses may be unifying concurrently have to be copied (:func:`copy_fs`)
    before this context touches them.
    """

    def __init__(self):
        self.generation = next(_generations)
        self.advances = 0

    def advance(self):
        """Invalidate all scratch slots written so far."""
        self.generation = next(_generations)
        self.advances += 1

    # -- the quasi-destructive core ------------------------------------

    def deref(self, node):
        gen = self.generation
        while node.forward is not None and node.forward_mark == gen:
            node = node.forward
        return node

    def arcs_of(self, node):
        if node.comp_mark == self.generation and node.comp_arcs:
            merged = dict(node.arcs)
            merged.update(node.comp_arcs)
            return merged
        return node.arcs

    def _forward(self, src, dst):
        src.forward = dst
        src.forward_mark = self.generation

    def unify1(self, d1, d2, path=()):
        """Temporarily merge ``d2`` into ``d1``; raises on a clash."""
        gen = self.generation
        d1 = self.deref(d1)
        d2 = self.deref(d2)
        if d1 is d2:
            return
        arcs1 = self.arcs_of(d1)
        arcs2 = self.arcs_of(d2)
        if d1.value is None and not arcs1:
            self._forward(d1, d2)
            return
        if d2.value is None and not arcs2:
            self._forward(d2, d1)
            return
        if d1.value is not None or d2.value is not None:
            if d1.value is not None and d1.value == d2.value:
                self._forward(d2, d1)
                return
            raise UnificationFailure(path, _describe(d1), _describe(d2))
        # Forward first so that cyclic graphs terminate.
        self._forward(d2, d1)
        new = {}
        shared = []
        for attr, child in arcs2.items():
            if attr in arcs1:
                shared.append((attr, arcs1[attr], child))
            else:
                new[attr] = child
        if new:
            if d1.comp_mark == gen and d1.comp_arcs:
                d1.comp_arcs.update(new)
            else:
                d1.comp_arcs = new
                d1.comp_mark = gen
        for attr, child1, child2 in shared:
            self.unify1(child1, child2, path + (attr,))

    def copy(self, node):
        """Copy ``node`` through the current scratch slots."""
        gen = self.generation
        node = self.deref(node)
        if node.copy_mark == gen:
            return node.copy
        new = FeatureStructure(value=node.value)
        node.copy = new
        node.copy_mark = gen
        for attr, child in self.arcs_of(node).items():
            new.arcs[attr] = self.copy(child)
        return new

    # -- public entry points --------------------------------------------

    def unify(self, a, b):
        """Unify two feature structures; returns a fresh graph."""
        try:
            self.unify1(a, b)
            return self.copy(a)
        finally:
            self.advance()

    def unify_pairs(self, pairs, template):
        """Unify each category pair, then copy ``template``.

        ``template`` may be assembled from pieces of the paired categories;
        copying happens inside the same generation, so bindings made by the
        unifications show up in the result and sharing between pieces is
        preserved.  Raises :class:`UnificationFailure`.
        """
        try:
            for left, right in pairs:
                self._unify_skeleton(left, right, ())
            return self.copy_category(template)
        finally:
            self.advance()

    def _unify_skeleton(self, x, y, path):
        if x.is_atomic != y.is_atomic:
            raise UnificationFailure(path, _skeleton(x), _skeleton(y))
        if x.is_atomic:
            if x.label != y.label:
                raise UnificationFailure(path + ('label',), x.label, y.label)
            self.unify1(x.features, y.features, path + (x.label,))
            return
        if x.slash != y.slash:
            raise UnificationFailure(path + ('slash',), x.slash, y.slash)
        self._unify_skeleton(x.result, y.result, path + ('result',))
        self._unify_skeleton(x.argument, y.argument, path + ('argument',))

    def copy_category(self, cat):
        from .categories import Atomic, Functor
        if cat.is_atomic:
            return Atomic(cat.label, self.copy(cat.features), cat.arg_index)
        return Functor(self.copy_category(cat.result), cat.slash,
                       self.copy_category(cat.argument))


def _skeleton(cat):
    from .categories import format_category
    return format_category(cat, features=False, indices=False)


_local = threading.local()


def default_context():
    """The calling thread's implicit context."""
    ctx = getattr(_local, 'ctx', None)
    if ctx is None:
        ctx = _local.ctx = UnifyContext()
    return ctx


def unify(a, b, ctx=None):
    """Unify ``a`` and ``b``.

    Returns a fresh structure sharing nothing with either operand, or raises
    :class:`UnificationFailure` naming the clash.  Either way both operands
    are left as they were.
    """
    return (ctx or default_context()).unify(a, b)


def unify_categories(x, y, ctx=None):
    """Unify two categories with identical slash skeletons.

    Atom labels and slash directions must match exactly; argument indices
    are ignored.  Returns a fresh category carrying the unified features.
    """
    return (ctx or default_context()).unify_pairs([(x, y)], x)


def copy_fs(node):
    """Plain structural copy preserving reentrancy."""
    memo = {}

    def walk(n):
        if id(n) in memo:
            return memo[id(n)]
        new = FeatureStructure(value=n.value)
        memo[id(n)] = new
        for attr, child in n.arcs.items():
            new.arcs[attr] = walk(child)
        return new

    return walk(node)
