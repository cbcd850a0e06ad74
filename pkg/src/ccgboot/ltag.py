"""
LTAG elementary trees to CCG categories.

Trees are read from a small s-expression format::

    ; a tree: (NAME ROOT (tree features) frontier...)
    (alphanx0Vnx1 S (mode=ind)
       (NP !sub) (V !anchor) (NP !sub case=acc))

    ; a family groups the trees of one subcategorisation frame
    (family Tnx0Vnx1
       (alphanx0Vnx1 S () (NP !sub) (V !anchor) (NP !sub))
       (alphaW1nx0Vnx1 S (wh=+) (NP !sub) (NP !sub) (V !anchor)))

Frontier markers are ``!sub`` (substitution), ``!anchor`` and ``!foot``.

An initial tree becomes a category by taking the root label as the result,
the leftmost substitution node before the anchor (the subject) as the first,
backward, argument, and then the remaining arguments from the one farthest
from the anchor inwards, so the argument adjacent to the anchor is consumed
first.  The anchor itself leaves no trace in the category.
"""

import logging
import re
from dataclasses import dataclass, field

from .categories import (ATOMS, BACKWARD, FORWARD, Atomic, Functor, arity,
                         format_category, head_atom, set_features)
from .lexicon import DEFAULT_FEATURES, load_features
from .unify import FeatureStructure, UnificationFailure

__all__ = [
    'LtagTree', 'LtagFamily', 'FrontierNode', 'ConversionResult',
    'FamilyResult', 'LtagSyntaxError', 'UnsupportedTree', 'load_ltag',
    'convert_tree', 'convert_modifier', 'convert_family', 'convert_items',
    'map_tree_features', 'to_cat_db', 'FEATURE_RENAMES',
]

logger = logging.getLogger(__name__)

SUBSTITUTION = 'substitution'
ANCHOR = 'anchor'
FOOT = 'foot'
_MARKERS = {'!sub': SUBSTITUTION, '!anchor': ANCHOR, '!foot': FOOT}

# XTAG feature names mapped onto the CCG inventory.
FEATURE_RENAMES = {
    'mode': 'vform',
    'agr_num': 'num',
    'agr_pers': 'pers',
    'assign-case': 'case',
    'pron': 'pron',
    'wh': 'wh',
    'passive': 'passive',
}

AUX_WARNING = 'auxiliary tree converted with the X/X, X\\X modifier recipe'


class LtagSyntaxError(ValueError):
    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__('line %d, column %d: %s' % (line, column, message))


class UnsupportedTree(ValueError):
    """The tree shape is outside what the converter handles."""


@dataclass(frozen=True)
class FrontierNode:
    label: str
    kind: str
    side: str = None              # 'left' / 'right' of the anchor
    features: tuple = ()          # ((attr, value), ...)


@dataclass(frozen=True)
class LtagTree:
    name: str
    root_label: str
    nodes: tuple
    tree_features: tuple = ()

    def __post_init__(self):
        anchors = [n for n in self.nodes if n.kind == ANCHOR]
        feet = [n for n in self.nodes if n.kind == FOOT]
        if len(anchors) != 1:
            raise UnsupportedTree('%s: need exactly one anchor, found %d'
                                  % (self.name, len(anchors)))
        if len(feet) > 1:
            raise UnsupportedTree('%s: more than one foot node' % self.name)
        if feet and feet[0].label != self.root_label:
            raise UnsupportedTree('%s: foot %s does not match root %s'
                                  % (self.name, feet[0].label, self.root_label))
        # fill in sides relative to the anchor
        where = self.nodes.index(anchors[0])
        sided = tuple(FrontierNode(n.label, n.kind,
                                   None if n.kind == ANCHOR else
                                   ('left' if i < where else 'right'),
                                   n.features)
                      for i, n in enumerate(self.nodes))
        object.__setattr__(self, 'nodes', sided)

    @property
    def anchor(self):
        return next(n for n in self.nodes if n.kind == ANCHOR)

    @property
    def foot(self):
        return next((n for n in self.nodes if n.kind == FOOT), None)

    @property
    def is_extraction(self):
        feats = dict(self.tree_features)
        return (feats.get('wh') == '+' or feats.get('rel') == '+'
                or 'extraction' in feats)


@dataclass(frozen=True)
class LtagFamily:
    name: str
    trees: tuple


@dataclass
class ConversionResult:
    category: object
    tree_name: str
    warnings: list = field(default_factory=list)
    tree_names: tuple = ()
    pos: str = None

    def __post_init__(self):
        if not self.tree_names:
            self.tree_names = (self.tree_name,)


@dataclass
class FamilyResult:
    """Distinct categories of a family plus notes on dropped trees."""
    results: list
    dropped: list

    def __iter__(self):
        return iter(self.results)

    def __len__(self):
        return len(self.results)

    def __getitem__(self, i):
        return self.results[i]


# -- reading ---------------------------------------------------------------

_TOKEN = re.compile(r'\s+|;[^\n]*|\(|\)|[^\s()]+')


def _tokens(text):
    line, line_start = 1, 0
    for m in _TOKEN.finditer(text):
        tok = m.group()
        col = m.start() - line_start + 1
        if tok[0].isspace() or tok[0] == ';':
            newlines = tok.count('\n')
            if newlines:
                line += newlines
                line_start = m.start() + tok.rfind('\n') + 1
            continue
        yield tok, line, col


def _sexprs(text):
    stack = [[]]
    opened = []
    for tok, line, col in _tokens(text):
        if tok == '(':
            stack.append([])
            opened.append((line, col))
        elif tok == ')':
            if len(stack) == 1:
                raise LtagSyntaxError('unexpected )', line, col)
            lst = stack.pop()
            start = opened.pop()
            stack[-1].append(_Node(lst, start))
        else:
            stack[-1].append(_Atom(tok, (line, col)))
    if opened:
        raise LtagSyntaxError('unclosed (', *opened[-1])
    return stack[0]


class _Atom(str):
    def __new__(cls, text, where):
        obj = super().__new__(cls, text)
        obj.where = where
        return obj


class _Node(list):
    def __init__(self, items, where):
        super().__init__(items)
        self.where = where


def _features(items, where):
    out = []
    for item in items:
        if isinstance(item, _Node) or '=' not in item:
            raise LtagSyntaxError('expected attr=value, got %s' % (item,), *where)
        attr, _, value = item.partition('=')
        out.append((attr, value))
    return tuple(out)


def _tree(node):
    if len(node) < 3 or isinstance(node[0], _Node) or isinstance(node[1], _Node) \
            or not isinstance(node[2], _Node):
        raise LtagSyntaxError('expected (NAME ROOT (features) frontier...)',
                              *node.where)
    name, root, feats = node[0], node[1], node[2]
    frontier = []
    for item in node[3:]:
        if not isinstance(item, _Node) or len(item) < 2 or item[1] not in _MARKERS:
            raise LtagSyntaxError('expected (LABEL !sub|!anchor|!foot ...)',
                                  *getattr(item, 'where', node.where))
        frontier.append(FrontierNode(str(item[0]), _MARKERS[item[1]], None,
                                     _features(item[2:], item.where)))
    try:
        return LtagTree(str(name), str(root), tuple(frontier),
                        _features(feats, feats.where))
    except UnsupportedTree as exc:
        raise LtagSyntaxError(str(exc), *node.where) from None


def load_ltag(text):
    """Parse ``.ltag`` text into a list of trees and families."""
    items = []
    for node in _sexprs(text):
        if not isinstance(node, _Node):
            raise LtagSyntaxError('stray symbol %s' % node, *node.where)
        if node and node[0] == 'family':
            if len(node) < 2 or isinstance(node[1], _Node):
                raise LtagSyntaxError('family needs a name', *node.where)
            trees = []
            for sub in node[2:]:
                if not isinstance(sub, _Node):
                    raise LtagSyntaxError('expected a tree', *sub.where)
                trees.append(_tree(sub))
            items.append(LtagFamily(str(node[1]), tuple(trees)))
        else:
            items.append(_tree(node))
    return items


# -- conversion ------------------------------------------------------------

def _label_category(label, atoms, index=None):
    if label == 'VP':
        return Functor(Atomic('S', FeatureStructure(), index), BACKWARD,
                       Atomic('NP'))
    if label not in atoms:
        raise UnsupportedTree('no CCG atom for node label %r' % label)
    return Atomic(label, FeatureStructure(), index)


def _arguments(tree):
    """Substitution nodes with their argument indices, frontier order."""
    subs = [n for n in tree.nodes if n.kind == SUBSTITUTION]
    return [(i, n) for i, n in enumerate(subs)]


def _build(tree, core, args, atoms, warnings):
    positions = {id(n): i for i, n in enumerate(tree.nodes)}
    anchor_pos = positions[id(tree.anchor)]

    def distance(node):
        return abs(positions[id(node)] - anchor_pos)

    ordered = sorted(args, key=lambda a: (-distance(a[1]), a[1].side != 'left'))
    cat = core
    for index, node in ordered:
        slash = BACKWARD if node.side == 'left' else FORWARD
        cat = Functor(cat, slash, _label_category(node.label, atoms, index))
    return cat


def convert_tree(tree, atoms=ATOMS, inventory=None):
    """Category for an initial tree; auxiliary trees go to
    :func:`convert_modifier`."""
    if tree.foot is not None:
        return convert_modifier(tree, atoms, inventory)
    warnings = []
    args = _arguments(tree)
    left = [a for a in args if a[1].side == 'left']
    cat = _label_category(tree.root_label, atoms)
    rest = list(args)
    if left:
        index, subject = left[0]
        cat = Functor(cat, BACKWARD, _label_category(subject.label, atoms, index))
        rest.remove(left[0])
    cat = _build(tree, cat, rest, atoms, warnings)
    if arity(cat) != len(args):
        warnings.append('%s: root %s contributes arguments of its own'
                        % (tree.name, tree.root_label))
    cat, feature_warnings = _map_features(tree, cat, inventory)
    warnings.extend(feature_warnings)
    return ConversionResult(cat, tree.name, warnings, pos=tree.anchor.label)


def convert_modifier(tree, atoms=ATOMS, inventory=None):
    """X/X for a pre-modifier, X\\X for a post-modifier, plus arguments.

    Result and foot share their feature nodes, so a modifier passes its
    target's features through.
    """
    foot = tree.foot
    if foot is None:
        raise UnsupportedTree('%s has no foot node' % tree.name)
    if foot.label != tree.root_label:
        raise UnsupportedTree('%s: foot label differs from root' % tree.name)
    target = _label_category(tree.root_label, atoms)
    slash = BACKWARD if foot.side == 'left' else FORWARD
    cat = Functor(target, slash, target)
    cat = _build(tree, cat, _arguments(tree), atoms, [])
    cat, warnings = _map_features(tree, cat, inventory)
    return ConversionResult(cat, tree.name, [AUX_WARNING] + warnings,
                            pos=tree.anchor.label)


def _map_features(tree, cat, inventory):
    inventory = inventory or load_features(DEFAULT_FEATURES)
    warnings = []

    def keep(pairs, where):
        out = {}
        for attr, value in pairs:
            name = FEATURE_RENAMES.get(attr, attr)
            if name not in inventory.values or value not in inventory.values[name]:
                warnings.append('%s: dropped feature %s=%s on %s (not in the '
                                'inventory)' % (tree.name, attr, value, where))
                continue
            out[name] = value
        return out

    atoms = cat.atoms()
    head = head_atom(cat)
    assignments = {}
    top = keep(tree.tree_features, 'tree')
    if top:
        assignments[next(i for i, a in enumerate(atoms) if a is head)] = top
    for index, node in _arguments(tree):
        feats = keep(node.features, '%s%d' % (node.label, index))
        if not feats:
            continue
        hits = [i for i, a in enumerate(atoms)
                if a.arg_index == index and a is not head]
        for i in hits[:1]:
            assignments.setdefault(i, {}).update(feats)
    try:
        return set_features(cat, assignments), warnings
    except UnificationFailure as exc:
        raise UnsupportedTree('%s: inconsistent features: %s'
                              % (tree.name, exc)) from None


def map_tree_features(tree, cat, inventory=None):
    """Install tree-level and node features on ``cat``.

    Features outside the inventory are dropped with a logged warning.
    """
    cat, warnings = _map_features(tree, cat, inventory)
    for w in warnings:
        logger.warning(w)
    return cat


def convert_family(trees, atoms=ATOMS, inventory=None):
    """Convert a family, merging trees that yield the same category.

    Extraction trees are not converted: in CCG the wh-words and relative
    pronouns carry extraction, so the family needs no category for them.
    """
    if isinstance(trees, LtagFamily):
        trees = trees.trees
    results = []
    dropped = []
    for tree in trees:
        if tree.is_extraction:
            dropped.append('%s: extraction tree dropped; extraction is handled '
                           'by the wh-lexicon (wh-words and relative pronouns)'
                           % tree.name)
            continue
        res = convert_tree(tree, atoms, inventory)
        for prior in results:
            if prior.category == res.category:
                prior.tree_names += (tree.name,)
                prior.warnings.extend(w for w in res.warnings
                                      if w not in prior.warnings)
                break
        else:
            results.append(res)
    return FamilyResult(results, dropped)


def convert_items(items, atoms=ATOMS, inventory=None):
    """Convert what :func:`load_ltag` returned; yields (results, notes)."""
    results, notes = [], []
    for item in items:
        if isinstance(item, LtagFamily):
            fam = convert_family(item, atoms, inventory)
            results.extend(fam.results)
            notes.extend(fam.dropped)
        else:
            res = convert_tree(item, atoms, inventory)
            results.append(res)
    for res in results:
        notes.extend(res.warnings)
    return results, notes


def _tags(cat):
    """Split ``cat`` into featureless text plus ``#tags`` when possible."""
    head = head_atom(cat)
    tags = []
    for atom in cat.atoms():
        feats = atom.features.arcs
        if not feats:
            continue
        if any(not child.is_atomic for child in feats.values()):
            return None
        if atom.arg_index is None and atom is not head:
            if any(atom.features is a.features for a in (head,)):
                continue
            return None
        idx = '' if atom.arg_index is None else str(atom.arg_index)
        for attr, child in feats.items():
            tag = '#%s%s%s%s' % (atom.label, idx, attr, child.value)
            if tag not in tags:
                tags.append(tag)
    return tags


def to_cat_db(results):
    """Render conversion results as ``cat.db`` lines grouped by anchor POS."""
    groups = {}
    for res in results:
        groups.setdefault(res.pos or 'X', []).append(res)
    lines = []
    for pos, group in groups.items():
        parts = []
        for res in group:
            tags = _tags(res.category)
            if tags is None:
                parts.append(format_category(res.category))
            else:
                parts.append(' '.join([format_category(res.category,
                                                       features=False,
                                                       coindex=True)] + tags))
        lines.append('%s: %s' % (pos, parts[0]))
        indent = ' ' * (len(pos) + 2)
        lines.extend(indent + p for p in parts[1:])
    return '\n'.join(lines) + ('\n' if lines else '')
