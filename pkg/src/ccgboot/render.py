"""
Derivation display: CCG-style ASCII trees, brackets and JSON.

The ASCII layout puts the words on top, each lexical category under a
rule line, and every combination below the span it covers::

    Paddington  loves      Betsy
    ----------  ---------  -----
        NP      (S\\NP)/NP   NP
                ---------------->
                      S\\NP
    -----------------------------<
                  S
"""

import json

from .categories import format_category
from .combinators import RuleName

__all__ = ['render_ascii', 'render_bracketed', 'derivation_to_dict',
           'render_json', 'render']

GAP = 2


def _cat(cat, features):
    return format_category(cat, features=features, indices=False)


def _label(node):
    return '' if node.rule is RuleName.Lex else node.rule.symbol


def render_ascii(deriv, features=False):
    """Multi-line string showing ``deriv`` bottom-up."""
    leaves = deriv.leaves()
    words = [leaf.entry.word if leaf.entry is not None else '?' for leaf in leaves]
    widths = [max(len(w), len(_cat(leaf.category, features)))
              for w, leaf in zip(words, leaves)]
    leaf_pos = {id(leaf): i for i, leaf in enumerate(leaves)}
    spans = {}
    levels = {}

    def size(node):
        # returns (first leaf, last leaf, level); widens the last leaf when a
        # label does not fit the span it sits under
        if node.is_leaf:
            i = leaf_pos[id(node)]
            first = last = i
            level = 0
        else:
            parts = [size(c) for c in node.children]
            first, last = parts[0][0], parts[-1][1]
            level = 1 + max(p[2] for p in parts)
            need = max(len(_cat(node.category, features)), 1) + len(_label(node))
            have = sum(widths[first:last + 1]) + GAP * (last - first)
            if need > have:
                widths[last] += need - have
        spans[id(node)] = (first, last)
        levels[id(node)] = level
        return first, last, level

    size(deriv)
    starts = []
    col = 0
    for w in widths:
        starts.append(col)
        col += w + GAP
    total = col - GAP

    def extent(node):
        first, last = spans[id(node)]
        return starts[first], starts[last] + widths[last]

    def blank():
        return [' '] * (total + 4)

    def put(row, at, text):
        row[at:at + len(text)] = list(text)

    lines = []
    row = blank()
    for w, s, width in zip(words, starts, widths):
        put(row, s + (width - len(w)) // 2, w)
    lines.append(row)

    by_level = {}
    for node in deriv.nodes():
        by_level.setdefault(levels[id(node)], []).append(node)
    for level in sorted(by_level):
        rule_row, cat_row = blank(), blank()
        for node in by_level[level]:
            lo, hi = extent(node)
            label = _label(node)
            put(rule_row, lo, '-' * (hi - lo - len(label)) + label)
            text = _cat(node.category, features)
            put(cat_row, lo + max(0, (hi - lo - len(text)) // 2), text)
        lines.append(rule_row)
        lines.append(cat_row)
    return '\n'.join(''.join(r).rstrip() for r in lines)


def render_bracketed(deriv, features=False):
    """``(RULE CATEGORY child...)`` with ``(CATEGORY word)`` leaves."""
    cat = _cat(deriv.category, features)
    if deriv.is_leaf:
        return '(%s %s)' % (cat, deriv.entry.word)
    kids = ' '.join(render_bracketed(c, features) for c in deriv.children)
    return '(%s %s %s)' % (deriv.rule.symbol, cat, kids)


def derivation_to_dict(deriv):
    out = {'rule': deriv.rule.value,
           'category': format_category(deriv.category)}
    if deriv.is_leaf:
        out['word'] = deriv.entry.word
        out['source'] = deriv.entry.source
        out['token'] = deriv.token_index
    else:
        out['children'] = [derivation_to_dict(c) for c in deriv.children]
    return out


def render_json(deriv):
    return json.dumps(derivation_to_dict(deriv), ensure_ascii=False)


def render(deriv, fmt='tree-ascii', features=False):
    if fmt == 'tree-ascii':
        return render_ascii(deriv, features)
    if fmt == 'bracketed':
        return render_bracketed(deriv, features)
    if fmt == 'json-lines':
        return render_json(deriv)
    raise ValueError('unknown format %r' % fmt)
