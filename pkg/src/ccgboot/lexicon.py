"""
Lexicon databases and the compiled parse-time lexicon.

A lexicon directory holds five plain-text files:

``syn.db``
    Syntactic database.  Blank-line separated records::

        INDEX: park/2
        POS: V
        CAT: (S\\NP0)/NP1 (NP0\\NP1)/NP2

``cat.db``
    Category database, one ``POS: category #tag ... category #tag ...``
    line per part of speech; indented lines continue the previous one.
    ``#NP1caseacc`` sets ``case=acc`` on the ``NP1`` atom, ``#Sbar-`` sets
    ``bar=-`` on the result atom, and bare names such as ``#INTRANS`` are
    clause labels declared in ``features.cfg``.

``morph.db``
    ``surface<TAB>lemma<TAB>pos<TAB>attr=val,...`` per line.

``features.cfg``
    ``attr: value value ...`` lines declaring the feature inventory, plus
    ``agreement:``, ``flags:`` and ``atoms:`` lines.

``raise.cfg``
    ``SOURCE_ATOM DIRECTION TARGET`` rules for hidden type-raising.

Features reach a lexical category from three places, installed in this
order: tree-level tags of the matching ``cat.db`` clause, features written
into the ``syn.db`` category, and the morphology of the surface form.
"""

import logging
import os
import re
from dataclasses import dataclass, field
from types import MappingProxyType

from .categories import (ATOMS, CategorySyntaxError, Atomic, format_category,
                         head_atom, is_raised_shape, parse_category,
                         same_skeleton, set_features, subject_atom)
from .combinators import TypeRaiseError, type_raise
from .unify import UnificationFailure, unify_categories

__all__ = [
    'LexiconError', 'FeatureInventory', 'FeatureTag', 'SynEntry',
    'CatDbEntry', 'MorphEntry', 'RaiseRule', 'LexEntry', 'CompiledLexicon',
    'Grammar', 'DEFAULT_FEATURES', 'load_features', 'load_syn_db',
    'load_cat_db', 'load_morph_db', 'load_raise_cfg', 'load_freq_db',
    'resolve_tag', 'resolve', 'compile_lexicon', 'lookup', 'dump_entries',
    'load_compiled', 'sample_lexicon_dir', 'LEXICON_FILES',
    'working_categories', 'raised_texts',
]

logger = logging.getLogger(__name__)

LEXICON_FILES = ('syn.db', 'cat.db', 'morph.db', 'features.cfg', 'raise.cfg')


class LexiconError(ValueError):
    """A malformed or inconsistent database record."""

    def __init__(self, message, source=None, line=None, column=None):
        self.source = source
        self.line = line
        self.column = column
        where = source or ''
        if line is not None:
            where += ':%d' % line
            if column is not None:
                where += ':%d' % column
        super().__init__('%s: %s' % (where, message) if where else message)


# -- feature inventory -----------------------------------------------------

DEFAULT_FEATURES = """\
# attribute: permitted values
case: nom acc gen
num: sg pl
pers: 1 2 3
vform: ind inf ger ppart base
tense: pres past
wh: + -
bar: + -
comp: that whether for none
pron: + -
refl: + -
inv: + -
conj-head: and or but
passive: + -
agreement: num pers
flags: INTRANS INTRANSger TRANS DITRANS SCOMP SSUBJ INFCOMP PASSIVE MOD DET VPMOD ADJMOD TEMP WHSUBJ WHOBJ RELSUBJ RELOBJ COMP CONJ PREP
"""


@dataclass(frozen=True)
class FeatureInventory:
    values: dict
    agreement: frozenset = frozenset()
    flags: frozenset = frozenset()
    atoms: frozenset = ATOMS

    def check(self, attr, value, where=None):
        if attr not in self.values:
            raise LexiconError('unknown feature %r' % attr, where)
        if value not in self.values[attr]:
            raise LexiconError('bad value %r for %s' % (value, attr), where)


def load_features(text, source='features.cfg'):
    values = {}
    agreement = set()
    flags = set()
    atoms = set(ATOMS)
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        name, colon, rest = line.partition(':')
        name = name.strip()
        if not colon or not name:
            raise LexiconError('expected "name: values"', source, lineno)
        words = rest.split()
        if name == 'agreement':
            agreement.update(words)
        elif name == 'flags':
            flags.update(words)
        elif name == 'atoms':
            atoms.update(words)
        else:
            if not words:
                raise LexiconError('feature %r has no values' % name, source, lineno)
            values[name] = tuple(words)
    missing = agreement - set(values)
    if missing:
        raise LexiconError('agreement names undeclared features %s'
                           % sorted(missing), source)
    return FeatureInventory(values, frozenset(agreement), frozenset(flags),
                            frozenset(atoms))


# -- feature tags ----------------------------------------------------------

@dataclass(frozen=True)
class FeatureTag:
    """``#NP1caseacc``: set ``attr=value`` on atom ``label``/``index``.

    With no index the tag addresses the result atom.
    """
    label: str
    index: int
    attr: str
    value: str

    def __str__(self):
        idx = '' if self.index is None else str(self.index)
        return '#%s%s%s%s' % (self.label, idx, self.attr, self.value)


def resolve_tag(tag, inventory):
    """Map a ``#tag`` to a :class:`FeatureTag` or a flag name.

    Raises :class:`LexiconError` unless exactly one reading exists.
    """
    body = tag[1:] if tag.startswith('#') else tag
    readings = []
    if body in inventory.flags:
        readings.append(body)
    for label in inventory.atoms:
        if not body.startswith(label):
            continue
        rest = body[len(label):]
        index = None
        if rest[:1].isdigit():
            index, rest = int(rest[0]), rest[1:]
        for attr, values in inventory.values.items():
            if rest.startswith(attr) and rest[len(attr):] in values:
                readings.append(FeatureTag(label, index, attr, rest[len(attr):]))
    if not readings:
        raise LexiconError('unknown tag %r' % tag)
    if len(readings) > 1:
        raise LexiconError('ambiguous tag %r: %s' % (tag, readings))
    return readings[0]


def _apply_tags(cat, tags, where=None):
    """Install feature tags; returns (category, flag labels)."""
    atoms = cat.atoms()
    head = head_atom(cat)
    assignments = {}
    labels = []
    for tag in tags:
        if isinstance(tag, str):
            labels.append(tag)
            continue
        if tag.index is None:
            targets = [i for i, a in enumerate(atoms)
                       if a is head and a.label == tag.label]
        else:
            targets = [i for i, a in enumerate(atoms)
                       if a.label == tag.label and a.arg_index == tag.index]
        if not targets:
            raise LexiconError('tag %s matches no atom of %s'
                               % (tag, format_category(cat)), where)
        for i in targets:
            slot = assignments.setdefault(i, {})
            if slot.get(tag.attr, tag.value) != tag.value:
                raise LexiconError('tag %s contradicts %s=%s'
                                   % (tag, tag.attr, slot[tag.attr]), where)
            slot[tag.attr] = tag.value
    try:
        return set_features(cat, assignments), tuple(labels)
    except UnificationFailure as exc:
        raise LexiconError('tags clash with category features: %s' % exc,
                           where) from None


# -- syntactic database ----------------------------------------------------

@dataclass(frozen=True)
class SynEntry:
    index_word: str
    entry_count: int
    pos: str
    cats: tuple


def _records(text):
    record = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.startswith('#'):
            continue
        if not line.strip():
            if record:
                yield record
                record = []
            continue
        record.append((lineno, line.strip()))
    if record:
        yield record


def load_syn_db(text, atoms=ATOMS, source='syn.db'):
    entries = []
    for record in _records(text):
        fields = {}
        for lineno, line in record:
            key, colon, value = line.partition(':')
            key = key.strip().upper()
            if not colon or key not in ('INDEX', 'POS', 'CAT'):
                raise LexiconError('expected INDEX:, POS: or CAT:', source, lineno)
            if key in fields:
                raise LexiconError('duplicate %s line' % key, source, lineno)
            fields[key] = (lineno, value.strip())
        first = record[0][0]
        for key in ('INDEX', 'POS', 'CAT'):
            if key not in fields:
                raise LexiconError('record lacks %s line' % key, source, first)
        lineno, index = fields['INDEX']
        word, slash, count = index.rpartition('/')
        if not slash or not word or not count.isdigit():
            raise LexiconError('INDEX must read word/count', source, lineno)
        lineno, cat_line = fields['CAT']
        cats = tuple(cat_line.split())
        for text_ in cats:
            try:
                parse_category(text_, atoms)
            except CategorySyntaxError as exc:
                raise LexiconError(str(exc), source, lineno) from None
        if len(cats) != int(count):
            raise LexiconError('%s declares %s entries but lists %d categories'
                               % (word, count, len(cats)), source, lineno)
        entries.append(SynEntry(word, int(count), fields['POS'][1], cats))
    return entries


# -- category database -----------------------------------------------------

@dataclass(frozen=True)
class CatDbEntry:
    pos: str
    clauses: tuple    # ((category text, (tag, ...)), ...)


def load_cat_db(text, inventory=None, source='cat.db'):
    inventory = inventory or load_features(DEFAULT_FEATURES)
    entries = []
    current = None
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith('#'):
            continue
        column = len(line) - len(line.lstrip()) + 1
        body = line.strip()
        if column == 1:
            pos, colon, body = body.partition(':')
            if not colon or not pos.strip() or ' ' in pos.strip():
                raise LexiconError('expected "POS: ..."', source, lineno, 1)
            current = (pos.strip(), [])
            entries.append(current)
            column += len(pos) + 1
            offset = len(body) - len(body.lstrip())
            column += offset
            body = body.strip()
        elif current is None:
            raise LexiconError('continuation line before any POS line',
                               source, lineno, column)
        clauses = current[1]
        line_has_cat = False
        for m in re.finditer(r'\S+', body):
            word, col = m.group(), column + m.start()
            if word.startswith('#'):
                if not line_has_cat:
                    raise LexiconError('tag %s precedes any category' % word,
                                       source, lineno, col)
                try:
                    resolve_tag(word, inventory)
                except LexiconError as exc:
                    raise LexiconError(str(exc), source, lineno, col) from None
                clauses[-1][1].append(word)
            else:
                try:
                    parse_category(word, inventory.atoms)
                except CategorySyntaxError as exc:
                    raise LexiconError(str(exc), source, lineno,
                                       col + exc.offset) from None
                clauses.append((word, []))
                line_has_cat = True
    return [CatDbEntry(pos, tuple((c, tuple(t)) for c, t in clauses))
            for pos, clauses in entries]


# -- morphology ------------------------------------------------------------

@dataclass(frozen=True)
class MorphEntry:
    surface: str
    lemma: str
    pos: str
    features: tuple   # ((attr, value), ...)


def load_morph_db(text, inventory=None, source='morph.db'):
    inventory = inventory or load_features(DEFAULT_FEATURES)
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith('#'):
            continue
        parts = line.rstrip('\n').split('\t')
        if len(parts) == 3:
            parts.append('')
        if len(parts) != 4 or not all(p.strip() for p in parts[:3]):
            raise LexiconError('expected surface, lemma, pos, features '
                               'separated by tabs', source, lineno)
        surface, lemma, pos, feats = (p.strip() for p in parts)
        pairs = []
        for item in filter(None, (f.strip() for f in feats.split(','))):
            attr, eq, value = item.partition('=')
            if not eq:
                raise LexiconError('malformed feature %r' % item, source, lineno)
            try:
                inventory.check(attr, value)
            except LexiconError as exc:
                raise LexiconError(str(exc), source, lineno) from None
            pairs.append((attr, value))
        entries.append(MorphEntry(surface, lemma, pos, tuple(pairs)))
    return entries


# -- raise rules -----------------------------------------------------------

@dataclass(frozen=True)
class RaiseRule:
    source: str
    direction: str
    target: str

    def matches(self, cat):
        return cat.is_atomic and cat.label == self.source


def load_raise_cfg(text, atoms=ATOMS, source='raise.cfg'):
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        words = line.split('#', 1)[0].split()
        if not words:
            continue
        if len(words) != 3:
            raise LexiconError('expected SOURCE DIRECTION TARGET', source, lineno)
        src, direction, target = words
        if direction not in ('forward', 'backward'):
            raise LexiconError('direction must be forward or backward',
                               source, lineno)
        try:
            src_cat = parse_category(src, atoms)
            parse_category(target, atoms)
        except CategorySyntaxError as exc:
            raise LexiconError(str(exc), source, lineno) from None
        if not src_cat.is_atomic:
            raise LexiconError('only atomic categories are type-raised, got %s'
                               % src, source, lineno)
        rules.append(RaiseRule(src_cat.label, direction, target))
    return rules


def load_freq_db(text, atoms=ATOMS, source='freq.db'):
    """``word TAB category TAB count`` lines.

    Categories may carry features; counts are keyed by the featureless
    shape, which is what :class:`ccgboot.parser.FrequencyScorer` looks up.
    """
    counts = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith('#'):
            continue
        parts = line.split('\t')
        if len(parts) != 3 or not parts[2].strip().isdigit():
            raise LexiconError('expected word, category, count', source, lineno)
        try:
            cat = parse_category(parts[1].strip(), atoms)
        except CategorySyntaxError as exc:
            raise LexiconError(str(exc), source, lineno) from None
        key = (parts[0].strip(),
               format_category(cat, features=False, indices=False))
        counts[key] = counts.get(key, 0) + int(parts[2])
    return counts


# -- lexical entries -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LexEntry:
    word: str
    pos: str
    category: object
    source: str = 'base'
    labels: tuple = ()
    base: object = None            # the entry a raised category came from
    direction: str = None          # 'forward' / 'backward' for raised entries

    @property
    def signature(self):
        return (self.word, self.pos, self.category.key, self.source, self.labels)

    def __eq__(self, other):
        if not isinstance(other, LexEntry):
            return NotImplemented
        return self.signature == other.signature

    def __hash__(self):
        return hash(self.signature)

    def __repr__(self):
        return 'LexEntry(%r, %r, %s, %s)' % (self.word, self.pos,
                                           format_category(self.category),
                                           self.source)


class _Index:

    def __init__(self, syn, catdb, morph):
        self.syn = {}
        for entry in syn:
            self.syn.setdefault(entry.index_word, []).append(entry)
        self.clauses = {}
        for entry in catdb:
            self.clauses.setdefault(entry.pos, []).extend(entry.clauses)
        self.morph = {}
        self.lemmas = set()
        for entry in morph:
            self.morph.setdefault(entry.surface, []).append(entry)
            self.lemmas.add(entry.lemma)

    def surfaces(self):
        words = list(self.morph)
        words += [w for w in self.syn if w not in self.lemmas and w not in self.morph]
        return words


def _install_morph(cat, features, inventory):
    if not features:
        return cat
    atoms = cat.atoms()
    head = head_atom(cat)
    subject = subject_atom(cat)
    if subject is not None and subject.label != 'NP':
        subject = None
    assignments = {}
    for attr, value in features:
        target = subject if attr in inventory.agreement and subject is not None else head
        pos = next(i for i, a in enumerate(atoms) if a is target)
        assignments.setdefault(pos, {})[attr] = value
    return set_features(cat, assignments)


def resolve(word, syn, catdb, morph, inventory=None, _index=None):
    """All fully-featured lexical entries for a surface form.

    Combinations whose features clash are dropped with a logged diagnostic.
    An unknown word yields ``[]`` and a warning.
    """
    inventory = inventory or load_features(DEFAULT_FEATURES)
    index = _index or _Index(syn, catdb, morph)
    analyses = index.morph.get(word) or [MorphEntry(word, word, None, ())]
    entries = []
    for analysis in analyses:
        for syn_entry in index.syn.get(analysis.lemma, ()):
            if analysis.pos is not None and syn_entry.pos != analysis.pos:
                continue
            for cat_text in syn_entry.cats:
                entries.extend(_resolve_pairing(word, syn_entry, cat_text,
                                                analysis, index, inventory))
    if not entries:
        logger.warning('unknown word %r', word)
    return entries


def _resolve_pairing(word, syn_entry, cat_text, analysis, index, inventory):
    where = '%s/%s %s' % (syn_entry.index_word, syn_entry.pos, cat_text)
    syn_cat = parse_category(cat_text, inventory.atoms)
    clauses = [(parse_category(c, inventory.atoms), tags)
               for c, tags in index.clauses.get(syn_entry.pos, ())]
    clauses = [(c, tags) for c, tags in clauses if same_skeleton(c, syn_cat, True)]
    if not clauses:
        logger.info('%s: no category-database clause; using it bare', where)
        clauses = [(syn_cat, ())]
    out = []
    for clause_cat, tags in clauses:
        try:
            cat, labels = _apply_tags(clause_cat,
                                      [resolve_tag(t, inventory) for t in tags],
                                      where)
            # syn-DB features ride in on the category text itself
            cat = unify_categories(cat, syn_cat)
            cat = _install_morph(cat, analysis.features, inventory)
        except (UnificationFailure, LexiconError) as exc:
            logger.warning('%s: dropping %r reading: %s', where, word, exc)
            continue
        out.append(LexEntry(word, syn_entry.pos, cat, 'base', labels))
    return out


# -- compiled lexicon ------------------------------------------------------

class CompiledLexicon:
    """Immutable surface -> entries map; base entries precede raised ones."""

    def __init__(self, entries, inventory=None, raise_rules=()):
        table = {}
        for entry in entries:
            table.setdefault(entry.word, []).append(entry)
        for word, group in table.items():
            group.sort(key=lambda e: e.source != 'base')
        self._table = MappingProxyType({w: tuple(g) for w, g in table.items()})
        self.inventory = inventory or load_features(DEFAULT_FEATURES)
        self.raise_rules = tuple(raise_rules)

    @property
    def entries(self):
        return self._table

    def __iter__(self):
        for group in self._table.values():
            yield from group

    def __len__(self):
        return sum(len(g) for g in self._table.values())

    def __eq__(self, other):
        if not isinstance(other, CompiledLexicon):
            return NotImplemented
        return self._signature() == other._signature()

    __hash__ = None

    def _signature(self):
        return {w: [e.signature for e in g] for w, g in self._table.items()}

    def base_entries(self):
        return [e for e in self if e.source == 'base']

    def raised_entries(self):
        return [e for e in self if e.source == 'raised']

    def words(self):
        return list(self._table)

    def dump(self):
        return dump_entries(self, header='compiled lexicon')


def compile_lexicon(base, raise_rules=(), inventory=None):
    """Add hidden type-raised entries to a working lexicon.

    Each base entry whose atomic category matches a raise rule gains one
    raised entry flagged ``raised``, unless the word already has that
    category.
    """
    base = [e for e in base if e.source == 'base']
    atoms = inventory.atoms if inventory else ATOMS
    out = list(base)
    have = {}
    for entry in base:
        have.setdefault(entry.word, set()).add(entry.category)
    for entry in base:
        for rule in raise_rules:
            if not rule.matches(entry.category):
                continue
            try:
                raised = type_raise(entry.category,
                                    parse_category(rule.target, atoms),
                                    rule.direction)
            except TypeRaiseError as exc:
                raise LexiconError(str(exc), 'raise.cfg') from None
            if raised in have[entry.word]:
                continue
            have[entry.word].add(raised)
            out.append(LexEntry(entry.word, entry.pos, raised, 'raised',
                                entry.labels, entry, rule.direction))
    return CompiledLexicon(out, inventory, raise_rules)


def lookup(lex, surface, fallback=None):
    """Entries for ``surface`` (exact match first, then lower case).

    ``fallback='open-class'`` guesses NP and N for unknown words; the
    default returns ``[]`` and leaves the policy to the caller.
    """
    entries = lex.entries.get(surface)
    if entries is None:
        entries = lex.entries.get(surface.lower())
    if entries:
        return list(entries)
    if fallback == 'open-class':
        return [LexEntry(surface, 'UNK', Atomic('NP'), 'base', ('GUESS',)),
                LexEntry(surface, 'UNK', Atomic('N'), 'base', ('GUESS',))]
    if fallback not in (None, 'empty'):
        raise ValueError('unknown fallback %r' % fallback)
    return []


def dump_entries(entries, header=None):
    """Tab-separated ``word pos source category labels`` lines."""
    lines = ['# %s' % header] if header else []
    for e in entries:
        lines.append('\t'.join([e.word, e.pos, e.source,
                                format_category(e.category),
                                ' '.join(e.labels)]))
    return '\n'.join(lines) + '\n'


def load_compiled(text, inventory=None, source='compiled.db'):
    inventory = inventory or load_features(DEFAULT_FEATURES)
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith('#'):
            continue
        parts = line.split('\t')
        if len(parts) != 5:
            raise LexiconError('expected 5 tab-separated fields', source, lineno)
        word, pos, src, cat, labels = parts
        if src not in ('base', 'raised'):
            raise LexiconError('bad provenance %r' % src, source, lineno)
        try:
            category = parse_category(cat, inventory.atoms)
        except CategorySyntaxError as exc:
            raise LexiconError(str(exc), source, lineno) from None
        direction = None
        if src == 'raised':
            direction = 'forward' if category.slash == '/' else 'backward'
        entries.append(LexEntry(word, pos, category, src, tuple(labels.split()),
                                None, direction))
    return CompiledLexicon(entries, inventory)


# -- lexicon directories ---------------------------------------------------

def sample_lexicon_dir():
    """Path of the desk-scale sample grammar shipped with the package."""
    return os.path.join(os.path.dirname(__file__), 'data', 'sample')


@dataclass
class Grammar:
    """The working lexicon of one directory, loaded but not compiled."""
    inventory: FeatureInventory
    syn: list
    catdb: list
    morph: list
    raise_rules: list
    freq: dict = field(default_factory=dict)
    rules_cfg: str = None
    path: str = None

    @classmethod
    def load(cls, path):
        missing = [f for f in LEXICON_FILES
                   if not os.path.isfile(os.path.join(path, f))]
        if missing:
            raise FileNotFoundError('%s lacks %s' % (path, ', '.join(missing)))

        def read(name):
            with open(os.path.join(path, name), encoding='utf-8') as f:
                return f.read()

        inventory = load_features(read('features.cfg'))
        grammar = cls(
            inventory=inventory,
            syn=load_syn_db(read('syn.db'), inventory.atoms),
            catdb=load_cat_db(read('cat.db'), inventory),
            morph=load_morph_db(read('morph.db'), inventory),
            raise_rules=load_raise_cfg(read('raise.cfg'), inventory.atoms),
            path=path,
        )
        if os.path.isfile(os.path.join(path, 'freq.db')):
            grammar.freq = load_freq_db(read('freq.db'), inventory.atoms)
        if os.path.isfile(os.path.join(path, 'rules.cfg')):
            grammar.rules_cfg = read('rules.cfg')
        return grammar

    def resolve(self, word):
        return resolve(word, self.syn, self.catdb, self.morph, self.inventory,
                       self._index())

    def _index(self):
        index = getattr(self, '_cached_index', None)
        if index is None:
            index = self._cached_index = _Index(self.syn, self.catdb, self.morph)
        return index

    def base_entries(self):
        out = []
        for word in self._index().surfaces():
            out.extend(self.resolve(word))
        return out

    def compile(self, raise_rules=None):
        rules = self.raise_rules if raise_rules is None else raise_rules
        return compile_lexicon(self.base_entries(), rules, self.inventory)

    def rule_set(self):
        from .combinators import RuleSet
        return RuleSet.from_config(self.rules_cfg) if self.rules_cfg else RuleSet()


def working_categories(path):
    """Every category text written in a directory's syn.db and cat.db."""
    grammar = Grammar.load(path)
    texts = [c for e in grammar.syn for c in e.cats]
    texts += [c for e in grammar.catdb for c, _ in e.clauses]
    return texts


def raised_texts(texts, atoms=ATOMS):
    """The subset of ``texts`` whose category has a type-raised shape."""
    return [t for t in texts if is_raised_shape(parse_category(t, atoms))]
