"""
Command-line front end.

    ccgboot parse "Paddington loves Betsy"
    ccgboot convert trees.ltag -o cat.db
    ccgboot compile --lexicon mygrammar/
    ccgboot batch corpus.txt --jobs 4

Exit status: 0 success (parse found), 1 no parse, 2 configuration or I/O
error.  The lexicon directory comes from ``--lexicon``, else the
``CCGBOOT_LEXICON`` environment variable, else the bundled sample grammar.
"""

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .categories import CategorySyntaxError, parse_category
from .combinators import RuleSet
from .lexicon import Grammar, LexiconError, sample_lexicon_dir
from .ltag import LtagSyntaxError, UnsupportedTree, convert_items, load_ltag, to_cat_db
from .parser import (DEFAULT_GOAL, FilterConfig, FrequencyScorer,
                     count_derivations, derivations, parse, tokenize)
from .render import render

ENV_LEXICON = 'CCGBOOT_LEXICON'
FORMATS = ('tree-ascii', 'bracketed', 'json-lines')

EXIT_OK, EXIT_NO_PARSE, EXIT_ERROR = 0, 1, 2


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    lexicon_dir: str
    goal: str = DEFAULT_GOAL
    rules: RuleSet = None
    n_best: int = None
    max_derivations: int = 10
    output: str = 'tree-ascii'
    filters: FilterConfig = field(default_factory=FilterConfig)
    features: bool = False
    dump_chart: bool = False


class Session:
    """A loaded grammar plus everything needed to parse with it."""

    def __init__(self, cfg):
        self.cfg = cfg
        try:
            self.grammar = Grammar.load(cfg.lexicon_dir)
            self.lexicon = self.grammar.compile()
        except (OSError, LexiconError, CategorySyntaxError) as exc:
            raise ConfigError('cannot load lexicon %s: %s' % (cfg.lexicon_dir, exc))
        try:
            self.goal = parse_category(cfg.goal, self.grammar.inventory.atoms)
        except CategorySyntaxError as exc:
            raise ConfigError('bad --goal: %s' % exc)
        self.rules = cfg.rules or self.grammar.rule_set()
        self.scorer = FrequencyScorer(self.grammar.freq, cfg.n_best)

    def parse(self, sentence):
        tokens = tokenize(sentence)
        if not tokens:
            return tokens, None
        chart = parse(tokens, self.lexicon, self.rules, self.scorer,
                      self.cfg.filters)
        return tokens, chart


def _rules(text, depth):
    try:
        base = RuleSet(composition_depth=depth or 1)
        return RuleSet.from_spec(text, base) if text else (
            base if depth else None)
    except ValueError as exc:
        raise ConfigError('bad --rules: %s' % exc)


def _config(args):
    lexicon = args.lexicon or os.environ.get(ENV_LEXICON) or sample_lexicon_dir()
    filters = FilterConfig(span='span' not in (args.disable_filter or []),
                           fallback=args.unknown)
    return RunConfig(lexicon_dir=lexicon, goal=args.goal,
                     rules=_rules(args.rules, args.composition_depth),
                     n_best=args.n_best, max_derivations=args.max_derivations,
                     output=args.format, filters=filters,
                     features=args.features, dump_chart=args.dump_chart)


def _report_unknown(chart, err):
    for a in chart.assignments:
        if a.unknown:
            err.write('unknown word %r at token %d\n' % (a.token, a.token_index))


def cmd_parse(sentence, cfg, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    session = Session(cfg)
    tokens, chart = session.parse(sentence)
    if chart is None:
        err.write('empty sentence\n')
        return EXIT_NO_PARSE
    _report_unknown(chart, err)
    if cfg.dump_chart:
        err.write(chart.dump())
    found = derivations(chart, session.goal, cfg.max_derivations)
    for i, d in enumerate(found):
        if cfg.output == 'tree-ascii' and i:
            out.write('\n')
        out.write(render(d, cfg.output, cfg.features) + '\n')
    if not found:
        err.write('no parse for %r\n' % ' '.join(tokens))
        return EXIT_NO_PARSE
    return EXIT_OK


def cmd_convert(tree_file, out_path=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        with open(tree_file, encoding='utf-8') as f:
            items = load_ltag(f.read())
        results, notes = convert_items(items)
    except OSError as exc:
        err.write('%s\n' % exc)
        return EXIT_ERROR
    except (LtagSyntaxError, UnsupportedTree) as exc:
        err.write('%s: %s\n' % (tree_file, exc))
        return EXIT_ERROR
    for note in notes:
        err.write('warning: %s\n' % note)
    text = to_cat_db(results)
    if out_path:
        try:
            with open(out_path, 'w', encoding='utf-8') as f:
                f.write(text)
        except OSError as exc:
            err.write('%s\n' % exc)
            return EXIT_ERROR
    else:
        out.write(text)
    return EXIT_OK


def cmd_compile(lexicon_dir, out_path=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        lex = Grammar.load(lexicon_dir).compile()
        out_path = out_path or os.path.join(lexicon_dir, 'compiled.db')
        with open(out_path, 'w', encoding='utf-8') as f:
            f.write(lex.dump())
    except (OSError, LexiconError, CategorySyntaxError) as exc:
        err.write('%s\n' % exc)
        return EXIT_ERROR
    out.write('base %d\nraised %d\n' % (len(lex.base_entries()),
                                         len(lex.raised_entries())))
    return EXIT_OK


def _batch_line(session, sentence):
    start = time.perf_counter()
    tokens, chart = session.parse(sentence)
    count = 0
    unknown = []
    if chart is not None:
        unknown = [a.token for a in chart.assignments if a.unknown]
        count = sum(count_derivations(chart, session.goal).values())
    return {'sentence': sentence, 'parsed': count > 0, 'derivations': count,
            'unknown': unknown,
            'time': round(time.perf_counter() - start, 6)}


def cmd_batch(path, cfg, jobs=1, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        with open(path, encoding='utf-8') as f:
            sentences = [line.strip() for line in f if line.strip()
                         and not line.lstrip().startswith('#')]
    except OSError as exc:
        err.write('%s\n' % exc)
        return EXIT_ERROR
    session = Session(cfg)
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            rows = list(pool.map(lambda s: _batch_line(session, s), sentences))
    else:
        rows = [_batch_line(session, s) for s in sentences]
    for row in rows:
        out.write(json.dumps(row, ensure_ascii=False) + '\n')
    parsed = sum(r['parsed'] for r in rows)
    coverage = 100.0 * parsed / len(rows) if rows else 0.0
    out.write(json.dumps({'summary': True, 'sentences': len(rows),
                          'parsed': parsed, 'coverage': round(coverage, 2)}) + '\n')
    return EXIT_OK


def _parse_options(p):
    p.add_argument('--lexicon', metavar='DIR',
                   help='lexicon directory (default: $%s or the sample)' % ENV_LEXICON)
    p.add_argument('--goal', default=DEFAULT_GOAL, metavar='CAT')
    p.add_argument('--rules', metavar='LIST',
                   help='e.g. FwdApp,BwdApp,Coord or -BwdXComp')
    p.add_argument('--composition-depth', type=int, metavar='N')
    p.add_argument('--n-best', type=int, metavar='N')
    p.add_argument('--max-derivations', type=int, default=10, metavar='N')
    p.add_argument('--format', choices=FORMATS, default='tree-ascii')
    p.add_argument('--disable-filter', action='append', choices=['span'],
                   metavar='NAME')
    p.add_argument('--unknown', choices=['empty', 'open-class'], default=None,
                   help='unknown-word policy')
    p.add_argument('--features', action='store_true',
                   help='show features in tree and bracketed output')
    p.add_argument('--dump-chart', action='store_true',
                   help='write chart items to stderr')


def build_parser():
    ap = argparse.ArgumentParser(prog='ccgboot', description=__doc__.split('\n\n')[0])
    sub = ap.add_subparsers(dest='command', required=True)

    p = sub.add_parser('parse', help='parse one sentence')
    p.add_argument('sentence', nargs='+')
    _parse_options(p)

    c = sub.add_parser('convert', help='convert .ltag trees to cat.db lines')
    c.add_argument('tree_file')
    c.add_argument('-o', '--out')

    k = sub.add_parser('compile', help='compile a lexicon directory')
    k.add_argument('--lexicon', metavar='DIR')
    k.add_argument('-o', '--out')

    b = sub.add_parser('batch', help='parse a file, one sentence per line')
    b.add_argument('file')
    b.add_argument('--jobs', type=int, default=1)
    _parse_options(b)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == 'parse':
            return cmd_parse(' '.join(args.sentence), _config(args))
        if args.command == 'convert':
            return cmd_convert(args.tree_file, args.out)
        if args.command == 'compile':
            lexicon = (args.lexicon or os.environ.get(ENV_LEXICON)
                       or sample_lexicon_dir())
            return cmd_compile(lexicon, args.out)
        return cmd_batch(args.file, _config(args), args.jobs)
    except ConfigError as exc:
        sys.stderr.write('error: %s\n' % exc)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
