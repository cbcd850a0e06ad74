"""Unification-based CCG parsing with a lexicon bootstrapped from LTAG trees."""

from .categories import (Atomic, Category, Functor, format_category,
                         parse_category)
from .combinators import RuleName, RuleSet
from .lexicon import Grammar, compile_lexicon, sample_lexicon_dir
from .parser import derivations, parse, tokenize
from .unify import FeatureStructure, UnificationFailure, unify

__version__ = '0.1.0'

__all__ = [
    'Atomic', 'Category', 'Functor', 'format_category', 'parse_category',
    'RuleName', 'RuleSet', 'Grammar', 'compile_lexicon', 'sample_lexicon_dir',
    'derivations', 'parse', 'tokenize', 'FeatureStructure',
    'UnificationFailure', 'unify',
]
