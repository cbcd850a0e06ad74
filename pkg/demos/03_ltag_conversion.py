"""Elementary trees in, category database lines out."""

import os

from ccgboot.lexicon import sample_lexicon_dir
from ccgboot.ltag import convert_items, load_ltag, to_cat_db

path = os.path.join(os.path.dirname(sample_lexicon_dir()), 'trees', 'sample.ltag')
with open(path, encoding='utf-8') as f:
    items = load_ltag(f.read())

results, notes = convert_items(items)
for res in results:
    print('%-40s <- %s' % (res.category, ', '.join(res.tree_names)))
print()
for note in notes:
    print('note:', note)
print()
print(to_cat_db(results))
