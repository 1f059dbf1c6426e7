"""
Text normalization for naming metrics
=====================================

Free-text descriptions get a fixed pipeline before any metric sees
them: lowercase, tokenize on [a-z0-9]+ runs, stem each token to a
fixpoint of the suffix-stripping rules, then drop stopwords.  The
stopword filter runs last, on stemmed forms, so a handful of stopwords
survive it (their stems differ from the listed word) and a few content
stems collide with it.  Determinism matters more here than linguistic
elegance: the same string always becomes the same tokens.
"""

from tangramkit import STOPWORDS, normalize, stem, tokenize, vocab_normalize
from tangramkit.porter import stem_once

# tokenize: lowercase letter/digit runs only; punctuation splits
print("tokenize('A two-headed DOG!') ->", tokenize("A two-headed DOG!"))

# stemming strips suffixes rule by rule; stem() iterates stem_once
# until the output stops changing, so stem(stem(w)) == stem(w) always
for word in ("generalizations", "oscillator", "relational", "agreed"):
    print(f"{word:16s} once={stem_once(word):10s} fixpoint={stem(word)}")

# the fixpoint makes a difference exactly when one pass exposes a new
# strippable suffix
word = "agreed"
steps = [word]
while True:
    nxt = stem_once(steps[-1])
    if nxt == steps[-1]:
        break
    steps.append(nxt)
print("agreed stems as", " -> ".join(steps))

# normalize = tokenize + stem + stopword removal
print("\nnormalize('The shape of a dancing man') ->",
      normalize("The shape of a dancing man"))

# the filter applies to stemmed tokens, so 'very' (stem 'veri') and
# 'this' (stem 'thi') survive while 'doing' (stem 'do') is dropped
for text in ("very tall", "this one", "doing nothing"):
    print(f"normalize({text!r}) -> {normalize(text)}")

# vocabulary statistics keep stopwords (a different published pipeline)
print("\nvocab_normalize('the dog is running') ->",
      vocab_normalize("the dog is running"))

# the placeholder for unlabeled parts is never stemmed or filtered
print("normalize('UNKNOWN') ->", normalize("UNKNOWN"))

print("\nstopword list size:", len(STOPWORDS))
