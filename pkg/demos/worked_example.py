"""Walk through the 11-token worked example sentence.

Builds the dependency tree for "maa ne baajaar jaate samaye rote hue
bacche ko toffee di", decomposes it into its four preverbal constituents,
and prints the main-verb dependency length under each ordering strategy.

Run: python3 demos/worked_example.py
"""

from deplen.constituency import constituent_dl, decompose, main_verb_dl
from deplen.treebank import DependencyTree, Token
from deplen.variants import (least_effort_move, linearize, order_ascending,
                             order_descending)

WORDS = [
    ("maa", 11, "subj"), ("ne", 1, "case"),
    ("baajaar", 4, "obl"), ("jaate", 11, "advcl"), ("samaye", 4, "mark"),
    ("rote", 7, "amod"), ("hue", 8, "aux"), ("bacche", 11, "iobj"), ("ko", 8, "case"),
    ("toffee", 11, "obj"), ("di", 0, "root"),
]

tree = DependencyTree(
    Token(i + 1, form, head, rel) for i, (form, head, rel) in enumerate(WORDS))
plan = decompose(tree)

print("sentence: ", " ".join(t.form for t in tree.tokens))
print("verb:     ", tree.token(plan.verb_index).form)
print("preverbal constituents:")
for c in plan.preverbal:
    print(f"  {' '.join(c.forms):28s} length {c.length}, "
          f"head offset from right {c.head_right_offset}")

orders = {
    "ascending (maximal DL)": order_ascending(plan),
    "descending (global minimum)": order_descending(plan),
    "a random order": (0, 1, 3, 2),
    "least-effort from that order": least_effort_move(plan, (0, 1, 3, 2)),
}
print()
for label, order in orders.items():
    sentence = " ".join(t.form for t in linearize(plan, order).tokens)
    arcs = [constituent_dl(plan, order, ci) for ci in order]
    print(f"{label}:")
    print(f"  {sentence}")
    print(f"  main-verb DL = {main_verb_dl(plan, order)}   arcs {arcs}")
