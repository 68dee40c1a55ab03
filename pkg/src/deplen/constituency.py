"""Decompose sentences into permutable preverbal constituents and compute
dependency-length metrics.

Distance convention: an arc between positions a and b contributes the number
of intervening words, |a - b| - 1. A positional-difference convention
(|a - b|) is available behind the `convention` argument for cross-study
comparison but is never the default.
"""

from dataclasses import dataclass
from typing import Sequence, Union

from .treebank import DependencyTree, NonProjectiveError, is_projective, subtree_yield

__all__ = [
    "Constituent",
    "SentencePlan",
    "Ineligible",
    "decompose",
    "arc_distance",
    "total_dependency_length",
    "constituent_dl",
    "main_verb_dl",
    "main_verb_dl_closed_form",
]

CONVENTIONS = ("intervening", "positional")


def arc_distance(a: int, b: int, convention: str = "intervening") -> int:
    d = abs(a - b)
    if convention == "intervening":
        return d - 1
    if convention == "positional":
        return d
    raise ValueError(f"unknown distance convention: {convention!r}")


@dataclass(frozen=True)
class Constituent:
    head_index: int       # token position of the constituent head (original order)
    span: tuple           # (lo, hi) inclusive token range, original order
    forms: tuple          # surface forms of the span, for reporting

    def __post_init__(self):
        lo, hi = self.span
        if not (lo <= self.head_index <= hi):
            raise ValueError("constituent head outside its span")

    @property
    def length(self) -> int:
        lo, hi = self.span
        return hi - lo + 1

    @property
    def head_right_offset(self) -> int:
        """Number of span tokens strictly after the head."""
        return self.span[1] - self.head_index


@dataclass(frozen=True)
class Ineligible:
    reason: str


@dataclass(frozen=True)
class SentencePlan:
    tree: DependencyTree
    preverbal: tuple          # Constituents, original left-to-right order
    verb_index: int           # root token position

    @property
    def k(self) -> int:
        return len(self.preverbal)

    @property
    def postverbal_suffix(self) -> tuple:
        """Token forms at and after the verb, frozen under permutation."""
        return tuple(t.form for t in self.tree.tokens[self.verb_index - 1:])

    @property
    def lengths(self) -> tuple:
        return tuple(c.length for c in self.preverbal)


def decompose(tree: DependencyTree) -> Union[SentencePlan, Ineligible]:
    """Split a projective tree into preverbal constituents + frozen suffix.

    Preverbal constituents are the yields of root children lying entirely
    before the root, left to right. Root children at or after the root
    (auxiliaries, complement clauses, punctuation) stay frozen in the suffix.
    """
    if not is_projective(tree):
        raise NonProjectiveError("decompose requires a projective tree")
    verb = tree.root_index
    constituents = []
    for child in tree.children(verb):
        lo, hi = subtree_yield(tree, child)
        if hi < verb:
            forms = tuple(t.form for t in tree.tokens[lo - 1:hi])
            constituents.append(Constituent(child, (lo, hi), forms))
        elif lo < verb:
            return Ineligible("root child yield straddles the verb")
    constituents.sort(key=lambda c: c.span[0])
    if not constituents:
        return Ineligible("no preverbal constituents")
    if len(constituents) < 2:
        return Ineligible("fewer than 2 constituents")
    covered = sum(c.length for c in constituents)
    if covered != verb - 1:
        return Ineligible("preverbal region not tiled by root-child yields")
    return SentencePlan(tree, tuple(constituents), verb)


def total_dependency_length(tree: DependencyTree,
                            convention: str = "intervening") -> int:
    """Sum of head-dependent distances over all arcs of the tree."""
    return sum(arc_distance(h, d, convention) for h, d in tree.arcs())


def _positions(plan: SentencePlan, order: Sequence[int]):
    """Per-constituent (new head position, position index) under `order`.

    `order` holds indices into plan.preverbal, front to verb. Returns a dict
    keyed by constituent index: head position in the reordered sentence.
    """
    head_pos = {}
    start = 1
    for ci in order:
        c = plan.preverbal[ci]
        head_pos[ci] = start + (c.head_index - c.span[0])
        start += c.length
    return head_pos, start  # start == new verb position


def constituent_dl(plan: SentencePlan, order: Sequence[int], which: int,
                   convention: str = "intervening") -> int:
    """Distance between constituent `which`'s head and the verb under `order`."""
    if which not in order:
        raise ValueError("constituent not in the given order")
    head_pos, verb_pos = _positions(plan, order)
    return arc_distance(head_pos[which], verb_pos, convention)


def main_verb_dl(plan: SentencePlan, order: Sequence[int],
                 convention: str = "intervening") -> int:
    """Sum of head-to-verb distances over all preverbal constituents, arc by arc."""
    head_pos, verb_pos = _positions(plan, order)
    return sum(arc_distance(p, verb_pos, convention) for p in head_pos.values())


def main_verb_dl_closed_form(plan: SentencePlan, order: Sequence[int]) -> int:
    """Equivalent closed form: sum_i length(C_order[i]) * i + sum_j offset(C_j).

    Holds for the intervening-words convention only; must agree with
    main_verb_dl on every plan and order.
    """
    total = sum(i * plan.preverbal[ci].length for i, ci in enumerate(order))
    total += sum(c.head_right_offset for c in plan.preverbal)
    return total
