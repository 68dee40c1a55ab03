"""Counterfactual word-order variants and the four named ordering strategies.

A variant is a permutation of a plan's preverbal constituents, represented
as a tuple of indices into plan.preverbal (front of the sentence first).
Permutations, not surface strings, are the unit: two permutations that
happen to produce the same string are distinct variants.
"""

import itertools
import math
from dataclasses import dataclass

from .constituency import SentencePlan
from .seeding import as_rng
from .treebank import DependencyTree, Token

__all__ = [
    "VariantSet",
    "generate_variants",
    "order_identity",
    "order_ascending",
    "order_descending",
    "order_random",
    "order_least_effort",
    "least_effort_move",
    "linearize",
]

DEFAULT_CAP = 100


@dataclass(frozen=True)
class VariantSet:
    reference_order: tuple
    sampled_variants: tuple   # pairwise distinct, never contains the reference
    cap: int
    seed: object


def order_identity(plan: SentencePlan) -> tuple:
    return tuple(range(plan.k))


def generate_variants(plan: SentencePlan, cap: int = DEFAULT_CAP,
                      seed=None) -> VariantSet:
    """All non-reference permutations when k! <= cap, else cap-1 distinct
    permutations sampled uniformly without replacement."""
    if cap < 2:
        raise ValueError(f"variant cap must be >= 2, got {cap}")
    k = plan.k
    if k < 2:
        raise ValueError("plan has fewer than 2 preverbal constituents")
    reference = tuple(range(k))
    if math.factorial(k) <= cap:
        variants = tuple(p for p in itertools.permutations(range(k))
                         if p != reference)
    else:
        rng = as_rng(seed)
        chosen = []
        seen = {reference}
        while len(chosen) < cap - 1:
            p = tuple(int(i) for i in rng.permutation(k))
            if p not in seen:
                seen.add(p)
                chosen.append(p)
        variants = tuple(chosen)
    return VariantSet(reference, variants, cap, seed)


def order_ascending(plan: SentencePlan) -> tuple:
    """Shortest first; ties keep original left-to-right order."""
    return tuple(sorted(range(plan.k), key=lambda i: (plan.lengths[i], i)))


def order_descending(plan: SentencePlan) -> tuple:
    """Longest first; ties keep original left-to-right order."""
    return tuple(sorted(range(plan.k), key=lambda i: (-plan.lengths[i], i)))


def order_random(plan: SentencePlan, seed=None) -> tuple:
    rng = as_rng(seed)
    return tuple(int(i) for i in rng.permutation(plan.k))


def least_effort_move(plan: SentencePlan, order) -> tuple:
    """Relocate the shortest constituent next to the verb.

    Ties go to the shortest already nearest the verb, so a sentence whose
    shortest constituent is verb-adjacent is left unchanged. All other
    relative orders are preserved.
    """
    lengths = plan.lengths
    shortest = min(lengths[ci] for ci in order)
    pos = max(i for i, ci in enumerate(order) if lengths[ci] == shortest)
    moved = order[pos]
    return tuple(ci for ci in order if ci != moved) + (moved,)


def order_least_effort(plan: SentencePlan, seed=None) -> tuple:
    """Random order, then the shortest constituent moves next to the verb."""
    return least_effort_move(plan, order_random(plan, seed))


def linearize(plan: SentencePlan, order) -> DependencyTree:
    """Rebuild the tree with preverbal constituents in the given order.

    Heads are remapped so intra-constituent and postverbal arcs keep their
    structure; output length equals input length.
    """
    if sorted(order) != list(range(plan.k)):
        raise ValueError("order is not a permutation of the preverbal constituents")
    old_positions = []
    for ci in order:
        lo, hi = plan.preverbal[ci].span
        old_positions.extend(range(lo, hi + 1))
    old_positions.extend(range(plan.verb_index, len(plan.tree) + 1))
    remap = {old: new for new, old in enumerate(old_positions, start=1)}
    remap[0] = 0
    tokens = [plan.tree.token(old) for old in old_positions]
    return DependencyTree(
        Token(remap[t.index], t.form, remap[t.head], t.deprel) for t in tokens
    )
