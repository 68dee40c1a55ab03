import itertools
from collections import Counter

import numpy as np
import pytest

from deplen.constituency import main_verb_dl
from deplen.variants import (generate_variants, least_effort_move, linearize,
                             order_ascending, order_descending,
                             order_least_effort, order_random)

from conftest import FIG3_RANDOM_ORDER, random_plans


class TestGenerateVariants:
    def test_k4_enumerates_all(self, fig3_plan):
        vset = generate_variants(fig3_plan, cap=100, seed=0)
        assert len(vset.sampled_variants) == 23
        assert vset.reference_order not in vset.sampled_variants
        assert len(set(vset.sampled_variants)) == 23

    def test_k2_single_variant(self):
        plan = random_plans(seed=5, count=1, k_max=2)[0]
        vset = generate_variants(plan, cap=100, seed=0)
        assert vset.sampled_variants == ((1, 0),)

    def test_k5_sampled(self):
        plan = next(p for p in random_plans(seed=8, count=50) if p.k == 5)
        vset = generate_variants(plan, cap=100, seed=3)
        assert len(vset.sampled_variants) == 99
        assert len(set(vset.sampled_variants)) == 99
        assert vset.reference_order not in vset.sampled_variants

    def test_sampling_over_seeds(self):
        plan = next(p for p in random_plans(seed=8, count=50) if p.k == 5)
        for seed in range(50):
            vset = generate_variants(plan, cap=100, seed=seed)
            assert len(set(vset.sampled_variants)) == 99
            assert vset.reference_order not in vset.sampled_variants

    def test_cap_too_small(self, fig3_plan):
        with pytest.raises(ValueError):
            generate_variants(fig3_plan, cap=1)


class TestOrderings:
    def test_fig3_ascending_descending(self, fig3_plan):
        assert main_verb_dl(fig3_plan, order_ascending(fig3_plan)) == 23
        assert main_verb_dl(fig3_plan, order_descending(fig3_plan)) == 13

    def test_tie_break_is_stable(self):
        plan = next(p for p in random_plans(seed=21, count=400)
                    if len(set(p.lengths)) == 1 and p.k >= 3)
        identity = tuple(range(plan.k))
        assert order_ascending(plan) == identity
        assert order_descending(plan) == identity

    def test_random_is_seeded(self, fig3_plan):
        assert order_random(fig3_plan, 42) == order_random(fig3_plan, 42)

    def test_random_uniform(self):
        plan = random_plans(seed=2, count=30, k_max=3)[0]
        assert plan.k in (2, 3)
        plan = next(p for p in random_plans(seed=2, count=30, k_max=3) if p.k == 3)
        counts = Counter(order_random(plan, seed) for seed in range(10_000))
        assert len(counts) == 6
        for freq in counts.values():
            assert abs(freq / 10_000 - 1 / 6) < 0.02


class TestLeastEffort:
    def test_fig3c_to_fig3d(self, fig3_plan):
        assert main_verb_dl(fig3_plan, FIG3_RANDOM_ORDER) == 20
        moved = least_effort_move(fig3_plan, FIG3_RANDOM_ORDER)
        assert main_verb_dl(fig3_plan, moved) == 17

    def test_noop_when_shortest_already_adjacent(self, fig3_plan):
        # constituent 3 ("toffee") is the shortest
        order = (1, 0, 2, 3)
        assert least_effort_move(fig3_plan, order) == order

    def test_k2_equals_descending(self):
        for plan in random_plans(seed=3, count=100, k_max=2):
            for seed in range(3):
                result = order_least_effort(plan, seed)
                desc = order_descending(plan)
                if plan.lengths[0] != plan.lengths[1]:
                    assert result == desc
                else:
                    assert main_verb_dl(plan, result) == main_verb_dl(plan, desc)

    def test_never_increases(self):
        for i, plan in enumerate(random_plans(seed=17, count=300)):
            start = order_random(plan, i)
            assert (main_verb_dl(plan, least_effort_move(plan, start))
                    <= main_verb_dl(plan, start))


class TestLinearize:
    def test_fig3_descending_string(self, fig3_plan):
        tree = linearize(fig3_plan, order_descending(fig3_plan))
        assert " ".join(t.form for t in tree.tokens) == \
            "rote hue bacche ko baajaar jaate samaye maa ne toffee di"

    def test_fig3_ascending_string(self, fig3_plan):
        tree = linearize(fig3_plan, order_ascending(fig3_plan))
        assert " ".join(t.form for t in tree.tokens) == \
            "toffee maa ne baajaar jaate samaye rote hue bacche ko di"

    def test_identity_reproduces_input(self, fig3_plan, fig3_tree):
        assert linearize(fig3_plan, (0, 1, 2, 3)) == fig3_tree

    def test_length_preserved(self, fig3_plan, fig3_tree):
        for order in itertools.permutations(range(4)):
            assert len(linearize(fig3_plan, order)) == len(fig3_tree)

    def test_invalid_order_rejected(self, fig3_plan):
        with pytest.raises(ValueError):
            linearize(fig3_plan, (0, 1, 2, 2))


def test_descending_is_argmin_ascending_argmax():
    for plan in random_plans(seed=31, count=120):
        values = {order: main_verb_dl(plan, order)
                  for order in itertools.permutations(range(plan.k))}
        assert main_verb_dl(plan, order_descending(plan)) == min(values.values())
        assert main_verb_dl(plan, order_ascending(plan)) == max(values.values())
