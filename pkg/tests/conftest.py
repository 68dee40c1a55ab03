import pytest

from deplen.treebank import DependencyTree, Token
from deplen.constituency import SentencePlan, decompose
from deplen.analysis import SyntheticSpec, generate_synthetic_corpus

# The worked 11-token example: four preverbal constituents
# "maa ne" / "baajaar jaate samaye" / "rote hue bacche ko" / "toffee"
# and the verb "di" as root.
FIG3_TOKENS = [
    ("maa", 11, "subj"), ("ne", 1, "case"),
    ("baajaar", 4, "obl"), ("jaate", 11, "advcl"), ("samaye", 4, "mark"),
    ("rote", 7, "amod"), ("hue", 8, "aux"), ("bacche", 11, "iobj"), ("ko", 8, "case"),
    ("toffee", 11, "obj"), ("di", 0, "root"),
]

# depicted random order: maa ne | baajaar jaate samaye | toffee | rote hue bacche ko
FIG3_RANDOM_ORDER = (0, 1, 3, 2)


@pytest.fixture
def fig3_tree() -> DependencyTree:
    return DependencyTree(
        Token(i + 1, form, head, rel)
        for i, (form, head, rel) in enumerate(FIG3_TOKENS))


@pytest.fixture
def fig3_plan(fig3_tree) -> SentencePlan:
    plan = decompose(fig3_tree)
    assert isinstance(plan, SentencePlan)
    return plan


def random_tree(rng, n: int) -> DependencyTree:
    """Uniformly structured random tree (not necessarily projective)."""
    order = list(rng.permutation(n) + 1)
    heads = {order[0]: 0}
    for i, node in enumerate(order[1:], start=1):
        heads[node] = int(order[rng.integers(i)])
    return DependencyTree(
        Token(i, f"w{i}", heads[i], "dep") for i in range(1, n + 1))


def random_plans(seed: int, count: int, k_max: int = 6) -> list:
    """Eligible plans from the synthetic generator with random references."""
    weights = tuple((k, 1.0 / (k_max - 1)) for k in range(2, k_max + 1))
    spec = SyntheticSpec(n_sentences=count, k_weights=weights, p_least_effort=0.0)
    plans = []
    for tree in generate_synthetic_corpus(spec, seed=seed):
        plan = decompose(tree)
        assert isinstance(plan, SentencePlan)
        plans.append(plan)
    return plans
