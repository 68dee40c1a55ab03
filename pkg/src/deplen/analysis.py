"""End-to-end experiments: corpus profiles, ordering-strategy curves, the
pairwise classification suite, per-constituent regressions, and a synthetic
corpus generator for desk-scale validation.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import constituency, features, stats, treebank, variants
from .constituency import Ineligible, SentencePlan, decompose
from .seeding import derive_rng
from .treebank import DependencyTree, Token

__all__ = [
    "CorpusEntry",
    "DecomposedCorpus",
    "PairwiseDataset",
    "SyntheticSpec",
    "InsufficientDataError",
    "decompose_corpus",
    "constituent_count_histogram",
    "position_length_profile",
    "strategy_curves",
    "build_pairwise_dataset",
    "run_classification_suite",
    "regression_table",
    "generate_synthetic_corpus",
]

STRATEGIES = ("reference", "ascending", "descending", "random", "least_effort")

TABLE3_ROWS = [
    ("total dependency length", ["total_dl"]),
    ("2nd-last preverbal constituent's deplen", ["dl_2ndlast"]),
    ("last preverbal constituent's deplen", ["dl_last"]),
    ("last + 2nd last preverbal constituent's deplen", ["dl_last", "dl_2ndlast"]),
]
TABLE4_ROWS = [
    ("2nd-last preverbal constituent length", ["len_2ndlast"]),
    ("last preverbal constituent length", ["len_last"]),
    ("last + 2nd last preverbal constituent length", ["len_last", "len_2ndlast"]),
]
SCALAR_FEATURES = ["total_dl", "dl_2ndlast", "dl_last", "len_2ndlast", "len_last"]


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    sentence_id: str
    tree: DependencyTree
    plan: SentencePlan


@dataclass
class DecomposedCorpus:
    entries: list
    skipped: dict = field(default_factory=dict)   # reason -> count

    @property
    def plans(self) -> list:
        return [e.plan for e in self.entries]


def decompose_corpus(trees, sentence_ids=None) -> DecomposedCorpus:
    """Decompose every projective, eligible tree; count the rest by reason."""
    entries, skipped = [], {}
    for i, tree in enumerate(trees):
        sid = sentence_ids[i] if sentence_ids is not None else f"s{i + 1}"
        if not treebank.is_projective(tree):
            skipped["non-projective"] = skipped.get("non-projective", 0) + 1
            continue
        plan = decompose(tree)
        if isinstance(plan, Ineligible):
            skipped[plan.reason] = skipped.get(plan.reason, 0) + 1
            continue
        entries.append(CorpusEntry(sid, tree, plan))
    return DecomposedCorpus(entries, skipped)


# ---------------------------------------------------------------------------
# corpus profiles

def constituent_count_histogram(corpus: DecomposedCorpus, cap: int = variants.DEFAULT_CAP):
    """Percentage of reference and variant sentences per constituent count.

    Variant mass uses the actual number of variants each reference yields
    under the cap (min(k! - 1, cap - 1)).
    """
    ref_counts, var_counts = {}, {}
    for e in corpus.entries:
        k = e.plan.k
        ref_counts[k] = ref_counts.get(k, 0) + 1
        nvar = min(math.factorial(k) - 1, cap - 1)
        var_counts[k] = var_counts.get(k, 0) + nvar
    def normalize(counts):
        total = sum(counts.values())
        return {k: 100.0 * v / total for k, v in sorted(counts.items())} if total else {}
    return normalize(ref_counts), normalize(var_counts)


def position_length_profile(corpus: DecomposedCorpus, k: int) -> np.ndarray:
    """Mean constituent length per preverbal position, over reference
    sentences with exactly k constituents. Position k is verb-adjacent."""
    rows = [plan.lengths for plan in corpus.plans if plan.k == k]
    if not rows:
        raise InsufficientDataError(f"no reference sentences with k={k}")
    return np.array(rows, dtype=float).mean(axis=0)


def sentence_length_constituent_corr(corpus: DecomposedCorpus) -> float:
    """Pearson correlation between sentence length and preverbal
    constituent count over reference sentences."""
    n_words = [len(e.tree) for e in corpus.entries]
    n_consts = [e.plan.k for e in corpus.entries]
    return stats.pearson(n_words, n_consts)


def strategy_curves(corpus: DecomposedCorpus, seed: int = 0,
                    random_draws: int = 10, k_range=(2, 6),
                    convention: str = "intervening") -> dict:
    """Mean total dependency length, normalized by sentence word count, per
    strategy and per constituent count.

    Random and least-effort values average `random_draws` seeded draws per
    sentence.
    """
    sums = {s: {} for s in STRATEGIES}
    counts = {}
    for e in corpus.entries:
        plan = e.plan
        k = plan.k
        if not (k_range[0] <= k <= k_range[1]):
            continue
        n = len(e.tree)
        def norm_dl(order):
            tree = variants.linearize(plan, order)
            return constituency.total_dependency_length(tree, convention) / n
        values = {
            "reference": norm_dl(variants.order_identity(plan)),
            "ascending": norm_dl(variants.order_ascending(plan)),
            "descending": norm_dl(variants.order_descending(plan)),
        }
        rand_vals, le_vals = [], []
        for d in range(random_draws):
            rng = derive_rng(seed, e.sentence_id, "random", d)
            start = variants.order_random(plan, rng)
            rand_vals.append(norm_dl(start))
            le_vals.append(norm_dl(variants.least_effort_move(plan, start)))
        values["random"] = float(np.mean(rand_vals))
        values["least_effort"] = float(np.mean(le_vals))
        counts[k] = counts.get(k, 0) + 1
        for s, v in values.items():
            sums[s][k] = sums[s].get(k, 0.0) + v
    return {s: {k: sums[s][k] / counts[k] for k in sorted(sums[s])}
            for s in STRATEGIES}


# ---------------------------------------------------------------------------
# pairwise dataset and classification

@dataclass
class PairwiseDataset:
    examples: list                # PairwiseExamples with full positional deltas
    diagnostics: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.examples)

    @property
    def labels(self) -> np.ndarray:
        return np.array([ex.label for ex in self.examples], dtype=int)

    @property
    def ks(self) -> np.ndarray:
        return np.array([ex.k for ex in self.examples], dtype=int)

    def scalar_matrix(self) -> np.ndarray:
        """Columns SCALAR_FEATURES; positional features read off each
        example's own k (last = verb-adjacent)."""
        rows = np.empty((len(self.examples), len(SCALAR_FEATURES)))
        for i, ex in enumerate(self.examples):
            k, d = ex.k, ex.delta
            rows[i] = (d[0], d[k - 1], d[k], d[2 * k - 1], d[2 * k])
        return rows

    def positional_matrix(self, k: int, family: str):
        """(X, y) for the exactly-k subset; family 'deplen' or 'length'."""
        offset = 1 if family == "deplen" else 1 + k
        if family not in ("deplen", "length"):
            raise ValueError(f"unknown feature family: {family!r}")
        sub = [ex for ex in self.examples if ex.k == k]
        X = np.array([ex.delta[offset:offset + k] for ex in sub])
        y = np.array([ex.label for ex in sub], dtype=int)
        return X, y


def _sentence_examples(entry: CorpusEntry, cap: int, seed: int,
                       convention: str) -> list:
    plan = entry.plan
    vset = variants.generate_variants(plan, cap, derive_rng(seed, entry.sentence_id, "variants"))
    ref = features.extract_features(plan, vset.reference_order, convention)
    return [(ref, features.extract_features(plan, order, convention))
            for order in vset.sampled_variants]


def build_pairwise_dataset(corpus: DecomposedCorpus, cap: int = variants.DEFAULT_CAP,
                           seed: int = 0, convention: str = "intervening",
                           jobs: int = 1) -> PairwiseDataset:
    """Variant generation + feature extraction + pairwise transformation
    for the whole corpus. Deterministic in (corpus, cap, seed) regardless
    of worker count."""
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_sentence = list(pool.map(
                _sentence_examples_star,
                [(e, cap, seed, convention) for e in corpus.entries],
                chunksize=64))
    else:
        per_sentence = [_sentence_examples(e, cap, seed, convention)
                        for e in corpus.entries]
    pairs, pair_ids = [], []
    for entry, sent_pairs in zip(corpus.entries, per_sentence):
        pairs.extend(sent_pairs)
        pair_ids.extend([entry.sentence_id] * len(sent_pairs))
    examples, diagnostics = features.joachims_transform(pairs, pair_ids)
    return PairwiseDataset(examples, diagnostics)


def _sentence_examples_star(args):
    return _sentence_examples(*args)


def run_classification_suite(dataset: PairwiseDataset, folds: int = 10,
                             seed: int = 0, zscore_mode: str = "fold") -> list:
    """CV accuracy for the dependency-length and constituent-length model
    families, each row McNemar-tested against the previous row of its table.

    Returns a list of row dicts: table, predictors, accuracy,
    fold_accuracies, mcnemar vs previous row (None for first rows).
    """
    if len(dataset) < 2:
        raise InsufficientDataError("insufficient data: need at least 2 pairs")
    scalars = dataset.scalar_matrix()
    y = dataset.labels
    col = {name: j for j, name in enumerate(SCALAR_FEATURES)}
    rows = []
    for table, specs in (("table3", TABLE3_ROWS), ("table4", TABLE4_ROWS)):
        prev_pred = None
        for name, predictors in specs:
            X = scalars[:, [col[p] for p in predictors]]
            report = stats.crossval_accuracy(X, y, folds=folds, seed=seed,
                                             zscore_mode=zscore_mode)
            row = {
                "table": table,
                "predictors": name,
                "accuracy": report.mean_accuracy,
                "fold_accuracies": report.fold_accuracies.tolist(),
                "mcnemar_p": None,
                "mcnemar_statistic": None,
            }
            if prev_pred is not None:
                res = stats.mcnemar(prev_pred, report.predictions, y)
                row["mcnemar_p"] = res.p_two_tailed
                row["mcnemar_statistic"] = res.statistic
            prev_pred = report.predictions
            rows.append(row)
    return rows


def _drop_collinear(X: np.ndarray, names: list):
    """Drop leftmost exactly-dependent columns until X has full column rank
    (intercept included). Verb-adjacent positions survive by construction."""
    design = lambda M: np.column_stack([np.ones(M.shape[0]), M])
    dropped = []
    while X.shape[1] > 1 and np.linalg.matrix_rank(design(X)) < X.shape[1] + 1:
        rank = np.linalg.matrix_rank(design(X))
        for j in range(X.shape[1]):
            rest = np.delete(X, j, axis=1)
            if np.linalg.matrix_rank(design(rest)) == rank:
                X = rest
                dropped.append(names.pop(j))
                break
    return X, names, dropped


def regression_table(dataset: PairwiseDataset, k: int, family: str,
                     folds: int = 10, seed: int = 0,
                     min_pairs: int = 500) -> dict:
    """RFECV-selected logistic regression over the positional predictors of
    the exactly-k subset (the per-constituent coefficient tables)."""
    X, y = dataset.positional_matrix(k, family)
    if len(y) < min_pairs:
        return {"k": k, "family": family, "status": "insufficient data",
                "n": int(len(y))}
    suffix = "deplen" if family == "deplen" else "length"
    names = [f"const{i}_{suffix}" for i in range(1, k + 1)]
    X, names, dropped = _drop_collinear(X, names)
    if len(names) >= 2:
        selection = stats.rfecv(X, y, folds=folds, seed=seed, feature_names=names)
        selected = selection.selected
        curve = {str(s): a for s, a in sorted(selection.curve.items())}
    else:
        selected, curve = list(names), {}
    keep = [j for j, nm in enumerate(names) if nm in selected]
    Z, _, _ = features.zscore(X[:, keep])
    fit = stats.fit_logistic(Z, y, feature_names=[names[j] for j in keep])
    return {"k": k, "family": family, "status": "ok", "n": int(len(y)),
            "selected": selected, "dropped_collinear": dropped,
            "cv_curve": curve, "fit": fit.to_dict()}


# ---------------------------------------------------------------------------
# synthetic corpus

@dataclass(frozen=True)
class SyntheticSpec:
    n_sentences: int = 1000
    k_weights: tuple = ((2, 0.2), (3, 0.25), (4, 0.25), (5, 0.2), (6, 0.1))
    # ("geometric", p) with mean 1/p, or ("uniform", lo, hi) inclusive
    length_dist: tuple = ("geometric", 0.4)
    max_constituent_length: int = 12
    p_least_effort: float = 1.0
    noise_temperature: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p_least_effort <= 1.0:
            raise ValueError("p_least_effort must be in [0, 1]")
        if self.noise_temperature < 0.0:
            raise ValueError("noise_temperature must be >= 0")
        total = sum(w for _, w in self.k_weights)
        if not math.isclose(total, 1.0, abs_tol=1e-9):
            raise ValueError("k_weights must sum to 1")
        if self.length_dist[0] not in ("geometric", "uniform"):
            raise ValueError(f"unknown length distribution: {self.length_dist[0]!r}")

    def sample_lengths(self, rng, k: int) -> np.ndarray:
        kind = self.length_dist[0]
        if kind == "geometric":
            lengths = rng.geometric(self.length_dist[1], size=k)
        else:
            lo, hi = self.length_dist[1:]
            lengths = rng.integers(lo, hi + 1, size=k)
        return np.minimum(lengths, self.max_constituent_length)


def _random_constituent_tokens(rng, length, start, verb_index, deprel_head):
    """Projective constituent spanning [start, start+length): head uniform
    in the span, other tokens attach to their inward neighbor or straight
    to the head."""
    head_off = int(rng.integers(length))
    head_pos = start + head_off
    tokens = []
    for off in range(length):
        pos = start + off
        if off == head_off:
            tokens.append(Token(pos, f"w{pos}", verb_index, deprel_head))
        elif off < head_off:
            head = pos + 1 if rng.random() < 0.5 else head_pos
            tokens.append(Token(pos, f"w{pos}", head, "mod"))
        else:
            head = pos - 1 if rng.random() < 0.5 else head_pos
            tokens.append(Token(pos, f"w{pos}", head, "mod"))
    return tokens


def _pick_reference_order(plan: SentencePlan, spec: SyntheticSpec, rng) -> tuple:
    start = variants.order_random(plan, rng)
    if rng.random() >= spec.p_least_effort:
        return start
    if spec.noise_temperature == 0.0:
        return variants.least_effort_move(plan, start)
    # soft least-effort: move a length-weighted sampled constituent instead
    lengths = np.array([plan.preverbal[ci].length for ci in start], dtype=float)
    w = np.exp(-lengths / spec.noise_temperature)
    pick = int(rng.choice(len(start), p=w / w.sum()))
    moved = start[pick]
    return tuple(ci for ci in start if ci != moved) + (moved,)


def generate_synthetic_corpus(spec: SyntheticSpec, seed: int = 0) -> list:
    """Random projective verb-final sentences whose reference order follows
    the configured selection rule. Returns DependencyTrees."""
    ks = [k for k, _ in spec.k_weights]
    kw = [w for _, w in spec.k_weights]
    trees = []
    for i in range(spec.n_sentences):
        rng = derive_rng(seed, "synth", i)
        k = int(rng.choice(ks, p=kw))
        lengths = spec.sample_lengths(rng, k)
        verb_index = int(lengths.sum()) + 1
        tokens, start = [], 1
        for length in lengths:
            tokens.extend(_random_constituent_tokens(
                rng, int(length), start, verb_index, "arg"))
            start += int(length)
        tokens.append(Token(verb_index, f"w{verb_index}", 0, "root"))
        base = DependencyTree(tokens)
        plan = decompose(base)
        assert isinstance(plan, SentencePlan)
        order = _pick_reference_order(plan, spec, rng)
        trees.append(variants.linearize(plan, order))
    return trees
