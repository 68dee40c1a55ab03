"""Dependency treebank ingestion and tree structure utilities.

Supports CoNLL-U (10 tab-separated columns) and a minimal 4-column TSV
format (index, form, head, deprel). Malformed sentence blocks are skipped
with a diagnostic instead of aborting the run.
"""

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

__all__ = [
    "Token",
    "DependencyTree",
    "Diagnostic",
    "parse_corpus",
    "parse_conllu",
    "parse_tsv",
    "to_conllu",
    "to_tsv",
    "is_projective",
    "subtree_yield",
    "strip_punct",
    "NonProjectiveError",
]

PUNCT_DEPRELS = frozenset({"punct", "rsym", "SYM"})


class NonProjectiveError(ValueError):
    """Raised when an operation requiring projectivity gets a non-projective tree."""


@dataclass(frozen=True)
class Token:
    index: int          # 1-based sentence position
    form: str
    head: int           # 0 for root, else 1-based index of the head token
    deprel: str

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"token index must be >= 1, got {self.index}")
        if self.head < 0:
            raise ValueError(f"head must be >= 0, got {self.head}")
        if self.head == self.index:
            raise ValueError(f"token {self.index} is its own head")


@dataclass(frozen=True)
class Diagnostic:
    line: int
    reason: str


class DependencyTree:
    """A single parsed sentence. Immutable after construction.

    Validates that token indices are contiguous 1..n, exactly one token has
    head 0, and head links form a connected acyclic structure.
    """

    def __init__(self, tokens: Iterable[Token]):
        tokens = tuple(tokens)
        reason = _validate(tokens)
        if reason is not None:
            raise ValueError(reason)
        self._tokens = tokens
        self._root = next(t.index for t in tokens if t.head == 0)
        self._children: Optional[dict] = None

    @property
    def tokens(self) -> tuple:
        return self._tokens

    @property
    def root_index(self) -> int:
        return self._root

    def __len__(self) -> int:
        return len(self._tokens)

    def __eq__(self, other) -> bool:
        return isinstance(other, DependencyTree) and self._tokens == other._tokens

    def __hash__(self) -> int:
        return hash(self._tokens)

    def __repr__(self) -> str:
        words = " ".join(t.form for t in self._tokens)
        return f"DependencyTree({words!r})"

    def token(self, index: int) -> Token:
        return self._tokens[index - 1]

    def children(self, index: int) -> list:
        """Dependent indices of `index`, in linear order."""
        if self._children is None:
            table = {t.index: [] for t in self._tokens}
            for t in self._tokens:
                if t.head != 0:
                    table[t.head].append(t.index)
            self._children = table
        return self._children[index]

    def arcs(self) -> Iterator[tuple]:
        """(head, dependent) pairs, excluding the artificial root arc."""
        for t in self._tokens:
            if t.head != 0:
                yield t.head, t.index


def _validate(tokens) -> Optional[str]:
    if not tokens:
        return "empty sentence"
    n = len(tokens)
    if [t.index for t in tokens] != list(range(1, n + 1)):
        return "token indices not contiguous 1..n"
    roots = [t.index for t in tokens if t.head == 0]
    if len(roots) == 0:
        return "no root"
    if len(roots) > 1:
        return "multiple roots"
    for t in tokens:
        if t.head > n:
            return f"head {t.head} out of range for token {t.index}"
    # acyclicity: every token must reach the root along head links
    for t in tokens:
        seen = set()
        cur = t.index
        while cur != 0:
            if cur in seen:
                return "cycle in head links"
            seen.add(cur)
            cur = tokens[cur - 1].head
    return None


# ---------------------------------------------------------------------------
# parsing / serialization

def parse_corpus(source, format: str = "conllu"):
    """Parse a corpus from a string or line iterable.

    Returns (trees, diagnostics). Malformed blocks are skipped with a
    Diagnostic recording the block's first line number and the reason.
    """
    if format == "conllu":
        return parse_conllu(source)
    if format in ("tsv", "tsv-minimal"):
        return parse_tsv(source)
    raise ValueError(f"unknown corpus format: {format!r}")


def _iter_blocks(source):
    """Yield (first_line_number, list of (lineno, line)) per sentence block."""
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = [ln.rstrip("\n") for ln in source]
    block, start = [], None
    for lineno, line in enumerate(lines, start=1):
        if line.strip() == "":
            if block:
                yield start, block
                block, start = [], None
        else:
            if start is None:
                start = lineno
            block.append((lineno, line))
    if block:
        yield start, block


def _is_int(s: str) -> bool:
    try:
        int(s)
        return True
    except ValueError:
        return False


def parse_conllu(source):
    trees, diagnostics = [], []
    for start, block in _iter_blocks(source):
        tokens = []
        bad = None
        for lineno, line in block:
            if line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                bad = Diagnostic(lineno, f"expected 10 columns, got {len(cols)}")
                break
            idx, form, head = cols[0], cols[1], cols[6]
            # multiword-token ranges (i-j) and empty nodes (i.1) are skipped
            if not _is_int(idx):
                continue
            if not _is_int(head):
                bad = Diagnostic(lineno, f"non-integer head {head!r}")
                break
            try:
                tokens.append(Token(int(idx), form, int(head), cols[7]))
            except ValueError as e:
                bad = Diagnostic(lineno, str(e))
                break
        if bad is not None:
            diagnostics.append(bad)
            continue
        reason = _validate(tuple(tokens))
        if reason is not None:
            diagnostics.append(Diagnostic(start, reason))
            continue
        trees.append(DependencyTree(tokens))
    return trees, diagnostics


def parse_tsv(source):
    """Minimal 4-column TSV: index, form, head, deprel. Column order is fixed."""
    trees, diagnostics = [], []
    for start, block in _iter_blocks(source):
        tokens = []
        bad = None
        for lineno, line in block:
            if line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 4:
                bad = Diagnostic(lineno, f"expected 4 columns, got {len(cols)}")
                break
            idx, form, head, deprel = cols
            if not _is_int(idx) or not _is_int(head):
                bad = Diagnostic(lineno, "non-integer index or head")
                break
            try:
                tokens.append(Token(int(idx), form, int(head), deprel))
            except ValueError as e:
                bad = Diagnostic(lineno, str(e))
                break
        if bad is not None:
            diagnostics.append(bad)
            continue
        reason = _validate(tuple(tokens))
        if reason is not None:
            diagnostics.append(Diagnostic(start, reason))
            continue
        trees.append(DependencyTree(tokens))
    return trees, diagnostics


def to_conllu(tree: DependencyTree, sent_id: Optional[str] = None) -> str:
    lines = []
    if sent_id is not None:
        lines.append(f"# sent_id = {sent_id}")
    for t in tree.tokens:
        lines.append(
            "\t".join([str(t.index), t.form, "_", "_", "_", "_",
                       str(t.head), t.deprel, "_", "_"])
        )
    return "\n".join(lines) + "\n"


def to_tsv(tree: DependencyTree) -> str:
    lines = ["\t".join([str(t.index), t.form, str(t.head), t.deprel])
             for t in tree.tokens]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# structure

def is_projective(tree: DependencyTree) -> bool:
    """True iff every subtree's yield is a contiguous span."""
    n = len(tree)
    lo = list(range(n + 1))
    hi = list(range(n + 1))
    size = [1] * (n + 1)
    # bottom-up: process tokens in decreasing depth order
    depth = [0] * (n + 1)
    for t in tree.tokens:
        d, cur = 0, t.index
        while cur != 0:
            d += 1
            cur = tree.token(cur).head
        depth[t.index] = d
    order = sorted(range(1, n + 1), key=lambda i: -depth[i])
    for i in order:
        h = tree.token(i).head
        if h != 0:
            lo[h] = min(lo[h], lo[i])
            hi[h] = max(hi[h], hi[i])
            size[h] += size[i]
    return all(hi[i] - lo[i] + 1 == size[i] for i in range(1, n + 1))


def subtree_yield(tree: DependencyTree, head: int) -> tuple:
    """[min, max] token positions of head's transitive-dependent closure.

    Only meaningful on projective trees, where the yield is gap-free.
    """
    if not is_projective(tree):
        raise NonProjectiveError("subtree_yield requires a projective tree")
    lo = hi = head
    stack = [head]
    while stack:
        cur = stack.pop()
        lo = min(lo, cur)
        hi = max(hi, cur)
        stack.extend(tree.children(cur))
    return lo, hi


def strip_punct(tree: DependencyTree, deprels=PUNCT_DEPRELS) -> DependencyTree:
    """Remove leaf tokens with a punctuation deprel and reindex.

    Applied iteratively so punctuation attached to punctuation also goes.
    Raises if removal would orphan the tree (punctuation root).
    """
    tokens = list(tree.tokens)
    while True:
        has_dep = {t.head for t in tokens}
        drop = {t.index for t in tokens
                if t.deprel in deprels and t.index not in has_dep and t.head != 0}
        if not drop:
            break
        tokens = [t for t in tokens if t.index not in drop]
    remap = {t.index: i + 1 for i, t in enumerate(tokens)}
    remap[0] = 0
    return DependencyTree(
        Token(remap[t.index], t.form, remap[t.head], t.deprel) for t in tokens
    )
