"""Symbolic dynamics: alphabets, words, cylinder measures, and level sets.

Words are plain tuples of integer symbols ``1..#A`` (the empty tuple is the
empty word and the identity for concatenation).  A shift-invariant measure
assigns each finite word its cylinder mass; the two implemented families are
Bernoulli products and stationary Markov chains with strictly positive
entries, both of which decay slowly: one-step cylinder ratios are bounded
below by a constant ``c > 0``.

The level set of order ``n`` is the prefix-free family of words whose
cylinder measure first drops to ``c**n`` or below.  It partitions the shift
space up to measure zero, all members have comparable mass (within ``1/c``),
and its cardinality grows like ``c**-n``.  Expansion is breadth-first with
symbols in ascending order, which fixes a canonical, reproducible output
ordering; the expansion itself is vectorized level-by-level and shared (via
:func:`iter_level_frontiers`) with the statistics that walk the same tree
carrying extra per-node state.

Natural logarithms throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetError, InputError

WORD_BUDGET_DEFAULT = 10_000_000
ENTROPY_K_CAP = 20
_ENTROPY_NODE_BUDGET = 1 << 23


@dataclass(frozen=True)
class Alphabet:
    """Finite symbol set; symbols are identified with ``1..size``."""

    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 2:
            raise InputError(f"alphabet size must be an integer >= 2, got {self.size!r}")
        if self.size > 255:
            raise InputError("alphabet size above 255 is not supported")

    @property
    def symbols(self) -> range:
        return range(1, self.size + 1)


def validate_word(word, alphabet: Alphabet) -> tuple:
    """Return ``word`` as a tuple after checking every symbol is in range."""
    w = tuple(int(s) for s in word)
    for s in w:
        if not 1 <= s <= alphabet.size:
            raise InputError(f"symbol {s} outside alphabet 1..{alphabet.size}")
    return w


def word_to_string(word) -> str:
    """Digit-string form used in CSV output; alphabets above 9 do not fit."""
    if any(s > 9 for s in word):
        raise InputError("digit-string serialization requires alphabet size <= 9")
    return "".join(str(s) for s in word)


def word_from_string(text: str) -> tuple:
    return tuple(int(ch) for ch in text)


@dataclass(frozen=True)
class TailSequence:
    """Infinite symbol sequence given as an explicit prefix plus a period.

    ``symbol(k)`` is total and deterministic for every ``k >= 1``.
    """

    prefix: tuple = ()
    period: tuple = (1,)

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(s) for s in self.prefix))
        object.__setattr__(self, "period", tuple(int(s) for s in self.period))
        if len(self.period) == 0:
            raise InputError("tail sequence needs a nonempty period")

    @classmethod
    def constant(cls, symbol: int) -> "TailSequence":
        return cls((), (int(symbol),))

    def symbol(self, k: int) -> int:
        if k < 1:
            raise InputError("tail positions are 1-based")
        if k <= len(self.prefix):
            return self.prefix[k - 1]
        return self.period[(k - len(self.prefix) - 1) % len(self.period)]

    def first(self, k: int) -> tuple:
        return tuple(self.symbol(j) for j in range(1, k + 1))

    def shifted(self, by: int = 1) -> "TailSequence":
        """Tail with the first ``by`` symbols removed."""
        if by <= len(self.prefix):
            return TailSequence(self.prefix[by:], self.period)
        r = (by - len(self.prefix)) % len(self.period)
        return TailSequence((), self.period[r:] + self.period[:r])

    def validate(self, alphabet: Alphabet) -> None:
        for s in self.prefix + self.period:
            if not 1 <= s <= alphabet.size:
                raise InputError(f"tail symbol {s} outside alphabet 1..{alphabet.size}")


class SymbolicMeasure:
    """Common interface of the slowly decaying measures below."""

    alphabet: Alphabet

    def first_symbol_probs(self) -> np.ndarray:
        """Masses of the one-symbol cylinders, shape (#A,)."""
        raise NotImplementedError

    def transition_rows(self) -> np.ndarray:
        """Row ``i-1``: ratios m([a·j])/m([a]) for words ending in symbol i."""
        raise NotImplementedError


class BernoulliMeasure(SymbolicMeasure):
    """Product measure of a strictly positive probability vector."""

    def __init__(self, p: Sequence[float]):
        p = np.asarray(p, dtype=np.float64)
        if p.ndim != 1 or p.size < 2:
            raise InputError("Bernoulli measure needs a probability vector of length >= 2")
        if np.any(p <= 0.0):
            raise InputError("Bernoulli probabilities must be strictly positive")
        if abs(float(p.sum()) - 1.0) > 1e-12:
            raise InputError(f"Bernoulli probabilities sum to {p.sum()!r}, not 1")
        self.alphabet = Alphabet(p.size)
        self.p = p.copy()
        self.p.setflags(write=False)

    def __repr__(self):
        return f"BernoulliMeasure({self.p.tolist()})"

    def first_symbol_probs(self) -> np.ndarray:
        return self.p

    def transition_rows(self) -> np.ndarray:
        return np.broadcast_to(self.p, (self.p.size, self.p.size))


class MarkovMeasure(SymbolicMeasure):
    """Stationary Markov measure: row vector ``pi`` and transition matrix ``P``.

    All entries must be strictly positive and ``pi`` must actually be
    stationary for ``P`` (checked to 1e-9), which is what makes the measure
    shift-invariant by construction.
    """

    def __init__(self, pi: Sequence[float], P: Sequence[Sequence[float]]):
        pi = np.asarray(pi, dtype=np.float64)
        P = np.asarray(P, dtype=np.float64)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] < 2:
            raise InputError("transition matrix must be square with size >= 2")
        if pi.shape != (P.shape[0],):
            raise InputError("stationary vector length must match transition matrix")
        if np.any(pi <= 0.0) or np.any(P <= 0.0):
            raise InputError("Markov measure requires strictly positive entries")
        if abs(float(pi.sum()) - 1.0) > 1e-12:
            raise InputError(f"stationary vector sums to {pi.sum()!r}, not 1")
        rowsums = P.sum(axis=1)
        if np.any(np.abs(rowsums - 1.0) > 1e-12):
            raise InputError("transition matrix rows must sum to 1 within 1e-12")
        if np.max(np.abs(pi @ P - pi)) > 1e-9:
            raise InputError("pi is not stationary for P (|pi P - pi| > 1e-9)")
        self.alphabet = Alphabet(P.shape[0])
        self.pi = pi.copy()
        self.P = P.copy()
        self.pi.setflags(write=False)
        self.P.setflags(write=False)

    @classmethod
    def from_transition(cls, P: Sequence[Sequence[float]]) -> "MarkovMeasure":
        """Build the stationary measure of ``P`` via its left Perron vector."""
        P = np.asarray(P, dtype=np.float64)
        vals, vecs = np.linalg.eig(P.T)
        k = int(np.argmin(np.abs(vals - 1.0)))
        pi = np.real(vecs[:, k])
        pi = np.abs(pi) / np.abs(pi).sum()
        # polish to machine-precision stationarity
        for _ in range(50):
            pi = pi @ P
            pi = pi / pi.sum()
        return cls(pi, P)

    def __repr__(self):
        return f"MarkovMeasure(pi={self.pi.tolist()}, P={self.P.tolist()})"

    def first_symbol_probs(self) -> np.ndarray:
        return self.pi

    def transition_rows(self) -> np.ndarray:
        return self.P


def cylinder_measure(m: SymbolicMeasure, word) -> float:
    """Mass of the cylinder [word]; 1 for the empty word."""
    w = validate_word(word, m.alphabet)
    if not w:
        return 1.0
    first = m.first_symbol_probs()
    rows = m.transition_rows()
    value = float(first[w[0] - 1])
    for prev, cur in zip(w, w[1:]):
        value *= float(rows[prev - 1, cur - 1])
    return value


def slow_decay_constant(m: SymbolicMeasure) -> float:
    """Lower bound c for all one-step cylinder ratios m([a·i])/m([a]).

    Bernoulli: the smallest probability.  Markov: the smallest transition
    entry, which also bounds the first-symbol ratios because each stationary
    mass is a convex combination of a transition column.
    """
    if isinstance(m, BernoulliMeasure):
        return float(np.min(m.p))
    if isinstance(m, MarkovMeasure):
        return float(np.min(m.P))
    raise InputError(f"unsupported measure type {type(m).__name__}")


def entropy(m: SymbolicMeasure) -> float:
    """Measure-theoretic entropy in nats (closed form)."""
    if isinstance(m, BernoulliMeasure):
        return float(-np.sum(m.p * np.log(m.p)))
    if isinstance(m, MarkovMeasure):
        return float(-np.sum(m.pi[:, None] * m.P * np.log(m.P)))
    raise InputError(f"unsupported measure type {type(m).__name__}")


def entropy_estimate(m: SymbolicMeasure, k: int, k_cap: int = ENTROPY_K_CAP) -> float:
    """Finite-k entropy quotient ``-sum m([a]) log m([a]) / k`` over A^k.

    The sum is enumerated (vectorized, one array per depth); ``k`` is capped
    and the #A**k term count is bounded to keep the enumeration honest but
    affordable.  Exact for Bernoulli at every k; O(1/k) close for Markov.
    """
    if k < 1:
        raise InputError("k must be >= 1")
    if k > k_cap:
        raise BudgetError(f"entropy_estimate depth cap ({k_cap}) exceeded by k={k}")
    A = m.alphabet.size
    if A ** k > _ENTROPY_NODE_BUDGET:
        raise BudgetError(
            f"entropy_estimate node budget ({_ENTROPY_NODE_BUDGET}) exceeded: #A^k = {A ** k}")
    rows = np.asarray(m.transition_rows())
    meas = np.asarray(m.first_symbol_probs(), dtype=np.float64)
    for depth in range(2, k + 1):
        last_idx = np.arange(meas.size) % A  # lexicographic order: last symbol cycles fastest
        meas = (meas[:, None] * rows[last_idx]).reshape(-1)
    return float(-(meas * np.log(meas)).sum() / k)


@dataclass(frozen=True)
class LevelFrontier:
    """One breadth-first depth of the cylinder-tree expansion of L_{m,n}.

    Arrays describe all children generated at this depth, parent-major and
    symbol-ascending (the canonical order), i.e. ``parent_idx`` is always
    ``repeat(arange(n_parents), #A)`` and ``symbols`` is ``tile(1..#A, ...)``;
    consumers may rely on that layout.  ``parent_idx`` indexes the previous
    depth's *active* nodes; children with ``emit_mask`` set are level set
    members, the rest stay active (``active_idx`` selects them).
    """

    depth: int
    symbols: np.ndarray
    parent_idx: np.ndarray
    measures: np.ndarray
    emit_mask: np.ndarray
    active_idx: np.ndarray


def iter_level_frontiers(m: SymbolicMeasure, n: int,
                         word_budget: int = WORD_BUDGET_DEFAULT) -> Iterator[LevelFrontier]:
    """Drive the breadth-first expansion behind :func:`level_set`.

    Consumers carry their own per-active-node state: gather with
    ``parent_idx``, update with ``symbols``/``measures``, keep ``active_idx``.
    """
    if n < 1:
        raise InputError("level index n must be >= 1")
    threshold = slow_decay_constant(m) ** n
    A = m.alphabet.size
    rows = np.asarray(m.transition_rows())
    symbols_tile = np.arange(1, A + 1, dtype=np.int64)

    active_meas = np.array([1.0])
    active_last = None  # None marks the root (empty word)
    depth = 0
    emitted = 0
    while active_meas.size:
        depth += 1
        n_par = active_meas.size
        if active_last is None:
            child_meas = np.asarray(m.first_symbol_probs(), dtype=np.float64).copy()
        else:
            child_meas = (active_meas[:, None] * rows[active_last - 1]).reshape(-1)
        symbols = np.tile(symbols_tile, n_par)
        parent_idx = np.repeat(np.arange(n_par, dtype=np.int64), A)
        emit = child_meas <= threshold
        active_idx = np.flatnonzero(~emit)
        emitted += int(emit.sum())
        if emitted + active_idx.size > word_budget:
            raise BudgetError(
                f"level-set word budget ({word_budget}) exceeded at depth {depth} "
                f"(n={n}, emitted so far {emitted})")
        yield LevelFrontier(depth, symbols, parent_idx, child_meas, emit, active_idx)
        active_meas = child_meas[active_idx]
        active_last = symbols[active_idx]


@dataclass(frozen=True)
class LevelSet:
    """Prefix-free word family whose cylinder measure first drops to c**n.

    ``words`` are in the canonical breadth-first order (shorter first, then
    lexicographic); ``measures`` aligns with them.
    """

    n: int
    words: tuple
    measures: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.words)

    @property
    def mass(self) -> float:
        return float(self.measures.sum())

    @property
    def measure_bounds(self) -> tuple:
        return (float(self.measures.min()), float(self.measures.max()))

    @property
    def lengths(self) -> np.ndarray:
        return np.fromiter((len(w) for w in self.words), dtype=np.int64, count=len(self.words))


@dataclass(frozen=True)
class LevelSetArrays:
    """Array form of a level set: zero-padded word matrix plus measures.

    ``parent_measures`` are the masses of the words minus their last symbol,
    so the defining sandwich is checkable vectorized; a full set of words
    passing it is automatically prefix-free (prefix measures only grow, so a
    proper prefix of a member would sit strictly above the threshold).
    """

    n: int
    words: np.ndarray      # (N, max_len) uint8, rows zero-padded
    lengths: np.ndarray    # (N,)
    measures: np.ndarray   # (N,)
    parent_measures: np.ndarray  # (N,)

    def __len__(self) -> int:
        return self.words.shape[0]

    def to_level_set(self) -> LevelSet:
        rows = self.words.tolist()
        words = tuple(tuple(row[: ln]) for row, ln in zip(rows, self.lengths.tolist()))
        return LevelSet(n=self.n, words=words, measures=self.measures)


def _expand_arrays(m: SymbolicMeasure, n: int, word_budget: int,
                   keep_filter=None) -> LevelSetArrays:
    """Shared materialization for level_set / restricted_level_set."""
    A = m.alphabet.size
    chunks: list = []       # (word block, measures, parent measures) per depth
    active_words = np.zeros((1, 0), dtype=np.uint8)
    active_meas = np.ones(1)
    state = None  # per-active auxiliary state from keep_filter
    for fr in iter_level_frontiers(m, n, word_budget):
        child_words = np.concatenate(
            [active_words[fr.parent_idx], fr.symbols[:, None].astype(np.uint8)], axis=1)
        if keep_filter is None:
            keep = None
        else:
            keep, state = keep_filter(fr, state)
        emitted = fr.emit_mask if keep is None else (fr.emit_mask & keep)
        if emitted.any():
            chunks.append((child_words[emitted], fr.measures[emitted],
                           np.repeat(active_meas, A)[emitted]))
        active_words = child_words[fr.active_idx]
        active_meas = fr.measures[fr.active_idx]

    total = sum(c[0].shape[0] for c in chunks)
    max_len = max((c[0].shape[1] for c in chunks), default=0)
    words = np.zeros((total, max_len), dtype=np.uint8)
    lengths = np.zeros(total, dtype=np.int64)
    at = 0
    for block, _, _ in chunks:
        words[at: at + block.shape[0], : block.shape[1]] = block
        lengths[at: at + block.shape[0]] = block.shape[1]
        at += block.shape[0]
    meas = np.concatenate([c[1] for c in chunks]) if chunks else np.zeros(0)
    parents = np.concatenate([c[2] for c in chunks]) if chunks else np.zeros(0)
    for a in (words, lengths, meas, parents):
        a.setflags(write=False)
    return LevelSetArrays(n=n, words=words, lengths=lengths, measures=meas,
                          parent_measures=parents)


def level_set_arrays(m: SymbolicMeasure, n: int,
                     word_budget: int = WORD_BUDGET_DEFAULT) -> LevelSetArrays:
    """Array form of L_{m,n}; cheaper than tuple materialization at scale."""
    return _expand_arrays(m, n, word_budget)


def level_set(m: SymbolicMeasure, n: int,
              word_budget: int = WORD_BUDGET_DEFAULT) -> LevelSet:
    """Level set L_{m,n}: breadth-first expansion of the cylinder tree.

    A word is emitted exactly when its measure first drops to ``c**n`` or
    below; its parent's measure is still above the threshold, so the defining
    sandwich holds and the members are pairwise prefix-incomparable.
    """
    return _expand_arrays(m, n, word_budget).to_level_set()


def restricted_level_set(m: SymbolicMeasure, n: int, eps1: float, C2: float,
                         word_budget: int = WORD_BUDGET_DEFAULT) -> LevelSet:
    """Members of L_{m,n} obeying the two-sided entropy-decay bound.

    Keeps a word iff every prefix of length k satisfies
    ``exp(-k (h + eps1)) / C2 <= m([a_1..a_k]) <= C2 exp(-k (h - eps1))``.
    The returned set's ``mass`` is the retained fraction of the full level
    set's unit mass.
    """
    if eps1 <= 0:
        raise InputError("eps1 must be positive")
    if C2 <= 0:
        raise InputError("C2 must be positive")
    h = entropy(m)

    def keep_filter(fr: LevelFrontier, good_so_far):
        k = fr.depth
        lo = np.exp(-k * (h + eps1)) / C2
        hi = C2 * np.exp(-k * (h - eps1))
        good = (fr.measures >= lo) & (fr.measures <= hi)
        if good_so_far is not None:
            good &= good_so_far[fr.parent_idx]
        return good, good[fr.active_idx]

    return _expand_arrays(m, n, word_budget, keep_filter).to_level_set()


def is_prefix_free(words) -> bool:
    """True iff no word is a prefix of another (sorted-adjacent check)."""
    ws = sorted(words)
    return not any(b[: len(a)] == a for a, b in zip(ws, ws[1:]))


def write_levelset_csv(ls: LevelSet, path, header_comment: str | None = None) -> None:
    """CSV with columns ``word,length,measure``; words as digit strings."""
    lines = []
    if header_comment:
        lines.append(f"# {header_comment}")
    lines.append("word,length,measure")
    for w, mu in zip(ls.words, ls.measures):
        lines.append(f"{word_to_string(w)},{len(w)},{float(mu)!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
