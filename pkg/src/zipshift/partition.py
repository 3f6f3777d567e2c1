"""Finite-window partitions of the zip shift space and their entropies.

A :class:`WindowPartition` over the window ``[lo, hi)`` labels every word over
that window with a class id.  Words are enumerated in lexicographic order
(last index varies fastest); symbol ``k`` of the positive alphabet is digit
``k`` at a non-negative index, and likewise for the negative alphabet.
Labels are kept canonical (class ids in order of first appearance), so two
partitions over the same window are equal iff their label arrays are equal.

Because every weight is strictly positive, every word has positive measure
and a partition of the window's words is a measure-theoretic partition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .spec import BudgetExceeded, Symbol, ZipShiftSpec
from .symbolic import GeneralizedCylinder
from .verdict import FAIL, PASS, Verdict

__all__ = [
    "DEFAULT_BUDGET",
    "Window",
    "WindowPartition",
    "PreconditionError",
    "cylinder_partition",
    "cylinders_partition",
    "trivial_partition",
    "cylinder_mask",
    "correfine",
    "pullback_partition",
    "dynamical_correfinement",
    "same_partition",
    "partition_entropy",
    "range_partition_entropy",
    "verify_correfinement_lemma",
    "ApproximantRow",
    "KSEntropy",
    "ks_entropy",
]

DEFAULT_BUDGET = 2_000_000


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Window:
    """Indices ``lo, ..., hi - 1``."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError(f"empty window needs lo <= hi, got [{self.lo}, {self.hi})")

    @property
    def size(self) -> int:
        return self.hi - self.lo

    @property
    def indices(self) -> range:
        return range(self.lo, self.hi)

    def __contains__(self, other: "Window") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def union(self, other: "Window") -> "Window":
        if other.size == 0:
            return self
        if self.size == 0:
            return other
        return Window(min(self.lo, other.lo), max(self.hi, other.hi))

    def radices(self, spec: ZipShiftSpec) -> list[int]:
        return [spec.l if i >= 0 else spec.m for i in self.indices]

    def word_count(self, spec: ZipShiftSpec) -> int:
        return math.prod(self.radices(spec))

    def __repr__(self):
        return f"[{self.lo}, {self.hi})"


def _strides(radices: Sequence[int]) -> list[int]:
    strides = [1] * len(radices)
    for p in range(len(radices) - 2, -1, -1):
        strides[p] = strides[p + 1] * radices[p + 1]
    return strides


def _digit(position: int, radices: Sequence[int], n_words: int) -> np.ndarray:
    """Digit at ``position`` for every word in enumeration order."""
    stride = _strides(radices)[position]
    return (np.arange(n_words, dtype=np.int64) // stride) % radices[position]


def _canonical(labels: np.ndarray) -> np.ndarray:
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inverse.reshape(-1)]


def _require_budget(spec: ZipShiftSpec, window: Window, budget: int) -> int:
    n = window.word_count(spec)
    if n > budget:
        raise BudgetExceeded(n, budget, what=f"window {window!r}")
    return n


class WindowPartition:
    """A partition of the zip shift space determined by the indices in a window."""

    __slots__ = ("spec", "window", "labels", "n_classes", "__dict__")

    def __init__(self, spec: ZipShiftSpec, window: Window, labels, *, canonical: bool = False):
        labels = np.asarray(labels, dtype=np.int64)
        if labels.shape != (window.word_count(spec),):
            raise ValueError(
                f"need one label per word of {window!r} ({window.word_count(spec)}), got {labels.shape}"
            )
        if not canonical:
            labels = _canonical(labels)
        labels.setflags(write=False)
        self.spec = spec
        self.window = window
        self.labels = labels
        self.n_classes = int(labels.max()) + 1 if len(labels) else 0

    @classmethod
    def from_classes(
        cls, spec: ZipShiftSpec, window: Window, classes: Iterable[Iterable[Sequence[Symbol]]]
    ) -> "WindowPartition":
        """Build from explicit word sets; they must be disjoint and cover the window."""
        radices = window.radices(spec)
        strides = _strides(radices)
        n = window.word_count(spec)
        labels = np.full(n, -1, dtype=np.int64)
        for c, words in enumerate(classes):
            empty = True
            for w in words:
                if len(w) != window.size:
                    raise ValueError(f"word {w!r} does not fit window {window!r}")
                idx = 0
                for p, (i, s) in enumerate(zip(window.indices, w)):
                    if s not in spec.alphabet_at(i):
                        raise ValueError(f"symbol {s!r} not allowed at index {i}")
                    idx += spec.index_of(s) * strides[p]
                if labels[idx] != -1:
                    raise ValueError(f"word {w!r} appears in two classes")
                labels[idx] = c
                empty = False
            if empty:
                raise ValueError("empty class")
        if (labels < 0).any():
            raise ValueError("classes do not cover every word of the window")
        return cls(spec, window, labels)

    def word(self, index: int) -> tuple[Symbol, ...]:
        radices = self.window.radices(self.spec)
        out = []
        for i, r, st in zip(self.window.indices, radices, _strides(radices)):
            out.append(self.spec.alphabet_at(i)[(index // st) % r])
        return tuple(out)

    def class_word_indices(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.labels == c)

    def classes(self) -> list[frozenset[tuple[Symbol, ...]]]:
        """Classes as explicit word sets, in canonical order."""
        out: list[set] = [set() for _ in range(self.n_classes)]
        for idx, c in enumerate(self.labels):
            out[c].add(self.word(idx))
        return [frozenset(s) for s in out]

    @cached_property
    def _word_numerators(self) -> np.ndarray:
        plus, minus = self.spec.numerators
        d = self.spec.common_denominator
        n = len(self.labels)
        radices = self.window.radices(self.spec)
        dtype = np.int64 if d ** self.window.size < 2**62 else object
        w = np.ones(n, dtype=dtype)
        for p, i in enumerate(self.window.indices):
            nums = np.array(plus if i >= 0 else minus, dtype=dtype)
            w = w * nums[_digit(p, radices, n)]
        return w

    @cached_property
    def class_numerators(self) -> np.ndarray:
        """Class measures times ``common_denominator ** window.size``."""
        order = np.argsort(self.labels, kind="stable")
        starts = np.searchsorted(self.labels[order], np.arange(self.n_classes))
        return np.add.reduceat(self._word_numerators[order], starts)

    @cached_property
    def class_measures(self) -> tuple[Fraction, ...]:
        den = self.spec.common_denominator ** self.window.size
        return tuple(Fraction(int(s), den) for s in self.class_numerators)

    def expand(self, window: Window) -> "WindowPartition":
        """The same partition, described over a larger window."""
        if self.window not in window:
            raise ValueError(f"{window!r} does not contain {self.window!r}")
        if window == self.window:
            return self
        n = window.word_count(self.spec)
        new_radices = window.radices(self.spec)
        old_strides = _strides(self.window.radices(self.spec))
        old_idx = np.zeros(n, dtype=np.int64)
        for p, i in enumerate(self.window.indices):
            old_idx += _digit(i - window.lo, new_radices, n) * old_strides[p]
        return WindowPartition(self.spec, window, self.labels[old_idx])

    def __eq__(self, other):
        if not isinstance(other, WindowPartition):
            return NotImplemented
        return same_partition(self, other)

    __hash__ = None

    def __repr__(self):
        return f"WindowPartition(window={self.window!r}, classes={self.n_classes})"


def cylinder_partition(spec: ZipShiftSpec, i: int) -> WindowPartition:
    """The partition of index ``i``: one class per symbol allowed there."""
    window = Window(i, i + 1)
    return WindowPartition(spec, window, np.arange(window.word_count(spec)), canonical=True)


def cylinders_partition(
    spec: ZipShiftSpec, first: int, last: int, budget: int = DEFAULT_BUDGET
) -> WindowPartition:
    """All word cylinders over indices ``first..last`` (inclusive), built directly."""
    window = Window(first, last + 1)
    n = _require_budget(spec, window, budget)
    return WindowPartition(spec, window, np.arange(n), canonical=True)


def trivial_partition(spec: ZipShiftSpec) -> WindowPartition:
    return WindowPartition(spec, Window(0, 0), np.zeros(1), canonical=True)


def cylinder_mask(c: GeneralizedCylinder, p: WindowPartition) -> np.ndarray:
    """Boolean mask over ``p``'s words: which of them lie in cylinder ``c``."""
    spec, window = p.spec, p.window
    n = len(p.labels)
    radices = window.radices(spec)
    mask = np.ones(n, dtype=bool)
    for i, allowed in c.constraints.items():
        if not window.lo <= i < window.hi:
            raise ValueError(f"constraint at {i} lies outside {window!r}")
        ok = np.zeros(radices[i - window.lo], dtype=bool)
        ok[[spec.index_of(s) for s in allowed]] = True
        mask &= ok[_digit(i - window.lo, radices, n)]
    return mask


def correfine(parts: Sequence[WindowPartition], budget: int = DEFAULT_BUDGET) -> WindowPartition:
    """Common refinement: classes are the non-empty intersections."""
    if not parts:
        raise ValueError("correfine needs at least one partition")
    spec = parts[0].spec
    window = parts[0].window
    for p in parts[1:]:
        if p.spec is not spec and p.spec != spec:
            raise ValueError("partitions of different zip shifts")
        window = window.union(p.window)
    _require_budget(spec, window, budget)
    key = None
    for p in parts:
        lab = p.expand(window).labels
        if key is None:
            key = lab
        else:
            key = np.unique(key * p.n_classes + lab, return_inverse=True)[1].reshape(-1)
    return WindowPartition(spec, window, key)


def pullback_partition(
    spec: ZipShiftSpec, p: WindowPartition, j: int, budget: int = DEFAULT_BUDGET
) -> WindowPartition:
    """Preimage partition under ``j`` steps of the zip shift.

    A word over ``[lo + j, hi + j)`` lies in the preimage of the class of the
    word obtained by shifting it back, where positions landing on indices
    ``-j..-1`` read the phi-image of their positive symbol.
    """
    if j < 0:
        raise ValueError("j must be non-negative")
    if j == 0:
        return p
    old = p.window
    window = Window(old.lo + j, old.hi + j)
    n = _require_budget(spec, window, budget)
    new_radices = window.radices(spec)
    old_strides = _strides(old.radices(spec))
    phi = spec.phi_index
    old_idx = np.zeros(n, dtype=np.int64)
    for q, i_new in enumerate(window.indices):
        d = _digit(q, new_radices, n)
        if -j <= i_new - j <= -1:
            d = phi[d]
        old_idx += d * old_strides[q]
    return WindowPartition(spec, window, p.labels[old_idx])


def dynamical_correfinement(
    spec: ZipShiftSpec, p: WindowPartition, k: int, budget: int = DEFAULT_BUDGET
) -> WindowPartition:
    """Correfinement of the pullbacks of ``p`` by ``0, ..., k - 1`` steps."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return correfine([pullback_partition(spec, p, j, budget) for j in range(k)], budget)


def _aligned(p: WindowPartition, q: WindowPartition) -> tuple[WindowPartition, WindowPartition]:
    window = p.window.union(q.window)
    return p.expand(window), q.expand(window)


def same_partition(p: WindowPartition, q: WindowPartition) -> bool:
    a, b = _aligned(p, q)
    return bool(np.array_equal(a.labels, b.labels))


def _first_mismatch(p: WindowPartition, q: WindowPartition) -> str | None:
    a, b = _aligned(p, q)
    diff = np.flatnonzero(a.labels != b.labels)
    if not len(diff):
        return None
    idx = int(diff[0])
    ca, cb = int(a.labels[idx]), int(b.labels[idx])
    wa = a.class_word_indices(ca)
    wb = b.class_word_indices(cb)
    only = np.setxor1d(wa, wb)
    example = a.word(int(only[0])) if len(only) else a.word(idx)
    fmt = lambda w: "".join(s.name for s in w)  # noqa: E731
    return (
        f"over {a.window!r}: class of {fmt(a.word(idx))} has {len(wa)} words in the first "
        f"partition and {len(wb)} in the second; e.g. {fmt(example)} is in only one"
    )


def partition_entropy(spec: ZipShiftSpec, p: WindowPartition) -> float:
    """Sum of ``-mu log mu`` over classes, in nats."""
    sums = p.class_numerators
    if sums.dtype != object:
        den = float(spec.common_denominator) ** p.window.size
        mu = sums[sums > 0] / den
        return math.fsum(-mu * np.log(mu)) + 0.0  # no -0.0
    terms = []
    for mu in p.class_measures:
        if mu:
            x = float(mu)
            terms.append(-x * math.log(x))
    return math.fsum(terms)


def range_partition_entropy(spec: ZipShiftSpec, n: int, n_prime: int) -> float:
    """Entropy of the cylinders over ``-n .. n_prime - 1`` from the one-index entropies."""
    if n < 0 or n_prime < 0 or n + n_prime < 1:
        raise ValueError("need n, n_prime >= 0 and n + n_prime >= 1")
    h0 = partition_entropy(spec, cylinder_partition(spec, 0))
    h1 = partition_entropy(spec, cylinder_partition(spec, -1))
    return n * h1 + n_prime * h0


def verify_correfinement_lemma(spec: ZipShiftSpec, n: int, k: int, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Check by enumeration that ``k`` dynamical refinements of the cylinders
    over ``-n .. n-1`` give exactly the cylinders over ``-n .. n+k-2``.

    Raises
    ------
    PreconditionError
        ``n < 1`` or ``k < 2n``.
    BudgetExceeded
        The window ``[-n, n+k-1)`` has more than ``budget`` words.
    """
    if n < 1 or k < 2 * n:
        raise PreconditionError(f"need n >= 1 and k >= 2n, got n={n}, k={k}")
    _require_budget(spec, Window(-n, n + k - 1), budget)
    p_n = correfine([cylinder_partition(spec, i) for i in range(-n, n)], budget)
    refined = dynamical_correfinement(spec, p_n, k, budget)
    direct = cylinders_partition(spec, -n, n + k - 2, budget)
    name = f"correfinement_lemma(n={n},k={k})"
    checked = len(direct.labels)
    bad = _first_mismatch(refined, direct)
    if bad is not None:
        return Verdict(name, FAIL, checked, counterexample=bad)
    return Verdict(name, PASS, checked, detail=f"{direct.n_classes} classes over {direct.window!r}")


@dataclass(frozen=True)
class ApproximantRow:
    n: int
    k: int
    h: float
    closed_form: float
    error_bound: float
    enumerated: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "h_nk": self.h,
            "closed_form": self.closed_form,
            "error_bound": self.error_bound,
            "enumerated": self.enumerated,
        }


@dataclass(frozen=True)
class KSEntropy:
    value: float
    table: tuple[ApproximantRow, ...]


def ks_entropy(
    spec: ZipShiftSpec,
    pairs: Iterable[tuple[int, int]] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> KSEntropy:
    """Metric entropy of the zip shift, with finite approximants.

    The value is the entropy of the index-0 partition.  Each table row holds
    ``H(P_n^k) / k`` where ``P_n`` is the cylinder partition over ``-n..n-1``;
    it is computed by enumerating the dynamical correfinement when the window
    fits in ``budget`` and otherwise taken from the closed form
    ``(n H(C_-1) + (n+k-1) H(C_0)) / k`` (``enumerated`` is then False).
    ``error_bound`` is ``(n H(C_-1) + (n-1) H(C_0)) / k``.
    """
    h0 = partition_entropy(spec, cylinder_partition(spec, 0))
    h1 = partition_entropy(spec, cylinder_partition(spec, -1))
    if pairs is None:
        pairs = [(n, k) for n in (1, 2) for k in range(2 * n, 2 * n + 4)]
    rows = []
    for n, k in pairs:
        closed = (n * h1 + (n + k - 1) * h0) / k
        bound = (n * h1 + (n - 1) * h0) / k
        try:
            p_n = cylinders_partition(spec, -n, n - 1, budget)
            h = partition_entropy(spec, dynamical_correfinement(spec, p_n, k, budget)) / k
            enumerated = True
        except BudgetExceeded:
            h, enumerated = closed, False
        rows.append(ApproximantRow(n, k, h, closed, bound, enumerated))
    return KSEntropy(h0, tuple(rows))
