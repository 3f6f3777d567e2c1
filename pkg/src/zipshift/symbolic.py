"""Cylinder sets, their exact measures, and how the zip shift moves them.

A :class:`GeneralizedCylinder` fixes a finite set of indices and, at each
one, a non-empty set of allowed symbols.  With a single allowed symbol this
is an ordinary cylinder; with several it is a union of cylinders at that
index (an "extended" cylinder, e.g. over a fiber of ``phi``).

All reasoning about ``phi`` at the sign boundary lives in
:func:`shift_pullback` and :func:`shift_pushforward`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .spec import AlphabetMismatch, Side, Symbol, ZipShiftSpec
from .verdict import FAIL, PASS, Verdict

__all__ = [
    "IndexConstraint",
    "GeneralizedCylinder",
    "cylinder_measure",
    "shift_pullback",
    "shift_pushforward",
    "shift_word",
    "measure_preservation_check",
]


@dataclass(frozen=True)
class IndexConstraint:
    index: int
    allowed: frozenset[Symbol]

    def __post_init__(self):
        object.__setattr__(self, "allowed", frozenset(self.allowed))
        if not self.allowed:
            raise ValueError(f"empty constraint at index {self.index}")
        side = Side.of_index(self.index)
        for s in self.allowed:
            if s.side is not side:
                raise AlphabetMismatch(
                    f"symbol {s!r} cannot sit at index {self.index} (needs a {side.name.lower()} symbol)"
                )


class GeneralizedCylinder:
    """Sequences whose symbol at each constrained index lies in its allowed set.

    The empty cylinder (no constraints) is the whole space.
    """

    __slots__ = ("_constraints", "_hash")

    def __init__(self, constraints: Iterable[IndexConstraint] | Mapping[int, Iterable[Symbol]] = ()):
        if isinstance(constraints, Mapping):
            constraints = [IndexConstraint(i, frozenset(a)) for i, a in constraints.items()]
        table: dict[int, frozenset[Symbol]] = {}
        for c in constraints:
            if c.index in table:
                raise ValueError(f"two constraints at index {c.index}")
            table[c.index] = c.allowed
        self._constraints = MappingProxyType(dict(sorted(table.items())))
        self._hash = None

    @classmethod
    def basic(cls, i: int, symbol: Symbol) -> "GeneralizedCylinder":
        return cls([IndexConstraint(i, frozenset([symbol]))])

    @classmethod
    def word(cls, lo: int, symbols: Sequence[Symbol]) -> "GeneralizedCylinder":
        """The cylinder fixing ``symbols`` at indices ``lo, lo+1, ...``."""
        return cls([IndexConstraint(lo + k, frozenset([s])) for k, s in enumerate(symbols)])

    @property
    def constraints(self) -> Mapping[int, frozenset[Symbol]]:
        return self._constraints

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(self._constraints)

    def allowed(self, i: int) -> frozenset[Symbol] | None:
        return self._constraints.get(i)

    def is_whole_space(self) -> bool:
        return not self._constraints

    def contains(self, other: "GeneralizedCylinder") -> bool:
        """Set inclusion ``other <= self``, decided on the constraint tables."""
        for i, allowed in self._constraints.items():
            theirs = other._constraints.get(i)
            if theirs is None or not theirs <= allowed:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, GeneralizedCylinder):
            return NotImplemented
        return self._constraints == other._constraints

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._constraints.items()))
        return self._hash

    def __repr__(self):
        if not self._constraints:
            return "C[*]"
        parts = []
        for i, allowed in self._constraints.items():
            names = sorted(s.name for s in allowed)
            parts.append(f"{i}:{names[0]}" if len(names) == 1 else f"{i}:{{{','.join(names)}}}")
        return "C[" + ", ".join(parts) + "]"


def _check_alphabet(spec: ZipShiftSpec, c: GeneralizedCylinder) -> None:
    for i, allowed in c.constraints.items():
        for s in allowed:
            spec.index_of(s)


def cylinder_measure(spec: ZipShiftSpec, c: GeneralizedCylinder) -> Fraction:
    """Exact measure: product over constrained indices of the allowed mass.

    Mass at a negative index is taken from p-, at a non-negative index from
    p+.  Computed with integer numerators over ``spec.common_denominator``.
    """
    plus, minus = spec.numerators
    num = 1
    for i, allowed in c.constraints.items():
        weights = plus if i >= 0 else minus
        total = 0
        for s in allowed:
            if s.side is not Side.of_index(i):
                raise AlphabetMismatch(f"symbol {s!r} at index {i}")
            total += weights[spec.index_of(s)]
        num *= total
    return Fraction(num, spec.common_denominator ** len(c.constraints))


def shift_pullback(spec: ZipShiftSpec, c: GeneralizedCylinder, k: int) -> GeneralizedCylinder:
    """The preimage of ``c`` under ``k`` applications of the zip shift.

    Each constraint moves from ``i`` to ``i + k``.  Constraints that cross from
    the negative to the non-negative side (``-k <= i <= -1``) are replaced by
    the union of the phi-fibers of their symbols.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    _check_alphabet(spec, c)
    out = []
    for i, allowed in c.constraints.items():
        if -k <= i <= -1:
            allowed = frozenset(itertools.chain.from_iterable(spec.fiber(t) for t in allowed))
        out.append(IndexConstraint(i + k, allowed))
    return GeneralizedCylinder(out)


def shift_pushforward(spec: ZipShiftSpec, c: GeneralizedCylinder, k: int) -> GeneralizedCylinder:
    """The image of ``c`` under ``k`` applications of the zip shift.

    Every output coordinate depends on exactly one input coordinate, so the
    image of a product set is again a product set and this is exact.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    _check_alphabet(spec, c)
    out = []
    for i, allowed in c.constraints.items():
        if 0 <= i <= k - 1:
            allowed = frozenset(spec.phi[s] for s in allowed)
        out.append(IndexConstraint(i - k, allowed))
    return GeneralizedCylinder(out)


def shift_word(spec: ZipShiftSpec, word: Sequence[Symbol], lo: int) -> tuple[tuple[Symbol, ...], int]:
    """Apply the zip shift to a finite word starting at index ``lo``.

    Returns the shifted word and its new start index ``lo - 1``.  Symbol
    positions are unchanged except that the symbol at index 0 (if present)
    becomes its phi-image at index -1.
    """
    out = list(word)
    if lo <= 0 < lo + len(out):
        out[-lo] = spec.phi[out[-lo]]
    return tuple(out), lo - 1


def _basic_cylinders(spec: ZipShiftSpec, lo: int, hi: int):
    for i in range(lo, hi + 1):
        for s in spec.alphabet_at(i):
            yield GeneralizedCylinder.basic(i, s)


def measure_preservation_check(spec: ZipShiftSpec, depth: int) -> Verdict:
    """Check mu(sigma^-k C) == mu(C) exactly on cylinders near the origin.

    Covered: every basic cylinder with ``|i| <= depth`` pulled back by
    ``k = 1..depth``, and every two-index cylinder with both indices in
    ``[-depth, depth]`` pulled back once.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    checked = 0
    for c in _basic_cylinders(spec, -depth, depth):
        mu = cylinder_measure(spec, c)
        for k in range(1, depth + 1):
            checked += 1
            if cylinder_measure(spec, shift_pullback(spec, c, k)) != mu:
                return Verdict("measure_preservation", FAIL, checked, counterexample=f"{c!r}, k={k}")
    for i, j in itertools.combinations(range(-depth, depth + 1), 2):
        for s, t in itertools.product(spec.alphabet_at(i), spec.alphabet_at(j)):
            c = GeneralizedCylinder([IndexConstraint(i, {s}), IndexConstraint(j, {t})])
            checked += 1
            if cylinder_measure(spec, shift_pullback(spec, c, 1)) != cylinder_measure(spec, c):
                return Verdict("measure_preservation", FAIL, checked, counterexample=repr(c))
    return Verdict("measure_preservation", PASS, checked, detail=f"depth={depth}")
