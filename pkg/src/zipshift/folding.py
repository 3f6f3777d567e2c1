"""Preimage fibers of the zip shift, their conditional measures, and folding entropy.

The preimage of a sequence ``x`` is the finite set of sequences obtained by
inserting one symbol ``s`` from the phi-fiber of ``x[-1]`` at index 0 and
shifting everything else one place to the right.  Conditioned on that fiber,
branch ``s`` has probability ``q[x[-1]][s] = p+(s) / p-(x[-1])``.  Both the
branch structure and these weights depend on ``x[-1]`` alone, so integrals over
the fiber space reduce to finite sums over the negative alphabet.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .partition import cylinder_partition, partition_entropy
from .spec import Side, Symbol, UnknownSymbol, ZipShiftError, ZipShiftSpec
from .symbolic import GeneralizedCylinder, IndexConstraint, cylinder_measure, shift_pullback
from .verdict import FAIL, PASS, Verdict

__all__ = [
    "FormulaMismatch",
    "FiberClass",
    "fiber_class",
    "preimage_branches",
    "conditional_measure",
    "fiber_entropy",
    "FoldingEntropy",
    "folding_entropy",
    "quotient_measure",
    "quotient_measure_check",
    "disintegration_check",
]

AGREEMENT_TOL = 1e-12


class FormulaMismatch(ZipShiftError):
    pass


@dataclass(frozen=True)
class FiberClass:
    """Branch structure shared by every fiber whose anchor ``x[-1]`` is ``anchor``."""

    anchor: Symbol
    branch_weights: Mapping[Symbol, Fraction]

    def __post_init__(self):
        if sum(self.branch_weights.values(), Fraction(0)) != 1:
            raise ValueError("branch weights must sum to 1")

    @property
    def branches(self) -> tuple[Symbol, ...]:
        return tuple(self.branch_weights)


def _negative(spec: ZipShiftSpec, s_minus: Symbol) -> Symbol:
    if not isinstance(s_minus, Symbol) or s_minus.side is not Side.NEGATIVE:
        raise UnknownSymbol(f"{s_minus!r} is not a negative symbol")
    spec.index_of(s_minus)
    return s_minus


def fiber_class(spec: ZipShiftSpec, s_minus: Symbol) -> FiberClass:
    t = _negative(spec, s_minus)
    return FiberClass(t, spec.measures.q[t])


def preimage_branches(spec: ZipShiftSpec, x: Mapping[int, Symbol]) -> dict[Symbol, dict[int, Symbol]]:
    """The preimage fiber of a (partially specified) sequence.

    ``x`` maps indices to symbols and must specify index -1.  Returns, for
    each branch symbol ``s`` in the phi-fiber of ``x[-1]``, the preimage with
    ``s`` at index 0 and ``x[i]`` at ``i + 1`` for every other given index.
    ``x[-1]`` itself does not appear: it is recovered as ``phi(s)``.
    """
    if -1 not in x:
        raise ValueError("the fiber is determined by x[-1]; it must be given")
    anchor = _negative(spec, x[-1])
    out = {}
    for s in spec.fiber(anchor):
        branch = {i + 1: sym for i, sym in x.items() if i != -1}
        branch[0] = s
        out[s] = dict(sorted(branch.items()))
    return out


def conditional_measure(spec: ZipShiftSpec, x: Mapping[int, Symbol], c: GeneralizedCylinder) -> Fraction:
    """Conditional mass that the fiber over ``x`` gives to cylinder ``c``.

    ``x`` must specify every index that ``c`` constrains after shifting, i.e.
    ``i - 1`` for each constrained ``i != 0``, plus index -1.
    """
    q = spec.measures.q[_negative(spec, x[-1])]
    total = Fraction(0)
    for s, branch in preimage_branches(spec, x).items():
        inside = True
        for i, allowed in c.constraints.items():
            if i not in branch:
                raise ValueError(f"the fiber representative does not specify index {i - 1}")
            if branch[i] not in allowed:
                inside = False
                break
        if inside:
            total += q[s]
    return total


def fiber_entropy(spec: ZipShiftSpec, s_minus: Symbol) -> float:
    """Entropy (nats) of the branch distribution over the fiber of ``s_minus``."""
    weights = fiber_class(spec, s_minus).branch_weights.values()
    return math.fsum(-float(w) * math.log(w) for w in weights if w != 1)


@dataclass(frozen=True)
class FoldingEntropy:
    fiber_sum: float
    difference: float

    @property
    def value(self) -> float:
        return self.fiber_sum

    @property
    def residual(self) -> float:
        return abs(self.fiber_sum - self.difference)


def folding_entropy(spec: ZipShiftSpec) -> FoldingEntropy:
    """Folding entropy by the fiber-weighted sum and by ``H(C_0) - H(C_-1)``.

    Raises
    ------
    FormulaMismatch
        If the two values differ by more than 1e-12.
    """
    p_minus = spec.measures.p_minus
    fiber_sum = math.fsum(fiber_entropy(spec, t) * float(p_minus[t]) for t in spec.s_minus)
    h0 = partition_entropy(spec, cylinder_partition(spec, 0))
    h1 = partition_entropy(spec, cylinder_partition(spec, -1))
    out = FoldingEntropy(fiber_sum, h0 - h1)
    if out.residual > AGREEMENT_TOL:
        raise FormulaMismatch(
            f"fiber sum {fiber_sum!r} and entropy difference {h0 - h1!r} disagree by {out.residual:.3e}"
        )
    return out


def quotient_measure(spec: ZipShiftSpec, c: GeneralizedCylinder) -> Fraction:
    """Mass of the projected cylinder in the fiber space: the mass of its preimage."""
    return cylinder_measure(spec, shift_pullback(spec, c, 1))


def _windows(depth: int):
    yield from ((i, i + 1) for i in range(-depth, depth))
    yield from ((i, i + 2) for i in range(-depth, depth - 1))


def quotient_measure_check(spec: ZipShiftSpec, depth: int, max_words: int = 5000) -> Verdict:
    """Check that projected cylinders keep their mass, exactly.

    Covers the whole space, every one- and two-index word cylinder inside
    ``[-depth, depth)``, every extended cylinder over a phi-fiber at index 0,
    and the word cylinders over the widest centred window ``[-d, d)``
    (``d <= depth``) with at most ``max_words`` words.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    cylinders = [GeneralizedCylinder()]
    for lo, hi in _windows(depth):
        alph = [spec.alphabet_at(i) for i in range(lo, hi)]
        cylinders += [GeneralizedCylinder.word(lo, w) for w in itertools.product(*alph)]
    for t in spec.s_minus:
        cylinders.append(GeneralizedCylinder([IndexConstraint(0, spec.fiber(t))]))
    d = depth
    while d > 0 and spec.m**d * spec.l**d > max_words:
        d -= 1
    if d > 0:
        alph = [spec.alphabet_at(i) for i in range(-d, d)]
        cylinders += [GeneralizedCylinder.word(-d, w) for w in itertools.product(*alph)]
    for c in cylinders:
        if quotient_measure(spec, c) != cylinder_measure(spec, c):
            return Verdict("quotient_measure", FAIL, len(cylinders), counterexample=repr(c))
    return Verdict(
        "quotient_measure", PASS, len(cylinders), detail=f"depth={depth}, full words over [-{d}, {d})"
    )


def disintegration_check(spec: ZipShiftSpec, depth: int) -> Verdict:
    """Reassemble the measure of each basic cylinder from the fiber measures.

    For every basic cylinder ``C`` with ``|i| <= depth``, the integral of the
    conditional mass of ``C`` against the quotient measure is evaluated as a
    finite sum over the atoms of the projected partition on indices ``-1`` and
    ``i - 1`` (the integrand is constant on them) and compared with ``mu(C)``.
    The two closed forms are checked as well: ``mu(C) = mu(C shifted to i-1)``
    for ``i != 0`` and ``mu(C) = q * p-(phi(s))`` for ``i == 0``.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    checked = 0
    for i in range(-depth, depth + 1):
        for s in spec.alphabet_at(i):
            c = GeneralizedCylinder.basic(i, s)
            mu = cylinder_measure(spec, c)
            indices = sorted({-1, i - 1}) if i != 0 else [-1]
            integral = Fraction(0)
            for atom in itertools.product(*(spec.alphabet_at(j) for j in indices)):
                x = dict(zip(indices, atom))
                atom_cyl = GeneralizedCylinder([IndexConstraint(j, {a}) for j, a in x.items()])
                weight = quotient_measure(spec, atom_cyl)
                integral += conditional_measure(spec, x, c) * weight
            if i != 0:
                closed = cylinder_measure(spec, GeneralizedCylinder.basic(i - 1, s))
            else:
                t = spec.phi[s]
                closed = spec.measures.q[t][s] * cylinder_measure(spec, GeneralizedCylinder.basic(-1, t))
            checked += 1
            if not (integral == mu == closed):
                return Verdict(
                    "disintegration", FAIL, checked,
                    counterexample=f"{c!r}: mu={mu}, integral={integral}, closed form={closed}",
                )
    return Verdict("disintegration", PASS, checked, detail=f"depth={depth}")
