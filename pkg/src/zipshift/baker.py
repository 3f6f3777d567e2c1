"""The n-to-1 baker map realizing a zip shift on the unit square.

The square is cut into vertical strips, one per positive symbol, of width
p+(s) in alphabet order, and into horizontal bands, one per negative symbol,
of height p-(t).  Strip ``s`` is stretched horizontally to the full width and
squashed vertically into band ``phi(s)``:

    x' = (x - left_s) / p+(s),     y' = bottom_t + p-(t) * y,   t = phi(s).

Lebesgue measure is preserved, band ``t`` is covered once by each strip in
the phi-fiber of ``t``, and the strip itinerary of a point (forwards) together
with its band expansion of ``y`` (backwards) is its zip shift sequence.

Random sampling uses numpy's PCG64.  Samples are drawn in fixed chunks of
``CHUNK`` points; chunk ``c`` is seeded with ``SeedSequence(seed,
spawn_key=(c,))``, so estimates do not depend on how chunks are spread over
worker threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .folding import fiber_entropy
from .spec import BudgetExceeded, Symbol, ZipShiftError, ZipShiftSpec

__all__ = [
    "CHUNK",
    "BoundaryPoint",
    "Point",
    "BakerSystem",
    "Estimate",
    "baker_apply",
    "baker_preimages",
    "encode",
    "chunk_rng",
    "empirical_block_entropy",
    "empirical_folding_entropy",
]

CHUNK = 1 << 16
_BELOW_ONE = float(np.nextafter(1.0, 0.0))


class BoundaryPoint(ZipShiftError, ValueError):
    """A coordinate lies on (or within tolerance of) a strip or band boundary."""

    def __init__(self, coordinate: str, value: float, depth: int):
        super().__init__(f"{coordinate}={value!r} is on a partition boundary at depth {depth}")
        self.coordinate = coordinate
        self.value = value
        self.depth = depth


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        for name in ("x", "y"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise ValueError(f"{name}={v!r} is outside [0, 1)")


def _edges(sizes):
    lows = []
    acc = Fraction(0)
    for w in sizes:
        lows.append(acc)
        acc += w
    assert acc == 1
    return tuple(lows)


class BakerSystem:
    """Strip/band geometry of a zip shift on the unit square.

    ``boundary_tol`` is how close to a strip or band edge a coordinate may come
    before :func:`encode` refuses it; it absorbs the rounding of the inverse
    affine maps so itineraries are never decided by floating-point noise.
    """

    def __init__(self, spec: ZipShiftSpec, boundary_tol: float = 1e-10):
        self.spec = spec
        self.boundary_tol = boundary_tol
        p_minus = spec.measures.p_minus
        self.strip_width = spec.p_plus
        self.strip_left = _edges(spec.p_plus)
        self.band_height = tuple(p_minus[t] for t in spec.s_minus)
        self.band_bottom = _edges(self.band_height)

        self._left = np.array([float(v) for v in self.strip_left])
        self._width = np.array([float(v) for v in self.strip_width])
        self._bottom = np.array([float(v) for v in self.band_bottom])
        self._height = np.array([float(v) for v in self.band_height])
        self._phi = np.asarray(spec.phi_index)

    def strip_of(self, x):
        return np.searchsorted(self._left, x, side="right") - 1

    def band_of(self, y):
        return np.searchsorted(self._bottom, y, side="right") - 1

    def apply_arrays(self, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized map on coordinate arrays."""
        s = self.strip_of(x)
        t = self._phi[s]
        x1 = np.minimum((x - self._left[s]) / self._width[s], _BELOW_ONE)
        y1 = np.minimum(self._bottom[t] + self._height[t] * y, _BELOW_ONE)
        return x1, y1

    def forward_digits(self, x: np.ndarray, n: int) -> np.ndarray:
        """Strip indices of the first ``n`` iterates, shape ``(len(x), n)``."""
        out = np.empty((len(x), n), dtype=np.int64)
        for i in range(n):
            s = self.strip_of(x)
            out[:, i] = s
            x = np.minimum((x - self._left[s]) / self._width[s], _BELOW_ONE)
        return out

    def preimage_arrays(self, x: np.ndarray, y: np.ndarray):
        """Vectorized preimages.

        Returns ``(owner, px, py, strip)``: preimage ``k`` is ``(px[k], py[k])``,
        lies in strip ``strip[k]`` and belongs to input point ``owner[k]``.
        """
        t = self.band_of(y)
        y0 = np.clip((y - self._bottom[t]) / self._height[t], 0.0, _BELOW_ONE)
        owners, xs, ys, strips = [], [], [], []
        for s in range(len(self._left)):
            idx = np.flatnonzero(t == self._phi[s])
            owners.append(idx)
            xs.append(np.minimum(self._left[s] + self._width[s] * x[idx], _BELOW_ONE))
            ys.append(y0[idx])
            strips.append(np.full(len(idx), s))
        owner = np.concatenate(owners)
        order = np.argsort(owner, kind="stable")
        return (
            owner[order],
            np.concatenate(xs)[order],
            np.concatenate(ys)[order],
            np.concatenate(strips)[order],
        )

    def _near_edge(self, v: float, lows: np.ndarray) -> bool:
        return bool(len(lows) > 1 and np.min(np.abs(lows[1:] - v)) <= self.boundary_tol)


def baker_apply(b: BakerSystem, p: Point) -> Point:
    x, y = b.apply_arrays(np.array([p.x]), np.array([p.y]))
    return Point(float(x[0]), float(y[0]))


def baker_preimages(b: BakerSystem, p: Point) -> list[Point]:
    """All points mapped onto ``p``: one in each strip of the fiber of p's band."""
    _, px, py, _ = b.preimage_arrays(np.array([p.x]), np.array([p.y]))
    return [Point(float(x), float(y)) for x, y in zip(px, py)]


def encode(b: BakerSystem, p: Point, n_back: int, n_fwd: int) -> tuple[Symbol, ...]:
    """Itinerary of ``p`` over indices ``-n_back .. n_fwd - 1``.

    Forward symbols are the strips visited by ``p, F(p), ...``; backward symbols
    come from expanding ``y`` through the bands (nearest index first), and are
    returned in index order.

    Raises
    ------
    BoundaryPoint
        A coordinate needed for the requested depth is within
        ``b.boundary_tol`` of an interior strip or band edge.
    """
    if n_back < 0 or n_fwd < 0:
        raise ValueError("n_back and n_fwd must be non-negative")
    spec = b.spec
    fwd = []
    x = p.x
    for i in range(n_fwd):
        if b._near_edge(x, b._left):
            raise BoundaryPoint("x", x, i)
        s = int(b.strip_of(x))
        fwd.append(spec.s_plus[s])
        x = min((x - b._left[s]) / b._width[s], _BELOW_ONE)
    back = []
    y = p.y
    for j in range(1, n_back + 1):
        if b._near_edge(y, b._bottom):
            raise BoundaryPoint("y", y, -j)
        t = int(b.band_of(y))
        back.append(spec.s_minus[t])
        y = min(max((y - b._bottom[t]) / b._height[t], 0.0), _BELOW_ONE)
    return tuple(reversed(back)) + tuple(fwd)


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    samples: int

    def to_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "samples": self.samples}


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _chunked_counts(samples: int, seed: int, workers: int, job: Callable[[np.ndarray, np.ndarray], np.ndarray]):
    if samples < 1:
        raise ValueError("samples must be >= 1")
    sizes = [min(CHUNK, samples - c * CHUNK) for c in range(-(-samples // CHUNK))]

    def run(c):
        rng = chunk_rng(seed, c)
        pts = rng.random((sizes[c], 2))
        return job(pts[:, 0], pts[:, 1])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(c) for c in range(len(sizes))]
    return np.sum(parts, axis=0)


def _clean(v: float) -> float:
    return 0.0 if v == 0 else v


def empirical_block_entropy(
    b: BakerSystem, samples: int, block: int, seed: int, workers: int = 1, budget: int = 2_000_000
) -> Estimate:
    """Plug-in entropy of forward words of length ``block``, per symbol (nats).

    ``stderr`` is the delta-method standard error ``sd(-log p_hat(W)) / sqrt(N)``
    divided by ``block``.
    """
    if block < 1:
        raise ValueError("block must be >= 1")
    l = b.spec.l  # noqa: E741
    n_words = l**block
    if n_words > budget:
        raise BudgetExceeded(n_words, budget, what=f"block {block}")
    weights = l ** np.arange(block - 1, -1, -1, dtype=np.int64)

    def job(x, _y):
        codes = b.forward_digits(x, block) @ weights
        return np.bincount(codes, minlength=n_words)

    counts = _chunked_counts(samples, seed, workers, job)
    freq = counts[counts > 0] / samples
    logs = np.log(freq)
    h = _clean(math.fsum(-freq * logs))
    second = math.fsum(freq * logs * logs)
    var = max(second - h * h, 0.0)
    return Estimate(h / block, math.sqrt(var / samples) / block, samples)


def empirical_folding_entropy(b: BakerSystem, samples: int, seed: int, workers: int = 1) -> Estimate:
    """Band frequencies of mapped points, weighted by each band's fiber entropy."""
    spec = b.spec
    fiber_h = np.array([fiber_entropy(spec, t) for t in spec.s_minus])

    def job(x, y):
        _, y1 = b.apply_arrays(x, y)
        return np.bincount(b.band_of(y1), minlength=spec.m)

    counts = _chunked_counts(samples, seed, workers, job)
    freq = counts / samples
    value = _clean(math.fsum(freq * fiber_h))
    var = max(math.fsum(freq * fiber_h * fiber_h) - value * value, 0.0)
    return Estimate(value, math.sqrt(var / samples), samples)
