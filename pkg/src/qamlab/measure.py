"""Finite measure spaces as weighted atoms, and simple functions on their
products.

Simple functions take finitely many values, so every instance of the mixed
mean inequality over a general measure space is realized exactly by a finite
weighted-atom instance; the atom-list representation is lossless for this
test class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .generators import Interval

#: Subset enumeration stays cheap up to 2**20 sums, and the classification
#: theorems already bite at 2 atoms.
MAX_ATOMS = 20

#: Weights are user-entered decimals; probability detection is not stricter.
PROBABILITY_TOL = 1e-12


@dataclass(frozen=True)
class MeasureSpace:
    """A finite measure space given by its positive atom masses."""

    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        ws = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if not 1 <= len(ws) <= MAX_ATOMS:
            raise ValueError(f"need between 1 and {MAX_ATOMS} atoms, got {len(ws)}")
        for w in ws:
            if not (w > 0 and math.isfinite(w)):
                raise ValueError(f"atom weights must be positive and finite, got {w!r}")

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def total_mass(self) -> float:
        return math.fsum(self.weights)

    @property
    def is_probability(self) -> bool:
        return abs(self.total_mass - 1.0) <= PROBABILITY_TOL

    @property
    def non_degenerate(self) -> bool:
        return len(self.weights) >= 2


def subset_mass(space: MeasureSpace, mask: Iterable[int]) -> float:
    """Mass of the atom set selected by ``mask`` (an index set)."""
    idx = sorted(set(mask))
    if idx and not (0 <= idx[0] and idx[-1] < len(space)):
        raise IndexError(f"mask {idx} out of range for {len(space)} atoms")
    return math.fsum(space.weights[i] for i in idx)


@dataclass(frozen=True)
class Admissibility:
    non_degenerate: bool
    probability: bool
    thm1_admissible: bool


def admissibility(space: MeasureSpace) -> Admissibility:
    """Structural flags of a space.

    ``thm1_admissible`` means some measurable set has mass strictly between
    0 and 1 while the total mass exceeds 1 - the hypothesis separating the
    general-measure characterizations from the probability ones.  Decided by
    scanning proper subset sums (atom counts are capped, so this is cheap).
    """
    total = space.total_mass
    thm1 = False
    m = len(space)
    if total > 1.0 and m >= 2:
        for bits in range(1, (1 << m) - 1):
            s = math.fsum(space.weights[i] for i in range(m) if bits >> i & 1)
            if 0.0 < s < 1.0:
                thm1 = True
                break
    return Admissibility(
        non_degenerate=space.non_degenerate,
        probability=space.is_probability,
        thm1_admissible=thm1,
    )


@dataclass(frozen=True, eq=False)
class SimpleFunction:
    """An m x n grid of values: row i is atom i of X, column j is atom j of Y."""

    values: np.ndarray
    domain: Interval

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 2:
            raise ValueError("simple function values must form a 2-d grid")
        if not (np.all(vals > self.domain.lo) and np.all(vals < self.domain.hi)):
            bad = vals[~((vals > self.domain.lo) & (vals < self.domain.hi))][0]
            raise ValueError(
                f"value {bad!r} not strictly inside ({self.domain.lo}, {self.domain.hi})"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def random_simple_function(
    domain: Interval,
    m: int,
    n: int,
    seed,
    scale_box: tuple[float, float],
) -> SimpleFunction:
    """Deterministic log-uniform grid over ``scale_box``.

    Log-uniform because generators onto the positive reals act
    multiplicatively; the box must sit strictly inside the domain.
    """
    lo, hi = scale_box
    if not (0 < lo <= hi):
        raise ValueError(f"scale box must satisfy 0 < lo <= hi, got {scale_box}")
    if not (domain.contains(lo) and domain.contains(hi)):
        raise ValueError(f"scale box {scale_box} not strictly inside the domain")
    rng = np.random.default_rng(seed)
    grid = np.exp(rng.uniform(math.log(lo), math.log(hi), size=(m, n)))
    return SimpleFunction(values=grid, domain=domain)
