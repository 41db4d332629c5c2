"""The mean operators and both sides of the mixed-mean inequality.

The two sides apply the Y-mean inside and the X-mean outside, or the other
way around; their difference (rhs - lhs) is the object of study.  Gap values
are returned raw: tolerance policy belongs to callers, because different
classifications need different tolerances.

Aggregations use math.fsum (exactly rounded compensated summation), since
gaps near zero are exactly what the artifact measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .generators import Generator, common_domain
from .measure import MeasureSpace, SimpleFunction


class WellDefinednessError(ValueError):
    """A mean aggregate left the generator's range, or the generator/space
    combination cannot guarantee well-defined sides."""


@dataclass(frozen=True)
class GapReport:
    """One evaluated instance of the inequality: lhs, rhs and gap = rhs - lhs."""

    lhs: float
    rhs: float
    gap: float
    well_defined: bool = True


def qam(gen: Generator, weights, values) -> float:
    """Quasi-arithmetic mean: gen**-1 of the weighted aggregate of gen(values).

    For a generator onto (0, inf) the aggregate is automatically in range;
    otherwise it is checked and a well-definedness error names the aggregate.
    """
    weights = tuple(weights)
    values = tuple(values)
    if len(weights) != len(values):
        raise ValueError(f"{len(weights)} weights vs {len(values)} values")
    agg = math.fsum(w * gen.eval(v) for w, v in zip(weights, values))
    if not gen.range.contains(agg):
        raise WellDefinednessError(
            f"aggregate {agg!r} outside the range of {gen.desc}"
        )
    return gen.invert(agg)


def _check_mode(f: Generator, g: Generator, X: MeasureSpace, Y: MeasureSpace) -> None:
    # Generators not onto (0, inf) are accepted only when both spaces are
    # probability spaces (where aggregates are convex combinations); this is
    # the probability-mode relaxation.
    if not (f.positive and g.positive):
        if not (X.is_probability and Y.is_probability):
            raise WellDefinednessError(
                f"{f.desc}, {g.desc}: generators not onto the positive reals "
                "require probability spaces on both sides"
            )


def _check_shape(X: MeasureSpace, Y: MeasureSpace, h: SimpleFunction) -> None:
    if h.shape != (len(X), len(Y)):
        raise ValueError(f"grid shape {h.shape} does not match ({len(X)}, {len(Y)})")


def lhs_mixed(
    f: Generator, g: Generator, X: MeasureSpace, Y: MeasureSpace, h: SimpleFunction
) -> float:
    """Inner g-mean over Y for each row, then outer f-mean over X."""
    _check_shape(X, Y, h)
    inner = [qam(g, Y.weights, row) for row in h.values]
    return qam(f, X.weights, inner)


def rhs_mixed(
    f: Generator, g: Generator, X: MeasureSpace, Y: MeasureSpace, h: SimpleFunction
) -> float:
    """Inner f-mean over X for each column, then outer g-mean over Y."""
    _check_shape(X, Y, h)
    inner = [qam(f, X.weights, col) for col in h.values.T]
    return qam(g, Y.weights, inner)


def gap(
    f: Generator, g: Generator, X: MeasureSpace, Y: MeasureSpace, h: SimpleFunction
) -> GapReport:
    """Both sides of the inequality; the instance satisfies it iff gap >= 0
    up to the caller's tolerance policy."""
    _check_mode(f, g, X, Y)
    lhs = lhs_mixed(f, g, X, Y, h)
    rhs = rhs_mixed(f, g, X, Y, h)
    return GapReport(lhs=lhs, rhs=rhs, gap=rhs - lhs, well_defined=True)


def four_point_gap(
    f: Generator,
    g: Generator,
    alpha1: float,
    alpha2: float,
    beta1: float,
    beta2: float,
    x: float,
    y: float,
    z: float,
    w: float,
) -> GapReport:
    """The four-indicator instance: the 2x2 grid [[x, y], [z, w]] on the
    two-atom spaces (alpha1, alpha2) and (beta1, beta2).

    Shares the code path of :func:`gap`, so the two agree exactly.
    """
    X = MeasureSpace((alpha1, alpha2))
    Y = MeasureSpace((beta1, beta2))
    h = SimpleFunction(np.array([[x, y], [z, w]], dtype=float), common_domain(f, g))
    return gap(f, g, X, Y, h)


def minkowski_gap(
    g: Generator, b: float, X: MeasureSpace, Y: MeasureSpace, h: SimpleFunction
) -> float:
    """Gap of the b-norm mixed-sum comparison in g-space.

    For f = g**b this is the inequality instance mapped through g: with
    u = g(h), it returns sum_j beta_j (sum_i alpha_i u_ij**b)**(1/b) minus
    (sum_i alpha_i (sum_j beta_j u_ij)**b)**(1/b), which has the sign of the
    mixed-mean gap for f = g**b when g is increasing.
    """
    if b < 1:
        raise ValueError(f"norm exponent must satisfy b >= 1, got {b}")
    if not (g.positive and g.increasing):
        raise ValueError(f"{g.desc}: need an increasing generator onto (0, inf)")
    _check_shape(X, Y, h)
    u = [[g.eval(v) for v in row] for row in h.values]
    aw, bw = X.weights, Y.weights
    lhs = math.fsum(
        a * math.fsum(bj * uij for bj, uij in zip(bw, row)) ** b
        for a, row in zip(aw, u)
    ) ** (1.0 / b)
    rhs = math.fsum(
        bj * math.fsum(a * u[i][j] ** b for i, a in enumerate(aw)) ** (1.0 / b)
        for j, bj in enumerate(bw)
    )
    return rhs - lhs
