"""Catalog of strictly monotone continuous bijections ("generators") and
their conjugations.

A generator is the function defining a quasi-arithmetic mean: a strictly
monotone continuous map from an open interval onto its range, with an exact
analytic inverse for catalog forms and a guarded bisection inverse for
tabulated forms.  All objects here are immutable and all operations pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

#: Evaluation within this margin of an open endpoint is a domain violation,
#: not a clamp; violations near the boundary are exactly what counterexample
#: searches probe, so clamping would corrupt them.
ENDPOINT_MARGIN = 1e-300

#: Absolute tolerance on the argument for bisection inversion.
INVERSION_TOL = 1e-12
MAX_BISECT_STEPS = 200

# Power forms switch to log-space evaluation beyond this exponent magnitude,
# so wide sweeps degrade to inf instead of raising OverflowError.
_LOG_SAFE = 600.0
_EXP_MAX = 709.0


class GeneratorError(ValueError):
    """Base class for generator evaluation and inversion failures."""


class DomainError(GeneratorError):
    """Argument falls outside the generator's open domain."""


class RangeError(GeneratorError):
    """Target value falls outside the generator's range."""


@dataclass(frozen=True)
class Interval:
    """Open interval (lo, hi); endpoints may be infinite."""

    lo: float = -math.inf
    hi: float = math.inf

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")

    def contains(self, x: float) -> bool:
        return (x - self.lo) > ENDPOINT_MARGIN and (self.hi - x) > ENDPOINT_MARGIN

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))


POSITIVE_REALS = Interval(0.0, math.inf)
ALL_REALS = Interval()


def _pow_eval(x: float, p: float, scale: float = 1.0) -> float:
    """scale * x**p for x > 0, in log space when the exponent is extreme."""
    t = p * math.log(x)
    if abs(t) > _LOG_SAFE:
        t += math.log(scale)
        if t > _EXP_MAX:
            return math.inf
        return math.exp(t)
    return scale * x ** p


@dataclass(frozen=True, eq=False)
class Generator:
    """A strictly monotone continuous bijection from an open interval.

    ``positive`` is True exactly when the range is all of (0, inf); such
    generators are admissible on measure spaces of arbitrary finite mass,
    while all others are restricted to probability spaces by the mean
    operators.
    """

    desc: str
    domain: Interval
    range: Interval
    increasing: bool
    positive: bool
    _fwd: Callable[[float], float] = field(repr=False)
    _inv: Optional[Callable[[float], float]] = field(default=None, repr=False)

    def __call__(self, x: float) -> float:
        return self.eval(x)

    def eval(self, x: float) -> float:
        if not self.domain.contains(x):
            raise DomainError(
                f"{self.desc}: x={x!r} outside open domain "
                f"({self.domain.lo}, {self.domain.hi})"
            )
        return self._fwd(x)

    def invert(self, y: float) -> float:
        if not self.range.contains(y):
            raise RangeError(
                f"{self.desc}: y={y!r} outside range "
                f"({self.range.lo}, {self.range.hi})"
            )
        if self._inv is not None:
            return self._inv(y)
        return self._bisect(y)

    def _bisect(self, y: float) -> float:
        a, b = self._bracket(y)
        fa = self._fwd(a) - y
        if fa == 0.0:
            return a
        fb = self._fwd(b) - y
        if fb == 0.0:
            return b
        if (fa > 0.0) == (fb > 0.0):
            raise RangeError(f"{self.desc}: y={y!r} not attained inside the domain")
        for _ in range(MAX_BISECT_STEPS):
            mid = 0.5 * (a + b)
            fm = self._fwd(mid) - y
            if fm == 0.0 or (b - a) <= INVERSION_TOL:
                return mid
            if (fm > 0.0) == (fa > 0.0):
                a, fa = mid, fm
            else:
                b = mid
        return 0.5 * (a + b)

    def _bracket(self, y: float) -> tuple[float, float]:
        lo, hi = self.domain.lo, self.domain.hi
        if math.isfinite(lo) and math.isfinite(hi):
            pad = 1e-12 * (hi - lo)
            return lo + pad, hi - pad
        # Unbounded domain: grow a bracket geometrically from a seed point,
        # failing with a range error once the domain bound is hit.
        seed = lo + 1.0 if math.isfinite(lo) else (hi - 1.0 if math.isfinite(hi) else 0.0)
        sgn = 1.0 if self.increasing else -1.0
        a = b = seed
        step = 1.0
        while sgn * (self._fwd(a) - y) > 0.0:
            a -= step
            step *= 2.0
            if a <= lo or not math.isfinite(a):
                raise RangeError(f"{self.desc}: y={y!r} below attainable range")
        step = 1.0
        while sgn * (self._fwd(b) - y) < 0.0:
            b += step
            step *= 2.0
            if b >= hi or not math.isfinite(b):
                raise RangeError(f"{self.desc}: y={y!r} above attainable range")
        return a, b


def eval(gen: Generator, x: float) -> float:  # noqa: A001 - spec'd operation name
    return gen.eval(x)


def invert(gen: Generator, y: float) -> float:
    return gen.invert(y)


# --------------------------------------------------------------------------
# Catalog constructors
# --------------------------------------------------------------------------

def power(p: float) -> Generator:
    """t**p on (0, inf), a bijection onto (0, inf) for p != 0."""
    if p == 0:
        raise ValueError("power exponent must be non-zero")
    return Generator(
        desc=f"power:{p:g}",
        domain=POSITIVE_REALS,
        range=POSITIVE_REALS,
        increasing=p > 0,
        positive=True,
        _fwd=lambda x: _pow_eval(x, p),
        _inv=lambda y: _pow_eval(y, 1.0 / p),
    )


def identity() -> Generator:
    return power(1.0)


def apower(a: float, p: float, shift: float = 0.0) -> Generator:
    """a * t**p + shift on (0, inf); onto (0, inf) only when shift == 0."""
    if a <= 0:
        raise ValueError("apower scale must be positive")
    if p == 0:
        raise ValueError("apower exponent must be non-zero")
    desc = f"apower:{a:g},{p:g}" if shift == 0.0 else f"apower:{a:g},{p:g}+{shift:g}"
    return Generator(
        desc=desc,
        domain=POSITIVE_REALS,
        range=POSITIVE_REALS if shift == 0.0 else Interval(shift, math.inf),
        increasing=p > 0,
        positive=shift == 0.0,
        _fwd=lambda x: _pow_eval(x, p, a) + shift,
        _inv=lambda y: _pow_eval((y - shift) / a, 1.0 / p),
    )


def exponential(p: float) -> Generator:
    """exp(p*t) on all of R, a bijection onto (0, inf)."""
    if p == 0:
        raise ValueError("exponential rate must be non-zero")

    def fwd(x: float) -> float:
        t = p * x
        return math.inf if t > _EXP_MAX else math.exp(t)

    return Generator(
        desc=f"exp:{p:g}",
        domain=ALL_REALS,
        range=POSITIVE_REALS,
        increasing=p > 0,
        positive=True,
        _fwd=fwd,
        _inv=lambda y: math.log(y) / p,
    )


def reciprocal() -> Generator:
    """1/t on (0, inf); decreasing, self-inverse."""
    return Generator(
        desc="recip",
        domain=POSITIVE_REALS,
        range=POSITIVE_REALS,
        increasing=False,
        positive=True,
        _fwd=lambda x: 1.0 / x,
        _inv=lambda y: 1.0 / y,
    )


def affine(a: float, b: float) -> Generator:
    """a*t + b on all of R; not onto (0, inf), so probability spaces only."""
    if a == 0:
        raise ValueError("affine slope must be non-zero")
    return Generator(
        desc=f"affine:{a:g},{b:g}",
        domain=ALL_REALS,
        range=ALL_REALS,
        increasing=a > 0,
        positive=False,
        _fwd=lambda x: a * x + b,
        _inv=lambda y: (y - b) / a,
    )


def scaled(gen: Generator, c: float) -> Generator:
    """c * gen for c > 0."""
    if c <= 0:
        raise ValueError("scale must be positive")
    return Generator(
        desc=f"{c:g}*({gen.desc})",
        domain=gen.domain,
        range=Interval(c * gen.range.lo, c * gen.range.hi),
        increasing=gen.increasing,
        positive=gen.positive,
        _fwd=lambda x: c * gen.eval(x),
        _inv=lambda y: gen.invert(y / c),
    )


def power_of(gen: Generator, a: float, b: float) -> Generator:
    """a * gen**b, requiring gen onto (0, inf); stays onto (0, inf)."""
    if a <= 0:
        raise ValueError("scale must be positive")
    if b == 0:
        raise ValueError("exponent must be non-zero")
    if not gen.positive:
        raise ValueError(f"{gen.desc} is not onto the positive reals")
    return Generator(
        desc=f"{a:g}*({gen.desc})^{b:g}",
        domain=gen.domain,
        range=POSITIVE_REALS,
        increasing=gen.increasing == (b > 0),
        positive=True,
        _fwd=lambda x: _pow_eval(gen.eval(x), b, a),
        _inv=lambda y: gen.invert(_pow_eval(y / a, 1.0 / b)),
    )


def affine_of(gen: Generator, a: float, b: float) -> Generator:
    """a * gen + b; loses surjectivity onto (0, inf), probability spaces only."""
    if a == 0:
        raise ValueError("slope must be non-zero")
    lo, hi = a * gen.range.lo + b, a * gen.range.hi + b
    return Generator(
        desc=f"{a:g}*({gen.desc})+{b:g}",
        domain=gen.domain,
        range=Interval(min(lo, hi), max(lo, hi)),
        increasing=gen.increasing == (a > 0),
        positive=False,
        _fwd=lambda x: a * gen.eval(x) + b,
        _inv=lambda y: gen.invert((y - b) / a),
    )


def tabulated(knots_x, knots_y) -> Generator:
    """Monotone piecewise-cubic interpolant through strictly monotone knots.

    PCHIP preserves strict monotonicity of the data, which keeps the
    interpolant invertible; inversion is by bracketed bisection.
    """
    xs = np.asarray(knots_x, dtype=float)
    ys = np.asarray(knots_y, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 2:
        raise ValueError("tabulated generator needs two equal-length 1-d knot arrays")
    if not np.all(np.diff(xs) > 0):
        raise ValueError("knot abscissae must be strictly increasing")
    dy = np.diff(ys)
    if np.all(dy > 0):
        increasing = True
    elif np.all(dy < 0):
        increasing = False
    else:
        raise ValueError("knot ordinates must be strictly monotone")
    interp = PchipInterpolator(xs, ys)
    return Generator(
        desc=f"table:{len(xs)}",
        domain=Interval(float(xs[0]), float(xs[-1])),
        range=Interval(float(ys.min()), float(ys.max())),
        increasing=increasing,
        positive=False,
        _fwd=lambda x: float(interp(x)),
        _inv=None,
    )


def tabulated_from_csv(path: str) -> Generator:
    data = np.loadtxt(path, delimiter=",", dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns x,y")
    return tabulated(data[:, 0], data[:, 1])


def parse_generator(text: str) -> Generator:
    """Parse the generator description grammar used in config files.

    power:p | affine:a,b | apower:a,p | exp:p | recip | table:path.csv
    """
    text = text.strip()
    name, _, args = text.partition(":")
    try:
        if name == "power":
            return power(float(args))
        if name == "affine":
            a, b = (float(v) for v in args.split(","))
            return affine(a, b)
        if name == "apower":
            a, p = (float(v) for v in args.split(","))
            return apower(a, p)
        if name == "exp":
            return exponential(float(args))
        if name == "recip":
            if args:
                raise ValueError("recip takes no arguments")
            return reciprocal()
        if name == "table":
            return tabulated_from_csv(args)
    except (ValueError, OSError) as exc:
        raise ValueError(f"bad generator description {text!r}: {exc}") from exc
    raise ValueError(f"unknown generator form {text!r}")


def common_domain(f: Generator, g: Generator) -> Interval:
    return f.domain.intersect(g.domain)


@dataclass(frozen=True, eq=False)
class Conjugation:
    """outer o inner**-1, a strictly monotone bijection where defined.

    With both generators onto (0, inf) this is a monotone bijection of the
    positive half-line; its inverse swaps the two generators.
    """

    outer: Generator
    inner: Generator

    @property
    def increasing(self) -> bool:
        return self.outer.increasing == self.inner.increasing

    @property
    def desc(self) -> str:
        return f"({self.outer.desc})o({self.inner.desc})^-1"

    def __call__(self, x: float) -> float:
        return self.outer.eval(self.inner.invert(x))

    def invert(self, y: float) -> float:
        return self.inner.eval(self.outer.invert(y))

    def inverse(self) -> "Conjugation":
        return Conjugation(self.inner, self.outer)


def conjugate_eval(c: Conjugation, x: float) -> float:
    return c(x)
