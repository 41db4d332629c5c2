"""Structural maps on the positive quadrant and their checkers.

The subcommutativity characterizations all reduce to structural properties
of pair maps built from the conjugation of the two generators: positive
homogeneity, superadditivity, midpoint convexity/concavity, and the
Cauchy-additive structure of the scaling family Lambda_gamma.  This module
evaluates those maps and tests the properties by randomized sampling plus a
deterministic coarse grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .generators import Conjugation, Generator, GeneratorError, identity, reciprocal

KIND_PHI = "Phi"
KIND_PHI_TILDE = "PhiTilde"
KIND_PSI_T = "PsiT"
_KINDS = (KIND_PHI, KIND_PHI_TILDE, KIND_PSI_T)

#: Violation tolerance after normalizing by max(1, |value|); continuity
#: upgrades midpoint verdicts to full convexity/concavity.
CHECK_TOL = 1e-9

#: Deterministic coarse-grid decades prepended to every randomized check.
_GRID = tuple(10.0 ** k for k in range(-2, 3))


@dataclass(frozen=True, eq=False)
class PairMap:
    """A map on pairs of positive reals, built from a conjugation.

    Phi:      conj**-1(p1*conj(x1) + p2*conj(x2))      (conj = g o f**-1)
    PhiTilde: -conj(p1*conj**-1(x1) + p2*conj**-1(x2)) (conj = g o f**-1)
    PsiT:     conj**-1(t*conj(x1) + (1-t)*conj(x2))    (conj = f o g**-1)
    """

    kind: str
    conj: Conjugation
    weights: tuple[float, float]

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown pair-map kind {self.kind!r}")
        p1, p2 = self.weights
        if not (p1 > 0 and p2 > 0):
            raise ValueError(f"weights must be positive, got {self.weights}")
        if self.kind == KIND_PSI_T and not (0 < p1 < 1 and abs(p1 + p2 - 1) <= 1e-12):
            raise ValueError(f"PsiT weights must be (t, 1-t) with t in (0,1), got {self.weights}")

    def __call__(self, x1: float, x2: float) -> float:
        p1, p2 = self.weights
        c = self.conj
        if self.kind == KIND_PHI_TILDE:
            return -c(p1 * c.invert(x1) + p2 * c.invert(x2))
        return c.invert(p1 * c(x1) + p2 * c(x2))


def pairmap_eval(m: PairMap, x1: float, x2: float) -> float:
    return m(x1, x2)


def phi_map(f: Generator, g: Generator, weights: tuple[float, float]) -> PairMap:
    """The inner-mean map through g o f**-1 with the Y-space weights."""
    return PairMap(KIND_PHI, Conjugation(g, f), tuple(weights))


def phi_tilde(f: Generator, g: Generator, weights: tuple[float, float]) -> PairMap:
    """The negated outer-mean map through g o f**-1 with the X-space weights."""
    return PairMap(KIND_PHI_TILDE, Conjugation(g, f), tuple(weights))


def psi_t(f: Generator, g: Generator, t: float) -> PairMap:
    """The probability-case mixture map through f o g**-1 with weights (t, 1-t)."""
    return PairMap(KIND_PSI_T, Conjugation(f, g), (t, 1.0 - t))


@dataclass(frozen=True)
class CheckerVerdict:
    holds: bool
    worst_violation: float
    witness: Optional[tuple]
    trials: int
    kind: str = ""
    params: str = ""

    CSV_HEADER = ("kind", "params", "trials", "worst_violation", "witness")

    def csv_row(self) -> tuple:
        wit = "" if self.witness is None else ";".join(f"{v:.17g}" for v in self.witness)
        return (self.kind, self.params, self.trials, f"{self.worst_violation:.17g}", wit)


Sampler = Callable[[np.random.Generator], float]


def _log_uniform(lo: float = 1e-3, hi: float = 1e3) -> Sampler:
    llo, lhi = math.log(lo), math.log(hi)
    return lambda rng: math.exp(rng.uniform(llo, lhi))


def _run_check(points, violation, kind: str, params: str, tol: float) -> CheckerVerdict:
    worst = -math.inf
    witness = None
    trials = 0
    for pt in points:
        try:
            v = violation(pt)
        except (GeneratorError, OverflowError, ZeroDivisionError):
            continue
        trials += 1
        if not math.isfinite(v):
            continue
        if v > worst:
            worst, witness = v, pt
    return CheckerVerdict(
        holds=worst <= tol,
        worst_violation=worst,
        witness=witness,
        trials=trials,
        kind=kind,
        params=params,
    )


def _pair_points(trials: int, seed, sampler: Optional[Sampler], arity: int):
    """Coarse decade grid first, then seeded random points; each point is a
    flat tuple of `arity` positive coordinates."""
    draw = sampler or _log_uniform()
    if arity == 2:
        for a in _GRID:
            for b in _GRID:
                yield (a, b)
    else:
        for a in _GRID:
            for b in _GRID:
                for c in _GRID:
                    for d in _GRID:
                        yield (a, b, c, d)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        yield tuple(draw(rng) for _ in range(arity))


def check_inequality7(
    m: PairMap,
    gamma1: float,
    gamma2: float,
    *,
    direction: str = "le",
    trials: int = 2000,
    seed=0,
    tol: float = CHECK_TOL,
    sampler: Optional[Sampler] = None,
) -> CheckerVerdict:
    """Verdict on gamma1*Psi(x) + gamma2*Psi(y) <= Psi(gamma1*x + gamma2*y)
    (or >= for direction "ge") over sampled pairs of pairs.

    The reversed direction reuses the same code path with a sign flip, so
    the decreasing-generator cases share one implementation.
    """
    if not (0 < gamma1 < 1 < gamma1 + gamma2):
        raise ValueError(f"need 0 < gamma1 < 1 < gamma1 + gamma2, got ({gamma1}, {gamma2})")
    if direction not in ("le", "ge"):
        raise ValueError(f"direction must be 'le' or 'ge', got {direction!r}")
    sgn = 1.0 if direction == "le" else -1.0

    def violation(pt):
        x1, x2, y1, y2 = pt
        lhs = gamma1 * m(x1, x2) + gamma2 * m(y1, y2)
        rhs = m(gamma1 * x1 + gamma2 * y1, gamma1 * x2 + gamma2 * y2)
        return sgn * (lhs - rhs) / max(1.0, abs(rhs))

    return _run_check(
        _pair_points(trials, seed, sampler, 4),
        violation,
        "inequality7",
        f"gamma=({gamma1:g},{gamma2:g}),dir={direction}",
        tol,
    )


def check_homogeneous(
    m: PairMap,
    *,
    trials: int = 2000,
    seed=0,
    tol: float = CHECK_TOL,
    sampler: Optional[Sampler] = None,
) -> CheckerVerdict:
    """Verdict on Psi(gamma*x) == gamma*Psi(x) over sampled (gamma, x)."""

    def violation(pt):
        gamma, x1, x2 = pt[0], pt[1], pt[2]
        ref = gamma * m(x1, x2)
        return abs(m(gamma * x1, gamma * x2) - ref) / max(1.0, abs(ref))

    draw = sampler or _log_uniform()

    def points():
        for gamma in _GRID:
            for a in _GRID:
                for b in _GRID:
                    yield (gamma, a, b)
        rng = np.random.default_rng(seed)
        for _ in range(trials):
            yield (draw(rng), draw(rng), draw(rng))

    return _run_check(points(), violation, "homogeneous", "", tol)


def check_superadditive(
    m: PairMap,
    *,
    trials: int = 2000,
    seed=0,
    tol: float = CHECK_TOL,
    sampler: Optional[Sampler] = None,
) -> CheckerVerdict:
    """Verdict on Psi(x + y) >= Psi(x) + Psi(y) over sampled pairs."""

    def violation(pt):
        x1, x2, y1, y2 = pt
        s = m(x1 + y1, x2 + y2)
        return (m(x1, x2) + m(y1, y2) - s) / max(1.0, abs(s))

    return _run_check(
        _pair_points(trials, seed, sampler, 4), violation, "superadditive", "", tol
    )


def section_concavity(
    m: PairMap,
    *,
    trials: int = 2000,
    seed=0,
    tol: float = CHECK_TOL,
    sampler: Optional[Sampler] = None,
) -> CheckerVerdict:
    """Midpoint-concavity verdict on the section x -> Psi(x, 1)."""

    def violation(pt):
        x, y = pt
        mid = m(0.5 * (x + y), 1.0)
        return (0.5 * (m(x, 1.0) + m(y, 1.0)) - mid) / max(1.0, abs(mid))

    return _run_check(
        _pair_points(trials, seed, sampler, 2), violation, "section_concavity", "", tol
    )


def convexity_check(
    m: PairMap,
    *,
    trials: int = 2000,
    seed=0,
    tol: float = CHECK_TOL,
    sampler: Optional[Sampler] = None,
) -> CheckerVerdict:
    """Midpoint-convexity verdict on segments in the positive quadrant.

    Continuity of the conjugation upgrades midpoint convexity to convexity,
    so a clean midpoint verdict decides the convexity condition.
    """

    def violation(pt):
        x1, x2, y1, y2 = pt
        mid = m(0.5 * (x1 + y1), 0.5 * (x2 + y2))
        return (mid - 0.5 * (m(x1, x2) + m(y1, y2))) / max(1.0, abs(mid))

    return _run_check(
        _pair_points(trials, seed, sampler, 4), violation, "convexity", m.kind, tol
    )


def check_liminf_origin(
    m: PairMap,
    *,
    trials: int = 200,
    seed=0,
    tol: float = CHECK_TOL,
    decades: int = 6,
) -> CheckerVerdict:
    """Samples rays toward the origin over several decades of scale and
    checks that the map stays >= 0 in the limit (a hypothesis of the
    homogeneity/superadditivity equivalence, validated before use)."""

    def points():
        rng = np.random.default_rng(seed)
        for _ in range(trials):
            d1 = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
            d2 = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
            for k in range(1, decades + 1):
                s = 10.0 ** (-k)
                yield (s * d1, s * d2)

    def violation(pt):
        return -m(pt[0], pt[1])

    return _run_check(points(), violation, "liminf_origin", "", tol)


# --------------------------------------------------------------------------
# The scaling family Lambda_gamma and its Cauchy structure
# --------------------------------------------------------------------------

def lambda_gamma(c: Conjugation, gamma: float, x: float) -> float:
    """conj(gamma * conj**-1(x)): the scaling family of the conjugation."""
    if not (gamma > 0 and x > 0):
        raise ValueError(f"gamma and x must be positive, got ({gamma}, {x})")
    return c(gamma * c.invert(x))


#: Wide log-spaced gamma grid; the range separates power laws from
#: near-power impostors in the exponent fit.
_GAMMA_GRID = np.geomspace(1e-3, 1e3, 64)


@dataclass(frozen=True)
class LambdaStructure:
    additive: bool
    additive_worst: float
    additive_witness: Optional[tuple]
    multiplicative: bool
    multiplicative_worst: float
    gammas: tuple[float, ...]
    slope_samples: tuple[float, ...]
    exponent: float
    exponent_residual: float


def lambda_structure(
    c: Conjugation,
    *,
    trials: int = 500,
    seed=0,
    tol: float = CHECK_TOL,
    sampler: Optional[Sampler] = None,
) -> LambdaStructure:
    """Tests Cauchy additivity of Lambda_gamma, samples the slope function
    m(gamma) = conj(gamma * conj**-1(1)), tests its multiplicativity, and
    fits the power-law exponent by least squares in log-log coordinates."""
    draw = sampler or _log_uniform(1e-2, 1e2)
    rng = np.random.default_rng(seed)

    add_worst, add_wit = -math.inf, None
    for _ in range(trials):
        gamma, x, y = draw(rng), draw(rng), draw(rng)
        try:
            s = lambda_gamma(c, gamma, x + y)
            v = abs(lambda_gamma(c, gamma, x) + lambda_gamma(c, gamma, y) - s)
        except (GeneratorError, OverflowError):
            continue
        v /= max(1.0, abs(s))
        if v > add_worst:
            add_worst, add_wit = v, (gamma, x, y)

    base = c.invert(1.0)
    m_vals = np.array([c(g * base) for g in _GAMMA_GRID])
    slope, icept = np.polyfit(np.log(_GAMMA_GRID), np.log(m_vals), 1)
    fit = slope * np.log(_GAMMA_GRID) + icept
    residual = float(np.max(np.abs(np.log(m_vals) - fit)))

    mult_worst = -math.inf
    idx = rng.integers(0, len(_GAMMA_GRID), size=(trials, 2))
    for i, j in idx:
        g1, g2 = float(_GAMMA_GRID[i]), float(_GAMMA_GRID[j])
        ref = c(g1 * g2 * base)
        v = abs(c(g1 * base) * c(g2 * base) - ref) / max(1.0, abs(ref))
        if v > mult_worst:
            mult_worst = v

    return LambdaStructure(
        additive=add_worst <= tol,
        additive_worst=add_worst,
        additive_witness=add_wit,
        multiplicative=mult_worst <= tol,
        multiplicative_worst=mult_worst,
        gammas=tuple(float(g) for g in _GAMMA_GRID),
        slope_samples=tuple(float(v) for v in m_vals),
        exponent=float(slope),
        exponent_residual=residual,
    )


# --------------------------------------------------------------------------
# The concavity-profile map kappa and its closed-form second derivative
# --------------------------------------------------------------------------

def kappa_eval(a: float, b: float, beta1: float, beta2: float, t: float) -> float:
    """kappa(t) = a * (beta1*(t/a)**(1/b) + beta2*(1/a)**(1/b))**b for t > 0."""
    if not (a > 0 and t > 0):
        raise ValueError(f"need a > 0 and t > 0, got a={a}, t={t}")
    if b == 0:
        raise ValueError("exponent b must be non-zero")
    return a * (beta1 * (t / a) ** (1.0 / b) + beta2 * (1.0 / a) ** (1.0 / b)) ** b


def kappa_second(a: float, b: float, beta1: float, beta2: float, t: float) -> float:
    """Closed-form kappa''(t); nonpositive for all t > 0 exactly when b < 0
    or b >= 1, which is the concavity gate on the fitted exponent."""
    if not (a > 0 and t > 0):
        raise ValueError(f"need a > 0 and t > 0, got a={a}, t={t}")
    if b == 0:
        raise ValueError("exponent b must be non-zero")
    return (
        beta1
        * beta2
        * ((1.0 - b) / b)
        * (beta1 + beta2 * t ** (-1.0 / b)) ** (b - 2.0)
        * t ** (-1.0 - 1.0 / b)
    )


# --------------------------------------------------------------------------
# The reciprocal-pair closed-form identity
# --------------------------------------------------------------------------

_REMARK_MAP: Optional[PairMap] = None


def _remark_map() -> PairMap:
    global _REMARK_MAP
    if _REMARK_MAP is None:
        _REMARK_MAP = phi_tilde(identity(), reciprocal(), (1.0, 1.0))
    return _REMARK_MAP


def remark_identity(x1: float, x2: float, y1: float, y2: float) -> tuple[float, float]:
    """For the identity/reciprocal pair with unit weights, returns both

        PhiTilde(x) + PhiTilde(y) - PhiTilde(x + y)

    and its closed form (x1*y2 - x2*y1)**2 / ((x1+x2+y1+y2)(x1+x2)(y1+y2)).
    The two agree and are nonnegative, vanishing exactly at proportional
    pairs."""
    if min(x1, x2, y1, y2) <= 0:
        raise ValueError("all four coordinates must be positive")
    m = _remark_map()
    lhs_sum = m(x1, x2) + m(y1, y2) - m(x1 + y1, x2 + y2)
    closed = (x1 * y2 - x2 * y1) ** 2 / (
        (x1 + x2 + y1 + y2) * (x1 + x2) * (y1 + y2)
    )
    return lhs_sum, closed
