"""Danielewski surfaces ``X = {xy = P(z)}`` and points on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvariantBreach, NotOnSurface, NotSquarefree, ZeroLeadingCoefficient, ZeroPolynomial
from .poly import Polynomial, exact_roots_search, squarefree_check
from .scalars import ZERO, ExactComplex, abs2, is_exact, modulus_cmp, modulus_le

# relative tolerance factor for membership in the approximate backend
MEMBERSHIP_RTOL = 1e-9


@dataclass(frozen=True)
class GrowthBounds:
    """Constants with ``alpha|z|^d <= |P(z)| <= beta|z|^d`` for ``|z| >= rho``
    and ``|P(z)| <= M`` for ``|z| <= rho``."""

    rho: float
    alpha: float
    beta: float
    M: float


def growth_constants(P: Polynomial, verify: bool = True) -> GrowthBounds:
    """Closed-form growth constants from the triangle inequality.

    With ``S = sum_{k<d} |a_k|`` and ``rho = max(1, 2S/|a_d|)`` every
    ``|z| >= rho`` has ``|P(z) - a_d z^d| <= S|z|^(d-1) <= |a_d||z|^d / 2``,
    so ``alpha = |a_d|/2`` and ``beta = 2|a_d|`` bracket ``|P(z)|/|z|^d``.
    """
    if P.is_zero:
        raise ZeroPolynomial("growth constants of the zero polynomial")
    d = P.degree
    if d < 1:
        raise ValueError("growth constants need deg(P) >= 1")
    mods = [abs(complex(a)) for a in P.coeffs]
    lead = mods[-1]
    if lead == 0:
        raise ZeroLeadingCoefficient("leading coefficient vanished")
    lower = math.fsum(mods[:-1])
    rho = max(1.0, 2.0 * lower / lead)
    bounds = GrowthBounds(
        rho=rho,
        alpha=lead / 2.0,
        beta=2.0 * lead,
        M=math.fsum(m * rho**k for k, m in enumerate(mods)),
    )
    if verify:
        _verify_growth(P, bounds)
    return bounds


def _verify_growth(P: Polynomial, b: GrowthBounds, n_circle: int = 1000, n_grid: int = 32) -> None:
    d = P.degree
    theta = np.linspace(0.0, 2 * np.pi, n_circle, endpoint=False)
    slack = 1e-12
    for radius in (b.rho, 2 * b.rho, 4 * b.rho):
        vals = np.abs(P.evaluate_array(radius * np.exp(1j * theta)))
        lo, hi = b.alpha * radius**d, b.beta * radius**d
        if np.any(vals < lo * (1 - slack)) or np.any(vals > hi * (1 + slack)):
            raise InvariantBreach(f"growth bounds fail on |z| = {radius}")
    g = np.linspace(-b.rho, b.rho, n_grid)
    zz = (g[:, None] + 1j * g[None, :]).ravel()
    zz = zz[np.abs(zz) <= b.rho]
    if np.any(np.abs(P.evaluate_array(zz)) > b.M * (1 + slack)):
        raise InvariantBreach("|P| exceeds M inside the disc of radius rho")


@dataclass(frozen=True)
class Surface:
    P: Polynomial
    d: int
    bounds: GrowthBounds

    @property
    def exact(self) -> bool:
        return self.P.exact

    @property
    def dP(self) -> Polynomial:
        return self.P.derivative()

    def __str__(self):
        return self.P.format()


def surface_new(P: Polynomial | str) -> Surface:
    if isinstance(P, str):
        P = Polynomial.parse(P)
    if P.is_zero:
        raise ZeroPolynomial("P must be nonzero")
    if P.degree < 1:
        raise ValueError("P must have degree >= 1")
    if not squarefree_check(P):
        raise NotSquarefree(f"P = {P.format()} has a multiple root")
    return Surface(P=P, d=P.degree, bounds=growth_constants(P))


@dataclass(frozen=True)
class SurfacePoint:
    """A point ``(x, y, z)`` with ``xy = P(z)``; exact iff all coordinates are exact."""

    x: object
    y: object
    z: object
    surface: Surface | None = field(default=None, repr=False, compare=False)

    @property
    def exact(self) -> bool:
        return isinstance(self.x, ExactComplex) and isinstance(self.y, ExactComplex) and isinstance(self.z, ExactComplex)

    @property
    def coords(self):
        return (self.x, self.y, self.z)

    def approx(self) -> "SurfacePoint":
        return SurfacePoint(complex(self.x), complex(self.y), complex(self.z), self.surface)

    def swapped(self) -> "SurfacePoint":
        return SurfacePoint(self.y, self.x, self.z, self.surface)


def residual(S: Surface, x, y, z):
    """``xy - P(z)``; exact for exact input."""
    return x * y - S.P(z)


def membership_tolerance(S: Surface, x, y, z) -> float:
    return MEMBERSHIP_RTOL * (1.0 + abs(complex(x)) * abs(complex(y)) + abs(complex(S.P(z))))


def on_surface(S: Surface, x, y, z) -> bool:
    if is_exact(x) and is_exact(y) and is_exact(z) and S.exact:
        return not residual(S, x, y, z)
    x, y, z = complex(x), complex(y), complex(z)
    return abs(residual(S, x, y, z)) <= membership_tolerance(S, x, y, z)


def point_new(S: Surface, x, y, z) -> SurfacePoint:
    """Validated constructor; exact coordinates are checked with zero tolerance."""
    if is_exact(x) and is_exact(y) and is_exact(z):
        x, y, z = (ExactComplex.coerce(v) for v in (x, y, z))
    else:
        x, y, z = complex(x), complex(y), complex(z)
    if not on_surface(S, x, y, z):
        raise NotOnSurface(residual(S, x, y, z))
    return SurfacePoint(x, y, z, S)


def exhaustion(p: SurfacePoint) -> float:
    """``max(|x|, |y|)`` as a float; decisive comparisons use ``exhaustion_le``/``exhaustion_gt``."""
    return max(abs(p.x), abs(p.y))


def dominant_coordinate(p: SurfacePoint):
    """The coordinate realizing the exhaustion, decided exactly when possible."""
    return p.x if modulus_cmp(p.x, p.y) >= 0 else p.y


def exhaustion_le(p: SurfacePoint, bound: float) -> bool:
    return modulus_le(dominant_coordinate(p), bound)


def exhaustion_gt(p: SurfacePoint, bound: float) -> bool:
    return not exhaustion_le(p, bound)


def exhaustion_sq(p: SurfacePoint):
    """Exact squared exhaustion for exact points."""
    return max(abs2(p.x), abs2(p.y))


def random_point(S: Surface, rng: np.random.Generator, exact: bool = True, scale: int = 10,
                 den: int = 8, zero_fiber_prob: float = 0.0) -> SurfacePoint:
    """Random on-surface point: pick ``y != 0`` and ``z``, then ``x = P(z)/y``.

    In the exact backend the coordinates are Gaussian rationals with
    numerators in ``[-scale, scale]`` and denominators in ``[1, den]``.
    With probability ``zero_fiber_prob`` the point is put on the fiber
    ``y = 0`` over a rational root of ``P`` (when one exists).
    """
    if exact:
        def q():
            return ExactComplex(
                _rand_rat(rng, scale, den),
                _rand_rat(rng, scale, den),
            )

        if zero_fiber_prob and rng.random() < zero_fiber_prob:
            roots = exact_roots_search(S.P)
            if roots:
                z = roots[int(rng.integers(len(roots)))]
                return SurfacePoint(q(), ZERO, z, S)

        y = q()
        while not y:
            y = q()
        z = q()
        return SurfacePoint(S.P(z) / y, y, z, S)
    P = S.P.approx()
    y = complex(*rng.normal(0, scale, 2))
    z = complex(*rng.normal(0, scale ** 0.5, 2))
    return SurfacePoint(P(z) / y, y, z, S)


def _rand_rat(rng, scale, den):
    return Fraction(int(rng.integers(-scale, scale + 1)), int(rng.integers(1, den + 1)))
