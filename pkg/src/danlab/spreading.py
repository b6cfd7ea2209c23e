"""Gaussian-measure Monte Carlo for the family ``eta_t`` and the toy model.

``eta_t(x, y, z) = P(z + y t) / y`` (``x + t P'(z)`` on ``y = 0``) is the
x-coordinate of ``flow_y(-t)``; the Gaussian is rotation invariant, so the
hit measures of ``eta_t`` and of ``x o flow_y(t)`` coincide.

Hit events are strict: ``|eta_t(p)| < r``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .automorphisms import flow_y
from .discrete import ThresholdSchedule
from .errors import BoundNotAchievable, InfeasibleRegion, InvariantBreach
from .poly import Polynomial
from .surface import Surface, SurfacePoint

MIN_SAMPLES = 1000
DEFAULT_SAMPLES = 100_000
# measure of the unit disc under the standard Gaussian on C
GAMMA_UNIT_DISC = 1.0 - math.exp(-0.5)


# -- Gaussian measure ---------------------------------------------------------


def gaussian_samples(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` draws of ``t = a + ib`` with ``a, b`` independent standard normals."""
    ab = rng.standard_normal((n, 2))
    return ab[:, 0] + 1j * ab[:, 1]


def gaussian_sample(rng: np.random.Generator) -> complex:
    return complex(gaussian_samples(rng, 1)[0])


def gaussian_tail(s: float) -> float:
    """``gamma{|t| >= s} = integral_s^inf r e^(-r^2/2) dr = e^(-s^2/2)``."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    return math.exp(-0.5 * s * s)


# -- families -----------------------------------------------------------------


def eta_coefficients(S: Surface, p: SurfacePoint) -> list:
    """Coefficients of ``t -> eta_t(p)``: ``[x, c_1, c_2 y, ..., c_d y^(d-1)]``."""
    P = S.P if p.exact else S.P.approx()
    c = P.taylor(p.z)
    return [p.x] + [c[k] * p.y ** (k - 1) for k in range(1, len(c))]


def eta(S: Surface, t, p: SurfacePoint):
    """``x(flow_y(-t, p))``, evaluated the same way as the flow itself."""
    return flow_y(S, -t, p).x


@dataclass(frozen=True)
class EtaFamily:
    """``t -> eta_t`` on a surface (approximate evaluation)."""

    surface: Surface

    def values(self, ts: np.ndarray, p: SurfacePoint) -> np.ndarray:
        x, y, z = complex(p.x), complex(p.y), complex(p.z)
        P = self.surface.P.approx()
        if abs(y) >= 1.0:
            return P.evaluate_array(z + y * ts) / y
        coeffs = np.array([complex(c) for c in eta_coefficients(self.surface, p.approx())])
        return np.polynomial.polynomial.polyval(ts, coeffs)

    def bound(self, p: SurfacePoint, r: float):
        y = abs(complex(p.y))
        return claim1_bound(self.surface, y, r) if y > 0 else None


@dataclass(frozen=True)
class ToyFamily:
    """``pi_t(x, y) = x + t f(y)`` on the plane, with ``f`` a polynomial or ``exp(-y)``."""

    kind: str
    poly: Polynomial | None = None

    @classmethod
    def parse(cls, text: str) -> "ToyFamily":
        text = text.strip()
        if text.startswith("f="):
            text = text[2:]
        if text == "exp-neg":
            return cls("exp-neg")
        if text.startswith("poly:"):
            return cls("poly", Polynomial.parse(text[5:], exact=False))
        raise ValueError(f"unknown toy family {text!r} (use 'poly:<coeffs>' or 'exp-neg')")

    def format(self) -> str:
        return "exp-neg" if self.kind == "exp-neg" else "poly:" + self.poly.format()

    def f(self, y):
        if self.kind == "exp-neg":
            if isinstance(y, np.ndarray):
                return np.exp(-y)
            try:
                return cmath.exp(-complex(y))
            except OverflowError:
                # |f| beyond double range: no t of moderate size can cancel it
                return complex(math.inf, 0.0)
        if isinstance(y, np.ndarray):
            return self.poly.evaluate_array(y)
        return self.poly(complex(y))

    def values(self, ts: np.ndarray, v) -> np.ndarray:
        x, y = v
        return complex(x) + ts * self.f(complex(y))

    def bound(self, v, r):
        return None


def toy_eta(T: ToyFamily, t, v):
    x, y = v
    return complex(x) + complex(t) * T.f(complex(y))


# -- Monte Carlo ----------------------------------------------------------------


@dataclass(frozen=True)
class SpreadReport:
    point: tuple
    r: float
    samples: int
    hits: int
    bound: float | None = None
    estimate: float = field(init=False)
    stderr: float = field(init=False)

    def __post_init__(self):
        est = self.hits / self.samples
        object.__setattr__(self, "estimate", est)
        object.__setattr__(self, "stderr", math.sqrt(est * (1.0 - est) / self.samples))

    @property
    def upper(self) -> float:
        return self.estimate + 3.0 * self.stderr

    def to_dict(self) -> dict:
        return {
            "point": [repr(c) for c in self.point],
            "r": self.r,
            "samples": self.samples,
            "hits": self.hits,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "bound": self.bound,
        }


def _point_tuple(p) -> tuple:
    if isinstance(p, SurfacePoint):
        return tuple(complex(c) for c in p.coords)
    return tuple(complex(c) for c in p)


def count_hits(family, p, r: float, ts: np.ndarray) -> int:
    """Number of ``t`` in ``ts`` with ``|family_t(p)| < r``; sums over chunks."""
    with np.errstate(over="ignore", invalid="ignore"):
        vals = family.values(ts, p)
    return int(np.count_nonzero(np.abs(vals) < r))


def mc_hit_probability(family, p, r: float, N: int, rng: np.random.Generator,
                       chunk: int = 1 << 16) -> SpreadReport:
    """Estimate ``gamma{t : |family_t(p)| < r}`` from ``N`` Gaussian draws."""
    if N < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {N}")
    if r < 0:
        raise ValueError("r must be nonnegative")
    hits = 0
    left = N
    while left:
        n = min(chunk, left)
        hits += count_hits(family, p, r, gaussian_samples(rng, n))
        left -= n
    bound = family.bound(p, r) if r > 0 else None
    return SpreadReport(_point_tuple(p), float(r), N, hits, bound)


def claim1_bound(S: Surface, y_mod: float, r: float) -> float:
    """``pi rho^2/|y|^2 + |y|^((2-2d)/d) pi (r/alpha)^(2/d)``, clamped to ``[0, 1]``."""
    if y_mod <= 0:
        raise ValueError("y_mod must be positive")
    b = S.bounds
    d = S.d
    val = math.pi * b.rho**2 / y_mod**2 + y_mod ** ((2.0 - 2.0 * d) / d) * math.pi * (r / b.alpha) ** (2.0 / d)
    return min(1.0, max(0.0, val))


# -- critical radius -----------------------------------------------------------------


def _coef_majorants(S: Surface, Z: float) -> list:
    """``C_k(Z) = sum_{j>=k} binom(j,k) |a_j| Z^(j-k)`` bounds ``|P^(k)(z)/k!|`` on ``|z| <= Z``."""
    mods = [abs(complex(a)) for a in S.P.coeffs]
    d = S.d
    return [math.fsum(math.comb(j, k) * mods[j] * Z ** (j - k) for j in range(k, d + 1))
            for k in range(d + 1)]


def cR_lower_bound(S: Surface, R: float, r: float) -> float:
    """Certified lower bound ``s*`` for ``|t|`` on hits from the region ``|x| >= R``, ``|y| < R^(1/d^2)``.

    On that region ``|P(z)| = |x||y|`` bounds ``|z|`` by ``Z``, and
    ``|eta_t - x| <= F(|t|) = sum_k |y|^(k-1) C_k(Z) |t|^k``.  A hit needs
    ``F(|t|) > |x| - r``.  Every coefficient of ``F`` grows like a power of
    ``|x|`` below one, so ``F/|x|`` is nonincreasing in ``|x|`` and the root of
    ``F_R(s) = R - r`` bounds ``|t|`` for all ``|x| >= R``.
    """
    if R <= r or R < 1:
        return 0.0
    b = S.bounds
    d = S.d
    Y = R ** (1.0 / d**2)
    Z = max(b.rho, (R * Y / b.alpha) ** (1.0 / d))
    C = _coef_majorants(S, Z)
    coeffs = [Y ** (k - 1) * C[k] for k in range(1, d + 1)]

    def F(s):
        return math.fsum(c * s**k for k, c in enumerate(coeffs, start=1)) - (R - r)

    hi = 1.0
    while F(hi) < 0:
        hi *= 2.0
        if hi > 1e300:
            raise BoundNotAchievable("critical radius search overflowed")
    return brentq(F, 0.0, hi, xtol=1e-300, rtol=1e-12)


def certified_hit_bound(S: Surface, R: float, r: float) -> tuple:
    """Upper bound on ``gamma{|eta_t(p)| < r}`` for every ``p`` with exhaustion ``>= R``.

    Either ``|y| >= R^(1/d^2)`` (the ``|y|`` bound applies) or ``|x| >= R``
    with ``|y|`` below that (the Gaussian tail beyond the critical radius
    applies); the maximum covers both.  Returns ``(bound, y_part, x_part)``.
    """
    if R < 1:
        return 1.0, 1.0, 1.0
    y_part = claim1_bound(S, R ** (1.0 / S.d**2), r)
    x_part = gaussian_tail(cR_lower_bound(S, R, r)) if R > r else 1.0
    return max(y_part, x_part), y_part, x_part


def estimate_cR(S: Surface, R: float, r: float, rng: np.random.Generator, n_z: int = 64,
                n_phase: int = 16, n_theta: int = 64) -> tuple:
    """Sampled upper estimate of ``c_R = inf{|t| : |eta_t| <= r, |x| = R, |y| <= R^(1/d^2)}``.

    Samples ``z`` on an annulus and a phase for ``y``, puts ``|y| = |P(z)|/R``
    so that ``x = P(z)/y`` has modulus ``R``, keeps samples with
    ``0 < |y| <= R^(1/d^2)``, and solves ``eta_t = r e^(i theta)`` for ``t``.
    Returns ``(value, True)``; the flag marks the value as an upper bound.
    """
    if R <= r:
        raise ValueError("need R > r")
    d = S.d
    b = S.bounds
    ymax = R ** (1.0 / d**2)
    zmax = max(b.rho, (R * ymax / b.alpha) ** (1.0 / d)) * 1.5
    P = S.P.approx()
    radii = np.geomspace(1e-3, zmax, n_z)
    thetas = np.linspace(0.0, 2 * np.pi, n_theta, endpoint=False)
    best = math.inf
    found = False
    for rad in radii:
        z = rad * np.exp(2j * np.pi * rng.random())
        Pz = P(z)
        ymod = abs(Pz) / R
        if not 0 < ymod <= ymax:
            continue
        for ph in rng.random(n_phase):
            y = ymod * cmath.exp(2j * math.pi * ph)
            x = Pz / y
            if abs(abs(x) - R) > 0.02 * R:
                continue
            found = True
            # eta_t = P(z + y t)/y; coefficients in t, low to high
            base = [complex(c) for c in eta_coefficients(S, SurfacePoint(x, y, z, S))]
            for th in thetas:
                coeffs = list(base)
                coeffs[0] -= r * cmath.exp(1j * th)
                roots = np.roots(coeffs[::-1])
                if len(roots):
                    best = min(best, float(np.min(np.abs(roots))))
    if not found:
        raise InfeasibleRegion(f"no sampled point has |x| = {R} with |y| <= {ymax}")
    return best, True


# -- threshold sequences ------------------------------------------------------------


def threshold_radius(S: Surface, r: float, delta: float, start: float = 1.0,
                     max_doublings: int = 1100, bisections: int = 60) -> float:
    """Smallest (up to bisection) ``R >= start`` with ``certified_hit_bound(R, r) < delta``."""
    if S.d < 2:
        raise BoundNotAchievable("the hit bound does not decay when deg P = 1")
    lo = max(1.0, start)
    if certified_hit_bound(S, lo, r)[0] < delta:
        return lo
    hi = max(lo * 2.0, r + 1.0)
    for _ in range(max_doublings):
        if certified_hit_bound(S, hi, r)[0] < delta:
            break
        lo, hi = hi, hi * 2.0
        if hi > 1e300:
            raise BoundNotAchievable(f"bound stays above {delta} up to R = 1e300")
    else:
        raise BoundNotAchievable(f"bound stays above {delta} after {max_doublings} doublings")
    for _ in range(bisections):
        mid = 0.5 * (lo + hi)
        if certified_hit_bound(S, mid, r)[0] < delta:
            hi = mid
        else:
            lo = mid
    return hi


def threshold_sequence(S: Surface, n_max: int, r_ball: float = 1.0) -> ThresholdSchedule:
    """Radii ``R_n`` with certified hit bound ``< 2^-(n+1)`` for the ball of radius ``r_ball * n``."""
    if not 1 <= n_max <= 64:
        raise ValueError("n_max must be in 1..64")
    radii = []
    prev = 1.0
    for n in range(1, n_max + 1):
        delta = 2.0 ** -(n + 1)
        R = threshold_radius(S, r_ball * n, delta, start=prev)
        radii.append(R)
        prev = R
    sched = ThresholdSchedule(tuple(radii), r_ball)
    for n, R in enumerate(sched.radii, start=1):
        if certified_hit_bound(S, R, r_ball * n)[0] >= sched.deltas[n - 1]:
            raise InvariantBreach(f"radius {R} does not certify delta_{n}")
    return sched


# -- toy model ---------------------------------------------------------------------


@dataclass(frozen=True)
class ToyVerdict:
    family: str
    r: float
    eps: float
    verdict: str
    radius: float | None
    rows: tuple
    witnesses: tuple

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "r": self.r,
            "eps": self.eps,
            "verdict": self.verdict,
            "radius": self.radius,
            "rows": list(self.rows),
            "witnesses": list(self.witnesses),
        }


def _adversarial_y(T: ToyFamily, R: float, n_angles: int = 256) -> complex:
    """The point on ``|y| = R`` where ``|f|`` is smallest among ``n_angles`` samples."""
    ys = R * np.exp(2j * np.pi * np.arange(n_angles) / n_angles)
    with np.errstate(over="ignore", under="ignore"):
        vals = np.abs(T.f(ys))
    return complex(ys[int(np.argmin(vals))])


def _toy_points(T: ToyFamily, R: float, n_points: int, rng: np.random.Generator) -> list:
    pts = [(0j, _adversarial_y(T, R))]
    for _ in range(n_points):
        top = R * (1.0 + rng.random())
        other = top * rng.random()
        a, b = np.exp(2j * np.pi * rng.random(2))
        if rng.random() < 0.5:
            pts.append((complex(top * a), complex(other * b)))
        else:
            pts.append((complex(other * a), complex(top * b)))
    return pts


def toy_spread_verdict(T: ToyFamily, r: float, eps: float, R_grid, N: int, rng: np.random.Generator,
                       n_points: int = 16) -> ToyVerdict:
    """Spreading evidence at the first grid ``R`` where every sampled ``v`` with
    ``||v|| in [R, 2R]`` has ``estimate + 3 stderr < eps``; otherwise
    non-spreading evidence through the adversarial points ``(0, y*)``.

    A witness is *certified* when ``|x| < r/2`` and ``|f(y*)| < r/2``: then
    the whole unit disc of ``t`` hits, so its measure is at least
    ``1 - e^(-1/2)``.
    """
    rows = []
    witnesses = []
    radius = None
    for R in sorted(float(v) for v in R_grid):
        pts = _toy_points(T, R, n_points, rng)
        reports = [mc_hit_probability(T, v, r, N, rng) for v in pts]
        sup = max(rep.upper for rep in reports)
        adv = reports[0]
        y_star = pts[0][1]
        with np.errstate(over="ignore", under="ignore"):
            fy = abs(T.f(y_star))
        rows.append({"R": R, "sup_upper": sup, "points": len(pts)})
        witnesses.append({
            "R": R,
            "v": [repr(pts[0][0]), repr(y_star)],
            "estimate": adv.estimate,
            "stderr": adv.stderr,
            "certified": bool(abs(pts[0][0]) < r / 2 and fy < r / 2),
        })
        if radius is None and sup < eps:
            radius = R
            break
    verdict = "spreading evidence" if radius is not None else "non-spreading evidence"
    return ToyVerdict(T.format(), float(r), float(eps), verdict, radius, tuple(rows),
                      tuple(witnesses) if radius is None else ())
