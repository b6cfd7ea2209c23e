"""Explicit automorphism words for the tameness constructions.

Every operation returns a word together with enough data to re-verify its
postcondition by applying the word.  Nonconstructive choices (generic flow
times, values of entire functions on discrete sets) are replaced by
Gaussian draws with retry and by Lagrange interpolation through the
finitely many prescribed nodes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .automorphisms import AutomorphismWord, ReplicaX, ReplicaY, flow_x, flow_y, flow_y_polynomial
from .discrete import DiscreteSet, set_new, split
from .errors import (
    DomainError,
    ExhaustedAttempts,
    InjectivityLost,
    InvariantBreach,
    NoExactFlowTime,
    NotInjective,
    SearchDiverged,
)
from .poly import Polynomial, exact_roots_search, flat_interpolate, interpolate
from .scalars import ExactComplex, is_exact
from .spreading import gaussian_sample
from .surface import Surface, SurfacePoint, exhaustion, exhaustion_gt

# separation required from randomized projections, relative to the scale of the values
GAP_RTOL = 1e-6
ZERO_MARGIN = 1e-6
# Newton settings for flow-time solves in the approximate backend
NEWTON_RESTARTS = 32
NEWTON_MAX_ITER = 200
NEWTON_RTOL = 1e-10
# residual allowed for map_tame_to_tame in the approximate backend (relative)
MAP_RTOL = 1e-9
MAX_DOUBLINGS = 64


def _other(axis: str) -> str:
    return "X" if axis == "Y" else "Y"


def _check_axis(axis: str) -> str:
    axis = axis.upper()
    if axis not in ("X", "Y"):
        raise ValueError(f"axis must be 'X' or 'Y', got {axis!r}")
    return axis


def _proj(p: SurfacePoint, axis: str):
    return p.x if axis == "X" else p.y


def _replica(axis: str, h: Polynomial, t=1):
    """Replica generator whose invariant coordinate is ``axis``."""
    return ReplicaY(h, t) if axis == "Y" else ReplicaX(h, t)


def _flow(S: Surface, axis: str, t, p: SurfacePoint) -> SurfacePoint:
    return flow_y(S, t, p) if axis == "Y" else flow_x(S, t, p)


# -- witnesses ---------------------------------------------------------------------


@dataclass(frozen=True)
class TameWitness:
    """A word pushing every point of ``points`` past its target ``zeta``."""

    word: AutomorphismWord
    points: tuple
    zeta: tuple
    achieved: tuple

    def __post_init__(self):
        for p, z, a in zip(self.points, self.zeta, self.achieved):
            if not a > z:
                raise InvariantBreach(f"witness fails at {p}: {a} <= {z}")

    def verify(self, S: Surface) -> bool:
        return all(exhaustion_gt(self.word.apply(S, p), z) for p, z in zip(self.points, self.zeta))

    def to_dict(self) -> dict:
        return {
            "word": self.word.to_records(),
            "zeta": list(self.zeta),
            "achieved": list(self.achieved),
            "verified": all(a > z for a, z in zip(self.achieved, self.zeta)),
        }


def _zeta_values(D: DiscreteSet, zeta) -> tuple:
    if callable(zeta):
        vals = [zeta(p) for p in D.points]
    elif isinstance(zeta, dict):
        vals = [zeta[p] for p in D.points]
    elif isinstance(zeta, (int, float)):
        vals = [zeta] * len(D)
    else:
        vals = list(zeta)
        if len(vals) != len(D):
            raise ValueError("one zeta value per point")
    return tuple(float(v) for v in vals)


# -- randomized projections -----------------------------------------------------------


def _projection_separated(vals, pairwise: bool = False) -> bool:
    """Separation of projected values.

    Default: every gap exceeds ``GAP_RTOL * (1 + max|v|)`` and every value
    exceeds ``ZERO_MARGIN`` in modulus.  ``pairwise``: every gap exceeds
    ``GAP_RTOL`` times the larger of the two moduli (no zero margin), which
    is what interpolation needs when the values span many magnitudes.
    """
    cv = np.array([complex(v) for v in vals])
    if len(cv) == 0:
        return True
    if not np.all(np.isfinite(cv)):
        return False
    if not pairwise and np.min(np.abs(cv)) <= ZERO_MARGIN:
        return False
    if len(cv) < 2:
        return True
    diffs = np.abs(cv[:, None] - cv[None, :])
    diffs[np.diag_indices(len(cv))] = np.inf
    if pairwise:
        mags = np.abs(cv)
        return bool(np.all(diffs > GAP_RTOL * np.maximum(mags[:, None], mags[None, :])))
    return float(diffs.min()) > GAP_RTOL * (1.0 + float(np.max(np.abs(cv))))


def _random_time(rng, exact: bool, scale: float = 1.0):
    t = gaussian_sample(rng) * scale
    if exact:
        return ExactComplex(Fraction(t.real).limit_denominator(64), Fraction(t.imag).limit_denominator(64))
    return t


def randomize_projection(S: Surface, D: DiscreteSet, rng: np.random.Generator, attempts: int = 64,
                         axis: str = "X", pairwise: bool = False):
    """Make the ``axis`` projection injective and zero-avoiding with a random replica.

    The word is a single replica of the opposite flow with multiplier
    ``1 + s w`` and time ``t``, so the other coordinate is preserved.  The
    linear term matters when ``d = 1`` (every plain flow then shifts the
    moved coordinate by the same amount) and for points whose plain-flow
    trajectories coincide.  ``s`` and ``t`` are Gaussian, scaled by
    ``1/(1 + max|invariant|)`` so that ``z`` moves by ``O(1)`` and the
    coordinates stay of the same size.  Returns ``(t, word)``.
    """
    axis = _check_axis(axis)
    invariant = _other(axis)
    exact = D.exact and S.exact
    inv_max = max((abs(complex(_proj(p, invariant))) for p in D.points), default=0.0)
    scale = 1.0 / (1.0 + inv_max)
    for _ in range(attempts):
        t = _random_time(rng, exact, scale)
        s = _random_time(rng, exact, scale)
        if not t:
            continue
        word = AutomorphismWord((_replica(invariant, Polynomial([1, s]), t),))
        vals = [_proj(word.apply(S, p), axis) for p in D.points]
        if _projection_separated(vals, pairwise):
            return t, word
    raise ExhaustedAttempts(f"no separating flow time in {attempts} attempts")


def projection_ok(D: DiscreteSet, axis: str, pairwise: bool = True) -> bool:
    """Injective (exactly, in the exact backend) and separated enough for interpolation."""
    vals = [_proj(p, axis) for p in D.points]
    if D.exact:
        return len(set(vals)) == len(vals)
    return len(vals) <= 1 or _projection_separated(vals, pairwise)


# -- flow-time solves -------------------------------------------------------------------


def _newton_roots(coeffs: np.ndarray, rng: np.random.Generator) -> list:
    """Roots of ``sum coeffs[k] w^k`` by Newton from random starts, each certified.

    Starting moduli are log-uniform between the Cauchy lower and upper root
    bounds, so roots of very different sizes are all reachable.
    """
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    deriv = np.polynomial.polynomial.polyder(coeffs)
    mags = np.abs(coeffs)
    hi = 1.0 + float(np.max(mags[:-1] / mags[-1]))
    nz = np.nonzero(mags)[0]
    low = int(nz[0])
    if low > 0:
        return [0j]
    lo = 1.0 / (1.0 + float(np.max(mags[1:] / mags[0])))
    found = []
    for _ in range(NEWTON_RESTARTS):
        w = math.exp(rng.uniform(math.log(lo), math.log(hi))) * cmath.exp(2j * math.pi * rng.random())
        with np.errstate(all="ignore"):
            for _ in range(NEWTON_MAX_ITER):
                f = np.polynomial.polynomial.polyval(w, coeffs)
                df = np.polynomial.polynomial.polyval(w, deriv)
                if f == 0 or df == 0 or not np.isfinite(df):
                    break
                step = f / df
                w -= step
                if abs(step) <= 1e-15 * abs(w):
                    break
            terms = mags * np.abs(w) ** np.arange(len(coeffs))
            resid = abs(np.polynomial.polynomial.polyval(w, coeffs))
        if np.isfinite(resid) and np.isfinite(w) and resid <= NEWTON_RTOL * (1.0 + float(terms.sum())):
            found.append(complex(w))
    return found


def solve_flow_time(S: Surface, p: SurfacePoint, target, axis: str = "Y", rng=None):
    """A time ``xi`` with ``moved(flow_axis(xi, p)) = target``, smallest modulus first.

    ``axis`` is the invariant coordinate; the moved coordinate is the other
    one.  The equation is a polynomial of degree ``<= d`` in ``xi`` (linear
    when the invariant vanishes).  Exact points get exact roots or
    ``NoExactFlowTime``.
    """
    axis = _check_axis(axis)
    q = p if axis == "Y" else p.swapped()
    Q = flow_y_polynomial(S, q) - Polynomial([target])
    if Q.is_zero:
        return ExactComplex(0) if Q.exact else 0j
    if Q.degree == 0:
        raise InvariantBreach(f"orbit coordinate is constant at {p}")
    if p.exact and is_exact(target):
        roots = exact_roots_search(Q)
        if not roots:
            raise NoExactFlowTime(f"no rational flow time reaches {target} from {p}")
        return min(roots, key=lambda r: (r.abs2(), r.re, r.im))
    if Q.degree == 1:
        a0, a1 = (complex(c) for c in Q.coeffs)
        return -a0 / a1
    rng = rng if rng is not None else np.random.default_rng(0)
    roots = _newton_roots(np.array([complex(c) for c in Q.coeffs]), rng)
    if not roots:
        raise SearchDiverged(f"Newton found no certified flow time from {p} to {target}")
    return min(roots, key=lambda r: (abs(r), r.real, r.imag))


def prescribe_p2(S: Surface, D: DiscreteSet, h, axis: str = "Y", rng=None,
                 flat: bool = False) -> AutomorphismWord:
    """One replica fixing the ``axis`` coordinate that moves the other coordinate of each ``p`` to ``h(p)``.

    Needs an injective ``axis`` projection; flow times are interpolated
    against the invariant values (with zero slopes when ``flat``).
    """
    axis = _check_axis(axis)
    inv = [_proj(p, axis) for p in D.points]
    if len(set(inv)) != len(inv) if D.exact else not projection_ok(D, axis):
        raise NotInjective(f"{axis}-projection is not injective")
    targets = [h(p) if callable(h) else h[i] for i, p in enumerate(D.points)]
    times = [solve_flow_time(S, p, c, axis, rng) for p, c in zip(D.points, targets)]
    if all(not t for t in times):
        return AutomorphismWord()
    mult = (flat_interpolate if flat else interpolate)(list(zip(inv, times)))
    return AutomorphismWord((_replica(axis, mult, 1),))


# -- escape -------------------------------------------------------------------


def _escape_time(S: Surface, p: SurfacePoint, zeta: float, axis: str, margin: float):
    s = 0
    for _ in range(MAX_DOUBLINGS + 1):
        t = ExactComplex(s) if p.exact else complex(s)
        q = _flow(S, axis, t, p)
        if exhaustion_gt(q, zeta * margin):
            return t
        s = 1 if s == 0 else 2 * s
    raise SearchDiverged(f"no escape for {p} past {zeta} after {MAX_DOUBLINGS} doublings")


def spread_past(S: Surface, D: DiscreteSet, zeta, axis: str | None = None) -> TameWitness:
    """A single replica moving each point of ``D`` past ``zeta`` along its orbit.

    ``axis`` is the invariant coordinate and its projection must be
    injective on ``D``; by default Y is used when possible, else X.
    """
    zv = _zeta_values(D, zeta)
    if axis is None:
        if projection_ok(D, "Y"):
            axis = "Y"
        elif projection_ok(D, "X"):
            axis = "X"
        else:
            raise NotInjective("neither coordinate projection is injective; randomize first")
    axis = _check_axis(axis)
    if not projection_ok(D, axis):
        raise NotInjective(f"{axis}-projection is not injective")
    margin = 1.0 if D.exact else 2.0
    times = [_escape_time(S, p, max(z, 0.0), axis, margin) for p, z in zip(D.points, zv)]
    if all(not t for t in times):
        word = AutomorphismWord()
    else:
        mult = interpolate([(_proj(p, axis), t) for p, t in zip(D.points, times)])
        word = AutomorphismWord((_replica(axis, mult, 1),))
    achieved = []
    for p, z in zip(D.points, zv):
        q = word.apply(S, p)
        if not exhaustion_gt(q, z):
            raise InvariantBreach(f"escape word leaves {p} at exhaustion {exhaustion(q)} <= {z}")
        achieved.append(exhaustion(q))
    return TameWitness(word, D.points, zv, tuple(achieved))


def split_into_tame(S: Surface, D: DiscreteSet, zeta, rng: np.random.Generator, attempts: int = 64):
    """``split`` followed by an escape witness on each half.

    The half where ``|x|`` dominates uses X as invariant axis, the other Y;
    a random replica first restores injectivity of that projection when
    needed.  Witness words act on the original points.
    """
    zmap = dict(zip(D.points, _zeta_values(D, zeta)))
    D1, D2 = split(D)
    out = []
    for half, axis in ((D1, "X"), (D2, "Y")):
        zv = [zmap[p] for p in half.points]
        pre = AutomorphismWord()
        moved = half
        if not projection_ok(half, axis):
            _, pre = randomize_projection(S, half, rng, attempts, axis=axis, pairwise=True)
            moved = half.apply(pre)
        w = spread_past(S, moved, zv, axis)
        word = pre + w.word
        out.append(TameWitness(word, half.points, tuple(zv), w.achieved))
    return D1, out[0], D2, out[1]


# -- strong tameness ------------------------------------------------------------------


@dataclass(frozen=True)
class MapReport:
    word: AutomorphismWord
    residuals: tuple
    exact: bool
    stages: dict

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    def to_dict(self) -> dict:
        return {
            "word": self.word.to_records(),
            "exact": self.exact,
            "residuals": list(self.residuals),
            "max_residual": self.max_residual,
            "stages": {k: len(v) for k, v in self.stages.items()},
        }


def _point_residual(p: SurfacePoint, q: SurfacePoint) -> float:
    if p.exact and q.exact:
        return 0.0 if p == q else math.inf
    scale = 1.0 + max(abs(complex(c)) for c in q.coords)
    err = max(abs(complex(a) - complex(b)) for a, b in zip(p.coords, q.coords)) / scale
    return err if math.isfinite(err) else math.inf


def _targets(D: DiscreteSet, Dt: DiscreteSet, zeta) -> list:
    if isinstance(zeta, dict):
        tg = [zeta[p] for p in D.points]
    elif callable(zeta):
        tg = [zeta(p) for p in D.points]
    else:
        tg = [Dt.points[i] if isinstance(i, (int, np.integer)) else i for i in zeta]
    if len(tg) != len(D):
        raise ValueError("zeta must give one target per point")
    if len(set(tg)) != len(tg):
        raise NotInjective("zeta is not injective")
    for q in tg:
        if q not in Dt.points:
            raise ValueError(f"target {q} is not in Dt")
    return tg


def _assign_tags(D1: list, Dt1: list, pairs: list, exact: bool, policy: str = "auto", shift: int = 0) -> tuple:
    """Nonzero x-values for the prescribing step; matched points share a tag.

    A pair whose points already share a nonzero x-value keeps it.  Other
    pairs, then unmatched target points, get fresh tags: ``1, 2, 3, ...``
    with ``policy="integers"``, or the ``m``-th roots of unity with
    ``policy="unit"`` (well conditioned as interpolation nodes).  ``"auto"``
    means integers in the exact backend and roots of unity otherwise.
    """
    if policy == "auto":
        policy = "integers" if exact else "unit"
    if policy not in ("unit", "integers"):
        raise ValueError(f"unknown tag policy {policy!r}")
    if policy == "unit" and exact:
        raise ValueError("roots-of-unity tags are not exact")
    used = set()
    tag_d = [None] * len(D1)
    tag_t = [None] * len(Dt1)
    for i, j in pairs:
        a, b = D1[i].x, Dt1[j].x
        if a == b and a != 0 and a not in used:
            tag_d[i] = tag_t[j] = a
            used.add(a)
    if policy == "integers":
        conv = ExactComplex if exact else complex
        pool = (conv(k) for k in range(1, 4 * len(Dt1) + 2))
    else:
        m = len(Dt1) + len(used)
        pool = (cmath.exp(2j * math.pi * ((k + shift) % m) / m) for k in range(m))
    pool = (v for v in pool if v not in used)
    for i, j in pairs:
        if tag_d[i] is None:
            tag_d[i] = tag_t[j] = next(pool)
    for j in range(len(Dt1)):
        if tag_t[j] is None:
            tag_t[j] = next(pool)
    return tag_d, tag_t


def map_tame_to_tame(S: Surface, D: DiscreteSet, Dt: DiscreteSet, zeta, rng: np.random.Generator,
                     attempts: int = 8, tags: str = "auto", strategy: str = "auto") -> MapReport:
    """A word ``alpha`` with ``alpha(p) = zeta(p)`` for every ``p`` in ``D``.

    Stages: ``phi1``/``psi1`` make the y-projection injective on ``D`` and
    ``Dt``; ``phi2``/``psi2`` (y fixed) move x to matched nonzero tags;
    ``eta`` (x fixed) slides along each tag fiber ``{x = c}``, where the
    flow acts on ``z`` by translation ``z -> z - c s``.  The result is
    ``phi1 phi2 eta psi2^-1 psi1^-1`` applied left to right.

    ``strategy``: ``"simultaneous"`` runs the stages once for all points;
    ``"sequential"`` runs them for one pair at a time while every other
    point is held fixed (approximate backend only); ``"auto"`` tries the
    first and falls back to the second.  The sequential form stays accurate
    when the points span many orders of magnitude, where multipliers
    interpolated through all points at once are evaluated too far from
    their nodes after rounding.
    """
    if strategy not in ("auto", "simultaneous", "sequential"):
        raise ValueError(f"unknown strategy {strategy!r}")
    targets = _targets(D, Dt, zeta)
    exact = D.exact and Dt.exact and S.exact
    pairs = [(i, Dt.points.index(q)) for i, q in enumerate(targets)]
    last = None
    if strategy != "sequential" or exact:
        for attempt in range(attempts):
            try:
                return _map_once(S, D, Dt, pairs, targets, exact, rng, tags, attempt)
            except InjectivityLost as err:
                last = err
        if strategy == "simultaneous" or exact:
            raise InjectivityLost(f"map_tame_to_tame failed after {attempts} attempts: {last}")
    for _ in range(attempts):
        try:
            return _map_sequential(S, D, targets, rng)
        except InjectivityLost as err:
            last = err
    raise InjectivityLost(f"map_tame_to_tame failed after {attempts} attempts: {last}")


# -- one pair at a time --------------------------------------------------------------


# relative separation of invariant values needed to hold a point fixed while moving another
HOLD_RTOL = 1e-3
# relative distance kept between a fiber tag and the other points' coordinates
TAG_RTOL = 0.1


def _separated_from(v: complex, others, rtol: float) -> bool:
    return all(abs(v - w) > rtol * max(abs(v), abs(w)) for w in others)


def _move_one(S, a, b, fixed, rng, axis):
    """Word taking ``a`` to ``b`` that leaves every point of ``fixed`` bitwise in place.

    ``axis`` is the invariant of the tag stages.  Each multiplier vanishes
    at the invariant values of ``fixed``, and a replica with zero time is
    the identity, so only the moving point's own term is ever evaluated
    off its node.  Returns ``None`` when ``a`` or ``b`` is not separated
    from ``fixed`` in the invariant.
    """
    other = _other(axis)
    inv = [complex(_proj(f, axis)) for f in fixed]
    if not (_separated_from(complex(_proj(a, axis)), inv, HOLD_RTOL)
            and _separated_from(complex(_proj(b, axis)), inv, HOLD_RTOL)):
        return None
    oth = [complex(_proj(f, other)) for f in fixed]
    # a tag at least as large as both moved coordinates keeps both orbit solves well conditioned
    size = 1.0 + abs(complex(_proj(a, other))) + abs(complex(_proj(b, other)))
    for _ in range(32):
        c = size * cmath.exp(2j * math.pi * rng.random())
        if _separated_from(c, oth, TAG_RTOL):
            break
        size *= 2.0
    else:
        return None
    words = []
    for pt in (a, b):
        time = solve_flow_time(S, pt, c, axis, rng)
        mult = interpolate([(complex(_proj(pt, axis)), time)] + [(v, 0j) for v in inv])
        words.append(AutomorphismWord((_replica(axis, mult),)))
    phi, psi = words
    a2, b2 = phi.apply(S, a), psi.apply(S, b)
    shift = (complex(a2.z) - complex(b2.z)) / c
    eta = AutomorphismWord((_replica(other, interpolate([(c, shift)] + [(v, 0j) for v in oth])),))
    return phi + eta + psi.inverse()


def _map_sequential(S, D, targets, rng) -> MapReport:
    current = list(D.points)
    moves = []
    word = AutomorphismWord()
    for k, target in enumerate(targets):
        if _point_residual(current[k], target) == 0:
            continue
        fixed = current[:k] + current[k + 1:]
        best = None
        for axis in ("Y", "X"):
            try:
                step = _move_one(S, current[k], target, fixed, rng, axis)
            except SearchDiverged:
                continue
            if step is None:
                continue
            moved = [step.apply(S, p) for p in current]
            res = _point_residual(moved[k], target)
            if best is None or res < best[0]:
                best = (res, step, moved)
        if best is None:
            raise InjectivityLost(f"point {k} cannot be moved with the others held fixed")
        _, step, current = best
        moves.append(step)
        word = word + step
    residuals = tuple(_point_residual(word.apply(S, p), q) for p, q in zip(D.points, targets))
    if not max(residuals, default=0.0) < MAP_RTOL:
        raise InjectivityLost(f"residual {max(residuals)} above {MAP_RTOL}")
    return MapReport(word, residuals, False, {f"move{k}": w for k, w in enumerate(moves)})


def _map_once(S, D, Dt, pairs, targets, exact, rng, tags, attempt=0) -> MapReport:
    force = attempt > 0
    phi1 = AutomorphismWord()
    if force or not projection_ok(D, "Y"):
        _, phi1 = randomize_projection(S, D, rng, axis="Y", pairwise=True)
    psi1 = AutomorphismWord()
    if force or not projection_ok(Dt, "Y"):
        _, psi1 = randomize_projection(S, Dt, rng, axis="Y", pairwise=True)
    D1 = [phi1.apply(S, p) for p in D.points]
    Dt1 = [psi1.apply(S, q) for q in Dt.points]
    tag_d, tag_t = _assign_tags(D1, Dt1, pairs, exact, tags, shift=attempt)

    # zero-slope multipliers where the invariant is evaluated after rounding
    flat = not exact
    phi2 = prescribe_p2(S, set_new(D1, S), tag_d, "Y", rng)
    psi2 = prescribe_p2(S, set_new(Dt1, S), tag_t, "Y", rng, flat=flat)
    D2 = [phi2.apply(S, p) for p in D1]
    Dt2 = [psi2.apply(S, q) for q in Dt1]

    # slide along the fiber x = c: flow_x(s) sends z to z - c s
    nodes = []
    for (i, j) in pairs:
        a, b = D2[i], Dt2[j]
        c = tag_d[i]
        nodes.append((c, (a.z - b.z) / c))
    if all(not s for _, s in nodes):
        eta = AutomorphismWord()
    else:
        eta = AutomorphismWord((ReplicaX((flat_interpolate if flat else interpolate)(nodes), 1),))

    alpha = phi1 + phi2 + eta + psi2.inverse() + psi1.inverse()
    residuals = []
    for p, q in zip(D.points, targets):
        res = _point_residual(alpha.apply(S, p), q)
        residuals.append(res)
    if exact:
        if any(residuals):
            raise InvariantBreach("exact map misses a target")
    elif not max(residuals, default=0.0) < MAP_RTOL:
        raise InjectivityLost(f"residual {max(residuals)} above {MAP_RTOL}")
    stages = {"phi1": phi1, "phi2": phi2, "eta": eta, "psi2": psi2, "psi1": psi1}
    return MapReport(alpha, tuple(residuals), exact, stages)


# -- checklist -----------------------------------------------------------------


def zero_fiber_points(S: Surface, xs) -> list:
    """Finite shadow of the curves ``{(x, 0, z0)}`` over rational roots ``z0`` of ``P``."""
    roots = exact_roots_search(S.P) if S.exact else []
    return [SurfacePoint(ExactComplex.coerce(x) if S.exact else complex(x), ExactComplex(0), z0, S)
            for z0 in roots for x in xs]


def rr_checklist(S: Surface, rng: np.random.Generator) -> list:
    """Finite-scale checks of the four axioms that make ``X`` an RR-space.

    Each entry is ``{"axiom", "statement", "check", "passed"}``.
    """
    from .spreading import threshold_sequence

    items = []

    # complete field with a nonconstant invariant: the y-flow, with nonconstant orbits
    pts = [_sample_exact_point(S, rng) for _ in range(8)]
    nonconst = all(flow_y_polynomial(S, p).degree >= 1 for p in pts)
    items.append({"axiom": "RR4", "statement": "complete field with nonconstant invariant function",
                  "check": "y is invariant under flow_y and x(flow_y(t, p)) has degree >= 1 in t",
                  "passed": bool(nonconst)})

    # automorphisms keep discrete sets discrete: distinct points stay distinct
    D = set_new(pts, S)
    word = AutomorphismWord((ReplicaY(Polynomial([1, 1]), 1), ReplicaX(Polynomial([0, 1]), -1)))
    image = D.apply(word)
    distinct = len(set(image.points)) == len(image.points)
    items.append({"axiom": "RR3", "statement": "the class of sets is invariant under automorphisms",
                  "check": "a random replica word maps 8 distinct points to 8 distinct points",
                  "passed": bool(distinct)})

    # threshold sequence exists
    try:
        sched = threshold_sequence(S, 3)
        thres = True
        detail = f"certified radii {', '.join(f'{r:.4g}' for r in sched.radii)}"
    except DomainError as err:
        thres = False
        detail = str(err)
    items.append({"axiom": "RR2", "statement": "a threshold sequence exists",
                  "check": detail, "passed": thres})

    # injections extend: move a point onto another exactly
    src = set_new(pts[:2], S)
    tgt = set_new(pts[2:5], S)
    try:
        rep = map_tame_to_tame(S, src, tgt, [1, 0], rng)
        ok = rep.max_residual < MAP_RTOL
        detail = f"2 points mapped with residual {rep.max_residual:.3g}"
    except DomainError:
        src_a = set_new([p.approx() for p in src.points], S)
        tgt_a = set_new([p.approx() for p in tgt.points], S)
        rep = map_tame_to_tame(S, src_a, tgt_a, [1, 0], rng)
        ok = rep.max_residual < MAP_RTOL
        detail = f"2 points mapped (approximate backend) with residual {rep.max_residual:.3g}"
    items.append({"axiom": "RR1", "statement": "injections between tame sets extend to automorphisms",
                  "check": detail, "passed": bool(ok)})
    return items[::-1]


def _sample_exact_point(S: Surface, rng) -> SurfacePoint:
    from .surface import random_point

    return random_point(S, rng, exact=S.exact)


__all__ = [
    "TameWitness",
    "MapReport",
    "randomize_projection",
    "projection_ok",
    "solve_flow_time",
    "prescribe_p2",
    "spread_past",
    "split_into_tame",
    "map_tame_to_tame",
    "zero_fiber_points",
    "rr_checklist",
]
