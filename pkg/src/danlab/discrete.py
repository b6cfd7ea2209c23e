"""Finite discrete subsets of a Danielewski surface.

The theory is about infinite discrete sets; here every set is a finite
truncation.  Properness of a projection is vacuous for a finite set, so
``projection_report`` measures it quantitatively instead (the ratio of the
projected modulus to the exhaustion).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DuplicatePoint, InvariantBreach, MixedSurfaces
from .scalars import abs2, format_scalar, is_exact, modulus_cmp, modulus_le, parse_scalar
from .surface import Surface, SurfacePoint, exhaustion, exhaustion_le, point_new

# minimal coordinate distance for distinct points in the approximate backend
APPROX_DISTINCT_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteSet:
    points: tuple = ()
    surface: Surface | None = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        return p in self.points

    @property
    def exact(self) -> bool:
        return all(p.exact for p in self.points)

    def apply(self, word) -> "DiscreteSet":
        return DiscreteSet(tuple(word.apply(self.surface, p) for p in self.points), self.surface)


def _coord_distance(p: SurfacePoint, q: SurfacePoint) -> float:
    return max(abs(complex(a) - complex(b)) for a, b in zip(p.coords, q.coords))


def set_new(points, surface: Surface | None = None) -> DiscreteSet:
    points = tuple(points)
    surfaces = {id(p.surface): p.surface for p in points if p.surface is not None}
    if surface is not None:
        surfaces.setdefault(id(surface), surface)
    distinct = {s.P: s for s in surfaces.values()}
    if len(distinct) > 1:
        raise MixedSurfaces("points lie on different surfaces")
    if surface is None and distinct:
        surface = next(iter(distinct.values()))
    if all(p.exact for p in points):
        if len(set(points)) != len(points):
            raise DuplicatePoint("duplicate point in discrete set")
    else:
        for p, q in combinations(points, 2):
            if _coord_distance(p, q) <= APPROX_DISTINCT_TOL:
                raise DuplicatePoint(f"points {p} and {q} coincide within {APPROX_DISTINCT_TOL}")
    return DiscreteSet(points, surface)


def split(D: DiscreteSet, disjoint_ties: bool = False):
    """Split by the dominant coordinate: ``|x| >= |y|`` goes to D1, ``|y| >= |x|`` to D2.

    Ties land in both halves unless ``disjoint_ties`` is set (then D1 only).
    On each half the sum exhaustion ``|x| + |y|`` is at most twice the
    modulus of the half's coordinate; this is checked, not assumed.
    """
    d1, d2 = [], []
    for p in D.points:
        c = modulus_cmp(p.x, p.y)
        if c >= 0:
            d1.append(p)
        if c < 0 or (c == 0 and not disjoint_ties):
            d2.append(p)
    for pts, coord in ((d1, "x"), (d2, "y")):
        for p in pts:
            if not split_inequality_holds(p, coord):
                raise InvariantBreach(f"split inequality fails at {p}")
    return DiscreteSet(tuple(d1), D.surface), DiscreteSet(tuple(d2), D.surface)


def split_inequality_holds(p: SurfacePoint, coord: str) -> bool:
    """``|x| + |y| <= 2 |coord|`` (and hence ``max(|x|,|y|) <= 2|coord|``)."""
    own = getattr(p, coord)
    other = p.y if coord == "x" else p.x
    if p.exact:
        # |x| + |y| <= 2|c|  <=>  |o| <= |c|  for the other coordinate o
        return abs2(other) <= abs2(own)
    return abs(complex(p.x)) + abs(complex(p.y)) <= 2 * abs(complex(own)) * (1 + 1e-15)


@dataclass(frozen=True)
class ProjectionReport:
    axis: str
    injective: bool
    min_gap: float
    avoids_zero: bool
    properness_margin: float

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "injective": self.injective,
            "min_gap": _json_float(self.min_gap),
            "avoids_zero": self.avoids_zero,
            "properness_margin": _json_float(self.properness_margin),
        }


def _json_float(v: float):
    return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")


def projection_values(D: DiscreteSet, axis: str) -> list:
    axis = axis.upper()
    if axis not in ("X", "Y"):
        raise ValueError(f"axis must be 'X' or 'Y', got {axis!r}")
    return [p.x if axis == "X" else p.y for p in D.points]


def projection_report(D: DiscreteSet, axis: str) -> ProjectionReport:
    axis = axis.upper()
    vals = projection_values(D, axis)
    if all(is_exact(v) for v in vals):
        injective = len(set(vals)) == len(vals)
        avoids_zero = all(bool(v) for v in vals)
    else:
        injective = None
        avoids_zero = all(complex(v) != 0 for v in vals)
    cv = np.array([complex(v) for v in vals], dtype=complex)
    if len(cv) < 2:
        min_gap = math.inf
    else:
        diffs = np.abs(cv[:, None] - cv[None, :])
        diffs[np.diag_indices(len(cv))] = np.inf
        min_gap = float(diffs.min())
    if injective is None:
        injective = min_gap > 0
    elif injective and min_gap == 0:
        # distinct exact values that collide in double precision
        min_gap = math.ulp(0.0)
    margins = []
    for p, v in zip(D.points, vals):
        e = exhaustion(p)
        margins.append(abs(complex(v)) / e if e > 0 else 0.0)
    margin = min(margins) if margins else math.inf
    return ProjectionReport(axis, injective, min_gap, avoids_zero, margin)


@dataclass(frozen=True)
class ThresholdSchedule:
    """Radii ``R_1 <= ... <= R_n`` with deltas ``2^-(n+1)``; ball radius for index n is ``r_ball * n``."""

    radii: tuple
    r_ball: float = 1.0
    deltas: tuple = ()

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if not self.deltas:
            object.__setattr__(self, "deltas", tuple(2.0 ** -(n + 1) for n in range(1, len(radii) + 1)))
        else:
            object.__setattr__(self, "deltas", tuple(float(d) for d in self.deltas))
        if any(r <= 0 for r in radii) or any(b < a for a, b in zip(radii, radii[1:])):
            raise ValueError("radii must be positive and nondecreasing")
        if len(self.deltas) != len(radii):
            raise ValueError("one delta per radius")

    def to_dict(self) -> dict:
        return {"radii": list(self.radii), "r_ball": self.r_ball, "deltas": list(self.deltas)}

    @classmethod
    def from_dict(cls, d: dict) -> "ThresholdSchedule":
        return cls(tuple(d["radii"]), float(d.get("r_ball", 1.0)), tuple(d.get("deltas", ())))


def schedule_check(D: DiscreteSet, sched: ThresholdSchedule) -> bool:
    """True iff ``#{p in D : exhaustion(p) <= R_n} <= n`` for every n."""
    for n, R in enumerate(sched.radii, start=1):
        count = sum(1 for p in D.points if exhaustion_le(p, R))
        if count > n:
            return False
    return True


# -- JSON -------------------------------------------------------------------


def set_to_json_obj(D: DiscreteSet) -> list:
    return [[format_scalar(c) for c in p.coords] for p in D.points]


def set_from_json_obj(S: Surface, obj, exact: bool | None = None) -> DiscreteSet:
    pts = []
    for triple in obj:
        if len(triple) != 3:
            raise ValueError("each point is an [x, y, z] triple")
        vals = [parse_scalar(c, exact) for c in triple]
        pts.append(point_new(S, *vals))
    return set_new(pts, S)


def set_to_json(D: DiscreteSet) -> str:
    return json.dumps(set_to_json_obj(D))


def set_from_json(S: Surface, text: str, exact: bool | None = None) -> DiscreteSet:
    return set_from_json_obj(S, json.loads(text), exact)


def points_within(D: DiscreteSet, R: float) -> int:
    return sum(1 for p in D.points if modulus_le(p.x, R) and modulus_le(p.y, R))
