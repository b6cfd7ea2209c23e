"""Holomorphic automorphisms of ``X = {xy = P(z)}`` built from flows.

Sign convention.  ``FlowY(t)`` is the time-``t`` map

    (x, y, z) -> ( P(z - y t) / y, y, z - y t )

which extends across ``y = 0`` as ``(x - t P'(z), 0, z)``.  It is the flow
of the locally nilpotent field ``-(P'(z) d/dx + y d/dz)``; ``y`` is
invariant.  Expanding ``P`` around ``z`` gives the polynomial form used for
evaluation,

    x(t) = x - t * sum_{k>=1} c_k(z) (-y t)^(k-1),   c_k = P^(k)(z) / k!,

which is exact in the exact backend and regular at ``y = 0``.
``FlowX`` is the conjugate of ``FlowY`` by the swap ``(x, y, z) -> (y, x, z)``.
Replicas multiply the field by ``h(invariant)``, so their time-``t`` map is
the base flow at time ``t * h(invariant)``.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from typing import ClassVar

from gmpy2 import lcm, mpq, mpz

from .errors import BackendMismatch, ExactBackendUnsupported
from .poly import FlatInterpolant, Interpolant, Polynomial
from .scalars import ExactComplex, format_scalar, is_exact, parse_scalar, to_exact
from .surface import Surface, SurfacePoint

# approximate backend: above this |y| the closed form P(z - yt)/y is used
_CLOSED_FORM_MIN_INVARIANT = 1.0


def _norm_param(v):
    if isinstance(v, ExactComplex):
        return v
    if is_exact(v):
        return ExactComplex.coerce(v)
    return complex(v)


def _series_shift(P: Polynomial, t, y, z):
    """``x(t) - x`` for FlowY, i.e. ``-t * sum_k c_k(z) (-y t)^(k-1)``."""
    c = P.taylor(z)
    if len(c) < 2:
        return c[0] * 0 if c else t * 0
    w = -(y * t)
    acc = c[-1]
    for k in range(len(c) - 2, 0, -1):
        acc = acc * w + c[k]
    return -(t * acc)


def _common_denominator(q: ExactComplex):
    """``q = (nr + i ni) / den`` with integers ``nr, ni, den``."""
    re, im = q
    den = lcm(re.denominator, im.denominator)
    return re.numerator * (den // re.denominator), im.numerator * (den // im.denominator), den


def _closed_form_exact(P: Polynomial, y: ExactComplex, z1: ExactComplex) -> ExactComplex:
    """``P(z1) / y`` in integer arithmetic with a single normalization at the end.

    With ``z1 = N / M`` and integer coefficients ``A_j = L a_j``, homogeneous
    Horner gives ``P(z1) = sum A_j N^j M^(d-j) / (L M^d)``.
    """
    nr, ni, m = _common_denominator(z1)
    L = mpz(1)
    for c in P.coeffs:
        L = lcm(L, lcm(c.re.denominator, c.im.denominator))
    A = [(c.re.numerator * (L // c.re.denominator), c.im.numerator * (L // c.im.denominator))
         for c in P.coeffs]
    d = len(A) - 1
    mpow = [mpz(1)]
    for _ in range(d):
        mpow.append(mpow[-1] * m)
    ar, ai = A[d]
    for j in range(d - 1, -1, -1):
        ar, ai = (ar * nr - ai * ni + A[j][0] * mpow[d - j],
                  ar * ni + ai * nr + A[j][1] * mpow[d - j])
    yr, yi, dy = _common_denominator(y)
    # multiply by dy * conj(Y) / |Y|^2 with Y = yr + i yi
    den = mpow[d] * L * (yr * yr + yi * yi)
    return ExactComplex._raw(mpq((ar * yr + ai * yi) * dy, den), mpq((ai * yr - ar * yi) * dy, den))


def _flow_y_coords(S: Surface, t, x, y, z, exact: bool):
    if exact:
        z1 = z - y * t
        if y:
            return _closed_form_exact(S.P, y, z1), y, z1
        return x + _series_shift(S.P, t, y, z), y, z1
    if t == 0:
        return x, y, z
    P = S.P.approx()
    z1 = z - y * t
    if abs(y) >= _CLOSED_FORM_MIN_INVARIANT:
        return P(z1) / y, y, z1
    return x + _series_shift(P, t, y, z), y, z1


def _resolve(p: SurfacePoint, t):
    """Pick the backend from the point; exact points need exact parameters."""
    if p.exact:
        if not is_exact(t):
            raise BackendMismatch("exact point with an inexact flow time")
        return ExactComplex.coerce(t), True
    return complex(t), False


def flow_y(S: Surface, t, p: SurfacePoint) -> SurfacePoint:
    t, exact = _resolve(p, t)
    x, y, z = _flow_y_coords(S, t, p.x, p.y, p.z, exact)
    return SurfacePoint(x, y, z, S)


def flow_x(S: Surface, t, p: SurfacePoint) -> SurfacePoint:
    t, exact = _resolve(p, t)
    y, x, z = _flow_y_coords(S, t, p.y, p.x, p.z, exact)
    return SurfacePoint(x, y, z, S)


def flow_y_closed_form(S: Surface, t, p: SurfacePoint) -> SurfacePoint:
    """``(P(z - yt)/y, y, z - yt)``; only defined for ``y != 0``."""
    if not p.y:
        raise ZeroDivisionError("closed form needs y != 0")
    t, exact = _resolve(p, t)
    P = S.P if exact else S.P.approx()
    z1 = p.z - p.y * t
    return SurfacePoint(P(z1) / p.y, p.y, z1, S)


def flow_y_series(S: Surface, t, p: SurfacePoint) -> SurfacePoint:
    """FlowY through the Taylor expansion of ``P`` at ``z``; valid on the fiber ``y = 0`` too."""
    t, exact = _resolve(p, t)
    P = S.P if exact else S.P.approx()
    return SurfacePoint(p.x + _series_shift(P, t, p.y, p.z), p.y, p.z - p.y * t, S)


def flow_y_polynomial(S: Surface, p: SurfacePoint) -> Polynomial:
    """``t -> x(flow_y(t, p))`` as a polynomial in ``t`` of degree <= d."""
    P = S.P if p.exact else S.P.approx()
    c = P.taylor(p.z)
    coeffs = [p.x]
    for k in range(1, len(c)):
        coeffs.append(c[k] * (-1) ** k * p.y ** (k - 1))
    return Polynomial(coeffs)


def replica_flow(S: Surface, axis: str, h: Polynomial, t, p: SurfacePoint) -> SurfacePoint:
    """Flow of ``h(invariant) * theta`` where ``axis`` names the invariant coordinate."""
    axis = axis.upper()
    t, exact = _resolve(p, t)
    if exact and not h.exact:
        raise BackendMismatch("exact point with an inexact replica multiplier")
    if axis == "Y":
        return flow_y(S, t * h(p.y), p)
    if axis == "X":
        return flow_x(S, t * h(p.x), p)
    raise ValueError(f"axis must be 'X' or 'Y', got {axis!r}")


def swap(S: Surface, p: SurfacePoint) -> SurfacePoint:
    return SurfacePoint(p.y, p.x, p.z, S)


def twist(S: Surface, phi: Polynomial, p: SurfacePoint) -> SurfacePoint:
    """``(x e^phi(z), y e^-phi(z), z)``; approximate backend only."""
    if p.exact:
        raise ExactBackendUnsupported("twist involves exp and has no exact form")
    e = cmath.exp(phi(complex(p.z)))
    return SurfacePoint(complex(p.x) * e, complex(p.y) / e, complex(p.z), S)


# -- generators -------------------------------------------------------------


@dataclass(frozen=True)
class FlowY:
    t: object
    kind: ClassVar[str] = "FlowY"

    def __post_init__(self):
        object.__setattr__(self, "t", _norm_param(self.t))

    def apply(self, S, p):
        return flow_y(S, self.t, p)

    def inverse(self):
        return FlowY(-self.t)

    @property
    def exact(self):
        return isinstance(self.t, ExactComplex)


@dataclass(frozen=True)
class FlowX:
    t: object
    kind: ClassVar[str] = "FlowX"

    def __post_init__(self):
        object.__setattr__(self, "t", _norm_param(self.t))

    def apply(self, S, p):
        return flow_x(S, self.t, p)

    def inverse(self):
        return FlowX(-self.t)

    @property
    def exact(self):
        return isinstance(self.t, ExactComplex)


@dataclass(frozen=True)
class ReplicaY:
    h: Polynomial
    t: object = 1
    kind: ClassVar[str] = "ReplicaY"
    axis: ClassVar[str] = "Y"

    def __post_init__(self):
        object.__setattr__(self, "t", _norm_param(self.t))

    def apply(self, S, p):
        return replica_flow(S, self.axis, self.h, self.t, p)

    def inverse(self):
        return type(self)(self.h, -self.t)

    @property
    def exact(self):
        return isinstance(self.t, ExactComplex) and self.h.exact


@dataclass(frozen=True)
class ReplicaX(ReplicaY):
    kind: ClassVar[str] = "ReplicaX"
    axis: ClassVar[str] = "X"


@dataclass(frozen=True)
class Swap:
    kind: ClassVar[str] = "Swap"

    def apply(self, S, p):
        return swap(S, p)

    def inverse(self):
        return self

    @property
    def exact(self):
        return True


@dataclass(frozen=True)
class Twist:
    phi: Polynomial
    kind: ClassVar[str] = "Twist"

    def apply(self, S, p):
        return twist(S, self.phi, p)

    def inverse(self):
        return Twist(-self.phi)

    @property
    def exact(self):
        return False


GENERATOR_KINDS = {g.kind: g for g in (FlowY, FlowX, ReplicaY, ReplicaX, Swap, Twist)}


@dataclass(frozen=True)
class AutomorphismWord:
    """Generators applied left to right."""

    gens: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __add__(self, other: "AutomorphismWord") -> "AutomorphismWord":
        return word_compose(self, other)

    def apply(self, S: Surface, p: SurfacePoint) -> SurfacePoint:
        return word_apply(S, self, p)

    def inverse(self) -> "AutomorphismWord":
        return word_inverse(self)

    @property
    def exact(self) -> bool:
        return all(g.exact for g in self.gens)

    def to_records(self) -> list:
        return [generator_to_record(g) for g in self.gens]

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    @classmethod
    def from_records(cls, records) -> "AutomorphismWord":
        return cls(tuple(generator_from_record(r) for r in records))

    @classmethod
    def from_json(cls, text: str) -> "AutomorphismWord":
        return cls.from_records(json.loads(text))


def word_apply(S: Surface, w: AutomorphismWord, p: SurfacePoint) -> SurfacePoint:
    for g in w.gens:
        p = g.apply(S, p)
    return p


def word_inverse(w: AutomorphismWord) -> AutomorphismWord:
    return AutomorphismWord(tuple(g.inverse() for g in reversed(w.gens)))


def word_compose(w1: AutomorphismWord, w2: AutomorphismWord) -> AutomorphismWord:
    """Apply ``w1`` first, then ``w2``."""
    return AutomorphismWord(w1.gens + w2.gens)


# -- serialization ----------------------------------------------------------


def generator_to_record(g) -> dict:
    rec = {"kind": g.kind}
    if isinstance(g, (FlowY, FlowX)):
        rec["t"] = format_scalar(g.t)
    elif isinstance(g, ReplicaY):
        rec["h"] = g.h.format()
        rec["t"] = format_scalar(g.t)
        if isinstance(g.h, (Interpolant, FlatInterpolant)):
            rec["nodes"] = [[format_scalar(q), format_scalar(c)] for q, c in g.h.nodes]
            if isinstance(g.h, FlatInterpolant):
                rec["flat"] = True
    elif isinstance(g, Twist):
        rec["phi"] = g.phi.format()
    return rec


def _parse_poly_field(text, nodes=None, flat=False):
    P = Polynomial.parse(text)
    if nodes:
        pairs = [(parse_scalar(q), parse_scalar(c)) for q, c in nodes]
        if P.exact and all(is_exact(q) and is_exact(c) for q, c in pairs):
            pairs = [(to_exact(q), to_exact(c)) for q, c in pairs]
        else:
            pairs = [(complex(q), complex(c)) for q, c in pairs]
        return (FlatInterpolant if flat else Interpolant)(P.coeffs, pairs)
    return P


def generator_from_record(rec: dict):
    kind = rec.get("kind")
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown generator kind {kind!r}")
    if kind in ("FlowY", "FlowX"):
        return GENERATOR_KINDS[kind](parse_scalar(rec["t"]))
    if kind in ("ReplicaY", "ReplicaX"):
        return GENERATOR_KINDS[kind](_parse_poly_field(rec["h"], rec.get("nodes"), bool(rec.get("flat"))), parse_scalar(rec["t"]))
    if kind == "Twist":
        return Twist(Polynomial.parse(rec["phi"]))
    return Swap()


# -- random words -----------------------------------------------------------


def random_rational(rng, max_num: int = 1000, max_den: int = 1000) -> ExactComplex:
    q = mpq(int(rng.integers(-max_num, max_num + 1)), int(rng.integers(1, max_den + 1)))
    return ExactComplex(q, 0)


def random_word(rng, max_len: int = 20, exact: bool = True, max_num: int = 1000, max_den: int = 1000,
                max_switches: int | None = None, replica_degree: int = 2,
                kinds=("FlowY", "FlowX", "ReplicaY", "ReplicaX", "Swap")) -> AutomorphismWord:
    """Random word of length ``<= max_len`` over the given generator kinds.

    ``max_switches`` caps how often the invariant coordinate of consecutive
    flows changes (a swap counts as relabelling the coordinates).  Every
    switch composes two polynomial maps, so the heights of exact
    coordinates grow geometrically with the number of switches.
    """
    length = int(rng.integers(0, max_len + 1))

    def param():
        if exact:
            return random_rational(rng, max_num, max_den)
        return complex(*rng.normal(0, 1, 2))

    gens = []
    switches = 0
    current = None  # invariant coordinate of the last flow, in original labels
    swapped = False
    for _ in range(length):
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind == "Swap":
            gens.append(Swap())
            swapped = not swapped
            continue
        axis = "Y" if kind in ("FlowY", "ReplicaY") else "X"
        effective = axis if not swapped else ("X" if axis == "Y" else "Y")
        if current is not None and effective != current:
            if max_switches is not None and switches >= max_switches:
                # keep the same invariant coordinate
                axis = "X" if axis == "Y" else "Y"
                kind = kind[:-1] + axis
                effective = current
            else:
                switches += 1
        current = effective
        if kind.startswith("Replica"):
            h = Polynomial([param() for _ in range(int(rng.integers(1, replica_degree + 2)))])
            gens.append(GENERATOR_KINDS[kind](h, param()))
        else:
            gens.append(GENERATOR_KINDS[kind](param()))
    return AutomorphismWord(tuple(gens))
