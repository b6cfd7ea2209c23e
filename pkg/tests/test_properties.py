from __future__ import annotations

from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from danlab.automorphisms import (
    AutomorphismWord,
    FlowX,
    FlowY,
    ReplicaX,
    ReplicaY,
    Swap,
    flow_x,
    flow_y,
    flow_y_closed_form,
    flow_y_series,
    swap,
)
from danlab.discrete import ThresholdSchedule, schedule_check, set_new, split, split_inequality_holds
from danlab.poly import Polynomial, interpolate
from danlab.scalars import ExactComplex
from danlab.surface import SurfacePoint, exhaustion, residual, surface_new

SURFACES = [surface_new(P) for P in ("0,1", "-1,0,1", "0,-1,0,1")]

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gaussian_rationals = st.builds(ExactComplex, rationals, rationals)
nonzero = gaussian_rationals.filter(bool)
surfaces = st.sampled_from(SURFACES)


@st.composite
def points(draw, S=None, allow_zero_fiber=True):
    S = S if S is not None else draw(surfaces)
    y = draw(nonzero)
    z = draw(gaussian_rationals)
    p = SurfacePoint(S.P(z) / y, y, z, S)
    if draw(st.booleans()):
        p = swap(S, p)
    return S, p


@st.composite
def generators(draw):
    kind = draw(st.sampled_from(["FlowY", "FlowX", "ReplicaY", "ReplicaX", "Swap"]))
    if kind == "Swap":
        return Swap()
    t = draw(gaussian_rationals)
    if kind == "FlowY":
        return FlowY(t)
    if kind == "FlowX":
        return FlowX(t)
    h = Polynomial(draw(st.lists(gaussian_rationals, min_size=1, max_size=2)))
    return (ReplicaY if kind == "ReplicaY" else ReplicaX)(h, t)


words = st.lists(generators(), max_size=4).map(lambda g: AutomorphismWord(tuple(g)))


@given(points(), gaussian_rationals, gaussian_rationals)
def test_flow_group_law(sp, s, t):
    S, p = sp
    assert flow_y(S, s, flow_y(S, t, p)) == flow_y(S, s + t, p)
    assert flow_x(S, s, flow_x(S, t, p)) == flow_x(S, s + t, p)


@given(points(), gaussian_rationals)
def test_flow_invariants_and_membership(sp, t):
    S, p = sp
    q = flow_y(S, t, p)
    assert q.y == p.y and residual(S, q.x, q.y, q.z) == 0
    q = flow_x(S, t, p)
    assert q.x == p.x and residual(S, q.x, q.y, q.z) == 0


@given(points(), gaussian_rationals)
def test_swap_conjugation(sp, t):
    S, p = sp
    assert swap(S, flow_y(S, t, swap(S, p))) == flow_x(S, t, p)


@given(points(), gaussian_rationals)
def test_series_matches_closed_form(sp, t):
    S, p = sp
    q = flow_y_series(S, t, p)
    assert flow_y(S, t, p) == q
    if p.y:
        assert q == flow_y_closed_form(S, t, p)


@settings(max_examples=50)
@given(points(), words)
def test_word_inverse_and_membership(sp, w):
    S, p = sp
    q = w.apply(S, p)
    assert residual(S, q.x, q.y, q.z) == 0
    assert w.inverse().apply(S, q) == p
    assert AutomorphismWord.from_json(w.to_json()).apply(S, p) == q


@given(st.lists(points(S=SURFACES[1]), max_size=8, unique_by=lambda sp: sp[1]))
def test_split_inequality(sps):
    D = set_new([p for _, p in sps])
    D1, D2 = split(D)
    assert set(D1.points) | set(D2.points) == set(D.points)
    for half, coord in ((D1, "x"), (D2, "y")):
        for p in half:
            assert split_inequality_holds(p, coord)
            assert exhaustion(p) <= 2 * abs(complex(getattr(p, coord))) * (1 + 1e-12)


@given(st.lists(st.floats(min_value=1e-3, max_value=1e9), min_size=1, max_size=8))
def test_schedule_monotone_and_deltas(vals):
    sched = ThresholdSchedule(tuple(sorted(vals)))
    assert all(a <= b for a, b in zip(sched.radii, sched.radii[1:]))
    assert all(d == 2.0 ** -(n + 2) for n, d in enumerate(sched.deltas))
    assert sum(sched.deltas) < 0.5


@given(st.lists(points(S=SURFACES[1]), max_size=6, unique_by=lambda sp: sp[1]),
       st.lists(st.floats(min_value=1e-3, max_value=1e3), min_size=1, max_size=6))
def test_schedule_check_monotone_in_set(sps, vals):
    sched = ThresholdSchedule(tuple(sorted(vals)))
    pts = [p for _, p in sps]
    if schedule_check(set_new(pts), sched):
        assert schedule_check(set_new(pts[:-1]), sched)


@given(st.lists(st.tuples(gaussian_rationals, gaussian_rationals), min_size=1, max_size=6,
                unique_by=lambda n: n[0]))
def test_interpolate_exact_hits_nodes(nodes):
    h = interpolate(nodes)
    assert h.degree < len(nodes)
    assert all(h(a) == v for a, v in nodes)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_approx_flow_matches_exact(seed):
    rng = np.random.default_rng(seed)
    S = SURFACES[2]
    y = ExactComplex(Fraction(int(rng.integers(1, 50)), 7), Fraction(int(rng.integers(-50, 50)), 5))
    z = ExactComplex(Fraction(int(rng.integers(-20, 20)), 3), 0)
    p = SurfacePoint(S.P(z) / y, y, z, S)
    t = ExactComplex(Fraction(int(rng.integers(-30, 30)), 11), Fraction(int(rng.integers(-30, 30)), 13))
    exact = flow_y(S, t, p)
    approx = flow_y(S, complex(t), p.approx())
    for a, b in zip(exact.coords, approx.coords):
        assert abs(complex(a) - b) <= 1e-9 * (1 + abs(complex(a)))
