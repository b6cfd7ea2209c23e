from __future__ import annotations

import cmath
import json
import math

import numpy as np
import pytest

from conftest import E, exact_point
from danlab.automorphisms import (
    AutomorphismWord,
    FlowX,
    FlowY,
    ReplicaY,
    Swap,
    Twist,
    flow_x,
    flow_y,
    flow_y_closed_form,
    flow_y_series,
    flow_y_polynomial,
    random_word,
    replica_flow,
    swap,
    twist,
    word_apply,
    word_compose,
    word_inverse,
)
from danlab.errors import BackendMismatch, ExactBackendUnsupported
from danlab.poly import Polynomial, interpolate
from danlab.surface import on_surface, point_new, random_point


def coords(p):
    return (p.x, p.y, p.z)


def test_flow_y_examples(quad):
    assert coords(flow_y(quad, E(1), exact_point(quad, 1, -1, 0))) == (0, -1, 1)
    # y = 0: flow_y(t) moves x by -t P'(z), the continuous extension of the closed form
    assert coords(flow_y(quad, E(1), exact_point(quad, 5, 0, 1))) == (3, 0, 1)
    p = exact_point(quad, 5, 0, 1)
    assert flow_y(quad, E(0), p) == p


def test_flow_y_zero_fiber_is_limit_of_closed_form(quad):
    # points (P(z)/y, y, z) with y -> 0 along z = 1 + y s
    t = 1.0
    for y in (1e-3, 1e-5):
        z = 1 + y * 2.5
        p = point_new(quad, quad.P.approx()(z) / y, y, z)
        q = flow_y_closed_form(quad, t, p)
        assert abs(q.x - (5 - t * 2)) < 1e-2
    p0 = point_new(quad, 5.0, 0.0, 1.0)
    assert abs(flow_y(quad, t, p0).x - 3) < 1e-15


def test_flow_x_examples(quad):
    assert coords(flow_x(quad, E(1), exact_point(quad, -1, 1, 0))) == (-1, 0, 1)
    assert coords(flow_x(quad, E(1), exact_point(quad, 0, 5, 1))) == (0, 3, 1)
    p = exact_point(quad, 0, 5, 1)
    assert flow_x(quad, E(0), p) == p


def test_replica_examples(quad):
    p = exact_point(quad, 1, -1, 0)
    t = E(1, 2) / 3
    assert replica_flow(quad, "Y", Polynomial([E(1)]), t, p) == flow_y(quad, t, p)
    assert replica_flow(quad, "Y", Polynomial([E(0)]), t, p) == p
    assert coords(replica_flow(quad, "Y", Polynomial([E(0), E(0), E(1)]), E(1), p)) == (0, -1, 1)


def test_twist_examples(quad):
    p = point_new(quad, 1.0, -1.0, 0.0)
    assert twist(quad, Polynomial([0j]), p) == p
    q = twist(quad, Polynomial([math.log(2)]), p)
    assert abs(q.x - 2) < 1e-15 and abs(q.y + 0.5) < 1e-15 and q.z == 0
    r = twist(quad, Polynomial([0.0, 1.0]), point_new(quad, 5.0, 0.0, 1.0))
    assert abs(r.x - 5 * math.e) < 1e-12 and r.y == 0
    with pytest.raises(ExactBackendUnsupported):
        twist(quad, Polynomial([0.0, 1.0]), exact_point(quad, 5, 0, 1))


def test_exact_point_rejects_float_time(quad):
    with pytest.raises(BackendMismatch):
        flow_y(quad, 0.5, exact_point(quad, 1, -1, 0))


def test_word_examples(quad):
    p = exact_point(quad, 1, -1, 0)
    assert word_apply(quad, AutomorphismWord(), p) == p
    assert word_apply(quad, AutomorphismWord((FlowY(E(1)), FlowY(E(-1)))), p) == p
    assert coords(word_apply(quad, AutomorphismWord((FlowY(E(1)), Swap())), p)) == (-1, 0, 1)


def test_word_inverse_examples():
    h = Polynomial([E(0), E(1)])
    t = E(2, 1)
    assert word_inverse(AutomorphismWord()) == AutomorphismWord()
    assert word_inverse(AutomorphismWord((FlowY(t),))) == AutomorphismWord((FlowY(-t),))
    w = AutomorphismWord((Swap(), ReplicaY(h, t)))
    assert word_inverse(w) == AutomorphismWord((ReplicaY(h, -t), Swap()))


def test_word_compose_examples(quad):
    w = AutomorphismWord((FlowY(E(1)),))
    assert word_compose(w, AutomorphismWord()) == w
    assert word_compose(AutomorphismWord(), w) == w
    p = exact_point(quad, 1, -1, 0)
    both = word_compose(w, AutomorphismWord((FlowY(E(2)),)))
    assert word_apply(quad, both, p) == flow_y(quad, E(3), p)


def test_swap_conjugation(quad):
    p = exact_point(quad, E(1, 1), E(-1, 1) / 2, 0)
    t = E(3, -2) / 7
    assert flow_x(quad, t, p) == swap(quad, flow_y(quad, t, swap(quad, p)))


def test_series_agrees_with_closed_form(cubic):
    p = exact_point(cubic, E(0), E(3, 1), E(1))
    t = E(-5, 3) / 4
    assert flow_y_series(cubic, t, p) == flow_y_closed_form(cubic, t, p) == flow_y(cubic, t, p)


def test_series_on_zero_fiber(quad):
    p = exact_point(quad, 3, 0, 1)
    assert flow_y_series(quad, E(2), p) == flow_y(quad, E(2), p) == exact_point(quad, -1, 0, 1)


def test_orbit_coordinate_is_nonconstant(quad):
    for p in (exact_point(quad, 5, 0, 1), exact_point(quad, 1, -1, 0), exact_point(quad, 0, 5, 1)):
        assert flow_y_polynomial(quad, p).degree >= 1


def test_serialization_round_trip(rng, cubic):
    w = random_word(rng, max_len=12, max_switches=2)
    text = w.to_json()
    assert AutomorphismWord.from_json(text) == w
    p = random_point(cubic, rng)
    assert word_apply(cubic, AutomorphismWord.from_json(text), p) == word_apply(cubic, w, p)


def test_serialization_formats():
    w = AutomorphismWord((FlowY(E(1) / 2), ReplicaY(Polynomial([E(0), E(1)]), E(-1)), Swap()))
    recs = json.loads(w.to_json())
    assert recs == [{"kind": "FlowY", "t": "1/2"}, {"kind": "ReplicaY", "h": "0,1", "t": "-1"}, {"kind": "Swap"}]
    assert AutomorphismWord.from_records([{"kind": "ReplicaY", "h": "0,1", "t": "−1"}]).gens[0].t == E(-1)


def test_interpolated_multiplier_round_trip(quad):
    h = interpolate([(0.5 + 1j, 2.0), (-3.0, 1j)])
    w = AutomorphismWord((ReplicaY(h, 1.0),))
    back = AutomorphismWord.from_json(w.to_json())
    p = point_new(quad, quad.P.approx()(0.3) / (0.5 + 1j), 0.5 + 1j, 0.3)
    assert word_apply(quad, back, p) == word_apply(quad, w, p)


def test_random_words_preserve_membership_approx(rng, cubic):
    for _ in range(50):
        w = random_word(rng, exact=False, max_len=6)
        p = random_point(cubic, rng, exact=False, scale=1)
        q = word_apply(cubic, w, p)
        assert on_surface(cubic, q.x, q.y, q.z) or not all(np.isfinite(complex(c)) for c in q.coords)


def test_twist_inverse(quad):
    p = point_new(quad, 2.0, -0.5, 0.0)
    w = AutomorphismWord((Twist(Polynomial([0.1, 0.2j])),))
    q = word_apply(quad, w + w.inverse(), p)
    assert max(abs(a - b) for a, b in zip(q.coords, p.coords)) < 1e-14
    assert abs(cmath.exp(0.1) * 2 - word_apply(quad, w, p).x) < 1e-14
