from __future__ import annotations

import math

import pytest

from conftest import E, exact_point
from danlab.automorphisms import AutomorphismWord, FlowY
from danlab.discrete import (
    ThresholdSchedule,
    projection_report,
    schedule_check,
    set_from_json,
    set_new,
    set_to_json,
    split,
)
from danlab.errors import DuplicatePoint, MixedSurfaces
from danlab.surface import point_new, surface_new


def test_set_new(quad, linear):
    assert len(set_new([])) == 0
    assert len(set_new([exact_point(quad, 1, -1, 0)])) == 1
    with pytest.raises(DuplicatePoint):
        set_new([exact_point(quad, 1, -1, 0), exact_point(quad, 1, -1, 0)])
    with pytest.raises(MixedSurfaces):
        set_new([exact_point(quad, 1, -1, 0), exact_point(linear, 1, 0, 0)])
    with pytest.raises(DuplicatePoint):
        set_new([point_new(quad, 1.0, -1.0, 0.0), point_new(quad, 1.0 + 1e-14, -1.0, 0.0)])


def test_split_examples(quad):
    a, b, tie = exact_point(quad, 5, 0, 1), exact_point(quad, 0, 5, 1), exact_point(quad, 1, -1, 0)
    D1, D2 = split(set_new([a]))
    assert D1.points == (a,) and D2.points == ()
    D1, D2 = split(set_new([tie]))
    assert D1.points == (tie,) and D2.points == (tie,)
    D1, D2 = split(set_new([tie]), disjoint_ties=True)
    assert D1.points == (tie,) and D2.points == ()
    D1, D2 = split(set_new([a, b]))
    assert D1.points == (a,) and D2.points == (b,)


def test_projection_report_examples(quad):
    rep = projection_report(set_new([exact_point(quad, 1, -1, 0), exact_point(quad, 4, 0, 1)]), "X")
    assert rep.injective and rep.min_gap == 3 and rep.avoids_zero
    rep = projection_report(set_new([exact_point(quad, 5, 0, 1), exact_point(quad, 5, 0, -1)]), "X")
    assert not rep.injective and rep.min_gap == 0
    rep = projection_report(set_new([]), "Y")
    assert rep.injective and rep.min_gap == math.inf and rep.avoids_zero
    assert rep.to_dict()["min_gap"] == "inf"


def test_projection_report_margin(quad):
    rep = projection_report(set_new([exact_point(quad, 5, 0, 1)]), "X")
    assert rep.properness_margin == 1.0
    rep = projection_report(set_new([exact_point(quad, 5, 0, 1)]), "Y")
    assert rep.properness_margin == 0.0 and not rep.avoids_zero


def test_projection_report_invariant_under_flow_y(quad):
    D = set_new([exact_point(quad, 1, -1, 0), exact_point(quad, E(-1) / 2, 2, 0)])
    moved = D.apply(AutomorphismWord((FlowY(E(3, 1)),)))
    assert projection_report(D, "Y").injective == projection_report(moved, "Y").injective


def test_schedule_check_examples(quad):
    assert schedule_check(set_new([]), ThresholdSchedule((1.0,)))
    assert schedule_check(set_new([exact_point(quad, 10, 0, 1)]), ThresholdSchedule((5.0,)))
    two = set_new([exact_point(quad, 1, -1, 0), exact_point(quad, 2, 0, 1)])
    assert not schedule_check(two, ThresholdSchedule((3.0,)))
    assert schedule_check(two, ThresholdSchedule((1.5, 3.0)))


def test_schedule_deltas_and_validation():
    s = ThresholdSchedule((1.0, 2.0, 4.0))
    assert s.deltas == (0.25, 0.125, 0.0625)
    assert ThresholdSchedule.from_dict(s.to_dict()) == s
    with pytest.raises(ValueError):
        ThresholdSchedule((2.0, 1.0))
    with pytest.raises(ValueError):
        ThresholdSchedule((0.0,))


def test_json_round_trip(quad):
    D = set_new([exact_point(quad, 1, -1, 0), exact_point(quad, E(1, 1), E(-1, 1) / 2, 0)])
    assert set_from_json(quad, set_to_json(D)).points == D.points
    A = set_new([point_new(quad, 1.5, (0.25 - 1) / 1.5, 0.5)])
    assert set_from_json(quad, set_to_json(A)).points == A.points


def test_json_rejects_off_surface(quad):
    with pytest.raises(ValueError):
        set_from_json(quad, '[["1","1","0"]]')
    with pytest.raises(ValueError):
        set_from_json(surface_new("0,1"), '[["1","1"]]')
