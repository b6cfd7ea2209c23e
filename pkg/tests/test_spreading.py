from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import pytest

from conftest import E, exact_point
from danlab.automorphisms import flow_y
from danlab.errors import BoundNotAchievable
from danlab.poly import Polynomial
from danlab.spreading import (
    GAMMA_UNIT_DISC,
    EtaFamily,
    ToyFamily,
    certified_hit_bound,
    claim1_bound,
    cR_lower_bound,
    estimate_cR,
    eta,
    gaussian_sample,
    gaussian_samples,
    gaussian_tail,
    mc_hit_probability,
    threshold_sequence,
    toy_eta,
    toy_spread_verdict,
)
from danlab.surface import point_new

FIXTURES = Path(__file__).parent / "fixtures"


def test_gaussian_samples_moments():
    ts = gaussian_samples(np.random.default_rng(0), 100_000)
    assert abs(ts.mean()) < 0.02
    assert abs(np.mean(np.abs(ts) >= 1) - math.exp(-0.5)) < 0.005


def test_gaussian_determinism():
    a = [gaussian_sample(np.random.default_rng(7)) for _ in range(3)]
    b = [gaussian_sample(np.random.default_rng(7)) for _ in range(3)]
    assert a == b


def test_gaussian_tail():
    assert gaussian_tail(0) == 1
    assert math.isclose(gaussian_tail(math.sqrt(2 * math.log(2))), 0.5)
    vals = [gaussian_tail(s) for s in np.linspace(0, 10, 50)]
    assert all(a > b for a, b in zip(vals, vals[1:])) and vals[-1] < 1e-20
    with pytest.raises(ValueError):
        gaussian_tail(-1)


def test_eta_examples(quad):
    p = point_new(quad, 1.0, -1.0, 0.0)
    assert eta(quad, 0, p) == 1
    assert eta(quad, 1, p) == 0
    assert eta(quad, 2, point_new(quad, 5.0, 0.0, 1.0)) == 9
    # the exact backend agrees
    assert eta(quad, E(1), exact_point(quad, 1, -1, 0)) == 0


def test_eta_family_matches_flow(cubic, rng):
    fam = EtaFamily(cubic)
    for _ in range(20):
        y = complex(*rng.normal(0, 5, 2))
        z = complex(*rng.normal(0, 2, 2))
        p = point_new(cubic, cubic.P.approx()(z) / y, y, z)
        ts = rng.normal(size=8) + 1j * rng.normal(size=8)
        vals = fam.values(ts, p)
        for t, v in zip(ts, vals):
            ref = flow_y(cubic, -t, p).x
            assert abs(v - ref) <= 1e-12 * max(1.0, abs(ref))


def test_mc_hit_probability_examples(quad):
    rng = np.random.default_rng(1)
    fam = EtaFamily(quad)
    p = point_new(quad, quad.P.approx()(0.5) / 100, 100.0, 0.5)
    assert mc_hit_probability(fam, p, 0.0, 1000, rng).estimate == 0
    zero = ToyFamily("poly", Polynomial([0j]))
    assert mc_hit_probability(zero, (0j, 3j), 0.5, 1000, rng).estimate == 1
    rep = mc_hit_probability(fam, p, 1.0, 100_000, rng)
    assert rep.bound == pytest.approx(0.06409, abs=1e-5)
    assert rep.estimate <= rep.bound + 3 * rep.stderr
    with pytest.raises(ValueError):
        mc_hit_probability(fam, p, 1.0, 10, rng)


def test_spread_report_determinism(quad):
    fam = EtaFamily(quad)
    p = point_new(quad, -0.0075, 100.0, 0.5)
    a = mc_hit_probability(fam, p, 1.0, 5000, np.random.default_rng(3))
    b = mc_hit_probability(fam, p, 1.0, 5000, np.random.default_rng(3))
    assert a == b and a.to_dict() == b.to_dict()


def test_claim1_bound(quad):
    assert claim1_bound(quad, 100, 1) == pytest.approx(0.0204 * math.pi, rel=1e-12)
    assert claim1_bound(quad, 1e12, 1) < 1e-5
    assert claim1_bound(quad, 0.1, 1) == 1.0


def test_estimate_cR_trend(quad):
    lo, flag = estimate_cR(quad, 10, 1, np.random.default_rng(0))
    hi, _ = estimate_cR(quad, 1e3, 1, np.random.default_rng(0))
    assert flag and lo > 0 and hi >= lo - 0.1


def test_certified_bound_below_sampled_estimate(quad, cubic):
    for S in (quad, cubic):
        for R in (10.0, 1e3, 1e5):
            est, _ = estimate_cR(S, R, 1, np.random.default_rng(0))
            assert cR_lower_bound(S, R, 1) <= est


def test_certified_bound_is_a_bound(quad):
    R, r = 1e4, 1.0
    b, y_part, x_part = certified_hit_bound(quad, R, r)
    assert b == max(y_part, x_part)
    rng = np.random.default_rng(5)
    fam = EtaFamily(quad)
    P = quad.P.approx()
    for _ in range(10):
        z = complex(*rng.normal(0, 3, 2))
        x = R * 1.01 * np.exp(2j * np.pi * rng.random())
        p = point_new(quad, x, P(z) / x, z)
        rep = mc_hit_probability(fam, p, r, 20_000, rng)
        assert rep.estimate <= b + 3 * rep.stderr


def test_threshold_sequence_properties(quad):
    sched = threshold_sequence(quad, 8)
    assert all(a <= b for a, b in zip(sched.radii, sched.radii[1:]))
    assert sched.deltas == tuple(2.0 ** -(n + 1) for n in range(1, 9))
    # tail sums of the deltas
    for N in range(1, 6):
        assert math.isclose(sum(2.0 ** -(n + 1) for n in range(N, 60)), 2.0 ** -N)
    for n, R in enumerate(sched.radii, start=1):
        assert certified_hit_bound(quad, R, n)[0] < sched.deltas[n - 1]


@pytest.mark.parametrize("P", ["-1,0,1", "0,-1,0,1"])
def test_threshold_radii_fixture(P):
    from danlab.surface import surface_new

    expected = json.loads((FIXTURES / "threshold_radii.json").read_text())[P]
    got = threshold_sequence(surface_new(P), 8).to_dict()
    assert got["deltas"] == expected["deltas"]
    for a, b in zip(got["radii"], expected["radii"]):
        assert math.isclose(a, b, rel_tol=1e-9)


def test_threshold_unreachable_for_linear(linear):
    with pytest.raises(BoundNotAchievable):
        threshold_sequence(linear, 2)


def test_toy_eta():
    sq = ToyFamily.parse("poly:0,0,1")
    assert toy_eta(sq, 0, (1, 2)) == 1
    assert toy_eta(sq, 1, (1, 2)) == 5
    ex = ToyFamily.parse("f=exp-neg")
    assert abs(toy_eta(ex, 1 + 1j, (0, 50.0))) < 1e-20
    assert ToyFamily.parse(sq.format()) == sq
    with pytest.raises(ValueError):
        ToyFamily.parse("sin")


def test_toy_verdict_polynomial():
    v = toy_spread_verdict(ToyFamily.parse("poly:0,0,1"), 1.0, 0.05, [10, 100, 1000], 20_000,
                           np.random.default_rng(0))
    assert v.verdict == "spreading evidence" and v.radius is not None


def test_toy_verdict_exponential():
    v = toy_spread_verdict(ToyFamily.parse("exp-neg"), 1.0, 0.05, [10, 100, 1000], 20_000,
                           np.random.default_rng(0))
    assert v.verdict == "non-spreading evidence"
    assert [w["R"] for w in v.witnesses] == [10, 100, 1000]
    for w in v.witnesses:
        assert w["certified"] and w["estimate"] >= GAMMA_UNIT_DISC - 3 * max(w["stderr"], 1e-12)


def test_toy_verdict_constant():
    v = toy_spread_verdict(ToyFamily("poly", Polynomial([2.0 + 0j])), 1.0, 0.05, [10, 100], 20_000,
                           np.random.default_rng(0))
    assert v.verdict == "non-spreading evidence"
