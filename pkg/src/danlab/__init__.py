"""Tame discrete sets on Danielewski surfaces ``{xy = P(z)}``."""

from __future__ import annotations

from .automorphisms import (
    AutomorphismWord,
    FlowX,
    FlowY,
    ReplicaX,
    ReplicaY,
    Swap,
    Twist,
    flow_x,
    flow_y,
    random_word,
    replica_flow,
    word_apply,
    word_compose,
    word_inverse,
)
from .constructions import (
    MapReport,
    TameWitness,
    map_tame_to_tame,
    prescribe_p2,
    randomize_projection,
    rr_checklist,
    solve_flow_time,
    split_into_tame,
    spread_past,
)
from .discrete import DiscreteSet, ThresholdSchedule, projection_report, schedule_check, set_new, split
from .errors import DanlabError, DomainError, InvariantBreach
from .poly import Polynomial, interpolate
from .scalars import ExactComplex, format_scalar, parse_scalar
from .spreading import (
    EtaFamily,
    SpreadReport,
    ToyFamily,
    certified_hit_bound,
    claim1_bound,
    gaussian_sample,
    gaussian_tail,
    mc_hit_probability,
    threshold_sequence,
    toy_spread_verdict,
)
from .surface import Surface, SurfacePoint, exhaustion, point_new, random_point, surface_new

__version__ = "0.1.0"
