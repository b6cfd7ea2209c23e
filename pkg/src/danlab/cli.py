"""Command line runner: every randomized command is a pure function of its flags and seed."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from dataclasses import asdict, dataclass
from importlib import resources

import numpy as np

from .automorphisms import AutomorphismWord
from .constructions import (
    TameWitness,
    map_tame_to_tame,
    projection_ok,
    randomize_projection,
    split_into_tame,
    spread_past,
)
from .discrete import set_from_json_obj, set_to_json_obj
from .errors import DomainError, ExactBackendUnsupported, InvariantBreach
from .scalars import format_scalar
from .spreading import (
    DEFAULT_SAMPLES,
    MIN_SAMPLES,
    EtaFamily,
    ToyFamily,
    mc_hit_probability,
    threshold_sequence,
    toy_spread_verdict,
)
from .surface import exhaustion, point_new, surface_new

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_USAGE = 64
EXIT_INTERNAL = 70

SEED_ENV = "DANLAB_SEED"
SEED_MAX = 2**64 - 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    command: str
    surface: str | None
    seed: int
    samples: int
    backend: str
    r: str | None
    nmax: int | None
    inp: str | None
    out: str | None
    extra: dict

    def echo(self) -> dict:
        d = asdict(self)
        d["in"] = d.pop("inp")
        d.update(d.pop("extra"))
        return d

    @property
    def exact(self) -> bool:
        return self.backend == "exact"

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


# -- helpers ---------------------------------------------------------------


def _floats(text: str, name: str) -> list:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--{name} expects comma separated numbers, got {text!r}") from None
    if not vals:
        raise UsageError(f"--{name} is empty")
    return vals


def _single_float(cfg: RunConfig, default: float) -> float:
    if cfg.r is None:
        return default
    vals = _floats(cfg.r, "r")
    if len(vals) != 1:
        raise UsageError("--r takes a single value for this command")
    return vals[0]


def _need(cfg: RunConfig, field: str):
    val = getattr(cfg, field)
    if val is None:
        flag = "in" if field == "inp" else field
        raise UsageError(f"{cfg.command} needs --{flag}")
    return val


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None
    except json.JSONDecodeError as err:
        raise ValueError(f"{path} is not valid JSON: {err}") from None


def _surface(cfg: RunConfig):
    return surface_new(_need(cfg, "surface"))


def _json_doc(cfg: RunConfig, body: dict) -> str:
    doc = {"command": cfg.command, "config": cfg.echo(), "seed": cfg.seed}
    doc.update(body)
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _require_approx(cfg: RunConfig):
    if cfg.exact:
        raise ExactBackendUnsupported(f"{cfg.command} samples Gaussian times and needs --backend approx")


# -- commands --------------------------------------------------------------


def cmd_verify_surface(cfg: RunConfig) -> str:
    S = _surface(cfg)
    b = S.bounds
    return _json_doc(cfg, {
        "squarefree": True,
        "d": S.d,
        "P": S.P.format(),
        "rho": b.rho,
        "alpha": b.alpha,
        "bounds": {"rho": b.rho, "alpha": b.alpha, "beta": b.beta, "M": b.M},
    })


def _grid_points(S, cfg: RunConfig) -> list:
    if cfg.inp is not None:
        return list(set_from_json_obj(S, _read_json(cfg.inp), exact=False).points)
    z = complex(cfg.extra["z"])
    P = S.P.approx()
    pts = []
    for m in _floats(cfg.extra["ys"], "ys"):
        if m <= 0:
            raise UsageError("--ys values must be positive")
        pts.append(point_new(S, P(z) / m, complex(m), z))
    return pts


def cmd_mc_spread(cfg: RunConfig) -> str:
    _require_approx(cfg)
    if cfg.samples < MIN_SAMPLES:
        raise UsageError(f"--samples must be at least {MIN_SAMPLES}")
    S = _surface(cfg)
    radii = _floats(cfg.r, "r") if cfg.r is not None else [1.0]
    if any(r <= 0 for r in radii):
        raise UsageError("--r values must be positive")
    pts = sorted(_grid_points(S, cfg), key=exhaustion)
    fam = EtaFamily(S)
    rng = cfg.rng()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "z", "exhaustion", "r", "N", "hits", "estimate", "stderr", "bound"])
    for p in pts:
        for r in radii:
            rep = mc_hit_probability(fam, p, r, cfg.samples, rng)
            w.writerow([format_scalar(p.x), format_scalar(p.y), format_scalar(p.z), repr(exhaustion(p)),
                        repr(r), rep.samples, rep.hits, repr(rep.estimate), repr(rep.stderr),
                        "" if rep.bound is None else repr(rep.bound)])
    return buf.getvalue()


def cmd_threshold(cfg: RunConfig) -> str:
    S = _surface(cfg)
    nmax = cfg.nmax if cfg.nmax is not None else 8
    sched = threshold_sequence(S, nmax, _single_float(cfg, 1.0))
    return _json_doc(cfg, {"schedule": sched.to_dict()})


def _input_set(cfg: RunConfig, S):
    return set_from_json_obj(S, _read_json(_need(cfg, "inp")), exact=cfg.exact)


def cmd_split(cfg: RunConfig) -> str:
    S = _surface(cfg)
    D = _input_set(cfg, S)
    D1, w1, D2, w2 = split_into_tame(S, D, cfg.extra["zeta"], cfg.rng())
    return _json_doc(cfg, {
        "D1": set_to_json_obj(D1),
        "D2": set_to_json_obj(D2),
        "witness1": w1.to_dict() | {"verified": w1.verify(S)},
        "witness2": w2.to_dict() | {"verified": w2.verify(S)},
    })


def cmd_spread_set(cfg: RunConfig) -> str:
    S = _surface(cfg)
    D = _input_set(cfg, S)
    zeta = cfg.extra["zeta"]
    pre = AutomorphismWord()
    moved = D
    if not (projection_ok(D, "Y") or projection_ok(D, "X")):
        _, pre = randomize_projection(S, D, cfg.rng(), axis="Y", pairwise=True)
        moved = D.apply(pre)
    w = spread_past(S, moved, zeta)
    wit = TameWitness(pre + w.word, D.points, w.zeta, w.achieved)
    return _json_doc(cfg, {"witness": wit.to_dict() | {"verified": wit.verify(S)}})


def cmd_map_tame(cfg: RunConfig) -> str:
    S = _surface(cfg)
    doc = _read_json(_need(cfg, "inp"))
    if not isinstance(doc, dict) or "source" not in doc or "target" not in doc:
        raise ValueError("map-tame input is an object with 'source' and 'target' point lists")
    D = set_from_json_obj(S, doc["source"], exact=cfg.exact)
    Dt = set_from_json_obj(S, doc["target"], exact=cfg.exact)
    zeta = doc.get("zeta", list(range(len(D))))
    if not all(isinstance(i, int) and 0 <= i < len(Dt) for i in zeta):
        raise ValueError("zeta lists target indices")
    rep = map_tame_to_tame(S, D, Dt, zeta, cfg.rng(), strategy=cfg.extra["strategy"])
    image = [rep.word.apply(S, p) for p in D.points]
    return _json_doc(cfg, {
        "report": rep.to_dict(),
        "image": [[format_scalar(c) for c in p.coords] for p in image],
    })


def cmd_toy(cfg: RunConfig) -> str:
    _require_approx(cfg)
    if cfg.samples < MIN_SAMPLES:
        raise UsageError(f"--samples must be at least {MIN_SAMPLES}")
    T = ToyFamily.parse(cfg.extra["f"])
    grid = _floats(cfg.extra["grid"], "grid")
    v = toy_spread_verdict(T, _single_float(cfg, 1.0), cfg.extra["eps"], grid, cfg.samples, cfg.rng())
    return _json_doc(cfg, {"verdict": v.to_dict()})


# published output schema of each JSON command (mc-spread writes CSV)
SCHEMAS = {
    "verify-surface": "verify_surface.schema.json",
    "threshold": "threshold.schema.json",
    "split": "split.schema.json",
    "spread-set": "spread_set.schema.json",
    "map-tame": "map_tame.schema.json",
    "toy": "toy.schema.json",
}


def load_schema(name: str) -> dict:
    """Schema by command name or file name, read from the package data."""
    fname = SCHEMAS.get(name, name)
    return json.loads(resources.files("danlab").joinpath("schemas", fname).read_text(encoding="utf-8"))


COMMANDS = {
    "verify-surface": cmd_verify_surface,
    "mc-spread": cmd_mc_spread,
    "threshold": cmd_threshold,
    "split": cmd_split,
    "spread-set": cmd_spread_set,
    "map-tame": cmd_map_tame,
    "toy": cmd_toy,
}


# -- argument parsing ----------------------------------------------------------


def _seed(text: str | None) -> int:
    if text is None:
        text = os.environ.get(SEED_ENV, "0")
    try:
        seed = int(text, 10)
    except ValueError:
        raise UsageError(f"seed must be a decimal integer, got {text!r}") from None
    if not 0 <= seed <= SEED_MAX:
        raise UsageError("seed must be a 64-bit unsigned integer")
    return seed


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--surface", help="coefficients of P, low to high, e.g. -1,0,1")
    common.add_argument("--seed", help=f"64-bit unsigned seed (default ${SEED_ENV}, else 0)")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="Monte Carlo sample count N")
    common.add_argument("--in", dest="inp", help="input JSON file")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--backend", choices=("approx", "exact"), default="approx")
    common.add_argument("--r", help="ball radius (mc-spread: comma separated list)")
    common.add_argument("--nmax", type=int, help="length of the threshold schedule")

    parser = _Parser(prog="danlab", description="Tame discrete sets on Danielewski surfaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("verify-surface", parents=[common], help="check P and print growth constants")
    p = sub.add_parser("mc-spread", parents=[common], help="Monte Carlo hit probabilities of eta_t")
    p.add_argument("--ys", default="10,100,1000", help="moduli of y for the default point grid")
    p.add_argument("--z", default="0.5", help="z coordinate of the default point grid")
    sub.add_parser("threshold", parents=[common], help="certified threshold schedule")
    for name in ("split", "spread-set"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--zeta", type=float, default=1000.0, help="escape target for every point")
    p = sub.add_parser("map-tame", parents=[common], help="word realizing an injection between sets")
    p.add_argument("--strategy", choices=("auto", "simultaneous", "sequential"), default="auto")
    p = sub.add_parser("toy", parents=[common], help="spreading verdict for pi_t(x, y) = x + t f(y)")
    p.add_argument("--f", default="poly:0,0,1", help="'poly:<coeffs>' or 'exp-neg'")
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--grid", default="10,100,1000", help="radii R to test")
    return parser


_BASE_FIELDS = {"command", "surface", "seed", "samples", "backend", "r", "nmax", "inp", "out"}


_NUMERIC_VALUE = re.compile(r"^-[\d.]")
_VALUE_FLAGS = ("--surface", "--z", "--r", "--ys", "--grid", "--zeta", "--f")


def _glue_negative_values(argv: list) -> list:
    """``--surface -1,0,1`` would read ``-1,0,1`` as a flag; rewrite it as ``--surface=-1,0,1``."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and _NUMERIC_VALUE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def parse_config(argv) -> RunConfig:
    argv = list(sys.argv[1:] if argv is None else argv)
    ns = build_parser().parse_args(_glue_negative_values(argv))
    args = vars(ns)
    extra = {k: v for k, v in args.items() if k not in _BASE_FIELDS}
    return RunConfig(
        command=ns.command,
        surface=ns.surface,
        seed=_seed(ns.seed),
        samples=ns.samples,
        backend=ns.backend,
        r=ns.r,
        nmax=ns.nmax,
        inp=ns.inp,
        out=ns.out,
        extra=extra,
    )


def run(argv=None) -> int:
    try:
        try:
            cfg = parse_config(argv)
        except SystemExit as stop:
            return int(stop.code or 0)
        text = COMMANDS[cfg.command](cfg)
        if cfg.out:
            try:
                with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
                    fh.write(text)
            except OSError as err:
                raise UsageError(f"cannot write {cfg.out}: {err.strerror}") from None
        else:
            sys.stdout.write(text)
        return EXIT_OK
    except UsageError as err:
        print(f"danlab: usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantBreach as err:
        print(f"danlab: internal invariant breach: {err}", file=sys.stderr)
        return EXIT_INTERNAL
    except (DomainError, ValueError) as err:
        print(f"danlab: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_DOMAIN


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
