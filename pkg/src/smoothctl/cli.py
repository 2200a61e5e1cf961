"""Batch front-end: `smoothctl design|verify|invariants`.

Configs are flat `key = value` text with '#' comments; complex entries are
"re,im" pairs, matrices are four entries separated by ';' in row-major
order, and the named gates hadamard1 / hadamard2 / identity are accepted
wherever a matrix is.

Exit codes: 0 ok, 2 validation failure, 3 singular-reduction abort,
4 bad input.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .gauge import OrbitMismatch, SearchExhausted
from .integrate import ControlSignal, StartMismatch
from .invariants import UnitaryPair, invariants_of, is_singular
from .pipeline import ValidationFailure, design, fidelity, integrate_signal
from .planner import DELTA_FLOOR, export_csv
from .prelim import PrelimParams
from .reduction import SingularReduction
from .su2 import Su2

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SINGULAR = 3
EXIT_BAD_INPUT = 4

_SQ = 1.0 / math.sqrt(2.0)
NAMED_GATES = {
    "hadamard1": Su2(complex(_SQ), complex(_SQ)),
    "hadamard2": Su2(complex(_SQ), complex(0.0, -_SQ)),
    "identity": Su2.identity(),
}


class ConfigError(Exception):
    pass


def parse_kv(text: str) -> dict:
    """Parse flat key = value lines; '#' starts a comment."""
    out = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {ln}: expected 'key = value'")
        key, val = line.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"complex entry must be 're,im': {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as e:
        raise ConfigError(str(e))


def parse_gate(text: str) -> Su2:
    """Named gate or four 're,im' entries (row-major) separated by ';'."""
    name = text.strip().lower()
    if name in NAMED_GATES:
        return NAMED_GATES[name]
    parts = [p for p in text.split(";") if p.strip()]
    if len(parts) != 4:
        raise ConfigError(
            f"gate must be a known name or 4 entries, got {text!r}")
    m = np.array([parse_complex(p) for p in parts]).reshape(2, 2)
    err = float(np.linalg.norm(m.conj().T @ m - np.eye(2))
                + abs(np.linalg.det(m) - 1.0))
    if err > 1e-8:
        raise ConfigError(f"gate is not special unitary (residual {err:.2e})")
    if err > 1e-10:
        print(f"warning: gate renormalized (residual {err:.2e})",
              file=sys.stderr)
    return Su2(complex(m[0, 0]), complex(m[0, 1]))


@dataclass
class DesignConfig:
    gamma: float
    target_u: Su2
    target_v: Su2
    prelim: PrelimParams
    t2: float
    step: float
    delta_floor: float
    seed: int


def load_config(path) -> DesignConfig:
    kv = parse_kv(Path(path).read_text())

    def get(key, default=None, cast=float):
        if key in kv:
            return cast(kv.pop(key))
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default

    cfg = DesignConfig(
        gamma=get("gamma", 1.0 / 0.2514),
        target_u=parse_gate(kv.pop("target_u", "hadamard1")),
        target_v=parse_gate(kv.pop("target_v", "hadamard2")),
        prelim=PrelimParams(delta0=get("delta0", 0.5),
                            epsilon0=get("epsilon0", 1.0),
                            t1=get("t1", 1.0)),
        t2=get("t2", 10.0),
        step=get("step", 1e-3),
        delta_floor=get("delta_floor", DELTA_FLOOR),
        seed=get("seed", 0, cast=int),
    )
    if kv:
        raise ConfigError(f"unknown config keys: {sorted(kv)}")
    if abs(abs(cfg.gamma) - 1.0) < 1e-12:
        raise ConfigError("|gamma| = 1 is excluded by the model")
    env_seed = os.environ.get("SMOOTHCTL_SEED")
    if env_seed is not None:
        cfg.seed = int(env_seed)
    return cfg


def load_pair(path) -> UnitaryPair:
    kv = parse_kv(Path(path).read_text())
    u = kv.get("u", kv.get("target_u"))
    v = kv.get("v", kv.get("target_v"))
    if u is None or v is None:
        raise ConfigError("pair file needs keys u and v (or target_u/_v)")
    return UnitaryPair(parse_gate(u), parse_gate(v))


def cmd_design(args) -> int:
    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    target = UnitaryPair(cfg.target_u, cfg.target_v)
    try:
        report = design(target, cfg.gamma, prelim=cfg.prelim, t2=cfg.t2,
                        step=cfg.step, delta_floor=cfg.delta_floor,
                        seed=cfg.seed)
    except ValidationFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SingularReduction, SearchExhausted, StartMismatch,
            OrbitMismatch) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SINGULAR

    report.signal.to_csv(out / "controls.csv")
    export_csv(report.specs[0], out / "trajectory.csv")
    _write_traces(report, out / "trace.csv")
    (out / "report.txt").write_text(report.to_text())
    print(report.to_text(), end="")
    return EXIT_OK if report.passed else EXIT_VALIDATION


def _write_traces(report, path) -> None:
    """Concatenate the per-leg quotient traces on the full signal clock."""
    offset = report.prelim_t1
    with open(path, "w") as f:
        f.write("t,xR,xI,yR,yI,zR,zI,wR,wI,x1,x2,x3,Delta\n")
        for tr in report.traces:
            for i, t in enumerate(tr.times):
                row = (t + offset, *tr.reals[i], *tr.coords[i], tr.deltas[i])
                f.write(",".join(f"{v:.17g}" for v in row) + "\n")
            offset += tr.times[-1] + report.prelim_t1


def cmd_verify(args) -> int:
    try:
        signal = ControlSignal.from_csv(args.controls)
        tu = parse_gate(args.target_u)
        tv = parse_gate(args.target_v)
        gamma = float(args.gamma)
        if abs(abs(gamma) - 1.0) < 1e-12:
            raise ConfigError("|gamma| = 1 is excluded by the model")
    except (ConfigError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT

    if len(signal.times) < 2 or signal.times[-1] <= 0.0:
        # zero-length signal: the identity evolution
        fu, _ = fidelity(Su2.identity(), tu)
        fv, _ = fidelity(Su2.identity(), tv)
        print(f"fidelity_u = {fu:.12f}")
        print(f"fidelity_v = {fv:.12f}")
        return EXIT_OK if min(fu, fv) >= args.threshold else EXIT_VALIDATION

    final = integrate_signal(signal, gamma, step=args.step)
    fu, su = fidelity(final.u, tu)
    fv, sv = fidelity(final.v, tv)
    ends_zero = (np.linalg.norm(signal.values[0]) <= 1e-9
                 and np.linalg.norm(signal.values[-1]) <= 1e-9)
    jump = signal.max_jump()
    print(f"fidelity_u = {fu:.12f}")
    print(f"fidelity_v = {fv:.12f}")
    print(f"sign_u = {su:+d}")
    print(f"sign_v = {sv:+d}")
    print(f"endpoints_zero = {ends_zero}")
    print(f"max_jump = {jump:.6e}")
    ok = min(fu, fv) >= args.threshold and ends_zero
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_invariants(args) -> int:
    try:
        pair = load_pair(args.pair)
    except (ConfigError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    iv = invariants_of(pair)
    verdict = "singular" if is_singular(pair) else "regular"
    print(f"x1 = {iv.x1:.12f}")
    print(f"x2 = {iv.x2:.12f}")
    print(f"x3 = {iv.x3:.12f}")
    print(f"Delta = {iv.delta:.12e}")
    print(f"verdict = {verdict}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smoothctl",
                                description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("design", help="run the full design pipeline")
    d.add_argument("--config", required=True)
    d.add_argument("--out", required=True)
    d.set_defaults(fn=cmd_design)

    v = sub.add_parser("verify", help="re-integrate an exported signal")
    v.add_argument("--controls", required=True)
    v.add_argument("--gamma", required=True)
    v.add_argument("--target-u", required=True, dest="target_u")
    v.add_argument("--target-v", required=True, dest="target_v")
    v.add_argument("--threshold", type=float, default=0.999)
    v.add_argument("--step", type=float, default=1e-3)
    v.set_defaults(fn=cmd_verify)

    i = sub.add_parser("invariants", help="print quotient coordinates")
    i.add_argument("--pair", required=True)
    i.set_defaults(fn=cmd_invariants)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
