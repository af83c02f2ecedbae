"""Command line front end.

Subcommands: bounds (JSON feasibility report), sweep (CSV over one
parameter), simulate (CSV wavepacket or phase time series), causal (JSON
timing verdict).  Inputs accept unit suffixes kg, m, s, C (SI) and mp, lp,
tp (Planck); bare numbers follow --units (default planck).  Output is
deterministic: identical invocations produce identical bytes.

Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, replace

from . import __version__, bounds, causal, dynamics
from .errors import ConvergenceError, InvalidInputError
from .scenario import CouplingKind, ScenarioParams
from .units import CHARGE, LENGTH, MASS, TIME, Quantity, from_planck, to_planck

_TOKEN_RE = re.compile(
    r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(kg|mp|lp|tp|m|s|C)?$"
)
_PLANCK_SUFFIX = {"mp": "mass", "lp": "length", "tp": "time"}
_SI_SUFFIX = {"kg": "mass", "m": "length", "s": "time", "C": "charge"}
_DIM_FOR = {"mass": MASS, "length": LENGTH, "time": TIME, "charge": CHARGE}
_SI_UNIT_NAME = {"mass": "kg", "length": "m", "time": "s", "charge": "C"}


def _parse_quantity(text: str, kind: str, units_mode: str) -> tuple[float, float]:
    """Parse one CLI token into (planck_value, si_value)."""
    match = _TOKEN_RE.match(text.strip())
    if match is None:
        raise InvalidInputError(f"cannot parse quantity {text!r}")
    value = float(match.group(1))
    suffix = match.group(2)
    if suffix is None:
        system = units_mode
    elif suffix in _PLANCK_SUFFIX:
        system = "planck"
        if _PLANCK_SUFFIX[suffix] != kind:
            raise InvalidInputError(
                f"{text!r} has dimension {_PLANCK_SUFFIX[suffix]}, expected {kind}"
            )
    else:
        system = "si"
        if _SI_SUFFIX[suffix] != kind:
            raise InvalidInputError(
                f"{text!r} has dimension {_SI_SUFFIX[suffix]}, expected {kind}"
            )
    dim = _DIM_FOR[kind]
    if system == "planck":
        return value, from_planck(value, dim).value
    return to_planck(Quantity(value, dim)), value


def _parse_bare(text: str, name: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise InvalidInputError(f"{name} must be a plain number, got {text!r}") from None


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    return format(value, ".17g")


def _echo_entry(planck: float, si: float, kind: str) -> dict:
    return {"planck": planck, "si": si, "si_unit": _SI_UNIT_NAME[kind]}


_SCENARIO_FLAG_KINDS = {
    "m_a": "mass",
    "m_b": "mass",
    "d": "length",
    "r": "length",
    "q_a": "charge",
    "q_b": "charge",
    "dx_min": "length",
}


def _scenario_from_args(args, require: tuple[str, ...], skip: tuple[str, ...] = ()):
    """Build ScenarioParams from parsed flags; returns (params, input_echo)."""
    units_mode = args.units
    echo: dict = {"units": units_mode, "coupling": args.coupling}
    planck: dict = {}
    for flag, kind in _SCENARIO_FLAG_KINDS.items():
        if flag in skip:
            continue
        raw = getattr(args, flag, None)
        if raw is None:
            if flag in require:
                raise InvalidInputError(f"missing required parameter --{flag.replace('_', '-')}")
            continue
        p_val, si_val = _parse_quantity(raw, kind, units_mode)
        planck[flag] = p_val
        echo[flag] = _echo_entry(p_val, si_val, kind)
    echo["r_over_d_min"] = args.r_over_d_min
    params = ScenarioParams(
        m_a=planck.get("m_a", 1.0),
        d=planck.get("d", 1.0),
        r=planck.get("r", 1.0),
        m_b=planck.get("m_b", 1.0),
        coupling=CouplingKind(args.coupling),
        q_a=planck.get("q_a"),
        q_b=planck.get("q_b"),
        delta_x_min=planck.get("dx_min"),
        r_over_d_min=args.r_over_d_min,
        override_geometry=args.override_geometry,
    )
    return params, echo


def _envelope(command: str, input_echo: dict, results: dict, provenance: dict) -> dict:
    return {
        "tool": "interferobounds",
        "version": __version__,
        "command": command,
        "input": input_echo,
        "results": results,
        "provenance": provenance,
    }


def _emit(args, text: str) -> None:
    data = text.encode("utf-8")
    out = getattr(args, "out", None)
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()


def _emit_json(args, payload: dict) -> None:
    _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _csv(comments: list[str], header: list[str], rows: list[list[str]]) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _cmd_bounds(args) -> int:
    params, echo = _scenario_from_args(args, require=("m_a", "d", "r"))
    echo["model"] = args.model
    echo["slack"] = args.slack
    report = bounds.feasibility_report(params, args.model, args.slack)
    env = _envelope("bounds", echo, report.as_dict(), report.provenance)
    _emit_json(args, env)
    return 0


def _cmd_causal(args) -> int:
    units_mode = args.units
    r_p, r_si = _parse_quantity(args.r, "length", units_mode)
    ta_p, ta_si = _parse_quantity(args.t_a, "time", units_mode)
    tb_p, tb_si = _parse_quantity(args.t_b, "time", units_mode)
    echo = {
        "units": units_mode,
        "r": _echo_entry(r_p, r_si, "length"),
        "t_a": _echo_entry(ta_p, ta_si, "time"),
        "t_b": _echo_entry(tb_p, tb_si, "time"),
        "strict": not args.non_strict,
    }
    # Masses and separation are irrelevant to the timing checks.
    params = ScenarioParams(m_a=1.0, d=r_p, r=r_p, t_a=ta_p, t_b=tb_p)
    strict = not args.non_strict
    verdict = causal.check_no_signalling(params, strict=strict)
    timeline = causal.build_timeline(params)
    results = {
        "events": [{"label": e.label, "t": e.t, "x": e.x} for e in timeline.events()],
        "one_way": {
            "bound": bounds.ta_tb_min_one_way(r_p),
            "ok": causal.meets_one_way_bound(ta_p, tb_p, r_p, strict=strict),
        },
        "round_trip": {
            "bound": bounds.ta_tb_min_round_trip(r_p),
            "ok": verdict.no_signalling_ok,
            "margin": verdict.margin,
            "explanation": verdict.explanation,
        },
        "backreaction_free": causal.backreaction_free(tb_p, r_p),
    }
    provenance = {
        "one_way.bound": "R/c",
        "round_trip.bound": "2*R/c",
        "round_trip.margin": "T_A + T_B - 2*R/c",
        "backreaction_free": "T_B < R/c",
        "events": "t in t_P, x in l_P",
    }
    _emit_json(args, _envelope("causal", echo, results, provenance))
    return 0


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter over a grid, everything else held fixed."""

    parameter: str
    lo: float
    hi: float
    points: int
    scale: str  # "linear" | "log"
    fixed: ScenarioParams

    def __post_init__(self) -> None:
        if self.points < 2:
            raise InvalidInputError(f"points must be >= 2, got {self.points}")
        if not self.lo < self.hi:
            raise InvalidInputError(
                f"sweep needs from < to, got {self.lo!r} .. {self.hi!r}"
            )
        if self.scale == "log" and self.lo <= 0.0:
            raise InvalidInputError("log scale requires from > 0")

    def grid(self) -> list[float]:
        n = self.points
        if self.scale == "log":
            la, lb = math.log10(self.lo), math.log10(self.hi)
            return [10.0 ** (la + i * (lb - la) / (n - 1)) for i in range(n)]
        return [self.lo + i * (self.hi - self.lo) / (n - 1) for i in range(n)]


def _cmd_sweep(args) -> int:
    name = args.sweep
    if name == "eta":
        return _sweep_eta(args)
    require = tuple(f for f in ("m_a", "d", "r") if f != name)
    params, _ = _scenario_from_args(args, require=require, skip=(name,))
    kind = _SCENARIO_FLAG_KINDS[name]
    lo, _ = _parse_quantity(args.sweep_from, kind, args.units)
    hi, _ = _parse_quantity(args.to, kind, args.units)
    spec = SweepSpec(name, lo, hi, args.points, "log" if args.log else "linear", params)
    grid = spec.grid()

    first = bounds.feasibility_report(replace(params, **{name: grid[0]}), args.model, args.slack)
    columns = [f for f in bounds.BoundsReport.field_order() if f in first.as_dict()]
    comments = [
        f"interferobounds {__version__}",
        f"sweep {name} from {_fmt(lo)} to {_fmt(hi)} points {args.points} "
        f"scale {spec.scale} (planck units)",
    ]
    comments.extend(f"provenance: {c} = {first.provenance[c]}" for c in columns)
    rows = []
    for value in grid:
        report = bounds.feasibility_report(
            replace(params, **{name: value}), args.model, args.slack
        )
        data = report.as_dict()
        rows.append([_fmt(value)] + [_fmt(data[c]) for c in columns])
    _emit(args, _csv(comments, [name] + columns, rows))
    return 0


def _sweep_eta(args) -> int:
    params, _ = _scenario_from_args(args, require=("m_a", "d"), skip=("r",))
    lo = _parse_bare(args.sweep_from, "eta from")
    hi = _parse_bare(args.to, "eta to")
    spec = SweepSpec("eta", lo, hi, args.points, "log" if args.log else "linear", params)
    grid = spec.grid()
    comments = [
        f"interferobounds {__version__}",
        f"sweep eta from {_fmt(lo)} to {_fmt(hi)} points {args.points} "
        f"scale {spec.scale} (planck units)",
        "provenance: tb_eta = 4*eta^3*(K/m_B)*d",
        "provenance: ta_lower_bound = 4*(eta^2 - eta^3)*(K/m_B)*d",
        "provenance: ta_tb_total = tb_eta + ta_lower_bound",
        "provenance: r_implied = 2*eta^2*(K/m_B)*d",
    ]
    m_eff = params.effective_source_mass
    header = ["eta", "tb_eta", "ta_lower_bound", "ta_tb_total", "r_implied"]
    rows = []
    for eta in grid:
        tb = bounds.tb_eta(eta, m_eff, params.d)
        ta = bounds.ta_lower_bound(eta, m_eff, params.d)
        r_implied = 2.0 * eta * eta * m_eff * params.d
        rows.append([_fmt(v) for v in (eta, tb, ta, ta + tb, r_implied)])
    _emit(args, _csv(comments, header, rows))
    return 0


def _cmd_simulate(args) -> int:
    params, _ = _scenario_from_args(args, require=("m_a", "d", "r"))
    sigma0, _ = _parse_quantity(args.sigma0, "length", args.units)
    if args.steps < 1:
        raise InvalidInputError(f"steps must be >= 1, got {args.steps}")

    if args.t_max == "auto":
        if args.model == "displacement":
            t_max = dynamics.orthogonalization_time(params, sigma0, args.eps)
        else:
            t_max = bounds.tb_phase(params, "exact")
    else:
        t_max, _ = _parse_quantity(args.t_max, "time", args.units)
        if t_max < 0.0:
            raise InvalidInputError(f"t-max must be nonnegative, got {t_max!r}")

    times = (
        [0.0]
        if t_max == 0.0
        else [t_max * i / args.steps for i in range(args.steps + 1)]
    )
    comments = [
        f"interferobounds {__version__}",
        f"simulate {args.model} t_max {_fmt(t_max)} steps {args.steps} (planck units)",
    ]
    if args.model == "displacement":
        header = ["t", "mean_x_l", "mean_x_r", "sigma_x", "overlap_magnitude"]
        comments.append("positive x points from the probe toward the source")
        rows = []
        for t in times:
            pair = dynamics.displacement_branches(params, sigma0, t)
            rows.append(
                [
                    _fmt(t),
                    _fmt(pair.left.mean_x),
                    _fmt(pair.right.mean_x),
                    _fmt(pair.left.sigma_x),
                    _fmt(pair.overlap_magnitude),
                ]
            )
    else:
        header = ["t", "delta_phi", "overlap_magnitude"]
        rows = []
        for t in times:
            rec = dynamics.phase_evolution(params, t)
            rows.append([_fmt(t), _fmt(rec.delta_phi), _fmt(rec.overlap_magnitude)])
    _emit(args, _csv(comments, header, rows))
    return 0


def _add_units_flags(sp) -> None:
    sp.add_argument("--units", choices=("si", "planck"), default="planck",
                    help="system for bare numbers (suffixed values override)")
    sp.add_argument("--out", default=None, help="write output bytes to this file")


def _add_scenario_flags(sp, required: tuple[str, ...] = ()) -> None:
    sp.add_argument("--m-a", required="m_a" in required, help="source mass")
    sp.add_argument("--m-b", default="1mp", help="probe mass (default 1mp)")
    sp.add_argument("--d", required="d" in required, help="path separation")
    sp.add_argument("--r", required="r" in required, help="source-probe distance")
    sp.add_argument("--coupling", choices=("gravity", "coulomb"), default="gravity")
    sp.add_argument("--q-a", default=None, help="source charge (coulomb)")
    sp.add_argument("--q-b", default=None, help="probe charge (coulomb)")
    sp.add_argument("--dx-min", default=None,
                    help="trap confinement floor (default 1lp for gravity)")
    sp.add_argument("--r-over-d-min", type=float, default=100.0,
                    help="far-field validity threshold for R/d")
    sp.add_argument("--override-geometry", action="store_true",
                    help="evaluate far-field formulas even when R/d is below the threshold")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="interferobounds",
        description="Timing, causality, and separation bounds for mass and "
        "charge interferometry, with wavepacket cross-checks.",
    )
    ap.add_argument("--version", action="version", version=f"interferobounds {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="JSON feasibility report for one scenario")
    _add_scenario_flags(b, required=("m_a", "d", "r"))
    b.add_argument("--model", choices=("displacement", "phase", "both"), default="both")
    b.add_argument("--slack", type=float, default=1.0,
                   help="multiplier on the displacement target (default 1)")
    _add_units_flags(b)
    b.set_defaults(func=_cmd_bounds)

    s = sub.add_parser("sweep", help="CSV of bounds over one swept parameter")
    _add_scenario_flags(s)
    s.add_argument("--sweep", required=True, choices=("m_a", "m_b", "d", "r", "eta"))
    s.add_argument("--from", dest="sweep_from", required=True, help="sweep start")
    s.add_argument("--to", required=True, help="sweep end")
    s.add_argument("--points", type=int, required=True)
    s.add_argument("--log", action="store_true", help="logarithmic grid")
    s.add_argument("--model", choices=("displacement", "phase", "both"), default="both")
    s.add_argument("--slack", type=float, default=1.0)
    _add_units_flags(s)
    s.set_defaults(func=_cmd_sweep)

    m = sub.add_parser("simulate", help="CSV time series from the wavepacket or phase oracle")
    _add_scenario_flags(m, required=("m_a", "d", "r"))
    m.add_argument("--model", choices=("displacement", "phase"), required=True)
    m.add_argument("--t-max", required=True,
                   help="series end time, or 'auto' for the model's orthogonalization time")
    m.add_argument("--steps", type=int, required=True)
    m.add_argument("--sigma0", default="1lp", help="initial probe width (default 1lp)")
    m.add_argument("--eps", type=float, default=0.01,
                   help="near-orthogonality threshold for auto t-max")
    _add_units_flags(m)
    m.set_defaults(func=_cmd_simulate)

    c = sub.add_parser("causal", help="JSON timing verdict and event table")
    c.add_argument("--t-a", required=True, help="interferometer duration")
    c.add_argument("--t-b", required=True, help="probe measurement duration")
    c.add_argument("--r", required=True, help="source-probe distance")
    c.add_argument("--non-strict", action="store_true",
                   help="count the exact boundary as satisfying the bounds")
    _add_units_flags(c)
    c.set_defaults(func=_cmd_causal)

    return ap


_VALUE_FLAGS = frozenset(
    {
        "--m-a", "--m-b", "--d", "--r", "--q-a", "--q-b", "--dx-min",
        "--t-a", "--t-b", "--sigma0", "--t-max", "--from", "--to",
    }
)


def _merge_negative_values(argv: list[str]) -> list[str]:
    # argparse mistakes a negative quantity like -1mp for an option; fold it
    # into --flag=value form so validation can reject it with a clear error.
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in _VALUE_FLAGS and nxt and nxt.startswith("-") and _TOKEN_RE.match(nxt):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_negative_values(list(argv)))
    try:
        return args.func(args)
    except InvalidInputError as exc:
        sys.stdout.write(
            json.dumps(
                {"error": {"code": "invalid-input", "message": str(exc)}},
                indent=2,
                sort_keys=True,
            )
            + "\n"
        )
        return 2
    except ConvergenceError as exc:
        sys.stdout.write(
            json.dumps(
                {"error": {"code": "no-convergence", "message": str(exc)}},
                indent=2,
                sort_keys=True,
            )
            + "\n"
        )
        return 3
