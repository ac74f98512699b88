"""Command-line front end: one JSON config in, one CSV or JSON artifact out.

Exit codes: 0 success, 1 bad config or schedule, 2 a verification failed,
3 a depth or size cap was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from . import odometer as od
from .errors import CapExceeded, DepthError, ScheduleError
from .spectral import (
    DEFAULT_GRID,
    DEFAULT_GRID_CAP,
    DEFAULT_MATRIX_CAP,
    DEFAULT_SUPPORT_CAP,
    ThetaFamily,
    check_gap,
    density_samples,
    fourier_sequence,
    gram,
    riesz_partial,
    zero_certificate,
)
from .system import CutSpacerSchedule, heights, total_measure, validate_schedule
from .verify import CONVENTION_NOTES, run_verify

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY, EXIT_CAP = 0, 1, 2, 3

# command -> (required params, optional params with defaults)
COMMANDS: dict[str, tuple[tuple[str, ...], dict[str, Any]]] = {
    "heights": (("K",), {}),
    "balls": (("k",), {}),
    "orbit": (("k",), {"t": 0, "steps": None}),
    "theta": (("k",), {}),
    "riesz": (("n",), {}),
    "fourier": (("alpha", "n_max"), {}),
    "gram": (("k", "n"), {}),
    "gap": (("l", "k"), {}),
    "zerocheck": (("k",), {"grid": DEFAULT_GRID}),
    "density": (("n",), {"grid": 1 << 12}),
    "measure": ((), {"depth": None}),
    "verify": ((), {"K_test": 6, "n_test": 6}),
}

CAP_DEFAULTS = {
    "support": DEFAULT_SUPPORT_CAP,
    "matrix": DEFAULT_MATRIX_CAP,
    "enumeration": od.DEFAULT_ENUMERATION_CAP,
    "grid": DEFAULT_GRID_CAP,
}

_SIGNED = {"alpha"}
_POSITIVE = {"grid", "n_max", "steps"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    schedule: CutSpacerSchedule
    command: str
    params: dict[str, Any]
    caps: dict[str, int] = field(default_factory=lambda: dict(CAP_DEFAULTS))
    output: str | None = None
    format: str = "json"


def _int_field(doc: Mapping[str, Any], key: str, path: str, *, minimum: int | None) -> int:
    value = doc[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}: must be >= {minimum}, got {value}")
    return value


def parse_config(document: str | bytes | Mapping[str, Any]) -> RunConfig:
    """Validate a config document; raises :class:`ConfigError` or :class:`ScheduleError`."""
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON: {exc}") from exc
    else:
        doc = document
    if not isinstance(doc, Mapping):
        raise ConfigError("config: expected a JSON object")
    for key in ("schedule", "cmd"):
        if key not in doc:
            raise ConfigError(f"{key}: missing field")
    schedule = validate_schedule(doc["schedule"])
    cmd = doc["cmd"]
    if cmd not in COMMANDS:
        raise ConfigError(f"cmd: unknown command {cmd!r}; expected one of {', '.join(COMMANDS)}")

    required, optional = COMMANDS[cmd]
    params: dict[str, Any] = {}
    for key in required:
        if key not in doc:
            raise ConfigError(f"{key}: missing field (required by {cmd!r})")
        params[key] = _int_field(doc, key, key, minimum=None if key in _SIGNED else (1 if key in _POSITIVE else 0))
    for key, default in optional.items():
        if key in doc and doc[key] is not None:
            params[key] = _int_field(doc, key, key, minimum=1 if key in _POSITIVE else 0)
        else:
            params[key] = default

    caps = dict(CAP_DEFAULTS)
    raw_caps = doc.get("caps", {})
    if not isinstance(raw_caps, Mapping):
        raise ConfigError("caps: expected an object")
    for key in raw_caps:
        if key not in CAP_DEFAULTS:
            raise ConfigError(f"caps.{key}: unknown cap")
        caps[key] = _int_field(raw_caps, key, f"caps.{key}", minimum=1)

    fmt = doc.get("format", "json")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format: expected 'csv' or 'json', got {fmt!r}")
    output = doc.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output: expected a path string")
    return RunConfig(schedule, cmd, params, caps, output, fmt)


def fraction_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _digits_str(ball: od.BallAddress) -> str:
    return " ".join(map(str, ball.digits))


def _coefficient_rows(poly) -> list[list[Any]]:
    return [[e, fraction_str(c)] for e, c in poly.items()]


@dataclass
class Artifact:
    """What a command produced: tabular rows, a JSON payload, and a verdict."""

    header: list[str]
    rows: list[list[Any]]
    payload: dict[str, Any]
    failed: bool = False


def _table(header, rows, **extra) -> Artifact:
    payload = {"rows": [dict(zip(header, r)) for r in rows]}
    payload.update(extra)
    return Artifact(header, rows, payload)


def _report(fields: dict[str, Any], failed: bool = False) -> Artifact:
    rows = [[k, json.dumps(v) if isinstance(v, (list, dict)) else v] for k, v in fields.items()]
    return Artifact(["field", "value"], rows, dict(fields), failed)


def _execute(cfg: RunConfig) -> Artifact:
    sched, p = cfg.schedule, cfg.params
    family = ThetaFamily(sched, support_cap=cfg.caps["support"])
    cmd = cfg.command

    if cmd == "heights":
        table = heights(sched, p["K"])
        return _table(["k", "h"], [[k, h] for k, h in enumerate(table)])

    if cmd == "balls":
        balls = od.enumerate_balls(sched, p["k"], cap=cfg.caps["enumeration"])
        rows = [[i, _digits_str(b), b.floor, od.upsilon(sched, b)] for i, b in enumerate(balls)]
        return _table(["ordinal", "digits", "floor", "upsilon"], rows)

    if cmd == "orbit":
        start = od.ball_from_ordinal(sched, p["k"], p["t"])
        limit = p["steps"] if p["steps"] is not None else cfg.caps["enumeration"]
        rows = []
        top = od.exceptional_ball(sched, p["k"])
        for i, b in enumerate(od.orbit(sched, start, limit=limit)):
            rows.append([i, _digits_str(b), b.floor, od.upsilon(sched, b), int(b == top)])
        return _table(["step", "digits", "floor", "upsilon", "is_top"], rows, reached_top=bool(rows and rows[-1][4]))

    if cmd == "theta":
        return _table(["exponent", "value"], _coefficient_rows(family.theta(p["k"])))

    if cmd == "riesz":
        return _table(["exponent", "value"], _coefficient_rows(riesz_partial(family, p["n"]).density))

    if cmd == "fourier":
        seq = fourier_sequence(family, p["alpha"], p["n_max"])
        return _table(["n", "value"], [[i + 1, fraction_str(u)] for i, u in enumerate(seq)], alpha=p["alpha"])

    if cmd == "gram":
        rep = gram(family, p["k"], p["n"], matrix_cap=cfg.caps["matrix"])
        rows = [[s, t, fraction_str(rep.entry(s, t))] for s in range(rep.size) for t in range(rep.size)]
        art = _table(
            ["s", "t", "value"],
            rows,
            k=rep.k,
            n=rep.n,
            expected_diagonal=fraction_str(rep.expected_diagonal),
            symmetric=rep.symmetric,
            status="pass" if rep.passed else "fail",
        )
        art.failed = not (rep.passed and rep.symmetric)
        return art

    if cmd == "gap":
        rep = check_gap(family, p["l"], p["k"])
        return _report(
            {
                "l": rep.l,
                "k": rep.k,
                "h_l": rep.h_l,
                "min_positive_exponent": rep.min_positive_exponent,
                "violations": list(rep.violations),
                "status": "pass" if rep.passed else "fail",
            },
            failed=not rep.passed,
        )

    if cmd == "zerocheck":
        cert = zero_certificate(family, p["k"], grid=p["grid"], grid_cap=cfg.caps["grid"])
        return _report(
            {
                "k": cert.k,
                "status": cert.status,
                "grid": cert.grid,
                "lipschitz": cert.lipschitz,
                "min_modulus": cert.min_modulus,
                "margin": cert.margin,
                "witness_theta": cert.witness_theta,
                "witness_value": cert.witness_value,
            }
        )

    if cmd == "density":
        table = density_samples(family, p["n"], p["grid"])
        rows = [[float(t), float(v)] for t, v in zip(table.theta, table.values)]
        return _table(["theta_radians", "density"], rows)

    if cmd == "measure":
        rep = total_measure(sched, p["depth"])
        return _report(
            {
                "depth": rep.depth,
                "partial": fraction_str(rep.partial),
                "limit": None if rep.limit is None else fraction_str(rep.limit),
                "classification": rep.classification,
            }
        )

    if cmd == "verify":
        rep = run_verify(
            sched,
            p["K_test"],
            p["n_test"],
            support_cap=cfg.caps["support"],
            matrix_cap=cfg.caps["matrix"],
            enumeration_cap=cfg.caps["enumeration"],
        )
        checks = rep.as_dict()["checks"]
        rows = [[c["name"], json.dumps(c["params"], sort_keys=True), c["status"], c.get("witness", "")] for c in checks]
        art = Artifact(["name", "params", "status", "witness"], rows, rep.as_dict(), failed=not rep.passed)
        return art

    raise AssertionError(cmd)


def render(cfg: RunConfig, art: Artifact) -> str:
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(art.header)
        writer.writerows(art.rows)
        return buf.getvalue()
    if cfg.command == "verify":
        doc = art.payload
    else:
        doc = {
            "system": cfg.schedule.describe(),
            "convention_notes": list(CONVENTION_NOTES),
            "command": cfg.command,
            "params": cfg.params,
            "result": art.payload,
        }
    return json.dumps(doc, indent=2) + "\n"


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute ``cfg``, write its artifact, and return the exit code."""
    stdout = stdout if stdout is not None else sys.stdout
    try:
        art = _execute(cfg)
    except (DepthError, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = render(cfg, art)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_VERIFY if art.failed else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="rankone", description=__doc__.splitlines()[0])
    parser.add_argument("config", nargs="?", default="-", help="JSON config path, or - for standard input")
    args = parser.parse_args(argv)
    try:
        if args.config == "-":
            text = sys.stdin.read()
        else:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        cfg = parse_config(text)
    except (OSError, ConfigError, ScheduleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
