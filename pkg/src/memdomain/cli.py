"""Command-line interface: reproducible CSV/JSON emission for every layer.

Determinism contract: identical resolved configurations produce byte
identical output files.  Every file-writing run leaves a manifest next to
its outputs (``<out>.manifest.json`` for single-file outputs,
``manifest.json`` inside directory outputs) echoing the resolved
configuration, the tool version, sha256 digests of each input file
consumed, and digests of the files written.  The manifest's timestamp is
its only run-dependent field and is dropped with --no-timestamp.

Configuration may come from an INI file (--config): a [memdomain] section
for the shared keys L, c, seed, no-timestamp plus one section per
subcommand.  Command-line flags override the command section, which
overrides [memdomain].  Unknown sections or keys are rejected.

Numbers in CSV output are written with 17 significant digits, comma
separated, LF terminated, header row first.  All files are written via a
temp file and an atomic rename.

Exit status: 0 on success; 2 when the request itself is wrong (bad flags
or config, inconsistent or out-of-range parameters, never-recordable or
dead modes, missing input files); 1 when a computation fails.

MEMDOMAIN_THREADS caps BLAS/OpenMP parallelism for the numeric kernels
(0 or unset = automatic); the resolved value is echoed in the manifest.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import hashlib
import json
import math
import os
import re
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    GridTooCoarse,
    MemdomainError,
    StepSizeUnderflow,
)
from .fock import (
    brute_force_evolve,
    default_cutoff,
    expected_pair_number,
    pair_coupling,
    squeezed_vacuum,
    vacuum_state,
)
from .lifetime import (
    FIGURE_NAMES,
    curve_table,
    default_figure_spec,
    domain_size,
    lambda_lifetime,
    momentum_threshold,
    recording_window,
)
from .memory import (
    MemoryRegistry,
    StimulusSpectrum,
    decay_codes,
    recall,
    record,
)
from .bessel import sph_j, sph_y
from .oscillator import (
    ModeIndex,
    SystemParams,
    closed_form_state,
    closed_form_trajectory,
    common_frequency,
    integrate_pair,
    omega_mode,
)


class _ValidationError(Exception):
    """Anything wrong with the request itself; exits with status 2."""


# ---------------------------------------------------------------------------
# option tables


@dataclasses.dataclass(frozen=True)
class _Opt:
    name: str
    conv: type = str
    default: object = None
    required: bool = False
    multi: bool = False
    flag: bool = False
    choices: tuple = ()
    help: str = ""

    @property
    def attr(self) -> str:
        return self.name.replace("-", "_")


_SHARED = (
    _Opt("config", help="INI file with [memdomain] and per-command sections"),
    _Opt("seed", conv=int, default=0, help="seed echoed into the manifest"),
    _Opt("no-timestamp", flag=True, default=False,
         help="omit the timestamp field from the manifest"),
)

_PARAMS = (
    _Opt("L", conv=float, required=True, help="damping parameter, > 0"),
    _Opt("c", conv=float, default=1.0, help="propagation speed, > 0"),
)

_COMMANDS = {
    "bessel": (
        _Opt("kind", choices=("j", "y"), required=True),
        _Opt("order", conv=int, required=True),
        _Opt("z", conv=float, multi=True, required=True),
        _Opt("out", help="optional CSV destination; default prints to stdout"),
    ),
    "evolve": _PARAMS + (
        _Opt("omega0", conv=float, help="reference frequency c*k"),
        _Opt("k", conv=float, help="mode momentum"),
        _Opt("n", conv=int, required=True),
        _Opt("t-max", conv=float, required=True),
        _Opt("method", choices=("closed", "ode", "both"), default="closed"),
        _Opt("points", conv=int, default=500),
        _Opt("rel-tol", conv=float, default=1e-10),
        _Opt("out", required=True),
    ),
    "lifetimes": _PARAMS + (
        _Opt("omega0", conv=float, multi=True),
        _Opt("k", conv=float, multi=True),
        _Opt("n", conv=int, multi=True, required=True),
        _Opt("t", conv=float, default=0.0),
        _Opt("out", help="optional CSV destination; default prints to stdout"),
    ),
    "figures": (
        _Opt("which", multi=True, required=True,
             choices=FIGURE_NAMES + ("all",)),
        _Opt("out", required=True, help="output directory"),
        _Opt("L", conv=float, default=1.0),
        _Opt("c", conv=float, default=1.0),
        _Opt("points", conv=int, default=2000),
        _Opt("ceiling", conv=float, default=10.0),
        _Opt("ordinate-scale", conv=float, default=1.0),
    ),
    "squeeze": (
        _Opt("gamma", conv=float, required=True),
        _Opt("t", conv=float, required=True),
        _Opt("cutoff", conv=int, help="pair-number cutoff; default is sized "
             "so the discarded tail stays below 1e-12"),
        _Opt("oracle", flag=True, default=False,
             help="also evolve the vacuum numerically and report the "
             "largest coefficient deviation"),
        _Opt("out", required=True, help="JSON destination"),
    ),
    "record": _PARAMS + (
        _Opt("registry", required=True),
        _Opt("spectrum", required=True, help="stimulus JSON file"),
        _Opt("t", conv=float, required=True),
    ),
    "recall": _PARAMS + (
        _Opt("registry", required=True),
        _Opt("signal", required=True, help="replication-signal JSON file"),
        _Opt("energy", conv=float, required=True),
        _Opt("t", conv=float, required=True),
        _Opt("out", help="optional JSON destination for the result"),
    ),
    "forget-sweep": _PARAMS + (
        _Opt("registry", required=True),
        _Opt("t", conv=float, required=True),
    ),
}

_GLOBAL_CONFIG_KEYS = ("L", "c", "seed", "no-timestamp")


def _options(command: str) -> tuple:
    return _COMMANDS[command] + _SHARED


# ---------------------------------------------------------------------------
# config resolution


def _parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="memdomain",
        description="dissipative-mode memory domain toolkit",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for command, opts in _COMMANDS.items():
        sub = subs.add_parser(command)
        for opt in opts + _SHARED:
            flag = "--" + opt.name
            if opt.flag:
                sub.add_argument(flag, dest=opt.attr, action="store_const",
                                 const=True, default=None, help=opt.help)
            elif opt.multi:
                sub.add_argument(flag, dest=opt.attr, nargs="+",
                                 type=opt.conv, default=None, help=opt.help)
            else:
                sub.add_argument(flag, dest=opt.attr, type=opt.conv,
                                 default=None, help=opt.help)
    ns = parser.parse_args(argv)
    return ns.command, ns


def _load_config(path: str, command: str) -> dict:
    """Validated {option-name: raw string} for the active command."""
    cfg = configparser.ConfigParser(interpolation=None)
    cfg.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cfg.read_file(fh)
    except FileNotFoundError:
        raise _ValidationError(f"config file not found: {path}")
    except configparser.Error as exc:
        raise _ValidationError(f"config file {path}: {exc}")
    if cfg.defaults():
        raise _ValidationError(
            "config [DEFAULT] section is not supported; use [memdomain]"
        )
    known_sections = ("memdomain",) + tuple(_COMMANDS)
    values: dict = {}
    for section in cfg.sections():
        if section == "memdomain":
            allowed = _GLOBAL_CONFIG_KEYS
        elif section in _COMMANDS:
            allowed = tuple(
                o.name for o in _options(section) if o.name != "config"
            )
        else:
            raise _ValidationError(
                f"unknown config section [{section}]; known sections: "
                + ", ".join(known_sections)
            )
        for key in cfg[section]:
            if key not in allowed:
                raise _ValidationError(
                    f"unknown key '{key}' in config section [{section}]; "
                    "accepted keys: " + ", ".join(sorted(allowed))
                )
    # precedence inside the file: the command section beats [memdomain]
    if cfg.has_section("memdomain"):
        for key in cfg["memdomain"]:
            values[key] = cfg["memdomain"][key]
    if cfg.has_section(command):
        for key in cfg[command]:
            values[key] = cfg[command][key]
    return values


def _convert(opt: _Opt, raw: str):
    try:
        if opt.flag:
            lowered = raw.strip().lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if opt.multi:
            parts = [p for p in re.split(r"[,\s]+", raw.strip()) if p]
            if not parts:
                raise ValueError("empty list")
            return [opt.conv(p) for p in parts]
        return opt.conv(raw.strip())
    except ValueError as exc:
        raise _ValidationError(f"config key '{opt.name}': {exc}")


def _resolve(command: str, ns) -> dict:
    file_values = {}
    if ns.config is not None:
        file_values = _load_config(ns.config, command)
    resolved = {}
    for opt in _options(command):
        val = getattr(ns, opt.attr)
        if val is None and opt.name in file_values and opt.name != "config":
            val = _convert(opt, file_values[opt.name])
        if val is None:
            val = opt.default
        if val is None and opt.required:
            raise _ValidationError(f"missing required option --{opt.name}")
        if opt.choices and val is not None:
            items = val if opt.multi else [val]
            for item in items:
                if item not in opt.choices:
                    raise _ValidationError(
                        f"--{opt.name} must be one of "
                        + ", ".join(opt.choices) + f"; got {item!r}"
                    )
        resolved[opt.attr] = val
    resolved["config"] = ns.config
    return resolved


def _thread_cap() -> object:
    raw = os.environ.get("MEMDOMAIN_THREADS")
    if raw is None or raw.strip() == "":
        return "auto"
    try:
        threads = int(raw)
    except ValueError:
        raise _ValidationError(
            f"MEMDOMAIN_THREADS must be a non-negative integer, got {raw!r}"
        )
    if threads < 0:
        raise _ValidationError(
            f"MEMDOMAIN_THREADS must be >= 0, got {threads}"
        )
    if threads == 0:
        return "auto"
    for var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
    ):
        os.environ[var] = str(threads)
    return threads


# ---------------------------------------------------------------------------
# output helpers


def _g17(x: float) -> str:
    return f"{float(x):.17g}"


def _write_atomic(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f"{path.name}.tmp.{os.getpid()}")
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _csv_bytes(header, rows) -> bytes:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            cell if isinstance(cell, str) else _g17(cell) for cell in row
        ))
    return ("\n".join(lines) + "\n").encode("utf-8")


def _json_bytes(doc) -> bytes:
    return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode("utf-8")


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


class _Run:
    """Collects inputs/outputs of one invocation and emits the manifest."""

    def __init__(self, command: str, resolved: dict):
        self.command = command
        self.resolved = resolved
        self.threads = _thread_cap()
        self.inputs: dict = {}
        self.outputs: dict = {}
        self.results: dict = {}
        if resolved.get("config"):
            self.read_input(Path(resolved["config"]))

    def read_input(self, path: Path) -> bytes:
        try:
            data = Path(path).read_bytes()
        except FileNotFoundError:
            raise _ValidationError(f"input file not found: {path}")
        self.inputs[str(path)] = _digest(data)
        return data

    def write_output(self, path: Path, data: bytes, anchor: Path = None) -> None:
        _write_atomic(path, data)
        name = path.name if anchor is None else str(path.relative_to(anchor))
        self.outputs[name] = _digest(data)

    def manifest(self, path: Path) -> None:
        config = {
            opt.name: self.resolved[opt.attr] for opt in _options(self.command)
        }
        doc = {
            "command": self.command,
            "config": config,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "threads": self.threads,
            "tool": {"name": "memdomain", "version": __version__},
        }
        if self.results:
            doc["results"] = self.results
        if not self.resolved["no_timestamp"]:
            doc["timestamp"] = datetime.now(timezone.utc).strftime(
                "%Y-%m-%dT%H:%M:%SZ"
            )
        _write_atomic(path, _json_bytes(doc))


# ---------------------------------------------------------------------------
# shared parameter plumbing


def _system_params(resolved: dict) -> SystemParams:
    return SystemParams(L=resolved["L"], c=resolved["c"])


def _consistent_momentum(omega0, k, c) -> float:
    """Resolve the (omega0, k) pair, enforcing omega0 = c*k when both given."""
    if omega0 is None and k is None:
        raise _ValidationError("one of --omega0 or --k is required")
    if k is None:
        k = omega0 / c
    elif omega0 is not None:
        if abs(omega0 - c * k) > 1e-12 * max(1.0, abs(omega0)):
            raise _ValidationError(
                f"inconsistent frequencies: omega0={omega0:g} but "
                f"c*k={c * k:g}; they must agree to 1e-12"
            )
    if k <= 0 or not math.isfinite(k):
        raise _ValidationError(f"momentum must be positive and finite, got {k!r}")
    return k


def _load_spectrum(run: _Run, path: str) -> StimulusSpectrum:
    data = run.read_input(Path(path))
    return StimulusSpectrum.from_json_dict(json.loads(data.decode("utf-8")))


# ---------------------------------------------------------------------------
# subcommand runners


def _run_bessel(resolved: dict) -> int:
    run = _Run("bessel", resolved)
    fn = sph_j if resolved["kind"] == "j" else sph_y
    values = [fn(resolved["order"], z) for z in resolved["z"]]
    if resolved["out"] is None:
        for val in values:
            print(_g17(val))
        return 0
    out = Path(resolved["out"])
    rows = list(zip(resolved["z"], values))
    run.write_output(out, _csv_bytes(("z", "value"), rows))
    run.manifest(out.with_name(out.name + ".manifest.json"))
    return 0


def _evolve_rows(params, mode, grid, traj):
    rows = []
    for i, t in enumerate(grid):
        rows.append((
            t,
            traj.u[i],
            traj.v[i],
            traj.r[i],
            omega_mode(params, mode, float(t)),
            common_frequency(params, mode, float(t)),
        ))
    return rows


def _run_evolve(resolved: dict) -> int:
    run = _Run("evolve", resolved)
    params = _system_params(resolved)
    k = _consistent_momentum(resolved["omega0"], resolved["k"], params.c)
    resolved["k"] = k
    resolved["omega0"] = params.omega0(k)
    mode = ModeIndex(k=k, n=resolved["n"])
    window = recording_window(params, mode)
    t_max = resolved["t_max"]
    if not math.isfinite(t_max) or t_max <= 0:
        raise _ValidationError(f"--t-max must be positive, got {t_max!r}")
    if t_max > window:
        raise _ValidationError(
            f"--t-max {t_max:g} exceeds the recording window T = {window:.12g}"
            " where the common frequency turns imaginary"
        )
    points = resolved["points"]
    if points < 2:
        raise _ValidationError(f"--points must be >= 2, got {points}")
    if resolved["rel_tol"] is not None and not (
        1e-13 <= resolved["rel_tol"] <= 1e-3
    ):
        raise _ValidationError(
            f"--rel-tol must lie in [1e-13, 1e-3], got {resolved['rel_tol']!r}"
        )
    grid = np.linspace(0.0, t_max, points)
    out = Path(resolved["out"])
    header = ("t", "u", "v", "r", "omega", "Omega")
    method = resolved["method"]

    closed = ode = None
    if method in ("closed", "both"):
        closed = closed_form_trajectory(params, mode, grid)
    if method in ("ode", "both"):
        init = closed_form_state(params, mode, 0.0)
        ode = integrate_pair(params, mode, init, grid, resolved["rel_tol"])

    primary = closed if closed is not None else ode
    run.write_output(out, _csv_bytes(header, _evolve_rows(params, mode, grid, primary)))
    if method == "both":
        sibling = out.with_name(out.stem + ".ode" + out.suffix)
        run.write_output(
            sibling, _csv_bytes(header, _evolve_rows(params, mode, grid, ode))
        )
        run.results["max_abs_deviation"] = float(
            max(
                np.max(np.abs(closed.u - ode.u)),
                np.max(np.abs(closed.v - ode.v)),
                np.max(np.abs(closed.r - ode.r)),
            )
        )
    run.manifest(out.with_name(out.name + ".manifest.json"))
    return 0


def _run_lifetimes(resolved: dict) -> int:
    run = _Run("lifetimes", resolved)
    params = _system_params(resolved)
    omega0s, ks = resolved["omega0"], resolved["k"]
    if omega0s is None and ks is None:
        raise _ValidationError("one of --omega0 or --k is required")
    if omega0s is not None and ks is not None and len(omega0s) != len(ks):
        raise _ValidationError(
            f"--omega0 lists {len(omega0s)} values but --k lists {len(ks)}"
        )
    if ks is None:
        ks = [w / params.c for w in omega0s]
    elif omega0s is not None:
        for w, k in zip(omega0s, ks):
            _consistent_momentum(w, k, params.c)
    t = resolved["t"]
    if not math.isfinite(t) or t < 0:
        raise _ValidationError(f"--t must be >= 0, got {t!r}")
    rows = []
    for k in sorted(set(ks)):
        for n in sorted(set(resolved["n"])):
            mode = ModeIndex(k=k, n=n)
            window = recording_window(params, mode)
            lam = lambda_lifetime(params, mode, t)
            rows.append((
                k,
                str(n),
                window,
                lam,
                momentum_threshold(params, n, t),
                domain_size(params, n, t),
            ))
    header = ("k", "n", "window", "lambda", "threshold", "domain")
    data = _csv_bytes(header, rows)
    if resolved["out"] is None:
        sys.stdout.write(data.decode("utf-8"))
        return 0
    out = Path(resolved["out"])
    run.write_output(out, data)
    run.manifest(out.with_name(out.name + ".manifest.json"))
    return 0


def _figure_spec_doc(spec) -> dict:
    return {
        "figure": spec.figure,
        "L": spec.L,
        "c": spec.c,
        "modes": [[k, n] for k, n in spec.modes],
        "ceiling": spec.ceiling,
        "points": spec.points,
        "ordinate_scale": spec.ordinate_scale,
    }


def _run_figures(resolved: dict) -> int:
    run = _Run("figures", resolved)
    which = resolved["which"]
    names = list(FIGURE_NAMES) if "all" in which else [
        name for name in FIGURE_NAMES if name in which
    ]
    out_dir = Path(resolved["out"])
    if out_dir.exists() and not out_dir.is_dir():
        raise _ValidationError(f"--out {out_dir} exists and is not a directory")
    overrides = {
        "L": resolved["L"],
        "c": resolved["c"],
        "points": resolved["points"],
        "ceiling": resolved["ceiling"],
        "ordinate_scale": resolved["ordinate_scale"],
    }
    if overrides["points"] < 2:
        raise _ValidationError(f"--points must be >= 2, got {overrides['points']}")
    for name in names:
        spec = default_figure_spec(name, **overrides)
        rows = [(cid, t, lam) for cid, t, lam in curve_table(spec)]
        run.write_output(
            out_dir / f"{name}.csv",
            _csv_bytes(("curve_id", "t", "lambda"), rows),
            anchor=out_dir,
        )
        run.write_output(
            out_dir / f"{name}.spec.json",
            _json_bytes(_figure_spec_doc(spec)),
            anchor=out_dir,
        )
    run.manifest(out_dir / "manifest.json")
    return 0


def _run_squeeze(resolved: dict) -> int:
    run = _Run("squeeze", resolved)
    gamma, t = resolved["gamma"], resolved["t"]
    if not math.isfinite(gamma):
        raise _ValidationError(f"--gamma must be finite, got {gamma!r}")
    if not math.isfinite(t) or t < 0:
        raise _ValidationError(f"--t must be >= 0, got {t!r}")
    cutoff = resolved["cutoff"]
    if cutoff is None:
        cutoff = default_cutoff(gamma * t)
        resolved["cutoff"] = cutoff
    state = squeezed_vacuum(gamma, t, cutoff=cutoff)
    occupation, _ = expected_pair_number(state)
    doc = {
        "gamma": gamma,
        "t": t,
        "gamma_t": gamma * t,
        "cutoff": cutoff,
        "coefficients": [float(c) for c in state.coeffs],
        "occupation": occupation,
        "normalization": state.norm_sq(),
    }
    if resolved["oracle"]:
        evolved = brute_force_evolve(
            pair_coupling(gamma, cutoff), t, vacuum_state(cutoff)
        )
        doc["oracle_max_deviation"] = max(
            abs(complex(a) - complex(b))
            for a, b in zip(evolved.coeffs, state.coeffs)
        )
    out = Path(resolved["out"])
    run.write_output(out, _json_bytes(doc))
    run.manifest(out.with_name(out.name + ".manifest.json"))
    return 0


def _load_registry(run: _Run, path: str, must_exist: bool) -> MemoryRegistry:
    p = Path(path)
    if not p.exists():
        if must_exist:
            raise _ValidationError(f"registry file not found: {path}")
        return MemoryRegistry()
    data = run.read_input(p)
    return MemoryRegistry.loads(data.decode("utf-8"))


def _save_registry(run: _Run, path: str, registry: MemoryRegistry) -> None:
    out = Path(path)
    run.write_output(out, registry.dumps().encode("utf-8"))
    run.manifest(out.with_name(out.name + ".manifest.json"))


def _run_record(resolved: dict) -> int:
    run = _Run("record", resolved)
    params = _system_params(resolved)
    registry = _load_registry(run, resolved["registry"], must_exist=False)
    stimulus = _load_spectrum(run, resolved["spectrum"])
    code, rejections = record(registry, stimulus, resolved["t"], params)
    _save_registry(run, resolved["registry"], registry)
    report = {
        "code": None if code is None else code.id,
        "rejections": [
            {
                "k": rej.component.k,
                "n": rej.component.n,
                "intensity": rej.component.intensity,
                "reason": rej.reason.value,
                "detail": rej.detail,
            }
            for rej in rejections
        ],
    }
    sys.stdout.write(_json_bytes(report).decode("utf-8"))
    return 0


def _run_recall(resolved: dict) -> int:
    run = _Run("recall", resolved)
    params = _system_params(resolved)
    registry = _load_registry(run, resolved["registry"], must_exist=True)
    signal = _load_spectrum(run, resolved["signal"])
    t = resolved["t"]
    if registry.last_decay_t > t:
        raise _ValidationError(
            f"registry is already decayed to t={registry.last_decay_t:g}, "
            f"past the requested t={t:g}"
        )
    if registry.last_decay_t < t:
        # bring the in-memory view up to date; the stored file is untouched
        decay_codes(registry, t, params)
    result = recall(registry, signal, resolved["energy"], t, params)
    doc = {
        "matched": result.matched,
        "score": result.score,
        "outcome": result.outcome.value,
    }
    text = _json_bytes(doc)
    sys.stdout.write(text.decode("utf-8"))
    if resolved["out"] is not None:
        out = Path(resolved["out"])
        run.write_output(out, text)
        run.manifest(out.with_name(out.name + ".manifest.json"))
    return 0


def _run_forget_sweep(resolved: dict) -> int:
    run = _Run("forget-sweep", resolved)
    params = _system_params(resolved)
    registry = _load_registry(run, resolved["registry"], must_exist=True)
    decay_codes(registry, resolved["t"], params)
    _save_registry(run, resolved["registry"], registry)
    statuses = [code.status.value for code in registry.codes.values()]
    report = {
        "t": resolved["t"],
        "codes": len(statuses),
        "intact": statuses.count("Intact"),
        "degraded": statuses.count("Degraded"),
        "forgotten": statuses.count("Forgotten"),
    }
    sys.stdout.write(_json_bytes(report).decode("utf-8"))
    return 0


_RUNNERS = {
    "bessel": _run_bessel,
    "evolve": _run_evolve,
    "lifetimes": _run_lifetimes,
    "figures": _run_figures,
    "squeeze": _run_squeeze,
    "record": _run_record,
    "recall": _run_recall,
    "forget-sweep": _run_forget_sweep,
}


def main(argv=None) -> int:
    try:
        command, ns = _parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        resolved = _resolve(command, ns)
        return _RUNNERS[command](resolved)
    except (StepSizeUnderflow, GridTooCoarse) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return 1
    except (_ValidationError, MemdomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"computation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
