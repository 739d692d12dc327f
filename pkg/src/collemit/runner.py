"""Command-line front end: configured parameter sweeps with tabular output.

Sweeps are driven by a single JSON config file; every requested point is
evaluated independently (failures are recorded, not fatal) and rows are
written in fixed order with fixed float formatting, so identical config and
version produce identical table bytes regardless of worker count.  The
manifest records per-point status plus wall-clock timing and is therefore
deterministic only up to its timing fields.

Environment overrides: COLLEMIT_OUTDIR (output directory) and
COLLEMIT_WORKERS (worker count).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .dressed_spectra import dressed_distance_sweep, single_atom_closed_form
from .dynamics import (
    build_generator,
    damping_channels,
    identity_functional,
    initial_state,
    residual,
    state_vector_from_density,
    stationary_density_matrix,
    steady_state,
)
from .em_coupling import collective_channels, propagator_tensor
from .observables import g2_coincidence
from .operator_algebra import build_collective_basis, expand_operator, reconstruct_operator
from .system_model import RB87_RABI_01, RB87_RABI_12, rb87_diamond

FLOAT_FORMAT = "%.12g"

TABLE_COLUMNS = {
    "g2": ("delta2", "r12_nm", "lam01", "lam12", "G2", "Gpp", "Gpe"),
    "spectra": ("sweep_value", "state_index", "energy", "symmetry", "label", "flagged"),
    "channels": ("r12_nm", "transition", "gamma_plus", "gamma_minus"),
}

_CONFIG_KEYS = {
    "preset", "sweep", "fixed", "couplings", "secular_threshold",
    "tables", "output_dir", "workers", "power_scale",
}
_SWEEP_KEYS = {"axis", "start", "stop", "points", "values"}
_FIXED_KEYS = {"r12", "delta1", "delta2", "rabi01", "rabi12"}
_AXES = {"delta2", "r12", "rabi"}
_TRANSITION_NAMES = {"01": (0, 1), "12": (1, 2), "32": (3, 2), "03": (0, 3)}


class ConfigError(ValueError):
    """Configuration file failed validation."""


@dataclass
class SweepConfig:
    preset: str
    axis: str
    values: list
    fixed: dict
    couplings_on: bool
    transition_toggle: dict | None
    secular_threshold: float | None
    tables: list
    output_dir: Path
    workers: int
    raw: dict = field(default_factory=dict)

    def config_hash(self) -> str:
        canonical = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()


def _fail(message: str) -> None:
    raise ConfigError(message)


def load_config(path) -> SweepConfig:
    """Parse and validate a sweep configuration file."""
    path = Path(path)
    if not path.exists():
        _fail(f"config file {path} does not exist")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        _fail(f"config parse error at line {exc.lineno}: {exc.msg}")
    if not isinstance(raw, dict):
        _fail("config root must be an object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        _fail(f"unknown config keys: {sorted(unknown)}")

    preset = raw.get("preset", "Rb87-diamond")
    if preset != "Rb87-diamond":
        _fail(f"unknown preset {preset!r}")

    sweep = raw.get("sweep")
    if not isinstance(sweep, dict):
        _fail("config needs a 'sweep' object")
    unknown = set(sweep) - _SWEEP_KEYS
    if unknown:
        _fail(f"unknown sweep keys: {sorted(unknown)}")
    axis = sweep.get("axis")
    if axis not in _AXES:
        _fail(f"sweep axis must be one of {sorted(_AXES)}, got {axis!r}")
    if "values" in sweep:
        values = list(sweep["values"])
        if not values:
            _fail("sweep values must be non-empty")
    else:
        missing = {"start", "stop", "points"} - set(sweep)
        if missing:
            _fail(f"sweep needs {sorted(missing)} (or explicit 'values')")
        points = sweep["points"]
        if not isinstance(points, int) or points < 1:
            _fail(f"sweep points must be a positive integer, got {points!r}")
        start, stop = float(sweep["start"]), float(sweep["stop"])
        if not (np.isfinite(start) and np.isfinite(stop)):
            _fail("sweep range must be finite")
        if axis == "r12":
            values = list(np.geomspace(start, stop, points)) if start > 0 and stop > 0 \
                else _fail("r12 sweep range must be positive")
        else:
            values = list(np.linspace(start, stop, points))
    if axis == "rabi" and raw.get("power_scale") is None:
        for v in values:
            if not (isinstance(v, (list, tuple)) and len(v) == 2):
                _fail("rabi sweep values must be [rabi01, rabi12] pairs")

    fixed = dict(raw.get("fixed", {}))
    unknown = set(fixed) - _FIXED_KEYS
    if unknown:
        _fail(f"unknown fixed-parameter keys: {sorted(unknown)}")
    fixed.setdefault("r12", 120.0)
    fixed.setdefault("delta1", -70.0)
    fixed.setdefault("delta2", 0.0)
    fixed.setdefault("rabi01", RB87_RABI_01)
    fixed.setdefault("rabi12", RB87_RABI_12)

    couplings = raw.get("couplings", "on")
    toggle = None
    if couplings in ("on", "off"):
        couplings_on = couplings == "on"
    elif isinstance(couplings, dict):
        couplings_on = True
        toggle = {}
        for name, state in couplings.items():
            if name not in _TRANSITION_NAMES:
                _fail(f"coupling toggle references unknown transition {name!r}")
            if not isinstance(state, bool):
                _fail(f"coupling toggle for {name!r} must be true/false")
            toggle[_TRANSITION_NAMES[name]] = state
    else:
        _fail("couplings must be 'on', 'off' or a per-transition object")

    secular = raw.get("secular_threshold")
    if secular is not None:
        secular = float(secular)
        if secular <= 0:
            _fail("secular_threshold must be positive")

    tables = raw.get("tables", ["g2"])
    if not isinstance(tables, list) or not tables:
        _fail("tables must be a non-empty list")
    for table in tables:
        if table not in TABLE_COLUMNS:
            _fail(f"unknown table {table!r}; expected one of {sorted(TABLE_COLUMNS)}")
    if "spectra" in tables and axis != "r12":
        _fail("the spectra table requires an r12 sweep (tracking starts at the far end)")
    if "channels" in tables and axis != "r12":
        _fail("the channels table requires an r12 sweep")

    power_scale = raw.get("power_scale")
    if power_scale not in (None, "sqrt"):
        _fail("power_scale must be absent or 'sqrt'")
    if power_scale == "sqrt":
        if axis != "rabi":
            _fail("power_scale applies to the rabi axis only")
        # scalar pump powers in mW; the second-step amplitude scales as sqrt(P)
        # normalized to the preset value at 4 mW
        converted = []
        for v in values:
            if isinstance(v, (list, tuple)):
                _fail("with power_scale, rabi values are scalar powers in mW")
            power = float(v)
            if power <= 0:
                _fail("pump powers must be positive")
            converted.append((fixed.get("rabi01", RB87_RABI_01),
                              RB87_RABI_12 * np.sqrt(power / 4.0)))
        values = converted

    output_dir = Path(os.environ.get("COLLEMIT_OUTDIR", raw.get("output_dir", "out")))
    workers = raw.get("workers", 1)
    workers = int(os.environ.get("COLLEMIT_WORKERS", workers))
    if workers < 1:
        _fail("workers must be >= 1")

    return SweepConfig(
        preset=preset, axis=axis, values=values, fixed=fixed,
        couplings_on=couplings_on, transition_toggle=toggle,
        secular_threshold=secular, tables=list(tables),
        output_dir=output_dir, workers=workers, raw=raw,
    )


def emit_table(rows, path, columns) -> None:
    """Write rows as CSV with one header line and 12-significant-digit floats."""
    def fmt(value):
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, (float, np.floating)):
            return FLOAT_FORMAT % value
        return str(value)

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with open(path, "w", newline="") as handle:
            handle.write(",".join(columns) + "\n")
            for row in rows:
                if len(row) != len(columns):
                    raise ValueError(f"row width {len(row)} != {len(columns)} columns")
                handle.write(",".join(fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing table {path}: {exc}") from exc


def _g2_point(config: SweepConfig, value):
    fixed = config.fixed
    delta2, r12 = fixed["delta2"], fixed["r12"]
    rabi01, rabi12 = fixed["rabi01"], fixed["rabi12"]
    if config.axis == "delta2":
        delta2 = float(value)
    elif config.axis == "r12":
        r12 = float(value)
    else:
        rabi01, rabi12 = float(value[0]), float(value[1])
    system = rb87_diamond(
        r12=r12, delta1=fixed["delta1"], delta2=delta2,
        rabi01=rabi01, rabi12=rabi12,
        couplings_on=config.couplings_on,
        secular_threshold=config.secular_threshold,
        transition_toggle=config.transition_toggle,
    )
    basis = _shared_basis()
    h_sys = system.hamiltonian()
    channels = damping_channels(system.tensors, 4, 2)
    gen = build_generator(h_sys, channels, basis)
    w_ss = steady_state(gen, initial_state(basis))
    k23 = system.array.scheme.transition((3, 2)).wavenumber
    k30 = system.array.scheme.transition((0, 3)).wavenumber
    result = g2_coincidence(w_ss, basis, k23, k30, r12, residual=residual(gen, w_ss))
    return (delta2, r12, rabi01, rabi12, result.g2, result.gpp, result.gpe)


_BASIS_CACHE = {}


def _shared_basis():
    if "basis" not in _BASIS_CACHE:
        _BASIS_CACHE["basis"] = build_collective_basis(4, 2)
    return _BASIS_CACHE["basis"]


def run_sweep(config: SweepConfig) -> dict:
    """Execute a configured sweep; write tables and the manifest.

    Returns the manifest dictionary.  Per-point failures are recorded with
    status "failed" and do not abort the remaining points.
    """
    t_start = time.perf_counter()
    statuses = [{"index": k, "status": "pending"} for k in range(len(config.values))]
    out_rows = {table: [] for table in config.tables}

    if "g2" in config.tables:
        def evaluate(k):
            try:
                return k, _g2_point(config, config.values[k]), None
            except Exception as exc:  # noqa: BLE001 - per-point isolation boundary
                return k, None, f"{type(exc).__name__}: {exc}"

        results = {}
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            for k, row, error in pool.map(evaluate, range(len(config.values))):
                results[k] = (row, error)
        for k in range(len(config.values)):
            row, error = results.get(k, (None, "no result"))
            if row is None:
                statuses[k] = {"index": k, "status": "failed", "error": error}
            else:
                statuses[k] = {"index": k, "status": "ok"}
                out_rows["g2"].append(row)

    if "spectra" in config.tables or "channels" in config.tables:
        radii = sorted((float(v) for v in config.values), reverse=True)
        try:
            spectra, swept = dressed_distance_sweep(
                radii=np.asarray(radii),
                delta1=config.fixed["delta1"], delta2=config.fixed["delta2"],
                rabi01=config.fixed["rabi01"], rabi12=config.fixed["rabi12"],
                couplings_on=config.couplings_on,
                transition_toggle=config.transition_toggle,
            )
            for k, (r, spec) in enumerate(zip(swept, spectra)):
                if statuses[k]["status"] == "pending":
                    statuses[k] = {"index": k, "status": "ok"}
                if "spectra" in config.tables:
                    flagged_any = False
                    for idx in range(spec.size):
                        flagged = bool(spec.flagged[idx]) if spec.flagged else False
                        flagged_any = flagged_any or flagged
                        out_rows["spectra"].append((
                            float(r), idx, float(spec.energies[idx]),
                            spec.symmetry[idx], spec.labels[idx], flagged,
                        ))
                    if flagged_any and statuses[k]["status"] == "ok":
                        statuses[k] = {"index": k, "status": "flagged"}
                if "channels" in config.tables:
                    system = rb87_diamond(
                        r12=float(r), delta1=config.fixed["delta1"],
                        delta2=config.fixed["delta2"],
                        couplings_on=config.couplings_on,
                        secular_threshold=config.secular_threshold,
                        transition_toggle=config.transition_toggle,
                    )
                    for dip in system.array.scheme.transitions:
                        ch = collective_channels(system.tensors, dip, 4)
                        out_rows["channels"].append((
                            float(r), f"{dip.lower}{dip.upper}",
                            ch.gamma_plus, ch.gamma_minus,
                        ))
        except Exception as exc:  # noqa: BLE001 - per-point isolation boundary
            for k in range(len(config.values)):
                if statuses[k]["status"] == "pending":
                    statuses[k] = {"index": k, "status": "failed", "error": str(exc)}

    for k in range(len(config.values)):
        if statuses[k]["status"] == "pending":
            statuses[k] = {"index": k, "status": "failed", "error": "not evaluated"}

    config.output_dir.mkdir(parents=True, exist_ok=True)
    for table in config.tables:
        emit_table(out_rows[table], config.output_dir / f"{table}.csv", TABLE_COLUMNS[table])

    manifest = {
        "config_hash": config.config_hash(),
        "version": __version__,
        "points": statuses,
        "wall_time_s": time.perf_counter() - t_start,
    }
    (config.output_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return manifest


def _point_failures(manifest: dict) -> int:
    return sum(1 for p in manifest["points"] if p["status"] == "failed")


# ---------------------------------------------------------------------------
# Validation suite (invoked by the `validate` subcommand)
# ---------------------------------------------------------------------------

REFERENCE_CHANNEL_RATES = {
    # r12 nm -> per transition (gamma_plus, gamma_minus), units 1e6 rad/s
    60.0: {"01": (59.7, 12.6), "12": (1.04, 0.234), "32": (4.71, 0.998), "03": (28.1, 6.23)},
    120.0: {"01": (58.1, 14.2), "12": (0.991, 0.290), "32": (4.58, 1.13), "03": (26.6, 7.68)},
    180.0: {"01": (55.6, 16.7), "12": (0.907, 0.376), "32": (4.37, 1.34), "03": (24.4, 9.87)},
    240.0: {"01": (52.4, 19.9), "12": (0.805, 0.477), "32": (4.11, 1.60), "03": (21.8, 12.5)},
}


def validation_suite(verbose: bool = True) -> bool:
    """Run the library invariants on the preset; returns overall success."""
    checks = []

    def check(name, ok):
        checks.append((name, bool(ok)))
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'}  {name}")

    f = propagator_tensor(1.0, np.array([0.0, 0.0, 1.0]))
    check("propagator transverse/longitudinal values at xi=1",
          abs(f[0, 0] - 1j) < 1e-12 and abs(f[2, 2] - 2 * (1 - 1j)) < 1e-12)

    worst = 0.0
    system = rb87_diamond(r12=120.0)
    for r12, per_transition in REFERENCE_CHANNEL_RATES.items():
        sys_r = rb87_diamond(r12=r12)
        for dip in sys_r.array.scheme.transitions:
            ch = collective_channels(sys_r.tensors, dip, 4)
            ref_p, ref_m = per_transition[f"{dip.lower}{dip.upper}"]
            worst = max(worst, abs(ch.gamma_plus - ref_p) / ref_p,
                        abs(ch.gamma_minus - ref_m) / ref_m)
            check_sum = abs(ch.gamma_plus + ch.gamma_minus - 2 * dip.rate) < 1e-10 * dip.rate
            if not check_sum:
                check(f"channel sum rule at {r12} nm {dip.pair}", False)
    check("reference collective rates within 1%", worst < 0.01)

    basis = _shared_basis()
    gram = np.einsum("iab,jab->ij", basis.elements.conj(), basis.elements)
    off = gram - np.diag(np.diag(gram))
    check("collective basis trace-orthogonal", np.abs(off).max() < 1e-12)

    rng = np.random.default_rng(7)
    a = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    round_trip = reconstruct_operator(expand_operator(a, basis), basis)
    check("expansion round trip", np.abs(round_trip - a).max() < 1e-12 * np.abs(a).max())

    evals, _, _ = single_atom_closed_form(-70.0, 7.5, 6.3)
    h1 = system.single_hamiltonian()
    numeric = np.linalg.eigvalsh(h1)
    check("single-emitter closed form matches numerics",
          np.abs(np.sort(evals) - numeric).max() < 1e-10 * np.abs(evals).max())

    h_sys = system.hamiltonian()
    channels = damping_channels(system.tensors, 4, 2)
    gen = build_generator(h_sys, channels, basis)
    rho_ss = stationary_density_matrix(h_sys, channels)
    w_direct = steady_state(gen, initial_state(basis))
    w_oracle = state_vector_from_density(rho_ss, basis)
    check("operator-basis steady state matches density-matrix oracle",
          np.abs(w_direct.w - w_oracle.w).max() < 1e-8)

    ident = identity_functional(basis)
    check("total population conserved by the generator",
          np.abs(ident @ gen.matrix).max() < 1e-10)

    return all(ok for _, ok in checks)


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


def _add_common(parser):
    parser.add_argument("--config", required=True, help="path to the JSON sweep config")
    parser.add_argument("--output-dir", help="override the configured output directory")
    parser.add_argument("--workers", type=int, help="override the worker-pool width")


def _apply_overrides(config: SweepConfig, args) -> SweepConfig:
    if args.output_dir:
        config.output_dir = Path(args.output_dir)
    if args.workers:
        if args.workers < 1:
            raise ConfigError("workers must be >= 1")
        config.workers = args.workers
    return config


def _ensure_table(config: SweepConfig, table: str) -> SweepConfig:
    if table in ("spectra", "channels") and config.axis != "r12":
        raise ConfigError(f"the {table} table requires an r12 sweep axis")
    if table not in config.tables:
        config.tables.append(table)
    return config


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="collemit",
        description="Collective-emitter sweeps: dressed spectra, decay channels and photon coincidences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("spectra", "labeled dressed-state energies along a distance sweep"),
        ("g2", "photon-coincidence observables along the configured sweep"),
        ("channels", "collective decay rates along a distance sweep"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
    sub.add_parser("validate", help="run the library invariant suite on the preset")

    args = parser.parse_args(argv)
    if args.command == "validate":
        return 0 if validation_suite() else 1

    try:
        config = load_config(args.config)
        config = _apply_overrides(config, args)
        config = _ensure_table(config, args.command if args.command != "g2" else "g2")
        manifest = run_sweep(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    failures = _point_failures(manifest)
    if failures:
        print(f"{failures} sweep point(s) failed", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
