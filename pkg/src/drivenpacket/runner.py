"""Scenario configuration, batch execution, and file output.

A scenario is one JSON document; flags only override it. Outputs are plain
CSV (full double precision) plus a JSON summary mirroring the report, so a
run is reproducible from the config alone and consumable by any plotting
tool. Identical configs produce byte-identical numeric files.
"""

from __future__ import annotations

import csv
import json
import math
import os
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .core import GaussianPacketSpec, MomentumGrid, PhysicalParams, build_grid, gaussian_profile_fn
from .characteristics import ExponentOverflowError, NonFiniteCoefficientError, evolve_linear_pde
from .hamiltonian import GaugeQuadratureError, coefficient_problem
from .reference import BoundaryLeakError, StabilityError, mol_evolve
from .observables import build_scheme_report, density_distance
from . import schemes as com

VALID_SCHEMES = ("hamiltonian", "S1", "S2", "S3")
VALID_VARIANTS = ("derived", "published")

STRICT_ORACLE_TOL = 1e-5
DEGENERACY_TOL = 1e-8


class ConfigError(ValueError):
    """A scenario document failed validation; the message names the key."""


class GridSupportError(RuntimeError):
    """The configured grid cannot hold the evolved packet support."""


class OracleDivergenceError(RuntimeError):
    """A strict-mode cross check between independent solvers failed."""


@dataclass(frozen=True)
class ScenarioConfig:
    params: PhysicalParams
    packet: GaussianPacketSpec
    grid: MomentumGrid
    schemes: tuple = VALID_SCHEMES
    variants: tuple = VALID_VARIANTS
    t_end: float = 2.0 * math.pi
    samples: int = 64
    dt: float | None = None
    strict: bool = False
    out_dir: str = "out"


def default_config() -> ScenarioConfig:
    return ScenarioConfig(
        params=PhysicalParams(1.0, 1.0, 1.0, 1.0),
        packet=GaussianPacketSpec(0.0, 1.0, 0.0),
        grid=build_grid(-24.0, 24.0, 1024),
    )


def _take(section: dict, where: str, allowed: dict):
    """Pop known keys with defaults; reject anything left over by name."""
    out = {}
    for key, default in allowed.items():
        out[key] = section.pop(key, default)
    if section:
        bad = sorted(section)[0]
        raise ConfigError(f"unknown key {bad!r} in {where}")
    return out


def parse_config(document) -> ScenarioConfig:
    """Validate a config document (JSON text or an already-parsed mapping)."""
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document) if document.strip() else {}
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    else:
        doc = dict(document)
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    doc = dict(doc)
    base = default_config()

    top = _take(
        doc,
        "config",
        {
            "params": {},
            "packet": {},
            "grid": {},
            "schemes": list(VALID_SCHEMES),
            "variants": list(VALID_VARIANTS),
            "t_end": base.t_end,
            "samples": base.samples,
            "dt": None,
            "strict": False,
            "out_dir": base.out_dir,
        },
    )
    p = _take(dict(top["params"]), "params", {"m": 1.0, "A": 1.0, "omega": 1.0, "hbar": 1.0})
    pk = _take(dict(top["packet"]), "packet", {"k0": 0.0, "sigma_k": 1.0, "x0": 0.0})
    g = _take(dict(top["grid"]), "grid", {"k_min": -24.0, "k_max": 24.0, "n": 1024})

    try:
        params = PhysicalParams(p["m"], p["A"], p["omega"], p["hbar"])
        packet = GaussianPacketSpec(pk["k0"], pk["sigma_k"], pk["x0"])
        grid = build_grid(g["k_min"], g["k_max"], g["n"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    schemes = tuple(top["schemes"])
    for s in schemes:
        if s not in VALID_SCHEMES:
            raise ConfigError(f"unknown scheme {s!r} in schemes; expected one of {VALID_SCHEMES}")
    if not schemes:
        raise ConfigError("schemes must select at least one scheme")
    variants = tuple(top["variants"])
    for v in variants:
        if v not in VALID_VARIANTS:
            raise ConfigError(f"unknown variant {v!r} in variants; expected one of {VALID_VARIANTS}")
    if not (isinstance(top["samples"], int) and top["samples"] >= 2):
        raise ConfigError(f"samples must be an integer >= 2, got {top['samples']!r}")
    if not (top["t_end"] > 0):
        raise ConfigError(f"t_end must be positive, got {top['t_end']!r}")
    if top["dt"] is not None and not (top["dt"] > 0):
        raise ConfigError(f"dt must be positive when given, got {top['dt']!r}")

    return ScenarioConfig(
        params=params,
        packet=packet,
        grid=grid,
        schemes=schemes,
        variants=variants,
        t_end=float(top["t_end"]),
        samples=int(top["samples"]),
        dt=None if top["dt"] is None else float(top["dt"]),
        strict=bool(top["strict"]),
        out_dir=str(top["out_dir"]),
    )


def serialize_config(config: ScenarioConfig) -> str:
    doc = {
        "params": {
            "m": config.params.m,
            "A": config.params.A,
            "omega": config.params.omega,
            "hbar": config.params.hbar,
        },
        "packet": {
            "k0": config.packet.k0,
            "sigma_k": config.packet.sigma_k,
            "x0": config.packet.x0,
        },
        "grid": {"k_min": config.grid.k_min, "k_max": config.grid.k_max, "n": config.grid.n},
        "schemes": list(config.schemes),
        "variants": list(config.variants),
        "t_end": config.t_end,
        "samples": config.samples,
        "dt": config.dt,
        "strict": config.strict,
        "out_dir": config.out_dir,
    }
    return json.dumps(doc, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# grid support


def required_k_reach(config: ScenarioConfig) -> float:
    """Largest |k| the selected evolutions can populate from this packet.

    Packet support is taken as 8 sigma around k0; each scheme adds its own
    characteristic drift, and the S3 flow stretches the whole support by
    e^{w t / 2}.
    """
    params, packet = config.params, config.packet
    base = abs(packet.k0) + 8.0 * packet.sigma_k
    reach = base
    A, hb, w = params.A, params.hbar, params.omega
    for scheme in config.schemes:
        if scheme == "hamiltonian":
            reach = max(reach, base + abs(A / (hb * w)))
        elif scheme == "S2":
            reach = max(reach, base + abs(A) * config.t_end / hb)
        elif scheme == "S3":
            shift = abs(com.scheme3_char_map(params, config.t_end).shift)
            reach = max(reach, math.exp(0.5 * abs(w) * config.t_end) * (base + shift))
    return reach


def ensure_grid_support(config: ScenarioConfig, strict: bool):
    """Warn and widen the grid (same point count) when support is too small.

    In strict mode an undersized grid aborts the run instead.
    """
    reach = required_k_reach(config)
    if config.grid.k_max >= reach and config.grid.k_min <= -reach:
        return config, False
    msg = (
        f"grid [{config.grid.k_min}, {config.grid.k_max}] cannot hold the evolved "
        f"support (need |k| up to {reach:.4g})"
    )
    if strict:
        raise GridSupportError(msg + "; aborting under strict mode")
    warnings.warn(msg + "; widening with the same point count", RuntimeWarning)
    widened = build_grid(-1.05 * reach, 1.05 * reach, config.grid.n)
    return replace(config, grid=widened), True


# ---------------------------------------------------------------------------
# strict-mode cross checks


def _strict_oracle_check(config: ScenarioConfig) -> dict:
    """Method-of-lines versus characteristic tracer on a compact grid."""
    params, packet = config.params, config.packet
    w = abs(params.omega)
    t_chk = min(config.t_end, (2.0 * math.pi / w) / 8.0)
    scheme = "hamiltonian" if "hamiltonian" in config.schemes else config.schemes[0]
    span = (
        8.0 * packet.sigma_k
        + abs(params.A / (params.hbar * w))
        + abs(params.A) * t_chk / params.hbar
        + 2.0
    )
    grid = build_grid(packet.k0 - span, packet.k0 + span, 512)
    profile = gaussian_profile_fn(packet)
    if scheme == "hamiltonian":
        problem = coefficient_problem(params, profile)
    else:
        problem = com.scheme_problem(scheme, params, profile)
    k = grid.points
    lam = max(
        float(np.max(np.abs(problem.alpha(k, s)))) * 1.586 / grid.spacing
        + float(np.max(np.abs(problem.beta(k, s))))
        for s in np.linspace(0.0, t_chk, 9)
    )
    dt = config.dt if config.dt is not None else 0.5 / lam
    reference = mol_evolve(profile, grid, params, problem, t_chk, dt)
    traced = evolve_linear_pde(problem, grid, t_chk)
    dist = density_distance(reference, traced)
    if dist > STRICT_ORACLE_TOL:
        raise OracleDivergenceError(
            f"oracle cross check failed for {scheme}: L1 distance {dist:.3e} "
            f"exceeds {STRICT_ORACLE_TOL:.1e} at t={t_chk:.4g}"
        )
    return {"scheme": scheme, "t": t_chk, "l1_distance": dist, "tolerance": STRICT_ORACLE_TOL}


def _strict_degeneracy_check(report) -> dict:
    """With the drive off, the routes with a free-particle limit must agree.

    Covers the Hamiltonian route and schemes S1, S2. The S3 flow keeps its
    dilation even at A = 0, so its distance is reported, not constrained.
    """
    checked = {}
    for scheme in ("S1", "S2"):
        if scheme in report.distances:
            worst = float(np.max(report.distances[scheme]))
            checked[scheme] = worst
            if worst > DEGENERACY_TOL:
                raise OracleDivergenceError(
                    f"zero-drive control: distance hamiltonian-{scheme} = {worst:.3e} "
                    f"exceeds {DEGENERACY_TOL:.1e}"
                )
    return {"max_distance": checked, "tolerance": DEGENERACY_TOL}


# ---------------------------------------------------------------------------
# output files


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_densities(path, report):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "k", "scheme", "density"])
        k = report.grid.points
        for i, t in enumerate(report.times):
            for scheme in report.schemes:
                rho = report.densities[scheme][i]
                for j in range(len(k)):
                    writer.writerow([_fmt(t), _fmt(k[j]), scheme, _fmt(rho[j])])


def _write_moments(path, report):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "scheme", "mean_x", "mean_v", "sigma_x", "sigma_v", "norm"])
        for i, t in enumerate(report.times):
            for scheme in report.schemes:
                ms = report.moments[scheme][i]
                writer.writerow(
                    [_fmt(t), scheme]
                    + [_fmt(v) for v in (ms.mean_x, ms.mean_v, ms.sigma_x, ms.sigma_v, ms.norm)]
                )


def _summary_payload(config, report, widened, strict_results):
    return {
        "config": json.loads(serialize_config(config)),
        "grid_used": {"k_min": report.grid.k_min, "k_max": report.grid.k_max, "n": report.grid.n},
        "grid_widened": widened,
        "times": [float(t) for t in report.times],
        "norms": {s: [ms.norm for ms in report.moments[s]] for s in report.schemes},
        "distances_vs_hamiltonian": {s: list(map(float, d)) for s, d in report.distances.items()},
        "audit": report.audit,
        "strict_checks": strict_results,
        "tolerances": {
            "strict_oracle_l1": STRICT_ORACLE_TOL,
            "zero_drive_degeneracy": DEGENERACY_TOL,
        },
    }


ABORT_ERRORS = (
    BoundaryLeakError,
    StabilityError,
    ExponentOverflowError,
    NonFiniteCoefficientError,
    GaugeQuadratureError,
    GridSupportError,
    OracleDivergenceError,
    ConfigError,
    OSError,
)


def run_scenario(config: ScenarioConfig, strict: bool | None = None, echo_audit: bool = False) -> int:
    """Execute one scenario; returns 0 on success, nonzero on any abort.

    Writes densities.csv, moments.csv and summary.json into the config's
    output directory.
    """
    strict = config.strict if strict is None else strict
    try:
        run_config, widened = ensure_grid_support(config, strict)
        report = build_scheme_report(run_config)
        strict_results = None
        if strict:
            strict_results = {"oracle": _strict_oracle_check(run_config)}
            if run_config.params.A == 0.0 and "hamiltonian" in run_config.schemes:
                strict_results["zero_drive_degeneracy"] = _strict_degeneracy_check(report)
        out_dir = config.out_dir
        os.makedirs(out_dir, exist_ok=True)
        _write_densities(os.path.join(out_dir, "densities.csv"), report)
        _write_moments(os.path.join(out_dir, "moments.csv"), report)
        payload = _summary_payload(run_config, report, widened, strict_results)
        with open(os.path.join(out_dir, "summary.json"), "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        if echo_audit and report.audit:
            width = max(len(name) for name in report.audit)
            for name, value in sorted(report.audit.items()):
                print(f"{name:<{width}}  {value:.6e}")
        return 0
    except ABORT_ERRORS as exc:
        print(f"error: {exc}", flush=True)
        return 1
