"""Command line entry point: ``csreduce run2d|run1d|reduce|groundstate|selfcheck``.

Runs are driven by one JSON config; ``--out``, ``--seed`` and ``--set key=value``
override its top-level keys.  Exit status is 0 on success, 1 when the
configuration is rejected and 2 on a numerical failure.
"""
from __future__ import annotations

import argparse
import copy
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .dynamics1d import evolve_1d, step_1d
from .dynamics2d import evolve_2d
from .errors import CSReduceError, ConfigurationError, NumericalError
from .fields import Grid1D, Grid2D, l2_norm, load_snapshot, save_snapshot
from .groundstate import FlowConfig, default_flow_2d, ground_state_1d, ground_state_2d
from .observables import Diagnostics, diagnostics_1d, diagnostics_2d, relative_drift, write_csv
from .params import Params1D, Params2D, g_tilde, strip_grid, validate_grid
from .reduction import build_ansatz, build_profile, project_to_1d, rhs_consistency_residual

log = logging.getLogger("csreduce")

DEFAULTS = {
    "nx": 256,
    "ny": 512,
    "Lx": 10.0,
    "ly_factor": 7.0,
    "beta": 1.0,
    "g": 0.0,
    "eps": 0.1,
    "eps_list": [0.2, 0.1, 0.05],
    "dt": 1e-3,
    "t_end": 1.0,
    "gauge_bc": "strip",
    "current_term": True,
    "boundary_threshold": 1e-6,
    "trap_on": True,
    "g_tilde": None,
    "initial": {"kind": "gaussian", "x0": 0.0, "k0": 0.0, "width": 1.0},
    "mass": 1.0,
    "diag_stride": 10,
    "snapshot_stride": 0,
    "align_phase": False,
    "dim": 1,
    "flow": {},
    "jobs": 1,
    "out": "out",
    "seed": 0,
}


# --- configuration ----------------------------------------------------------

def load_config(path=None, overrides=None):
    cfg = copy.deepcopy(DEFAULTS)
    if path is not None:
        try:
            user = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(user, dict):
            raise ConfigurationError("config must be a JSON object")
        unknown = set(user) - set(DEFAULTS) - {"experiment"}
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(user)
    cfg.update(overrides or {})
    return cfg


def _parse_set(items):
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigurationError(f"--set expects key=value, got {item!r}")
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def params_2d(cfg, eps=None):
    return Params2D(beta=cfg["beta"], g=cfg["g"], eps=cfg["eps"] if eps is None else eps, dt=cfg["dt"],
                    t_end=cfg["t_end"], gauge_bc=cfg["gauge_bc"], current_term=cfg["current_term"],
                    boundary_threshold=cfg["boundary_threshold"])


def params_1d(cfg):
    gt = cfg["g_tilde"] if cfg["g_tilde"] is not None else g_tilde(cfg["g"], cfg["eps"])
    return Params1D(beta=cfg["beta"], g_tilde=gt, trap_on=cfg["trap_on"], dt=cfg["dt"], t_end=cfg["t_end"])


def grid_2d(cfg, eps=None):
    eps = cfg["eps"] if eps is None else eps
    grid = strip_grid(cfg["nx"], cfg["ny"], cfg["Lx"], eps, cfg["ly_factor"])
    validate_grid(grid, eps)
    return grid


def grid_1d(cfg):
    return Grid1D(cfg["nx"], cfg["Lx"])


def flow_config(cfg, eps=None):
    if eps is None:
        return FlowConfig(**cfg["flow"])
    return default_flow_2d(eps, **cfg["flow"]) if "dtau" not in cfg["flow"] else FlowConfig(**cfg["flow"])


# --- initial data -----------------------------------------------------------

def initial_1d(grid: Grid1D, cfg, p1=None):
    init = cfg["initial"]
    kind = init.get("kind", "gaussian")
    x = grid.x
    if kind == "gaussian":
        w = init.get("width", 1.0)
        phi = np.exp(-(x - init.get("x0", 0.0)) ** 2 / (2 * w ** 2) + 1j * init.get("k0", 0.0) * x)
    elif kind == "random":
        rng = np.random.default_rng(cfg["seed"])
        modes = init.get("modes", 6)
        c = rng.normal(size=modes) + 1j * rng.normal(size=modes)
        phi = np.exp(-x ** 2 / 2) * sum(c[j] * (x / 2) ** j for j in range(modes))
    elif kind == "ground_state":
        phi = ground_state_1d(grid, p1 or params_1d(cfg), flow_config(cfg), mass=cfg["mass"])[0].values
    elif kind == "file":
        field = load_snapshot(init["path"])
        if field.grid != grid:
            raise ConfigurationError("initial file grid does not match the configured 1D grid")
        phi = field.values
    else:
        raise ConfigurationError(f"unknown initial kind {kind!r}")
    phi = np.asarray(phi, dtype=complex)
    return phi * np.sqrt(cfg["mass"]) / l2_norm(grid, phi)


def initial_2d(grid: Grid2D, cfg, p: Params2D):
    kind = cfg["initial"].get("kind", "gaussian")
    if kind == "file":
        field = load_snapshot(cfg["initial"]["path"])
        if field.grid != grid:
            raise ConfigurationError("initial file grid does not match the configured 2D grid")
        return np.asarray(field.values, dtype=complex)
    if kind == "ground_state_2d":
        return ground_state_2d(grid, p, flow_config(cfg, p.eps), mass=cfg["mass"])[0].values
    phi = initial_1d(grid.xgrid, cfg, Params1D.from_2d(p))
    return build_ansatz(grid, phi, build_profile(p.eps, grid.ygrid), p.beta, p.gauge_bc)


# --- experiments ------------------------------------------------------------

def _tag(t):
    return f"{t:.6f}"


def _check_strides(cfg):
    nsteps = int(round(cfg["t_end"] / cfg["dt"]))
    stride, snap = cfg["diag_stride"], cfg["snapshot_stride"]
    if stride < 1 or nsteps % stride:
        raise ConfigurationError("diag_stride must divide the number of time steps")
    if snap < 0 or snap % stride:
        raise ConfigurationError("snapshot_stride must be a multiple of diag_stride (0 disables snapshots)")


def run2d(cfg, out: Path):
    _check_strides(cfg)
    p = params_2d(cfg)
    grid = grid_2d(cfg)
    psi0 = initial_2d(grid, cfg, p)
    rows = []
    snap = cfg["snapshot_stride"]
    count = {"n": 0}

    def observe(state, prev):
        rows.append(diagnostics_2d(grid, state.psi, p, state.t, None if prev is None else prev.psi))
        if snap and count["n"] % (snap // cfg["diag_stride"]) == 0:
            save_snapshot(out / "snapshots", f"psi_{_tag(state.t)}", grid, state.psi, state.t)
        count["n"] += 1

    t0 = time.perf_counter()
    evolve_2d(grid, psi0, p, observers=[observe], stride=cfg["diag_stride"])
    write_csv(out / "diagnostics.csv", rows)
    return _run_summary(rows, time.perf_counter() - t0)


def run1d(cfg, out: Path):
    _check_strides(cfg)
    p = params_1d(cfg)
    grid = grid_1d(cfg)
    phi0 = initial_1d(grid, cfg, p)
    rows = []
    snap = cfg["snapshot_stride"]
    count = {"n": 0}

    def observe(t, phi, prev):
        rows.append(diagnostics_1d(grid, phi, p, t))
        if snap and count["n"] % (snap // cfg["diag_stride"]) == 0:
            save_snapshot(out / "snapshots", f"phi_{_tag(t)}", grid, phi, t)
        count["n"] += 1

    t0 = time.perf_counter()
    evolve_1d(grid, phi0, p, observers=[observe], stride=cfg["diag_stride"],
              boundary_threshold=cfg["boundary_threshold"])
    write_csv(out / "diagnostics.csv", rows)
    return _run_summary(rows, time.perf_counter() - t0)


def _run_summary(rows, runtime):
    cont = [d.extra["continuity_residual"] for d in rows if "continuity_residual" in d.extra]
    return {
        "t_final": rows[-1].t,
        "mass_final": rows[-1].mass,
        "energy_final": rows[-1].energy,
        "mass_drift": relative_drift([d.mass for d in rows]),
        "energy_drift": relative_drift([d.energy for d in rows]),
        "max_continuity_residual": max(cont) if cont else None,
        "runtime_s": runtime,
    }


def reduce_leg(cfg, eps, out: Path | None = None):
    """Evolve the 2D ansatz and the 1D equation side by side at one ``eps``.

    Returns the sup over sampling times of ``||project(psi(t)) - phi(t)||``
    together with per-sample diagnostics.  With ``align_phase`` the projected
    profile is first rotated by the phase of its overlap with ``phi``.
    """
    p2 = params_2d(cfg, eps)
    p1 = Params1D.from_2d(p2)
    grid = grid_2d(cfg, eps)
    profile = build_profile(eps, grid.ygrid)
    phi = initial_1d(grid.xgrid, cfg, p1)
    psi0 = build_ansatz(grid, phi, profile, p2.beta, p2.gauge_bc)
    stride = cfg["diag_stride"]
    state = {"phi": phi}
    rows = []

    def observe(s, prev):
        if prev is not None:
            for _ in range(stride):
                state["phi"] = step_1d(grid.xgrid, state["phi"], p1)
        proj = project_to_1d(grid, s.psi, profile, p2.beta, p2.gauge_bc)
        if cfg["align_phase"]:
            ov = np.vdot(proj, state["phi"])
            if ov != 0:
                proj = proj * ov / abs(ov)
        err = l2_norm(grid.xgrid, proj - state["phi"])
        rows.append(diagnostics_2d(grid, s.psi, p2, s.t, None if prev is None else prev.psi, reduction_error=err))

    t0 = time.perf_counter()
    evolve_2d(grid, psi0, p2, observers=[observe], stride=stride)
    runtime = time.perf_counter() - t0
    if out is not None:
        leg_dir = out / f"eps_{eps:g}"
        leg_dir.mkdir(parents=True, exist_ok=True)
        write_csv(leg_dir / "diagnostics.csv", rows)
    errs = [d.extra["reduction_error"] for d in rows]
    summary = _run_summary(rows, runtime)
    summary.update(eps=eps, sup_error=max(errs), final_error=errs[-1])
    return summary, rows


def reduce(cfg, out: Path):
    _check_strides(cfg)
    eps_list = [float(e) for e in cfg["eps_list"]]
    for eps in eps_list:
        params_2d(cfg, eps)
        grid_2d(cfg, eps)
    if cfg["jobs"] > 1:
        with ProcessPoolExecutor(cfg["jobs"]) as ex:
            legs = list(ex.map(reduce_leg, [cfg] * len(eps_list), eps_list, [out] * len(eps_list)))
    else:
        legs = [reduce_leg(cfg, eps, out) for eps in eps_list]
    summaries = [s for s, _ in legs]
    phi = initial_1d(grid_1d(cfg), cfg, Params1D.from_2d(params_2d(cfg, eps_list[0])))
    table = rhs_consistency_residual(grid_1d(cfg), phi, cfg["beta"], cfg["g"], eps_list, ny=cfg["ny"],
                                     ly_factor=cfg["ly_factor"], current_term=cfg["current_term"],
                                     bc=cfg["gauge_bc"])
    with open(out / "residuals.csv", "w") as fh:
        fh.write("eps,beta,g,residual,quintic_fit,runtime_s\n")
        for r in table:
            fh.write(f"{r.eps!r},{r.beta!r},{r.g!r},{r.residual!r},{r.quintic_fit!r},{r.runtime_s!r}\n")
    sups = [s["sup_error"] for s in summaries]
    return {"legs": summaries, "sup_errors": dict(zip(map(str, eps_list), sups)),
            "monotone": all(a > b for a, b in zip(sups, sups[1:]))}


def groundstate(cfg, out: Path):
    t0 = time.perf_counter()
    if cfg["dim"] == 1:
        grid = grid_1d(cfg)
        p = params_1d(cfg)
        field, mu = ground_state_1d(grid, p, flow_config(cfg), mass=cfg["mass"])
    elif cfg["dim"] == 2:
        p = params_2d(cfg)
        grid = grid_2d(cfg)
        field, mu = ground_state_2d(grid, p, flow_config(cfg, p.eps), mass=cfg["mass"])
    else:
        raise ConfigurationError("dim must be 1 or 2")
    energies = field.meta["energies"]
    save_snapshot(out, "ground_state", grid, field.values, 0.0, mu=mu, energy=energies[-1])
    rows = [Diagnostics(float(i), cfg["mass"], e, 0.0) for i, e in enumerate(energies)]
    write_csv(out / "diagnostics.csv", rows)
    return {"mu": mu, "energy": energies[-1], "iterations": len(energies) - 1,
            "runtime_s": time.perf_counter() - t0}


def selfcheck(cfg, out: Path):
    from .selfcheck import run_checks
    results = run_checks(seed=cfg["seed"])
    width = max(len(name) for name, _, _ in results)
    for name, ok, value in results:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {value:.3e}")
    summary = {name: {"pass": ok, "value": value} for name, ok, value in results}
    if not all(ok for _, ok, _ in results):
        (out / "summary.json").write_text(json.dumps(summary, indent=2))
        raise NumericalError("self-check failed")
    return summary


COMMANDS = {"run2d": run2d, "run1d": run1d, "reduce": reduce, "groundstate": groundstate, "selfcheck": selfcheck}


def build_parser():
    ap = argparse.ArgumentParser(prog="csreduce", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="JSON config file")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--seed", type=int, help="seed for random initial data")
    ap.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a top-level config key")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        overrides = _parse_set(args.set)
        if args.out is not None:
            overrides["out"] = args.out
        if args.seed is not None:
            overrides["seed"] = args.seed
        cfg = load_config(args.config, overrides)
        out = Path(cfg["out"])
        out.mkdir(parents=True, exist_ok=True)
        summary = COMMANDS[args.command](cfg, out)
        (out / "summary.json").write_text(json.dumps(summary, indent=2, default=float))
    except (ConfigurationError, ValueError, TypeError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, CSReduceError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
