"""Experiment driver: config-driven solve / verify / oracle / sweep runs.

Configs are flat INI files (section headers, key = value, comma lists); the
schema is documented in the README.  Outputs are deterministic: identical
configs produce byte-identical CSV files.  Exit codes: 0 success (and
verdict true where applicable), 1 invalid input, 2 numerical non-convergence
or verdict false.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .analysis import condition_margin, starshape_report, superlevel_boundary
from .domains import RadialFunction, StarshapedRing, star_defect
from .errors import (ConfigError, ConvergenceError, NoCrossingError,
                     SolverNanError, StarcapError)
from .geometry import RadialConformalFactor
from .oracle import RadialPotential, compare_round, radial_potential_profile
from .solver import (RhsSpec, ScalarField, SolverConfig, build_grid,
                     dump_field, solve_qlaplace)

DEFAULT_LEVELS = tuple(round(0.1 * i, 1) for i in range(1, 10))


def _fmt(x) -> str:
    """Shortest round-trip float formatting; deterministic across runs."""
    return repr(float(x))


def _parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        m_str, k_str = text.lower().split("x")
        return int(m_str), int(k_str)
    except ValueError as exc:
        raise ConfigError(f"grid must look like 128x256, got {text!r}") from exc


def _parse_factor_token(token: str) -> dict:
    """'sphere:1.0' / 'euclidean:2.0' / 'hyperbolic:2.5' -> factor spec."""
    parts = token.strip().split(":")
    kind = parts[0].strip()
    if kind not in ("euclidean", "sphere", "hyperbolic"):
        raise ConfigError(f"unknown factor kind {kind!r} in sweep list")
    param = float(parts[1]) if len(parts) > 1 else 1.0
    key = "lambda" if kind == "euclidean" else "radius"
    return {"kind": kind, key: param}


@dataclass
class ExperimentConfig:
    """Validated experiment description built from one INI file."""

    name: str
    seed: int
    factor_spec: dict
    outer_spec: dict
    inner_spec: dict
    ring_samples: int
    q: float
    grid_m: int
    grid_k: int
    epsilon: float
    picard_tol: float
    max_picard: int
    linear_tol: float
    rhs_kind: str
    rhs_a_const: float
    rhs_b_power: float
    rhs_b_scale: float
    tolerance: float | None          # None means "auto"
    levels: tuple
    diagnostic_field: str
    bump_center: tuple
    cond_samples: tuple
    margin_tol: float
    oracle_n: int
    oracle_points: int
    out_dir: str
    sweep_q: list = field(default_factory=list)
    sweep_factors: list = field(default_factory=list)
    sweep_grids: list = field(default_factory=list)
    config_hash: str = ""

    # -- construction ------------------------------------------------------

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        read = parser.read(path)
        if not read:
            raise ConfigError(f"config file not found: {path}")
        text = Path(path).read_text(encoding="utf-8")
        cfg_hash = hashlib.sha256(text.encode()).hexdigest()[:16]

        def get(section, key, default=None):
            if parser.has_option(section, key):
                return parser.get(section, key)
            return default

        factor_spec = {"kind": get("factor", "kind", "euclidean")}
        for key in ("lambda", "radius", "table_file"):
            val = get("factor", key)
            if val is not None:
                factor_spec[key] = val if key == "table_file" else float(val)

        def ring_side(prefix):
            table = get("ring", f"{prefix}_table_file")
            if table is not None:
                return {"table_file": table}
            cos = get("ring", f"{prefix}_cos")
            if cos is None:
                raise ConfigError(f"ring section needs {prefix}_cos or "
                                  f"{prefix}_table_file")
            spec = {"cos": _parse_floats(cos)}
            sin = get("ring", f"{prefix}_sin")
            spec["sin"] = _parse_floats(sin) if sin else []
            return spec

        tol_text = get("analysis", "tolerance", "auto").strip().lower()
        tolerance = None if tol_text == "auto" else float(tol_text)
        levels_text = get("analysis", "levels")
        levels = (tuple(_parse_floats(levels_text)) if levels_text
                  else DEFAULT_LEVELS)
        bump = _parse_floats(get("analysis", "bump_center", "0.3, 0.0"))

        sweep_q = _parse_floats(get("sweep", "q_list", ""))
        sweep_factors = [_parse_factor_token(tok)
                         for tok in get("sweep", "factor_list", "").split(",")
                         if tok.strip()]
        sweep_grids = [_parse_grid(tok)
                       for tok in get("sweep", "grid_list", "").split(",")
                       if tok.strip()]

        return cls(
            name=get("experiment", "name", Path(path).stem),
            seed=int(get("experiment", "seed", "0")),
            factor_spec=factor_spec,
            outer_spec=ring_side("outer"),
            inner_spec=ring_side("inner"),
            ring_samples=int(get("ring", "samples", "256")),
            q=float(get("solver", "q", "2.0")),
            grid_m=int(get("solver", "grid_m", "64")),
            grid_k=int(get("solver", "grid_k", "128")),
            epsilon=float(get("solver", "epsilon", "1e-6")),
            picard_tol=float(get("solver", "picard_tol", "1e-8")),
            max_picard=int(get("solver", "max_picard", "200")),
            linear_tol=float(get("solver", "linear_tol", "1e-10")),
            rhs_kind=get("rhs", "kind", "zero").strip().lower(),
            rhs_a_const=float(get("rhs", "a_const", "1.0")),
            rhs_b_power=float(get("rhs", "b_power", "1.0")),
            rhs_b_scale=float(get("rhs", "b_scale", "1.0")),
            tolerance=tolerance,
            levels=levels,
            diagnostic_field=get("analysis", "diagnostic_field", "none").strip(),
            bump_center=tuple(bump),
            cond_samples=(int(get("condition", "x_count", "8")),
                          int(get("condition", "tau_count", "8")),
                          int(get("condition", "s_count", "5")),
                          int(get("condition", "v_count", "8"))),
            margin_tol=float(get("condition", "margin_tol", "1e-9")),
            oracle_n=int(get("oracle", "n", "2")),
            oracle_points=int(get("oracle", "table_points", "101")),
            out_dir=get("output", "directory", "out"),
            sweep_q=sweep_q,
            sweep_factors=sweep_factors,
            sweep_grids=sweep_grids,
            config_hash=cfg_hash,
        )

    # -- builders ----------------------------------------------------------

    def build_factor(self, spec: dict | None = None) -> RadialConformalFactor:
        spec = spec or self.factor_spec
        kind = spec["kind"]
        try:
            if kind == "euclidean":
                return RadialConformalFactor.euclidean(spec.get("lambda", 1.0))
            if kind == "sphere":
                return RadialConformalFactor.sphere(spec["radius"])
            if kind == "hyperbolic":
                return RadialConformalFactor.hyperbolic(spec["radius"])
            if kind == "custom":
                table = np.loadtxt(spec["table_file"])
                return RadialConformalFactor.from_table(table[:, 0], table[:, 1])
        except KeyError as exc:
            raise ConfigError(f"factor kind {kind!r} is missing parameter "
                              f"{exc.args[0]!r}") from exc
        except (ValueError, OSError) as exc:
            raise ConfigError(f"invalid factor: {exc}") from exc
        raise ConfigError(f"unknown factor kind {kind!r}")

    def _build_radial(self, spec: dict) -> RadialFunction:
        try:
            if "table_file" in spec:
                return RadialFunction(np.loadtxt(spec["table_file"]))
            return RadialFunction.from_fourier(spec["cos"], spec["sin"],
                                               m=self.ring_samples)
        except (ValueError, OSError) as exc:
            raise ConfigError(f"invalid radial function: {exc}") from exc

    def build_ring(self, factor: RadialConformalFactor | None = None) -> StarshapedRing:
        factor = factor or self.build_factor()
        outer = self._build_radial(self.outer_spec)
        inner = self._build_radial(self.inner_spec)
        try:
            return StarshapedRing(outer, inner, factor)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def build_solver_config(self) -> SolverConfig:
        try:
            return SolverConfig(q=self.q, epsilon=self.epsilon,
                                picard_tol=self.picard_tol,
                                max_picard=self.max_picard,
                                linear_tol=self.linear_tol)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def build_rhs(self) -> RhsSpec:
        if self.rhs_kind == "zero":
            return RhsSpec.zero()
        if self.rhs_kind == "separable":
            a, p, c = self.rhs_a_const, self.rhs_b_power, self.rhs_b_scale
            if a < 0.0 or c < 0.0 or p < 0.0:
                raise ConfigError("separable rhs requires a_const, b_scale, "
                                  "b_power >= 0")
            return RhsSpec.separable(
                a, lambda s: c * np.power(s, p),
                description=f"separable a={a:g} b(s)={c:g}*s^{p:g}")
        raise ConfigError(f"unknown rhs kind {self.rhs_kind!r} "
                          "(config supports zero | separable)")

    def validate(self):
        """Build every component once so invariant violations surface early."""
        if self.grid_m < 8 or self.grid_k < 4:
            raise ConfigError("grid needs at least 8 angular and 4 radial nodes")
        for lev in self.levels:
            if not 0.0 < lev < 1.0:
                raise ConfigError(f"levels must lie in (0, 1), got {lev:g}")
        if self.diagnostic_field not in ("none", "offcenter-bump"):
            raise ConfigError(f"unknown diagnostic_field "
                              f"{self.diagnostic_field!r}")
        self.build_solver_config()
        self.build_rhs()
        self.build_ring()


def _echo_columns(config: ExperimentConfig, factor, ring, m, k, q) -> dict:
    return {
        "experiment": config.name,
        "config_hash": config.config_hash,
        "seed": str(config.seed),
        "factor": factor.describe(),
        "ring_hash": ring.canonical_hash(),
        "q": _fmt(q),
        "grid_m": str(m),
        "grid_k": str(k),
        "epsilon": _fmt(config.epsilon),
        "picard_tol": _fmt(config.picard_tol),
        "linear_tol": _fmt(config.linear_tol),
    }


def _write_csv(path: Path, rows: list[dict]):
    if not rows:
        return
    fieldnames = list(rows[0].keys())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def _write_manifest(out: Path, config: ExperimentConfig, command: str,
                    extra: dict | None = None):
    lines = [
        f"command: {command}",
        f"experiment: {config.name}",
        f"config_hash: {config.config_hash}",
        f"seed: {config.seed}",
        f"starcap: {__version__}",
        f"numpy: {np.__version__}",
        f"scipy: {scipy.__version__}",
    ]
    for key, val in (extra or {}).items():
        lines.append(f"{key}: {val}")
    (out / "manifest.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


def _bump_field(grid, center) -> ScalarField:
    """Diagnostic field 1 - |x - c|^2: its superlevel sets are disks about c,
    so it fails the ray-monotonicity test whenever the ring reaches radii
    below |c| along the ray through c."""
    cx, cy = center
    vals = 1.0 - (grid.x1 - cx) ** 2 - (grid.x2 - cy) ** 2
    return ScalarField(grid, vals)


def _refined(m: int, k: int) -> tuple[int, int]:
    """Grid doubling that nests the coarse nodes: cells double in both
    directions, so (m, k) -> (2m, 2k - 1)."""
    return 2 * m, 2 * k - 1


def _solve_once(config: ExperimentConfig, ring, m, k):
    grid = build_grid(ring, m, k)
    cfg = config.build_solver_config()
    rhs = config.build_rhs()
    return grid, solve_qlaplace(grid, rhs, cfg)


def _auto_tolerance(config: ExperimentConfig, ring, coarse_field):
    """10x the nested grid-refinement error, floored at 1e-6."""
    m, k = config.grid_m, config.grid_k
    _, fine = _solve_once(config, ring, *_refined(m, k))
    cauchy = float(np.max(np.abs(fine.field.values[::2, ::2]
                                 - coarse_field.values)))
    return max(10.0 * cauchy, 1e-6), cauchy


# -- commands ---------------------------------------------------------------


def cmd_solve(config: ExperimentConfig, out: Path) -> int:
    factor = config.build_factor()
    ring = config.build_ring(factor)
    t0 = time.perf_counter()
    grid, result = _solve_once(config, ring, config.grid_m, config.grid_k)
    wall = time.perf_counter() - t0
    dump_field(result.field, out / "field.txt")
    log_lines = [
        f"experiment: {config.name}",
        f"grid: {config.grid_m}x{config.grid_k}  q: {config.q:g}",
        f"converged: {result.converged}",
        f"iterations: {result.iterations}",
        f"final_update: {result.final_update:.6e}",
        f"linear_residual: {result.linear_residual:.6e}",
        f"wall_time_s: {wall:.3f}",
    ]
    log_lines += [f"update[{i + 1}]: {u:.6e}"
                  for i, u in enumerate(result.update_history)]
    (out / "solve.log").write_text("\n".join(log_lines) + "\n", encoding="utf-8")
    _write_manifest(out, config, "solve",
                    {"ring_hash": ring.canonical_hash(),
                     "converged": result.converged})
    print(f"solve: converged={result.converged} iterations={result.iterations} "
          f"final_update={result.final_update:.3e} wall={wall:.2f}s")
    return 0 if result.converged else 2


def _verify_rows(config: ExperimentConfig, factor, ring, m, k):
    """Shared by verify and sweep: solve, grade, extract level boundaries."""
    diagnostics = {}
    if config.diagnostic_field == "offcenter-bump":
        grid = build_grid(ring, m, k)
        fld = _bump_field(grid, config.bump_center)
        tol = config.tolerance if config.tolerance is not None else 1e-6
        cauchy = math.nan
        diagnostics.update(converged=True, iterations=0)
    else:
        sub = replace(config, grid_m=m, grid_k=k)
        grid, result = _solve_once(sub, ring, m, k)
        fld = result.field
        diagnostics.update(converged=result.converged,
                           iterations=result.iterations)
        if config.tolerance is not None:
            tol, cauchy = config.tolerance, math.nan
        else:
            tol, cauchy = _auto_tolerance(sub, ring, fld)
    report = starshape_report(fld, tol)
    echo = _echo_columns(config, factor, ring, m, k, config.q)
    rows = []
    for level in config.levels:
        try:
            rho = superlevel_boundary(fld, level)
            defect = star_defect(rho, (0.0, 0.0), 720)
            status = "ok"
        except NoCrossingError as exc:
            defect = math.nan
            status = f"no-crossing: {exc}"
        row = dict(echo)
        row.update({
            "level": _fmt(level),
            "envelope_defect": _fmt(report.envelope_defect),
            "monotonicity_defect": _fmt(report.monotonicity_defect),
            "normal_defect": _fmt(report.normal_defect),
            "level_star_defect": _fmt(defect),
            "verdict": str(report.verdict),
            "tol": _fmt(tol),
            "cauchy_error": _fmt(cauchy),
            "converged": str(diagnostics["converged"]),
            "iterations": str(diagnostics["iterations"]),
            "status": status,
        })
        rows.append(row)
    return report, rows, diagnostics


def cmd_verify(config: ExperimentConfig, out: Path) -> int:
    factor = config.build_factor()
    ring = config.build_ring(factor)
    report, rows, diagnostics = _verify_rows(config, factor, ring,
                                             config.grid_m, config.grid_k)
    _write_csv(out / "verify.csv", rows)
    _write_manifest(out, config, "verify",
                    {"ring_hash": ring.canonical_hash(),
                     "verdict": report.verdict})
    print(f"verify: verdict={report.verdict} "
          f"envelope={report.envelope_defect:.3e} "
          f"monotonicity={report.monotonicity_defect:.3e} "
          f"normal={report.normal_defect:.3e} tol={report.tol:.3e}")
    return 0 if (report.verdict and diagnostics["converged"]) else 2


def cmd_oracle(config: ExperimentConfig, out: Path) -> int:
    factor = config.build_factor()
    ring = config.build_ring(factor)
    outer, inner = ring.outer.samples, ring.inner.samples
    if np.ptp(outer) > 1e-10 or np.ptp(inner) > 1e-10:
        raise ConfigError("oracle comparisons need a round ring "
                          "(constant outer and inner radius)")
    r_inner, r_outer = float(inner[0]), float(outer[0])
    pot = RadialPotential(factor, config.oracle_n, config.q, r_inner, r_outer)
    radii = np.linspace(r_inner, r_outer, config.oracle_points)
    table = radial_potential_profile(pot, radii)
    rows = [{"r": _fmt(r), "U": _fmt(u)} for r, u in zip(radii, table)]
    _write_csv(out / "oracle_table.csv", rows)

    echo = _echo_columns(config, factor, ring, config.grid_m, config.grid_k,
                         config.q)
    summary = dict(echo)
    summary["oracle_n"] = str(config.oracle_n)
    if config.oracle_n == 2:
        grid, result = _solve_once(config, ring, config.grid_m, config.grid_k)
        err = compare_round(result.field, pot)
        summary.update({"compare_error": _fmt(err),
                        "converged": str(result.converged)})
        print(f"oracle: compare_error={err:.3e} converged={result.converged}")
        code = 0 if result.converged else 2
    else:
        summary.update({"compare_error": _fmt(math.nan), "converged": ""})
        print("oracle: table written (no 2-d comparison for n != 2)")
        code = 0
    _write_csv(out / "oracle_summary.csv", [summary])
    _write_manifest(out, config, "oracle",
                    {"ring_hash": ring.canonical_hash()})
    return code


def cmd_check_condition(config: ExperimentConfig, out: Path) -> int:
    factor = config.build_factor()
    ring = config.build_ring(factor)
    rhs = config.build_rhs()
    margin, argmin = condition_margin(rhs, factor, config.q, ring,
                                      samples=config.cond_samples,
                                      return_argmin=True)
    echo = _echo_columns(config, factor, ring, config.grid_m, config.grid_k,
                         config.q)
    row = dict(echo)
    row.update({
        "rhs": rhs.description,
        "margin": _fmt(margin),
        "margin_tol": _fmt(config.margin_tol),
        "holds": str(margin >= -config.margin_tol),
        "argmin_x1": _fmt(argmin["x1"]),
        "argmin_x2": _fmt(argmin["x2"]),
        "argmin_tau": _fmt(argmin["tau"]),
        "argmin_s": _fmt(argmin["s"]),
        "argmin_v1": _fmt(argmin["v1"]),
        "argmin_v2": _fmt(argmin["v2"]),
    })
    _write_csv(out / "condition.csv", [row])
    _write_manifest(out, config, "check-condition",
                    {"ring_hash": ring.canonical_hash(), "margin": margin})
    print(f"check-condition: margin={margin:.6e} "
          f"holds={margin >= -config.margin_tol}")
    return 0 if margin >= -config.margin_tol else 2


def _sweep_combos(config: ExperimentConfig):
    qs = config.sweep_q or [config.q]
    factors = config.sweep_factors or [config.factor_spec]
    grids = config.sweep_grids or [(config.grid_m, config.grid_k)]
    combos = []
    for q in qs:
        for fs in factors:
            for (m, k) in grids:
                combos.append((q, fs, m, k))
    return combos


def _sweep_one(config: ExperimentConfig, index: int, q, factor_spec, m, k):
    sub = replace(config, q=q, factor_spec=factor_spec, grid_m=m, grid_k=k)
    try:
        factor = sub.build_factor()
        ring = sub.build_ring(factor)
        report, rows, diagnostics = _verify_rows(sub, factor, ring, m, k)
        row = dict(rows[0])
        row.pop("level")
        row.pop("level_star_defect")
        row["index"] = str(index)
        row["status"] = "ok" if diagnostics["converged"] else "non-converged"
        ok = report.verdict and diagnostics["converged"]
        return index, row, ok
    except (StarcapError, ValueError, ConvergenceError, SolverNanError) as exc:
        row = {
            "experiment": config.name, "config_hash": config.config_hash,
            "seed": str(config.seed), "factor": str(factor_spec),
            "ring_hash": "", "q": _fmt(q), "grid_m": str(m),
            "grid_k": str(k), "epsilon": _fmt(config.epsilon),
            "picard_tol": _fmt(config.picard_tol),
            "linear_tol": _fmt(config.linear_tol),
            "envelope_defect": _fmt(math.nan),
            "monotonicity_defect": _fmt(math.nan),
            "normal_defect": _fmt(math.nan), "verdict": "False",
            "tol": _fmt(math.nan), "cauchy_error": _fmt(math.nan),
            "converged": "False", "iterations": "0",
            "index": str(index), "status": f"error: {exc}",
        }
        return index, row, False


def cmd_sweep(config: ExperimentConfig, out: Path) -> int:
    combos = _sweep_combos(config)
    if not (config.sweep_q or config.sweep_factors or config.sweep_grids):
        raise ConfigError("sweep needs at least one of q_list, factor_list, "
                          "grid_list")
    threads = int(os.environ.get("STARCAP_THREADS", "1"))
    results = {}
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_sweep_one, config, i, *combo)
                       for i, combo in enumerate(combos)]
            for fut in futures:
                index, row, ok = fut.result()
                results[index] = (row, ok)
    else:
        for i, combo in enumerate(combos):
            index, row, ok = _sweep_one(config, i, *combo)
            results[index] = (row, ok)

    rows = []
    all_ok = True
    for i in range(len(combos)):
        row, ok = results[i]
        ordered = {"index": row.pop("index")}
        ordered.update(row)
        rows.append(ordered)
        all_ok = all_ok and ok
    _write_csv(out / "sweep.csv", rows)
    _write_manifest(out, config, "sweep", {"runs": len(rows)})
    print(f"sweep: {len(rows)} runs, all_verdicts_true={all_ok}")
    return 0 if all_ok else 2


# -- entry point --------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="starcap",
        description="Capacitary potentials on starshaped rings and "
                    "starshapedness verification of their level sets.")
    parser.add_argument("command",
                        choices=["solve", "verify", "oracle",
                                 "check-condition", "sweep"])
    parser.add_argument("--config", required=True, help="INI config file")
    parser.add_argument("--out", help="output directory (overrides config)")
    parser.add_argument("--grid", help="override grid as MxK")
    parser.add_argument("--q", type=float, help="override exponent q")
    parser.add_argument("--tol", type=float,
                        help="override analysis tolerance / margin tolerance")
    args = parser.parse_args(argv)

    try:
        config = ExperimentConfig.from_file(args.config)
        if args.grid:
            config.grid_m, config.grid_k = _parse_grid(args.grid)
        if args.q is not None:
            config.q = args.q
        if args.tol is not None:
            config.tolerance = args.tol
            config.margin_tol = args.tol
        if args.out:
            config.out_dir = args.out
        config.validate()

        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        handler = {
            "solve": cmd_solve,
            "verify": cmd_verify,
            "oracle": cmd_oracle,
            "check-condition": cmd_check_condition,
            "sweep": cmd_sweep,
        }[args.command]
        return handler(config, out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConvergenceError, SolverNanError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
