"""Solver orchestration and machine-readable report output.

The auto route solves the stacked system directly whenever its matrix
factors cleanly, attaches the power bounds, and cross-checks with the
distributed iteration when the contraction factor permits; a singular or
explicitly flagged infeasible instance falls back to the least-squares
dual path.
"""

from __future__ import annotations

import dataclasses
import io
import json
import sys as _sys
import time
from dataclasses import dataclass

import numpy as np

from . import direct as direct_mod
from . import iterate as iterate_mod
from . import qp as qp_mod
from .direct import BoundsReport, FeasibilityReport, Solution
from .errors import OutputError
from .iterate import IterationConfig, IterationTrace
from .model import assemble
from .qp import QpResult
from .scenario import Scenario


@dataclass
class RunReport:
    path_taken: str  # "direct", "qp", or "iterative"
    feasibility: FeasibilityReport
    bounds: BoundsReport | None
    solution: Solution | QpResult | None
    trace: IterationTrace | None
    sigma: float | None
    power_limit_violations: list[str]
    timing_s: dict[str, float]
    gamma: np.ndarray
    n0: np.ndarray


def _limit_violations(scenario: Scenario, u: np.ndarray) -> list[str]:
    out = []
    if scenario.power_min_mW is not None:
        for i, v in enumerate(u):
            if v < scenario.power_min_mW:
                out.append(f"channel {i + 1}: {v:.6g} mW below minimum {scenario.power_min_mW}")
    if scenario.power_max_mW is not None:
        for i, v in enumerate(u):
            if v > scenario.power_max_mW:
                out.append(f"channel {i + 1}: {v:.6g} mW above maximum {scenario.power_max_mW}")
    return out


def execute(scenario: Scenario) -> RunReport:
    timing: dict[str, float] = {}
    t0 = time.perf_counter()
    sysmat = scenario.system_matrix()
    timing["build"] = time.perf_counter() - t0

    partition = scenario.partition
    t0 = time.perf_counter()
    stack = assemble(sysmat, partition)
    feas = direct_mod.check_feasibility(stack, sysmat, partition)
    timing["feasibility"] = time.perf_counter() - t0

    opts = scenario.run
    bounds = None
    solution: Solution | QpResult | None = None
    trace = None
    sigma = None
    path = opts.solver

    t0 = time.perf_counter()
    if opts.solver == "qp" or (opts.solver in ("auto", "direct") and not feas.nonsingular):
        path = "qp"
        solution = qp_mod.solve_qp(stack, tol=opts.tol, max_iter=opts.max_iter)
    elif opts.solver == "direct":
        solution = direct_mod.solve_dsnp(stack, sysmat, partition)
        bounds = direct_mod.power_bounds(stack, sysmat, partition)
    elif opts.solver == "iterative":
        path = "iterative"
        reference = None
        if feas.nonsingular:
            reference = direct_mod.solve_dsnp(stack, sysmat, partition).u
        sigma = iterate_mod.convergence_rate(sysmat, partition)
        config = IterationConfig(
            u0=opts.initial_powers(stack.size),
            tol=opts.tol,
            max_iter=opts.max_iter,
            strict_nonnegative=opts.strict_nonnegative,
        )
        trace = iterate_mod.run(config, sysmat, partition, reference=reference)
        solution = direct_mod.verify(trace.final, stack, sysmat, partition)
    else:  # auto
        path = "direct"
        solution = direct_mod.solve_dsnp(stack, sysmat, partition)
        bounds = direct_mod.power_bounds(stack, sysmat, partition)
        sigma = iterate_mod.convergence_rate(sysmat, partition)
        if sigma < 1.0:
            config = IterationConfig(
                u0=opts.initial_powers(stack.size),
                tol=opts.tol,
                max_iter=opts.max_iter,
                strict_nonnegative=opts.strict_nonnegative,
            )
            trace = iterate_mod.run(config, sysmat, partition, reference=solution.u)
    timing["solve"] = time.perf_counter() - t0

    violations = _limit_violations(scenario, np.asarray(solution.u))
    return RunReport(
        path_taken=path,
        feasibility=feas,
        bounds=bounds,
        solution=solution,
        trace=trace,
        sigma=sigma,
        power_limit_violations=violations,
        timing_s=timing,
        gamma=sysmat.gamma,
        n0=sysmat.n0,
    )


def to_jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def report_to_dict(report: RunReport, include_timing: bool = False) -> dict:
    doc = to_jsonable(report)
    if not include_timing:
        # wall-clock varies run to run; dropping it keeps output byte-stable
        doc.pop("timing_s")
    return doc


def _csv_rows(report: RunReport):
    yield "step,channel,u_mW,osnr_dB,err_inf"
    trace = report.trace
    if trace is None:
        return
    for step_idx, (u, db) in enumerate(zip(trace.iterates, trace.osnr_db_history)):
        err = (
            f"{trace.error_history[step_idx]:.12f}"
            if step_idx < len(trace.error_history)
            else ""
        )
        for ch in range(len(u)):
            yield f"{step_idx},{ch + 1},{u[ch]:.12f},{db[ch]:.12f},{err}"


def emit(
    report: RunReport,
    fmt: str = "json",
    out_path: str | None = None,
    include_timing: bool = False,
) -> None:
    """Write the report as one JSON document or as a per-step CSV trace."""
    buf = io.StringIO()
    if fmt == "json":
        json.dump(report_to_dict(report, include_timing=include_timing), buf,
                  indent=2, sort_keys=True)
        buf.write("\n")
    elif fmt == "csv":
        for row in _csv_rows(report):
            buf.write(row + "\n")
    else:
        raise OutputError(f"unknown output format {fmt!r}")

    if out_path is None:
        _sys.stdout.write(buf.getvalue())
        return
    try:
        with open(out_path, "w") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise OutputError(f"cannot write {out_path}: {exc}") from exc
