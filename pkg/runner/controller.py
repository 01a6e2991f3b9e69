"""
Sweep dispatch and the closed-form solvers behind the CLI.
"""

import asyncio
import logging
import time
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from typing import Any, Dict, List, Optional

import numpy as np

from analytic.closed_form import access_coverage_approx, access_coverage_rayleigh, user_coverage_perfect_backhaul
from analytic.coverage import rate_coverage
from analytic.optimize import balance_root, q_balance, q_star
from analytic.report import CoverageReport, PROBABILITY_FIELDS
from network.model import derive_model
from network.params import Mode, with_overrides
from runner.config_file import RunConfig
from simulation.estimator import estimate_coverage
from utils.errors import AssumptionError, ConfigError, require
from utils.helpers import format_duration

logger = logging.getLogger(__name__)

TARGETS = ('q_star', 'q_balance')
SOLVE_VARIANTS = ('exact', 'approx', 'full')
SOLVE_GRID_STEP = 1e-3


def _report_row(report: CoverageReport, point: Dict[str, float], wall_time: float) -> Dict[str, Any]:
    row = dict(point)
    row.update(report.probabilities())
    row.update({
        'method': report.method,
        'status': 'ok',
        'q': report.q,
        'error': report.error,
        'wall_time': wall_time,
        'message': ";".join(report.flags),
    })
    return row


def _failed_row(method: str, point: Dict[str, float], exc: Exception, wall_time: float) -> Dict[str, Any]:
    row = dict(point)
    row.update(dict.fromkeys(PROBABILITY_FIELDS))
    row.update({
        'method': method,
        'status': 'failed',
        'q': None,
        'error': None,
        'wall_time': wall_time,
        'message': f"{type(exc).__name__}: {exc}",
    })
    return row


def evaluate_point(run: RunConfig, point: Dict[str, float], record_path: Optional[str] = None) -> List[Dict[str, Any]]:
    """
    Rows for one sweep point, one per requested method

    Numerical failures are caught here and turned into rows with
    status 'failed'; they never abort the sweep.
    """
    rows = []
    for method in run.methods:
        started = time.perf_counter()
        try:
            params, mitigation = run.at_point(point)
            if method == 'analytic':
                report = rate_coverage(derive_model(params), params, mitigation=mitigation,
                                       settings=run.quadrature, variant=run.variant,
                                       perfect_backhaul=run.assume_perfect_backhaul)
            else:
                report = estimate_coverage(params, mitigation, drops=run.drops, seed=run.seed,
                                           region_radius=run.region_radius, workers=run.mc_workers,
                                           record_path=record_path, sinr_gating=run.sinr_gating)
            rows.append(_report_row(report, point, time.perf_counter() - started))
        except Exception as e:
            logger.error(f"❌ {method} failed at {point or 'base point'}: {type(e).__name__}: {e}")
            rows.append(_failed_row(method, point, e, time.perf_counter() - started))
    return rows


class SweepController:
    """Runs the sweep points of a RunConfig through a worker pool"""

    def __init__(self, run: RunConfig):
        self.run = run
        self.stats = {
            'points': 0,
            'rows': 0,
            'failed_rows': 0,
            'wall_time': 0.0,
        }
        logger.info(f"🎛️ Controller ready: method={run.method}, {len(run.axes)} sweep axis/axes, "
                    f"{run.workers} worker(s)")

    def _executor(self) -> Executor:
        if self.run.workers == 1:
            return ThreadPoolExecutor(max_workers=1)
        return ProcessPoolExecutor(max_workers=self.run.workers)

    async def run_points(self, points: List[Dict[str, float]]) -> List[Dict[str, Any]]:
        """Evaluate points concurrently; rows come back in point order"""
        started = time.perf_counter()
        loop = asyncio.get_running_loop()
        record_path = self.run.record_path if len(points) == 1 else None
        if self.run.record_path and len(points) > 1:
            logger.warning("⚠️ record_path is only honoured for single-point runs")

        with self._executor() as pool:
            tasks = [loop.run_in_executor(pool, evaluate_point, self.run, point, record_path)
                     for point in points]
            per_point = await asyncio.gather(*tasks)

        rows = [row for point_rows in per_point for row in point_rows]
        self.stats['points'] += len(points)
        self.stats['rows'] += len(rows)
        self.stats['failed_rows'] += sum(row['status'] == 'failed' for row in rows)
        self.stats['wall_time'] += time.perf_counter() - started
        logger.info(f"📊 {len(points)} point(s), {len(rows)} row(s), "
                    f"{self.stats['failed_rows']} failed, {format_duration(self.stats['wall_time'])}")
        return rows

    async def run_single(self) -> List[Dict[str, Any]]:
        return await self.run_points([{}])

    async def run_sweep(self) -> List[Dict[str, Any]]:
        require(bool(self.run.axes), "sweep needs at least one [sweep] axis", exc=ConfigError, field='sweep')
        return await self.run_points(self.run.points())

    def get_stats(self) -> Dict[str, Any]:
        return {**self.stats, 'axes': [axis.name for axis in self.run.axes], 'method': self.run.method}


def _solve_full(run: RunConfig, target: str) -> Dict[str, Any]:
    """Balance root of the full analytic model, backhaul included unless waived"""
    require(target == 'q_balance', "the full model only has a balance root; use --target q_balance",
            exc=ConfigError, field='target')
    root = balance_root(run.params, settings=run.quadrature, variant=run.variant,
                        perfect_backhaul=run.assume_perfect_backhaul)
    if root is None:
        return {
            'status': 'no-root',
            'target': target,
            'variant': 'full',
            'value': None,
            'message': "c_I - c_O keeps one sign on [0, 1]",
        }

    pq = with_overrides(run.params, q=root)
    report = rate_coverage(derive_model(pq), pq, settings=run.quadrature, variant=run.variant,
                           perfect_backhaul=run.assume_perfect_backhaul)
    return {
        'status': 'ok',
        'target': target,
        'variant': 'full',
        'value': root,
        'clamped': False,
        'raw': root,
        'verification': {'q': root, **report.probabilities()},
    }


def solve(run: RunConfig, target: str = 'q_balance', variant: str = 'exact') -> Dict[str, Any]:
    """
    IBFD fraction with a verification row

    exact / approx: closed-form fraction; the verification row evaluates the
    perfect-backhaul model at it and scans c_u(q) on a 0.001 grid.
    full: brentq root of c_I(q) - c_O(q) from rate_coverage with the
    configured variant; value is None when there is no sign change.

    Raises:
        AssumptionError: perfect backhaul not acknowledged, or Rayleigh forms
                         requested with k_user != 1
    """
    require(target in TARGETS, f"unknown solve target '{target}'", field='target')
    require(variant in SOLVE_VARIANTS, f"solve variant must be one of {SOLVE_VARIANTS}, got '{variant}'",
            field='variant')
    if variant == 'full':
        return _solve_full(run, target)
    require(run.assume_perfect_backhaul,
            "the closed-form fractions assume perfect backhaul; set assume_perfect_backhaul = true "
            "or pass --assume-perfect-backhaul", exc=AssumptionError, field='assume_perfect_backhaul')
    approx = variant == 'approx'
    p = run.params
    d = derive_model(p)
    fraction = q_star(d, p, approx=approx) if target == 'q_star' else q_balance(d, p, approx=approx)

    pq = with_overrides(p, q=fraction.value)
    dq = derive_model(pq)
    closed = access_coverage_approx if approx else access_coverage_rayleigh
    grid = np.round(np.arange(0.0, 1.0 + SOLVE_GRID_STEP / 2, SOLVE_GRID_STEP), 10)
    curve = user_coverage_perfect_backhaul(grid, d, p, approx=approx)
    best = int(np.argmax(curve))

    verification = {
        'q': fraction.value,
        'c_I': closed(dq, pq, Mode.IBFD),
        'c_O': closed(dq, pq, Mode.OBFD),
        'c_u': user_coverage_perfect_backhaul(fraction.value, d, p, approx=approx),
        'grid_argmax': float(grid[best]),
        'grid_max': float(curve[best]),
    }
    logger.info(f"📊 {target} ({variant}) = {fraction.value:.6f}"
                + (f" (clamped from {fraction.raw:.6f})" if fraction.clamped else ""))
    return {
        'status': 'ok',
        'target': target,
        'variant': variant,
        'value': fraction.value,
        'clamped': fraction.clamped,
        'raw': fraction.raw,
        'verification': verification,
    }


__all__ = [
    'TARGETS',
    'SOLVE_VARIANTS',
    'evaluate_point',
    'SweepController',
    'solve',
]
