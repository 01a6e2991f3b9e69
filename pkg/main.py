# main.py - command-line entry point of the coverage engine
import argparse
import asyncio
import json
import logging
import sys
from typing import List, Optional

from runner.config_file import FORMATS, METHOD_ALIASES, RunConfig, load_run_config
from runner.controller import SOLVE_VARIANTS, TARGETS, SweepController, solve
from runner.output import write_rows
from utils.errors import ConfigError, CoverageError
from utils.helpers import dump_json
from utils.logger import setup_logging

logger = logging.getLogger(__name__)

COMMANDS = ('coverage', 'sweep', 'solve', 'simulate', 'validate-config')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='fdbackhaul',
        description="Rate coverage of IBFD/OBFD wirelessly backhauled small cells",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', metavar='PATH', help="INI run configuration")
    common.add_argument('--out', metavar='PATH', help="output file (stdout when omitted)")
    common.add_argument('--format', choices=FORMATS, help="output format")
    common.add_argument('--drops', type=int, metavar='N', help="Monte Carlo drops")
    common.add_argument('--seed', type=int, metavar='N', help="Monte Carlo master seed")
    common.add_argument('--method', choices=('analytic', 'mc', 'montecarlo', 'both'), help="evaluation path")
    common.add_argument('--workers', type=int, metavar='N', help="sweep worker processes")
    common.add_argument('--no-timestamp', action='store_true', help="byte-identical re-runs")
    common.add_argument('--assume-perfect-backhaul', action='store_true',
                        help="skip the backhaul integrals / allow the closed-form solvers")
    common.add_argument('--log-level', metavar='LEVEL', help="console log level")
    common.add_argument('--log-file', metavar='PATH', help="DEBUG log file ('' disables it)")

    sub = parser.add_subparsers(dest='command', required=True)
    sub.add_parser('coverage', parents=[common], help="evaluate the base point")
    sub.add_parser('sweep', parents=[common], help="evaluate the [sweep] grid")
    solve_parser = sub.add_parser('solve', parents=[common], help="IBFD fraction: closed form or full-model balance root")
    solve_parser.add_argument('--target', choices=TARGETS, default='q_balance')
    solve_parser.add_argument('--variant', choices=SOLVE_VARIANTS, default='exact',
                              help="closed form (exact, approx) or root of the full analytic model (full)")
    sub.add_parser('simulate', parents=[common], help="Monte Carlo only, at the base point")
    sub.add_parser('validate-config', parents=[common], help="parse and validate --config")
    return parser


def apply_cli_overrides(run: RunConfig, args: argparse.Namespace) -> RunConfig:
    """Command-line flags win over the file"""
    if args.out is not None:
        run.out = args.out
    if args.format is not None:
        run.format = args.format
    if args.drops is not None:
        run.drops = args.drops
    if args.seed is not None:
        run.seed = args.seed
    if args.method is not None:
        run.method = METHOD_ALIASES.get(args.method, args.method)
    if args.workers is not None:
        run.workers = args.workers
    if args.no_timestamp:
        run.no_timestamp = True
    if args.assume_perfect_backhaul:
        run.assume_perfect_backhaul = True
    if args.command == 'simulate':
        run.method = 'montecarlo'
    return run.validate()


def _error_record(exc: Exception) -> str:
    if isinstance(exc, CoverageError):
        record = exc.to_record()
    else:
        record = {'status': 'error', 'error': type(exc).__name__, 'message': str(exc)}
    return json.dumps(record, default=str)


async def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(level=args.log_level, log_file=args.log_file)

    try:
        run = apply_cli_overrides(load_run_config(args.config), args)

        if args.command == 'validate-config':
            print(dump_json({
                'status': 'ok',
                'config': run.source,
                'method': run.method,
                'scheme': run.mitigation.scheme.value,
                'axes': [axis.name for axis in run.axes],
                'points': len(run.points()),
            }))
            return 0

        if args.command == 'solve':
            result = solve(run, args.target, args.variant)
            print(dump_json(result))
            return 0 if result['status'] == 'ok' else 1

        logger.info(f"🚀 {args.command}: config={run.source or 'defaults'}, method={run.method}")
        controller = SweepController(run)
        if args.command == 'sweep':
            rows = await controller.run_sweep()
        else:
            rows = await controller.run_single()
        axes = [axis.name for axis in run.axes] if args.command == 'sweep' else []
        write_rows(rows, axes, run.out, run.format, timestamp=not run.no_timestamp)

        stats = controller.get_stats()
        if stats['failed_rows']:
            logger.warning(f"⚠️ {stats['failed_rows']} of {stats['rows']} rows failed")
            return 1
        logger.info(f"✅ {args.command} finished")
        return 0

    except ConfigError as e:
        logger.error(f"❌ Configuration error: {e.message}")
        print(_error_record(e), file=sys.stderr)
        return 2
    except CoverageError as e:
        logger.error(f"❌ {type(e).__name__}: {e.message}")
        print(_error_record(e), file=sys.stderr)
        return 1
    except Exception as e:
        logger.error(f"❌ Unexpected error: {e}", exc_info=True)
        print(_error_record(e), file=sys.stderr)
        return 1


if __name__ == "__main__":
    try:
        sys.exit(asyncio.run(main()))
    except KeyboardInterrupt:
        logger.info("⚠️ Interrupted by user")
        sys.exit(130)
