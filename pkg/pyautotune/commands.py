import contextlib
import logging
import math
import sys


logger = logging.getLogger(__name__)


@contextlib.contextmanager
def _open_trace(options):
    if not options.output_path:
        yield sys.stdout
        return
    logger.info('writing the trace to %s', options.output_path)
    with open(options.output_path, 'w', encoding='utf-8', newline='') as outfile:
        yield outfile


def _summary_file(options):
    # Keep stdout clean for the trace when it goes there.
    return sys.stdout if options.output_path else sys.stderr


def _new_session(options, dim, point_type, trace):
    from .autotuning import Autotuning
    from .neldermead import NelderMead

    if options.optimizer == 'nm':
        optimizer = NelderMead(dim, options.nm_error, options.max_iter,
                               seed=options.seed)
        return Autotuning.with_optimizer(options.lower, options.upper,
                                         options.ignore, optimizer,
                                         point_type=point_type, trace=trace)
    return Autotuning(options.lower, options.upper, options.ignore,
                      dim, options.num_opt, options.max_iter,
                      seed=options.seed, point_type=point_type, trace=trace)


def cmd_bench(options):
    from ._functions import FUNCTIONS
    from ._trace import TraceWriter, display_summary

    func = FUNCTIONS[options.function]
    with _open_trace(options) as stream:
        writer = TraceWriter(stream, options.dim, options.output)
        session = _new_session(options, options.dim, float, writer)
        point = session.exec(None, math.nan)
        while not session.finished:
            point = session.exec(None, func(point))
        stream.flush()

    final = session.final_values
    display_summary(f"{options.function} ({options.optimizer})", [
        ("Final point", final),
        ("Final cost", func(final)),
        ("Normalized final cost", func(session.domain.from_user(final))),
        ("Best cost seen", session.best_cost),
        ("Evaluations", session.evals),
        ("Target executions", session.target_execs),
    ], file=_summary_file(options))


def cmd_rbgs(options):
    from ._trace import TraceWriter, display_summary
    from .rbgs import ChunkConfig, Grid, RedBlackSolver, TuningParams

    dual = options.chunks_mode == 'dual'
    grid = Grid.with_boundary(options.n)
    with _open_trace(options) as stream:
        writer = TraceWriter(stream, 2 if dual else 1, options.output)
        with RedBlackSolver(grid, options.threads) as solver:
            if options.tuned_mode == 'fixed':
                result = solver.solve(ChunkConfig(options.fixed_chunk),
                                      options.tol, options.max_sweeps)
            else:
                tuning = TuningParams(
                    lower=options.lower, upper=options.upper,
                    ignore=options.ignore, num_opt=options.num_opt,
                    max_iter=options.max_iter, seed=options.seed, dual=dual,
                    optimizer=options.optimizer, nm_error=options.nm_error,
                )
                if options.tuned_mode == 'entire':
                    solve = solver.solve_tuned_entire
                else:
                    solve = solver.solve_tuned_single
                result = solve(tuning, options.tol, options.max_sweeps,
                               trace=writer)
            clamped = solver.clamped
        stream.flush()

    chunks = ChunkConfig(*result.chunks)
    display_summary(f"rbgs n={options.n} ({options.tuned_mode})", [
        ("Threads", options.threads),
        ("Chunks (black, red)", f"{chunks.black}, {chunks.red}"),
        ("Sweeps", result.sweeps),
        ("Final diff", result.diff),
        ("Converged", solver.converged(result.diff, options.tol)),
        ("Main loop time", "%.6f s" % result.elapsed),
        ("Target executions", result.target_execs),
        ("Clamped chunks", clamped),
    ], file=_summary_file(options))
