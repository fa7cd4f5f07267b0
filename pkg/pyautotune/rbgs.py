"""Red-Black Gauss-Seidel for the 2-D Laplace problem, with tunable chunks.

The (n+2) x (n+2) grid holds a fixed Dirichlet boundary around n x n
interior cells.  A sweep updates the black cells ((i+j) odd) and then the
red cells ((i+j) even); every updated cell becomes the average of its
four neighbours, all of the other colour, so the cells of one colour can
be updated in any order and in parallel.

Within a colour phase the interior rows are handed out to the worker
threads dynamically: each worker claims the next `chunk` rows until none
are left.  The chunk size changes only the timing, never the numbers.
"""

__all__ = [
    'Grid',
    'ChunkConfig',
    'TuningParams',
    'SolveResult',
    'RedBlackSolver',
    'sweep',
    'solve',
    'solve_tuned_entire',
    'solve_tuned_single',
]


from collections import namedtuple
import concurrent.futures
import logging
import threading
import time

import numpy as np

from ._domain import ConfigurationError, check_count
from .autotuning import Autotuning, DEFAULT_SEED
from .neldermead import NelderMead


logger = logging.getLogger(__name__)

RED = 0
BLACK = 1


class Grid:
    """A square grid of n interior cells per side plus the boundary ring."""

    def __init__(self, values):
        values = np.array(values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1] or values.shape[0] < 3:
            raise ConfigurationError(f'grid must be square with n >= 1, got shape {values.shape}')
        self.values = values

    @classmethod
    def with_boundary(cls, n, boundary=1.0, interior=0.0):
        n = check_count('n', n)
        values = np.full((n + 2, n + 2), float(boundary))
        values[1:-1, 1:-1] = interior
        return cls(values)

    def __repr__(self):
        return f'{type(self).__name__}(n={self.n})'

    @property
    def n(self):
        return self.values.shape[0] - 2

    @property
    def interior(self):
        return self.values[1:-1, 1:-1]

    def copy(self):
        return type(self)(self.values)


class ChunkConfig(namedtuple('ChunkConfig', 'black red')):
    """Rows claimed at a time in the black and the red phase."""
    __slots__ = ()

    def __new__(cls, black, red=None):
        black = check_count('chunk', black)
        red = black if red is None else check_count('chunk', red)
        return super().__new__(cls, black, red)

    def for_color(self, color):
        return self.black if color == BLACK else self.red


class TuningParams(namedtuple('TuningParams',
                              'lower upper ignore num_opt max_iter seed dual optimizer nm_error')):
    """Session parameters for the tuned solvers."""
    __slots__ = ()

    def __new__(cls, lower=1, upper=64, ignore=1, num_opt=4, max_iter=10,
                seed=DEFAULT_SEED, dual=False, optimizer='csa', nm_error=1e-6):
        if optimizer not in ('csa', 'nm'):
            raise ConfigurationError(f'unsupported optimizer {optimizer!r}')
        return super().__new__(cls, lower, upper, ignore, num_opt, max_iter,
                               seed, bool(dual), optimizer, nm_error)

    @property
    def dim(self):
        return 2 if self.dual else 1

    def new_session(self, **kwargs):
        if self.optimizer == 'nm':
            optimizer = NelderMead(self.dim, self.nm_error, self.max_iter, seed=self.seed)
            return Autotuning.with_optimizer(self.lower, self.upper, self.ignore,
                                             optimizer, point_type=int, **kwargs)
        return Autotuning(self.lower, self.upper, self.ignore,
                          self.dim, self.num_opt, self.max_iter,
                          seed=self.seed, point_type=int, **kwargs)


class SolveResult(namedtuple('SolveResult', 'sweeps diff elapsed chunks target_execs')):
    __slots__ = ()

    def __new__(cls, sweeps, diff, elapsed, chunks, target_execs=0):
        return super().__new__(cls, sweeps, diff, elapsed, chunks, target_execs)


#######################################
# the solver

class _RowCounter:
    """Hands out batches of rows to whoever asks next."""

    def __init__(self, first, last):
        self._next = first
        self._last = last
        self._lock = threading.Lock()

    def claim(self, chunk):
        with self._lock:
            start = self._next
            if start > self._last:
                return None
            self._next = min(start + chunk, self._last + 1)
            return range(start, self._next)


class RedBlackSolver:
    """Owns a grid and a pool of worker threads across sweeps."""

    def __init__(self, grid, threads=1):
        self.grid = grid
        self.threads = check_count('threads', threads)
        self.clamped = 0
        self._partials = np.zeros((2, grid.n + 2))
        self._pool = None
        if self.threads > 1:
            self._pool = concurrent.futures.ThreadPoolExecutor(
                max_workers=self.threads, thread_name_prefix='rbgs')

    def __enter__(self):
        return self

    def __exit__(self, *args):
        self.close()

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def _check_chunk(self, chunk):
        n = self.grid.n
        chunk = int(chunk)
        if 1 <= chunk <= n:
            return chunk
        if not self.clamped:
            logger.warning('chunk %s outside [1, %s]; clamped', chunk, n)
        self.clamped += 1
        return min(max(chunk, 1), n)

    def chunks_for(self, values):
        """Return the ChunkConfig for raw chunk values, clamped into [1, n]."""
        if len(values) not in (1, 2):
            raise ConfigurationError(f'expected 1 or 2 chunk values, got {values!r}')
        return ChunkConfig(*(self._check_chunk(v) for v in values))

    def _update_row(self, i, color):
        A = self.grid.values
        n = self.grid.n
        j0 = 1 if (i + 1) % 2 == color else 2
        if j0 > n:
            self._partials[color, i] = 0.0
            return
        old = A[i, j0:n + 1:2]
        new = 0.25 * (A[i - 1, j0:n + 1:2] + A[i + 1, j0:n + 1:2]
                      + A[i, j0 - 1:n:2] + A[i, j0 + 1:n + 2:2])
        self._partials[color, i] = np.abs(new - old).sum()
        A[i, j0:n + 1:2] = new

    def _work(self, rows, color, chunk):
        while True:
            batch = rows.claim(chunk)
            if batch is None:
                return
            for i in batch:
                self._update_row(i, color)

    def _phase(self, color, chunk):
        rows = _RowCounter(1, self.grid.n)
        if self._pool is None:
            self._work(rows, color, chunk)
            return
        futures = [self._pool.submit(self._work, rows, color, chunk)
                   for _ in range(self.threads)]
        # Waiting on every worker is the barrier between the phases.
        for future in futures:
            future.result()

    def sweep(self, chunks):
        """Update black then red cells once; return the sum of |change|."""
        chunks = self.chunks_for(chunks)
        self._phase(BLACK, chunks.black)
        self._phase(RED, chunks.red)
        # Row order makes the sum independent of the schedule.
        diff = 0.0
        for color in (BLACK, RED):
            for value in self._partials[color, 1:-1].tolist():
                diff += value
        return diff

    def converged(self, diff, tol):
        return diff / self.grid.n ** 2 < tol

    def solve(self, chunks, tol, max_sweeps):
        if not tol > 0:
            raise ConfigurationError(f'tol must be positive, got {tol!r}')
        max_sweeps = check_count('max_sweeps', max_sweeps)
        chunks = self.chunks_for(chunks)
        started = time.perf_counter()
        sweeps = 0
        diff = float('inf')
        while sweeps < max_sweeps:
            diff = self.sweep(chunks)
            sweeps += 1
            if self.converged(diff, tol):
                break
        elapsed = time.perf_counter() - started
        return SolveResult(sweeps, diff, elapsed, tuple(chunks))

    def _sweep_target(self, point):
        return self.sweep(point)

    def solve_tuned_entire(self, tuning, tol, max_sweeps, **session_kwargs):
        """Tune the chunks on extra sweeps first, then solve with them."""
        session = tuning.new_session(**session_kwargs)
        final = session.entire_exec_runtime(self._sweep_target, None)
        result = self.solve(final, tol, max_sweeps)
        logger.info('tuned chunks %s after %s extra sweeps', result.chunks,
                    session.target_execs)
        return result._replace(target_execs=session.target_execs)

    def solve_tuned_single(self, tuning, tol, max_sweeps, **session_kwargs):
        """Tune the chunks while solving, one tuning step per sweep."""
        if not tol > 0:
            raise ConfigurationError(f'tol must be positive, got {tol!r}')
        max_sweeps = check_count('max_sweeps', max_sweeps)
        session = tuning.new_session(**session_kwargs)
        started = time.perf_counter()
        sweeps = 0
        diff = float('inf')
        while sweeps < max_sweeps:
            diff = session.single_exec_runtime(self._sweep_target, None)
            sweeps += 1
            if self.converged(diff, tol):
                break
        elapsed = time.perf_counter() - started
        if not session.finished:
            logger.info('solver converged before tuning finished')
        n = self.grid.n
        chunks = ChunkConfig(*(min(max(int(v), 1), n) for v in session.point))
        return SolveResult(sweeps, diff, elapsed, tuple(chunks), session.target_execs)


#######################################
# functional forms

def sweep(grid, threads, chunks):
    with RedBlackSolver(grid, threads) as solver:
        return solver.sweep(chunks)


def solve(grid, threads, chunks, tol, max_sweeps):
    with RedBlackSolver(grid, threads) as solver:
        return solver.solve(chunks, tol, max_sweeps)


def solve_tuned_entire(grid, threads, tuning, tol, max_sweeps, **session_kwargs):
    with RedBlackSolver(grid, threads) as solver:
        return solver.solve_tuned_entire(tuning, tol, max_sweeps, **session_kwargs)


def solve_tuned_single(grid, threads, tuning, tol, max_sweeps, **session_kwargs):
    with RedBlackSolver(grid, threads) as solver:
        return solver.solve_tuned_single(tuning, tol, max_sweeps, **session_kwargs)
