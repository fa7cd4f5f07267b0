"""The tuning session.

An Autotuning session hands candidate parameter values to the caller,
measures (or receives) the cost each one produces, and feeds that cost to
its numerical optimizer until the optimizer finishes.  After that it
keeps handing out the final solution at no extra cost.

Two ways of driving it:

* start()/end() around a code section: the elapsed wall-clock time of the
  section is the cost.
* exec(point, cost): the caller computes the cost itself.

entire_exec*() tune to completion against a replica of the target before
the caller's own loop; single_exec*() perform one tuning step per call
from inside the caller's loop.
"""

__all__ = [
    'Autotuning',
    'FakeClock',
    'DEFAULT_SEED',
]


import logging
import math
import time

from ._domain import (
    ConfigurationError, ContractViolationError, UsageError,
    SearchDomain, check_cost, check_count,
)
from ._optimizer import NumericalOptimizer
from .csa import CSA


logger = logging.getLogger(__name__)

DEFAULT_SEED = 42


class FakeClock:
    """A manually advanced clock, for deterministic timing."""

    def __init__(self, now=0.0):
        self.now = float(now)

    def __call__(self):
        return self.now

    def advance(self, seconds):
        if seconds < 0:
            raise ValueError(f'a clock cannot go backwards ({seconds})')
        self.now += seconds


class Autotuning:
    """A tuning session over [lower, upper]^dim.

    The default optimizer is CSA(dim, num_opt, max_iter); use
    Autotuning.with_optimizer() to supply another one.  ignore is the
    number of executions per candidate whose cost is thrown away before
    the one that is fed to the optimizer.

    point_type (int or float) fixes how candidates are rendered.  clock
    returns seconds from a monotonic source.  trace, if given, is called
    as trace(eval_index, point, cost, best_cost) for every fed cost.
    """

    def __init__(self, lower, upper, ignore, dim=1, num_opt=1, max_iter=1, *,
                 seed=DEFAULT_SEED, point_type=int, clock=time.perf_counter,
                 trace=None, optimizer=None):
        if optimizer is None:
            optimizer = CSA(dim, num_opt, max_iter, seed=seed)
        elif not isinstance(optimizer, NumericalOptimizer):
            raise ConfigurationError(f'unsupported optimizer {optimizer!r}')
        if optimizer.is_end:
            raise ConfigurationError('the optimizer has already finished')
        if point_type not in (int, float):
            raise ConfigurationError(f'point_type must be int or float, got {point_type!r}')

        self.domain = SearchDomain(lower, upper, optimizer.dimension)
        if point_type is int:
            # Fail early when no integer fits in the domain.
            self.domain.integer_bounds
        self.optimizer = optimizer
        self.ignore = check_count('ignore', ignore, minimum=0)
        self.point_type = point_type
        self.clock = clock
        self.trace = trace

        self._pending = None
        self._reps_done = 0
        self._timer_start = None
        self._finished = False
        self._final = None
        self._best_cost = math.inf
        self.target_execs = 0
        self.evals = 0

    @classmethod
    def with_optimizer(cls, lower, upper, ignore, optimizer, **kwargs):
        return cls(lower, upper, ignore, optimizer=optimizer, **kwargs)

    def __repr__(self):
        return (f'{type(self).__name__}(domain={self.domain!r}, ignore={self.ignore}, '
                f'optimizer={self.optimizer.describe()!r})')

    # state

    @property
    def dim(self):
        return self.domain.dim

    @property
    def finished(self):
        return self._finished

    @property
    def final_values(self):
        return None if self._final is None else list(self._final)

    @property
    def point(self):
        """The rendered candidate currently in effect."""
        return list(self._current_values())

    @property
    def best_cost(self):
        return self._best_cost

    @property
    def measuring(self):
        return self._timer_start is not None

    # internal implementation

    def _render(self, point):
        return self.domain.render(point, self.point_type)

    def _ensure_started(self):
        if self._pending is not None or self._finished:
            return
        # The optimizer ignores the cost of its first call.
        self._accept_candidate(self.optimizer.run(math.nan))

    def _accept_candidate(self, candidate):
        if self.optimizer.is_end:
            self._finished = True
            self._final = self._render(candidate)
            self._pending = None
            logger.info('tuning finished after %s target executions: %s',
                        self.target_execs, self._final)
        else:
            self._pending = candidate

    def _current_values(self):
        self._ensure_started()
        if self._finished:
            return self._final
        return self._render(self._pending)

    def _write(self, point, values):
        if point is None:
            return list(values)
        if len(point) != len(values):
            raise ContractViolationError(
                f'point buffer has length {len(point)}, expected {len(values)}')
        point[:] = values
        return list(values)

    def _observe(self, cost):
        """Account for one execution of the pending candidate."""
        if self._finished:
            return
        self.target_execs += 1
        if self._reps_done < self.ignore:
            self._reps_done += 1
            return
        self._reps_done = 0

        cost = check_cost(cost)
        values = self._render(self._pending)
        self.evals += 1
        if cost < self._best_cost:
            self._best_cost = cost
        logger.debug('eval %s: point=%s cost=%r', self.evals, values, cost)
        if self.trace is not None:
            self.trace(self.evals, values, cost, self._best_cost)
        self._accept_candidate(self.optimizer.run(cost))
        logger.debug('%s', self.optimizer.describe())

    # base methods

    def start(self, point=None):
        """Open a measured section and return the values to use in it.

        If point is a mutable sequence of length dim, the values are also
        written into it.
        """
        if self._timer_start is not None:
            raise UsageError('start() called twice without end()')
        values = self._write(point, self._current_values())
        self._timer_start = self.clock()
        return values

    def end(self):
        """Close the measured section; its elapsed time is the cost."""
        if self._timer_start is None:
            raise UsageError('end() called without start()')
        elapsed = self.clock() - self._timer_start
        self._timer_start = None
        self._observe(max(elapsed, 0.0))

    def _abort(self):
        # A failed execution closes its section as a rejected sample.
        self._timer_start = None
        self._observe(math.inf)

    def exec(self, point, cost):
        """Feed the cost of the last returned values; return the next ones.

        The cost given with the first call is ignored.
        """
        if self._timer_start is not None:
            raise UsageError('exec() called inside a measured section')
        if self._pending is None and not self._finished:
            self._ensure_started()
        else:
            self._observe(cost)
        return self._write(point, self._current_values())

    # pre-programmed methods

    def entire_exec_runtime(self, target, point, *args, **kwargs):
        """Tune to completion, timing target(values, *args, **kwargs)."""
        while not self._finished:
            values = self.start(point)
            try:
                target(values, *args, **kwargs)
            except Exception:
                logger.warning('target failed; candidate %s rejected', values)
                self._abort()
                raise
            self.end()
        return self._write(point, self._final)

    def single_exec_runtime(self, target, point, *args, **kwargs):
        """Run target once, as one tuning step; return its result."""
        if self._finished:
            values = self._write(point, self._final)
            return target(values, *args, **kwargs)
        values = self.start(point)
        try:
            result = target(values, *args, **kwargs)
        except Exception:
            logger.warning('target failed; candidate %s rejected', values)
            self._abort()
            raise
        self.end()
        return result

    def entire_exec(self, target, point, *args, **kwargs):
        """Tune to completion; target returns the cost itself."""
        while not self._finished:
            self.single_exec(target, point, *args, **kwargs)
        return self._write(point, self._final)

    def single_exec(self, target, point, *args, **kwargs):
        """Run target once; its return value is the cost of this step."""
        if self._timer_start is not None:
            raise UsageError('single_exec() called inside a measured section')
        values = self._write(point, self._current_values())
        if self._finished:
            return target(values, *args, **kwargs)
        try:
            cost = target(values, *args, **kwargs)
        except Exception:
            logger.warning('target failed; candidate %s rejected', values)
            self._observe(math.inf)
            raise
        self._observe(cost)
        return cost
