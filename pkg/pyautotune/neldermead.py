"""Nelder-Mead downhill simplex, driven one cost at a time."""

__all__ = [
    'NelderMead',
]


import enum
import logging
import math

import numpy as np

from ._domain import ConfigurationError, check_cost, check_count, random_point
from ._optimizer import NumericalOptimizer, check_reset_level


logger = logging.getLogger(__name__)

ALPHA = 1.0    # reflection
GAMMA = 2.0    # expansion
BETA = 0.5     # contraction
SIGMA = 0.5    # shrink
INITIAL_STEP = 0.5
DEGENERATE_SPREAD = 1e-15


class Stage(enum.Enum):
    EVAL_INITIAL = 'init'
    AWAIT_REFLECT = 'reflect'
    AWAIT_EXPAND = 'expand'
    AWAIT_CONTRACT = 'contract'
    AWAIT_SHRINK = 'shrink'
    FINISHED = 'finished'


def initial_simplex(start, step=INITIAL_STEP):
    """Return dim+1 vertices: start plus one step along every axis.

    A step that leaves the box is reflected at the upper wall; if the
    reflection lands back on the start, the step is taken downwards.
    """
    start = np.asarray(start, dtype=float)
    dim = len(start)
    vertices = np.tile(start, (dim + 1, 1))
    for k in range(dim):
        moved = start[k] + step
        if moved > 1.0:
            moved = 2.0 - moved
            if moved == start[k]:
                moved = start[k] - step
        vertices[k + 1, k] = moved
    return vertices


def clamp(point):
    return np.clip(point, -1.0, 1.0)


class NelderMead(NumericalOptimizer):
    """Nelder-Mead over [-1, 1]^dim.

    The run stops when the sample standard deviation of the vertex costs
    drops below error, or once max_iter costs have been consumed
    (max_iter=0 disables that limit).  Proposals that leave the box are
    clamped onto it.
    """

    def __init__(self, dim, error, max_iter=0, seed=None):
        self._dim = check_count('dim', dim)
        try:
            error = float(error)
        except (TypeError, ValueError):
            raise ConfigurationError(f'error must be a number, got {error!r}')
        if not error > 0:
            raise ConfigurationError(f'error must be positive, got {error!r}')
        self._error = error
        self._max_iter = check_count('max_iter', max_iter, minimum=0)
        self._rng = np.random.default_rng(seed)
        self._clear_best()
        self._restart(initial_simplex(random_point(self._rng, self._dim)))

    def _clear_best(self):
        self._best_point = None
        self._best_cost = math.inf

    def _restart(self, vertices):
        self._vertices = np.array(vertices, dtype=float)
        self._costs = np.full(self._dim + 1, math.inf)
        self._evals = 0
        self._stage = Stage.EVAL_INITIAL
        self._index = 0
        self._pending = self._vertices[0].copy()
        self._awaiting_first = True

    # read-only state

    @property
    def num_points(self):
        return self._dim + 1

    @property
    def dimension(self):
        return self._dim

    @property
    def error(self):
        return self._error

    @property
    def max_iter(self):
        return self._max_iter

    @property
    def evals(self):
        return self._evals

    @property
    def stage(self):
        return self._stage

    @property
    def is_end(self):
        return self._stage is Stage.FINISHED

    @property
    def best_point(self):
        return None if self._best_point is None else self._best_point.copy()

    @property
    def best_cost(self):
        return self._best_cost

    @property
    def vertices(self):
        return self._vertices.copy()

    @property
    def costs(self):
        return self._costs.copy()

    # the staged machine

    def run(self, cost):
        if self._stage is Stage.FINISHED:
            return self._final_point()
        if self._awaiting_first:
            self._awaiting_first = False
            return self._pending.copy()

        cost = check_cost(cost)
        self._evals += 1
        if cost < self._best_cost:
            self._best_cost = cost
            self._best_point = self._pending.copy()
        self._advance(cost)
        if (self._stage is not Stage.FINISHED
                and self._max_iter and self._evals >= self._max_iter):
            logger.debug('max_iter (%s) evaluations reached', self._max_iter)
            self._stage = Stage.FINISHED
        if self._stage is Stage.FINISHED:
            return self._final_point()
        return self._pending.copy()

    def _advance(self, cost):
        stage = self._stage
        if stage is Stage.EVAL_INITIAL:
            self._costs[self._index] = cost
            self._index += 1
            if self._index <= self._dim:
                self._pending = self._vertices[self._index].copy()
            else:
                self._begin_iteration()
        elif stage is Stage.AWAIT_REFLECT:
            self._reflected, self._reflected_cost = self._pending, cost
            best, second_worst, worst = (self._costs[self._order[0]],
                                         self._costs[self._order[-2]],
                                         self._costs[self._order[-1]])
            if cost < best:
                self._propose(Stage.AWAIT_EXPAND, clamp(
                    self._centroid + GAMMA * (self._reflected - self._centroid)))
            elif cost < second_worst:
                self._replace_worst(self._reflected, cost)
            else:
                self._outside = cost < worst
                if self._outside:
                    toward = self._reflected
                else:
                    toward = self._vertices[self._order[-1]]
                self._propose(Stage.AWAIT_CONTRACT, clamp(
                    self._centroid + BETA * (toward - self._centroid)))
        elif stage is Stage.AWAIT_EXPAND:
            if cost < self._reflected_cost:
                self._replace_worst(self._pending, cost)
            else:
                self._replace_worst(self._reflected, self._reflected_cost)
        elif stage is Stage.AWAIT_CONTRACT:
            if self._outside:
                improved = cost <= self._reflected_cost
            else:
                improved = cost < self._costs[self._order[-1]]
            if improved:
                self._replace_worst(self._pending, cost)
            else:
                self._start_shrink()
        elif stage is Stage.AWAIT_SHRINK:
            self._costs[self._shrunk[self._index]] = cost
            self._index += 1
            if self._index < len(self._shrunk):
                self._pending = self._vertices[self._shrunk[self._index]].copy()
            else:
                self._begin_iteration()
        else:
            raise NotImplementedError(stage)

    def _propose(self, stage, point):
        self._stage = stage
        self._pending = point

    def _replace_worst(self, point, cost):
        worst = self._order[-1]
        self._vertices[worst] = point
        self._costs[worst] = cost
        self._begin_iteration()

    def _begin_iteration(self):
        self._order = np.argsort(self._costs, kind='stable')
        if np.isfinite(self._costs).all():
            spread = float(np.std(self._costs, ddof=1))
            if spread < self._error:
                logger.debug('cost spread %.3g below error %.3g', spread, self._error)
                self._stage = Stage.FINISHED
                return
            if self._costs.max() - self._costs.min() <= DEGENERATE_SPREAD:
                self._start_shrink()
                return
        worst = self._vertices[self._order[-1]]
        self._centroid = self._vertices[self._order[:-1]].mean(axis=0)
        self._propose(Stage.AWAIT_REFLECT, clamp(
            self._centroid + ALPHA * (self._centroid - worst)))

    def _start_shrink(self):
        best = self._vertices[self._order[0]]
        self._shrunk = self._order[1:]
        for idx in self._shrunk:
            self._vertices[idx] = best + SIGMA * (self._vertices[idx] - best)
        self._index = 0
        self._propose(Stage.AWAIT_SHRINK, self._vertices[self._shrunk[0]].copy())

    def _final_point(self):
        if self._best_point is None:
            return self._vertices[0].copy()
        return self._best_point.copy()

    # resets

    def reset(self, level=0):
        """Reset the optimization.

        0: re-evaluate the current simplex, keep the best.
        1: start from a new random simplex, keep the best.
        2 and up: start over as if freshly constructed.
        """
        level = check_reset_level(level)
        if level == 0:
            self._restart(self._vertices)
        else:
            if level >= 2:
                self._clear_best()
            self._restart(initial_simplex(random_point(self._rng, self._dim)))
        logger.debug('reset(%s): %s', level, self.describe())

    def describe(self):
        vertices = ', '.join(
            '[%s]=%.6g' % (' '.join('%.6g' % c for c in v), f)
            for v, f in zip(self._vertices, self._costs))
        return ('NelderMead stage=%s evals=%s best_cost=%.6g vertices: %s'
                % (self._stage.value, self._evals, self._best_cost, vertices))
