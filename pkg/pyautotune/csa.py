"""Coupled Simulated Annealing.

num_opt annealers run side by side.  Each iteration every annealer draws
a Cauchy-distributed probe around its current solution; a worse probe is
accepted with a probability that couples all annealers through the
normalization of their current costs.  The acceptance temperature is
steered so that the variance of those probabilities stays near a target,
which balances global exploration (the worst annealers wander) against
local refinement (the best annealers descend).

The optimizer is staged: probes are handed out one per run() call and the
acceptance step happens when the last probe of an iteration has a cost.
"""

__all__ = [
    'CSA',
    'accept_probabilities',
]


import enum
import logging
import math

import numpy as np

from ._domain import check_cost, check_count, random_point, reflect_into_box
from ._optimizer import NumericalOptimizer, check_reset_level


logger = logging.getLogger(__name__)

T_GEN_0 = 0.1
T_ACC_0 = 0.9
VARIANCE_RATIO = 0.99
ACC_HEAT = 1.05
ACC_COOL = 0.95


class Phase(enum.Enum):
    SEEDING = 'seeding'
    PROBING = 'probing'
    FINISHED = 'finished'


def accept_probabilities(costs, tacc):
    """Return the coupled acceptance probability of every annealer.

    A_i = exp((E_i - E_max) / tacc) / sum_j exp((E_j - E_max) / tacc)

    Shifting by E_max keeps every exponent <= 0, so the terms cannot
    overflow and the largest one is exactly 1.
    """
    costs = np.asarray(costs, dtype=float)
    if costs.ndim != 1 or len(costs) < 2:
        raise ValueError('coupled acceptance needs at least 2 annealers; '
                         'use the Metropolis rule for a single one')
    if not tacc > 0:
        raise ValueError(f'tacc must be positive, got {tacc!r}')
    finite = np.isfinite(costs)
    if not finite.any():
        return np.full(len(costs), 1.0 / len(costs))
    energies = np.where(finite, costs, costs[finite].max())
    terms = np.exp((energies - energies.max()) / tacc)
    return terms / terms.sum()


def _variance(probabilities):
    m = len(probabilities)
    return float(np.sum(probabilities ** 2)) / m - 1.0 / m ** 2


class CSA(NumericalOptimizer):
    """Coupled Simulated Annealing over [-1, 1]^dim.

    max_iter counts annealing iterations; the evaluation of the starting
    points is the first one, so exactly max_iter * num_opt costs are
    consumed before is_end.
    """

    def __init__(self, dim, num_opt, max_iter, seed=None, *,
                 tgen0=T_GEN_0, tacc0=T_ACC_0):
        self._dim = check_count('dim', dim)
        self._num_opt = check_count('num_opt', num_opt)
        self._max_iter = check_count('max_iter', max_iter)
        if not (tgen0 > 0 and tacc0 > 0):
            raise ValueError('initial temperatures must be positive')
        self._tgen0 = float(tgen0)
        self._tacc0 = float(tacc0)
        self._rng = np.random.default_rng(seed)
        self._target_variance = (VARIANCE_RATIO * (self._num_opt - 1)
                                 / self._num_opt ** 2)
        self._clear_best()
        self._restart()

    def _clear_best(self):
        self._best_point = None
        self._best_cost = math.inf

    def _restart(self):
        self._current = np.array([random_point(self._rng, self._dim)
                                  for _ in range(self._num_opt)])
        self._current_costs = np.full(self._num_opt, math.inf)
        self._probes = self._current.copy()
        self._probe_costs = np.full(self._num_opt, math.inf)
        self._phase = Phase.SEEDING
        self._reset_schedule()

    def _reset_schedule(self):
        self._iter = 0
        self._cursor = 0
        self._tgen = self._tgen0
        self._tacc = self._tacc0
        self._awaiting_first = True

    # read-only state

    @property
    def num_points(self):
        return self._num_opt

    @property
    def dimension(self):
        return self._dim

    @property
    def max_iter(self):
        return self._max_iter

    @property
    def is_end(self):
        return self._phase is Phase.FINISHED

    @property
    def best_point(self):
        return None if self._best_point is None else self._best_point.copy()

    @property
    def best_cost(self):
        return self._best_cost

    @property
    def iteration(self):
        return self._iter

    @property
    def tgen(self):
        return self._tgen

    @property
    def tacc(self):
        return self._tacc

    @property
    def current_points(self):
        return self._current.copy()

    # the staged machine

    def run(self, cost):
        if self._phase is Phase.FINISHED:
            return self._final_point()
        if self._awaiting_first:
            self._awaiting_first = False
        else:
            self._record(check_cost(cost))
            if self._phase is Phase.FINISHED:
                return self._final_point()
        if self._phase is Phase.SEEDING:
            return self._current[self._cursor].copy()
        return self._probes[self._cursor].copy()

    def _record(self, cost):
        pending = (self._current if self._phase is Phase.SEEDING
                   else self._probes)[self._cursor]
        if cost < self._best_cost:
            self._best_cost = cost
            self._best_point = pending.copy()
        if self._phase is Phase.SEEDING:
            self._current_costs[self._cursor] = cost
        else:
            self._probe_costs[self._cursor] = cost
        self._cursor += 1
        if self._cursor < self._num_opt:
            return

        # The iteration is complete.
        self._cursor = 0
        if self._phase is Phase.SEEDING:
            self._phase = Phase.PROBING
        else:
            self._accept()
        self._iter += 1
        self._tgen = self._tgen0 / (self._iter + 1)
        logger.debug('%s', self.describe())
        if self._iter >= self._max_iter:
            self._phase = Phase.FINISHED
        else:
            self._generate()

    def _generate(self):
        r = self._rng.uniform(size=(self._num_opt, self._dim))
        steps = self._tgen * np.tan(math.pi * (r - 0.5))
        self._probes = reflect_into_box(self._current + steps)
        self._probe_costs = np.full(self._num_opt, math.inf)

    def _accept(self):
        if self._num_opt > 1:
            probabilities = accept_probabilities(self._current_costs, self._tacc)
        else:
            probabilities = None
        for i in range(self._num_opt):
            new = self._probe_costs[i]
            old = self._current_costs[i]
            if not math.isfinite(new):
                continue
            if new <= old:
                accept = True
            else:
                if probabilities is None:
                    chance = math.exp(-(new - old) / self._tacc)
                else:
                    chance = probabilities[i]
                accept = self._rng.uniform() < chance
            if accept:
                self._current[i] = self._probes[i]
                self._current_costs[i] = new
        self._update_tacc(probabilities)

    def _update_tacc(self, probabilities):
        if probabilities is not None and _variance(probabilities) > self._target_variance:
            self._tacc *= ACC_HEAT
        else:
            self._tacc *= ACC_COOL
        # Keep the temperature strictly positive.
        self._tacc = max(self._tacc, np.finfo(float).tiny)

    def _final_point(self):
        if self._best_point is None:
            return self._current[0].copy()
        return self._best_point.copy()

    # resets

    def reset(self, level=0):
        """Reset the optimization.

        0: restart the schedule from the current solutions, keep the best.
        1: draw new current solutions, keep the best.
        2 and up: start over as if freshly constructed.
        """
        level = check_reset_level(level)
        if level == 0:
            seeded = (self._phase is not Phase.SEEDING
                      and np.isfinite(self._current_costs).any())
            self._reset_schedule()
            if seeded:
                self._phase = Phase.PROBING
                self._generate()
            else:
                self._phase = Phase.SEEDING
        else:
            if level >= 2:
                self._clear_best()
            self._restart()
        logger.debug('reset(%s): %s', level, self.describe())

    def describe(self):
        return ('CSA iter=%s/%s tgen=%.6g tacc=%.6g best_cost=%.6g phase=%s'
                % (self._iter, self._max_iter, self._tgen, self._tacc,
                   self._best_cost, self._phase.value))
