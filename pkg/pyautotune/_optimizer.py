__all__ = [
    'NumericalOptimizer',
    'check_reset_level',
]


import abc

from ._domain import ContractViolationError


class NumericalOptimizer(abc.ABC):
    """A staged (ask/tell) minimizer over the normalized box [-1, 1]^dim.

    The optimizer never calls a cost function.  Each run() call hands in
    the cost of the previously returned candidate and gets the next
    candidate back; the cost passed to the very first call is ignored.
    Once is_end is true, run() returns the best point found on every
    call.
    """

    @abc.abstractmethod
    def run(self, cost):
        """Consume the cost of the last candidate and return the next one."""

    @property
    @abc.abstractmethod
    def num_points(self):
        """The number of solutions the optimizer works with."""

    @property
    @abc.abstractmethod
    def dimension(self):
        """The length of every candidate."""

    @property
    @abc.abstractmethod
    def is_end(self):
        """True once the optimization has finished."""

    @property
    @abc.abstractmethod
    def best_point(self):
        """The best candidate seen so far (None before any cost)."""

    @property
    @abc.abstractmethod
    def best_cost(self):
        """The cost of best_point (+inf before any cost)."""

    def reset(self, level=0):
        check_reset_level(level)

    def describe(self):
        return f'<{type(self).__name__} dim={self.dimension} end={self.is_end}>'

    def __repr__(self):
        return self.describe()


def check_reset_level(level):
    if isinstance(level, bool) or not isinstance(level, int) or level < 0:
        raise ContractViolationError(f'reset level must be a non-negative integer, got {level!r}')
    return level
