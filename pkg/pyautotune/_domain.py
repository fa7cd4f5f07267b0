__all__ = [
    # errors
    'AutotuneError',
    'ConfigurationError',
    'ContractViolationError',
    'OutOfDomainError',
    'UsageError',
    'MeasurementError',
    # domain
    'SearchDomain',
    'check_point',
    'check_cost',
    'check_count',
    'random_point',
    'reflect_into_box',
]


#######################################
# errors

class AutotuneError(Exception):
    pass


class ConfigurationError(AutotuneError, ValueError):
    pass


class ContractViolationError(AutotuneError, ValueError):
    pass


class OutOfDomainError(AutotuneError, ValueError):

    def __init__(self, value, lower, upper):
        super().__init__(
            f'value {value!r} outside of the domain [{lower}, {upper}]',
        )
        self.value = value
        self.lower = lower
        self.upper = upper


class UsageError(AutotuneError, RuntimeError):
    pass


class MeasurementError(AutotuneError, ArithmeticError):
    pass


#######################################
# the normalized search domain

from collections import namedtuple
import logging
import math

import numpy as np


logger = logging.getLogger(__name__)


class SearchDomain(namedtuple('SearchDomain', 'lower upper dim')):
    """The box [lower, upper]^dim in user units.

    Optimizers work in the normalized box [-1, 1]^dim; the domain maps
    candidates to user units and back.  The same scalar bounds apply
    to every dimension.
    """
    __slots__ = ()

    def __new__(cls, lower, upper, dim=1):
        try:
            lower = float(lower)
            upper = float(upper)
        except (TypeError, ValueError):
            raise ConfigurationError(f'bounds must be numbers, got {lower!r}, {upper!r}')
        if not (math.isfinite(lower) and math.isfinite(upper)):
            raise ConfigurationError(f'bounds must be finite, got [{lower}, {upper}]')
        if not lower < upper:
            raise ConfigurationError(f'empty domain: lower ({lower}) must be < upper ({upper})')
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            raise ConfigurationError(f'dim must be a positive integer, got {dim!r}')
        return super().__new__(cls, lower, upper, dim)

    @property
    def width(self):
        return self.upper - self.lower

    @property
    def integer_bounds(self):
        """The (low, high) integer range inside the domain."""
        low = math.ceil(self.lower)
        high = math.floor(self.upper)
        if high < low:
            raise ConfigurationError(
                f'no integer inside the domain [{self.lower}, {self.upper}]')
        return low, high

    def to_user(self, point):
        point = check_point(point, self.dim)
        values = self.lower + (point + 1.0) / 2.0 * self.width
        # Guard against rounding just past the bounds.
        return np.clip(values, self.lower, self.upper)

    def from_user(self, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (self.dim,):
            raise ContractViolationError(
                f'expected {self.dim} values, got shape {values.shape}')
        for value in values:
            if not self.lower <= value <= self.upper:
                raise OutOfDomainError(float(value), self.lower, self.upper)
        return 2.0 * (values - self.lower) / self.width - 1.0

    def to_integer_values(self, values):
        low, high = self.integer_bounds
        result = []
        for value in values:
            # half away from zero
            magnitude = abs(float(value))
            whole = math.floor(magnitude)
            if magnitude - whole >= 0.5:
                whole += 1
            rounded = int(math.copysign(whole, value))
            result.append(min(max(rounded, low), high))
        return result

    def render(self, point, point_type=int):
        """Return the point in user units as a list of point_type values."""
        values = self.to_user(point)
        if point_type is int:
            return self.to_integer_values(values)
        return [point_type(v) for v in values]


def check_point(point, dim):
    point = np.asarray(point, dtype=float)
    if point.shape != (dim,):
        raise ContractViolationError(
            f'point has shape {point.shape}, expected ({dim},)')
    return point


def check_cost(cost, *, strict=False):
    """Return the cost as a float, or +inf when it is not finite.

    +inf is the rejection value and passes without a warning.
    """
    try:
        cost = float(cost)
    except (TypeError, ValueError):
        raise MeasurementError(f'cost must be a number, got {cost!r}')
    if math.isfinite(cost):
        return cost
    if strict:
        raise MeasurementError(f'non-finite cost {cost!r}')
    if cost == math.inf:
        return cost
    logger.warning('non-finite cost %r treated as a rejected candidate', cost)
    return math.inf


def random_point(rng, dim):
    return rng.uniform(-1.0, 1.0, size=dim)


def reflect_into_box(point):
    """Fold coordinates into [-1, 1] by periodic reflection at the walls."""
    folded = np.mod(np.asarray(point, dtype=float) + 1.0, 4.0)
    folded = np.where(folded > 2.0, 4.0 - folded, folded)
    return folded - 1.0


def check_count(name, value, minimum=1):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < minimum:
        raise ConfigurationError(f'{name} must be an integer >= {minimum}, got {value!r}')
    return int(value)
