VERSION = (0, 1, 0)
__version__ = '.'.join(map(str, VERSION))


from ._domain import (  # noqa: E402
    AutotuneError, ConfigurationError, ContractViolationError,
    OutOfDomainError, UsageError, MeasurementError, SearchDomain,
)
from ._optimizer import NumericalOptimizer  # noqa: E402
from .csa import CSA  # noqa: E402
from .neldermead import NelderMead  # noqa: E402
from .autotuning import Autotuning, FakeClock  # noqa: E402
