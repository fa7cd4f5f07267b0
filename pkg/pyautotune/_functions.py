__all__ = [
    'FUNCTIONS',
    'sphere',
    'rosenbrock',
    'rastrigin',
]


import numpy as np


def sphere(x):
    x = np.asarray(x, dtype=float)
    return float(np.sum(x ** 2))


def rosenbrock(x):
    x = np.asarray(x, dtype=float)
    if len(x) < 2:
        return float((1.0 - x[0]) ** 2)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    return float(10.0 * len(x) + np.sum(x ** 2 - 10.0 * np.cos(2.0 * np.pi * x)))


FUNCTIONS = {
    'sphere': sphere,
    'rosenbrock': rosenbrock,
    'rastrigin': rastrigin,
}
