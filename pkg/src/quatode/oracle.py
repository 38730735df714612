"""Independent check on every closed form: fixed-step RK4 integration of the
realified first-order system dy/dx = M y.

Deliberately boring: no adaptivity, no dense output, interval capped so
exponential growth cannot overflow silently.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError

#: integration span cap; growth rates in the examples stay representable
MAX_SPAN = 10.0


@dataclass
class IntegratorConfig:
    step: float = 1e-4
    method: str = "RK4"

    def __post_init__(self):
        if not (0.0 < self.step <= 1e-2):
            raise DomainError("step size must lie in (0, 1e-2]")
        if self.method != "RK4":
            raise DomainError("only the classical RK4 method is available")


def _step_matrix(m, h):
    # For a constant-coefficient linear system the four RK4 stages collapse
    # to one fixed matrix; applying it per step is the same method.
    n = m.shape[0]
    k1 = m
    k2 = m @ (np.eye(n) + 0.5 * h * k1)
    k3 = m @ (np.eye(n) + 0.5 * h * k2)
    k4 = m @ (np.eye(n) + h * k3)
    return np.eye(n) + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(m, y0, x0, x1, cfg=None):
    """State at x1 of dy/dx = M y starting from y(x0) = y0."""
    cfg = cfg if cfg is not None else IntegratorConfig()
    m = np.asarray(m, dtype=float)
    y = np.array(y0, dtype=float).reshape(-1)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] != y.size:
        raise DomainError("matrix and state dimensions disagree")
    span = float(x1) - float(x0)
    if abs(span) > MAX_SPAN:
        raise DomainError("integration interval |x1 - x0| is capped at %g"
                          % MAX_SPAN)
    if span == 0.0:
        return y
    nsteps = max(1, math.ceil(abs(span) / cfg.step))
    step = _step_matrix(m, span / nsteps)
    for _ in range(nsteps):
        y = step @ y
    if not np.all(np.isfinite(y)):
        raise NumericError("integrator state overflowed; shrink the "
                           "integration interval")
    return y


def trajectory(m, y0, x0, xs, cfg=None):
    """States at the (sorted, increasing) sample points ``xs``.

    Integration is cumulative: each sample continues from the previous one,
    so the result is one trajectory, not restarts.
    """
    cfg = cfg if cfg is not None else IntegratorConfig()
    out = []
    y = np.array(y0, dtype=float).reshape(-1)
    at = float(x0)
    for x in xs:
        if x < at:
            raise DomainError("sample points must be non-decreasing and "
                              ">= x0")
        y = integrate(m, y, at, x, cfg)
        at = float(x)
        out.append(y)
    return np.array(out)
