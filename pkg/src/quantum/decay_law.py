import numpy as np

from src.errors import DomainError
from src.timing.time_models import TimeModel, laplace_transform


def survival_probability(T: float, model: TimeModel, t: float) -> float:
    """
    E[exp(-theta / T)]: the exponential decay law averaged over microscopic time.

    Poisson time with exponential increments gives exp(-t / (T + tau)), so the
    observed lifetime is T + tau.
    """
    if not T > 0:
        raise DomainError(f"lifetime T must be positive, got {T}")
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    p = laplace_transform(model, 1.0 / T, t)
    if not np.isfinite(p):
        raise DomainError(f"Laplace transform diverges for T={T}, t={t}")
    return p


def effective_lifetime(T: float, model: TimeModel, t: float) -> float:
    """Lifetime an observer would fit from the survival probability at time t."""
    if not t > 0:
        raise DomainError(f"effective lifetime needs t > 0, got {t}")
    return -t / np.log(survival_probability(T, model, t))
