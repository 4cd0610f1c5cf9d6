"""Input checks shared by the estimator and the CLI."""

import numbers

import numpy as np

from .exceptions import DomainError


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_positive_float(value, name):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a number, got {value!r}") from None
    if not np.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be positive and finite, got {value}")
    return value


def check_spectra(X, n_features, name="X"):
    """Coerce ``X`` to a 2-d complex array with ``n_features`` columns.

    Unlike ``sklearn.utils.check_array`` this accepts complex input, which is
    the normal case for spectra.
    """
    arr = np.asarray(X)
    if arr.dtype == object:
        raise DomainError(f"{name} must be numeric")
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DomainError(f"{name} must be 2-d (n_samples, n_features), got shape {arr.shape}")
    if arr.shape[1] != n_features:
        raise DomainError(f"{name} has {arr.shape[1]} features, expected {n_features}")
    arr = arr.astype(complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains NaN or infinity")
    return arr
