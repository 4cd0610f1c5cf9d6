"""Expansion of spectra in the countable basis and back.

``project`` computes ``f_{njml} = int dk k c_nj(k) f_{jml}(k)`` per channel,
``reconstruct`` sums the basis functions back up. Together they realize the
map between the field space and square-summable sequences.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_positive_float, check_positive_int, check_spectra
from .basis import BasisIndex, ScaleConfig, c_multipolar
from .exceptions import DomainError
from .hilbert import DEFAULT_ORDER, SpectralChannel, _channel_map, _scale_for, gauss_laguerre_rule, photon_number

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoefficientVector:
    """Truncated coefficient sequence ``{f_njml}`` with ``n <= n_max``.

    ``entries`` is ordered by (lam, n, j, m); indices not stored are zero.
    """

    entries: dict = field(repr=False)
    n_max: int
    scale: ScaleConfig

    def __post_init__(self):
        for idx in self.entries:
            BasisIndex.checked(*idx)
            if idx.n > self.n_max:
                raise DomainError(f"index {idx} beyond n_max={self.n_max}")

    def __getitem__(self, index):
        return self.entries.get(BasisIndex(*index), 0j)

    def __len__(self):
        return len(self.entries)

    def indices(self):
        return list(self.entries)

    def norm_squared(self):
        return math.fsum(abs(v) ** 2 for v in self.entries.values())

    def channels(self):
        return sorted({idx.channel for idx in self.entries})


def _sorted_entries(entries):
    return dict(sorted(entries.items(), key=lambda kv: (kv[0].lam, kv[0].n, kv[0].j, kv[0].m)))


def project(f, n_max, rule, scale=None):
    """Coefficients of the spectrum ``f`` (channels sampled on ``rule``).

    Channels with ``j >= n_max`` have no admissible index and are dropped.
    """
    if n_max < 2:
        raise DomainError(f"n_max must be >= 2, got {n_max}")
    scale = _scale_for(rule, scale)
    fm = _channel_map(f, rule)
    entries = {}
    for (j, m, lam) in sorted(fm):
        weighted = rule.weights * fm[(j, m, lam)]
        for n in range(j + 1, n_max + 1):
            c = c_multipolar(n, j, rule.nodes, scale)
            entries[BasisIndex(n, j, m, lam)] = complex(c @ weighted)
    return CoefficientVector(_sorted_entries(entries), n_max, scale)


def reconstruct(coeffs, k_grid):
    """Spectra ``f_jml(k) = sum_n f_njml c_nj(k)`` on ``k_grid``."""
    k_grid = np.asarray(k_grid, dtype=float)
    out = []
    for (j, m, lam) in coeffs.channels():
        values = np.zeros(k_grid.shape, dtype=complex)
        for idx, v in coeffs.entries.items():
            if idx.channel == (j, m, lam):
                values = values + v * c_multipolar(idx.n, j, k_grid, coeffs.scale)
        out.append(SpectralChannel(j, m, lam, k_grid, values))
    return out


def residual(f, coeffs, rule, return_raw=False):
    """Truncation residual ``<f|f> - sum |f_eta|^2``.

    The Bessel inequality makes this nonnegative; values that come out
    slightly negative through quadrature rounding are clamped to zero.
    """
    raw = photon_number(f, rule) - coeffs.norm_squared()
    value = raw
    if raw < 0:
        logger.info("clamping negative truncation residual %.3e to zero", raw)
        value = 0.0
    return (value, raw) if return_raw else value


def dilate(f, alpha):
    """Dilatation ``fbar(q) = alpha f(alpha q)``.

    Accepts a callable, a dict of callables keyed by channel label, a single
    :class:`SpectralChannel` or an iterable of them. Sampled channels on grid
    ``k`` come back on grid ``k / alpha``, which avoids any interpolation.
    """
    alpha = check_positive_float(alpha, "alpha")
    if isinstance(f, SpectralChannel):
        return SpectralChannel(f.j, f.m, f.lam, f.k / alpha, alpha * f.values)
    if callable(f):
        return lambda q: alpha * np.asarray(f(alpha * np.asarray(q, dtype=float)))
    if isinstance(f, dict):
        return {label: dilate(fn, alpha) for label, fn in f.items()}
    return [dilate(ch, alpha) for ch in f]


class CountableBasisTransformer(TransformerMixin, BaseEstimator):
    """Project sampled spectra of one multipolar degree onto the countable basis.

    Rows of ``X`` are spectra ``f_jml(k)`` sampled on ``nodes_``; the output
    columns are the coefficients for ``n = j+1, ..., n_max``. The radial
    functions do not depend on ``m`` or the helicity, so one fitted
    transformer serves every channel with the same ``j``.

    Parameters
    ----------
    j : int, default=1
        Multipolar degree.
    n_max : int, default=40
        Truncation order.
    order : int, default=200
        Gauss-Laguerre order of the sampling grid.
    k0 : float, default=1.0
        Reference wavenumber in 1/m.

    Attributes
    ----------
    nodes_ : ndarray of shape (order,)
        Wavenumbers at which spectra must be sampled.
    weights_ : ndarray of shape (order,)
    components_ : ndarray of shape (n_components_, order)
        ``c_nj`` at the nodes, one row per ``n``.
    n_components_ : int
    """

    def __init__(self, j=1, n_max=40, order=DEFAULT_ORDER, k0=1.0):
        self.j = j
        self.n_max = n_max
        self.order = order
        self.k0 = k0

    def fit(self, X=None, y=None):
        j = check_positive_int(self.j, "j")
        n_max = check_positive_int(self.n_max, "n_max", minimum=j + 1)
        k0 = check_positive_float(self.k0, "k0")
        rule = gauss_laguerre_rule(check_positive_int(self.order, "order", minimum=2), k0)
        scale = ScaleConfig(k0=k0)
        self.nodes_ = np.array(rule.nodes)
        self.weights_ = np.array(rule.weights)
        self.components_ = np.stack([c_multipolar(n, j, rule.nodes, scale) for n in range(j + 1, n_max + 1)])
        self.n_components_ = self.components_.shape[0]
        if X is not None:
            check_spectra(X, self.nodes_.size)
        return self

    def transform(self, X):
        check_is_fitted(self, "components_")
        X = check_spectra(X, self.nodes_.size)
        return X @ (self.components_ * self.weights_).T

    def inverse_transform(self, X):
        check_is_fitted(self, "components_")
        X = check_spectra(X, self.n_components_)
        return X @ self.components_

    def sample(self, fn):
        """Evaluate a callable spectrum on ``nodes_`` (one row)."""
        check_is_fitted(self, "components_")
        return np.asarray(fn(self.nodes_), dtype=complex).reshape(1, -1)
