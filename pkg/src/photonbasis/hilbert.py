"""Scalar products and functionals over the measure ``int dk k``.

Spectra are sampled on the nodes of a Gauss-Laguerre rule in the variable
``x = 2k/k0``. The rule's weights are folded so that

    sum_i weights[i] * h(nodes[i])  ~=  int_0^inf dk k h(k)

exactly whenever ``h(k) exp(2k/k0)`` is a polynomial of degree below
``2*order - 1``, which covers every product of two basis functions with
``n < order``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .basis import BasisIndex, ScaleConfig, c_multipolar, check_nj
from .exceptions import DomainError, GridMismatchError
from .specfun import LOG_FACTORIAL, laguerre

MIN_ORDER = 2
MAX_ORDER = 512
DEFAULT_ORDER = 200
FACTORIAL_FLOAT_CAP = 170


def _scaled_laguerre_tail(order, x):
    """Return ``(L_{N-1}, L_N, L_{N+1})`` at ``x`` sharing one scale, and its log."""
    older = np.zeros_like(x)
    prev = np.ones_like(x)
    cur = 1.0 - x
    log_scale = np.zeros_like(x)
    for k in range(1, order + 1):
        older, prev, cur = prev, cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
        big = np.abs(cur) > 1e100
        if np.any(big):
            shrink = np.where(big, 1e-100, 1.0)
            older = older * shrink
            prev = prev * shrink
            cur = cur * shrink
            log_scale = log_scale + np.where(big, 100 * math.log(10.0), 0.0)
    return older, prev, cur, log_scale


def _golub_welsch_nodes(order):
    i = np.arange(order, dtype=float)
    diag = 2.0 * i + 1.0
    offdiag = np.arange(1, order, dtype=float)
    x = eigh_tridiagonal(diag, offdiag, eigvals_only=True)
    # Eigenvalues carry absolute error ~ eps * ||J||, large relative to the
    # smallest nodes; polish with Newton on L_N in extended precision.
    x = x.astype(np.longdouble)
    for _ in range(4):
        l_nm1, l_n, _, _ = _scaled_laguerre_tail(order, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = x / (order * (1.0 - l_nm1 / l_n))
        x = x - np.where(l_n == 0, 0.0, step)
    return np.sort(x)


def _log_weights(order, x):
    # Christoffel function w_i = 1 / sum_{k<N} L_k(x_i)^2. Unlike the closed
    # forms in L_{N+1} or L_N', it is flat near the nodes, so residual node
    # error does not leak into the weights.
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    total = np.ones_like(x)
    log_scale = np.zeros_like(x)
    for k in range(order - 1):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
        total = total + cur * cur
        big = np.abs(cur) > 1e100
        if np.any(big):
            shrink = np.where(big, 1e-100, 1.0)
            prev = prev * shrink
            cur = cur * shrink
            total = total * shrink * shrink
            log_scale = log_scale + np.where(big, 200 * math.log(10.0), 0.0)
    return -(np.log(total) + log_scale)


@dataclass(frozen=True)
class QuadratureRule:
    """Folded Gauss-Laguerre rule for ``int dk k (.)`` at reference wavenumber ``k0``.

    Attributes
    ----------
    order : int
    k0 : float
    x_nodes, x_log_weights : numpy.ndarray
        Plain Gauss-Laguerre rule for ``int dx exp(-x) (.)``, weights in logs
        because the largest nodes have weights below the double range.
    nodes : numpy.ndarray
        Wavenumbers ``k = k0 x / 2`` (1/m), strictly positive and increasing.
    weights : numpy.ndarray
        ``(k0^2/4) x w exp(x)``; positive.
    """

    order: int
    k0: float
    x_nodes: np.ndarray = field(repr=False)
    x_log_weights: np.ndarray = field(repr=False)
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    convention: str = "x = 2k/k0, weight exp(-x), folded onto dk k"

    def moment(self, q):
        """``sum_i w_i x_i^q``, the rule's value for ``int exp(-x) x^q dx``."""
        return float(np.sum(np.exp(self.x_log_weights + q * np.log(self.x_nodes))))

    def integrate(self, values):
        """``int dk k h(k)`` for samples ``h(nodes)``."""
        values = np.asarray(values)
        if values.shape[-1] != self.order:
            raise GridMismatchError(f"expected {self.order} samples, got {values.shape[-1]}")
        return values @ self.weights

    def matches(self, k):
        k = np.asarray(k, dtype=float)
        return k.shape == self.nodes.shape and np.allclose(k, self.nodes, rtol=1e-12, atol=0.0)


_RULE_CACHE = {}


def gauss_laguerre_rule(order=DEFAULT_ORDER, k0=1.0):
    """Build (or fetch from cache) the folded rule of the given order."""
    if not isinstance(order, (int, np.integer)) or not MIN_ORDER <= order <= MAX_ORDER:
        raise DomainError(f"quadrature order must be an integer in [{MIN_ORDER}, {MAX_ORDER}], got {order!r}")
    if not (math.isfinite(k0) and k0 > 0):
        raise DomainError("k0 must be positive and finite")
    order = int(order)
    if order not in _RULE_CACHE:
        x_ext = _golub_welsch_nodes(order)
        logw = _log_weights(order, x_ext).astype(float)
        x = x_ext.astype(float)
        x.setflags(write=False)
        logw.setflags(write=False)
        _RULE_CACHE[order] = (x, logw)
    x, logw = _RULE_CACHE[order]
    nodes = 0.5 * k0 * x
    weights = 0.25 * k0 * k0 * x * np.exp(logw + x)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(order, float(k0), x, logw, nodes, weights)


def _scale_for(rule, scale):
    if scale is None:
        return ScaleConfig(k0=rule.k0)
    if not math.isclose(scale.k0, rule.k0, rel_tol=1e-14):
        raise GridMismatchError(f"scale k0={scale.k0} differs from rule k0={rule.k0}")
    return scale


def check_channel_labels(j, m, lam):
    if j < 1 or abs(m) > j or lam not in (-1, 1):
        raise DomainError(f"inadmissible channel (j, m, lam) = ({j}, {m}, {lam})")


@dataclass(frozen=True)
class SpectralChannel:
    """Samples of one multipolar expansion function ``f_{j m lam}(k)`` (meters)."""

    j: int
    m: int
    lam: int
    k: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_channel_labels(self.j, self.m, self.lam)
        k = np.asarray(self.k, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if k.ndim != 1 or k.shape != values.shape:
            raise DomainError("k and values must be 1-d arrays of equal length")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "values", values)

    @property
    def label(self):
        return (self.j, self.m, self.lam)

    def scaled(self, factor):
        return SpectralChannel(self.j, self.m, self.lam, self.k, factor * self.values)


def _channel_map(channels, rule):
    if isinstance(channels, SpectralChannel):
        channels = [channels]
    out = {}
    for ch in channels:
        if not rule.matches(ch.k):
            raise GridMismatchError(f"channel {ch.label} is not sampled on the order-{rule.order}, k0={rule.k0} rule")
        if ch.label in out:
            out[ch.label] = out[ch.label] + ch.values
        else:
            out[ch.label] = ch.values
    return out


def basis_channel(index, rule, coefficient=1.0, scale=None):
    """Spectrum of ``coefficient * |n j m lam>`` sampled on ``rule``."""
    index = BasisIndex.checked(*index)
    scale = _scale_for(rule, scale)
    return SpectralChannel(index.j, index.m, index.lam, rule.nodes, coefficient * c_multipolar(index.n, index.j, rule.nodes, scale))


def sample_channel(fn, label, rule):
    """Sample a callable spectrum ``fn(k)`` on the rule nodes."""
    j, m, lam = label
    return SpectralChannel(j, m, lam, rule.nodes, np.asarray(fn(rule.nodes), dtype=complex))


def inner_product(f, g, rule):
    """``<f|g> = sum over channels of int dk k conj(f) g``.

    Channels present in only one argument contribute exactly zero.
    """
    fm = _channel_map(f, rule)
    gm = _channel_map(g, rule)
    total = 0j
    for label in sorted(fm.keys() & gm.keys()):
        total += complex(rule.integrate(np.conj(fm[label]) * gm[label]))
    return total


def photon_number(f, rule):
    fm = _channel_map(f, rule)
    total = 0.0
    for label in sorted(fm):
        total += float(rule.integrate(np.abs(fm[label]) ** 2))
    return total


def energy(f, rule, scale=None):
    """``sum int dk k (hbar c0 k) |f|^2`` in joules."""
    scale = _scale_for(rule, scale)
    fm = _channel_map(f, rule)
    total = 0.0
    for label in sorted(fm):
        total += float(rule.integrate(rule.nodes * np.abs(fm[label]) ** 2))
    return scale.hbar * scale.c0 * total


def _check_oracle_args(alpha, *ss):
    for v in (alpha,) + ss:
        if v < 0:
            raise DomainError("oracle arguments must be nonnegative")
    if max(ss) + alpha > FACTORIAL_FLOAT_CAP:
        raise DomainError(f"s + alpha exceeds factorial cap {FACTORIAL_FLOAT_CAP}")


def laguerre_overlap_oracle(alpha, s, s_bar):
    """Closed form of ``int exp(-x) x^alpha L^alpha_s L^alpha_sbar dx``."""
    _check_oracle_args(alpha, s, s_bar)
    if s != s_bar:
        return 0.0
    return float(math.perm(s + alpha, alpha))


def laguerre_energy_oracle(alpha, s):
    """Closed form of ``int exp(-x) x^(alpha+1) [L^alpha_s]^2 dx``."""
    _check_oracle_args(alpha, s)
    return float(math.perm(s + alpha, alpha) * (2 * s + alpha + 1))


def laguerre_moment_quadrature(alpha, s, s_bar, rule, extra_power=0):
    """Rule value of ``int exp(-x) x^(alpha+extra_power) L^alpha_s L^alpha_sbar dx``."""
    x = rule.x_nodes
    w = np.exp(rule.x_log_weights + (alpha + extra_power) * np.log(x))
    return float(np.sum(w * laguerre(s, alpha, x) * laguerre(s_bar, alpha, x)))


def radial_gram(j, n_max, rule, scale=None):
    """Matrix ``int dk k c_nj c_n'j`` for ``n, n' = j+1 .. n_max``."""
    check_nj(j + 1, j)
    scale = _scale_for(rule, scale)
    ns = list(range(j + 1, n_max + 1))
    if not ns:
        return np.zeros((0, 0))
    c = np.stack([c_multipolar(n, j, rule.nodes, scale) for n in ns])
    g = (c * rule.weights) @ c.T
    # BLAS blocking can differ in the last bit between (a, b) and (b, a)
    return 0.5 * (g + g.T)


def gram_matrix(indices, rule, scale=None):
    """Gram matrix of the basis vectors in ``indices`` (real and symmetric).

    Entries across different (j, m, lam) channels are exact zeros; within a
    channel they come from the per-j radial Gram matrix.
    """
    indices = [BasisIndex.checked(*i) for i in indices]
    size = len(indices)
    out = np.zeros((size, size))
    if not size:
        return out
    radial = {}
    for j in sorted({i.j for i in indices}):
        n_top = max(i.n for i in indices if i.j == j)
        radial[j] = radial_gram(j, n_top, rule, scale)
    by_channel = {}
    for pos, idx in enumerate(indices):
        by_channel.setdefault(idx.channel, []).append(pos)
    for channel, positions in by_channel.items():
        j = channel[0]
        rows = np.array([indices[p].n - j - 1 for p in positions])
        out[np.ix_(positions, positions)] = radial[j][np.ix_(rows, rows)]
    return out
