"""Radial-temporal kernels of the regular, incoming and outgoing basis fields.

With ``k0 = 1``, the kernel of the ``l`` component of ``|n j m lam>`` is

    c_nj(ct, r) = int_0^inf dk k exp(-k) (2k)^j L^{2j+1}_{n-j-1}(2k) k z_l(kr) exp(-i k ct)

where ``z_l`` is ``j_l`` (regular), ``h^2_l / 2`` (incoming) or ``h^1_l / 2``
(outgoing). The vector prefactors of the full field are not included.

The integrand is entire and exponentially damped, so it is cut off where the
envelope drops below 1e-16 of its peak and integrated with composite
Gauss-Legendre panels fine enough to resolve the oscillation period
``2 pi / (r + |ct|)``.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .basis import check_nj
from .exceptions import DomainError
from .specfun import laguerre, spherical_bessel_j, spherical_bessel_y

KINDS = ("regular", "incoming", "outgoing")
DEFAULT_WINDOW = 100.0
PANEL_NODES = 16
MAX_DERIVATIVE = 4


@dataclass(frozen=True)
class KernelSpec:
    n: int
    j: int
    l: int
    kind: str = "regular"
    r: float = 5.0
    window: float = DEFAULT_WINDOW

    def __post_init__(self):
        check_nj(self.n, self.j)
        if self.l not in (self.j - 1, self.j, self.j + 1):
            raise DomainError(f"l must be one of j-1, j, j+1; got l={self.l} for j={self.j}")
        if self.kind not in KINDS:
            raise DomainError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not (math.isfinite(self.r) and self.r >= 0):
            raise DomainError("radius must be finite and nonnegative")
        if self.kind != "regular" and self.r == 0:
            raise DomainError(f"{self.kind} kernels are irregular at r = 0")
        if self.r > self.window:
            raise DomainError(f"radius {self.r} exceeds the window {self.window}")

    def with_kind(self, kind):
        return KernelSpec(self.n, self.j, self.l, kind, self.r, self.window)

    def with_radius(self, r):
        return KernelSpec(self.n, self.j, self.l, self.kind, r, self.window)


@dataclass(frozen=True)
class RadialTemporalTrace:
    spec: KernelSpec
    times: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __len__(self):
        return self.times.size

    @property
    def magnitude(self):
        return np.abs(self.values)


@lru_cache(maxsize=None)
def _cutoff(n, j):
    # last k where exp(-k)(2k)^(j+2)|L| is still above 1e-16 of its peak
    k = np.linspace(0.0, 60.0 + 8.0 * n, 20001)
    with np.errstate(divide="ignore"):
        log_env = -k + (j + 2) * np.log(2 * k) + np.log(np.abs(laguerre(n - j - 1, 2 * j + 1, 2 * k)) + 1e-300)
    above = np.nonzero(log_env >= log_env.max() - 16 * math.log(10.0))[0]
    return float(k[above[-1] + 1])


@lru_cache(maxsize=64)
def _panel_grid(n, j, omega_bucket):
    kmax = _cutoff(n, j)
    width = min(0.5, math.pi / omega_bucket)
    panels = max(1, math.ceil(kmax / width))
    t, w = np.polynomial.legendre.leggauss(PANEL_NODES)
    edges = np.linspace(0.0, kmax, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _grid_for(spec, ct_abs_max):
    # Bucket the oscillation frequency so nearby evaluations share nodes.
    omega = spec.r + ct_abs_max
    return _panel_grid(spec.n, spec.j, 4.0 * math.ceil((omega + 1.0) / 4.0))


def _spectral_weight(n, j, k):
    return k * np.exp(-k) * (2 * k) ** j * laguerre(n - j - 1, 2 * j + 1, 2 * k) * k


def _radial_function(kind, l, x):
    """``j_l``, ``h^2_l / 2`` or ``h^1_l / 2`` at ``x``; ``l = -1`` gives zero."""
    if l < 0:
        return np.zeros_like(x, dtype=complex)
    jl = spherical_bessel_j(l, x)
    if kind == "regular":
        return jl.astype(complex)
    yl = spherical_bessel_y(l, x)
    return 0.5 * (jl + 1j * yl) if kind == "outgoing" else 0.5 * (jl - 1j * yl)


def _radial_derivative_terms(l, order):
    """Expand ``d^order/dx^order z_l(x)`` as ``{l': coeff}``.

    Uses ``(2l+1) z_l' = l z_{l-1} - (l+1) z_{l+1}``, valid for ``j_l``,
    ``y_l`` and both Hankel functions.
    """
    terms = {l: 1.0}
    for _ in range(order):
        nxt = {}
        for ll, coeff in terms.items():
            if ll > 0:
                nxt[ll - 1] = nxt.get(ll - 1, 0.0) + coeff * ll / (2 * ll + 1)
            nxt[ll + 1] = nxt.get(ll + 1, 0.0) - coeff * (ll + 1) / (2 * ll + 1)
        terms = nxt
    return terms


def _check_window(spec, ct):
    ct = np.asarray(ct, dtype=float)
    if not np.all(np.isfinite(ct)):
        raise DomainError("ct must be finite")
    if ct.size and np.max(np.abs(ct)) > spec.window:
        raise DomainError(f"|ct| exceeds the window {spec.window}")
    return ct


def _integrand(spec, k, time_order=0, radial_order=0):
    base = _spectral_weight(spec.n, spec.j, k)
    x = k * spec.r
    if radial_order == 0:
        if spec.kind != "regular":
            # k = 0 never occurs on Gauss nodes; guard anyway for direct callers
            x = np.maximum(x, np.finfo(float).tiny)
        radial = _radial_function(spec.kind, spec.l, x)
    else:
        radial = np.zeros_like(k, dtype=complex)
        for ll, coeff in _radial_derivative_terms(spec.l, radial_order).items():
            if spec.kind != "regular":
                x = np.maximum(x, np.finfo(float).tiny)
            radial = radial + coeff * _radial_function(spec.kind, ll, x)
        radial = radial * k**radial_order
    out = base * radial
    if time_order:
        out = out * (-1j * k) ** time_order
    return out


def _evaluate(spec, ct, time_order=0, radial_order=0):
    ct = _check_window(spec, ct)
    if ct.size == 0:
        return np.zeros(ct.shape, dtype=complex)
    nodes, weights = _grid_for(spec, float(np.max(np.abs(ct))))
    g = weights * _integrand(spec, nodes, time_order, radial_order)
    flat = ct.ravel()
    out = np.empty(flat.shape, dtype=complex)
    # chunk the phase matrix to bound memory
    step = max(1, 4_000_000 // nodes.size)
    for start in range(0, flat.size, step):
        block = flat[start:start + step]
        out[start:start + step] = np.exp(-1j * np.outer(block, nodes)) @ g
    return out.reshape(ct.shape)


def radial_kernel(spec, ct):
    """Kernel value ``c_nj(ct, r)`` for the kind and ``l`` in ``spec``.

    ``ct`` may be a scalar or an array (meters).
    """
    out = _evaluate(spec, ct)
    return complex(out) if out.ndim == 0 else out


def wavelet_scan(spec, ct_grid):
    """Evaluate the kernel over a sorted grid of ``ct`` values."""
    ct_grid = np.asarray(ct_grid, dtype=float).ravel()
    if ct_grid.size > 1 and np.any(np.diff(ct_grid) < 0):
        raise DomainError("ct grid must be sorted")
    values = _evaluate(spec, ct_grid)
    times = ct_grid.copy()
    times.setflags(write=False)
    values.setflags(write=False)
    return RadialTemporalTrace(spec, times, values)


def smoothness_probe(spec, ct, order=1, variable="time"):
    """Derivative of the kernel with respect to ``ct`` or ``r``.

    Time derivatives bring down ``(-i k)^order`` under the integral; radial
    derivatives come from the three-term derivative recursion of the
    spherical Bessel family, each step adding a factor ``k``.
    """
    if not isinstance(order, int) or order < 0 or order > MAX_DERIVATIVE:
        raise DomainError(f"derivative order must be an integer in [0, {MAX_DERIVATIVE}]")
    if variable == "time":
        out = _evaluate(spec, ct, time_order=order)
    elif variable == "radius":
        out = _evaluate(spec, ct, radial_order=order)
    else:
        raise DomainError(f"variable must be 'time' or 'radius', got {variable!r}")
    return complex(out) if out.ndim == 0 else out


def integrand_at(spec, k):
    """Raw integrand ``F(k) z_l(kr)`` at ``ct = 0``; used to check behavior near k = 0."""
    return _integrand(spec, np.asarray(k, dtype=float))


def dominant_peaks(trace, count=2):
    """The ``count`` largest strict local maxima of ``|values|``, sorted by ct."""
    mag = trace.magnitude
    if mag.size < 3:
        return np.array([])
    inner = np.nonzero((mag[1:-1] > mag[:-2]) & (mag[1:-1] >= mag[2:]))[0] + 1
    top = inner[np.argsort(mag[inner])[::-1][:count]]
    return np.sort(trace.times[top])


def ct_grid(ct_min, ct_max, step):
    """Inclusive grid ``ct_min + i*step``; empty when ``ct_min > ct_max``."""
    if step <= 0:
        raise DomainError("ct step must be positive")
    if ct_min > ct_max:
        return np.zeros(0)
    count = int(math.floor((ct_max - ct_min) / step + 1e-9)) + 1
    return ct_min + step * np.arange(count)
