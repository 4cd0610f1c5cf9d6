"""Expansion functions of the countable basis |n j m lam>.

Multipolar form (independent of m and lam)::

    c_nj(k) = sqrt(4 (n-j-1)!/(n+j)!) exp(-k/k0)/k0 (2k/k0)^j L^{2j+1}_{n-j-1}(2k/k0)

Plane-wave form::

    c_njml(p) = sqrt((2j+1)(n-j-1)!/(pi (n+j)!)) exp(-k/k0)/k0 (2k/k0)^j
                L^{2j+1}_{n-j-1}(2k/k0) exp(i m phi) d^j_{m lam}(theta)

Both carry units of meters.
"""

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

import numpy as np
from scipy import constants

from .exceptions import DomainError
from .specfun import LOG_FACTORIAL, laguerre, wigner_small_d


class BasisIndex(NamedTuple):
    """Admissible quadruple ``n >= 2``, ``1 <= j <= n-1``, ``|m| <= j``, ``lam = +-1``."""

    n: int
    j: int
    m: int
    lam: int

    @classmethod
    def checked(cls, n, j, m, lam):
        idx = cls(int(n), int(j), int(m), int(lam))
        idx.validate()
        return idx

    def validate(self):
        check_nj(self.n, self.j)
        if abs(self.m) > self.j:
            raise DomainError(f"|m| <= j violated: m={self.m}, j={self.j}")
        if self.lam not in (-1, 1):
            raise DomainError(f"helicity must be +1 or -1, got {self.lam}")

    @property
    def channel(self):
        return (self.j, self.m, self.lam)

    def label(self):
        return f"{self.n}|{self.j}|{self.m}|{self.lam:+d}"


def check_nj(n, j):
    if n < 2 or j < 1 or j > n - 1:
        raise DomainError(f"inadmissible (n, j) = ({n}, {j}); need n >= 2 and 1 <= j <= n-1")


@dataclass(frozen=True)
class ScaleConfig:
    """Reference wavenumber ``k0`` [1/m] and the SI constants in use."""

    k0: float = 1.0
    hbar: float = constants.hbar
    c0: float = constants.c
    eps0: float = constants.epsilon_0

    def __post_init__(self):
        for name in ("k0", "hbar", "c0", "eps0"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")

    @property
    def energy_quantum(self):
        """``hbar c0 k0`` in joules."""
        return self.hbar * self.c0 * self.k0


DEFAULT_SCALE = ScaleConfig()


@dataclass(frozen=True)
class WaveVector:
    k: float
    theta: float
    phi: float

    def __post_init__(self):
        if not self.k >= 0:
            raise DomainError("wavenumber must be nonnegative")
        if not 0 <= self.theta <= math.pi:
            raise DomainError("theta must lie in [0, pi]")

    @classmethod
    def from_cartesian(cls, p):
        px, py, pz = (float(v) for v in p)
        k = math.sqrt(px * px + py * py + pz * pz)
        theta = math.acos(pz / k) if k > 0 else 0.0
        return cls(k, theta, math.atan2(py, px))

    def cartesian(self):
        st = math.sin(self.theta)
        return np.array([self.k * st * math.cos(self.phi), self.k * st * math.sin(self.phi), self.k * math.cos(self.theta)])


def multipolar_norm(n, j):
    check_nj(n, j)
    lf = LOG_FACTORIAL
    return math.exp(0.5 * (math.log(4.0) + lf[n - j - 1] - lf[n + j]))


def planewave_norm(n, j):
    check_nj(n, j)
    lf = LOG_FACTORIAL
    return math.exp(0.5 * (math.log((2 * j + 1) / math.pi) + lf[n - j - 1] - lf[n + j]))


def _radial_profile(n, j, k, k0):
    # exp(-x/2) x^j L^{2j+1}_{n-j-1}(x) / k0, with x = 2k/k0
    k = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(k)):
        raise DomainError("wavenumber must be finite")
    if np.any(k < 0):
        raise DomainError("wavenumber must be nonnegative")
    x = 2.0 * k / k0
    with np.errstate(divide="ignore", under="ignore", over="ignore", invalid="ignore"):
        env = np.where(
            x < 500.0,
            np.exp(-0.5 * np.minimum(x, 500.0)) * np.minimum(x, 500.0) ** j,
            np.exp(-0.5 * x + j * np.log(np.maximum(x, 1.0))),
        )
        poly = laguerre(n - j - 1, 2 * j + 1, x)
        out = np.where(env == 0.0, 0.0, env * poly)
    return out / k0


def c_multipolar(n, j, k, scale=DEFAULT_SCALE):
    """Multipolar expansion function ``c_nj(k)`` in meters.

    Exactly zero at ``k = 0`` because ``j >= 1``.
    """
    norm = multipolar_norm(n, j)
    out = norm * _radial_profile(n, j, k, scale.k0)
    return out if np.ndim(out) else float(out)


def c_planewave(index, p, scale=DEFAULT_SCALE):
    """Plane-wave expansion function ``c_{n j m lam}(p)`` in meters.

    ``p`` is a :class:`WaveVector` or a tuple ``(k, theta, phi)`` of arrays.
    """
    index = BasisIndex.checked(*index)
    if isinstance(p, WaveVector):
        k, theta, phi = p.k, p.theta, p.phi
    else:
        k, theta, phi = (np.asarray(v, dtype=float) for v in p)
    radial = planewave_norm(index.n, index.j) * _radial_profile(index.n, index.j, k, scale.k0)
    angular = np.exp(1j * index.m * np.asarray(phi)) * wigner_small_d(index.j, index.m, index.lam, theta)
    out = radial * angular
    return out if np.ndim(out) else complex(out)


def enumerate_basis(n_max, lambdas=(-1, 1), j_filter: Optional[Iterable[int]] = None, m_filter: Optional[Iterable[int]] = None):
    """All admissible indices with ``n <= n_max`` in lexicographic (lam, n, j, m) order."""
    lambdas = sorted(set(lambdas))
    for lam in lambdas:
        if lam not in (-1, 1):
            raise DomainError(f"helicity must be +1 or -1, got {lam}")
    js = None if j_filter is None else set(j_filter)
    ms = None if m_filter is None else set(m_filter)
    out = []
    for lam in lambdas:
        for n in range(2, n_max + 1):
            for j in range(1, n):
                if js is not None and j not in js:
                    continue
                for m in range(-j, j + 1):
                    if ms is not None and m not in ms:
                        continue
                    out.append(BasisIndex(n, j, m, lam))
    return out


def basis_count(n_max, n_helicities=1):
    """Closed form of ``len(enumerate_basis(n_max))`` per helicity: sum of n^2 - 1."""
    if n_max < 2:
        return 0
    return n_helicities * sum(n * n - 1 for n in range(2, n_max + 1))
