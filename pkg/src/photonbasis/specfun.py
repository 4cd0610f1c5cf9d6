"""Special functions used throughout the package.

Everything here is vectorized over the continuous argument and takes the
integer orders as Python ints. Orders are capped so that double precision
keeps at least ten significant digits.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError

LAGUERRE_CAP = 200
WIGNER_CAP = 50
BESSEL_CAP = 200


@dataclass(frozen=True)
class LogFactorialTable:
    """Table of ``log(a!)`` for integer ``0 <= a <= max_arg``."""

    max_arg: int
    values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.max_arg < 1:
            raise DomainError("max_arg must be at least 1")
        vals = np.array([math.lgamma(a + 1.0) for a in range(self.max_arg + 1)])
        vals[0] = vals[1] = 0.0
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __getitem__(self, a):
        if a < 0 or a > self.max_arg:
            raise DomainError(f"factorial argument {a} outside [0, {self.max_arg}]")
        return self.values[a]

    def ratio(self, a, b):
        """``a! / b!``"""
        return math.exp(self[a] - self[b])


LOG_FACTORIAL = LogFactorialTable(1024)


def _as_float_array(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def laguerre(l, s, rho, cap=LAGUERRE_CAP):
    """Generalized Laguerre polynomial ``L^s_l(rho)``.

    Uses the three-term recurrence in the degree,

        (k+1) L_{k+1} = (2k+1+s-rho) L_k - (k+s) L_{k-1},

    which stays accurate where the explicit binomial sum cancels badly.

    Parameters
    ----------
    l : int
        Degree, ``0 <= l <= cap``.
    s : int
        Superscript (order), ``s >= 0``.
    rho : float or array_like
        Evaluation points.

    Returns
    -------
    float or numpy.ndarray
    """
    if l < 0 or s < 0:
        raise DomainError("degree and superscript must be nonnegative")
    if l > cap:
        raise DomainError(f"degree {l} exceeds cap {cap}")
    rho = _as_float_array(rho, "rho")
    prev = np.ones_like(rho)
    if l == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + s - rho
    for k in range(1, l):
        prev, cur = cur, ((2 * k + 1 + s - rho) * cur - (k + s) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def laguerre_binomial(l, s, rho):
    """Explicit finite sum ``sum_r C(l+s, l-r) (-rho)^r / r!``.

    Only reliable for small degree and argument; kept as a reference.
    """
    rho = np.asarray(rho, dtype=float)
    total = np.zeros_like(rho)
    for r in range(l + 1):
        total = total + math.comb(l + s, l - r) * (-rho) ** r / math.factorial(r)
    return total if total.ndim else float(total)


def wigner_small_d(j, m, lam, theta, cap=WIGNER_CAP):
    """Wigner small-d matrix element ``d^j_{m lam}(theta)``.

    Convention: ``d^j_{m'm}(b) = <j m'| exp(-i b J_y) |j m>``, so that
    ``d^1_{10}(b) = -sin(b)/sqrt(2)``.
    """
    if j < 0 or abs(m) > j or abs(lam) > j:
        raise DomainError(f"invalid Wigner indices j={j}, m={m}, lam={lam}")
    if j > cap:
        raise DomainError(f"j={j} exceeds cap {cap}")
    theta = _as_float_array(theta, "theta")
    lf = LOG_FACTORIAL
    c = np.cos(theta / 2.0)
    sn = np.sin(theta / 2.0)
    log_pref = 0.5 * (lf[j + m] + lf[j - m] + lf[j + lam] + lf[j - lam])
    total = np.zeros_like(theta)
    for k in range(max(0, lam - m), min(j + lam, j - m) + 1):
        log_mag = log_pref - (lf[j + lam - k] + lf[k] + lf[m - lam + k] + lf[j - m - k])
        sign = -1.0 if (m - lam + k) % 2 else 1.0
        total = total + sign * math.exp(log_mag) * c ** (2 * j + lam - m - 2 * k) * sn ** (m - lam + 2 * k)
    return total if total.ndim else float(total)


def scalar_spherical_harmonic(j, m, theta, phi):
    """``Y_jm(theta, phi) = sqrt((2j+1)/4pi) exp(i m phi) d^j_{m0}(theta)``."""
    if j < 0 or abs(m) > j:
        raise DomainError(f"invalid harmonic indices j={j}, m={m}")
    d = wigner_small_d(j, m, 0, theta)
    return math.sqrt((2 * j + 1) / (4 * math.pi)) * np.exp(1j * m * np.asarray(phi, dtype=float)) * d


def _bessel_series(l, x):
    # x^l/(2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1)), for x < 1
    lead = np.exp(l * np.log(x) - sum(math.log(2 * i + 1) for i in range(l + 1)))
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 30):
        term = term * (-0.5 * x * x) / (k * (2 * l + 2 * k + 1))
        total = total + term
    return lead * total


def _bessel_upward(l, x):
    j0 = np.sin(x) / x
    if l == 0:
        return j0
    j1 = np.sin(x) / (x * x) - np.cos(x) / x
    for k in range(1, l):
        j0, j1 = j1, (2 * k + 1) / x * j1 - j0
    return j1


def _bessel_miller(l, x):
    # Downward recurrence from well above the turning point. The magnitude is
    # fixed by sum_k (2k+1) j_k(x)^2 = 1, the sign by the closed forms of j_0, j_1.
    top = int(l + np.max(x) + 30 + 4 * math.sqrt(l + np.max(x)))
    upper = np.zeros_like(x)
    cur = np.ones_like(x)
    norm = np.zeros_like(x)
    saved = np.zeros_like(x)
    for k in range(top, 0, -1):
        norm += (2 * k + 1) * cur * cur
        if k == l:
            saved = cur.copy()
        upper, cur = cur, (2 * k + 1) / x * cur - upper
        big = np.abs(cur) > 1e150
        if np.any(big):
            shrink = np.where(big, 1e-150, 1.0)
            cur *= shrink
            upper *= shrink
            saved *= shrink
            norm *= shrink * shrink
    norm += cur * cur
    if l == 0:
        saved = cur
    j0 = np.sin(x) / x
    j1 = np.sin(x) / (x * x) - np.cos(x) / x
    sign = np.where(j0 * cur + j1 * upper < 0, -1.0, 1.0)
    return sign * saved / np.sqrt(norm)


def spherical_bessel_j(l, x, cap=BESSEL_CAP):
    """Spherical Bessel function of the first kind ``j_l(x)`` for ``x >= 0``.

    Power series for ``x < 1``, upward recurrence where ``l <= x`` and Miller
    downward recurrence otherwise.
    """
    if l < 0 or l > cap:
        raise DomainError(f"order {l} outside [0, {cap}]")
    x = _as_float_array(x, "x")
    if np.any(x < 0):
        raise DomainError("x must be nonnegative")
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    zero = x == 0
    out[zero] = 1.0 if l == 0 else 0.0
    series = (x > 0) & (x < 1)
    if np.any(series):
        out[series] = _bessel_series(l, x[series])
    up = (x >= 1) & (x >= l)
    if np.any(up):
        out[up] = _bessel_upward(l, x[up])
    down = (x >= 1) & (x < l)
    if np.any(down):
        out[down] = _bessel_miller(l, x[down])
    return float(out[0]) if scalar else out


def spherical_bessel_y(l, x, cap=BESSEL_CAP):
    """Spherical Bessel function of the second kind ``y_l(x)``, ``x > 0``.

    Upward recurrence is stable for ``y_l`` at every argument.
    """
    if l < 0 or l > cap:
        raise DomainError(f"order {l} outside [0, {cap}]")
    x = _as_float_array(x, "x")
    if np.any(x <= 0):
        raise DomainError("y_l is singular at x = 0; x must be positive")
    y0 = -np.cos(x) / x
    if l == 0:
        return y0 if y0.ndim else float(y0)
    y1 = -np.cos(x) / (x * x) - np.sin(x) / x
    for k in range(1, l):
        y0, y1 = y1, (2 * k + 1) / x * y1 - y0
    return y1 if y1.ndim else float(y1)


def spherical_hankel(kind, l, x, cap=BESSEL_CAP):
    """Spherical Hankel function ``h^1_l = j_l + i y_l`` or ``h^2_l = j_l - i y_l``.

    Irregular at the origin, so ``x`` must be positive. The real part is the
    stably evaluated ``j_l``; consequently ``h^1 + h^2 = 2 j_l`` holds to
    rounding and ``h^2 = conj(h^1)``.
    """
    if kind not in (1, 2):
        raise DomainError(f"Hankel kind must be 1 or 2, got {kind!r}")
    x = _as_float_array(x, "x")
    if np.any(x <= 0):
        raise DomainError("spherical Hankel functions need x > 0")
    jl = spherical_bessel_j(l, x, cap)
    yl = spherical_bessel_y(l, x, cap)
    return jl + 1j * yl if kind == 1 else jl - 1j * yl
