"""Mass-one bump kernels on [0, 1], their multiplicative rescalings, and the
incomplete-exponential transforms built from them.

A kernel f >= 0 has integral 1 over [0, 1].  Its rescaling at sharpness H
lives on [e, e^(1+1/H)]:

    u_{f,H}(x) = H f(H log(x/e)) / x,        v_{f,H}(y) = int_y^inf u_{f,H},

so v = 1 on (0, e] and v = 0 on [e^(1+1/H), inf).  The transforms

    E*_{m+1}(z) = int_z^(z+inf) (w - z)^m e^-w / w dw     (horizontal ray)
    U_m(z)      = (1/m!) int u_{f,H}(x) E*_{m+1}(z log x) / (log x)^m dx

are the zero-local building blocks of the smoothed approximation's error
analysis.  E* reduces to the exponential integral E_1 plus elementary terms:

    E*_{m+1}(z) = (-z)^m E_1(z) + sum_{k=1..m} C(m,k) (-z)^(m-k) Gamma(k, z),

with Gamma(k, z) the upper incomplete gamma (entire for integer k >= 1).
The reduction is used for |z| <= 4; beyond that it cancels catastrophically
and a Gauss-Laguerre quadrature of e^-z int_0^inf u^m e^-u/(u+z) du takes
over, with a graded-panel fallback when the pole at -z approaches the
contour (Re z < 0).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import betainc

from .errors import InvalidFamily, OnNegativeRealAxisCut, ValidationError
from .precision import DEFAULT_PRECISION, EvalPrecision
from .quadrature import integrate_adaptive

_EULER_GAMMA = 0.5772156649015328606

#: Orders above this are never probed by smoothness verification.
SMOOTHNESS_CHECK_CAP = 10


@dataclass(frozen=True)
class Kernel:
    """Mass-one bump on [0, 1].

    d_smooth is the usable differentiation order: derivatives of orders
    0..d_smooth-1 of the zero-extension are continuous at the endpoints and
    order d_smooth jumps.  poly_bump(d) has d_smooth = d; tent has 1.
    """

    family: str
    d: int
    d_smooth: int
    f: Callable[[float], float] = field(repr=False, compare=False)
    f_cdf: Callable[[float], float] = field(repr=False, compare=False)

    @property
    def name(self) -> str:
        return (f"{self.family}({self.d})" if self.family == "poly_bump"
                else self.family)


def _poly_bump(d: int) -> Kernel:
    if d < 1:
        raise InvalidFamily(f"poly_bump needs d >= 1, got {d}")
    norm = 1.0 / math.exp(math.lgamma(d + 1) * 2 - math.lgamma(2 * d + 2))
    # norm = 1/B(d+1, d+1)

    def f(x: float) -> float:
        if x <= 0.0 or x >= 1.0:
            return 0.0
        return norm * (x * (1.0 - x)) ** d

    def f_cdf(x: float) -> float:
        if x <= 0.0:
            return 0.0
        if x >= 1.0:
            return 1.0
        return float(betainc(d + 1, d + 1, x))

    return Kernel(family="poly_bump", d=d, d_smooth=d, f=f, f_cdf=f_cdf)


def _tent() -> Kernel:
    def f(x: float) -> float:
        if x <= 0.0 or x >= 1.0:
            return 0.0
        return 4.0 * min(x, 1.0 - x)

    def f_cdf(x: float) -> float:
        if x <= 0.0:
            return 0.0
        if x >= 1.0:
            return 1.0
        if x <= 0.5:
            return 2.0 * x * x
        return 1.0 - 2.0 * (1.0 - x) ** 2

    return Kernel(family="tent", d=0, d_smooth=1, f=f, f_cdf=f_cdf)


def make_kernel(family: str, d: int | None = None) -> Kernel:
    """Kernel constructor; families 'poly_bump' (needs d) and 'tent'."""
    if family == "poly_bump":
        if d is None:
            raise InvalidFamily("poly_bump needs the degree d")
        return _poly_bump(int(d))
    if family == "tent":
        if d is not None:
            raise InvalidFamily("tent takes no degree parameter")
        return _tent()
    raise InvalidFamily(f"unknown kernel family {family!r}")


DEFAULT_KERNEL = make_kernel("poly_bump", 4)


# --- rescalings ---------------------------------------------------------------

def _check_h(h: float) -> float:
    h = float(h)
    if not (h >= 1.0 and math.isfinite(h)):
        raise ValidationError(f"H >= 1 required, got {h}")
    return h


def u_f_h(kernel: Kernel, h: float, x: float) -> float:
    """u_{f,H}(x) = H f(H log(x/e))/x, supported on [e, e^(1+1/H)]."""
    h = _check_h(h)
    if x <= 0.0:
        raise ValidationError(f"x must be positive, got {x}")
    tau = h * (math.log(x) - 1.0)
    if tau <= 0.0 or tau >= 1.0:
        return 0.0
    return h * kernel.f(tau) / x


def v_f_h(kernel: Kernel, h: float, y: float) -> float:
    """v_{f,H}(y) = int_y^inf u_{f,H}; 1 up to e, 0 from e^(1+1/H) on."""
    h = _check_h(h)
    if y <= 0.0:
        raise ValidationError(f"y must be positive, got {y}")
    tau = h * (math.log(y) - 1.0)
    if tau <= 0.0:
        return 1.0
    if tau >= 1.0:
        return 0.0
    return 1.0 - kernel.f_cdf(tau)


def boundary_derivative(kernel: Kernel, order: int, side: int,
                        step: float = 1e-3) -> float:
    """One-sided finite-difference derivative of f at an endpoint.

    side 0 probes x = 0+ (forward stencil), side 1 probes x = 1- (backward).
    Since the extension of f by zero has all outside derivatives equal to 0,
    a nonzero value here is the jump of f^(order) across the endpoint.
    Orders above SMOOTHNESS_CHECK_CAP are refused.
    """
    if order < 0 or order > SMOOTHNESS_CHECK_CAP:
        raise ValidationError(
            f"order must lie in [0, {SMOOTHNESS_CHECK_CAP}], got {order}")
    # Forward-difference coefficients: Delta^n f(x0) / h^n.
    coeffs = [(-1) ** (order - j) * math.comb(order, j) for j in range(order + 1)]
    if side == 0:
        pts = [kernel.f(j * step) for j in range(order + 1)]
        return sum(c * p for c, p in zip(coeffs, pts)) / step ** order
    if side == 1:
        pts = [kernel.f(1.0 - (order - j) * step) for j in range(order + 1)]
        return sum(c * p for c, p in zip(coeffs, pts)) / step ** order
    raise ValidationError(f"side must be 0 or 1, got {side}")


# --- E*_{m+1} -----------------------------------------------------------------

_SERIES_RADIUS = 4.0


def _e1_series(z: complex) -> complex:
    # E_1(z) = -gamma - Log z + sum (-1)^(k+1) z^k / (k k!), |z| small.
    total = 0.0 + 0.0j
    term = 1.0 + 0.0j
    for k in range(1, 60):
        term *= -z / k
        inc = -term / k
        total += inc
        if abs(inc) < 1e-18 * (1.0 + abs(total)):
            break
    return -_EULER_GAMMA - cmath.log(z) + total


@lru_cache(maxsize=8)
def _laguerre_rule(n: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    x, w = np.polynomial.laguerre.laggauss(n)
    return tuple(x), tuple(w)


def _estar_laguerre(m: int, z: complex, n: int) -> complex:
    x, w = _laguerre_rule(n)
    acc = 0.0 + 0.0j
    for xi, wi in zip(x, w):
        acc += wi * xi ** m / (xi + z)
    return cmath.exp(-z) * acc


def _estar_panels(m: int, z: complex, tol: float) -> complex:
    # Direct integral e^-z int_0^60 u^m e^-u/(u+z) du with panels graded
    # around the pole at u = -Re z (when it sits on the positive axis).
    def g(u: float) -> tuple[complex, float]:
        return (u ** m) * math.exp(-u) / (u + z), 0.0

    splits = []
    ustar = -z.real
    if 0.0 < ustar < 60.0:
        w = max(abs(z.imag), 1e-8)
        for k in (-8.0, -4.0, -2.0, -1.0, 1.0, 2.0, 4.0, 8.0):
            p = ustar + k * w
            if 0.0 < p < 60.0:
                splits.append(p)
        splits.append(ustar)
    val, _ = integrate_adaptive(g, 0.0, 60.0, tol, splits=splits)
    return cmath.exp(-z) * val


def e_star(m: int, z, prec: EvalPrecision = DEFAULT_PRECISION) -> complex:
    """E*_{m+1}(z), the m-th moment tail of e^-w/w along the horizontal ray.

    Refuses the branch cut (z real and <= 0); the one-sided limit there is
    the caller's business (see u_m_eval).
    """
    if m < 0:
        raise ValidationError(f"m must be >= 0, got {m}")
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0:
        raise OnNegativeRealAxisCut(
            f"E*_{m + 1} is not defined on the nonpositive real axis (z={z})")
    if abs(z) <= _SERIES_RADIUS:
        e1 = _e1_series(z)
        total = (-z) ** m * e1
        gam = cmath.exp(-z)           # Gamma(1, z)
        for k in range(1, m + 1):
            total += math.comb(m, k) * (-z) ** (m - k) * gam
            gam = k * gam + z ** k * cmath.exp(-z)   # Gamma(k+1, z)
        return total
    if z.real >= 0.0:
        a, b = _estar_laguerre(m, z, 48), _estar_laguerre(m, z, 96)
        if abs(a - b) <= 0.1 * prec.abs_err * (1.0 + abs(b)):
            return b
    return _estar_panels(m, z, 0.1 * prec.abs_err)


# --- U_m ----------------------------------------------------------------------

_LIMIT_EPS = 1e-9


def u_m_eval(m: int, z, kernel: Kernel = DEFAULT_KERNEL, h: float = 1.0,
             prec: EvalPrecision = DEFAULT_PRECISION) -> complex:
    """U_m(z) = (1/m!) int u_{f,H}(x) E*_{m+1}(z log x) / (log x)^m dx.

    In the variable tau = H log(x/e) this is a bump-weighted average of
    E*_{m+1}(z L) / L^m over L = 1 + tau/H in [1, 1 + 1/H].  Real z on the
    cut side (z <= 0) takes the limit from below, z -> z - i eps; real z > 0
    is evaluated directly (the two sides agree there).
    """
    if m < 0:
        raise ValidationError(f"m must be >= 0, got {m}")
    h = _check_h(h)
    z = complex(z)
    if z == 0:
        raise ValidationError("U_m(0) diverges; z must be nonzero")
    if z.imag == 0.0 and z.real <= 0.0:
        z = complex(z.real, -_LIMIT_EPS * max(1.0, abs(z)))
    fact = math.factorial(m)
    inner = EvalPrecision(abs_err=max(prec.abs_err, 1e-14), max_terms=prec.max_terms)

    def g(tau: float) -> tuple[complex, float]:
        big_l = 1.0 + tau / h
        val = kernel.f(tau) * e_star(m, z * big_l, inner) / big_l ** m
        return val, 0.0

    val, _ = integrate_adaptive(g, 0.0, 1.0, 0.1 * prec.abs_err)
    return val / fact
