"""Smoothed Dirichlet-polynomial approximations to eta_m and their residuals.

The central identity realized here (sigma >= 1/2, t >= 14, X >= 3, H >= 1):

    eta_m(s) = i^m sum_{2 <= n <= X^(1+1/H)}
                   Lambda(n) v_{f,H}(e^(log n / log X)) / (n^s (log n)^(m+1))
               + Y_m(s, X) + R_m(s, X, H),

where Y_m collects the local contribution of zeros near s,

    Y_0(s, X) = sum_{|s-rho| <= 1/log X} log((s - rho) log X),
    Y_m(s)    = 2 pi sum_{k=0..m-1} i^(m-1-k)/((m-k)!k!)
                    sum_{beta>sigma, 0<gamma<t} (beta-sigma)^(m-k) (t-gamma)^k
                (m >= 1; independent of X),

with the logarithm's branch fixed by -pi <= arg z < pi.  residual() returns
the exact floating-point difference R_m = eta - poly - Y_m together with
numeric evaluations of the two bound shapes it should obey: the
unconditional zero-sum shape and the on-line form

    X^(1/2-sigma) (log t/(log X)^m) (1/loglog t + log(H+2)/log X),

both reported with implied constant 1 (callers calibrate constants on one
grid and test on another; the library never invents constants).

The zero sums of the unconditional bound are truncated at |t-gamma| <= t/2
over the table and the rest is absorbed by a crude integral majorant using
a zero-counting density; ordinates below 0 (conjugate zeros) enter only
through that majorant -- set reflect_negative_ordinates=False to drop them.

Also here: the prime polynomial P_f(s, X) = sum_{p <= X^2} v_{f,1}/p^s and
its on-line decomposition against zero clusters,

    P_f(1/2+it, X) = log(loglog t/log X) Ntilde(t, 1/log X)
                     + sum_{1/log X < |t-gamma| <= 1/loglog t}
                           log(|t-gamma| loglog t)
                     + O_f(log t/loglog t),

and the tapered weights w_X, Lambda_X = Lambda w_X, Lambda'_X used by the
variance displays.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .branch import log_zeta_with_err
from .errors import (BeyondSieve, BeyondTable, HypothesisViolated,
                     ValidationError, ZeroCoincidesWithS)
from .eta import _I_POW, eta_vertical, zero_sum_polynomial
from .kernels import DEFAULT_KERNEL, Kernel
from .precision import DEFAULT_PRECISION, EvalPrecision
from .zeros import ZeroStore, builtin_store

SIEVE_LIMIT = 2_000_000


# --- von Mangoldt via sieve ------------------------------------------------------

@lru_cache(maxsize=2)
def _prime_mask(limit: int) -> np.ndarray:
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p:: p] = False
    mask.setflags(write=False)
    return mask


@lru_cache(maxsize=2)
def _lambda_table(limit: int) -> np.ndarray:
    mask = _prime_mask(limit)
    lam = np.zeros(limit + 1)
    primes = np.nonzero(mask)[0]
    lam[primes] = np.log(primes)
    for p in primes[primes <= math.isqrt(limit)]:
        lp = math.log(p)
        q = int(p) * int(p)
        while q <= limit:
            lam[q] = lp
            q *= int(p)
    lam.setflags(write=False)
    return lam


def _check_sieve_range(n: float, what: str) -> None:
    if n > SIEVE_LIMIT:
        raise BeyondSieve(
            f"{what} needs the sieve up to {n:.0f} > limit {SIEVE_LIMIT}")


def von_mangoldt(n: int) -> float:
    """Lambda(n): log p if n is a prime power p^k, else 0."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ValidationError(f"n must be an integer, got {n!r}")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    _check_sieve_range(n, "von_mangoldt")
    return float(_lambda_table(SIEVE_LIMIT)[n])


# --- configuration ----------------------------------------------------------------

@dataclass(frozen=True)
class ApproxConfig:
    """Parameters (m, X, H, kernel) of the smoothed polynomial."""

    m: int
    X: float
    H: float = 1.0
    kernel: Kernel = field(default_factory=lambda: DEFAULT_KERNEL)

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or self.m < 0:
            raise ValidationError(f"m must be an integer >= 0, got {self.m!r}")
        if not (math.isfinite(self.X) and self.X >= 3.0):
            raise ValidationError(f"X >= 3 required, got {self.X!r}")
        if not (math.isfinite(self.H) and self.H >= 1.0):
            raise ValidationError(f"H >= 1 required, got {self.H!r}")
        if not isinstance(self.kernel, Kernel):
            raise ValidationError("kernel must be a Kernel instance")

    @property
    def n_max(self) -> int:
        """Largest summation index X^(1+1/H)."""
        return int(math.floor(self.X ** (1.0 + 1.0 / self.H)))


def _v_weights(kernel: Kernel, h: float, log_n: np.ndarray,
               log_x: float) -> np.ndarray:
    """v_{f,H}(e^(log n/log X)) vectorized; exact 1/0 outside the taper."""
    x = h * (log_n / log_x - 1.0)
    out = np.ones_like(x)
    out[x >= 1.0] = 0.0
    mid = (x > 0.0) & (x < 1.0)
    if np.any(mid):
        out[mid] = 1.0 - np.array([kernel.f_cdf(v) for v in x[mid]])
    return out


def dirichlet_poly(s, cfg: ApproxConfig,
                   prec: EvalPrecision = DEFAULT_PRECISION) -> complex:
    """i^m sum_{2<=n<=X^(1+1/H)} Lambda(n) v_{f,H}(.) / (n^s (log n)^(m+1))."""
    z = complex(s)
    n_max = cfg.n_max
    _check_sieve_range(n_max, f"dirichlet_poly with X^(1+1/H)={n_max}")
    lam = _lambda_table(SIEVE_LIMIT)
    idx = np.nonzero(lam[: n_max + 1])[0]
    idx = idx[idx >= 2]
    if idx.size == 0:
        return 0j
    log_n = np.log(idx.astype(float))
    v = _v_weights(cfg.kernel, cfg.H, log_n, math.log(cfg.X))
    amp = lam[idx] * v / (np.exp(z.real * log_n) * log_n ** (cfg.m + 1))
    total = complex(np.sum(amp * np.exp(-1j * z.imag * log_n)))
    return _I_POW[cfg.m % 4] * total


# --- local zero term Y_m ----------------------------------------------------------

def y_m(s, X: float, m: int, store: ZeroStore | None = None) -> complex:
    """Y_m(s, X); for m >= 1 the value does not depend on X."""
    z = complex(s)
    if not isinstance(m, (int, np.integer)) or m < 0:
        raise ValidationError(f"m must be an integer >= 0, got {m!r}")
    X = float(X)
    if not (math.isfinite(X) and X >= 3.0):
        raise ValidationError(f"X >= 3 required, got {X!r}")
    if store is None:
        store = builtin_store()
    sigma, t = z.real, z.imag
    if m >= 1:
        if t > store.t_max:
            raise BeyondTable(
                f"t={t} above zero-table height {store.t_max}")
        return zero_sum_polynomial(int(m), sigma, t, store)[0]

    radius = 1.0 / math.log(X)
    if t + radius > store.t_max:
        raise BeyondTable(
            f"the window around t={t} leaves the zero table "
            f"(height {store.t_max})")
    gs, bs, ms = store.gammas, store.betas, store.multiplicities
    near = np.abs(gs - t) <= radius        # cheap pre-filter
    total = 0j
    for beta, gamma, mult in zip(bs[near], gs[near], ms[near]):
        dz = z - complex(beta, gamma)
        if abs(dz) > radius:
            continue
        if dz == 0:
            raise ZeroCoincidesWithS(f"s={s} equals the zero {beta}+{gamma}i")
        lg = cmath.log(dz * math.log(X))
        if lg.imag == math.pi:             # branch -pi <= arg < pi
            lg -= 2j * math.pi
        total += int(mult) * lg
    return total


# --- residual report --------------------------------------------------------------

@dataclass(frozen=True)
class ResidualReport:
    """eta_m(s) split into polynomial + local zero term + remainder."""

    s: complex
    cfg: ApproxConfig
    eta: complex
    poly: complex
    y_m: complex
    r_m: complex
    bound_esrm: float       # unconditional zero-sum shape, constant 1
    bound_esrm2: float      # on-line shape, constant 1
    ratio: float            # |r_m| / bound_esrm2


def _bound_esrm(sigma: float, t: float, cfg: ApproxConfig, store: ZeroStore,
                reflect_negative_ordinates: bool = True) -> float:
    """Unconditional remainder shape with implied constant 1.

        (X^(2(1-sigma)) + X^(1-sigma)) / (t (log X)^(m+1))
        + (log X)^-m     sum_{|t-gamma| <= 1/log X} (X^(2(b-s)) + X^(b-s))
        + (log X)^-(m+1) sum_{|t-gamma| > 1/log X}  (X^(2(b-s)) + X^(b-s))
                         / |t-gamma| * min(1, (H/(|t-gamma| log X))^d),

    d = min(kernel smoothness order, 4).  The far sum runs over the table
    for |t-gamma| <= t/2; the rest (including, when the flag is set, all
    conjugate zeros gamma < 0) is absorbed by the integral majorant

        pref * (H/log X)^d / pi * (log 3A + 5 + 1/d) / (d A^d),  A = t/2,

    using density(T) <= (log 3T + 5)/pi for the combined two-sided count.
    """
    X, H, m = cfg.X, cfg.H, cfg.m
    d = min(cfg.kernel.d_smooth, 4)
    lx = math.log(X)
    if t * 1.5 > store.t_max:
        raise BeyondTable(
            f"bound needs table zeros up to 1.5 t = {1.5 * t}, "
            f"above height {store.t_max}")

    def xpow(b: np.ndarray | float):
        return X ** (2.0 * (b - sigma)) + X ** (b - sigma)

    total = xpow(1.0) / (t * lx ** (m + 1))
    gs, bs, ms = store.gammas, store.betas, store.multiplicities
    dist = np.abs(gs - t)
    near = dist <= 1.0 / lx
    if np.any(near):
        total += float(np.sum(ms[near] * xpow(bs[near]))) / lx ** m
    far = (~near) & (dist <= 0.5 * t)
    if np.any(far):
        u = dist[far]
        factor = np.minimum(1.0, (H / (u * lx)) ** d)
        total += float(np.sum(ms[far] * xpow(bs[far]) / u * factor)) \
            / lx ** (m + 1)
    # integral majorant for |t-gamma| > t/2 (on-line powers)
    a = 0.5 * t
    pref = xpow(0.5) * (H / lx) ** d / lx ** (m + 1)
    tail = pref * (math.log(3.0 * a) + 5.0 + 1.0 / d) / (math.pi * d * a ** d)
    if not reflect_negative_ordinates:
        tail *= 0.5
    return total + tail


def _bound_esrm2(sigma: float, t: float, cfg: ApproxConfig) -> float:
    """On-line remainder shape with implied constant 1 (1<=H<=t/2, X<=t)."""
    X, H, m = cfg.X, cfg.H, cfg.m
    lx = math.log(X)
    return (X ** (0.5 - sigma) * math.log(t) / lx ** m
            * (1.0 / math.log(math.log(t)) + math.log(H + 2.0) / lx))


def residual(s, cfg: ApproxConfig, store: ZeroStore | None = None,
             prec: EvalPrecision = DEFAULT_PRECISION,
             reflect_negative_ordinates: bool = True) -> ResidualReport:
    """R_m(s, X, H) = eta_m(s) - polynomial - Y_m, with both bound shapes."""
    z = complex(s)
    sigma, t = z.real, z.imag
    if t < 14.0:
        raise ValidationError(f"the identity is stated for t >= 14, got {t}")
    if sigma < 0.5:
        raise ValidationError(f"sigma >= 1/2 required, got {sigma}")
    if store is None:
        store = builtin_store()
    if cfg.m == 0:
        eta_val, _ = log_zeta_with_err(z, prec, store)
    else:
        eta_val = eta_vertical(z, cfg.m, store, prec).value
    poly = dirichlet_poly(z, cfg, prec)
    y_val = y_m(z, cfg.X, cfg.m, store)
    r_val = eta_val - poly - y_val
    b1 = _bound_esrm(sigma, t, cfg, store, reflect_negative_ordinates)
    b2 = _bound_esrm2(sigma, t, cfg)
    return ResidualReport(s=z, cfg=cfg, eta=eta_val, poly=poly, y_m=y_val,
                          r_m=r_val, bound_esrm=b1, bound_esrm2=b2,
                          ratio=abs(r_val) / b2)


# --- prime polynomial and its on-line decomposition -------------------------------

def p_f(s, X: float, kernel: Kernel | None = None,
        prec: EvalPrecision = DEFAULT_PRECISION) -> complex:
    """P_f(s, X) = sum over primes p <= X^2 of v_{f,1}(e^(log p/log X))/p^s."""
    z = complex(s)
    X = float(X)
    if not (math.isfinite(X) and X >= 3.0):
        raise ValidationError(f"X >= 3 required, got {X!r}")
    if kernel is None:
        kernel = DEFAULT_KERNEL
    p_max = int(math.floor(X * X))
    _check_sieve_range(p_max, f"p_f with X^2={p_max}")
    mask = _prime_mask(SIEVE_LIMIT)
    primes = np.nonzero(mask[: p_max + 1])[0]
    if primes.size == 0:
        return 0j
    log_p = np.log(primes.astype(float))
    v = _v_weights(kernel, 1.0, log_p, math.log(X))
    amp = v / np.exp(z.real * log_p)
    return complex(np.sum(amp * np.exp(-1j * z.imag * log_p)))


def relzz_decompose(t: float, X: float, kernel: Kernel | None = None,
                    store: ZeroStore | None = None,
                    prec: EvalPrecision = DEFAULT_PRECISION) -> dict:
    """P_f(1/2+it, X) against the zero-cluster main terms (on-line table).

    Returns {lhs, main1, main2, diff}:
        lhs   = P_f(1/2+it, X)
        main1 = log(loglog t / log X) * Ntilde(t, 1/log X)
        main2 = sum_{1/log X < |t-gamma| <= 1/loglog t} log(|t-gamma| loglog t)
        diff  = lhs - main1 - main2            (should be O(log t/loglog t))
    """
    t = float(t)
    X = float(X)
    if t < 14.0:
        raise ValidationError(f"t >= 14 required, got {t}")
    if not (math.log(t) <= X <= t):
        raise ValidationError(f"log t <= X <= t required, got X={X}, t={t}")
    if store is None:
        store = builtin_store()
    if not store.all_on_line:
        raise HypothesisViolated(
            "the decomposition assumes every table zero is on the line")
    llt = math.log(math.log(t))
    r_in = 1.0 / math.log(X)
    r_out = 1.0 / llt
    if t + r_out > store.t_max:
        raise BeyondTable(
            f"the window around t={t} leaves the zero table "
            f"(height {store.t_max})")
    lhs = p_f(complex(0.5, t), X, kernel, prec)
    ntilde = store.count_window(t, r_in)
    main1 = math.log(llt / math.log(X)) * ntilde
    gs, ms = store.gammas, store.multiplicities
    dist = np.abs(gs - t)
    ring = (dist > r_in) & (dist <= r_out)
    main2 = float(np.sum(ms[ring] * np.log(dist[ring] * llt))) \
        if np.any(ring) else 0.0
    return {"lhs": lhs, "main1": main1, "main2": main2,
            "diff": lhs - main1 - main2}


# --- tapered weights --------------------------------------------------------------

def w_x(y: float, X: float) -> float:
    """Quadratic taper: 1 on [1, X], 1/2 at X^2, 0 from X^3 on."""
    y = float(y)
    X = float(X)
    if not (y > 0.0):
        raise ValidationError(f"y > 0 required, got {y!r}")
    if not (math.isfinite(X) and X >= 3.0):
        raise ValidationError(f"X >= 3 required, got {X!r}")
    lx = math.log(X)
    if y <= X:
        return 1.0
    ly = math.log(y)
    if ly <= 2.0 * lx:
        return ((3.0 * lx - ly) ** 2 - 2.0 * (2.0 * lx - ly) ** 2) \
            / (2.0 * lx * lx)
    if ly <= 3.0 * lx:
        return (3.0 * lx - ly) ** 2 / (2.0 * lx * lx)
    return 0.0


def lambda_x(n: int, X: float) -> float:
    """Lambda_X(n) = Lambda(n) w_X(n)."""
    return von_mangoldt(n) * w_x(n, X)


def lambda_prime_x(n: int, X: float) -> float:
    """Lambda on [1, X], Lambda(n) log(X^2/n)/log X on [X, X^2], else 0."""
    lam = von_mangoldt(n)
    if lam == 0.0:
        return 0.0
    X = float(X)
    if not (math.isfinite(X) and X >= 3.0):
        raise ValidationError(f"X >= 3 required, got {X!r}")
    if n <= X:
        return lam
    if n <= X * X:
        return lam * math.log(X * X / n) / math.log(X)
    return 0.0
