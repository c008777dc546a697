"""Empirical value-distribution harness on dyadic ordinate windows.

Estimates, by seeded sampling of t in [T, 2T], the relative measure of

    {t : log|zeta(1/2+it)| > V}                         (exceedance of log|zeta|)
    {t : |eta_m(1/2+it) - i^m sum_{2<=n<=X} Lambda(n)
              / (n^(1/2+it) (log n)^(m+1)) - Y_m| > V}   (polynomial residual)

and the residual moment average

    (1/T) int |residual|^(2k) dt

over either the interval [14, T] ("theorem" convention) or [T, 2T]
("dyadic"); the returned record names which one was used.  The reference
shapes are the Gaussian tail of N(0, (1/2) loglog T), the raw tail
exp(-V^2/loglog T), and the moment majorant

    2^k k! ((2m+1)/(2m) + C/log X)^k X^(k(1-2s)) / (log X)^(2km)
    + C^k k^(2k(m+1)) T^((1-2s)/135} / (log T)^(2km)

with a caller-chosen trial constant C (default 10) -- existence of a valid
C is a theorem, its value is not, so the library never hides one.  The
hypothesis X <= T^(1/(135k)) is enforced by default and can be waived
explicitly (it is far too strict for desk-scale T; waivers are recorded).

Everything is deterministic given (seed, scheme): the generator is seeded
per call, samples within 1e-6 of a tabulated ordinate are nudged below it
(log|zeta| diverges at zeros), and aggregation uses compensated summation
so the result does not depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .approx import SIEVE_LIMIT, _check_sieve_range, _lambda_table, y_m
from .branch import log_zeta_with_err
from .errors import (BeyondTable, HypothesisViolated, OnSingularity,
                     ValidationError)
from .eta import _I_POW, eta_vertical
from .precision import DEFAULT_PRECISION, EvalPrecision
from .zeros import ORDINATE_OFFSET, ORDINATE_TOL, ZeroStore, builtin_store
from .zeta import zeta

_SCHEMES = ("uniform", "stratified-jitter", "seeded-random")


@dataclass(frozen=True)
class GridSpec:
    """Seeded sampling plan for t in [T, 2T]."""

    T: float
    count: int
    scheme: str = "stratified-jitter"
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.T) and self.T > 0.0):
            raise ValidationError(f"T > 0 required, got {self.T!r}")
        if not isinstance(self.count, (int, np.integer)) or self.count < 1:
            raise ValidationError(f"count must be a positive integer, "
                                  f"got {self.count!r}")
        if self.scheme not in _SCHEMES:
            raise ValidationError(
                f"scheme must be one of {_SCHEMES}, got {self.scheme!r}")
        if not isinstance(self.seed, (int, np.integer)):
            raise ValidationError(f"seed must be an integer, got {self.seed!r}")


@dataclass(frozen=True)
class MeasureEstimate:
    """Sampled exceedance fraction with its binomial error bar."""

    V: float
    fraction: float
    count_exceed: int
    ref_gaussian: float
    stderr: float


def _samples(grid: GridSpec, lo: float, hi: float,
             store: ZeroStore) -> np.ndarray:
    """Draw grid.count ordinates in [lo, hi] and nudge off tabulated zeros."""
    rng = np.random.default_rng(grid.seed)
    n = grid.count
    if grid.scheme == "uniform":
        t = lo + (hi - lo) * (np.arange(n) + 0.5) / n
    elif grid.scheme == "seeded-random":
        t = rng.uniform(lo, hi, n)
    else:                                   # stratified-jitter
        strata = max(1, int(round(math.sqrt(n))))
        edges = np.linspace(lo, hi, strata + 1)
        per, extra = divmod(n, strata)
        parts = []
        for i in range(strata):
            k = per + (1 if i < extra else 0)
            if k:
                parts.append(edges[i] + (edges[i + 1] - edges[i])
                             * rng.random(k))
        t = np.concatenate(parts)
    # nudge samples off ordinates: evaluate just below the zero
    gs = store.gammas
    pos = np.searchsorted(gs, t)
    for idx in np.nonzero((pos > 0) & (t - gs[np.maximum(pos - 1, 0)]
                                       < ORDINATE_TOL))[0]:
        t[idx] = gs[pos[idx] - 1] - ORDINATE_OFFSET
    for idx in np.nonzero((pos < len(gs)) & (gs[np.minimum(pos, len(gs) - 1)]
                                             - t < ORDINATE_TOL))[0]:
        t[idx] = gs[pos[idx]] - ORDINATE_OFFSET
    return t


def _kahan_sum(values) -> float:
    total = 0.0
    comp = 0.0
    for v in values:
        y = float(v) - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total


def gaussian_tail(v: float) -> float:
    """Upper tail of the standard normal law at v."""
    return 0.5 * math.erfc(float(v) / math.sqrt(2.0))


def _estimate(V: float, values: np.ndarray, ref: float) -> MeasureEstimate:
    count = len(values)
    exceed = int(np.sum(values > V))
    frac = exceed / count
    stderr = math.sqrt(frac * (1.0 - frac) / count)
    return MeasureEstimate(V=float(V), fraction=frac, count_exceed=exceed,
                           ref_gaussian=ref, stderr=stderr)


def _check_grid(T: float, grid: GridSpec, store: ZeroStore,
                min_count: int = 100) -> None:
    if grid.T != T:
        raise ValidationError(f"grid was built for T={grid.T}, called with "
                              f"T={T}")
    if grid.count < min_count:
        raise ValidationError(
            f"measure estimates need count >= {min_count}, got {grid.count}")
    if 2.0 * T > store.t_max:
        raise BeyondTable(f"2T = {2.0 * T} above zero-table height "
                          f"{store.t_max}")


def _log_abs_zeta_samples(T: float, grid: GridSpec, store: ZeroStore,
                          prec: EvalPrecision) -> np.ndarray:
    ts = _samples(grid, T, 2.0 * T, store)
    out = np.empty(len(ts))
    for i, t in enumerate(ts):
        val = zeta(complex(0.5, float(t)), prec)
        out[i] = math.log(abs(val)) if val != 0 else -math.inf
    return out


def measure_sigma(T: float, V: float, grid: GridSpec,
                  store: ZeroStore | None = None,
                  prec: EvalPrecision = DEFAULT_PRECISION) -> MeasureEstimate:
    """Fraction of t in [T, 2T] with log|zeta(1/2+it)| > V.

    The Gaussian reference is the tail of N(0, (1/2) loglog T) above V.
    """
    if store is None:
        store = builtin_store()
    _check_grid(T, grid, store)
    values = _log_abs_zeta_samples(T, grid, store, prec)
    sd = math.sqrt(0.5 * math.log(math.log(T)))
    return _estimate(V, values, gaussian_tail(V / sd))


def _plain_sum_coeffs(X: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    """(log n, Lambda(n)/(n^(1/2) (log n)^(m+1))) over prime powers n <= X."""
    _check_sieve_range(X, "the plain polynomial")
    lam = _lambda_table(SIEVE_LIMIT)
    idx = np.nonzero(lam[: int(math.floor(X)) + 1])[0]
    idx = idx[idx >= 2]
    log_n = np.log(idx.astype(float))
    coef = lam[idx] / (np.sqrt(idx.astype(float)) * log_n ** (m + 1))
    return log_n, coef


def _residual_samples(ts: np.ndarray, X: float, m: int, store: ZeroStore,
                      prec: EvalPrecision) -> np.ndarray:
    """|eta_m - i^m sum_{n<=X} - Y_m| at 1/2 + i t for each sample."""
    log_n, coef = _plain_sum_coeffs(X, m)
    im = _I_POW[m % 4]
    out = np.empty(len(ts))
    for i, t in enumerate(ts):
        s = complex(0.5, float(t))
        if m == 0:
            eta_val, _ = log_zeta_with_err(s, prec, store)
        else:
            eta_val = eta_vertical(s, m, store, prec).value
        poly = im * complex(np.sum(coef * np.exp(-1j * float(t) * log_n)))
        out[i] = abs(eta_val - poly - y_m(s, max(X, 3.0), m, store))
    return out


def measure_t_m(T: float, X: float, V: float, m: int, grid: GridSpec,
                cfg=None, store: ZeroStore | None = None,
                prec: EvalPrecision = DEFAULT_PRECISION) -> MeasureEstimate:
    """Fraction of t in [T, 2T] where the plain-polynomial residual
    |eta_m - i^m sum_{2<=n<=X} Lambda(n)/(n^(1/2+it)(log n)^(m+1)) - Y_m|
    exceeds V.  The sum is unsmoothed: weight 1 up to X, nothing beyond.

    cfg, when given, only cross-checks (m, X) against an ApproxConfig;
    the kernel plays no role in the unsmoothed sum.
    """
    if store is None:
        store = builtin_store()
    if cfg is not None and (cfg.m != m or cfg.X != X):
        raise ValidationError(
            f"cfg carries (m={cfg.m}, X={cfg.X}), call says (m={m}, X={X})")
    if not isinstance(m, (int, np.integer)) or m < 0:
        raise ValidationError(f"m must be an integer >= 0, got {m!r}")
    if T < 14.0:
        raise ValidationError(f"T >= 14 required, got {T}")
    _check_grid(T, grid, store)
    ts = _samples(grid, T, 2.0 * T, store)
    values = _residual_samples(ts, X, m, store, prec)
    sd = math.sqrt(0.5 * math.log(math.log(T)))
    return _estimate(V, values, gaussian_tail(V / sd))


def moment_residual(T: float, X: float, m: int, k: int, grid: GridSpec,
                    cfg=None, store: ZeroStore | None = None,
                    prec: EvalPrecision = DEFAULT_PRECISION,
                    sigma: float = 0.5, trial_c: float = 10.0,
                    interval: str = "theorem",
                    enforce_range: bool = True) -> dict:
    """Empirical (1/T) int |residual|^(2k) dt against the moment majorant.

    interval = "theorem" samples [14, T]; "dyadic" samples [T, 2T].  The
    hypothesis X <= T^(1/(135k)) is unreachable at desk scale; pass
    enforce_range=False to waive it (the returned record keeps both the
    interval convention and the waiver).
    """
    if store is None:
        store = builtin_store()
    if cfg is not None and (cfg.m != m or cfg.X != X):
        raise ValidationError(
            f"cfg carries (m={cfg.m}, X={cfg.X}), call says (m={m}, X={X})")
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise ValidationError(f"m >= 1 required, got {m!r}")
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValidationError(f"k >= 1 required, got {k!r}")
    if sigma < 0.5:
        raise ValidationError(f"sigma >= 1/2 required, got {sigma}")
    if interval not in ("theorem", "dyadic"):
        raise ValidationError(f"interval must be 'theorem' or 'dyadic', "
                              f"got {interval!r}")
    if T < 28.0:
        raise ValidationError(f"T >= 28 required, got {T}")
    if X > T ** (1.0 / (135.0 * k)):
        if enforce_range:
            raise HypothesisViolated(
                f"X = {X} exceeds T^(1/(135k)) = {T ** (1.0 / (135.0 * k)):.4g}"
                f"; pass enforce_range=False to waive")
        waived = True
    else:
        waived = False
    lo, hi = (14.0, T) if interval == "theorem" else (T, 2.0 * T)
    if hi > store.t_max:
        raise BeyondTable(f"samples up to {hi} above zero-table height "
                          f"{store.t_max}")
    if grid.T != T:
        raise ValidationError(f"grid was built for T={grid.T}, called with "
                              f"T={T}")
    ts = _samples(grid, lo, hi, store)

    log_n, coef0 = _plain_sum_coeffs(X, m)
    coef = coef0 * np.exp((0.5 - sigma) * log_n)   # n^(1/2) -> n^sigma
    im = _I_POW[m % 4]
    powers = []
    for t in ts:
        s = complex(sigma, float(t))
        eta_val = eta_vertical(s, m, store, prec).value
        poly = im * complex(np.sum(coef * np.exp(-1j * float(t) * log_n)))
        r = eta_val - poly - y_m(s, max(X, 3.0), m, store)
        powers.append(abs(r) ** (2 * k))
    empirical = _kahan_sum(powers) / len(powers) * (hi - lo) / T

    lx, lt = math.log(X), math.log(T)
    bound = (2.0 ** k * math.factorial(k)
             * ((2.0 * m + 1.0) / (2.0 * m) + trial_c / lx) ** k
             * X ** (k * (1.0 - 2.0 * sigma)) / lx ** (2 * k * m)
             + trial_c ** k * float(k) ** (2 * k * (m + 1))
             * T ** ((1.0 - 2.0 * sigma) / 135.0) / lt ** (2 * k * m))
    return {"empirical": empirical, "bound": bound, "interval": interval,
            "hypothesis_waived": waived}


def tail_table(T: float, v_list, grid: GridSpec,
               store: ZeroStore | None = None,
               prec: EvalPrecision = DEFAULT_PRECISION) -> list[dict]:
    """One row per V: empirical log|zeta| tail vs Gaussian and raw shapes.

    Row keys: V, fraction, stderr, gaussian_ref, jutila_ref with
    jutila_ref = exp(-V^2/loglog T).  A single scan is shared by all V.
    """
    if store is None:
        store = builtin_store()
    v_list = [float(v) for v in v_list]
    _check_grid(T, grid, store)
    values = _log_abs_zeta_samples(T, grid, store, prec)
    llt = math.log(math.log(T))
    sd = math.sqrt(0.5 * llt)
    rows = []
    for v in v_list:
        est = _estimate(v, values, gaussian_tail(v / sd))
        rows.append({"V": est.V, "fraction": est.fraction,
                     "stderr": est.stderr, "gaussian_ref": est.ref_gaussian,
                     "jutila_ref": math.exp(-v * v / llt)})
    return rows
