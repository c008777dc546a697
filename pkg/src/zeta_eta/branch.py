"""The branch of log zeta normalized by log zeta(sigma + it) -> 0 as
sigma -> +infinity along horizontal lines.

The branch at s = sigma + it is realized by continuation along the ray from
sigma_start = 40 (where the principal logarithm is already below 1e-11)
down to sigma: the running value advances by the trapezoid quadrature of
zeta'/zeta with steps proportional to the distance to the nearest
singularity, and at each accepted step the value is snapped to

    principal log zeta  +  2 pi i k,

with k pinned by the quadrature prediction.  The snap keeps the accuracy of
the point evaluation while the quadrature only has to resolve k, which it
does with two-digit margin.  Points with t on a tabulated ordinate (within
1e-9) use the one-sided limit: approach from below for gamma > 0, from
above for gamma < 0, and t = 0 is the limit from above.

Rays refuse heights above the zero table: step control and the ordinate
convention both need to know every zero near the path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, OnSingularity, ValidationError
from .precision import DEFAULT_PRECISION, EvalPrecision
from .zeros import ORDINATE_OFFSET, ZeroRecord, ZeroStore
from .zeta import _zeta_em

SIGMA_START = 40.0
_SNAP_TOL = 1e-9        # |t - gamma| below this uses the one-sided limit
_TWO_PI = 2.0 * math.pi
_MAX_PRED_RESIDUAL = 1.0   # rad; quadrature-vs-snap disagreement triggering retry


@dataclass
class BranchPath:
    """Continuation record for one horizontal ray Im s = t.

    crossings lists ordinates hit exactly (resolved by the one-sided limit);
    the side flag is -1 when the limit approached from below, +1 from above.
    Unwinding breakpoints (descending alphas) let eval_log answer anywhere
    on [sigma_end, sigma_start] with a single zeta evaluation.
    """

    t: float
    t_requested: float
    sigma_start: float
    sigma_end: float
    crossings: list[tuple[ZeroRecord, int]]
    conjugate: bool
    _breaks: list[float] = field(default_factory=list)   # descending
    _winds: list[int] = field(default_factory=list)      # winds[i] on (breaks[i+1], breaks[i]]
    _prec: EvalPrecision = DEFAULT_PRECISION

    def winding(self, alpha: float) -> int:
        if not (self.sigma_end <= alpha <= self.sigma_start):
            raise ValidationError(
                f"alpha={alpha} outside ray [{self.sigma_end}, {self.sigma_start}]")
        # breaks are descending; the winding at alpha is the one attached to
        # the deepest breakpoint at or above alpha.
        for i in range(len(self._breaks) - 1, -1, -1):
            if self._breaks[i] >= alpha:
                return self._winds[i]
        return self._winds[0]

    def eval_log(self, alpha: float) -> tuple[complex, float]:
        """log zeta(alpha + it) on the branch, with an error estimate."""
        k = self.winding(alpha)
        s = complex(alpha, self.t)
        val, _, rem = _zeta_em(s, self._prec, want_deriv=False)
        if val == 0:
            raise OnSingularity(f"zeta({s}) = 0 at working precision")
        out = cmath.log(val) + 2j * math.pi * k
        est = rem / abs(val) + 1e-15 * (1.0 + abs(out))
        if self.conjugate:
            out = out.conjugate()
        return out, est


_REG_RADIUS = 0.05      # singularities this close to a step get subtracted


def _march(t: float, sigma_end: float, prec: EvalPrecision,
           store: ZeroStore) -> tuple[list[float], list[int]]:
    """Walk the ray from SIGMA_START down to sigma_end tracking the winding.

    Returns the unwinding breakpoints (descending alphas) and the winding
    integers in force below each breakpoint.  The trapezoid quadrature of
    zeta'/zeta only has to pin the winding to the nearest integer; known
    singularities within _REG_RADIUS of a step are subtracted analytically
    first, so steps crossing the critical line arbitrarily close to a zero
    (or the pole, for rays at height ~0) stay well-predicted.
    """
    def logderiv(alpha: float) -> tuple[complex, complex]:
        v, d, _ = _zeta_em(complex(alpha, t), prec, want_deriv=True)
        if v == 0:
            raise OnSingularity(f"zeta({alpha}+{t}j) = 0 at working precision")
        return cmath.log(v), d / v

    def nearby_poles(lo: float, hi: float) -> list[tuple[complex, float]]:
        """(location, residue-sign weight) of singularities of zeta'/zeta
        within _REG_RADIUS of the segment [lo, hi] x {t}."""
        out: list[tuple[complex, float]] = []
        if abs(t) <= _REG_RADIUS and lo - _REG_RADIUS <= 1.0 <= hi + _REG_RADIUS:
            out.append((1.0 + 0.0j, -1.0))          # simple pole of zeta
        gam = store.gammas
        i0 = int(np.searchsorted(gam, t - _REG_RADIUS, side="left"))
        i1 = int(np.searchsorted(gam, t + _REG_RADIUS, side="right"))
        for i in range(i0, i1):
            beta = float(store.betas[i])
            if lo - _REG_RADIUS <= beta <= hi + _REG_RADIUS:
                out.append((complex(beta, float(gam[i])),
                            float(store.multiplicities[i])))
        return out

    def singularity_distance(alpha: float) -> float:
        s = complex(alpha, t)
        return min(store.zero_distance(s), abs(s - 1.0))

    breaks = [SIGMA_START]
    winds = [0]
    alpha = SIGMA_START
    log_here, f_here = logderiv(alpha)   # principal = branch at sigma = 40
    k = 0
    evals = 0
    while alpha > sigma_end:
        d = singularity_distance(alpha)
        step = min(2.0, max(1e-3, 0.35 * d))
        while True:
            nxt = max(sigma_end, alpha - step)
            w, f_next = logderiv(nxt)
            evals += 1
            if evals > prec.max_terms:
                raise BudgetExceeded(
                    f"branch continuation at t={t} exceeded max_terms")
            # Analytic part of the increment from singularities close to
            # this step; Log(z - p) is continuous along the segment because
            # Im(z - p) keeps its (nonzero) sign.
            poles = nearby_poles(nxt, alpha)
            analytic = 0.0 + 0.0j
            fa_here = f_here
            fa_next = f_next
            for p, weight in poles:
                analytic += weight * (cmath.log(complex(nxt, t) - p)
                                      - cmath.log(complex(alpha, t) - p))
                fa_here -= weight / (complex(alpha, t) - p)
                fa_next -= weight / (complex(nxt, t) - p)
            pred = log_here + analytic + (nxt - alpha) * 0.5 * (fa_here + fa_next)
            k_new = k + round((pred.imag - (w.imag + k * _TWO_PI)) / _TWO_PI)
            resid = abs(pred - (w + 2j * math.pi * k_new))
            if (resid <= _MAX_PRED_RESIDUAL and abs(k_new - k) <= 1) \
                    or step <= 1e-6:
                break
            step *= 0.5
        if resid > _MAX_PRED_RESIDUAL:
            raise BudgetExceeded(
                f"branch continuation stalled at alpha={alpha}, t={t} "
                f"(residual {resid:.2f} rad at minimal step)")
        if k_new != k:
            # Locate the principal-log wrap inside (nxt, alpha) so that
            # eval_log is correct on the whole ray, not just at endpoints.
            lo, hi = nxt, alpha
            im_hi = (log_here - 2j * math.pi * k).imag
            for _ in range(60):
                if hi - lo < 1e-9:
                    break
                mid = 0.5 * (lo + hi)
                vm, _, _ = _zeta_em(complex(mid, t), prec, want_deriv=False)
                # same side as hi if no wrap between mid and hi
                if abs(cmath.log(vm).imag - im_hi) < math.pi:
                    hi = mid
                    im_hi = cmath.log(vm).imag
                else:
                    lo = mid
            breaks.append(0.5 * (lo + hi))
            winds.append(k_new)
            k = k_new
        log_here = w + 2j * math.pi * k_new
        f_here = f_next
        alpha = nxt
    return breaks, winds


def branch_path(t: float, sigma_end: float,
                prec: EvalPrecision = DEFAULT_PRECISION,
                store: ZeroStore | None = None) -> BranchPath:
    """Prepare the ray at height t down to sigma_end for repeated queries."""
    if store is None:
        from .zeros import builtin_store
        store = builtin_store()
    t = float(t)
    if not math.isfinite(t) or not math.isfinite(sigma_end):
        raise ValidationError("t and sigma_end must be finite")
    if sigma_end < -1.0:
        raise ValidationError(f"sigma_end >= -1 required, got {sigma_end}")
    if sigma_end >= SIGMA_START:
        raise ValidationError(f"sigma_end must be < {SIGMA_START}")
    conjugate = t < 0.0
    t_req = t
    t = abs(t)
    if t > store.t_max:
        raise ValidationError(
            f"|t|={t} above zero-table height {store.t_max}; extend the table")

    crossings: list[tuple[ZeroRecord, int]] = []
    if t < _SNAP_TOL:
        # t = 0 is the limit from above.
        t_eff = ORDINATE_OFFSET
    else:
        g = store.nearest_gamma(t)
        if g is not None and abs(t - g) < _SNAP_TOL:
            # Ordinate: approach from below (for the reflected ray this
            # conjugates into approach from above, matching the convention
            # at negative ordinates).
            i = int(np.searchsorted(store.gammas, g))
            crossings.append((store.record(i), +1 if conjugate else -1))
            t_eff = g - ORDINATE_OFFSET
        else:
            t_eff = t

    # Exact zeros on the ray (sigma_end below a zero's beta at this height)
    # are fine -- the ray passes at vertical distance >= the snap offset.
    breaks, winds = _march(t_eff, sigma_end, prec, store)
    path = BranchPath(t=t_eff, t_requested=t_req, sigma_start=SIGMA_START,
                      sigma_end=sigma_end, crossings=crossings,
                      conjugate=conjugate, _prec=prec)
    path._breaks = breaks
    path._winds = winds
    return path


def log_zeta_with_err(s, prec: EvalPrecision = DEFAULT_PRECISION,
                      store: ZeroStore | None = None) -> tuple[complex, float]:
    """log zeta(s) on the branch, plus an absolute error estimate."""
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValidationError(f"s must be finite, got {s!r}")
    if abs(z - 1.0) <= 1e-12:
        raise OnSingularity("log zeta has a logarithmic singularity at s = 1")
    if store is None:
        from .zeros import builtin_store
        store = builtin_store()
    if store.zero_distance(z) <= 1e-12:
        raise OnSingularity(f"s={s} sits on a zero of the table")
    if z.real >= SIGMA_START:
        val, _, rem = _zeta_em(z, prec, want_deriv=False)
        return cmath.log(val), rem / max(abs(val), 1e-300) + 1e-15
    if z.imag == 0.0:
        # Limit from above in closed form: zeta(sigma) is real and nonzero
        # on (-1, 1) u (1, inf), negative exactly on (-1, 1), and the
        # continuation across the pole contributes the phase -pi there.
        val, _, rem = _zeta_em(z, prec, want_deriv=False)
        x = val.real
        return (complex(math.log(abs(x)), -math.pi if x < 0 else 0.0),
                rem / max(abs(x), 1e-300) + 1e-15)
    path = branch_path(z.imag, z.real, prec, store)
    return path.eval_log(z.real)


def log_zeta(s, prec: EvalPrecision = DEFAULT_PRECISION,
             store: ZeroStore | None = None) -> complex:
    """log zeta(s) on the branch continued from sigma = +infinity.

    Post: exp(log_zeta(s)) = zeta(s) to evaluation accuracy; the imaginary
    part vanishes as sigma grows; at sigma >= 40 the principal value is
    returned directly.
    """
    val, _ = log_zeta_with_err(s, prec, store)
    return val


def big_s(t: float, prec: EvalPrecision = DEFAULT_PRECISION,
          store: ZeroStore | None = None) -> float:
    """S(t) = Im log zeta(1/2 + it) / pi on the continued branch."""
    return log_zeta(complex(0.5, float(t)), prec, store).imag / math.pi
