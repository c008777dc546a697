"""Iterated integrals eta_m of log zeta, by two independent routes.

eta_0 = log zeta on the continued branch, and

    eta_m(sigma + it) = int_0^t eta_{m-1}(sigma + it') dt' + c_m(sigma),
    c_m(sigma)        = i^m/(m-1)! int_sigma^inf (a - sigma)^(m-1) log zeta(a) da,

with log zeta on the real axis the limit from above.  Collapsing the nested
t-integrals (Cauchy's repeated-integration formula) gives the "iterated"
route actually computed here:

    eta_m(sigma+it) = sum_{j=1..m} c_j(sigma) t^(m-j)/(m-j)!
                      + 1/(m-1)! int_0^t (t-u)^(m-1) log zeta(sigma+iu) du.

The "vertical" route is the independent representation (sigma >= 1/2, t > 0)

    eta_m(sigma+it) = i^m/(m-1)! int_sigma^inf (a-sigma)^(m-1) log zeta(a+it) da
        + 2 pi sum_{k=0..m-1} i^(m-1-k)/((m-k)! k!)
              sum_{beta>sigma, 0<gamma<t} (beta-sigma)^(m-k) (t-gamma)^k.

Agreement of the two is a computable identity, not a shared-code tautology:
they use different integrals and different continuation sweeps.

The u-integral of the iterated route runs through every ordinate below t,
where log zeta(sigma+iu) jumps (by 2 pi i per zero strictly right of sigma)
or has a logarithmic singularity (zero at sigma itself).  The line [0, t]
is cut into panels of width <= 1/2 with edges at the ordinates, and on each
panel the integrand splits as

    log zeta(sigma+iu) = G(u) + sum_rho mult Log(sigma-beta + i(u-gamma))
                              - [pole] Log(sigma-1 + iu),

where the sum runs over the pole and the zeros whose ordinate lies within
1.5 of the panel.  The model reproduces every nearby jump and logarithmic
singularity exactly, so G is analytic on a neighborhood of the panel of
radius >= 1; G is integrated by fixed 10/20-point Gauss pairs while the
model terms integrate in closed form.  Keeping the model local also keeps
both pieces the same size as the answer -- subtracting every zero at once
would balloon the two halves by a factor ~ N(t) log t and drown the result
in rounding noise.

Continuity of G along the sorted node sequence pins the winding integer of
the principal logarithm at each sample, replacing a horizontal branch march
per sample; the sweep is anchored at u = 0 (closed-form branch value) and
re-verified against the horizontal-ray branch at u = t.

Error floor: the iterated route adds pieces of size ~ |c_1| t^(m-1)/(m-1)!
that cancel down to the O(1)-size answer, so its achievable absolute error
grows like t^(m-1) ulp; est_err accounts for this.  The vertical route has
no such amplification.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaincc

from .branch import SIGMA_START, big_s, branch_path, log_zeta_with_err
from .errors import BudgetExceeded, NumericalError, OnSingularity, ValidationError
from .precision import DEFAULT_PRECISION, EvalPrecision
from .quadrature import gauss_rule, integrate_adaptive
from .zeros import ORDINATE_OFFSET, ZeroStore, builtin_store
from .zeta import _zeta_em

_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)     # exact i^m

_TAIL_START = 45.0      # vertical integrals truncated at alpha = sigma + this
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EtaValue:
    """One eta_m evaluation with its provenance and error estimate."""

    s: complex
    m: int
    value: complex
    route: str          # "iterated" | "vertical"
    est_err: float

    def __post_init__(self):
        if self.est_err < 0:
            raise ValidationError("est_err must be >= 0")
        if self.route not in ("iterated", "vertical"):
            raise ValidationError(f"unknown route {self.route!r}")


def _check_m(m: int) -> int:
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool):
        raise ValidationError(f"m must be an integer, got {m!r}")
    if m < 0:
        raise ValidationError(f"m must be >= 0, got {m}")
    return int(m)


def _snap_t(t: float, store: ZeroStore) -> float:
    """The branch module's evaluation height: ordinates approached from below."""
    if t < 1e-9:
        return ORDINATE_OFFSET
    g = store.nearest_gamma(t)
    if g is not None and abs(t - g) < 1e-9:
        return g - ORDINATE_OFFSET
    return t


def _tail_cut(m: int) -> float:
    # (a - sigma)^(m-1) 2^-a peaks near (m-1)/ln 2; push the cutoff out for
    # large m so the analytic tail bound stays tiny.
    return _TAIL_START + 12.0 * max(0, m - 4)


def _tail_bound(m: int, sigma: float) -> float:
    """Bound for the dropped tail of the vertical integrals.

    |log zeta(a+it)| <= -log(1 - 2^-a) <= 2*2^-a for a >= 1, so the tail
    beyond sigma + cut is at most
    2*2^-sigma Gamma(m, cut ln 2)/(ln 2)^m / (m-1)!.
    """
    ln2 = math.log(2.0)
    cut = _tail_cut(m)
    return 2.0 * 2.0 ** (-sigma) * float(gammaincc(m, cut * ln2)) / ln2 ** m


def _ray_log(path, alpha: float, prec: EvalPrecision) -> tuple[complex, float]:
    # eval_log covers [sigma_end, 40]; above 40 the principal value is the
    # branch (|log zeta| < 2^-39 there).
    if alpha <= path.sigma_start:
        return path.eval_log(alpha)
    val, _, rem = _zeta_em(complex(alpha, path.t), prec, want_deriv=False)
    out = cmath.log(val)
    return out, rem / abs(val) + 1e-15 * (1.0 + abs(out))


# --- integration constants c_m(sigma) ------------------------------------------

@lru_cache(maxsize=512)
def _c_m_cached(m: int, sigma: float, abs_err: float,
                max_terms: int) -> tuple[complex, float]:
    prec = EvalPrecision(abs_err=abs_err, max_terms=max_terms)
    store = builtin_store()

    def g(alpha: float) -> tuple[complex, float]:
        # On the real axis the limit from above is available in closed form;
        # no branch march runs anywhere near the pole.
        v, e = log_zeta_with_err(complex(alpha, 0.0), prec, store)
        w = (alpha - sigma) ** (m - 1)
        return w * v, abs(w) * e

    hi = sigma + _tail_cut(m)
    fact = math.factorial(m - 1)
    splits = [1.0] if sigma < 1.0 < hi else None
    val, est = integrate_adaptive(g, sigma, hi, 0.25 * abs_err * fact,
                                  splits=splits)
    value = _I_POW[m % 4] * val / fact
    return value, est / fact + _tail_bound(m, sigma)


def c_m_with_err(sigma: float, m: int,
                 prec: EvalPrecision = DEFAULT_PRECISION) -> tuple[complex, float]:
    """c_m(sigma) plus an absolute error estimate (memoized)."""
    m = _check_m(m)
    if m < 1:
        raise ValidationError(f"c_m needs m >= 1, got {m}")
    sigma = float(sigma)
    if not math.isfinite(sigma):
        raise ValidationError("sigma must be finite")
    if sigma <= -1.0:
        raise ValidationError(f"c_m is provided for sigma > -1, got {sigma}")
    return _c_m_cached(m, sigma, prec.abs_err, prec.max_terms)


def c_m(sigma: float, m: int, prec: EvalPrecision = DEFAULT_PRECISION) -> complex:
    """c_m(sigma) = i^m/(m-1)! int_sigma^inf (a-sigma)^(m-1) log zeta(a) da."""
    return c_m_with_err(sigma, m, prec)[0]


# --- zero sum shared by the vertical route and the window term Y_m (m >= 1) ----

def zero_sum_polynomial(m: int, sigma: float, t: float,
                        store: ZeroStore) -> tuple[complex, float]:
    """2 pi sum_k i^(m-1-k)/((m-k)!k!) sum_{beta>sigma, 0<gamma<t} (...) term.

    Returns (value, rounding estimate).  Exactly 0 whenever no table zero
    has beta > sigma -- in particular for an on-line table and sigma >= 1/2.
    """
    m = _check_m(m)
    if m < 1:
        raise ValidationError(f"the zero sum needs m >= 1, got {m}")
    gs, bs, ms = store.gammas, store.betas, store.multiplicities
    mask = (gs > 0.0) & (gs < t) & (bs > sigma)
    if not np.any(mask):
        return 0j, 0.0
    db = bs[mask] - sigma
    dt = t - gs[mask]
    mult = ms[mask].astype(float)
    total = 0j
    mag = 0.0
    for k in range(m):
        coef = _TWO_PI * _I_POW[(m - 1 - k) % 4] / (
            math.factorial(m - k) * math.factorial(k))
        inner = float(np.sum(mult * db ** (m - k) * dt ** k))
        total += coef * inner
        mag += abs(coef) * abs(inner)
    return total, 1e-15 * mag * (1 + db.size)


# --- vertical route -------------------------------------------------------------

def eta_vertical(s, m: int, store: ZeroStore | None = None,
                 prec: EvalPrecision = DEFAULT_PRECISION) -> EtaValue:
    """eta_m(s) by the vertical integral plus explicit zero sum.

    Valid for sigma >= 1/2 and 0 <= t <= table height.  m = 0 degenerates
    to log_zeta, t = 0 to c_m(sigma).
    """
    m = _check_m(m)
    z = complex(s)
    if store is None:
        store = builtin_store()
    if m == 0:
        val, est = log_zeta_with_err(z, prec, store)
        return EtaValue(s=z, m=0, value=val, route="vertical", est_err=est)
    sigma, t = z.real, z.imag
    if t < 0.0:
        raise ValidationError("eta_m with m >= 1 requires t >= 0")
    if sigma < 0.5:
        raise ValidationError(
            f"the vertical representation needs sigma >= 1/2, got {sigma}")
    if t < 1e-9:
        val, est = c_m_with_err(sigma, m, prec)
        return EtaValue(s=z, m=m, value=val, route="vertical", est_err=est)

    path = branch_path(t, min(sigma, SIGMA_START - 1.0), prec, store)
    t_eff = path.t

    def g(alpha: float) -> tuple[complex, float]:
        v, e = _ray_log(path, alpha, prec)
        w = (alpha - sigma) ** (m - 1)
        return w * v, abs(w) * e

    hi = sigma + _tail_cut(m)
    fact = math.factorial(m - 1)
    splits = [x for x in (1.0, SIGMA_START) if sigma < x < hi]
    val, est = integrate_adaptive(g, sigma, hi, 0.25 * prec.abs_err * fact,
                                  splits=splits)
    zsum, zs_est = zero_sum_polynomial(m, sigma, t_eff, store)
    value = _I_POW[m % 4] * val / fact + zsum
    est_err = est / fact + _tail_bound(m, sigma) + zs_est
    return EtaValue(s=z, m=m, value=value, route="vertical", est_err=est_err)


# --- iterated route: windowed sweep along the horizontal segment ---------------

_PANEL_MAX = 0.5        # Gauss panel width cap on the u-line
_WINDOW = 1.5           # model terms kept within this distance of a panel
_CONT_STEP = 0.9        # max |G step| accepted without midpoint insertion
_SWEEP_BUDGET = 400_000

# 10- and 20-point Gauss nodes merged into one ascending template.
_MERGED_NODES = sorted(
    [(float(x), 10, float(w)) for x, w in zip(*gauss_rule(10))]
    + [(float(x), 20, float(w)) for x, w in zip(*gauss_rule(20))])


class _Sweep:
    """Branch tracker for log zeta(sigma + iu), u ascending, local model."""

    def __init__(self, sigma: float, prec: EvalPrecision):
        self.sigma = float(sigma)
        self.prec = prec
        self.evals = 0
        self.u_prev = 0.0
        self.g_prev = 0j
        self.node_err = 0.0
        self.wmu = np.empty(0)
        self.wcc = np.empty(0)
        self.wgam = np.empty(0)
        self.has_pole = False
        self.anchored = False

    def model(self, u: float, include_pole: bool = True) -> complex:
        out = 0j
        if self.wgam.size:
            out += complex(np.sum(
                self.wmu * np.log(self.wcc + 1j * (u - self.wgam))))
        if self.has_pole and include_pole:
            out -= cmath.log(complex(self.sigma - 1.0, u))
        return out

    def set_window(self, wmu, wcc, wgam, has_pole: bool) -> None:
        old = self.model(self.u_prev) if self.anchored else 0j
        self.wmu, self.wcc, self.wgam = wmu, wcc, wgam
        self.has_pole = has_pole
        if self.anchored:
            # Rebasing against the new model keeps the tracked branch exact:
            # the swapped terms are principal logs of points >= 1 away.
            self.g_prev = self.g_prev + old - self.model(self.u_prev)

    def anchor(self) -> None:
        """Branch value at u = 0 from the closed form (limit from above)."""
        if abs(self.sigma - 1.0) <= 1e-9:
            # log zeta + Log(s-1) -> log((s-1) zeta(s)) -> 0 at s = 1.
            g0 = -self.model(0.0, include_pole=False)
        else:
            f0, _ = log_zeta_with_err(complex(self.sigma, 0.0), self.prec)
            g0 = f0 - self.model(0.0)
        self.u_prev, self.g_prev = 0.0, g0
        self.anchored = True

    def eval(self, u: float, depth: int = 0) -> complex:
        """G(u) = log zeta(sigma+iu) - model(u), branch pinned by continuity."""
        self.evals += 1
        if self.evals > _SWEEP_BUDGET:
            raise BudgetExceeded("winding sweep exceeded its evaluation budget")
        z = complex(self.sigma, u)
        val, _, rem = _zeta_em(z, self.prec, want_deriv=False)
        if val == 0:
            raise OnSingularity(f"zeta({z}) = 0 at working precision")
        principal = cmath.log(val) - self.model(u)
        k = round((self.g_prev.imag - principal.imag) / _TWO_PI)
        g_here = principal + _TWO_PI * 1j * k
        if abs(g_here - self.g_prev) > _CONT_STEP:
            if depth > 60 or not (self.u_prev < 0.5 * (self.u_prev + u) < u):
                raise NumericalError(
                    f"winding sweep stalled near u = {u} (sigma = {self.sigma})")
            self.eval(0.5 * (self.u_prev + u), depth + 1)
            return self.eval(u, depth + 1)
        self.u_prev, self.g_prev = u, g_here
        self.node_err = rem / abs(val) + 1e-15 * (1.0 + abs(g_here))
        return g_here


def _line_panels(t_eff: float, store: ZeroStore) -> list[tuple[float, float]]:
    """Panels over [0, t_eff], edges at interior ordinates, width <= 1/2."""
    gs = store.gammas
    inner = gs[(gs > 0.0) & (gs < t_eff)]
    edges = np.unique(np.concatenate(([0.0, t_eff], inner)))
    panels = []
    for a, b in zip(edges[:-1], edges[1:]):
        n_sub = max(1, int(math.ceil((b - a) / _PANEL_MAX)))
        sub = np.linspace(a, b, n_sub + 1)
        panels.extend(zip(sub[:-1], sub[1:]))
    return panels


def _segment_poly_log(j_max: int, a: float, b: float, c: float) -> list[complex]:
    """[int_a^b w^j Log(c+iw) dw for j = 0..j_max] on a cut-free segment.

    An endpoint exactly at w = 0 takes the principal value approached from
    the segment's interior (signed zero), which is the side the c <= 0 cut
    is viewed from; its boundary term w^(j+1) Log vanishes and is skipped.
    """
    if a == b:
        return [0j] * (j_max + 1)
    interior = math.copysign(1.0, a + b)

    def plog(w: float) -> complex:
        ww = w if w != 0.0 else math.copysign(0.0, interior)
        return cmath.log(complex(c, ww))

    la = plog(a) if (c != 0.0 or a != 0.0) else 0j
    lb = plog(b) if (c != 0.0 or b != 0.0) else 0j
    # J_k = int w^k/(c+iw) dw; J_0 is never consumed when c = 0 (each L_j
    # uses only J_{j+1}, j >= 0).
    js = [0j] * (j_max + 2)
    if c == 0.0:
        for k in range(1, j_max + 2):
            js[k] = (b ** k - a ** k) / (1j * k)
    else:
        js[0] = (lb - la) / 1j
        for k in range(1, j_max + 2):
            js[k] = ((b ** k - a ** k) / k - c * js[k - 1]) / 1j
    out = []
    for j in range(j_max + 1):
        boundary = 0j
        if b != 0.0:
            boundary += b ** (j + 1) * lb
        if a != 0.0:
            boundary -= a ** (j + 1) * la
        out.append((boundary - 1j * js[j + 1]) / (j + 1))
    return out


def _model_piece(m: int, t_eff: float, a: float, b: float,
                 mu: float, c: float, gam: float) -> tuple[complex, float]:
    """mu int_a^b (t-u)^(m-1) Log(c + i(u-gamma)) du and its |term| mass."""
    wa, wb = a - gam, b - gam
    if c <= 0.0 and wa < 0.0 < wb:
        segs = [(wa, 0.0), (0.0, wb)]
    else:
        segs = [(wa, wb)]
    ls = [0j] * m
    for lo, hi in segs:
        for j, v in enumerate(_segment_poly_log(m - 1, lo, hi, c)):
            ls[j] += v
    base = t_eff - gam
    total = 0j
    mag = 0.0
    for j in range(m):
        term = math.comb(m - 1, j) * base ** (m - 1 - j) * (-1.0) ** j * ls[j]
        total += term
        mag += abs(term)
    return mu * total, abs(mu) * mag


def _iterated_integral(sigma: float, t_eff: float, m: int, store: ZeroStore,
                       prec: EvalPrecision) -> tuple[complex, float]:
    """1/(m-1)! int_0^t (t-u)^(m-1) log zeta(sigma+iu) du by the sweep."""
    gs, bs, ms = store.gammas, store.betas, store.multiplicities
    near = (gs > 0.0) & (gs <= t_eff + 2.0)
    mu_all = ms[near].astype(float)
    cc_all = sigma - bs[near]
    gam_all = gs[near]

    sweep = _Sweep(sigma, prec)
    panels = _line_panels(t_eff, store)
    total_g = 0j
    analytic = 0j
    disc = 0.0
    node_est = 0.0
    mag = 0.0
    for p, (a, b) in enumerate(panels):
        sel = (gam_all >= a - _WINDOW) & (gam_all <= b + _WINDOW)
        has_pole = a <= _WINDOW
        sweep.set_window(mu_all[sel], cc_all[sel], gam_all[sel], has_pole)
        if p == 0:
            sweep.anchor()
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        v10 = 0j
        v20 = 0j
        for x, rule, w in _MERGED_NODES:
            u = mid + half * x
            g_val = sweep.eval(u)
            weighted = w * half * (t_eff - u) ** (m - 1)
            if rule == 10:
                v10 += weighted * g_val
            else:
                v20 += weighted * g_val
                node_est += abs(weighted) * sweep.node_err
                mag += abs(weighted) * abs(g_val)
        total_g += v20
        disc += abs(v20 - v10)
        terms = list(zip(mu_all[sel], cc_all[sel], gam_all[sel]))
        if has_pole:
            terms.append((-1.0, sigma - 1.0, 0.0))
        for mu, c, gam in terms:
            piece, piece_mag = _model_piece(m, t_eff, a, b, mu, c, gam)
            analytic += piece
            mag += piece_mag

    # The sweep's branch must land on the horizontal-ray branch at u = t.
    # (Skipped for very short sweeps, where the ray march would itself pass
    # within t of the pole; a winding slip needs room to happen anyway.)
    if t_eff >= 0.05:
        g_end = sweep.eval(t_eff)
        f_end = g_end + sweep.model(t_eff)
        f_auth, auth_est = log_zeta_with_err(complex(sigma, t_eff), prec, store)
        if abs(f_end - f_auth) > max(0.5, 100.0 * auth_est):
            raise NumericalError(
                f"winding sweep disagrees with the ray branch at t = {t_eff}: "
                f"{f_end} vs {f_auth}")

    fact = math.factorial(m - 1)
    value = (total_g + analytic) / fact
    est = (disc + node_est + 2e-16 * mag) / fact + 1e-15 * (1.0 + abs(value))
    return value, est


def eta_iterated(s, m: int, store: ZeroStore | None = None,
                 prec: EvalPrecision = DEFAULT_PRECISION) -> EtaValue:
    """eta_m(s) from the definitional t-integration, nested integrals unrolled.

    m = 0 is log_zeta; t = 0 is c_m(sigma).  Requires sigma > -1 and
    0 <= t <= table height - 2.5 (the sweep's model needs zeros slightly
    above t).
    """
    m = _check_m(m)
    z = complex(s)
    if store is None:
        store = builtin_store()
    if m == 0:
        val, est = log_zeta_with_err(z, prec, store)
        return EtaValue(s=z, m=0, value=val, route="iterated", est_err=est)
    sigma, t = z.real, z.imag
    if not math.isfinite(sigma) or not math.isfinite(t):
        raise ValidationError(f"s must be finite, got {s!r}")
    if t < 0.0:
        raise ValidationError("eta_m with m >= 1 requires t >= 0")
    if sigma <= -1.0:
        raise ValidationError(f"the iterated route needs sigma > -1, got {sigma}")
    if t > store.t_max - 2.5:
        raise ValidationError(
            f"t={t} needs table zeros up to t+2, above height {store.t_max}")

    poly = 0j
    est = 0.0
    poly_mag = 0.0
    t_eff = _snap_t(t, store) if t >= 1e-9 else t
    for j in range(1, m + 1):
        cj, cj_est = c_m_with_err(sigma, j, prec)
        w = t_eff ** (m - j) / math.factorial(m - j)
        poly += cj * w
        est += cj_est * w
        poly_mag += abs(cj) * w
    value = poly
    est += 5e-16 * poly_mag
    if t >= 1e-9:
        ival, iest = _iterated_integral(sigma, t_eff, m, store, prec)
        value += ival
        est += iest
    return EtaValue(s=z, m=m, value=value, route="iterated", est_err=est)


def route_check(s, m: int, store: ZeroStore | None = None,
                prec: EvalPrecision = DEFAULT_PRECISION) -> dict:
    """Evaluate both routes; they must agree within combined estimates."""
    vert = eta_vertical(s, m, store, prec)
    iter_ = eta_iterated(s, m, store, prec)
    diff = abs(vert.value - iter_.value)
    tol = vert.est_err + iter_.est_err + 1e-12 * (1.0 + abs(vert.value))
    return {
        "vertical": vert,
        "iterated": iter_,
        "difference": diff,
        "tolerance": tol,
        "agree": diff <= tol,
    }


def s_m(t: float, m: int, store: ZeroStore | None = None,
        prec: EvalPrecision = DEFAULT_PRECISION) -> float:
    """S_m(t) = Im(eta_m(1/2 + it))/pi; S_0 is the argument function S(t)."""
    m = _check_m(m)
    t = float(t)
    if m == 0:
        return big_s(t, prec, store)
    return eta_vertical(complex(0.5, t), m, store, prec).value.imag / math.pi
