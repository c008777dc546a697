"""Table of nontrivial zeros: ingestion, windowed queries, hypothetical
zeros off the critical line, and the zero-counting cross-check.

A store is immutable.  All heights are ordinates gamma > 0; zeros at -gamma
exist by reflection but are never stored, and queries state explicitly when
they account for them.  sigma_Xt implements the height- and table-dependent
abscissa

    sigma_{X,t} = 1/2 + 2 max { beta - 1/2, 2/log X }

with the max over zeros rho = beta + i gamma satisfying
|t - gamma| <= X^(3(beta-1/2)) / log X.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import (BeyondTable, EmptyFile, NotSorted, OutOfStrip,
                     ParseError, ValidationError)
from .precision import DEFAULT_PRECISION, EvalPrecision

#: Ordinate queries closer than this to a tabulated gamma use the one-sided
#: limit convention (approach from below for gamma > 0).
ORDINATE_TOL = 1e-6

#: Offset applied when the limit convention kicks in.
ORDINATE_OFFSET = 1e-9


@dataclass(frozen=True)
class ZeroRecord:
    """One zero rho = beta + i gamma with gamma > 0."""

    gamma: float
    beta: float = 0.5
    multiplicity: int = 1


@dataclass(frozen=True)
class RvmfReport:
    """Result of the zero-counting cross-check at height T."""

    n_store: int
    n_rvmf: float
    delta: float


class ZeroStore:
    """Immutable, ordinate-sorted zero table."""

    def __init__(self, records: list[ZeroRecord], source: str):
        if not records:
            raise EmptyFile("zero store needs at least one record")
        self._gammas = np.array([r.gamma for r in records], dtype=np.float64)
        self._betas = np.array([r.beta for r in records], dtype=np.float64)
        self._mults = np.array([r.multiplicity for r in records], dtype=np.int64)
        if np.any(np.diff(self._gammas) < 0):
            raise ValidationError("records must be sorted by gamma")
        for arr in (self._gammas, self._betas, self._mults):
            arr.setflags(write=False)
        self.source = source

    # -- basic views ---------------------------------------------------------

    @property
    def gammas(self) -> np.ndarray:
        return self._gammas

    @property
    def betas(self) -> np.ndarray:
        return self._betas

    @property
    def multiplicities(self) -> np.ndarray:
        return self._mults

    @property
    def t_max(self) -> float:
        return float(self._gammas[-1])

    def __len__(self) -> int:
        return len(self._gammas)

    @property
    def all_on_line(self) -> bool:
        return bool(np.all(self._betas == 0.5))

    def record(self, i: int) -> ZeroRecord:
        return ZeroRecord(float(self._gammas[i]), float(self._betas[i]),
                          int(self._mults[i]))

    # -- queries ---------------------------------------------------------------

    def count_below(self, t: float) -> int:
        """Zeros with gamma < t, counted with multiplicity."""
        hi = int(np.searchsorted(self._gammas, t, side="left"))
        return int(self._mults[:hi].sum())

    def count_window(self, t: float, h: float) -> int:
        """Zeros with |t - gamma| <= h (closed window), with multiplicity.

        Raises BeyondTable when the window pokes above the table.
        """
        if h < 0:
            raise ValidationError(f"window half-width must be >= 0, got {h}")
        if t + h > self.t_max:
            raise BeyondTable(
                f"window [{t - h}, {t + h}] exceeds table height {self.t_max}")
        lo = int(np.searchsorted(self._gammas, t - h, side="left"))
        hi = int(np.searchsorted(self._gammas, t + h, side="right"))
        return int(self._mults[lo:hi].sum())

    def nearest_gamma(self, t: float) -> float:
        """Tabulated ordinate closest to t (reflections not considered)."""
        i = int(np.searchsorted(self._gammas, t))
        best = None
        for j in (i - 1, i):
            if 0 <= j < len(self._gammas):
                g = float(self._gammas[j])
                if best is None or abs(t - g) < abs(t - best):
                    best = g
        return best

    def zero_distance(self, s: complex) -> float:
        """Distance from s to the nearest zero, reflections included."""
        t = s.imag
        d = math.inf
        for tt in (t, -t):
            i = int(np.searchsorted(self._gammas, tt))
            for j in (i - 1, i):
                if 0 <= j < len(self._gammas):
                    d = min(d, abs(complex(s.real, tt)
                                   - complex(self._betas[j], self._gammas[j])))
        return d

    def lorentz_sum(self, t: float) -> float:
        """sum over zeros (both signs of gamma) of 1/(1 + (t - gamma)^2)."""
        g = self._gammas
        m = self._mults
        return float((m / (1.0 + (t - g) ** 2)).sum()
                     + (m / (1.0 + (t + g) ** 2)).sum())

    # -- construction of derived stores ---------------------------------------

    def inject_hypothetical(self, beta: float, gamma: float,
                            multiplicity: int = 1) -> "ZeroStore":
        """New store with one additional zero off the critical line.

        The conjugate-reflected zero at 1 - beta is NOT added; callers that
        want a functional-equation-symmetric configuration must inject both.
        """
        if not (0.0 < beta < 1.0):
            raise OutOfStrip(f"beta must lie in (0, 1), got {beta}")
        if not (gamma > 0.0 and math.isfinite(gamma)):
            raise OutOfStrip(f"gamma must be positive and finite, got {gamma}")
        if multiplicity < 1:
            raise OutOfStrip(f"multiplicity must be >= 1, got {multiplicity}")
        records = [self.record(i) for i in range(len(self))]
        records.append(ZeroRecord(float(gamma), float(beta), int(multiplicity)))
        records.sort(key=lambda r: r.gamma)
        return ZeroStore(records, source=f"{self.source}+hypothetical"
                                         f"({beta},{gamma},x{multiplicity})")

    # -- sigma_{X,t} -----------------------------------------------------------

    def sigma_xt(self, t: float, x: float) -> float:
        if x < 3.0:
            raise ValidationError(f"X >= 3 required, got {x}")
        logx = math.log(x)
        widths = np.power(x, 3.0 * (self._betas - 0.5)) / logx
        if t + float(widths.max()) > self.t_max:
            raise BeyondTable(
                f"candidate window at t={t} exceeds table height {self.t_max}")
        inside = np.abs(t - self._gammas) <= widths
        peak = 2.0 / logx
        if np.any(inside):
            peak = max(peak, float((self._betas[inside] - 0.5).max()))
        return 0.5 + 2.0 * peak

    # -- serialization ---------------------------------------------------------

    def dump_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["gamma", "beta", "multiplicity"])
        for i in range(len(self)):
            w.writerow([repr(float(self._gammas[i])),
                        repr(float(self._betas[i])), int(self._mults[i])])
        return buf.getvalue()


# --- ingestion ----------------------------------------------------------------

def _parse_plain(lines: list[str]) -> list[ZeroRecord]:
    records: list[ZeroRecord] = []
    prev = -math.inf
    for ln, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            gamma = float(text)
        except ValueError:
            raise ParseError(f"expected one ordinate, got {text!r}", ln) from None
        if not (math.isfinite(gamma) and gamma > 0):
            raise ParseError(f"ordinate must be positive and finite, got {gamma}", ln)
        if gamma <= prev:
            raise NotSorted(
                f"ordinate {gamma} not strictly above previous {prev}", ln)
        prev = gamma
        records.append(ZeroRecord(gamma))
    return records


def _parse_csv(lines: list[str]) -> list[ZeroRecord]:
    reader = csv.reader(lines)
    records: list[ZeroRecord] = []
    prev = -math.inf
    header: list[str] | None = None
    for ln, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if row and row[0].lstrip().startswith("#"):
            continue
        if header is None:
            header = [c.strip().lower() for c in row]
            if header != ["gamma", "beta", "multiplicity"]:
                raise ParseError(
                    f"expected header gamma,beta,multiplicity, got {row!r}", ln)
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", ln)
        try:
            gamma, beta, mult = float(row[0]), float(row[1]), int(row[2])
        except ValueError:
            raise ParseError(f"bad record {row!r}", ln) from None
        if not (math.isfinite(gamma) and gamma > 0):
            raise ParseError(f"ordinate must be positive and finite, got {gamma}", ln)
        if not (0.0 < beta < 1.0):
            raise ParseError(f"beta must lie in (0, 1), got {beta}", ln)
        if mult < 1:
            raise ParseError(f"multiplicity must be >= 1, got {mult}", ln)
        if gamma <= prev:
            raise NotSorted(
                f"ordinate {gamma} not strictly above previous {prev}", ln)
        prev = gamma
        records.append(ZeroRecord(gamma, beta, mult))
    if header is None:
        raise EmptyFile("csv zero table has no header")
    return records


def load_zeros(path: str, fmt: str = "plain-ordinates") -> ZeroStore:
    """Read a zero table.

    fmt 'plain-ordinates': one ordinate per line, '#' starts a comment.
    fmt 'csv': header gamma,beta,multiplicity.
    Ordinates must be strictly increasing (duplicates are rejected).
    """
    with open(path, "r") as fh:
        lines = fh.readlines()
    if fmt == "plain-ordinates":
        records = _parse_plain(lines)
    elif fmt == "csv":
        records = _parse_csv(lines)
    else:
        raise ValidationError(f"unknown zero-table format {fmt!r}")
    if not records:
        raise EmptyFile(f"no records in {path}")
    return ZeroStore(records, source=str(path))


@lru_cache(maxsize=1)
def builtin_store() -> ZeroStore:
    """The bundled table (first ~1650 ordinates, heights up to ~2150)."""
    ref = resources.files("zeta_eta").joinpath("data/zeros_t2100.txt")
    with resources.as_file(ref) as path:
        store = load_zeros(str(path), "plain-ordinates")
    store.source = "builtin"
    return store


# --- zero-counting cross-check -------------------------------------------------

def rvmf_check(store: ZeroStore, t_height: float,
               prec: EvalPrecision = DEFAULT_PRECISION) -> RvmfReport:
    """Compare the table count below T with the counting formula

        N(T) = theta(T)/pi + 1 + S(T),

    theta the Riemann-Siegel angle and S(T) = Im log zeta(1/2 + iT) / pi on
    the continued branch.  T must not sit on an ordinate (within 1e-6) and
    must stay within the table.
    """
    from .branch import big_s
    from .zeta import theta as rs_theta

    if t_height > store.t_max:
        raise BeyondTable(
            f"T={t_height} above table height {store.t_max}")
    if t_height < 2.0:
        raise ValidationError(f"T must be >= 2, got {t_height}")
    g = store.nearest_gamma(t_height)
    if g is not None and abs(t_height - g) <= ORDINATE_TOL:
        raise ValidationError(
            f"T={t_height} sits on ordinate {g}; move off by > {ORDINATE_TOL}")
    n_store = store.count_below(t_height)
    n_rvmf = rs_theta(t_height) / math.pi + 1.0 + big_s(t_height, prec, store)
    return RvmfReport(n_store=n_store, n_rvmf=n_rvmf,
                      delta=n_rvmf - n_store)


# --- functional wrappers (operation names) --------------------------------------

def count_window(store: ZeroStore, t: float, h: float) -> int:
    return store.count_window(t, h)


def sigma_xt(store: ZeroStore, t: float, x: float) -> float:
    return store.sigma_xt(t, x)


def inject_hypothetical(store: ZeroStore, beta: float, gamma: float,
                        multiplicity: int = 1) -> ZeroStore:
    return store.inject_hypothetical(beta, gamma, multiplicity)
