"""Sampling of the triangle T: N maps, bound-agreement maps and area estimates.

Points are drawn uniformly from T (0 < q < p, p + q < 1) by rejection from
the unit square, or laid on a regular grid. Each point is classified in
double precision by the compiled kernel. Points whose classification could be
changed by rounding are recomputed exactly on the rational value of the
double, so every reported N is exact for the point actually sampled.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Optional, Sequence, TextIO

import numpy as np

from . import kernels
from .bounds import bound_set
from .model import GameParams
from .numerics import CoinDuelError
from .optimizer import optimal_n

log = logging.getLogger(__name__)

DEFAULT_N_CAP = 10_000
CHUNK = 65_536
CSV_HEADER = "q,p,N,delta,bounds_agree,lower_correct,improved_agree,h_correct"


class DegenerateDiagonal(CoinDuelError, ValueError):
    pass


class BoundViolation(CoinDuelError, AssertionError):
    pass


@dataclass(frozen=True)
class RescaledPoint:
    s: float
    h: float


def rescale(q, p) -> RescaledPoint:
    """(q, p) -> (p + q, 1/(p - q))."""
    if p == q:
        raise DegenerateDiagonal("rescaling is undefined on p = q")
    return RescaledPoint(p + q, 1 / (p - q))


@dataclass(frozen=True)
class RegionSample:
    q: float
    p: float
    N: int
    delta: int
    bounds_agree: bool
    lower_correct: bool
    improved_agree: bool
    h_correct: bool


class RegionMap(Sequence):
    """Column storage for a set of classified points.

    Indexing yields :class:`RegionSample`. Points with N beyond the cap have
    ``N == -1``, are marked in ``capped`` and count in no ratio.
    """

    def __init__(self, q: np.ndarray, p: np.ndarray, cols: Dict[str, np.ndarray], n_cap: int):
        self.q = q
        self.p = p
        self.cols = cols
        self.n_cap = n_cap
        self.capped = cols["N"] < 0
        self.recomputed = int(cols.get("recomputed", np.zeros(0, dtype=bool)).sum())

    def __len__(self) -> int:
        return len(self.q)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        c = self.cols
        return RegionSample(
            float(self.q[i]), float(self.p[i]), int(c["N"][i]), int(c["delta"][i]),
            bool(c["bounds_agree"][i]), bool(c["lower_correct"][i]),
            bool(c["improved_agree"][i]), bool(c["h_correct"][i]),
        )

    @property
    def valid(self) -> np.ndarray:
        return ~self.capped

    def fraction(self, name: str, mask: Optional[np.ndarray] = None) -> "Estimate":
        sel = self.valid if mask is None else (self.valid & mask)
        total = int(sel.sum())
        hits = int((self.cols[name] & sel).sum())
        return Estimate(hits, total)

    def fractions(self) -> Dict[str, "Estimate"]:
        """The area estimates reported by ``region-map``."""
        band = self.cols["N"] <= 500
        return {
            "simple_agree": self.fraction("simple_agree"),
            "bounds_agree": self.fraction("bounds_agree"),
            "lower_correct": self.fraction("lower_correct"),
            "n_equals_n_minus": self.fraction("n_equals_n_minus"),
            "improved_agree": self.fraction("improved_agree"),
            "h_correct": self.fraction("h_correct"),
            "n_equals_n_minus_band_500": self.fraction("n_equals_n_minus", band),
        }

    def write_csv(self, fh: TextIO, digits: int = 17) -> None:
        fh.write(CSV_HEADER + "\n")
        c = self.cols
        for i in range(len(self)):
            q = f"{self.q[i]:.{digits}g}"
            p = f"{self.p[i]:.{digits}g}"
            if self.capped[i]:
                fh.write(f"{q},{p},,,,,,\n")
                continue
            flags = ",".join(
                "1" if c[k][i] else "0" for k in ("bounds_agree", "lower_correct", "improved_agree", "h_correct")
            )
            fh.write(f"{q},{p},{c['N'][i]},{c['delta'][i]},{flags}\n")

    def write_svg(self, fh: TextIO, field: str = "N", pixels: int = 256) -> None:
        """Raster the points onto a pixels x pixels grid in the (q, p) square.

        Integer fields cycle through a small palette; boolean fields are
        drawn black and white. Intended for quick looks only.
        """
        palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"]
        values = self.cols[field]
        cells: Dict[tuple, str] = {}
        for i in np.flatnonzero(self.valid):
            cx = min(int(self.q[i] * pixels), pixels - 1)
            cy = min(int((1 - self.p[i]) * pixels), pixels - 1)
            v = values[i]
            if values.dtype == bool:
                colour = "#000000" if v else "#ffffff"
            else:
                colour = palette[int(v) % len(palette)]
            cells[(cx, cy)] = colour
        fh.write(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{pixels}" height="{pixels}" '
            f'viewBox="0 0 {pixels} {pixels}" shape-rendering="crispEdges">\n'
        )
        fh.write(f'<rect width="{pixels}" height="{pixels}" fill="#eeeeee"/>\n')
        for (cx, cy), colour in sorted(cells.items()):
            fh.write(f'<rect x="{cx}" y="{cy}" width="1" height="1" fill="{colour}"/>\n')
        fh.write("</svg>\n")


@dataclass(frozen=True)
class Estimate:
    hits: int
    total: int

    @property
    def value(self) -> float:
        return self.hits / self.total if self.total else float("nan")

    @property
    def sigma(self) -> float:
        """Binomial standard error."""
        if not self.total:
            return float("nan")
        v = self.value
        return math.sqrt(v * (1 - v) / self.total)

    def as_dict(self) -> dict:
        return {"value": self.value, "sigma": self.sigma, "hits": self.hits, "total": self.total}


# -- point generation ------------------------------------------------------------

def monte_carlo_points(count: int, seed: int):
    """``count`` uniform points of T, by rejection from the unit square."""
    rng = np.random.default_rng(seed)
    qs, ps = [], []
    have = 0
    while have < count:
        block = max(4 * (count - have) + 1024, 4096)
        q = rng.random(block)
        p = rng.random(block)
        keep = (q < p) & (p + q < 1)
        qs.append(q[keep])
        ps.append(p[keep])
        have += int(keep.sum())
    return np.concatenate(qs)[:count], np.concatenate(ps)[:count]


def grid_points(resolution: int):
    """Cell centres of a resolution x resolution grid that fall inside T."""
    c = (np.arange(resolution) + 0.5) / resolution
    q, p = np.meshgrid(c, c, indexing="ij")
    keep = (q < p) & (p + q < 1)
    return q[keep], p[keep]


# -- classification ----------------------------------------------------------------

def _exact_row(q: float, p: float, n_cap: int):
    params = GameParams(Fraction(q), Fraction(p))
    b = bound_set(params)
    if b.upper_simple > n_cap + 2:
        return (-1,) * 7
    n = optimal_n(params).N
    return (n, b.lower_simple_strict, b.upper_simple, b.lower_linear,
            b.lower_improved, b.upper_improved, b.h_approx)


def classify(q: np.ndarray, p: np.ndarray, n_cap: int = DEFAULT_N_CAP, workers: int = 1) -> RegionMap:
    """Classify every point and assemble the derived boolean columns."""
    q = np.ascontiguousarray(q, dtype=np.float64)
    p = np.ascontiguousarray(p, dtype=np.float64)
    starts = list(range(0, len(q), CHUNK)) or [0]

    def run(i):
        return kernels.classify_batch(q[i:i + CHUNK], p[i:i + CHUNK], n_cap)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(i) for i in starts]
    raw = {k: np.concatenate([part[k] for part in parts]) for k in kernels.BATCH_FIELDS + ("flagged",)}

    flagged = np.flatnonzero(raw["flagged"])
    if len(flagged):
        log.info("recomputing %d of %d points exactly", len(flagged), len(q))
    for i in flagged:
        row = _exact_row(float(q[i]), float(p[i]), n_cap)
        for name, v in zip(kernels.BATCH_FIELDS, row):
            raw[name][i] = v

    N = raw["N"]
    valid = N >= 0
    lower = np.maximum(raw["lower_strict"], raw["linear"])
    lower_all = np.maximum(lower, raw["n_minus"])
    upper_all = np.minimum(raw["upper"], raw["n_plus"])
    bad = valid & ((N < lower_all) | (N > upper_all))
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise BoundViolation(
            f"N={N[i]} outside [{lower_all[i]}, {upper_all[i]}] at q={q[i]!r}, p={p[i]!r}"
        )
    cols = {
        "N": N,
        "delta": np.where(valid, N - raw["lower_strict"], -1),
        "simple_agree": valid & (raw["lower_strict"] == raw["upper"]),
        "bounds_agree": valid & (lower == raw["upper"]),
        "lower_correct": valid & (N == lower),
        "improved_agree": valid & (raw["n_minus"] == raw["n_plus"]),
        "n_equals_n_minus": valid & (N == raw["n_minus"]),
        "h_correct": valid & (raw["h"] == N),
        "recomputed": raw["flagged"],
    }
    for name in kernels.BATCH_FIELDS[1:]:
        cols[name] = raw[name]
    return RegionMap(q, p, cols, n_cap)


def sample_region(
    count: int,
    mode: str = "monte-carlo",
    seed: int = 0,
    n_cap: int = DEFAULT_N_CAP,
    workers: int = 1,
) -> RegionMap:
    """Classify ``count`` Monte Carlo points (or a ``count`` x ``count`` grid).

    Deterministic for a fixed seed; the chunking does not depend on
    ``workers``.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if mode == "monte-carlo":
        q, p = monte_carlo_points(count, seed)
    elif mode == "grid":
        q, p = grid_points(count)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return classify(q, p, n_cap, workers)


def rescaled_columns(region: RegionMap) -> Iterator[RescaledPoint]:
    for q, p in zip(region.q, region.p):
        yield rescale(float(q), float(p))
