"""Exact point counts over F_q.

Three counting routes live here: brute force over all n x n matrices,
pairs of Grassmannian points with disjoint Pluecker supports, and strata of
Grass(n-2, n) cut out by a graph.  Every count is exhaustive.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import batched
from .errors import EmptyLocusError, check_budget
from .finite_field import as_modulus
from .grassmannian import coordinate_chunks, support_masks
from .graphs import SimpleGraph, format_edge_list, graph_masks

METHODS = ("matrix-bruteforce", "grassmann-pairs", "graph-stratum")
CSV_FIELDS = ("n", "r", "t", "q", "count", "method", "elapsed_ms")

# lower digits of the matrix index are enumerated in blocks of at most this many
BLOCK_LIMIT = 1 << 17


@dataclass(frozen=True)
class StratumSpec:
    n: int
    r: int | str
    t: int
    q: int

    def __post_init__(self):
        as_modulus(self.q)
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 1 <= self.t <= self.n:
            raise ValueError(f"need 1 <= t <= n, got t={self.t}, n={self.n}")
        if self.r != "any" and not (isinstance(self.r, int) and 0 <= self.r <= self.n):
            raise ValueError(f"r must be 'any' or in 0..{self.n}, got {self.r!r}")

    @classmethod
    def parse(cls, n: int, r: str | int, t: int, q: int) -> StratumSpec:
        if isinstance(r, str) and r != "any":
            r = int(r)
        return cls(n, r, t, q)


@dataclass(frozen=True)
class CensusRecord:
    spec: StratumSpec
    count: int
    method: str
    elapsed_ms: int = 0
    graph: str | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.count < 0:
            raise ValueError("counts are nonnegative")

    def as_dict(self) -> dict:
        d = {
            "n": self.spec.n, "r": self.spec.r, "t": self.spec.t, "q": self.spec.q,
            "count": str(self.count), "method": self.method, "elapsed_ms": self.elapsed_ms,
        }
        if self.graph is not None:
            d["graph"] = self.graph
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> CensusRecord:
        spec = StratumSpec.parse(int(d["n"]), d["r"], int(d["t"]), int(d["q"]))
        return cls(spec, int(d["count"]), d["method"], int(d["elapsed_ms"]), d.get("graph"))

    @classmethod
    def from_json(cls, text: str) -> CensusRecord:
        return cls.from_dict(json.loads(text))

    def without_timing(self) -> CensusRecord:
        return replace(self, elapsed_ms=0)


def records_to_csv(records: Iterable[CensusRecord]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for rec in records:
        w.writerow(rec.as_dict())
    return buf.getvalue()


def records_from_csv(text: str) -> list[CensusRecord]:
    return [CensusRecord.from_dict(row) for row in csv.DictReader(io.StringIO(text))]


def _ms_since(t0: float) -> int:
    return int(round((time.perf_counter() - t0) * 1000))


# ---------------------------------------------------------------------------
# brute force over matrices


@lru_cache(maxsize=8)
def _low_grid(q: int, width: int) -> np.ndarray:
    return batched.product_grid(q, width)


def _block_width(n: int, q: int, jobs: int = 1) -> int:
    """Low digits per block: at most BLOCK_LIMIT matrices, and >= 2 * jobs prefixes if possible."""
    cells = n * n
    w = 0
    while w < cells and q ** (w + 1) <= BLOCK_LIMIT:
        w += 1
    while w > 0 and q ** (cells - w) < 2 * jobs:
        w -= 1
    return w


def _count_block(mats: np.ndarray, t: int, r: int | str, q: int) -> int:
    n = mats.shape[-1]
    alive = mats
    for s in combinations(range(n), t):
        s = list(s)
        if t == 1:
            keep = alive[:, s[0], s[0]] == 0
        else:
            keep = batched.det(alive[:, s][:, :, s], q) == 0
        alive = alive[keep]
        if not len(alive):
            return 0
    if r == "any":
        return len(alive)
    return int(np.count_nonzero(batched.rank(alive, q) == r))


def _count_shard(args: tuple[int, int | str, int, int, int, int, int]) -> int:
    """Count over high-digit prefixes ``lo <= h < hi``; each prefix owns one block of q^w."""
    n, r, t, q, w, lo, hi = args
    cells = n * n
    grid = _low_grid(q, w)
    high = cells - w
    buf = np.empty((len(grid), cells), dtype=np.int64)
    buf[:, high:] = grid
    total = 0
    for h in range(lo, hi):
        if high:
            buf[:, :high] = batched.digits(np.array([h]), q, high)[0]
        total += _count_block(buf.reshape(-1, n, n), t, r, q)
    return total


def shard_ranges(n: int, q: int, jobs: int) -> list[tuple[int, int]]:
    """Split the high-digit prefixes into about 2 * jobs contiguous ranges."""
    prefixes = q ** (n * n - _block_width(n, q, jobs))
    want = max(1, min(prefixes, 2 * jobs))
    bounds = [prefixes * k // want for k in range(want + 1)]
    return [(a, b) for a, b in zip(bounds, bounds[1:]) if b > a]


def matrix_space_cost(n: int, q: int) -> int:
    return q ** (n * n) * n * n


def count_Y_bruteforce(spec: StratumSpec, jobs: int = 1) -> CensusRecord:
    """Matrices over F_q of rank r (any rank if r == 'any') whose principal t-minors vanish."""
    n, q = spec.n, spec.q
    check_budget(f"all {n}x{n} matrices over F_{q}", matrix_space_cost(n, q))
    t0 = time.perf_counter()
    w = _block_width(n, q, jobs)
    tasks = [(n, spec.r, spec.t, q, w, a, b) for a, b in shard_ranges(n, q, jobs)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_count_shard, tasks))
    else:
        parts = [_count_shard(task) for task in tasks]
    return CensusRecord(spec, sum(parts), "matrix-bruteforce", _ms_since(t0))


# ---------------------------------------------------------------------------
# Grassmannian side


def support_histogram(n: int, r: int, q: int) -> dict[int, int]:
    """Number of points of Grass(r, n)(F_q) per Pluecker support mask."""
    hist: dict[int, int] = {}
    for block in coordinate_chunks(n, r, q):
        masks, counts = np.unique(support_masks(block), return_counts=True)
        for m, c in zip(masks.tolist(), counts.tolist()):
            hist[m] = hist.get(m, 0) + c
    return hist


def count_H_pairs(n: int, t: int, q: int) -> CensusRecord:
    """Ordered pairs of Grass(t, n)(F_q) points whose coordinatewise product is zero."""
    spec = StratumSpec(n, t, t, q)
    t0 = time.perf_counter()
    hist = support_histogram(n, t, q)
    masks = np.array(sorted(hist), dtype=np.int64)
    counts = [hist[m] for m in masks.tolist()]
    total = 0
    for m, c in zip(masks.tolist(), counts):
        disjoint = (masks & m) == 0
        total += c * sum(k for k, ok in zip(counts, disjoint.tolist()) if ok)
    return CensusRecord(spec, total, "grassmann-pairs", _ms_since(t0))


def gl_order(r: int, q: int) -> int:
    if r < 1:
        raise ValueError("GL(r) needs r >= 1")
    out = 1
    for i in range(r):
        out *= q**r - q**i
    if out.bit_length() > 63:
        raise OverflowError(f"|GL({r},{q})| does not fit in 64 bits")
    return out


@dataclass(frozen=True)
class BundleCheck:
    matrices: CensusRecord
    pairs: CensusRecord
    fibre: int

    @property
    def holds(self) -> bool:
        return self.matrices.count == self.pairs.count * self.fibre

    def __bool__(self):
        return self.holds


def verify_bundle_count(n: int, t: int, q: int, jobs: int = 1) -> BundleCheck:
    lhs = count_Y_bruteforce(StratumSpec(n, t, t, q), jobs=jobs)
    rhs = count_H_pairs(n, t, q)
    return BundleCheck(lhs, rhs, gl_order(t, q))


# ---------------------------------------------------------------------------
# graph strata


def graph_histogram(n: int, q: int) -> dict[int, int]:
    """Number of points of Grass(n-2, n)(F_q) per graph edge mask."""
    hist: dict[int, int] = {}
    for block in coordinate_chunks(n, n - 2, q):
        masks, counts = np.unique(graph_masks(block, n), return_counts=True)
        for m, c in zip(masks.tolist(), counts.tolist()):
            hist[m] = hist.get(m, 0) + c
    return hist


def _stratum_from_histogram(hist: dict[int, int], edge_mask: int) -> int:
    return sum(c for m, c in hist.items() if m & edge_mask == edge_mask)


def count_graph_stratum(n: int, g: SimpleGraph, q: int) -> CensusRecord:
    """Points of Grass(n-2, n)(F_q) whose graph contains ``g``."""
    if g.n != n:
        raise ValueError(f"graph has {g.n} vertices, expected {n}")
    t0 = time.perf_counter()
    count = _stratum_from_histogram(graph_histogram(n, q), g.edge_mask())
    return CensusRecord(StratumSpec(n, n - 2, n - 2, q), count, "graph-stratum",
                        _ms_since(t0), format_edge_list(g))


def graph_stratum_counts(n: int, graphs: Sequence[SimpleGraph], q: int) -> list[CensusRecord]:
    """Like :func:`count_graph_stratum` for many graphs off a single scan."""
    t0 = time.perf_counter()
    hist = graph_histogram(n, q)
    ms = _ms_since(t0)
    spec = StratumSpec(n, n - 2, n - 2, q)
    return [
        CensusRecord(spec, _stratum_from_histogram(hist, g.edge_mask()), "graph-stratum",
                     ms, format_edge_list(g))
        for g in graphs
    ]


class DimensionEstimate(NamedTuple):
    dimension: int
    residual: float
    raw: float


def estimate_dimension(records: Sequence[CensusRecord]) -> DimensionEstimate:
    """Slope of log(count) against log(q) through the two largest primes."""
    by_q = {}
    for rec in records:
        by_q[rec.spec.q] = rec
    if len(by_q) < 2:
        raise ValueError("need counts at two or more distinct primes")
    q1, q2 = sorted(by_q)[-2:]
    c1, c2 = by_q[q1].count, by_q[q2].count
    for q, c in ((q1, c1), (q2, c2)):
        if c == 0:
            raise EmptyLocusError(f"locus empty at q={q}; increase q or report codim = inf")
    d = math.log(c2 / c1) / math.log(q2 / q1)
    return DimensionEstimate(round(d), abs(d - round(d)), d)
