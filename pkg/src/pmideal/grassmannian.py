"""Pluecker coordinates, normal forms and enumeration of Grass(r, n)(F_q).

A point is stored by its Pluecker vector: the maximal minors of an n x r
matrix whose columns span the subspace, indexed by r-subsets of {1..n} in
lexicographic order and scaled so the first nonzero coordinate is 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterator, Sequence

import numpy as np

from . import batched
from .errors import ModulusMismatch, SingularMatrixError, check_budget
from .exact_matrix import (
    ExactMatrix,
    IndexLike,
    IndexSet,
    _labels,
    det_mod,
    inverse,
    rank,
    rref_mod,
)
from .finite_field import FieldElement, PrimeModulus, as_modulus


def gaussian_binomial(n: int, r: int, q: int) -> int:
    """Number of r-dimensional subspaces of F_q^n."""
    if r < 0 or r > n:
        return 0
    num = den = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@dataclass(frozen=True)
class SubsetIndexer:
    n: int
    r: int

    def __post_init__(self):
        if not 0 < self.r <= self.n:
            raise ValueError(f"need 0 < r <= n, got r={self.r}, n={self.n}")

    @property
    def size(self) -> int:
        return comb(self.n, self.r)

    @property
    def subsets(self) -> tuple[tuple[int, ...], ...]:
        return _subsets(self.n, self.r)

    def rank(self, s: IndexLike) -> int:
        """Lexicographic position of an r-subset (1-based labels)."""
        labels = _labels(s)
        if len(labels) != self.r:
            raise ValueError(f"{labels} is not an {self.r}-subset")
        pos = 0
        prev = 0
        for k, x in enumerate(labels):
            for y in range(prev + 1, x):
                pos += comb(self.n - y, self.r - k - 1)
            prev = x
        return pos

    def unrank(self, pos: int) -> tuple[int, ...]:
        if not 0 <= pos < self.size:
            raise IndexError(pos)
        out = []
        x = 1
        for k in range(self.r):
            while True:
                block = comb(self.n - x, self.r - k - 1)
                if pos < block:
                    break
                pos -= block
                x += 1
            out.append(x)
            x += 1
        return tuple(out)


@lru_cache(maxsize=None)
def _subsets(n: int, r: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(1, n + 1), r))


def canonicalize(coords: Sequence[int], q: int) -> tuple[int, ...]:
    lead = next((c for c in coords if c % q), None)
    if lead is None:
        raise ValueError("Pluecker vector is identically zero")
    inv = pow(lead, -1, q)
    return tuple(c * inv % q for c in coords)


@dataclass(frozen=True)
class PluckerVector:
    indexer: SubsetIndexer
    coords: tuple[int, ...]
    modulus: PrimeModulus

    def __post_init__(self):
        if len(self.coords) != self.indexer.size:
            raise ValueError(
                f"{len(self.coords)} coordinates for Grass({self.indexer.r},{self.indexer.n})"
            )
        if not any(self.coords):
            raise ValueError("Pluecker vector is identically zero")

    @classmethod
    def from_coords(cls, n: int, r: int, coords: Sequence[int],
                    q: int | PrimeModulus) -> PluckerVector:
        mod = as_modulus(q)
        return cls(SubsetIndexer(n, r), canonicalize([int(c) for c in coords], mod.q), mod)

    @property
    def n(self) -> int:
        return self.indexer.n

    @property
    def r(self) -> int:
        return self.indexer.r

    @property
    def q(self) -> int:
        return self.modulus.q

    @property
    def canonical(self) -> bool:
        return next(c for c in self.coords if c) == 1

    def coordinate(self, s: IndexLike) -> FieldElement:
        return FieldElement(self.coords[self.indexer.rank(s)], self.modulus)

    def support_mask(self) -> int:
        """Bit k set iff the k-th coordinate (lex order) is nonzero."""
        return sum(1 << k for k, c in enumerate(self.coords) if c)

    def vanishing(self) -> frozenset[tuple[int, ...]]:
        return frozenset(s for s, c in zip(self.indexer.subsets, self.coords) if not c)

    def to_json(self) -> str:
        return json.dumps({"coords": list(self.coords), "n": self.n, "q": self.q, "r": self.r},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> PluckerVector:
        d = json.loads(text)
        return cls.from_coords(d["n"], d["r"], d["coords"], d["q"])


@dataclass(frozen=True)
class Factorization:
    left: ExactMatrix
    core: ExactMatrix
    right: ExactMatrix
    i_set: IndexSet
    j_set: IndexSet

    def product(self) -> ExactMatrix:
        return self.left @ self.core @ self.right


# ---------------------------------------------------------------------------


def plucker_of_columns(b: ExactMatrix) -> PluckerVector:
    n, r = b.shape
    if rank(b) != r:
        raise ValueError(f"{n}x{r} matrix does not have full column rank")
    a = b.to_lists()
    coords = [det_mod([a[i - 1] for i in s], b.q) for s in _subsets(n, r)]
    return PluckerVector.from_coords(n, r, coords, b.modulus)


def plucker_of_rows(c: ExactMatrix) -> PluckerVector:
    r, n = c.shape
    if rank(c) != r:
        raise ValueError(f"{r}x{n} matrix does not have full row rank")
    a = c.to_lists()
    coords = [det_mod([[row[j - 1] for j in s] for row in a], c.q) for s in _subsets(n, r)]
    return PluckerVector.from_coords(n, r, coords, c.modulus)


def normalize(b: ExactMatrix, i_set: IndexLike) -> ExactMatrix:
    """Column-equivalent n x r matrix whose rows ``i_set`` form the identity."""
    labels = _labels(i_set)
    if len(labels) != b.cols:
        raise ValueError(f"need {b.cols} row indices, got {labels}")
    block = b.submatrix(labels, range(1, b.cols + 1))
    try:
        return b @ inverse(block)
    except SingularMatrixError:
        raise SingularMatrixError(f"rows {labels} of B are dependent") from None


def normalize_rows(c: ExactMatrix, j_set: IndexLike) -> ExactMatrix:
    """Row-equivalent r x n matrix whose columns ``j_set`` form the identity."""
    labels = _labels(j_set)
    if len(labels) != c.rows:
        raise ValueError(f"need {c.rows} column indices, got {labels}")
    block = c.submatrix(range(1, c.rows + 1), labels)
    try:
        return inverse(block) @ c
    except SingularMatrixError:
        raise SingularMatrixError(f"columns {labels} of C are dependent") from None


def factor(a: ExactMatrix, r: int) -> Factorization:
    """Split a rank-r square matrix as left @ core @ right in the lex-least chart."""
    n = a.rows
    if a.rows != a.cols:
        raise ValueError("factor expects a square matrix")
    if rank(a) != r:
        raise ValueError(f"matrix has rank {rank(a)}, not {r}")
    if r == 0:
        raise ValueError("rank-0 matrix has no chart")
    q = a.q
    # greedy pivots give the lex-least independent row set, then column set
    _, rows = rref_mod(a.transpose().to_lists(), q)
    i_set = IndexSet(n, tuple(i + 1 for i in rows))
    _, cols = rref_mod(a.select(rows, range(n)).to_lists(), q)
    j_set = IndexSet(n, tuple(j + 1 for j in cols))
    core = a.select(rows, cols)
    core_inv = inverse(core)
    left = a.select(range(n), cols) @ core_inv
    right = core_inv @ a.select(rows, range(n))
    return Factorization(left, core, right, i_set, j_set)


def theta(a: ExactMatrix, r: int) -> tuple[PluckerVector, PluckerVector]:
    """(column space, row space) of a rank-r matrix as Grassmannian points."""
    f = factor(a, r)
    col_basis = a.submatrix(IndexSet.full(a.rows), f.j_set)
    row_basis = a.submatrix(f.i_set, IndexSet.full(a.cols))
    return plucker_of_columns(col_basis), plucker_of_rows(row_basis)


def componentwise_product_vanishes(g: PluckerVector, h: PluckerVector) -> bool:
    if g.indexer != h.indexer:
        raise ValueError("Pluecker vectors live on different Grassmannians")
    if g.modulus != h.modulus:
        raise ModulusMismatch(f"mod {g.q} vs mod {h.q}")
    return all(x * y % g.q == 0 for x, y in zip(g.coords, h.coords))


# ---------------------------------------------------------------------------
# quadratic relations (test oracle)


def _signed_index(seq: Sequence[int], indexer: SubsetIndexer) -> tuple[int, int] | None:
    if len(set(seq)) < len(seq):
        return None
    inversions = sum(1 for a, b in combinations(seq, 2) if a > b)
    return (-1) ** inversions, indexer.rank(sorted(seq))


def plucker_relations(n: int, r: int) -> list[list[tuple[int, int, int]]]:
    """Three-term-and-longer quadratic relations as lists of (sign, pos1, pos2).

    For an (r-1)-subset I and an (r+1)-subset J the relation reads
    sum_l (-1)^l p(I, j_l) p(J minus j_l) = 0 with p antisymmetric.
    """
    idx = SubsetIndexer(n, r)
    rels = []
    for small in combinations(range(1, n + 1), r - 1):
        for big in combinations(range(1, n + 1), r + 1):
            terms = []
            for l, j in enumerate(big):
                first = _signed_index(small + (j,), idx)
                if first is None:
                    continue
                sign, p1 = first
                p2 = idx.rank(big[:l] + big[l + 1:])
                terms.append(((-1) ** l * sign, p1, p2))
            if len(terms) >= 3:
                rels.append(terms)
    return rels


def satisfies_plucker_relations(g: PluckerVector) -> bool:
    q = g.q
    c = g.coords
    return all(
        sum(s * c[a] * c[b] for s, a, b in rel) % q == 0
        for rel in plucker_relations(g.n, g.r)
    )


# ---------------------------------------------------------------------------
# enumeration


def _free_positions(pivots: Sequence[int], n: int) -> list[tuple[int, int]]:
    ps = set(pivots)
    return [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, n) if j not in ps]


def echelon_representatives(n: int, r: int, q: int) -> Iterator[ExactMatrix]:
    """Every reduced row echelon r x n matrix of rank r over F_q, pure Python."""
    mod = as_modulus(q)
    for pivots in combinations(range(n), r):
        free = _free_positions(pivots, n)
        for vals in product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(r)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            yield ExactMatrix.from_rows(rows, mod)


def echelon_chunks(n: int, r: int, q: int, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
    """Stacks of reduced row echelon r x n matrices, partitioned by pivot pattern."""
    for pivots in combinations(range(n), r):
        free = _free_positions(pivots, n)
        total = q ** len(free)
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            vals = batched.digits(idx, q, len(free))
            m = np.zeros((len(idx), r, n), dtype=np.int64)
            for i, p in enumerate(pivots):
                m[:, i, p] = 1
            for k, (i, j) in enumerate(free):
                m[:, i, j] = vals[:, k]
            yield m


def coordinate_chunks(n: int, r: int, q: int, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
    """Canonical Pluecker vectors of every point of Grass(r, n)(F_q), as (N, C(n,r)) arrays.

    The coordinate at the pivot set of an echelon representative is 1 and is
    the lex-first nonzero one, so no rescaling is needed.
    """
    check_budget(f"Grass({r},{n})(F_{q})", gaussian_binomial(n, r, q) * comb(n, r))
    for m in echelon_chunks(n, r, q, chunk):
        yield batched.maximal_minors_of_rows(m, q)


def grassmannian_array(n: int, r: int, q: int) -> np.ndarray:
    parts = list(coordinate_chunks(n, r, q))
    return np.concatenate(parts, axis=0)


def enumerate_grassmannian(n: int, r: int, q: int) -> Iterator[PluckerVector]:
    if not 0 < r <= n:
        raise ValueError(f"need 0 < r <= n, got r={r}, n={n}")
    mod = as_modulus(q)
    idx = SubsetIndexer(n, r)
    for block in coordinate_chunks(n, r, mod.q):
        for row in block.tolist():
            yield PluckerVector(idx, tuple(row), mod)


def support_masks(coords: np.ndarray) -> np.ndarray:
    """Bit k of entry i set iff coordinate k of point i is nonzero."""
    weights = np.left_shift(np.int64(1), np.arange(coords.shape[1], dtype=np.int64))
    return ((coords != 0).astype(np.int64) * weights).sum(axis=1)
