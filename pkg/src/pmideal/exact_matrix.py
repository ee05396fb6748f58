"""Dense matrices over a prime field.

Entries are stored as a flat row-major tuple of reduced ints.  Element access
``M[i, j]`` is 0-based like numpy, while :class:`IndexSet` members are 1-based
labels ``{1..n}`` because that is how minors and Pluecker coordinates are
named throughout the package.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence, Union

from .errors import ModulusMismatch, SingularMatrixError
from .finite_field import FieldElement, PrimeModulus, as_modulus


@dataclass(frozen=True)
class IndexSet:
    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        m = tuple(self.members)
        object.__setattr__(self, "members", m)
        if any(b <= a for a, b in zip(m, m[1:])):
            raise ValueError(f"index set {m} must be strictly increasing")
        if m and (m[0] < 1 or m[-1] > self.n):
            raise ValueError(f"index set {m} not inside 1..{self.n}")

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> IndexSet:
        return cls(n, tuple(sorted(members)))

    @classmethod
    def full(cls, n: int) -> IndexSet:
        return cls(n, tuple(range(1, n + 1)))

    def complement(self) -> IndexSet:
        s = set(self.members)
        return IndexSet(self.n, tuple(i for i in range(1, self.n + 1) if i not in s))

    def zero_based(self) -> list[int]:
        return [i - 1 for i in self.members]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __str__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


IndexLike = Union[IndexSet, Sequence[int]]


def _labels(s: IndexLike) -> list[int]:
    return list(s.members) if isinstance(s, IndexSet) else sorted(s)


def all_subsets(n: int, k: int) -> list[IndexSet]:
    """k-subsets of {1..n} in lexicographic order."""
    return [IndexSet(n, c) for c in combinations(range(1, n + 1), k)]


# ---------------------------------------------------------------------------
# int-level kernels (rows are lists of reduced ints)


def det_mod(a: list[list[int]], q: int) -> int:
    k = len(a)
    if k == 0:
        return 1
    if k == 1:
        return a[0][0] % q
    if k == 2:
        return (a[0][0] * a[1][1] - a[0][1] * a[1][0]) % q
    m = [row[:] for row in a]
    det = 1
    for c in range(k):
        p = next((r for r in range(c, k) if m[r][c]), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        piv = m[c][c]
        det = det * piv % q
        inv = pow(piv, -1, q)
        pr = m[c]
        for r in range(c + 1, k):
            f = m[r][c]
            if f:
                f = f * inv % q
                row = m[r]
                for j in range(c + 1, k):
                    row[j] = (row[j] - f * pr[j]) % q
    return det % q


def rref_mod(a: list[list[int]], q: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns (0-based)."""
    m = [row[:] for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = pow(m[r][c], -1, q)
        m[r] = [x * inv % q for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % q for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def inverse_mod(a: list[list[int]], q: int) -> list[list[int]]:
    n = len(a)
    aug = [row[:] + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    red, piv = rref_mod(aug, q)
    if piv[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return [row[n:] for row in red]


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]
    modulus: PrimeModulus

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )
        q = self.modulus.q
        if any(not 0 <= e < q for e in self.entries):
            object.__setattr__(self, "entries", tuple(e % q for e in self.entries))

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], q: int | PrimeModulus) -> ExactMatrix:
        mod = as_modulus(q)
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        flat = tuple(int(x) % mod.q for r in rows for x in r)
        return cls(len(rows), ncols, flat, mod)

    @classmethod
    def identity(cls, n: int, q: int | PrimeModulus) -> ExactMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], q)

    @classmethod
    def zeros(cls, rows: int, cols: int, q: int | PrimeModulus) -> ExactMatrix:
        return cls(rows, cols, (0,) * (rows * cols), as_modulus(q))

    @classmethod
    def diag(cls, values: Sequence[int], q: int | PrimeModulus) -> ExactMatrix:
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], q)

    @classmethod
    def random(cls, rows: int, cols: int, q: int | PrimeModulus,
               rng: random.Random | None = None) -> ExactMatrix:
        mod = as_modulus(q)
        rng = rng or random.Random()
        return cls(rows, cols, tuple(rng.randrange(mod.q) for _ in range(rows * cols)), mod)

    @classmethod
    def random_invertible(cls, n: int, q: int | PrimeModulus,
                          rng: random.Random | None = None) -> ExactMatrix:
        rng = rng or random.Random()
        while True:
            m = cls.random(n, n, q, rng)
            if det_mod(m.to_lists(), m.q):
                return m

    # -- access -------------------------------------------------------------

    @property
    def q(self) -> int:
        return self.modulus.q

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement(self[i, j], self.modulus)

    def to_lists(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def select(self, rows: Sequence[int], cols: Sequence[int]) -> ExactMatrix:
        """Submatrix on 0-based row and column positions."""
        c = self.cols
        e = self.entries
        return ExactMatrix(len(rows), len(cols),
                           tuple(e[i * c + j] for i in rows for j in cols), self.modulus)

    def submatrix(self, rowset: IndexLike, colset: IndexLike) -> ExactMatrix:
        return self.select([i - 1 for i in _labels(rowset)], [j - 1 for j in _labels(colset)])

    def transpose(self) -> ExactMatrix:
        c = self.cols
        return ExactMatrix(
            c, self.rows,
            tuple(self.entries[i * c + j] for j in range(c) for i in range(self.rows)),
            self.modulus,
        )

    @property
    def T(self) -> ExactMatrix:
        return self.transpose()

    def _check_mod(self, other: ExactMatrix):
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"mod {self.q} vs mod {other.q}")

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_mod(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        q = self.q
        a = self.to_lists()
        bt = other.transpose().to_lists()
        flat = tuple(sum(x * y for x, y in zip(row, col)) % q for row in a for col in bt)
        return ExactMatrix(self.rows, other.cols, flat, self.modulus)

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_mod(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        q = self.q
        return ExactMatrix(self.rows, self.cols,
                           tuple((x + y) % q for x, y in zip(self.entries, other.entries)),
                           self.modulus)

    def scale(self, lam: int) -> ExactMatrix:
        q = self.q
        return ExactMatrix(self.rows, self.cols, tuple(x * lam % q for x in self.entries), self.modulus)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __str__(self):
        return format_matrix(self).rstrip("\n")


# ---------------------------------------------------------------------------
# text fixtures: first line "n m q", then n rows of m integers


def parse_matrix(text: str) -> ExactMatrix:
    tokens = text.split()
    if len(tokens) < 3:
        raise ValueError("matrix literal needs a header 'n m q'")
    n, m, q = (int(t) for t in tokens[:3])
    body = [int(t) for t in tokens[3:]]
    if len(body) != n * m:
        raise ValueError(f"expected {n * m} entries, found {len(body)}")
    return ExactMatrix.from_rows([body[i * m:(i + 1) * m] for i in range(n)], q)


def format_matrix(m: ExactMatrix) -> str:
    lines = [f"{m.rows} {m.cols} {m.q}"]
    lines += [" ".join(str(x) for x in row) for row in m.to_lists()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# operations


def rank(m: ExactMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(rref_mod(m.to_lists(), m.q)[1])


def det(m: ExactMatrix) -> FieldElement:
    if m.rows != m.cols:
        raise ValueError(f"determinant of non-square {m.shape} matrix")
    return FieldElement(det_mod(m.to_lists(), m.q), m.modulus)


def minor(m: ExactMatrix, rowset: IndexLike, colset: IndexLike) -> FieldElement:
    rs, cs = _labels(rowset), _labels(colset)
    if len(rs) != len(cs):
        raise ValueError(f"minor needs equal-size index sets, got {len(rs)} and {len(cs)}")
    if len(rs) > min(m.rows, m.cols):
        raise ValueError(f"minor of size {len(rs)} exceeds {m.shape}")
    return det(m.submatrix(rs, cs))


def principal_minors(m: ExactMatrix, t: int) -> dict[IndexSet, FieldElement]:
    if m.rows != m.cols:
        raise ValueError("principal minors need a square matrix")
    n = m.rows
    if not 1 <= t <= n:
        raise ValueError(f"t={t} outside 1..{n}")
    return {s: minor(m, s, s) for s in all_subsets(n, t)}


def exterior_power(m: ExactMatrix, t: int) -> ExactMatrix:
    if not 0 <= t <= min(m.rows, m.cols):
        raise ValueError(f"t={t} outside 0..{min(m.rows, m.cols)}")
    rsets = list(combinations(range(m.rows), t))
    csets = list(combinations(range(m.cols), t))
    q = m.q
    a = m.to_lists()
    flat = tuple(
        det_mod([[a[i][j] for j in cs] for i in rs], q) for rs in rsets for cs in csets
    )
    return ExactMatrix(len(rsets), len(csets), flat, m.modulus)


def inverse(m: ExactMatrix) -> ExactMatrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    return ExactMatrix.from_rows(inverse_mod(m.to_lists(), m.q), m.modulus)


def jacobi_complementary_minor_check(a: ExactMatrix, s: IndexLike) -> bool:
    """Check det(A^-1[S,S]) * det(A) == det(A[S^c,S^c]).

    Both sides are evaluated from scratch: the inverse by Gauss-Jordan, each
    minor by its own elimination.
    """
    n = a.rows
    ainv = inverse(a)
    labels = _labels(s)
    sc = IndexSet.of(n, labels).complement()
    lhs = minor(ainv, labels, labels) * det(a)
    rhs = minor(a, sc, sc)
    return lhs == rhs


# -- symmetry actions -------------------------------------------------------


@dataclass(frozen=True)
class Permute:
    """Simultaneous row/column permutation; ``sigma[i-1]`` is the image of label i."""

    sigma: tuple[int, ...]


@dataclass(frozen=True)
class Transpose:
    pass


@dataclass(frozen=True)
class Scale:
    axis: str  # "row" or "col"
    index: int  # 1-based
    lam: int


def permutation_matrix(sigma: Sequence[int], q: int | PrimeModulus) -> ExactMatrix:
    """tau with tau @ e_i = e_sigma(i)."""
    n = len(sigma)
    rows = [[0] * n for _ in range(n)]
    for i, s in enumerate(sigma):
        rows[s - 1][i] = 1
    return ExactMatrix.from_rows(rows, q)


def apply_symmetry(m: ExactMatrix, action: Permute | Transpose | Scale) -> ExactMatrix:
    if isinstance(action, Transpose):
        return m.transpose()
    if isinstance(action, Permute):
        sigma = tuple(action.sigma)
        if sorted(sigma) != list(range(1, m.rows + 1)) or m.rows != m.cols:
            raise ValueError(f"{sigma} is not a permutation of 1..{m.rows}")
        tau = permutation_matrix(sigma, m.modulus)
        return tau @ m @ tau.transpose()
    if isinstance(action, Scale):
        lam = action.lam % m.q
        if lam == 0:
            raise ValueError("scaling factor must be nonzero")
        rows = m.to_lists()
        k = action.index - 1
        if action.axis == "row":
            rows[k] = [x * lam for x in rows[k]]
        elif action.axis == "col":
            for r in rows:
                r[k] *= lam
        else:
            raise ValueError(f"axis must be 'row' or 'col', not {action.axis!r}")
        return ExactMatrix.from_rows(rows, m.modulus)
    raise TypeError(f"unknown symmetry action {action!r}")
