"""Set-theoretic checks of vanishing loci over F_q.

A polynomial is a tuple of terms ``(coeff, (var, var, ...))``; a
:class:`VanishingLocusSpec` is a list of such polynomials in ``v`` variables.
Loci are compared point by point over all of F_q^v, in blocks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Iterator, Sequence

import numpy as np

from . import batched
from .errors import check_budget
from .exact_matrix import ExactMatrix, jacobi_complementary_minor_check, rank
from .finite_field import as_modulus
from .grassmannian import SubsetIndexer, coordinate_chunks, plucker_of_columns, plucker_of_rows
from .graphs import (
    SimpleGraph,
    graph_masks,
    graph_of_point,
    is_permissible,
    minimal_permissible_supergraphs,
    permissible_masks,
)

Term = tuple[int, tuple[int, ...]]
Polynomial = tuple[Term, ...]

POINT_BLOCK = 1 << 18


def poly(*terms: Term) -> Polynomial:
    return tuple(terms)


def var(i: int) -> Polynomial:
    return ((1, (i,)),)


def minor2(x, r: int, s: int, t: int, u: int) -> Polynomial:
    """x[r,t] x[s,u] - x[r,u] x[s,t] where ``x(row, col)`` gives a variable index."""
    return ((1, (x(r, t), x(s, u))), (-1, (x(r, u), x(s, t))))


def det3(x) -> Polynomial:
    terms = []
    for p in permutations(range(1, 4)):
        inv = sum(1 for a, b in combinations(p, 2) if a > b)
        terms.append(((-1) ** inv, tuple(x(i + 1, p[i]) for i in range(3))))
    return tuple(terms)


def evaluate(f: Polynomial, points: np.ndarray, q: int) -> np.ndarray:
    out = np.zeros(points.shape[0], dtype=np.int64)
    for c, vs in f:
        term = np.full(points.shape[0], c % q, dtype=np.int64)
        for v in vs:
            term = term * points[:, v] % q
        out = (out + term) % q
    return out


@dataclass(frozen=True)
class VanishingLocusSpec:
    v: int
    constraints: tuple[Polynomial, ...]
    q: int

    def __post_init__(self):
        as_modulus(self.q)
        for f in self.constraints:
            for _, vs in f:
                if any(not 0 <= x < self.v for x in vs):
                    raise ValueError(f"variable index out of range in {f}")

    def contains(self, points: np.ndarray) -> np.ndarray:
        mask = np.ones(points.shape[0], dtype=bool)
        for f in self.constraints:
            mask &= evaluate(f, points, self.q) == 0
        return mask


def point_blocks(v: int, q: int, block: int = POINT_BLOCK) -> Iterator[np.ndarray]:
    check_budget(f"F_{q}^{v}", q**v * v)
    total = q**v
    for start in range(0, total, block):
        idx = np.arange(start, min(total, start + block), dtype=np.int64)
        yield batched.digits(idx, q, v)


@dataclass
class Verdict:
    name: str
    passed: bool = True
    checked: int = 0
    counterexample: object = None
    notes: list[str] = field(default_factory=list)

    def fail(self, example, note: str = "") -> None:
        if self.passed:
            self.counterexample = example
        self.passed = False
        if note:
            self.notes.append(note)

    def __bool__(self):
        return self.passed

    def summary(self) -> str:
        head = f"{self.name}: {'pass' if self.passed else 'FAIL'} ({self.checked} checked)"
        if not self.passed:
            head += f"\n  counterexample: {self.counterexample}"
        return "\n".join([head] + [f"  {n}" for n in self.notes])


def union_equality(lhs: VanishingLocusSpec, parts: Sequence[VanishingLocusSpec],
                   verdict: Verdict, label: str = "") -> np.ndarray:
    """Fail ``verdict`` on any point of F_q^v in exactly one of V(lhs), union V(parts).

    Returns how many points lie in each part.
    """
    sizes = np.zeros(len(parts), dtype=np.int64)
    for pts in point_blocks(lhs.v, lhs.q):
        left = lhs.contains(pts)
        right = np.zeros_like(left)
        for k, p in enumerate(parts):
            inside = p.contains(pts)
            sizes[k] += inside.sum()
            right |= inside
        bad = np.nonzero(left != right)[0]
        if len(bad):
            verdict.fail(pts[bad[0]].tolist(), f"{label} set mismatch at {pts[bad[0]].tolist()}")
        verdict.checked += len(pts)
    return sizes


# ---------------------------------------------------------------------------
# 2 x s matrices


def verify_overlap_rule(s: int, q: int) -> Verdict:
    """Two vanishing 2-minors sharing column a: column a vanishes or the third minor does.

    Columns are stored as variables (2k, 2k+1) for column k.
    """
    if s < 3:
        raise ValueError("overlapping minors need at least 3 columns")
    verdict = Verdict(f"overlap rule s={s} q={q}")
    cols = range(s)
    for pts in point_blocks(2 * s, q):
        top, bot = pts[:, 0::2], pts[:, 1::2]
        m = {}
        for a, b in combinations(cols, 2):
            m[a, b] = m[b, a] = (top[:, a] * bot[:, b] - top[:, b] * bot[:, a]) % q == 0
        for a in cols:
            zero_col = (top[:, a] == 0) & (bot[:, a] == 0)
            for b, c in combinations([x for x in cols if x != a], 2):
                bad = m[a, b] & m[a, c] & ~zero_col & ~m[b, c]
                if bad.any():
                    verdict.fail(pts[np.argmax(bad)].tolist(), f"minors {a + 1}{b + 1}, {a + 1}{c + 1}")
        verdict.checked += len(pts)
    return verdict


def verify_m2_overlapping2(q: int) -> Verdict:
    """V(f1, f2) = V(P1) u V(P2) in u61, u62, u63, u71, u72, u73, with neither part redundant."""
    # variables 0..5 are u61, u62, u63, u71, u72, u73
    def u(row, col):
        return (row - 6) * 3 + col - 1

    f1 = minor2(u, 6, 7, 1, 2)
    f2 = minor2(u, 6, 7, 2, 3)
    f3 = minor2(u, 6, 7, 1, 3)
    ideal = VanishingLocusSpec(6, (f1, f2), q)
    p1 = VanishingLocusSpec(6, (f1, f2, f3), q)
    p2 = VanishingLocusSpec(6, (var(u(6, 2)), var(u(7, 2))), q)
    verdict = Verdict(f"two overlapping 2-minors q={q}")
    union_equality(ideal, [p1, p2], verdict)
    only = {"P1": 0, "P2": 0}
    for pts in point_blocks(6, q):
        a, b = p1.contains(pts), p2.contains(pts)
        only["P1"] += int((a & ~b).sum())
        only["P2"] += int((b & ~a).sum())
    for k, c in only.items():
        if c == 0:
            verdict.fail(k, f"V({k}) is contained in the other part")
    return verdict


# ---------------------------------------------------------------------------
# 3 x 3: determinant and one nested 2-minor


def _x3(i: int, j: int) -> int:
    return 3 * (i - 1) + (j - 1)


def case3_loci(rows: Sequence[int], cols: Sequence[int], q: int) -> dict[str, VanishingLocusSpec]:
    """The loci of the 3x3 case for row order (i1,i2,i3) and column order (j1,j2,j3)."""
    i1, i2, i3 = rows
    j1, j2, j3 = cols
    mu = minor2(_x3, i1, i2, j1, j2)

    def spec(*fs):
        return VanishingLocusSpec(9, tuple(fs), q)

    return {
        "ideal": spec(det3(_x3), mu),
        "P1": spec(mu, minor2(_x3, i1, i2, j1, j3), minor2(_x3, i1, i2, j2, j3)),
        "P2": spec(mu, minor2(_x3, i1, i3, j1, j2), minor2(_x3, i2, i3, j1, j2)),
        "mu_d23": spec(mu, minor2(_x3, i1, i2, j2, j3)),
        "mu_d13_d23": spec(mu, minor2(_x3, i1, i2, j1, j3), minor2(_x3, i1, i2, j2, j3)),
        "column_j2": spec(var(_x3(i1, j2)), var(_x3(i2, j2))),
    }


def _case3_choices(extra: int, seed: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    choices = [(r, c) for r in permutations((1, 2, 3)) for c in permutations((1, 2, 3))]
    return [choices[0]] + random.Random(seed).sample(choices[1:], extra)


def verify_case3(q: int, extra: int = 5, seed: int = 0) -> Verdict:
    """Exhaustive over F_q^9 at the identity index choice and ``extra`` permuted ones.

    Every 2-minor and the determinant are evaluated once per block; each
    index choice then only combines zero masks.  :func:`case3_loci` states
    the same loci as polynomial lists for the slower generic route.
    """
    picked = _case3_choices(extra, seed)
    verdict = Verdict(f"det plus nested 2-minor q={q}")
    pairs = list(combinations((1, 2, 3), 2))
    for pts in point_blocks(9, q):
        x = {(i, j): pts[:, _x3(i, j)] for i in (1, 2, 3) for j in (1, 2, 3)}
        zero = {k: v == 0 for k, v in x.items()}
        dz = {}
        for r, s in pairs:
            for t, u in pairs:
                dz[r, s, t, u] = (x[r, t] * x[s, u] - x[r, u] * x[s, t]) % q == 0
        det_zero = evaluate(det3(_x3), pts, q) == 0

        def m(r, s, t, u):
            return dz[min(r, s), max(r, s), min(t, u), max(t, u)]

        for (i1, i2, i3), (j1, j2, j3) in picked:
            mu = m(i1, i2, j1, j2)
            p1 = mu & m(i1, i2, j1, j3) & m(i1, i2, j2, j3)
            p2 = mu & m(i1, i3, j1, j2) & m(i2, i3, j1, j2)
            bad = (det_zero & mu) != (p1 | p2)
            if bad.any():
                verdict.fail(pts[np.argmax(bad)].tolist(), f"rows {i1}{i2}{i3} cols {j1}{j2}{j3}")
            left = mu & m(i1, i2, j2, j3)
            right = p1 | (zero[i1, j2] & zero[i2, j2])
            bad = left != right
            if bad.any():
                verdict.fail(pts[np.argmax(bad)].tolist(),
                             f"intermediate, rows {i1}{i2}{i3} cols {j1}{j2}{j3}")
        verdict.checked += len(pts) * len(picked)
    verdict.notes.append("index choices: " + ", ".join(f"{r}/{c}" for r, c in picked))
    return verdict


# ---------------------------------------------------------------------------
# Jacobi complementary minors


def verify_jacobi(samples: int = 10_000, q: int = 101, n_max: int = 6, seed: int = 0,
                  exhaustive_q3: bool = True) -> Verdict:
    verdict = Verdict(f"complementary minors q={q}")
    rng = random.Random(seed)
    for _ in range(samples):
        n = rng.randint(2, n_max)
        a = ExactMatrix.random_invertible(n, q, rng)
        k = rng.randint(1, n - 1)
        s = sorted(rng.sample(range(1, n + 1), k))
        if not jacobi_complementary_minor_check(a, s):
            verdict.fail((a.to_lists(), s))
        verdict.checked += 1
    if exhaustive_q3:
        for entries in product(range(3), repeat=9):
            a = ExactMatrix(3, 3, entries, as_modulus(3))
            if rank(a) < 3:
                continue
            for k in (1, 2):
                for s in combinations((1, 2, 3), k):
                    if not jacobi_complementary_minor_check(a, s):
                        verdict.fail((a.to_lists(), s))
                    verdict.checked += 1
    return verdict


# ---------------------------------------------------------------------------
# graphs of Grassmannian points


def verify_graph_permissible(n: int, q: int) -> Verdict:
    """Every point of Grass(n-2, n)(F_q) has a permissible graph."""
    allowed = set(permissible_masks(n))
    verdict = Verdict(f"graphs of Grass({n - 2},{n})(F_{q}) points")
    for block in coordinate_chunks(n, n - 2, q):
        masks = graph_masks(block, n)
        for m in np.unique(masks).tolist():
            if m not in allowed:
                verdict.fail(str(SimpleGraph.from_edge_mask(n, m)))
        verdict.checked += len(block)
    return verdict


def verify_var_decomp(n: int, q: int, max_edges: int = 3) -> Verdict:
    """{points whose graph contains E} = union over minimal permissible supergraphs of E.

    Membership depends only on the graph of a point, so the comparison runs
    over the distinct graphs that occur.
    """
    seen: set[int] = set()
    total = 0
    for block in coordinate_chunks(n, n - 2, q):
        masks = graph_masks(block, n)
        seen.update(np.unique(masks).tolist())
        total += len(block)
    occurring = np.array(sorted(seen), dtype=np.int64)
    verdict = Verdict(f"vanishing sets of <= {max_edges} coordinates on Grass({n - 2},{n})(F_{q})")
    m_edges = n * (n - 1) // 2
    for k in range(max_edges + 1):
        for bits in combinations(range(m_edges), k):
            e = sum(1 << b for b in bits)
            lhs = (occurring & e) == e
            rhs = np.zeros_like(lhs)
            for g in minimal_permissible_supergraphs(SimpleGraph.from_edge_mask(n, e), n):
                gm = g.edge_mask()
                rhs |= (occurring & gm) == gm
            if (lhs != rhs).any():
                verdict.fail(str(SimpleGraph.from_edge_mask(n, e)))
            verdict.checked += 1
    verdict.notes.append(f"{total} points, {len(occurring)} distinct graphs")
    return verdict


# ---------------------------------------------------------------------------
# the rank-3 example on 5 x 5 matrices

# lex-ordered 3-subsets of {1..5} whose B-side and C-side coordinates are set to zero
N5_I = ((1, 2, 4), (1, 2, 5), (1, 4, 5), (2, 3, 5), (2, 4, 5), (3, 4, 5))
N5_J = ((1, 2, 3), (1, 3, 4), (1, 3, 5), (2, 3, 4))
N5_B_EDGES = ((3, 5), (3, 4), (2, 3), (1, 4), (1, 3), (1, 2))
N5_B_EXTRA = {"b41": (1, 5), "b52": (2, 4)}
N5_C_EDGES = ((1, 2), (1, 4), (1, 5), (2, 4), (2, 5), (4, 5))


def n5_factors(b: dict[str, int], c: dict[str, int], q: int) -> tuple[ExactMatrix, ExactMatrix]:
    """B (5 x 3, rows 1..3 the identity) and C (3 x 5, columns 1, 2, 4 the identity)."""
    bm = ExactMatrix.from_rows([
        [1, 0, 0], [0, 1, 0], [0, 0, 1],
        [b["b41"], b["b42"], b["b43"]],
        [b["b51"], b["b52"], b["b53"]],
    ], q)
    cm = ExactMatrix.from_rows([
        [1, 0, c["c13"], 0, c["c15"]],
        [0, 1, c["c23"], 0, c["c25"]],
        [0, 0, c["c33"], 1, c["c35"]],
    ], q)
    return bm, cm


def _forced_vanishing(q: int, verdict: Verdict) -> None:
    # b51 = 0 and b41 b52 - b42 b51 = 0 leave b41 = 0 or b52 = 0
    for b41, b42, b52 in product(range(q), repeat=3):
        if (b41 * b52 - b42 * 0) % q == 0 and b41 and b52:
            verdict.fail((b41, b42, b52), "B-side forced vanishing")
    # c13 = c23 = c33 = 0 kills -c13 c35 + c15 c33 and c13 c25 - c15 c23
    for c15, c25, c35 in product(range(q), repeat=3):
        c13 = c23 = c33 = 0
        if (-c13 * c35 + c15 * c33) % q or (c13 * c25 - c15 * c23) % q:
            verdict.fail((c15, c25, c35), "C-side forced vanishing")


def verify_n5_example(q: int, samples: int = 1000, seed: int = 0) -> Verdict:
    """Sample the constrained factorisation B @ core @ C and check every claim on it."""
    verdict = Verdict(f"5x5 rank-3 example q={q}")
    idx = SubsetIndexer(5, 3)
    every = set(idx.subsets)
    if set(N5_I) | set(N5_J) != every or set(N5_I) & set(N5_J):
        verdict.fail((N5_I, N5_J), "I and J do not partition the 3-subsets")
    _forced_vanishing(q, verdict)

    rng = random.Random(seed)
    c_graph = SimpleGraph.from_edges(5, N5_C_EDGES)
    exact_b = exact_c = 0
    for _ in range(samples):
        which = rng.choice(sorted(N5_B_EXTRA))
        b = {k: rng.randrange(q) for k in ("b41", "b42", "b52")}
        b.update(b43=0, b53=0, b51=0)
        b[which] = 0
        c = {k: rng.randrange(q) for k in ("c15", "c25", "c35")}
        c.update(c13=0, c23=0, c33=0)
        bm, cm = n5_factors(b, c, q)
        core = ExactMatrix.random_invertible(3, q, rng)
        a = bm @ core @ cm
        verdict.checked += 1

        if rank(a) != 3:
            verdict.fail(a.to_lists(), "sampled matrix does not have rank 3")
        pm = batched.principal_minors(np.array([a.to_lists()]), 3, q)
        if pm.any():
            verdict.fail(a.to_lists(), "a principal 3-minor survives")

        gb, gc = plucker_of_columns(bm), plucker_of_rows(cm)
        for s in N5_I:
            if gb.coords[idx.rank(s)]:
                verdict.fail(b, f"B coordinate {s} should vanish")
        for s in N5_J:
            if gc.coords[idx.rank(s)]:
                verdict.fail(c, f"C coordinate {s} should vanish")

        graph_b, graph_c = graph_of_point(gb), graph_of_point(gc)
        if not (is_permissible(graph_b) and is_permissible(graph_c)):
            verdict.fail((b, c), "graph of a factor is not permissible")
        expected_b = SimpleGraph.from_edges(5, N5_B_EDGES + (N5_B_EXTRA[which],))
        generic_b = b["b42"] and b["b41" if which == "b52" else "b52"]
        if generic_b:
            exact_b += graph_b == expected_b
            if graph_b != expected_b:
                verdict.fail(b, f"B graph {graph_b} != {expected_b}")
        elif not expected_b <= graph_b:
            verdict.fail(b, f"B graph {graph_b} misses edges of {expected_b}")
        if c["c15"] and c["c25"] and c["c35"]:
            exact_c += graph_c == c_graph
            if graph_c != c_graph:
                verdict.fail(c, f"C graph {graph_c} != {c_graph}")
        elif not c_graph <= graph_c:
            verdict.fail(c, f"C graph {graph_c} misses edges of {c_graph}")
    verdict.notes.append(f"exact graph matches: B {exact_b}, C {exact_c} of {samples}")
    return verdict


def verify_duality(n: int, t: int, q: int) -> Verdict:
    """Invertible matrices with vanishing principal t-minors vs (n-t)-minors: equal counts."""
    from .census import StratumSpec, count_Y_bruteforce

    verdict = Verdict(f"duality n={n} t={t} q={q}")
    a = count_Y_bruteforce(StratumSpec(n, n, t, q)).count
    b = count_Y_bruteforce(StratumSpec(n, n, n - t, q)).count
    verdict.checked = 2
    if a != b:
        verdict.fail((a, b))
    verdict.notes.append(f"counts {a} and {b}")
    return verdict
