"""Graphs recording which Pluecker coordinates of a point of Grass(n-2, n) vanish.

Vertices are labelled 1..n in the public API.  Internally a graph is a tuple of
per-vertex neighbour bit masks (bit v for vertex v+1), and an edge set is an
int over the C(n,2) pairs in lexicographic order, which lines up with the
Pluecker coordinate indexed by the complementary (n-2)-subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, InvariantViolation, NotPermissibleError
from .grassmannian import PluckerVector, SubsetIndexer

MAX_ENUM_N = 8


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(mask: int) -> int:
    return mask.bit_count()


@lru_cache(maxsize=None)
def edge_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """0-based vertex pairs (i < j) in lex order; position = edge bit."""
    return tuple(combinations(range(n), 2))


@lru_cache(maxsize=None)
def _edge_bit(n: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(edge_pairs(n))}


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("graphs here have at least 3 vertices")
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match n")
        n = self.n
        full = (1 << n) - 1
        adj = self.adj
        for v in range(n):
            nb = adj[v]
            if nb & ~full or nb >> v & 1:
                raise ValueError(f"bad neighbourhood for vertex {v + 1}")
            col = 0
            for u in range(n):
                if adj[u] >> v & 1:
                    col |= 1 << u
            if col != nb:
                raise ValueError("adjacency is not symmetric")

    # -- construction -------------------------------------------------------

    @classmethod
    def _trusted(cls, n: int, adj: tuple[int, ...]) -> SimpleGraph:
        """Skip validation for adjacency that is symmetric by construction."""
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", adj)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> SimpleGraph:
        adj = [0] * n
        for e in edges:
            i, j = e
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"edge {i}-{j} outside 1..{n}")
            adj[i - 1] |= 1 << (j - 1)
            adj[j - 1] |= 1 << (i - 1)
        return cls(n, tuple(adj))

    @classmethod
    def from_edge_mask(cls, n: int, mask: int) -> SimpleGraph:
        adj = [0] * n
        for k in _bits(mask):
            i, j = edge_pairs(n)[k]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        if n < 3:
            raise ValueError("graphs here have at least 3 vertices")
        return cls._trusted(n, tuple(adj))

    @classmethod
    def empty(cls, n: int) -> SimpleGraph:
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> SimpleGraph:
        if n < 3:
            raise ValueError("graphs here have at least 3 vertices")
        full = (1 << n) - 1
        return cls._trusted(n, tuple(full ^ (1 << v) for v in range(n)))

    @classmethod
    def clique(cls, n: int, vertices: Iterable[int]) -> SimpleGraph:
        """Clique on the given 1-based vertices, every other vertex isolated."""
        s = 0
        for v in vertices:
            s |= 1 << (v - 1)
        if n < 3 or s >> n:
            raise ValueError(f"bad clique {sorted(vertices)} on {n} vertices")
        return cls._trusted(n, tuple(s ^ (1 << v) if s >> v & 1 else 0 for v in range(n)))

    # -- queries ------------------------------------------------------------

    def edges(self) -> list[tuple[int, int]]:
        return [(i + 1, j + 1) for i, j in edge_pairs(self.n) if self.adj[i] >> j & 1]

    def edge_mask(self) -> int:
        return sum(1 << k for k, (i, j) in enumerate(edge_pairs(self.n)) if self.adj[i] >> j & 1)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i - 1] >> (j - 1) & 1)

    def degree(self, v: int) -> int:
        return _popcount(self.adj[v - 1])

    def is_complete(self) -> bool:
        return all(_popcount(nb) == self.n - 1 for nb in self.adj)

    def dominating_mask(self) -> int:
        return sum(1 << v for v, nb in enumerate(self.adj) if _popcount(nb) == self.n - 1)

    def isolated_mask(self) -> int:
        return sum(1 << v for v, nb in enumerate(self.adj) if nb == 0)

    def issubgraph(self, other: SimpleGraph) -> bool:
        return self.n == other.n and all(a & ~b == 0 for a, b in zip(self.adj, other.adj))

    def __le__(self, other: SimpleGraph) -> bool:
        return self.issubgraph(other)

    def __or__(self, other: SimpleGraph) -> SimpleGraph:
        return SimpleGraph(self.n, tuple(a | b for a, b in zip(self.adj, other.adj)))

    def relabel(self, sigma: Sequence[int]) -> SimpleGraph:
        """Send vertex i to sigma[i-1]."""
        return SimpleGraph.from_edges(self.n, [(sigma[i - 1], sigma[j - 1]) for i, j in self.edges()])

    def __str__(self):
        return f"n={self.n}; " + ",".join(f"{i}-{j}" for i, j in self.edges())


def _mask_to_labels(mask: int) -> frozenset[int]:
    return frozenset(v + 1 for v in _bits(mask))


def _labels_to_mask(labels: Iterable[int]) -> int:
    m = 0
    for v in labels:
        m |= 1 << (v - 1)
    return m


# ---------------------------------------------------------------------------
# permissibility


def _induced_p3(adj: Sequence[int], within: int) -> tuple[int, int, int] | None:
    """An induced path u-v-w inside the vertex set ``within`` (0-based), if any."""
    for v in _bits(within):
        nb = adj[v] & within
        for u in _bits(nb):
            rest = nb & ~adj[u] & ~(1 << u)
            if rest:
                w = next(_bits(rest))
                return u, v, w
    return None


def _is_cluster(adj: Sequence[int], within: int) -> bool:
    """True iff the induced subgraph on ``within`` is a disjoint union of cliques.

    Vertices sharing a closed neighbourhood C must be exactly the members of C.
    """
    groups: dict[int, int] = {}
    for v in _bits(within):
        cn = adj[v] & within | 1 << v
        groups[cn] = groups.get(cn, 0) | 1 << v
    return all(k == members for k, members in groups.items())


def _dominating_within(adj: Sequence[int], within: int) -> int:
    size = _popcount(within)
    return sum(1 << v for v in _bits(within) if _popcount(adj[v] & within) == size - 1)


def _permissible_on(adj: Sequence[int], within: int) -> bool:
    """Permissibility of the induced subgraph on ``within`` (P3-free test)."""
    dom = _dominating_within(adj, within)
    if dom == within:
        return False
    return _is_cluster(adj, within & ~dom)


def permissibility_witness(g: SimpleGraph) -> tuple | None:
    """None when permissible, else ('complete',) or ('induced_path', (u, v, w))."""
    dom = g.dominating_mask()
    full = (1 << g.n) - 1
    if dom == full:
        return ("complete",)
    if _is_cluster(g.adj, full & ~dom):
        return None
    p = _induced_p3(g.adj, full & ~dom)
    if p is not None:
        return ("induced_path", tuple(x + 1 for x in p))
    return None


def is_permissible(g: SimpleGraph) -> bool:
    return permissibility_witness(g) is None


def _components(adj: Sequence[int], within: int) -> list[int]:
    comps = []
    left = within
    while left:
        seed = left & -left
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= adj[v] & within
            frontier = nxt & ~comp
            comp |= nxt
        comps.append(comp)
        left &= ~comp
    return comps


def is_permissible_by_definition(g: SimpleGraph) -> bool:
    """Not complete, and deleting dominating vertices leaves a disjoint union of cliques."""
    if g.is_complete():
        return False
    rest = ((1 << g.n) - 1) & ~g.dominating_mask()
    for comp in _components(g.adj, rest):
        for v in _bits(comp):
            if g.adj[v] & comp != comp & ~(1 << v):
                return False
    return True


# ---------------------------------------------------------------------------
# trivial part, clique partition, codimension


@dataclass(frozen=True)
class TrivialPart:
    kind: str  # "dominating", "isolated" or "empty"
    vertices: frozenset[int]

    @property
    def m(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class CliquePartition:
    blocks: tuple[frozenset[int], ...]

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def c(self) -> int:
        return len(self.blocks)

    @property
    def l(self) -> int:
        return sum(a - 1 for a in self.orders)


def _require_permissible(g: SimpleGraph) -> None:
    w = permissibility_witness(g)
    if w is not None:
        raise NotPermissibleError(f"graph {g} is not permissible: {w}")


def trivial_part(g: SimpleGraph) -> TrivialPart:
    _require_permissible(g)
    return _trivial_part(g)


def _trivial_part(g: SimpleGraph) -> TrivialPart:
    dom = g.dominating_mask()
    if dom:
        if g.isolated_mask():
            raise InvariantViolation("dominating and isolated vertices together")
        return TrivialPart("dominating", _mask_to_labels(dom))
    iso = g.isolated_mask()
    if iso:
        return TrivialPart("isolated", _mask_to_labels(iso))
    return TrivialPart("empty", frozenset())


def clique_partition(g: SimpleGraph) -> CliquePartition:
    return _clique_partition(g, trivial_part(g))


def _clique_partition(g: SimpleGraph, tp: TrivialPart) -> CliquePartition:
    triv = _labels_to_mask(tp.vertices)
    rest = ((1 << g.n) - 1) & ~triv
    blocks = []
    for comp in _components(g.adj, rest):
        for v in _bits(comp):
            if g.adj[v] & comp != comp & ~(1 << v):
                raise NotPermissibleError(f"component {_mask_to_labels(comp)} is not a clique")
        blocks.append(_mask_to_labels(comp))
    blocks.sort(key=min)
    return CliquePartition(tuple(blocks))


def codim_breakdown(g: SimpleGraph) -> dict:
    tp = trivial_part(g)
    cp = _clique_partition(g, tp)
    n, m, c, l = g.n, tp.m, cp.c, cp.l
    if tp.kind == "dominating":
        value, closed = 2 * m + l, n - c + m
    else:
        value, closed = l, n - c - m
    if value != closed:
        raise InvariantViolation(f"codim forms disagree for {g}: {value} vs {closed}")
    return {"codim": value, "kind": tp.kind, "m": m, "c": c, "l": l,
            "orders": list(cp.orders)}


def codim(g: SimpleGraph) -> int:
    return codim_breakdown(g)["codim"]


def complement(g: SimpleGraph) -> SimpleGraph:
    full = (1 << g.n) - 1
    return SimpleGraph._trusted(g.n, tuple(full & ~nb & ~(1 << v) for v, nb in enumerate(g.adj)))


# ---------------------------------------------------------------------------
# graphs of Grassmannian points


@lru_cache(maxsize=None)
def _complement_positions(n: int) -> tuple[int, ...]:
    """For each edge bit, the lex position of the complementary (n-2)-subset."""
    idx = SubsetIndexer(n, n - 2)
    full = set(range(1, n + 1))
    return tuple(idx.rank(sorted(full - {i + 1, j + 1})) for i, j in edge_pairs(n))


def graph_of_point(g: PluckerVector) -> SimpleGraph:
    if g.r != g.n - 2:
        raise ValueError(f"graph encoding needs Grass(n-2, n), got Grass({g.r},{g.n})")
    pos = _complement_positions(g.n)
    mask = sum(1 << k for k, p in enumerate(pos) if g.coords[p] == 0)
    return SimpleGraph.from_edge_mask(g.n, mask)


def graph_masks(coords: np.ndarray, n: int) -> np.ndarray:
    """Edge masks of the graphs of a stack of Grass(n-2, n) Pluecker vectors."""
    pos = _complement_positions(n)
    out = np.zeros(coords.shape[0], dtype=np.int64)
    for k, p in enumerate(pos):
        out |= (coords[:, p] == 0).astype(np.int64) << k
    return out


# ---------------------------------------------------------------------------
# enumeration


def _set_partitions(items: list[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]


def _check_enum_n(n: int) -> None:
    if n < 3:
        raise ValueError("n must be at least 3")
    if n > MAX_ENUM_N:
        raise BudgetExceeded(f"permissible graphs on {n} vertices", n, MAX_ENUM_N)


def enumerate_permissible(n: int) -> Iterator[SimpleGraph]:
    """Each permissible labelled graph once: a dominating set plus >= 2 cliques on the rest."""
    _check_enum_n(n)
    for dom in range(1 << n):
        rest = [v for v in range(n) if not dom >> v & 1]
        if len(rest) < 2:
            continue
        for part in _set_partitions(rest):
            if len(part) < 2:
                continue
            adj = [0] * n
            for block in part:
                bm = sum(1 << v for v in block)
                for v in block:
                    adj[v] = bm & ~(1 << v) | dom
            for v in _bits(dom):
                adj[v] = ((1 << n) - 1) & ~(1 << v)
            yield SimpleGraph(n, tuple(adj))


@lru_cache(maxsize=None)
def permissible_masks(n: int) -> tuple[int, ...]:
    return tuple(sorted(g.edge_mask() for g in enumerate_permissible(n)))


def _minimal(masks: Iterable[int]) -> set[int]:
    ms = sorted(set(masks), key=_popcount)
    keep: list[int] = []
    for m in ms:
        if not any(k & m == k for k in keep):
            keep.append(m)
    return set(keep)


def supergraphs_by_filter(edge_mask: int, n: int) -> set[int]:
    return _minimal(m for m in permissible_masks(n) if m & edge_mask == edge_mask)


def supergraphs_by_branching(edge_mask: int, n: int) -> set[int]:
    """Resolve induced paths u-v-w by either adding uw or making v dominating."""
    full_edges = (1 << (n * (n - 1) // 2)) - 1
    bit = _edge_bit(n)
    leaves: set[int] = set()
    seen: set[int] = set()
    stack = [edge_mask]
    while stack:
        em = stack.pop()
        if em in seen:
            continue
        seen.add(em)
        if em == full_edges:
            continue
        g = SimpleGraph.from_edge_mask(n, em)
        rest = ((1 << n) - 1) & ~g.dominating_mask()
        if _is_cluster(g.adj, rest):
            leaves.add(em)
            continue
        u, v, w = _induced_p3(g.adj, rest)
        stack.append(em | 1 << bit[(min(u, w), max(u, w))])
        star = em
        for x in range(n):
            if x != v:
                star |= 1 << bit[(min(x, v), max(x, v))]
        stack.append(star)
    return _minimal(leaves)


def minimal_permissible_supergraphs(edges: Iterable[Sequence[int]] | SimpleGraph,
                                    n: int) -> frozenset[SimpleGraph]:
    g = edges if isinstance(edges, SimpleGraph) else SimpleGraph.from_edges(n, edges)
    if g.is_complete():
        raise NotPermissibleError("the complete graph has no permissible supergraph")
    em = g.edge_mask()
    by_branch = supergraphs_by_branching(em, n)
    if n <= MAX_ENUM_N:
        by_filter = supergraphs_by_filter(em, n)
        if by_filter != by_branch:
            raise InvariantViolation(
                f"supergraph routes disagree for {g}: {sorted(by_filter)} vs {sorted(by_branch)}"
            )
    return frozenset(SimpleGraph.from_edge_mask(n, m) for m in by_branch)


# ---------------------------------------------------------------------------
# cover pairs


@dataclass(frozen=True)
class PermissiblePair:
    s_graph: SimpleGraph
    t_graph: SimpleGraph
    clique_order: int

    def __post_init__(self):
        s, t, a = self.s_graph, self.t_graph, self.clique_order
        n = s.n
        if not 2 <= a <= n - 1:
            raise ValueError(f"clique order {a} outside 2..{n - 1}")
        if complement(s) != t:
            raise ValueError("T graph must be the complement of S graph")
        clique = ((1 << n) - 1) & ~s.isolated_mask()
        if _popcount(clique) != a or s != SimpleGraph.clique(n, _mask_to_labels(clique)):
            raise ValueError("S graph must be a clique of the stated order plus isolated vertices")
        if not (is_permissible(s) and is_permissible(t)):
            raise ValueError("both graphs of a pair must be permissible")

    @property
    def clique(self) -> frozenset[int]:
        return _mask_to_labels(((1 << self.s_graph.n) - 1) & ~self.s_graph.isolated_mask())

    @classmethod
    def on(cls, n: int, clique: Iterable[int]) -> PermissiblePair:
        s = SimpleGraph.clique(n, clique)
        return cls(s, complement(s), _popcount(((1 << n) - 1) & ~s.isolated_mask()))

    @classmethod
    def _trusted(cls, n: int, clique: tuple[int, ...]) -> PermissiblePair:
        # a clique of order 2..n-1 plus isolated vertices, and its complement,
        # are permissible by construction; tests check this against __post_init__
        s = SimpleGraph.clique(n, clique)
        pair = object.__new__(cls)
        object.__setattr__(pair, "s_graph", s)
        object.__setattr__(pair, "t_graph", complement(s))
        object.__setattr__(pair, "clique_order", len(clique))
        return pair


def _cover_pairs(n: int) -> Iterator[PermissiblePair]:
    """Cover pairs by clique order, then lexicographically by clique."""
    for a in range(2, n):
        for s in combinations(range(1, n + 1), a):
            yield PermissiblePair._trusted(n, s)


def minimal_cover_pairs(n: int) -> frozenset[PermissiblePair]:
    if n < 3:
        raise ValueError("n must be at least 3")
    return frozenset(_cover_pairs(n))


def minimize_pair(g: SimpleGraph) -> frozenset[PermissiblePair]:
    """Shrink G and enlarge its complement H to a covering clique/complement pair.

    Follows the case split on the trivial part of G and on whether the
    complement H' of G' = G minus G_triv is permissible as a graph on V(G').
    Each branch that the case analysis allows contributes one pair.
    """
    tp = trivial_part(g)
    cp = _clique_partition(g, tp)
    n = g.n
    h = complement(g)
    triv = set(tp.vertices)
    rest = ((1 << n) - 1) & ~_labels_to_mask(triv)
    h_prime_ok = rest != 0 and _permissible_on(h.adj, rest)
    big = [b for b in cp.blocks if len(b) >= 2]

    oriented: list[tuple[frozenset[int], bool]] = []  # (clique of S, S is the G side)
    if tp.kind == "dominating":
        # (A) complete H' on V(G'); G~ keeps only the edges at G_triv
        oriented.append((_mask_to_labels(rest), False))
        # (B) / clique selection: the rest of G' becomes dominating in H~
        for b in big:
            oriented.append((frozenset(triv | b), True))
    elif h_prime_ok:
        # G is a single clique plus isolated vertices: (G, H) is already a pair
        oriented.append((cp.blocks[0], True))
    else:
        for b in big:
            oriented.append((b, True))

    out = set()
    for clique, s_is_g in oriented:
        pair = PermissiblePair.on(n, clique)
        g_side, h_side = (pair.s_graph, pair.t_graph) if s_is_g else (pair.t_graph, pair.s_graph)
        if not (g_side <= g and h <= h_side):
            raise InvariantViolation(f"pair on {sorted(clique)} does not refine {g}")
        out.add(pair)
    return frozenset(out)


def dim_Y_breakdown(n: int) -> tuple[int, PermissiblePair]:
    if n < 4:
        raise ValueError("n must be at least 4")
    grass = 2 * (n - 2)
    core = (n - 2) ** 2
    best = None
    for pair in _cover_pairs(n):
        d = 2 * grass - codim(pair.s_graph) - codim(pair.t_graph) + core
        if best is None or d > best[0]:
            best = (d, pair)
    value, pair = best
    if value != n * n - n - 4:
        raise InvariantViolation(f"combinatorial maximum {value} != n^2-n-4 = {n * n - n - 4}")
    return value, pair


def dim_Y_formula(n: int) -> int:
    return dim_Y_breakdown(n)[0]


# ---------------------------------------------------------------------------
# isomorphism classes (small n only)


def canonical_form(g: SimpleGraph) -> tuple[int, int]:
    """Least edge mask over relabellings that list vertices by decreasing degree."""
    if g.n > MAX_ENUM_N:
        raise BudgetExceeded(f"canonical form on {g.n} vertices", g.n, MAX_ENUM_N)
    n = g.n
    by_deg: dict[int, list[int]] = {}
    for v in range(n):
        by_deg.setdefault(-_popcount(g.adj[v]), []).append(v)
    classes = [by_deg[k] for k in sorted(by_deg)]
    edges = [(i, j) for i, j in edge_pairs(n) if g.adj[i] >> j & 1]
    bit = _edge_bit(n)
    best = None
    for perms in product(*(permutations(c) for c in classes)):
        order = [v for p in perms for v in p]
        pos = {v: k for k, v in enumerate(order)}
        m = 0
        for i, j in edges:
            a, b = pos[i], pos[j]
            m |= 1 << bit[(min(a, b), max(a, b))]
        if best is None or m < best:
            best = m
    return n, best


# ---------------------------------------------------------------------------
# text formats


def to_dot(g: SimpleGraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines += [f"  {v};" for v in range(1, g.n + 1)]
    lines += [f"  {i} -- {j};" for i, j in g.edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> SimpleGraph:
    """Parse ``"n; i j; i j; ..."``."""
    parts = [p.strip() for p in text.strip().split(";") if p.strip()]
    if not parts:
        raise ValueError("empty edge list")
    n = int(parts[0])
    edges = []
    for p in parts[1:]:
        toks = p.split()
        if len(toks) != 2:
            raise ValueError(f"bad edge {p!r}")
        edges.append((int(toks[0]), int(toks[1])))
    return SimpleGraph.from_edges(n, edges)


def format_edge_list(g: SimpleGraph) -> str:
    return "; ".join([str(g.n)] + [f"{i} {j}" for i, j in g.edges()])


def parse_edges(n: int, text: str) -> SimpleGraph:
    """Parse ``"1-2,2-3"`` on n vertices."""
    edges = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        a, sep, b = tok.partition("-")
        if not sep:
            raise ValueError(f"bad edge {tok!r}; expected i-j")
        edges.append((int(a), int(b)))
    return SimpleGraph.from_edges(n, edges)
