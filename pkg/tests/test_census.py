from itertools import product

import pytest
from hypothesis import given, strategies as st

from pmideal.census import (
    CensusRecord,
    StratumSpec,
    count_graph_stratum,
    count_H_pairs,
    count_Y_bruteforce,
    estimate_dimension,
    gl_order,
    graph_stratum_counts,
    records_from_csv,
    records_to_csv,
    shard_ranges,
    verify_bundle_count,
)
from pmideal.errors import BudgetExceeded, EmptyLocusError
from pmideal.exact_matrix import ExactMatrix, principal_minors, rank
from pmideal.finite_field import PrimeModulus
from pmideal.grassmannian import componentwise_product_vanishes, enumerate_grassmannian, gaussian_binomial
from pmideal.graphs import SimpleGraph, enumerate_permissible
from pmideal.loci import verify_duality


def slow_count(n, r, t, q):
    mod = PrimeModulus(q)
    total = 0
    for e in product(range(q), repeat=n * n):
        m = ExactMatrix(n, n, e, mod)
        if r != "any" and rank(m) != r:
            continue
        if all(v.value == 0 for v in principal_minors(m, t).values()):
            total += 1
    return total


def slow_pairs(n, t, q):
    pts = list(enumerate_grassmannian(n, t, q))
    return sum(componentwise_product_vanishes(g, h) for g in pts for h in pts)


def test_trivial_examples():
    assert count_Y_bruteforce(StratumSpec(3, "any", 1, 2)).count == 64
    assert count_Y_bruteforce(StratumSpec(3, 3, 3, 2)).count == 0


@pytest.mark.parametrize("r", ["any", 0, 1, 2, 3])
@pytest.mark.parametrize("t", [1, 2, 3])
def test_bruteforce_against_scalar_oracle(r, t):
    assert count_Y_bruteforce(StratumSpec(3, r, t, 2)).count == slow_count(3, r, t, 2)


@pytest.mark.parametrize("jobs", [1, 2, 3, 8])
def test_sharding_does_not_change_counts(jobs):
    spec = StratumSpec(3, 2, 2, 3)
    assert count_Y_bruteforce(spec, jobs=jobs).count == slow_count(3, 2, 2, 3)
    ranges = shard_ranges(3, 3, jobs)
    assert ranges[0][0] == 0
    assert all(a[1] == b[0] for a, b in zip(ranges, ranges[1:]))


@pytest.mark.parametrize("n,t,q", [(2, 1, 2), (3, 1, 3), (4, 2, 2), (4, 1, 3)])
def test_pairs_against_scalar_oracle(n, t, q):
    assert count_H_pairs(n, t, q).count == slow_pairs(n, t, q)


def test_pair_examples():
    assert count_H_pairs(2, 1, 2).count == 2


def test_gl_order():
    assert [gl_order(1, q) for q in (2, 3, 101)] == [1, 2, 100]
    assert gl_order(2, 2) == 6
    assert gl_order(2, 3) == 48
    with pytest.raises(ValueError):
        gl_order(0, 2)
    with pytest.raises(OverflowError):
        gl_order(8, 101)


def test_bundle_identity_small():
    # frozen from the two independent enumerations above
    expected = {(3, 1, 2): (12, 12), (3, 1, 3): (36, 18), (4, 2, 2): (1884, 314)}
    for (n, t, q), (ys, hs) in expected.items():
        res = verify_bundle_count(n, t, q)
        assert res and res.matrices.count == ys and res.pairs.count == hs


def test_graph_stratum_examples():
    for q in (2, 3):
        assert count_graph_stratum(4, SimpleGraph.empty(4), q).count == gaussian_binomial(4, 2, q)
    k4_minus = SimpleGraph.from_edges(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)])
    assert count_graph_stratum(4, k4_minus, 2).count == 1
    with pytest.raises(ValueError):
        count_graph_stratum(5, SimpleGraph.empty(4), 2)


def test_graph_stratum_monotone():
    gs = list(enumerate_permissible(4))
    counts = {g: r.count for g, r in zip(gs, graph_stratum_counts(4, gs, 3))}
    for a in gs:
        for b in gs:
            if a <= b:
                assert counts[a] >= counts[b]
    direct = count_graph_stratum(4, gs[5], 3)
    assert direct.count == counts[gs[5]]


def _rec(q, count):
    return CensusRecord(StratumSpec(5, 3, 3, q), count, "graph-stratum")


def test_estimate_dimension_examples():
    est = estimate_dimension([_rec(q, gaussian_binomial(5, 3, q)) for q in (3, 7, 11)])
    assert est.dimension == 6 and est.residual < 0.5
    for n in (3, 4, 6):
        recs = [CensusRecord(StratumSpec(n, 1, 1, q), gaussian_binomial(n, 1, q), "grassmann-pairs")
                for q in (7, 11)]
        assert estimate_dimension(recs).dimension == n - 1
    edge = SimpleGraph.from_edges(5, [(1, 2)])
    est = estimate_dimension([count_graph_stratum(5, edge, q) for q in (7, 11)])
    assert est.dimension == 5


def test_estimate_dimension_errors():
    with pytest.raises(ValueError):
        estimate_dimension([_rec(7, 10)])
    with pytest.raises(ValueError):
        estimate_dimension([_rec(7, 10), _rec(7, 11)])
    with pytest.raises(EmptyLocusError):
        estimate_dimension([_rec(7, 0), _rec(11, 5)])


def test_budget(monkeypatch):
    monkeypatch.setenv("PMIDEAL_BUDGET", "1000")
    with pytest.raises(BudgetExceeded) as info:
        count_Y_bruteforce(StratumSpec(3, "any", 1, 2))
    assert info.value.projected == 2**9 * 9
    with pytest.raises(BudgetExceeded):
        count_H_pairs(5, 2, 3)
    monkeypatch.delenv("PMIDEAL_BUDGET")
    with pytest.raises(BudgetExceeded):
        count_Y_bruteforce(StratumSpec(5, "any", 1, 3))


def test_spec_validation():
    with pytest.raises(ValueError):
        StratumSpec(3, "any", 0, 2)
    with pytest.raises(ValueError):
        StratumSpec(3, 4, 1, 2)
    with pytest.raises(ValueError):
        StratumSpec(3, 1, 1, 4)
    assert StratumSpec.parse(3, "2", 1, 2).r == 2


@given(st.integers(1, 6), st.one_of(st.just("any"), st.integers(0, 6)),
       st.integers(0, 2**70), st.sampled_from(["matrix-bruteforce", "grassmann-pairs"]),
       st.integers(0, 10**6))
def test_record_round_trips(n, r, count, method, ms):
    if r != "any" and r > n:
        r = n
    rec = CensusRecord(StratumSpec(n, r, 1, 3), count, method, ms)
    text = rec.to_json()
    assert CensusRecord.from_json(text) == rec
    assert CensusRecord.from_json(text).to_json() == text
    assert '"count": "%d"' % count in text
    csv_text = records_to_csv([rec, rec.without_timing()])
    assert records_from_csv(csv_text) == [rec, rec.without_timing()]
    assert csv_text.splitlines()[0] == "n,r,t,q,count,method,elapsed_ms"


def test_duality_counts():
    for q in (2, 3):
        assert verify_duality(3, 1, q)
