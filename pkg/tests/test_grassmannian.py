import random
from collections import Counter
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from pmideal.exact_matrix import ExactMatrix, principal_minors, rank
from pmideal.finite_field import PrimeModulus
from pmideal.grassmannian import (
    PluckerVector,
    SubsetIndexer,
    componentwise_product_vanishes,
    echelon_representatives,
    enumerate_grassmannian,
    factor,
    gaussian_binomial,
    grassmannian_array,
    normalize,
    plucker_of_columns,
    plucker_of_rows,
    satisfies_plucker_relations,
    theta,
)
from pmideal.census import gl_order


def count_subspaces(n, r, q):
    """Full-rank r x n matrices divided by |GL(r, q)|: an independent count."""
    mod = PrimeModulus(q)
    full = sum(
        1 for e in product(range(q), repeat=r * n)
        if rank(ExactMatrix(r, n, e, mod)) == r
    )
    return full // gl_order(r, q)


@pytest.mark.parametrize("n,r,q", [(2, 1, 2), (3, 1, 2), (3, 2, 3), (4, 2, 2)])
def test_gaussian_binomial_against_matrix_count(n, r, q):
    assert gaussian_binomial(n, r, q) == count_subspaces(n, r, q)


def test_gaussian_binomial_values():
    # frozen from the independent matrix count above and the product formula
    assert gaussian_binomial(2, 1, 2) == 3
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(5, 3, 2) == 155
    assert gaussian_binomial(4, 2, 3) == 130
    assert gaussian_binomial(5, 3, 3) == 1210
    assert gaussian_binomial(5, 6, 3) == 0


@given(st.integers(1, 9).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
def test_subset_rank_is_a_bijection(nr):
    n, r = nr
    idx = SubsetIndexer(n, r)
    subsets = list(combinations(range(1, n + 1), r))
    assert [idx.rank(s) for s in subsets] == list(range(len(subsets)))
    assert [idx.unrank(k) for k in range(idx.size)] == subsets


def test_column_example_over_f2():
    b = ExactMatrix.from_rows([[1, 0], [0, 1], [1, 1], [0, 0]], 2)
    g = plucker_of_columns(b)
    # minors at 12, 13, 14, 23, 24, 34 evaluated by hand
    assert g.coords == (1, 1, 0, 1, 0, 0)
    assert g.vanishing() == {(1, 4), (2, 4), (3, 4)}


def test_coordinate_points():
    e = ExactMatrix.from_rows([[1, 0], [0, 1], [0, 0], [0, 0]], 5)
    assert plucker_of_columns(e).coords == (1, 0, 0, 0, 0, 0)
    assert plucker_of_rows(e.transpose()).coords == (1, 0, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        plucker_of_columns(ExactMatrix.from_rows([[1, 1], [1, 1], [0, 0]], 5))


@pytest.mark.parametrize("seed", range(8))
def test_projective_invariance(seed):
    rng = random.Random(seed)
    q = 7
    b = ExactMatrix.random(5, 3, q, rng)
    if rank(b) < 3:
        return
    g = ExactMatrix.random_invertible(3, q, rng)
    assert plucker_of_columns(b @ g) == plucker_of_columns(b)
    assert plucker_of_rows(g @ b.transpose()) == plucker_of_columns(b)
    assert plucker_of_rows(b.transpose()) == plucker_of_columns(b)
    assert satisfies_plucker_relations(plucker_of_columns(b))
    for i_set in combinations(range(1, 6), 3):
        if plucker_of_columns(b).coordinate(i_set).value:
            nb = normalize(b, i_set)
            assert plucker_of_columns(nb) == plucker_of_columns(b)
            assert normalize(b @ g, i_set) == nb
            assert normalize(nb, i_set) == nb


def test_normalize_example():
    b = ExactMatrix.from_rows([[2, 0], [0, 2], [1, 1]], 5)
    assert normalize(b, [1, 2]).to_lists() == [[1, 0], [0, 1], [3, 3]]


def test_factor_identity_and_rank_one():
    f = factor(ExactMatrix.identity(3, 5), 3)
    assert f.left == f.core == f.right == ExactMatrix.identity(3, 5)
    assert f.i_set.members == f.j_set.members == (1, 2, 3)
    u = ExactMatrix.from_rows([[0], [2], [1]], 5)
    v = ExactMatrix.from_rows([[3, 0, 4]], 5)
    a = u @ v
    f = factor(a, 1)
    assert f.core.to_lists() == [[a[1, 0]]]
    assert f.product() == a


def test_factor_round_trip_all_rank2_4x4_f2():
    mod = PrimeModulus(2)
    fibres = Counter()
    for e in product(range(2), repeat=16):
        a = ExactMatrix(4, 4, e, mod)
        if rank(a) != 2:
            continue
        f = factor(a, 2)
        assert f.product() == a
        assert rank(f.core) == 2
        assert f.left.submatrix(f.i_set, [1, 2]) == ExactMatrix.identity(2, 2)
        assert f.right.submatrix([1, 2], f.j_set) == ExactMatrix.identity(2, 2)
        pair = theta(a, 2)
        fibres[pair] += 1
        # principal 2-minors vanish iff the Pluecker product does
        vanish = all(v.value == 0 for v in principal_minors(a, 2).values())
        assert vanish == componentwise_product_vanishes(*pair)
    assert set(fibres.values()) == {gl_order(2, 2)}
    assert len(fibres) == 35 * 35


def test_theta_column_point_ignores_right_factor():
    rng = random.Random(5)
    q = 5
    for _ in range(10):
        a = ExactMatrix.random(4, 2, q, rng) @ ExactMatrix.random(2, 4, q, rng)
        if rank(a) != 2:
            continue
        g1 = ExactMatrix.random_invertible(4, q, rng)
        g2 = ExactMatrix.random_invertible(4, q, rng)
        assert theta(g1 @ a @ g2, 2)[0] == theta(g1 @ a, 2)[0]
        assert theta(ExactMatrix.identity(4, q), 4)[0].coords == (1,)


@pytest.mark.parametrize("n,r,q", [(2, 1, 2), (4, 2, 2), (5, 3, 2), (4, 2, 3), (5, 2, 3), (4, 1, 5)])
def test_enumeration_matches_echelon_oracle(n, r, q):
    fast = [tuple(row) for row in grassmannian_array(n, r, q).tolist()]
    slow = [plucker_of_rows(m).coords for m in echelon_representatives(n, r, q)]
    assert fast == slow
    assert len(set(fast)) == len(fast) == gaussian_binomial(n, r, q)
    for c in fast:
        assert next(x for x in c if x) == 1


@pytest.mark.parametrize("r,n", [(2, 4), (2, 5), (3, 5)])
def test_enumerated_points_satisfy_relations(r, n):
    for g in enumerate_grassmannian(n, r, 3):
        assert g.canonical and satisfies_plucker_relations(g)


@pytest.mark.parametrize("n,r", [(4, 2), (5, 2)])
def test_vanishing_patterns_are_dual(n, r):
    def patterns(n, r):
        return Counter(g.vanishing() for g in enumerate_grassmannian(n, r, 2))

    full = set(range(1, n + 1))
    comp = Counter({frozenset(tuple(sorted(full - set(s))) for s in pat): c
                    for pat, c in patterns(n, r).items()})
    assert comp == patterns(n, n - r)


def test_componentwise_product_examples():
    a = PluckerVector.from_coords(4, 2, [1, 0, 0, 0, 0, 0], 3)
    b = PluckerVector.from_coords(4, 2, [0, 0, 0, 0, 0, 1], 3)
    assert not componentwise_product_vanishes(a, a)
    assert componentwise_product_vanishes(a, b)


def test_json_round_trip():
    for g in enumerate_grassmannian(4, 2, 3):
        text = g.to_json()
        assert PluckerVector.from_json(text) == g
        assert PluckerVector.from_json(text).to_json() == text


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 10), min_size=6, max_size=6).filter(any), st.integers(1, 10))
def test_canonical_scaling(coords, lam):
    g = PluckerVector.from_coords(4, 2, coords, 11)
    h = PluckerVector.from_coords(4, 2, [c * lam for c in coords], 11)
    assert g == h and g.canonical
