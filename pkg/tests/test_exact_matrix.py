import random
from itertools import combinations, permutations, product

import pytest
from hypothesis import given, settings, strategies as st

from pmideal.errors import SingularMatrixError
from pmideal.finite_field import PrimeModulus
from pmideal.exact_matrix import (
    ExactMatrix,
    IndexSet,
    Permute,
    Scale,
    Transpose,
    apply_symmetry,
    det,
    exterior_power,
    format_matrix,
    inverse,
    jacobi_complementary_minor_check,
    minor,
    parse_matrix,
    principal_minors,
    rank,
)


def leibniz(rows, q):
    """Permutation-expansion determinant; independent of the elimination code."""
    n = len(rows)
    total = 0
    for p in permutations(range(n)):
        sign = (-1) ** sum(1 for a, b in combinations(p, 2) if a > b)
        term = sign
        for i in range(n):
            term *= rows[i][p[i]]
        total += term
    return total % q


def rank_by_minors(m):
    a = m.to_lists()
    best = 0
    for k in range(1, min(m.rows, m.cols) + 1):
        for rs in combinations(range(m.rows), k):
            for cs in combinations(range(m.cols), k):
                if leibniz([[a[i][j] for j in cs] for i in rs], m.q):
                    best = k
    return best


def mat(rows, q):
    return ExactMatrix.from_rows(rows, q)


def test_index_set_validation():
    assert IndexSet.of(4, [3, 1]).members == (1, 3)
    assert IndexSet.of(4, [1, 3]).complement().members == (2, 4)
    with pytest.raises(ValueError):
        IndexSet(3, (2, 1))
    with pytest.raises(ValueError):
        IndexSet(3, (1, 4))


def test_rank_examples():
    assert rank(ExactMatrix.identity(4, 2)) == 4
    assert rank(ExactMatrix.zeros(3, 3, 3)) == 0
    assert rank(mat([[1, 1], [1, 1]], 2)) == 1


def test_minor_examples():
    i3 = ExactMatrix.identity(3, 7)
    assert minor(i3, [1, 2], [1, 2]).value == 1
    assert minor(i3, [1, 2], [2, 3]).value == 0
    assert minor(mat([[1, 2], [3, 4]], 5), [1, 2], [1, 2]).value == 3
    with pytest.raises(ValueError):
        minor(i3, [1, 2], [1])


def test_principal_minor_examples():
    assert set(v.value for v in principal_minors(ExactMatrix.identity(4, 5), 2).values()) == {1}
    zd = mat([[0, 1, 2], [3, 0, 4], [1, 1, 0]], 5)
    assert all(v.value == 0 for v in principal_minors(zd, 1).values())
    (only,) = principal_minors(zd, 3).values()
    assert only == det(zd)


def test_rank_equals_largest_nonzero_exterior_power_exhaustive():
    mod = PrimeModulus(2)
    for entries in product(range(2), repeat=9):
        m = ExactMatrix(3, 3, entries, mod)
        r = rank(m)
        nonzero = [t for t in (1, 2, 3) if not exterior_power(m, t).is_zero()]
        assert r == (max(nonzero) if nonzero else 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.sampled_from([2, 3, 7]), st.integers(0, 2**32))
def test_rank_against_minor_oracle(rows, cols, q, seed):
    m = ExactMatrix.random(rows, cols, q, random.Random(seed))
    assert rank(m) == rank_by_minors(m)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.sampled_from([2, 3, 5, 101]), st.integers(0, 2**32))
def test_det_against_leibniz(n, q, seed):
    m = ExactMatrix.random(n, n, q, random.Random(seed))
    assert det(m).value == leibniz(m.to_lists(), q)


def test_exterior_power_edges():
    rng = random.Random(3)
    m = ExactMatrix.random(4, 4, 7, rng)
    assert exterior_power(m, 1) == m
    top = exterior_power(m, 4)
    assert top.shape == (1, 1) and top[0, 0] == det(m).value


@pytest.mark.parametrize("seed", range(5))
def test_cauchy_binet(seed):
    rng = random.Random(seed)
    a = ExactMatrix.random(4, 3, 7, rng)
    b = ExactMatrix.random(3, 4, 7, rng)
    for t in (1, 2, 3):
        assert exterior_power(a @ b, t) == exterior_power(a, t) @ exterior_power(b, t)


def test_inverse_examples():
    assert inverse(ExactMatrix.identity(3, 5)) == ExactMatrix.identity(3, 5)
    assert inverse(mat([[2]], 5)).to_lists() == [[3]]
    with pytest.raises(SingularMatrixError):
        inverse(mat([[1, 1], [1, 1]], 3))
    rng = random.Random(0)
    for _ in range(20):
        m = ExactMatrix.random_invertible(rng.randint(1, 6), 101, rng)
        assert inverse(inverse(m)) == m
        assert m @ inverse(m) == ExactMatrix.identity(m.rows, 101)


def test_jacobi_trivial_cases():
    assert all(jacobi_complementary_minor_check(ExactMatrix.identity(4, 7), s)
               for k in (1, 2, 3) for s in combinations(range(1, 5), k))
    d = ExactMatrix.diag([2, 3, 5, 6], 7)
    assert all(jacobi_complementary_minor_check(d, s) for s in combinations(range(1, 5), 2))


def test_inverse_swaps_vanishing_principal_minors():
    # all principal t-minors of A vanish iff all principal (n-t)-minors of A^-1 do
    q = 3
    mod = PrimeModulus(q)
    for entries in product(range(q), repeat=9):
        a = ExactMatrix(3, 3, entries, mod)
        if rank(a) < 3:
            continue
        ai = inverse(a)
        for t in (1, 2):
            lhs = all(v.value == 0 for v in principal_minors(a, t).values())
            rhs = all(v.value == 0 for v in principal_minors(ai, 3 - t).values())
            assert lhs == rhs


def test_text_round_trip():
    m = ExactMatrix.random(3, 4, 11, random.Random(1))
    text = format_matrix(m)
    assert parse_matrix(text) == m
    assert format_matrix(parse_matrix(text)) == text


def _vanishing_pattern(m, t):
    return {s.members for s, v in principal_minors(m, t).items() if v.value == 0}


@pytest.mark.parametrize("seed", range(6))
def test_symmetry_actions(seed):
    rng = random.Random(seed)
    n, q = 4, 5
    m = ExactMatrix.random(n, n, q, rng)
    assert apply_symmetry(m, Permute(tuple(range(1, n + 1)))) == m
    sigma = list(range(1, n + 1))
    rng.shuffle(sigma)
    pm = apply_symmetry(m, Permute(tuple(sigma)))
    for i, j in product(range(n), repeat=2):
        assert pm[sigma[i] - 1, sigma[j] - 1] == m[i, j]
    for t in (1, 2, 3):
        relabelled = {tuple(sorted(sigma[i - 1] for i in s)) for s in _vanishing_pattern(m, t)}
        assert _vanishing_pattern(pm, t) == relabelled
        assert principal_minors(apply_symmetry(m, Transpose()), t) == principal_minors(m, t)
        scaled = apply_symmetry(m, Scale("row", 2, 3))
        assert _vanishing_pattern(scaled, t) == _vanishing_pattern(m, t)
    assert rank(apply_symmetry(m, Scale("col", 1, 4))) == rank(m)
    with pytest.raises(ValueError):
        apply_symmetry(m, Scale("row", 1, 0))
