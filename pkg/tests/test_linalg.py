import random
from fractions import Fraction

import pytest

from conftest import dense_rank
from nilcohom.errors import DimensionMismatch, SingularMatrix
from nilcohom.linalg import (
    ExactMatrix,
    backend,
    dot,
    in_kernel,
    inverse,
    kernel_basis,
    rank,
    reduce_rows,
    solve,
    streaming_rank,
)
from nilcohom.scalars import QI
from nilcohom import _rowred_py


def rand_matrix(rng, nrows, ncols, density=0.6, bound=6):
    rows = []
    for _ in range(nrows):
        rows.append(
            [
                Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
                if rng.random() < density
                else Fraction(0)
                for _ in range(ncols)
            ]
        )
    return rows


def test_rank_identity_and_proportional_rows():
    assert rank(ExactMatrix.identity(3)).rank == 3
    m = ExactMatrix.from_dense([[1, 2], [2, 4]])
    assert rank(m) .rank == 1
    assert rank(m).pivot_cols == (0,)


def test_rank_agrees_with_dense_oracle_on_100_random_matrices():
    rng = random.Random(42)
    for _ in range(100):
        nr, nc = rng.randint(1, 8), rng.randint(1, 8)
        rows = rand_matrix(rng, nr, nc)
        m = ExactMatrix.from_dense(rows)
        assert rank(m).rank == dense_rank(rows)


def test_rank_equals_rank_of_transpose():
    rng = random.Random(7)
    for _ in range(60):
        rows = rand_matrix(rng, rng.randint(1, 7), rng.randint(1, 7))
        m = ExactMatrix.from_dense(rows)
        assert rank(m).rank == rank(m.transpose()).rank


def test_streaming_rank_examples():
    assert streaming_rank([[2**k, 2**k, 0] for k in range(4)], 3) == 1
    assert streaming_rank([], 3) == 0
    assert streaming_rank(iter([{0: Fraction(1, 2)}, {0: 3}]), 4) == 1
    with pytest.raises(DimensionMismatch):
        streaming_rank([[1, 2]], 3)
    with pytest.raises(DimensionMismatch):
        streaming_rank([{5: 1}], 3)


def test_streaming_agrees_with_materialized_rank():
    rng = random.Random(3)
    for _ in range(50):
        rows = rand_matrix(rng, rng.randint(1, 12), rng.randint(1, 6))
        assert streaming_rank(rows, len(rows[0])) == dense_rank(rows)


def test_kernel_basis_examples():
    assert len(kernel_basis(ExactMatrix(2, 3))) == 3
    assert kernel_basis(ExactMatrix.identity(4)) == []


def test_kernel_vectors_annihilate_and_complement_row_space():
    rng = random.Random(9)
    for _ in range(40):
        rows = rand_matrix(rng, rng.randint(1, 8), rng.randint(1, 8))
        m = ExactMatrix.from_dense(rows)
        ker = kernel_basis(m)
        prof = rank(m)
        assert len(ker) == m.ncols - prof.rank
        for v in ker:
            assert not any(m.mat_vec(v))
        # kernel vectors stacked with a row basis span the whole space
        red = reduce_rows(rows, m.ncols)
        combined = red.basis_rows() + [v for v in ker]
        assert streaming_rank(combined, m.ncols) == m.ncols


def test_solve_examples():
    assert solve(ExactMatrix.identity(2), [1, 2]) == [1, 2]
    x = solve(ExactMatrix.from_dense([[1, 1]]), [5])
    assert x is not None and x[0] + x[1] == 5
    assert solve(ExactMatrix.from_dense([[1], [1]]), [0, 1]) is None
    with pytest.raises(DimensionMismatch):
        solve(ExactMatrix.identity(2), [1, 2, 3])


def test_solve_random_consistency():
    rng = random.Random(13)
    for _ in range(40):
        rows = rand_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        a = ExactMatrix.from_dense(rows)
        x0 = [Fraction(rng.randint(-3, 3)) for _ in range(a.ncols)]
        b = a.mat_vec(x0)
        x = solve(a, b)
        assert x is not None and a.mat_vec(x) == b


def test_inverse_round_trip_and_singular():
    rng = random.Random(17)
    found = 0
    while found < 10:
        rows = rand_matrix(rng, 4, 4, density=0.8)
        m = ExactMatrix.from_dense(rows)
        if rank(m).rank < 4:
            continue
        found += 1
        assert m.matmul(inverse(m)) == ExactMatrix.identity(4)
    with pytest.raises(SingularMatrix):
        inverse(ExactMatrix.from_dense([[1, 2], [2, 4]]))


def test_gaussian_field_path():
    i = QI(0, 1)
    m = ExactMatrix.from_dense([[i, 1], [1, -i]], field="Qi")
    # second row is -i times the first
    assert rank(m).rank == 1
    ker = kernel_basis(m)
    assert len(ker) == 1 and not any(m.mat_vec(ker[0]))
    # promotion mid-stream: rational rows first, then a Gaussian one
    r = streaming_rank([[1, 0], [0, 1], [i, i]], 2)
    assert r == 2


def test_both_backends_produce_identical_reduced_rows():
    rng = random.Random(23)
    rows = []
    for _ in range(300):
        nnz = rng.randint(1, 8)
        cols = sorted(rng.sample(range(20), nnz))
        rows.append((cols, [rng.randint(-50, 50) or 3 for _ in cols]))
    active = _active_kernel_basis(20, rows)
    ref = _rowred_py.IntRowBasis(20)
    for cols, vals in rows:
        ref.add_sparse(cols, list(vals))
    assert active.rank == ref.rank
    assert active.pivot_cols() == ref.pivot_cols()
    assert active.basis_rows() == ref.basis_rows()


def _active_kernel_basis(ncols, rows):
    from nilcohom.linalg import IntRowBasis

    basis = IntRowBasis(ncols)
    for cols, vals in rows:
        basis.add_sparse(cols, list(vals))
    return basis


def test_backends_agree_across_the_machine_word_boundary():
    pytest.importorskip("nilcohom._rowred")
    from nilcohom import _rowred

    rng = random.Random(99)
    for _ in range(12):
        ncols = rng.randint(1, 25)
        fast = _rowred.IntRowBasis(ncols)
        ref = _rowred_py.IntRowBasis(ncols)
        for _ in range(rng.randint(1, 120)):
            nnz = rng.randint(1, ncols)
            cols = sorted(rng.sample(range(ncols), nnz))
            vals = []
            for _ in cols:
                mag = rng.choice([1, 5, 2**30, 2**40, 2**70, 2**100])
                vals.append(rng.randint(-mag, mag) or 1)
            assert fast.add_sparse(cols, list(vals)) == ref.add_sparse(cols, list(vals))
        assert fast.rank == ref.rank
        assert fast.basis_rows() == ref.basis_rows()


def test_in_kernel_against_reduced_rows():
    rows = [[1, 1, 0], [0, 1, 1]]
    red = reduce_rows(rows, 3)
    assert in_kernel([1, -1, 1], red.basis_rows())
    assert not in_kernel([1, 0, 0], red.basis_rows())
    assert dot([1, 2], [2, -1]) == 0


def test_backend_reports_a_name():
    assert backend() in ("compiled", "python")
