import random

from hypothesis import given, settings, strategies as st

from flaginst.ring import (
    QQ,
    BiPoly,
    BIPOLY_ZERO,
    coeff_vector,
    det_dense,
    flag_quadric,
    graded_basis,
    graded_dim,
    kernel_basis,
    matrix_rank,
    rank_mod_p,
    rows_from_dense,
    x_linear,
    x_var,
    y_linear,
    y_var,
)


def reduce_oracle(terms):
    """Independent reduction: substitute x0*y0 := -(x1*y1 + x2*y2) until done."""
    work = dict(terms)
    changed = True
    while changed:
        changed = False
        for m, c in list(work.items()):
            if not c:
                del work[m]
                continue
            if m[0] >= 1 and m[3] >= 1:
                del work[m]
                base = (m[0] - 1, m[1], m[2], m[3] - 1, m[4], m[5])
                for tail in ((0, 1, 0, 0, 1, 0), (0, 0, 1, 0, 0, 1)):
                    t = tuple(a + b for a, b in zip(base, tail))
                    work[t] = work.get(t, QQ(0)) - c
                changed = True
                break
    return {m: c for m, c in work.items() if c}


def random_poly(rng, nterms=4, maxdeg=2):
    terms = []
    for _ in range(nterms):
        m = tuple(rng.randint(0, maxdeg) for _ in range(6))
        terms.append((m, QQ(rng.randint(-5, 5))))
    return terms


def test_quadric_reduces_to_zero():
    assert flag_quadric().is_zero()


def test_reduced_monomial_untouched():
    p = x_var(1) * y_var(1)
    assert p.coeffs == {(0, 1, 0, 0, 1, 0): QQ(1)}


def test_single_reduction_step():
    # x0*y0*x2 -> -x2*(x1*y1 + x2*y2)
    p = BiPoly.from_terms([((1, 0, 1, 1, 0, 0), 1)])
    expected = BiPoly.from_terms([((0, 1, 1, 0, 1, 0), -1), ((0, 0, 2, 0, 0, 1), -1)])
    assert p == expected


def test_reduce_matches_oracle_on_random_polys():
    rng = random.Random(7)
    for _ in range(40):
        terms = random_poly(rng)
        p = BiPoly.from_terms(terms)
        assert p.coeffs == reduce_oracle(dict_from(terms))


def dict_from(terms):
    acc = {}
    for m, c in terms:
        acc[m] = acc.get(m, QQ(0)) + c
    return acc


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
@settings(max_examples=25, deadline=None)
def test_reduction_is_multiplicative(a, b, c):
    p = x_linear([a, b, c]) * y_var(0) + y_linear([c, a, b]) * x_var(0)
    q = x_var(0) * y_var(0) + x_var(2) * y_var(1) * c
    lhs = p * q
    raw = {}
    for m, cf in p.coeffs.items():
        for n, df in q.coeffs.items():
            t = tuple(i + j for i, j in zip(m, n))
            raw[t] = raw.get(t, QQ(0)) + cf * df
    assert lhs.coeffs == reduce_oracle(raw)


def test_graded_basis_sizes_match_closed_form():
    for a in range(6):
        for b in range(6):
            basis = graded_basis(a, b)
            assert len(basis) == graded_dim(a, b)
            assert len(set(basis)) == len(basis)
            for m in basis:
                assert not (m[0] >= 1 and m[3] >= 1)


def test_graded_basis_small_cases():
    assert [m for m in graded_basis(1, 0)] == [
        (0, 0, 1, 0, 0, 0),
        (0, 1, 0, 0, 0, 0),
        (1, 0, 0, 0, 0, 0),
    ]
    assert graded_basis(0, 0) == [(0, 0, 0, 0, 0, 0)]
    assert len(graded_basis(1, 1)) == 8


def test_multiplication_stays_in_graded_pieces():
    rng = random.Random(3)
    for _ in range(10):
        a, b, c, d = (rng.randint(0, 2) for _ in range(4))
        p = random_graded(rng, a, b)
        q = random_graded(rng, c, d)
        prod = p * q
        if prod.is_zero():
            continue
        assert prod.bidegree() == (a + c, b + d)
        coeff_vector(prod, graded_basis(a + c, b + d))


def random_graded(rng, a, b):
    basis = graded_basis(a, b)
    return BiPoly.from_terms((m, QQ(rng.randint(-3, 3))) for m in basis)


def test_kernel_identity_matrix_trivial():
    rows = rows_from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert kernel_basis(rows, 3) == []


def test_kernel_rank_one_case():
    rows = rows_from_dense([[1, 2], [2, 4]])
    basis = kernel_basis(rows, 2)
    assert len(basis) == 1
    v = basis[0]
    assert v[0] * 1 + v[1] * 2 == 0 and any(v)


def test_kernel_agrees_with_dense_oracle_on_random_matrices():
    rng = random.Random(11)
    for _ in range(20):
        mat = [[rng.randint(-4, 4) for _ in range(6)] for _ in range(6)]
        rows = rows_from_dense(mat)
        rank = matrix_rank(rows, 6)
        null = kernel_basis(rows, 6)
        assert rank + len(null) == 6
        assert rank == dense_rank_oracle(mat)
        for v in null:
            for row in mat:
                assert sum(QQ(a) * b for a, b in zip(row, v)) == 0


def dense_rank_oracle(mat):
    m = [[QQ(v) for v in row] for row in mat]
    rank = 0
    cols = len(m[0])
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = QQ(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        rank += 1
        r += 1
        if r == len(m):
            break
    return rank


def test_koszul_syzygy_space_is_three_dimensional():
    # coefficient triples (u0,u1,u2) of linear forms with u0*x0+u1*x1+u2*x2 = 0
    target = graded_basis(2, 0)
    rows = [{} for _ in target]
    idx = {m: i for i, m in enumerate(target)}
    for var in range(3):
        for lin in range(3):
            col = 3 * var + lin
            prod = x_var(var) * x_var(lin)
            for m, c in prod.coeffs.items():
                rows[idx[m]][col] = rows[idx[m]].get(col, QQ(0)) + c
    null = kernel_basis([r for r in rows], 9)
    assert len(null) == 3


def test_det_dense():
    assert det_dense([[2, 0], [0, 3]]) == 6
    assert det_dense([[1, 2], [2, 4]]) == 0


def test_rank_mod_p():
    p = 2**31 - 1
    assert rank_mod_p([[1, 2], [2, 4]], p) == 1
    assert rank_mod_p([[1, 0], [0, 1]], p) == 2


def test_evaluate_exact_and_mod():
    p = x_var(0) * y_var(1) + 3 * x_var(2)
    assert p.evaluate([QQ(1), QQ(0), QQ(2)], [QQ(0), QQ(5), QQ(0)]) == QQ(11)
    assert p.evaluate_mod([1, 0, 2], [0, 5, 0], 7) == 4


def test_json_round_trip():
    p = x_linear([1, -2, 3]) * y_linear([0, 1, 1])
    q = BiPoly.from_json(p.to_json())
    assert p == q
