import random

import pytest

from flaginst.curves import ConicPoint, conic_param, pencil
from flaginst.errors import ReducibleInput
from flaginst.jump import (
    ValidatedCount,
    count_real_roots,
    jump_matrix,
    jump_order_from_matrix,
    pencil_jump_count,
    rational_roots,
    scan_grid,
    up_divmod,
    up_eval,
    up_mul,
    up_squarefree,
)
from flaginst.monad import charge1_family, charge2_example, generate_monad
from flaginst.restrict import jumping_order, splitting_type
from flaginst.ring import QQ, det_dense


def generic_fixture():
    return charge1_family([1, 2, -1], [2, 0, 1], 1, 1)


def split_fixture():
    return charge1_family([0, 0, 0], [0, 0, 0], 1, 1)


def random_smooth_conic(rng):
    while True:
        p = [rng.randint(-5, 5) for _ in range(3)]
        L = [rng.randint(-5, 5) for _ in range(3)]
        if any(p) and any(L) and sum(a * b for a, b in zip(p, L)) != 0:
            return ConicPoint.make(p, L)


def test_up_helpers():
    p = [QQ(-1), QQ(0), QQ(1)]  # u^2 - 1
    roots, rest = rational_roots(p)
    assert sorted(roots) == [QQ(-1), QQ(1)] and rest == [QQ(1)] or len(rest) == 1
    q = up_mul([QQ(-1), QQ(1)], [QQ(-1), QQ(1)])
    sf = up_squarefree(q)
    assert len(sf) == 2
    # u^2 - 2 has two real irrational roots
    assert count_real_roots([QQ(-2), QQ(0), QQ(1)], QQ(-10), QQ(10)) == 2
    quot, rem = up_divmod([QQ(-1), QQ(0), QQ(1)], [QQ(-1), QQ(1)])
    assert rem == [] and quot == [QQ(1), QQ(1)]
    assert up_eval([QQ(1), QQ(2)], QQ(3)) == 7


def test_jump_matrix_requires_smooth():
    m = generic_fixture()
    with pytest.raises(ReducibleInput):
        jump_matrix(m, ConicPoint.make((1, 0, 0), (0, 1, 0)))


def test_jump_matrix_determinant_matches_oracle():
    m = generic_fixture()
    rng = random.Random(51)
    seen_jump = False
    for _ in range(12):
        c = random_smooth_conic(rng)
        det = det_dense(jump_matrix(m, c))
        order = jumping_order(m, c)
        assert (det == 0) == (order != (0, 0)), c
        assert jump_order_from_matrix(m, c) == order[0]
        seen_jump = seen_jump or order != (0, 0)


def test_jump_matrix_on_known_jumping_conic():
    m = generic_fixture()
    c = ConicPoint.make((1, -1, 4), (1, QQ(-3, 5), QQ(1, 5)))
    assert jumping_order(m, c) == (1, 1)
    assert det_dense(jump_matrix(m, c)) == 0
    assert jump_order_from_matrix(m, c) == 1


def test_pencil_count_charge1_both_directions():
    m = generic_fixture()
    base = ConicPoint.make((1, 2, 3), (1, 1, 1))
    for direction, vec in (("L", (0, 1, -1)), ("p", (0, 0, 1))):
        spec = pencil(base, direction, vec)
        result = pencil_jump_count(m, spec, expect=1)
        assert result.count == 1, (direction, result)
        assert result.discrepancy is None
        assert result.all_confirmed()


def test_pencil_count_charge2_example():
    # the divisor has type (2,2): each pencil direction meets it twice,
    # counting oracle-confirmed hits at the degenerate member once
    m = charge2_example()
    rng = random.Random(8)
    for direction in ("L", "p"):
        for _ in range(3):
            base = random_smooth_conic(rng)
            vec = [rng.randint(-3, 3) for _ in range(3)]
            if not any(vec):
                continue
            try:
                spec = pencil(base, direction, vec)
            except Exception:
                continue
            result = pencil_jump_count(m, spec)
            assert result.count + result.jumping_degenerate == 2, (base, vec, result)
            assert result.all_confirmed()


def test_pencil_split_fixture_no_smooth_jumps():
    # the split bundle jumps exactly on reducible conics, which are part
    # of the pencil's declared degeneracy set
    m = split_fixture()
    base = ConicPoint.make((1, 2, 3), (1, 1, 1))
    spec = pencil(base, "L", (0, 1, -1))
    result = pencil_jump_count(m, spec)
    assert result.count == 0, result
    # the reducible member itself jumps
    for u in spec.reducible_params:
        c = spec.member(u)
        assert not c.is_smooth()
        assert jumping_order(m, c) != (0, 0)


def test_scan_reports_are_deterministic():
    m = generic_fixture()
    a = scan_grid(m, 25, seed=9)
    b = scan_grid(m, 25, seed=9)
    assert a.to_csv() == b.to_csv()
    assert a.to_json() == b.to_json()
    c = scan_grid(m, 25, seed=10)
    assert c.to_csv() != a.to_csv()


def test_scan_summary_counts():
    m = generic_fixture()
    rep = scan_grid(m, 40, seed=3)
    s = rep.summary
    assert s["trivial"] + s["order_one"] + s["higher"] + s["errors"] + s["reducible"] == 40
    assert s["trivial"] >= 36
    assert s["higher"] == 0
    # every non-trivial smooth record is re-verified by the oracle
    for r in rep.records:
        if r.smooth and r.order and r.order != (0, 0):
            st = splitting_type(m, conic_param(r.conic))
            assert st.pair[0] == r.order[0]


def test_scan_csv_shape():
    m = generic_fixture()
    rep = scan_grid(m, 5, seed=1)
    lines = rep.to_csv().strip().split("\n")
    assert lines[0].startswith("p0,p1,p2,L0")
    assert len(lines) == 6
