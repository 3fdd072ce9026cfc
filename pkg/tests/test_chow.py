import itertools
import random

from flaginst.chow import (
    H1,
    H1H2,
    H1SQ,
    H2,
    H2SQ,
    HYPERPLANE,
    POINT,
    ChernData,
    ChowClass,
    character_product,
    chern_twist,
    chi_of_character,
    chi_rr,
    chow_mul,
    degree,
    instanton_chern,
    line_bundle_chern,
    line_class,
    validate_g_fixtures,
    whitney_quotient,
    G1_CHERN,
    G2_CHERN,
)
from flaginst.ring import QQ

BASIS_LIFTS = {
    0: (0, 0),  # 1
    1: (1, 0),  # h1
    2: (0, 1),  # h2
    3: (2, 0),  # h1^2
    4: (0, 2),  # h2^2
    5: (2, 1),  # h1^2 h2
}


def ambient_mul(p, q):
    """Multiply in Z[h1,h2]/(h1^3, h2^3); dicts keyed by (i, j)."""
    out = {}
    for (a, b), c in p.items():
        for (d, e), f in q.items():
            i, j = a + d, b + e
            if i > 2 or j > 2:
                continue
            out[(i, j)] = out.get((i, j), QQ(0)) + c * f
    return out


def ambient_lift(u):
    out = {}
    for idx, coef in enumerate(u.c):
        if coef:
            key = BASIS_LIFTS[idx]
            out[key] = out.get(key, QQ(0)) + coef
    return out


def pairing_oracle(u, v, w):
    """deg_F(u v w) computed upstairs: deg_{P2xP2}(u v w (h1 + h2))."""
    prod = ambient_mul(ambient_mul(ambient_lift(u), ambient_lift(v)), ambient_lift(w))
    prod = ambient_mul(prod, {(1, 0): QQ(1), (0, 1): QQ(1)})
    return prod.get((2, 2), QQ(0))


BASIS = [
    ChowClass.unit(),
    H1,
    H2,
    H1SQ,
    H2SQ,
    POINT,
]


def test_product_agrees_with_intersection_pairing():
    # Poincare duality makes the triple pairing a complete check.
    for u, v in itertools.product(BASIS, repeat=2):
        prod = chow_mul(u, v)
        for w in BASIS:
            assert degree(chow_mul(prod, w)) == pairing_oracle(u, v, w)


def test_h1_times_h2():
    assert chow_mul(H1, H2) == H1SQ + H2SQ


def test_cubes_vanish_and_mixed_monomials_agree():
    assert chow_mul(H1, H1SQ) == ChowClass.zero()
    assert chow_mul(H2, H2SQ) == ChowClass.zero()
    assert chow_mul(H1, H2SQ) == POINT
    assert chow_mul(H2, H1SQ) == POINT


def test_unit():
    rng = random.Random(0)
    for _ in range(5):
        v = ChowClass([rng.randint(-5, 5) for _ in range(6)])
        assert chow_mul(ChowClass.unit(), v) == v


def test_degree_normalization():
    h3 = chow_mul(chow_mul(HYPERPLANE, HYPERPLANE), HYPERPLANE)
    assert degree(h3) == 6
    assert degree(POINT) == 1
    assert degree(chow_mul(H1, H1SQ)) == 0


def test_associative_and_commutative_on_random_classes():
    rng = random.Random(5)
    for _ in range(20):
        u, v, w = (ChowClass([rng.randint(-3, 3) for _ in range(6)]) for _ in range(3))
        assert chow_mul(u, v) == chow_mul(v, u)
        assert chow_mul(chow_mul(u, v), w) == chow_mul(u, chow_mul(v, w))


def test_chern_twist_identity():
    c = instanton_chern(2)
    assert chern_twist(c, (0, 0)) == c


def test_chern_twist_matches_split_bundle_oracle():
    rng = random.Random(9)
    for _ in range(15):
        a1, b1, a2, b2, ta, tb = (rng.randint(-2, 2) for _ in range(6))
        alpha, beta = line_class(a1, b1), line_class(a2, b2)
        T = line_class(ta, tb)
        data = ChernData(
            2,
            alpha + beta,
            chow_mul(alpha, beta),
            ChowClass.zero(),
        )
        twisted = chern_twist(data, (ta, tb))
        assert twisted.c1 == alpha + beta + 2 * T
        assert twisted.c2 == chow_mul(alpha + T, beta + T)
        assert twisted.c3 == ChowClass.zero()


def test_structure_sheaf_of_conic_pipeline():
    # c_t(O_C) = 1 - h1^2 - h2^2 - 2 h1^2 h2, twist by (1,0) gives 1 - h1h2
    oc = ChernData(0, ChowClass.zero(), -1 * H1H2, -2 * POINT)
    oc1 = chern_twist(oc, (1, 0))
    assert oc1.c1 == ChowClass.zero()
    assert oc1.c2 == -1 * H1H2
    assert oc1.c3 == ChowClass.zero()


def line_cohomology_oracle(a1, a2):
    """Closed form for h^i(O_F(a1,a2)) used as the chi oracle."""
    if a1 > a2:
        a1, a2 = a2, a1
    value = abs(QQ((a1 + 1) * (a2 + 1) * (a1 + a2 + 2), 2))
    out = [QQ(0)] * 4
    if a1 >= 0:
        out[0] = value
    elif a1 <= -2 and a1 + a2 + 1 >= 0:
        out[1] = value
    elif a2 >= 0 and a1 + a2 + 3 <= 0:
        out[2] = value
    elif a2 <= -2:
        out[3] = value
    return out


def test_chi_rr_matches_line_bundle_alternating_sums():
    for a in range(-4, 5):
        for b in range(-4, 5):
            h = line_cohomology_oracle(a, b)
            expected = h[0] - h[1] + h[2] - h[3]
            assert chi_rr(line_bundle_chern(a, b)) == expected, (a, b)


def test_chi_rr_structure_sheaf():
    assert chi_rr(line_bundle_chern(0, 0)) == 1


def test_chi_rr_instanton_values():
    for k in (1, 2, 3):
        c = instanton_chern(k)
        assert chi_rr(c) == 2 - 2 * k
        assert chi_rr(chern_twist(c, (0, -1))) == -k
        assert chi_rr(chern_twist(c, (-1, 0))) == -k


def test_hilbert_polynomial_identity():
    for k in (1, 2, 3):
        c = instanton_chern(k)
        for t in range(-3, 4):
            expected = QQ((t + 1) * (2 * t * t + 4 * t + 2 * (1 - k)))
            assert chi_rr(chern_twist(c, (t, t))) == expected


def test_g_fixtures_whitney():
    assert validate_g_fixtures()


def test_chi_with_twisted_cotangent_factors():
    # chi(E (x) G2(0,-2)) = -2 - k and chi(E (x) G4) = -4k - 2
    for k in (1, 2, 3):
        chE = instanton_chern(k).character()
        chG2t = chern_twist(G2_CHERN, (0, -2)).character()
        chi_g2 = chi_of_character(character_product(chE, chG2t))
        assert chi_g2 == -2 - k
        chi_e_m10 = chi_rr(chern_twist(instanton_chern(k), (-1, 0)))
        assert 3 * chi_e_m10 + chi_g2 == -4 * k - 2


def test_whitney_quotient_of_monad_twists():
    for k in (1, 2, 3):
        left = [(-1, 0)] * k + [(0, -1)] * k
        middle = [(0, 0)] * (4 * k + 2)
        right = [(1, 0)] * k + [(0, 1)] * k
        data = whitney_quotient(middle, left, right)
        assert data.rank == 2
        assert data.c1 == ChowClass.zero()
        assert data.c2 == k * H1H2
        assert data.c3 == ChowClass.zero()


def test_whitney_trivial_case():
    data = whitney_quotient([(0, 0)], [], [])
    assert data.rank == 1
    assert data.c1 == ChowClass.zero()
    assert data.c2 == ChowClass.zero()
    assert data.c3 == ChowClass.zero()


def test_g_fixture_characters_match_euler_presentation():
    # ch is additive: ch(G1) = 3 ch(O(1,0)) - ch(O(2,0))
    for g, a in ((G1_CHERN, (1, 0)), (G2_CHERN, (0, 1))):
        three = line_bundle_chern(*a).character()
        double = line_bundle_chern(2 * a[0], 2 * a[1]).character()
        expected = tuple(
            (3 * x - y) if i == 0 else (3 * x - y)
            for i, (x, y) in enumerate(zip(three, double))
        )
        got = g.character()
        assert got[0] == expected[0]
        for i in (1, 2, 3):
            assert got[i] == expected[i]


def test_swap_factors_symmetry():
    u = ChowClass((1, 2, 3, 4, 5, 6))
    v = ChowClass((0, 1, -1, 2, 0, 3))
    assert chow_mul(u, v).swap_factors() == chow_mul(u.swap_factors(), v.swap_factors())
