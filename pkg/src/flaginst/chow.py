"""The Chow ring of the flag threefold, Chern-class calculus, and
Riemann-Roch evaluation.

A(F) = Z[h1,h2] / (h1^2 - h1*h2 + h2^2, h1^3, h2^3).  Classes are stored on
the basis {1, h1, h2, h1^2, h2^2, h1^2*h2}; the product h1*h2 is never
stored, it equals h1^2 + h2^2.  The point class is h1^2*h2 = h1*h2^2 and
deg(h^3) = 6 for the hyperplane h = h1 + h2.
"""

from .errors import ChernMismatch
from .ring import ONE, QQ, ZERO, scalar_to_string


class ChowClass:
    """Element of A(F) with rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = tuple(QQ(v) for v in coeffs)
        if len(self.c) != 6:
            raise ValueError("expected six coefficients")

    @staticmethod
    def zero():
        return ChowClass((0, 0, 0, 0, 0, 0))

    @staticmethod
    def unit():
        return ChowClass((1, 0, 0, 0, 0, 0))

    def graded_part(self, d):
        parts = {0: (0,), 1: (1, 2), 2: (3, 4), 3: (5,)}[d]
        out = [ZERO] * 6
        for i in parts:
            out[i] = self.c[i]
        return ChowClass(out)

    def is_pure(self, d):
        return all(
            not v for i, v in enumerate(self.c) if i not in {0: {0}, 1: {1, 2}, 2: {3, 4}, 3: {5}}[d]
        )

    def __add__(self, other):
        return ChowClass(tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other):
        return ChowClass(tuple(a - b for a, b in zip(self.c, other.c)))

    def __neg__(self):
        return ChowClass(tuple(-a for a in self.c))

    def __mul__(self, other):
        if isinstance(other, ChowClass):
            return chow_mul(self, other)
        q = QQ(other)
        return ChowClass(tuple(a * q for a in self.c))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ChowClass) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def swap_factors(self):
        c = self.c
        return ChowClass((c[0], c[2], c[1], c[4], c[3], c[5]))

    def __str__(self):
        names = ("", "h1", "h2", "h1^2", "h2^2", "h1^2h2")
        parts = []
        for v, n in zip(self.c, names):
            if not v:
                continue
            parts.append(("%s" % v) if not n else "%s*%s" % (v, n))
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__

    def to_json(self):
        return [scalar_to_string(v) for v in self.c]


H1 = ChowClass((0, 1, 0, 0, 0, 0))
H2 = ChowClass((0, 0, 1, 0, 0, 0))
H1SQ = ChowClass((0, 0, 0, 1, 0, 0))
H2SQ = ChowClass((0, 0, 0, 0, 1, 0))
POINT = ChowClass((0, 0, 0, 0, 0, 1))
HYPERPLANE = H1 + H2
H1H2 = H1SQ + H2SQ  # the conic class h1*h2 in normal form


def chow_mul(u, v):
    """Product in A(F), truncated above degree 3."""
    u0, u1, u2, u11, u22, upt = u.c
    v0, v1, v2, v11, v22, vpt = v.c
    # degree 1 * degree 1:  h1*h2 = h1^2 + h2^2
    c11 = u0 * v11 + u11 * v0 + u1 * v1 + (u1 * v2 + u2 * v1)
    c22 = u0 * v22 + u22 * v0 + u2 * v2 + (u1 * v2 + u2 * v1)
    # degree 1 * degree 2:  h1*h1^2 = 0, h1*h2^2 = h2*h1^2 = pt, h2*h2^2 = 0
    cpt = u0 * vpt + upt * v0 + u1 * v22 + u2 * v11 + u22 * v1 + u11 * v2
    return ChowClass((u0 * v0, u0 * v1 + u1 * v0, u0 * v2 + u2 * v0, c11, c22, cpt))


def degree(u):
    """Coefficient of the point class."""
    return u.c[5]


def line_class(a, b):
    """c1 of the line bundle O_F(a, b)."""
    return ChowClass((0, a, b, 0, 0, 0))


TODD = (
    ChowClass.unit(),
    HYPERPLANE,
    ChowClass((0, 0, 0, QQ(3, 2), QQ(3, 2), 0)),
    POINT,
)


class ChernData:
    """Rank and Chern classes c1, c2, c3 of a sheaf on F."""

    __slots__ = ("rank", "c1", "c2", "c3")

    def __init__(self, rank, c1, c2, c3):
        for ci, d in ((c1, 1), (c2, 2), (c3, 3)):
            if not ci.is_pure(d):
                raise ValueError("c%d not pure of degree %d: %s" % (d, d, ci))
        self.rank = rank
        self.c1 = c1
        self.c2 = c2
        self.c3 = c3

    def __eq__(self, other):
        return (
            isinstance(other, ChernData)
            and self.rank == other.rank
            and self.c1 == other.c1
            and self.c2 == other.c2
            and self.c3 == other.c3
        )

    def __repr__(self):
        return "ChernData(rank=%s, c1=%s, c2=%s, c3=%s)" % (
            self.rank,
            self.c1,
            self.c2,
            self.c3,
        )

    def total(self):
        return ChowClass.unit() + self.c1 + self.c2 + self.c3

    def character(self):
        """Chern character (ch0, ch1, ch2, ch3)."""
        c1, c2, c3 = self.c1, self.c2, self.c3
        ch2 = QQ(1, 2) * (c1 * c1 - 2 * c2)
        ch3 = QQ(1, 6) * (c1 * c1 * c1 - 3 * (c1 * c2) + 3 * c3)
        return (QQ(self.rank), c1, ch2.graded_part(2), ch3.graded_part(3))


def _binom_poly(n, k):
    """Binomial C(n, k) as a polynomial in n, valid for negative n."""
    num = 1
    for i in range(k):
        num *= n - i
    den = 1
    for i in range(1, k + 1):
        den *= i
    return QQ(num, den)


def chern_twist(c, t):
    """Chern data of E(t) for E with data c and t = (a, b)."""
    a, b = t
    T = line_class(a, b)
    r = c.rank
    c1 = c.c1 + r * T
    c2 = c.c2 + (r - 1) * (c.c1 * T) + _binom_poly(r, 2) * (T * T)
    c3 = (
        c.c3
        + (r - 2) * (c.c2 * T)
        + _binom_poly(r - 1, 2) * (c.c1 * (T * T))
        + _binom_poly(r, 3) * (T * T * T)
    )
    return ChernData(r, c1.graded_part(1), c2.graded_part(2), c3.graded_part(3))


def chi_of_character(ch):
    """Euler characteristic from a Chern character tuple via HRR."""
    ch0, ch1, ch2, ch3 = ch
    total = (
        degree(ch3)
        + degree(ch2 * TODD[1])
        + degree(ch1 * TODD[2])
        + ch0 * degree(TODD[3])
    )
    return total


def chi_rr(c):
    """chi(E) = deg(ch(E) * td(T_F))_3."""
    return chi_of_character(c.character())


def character_product(chE, chG):
    """ch(E (x) G) from ch(E), ch(G)."""
    e0, e1, e2, e3 = chE
    g0, g1, g2, g3 = chG
    return (
        e0 * g0,
        (g0 * e1 + e0 * g1).graded_part(1),
        (g0 * e2 + e1 * g1 + e0 * g2).graded_part(2),
        (g0 * e3 + e1 * g2 + e2 * g1 + e0 * g3).graded_part(3),
    )


def line_bundle_chern(a, b):
    c1 = line_class(a, b)
    return ChernData(1, c1, ChowClass.zero(), ChowClass.zero())


def instanton_chern(k):
    """Rank 2, c1 = 0, c2 = k*h1*h2, c3 = 0."""
    return ChernData(2, ChowClass.zero(), k * H1H2, ChowClass.zero())


def total_chern_of_twists(twists):
    """Total Chern class of a direct sum of line bundles O(a_i, b_i)."""
    total = ChowClass.unit()
    for a, b in twists:
        total = total * (ChowClass.unit() + line_class(a, b))
    return total


def invert_total_chern(u):
    """Inverse of 1 + n in the truncated ring (n nilpotent)."""
    if u.c[0] != ONE:
        raise ValueError("total Chern class must start with 1")
    n = u - ChowClass.unit()
    n2 = n * n
    return ChowClass.unit() - n + n2 - n2 * n


def whitney_quotient(middle, left, right):
    """Chern data of the monad cohomology: c(mid) / (c(left) c(right))."""
    total = (
        total_chern_of_twists(middle)
        * invert_total_chern(total_chern_of_twists(left))
        * invert_total_chern(total_chern_of_twists(right))
    )
    rank = len(middle) - len(left) - len(right)
    return ChernData(
        rank,
        total.graded_part(1),
        total.graded_part(2),
        total.graded_part(3),
    )


# Derived constants for the rank-2 bundles pulled back from the twisted
# cotangent bundle of each plane factor, validated by Whitney on their
# three-term presentations (see tests).
G1_CHERN = ChernData(2, H1, H1SQ, ChowClass.zero())
G2_CHERN = ChernData(2, H2, H2SQ, ChowClass.zero())


def validate_g_fixtures():
    """Whitney check: c(G1) * c(O(2,0)) = c(O(1,0))^3, and symmetrically."""
    for g, a in ((G1_CHERN, (1, 0)), (G2_CHERN, (0, 1))):
        lhs = g.total() * (ChowClass.unit() + line_class(2 * a[0], 2 * a[1]))
        rhs = total_chern_of_twists([a, a, a])
        if lhs != rhs:
            raise ChernMismatch("twisted cotangent fixture fails Whitney: %s" % (a,))
    return True
