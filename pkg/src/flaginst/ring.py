"""Exact scalars, the bigraded coordinate ring of the flag threefold, and
rational linear algebra.

The ambient ring is K[x0,x1,x2,y0,y1,y2] with K the rationals.  The flag
threefold is cut out by the quadric Q = x0*y0 + x1*y1 + x2*y2, and every
polynomial is stored in normal form: no monomial divisible by x0*y0 (the
leading term of Q under lex with x0 > x1 > x2 > y0 > y1 > y2).
"""

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    from fractions import Fraction as QQ


def scalar(value, den=None):
    """Coerce to an exact rational."""
    if den is not None:
        return QQ(value, den)
    return QQ(value)


ZERO = scalar(0)
ONE = scalar(1)


def scalar_from_string(s):
    return QQ(s.strip())


def scalar_to_string(q):
    return str(q)


# monomials are 6-tuples of non-negative exponents (x0,x1,x2,y0,y1,y2)

_QUADRIC_TAIL = (((0, 1, 0, 0, 1, 0), -1), ((0, 0, 1, 0, 0, 1), -1))


def _mono_mul(m, n):
    return (m[0] + n[0], m[1] + n[1], m[2] + n[2], m[3] + n[3], m[4] + n[4], m[5] + n[5])


def reduce_ambient(coeffs):
    """Normal form of a polynomial dict modulo the flag quadric.

    Returns (normal_form, quotient) with  p = normal_form + quotient * Q.
    """
    work = dict(coeffs)
    quot = {}
    # substituting x0*y0 := -(x1*y1 + x2*y2) strictly lowers the x0-degree
    pending = [m for m in work if m[0] >= 1 and m[3] >= 1]
    while pending:
        m = pending.pop()
        c = work.get(m, ZERO)
        if not c:
            continue
        del work[m]
        base = (m[0] - 1, m[1], m[2], m[3] - 1, m[4], m[5])
        quot[base] = quot.get(base, ZERO) + c
        if not quot[base]:
            del quot[base]
        for tail, sign in _QUADRIC_TAIL:
            t = _mono_mul(base, tail)
            work[t] = work.get(t, ZERO) + sign * c
            if not work[t]:
                del work[t]
            elif t[0] >= 1 and t[3] >= 1:
                pending.append(t)
    return {m: c for m, c in work.items() if c}, quot


class BiPoly:
    """Bihomogeneous-or-not polynomial in normal form modulo the flag quadric."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, reduced=False):
        if not reduced:
            coeffs, _ = reduce_ambient(coeffs)
        self.coeffs = coeffs

    @staticmethod
    def from_terms(terms):
        acc = {}
        for m, c in terms:
            acc[m] = acc.get(m, ZERO) + QQ(c)
        return BiPoly(acc)

    def is_zero(self):
        return not self.coeffs

    def bidegree(self):
        """(a, b) when bihomogeneous, None for 0 or mixed."""
        degs = {(m[0] + m[1] + m[2], m[3] + m[4] + m[5]) for m in self.coeffs}
        if len(degs) == 1:
            return degs.pop()
        return None

    def terms(self):
        return sorted(self.coeffs.items())

    def __add__(self, other):
        acc = dict(self.coeffs)
        for m, c in other.coeffs.items():
            acc[m] = acc.get(m, ZERO) + c
            if not acc[m]:
                del acc[m]
        return BiPoly(acc, reduced=True)

    def __sub__(self, other):
        acc = dict(self.coeffs)
        for m, c in other.coeffs.items():
            acc[m] = acc.get(m, ZERO) - c
            if not acc[m]:
                del acc[m]
        return BiPoly(acc, reduced=True)

    def __neg__(self):
        return BiPoly({m: -c for m, c in self.coeffs.items()}, reduced=True)

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            c = QQ(other)
            if not c:
                return BIPOLY_ZERO
            return BiPoly({m: v * c for m, v in self.coeffs.items()}, reduced=True)
        acc = {}
        for m, c in self.coeffs.items():
            for n, d in other.coeffs.items():
                t = _mono_mul(m, n)
                acc[t] = acc.get(t, ZERO) + c * d
        return BiPoly(acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def mul_quotient(self, other):
        """(normal form, quotient by Q) of the raw product self * other.

        The quotient is returned as a raw ambient dict; it need not be in
        normal form itself.
        """
        acc = {}
        for m, c in self.coeffs.items():
            for n, d in other.coeffs.items():
                t = _mono_mul(m, n)
                acc[t] = acc.get(t, ZERO) + c * d
        nf, quot = reduce_ambient(acc)
        return BiPoly(nf, reduced=True), quot

    def evaluate(self, xs, ys):
        """Exact evaluation at rational coordinates."""
        total = ZERO
        for m, c in self.coeffs.items():
            v = c
            for e, val in zip(m, tuple(xs) + tuple(ys)):
                if e:
                    v = v * val ** e
            total += v
        return total

    def evaluate_mod(self, xs, ys, p):
        """Evaluation at integer coordinates modulo a prime."""
        total = 0
        pt = tuple(xs) + tuple(ys)
        for m, c in self.coeffs.items():
            num = int(c.numerator)
            den = int(c.denominator)
            v = (num * pow(den, -1, p)) % p
            for e, val in zip(m, pt):
                if e:
                    v = (v * pow(val % p, e, p)) % p
            total = (total + v) % p
        return total

    def swap_factors(self):
        """Exchange the two projective factors (x_i <-> y_i)."""
        return BiPoly({(m[3], m[4], m[5], m[0], m[1], m[2]): c for m, c in self.coeffs.items()})

    def __str__(self):
        if not self.coeffs:
            return "0"
        names = ("x0", "x1", "x2", "y0", "y1", "y2")
        parts = []
        for m, c in self.terms():
            factors = [names[i] + ("^%d" % e if e > 1 else "") for i, e in enumerate(m) if e]
            body = "*".join(factors) if factors else "1"
            parts.append("%s*%s" % (c, body))
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self):
        bd = self.bidegree()
        return {
            "bidegree": list(bd) if bd is not None else None,
            "terms": [
                {"exponents": list(m), "coeff": scalar_to_string(c)}
                for m, c in self.terms()
            ],
        }

    @staticmethod
    def from_json(data):
        return BiPoly.from_terms(
            (tuple(t["exponents"]), scalar_from_string(t["coeff"])) for t in data["terms"]
        )


BIPOLY_ZERO = BiPoly({}, reduced=True)
BIPOLY_ONE = BiPoly({(0, 0, 0, 0, 0, 0): ONE}, reduced=True)


def x_var(i):
    m = [0] * 6
    m[i] = 1
    return BiPoly({tuple(m): ONE}, reduced=True)


def y_var(i):
    m = [0] * 6
    m[3 + i] = 1
    return BiPoly({tuple(m): ONE}, reduced=True)


def constant(c):
    c = QQ(c)
    if not c:
        return BIPOLY_ZERO
    return BiPoly({(0, 0, 0, 0, 0, 0): c}, reduced=True)


def x_linear(coeffs):
    """c0*x0 + c1*x1 + c2*x2."""
    return BiPoly.from_terms(
        ((0,) * i + (1,) + (0,) * (5 - i), coeffs[i]) for i in range(3)
    )


def y_linear(coeffs):
    return BiPoly.from_terms(
        ((0, 0, 0) + (0,) * i + (1,) + (0,) * (2 - i), coeffs[i]) for i in range(3)
    )


def flag_quadric():
    return BiPoly.from_terms(
        (((1, 0, 0, 1, 0, 0), 1), ((0, 1, 0, 0, 1, 0), 1), ((0, 0, 1, 0, 0, 1), 1))
    )


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def graded_basis(a, b):
    """Normal-form monomial basis of the (a, b) graded piece of the
    coordinate ring of F.  Empty when a < 0 or b < 0."""
    if a < 0 or b < 0:
        return []
    basis = []
    for mx in _compositions(a, 3):
        for my in _compositions(b, 3):
            if mx[0] >= 1 and my[0] >= 1:
                continue  # divisible by the leading term x0*y0
            basis.append(mx + my)
    return sorted(basis)


def graded_dim(a, b):
    if a < 0 or b < 0:
        return 0
    return (a + 1) * (b + 1) * (a + b + 2) // 2


def coeff_vector(poly, basis):
    """Coefficients of a normal-form polynomial on a graded basis."""
    index = {m: i for i, m in enumerate(basis)}
    vec = [ZERO] * len(basis)
    for m, c in poly.coeffs.items():
        if m not in index:
            raise ValueError("monomial %s outside the graded piece" % (m,))
        vec[index[m]] = c
    return vec


def poly_from_vector(vec, basis):
    return BiPoly({m: QQ(c) for m, c in zip(basis, vec) if c}, reduced=True)


# ---------------------------------------------------------------------------
# exact linear algebra over the rationals
#
# Matrices are lists of sparse rows {col: coeff}.  Sizes stay small enough
# at desk scale that straightforward Gauss-Jordan with sparse rows is fine.


def rows_from_dense(mat):
    return [{j: QQ(v) for j, v in enumerate(row) if v} for row in mat]


def rref_sparse(rows, ncols):
    """Reduced row echelon form.  Returns (pivot_cols, reduced_rows)."""
    work = [dict(r) for r in rows if r]
    pivots = []
    reduced = []
    for col in range(ncols):
        pick = None
        best = None
        for i, r in enumerate(work):
            if col in r:
                if pick is None or len(r) < best:
                    pick, best = i, len(r)
        if pick is None:
            continue
        row = work.pop(pick)
        inv = ONE / row[col]
        row = {j: v * inv for j, v in row.items()}
        for r in work:
            if col in r:
                f = r.pop(col)
                for j, v in row.items():
                    if j == col:
                        continue
                    r[j] = r.get(j, ZERO) - f * v
                    if not r[j]:
                        del r[j]
        for r in reduced:
            if col in r:
                f = r.pop(col)
                for j, v in row.items():
                    if j == col:
                        continue
                    r[j] = r.get(j, ZERO) - f * v
                    if not r[j]:
                        del r[j]
        work = [r for r in work if r]
        pivots.append(col)
        reduced.append(row)
    return pivots, reduced


def matrix_rank(rows, ncols):
    pivots, _ = rref_sparse(rows, ncols)
    return len(pivots)


def kernel_basis(rows, ncols):
    """Basis of the null space, as dense rational vectors."""
    pivots, reduced = rref_sparse(rows, ncols)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    for f in free:
        vec = [ZERO] * ncols
        vec[f] = ONE
        for pcol, row in zip(pivots, reduced):
            if f in row:
                vec[pcol] = -row[f]
        basis.append(vec)
    return basis


def det_dense(mat):
    """Determinant of a small dense rational matrix."""
    n = len(mat)
    m = [[QQ(v) for v in row] for row in mat]
    det = ONE
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if m[i][col]:
                pivot = i
                break
        if pivot is None:
            return ZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = ONE / m[col][col]
        for i in range(col + 1, n):
            if m[i][col]:
                f = m[i][col] * inv
                for j in range(col, n):
                    m[i][j] -= f * m[col][j]
    return det


def rank_mod_p(mat, p):
    """Rank of an integer matrix over the prime field F_p."""
    work = [[v % p for v in row] for row in mat]
    rank = 0
    ncols = len(work[0]) if work else 0
    row_idx = 0
    for col in range(ncols):
        pivot = None
        for i in range(row_idx, len(work)):
            if work[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        inv = pow(work[row_idx][col], -1, p)
        work[row_idx] = [(v * inv) % p for v in work[row_idx]]
        for i in range(len(work)):
            if i != row_idx and work[i][col]:
                f = work[i][col]
                work[i] = [(a - f * b) % p for a, b in zip(work[i], work[row_idx])]
        rank += 1
        row_idx += 1
        if row_idx == len(work):
            break
    return rank
