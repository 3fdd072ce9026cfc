"""The Hilbert scheme of conics on F and explicit curve parametrizations.

A conic is a pair (p, L) of a point and a line of the plane: the curve
{(q, S) in F : L(q) = S(p) = 0}.  It is smooth exactly when L(p) != 0;
otherwise it breaks into the two lines through the incidence point (p, L).
Curves are always carried around as parametrizations by (s, t), never as
ideals: downstream cohomology is computed by pullback.
"""

from dataclasses import dataclass

from .errors import ConstantPencil, DegenerateBasis
from .ring import ONE, QQ, ZERO, scalar_to_string


def _canonical(v):
    vals = [QQ(x) for x in v]
    if not any(vals):
        raise ValueError("zero vector cannot be normalized")
    lead = next(x for x in vals if x)
    return tuple(x / lead for x in vals)


def cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def dot(a, b):
    return sum((x * y for x, y in zip(a, b)), ZERO)


@dataclass(frozen=True)
class ConicPoint:
    """A point of the conic Hilbert scheme, canonically scaled."""

    p: tuple
    L: tuple

    @staticmethod
    def make(p, L):
        return ConicPoint(_canonical(p), _canonical(L))

    def incidence(self):
        return dot(self.p, self.L)

    def is_smooth(self):
        return self.incidence() != 0

    def to_json(self):
        return {
            "p": [scalar_to_string(v) for v in self.p],
            "L": [scalar_to_string(v) for v in self.L],
            "smooth": self.is_smooth(),
        }


class CurveMap:
    """A rational curve in F given by binary forms: x = X(s,t), y = Y(s,t).

    xforms, yforms are triples of dicts {(es, et): coeff}; the pullback of
    O_F(a, b) is O_P1(a * dx + b * dy)."""

    def __init__(self, xforms, yforms, dx, dy, label=""):
        self.xforms = xforms
        self.yforms = yforms
        self.dx = dx
        self.dy = dy
        self.label = label

    def pull_degree(self, twist):
        return twist[0] * self.dx + twist[1] * self.dy

    def x_at(self, s, t):
        return tuple(_eval_form(f, s, t) for f in self.xforms)

    def y_at(self, s, t):
        return tuple(_eval_form(f, s, t) for f in self.yforms)


def _eval_form(form, s, t):
    total = ZERO
    for (es, et), c in form.items():
        v = c
        if es:
            v = v * s**es
        if et:
            v = v * t**et
        total += v
    return total


def _const_form(value):
    value = QQ(value)
    return {(0, 0): value} if value else {}


def _linear_form(c_s, c_t):
    out = {}
    if c_s:
        out[(1, 0)] = QQ(c_s)
    if c_t:
        out[(0, 1)] = QQ(c_t)
    return out


@dataclass
class Classification:
    kind: str  # "smooth" | "reducible"
    components: tuple | None = None  # (line through p, line inside L)


def classify_conic(c):
    """Smooth when L(p) != 0, otherwise the two-line degeneration with its
    component parametrizations."""
    if c.is_smooth():
        return Classification("smooth")
    return Classification("reducible", (line_param(1, c.p), line_param(2, c.L)))


def _independent_pair(L):
    """Two independent points on the line L, built from coordinate cross
    products; DegenerateBasis is impossible for nonzero L but kept as a
    guard for malformed input."""
    candidates = []
    for i in range(3):
        e = [ZERO] * 3
        e[i] = ONE
        q = cross(L, tuple(e))
        if any(q):
            candidates.append(q)
    for a in range(len(candidates)):
        for b in range(a + 1, len(candidates)):
            if any(cross(candidates[a], candidates[b])):
                return candidates[a], candidates[b]
    raise DegenerateBasis("no independent point pair on %s" % (L,))


def conic_param(c):
    """Parametrize the smooth conic: q(s,t) sweeps the line L, and the
    second component is the line joining p and q."""
    if not c.is_smooth():
        raise ValueError("conic_param requires a smooth conic")
    q1, q2 = _independent_pair(c.L)
    xforms = [_linear_form(q1[i], q2[i]) for i in range(3)]
    s1 = cross(c.p, q1)
    s2 = cross(c.p, q2)
    yforms = [_linear_form(s1[i], s2[i]) for i in range(3)]
    return CurveMap(xforms, yforms, 1, 1, label="conic(%s,%s)" % (c.p, c.L))


def line_param(family, datum):
    """family 1: lines {(p, S) : S(p) = 0}; family 2: {(q, L) : L(q) = 0}."""
    datum = _canonical(datum)
    if family == 1:
        s1, s2 = _independent_pair(datum)  # lines through the point
        xforms = [_const_form(v) for v in datum]
        yforms = [_linear_form(s1[i], s2[i]) for i in range(3)]
        return CurveMap(xforms, yforms, 0, 1, label="line1(%s)" % (datum,))
    if family == 2:
        q1, q2 = _independent_pair(datum)
        xforms = [_linear_form(q1[i], q2[i]) for i in range(3)]
        yforms = [_const_form(v) for v in datum]
        return CurveMap(xforms, yforms, 1, 0, label="line2(%s)" % (datum,))
    raise ValueError("family must be 1 or 2")


def conic_through(f1, f2):
    """The unique smooth conic through two distinct flags: its point is
    the intersection of the two lines, its line joins the two points."""
    q = cross(f1[1], f2[1])
    S = cross(f1[0], f2[0])
    return ConicPoint.make(q, S)


def flag_on_conic(c, flag):
    """Membership of a flag (q, S) on the conic (p, L)."""
    return dot(c.L, flag[0]) == 0 and dot(flag[1], c.p) == 0


@dataclass
class PencilSpec:
    """A linear one-parameter family of conics c(u)."""

    base: ConicPoint
    direction: str  # "p" | "L"
    vector: tuple
    reducible_params: list
    degenerate_params: list
    chart_pair: tuple | None  # fixed q1, q2 coordinate indices for L-pencils

    def member(self, u):
        u = QQ(u)
        if self.direction == "p":
            p = tuple(a + u * b for a, b in zip(self.base.p, self.vector))
            return ConicPoint.make(p, self.base.L)
        L = tuple(a + u * b for a, b in zip(self.base.L, self.vector))
        return ConicPoint.make(self.base.p, L)


def pencil(c0, direction, v):
    """Pencil through c0 moving the point (direction "p") or the line
    (direction "L") along v; reducible members and parametrization-chart
    degeneracies are located exactly."""
    v = tuple(QQ(x) for x in v)
    if not any(v):
        raise ConstantPencil("direction vector is zero")
    base = c0.p if direction == "p" else c0.L
    if not any(cross(base, v)):
        raise ConstantPencil("direction vector is proportional to the base")
    if direction == "p":
        # incidence L(p0 + u v) = L(p0) + u L(v)
        const, lin = dot(c0.L, c0.p), dot(c0.L, v)
        reducible = _linear_roots(const, lin)
        return PencilSpec(c0, "p", v, reducible, [], None)
    const, lin = dot(c0.L, c0.p), dot(v, c0.p)
    reducible = _linear_roots(const, lin)
    # chart degeneracy of the moving-line parametrization: with basis
    # points L(u) x e_i, L(u) x e_j the pair degenerates when the third
    # coordinate L(u)_m vanishes
    best = None
    for (i, j, m) in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        roots = _linear_roots(c0.L[m], v[m])
        if roots == []:
            best = ((i, j), [])
            break
        if roots is not None and best is None:
            best = ((i, j), roots)
    if best is None:
        raise ConstantPencil("every chart of the pencil degenerates identically")
    chart_pair, degenerate = best
    return PencilSpec(c0, "L", v, reducible, degenerate, chart_pair)


def _linear_roots(const, lin):
    """Roots of const + u * lin; None when identically zero."""
    if lin == 0:
        return None if const == 0 else []
    return [-QQ(const) / QQ(lin)]
