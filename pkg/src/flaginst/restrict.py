"""Restriction of monads to rational curves in F.

Pulling a line-bundle complex back along a curve parametrization gives a
complex of O_P1(d)'s with binary-form differentials; its exact
hypercohomology comes from the two-chart Cech transfer engine.  Splitting
types are recovered from the section counts over a twist window, and
jumping orders of reducible conics from the Mayer-Vietoris fiber complex
glued at the node through exact evaluation of the monad.
"""

from dataclasses import dataclass

from .cech import LINE, TransferComplex
from .curves import classify_conic, conic_param, line_param
from .errors import RankUnexpected, ReducibleInput
from .ring import ONE, QQ, ZERO, matrix_rank, rank_mod_p
from .monad import monad_complex

# binary forms are dicts {(e_s, e_t): coeff}


def bf_add(a, b):
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, ZERO) + c
        if not out[m]:
            del out[m]
    return out


def bf_mul(a, b):
    out = {}
    for m, c in a.items():
        for n, d in b.items():
            t = (m[0] + n[0], m[1] + n[1])
            out[t] = out.get(t, ZERO) + c * d
            if not out[t]:
                del out[t]
    return out


def bf_pow(a, e):
    out = {(0, 0): ONE}
    for _ in range(e):
        out = bf_mul(out, a)
    return out


def substitute(poly, curve):
    """Binary form of a BiPoly along x := X(s,t), y := Y(s,t)."""
    total = {}
    for mono, coeff in poly.coeffs.items():
        term = {(0, 0): coeff}
        for i in range(3):
            if mono[i]:
                term = bf_mul(term, bf_pow(curve.xforms[i], mono[i]))
        for i in range(3):
            if mono[3 + i]:
                term = bf_mul(term, bf_pow(curve.yforms[i], mono[3 + i]))
        total = bf_add(total, term)
    return total


@dataclass
class P1Complex:
    start: int
    degrees: list  # per position, list of ints
    diffs: list  # matrices of binary forms, [target][source]

    def twist(self, m):
        return P1Complex(
            self.start,
            [[d + m for d in degs] for degs in self.degrees],
            self.diffs,
        )

    def transfer(self):
        terms = [[(d,) for d in degs] for degs in self.degrees]
        positions = list(range(self.start, self.start + len(terms)))
        return TransferComplex(LINE, positions, terms, self.diffs)

    def cohomology(self):
        return self.transfer().cohomology()


def pullback_complex(lc, curve):
    """Pull a LineComplex on F back to P1; compositions are re-verified to
    vanish identically (they must, since the curve lies on F)."""
    degrees = [[curve.pull_degree(t) for t in term] for term in lc.terms]
    diffs = []
    for mat in lc.diffs:
        diffs.append(
            [[substitute(e, curve) if e is not None else {} for e in row] for row in mat]
        )
    for s, mat in enumerate(diffs[:-1]):
        nxt = diffs[s + 1]
        for u in range(len(degrees[s + 2])):
            for t in range(len(degrees[s])):
                acc = {}
                for m in range(len(degrees[s + 1])):
                    acc = bf_add(acc, bf_mul(nxt[u][m], mat[m][t]))
                if acc:
                    raise RankUnexpected(
                        "pullback does not compose to zero; the parametrization "
                        "does not land in F",
                        witness=(s, u, t),
                    )
    return P1Complex(lc.start, degrees, diffs)


def pullback_monad(m, curve, twist=(0, 0)):
    return pullback_complex(monad_complex(m).twist(twist), curve)


@dataclass
class SplittingType:
    pair: tuple  # (a1, a2) with a1 >= a2
    h0_window: dict

    def __iter__(self):
        return iter(self.pair)

    def h0(self, m):
        return sum(max(0, a + m + 1) for a in self.pair)


def splitting_type(monad, curve):
    """Exact splitting degrees (a, -a) of the monad cohomology restricted
    along a parametrized rational curve."""
    base = pullback_monad(monad, curve)
    k = max(monad.charge, 1)
    lo, hi = -(k + 2), k + 2
    for _ in range(4):
        h0 = {}
        for mm in range(lo, hi + 1):
            coh = base.twist(mm).cohomology()
            bad = {n: v for n, v in coh.items() if n not in (0, 1)}
            if bad:
                raise RankUnexpected(
                    "restricted complex has cohomology outside the bundle "
                    "degrees at twist %d: %s" % (mm, bad),
                    witness=(curve.label, mm, bad),
                )
            h0[mm] = coh.get(0, 0)
        if h0[lo] == 0 and h0[hi] > 0:
            pair = _fit_splitting(h0, lo, hi)
            if pair is not None:
                return SplittingType(pair, h0)
        lo, hi = lo * 2, hi * 2
    raise RankUnexpected(
        "no rank-2 splitting profile fits the section counts",
        witness=(curve.label, h0),
    )


def _fit_splitting(h0, lo, hi):
    first = next((m for m in range(lo, hi + 1) if h0[m] > 0), None)
    if first is None:
        return None
    a1 = -first
    a2 = -a1  # degree-0 determinant of the monad twists
    for m in range(lo, hi + 1):
        if h0[m] != max(0, a1 + m + 1) + max(0, a2 + m + 1):
            return None
    return (a1, a2)


# ---------------------------------------------------------------------------
# jumping orders


def jumping_order(monad, conic):
    """The pair (h^1(E|C(-1,0)), h^1(E|C(0,-1))), for smooth or reducible
    conics."""
    cls = classify_conic(conic)
    if cls.kind == "smooth":
        curve = conic_param(conic)
        a = _smooth_h1(monad, curve, (-1, 0))
        b = _smooth_h1(monad, curve, (0, -1))
        if a != b:
            raise RankUnexpected(
                "smooth conic with asymmetric jumping order", witness=(a, b)
            )
        return (a, b)
    lam_p, lam_L = cls.components
    a = _nodal_h1(monad, conic, lam_p, lam_L, (-1, 0))
    b = _nodal_h1(monad, conic, lam_p, lam_L, (0, -1))
    return (a, b)


def _smooth_h1(monad, curve, twist):
    coh = pullback_monad(monad, curve, twist).cohomology()
    bad = {n: v for n, v in coh.items() if n not in (0, 1)}
    if bad:
        raise RankUnexpected(
            "restriction is not a bundle on the conic: %s" % bad,
            witness=(curve.label, bad),
        )
    return coh.get(1, 0)


def _solve_on_span(v1, v2, target):
    """(s0, t0) with s0 v1 + t0 v2 = target, exact; the target must lie in
    the span of the independent pair."""
    for i in range(3):
        for j in range(3):
            det = v1[i] * v2[j] - v1[j] * v2[i]
            if det:
                s0 = (target[i] * v2[j] - target[j] * v2[i]) / det
                t0 = (v1[i] * target[j] - v1[j] * target[i]) / det
                if all(s0 * a + t0 * b == c for a, b, c in zip(v1, v2, target)):
                    return (s0, t0)
                raise RankUnexpected(
                    "node does not lie on the component line", witness=target
                )
    raise RankUnexpected("degenerate parametrization basis", witness=target)


def _node_parameter(curve, conic):
    """Parameter of the node (p, L) on a component line, solved exactly so
    that the parametrization reproduces (p, L) on the nose."""
    if curve.dx == 0:  # family 1: x constant p, y sweeps
        v1 = tuple(f.get((1, 0), ZERO) for f in curve.yforms)
        v2 = tuple(f.get((0, 1), ZERO) for f in curve.yforms)
        return _solve_on_span(v1, v2, conic.L)
    v1 = tuple(f.get((1, 0), ZERO) for f in curve.xforms)
    v2 = tuple(f.get((0, 1), ZERO) for f in curve.xforms)
    return _solve_on_span(v1, v2, conic.p)


def _stalk_matrices(monad, conic):
    x, y = conic.p, conic.L
    A = [[e.evaluate(x, y) for e in row] for row in monad.A]
    B = [[e.evaluate(x, y) for e in row] for row in monad.B]
    if monad.left:
        ra = matrix_rank([{j: v for j, v in enumerate(r) if v} for r in A], len(monad.left))
        if ra != len(monad.left):
            raise RankUnexpected("left map drops rank at the node", witness=conic)
    if monad.right:
        rb = matrix_rank([{j: v for j, v in enumerate(r) if v} for r in B], len(monad.middle))
        if rb != len(monad.right):
            raise RankUnexpected("right map drops rank at the node", witness=conic)
    return A, B


def _evaluation_columns(tc, chart, s0, t0, stalk_index):
    """Chain map from a line's transfer complex into the stalk complex:
    evaluate the chart components of the honest Cech cocycle at the node
    parameter."""
    columns = {}
    for n, items in tc.basis.items():
        for col, (i, t, label) in enumerate(items):
            vec = {}
            for (ii, tt, lab), coeff in tc.iota_expanded(i, t, label).items():
                (e, charts) = lab[0]
                if charts != chart:
                    continue
                val = coeff
                if e[0]:
                    val = val * s0 ** e[0]
                if e[1]:
                    val = val * t0 ** e[1]
                if not val:
                    continue
                key = stalk_index[(ii, tt)]
                vec[key] = vec.get(key, ZERO) + val
            columns[(n, col)] = {k: v for k, v in vec.items() if v}
    return columns


def _nodal_h1(monad, conic, lam_p, lam_L, twist):
    """h^1 of the restriction to the nodal conic via the Mayer-Vietoris
    fiber complex of (sections on both lines) -> (stalk at the node)."""
    A, B = _stalk_matrices(monad, conic)
    sizes = {-1: len(monad.left), 0: len(monad.middle), 1: len(monad.right)}
    stalk_mats = {-1: A, 0: B}

    lines = []
    for lam, sign in ((lam_p, ONE), (lam_L, -ONE)):
        p1c = pullback_monad(monad, lam, twist)
        tc = p1c.transfer()
        s0, t0 = _node_parameter(lam, conic)
        chart = frozenset((0,)) if s0 != 0 else frozenset((1,))
        # stalk coordinates: summand t of complex position ii
        stalk_index = {}
        for slot, pos in enumerate(range(-1, 2)):
            for t in range(sizes[pos]):
                stalk_index[(slot, t)] = (pos, t)
        cols = _evaluation_columns(tc, chart, s0, t0, stalk_index)
        lines.append((tc, cols, sign))

    # fiber complex F^n = X^n (both lines) + Y^(n-1) (stalk)
    def x_basis(n):
        out = []
        for which, (tc, _, _) in enumerate(lines):
            for col in range(len(tc.basis.get(n, []))):
                out.append((which, col))
        return out

    def y_basis(n):
        return [(pos, t) for pos in range(-1, 2) if pos == n for t in range(sizes[pos])]

    dims = {}
    rows_by_degree = {}
    degrees = range(-2, 4)
    index = {}
    for n in degrees:
        basis = [("X",) + b for b in x_basis(n)] + [("Y",) + b for b in y_basis(n - 1)]
        index[n] = {key: i for i, key in enumerate(basis)}
        dims[n] = len(basis)
    ranks = {}
    for n in degrees:
        if n + 1 not in index:
            continue
        rows = [{} for _ in range(dims.get(n + 1, 0))]
        tgt = index[n + 1]
        for key, colidx in index[n].items():
            if key[0] == "X":
                which, col = key[1], key[2]
                tc, cols, sign = lines[which]
                diffcols = tc.diff.get(n, [])
                if col < len(diffcols):
                    for row, coeff in diffcols[col].items():
                        r = tgt[("X", which, row)]
                        rows[r][colidx] = rows[r].get(colidx, ZERO) + coeff
                evec = cols.get((n, col), {})
                for (pos, t), coeff in evec.items():
                    r = tgt[("Y", pos, t)]
                    rows[r][colidx] = rows[r].get(colidx, ZERO) + sign * coeff
            else:
                pos, t = key[1], key[2]
                if pos in stalk_mats:
                    mat = stalk_mats[pos]
                    for u in range(sizes[pos + 1]):
                        v = mat[u][t]
                        if v:
                            r = tgt[("Y", pos + 1, u)]
                            rows[r][colidx] = rows[r].get(colidx, ZERO) - v
        ranks[n] = matrix_rank(rows, dims[n])
        rows_by_degree[n] = rows
    coh = {
        n: dims[n] - ranks.get(n, 0) - ranks.get(n - 1, 0)
        for n in degrees
    }
    bad = {n: v for n, v in coh.items() if v and n not in (0, 1)}
    if bad:
        raise RankUnexpected(
            "nodal restriction has cohomology outside bundle degrees: %s" % bad,
            witness=(conic, twist),
        )
    return coh.get(1, 0)


def smooth_jump_requires(conic):
    if not conic.is_smooth():
        raise ReducibleInput("smooth conic required")
