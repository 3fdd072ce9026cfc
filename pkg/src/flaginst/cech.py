"""Finite Cech models with explicit contractions, and the transfer engine
that computes exact hypercohomology of bounded complexes of line bundles.

For projective space P^(n-1) with homogeneous coordinates z_0..z_{n-1} and
the standard n-chart cover, the Cech complex of O(d) splits over Laurent
monomials.  A monomial with negative-exponent support N contributes the
cochain complex of the simplicial star of N, which is contractible unless
N is empty (one class in degree 0, the global sections) or N is everything
(one class in degree n-1, the dual socle).  Cochain basis elements are
pairs (exponents, chart set) with N(exponents) inside the chart set.

The cone contraction toward the smallest chart not in N gives an explicit
homotopy h with  delta h + h delta = 1 - iota pi  and the side conditions
h h = 0, pi h = 0, h iota = 0.  Products of projective spaces use the
tensor contraction  h1 (x) 1 + iota1 pi1 (x) h2  with Koszul signs.

Given a complex of line bundles with polynomial differentials D satisfying
D^2 = 0, homological perturbation transfers the differential to the
harmonic strands:

    d' = sum_{j >= 1}  pi D (h D)^{j-1} iota.

The j = 1 term is the naive induced map; higher terms are the connecting
maps that the induced-map model misses.  Each D raises the complex
position by one and h lowers the Cech degree by one, so every term lands
one total degree up and the sum is finite.  The result is a finite complex
of vector spaces with the same cohomology as the hypercohomology of the
input, and its differential is asserted to square to zero at runtime.
"""

from .errors import LiftInconsistent
from .ring import ONE, QQ, ZERO

# ---------------------------------------------------------------------------
# single projective factor


class Factor:
    def __init__(self, nvars):
        self.nvars = nvars
        self.full = frozenset(range(nvars))

    def neg(self, e):
        return frozenset(i for i, v in enumerate(e) if v < 0)

    def valid(self, e, charts):
        return self.neg(e) <= charts

    def harmonic_type(self, e):
        """0 for global monomials, nvars-1 for socle monomials, None else."""
        n = self.neg(e)
        if not n:
            return 0
        if n == self.full:
            return self.nvars - 1
        return None

    def harmonic_chart(self, e):
        n = self.neg(e)
        if not n:
            return frozenset((0,))
        if n == self.full:
            return self.full
        return None

    def global_monomials(self, d):
        if d < 0:
            return []
        return sorted(_exponents(d, self.nvars, 0))

    def socle_monomials(self, d):
        if d > -self.nvars:
            return []
        return sorted(
            tuple(-1 - v for v in e) for e in _exponents(-d - self.nvars, self.nvars, 0)
        )

    def delta(self, e, charts):
        out = []
        for j in range(self.nvars):
            if j in charts:
                continue
            bigger = charts | {j}
            sign = (-1) ** sorted(bigger).index(j)
            out.append(((e, bigger), QQ(sign)))
        return out

    def h(self, e, charts):
        n = self.neg(e)
        if n == self.full:
            return []
        c = min(self.full - n)
        if c not in charts or charts == frozenset((c,)):
            return []
        sign = (-1) ** sorted(charts).index(c)
        return [((e, charts - {c}), QQ(sign))]

    def pi(self, e, charts):
        """Harmonic projection; returns the exponent tuple or None."""
        n = self.neg(e)
        if not n and charts == frozenset((0,)):
            return e
        if n == self.full and charts == self.full:
            return e
        return None

    def iota(self, e):
        n = self.neg(e)
        if n == self.full:
            return [((e, self.full), ONE)]
        if not n:
            return [((e, frozenset((i,))), ONE) for i in range(self.nvars)]
        raise ValueError("iota on a non-harmonic monomial")


def _exponents(total, parts, minimum):
    if parts == 1:
        yield (total,)
        return
    for head in range(total, minimum - 1, -1):
        for rest in _exponents(total - head, parts - 1, minimum):
            yield (head,) + rest


# ---------------------------------------------------------------------------
# product of factors
#
# Labels are tuples of per-factor (exponents, chartset) pairs.  Polynomial
# monomials are concatenated exponent tuples split between the factors.


class CechModel:
    def __init__(self, factor_sizes):
        self.factors = [Factor(n) for n in factor_sizes]
        self.splits = []
        offset = 0
        for n in factor_sizes:
            self.splits.append((offset, offset + n))
            offset += n
        self.nvars = offset

    def cech_degree(self, label):
        return sum(len(charts) - 1 for _, charts in label)

    def harmonics(self, twist):
        """Ordered harmonic basis for the line bundle with the given
        per-factor degrees; list of (label, strand_degree)."""
        per_factor = []
        for f, d in zip(self.factors, twist):
            pieces = []
            glob = f.global_monomials(d)
            if glob:
                pieces.append((0, glob))
            soc = f.socle_monomials(d)
            if soc:
                pieces.append((f.nvars - 1, soc))
            per_factor.append(pieces)
        out = []
        for combo in _product(per_factor):
            q = sum(piece[0] for piece in combo)
            monos = [piece[1] for piece in combo]
            for es in _product([[(m,) for m in ms] for ms in monos]):
                label = tuple(
                    (e[0], f.harmonic_chart(e[0])) for e, f in zip(es, self.factors)
                )
                out.append((label, q))
        out.sort(key=_label_sort_key)
        return out

    def iota(self, label):
        acc = [((), ONE)]
        for (e, _), f in zip(label, self.factors):
            nxt = []
            for partial, coeff in acc:
                for (pair, c) in f.iota(e):
                    nxt.append((partial + (pair,), coeff * c))
            acc = nxt
        return acc

    def pi(self, label):
        parts = []
        for (e, charts), f in zip(label, self.factors):
            r = f.pi(e, charts)
            if r is None:
                return None
            parts.append((r, f.harmonic_chart(r)))
        return tuple(parts)

    def h(self, label):
        """Tensor contraction with Koszul signs."""
        out = []
        sign = 1
        for k, ((e, charts), f) in enumerate(zip(label, self.factors)):
            #  (iota pi)_0 ... (iota pi)_{k-1} (x) h_k (x) 1 ...
            prefix_ok = True
            prefix = [((), ONE)]
            for i in range(k):
                ei, ci = label[i]
                r = self.factors[i].pi(ei, ci)
                if r is None:
                    prefix_ok = False
                    break
                nxt = []
                for partial, coeff in prefix:
                    for (pair, c) in self.factors[i].iota(r):
                        nxt.append((partial + (pair,), coeff * c))
                prefix = nxt
            if not prefix_ok:
                continue
            hk = f.h(e, charts)
            if not hk:
                continue
            ksign = QQ((-1) ** sum(len(label[i][1]) - 1 for i in range(k)))
            tail = label[k + 1 :]
            for partial, coeff in prefix:
                for (pair, c) in hk:
                    out.append((partial + (pair,) + tail, coeff * c * ksign))
        return out

    def delta(self, label):
        out = []
        sign_acc = 1
        for k, ((e, charts), f) in enumerate(zip(label, self.factors)):
            ksign = QQ((-1) ** sum(len(label[i][1]) - 1 for i in range(k)))
            for (pair, c) in f.delta(e, charts):
                out.append((label[:k] + (pair,) + label[k + 1 :], c * ksign))
        return out

    def mult_monomial(self, mono, label):
        parts = []
        for (e, charts), (lo, hi) in zip(label, self.splits):
            shift = mono[lo:hi]
            parts.append((tuple(a + b for a, b in zip(e, shift)), charts))
        return tuple(parts)

    def mult(self, poly, cochain):
        """Multiply a cochain dict {(term, label): coeff} entrywise is done
        by the engine; here: act on a single label by a polynomial dict."""
        out = {}
        for mono, c in poly.items():
            for label, coeff in cochain.items():
                t = self.mult_monomial(mono, label)
                out[t] = out.get(t, ZERO) + c * coeff
                if not out[t]:
                    del out[t]
        return out


def _product(lists):
    acc = [()]
    for lst in lists:
        acc = [p + (item,) for p in acc for item in lst]
    return acc


def _label_sort_key(item):
    label = item[0]
    return tuple((e, tuple(sorted(charts))) for e, charts in label)


SURFACE = CechModel((3, 3))
LINE = CechModel((2,))


# ---------------------------------------------------------------------------
# the transfer engine


class TransferComplex:
    """Exact hypercohomology of a complex of line bundles.

    terms[i] is the list of per-factor twists at position positions[i];
    blocks[i][u][t] is the polynomial dict mapping summand t of terms[i] to
    summand u of terms[i+1] (None or {} for zero).  D^2 = 0 is the caller's
    responsibility at the polynomial level and is re-asserted here on the
    transferred differential.
    """

    def __init__(self, model, positions, terms, blocks):
        self.model = model
        self.positions = list(positions)
        self.terms = [list(t) for t in terms]
        self.blocks = blocks
        self._build()

    def _build(self):
        model = self.model
        self.harmonic = {}  # (i, t) -> list of (label, q)
        self.basis = {}  # n -> list of (i, t, label)
        for i, twists in enumerate(self.terms):
            for t, twist in enumerate(twists):
                hs = model.harmonics(twist)
                self.harmonic[(i, t)] = hs
                for label, q in hs:
                    n = self.positions[i] + q
                    self.basis.setdefault(n, []).append((i, t, label))
        for n in self.basis:
            self.basis[n].sort(key=lambda item: (item[0], item[1], _label_sort_key((item[2], 0))))
        self.index = {
            n: {key: idx for idx, key in enumerate(items)}
            for n, items in self.basis.items()
        }
        self.diff = {}  # n -> list of column dicts {row: coeff}
        for n, items in sorted(self.basis.items()):
            cols = []
            for (i, t, label) in items:
                cols.append(self._transfer_column(i, t, label, n))
            self.diff[n] = cols
        self._assert_d2()

    def _apply_D(self, state):
        """state: {(i, t, label): coeff} -> D applied."""
        out = {}
        for (i, t, label), coeff in state.items():
            if i + 1 > len(self.blocks):
                continue
            if i >= len(self.blocks):
                continue
            mat = self.blocks[i]
            for u in range(len(self.terms[i + 1])):
                poly = mat[u][t]
                if not poly:
                    continue
                for mono, c in poly.items():
                    lab = self.model.mult_monomial(mono, label)
                    key = (i + 1, u, lab)
                    out[key] = out.get(key, ZERO) + c * coeff
                    if not out[key]:
                        del out[key]
        return out

    def _apply_h(self, state):
        out = {}
        for (i, t, label), coeff in state.items():
            for lab, c in self.model.h(label):
                key = (i, t, lab)
                out[key] = out.get(key, ZERO) + c * coeff
                if not out[key]:
                    del out[key]
        return out

    def _project(self, state, column, target_n):
        idx = self.index.get(target_n, {})
        for (i, t, label), coeff in state.items():
            harm = self.model.pi(label)
            if harm is None:
                continue
            key = (i, t, harm)
            if key not in idx:
                continue
            row = idx[key]
            column[row] = column.get(row, ZERO) + coeff
            if not column[row]:
                del column[row]

    def _transfer_column(self, i, t, label, n):
        column = {}
        state = {(i, t, lab): c for lab, c in self.model.iota(label)}
        while state:
            state = self._apply_D(state)
            if not state:
                break
            self._project(state, column, n + 1)
            state = self._apply_h(state)
        return column

    def _assert_d2(self):
        for n, cols in self.diff.items():
            nxt = self.diff.get(n + 1)
            if not nxt:
                continue
            for src, col in enumerate(cols):
                acc = {}
                for row, c in col.items():
                    for row2, c2 in nxt[row].items():
                        acc[row2] = acc.get(row2, ZERO) + c * c2
                        if not acc[row2]:
                            del acc[row2]
                if acc:
                    raise LiftInconsistent(
                        "transferred differential does not square to zero "
                        "at degree %d, column %d" % (n, src)
                    )

    def dims(self):
        return {n: len(items) for n, items in self.basis.items()}

    def ranks(self):
        from .ring import matrix_rank

        out = {}
        for n, cols in self.diff.items():
            nrows = len(self.basis.get(n + 1, []))
            rows = [{} for _ in range(nrows)]
            for j, col in enumerate(cols):
                for r, c in col.items():
                    rows[r][j] = c
            out[n] = matrix_rank(rows, len(cols))
        return out

    def cohomology(self):
        dims = self.dims()
        ranks = self.ranks()
        out = {}
        for n in dims:
            out[n] = dims[n] - ranks.get(n, 0) - ranks.get(n - 1, 0)
        return {n: v for n, v in out.items() if v}

    def iota_expanded(self, i, t, label):
        """Honest Cech cocycle components of a harmonic basis element:
        sum over j of (h D)^j iota.  Used for evaluation chain maps."""
        acc = {}
        state = {(i, t, lab): c for lab, c in self.model.iota(label)}
        while state:
            for key, c in state.items():
                acc[key] = acc.get(key, ZERO) + c
            state = self._apply_h(self._apply_D(state))
        return {k: v for k, v in acc.items() if v}
