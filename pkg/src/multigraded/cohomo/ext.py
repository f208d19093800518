"""Ext^j(M, omega_S) with omega_S = S(-sigma), from a free resolution.

``DualComplex`` works degree by degree on monomial bases and serves any
module.  ``FineDual`` specializes to resolutions over the fine grading:
every piece of the dual complex has one basis vector per generator that is
"present" in that degree, so a piece only depends on which generators are
present.  That turns Ext into finitely many chambers of constant dimension
and makes localization at a set of variables a matter of ignoring their
coordinates.
"""
from functools import lru_cache
from itertools import product

from ..kernel.linalg import Echelon, kernel_of_columns, rref_rows
from ..kernel.ring import _vadd, _vsub
from ..modcat import FreeModule


class DualComplex:
    """G^j = sum_k S(a_jk - sigma), generated in degrees sigma - a_jk; the differential is the transpose of d_{j+1}."""

    def __init__(self, res):
        self.res = res
        ring = self.ring = res.ring
        sigma = ring.sigma
        self.terms = [FreeModule(ring, [_vsub(sigma, a) for a in F.shifts]) for F in res.frees]
        # rows[j][k] = [(l, poly)] : e*_k in G^j maps to sum_l poly * e*_l in G^{j+1}
        self.rows = []
        for j in range(len(res.frees)):
            rows = [[] for _ in res.frees[j].shifts]
            if j + 1 < len(res.frees):
                for l, col in enumerate(res.maps[j + 1]):
                    for k, poly in col.items():
                        rows[k].append((l, poly))
            self.rows.append(rows)
        self._cache = {}

    @property
    def top(self):
        return len(self.terms) - 1

    def _delta_images(self, j, d):
        """Images of the basis of G^j_d in G^{j+1}_d, as coordinate vectors."""
        src = self.terms[j]
        if j + 1 > self.top:
            return [{} for _ in src.basis(d)]
        tgt = self.terms[j + 1]
        out = []
        for k, mono in src.basis(d):
            elem = {}
            for l, poly in self.rows[j][k]:
                elem[l] = {_vadd(m, mono): c for m, c in poly.items()}
            out.append(tgt.vector(elem, d))
        return out

    def pieces(self, j, d):
        """(cycles as vectors, echelon of boundaries) of G^j at degree d."""
        key = ("zb", j, tuple(d))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        F = self.ring.field
        cycles = kernel_of_columns(self._delta_images(j, d), F) if self.terms[j].dim(d) else []
        bnd = Echelon(F)
        if j >= 1:
            for v in self._delta_images(j - 1, d):
                bnd.add(v)
        hit = (cycles, bnd)
        self._cache[key] = hit
        return hit

    def ext_dim(self, j, d):
        d = tuple(d)
        if j < 0 or j > self.top:
            return 0
        key = ("dim", j, d)
        hit = self._cache.get(key)
        if hit is None:
            n = self.terms[j].dim(d)
            if not n:
                hit = 0
            else:
                out = len(rref_rows(self._delta_images(j, d), self.ring.field))
                inn = len(rref_rows(self._delta_images(j - 1, d), self.ring.field)) if j else 0
                hit = n - out - inn
            self._cache[key] = hit
        return hit

    def is_boundary(self, j, d, vec):
        return self.pieces(j, d)[1].contains(vec)


def dual_complex(res):
    dc = getattr(res, "_dual", None)
    if dc is None:
        dc = res._dual = DualComplex(res)
    return dc


class FineDual:
    """Dual complex of a resolution over the fine grading, with presence masks."""

    def __init__(self, res):
        self.res = res
        ring = self.ring = res.ring
        self.mu = ring.nvars
        self.top = len(res.frees) - 1
        one = (1,) * self.mu
        self.thresholds = [[_vsub(one, s) for s in F.shifts] for F in res.frees]
        self.coef = [None]
        for j in range(1, len(res.frees)):
            rows = [dict() for _ in res.frees[j - 1].shifts]
            for l, col in enumerate(res.maps[j]):
                for k, poly in col.items():
                    if len(poly) != 1:
                        raise ValueError("fine resolution entries must be single terms")
                    rows[k][l] = next(iter(poly.values()))
            self.coef.append(rows)
        self._rank_out = {}
        self._rank_in = {}
        self._chambers = {}

    # -- presence -----------------------------------------------------------------
    def mask(self, j, e, ignore=()):
        if j < 0 or j > self.top:
            return 0
        m = 0
        for k, thr in enumerate(self.thresholds[j]):
            if all(x >= t for v, (x, t) in enumerate(zip(e, thr)) if v not in ignore):
                m |= 1 << k
        return m

    def _rank_of_rows(self, j, mask):
        """Rank of the rows of delta_{j+1} indexed by ``mask`` (generators of G^j)."""
        if j + 1 > self.top or not mask:
            return 0
        rows = self.coef[j + 1]
        vecs = [rows[k] for k in range(len(rows)) if mask >> k & 1]
        return len(rref_rows(vecs, self.ring.field))

    def rank_out(self, j, mask):
        key = (j, mask)
        hit = self._rank_out.get(key)
        if hit is None:
            hit = self._rank_out[key] = self._rank_of_rows(j, mask)
        return hit

    def dim_from_masks(self, j, m_prev, m_cur):
        return bin(m_cur).count("1") - self.rank_out(j, m_cur) - self.rank_out(j - 1, m_prev)

    def ext_dim(self, j, e, ignore=()):
        if j < 0 or j > self.top:
            return 0
        m_cur = self.mask(j, e, ignore)
        if not m_cur:
            return 0
        return self.dim_from_masks(j, self.mask(j - 1, e, ignore), m_cur)

    # -- chambers -----------------------------------------------------------------
    def cut_points(self, j, v):
        pts = set()
        for jj in (j - 1, j):
            if 0 <= jj <= self.top:
                pts.update(t[v] for t in self.thresholds[jj])
        return sorted(pts)

    def chambers(self, j, ignore=()):
        """Nonzero chambers of Ext^j (localized at the coordinates in ``ignore``).

        Each entry is ``(lo, hi, dim)``: per coordinate an interval
        [lo_v, hi_v] (``hi_v`` None when unbounded); ignored coordinates get
        ``(None, None)``.
        """
        ignore = frozenset(ignore)
        key = (j, ignore)
        hit = self._chambers.get(key)
        if hit is not None:
            return hit
        out = []
        if 0 <= j <= self.top:
            axes = []
            for v in range(self.mu):
                if v in ignore:
                    axes.append([(None, None)])
                    continue
                cuts = self.cut_points(j, v)
                axes.append([(c, cuts[i + 1] - 1 if i + 1 < len(cuts) else None)
                             for i, c in enumerate(cuts)])
            for combo in product(*axes):
                rep = tuple(lo if lo is not None else 0 for lo, _ in combo)
                d = self.ext_dim(j, rep, ignore)
                if d:
                    out.append((tuple(lo for lo, _ in combo), tuple(hi for _, hi in combo), d))
        self._chambers[key] = out
        return out

    def vanishes(self, j, ignore=()):
        return not self.chambers(j, ignore)


def count_in_box(degrees, lo, hi, target):
    """Number of integer e with lo <= e <= hi (hi None = unbounded) and sum e_v deg_v = target."""
    nv = len(degrees)
    base = [0] * len(target)
    for v in range(nv):
        for i, x in enumerate(degrees[v]):
            base[i] += lo[v] * x
    rem0 = tuple(t - b for t, b in zip(target, base))
    if any(x < 0 for x in rem0):
        return 0
    supp_after = [frozenset(i for d in degrees[v:] for i, x in enumerate(d) if x) for v in range(nv + 1)]

    @lru_cache(maxsize=None)
    def ways(v, rem):
        if v == nv:
            return 0 if any(rem) else 1
        if any(x and i not in supp_after[v] for i, x in enumerate(rem)):
            return 0
        d = degrees[v]
        top = min(rem[i] // x for i, x in enumerate(d) if x)
        if hi[v] is not None:
            top = min(top, hi[v] - lo[v])
        total = 0
        for f in range(top + 1):
            total += ways(v + 1, tuple(r - f * x for r, x in zip(rem, d)))
        return total

    return ways(0, rem0)
