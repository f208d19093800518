"""Independent local cohomology of S/I (I monomial) through the Cech complex.

The Cech complex on the variables splits over fine degrees e in Z^mu.  In a
fine degree e the term for a subset F of variables is one-dimensional
exactly when F contains every coordinate where e is negative and no
generator of I divides x^e after inverting the variables in F; all maps
between nonzero terms are +-1.  A coarse piece sums the fine pieces of its
degree; fine degrees with a coordinate below -T are dropped (truncation).
"""
from math import ceil

from ..kernel.linalg import rref_rows
from ..kernel.ring import _vsub


class Unstable(RuntimeError):
    def __init__(self, truncation):
        super().__init__(f"Cech pieces changed between truncation {truncation} and {truncation + 1}")
        self.truncation = truncation


def monomial_data(M):
    """(shift, generators) when M = S/I(-shift) with I monomial, else ValueError."""
    if len(M.shifts) != 1:
        raise ValueError("the Cech oracle needs a cyclic module S/I")
    gens = []
    for col in M.columns:
        if list(col) != [0] or len(col[0]) != 1:
            raise ValueError("the Cech oracle needs monomial relations")
        gens.append(next(iter(col[0])))
    return M.shifts[0], gens


class CechOracle:
    def __init__(self, M):
        self.ring = M.ring
        self.shift, self.gens = monomial_data(M)
        mu = self.ring.nvars
        self.caps = tuple(max([g[j] for g in self.gens] + [0]) for j in range(mu))
        self._fine = {}

    def _fine_dims(self, e):
        """Cohomology dimensions of the Cech complex at fine degree e (all indices)."""
        mu = self.ring.nvars
        neg = frozenset(j for j, x in enumerate(e) if x < 0)
        key = (neg, tuple(-1 if x < 0 else min(x, c) for x, c in zip(e, self.caps)))
        hit = self._fine.get(key)
        if hit is not None:
            return hit
        alive = {}
        free = [j for j in range(mu) if j not in neg]
        for mask in range(1 << len(free)):
            F = set(neg) | {free[b] for b in range(len(free)) if mask >> b & 1}
            kill = any(all(g[j] <= e[j] for j in range(mu) if j not in F) for g in self.gens)
            if not kill:
                alive.setdefault(len(F), []).append(frozenset(F))
        index = {p: {F: k for k, F in enumerate(terms)} for p, terms in alive.items()}
        ranks = {}
        for p, terms in alive.items():
            tgt = index.get(p + 1, {})
            rows = []
            for F in terms:
                row = {}
                for j in range(mu):
                    if j in F:
                        continue
                    G = F | {j}
                    if G in tgt:
                        row[tgt[G]] = (-1) ** sum(1 for l in F if l < j)
                rows.append(row)
            ranks[p] = len(rref_rows(rows)) if tgt else 0
        dims = tuple(len(alive.get(p, ())) - ranks.get(p, 0) - ranks.get(p - 1, 0) for p in range(mu + 1))
        self._fine[key] = dims
        return dims

    def default_truncation(self, n):
        """Negative coordinates below this bound cannot reach degree n with nonzero cohomology."""
        ring = self.ring
        wdeg = [ring.weight(d) for d in ring.degrees]
        slack = sum(max(c - 1, 0) * w for c, w in zip(self.caps, wdeg))
        need = slack - ring.weight(_vsub(n, self.shift))
        return max(1, ceil(need / min(wdeg)))

    def piece(self, i, n, truncation):
        ring = self.ring
        T = truncation
        target = tuple(x + T * s for x, s in zip(_vsub(n, self.shift), ring.sigma))
        total = 0
        for f in ring.monomial_basis(target):
            e = tuple(x - T for x in f)
            total += self._fine_dims(e)[i]
        return total


def cech_oracle(M, i, n, truncation=None, oracle=None):
    """dim H^i(M)_n from the truncated Cech complex, checked at T and T+1."""
    oracle = oracle or CechOracle(M)
    n = tuple(n)
    if not 0 <= i <= M.ring.nvars:
        return 0
    T = truncation if truncation is not None else oracle.default_truncation(n)
    a = oracle.piece(i, n, T)
    b = oracle.piece(i, n, T + 1)
    if a != b:
        raise Unstable(T)
    return a
