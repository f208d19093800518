"""Multigraded polynomial rings, monomials and homogeneous polynomials.

Monomials are exponent tuples; polynomials are dicts ``{monomial: coeff}``.
"""
from ..lattice import DegreeMatrix
from .field import QQ


class NonPositiveGrading(ValueError):
    pass


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _detect_blocks(degrees, q):
    """Group variables into blocks whose degrees form a triangular matrix."""
    by_row = {}
    for j, d in enumerate(degrees):
        nz = [i for i, x in enumerate(d) if x]
        if not nz:
            return None
        by_row.setdefault(nz[-1], []).append(j)
    if sorted(by_row) != list(range(q)):
        return None
    blocks = []
    for i in range(q):
        js = by_row[i]
        if len({degrees[j] for j in js}) != 1:
            return None
        blocks.append(tuple(js))
    return tuple(blocks)


class GradedRing:
    """Polynomial ring k[x_1..x_mu] with a Z^q grading.

    ``blocks`` (optional) partitions the variables so that block i has the
    common degree gamma_i; when omitted it is detected whenever the degrees
    allow it.
    """

    def __init__(self, names, degrees, blocks=None, field=QQ, detect_blocks=True):
        names = tuple(names)
        degrees = tuple(tuple(int(x) for x in d) for d in degrees)
        if len(names) != len(degrees):
            raise ValueError("one degree per variable required")
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        if not degrees:
            raise ValueError("a ring needs at least one variable")
        q = len(degrees[0])
        if q < 1 or any(len(d) != q for d in degrees):
            raise ValueError("all degrees must have the same length")
        self.names = names
        self.degrees = degrees
        self.q = q
        self.nvars = len(names)
        self.field = field
        if blocks is None and detect_blocks:
            blocks = _detect_blocks(degrees, q)
        elif blocks is not None:
            blocks = tuple(tuple(b) for b in blocks)
            flat = sorted(j for b in blocks for j in b)
            if flat != list(range(self.nvars)):
                raise ValueError("blocks must partition the variables")
            for b in blocks:
                if len({degrees[j] for j in b}) != 1:
                    raise ValueError("variables of a block must share one degree")
        self.blocks = blocks
        self.degree_matrix = None
        if blocks is not None:
            if len(blocks) != q:
                raise ValueError("need one block per grading coordinate")
            self.degree_matrix = DegreeMatrix([degrees[b[0]] for b in blocks])
        self.theta = check_positive(self)
        self.sigma = tuple(sum(d[i] for d in degrees) for i in range(q))
        self._basis_cache = {}
        self._suffix_cache = {}
        self._weight_cache = [[(0,) * q]]
        self._suffix_support = [
            frozenset(i for d in degrees[j:] for i, x in enumerate(d) if x)
            for j in range(self.nvars + 1)
        ]

    # -- degrees ---------------------------------------------------------
    def weight(self, deg):
        return sum(t * x for t, x in zip(self.theta, deg))

    def degree(self, mono):
        out = [0] * self.q
        for e, d in zip(mono, self.degrees):
            if e:
                for i, x in enumerate(d):
                    out[i] += e * x
        return tuple(out)

    def poly_degree(self, poly):
        degs = {self.degree(m) for m in poly}
        if len(degs) != 1:
            raise ValueError("polynomial is not homogeneous" if degs else "zero polynomial has no degree")
        return degs.pop()

    def is_homogeneous(self, poly):
        return len({self.degree(m) for m in poly}) <= 1

    def is_fine(self):
        """True when the variables carry the distinct unit vectors of Z^mu."""
        if self.q != self.nvars:
            return False
        return all(d == tuple(int(i == j) for i in range(self.q)) for j, d in enumerate(self.degrees))

    def fine_ring(self):
        mu = self.nvars
        return GradedRing(self.names, [tuple(int(i == j) for i in range(mu)) for j in range(mu)],
                          field=self.field, detect_blocks=False)

    def with_field(self, field):
        return GradedRing(self.names, self.degrees, self.blocks, field)

    @property
    def is_almost_standard(self):
        return self.degree_matrix is not None and self.degree_matrix.is_almost_standard

    # -- monomials -------------------------------------------------------
    def monomial_basis(self, n):
        n = tuple(n)
        hit = self._basis_cache.get(n)
        if hit is not None:
            return hit
        if len(n) != self.q:
            raise ValueError("degree has wrong length")
        out = self._suffix(0, n) if all(x >= 0 for x in n) else ()
        if len(self._basis_cache) < 200000:
            self._basis_cache[n] = out
        return out

    def _suffix(self, j, rem):
        """Exponent tuples of variables j.. whose degrees sum to ``rem`` (memoized)."""
        key = (j, rem)
        hit = self._suffix_cache.get(key)
        if hit is not None:
            return hit
        if j == self.nvars:
            out = ((),) if not any(rem) else ()
        elif any(x and i not in self._suffix_support[j] for i, x in enumerate(rem)):
            out = ()
        else:
            d = self.degrees[j]
            top = min(rem[i] // x for i, x in enumerate(d) if x)
            out = []
            for e in range(top, -1, -1):
                nxt = tuple(r - e * x for r, x in zip(rem, d))
                out.extend((e,) + t for t in self._suffix(j + 1, nxt))
            out = tuple(out)
        if len(self._suffix_cache) < 400000:
            self._suffix_cache[key] = out
        return out

    def degrees_of_weight(self, w):
        """Distinct degrees of monomials whose positivity weight is exactly w."""
        cache = self._weight_cache
        while len(cache) <= w:
            cur = len(cache)
            out = set()
            for j, d in enumerate(self.degrees):
                wj = self.weight(d)
                if wj <= cur:
                    out.update(_vadd(x, d) for x in cache[cur - wj])
            cache.append(sorted(out))
        return cache[w] if w >= 0 else []

    def count_monomials(self, n):
        return len(self.monomial_basis(n))

    def variable(self, j):
        return {tuple(int(i == j) for i in range(self.nvars)): 1}

    def var_index(self, name):
        return self.names.index(name)

    def one(self):
        return {(0,) * self.nvars: 1}

    # -- polynomials -----------------------------------------------------
    def mul(self, f, g):
        F = self.field
        out = {}
        for m1, c1 in f.items():
            for m2, c2 in g.items():
                m = _vadd(m1, m2)
                v = F.norm(out.get(m, 0) + c1 * c2)
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out

    def add(self, f, g, scale=1):
        F = self.field
        out = dict(f)
        for m, c in g.items():
            v = F.norm(out.get(m, 0) + scale * c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return out

    def power(self, f, t):
        out = self.one()
        for _ in range(t):
            out = self.mul(out, f)
        return out

    def format_monomial(self, mono):
        parts = []
        for name, e in zip(self.names, mono):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"

    def format_poly(self, poly):
        if not poly:
            return "0"
        terms = []
        for m in sorted(poly, reverse=True):
            c = poly[m]
            mono = self.format_monomial(m)
            if mono == "1":
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def __eq__(self, other):
        return (isinstance(other, GradedRing) and self.names == other.names
                and self.degrees == other.degrees and self.field == other.field
                and self.blocks == other.blocks)

    def __hash__(self):
        return hash((self.names, self.degrees, self.blocks))

    def __repr__(self):
        degs = ", ".join(f"{n}:{d}" for n, d in zip(self.names, self.degrees))
        return f"GradedRing({degs})"


def check_positive(ring):
    """Positivity certificate theta with theta . deg(x_j) > 0 for all j.

    Only gradings whose variable degrees sit in N^q minus the origin are
    accepted; then theta is the row sums of the block matrix when blocks
    exist, or the all-ones functional otherwise.
    """
    for name, d in zip(ring.names, ring.degrees):
        if any(x < 0 for x in d) or not any(d):
            raise NonPositiveGrading(f"degree {d} of {name} is not in N^{ring.q} minus 0")
    G = getattr(ring, "degree_matrix", None)
    if G is not None:
        theta = tuple(sum(G.entry(i, l) for l in range(G.r)) for i in range(G.r))
    else:
        theta = (1,) * ring.q
    assert all(sum(t * x for t, x in zip(theta, d)) > 0 for d in ring.degrees)
    return theta


def monomial_basis(ring, n):
    return list(ring.monomial_basis(n))
