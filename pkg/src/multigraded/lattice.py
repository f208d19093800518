"""Integer-vector arithmetic for triangular degree matrices.

Degree maps, cones with a vertex, the termwise absolute value, the vertex
recursion for modules killed by a power of the irrelevant ideal, the
Veronese index bound, and shifted-subgroup witnesses.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import ceil


def _vec(n):
    return tuple(int(x) for x in n)


class DegreeMatrix:
    """Upper-triangular r x r integer matrix given by its columns gamma_1..gamma_r."""

    __slots__ = ("columns", "r", "_diagonal")

    def __init__(self, columns):
        cols = tuple(_vec(c) for c in columns)
        r = len(cols)
        if r < 1:
            raise ValueError("need at least one column")
        for i, c in enumerate(cols):
            if len(c) != r:
                raise ValueError("columns must have length r")
            if any(c[k] for k in range(i + 1, r)):
                raise ValueError(f"column {i + 1} is not upper triangular: {c}")
            if c[i] < 1:
                raise ValueError(f"diagonal entry of column {i + 1} must be >= 1")
            if any(x < 0 for x in c):
                raise ValueError("degree columns must lie in N^r")
        self.columns = cols
        self.r = r
        self._diagonal = all(cols[l][i] == 0 for l in range(r) for i in range(r) if i != l)

    @classmethod
    def identity(cls, r):
        return cls([tuple(int(i == j) for i in range(r)) for j in range(r)])

    @classmethod
    def diagonal(cls, diag):
        r = len(diag)
        return cls([tuple(diag[j] if i == j else 0 for i in range(r)) for j in range(r)])

    def entry(self, i, l):
        """Row i of column l (0-based), i.e. gamma_l^i."""
        return self.columns[l][i]

    @property
    def is_almost_standard(self):
        return self._diagonal

    def solve(self, v):
        """Exact rational lambda with G lambda = v, by back-substitution."""
        v = _vec(v)
        if len(v) != self.r:
            raise ValueError("dimension mismatch")
        lam = [Fraction(0)] * self.r
        for i in range(self.r - 1, -1, -1):
            acc = v[i] - sum(self.columns[l][i] * lam[l] for l in range(i + 1, self.r))
            lam[i] = Fraction(acc, self.columns[i][i])
        return tuple(lam)

    def __eq__(self, other):
        return isinstance(other, DegreeMatrix) and self.columns == other.columns

    def __hash__(self):
        return hash(self.columns)

    def __repr__(self):
        return f"DegreeMatrix(columns={list(self.columns)})"


def phi(G, n):
    n = _vec(n)
    if len(n) != G.r:
        raise ValueError(f"expected a vector of length {G.r}, got {len(n)}")
    return tuple(sum(G.columns[l][i] * n[l] for l in range(G.r)) for i in range(G.r))


def phi_a(G, a, n):
    a = _vec(a)
    if len(a) != G.r or len(n) != G.r:
        raise ValueError("dimension mismatch")
    if any(x < 1 for x in a):
        raise ValueError(f"Veronese index must be positive, got {a}")
    return phi(G, [x * y for x, y in zip(a, n)])


def star(n):
    return tuple(abs(int(x)) for x in n)


@dataclass(frozen=True)
class ConeRegion:
    vertex: tuple
    matrix: DegreeMatrix

    def __post_init__(self):
        object.__setattr__(self, "vertex", _vec(self.vertex))
        if len(self.vertex) != self.matrix.r:
            raise ValueError("vertex has wrong length")
        if any(x < 0 for x in self.vertex):
            raise ValueError("cone vertex must lie in N^r")

    def contains(self, n):
        return cone_contains(self, n)


def cone_contains(cone, n):
    n = _vec(n)
    if any(x < 0 for x in n):
        return False
    if cone.matrix.is_almost_standard:
        return all(x >= b for x, b in zip(n, cone.vertex))
    lam = cone.matrix.solve(tuple(x - b for x, b in zip(n, cone.vertex)))
    return all(x >= 0 for x in lam)


def cone_intersect(c1, c2):
    if c1.matrix != c2.matrix:
        raise ValueError("cones must share their degree matrix")
    if not c1.matrix.is_almost_standard:
        raise ValueError("cone intersection is only available for diagonal degree matrices")
    return ConeRegion(tuple(max(x, y) for x, y in zip(c1.vertex, c2.vertex)), c1.matrix)


def beta_vertex(u, alpha, G):
    """Vertex of the vanishing cone of a module killed by the u-th power of S_++.

    Runs beta_i = u*gamma_i^i + sum_{l>i} beta_l*gamma_i^l + alpha_i for
    i = r..1 (0-based below).
    """
    alpha = _vec(alpha)
    if u < 0 or any(x < 0 for x in alpha):
        raise ValueError("u and alpha must be nonnegative")
    if len(alpha) != G.r:
        raise ValueError("dimension mismatch")
    beta = [0] * G.r
    for i in range(G.r - 1, -1, -1):
        beta[i] = u * G.entry(i, i) + sum(beta[l] * G.entry(i, l) for l in range(i + 1, G.r)) + alpha[i]
    return tuple(beta)


def veronese_region(beta, b, G):
    """Smallest a >= 1 with a_i >= (beta_i + b_i) / gamma_i^i."""
    beta, b = _vec(beta), _vec(b)
    if not G.is_almost_standard:
        raise ValueError("the Veronese region bound needs a diagonal degree matrix")
    if any(y < x for x, y in zip(beta, b)):
        raise ValueError(f"need b >= beta termwise, got b={b}, beta={beta}")
    return tuple(max(1, ceil(Fraction(beta[i] + b[i], G.entry(i, i)))) for i in range(G.r))


def veronese_region_nonzero(beta, b, G):
    """Same bound without the b >= beta clause; valid for n with no zero entry."""
    beta, b = _vec(beta), _vec(b)
    if not G.is_almost_standard:
        raise ValueError("the Veronese region bound needs a diagonal degree matrix")
    return tuple(max(1, ceil(Fraction(beta[i] + b[i], G.entry(i, i)))) for i in range(G.r))


@dataclass(frozen=True)
class GammaSupport:
    """Union of the cosets d^i + Gamma, Gamma the subgroup spanned by the columns."""
    offsets: tuple
    matrix: DegreeMatrix

    def __post_init__(self):
        offs = tuple(_vec(d) for d in self.offsets)
        if not offs:
            raise ValueError("need at least one offset")
        if any(len(d) != self.matrix.r for d in offs):
            raise ValueError("offset has wrong length")
        object.__setattr__(self, "offsets", offs)

    def contains(self, n):
        return any(in_subgroup(self.matrix, tuple(x - y for x, y in zip(n, d))) for d in self.offsets)


def in_subgroup(G, v):
    return all(x.denominator == 1 for x in G.solve(v))


class NoWitness(ValueError):
    pass


def gamma_witness(supp, beta, c):
    """alpha in Gamma_M and beta + Gamma with alpha >= c, plus certificate (t, n).

    alpha = d + G t = beta + G n with t, n in N^r.  The first offset d for
    which d - beta lies in Gamma is used, and t is the lexicographically
    smallest vector meeting every constraint.
    """
    G = supp.matrix
    beta = _vec(beta)
    r = G.r
    for d in supp.offsets:
        w = G.solve(tuple(x - y for x, y in zip(d, beta)))
        if any(x.denominator != 1 for x in w):
            continue
        w = tuple(int(x) for x in w)
        lower = [max(0, -x) for x in w]
        t = [0] * r
        for i in range(r):
            need = lower[i]
            # rows k <= i whose value no longer depends on later t's
            for k in range(i + 1):
                if any(G.entry(k, l) for l in range(i + 1, r)):
                    continue
                fixed = d[k] + sum(G.entry(k, l) * t[l] for l in range(i))
                coef = G.entry(k, i)
                if coef:
                    need = max(need, ceil(Fraction(c - fixed, coef)))
            t[i] = need
        alpha = tuple(d[k] + sum(G.entry(k, l) * t[l] for l in range(r)) for k in range(r))
        n = tuple(ti + wi for ti, wi in zip(t, w))
        assert all(x >= c for x in alpha) and all(x >= 0 for x in n)
        assert phi(G, n) == tuple(a - b for a, b in zip(alpha, beta))
        return alpha, tuple(t), n
    raise NoWitness(f"no offset of the support lies in {beta} + Gamma")


def box(lo, hi):
    """All integer vectors v with lo <= v <= hi termwise, in lexicographic order."""
    out = [()]
    for a, b in zip(lo, hi):
        out = [p + (x,) for p in out for x in range(a, b + 1)]
    return out
