"""Generalized depth, Gamma-finite gradedness and depth of Veronese transforms."""
from dataclasses import dataclass, field
from itertools import product

from ..kernel.ring import _vadd, _vsub
from ..lattice import ConeRegion, box, cone_contains, phi_a, star
from .local import cohomology


class Inconclusive(RuntimeError):
    def __init__(self, level, reason):
        super().__init__(f"level {level}: {reason}")
        self.level = level


@dataclass
class GdepthVerdict:
    value: int
    mu: int
    power_cap: int
    exact: bool
    levels: list = field(default_factory=list)

    @property
    def infinite(self):
        return self.value > self.mu


@dataclass
class GammaFgVerdict:
    value: int
    mu: int
    window: tuple
    cones: dict = field(default_factory=dict)
    witness: tuple = None

    @property
    def infinite(self):
        return self.value > self.mu


def block_supports(ring):
    """Variable sets of the block products x_{1,j_1} ... x_{r,j_r}."""
    if ring.blocks is None:
        raise ValueError("S_++ needs a block structure on the variables")
    return [tuple(sorted(c)) for c in product(*ring.blocks)]


def _monomial(ring, support):
    return {tuple(int(v in support) for v in range(ring.nvars)): 1}


def gdepth(M, power_cap=32, window=None, generic=False):
    """First level i where some block product acts non-nilpotently on H^i (mu+1 if none)."""
    C = cohomology(M, window, generic)
    ring, mu = M.ring, C.mu
    supports = block_supports(ring)
    verdict = GdepthVerdict(mu + 1, mu, power_cap, C.exact)
    for i in range(mu + 1):
        j = mu - i
        if C.ext_vanishes(j):
            verdict.levels.append({"level": i, "status": "vanishes"})
            continue
        worst = 0
        for A in supports:
            if C.exact:
                t = C.fine_power_index(j, A)
                localized_zero = C.fine.vanishes(j, ignore=A)
                if (t is None) == localized_zero:
                    raise AssertionError(f"nilpotency routes disagree at level {i} on {A}")
                if t is None:
                    verdict.value = i
                    verdict.levels.append({"level": i, "status": "not-nilpotent",
                                           "support": [ring.names[v] for v in A]})
                    return verdict
                if t > power_cap:
                    raise Inconclusive(i, f"nilpotency index {t} exceeds the power cap {power_cap}")
                worst = max(worst, t)
            else:
                t, ranks = C.generic_power_verdict(j, _monomial(ring, A), power_cap)
                if t is None:
                    if ranks and min(ranks) == max(ranks) > 0:
                        verdict.value = i
                        verdict.levels.append({"level": i, "status": "not-nilpotent",
                                               "support": [ring.names[v] for v in A],
                                               "capRelative": True})
                        return verdict
                    raise Inconclusive(i, f"no decision within power cap {power_cap}")
                worst = max(worst, t)
        verdict.levels.append({"level": i, "status": "nilpotent", "t": worst})
    return verdict


def _cone_clear(C, i, beta, G, window):
    cone = ConeRegion(beta, G)
    for n in box((-window,) * G.r, (window,) * G.r):
        if cone_contains(cone, star(n)):
            d = C.lc_dim(i, n)
            if d:
                return n, d
    return None


def gamma_fg(M, window=8):
    """First level i whose H^i admits no vanishing cone inside the window (mu+1 if none)."""
    ring = M.ring
    G = ring.degree_matrix
    if G is None or not G.is_almost_standard:
        raise ValueError("Gamma-finite gradedness is decided for almost-standard gradings only")
    C = cohomology(M)
    mu, r = C.mu, G.r
    verdict = GammaFgVerdict(mu + 1, mu, (-window, window))
    for i in range(mu + 1):
        j = mu - i
        if C.ext_vanishes(j):
            verdict.cones[i] = (0,) * r
            continue
        degs = C.ext_generators(j)
        base = tuple(max(star(d)[k] for d in degs) for k in range(r))
        margin, cone, miss = 1, None, None
        while True:
            beta = tuple(x + margin for x in base)
            if margin > 1 and max(beta) > window - 1:
                break
            miss = _cone_clear(C, i, beta, G, window)
            if miss is None:
                cone = beta
                break
            margin *= 2
        if cone is None:
            verdict.value = i
            verdict.witness = (i, miss[0], miss[1]) if miss else (i, None, None)
            return verdict
        verdict.cones[i] = cone
    return verdict


def veronese_depth(M, a, b, window=4):
    """min i with H^i(M)_{phi_a(n)+b} != 0 for some n in [-window, window]^r, else mu."""
    G = M.ring.degree_matrix
    if G is None:
        raise ValueError("Veronese transforms need a block degree matrix")
    C = cohomology(M)
    mu = C.mu
    degs = [_vadd(phi_a(G, a, n), tuple(b)) for n in box((-window,) * G.r, (window,) * G.r)]
    for i in range(mu + 1):
        if C.ext_vanishes(mu - i):
            continue
        if any(C.lc_dim(i, d) for d in degs):
            return i
    return mu


def default_samples(M, extra=()):
    r = M.ring.degree_matrix.r
    pts = [(a, b) for a in box((1,) * r, (3,) * r) for b in box((0,) * r, (2,) * r)]
    return pts + [p for p in extra if p not in pts]


def vad_estimate(M, samples=None, window=4):
    """Max Veronese depth over the samples whose transform is nonzero on the window.

    Zero transforms have no depth to speak of; when every sample is zero the
    result is the window-relative upper bound mu.
    """
    samples = samples if samples is not None else default_samples(M)
    live = [(a, b) for a, b in samples if transform_nonzero(M, a, b, window)]
    if not live:
        return cohomology(M).mu
    return max(veronese_depth(M, a, b, window) for a, b in live)


# -- Veronese transforms through the commutation with local cohomology ------------------------

class ResidueLattice:
    """Z^r modulo the lattice spanned by the columns a_i * gamma_i."""

    def __init__(self, G, a):
        self.r = G.r
        self.cols = [tuple(a[l] * x for x in G.columns[l]) for l in range(G.r)]

    def reduce(self, v):
        v = list(v)
        for i in range(self.r - 1, -1, -1):
            col = self.cols[i]
            k = v[i] // col[i]
            if k:
                for t in range(i + 1):
                    v[t] -= k * col[t]
        return tuple(v)

    def closure(self, start, steps):
        seen = {self.reduce(s) for s in start}
        frontier = list(seen)
        while frontier:
            nxt = []
            for x in frontier:
                for s in steps:
                    y = self.reduce(_vadd(x, s))
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen


def _chamber_meets(lattice, degrees, lo, hi, target):
    group_steps, reach = [], {(0,) * lattice.r}
    for v, d in enumerate(degrees):
        if lo[v] is None or hi[v] is None:
            group_steps.append(d)
    base = (0,) * lattice.r
    for v, d in enumerate(degrees):
        if lo[v] is not None:
            base = _vadd(base, tuple(lo[v] * x for x in d))
            if hi[v] is not None:
                span = hi[v] - lo[v]
                reach = {lattice.reduce(_vadd(x, tuple(f * y for y in d)))
                         for x in reach for f in range(span + 1)}
    reach = lattice.closure([_vadd(base, x) for x in reach], group_steps)
    return lattice.reduce(target) in reach


def veronese_supports(ring, a):
    """Minimal supports of the block products of the Veronese ring S^(a)."""
    G = ring.degree_matrix
    per_block = []
    for i in range(G.r):
        e = tuple(int(t == i) for t in range(G.r))
        sups = {frozenset(v for v, x in enumerate(m) if x) for m in ring.monomial_basis(phi_a(G, a, e))}
        per_block.append(sups)
    unions = {frozenset().union(*c) for c in product(*per_block)}
    return sorted((tuple(sorted(u)) for u in unions if not any(o < u for o in unions)))


def veronese_gdepth(M, a, b):
    """gdepth of M^(a,b) computed on M's own Ext modules (fine lifts only).

    A block product g of S^(a) fails to be nilpotent on H^i(M)^(a,b)
    exactly when Ext^{mu-i}(M, omega) localized at the support of g is
    nonzero in some degree lying in -(phi_a(Z^r) + b).
    """
    C = cohomology(M)
    if not C.exact:
        raise ValueError("the commutation route needs a monomial module")
    ring = M.ring
    G = ring.degree_matrix
    lattice = ResidueLattice(G, a)
    target = _vsub(C.offset, tuple(b))
    mu = C.mu
    sups = veronese_supports(ring, a)
    verdict = GdepthVerdict(mu + 1, mu, 0, True)
    for i in range(mu + 1):
        j = mu - i
        for A in sups:
            for lo, hi, _ in C.fine.chambers(j, ignore=A):
                if _chamber_meets(lattice, ring.degrees, lo, hi, target):
                    verdict.value = i
                    verdict.levels.append({"level": i, "status": "not-nilpotent",
                                           "support": [ring.names[v] for v in A]})
                    return verdict
        verdict.levels.append({"level": i, "status": "nilpotent"})
    return verdict


def veronese_depth_exact(M, a, b):
    """Depth of M^(a,b) with no window: the first i whose Ext chambers meet the coset."""
    C = cohomology(M)
    if not C.exact:
        raise ValueError("the exact Veronese depth needs a monomial module")
    ring = M.ring
    lattice = ResidueLattice(ring.degree_matrix, a)
    target = _vsub(C.offset, tuple(b))
    for i in range(C.mu + 1):
        for lo, hi, _ in C.fine.chambers(C.mu - i):
            if _chamber_meets(lattice, ring.degrees, lo, hi, target):
                return i
    return C.mu + 1


def transform_nonzero(M, a, b, window=4):
    """True when M^(a,b) has a nonzero piece at some n in [-window, window]^r."""
    G = M.ring.degree_matrix
    return any(M.dim(_vadd(phi_a(G, a, n), tuple(b))) for n in box((-window,) * G.r, (window,) * G.r))


def region_vertex(M, s, window=8):
    """Componentwise max of the vanishing-cone vertices of H^i(M), i < s (gamma_fg cones)."""
    r = M.ring.degree_matrix.r
    f = gamma_fg(M, window)
    if f.value < s:
        raise Inconclusive(f.value, "no vanishing cone below the asymptotic depth")
    return tuple(max([f.cones[i][k] for i in range(s)] + [0]) for k in range(r))
