"""Multigraded Rees algebras of monomial ideals as fine-graded quotients.

For ideals I_1..I_r of k[x_1..x_m] the Rees algebra is presented on
variables y_l (one per x_l) of degree (e_l, 0) and z_{j,l} (one per
minimal generator g of I_j) of degree (g, e_{m+j}).  Every piece of the
algebra in this Z^{m+r} grading is at most one-dimensional: degree (v, w)
is spanned by x^v t^w exactly when x^v lies in I_1^{w_1} ... I_r^{w_r}.
Relations are the kernel of the evaluation map, collected degree by
degree up to a weight cap and certified by comparing the presented
quotient with that membership rule ("Hilbert fidelity").

The same construction with generators at the minimal generators of a
product J = I_1^{b_1} ... I_r^{b_r} presents J R(I_1^{a_1}, ..., I_r^{a_r}),
the module whose depth the Veronese statements are about.
"""
from dataclasses import dataclass

from .cohomo.depth import Inconclusive
from .cohomo.local import cohomology
from .cohomo.resolution import depth_ab
from .kernel.ring import GradedRing, _vadd, _vsub
from .lattice import box
from .modcat import FGModule, FreeModule, degreewise_generators


class CapTooSmall(RuntimeError):
    def __init__(self, cap, degree, got, expected):
        super().__init__(f"relation cap {cap}: piece at {degree} has dimension {got}, expected {expected}")
        self.cap = cap
        self.degree = degree


def _divides(g, v):
    return all(x <= y for x, y in zip(g, v))


def _minimalize(gens):
    gens = sorted(set(gens), key=lambda g: (sum(g), g))
    out = []
    for g in gens:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    # descending lex: x^4 before x^3y, so z_1 belongs to the leading generator
    return tuple(sorted(out, reverse=True))


class MonomialIdeal:
    """Monomial ideal of k[x_1..x_m] kept as its minimal generators."""

    def __init__(self, generators, nvars=None):
        gens = [tuple(int(x) for x in g) for g in generators]
        if nvars is None:
            if not gens:
                raise ValueError("the zero ideal needs an explicit variable count")
            nvars = len(gens[0])
        if any(len(g) != nvars or min(g, default=0) < 0 for g in gens):
            raise ValueError(f"exponent vectors must be nonnegative of length {nvars}")
        self.nvars = nvars
        self.generators = _minimalize(gens)

    def contains(self, v):
        return all(x >= 0 for x in v) and any(_divides(g, v) for g in self.generators)

    def times(self, other):
        if other.nvars != self.nvars:
            raise ValueError("ideals live in different rings")
        return MonomialIdeal([_vadd(g, h) for g in self.generators for h in other.generators], self.nvars)

    def power(self, k):
        out = MonomialIdeal([(0,) * self.nvars], self.nvars)
        for _ in range(k):
            out = out.times(self)
        return out

    def max_degree(self):
        return max((sum(g) for g in self.generators), default=0)

    def __eq__(self, other):
        return isinstance(other, MonomialIdeal) and (self.nvars, self.generators) == (other.nvars, other.generators)

    def __hash__(self):
        return hash((self.nvars, self.generators))

    def __repr__(self):
        return f"MonomialIdeal({list(self.generators)})"


def product_of_powers(ideals, exps):
    m = ideals[0].nvars
    out = MonomialIdeal([(0,) * m], m)
    for I, e in zip(ideals, exps):
        out = out.times(I.power(e))
    return out


def _base_names(m):
    return ["x", "y"][:m] if m <= 2 else [f"x{l + 1}" for l in range(m)]


def rees_ring(ideals, field=None):
    """Ambient polynomial ring of R(I_1..I_r) with its Z^{m+r} grading."""
    m, r = ideals[0].nvars, len(ideals)
    names, degrees = [], []
    for l, name in enumerate(_base_names(m)):
        names.append(name)
        degrees.append(tuple(int(i == l) for i in range(m)) + (0,) * r)
    for j, I in enumerate(ideals):
        for l, g in enumerate(I.generators):
            names.append(f"z{l + 1}" if r == 1 else f"z{j + 1}_{l + 1}")
            degrees.append(tuple(g) + tuple(int(i == j) for i in range(r)))
    kw = {} if field is None else {"field": field}
    return GradedRing(names, degrees, detect_blocks=False, **kw)


@dataclass
class ReesPresentation:
    ideals: tuple
    powers: tuple
    twist: tuple
    ring: GradedRing
    module: FGModule
    relation_cap: int
    fidelity_weight: int

    @property
    def m(self):
        return self.ideals[0].nvars

    @property
    def r(self):
        return len(self.ideals)

    @property
    def relations(self):
        return self.module.columns

    def coarse_projection(self, d):
        return tuple(d[self.m:])

    def expected_dim(self, d):
        """1 when x^v lies in J I_1^{a_1 w_1} ... I_r^{a_r w_r}, else 0."""
        v, w = d[:self.m], d[self.m:]
        if any(x < 0 for x in w):
            return 0
        exps = [b + a * x for a, b, x in zip(self.powers, self.twist, w)]
        return int(product_of_powers(self.ideals, exps).contains(v))


def _degrees_up_to(ring, shifts, top):
    out = set()
    for s in shifts:
        ws = ring.weight(s)
        for w in range(0, top - ws + 1):
            out.update(_vadd(s, d) for d in ring.degrees_of_weight(w))
    return sorted(out, key=lambda n: (ring.weight(n), n))


def default_relation_cap(ideals, powers=None):
    powers = powers or (1,) * len(ideals)
    top = max(I.power(a).max_degree() for I, a in zip(ideals, powers))
    return 2 * (top + len(ideals))


def _build_once(ideals, powers, twist, cap, fidelity_weight, field):
    built = [I.power(a) for I, a in zip(ideals, powers)]
    ring = rees_ring(built, field)
    r = len(ideals)
    J = product_of_powers(ideals, twist)
    shifts = [tuple(g) + (0,) * r for g in J.generators]
    free = FreeModule(ring, shifts)

    def kernel_at(n):
        # every basis element evaluates to the same monomial x^v t^w
        size = free.dim(n)
        return [{0: 1, i: -1} for i in range(1, size)]

    rels = degreewise_generators(free, _degrees_up_to(ring, shifts, cap), kernel_at)
    M = FGModule(ring, shifts, [elem for _, elem in rels])
    pres = ReesPresentation(tuple(ideals), tuple(powers), tuple(twist), ring, M, cap, fidelity_weight)
    for n in _degrees_up_to(ring, shifts, fidelity_weight):
        got, want = M.dim(n), pres.expected_dim(n)
        if got != want:
            raise CapTooSmall(cap, n, got, want)
    return pres


def rees_build(ideals, relation_cap=None, powers=None, twist=None, doublings=3, field=None):
    """Present J R(I_1^{a_1}, ..., I_r^{a_r}) with J = I_1^{b_1} ... I_r^{b_r}.

    ``powers`` is a (default all ones), ``twist`` is b (default zero).
    Relations are searched up to weight ``relation_cap`` and checked
    against the membership rule up to twice that weight.  With no explicit
    cap the default is doubled after each ``CapTooSmall``, at most
    ``doublings`` times.
    """
    ideals = tuple(ideals)
    if not ideals:
        raise ValueError("need at least one ideal")
    if len({I.nvars for I in ideals}) != 1:
        raise ValueError("all ideals must live in the same ring")
    if any(not I.generators for I in ideals):
        raise ValueError("the zero ideal has no Rees algebra here")
    r = len(ideals)
    powers = tuple(powers) if powers is not None else (1,) * r
    twist = tuple(twist) if twist is not None else (0,) * r
    if min(powers) < 1 or min(twist) < 0:
        raise ValueError("powers must be positive and twists nonnegative")
    if relation_cap is not None:
        return _build_once(ideals, powers, twist, relation_cap, 2 * relation_cap, field)
    cap = default_relation_cap(ideals, powers)
    for attempt in range(doublings + 1):
        try:
            return _build_once(ideals, powers, twist, cap, 2 * cap, field)
        except CapTooSmall:
            if attempt == doublings:
                raise
            cap *= 2


def rees_depth(pres):
    """Depth of the presented module over the ambient ring (Auslander-Buchsbaum)."""
    return depth_ab(pres.module)


def rees_veronese_depth(ideals, a, b=None, relation_cap=None):
    """depth of (I^b) R(I^a), built directly and resolved."""
    return rees_depth(rees_build(ideals, relation_cap, powers=a, twist=b))


# -- the same numbers from the local cohomology of R(I_1..I_r) ----------------------------

def _slice_box(pres, C, j, w_target):
    """Bounding box, in the first m coordinates, of where Ext^j can live at the given last coordinates.

    Over the y-variables each slice of the dual complex at fixed last
    coordinates is a free module with finitely many generators; kernels
    and cokernels of its maps acquire generators only at joins of those
    generator degrees, so nonvanishing of the slice is decided inside the
    box spanned by them.
    """
    ring, m = pres.ring, pres.m
    G = C.dual.terms[j]
    zvars = list(range(m, ring.nvars))
    lo = hi = None
    for s in G.shifts:
        need = _vsub(w_target, s[m:])
        if any(x < 0 for x in need):
            continue
        for zs in _z_monomials(ring, zvars, need):
            v = _vadd(s[:m], zs)
            lo = v if lo is None else tuple(min(x, y) for x, y in zip(lo, v))
            hi = v if hi is None else tuple(max(x, y) for x, y in zip(hi, v))
    return lo, hi


def _z_monomials(ring, zvars, need):
    """First-m-coordinate parts of the z-monomials whose last coordinates equal ``need``."""
    m = ring.q - len(need)
    out = set()

    def rec(i, rem, acc):
        if i == len(zvars):
            if not any(rem):
                out.add(acc)
            return
        d = ring.degrees[zvars[i]]
        tail = d[m:]
        top = min((x // t for x, t in zip(rem, tail) if t), default=0)
        for f in range(top + 1):
            rec(i + 1, tuple(x - f * t for x, t in zip(rem, tail)),
                tuple(x + f * y for x, y in zip(acc, d[:m])))

    rec(0, tuple(need), (0,) * m)
    return out


def rees_veronese_depth_lc(pres, a, b=None, window=2):
    """min i with H^i(R)_{(v, a*w + b)} != 0, from the Ext modules of the presented R.

    ``pres`` must present the Rees algebra itself (powers 1, no twist).
    The last coordinates w range over [-window, window]^r; for each of
    them the first coordinates are searched exactly on the box where the
    slice of Ext can be nonzero.  Raises ``Inconclusive`` when no level is
    nonzero inside the window.
    """
    if any(p != 1 for p in pres.powers) or any(pres.twist):
        raise ValueError("the local cohomology route starts from R(I_1..I_r) itself")
    r = pres.r
    a = tuple(a)
    b = tuple(b) if b is not None else (0,) * r
    C = cohomology(pres.module, generic=True)
    mu = C.mu
    lasts = [tuple(-(x * y + z) for x, y, z in zip(a, w, b)) for w in box((-window,) * r, (window,) * r)]
    for i in range(mu + 1):
        j = mu - i
        if j > C.res.length:
            continue
        for wt in lasts:
            lo, hi = _slice_box(pres, C, j, wt)
            if lo is None:
                continue
            for v in box(lo, hi):
                if C.ext_dim(j, v + wt):
                    return i
    raise Inconclusive(mu, f"no nonzero local cohomology on last coordinates within {window}")


def stabilization(ideals, a_values, b=None, relation_cap=None, route="resolution", window=2, base=None):
    """Depths of the Veronese modules for each a in ``a_values`` plus the detected onset.

    Returns ``(table, onset)`` where ``table`` maps a to the depth and
    ``onset`` is the least sampled a from which the depth stays constant
    (componentwise order is used to read "from which").
    """
    table = {}
    for a in a_values:
        a = tuple(a)
        if route == "resolution":
            table[a] = rees_veronese_depth(ideals, a, b, relation_cap)
        else:
            base = base or rees_build(ideals, relation_cap)
            table[a] = rees_veronese_depth_lc(base, a, b, window)
    keys = list(table)
    onset = None
    for a in keys:
        later = [c for c in keys if all(x >= y for x, y in zip(c, a))]
        if all(table[c] == table[a] for c in later):
            onset = a
            break
    return table, onset
