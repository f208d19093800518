"""Finitely generated multigraded modules given as cokernels of homogeneous matrices.

An element of a free module ``F = sum_k S(-shift_k)`` is a dict ``{k: poly}``.
A module is ``coker(P: F_1 -> F_0)`` where each column of ``P`` is such an
element.  Pieces are computed on monomial bases and memoized per degree;
two threads computing the same piece produce equal objects, so the memo
needs no lock (a racing write just stores an identical value).
"""
from dataclasses import dataclass
from itertools import combinations_with_replacement, product

from .kernel.linalg import Echelon, SparseMatrix, kernel_of_columns
from .kernel.ring import GradedRing, _vadd, _vsub
from .lattice import (ConeRegion, beta_vertex, box, cone_contains, phi_a,
                      star)


class WindowTooSmall(RuntimeError):
    pass


class PreconditionFailed(ValueError):
    pass


# -- elements of free modules -------------------------------------------------

def elem_mul_mono(elem, mono):
    return {k: {_vadd(m, mono): c for m, c in poly.items()} for k, poly in elem.items()}


def elem_mul_poly(ring, elem, f):
    out = {}
    for k, poly in elem.items():
        p = ring.mul(poly, f)
        if p:
            out[k] = p
    return out


def elem_add(ring, a, b, scale=1):
    out = dict(a)
    for k, poly in b.items():
        p = ring.add(out.get(k, {}), poly, scale)
        if p:
            out[k] = p
        else:
            out.pop(k, None)
    return out


class FreeModule:
    """``sum_k S(-shift_k)``; the piece basis at n is ``(k, m)`` with deg m = n - shift_k."""

    def __init__(self, ring, shifts):
        self.ring = ring
        self.shifts = tuple(tuple(int(x) for x in s) for s in shifts)
        if any(len(s) != ring.q for s in self.shifts):
            raise ValueError("shift has wrong length")
        self._bases = {}

    @property
    def rank(self):
        return len(self.shifts)

    def add_generator(self, shift):
        self.shifts += (tuple(shift),)
        self._bases.clear()

    def basis(self, n):
        n = tuple(n)
        hit = self._bases.get(n)
        if hit is None:
            b = tuple((k, m) for k, s in enumerate(self.shifts)
                      for m in self.ring.monomial_basis(_vsub(n, s)))
            hit = (b, {x: i for i, x in enumerate(b)})
            self._bases[n] = hit
        return hit[0]

    def index(self, n):
        self.basis(n)
        return self._bases[tuple(n)][1]

    def dim(self, n):
        return len(self.basis(n))

    def vector(self, elem, n):
        idx = self.index(n)
        out = {}
        for k, poly in elem.items():
            for m, c in poly.items():
                out[idx[(k, m)]] = c
        return out

    def element(self, vec, n):
        b = self.basis(n)
        out = {}
        for i, c in vec.items():
            k, m = b[i]
            out.setdefault(k, {})[m] = c
        return out

    def degree_of(self, elem):
        degs = {_vadd(self.ring.degree(m), self.shifts[k]) for k, poly in elem.items() for m in poly}
        if len(degs) != 1:
            raise ValueError("element is not homogeneous" if degs else "zero element has no degree")
        return degs.pop()


# -- modules ------------------------------------------------------------------

class Piece:
    """The degree-n piece of a presented module: ambient basis modulo relations."""

    __slots__ = ("degree", "ambient", "index", "echelon", "free")

    def __init__(self, degree, ambient, index, echelon):
        self.degree = degree
        self.ambient = ambient
        self.index = index
        self.echelon = echelon
        self.free = [c for c in range(len(ambient)) if c not in echelon.rows]

    @property
    def dim(self):
        return len(self.free)

    @property
    def reps(self):
        return [self.ambient[c] for c in self.free]

    def coords(self, vec):
        return self.echelon.quotient_coords(vec, self.free)

    def is_zero(self, vec):
        return self.echelon.contains(vec)


class FGModule:
    """``coker(P)`` for a homogeneous matrix ``P`` given by its columns."""

    def __init__(self, ring, shifts, columns=(), name=None):
        self.ring = ring
        self.name = name
        self.free0 = FreeModule(ring, shifts)
        cols, rel_shifts = [], []
        for col in columns:
            col = {int(k): {tuple(m): ring.field(c) for m, c in p.items() if c}
                   for k, p in col.items()}
            col = {k: p for k, p in col.items() if p}
            if not col:
                continue
            if any(not 0 <= k < self.free0.rank for k in col):
                raise ValueError("relation refers to a missing generator")
            try:
                rel_shifts.append(self.free0.degree_of(col))
            except ValueError as exc:
                raise ValueError(f"relation {len(cols)} is not homogeneous") from exc
            cols.append(col)
        self.columns = tuple(cols)
        self.free1 = FreeModule(ring, rel_shifts)
        self._pieces = {}

    @property
    def shifts(self):
        return self.free0.shifts

    @property
    def rel_shifts(self):
        return self.free1.shifts

    @property
    def field(self):
        return self.ring.field

    def piece(self, n):
        n = tuple(n)
        hit = self._pieces.get(n)
        if hit is not None:
            return hit
        ambient = self.free0.basis(n)
        idx = self.free0.index(n)
        ech = Echelon(self.field)
        if ambient:
            for col, s in zip(self.columns, self.rel_shifts):
                for mono in self.ring.monomial_basis(_vsub(n, s)):
                    ech.add({idx[(k, _vadd(m, mono))]: c for k, p in col.items() for m, c in p.items()})
                    if len(ech) == len(ambient):
                        break
        piece = Piece(n, ambient, idx, ech)
        if len(self._pieces) < 100000:
            self._pieces[n] = piece
        return piece

    def dim(self, n):
        return self.piece(n).dim

    def coords(self, elem, n):
        """Coordinates of an element of F_0 in the chosen basis of M_n."""
        p = self.piece(n)
        return p.coords(self.free0.vector(elem, n))

    def generator(self, k):
        return {k: self.ring.one()}

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"FGModule{label}(rank={len(self.shifts)}, relations={len(self.columns)})"


def free_module(ring, shifts=None):
    return FGModule(ring, shifts if shifts is not None else [(0,) * ring.q])


def monomial_quotient(ring, generators, shift=None, name=None):
    """S/I (twisted so its generator sits in degree ``shift``) for a monomial ideal I."""
    shift = tuple(shift) if shift is not None else (0,) * ring.q
    cols = [{0: {tuple(g): 1}} for g in generators]
    return FGModule(ring, [shift], cols, name=name)


def graded_piece(M, n):
    p = M.piece(n)
    return p.dim, p.reps


def mult_map(M, f, n):
    ring = M.ring
    d = ring.poly_degree(f)
    src = M.piece(n)
    tgt_deg = _vadd(tuple(n), d)
    tgt = M.piece(tgt_deg)
    cols = []
    for k, m in src.reps:
        elem = elem_mul_poly(ring, {k: {m: 1}}, f)
        cols.append(tgt.coords(M.free0.vector(elem, tgt_deg)))
    return SparseMatrix.from_columns(tgt.dim, cols)


def twist(M, b):
    b = tuple(b)
    return FGModule(M.ring, [_vsub(s, b) for s in M.shifts], M.columns, name=M.name)


# -- Veronese transforms ------------------------------------------------------

def _require_matrix(ring):
    if ring.degree_matrix is None:
        raise ValueError("Veronese transforms need a ring with a block degree matrix")
    return ring.degree_matrix


class VeroneseView:
    """Lazy ``M^(a,b)``: piece n of the view is piece phi_a(n)+b of the base."""

    def __init__(self, base, a, b):
        self.base = base
        self.G = _require_matrix(base.ring)
        self.a = tuple(a)
        self.b = tuple(b)
        phi_a(self.G, self.a, (0,) * self.G.r)

    def base_degree(self, n):
        return _vadd(phi_a(self.G, self.a, n), self.b)

    def piece(self, n):
        return self.base.piece(self.base_degree(n))

    def dim(self, n):
        return self.piece(n).dim


def veronese_view(M, a, b):
    return VeroneseView(M, a, b)


def veronese_ring(ring, a):
    """S^(a) presented on one variable per monomial of degree phi_a(e_i).

    Returns the polynomial ring T (standard Z^r grading) and the list of
    S-monomials the variables of T map to.
    """
    G = _require_matrix(ring)
    r = G.r
    names, degrees, images, blocks = [], [], [], []
    for i in range(r):
        e = tuple(int(j == i) for j in range(r))
        mons = ring.monomial_basis(phi_a(G, a, e))
        blk = []
        for k, m in enumerate(mons):
            blk.append(len(names))
            names.append(f"u{i + 1}_{k + 1}" if r > 1 else f"u{k + 1}")
            degrees.append(e)
            images.append(m)
        blocks.append(tuple(blk))
    T = GradedRing(names, degrees, blocks=blocks, field=ring.field)
    return T, images


def _image_monomial(images, umono):
    out = None
    for e, m in zip(umono, images):
        if e:
            v = tuple(e * x for x in m)
            out = v if out is None else _vadd(out, v)
    return out if out is not None else (0,) * len(images[0])


def degreewise_generators(free, degrees, subspace, base=None):
    """Minimal generators of a submodule U of a free module, degree by degree.

    ``subspace(n)`` spans U_n (vectors on ``free.basis(n)``); ``base(n)``
    optionally spans a subspace B_n contained in U_n that generators are
    taken modulo.  Degrees must come in an order compatible with
    divisibility (e.g. increasing positivity weight).
    """
    ring = free.ring
    found = []
    for n in degrees:
        vecs = subspace(n)
        if not vecs:
            continue
        ech = Echelon(ring.field)
        if base is not None:
            for v in base(n):
                ech.add(v)
        for d, elem in found:
            for mono in ring.monomial_basis(_vsub(n, d)):
                ech.add(free.vector(elem_mul_mono(elem, mono), n))
        for v in vecs:
            if ech.add(v) is None:
                found.append((n, free.element(v, n)))
    return found


def veronese_presentation(M, a, b, window=4, margin=2):
    """Finite presentation of ``M^(a,b)`` over the ring of ``veronese_ring``.

    Generators and relations are searched on the box [-window, window]^r;
    the result is certified by comparing piece dimensions with the lazy
    view on the box enlarged by ``margin``.
    """
    a, b = tuple(a), tuple(b)
    S = M.ring
    G = _require_matrix(S)
    r = G.r
    if a == (1,) * r and not any(b):
        return M
    view = VeroneseView(M, a, b)
    T, images = veronese_ring(S, a)
    degrees = sorted(box((-window,) * r, (window,) * r), key=lambda n: (sum(n), n))

    def image_vec(gen, umono, n):
        d = view.base_degree(n)
        elem = elem_mul_mono(gen, _image_monomial(images, umono))
        return M.coords(elem, d)

    # generators: coset representatives of M_{phi_a(n)+b} not reached from below
    gens = []
    for n in degrees:
        piece = view.piece(n)
        if not piece.dim:
            continue
        ech = Echelon(S.field)
        for dg, g in gens:
            for um in T.monomial_basis(_vsub(n, dg)):
                ech.add(image_vec(g, um, n))
        for k, m in piece.reps:
            g = {k: {m: 1}}
            if ech.add(image_vec(g, (0,) * T.nvars, n)) is None:
                gens.append((n, g))
    E0 = FreeModule(T, [d for d, _ in gens])

    def kernel_at(n):
        cols = [image_vec(gens[k][1], um, n) for k, um in E0.basis(n)]
        return kernel_of_columns(cols, S.field) if cols else []

    rels = degreewise_generators(E0, degrees, kernel_at)
    N = FGModule(T, E0.shifts, [elem for _, elem in rels], name=M.name)
    bigger = box((-window - margin,) * r, (window + margin,) * r)
    for n in bigger:
        if N.dim(n) != view.dim(n):
            raise WindowTooSmall(f"presentation disagrees with the view at {n} (window {window})")
    N.generator_images = [g for _, g in gens]
    return N


# -- nilpotency and vanishing ---------------------------------------------------

@dataclass(frozen=True)
class Nilpotent:
    t: int


@dataclass(frozen=True)
class NotNilpotentWithinCap:
    cap: int


def is_nilpotent_action(M, g, power_cap=16, window=None):
    """Smallest t <= power_cap with g^t M = 0, checked on every generator."""
    ring = M.ring
    d = ring.poly_degree(g)
    if ring.weight(d) == 0:
        raise ValueError("g must have positive weight")
    one = ring.one()
    pending = [k for k in range(len(M.shifts))
               if not M.piece(M.shifts[k]).is_zero(M.free0.vector({k: one}, M.shifts[k]))]
    if not pending:
        return Nilpotent(0)
    power = ring.one()
    for t in range(1, power_cap + 1):
        power = ring.mul(power, g)
        pending = [k for k in pending
                   if not M.piece(_vadd(M.shifts[k], tuple(t * x for x in d))).is_zero(
                       M.free0.vector({k: power}, _vadd(M.shifts[k], tuple(t * x for x in d))))]
        if not pending:
            return Nilpotent(t)
    return NotNilpotentWithinCap(power_cap)


def irrelevant_power_monomials(ring, u):
    """Monomial generators of S_++^u: u variables (with repetition) from each block."""
    if ring.blocks is None:
        raise ValueError("the irrelevant ideal needs a block structure")
    per_block = [list(combinations_with_replacement(blk, u)) for blk in ring.blocks]
    out = []
    for choice in product(*per_block):
        exps = [0] * ring.nvars
        for grp in choice:
            for j in grp:
                exps[j] += 1
        out.append(tuple(exps))
    return out


def killed_by_irrelevant_power(M, u):
    ring = M.ring
    for mono in irrelevant_power_monomials(ring, u):
        d = ring.degree(mono)
        for k, s in enumerate(M.shifts):
            n = _vadd(s, d)
            if not M.piece(n).is_zero(M.free0.vector({k: {mono: 1}}, n)):
                return False
    return True


@dataclass
class VanishingVerdict:
    holds: bool
    window: tuple
    checked: int
    counterexample: tuple = None


def _vertex_from_shifts(M, u):
    G = M.ring.degree_matrix
    alpha = tuple(max([0] + [s[i] for s in M.shifts]) for i in range(G.r))
    return beta_vertex(u, alpha, G)


def vanishing_vertex_check(M, u, window=6):
    """Vertex beta with M_n = 0 whenever n* lies in C_beta, confirmed on [-window, window]^r."""
    if not killed_by_irrelevant_power(M, u):
        raise PreconditionFailed(f"S_++^{u} does not annihilate the module")
    G = M.ring.degree_matrix
    beta = _vertex_from_shifts(M, u)
    cone = ConeRegion(beta, G)
    checked = 0
    for n in box((-window,) * G.r, (window,) * G.r):
        if not cone_contains(cone, star(n)):
            continue
        checked += 1
        if M.dim(n):
            return beta, VanishingVerdict(False, (-window, window), checked, n)
    return beta, VanishingVerdict(True, (-window, window), checked)


def quotient_vertex_check(M, sub_elements, u, window=6):
    """For N = <sub_elements> in M with S_++^u (M/N) = 0: M_n is inside N_n on the cone.

    The inclusion is checked as a rank equality between the image of N_n
    and M_n, computed independently of the quotient presentation.
    """
    Q = FGModule(M.ring, M.shifts, list(M.columns) + list(sub_elements))
    if not killed_by_irrelevant_power(Q, u):
        raise PreconditionFailed(f"S_++^{u} does not annihilate the quotient")
    ring, G = M.ring, M.ring.degree_matrix
    beta = _vertex_from_shifts(Q, u)
    cone = ConeRegion(beta, G)
    sub_degrees = [M.free0.degree_of(e) for e in sub_elements]
    checked = 0
    for n in box((-window,) * G.r, (window,) * G.r):
        if not cone_contains(cone, star(n)):
            continue
        checked += 1
        piece = M.piece(n)
        if not piece.dim:
            continue
        ech = Echelon(ring.field)
        for e, d in zip(sub_elements, sub_degrees):
            for mono in ring.monomial_basis(_vsub(n, d)):
                ech.add(piece.coords(M.free0.vector(elem_mul_mono(e, mono), n)))
        if len(ech) != piece.dim:
            return beta, VanishingVerdict(False, (-window, window), checked, n)
    return beta, VanishingVerdict(True, (-window, window), checked)


# -- fine lifts of monomial modules ----------------------------------------------

@dataclass
class FineLift:
    """A module over the Z^mu-graded ring whose coarsening, shifted by ``offset``, is M."""
    module: FGModule
    offset: tuple
    coarse: GradedRing

    def coarse_degree(self, e):
        return _vadd(self.coarse.degree(e), self.offset)


def _fine_root(ring, target):
    for lift in range(4):
        mons = ring.monomial_basis(_vadd(target, tuple(lift * x for x in ring.sigma)))
        if mons:
            return tuple(x - lift for x in mons[0])
    return None


def fine_lift(M):
    """Lift a module whose relations are monomial vectors to the fine grading.

    Returns None when some relation entry has two terms or the generator
    degrees cannot be realized.
    """
    ring = M.ring
    mu = ring.nvars
    for col in M.columns:
        if any(len(p) != 1 for p in col.values()):
            return None
    nk = len(M.shifts)
    rel = [None] * nk   # fine degree relative to the component root
    root_of = [None] * nk
    adj = [[] for _ in range(nk)]
    for col in M.columns:
        items = [(k, next(iter(p))) for k, p in col.items()]
        k0, m0 = items[0]
        for k, m in items[1:]:
            adj[k0].append((k, _vsub(m0, m)))
            adj[k].append((k0, _vsub(m, m0)))
    roots = []
    for start in range(nk):
        if rel[start] is not None:
            continue
        rel[start] = (0,) * mu
        root_of[start] = start
        roots.append(start)
        stack = [start]
        while stack:
            k = stack.pop()
            for k2, delta in adj[k]:
                want = _vadd(rel[k], delta)
                if rel[k2] is None:
                    rel[k2] = want
                    root_of[k2] = start
                    stack.append(k2)
                elif rel[k2] != want:
                    return None
    offset = None
    root_fine = {}
    for strategy in (0, 1):
        offset = (0,) * ring.q if strategy == 0 or not roots else M.shifts[roots[0]]
        root_fine = {}
        for rt in roots:
            e = _fine_root(ring, _vsub(M.shifts[rt], offset))
            if e is None:
                break
            root_fine[rt] = e
        if len(root_fine) == len(roots):
            break
    else:
        return None
    fine_shifts = [_vadd(root_fine[root_of[k]], rel[k]) for k in range(nk)]
    S_fine = ring.fine_ring()
    fine = FGModule(S_fine, fine_shifts, M.columns, name=M.name)
    lift = FineLift(fine, offset, ring)
    for k in range(nk):
        assert lift.coarse_degree(fine_shifts[k]) == M.shifts[k]
    return lift


def module_from_monomial_ideals(ring, blocks_of_gens, shifts):
    """Direct sum of S/I_k(-shift_k) for monomial ideals I_k."""
    cols = []
    for k, gens in enumerate(blocks_of_gens):
        cols.extend({k: {tuple(g): 1}} for g in gens)
    return FGModule(ring, shifts, cols)
