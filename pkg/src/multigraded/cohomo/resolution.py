"""Minimal multigraded free resolutions by degreewise linear algebra.

Two drivers share the same kernel step.  Over a ring where every variable
has its own unit degree (the fine grading) a kernel can only acquire new
generators at joins of the generator degrees of the free module it lives
in, so those finitely many degrees are searched and the result is exact.
Otherwise degrees are swept in increasing positivity weight, all
homological steps at once, until a band of weights yields nothing new.
"""
from ..kernel.linalg import Echelon, kernel_of_columns
from ..kernel.ring import _vadd, _vsub
from ..modcat import (FreeModule, WindowTooSmall, degreewise_generators, elem_add,
                      elem_mul_mono, elem_mul_poly, fine_lift)


class Resolution:
    """F_p -> ... -> F_0 -> M with ``maps[j]`` the columns of d_j (``maps[0]`` unused).

    ``augmentation[i]`` is the element of the module's own generator space
    that the i-th basis vector of F_0 maps to.
    """

    def __init__(self, module, frees, maps, augmentation, exact, weight_reached=None):
        self.module = module
        self.ring = module.ring
        self.frees = frees
        self.maps = maps
        self.augmentation = augmentation
        self.exact = exact
        self.weight_reached = weight_reached

    @property
    def length(self):
        return len(self.frees) - 1

    @property
    def proj_dim(self):
        if not self.frees or not self.frees[0].rank:
            return -1
        return self.length

    def betti_degrees(self):
        return [sorted(F.shifts) for F in self.frees]

    def betti_numbers(self):
        return [F.rank for F in self.frees]

    def euler_dim(self, n):
        return sum((-1) ** j * F.dim(n) for j, F in enumerate(self.frees))

    def verify(self, degrees=None):
        """Check d.d = 0, minimality, the length bound and Euler-Hilbert sums."""
        ring, M = self.ring, self.module
        if self.length > ring.nvars:
            raise AssertionError(f"resolution longer than {ring.nvars}")
        for j in range(1, len(self.frees)):
            for col in self.maps[j]:
                for poly in col.values():
                    if (0,) * ring.nvars in poly:
                        raise AssertionError(f"unit entry in d_{j}: resolution is not minimal")
        for j in range(1, len(self.frees)):
            for col in self.maps[j]:
                acc = {}
                below = self.augmentation if j == 1 else self.maps[j - 1]
                for k, poly in col.items():
                    acc = elem_add(ring, acc, elem_mul_poly(ring, below[k], poly))
                if j == 1:
                    if acc:
                        n = M.free0.degree_of(acc)
                        if M.coords(acc, n):
                            raise AssertionError("d_1 does not land in the relations")
                elif acc:
                    raise AssertionError(f"d_{j - 1} d_{j} != 0")
        if degrees is None:
            degrees = self.default_check_degrees()
        for n in degrees:
            if self.euler_dim(n) != M.dim(n):
                raise AssertionError(f"Euler-Hilbert sum fails at {n}")
        return True

    def default_check_degrees(self, extra=1):
        """All degrees of F_0 with weight up to the largest Betti weight plus ``extra`` steps."""
        ring = self.ring
        top = max((ring.weight(s) for F in self.frees for s in F.shifts), default=0)
        top += extra * max(ring.weight(d) for d in ring.degrees)
        out = set()
        for s in self.frees[0].shifts if self.frees else ():
            ws = ring.weight(s)
            for w in range(0, top - ws + 1):
                out.update(_vadd(s, d) for d in ring.degrees_of_weight(w))
        return sorted(out, key=lambda n: (ring.weight(n), n))


# -- shared steps ----------------------------------------------------------------

def minimal_generator_indices(M):
    """Indices of a minimal generating subset of the presentation's generators."""
    ring = M.ring
    chosen = []
    for d in sorted(set(M.shifts), key=lambda s: (ring.weight(s), s)):
        piece = M.piece(d)
        ech = Echelon(ring.field)
        for k in chosen:
            for mono in ring.monomial_basis(_vsub(d, M.shifts[k])):
                ech.add(piece.coords(M.free0.vector({k: {mono: 1}}, d)))
        for k, s in enumerate(M.shifts):
            if s == d and ech.add(piece.coords(M.free0.vector({k: ring.one()}, d))) is None:
                chosen.append(k)
    return sorted(chosen)


def _augmentation_kernel(M, F0, gens):
    field = M.ring.field

    def kernel_at(n):
        if not F0.dim(n):
            return []
        piece = M.piece(n)
        if not piece.dim:
            return [{i: 1} for i in range(F0.dim(n))]
        cols = [piece.coords(M.free0.vector(elem_mul_mono(gens[k], mono), n))
                for k, mono in F0.basis(n)]
        return kernel_of_columns(cols, field)
    return kernel_at


def _map_kernel(F_src, F_tgt, columns, field):
    def kernel_at(n):
        basis = F_src.basis(n)
        if not basis:
            return []
        cols = [F_tgt.vector(elem_mul_mono(columns[k], mono), n) for k, mono in basis]
        return kernel_of_columns(cols, field)
    return kernel_at


def join_closure(points, limit=200000):
    closed = set()
    for p in points:
        p = tuple(p)
        new = {p}
        for c in closed:
            new.add(tuple(max(x, y) for x, y in zip(c, p)))
        closed |= new
        if len(closed) > limit:
            raise WindowTooSmall("join closure too large for the exact search")
    return closed


# -- exact driver for the fine grading --------------------------------------------

def _resolve_fine(M):
    ring = M.ring
    field = ring.field
    order = lambda n: (ring.weight(n), n)
    sel = minimal_generator_indices(M)
    gens = [{k: ring.one()} for k in sel]
    F0 = FreeModule(ring, [M.shifts[k] for k in sel])
    frees, maps = [F0], [None]
    cand = join_closure(list(F0.shifts) + list(M.shifts) + list(M.rel_shifts))
    found = degreewise_generators(F0, sorted(cand, key=order), _augmentation_kernel(M, F0, gens))
    while found:
        F = FreeModule(ring, [d for d, _ in found])
        cols = [e for _, e in found]
        frees.append(F)
        maps.append(cols)
        if len(frees) - 1 > ring.nvars:
            raise AssertionError("syzygy chain exceeds the number of variables")
        cand = join_closure(F.shifts)
        found = degreewise_generators(F, sorted(cand, key=order), _map_kernel(F, frees[-2], cols, field))
    return Resolution(M, frees, maps, gens, exact=True)


# -- weight sweep for everything else ---------------------------------------------------

def _resolve_sweep(M, min_weight=None, max_weight=400, slack=None):
    ring = M.ring
    field = ring.field
    sel = minimal_generator_indices(M)
    gens = [{k: ring.one()} for k in sel]
    F0 = FreeModule(ring, [M.shifts[k] for k in sel])
    frees, maps, found = [F0], [None], [[]]
    if not F0.rank:
        return Resolution(M, frees, maps, gens, exact=True, weight_reached=0)
    shift_w = [ring.weight(s) for s in F0.shifts]
    var_w = max(ring.weight(d) for d in ring.degrees)
    rel_w = [ring.weight(s) for s in M.rel_shifts]
    if slack is None:
        slack = 2 * var_w
    # the band starts after the last presentation degree, so relations far above the generators are reached
    last_new = max(rel_w + shift_w)
    if min_weight is not None:
        last_new = max(last_new, min_weight - slack)
    aug_kernel = _augmentation_kernel(M, F0, gens)
    w = min(shift_w)
    while w <= last_new + slack:
        if w > max_weight:
            raise WindowTooSmall(f"no stable resolution below weight {max_weight}")
        level = set()
        for s, ws in zip(F0.shifts, shift_w):
            level.update(_vadd(s, d) for d in ring.degrees_of_weight(w - ws))
        for n in sorted(level):
            for j in range(len(frees)):
                F = frees[j]
                if not F.dim(n):
                    break
                if j == 0:
                    vecs = aug_kernel(n)
                else:
                    vecs = _map_kernel(F, frees[j - 1], maps[j], field)(n)
                if not vecs:
                    continue
                ech = Echelon(field)
                for d, elem in found[j]:
                    for mono in ring.monomial_basis(_vsub(n, d)):
                        ech.add(F.vector(elem_mul_mono(elem, mono), n))
                for v in vecs:
                    if ech.add(v) is None:
                        elem = F.element(v, n)
                        found[j].append((n, elem))
                        if j + 1 == len(frees):
                            if j + 1 > ring.nvars:
                                raise AssertionError("syzygy chain exceeds the number of variables")
                            frees.append(FreeModule(ring, []))
                            maps.append([])
                            found.append([])
                        frees[j + 1].add_generator(n)
                        maps[j + 1].append(elem)
                        last_new = max(last_new, w)
        w += 1
    return Resolution(M, frees, maps, gens, exact=False, weight_reached=w - 1)


def _coarsen(res_fine, M, lift):
    ring = M.ring
    frees = [FreeModule(ring, [lift.coarse_degree(s) for s in F.shifts]) for F in res_fine.frees]
    return Resolution(M, frees, res_fine.maps, res_fine.augmentation, exact=True)


def fine_resolution(M):
    """Resolution of the fine lift (or None when M has no fine lift) and the lift."""
    cached = getattr(M, "_fine_res", None)
    if cached is not None:
        return cached
    if M.ring.is_fine():
        out = (_resolve_fine(M), None)
    else:
        lift = fine_lift(M)
        out = (_resolve_fine(lift.module), lift) if lift is not None else (None, None)
    M._fine_res = out
    return out


def free_resolution(M, window=None):
    """Minimal free resolution of M.

    ``window`` is a weight up to which the sweep driver searches at least;
    it is ignored when the exact fine route applies.
    """
    key = ("res", window)
    cache = M.__dict__.setdefault("_res_cache", {})
    if key in cache:
        return cache[key]
    res_fine, lift = fine_resolution(M)
    if res_fine is not None:
        res = res_fine if lift is None else _coarsen(res_fine, M, lift)
    else:
        res = _resolve_sweep(M, min_weight=window)
    cache[key] = res
    return res


def depth_ab(M, window=None):
    """mu - projdim (Auslander-Buchsbaum); the zero module gets mu + 1."""
    res = free_resolution(M, window)
    mu = M.ring.nvars
    if res.proj_dim < 0:
        return mu + 1
    return mu - res.proj_dim
