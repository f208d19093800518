"""Sparse exact linear algebra over a field from ``field.py``.

Vectors are dicts ``{index: value}`` with zeros omitted.  The pivot rule is
fixed everywhere (smallest column index first, rows taken in insertion
order) so every result is reproducible bit for bit.
"""
from .field import QQ


class NoSolution(ArithmeticError):
    """Raised by :func:`solve_or_reject` when ``A x = b`` is inconsistent."""


class SparseMatrix:
    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows, ncols, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i},{j}) outside {nrows}x{ncols}")
            if v:
                self.entries[(i, j)] = v

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), ncols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    @classmethod
    def from_columns(cls, nrows, columns):
        ent = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    ent[(i, j)] = v
        return cls(nrows, len(columns), ent)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def rows(self):
        out = [dict() for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def columns(self):
        out = [dict() for _ in range(self.ncols)]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    def to_dense(self):
        d = [[0] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            d[i][j] = v
        return d

    def transpose(self):
        return SparseMatrix(self.ncols, self.nrows, {(j, i): v for (i, j), v in self.entries.items()})

    def apply(self, vec, F=QQ):
        out = {}
        for (i, j), v in self.entries.items():
            x = vec.get(j) if isinstance(vec, dict) else vec[j]
            if x:
                out[i] = F.norm(out.get(i, 0) + v * x)
        return {i: v for i, v in out.items() if v}

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        cols = [self.apply(c) for c in other.columns()]
        return SparseMatrix.from_columns(self.nrows, cols)

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.entries == other.entries)

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={len(self.entries)})"


def _axpy(target, factor, row, F):
    # target -= factor * row, in place
    for c, v in row.items():
        nv = F.norm(target.get(c, 0) - factor * v)
        if nv:
            target[c] = nv
        else:
            target.pop(c, None)


class Echelon:
    """Incrementally maintained reduced row echelon basis of a subspace.

    With ``track=True`` every stored row remembers which inserted vectors
    it combines, which is what kernels and solves need.
    """

    def __init__(self, F=QQ, track=False):
        self.F = F
        self.track = track
        self.rows = {}     # pivot -> row (pivot entry 1), mutually reduced
        self.combos = {}   # pivot -> {insert index: coeff}
        self.count = 0

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self):
        return sorted(self.rows)

    def reduce(self, vec, combo=None):
        F = self.F
        v = dict(vec)
        for p in [c for c in v if c in self.rows]:
            f = v.get(p)
            if f:
                _axpy(v, f, self.rows[p], F)
                if combo is not None:
                    _axpy(combo, f, self.combos[p], F)
        return v

    def contains(self, vec):
        return not self.reduce(vec)

    def add(self, vec):
        """Insert a vector; return its remainder-free combination when dependent.

        Returns ``None`` if the vector enlarged the span, else (when tracking)
        the dependency ``{insert index: coeff}`` summing to zero.
        """
        F = self.F
        idx = self.count
        self.count += 1
        combo = {idx: 1} if self.track else None
        v = self.reduce(vec, combo)
        if not v:
            return combo if self.track else {}
        p = min(v)
        s = F.inv(v[p])
        v = {c: F.norm(x * s) for c, x in v.items()}
        if combo is not None:
            combo = {c: F.norm(x * s) for c, x in combo.items()}
        for q, row in self.rows.items():
            f = row.get(p)
            if f:
                _axpy(row, f, v, F)
                if self.track:
                    _axpy(self.combos[q], f, combo, F)
        self.rows[p] = v
        if self.track:
            self.combos[p] = combo
        return None

    def quotient_coords(self, vec, free):
        """Coordinates of ``vec`` modulo the span, on the non-pivot positions ``free``."""
        v = self.reduce(vec)
        return {k: v[c] for k, c in enumerate(free) if c in v}


def rref_rows(rows, F=QQ):
    ech = Echelon(F)
    for r in rows:
        ech.add(r)
    return ech


def rank(A, F=QQ):
    return len(rref_rows(A.rows(), F))


def _normalize_leading(vec, F):
    if not vec:
        return vec
    lead = vec[min(vec)]
    s = F.inv(lead)
    return {c: F.norm(x * s) for c, x in vec.items()}


def kernel_basis(A, F=QQ):
    """Basis of ``{x : A x = 0}``; each vector has leading entry 1."""
    ech = rref_rows(A.rows(), F)
    pivots = set(ech.rows)
    basis = []
    for f in range(A.ncols):
        if f in pivots:
            continue
        vec = {f: 1}
        for p, row in ech.rows.items():
            x = row.get(f)
            if x:
                vec[p] = F.norm(-x)
        basis.append(_normalize_leading(vec, F))
    return basis


def kernel_of_columns(columns, F=QQ):
    """Dependencies among a list of vectors, one per dependent vector."""
    ech = Echelon(F, track=True)
    deps = []
    for col in columns:
        d = ech.add(col)
        if d is not None:
            deps.append(d)
    return deps


def solve_or_reject(A, b, F=QQ):
    """Some exact solution of ``A x = b`` (free variables set to 0)."""
    if len(b) != A.nrows:
        raise ValueError("dimension mismatch")
    aug = A.rows()
    n = A.ncols
    for i, r in enumerate(aug):
        if b[i]:
            r[n] = b[i]
    ech = rref_rows(aug, F)
    if n in ech.rows:
        raise NoSolution("inconsistent system")
    x = [0] * n
    for p, row in ech.rows.items():
        x[p] = row.get(n, 0)
    return x
