"""Reader for ring / module / ideal description files.

The format is line based::

    # comments start with '#'
    [ring]
    field = q                  # optional: q or p:<prime>
    var x = 1 0                # one line per variable: name and degree
    var y = 0 1
    blocks = x | y             # optional block partition

    [module]                   # any number of modules
    name = S/(x^2,y^2)
    shifts = 0 0               # generator degrees separated by ';' (default: one generator at 0)
    row = x^2, y^2             # row k: entries of the presentation matrix on generator k

    [ideal]                    # any number of ideals (Rees input)
    name = I
    gens = 4 0; 3 1; 1 3; 0 4

An empty [module] (no rows) is a free module.  Every problem is reported
as ``ParseError`` with the 1-based line number.
"""
from dataclasses import dataclass, field
from fractions import Fraction

from ..kernel.field import QQ, field_from_spec
from ..kernel.ring import GradedRing, NonPositiveGrading
from ..modcat import FGModule
from ..rees import MonomialIdeal


class ParseError(ValueError):
    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


# -- polynomials ----------------------------------------------------------------------

class _Poly:
    """Recursive-descent parser for +, -, *, ^, integer and rational literals and variables."""

    def __init__(self, text, ring, line):
        self.text = text
        self.ring = ring
        self.line = line
        self.pos = 0
        self.index = {n: j for j, n in enumerate(ring.names)}

    def fail(self, reason):
        raise ParseError(self.line, f"{reason} in {self.text!r} at column {self.pos + 1}")

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self):
        out = self.expr()
        if self.peek():
            self.fail(f"unexpected {self.peek()!r}")
        return out

    def expr(self):
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        acc = self.scale(self.term(), sign)
        while self.peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
            acc = self.ring.add(acc, self.term(), sign)
        return acc

    def term(self):
        acc = self.power()
        while self.peek() == "*":
            self.pos += 1
            acc = self.ring.mul(acc, self.power())
        return acc

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.peek()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.fail("expected a nonnegative integer exponent")
            base = self.ring.power(base, int(self.text[start:self.pos]))
        return base

    def atom(self):
        c = self.peek()
        if c == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                self.fail("missing ')'")
            self.pos += 1
            return inner
        if c.isdigit():
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] == "/"):
                self.pos += 1
            try:
                value = Fraction(self.text[start:self.pos])
            except (ValueError, ZeroDivisionError):
                self.fail("bad number")
            return self.scale(self.ring.one(), value)
        if c.isalpha() or c == "_":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            name = self.text[start:self.pos]
            if name not in self.index:
                self.pos = start
                self.fail(f"unknown variable {name!r}")
            return self.ring.variable(self.index[name])
        self.fail("expected a number, variable or '('" if c else "unexpected end of input")

    def scale(self, poly, c):
        F = self.ring.field
        out = {m: F.norm(F(v * c)) for m, v in poly.items()}
        return {m: v for m, v in out.items() if v}


def parse_polynomial(text, ring, line=0):
    return _Poly(text, ring, line).parse()


# -- sections ---------------------------------------------------------------------------

@dataclass
class Parsed:
    ring: GradedRing = None
    modules: list = field(default_factory=list)
    ideals: list = field(default_factory=list)
    ideal_names: list = field(default_factory=list)


def _ints(text, line, what):
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise ParseError(line, f"{what} must be integers, got {text!r}") from None


def _sections(lines):
    """(header, header line, [(line, key, value)]) for every section, in file order."""
    out, cur = [], None
    for no, raw in enumerate(lines, 1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        if text.startswith("["):
            if not text.endswith("]"):
                raise ParseError(no, "unterminated section header")
            name = text[1:-1].strip().lower()
            if name not in ("ring", "module", "ideal"):
                raise ParseError(no, f"unknown section [{name}]")
            cur = (name, no, [])
            out.append(cur)
            continue
        if cur is None:
            raise ParseError(no, "entry before any section")
        if "=" not in text:
            raise ParseError(no, f"expected 'key = value', got {text!r}")
        key, value = (s.strip() for s in text.split("=", 1))
        cur[2].append((no, key, value))
    return out


def _ring(header_line, entries, field_override):
    names, degrees, blocks, fspec, rank = [], [], None, None, None
    for no, key, value in entries:
        parts = key.split()
        if parts[0] == "var":
            if len(parts) != 2:
                raise ParseError(no, "write variables as 'var <name> = <degree>'")
            if not (parts[1][0].isalpha() or parts[1][0] == "_") or not parts[1].replace("_", "").isalnum():
                raise ParseError(no, f"bad variable name {parts[1]!r}")
            names.append(parts[1])
            degrees.append((no, _ints(value, no, "degree entries")))
        elif key == "rank":
            rank = (no, _ints(value, no, "rank"))
        elif key == "blocks":
            blocks = (no, [b.split() for b in value.split("|")])
        elif key == "field":
            fspec = (no, value)
        else:
            raise ParseError(no, f"unknown ring key {key!r}")
    if not names:
        raise ParseError(header_line, "ring has no variables")
    q = len(degrees[0][1]) if rank is None else (rank[1][0] if len(rank[1]) == 1 else -1)
    if rank is not None and (q < 1):
        raise ParseError(rank[0], "rank must be one positive integer")
    for no, d in degrees:
        if len(d) != q:
            raise ParseError(no, f"degree vector has length {len(d)}, expected {q}")
    F = QQ
    spec = field_override or (fspec[1] if fspec else None)
    if spec:
        try:
            F = field_from_spec(spec)
        except ValueError as exc:
            raise ParseError(fspec[0] if fspec and not field_override else header_line, str(exc)) from None
    block_idx = None
    if blocks is not None:
        idx = {n: j for j, n in enumerate(names)}
        try:
            block_idx = [[idx[n] for n in b] for b in blocks[1]]
        except KeyError as exc:
            raise ParseError(blocks[0], f"unknown variable {exc.args[0]!r} in blocks") from None
    try:
        return GradedRing(names, [d for _, d in degrees], blocks=block_idx, field=F)
    except NonPositiveGrading as exc:
        raise ParseError(header_line, f"grading is not positive: {exc}") from None
    except ValueError as exc:
        raise ParseError(blocks[0] if blocks else header_line, str(exc)) from None


def _module(ring, header_line, entries):
    if ring is None:
        raise ParseError(header_line, "[module] needs a [ring] section before it")
    name, shifts, rows = None, None, []
    for no, key, value in entries:
        if key == "name":
            name = value
        elif key == "shifts":
            shifts = []
            for part in value.split(";"):
                d = _ints(part, no, "shift entries")
                if len(d) != ring.q:
                    raise ParseError(no, f"shift {d} has length {len(d)}, expected {ring.q}")
                shifts.append(d)
        elif key == "row":
            cells = [c.strip() for c in value.split(",")]
            rows.append((no, [parse_polynomial(c, ring, no) if c else {} for c in cells]))
        else:
            raise ParseError(no, f"unknown module key {key!r}")
    if shifts is None:
        shifts = [(0,) * ring.q] * max(1, len(rows))
    if rows and len(rows) != len(shifts):
        raise ParseError(rows[0][0], f"{len(rows)} rows for {len(shifts)} generators")
    ncols = {len(cells) for _, cells in rows}
    if len(ncols) > 1:
        raise ParseError(rows[0][0], "rows have different lengths")
    columns = []
    for l in range(ncols.pop() if ncols else 0):
        col = {k: cells[l] for k, (_, cells) in enumerate(rows) if cells[l]}
        degs = set()
        for k, poly in col.items():
            for m in poly:
                degs.add(tuple(x + y for x, y in zip(ring.degree(m), shifts[k])))
        if len(degs) > 1:
            raise ParseError(rows[0][0], f"column {l + 1} is not homogeneous")
        columns.append(col)
    return FGModule(ring, shifts, columns, name=name)


def _ideal(header_line, entries):
    name, gens = None, None
    for no, key, value in entries:
        if key == "name":
            name = value
        elif key == "gens":
            gens = [(_ints(part, no, "exponents"), no) for part in value.split(";") if part.strip()]
        else:
            raise ParseError(no, f"unknown ideal key {key!r}")
    if not gens:
        raise ParseError(header_line, "ideal has no generators")
    m = len(gens[0][0])
    for g, no in gens:
        if len(g) != m:
            raise ParseError(no, f"exponent vector {g} has length {len(g)}, expected {m}")
        if min(g) < 0:
            raise ParseError(no, f"exponent vector {g} has a negative entry")
    return name, MonomialIdeal([g for g, _ in gens], m)


def parse_text(text, field_override=None):
    out = Parsed()
    for kind, no, entries in _sections(text.splitlines()):
        if kind == "ring":
            if out.ring is not None:
                raise ParseError(no, "only one [ring] section is allowed")
            out.ring = _ring(no, entries, field_override)
        elif kind == "module":
            out.modules.append(_module(out.ring, no, entries))
        else:
            name, I = _ideal(no, entries)
            if out.ideals and I.nvars != out.ideals[0].nvars:
                raise ParseError(no, "all ideals must have the same number of variables")
            out.ideals.append(I)
            out.ideal_names.append(name)
    return out


def parse_input(path, field_override=None):
    with open(path, encoding="utf-8") as fh:
        return parse_text(fh.read(), field_override)


# -- writing modules back out -------------------------------------------------------------

def format_module(M):
    """Description file text for a module; ``parse_text`` reads it back."""
    ring = M.ring
    lines = ["[ring]"]
    if ring.field != QQ:
        lines.append(f"field = {ring.field.name}")
    for name, d in zip(ring.names, ring.degrees):
        lines.append(f"var {name} = {' '.join(map(str, d))}")
    if ring.blocks is not None:
        lines.append("blocks = " + " | ".join(" ".join(ring.names[j] for j in b) for b in ring.blocks))
    lines.append("")
    lines.append("[module]")
    if M.name:
        lines.append(f"name = {M.name}")
    lines.append("shifts = " + "; ".join(" ".join(map(str, s)) for s in M.shifts))
    for k in range(len(M.shifts)):
        if M.columns:
            cells = [ring.format_poly(col[k]) if k in col else "" for col in M.columns]
            lines.append("row = " + ", ".join(cells))
    return "\n".join(lines) + "\n"
