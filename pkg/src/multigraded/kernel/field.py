"""Exact coefficient fields.

Elements are plain Python numbers: ``int``/``Fraction`` over Q, reduced
``int`` over F_p.  Linear algebra code calls ``norm`` after every ring
operation and ``inv`` for division, so the same elimination loop serves
both fields.
"""
from fractions import Fraction


class RationalField:
    name = "q"
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        return x

    @staticmethod
    def norm(x):
        # integral fractions fall back to int so unit-coefficient work stays on the fast path
        if type(x) is Fraction and x.denominator == 1:
            return x.numerator
        return x

    @staticmethod
    def inv(x):
        if not x:
            raise ZeroDivisionError("division by zero in Q")
        if isinstance(x, int):
            return x if x in (1, -1) else Fraction(1, x)
        return RationalField.norm(1 / x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    def __init__(self, p):
        p = int(p)
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"p:{p}"

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return x % self.p

    def norm(self, x):
        return x % self.p

    def inv(self, x):
        x %= self.p
        if not x:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return pow(x, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"F_{self.p}"


QQ = RationalField()


def field_from_spec(spec):
    """``"q"`` or ``"p:<prime>"``; large primes are required for the speed switch."""
    spec = spec.strip().lower()
    if spec in ("q", "qq", "rational"):
        return QQ
    if spec.startswith("p:"):
        p = int(spec[2:])
        if p <= 2 ** 15:
            raise ValueError("prime fields must have p > 2^15")
        return PrimeField(p)
    raise ValueError(f"unknown field {spec!r}")
