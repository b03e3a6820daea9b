"""Exact scalars and dense linear algebra over Q and GF(p), p odd.

Rationals are ``fractions.Fraction`` (normalised by gcd after every
operation); prime-field elements are :class:`Fp`.  Plain ``int`` is accepted
wherever a scalar is expected and is coerced into the relevant field.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import CharTwo, DimensionMismatch, MixedFields


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


class Fp:
    """Element of the prime field GF(p)."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise MixedFields(f"GF({self.p}) vs GF({other.p})")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError(f"{other} has no image in GF({self.p})")
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return Fp(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o, self.p) / self

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            return Fp(pow(pow(self.v, -1, self.p), -k, self.p), self.p)
        return Fp(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, (int, Fraction)):
            try:
                return self.v == self._coerce(other) % self.p
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


@dataclass(frozen=True)
class FieldSpec:
    """``p=None`` is the rationals; otherwise GF(p) with p an odd prime."""

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None:
            if self.p == 2:
                raise CharTwo("characteristic 2 is not supported")
            if not _is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Accepts ``Q``, ``F5``, ``GF5``, ``GF(5)``, ``Fp=5`` or a bare prime."""
        t = text.strip().upper().replace("(", "").replace(")", "")
        if t in ("Q", "QQ"):
            return cls(None)
        for prefix in ("GF", "FP=", "F"):
            if t.startswith(prefix):
                t = t[len(prefix):]
                break
        try:
            p = int(t)
        except ValueError:
            raise ValueError(f"cannot parse field spec {text!r}") from None
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def zero(self):
        return Fraction(0) if self.p is None else Fp(0, self.p)

    @property
    def one(self):
        return Fraction(1) if self.p is None else Fp(1, self.p)

    def __call__(self, value):
        if isinstance(value, str):
            return self.parse_scalar(value)
        if self.p is None:
            if isinstance(value, Fp):
                raise MixedFields(f"GF({value.p}) element used over Q")
            return Fraction(value)
        if isinstance(value, Fp):
            if value.p != self.p:
                raise MixedFields(f"GF({value.p}) element used over GF({self.p})")
            return value
        if isinstance(value, Fraction):
            return Fp(0, self.p) + value
        return Fp(int(value), self.p)

    def parse_scalar(self, text: str):
        """Exact string ``"p/q"`` or integer; over GF(p) a residue."""
        text = text.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return self(Fraction(int(num), int(den)))
        return self(int(text))

    def format(self, value) -> str:
        if isinstance(value, Fp):
            return str(value.v)
        value = Fraction(value)
        return str(value)

    def random_element(self, rng: random.Random, bound: int = 100, nonzero: bool = False):
        """Uniform over [-bound, bound] (Q) or all residues (GF(p))."""
        while True:
            if self.p is None:
                x = self(rng.randint(-bound, bound))
            else:
                x = self(rng.randrange(self.p))
            if x or not nonzero:
                return x

    def of(self, value) -> Optional["FieldSpec"]:
        """Field a raw value belongs to, or None for plain ints (compatible with all)."""
        return field_of(value)

    def __str__(self):
        return "Q" if self.p is None else f"GF({self.p})"


def field_of(value) -> Optional[FieldSpec]:
    if isinstance(value, Fp):
        return FieldSpec(value.p)
    if isinstance(value, Fraction):
        return FieldSpec(None)
    return None


def common_field(values: Iterable, default: Optional[FieldSpec] = None) -> FieldSpec:
    found = default
    for v in values:
        f = field_of(v)
        if f is None:
            continue
        if found is None:
            found = f
        elif f != found:
            raise MixedFields(f"entries from {found} and {f}")
    return found if found is not None else FieldSpec(None)


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple  # row-major
    field: FieldSpec

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch("entries length must equal rows*cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Optional[FieldSpec] = None, cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DimensionMismatch("ragged rows")
        flat = [x for r in rows for x in r]
        field = common_field(flat, field)
        return cls(len(rows), cols, tuple(field(x) for x in flat), field)

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> "Matrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], field, cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec) -> "Matrix":
        return cls(rows, cols, tuple(field.zero for _ in range(rows * cols)), field)

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if self.field != other.field:
            raise MixedFields(f"{self.field} @ {other.field}")
        z = self.field.zero
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                s = z
                for k in range(self.cols):
                    a = self.entries[i * self.cols + k]
                    if a:
                        s = s + a * other.entries[k * other.cols + j]
                out.append(s)
        return Matrix(self.rows, other.cols, tuple(out), self.field)

    def apply(self, vec: Sequence) -> list:
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length")
        z = self.field.zero
        return [sum((self[i, k] * vec[k] for k in range(self.cols)), z) for i in range(self.rows)]


def rref_rows(rows: list, ncols: int, zero, one, with_transform: bool = True):
    """In-place Gauss-Jordan on a list of mutable rows.

    Returns ``(pivots, transform)``; ``transform`` is a list of rows with
    ``transform @ original == reduced``.
    """
    n = len(rows)
    t = [[one if i == j else zero for j in range(n)] for i in range(n)] if with_transform else None
    pivots = []
    r = 0
    for c in range(ncols):
        if r == n:
            break
        piv = None
        for i in range(r, n):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            if t is not None:
                t[r], t[piv] = t[piv], t[r]
        inv = one / rows[r][c]
        if inv != one:
            rows[r] = [x * inv for x in rows[r]]
            if t is not None:
                t[r] = [x * inv for x in t[r]]
        pr = rows[r]
        pt = t[r] if t is not None else None
        for i in range(n):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    rows[i] = [a - f * b if b else a for a, b in zip(ri, pr)]
                    if t is not None:
                        ti = t[i]
                        t[i] = [a - f * b if b else a for a, b in zip(ti, pt)]
        pivots.append(c)
        r += 1
    return pivots, t


def rref(m: Matrix):
    """Reduced row echelon form: ``(reduced, pivot_columns, transform)``."""
    common_field(m.entries, m.field)
    rows = m.to_rows()
    pivots, t = rref_rows(rows, m.cols, m.field.zero, m.field.one)
    reduced = Matrix.from_rows(rows, m.field, cols=m.cols)
    transform = Matrix.from_rows(t, m.field, cols=m.rows)
    return reduced, pivots, transform


def rank(m: Matrix) -> int:
    rows = m.to_rows()
    pivots, _ = rref_rows(rows, m.cols, m.field.zero, m.field.one, with_transform=False)
    return len(pivots)


def kernel_basis(m: Matrix) -> list:
    """Basis of the right null space, one vector per free column."""
    reduced, pivots, _ = rref(m)
    pivset = set(pivots)
    zero, one = m.field.zero, m.field.one
    out = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [zero] * m.cols
        v[free] = one
        for r, pc in enumerate(pivots):
            v[pc] = -reduced[r, free]
        out.append(tuple(v))
    return out


def solve_in_span(vectors: Sequence[Sequence], target: Sequence, field: Optional[FieldSpec] = None):
    """Coefficients ``c`` with ``sum(c[i] * vectors[i]) == target``, or None."""
    n = len(target)
    if any(len(v) != n for v in vectors):
        raise DimensionMismatch("vectors of different lengths")
    field = common_field([x for v in vectors for x in v] + list(target), field)
    k = len(vectors)
    # columns are the vectors, augmented by the target
    rows = [[field(vectors[j][i]) for j in range(k)] + [field(target[i])] for i in range(n)]
    pivots, _ = rref_rows(rows, k + 1, field.zero, field.one, with_transform=False)
    if k in pivots:
        return None
    coeffs = [field.zero] * k
    for r, pc in enumerate(pivots):
        coeffs[pc] = rows[r][k]
    return coeffs


# sparse vectors: dict key -> nonzero scalar

def axpy(acc: dict, vec: dict, coeff=1) -> dict:
    """``acc += coeff * vec`` in place, dropping zeros."""
    for k, v in vec.items():
        x = acc.get(k)
        y = v * coeff if coeff != 1 else v
        x = y if x is None else x + y
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)
    return acc


def vscale(vec: dict, coeff) -> dict:
    if not coeff:
        return {}
    return {k: v * coeff for k, v in vec.items()}


def vsub(a: dict, b: dict) -> dict:
    return axpy(dict(a), b, -1)


class EchelonSpan:
    """Incrementally maintained reduced basis of a subspace of K^n (dense)."""

    def __init__(self, n: int, field: FieldSpec):
        self.n = n
        self.field = field
        self.rows: list = []  # each row normalised at its pivot
        self.pivots: list = []

    def reduce(self, v: Sequence) -> list:
        v = list(v)
        for row, c in zip(self.rows, self.pivots):
            f = v[c]
            if f:
                v = [a - f * b if b else a for a, b in zip(v, row)]
        return v

    def add(self, v: Sequence) -> bool:
        """Add ``v``; return True if it enlarged the span."""
        v = self.reduce(v)
        c = next((i for i, x in enumerate(v) if x), None)
        if c is None:
            return False
        inv = self.field.one / v[c]
        v = [x * inv for x in v]
        for i, row in enumerate(self.rows):
            f = row[c]
            if f:
                self.rows[i] = [a - f * b if b else a for a, b in zip(row, v)]
        self.rows.append(v)
        self.pivots.append(c)
        return True

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def __len__(self):
        return len(self.rows)
