"""Exact arithmetic over Q and quadratic extensions Q(sqrt(d)).

Everything in this module is built on :class:`fractions.Fraction`, so no
rounding ever occurs.  Elements a + b*sqrt(d) live in the field tagged by a
non-square rational d (default -1); matrices are dense and row-major.
Semilinear maps bundle a matrix with a Galois tag and compose with the
convention  v |-> matrix . sigma(v),  sigma applied entrywise.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction


class CocycleViolation(ValueError):
    """A claimed order-2 semilinear structure failed phi o phi = id."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


def is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    p, q = x.numerator, x.denominator
    return math.isqrt(p) ** 2 == p and math.isqrt(q) ** 2 == q


class QuadElement:
    """a + b*sqrt(d) with exact rational a, b and non-square rational d."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=-1):
        a = _as_fraction(a)
        b = _as_fraction(b)
        d = _as_fraction(d)
        if is_rational_square(d):
            raise ValueError(f"d = {d} is a square in Q; not a quadratic extension")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, *args):
        raise AttributeError("QuadElement is immutable")

    def _check(self, other: "QuadElement"):
        if self.d != other.d:
            raise ValueError(f"mixing fields sqrt({self.d}) and sqrt({other.d})")

    def _coerce(self, other):
        if isinstance(other, QuadElement):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElement(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElement(
            self.a * o.a + self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def conj(self) -> "QuadElement":
        return QuadElement(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        # x * conj(x) = a^2 - d b^2, always in Q
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inv(self) -> "QuadElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        return QuadElement(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadElement):
            return self.d == other.d and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"({self.a}+{self.b}*sqrt({self.d}))"


def qe(a, b=0, d=-1) -> QuadElement:
    return QuadElement(a, b, d)


def sqrt_d(d=-1) -> QuadElement:
    return QuadElement(0, 1, d)


def conj(x: QuadElement) -> QuadElement:
    """Non-trivial Galois automorphism a + b*sqrt(d) -> a - b*sqrt(d)."""
    return x.conj()


class QuadMatrix:
    """Dense matrix over Q(sqrt(d)), row-major, supporting 0-dimensional shapes."""

    __slots__ = ("rows", "cols", "entries", "d")

    def __init__(self, rows: int, cols: int, entries: Sequence[QuadElement], d=None):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError("entries length does not match rows*cols")
        if entries:
            d0 = entries[0].d
            for e in entries:
                if e.d != d0:
                    raise ValueError("mixed field tags inside one matrix")
            if d is not None and _as_fraction(d) != d0:
                raise ValueError("matrix field tag disagrees with entries")
            d = d0
        else:
            d = _as_fraction(d if d is not None else -1)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "d", d)

    def __setattr__(self, *args):
        raise AttributeError("QuadMatrix is immutable")

    # -- constructors -------------------------------------------------
    @staticmethod
    def from_rows(rows_data: Sequence[Sequence], d=-1) -> "QuadMatrix":
        rows = len(rows_data)
        cols = len(rows_data[0]) if rows else 0
        ent = []
        for r in rows_data:
            if len(r) != cols:
                raise ValueError("ragged rows")
            for x in r:
                ent.append(x if isinstance(x, QuadElement) else QuadElement(x, 0, d))
        return QuadMatrix(rows, cols, ent, d)

    @staticmethod
    def identity(n: int, d=-1) -> "QuadMatrix":
        one, zero = QuadElement(1, 0, d), QuadElement(0, 0, d)
        return QuadMatrix(n, n, [one if i == j else zero for i in range(n) for j in range(n)], d)

    @staticmethod
    def zeros(rows: int, cols: int, d=-1) -> "QuadMatrix":
        zero = QuadElement(0, 0, d)
        return QuadMatrix(rows, cols, [zero] * (rows * cols), d)

    # -- access -------------------------------------------------------
    def __getitem__(self, rc) -> QuadElement:
        r, c = rc
        return self.entries[r * self.cols + c]

    def row(self, r: int) -> tuple:
        return self.entries[r * self.cols : (r + 1) * self.cols]

    def col(self, c: int) -> tuple:
        return tuple(self.entries[r * self.cols + c] for r in range(self.rows))

    def with_entry(self, r: int, c: int, v: QuadElement) -> "QuadMatrix":
        ent = list(self.entries)
        ent[r * self.cols + c] = v
        return QuadMatrix(self.rows, self.cols, ent, self.d)

    # -- algebra ------------------------------------------------------
    def __add__(self, other: "QuadMatrix") -> "QuadMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in +")
        return QuadMatrix(self.rows, self.cols,
                          [x + y for x, y in zip(self.entries, other.entries)], self.d)

    def __sub__(self, other: "QuadMatrix") -> "QuadMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in -")
        return QuadMatrix(self.rows, self.cols,
                          [x - y for x, y in zip(self.entries, other.entries)], self.d)

    def __neg__(self) -> "QuadMatrix":
        return QuadMatrix(self.rows, self.cols, [-x for x in self.entries], self.d)

    def scale(self, s) -> "QuadMatrix":
        s = s if isinstance(s, QuadElement) else QuadElement(s, 0, self.d)
        return QuadMatrix(self.rows, self.cols, [s * x for x in self.entries], self.d)

    def __mul__(self, other):
        if isinstance(other, QuadMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
            zero = QuadElement(0, 0, self.d)
            ent = []
            for i in range(self.rows):
                ri = self.row(i)
                for j in range(other.cols):
                    acc = zero
                    for k in range(self.cols):
                        acc = acc + ri[k] * other.entries[k * other.cols + j]
                    ent.append(acc)
            return QuadMatrix(self.rows, other.cols, ent, self.d)
        if isinstance(other, (int, Fraction, QuadElement)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, QuadElement)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "QuadMatrix":
        if self.rows != self.cols:
            raise ValueError("power of non-square matrix")
        acc = QuadMatrix.identity(self.rows, self.d)
        base = self
        while k > 0:
            if k & 1:
                acc = acc * base
            base = base * base if k > 1 else base
            k >>= 1
        return acc

    def conj(self) -> "QuadMatrix":
        return QuadMatrix(self.rows, self.cols, [x.conj() for x in self.entries], self.d)

    def transpose(self) -> "QuadMatrix":
        return QuadMatrix(self.cols, self.rows,
                          [self[r, c] for c in range(self.cols) for r in range(self.rows)], self.d)

    def apply(self, v: Sequence[QuadElement]) -> tuple:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        zero = QuadElement(0, 0, self.d)
        out = []
        for i in range(self.rows):
            acc = zero
            ri = self.row(i)
            for k in range(self.cols):
                acc = acc + ri[k] * v[k]
            out.append(acc)
        return tuple(out)

    def is_zero(self) -> bool:
        return all(not x for x in self.entries)

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        one = QuadElement(1, 0, self.d)
        return all(self[i, j] == (one if i == j else 0)
                   for i in range(self.rows) for j in range(self.cols))

    def is_rational(self) -> bool:
        return all(x.b == 0 for x in self.entries)

    def __eq__(self, other):
        if not isinstance(other, QuadMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and \
            all(x == y for x, y in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(repr(x) for x in self.row(r)) for r in range(self.rows))
        return f"QuadMatrix[{self.rows}x{self.cols}]({body})"

    def hstack(self, other: "QuadMatrix") -> "QuadMatrix":
        if self.rows != other.rows:
            raise ValueError("hstack row mismatch")
        ent = []
        for r in range(self.rows):
            ent.extend(self.row(r))
            ent.extend(other.row(r))
        return QuadMatrix(self.rows, self.cols + other.cols, ent, self.d)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "QuadMatrix":
        rows = list(rows)
        cols = list(cols)
        return QuadMatrix(len(rows), len(cols),
                          [self[r, c] for r in rows for c in cols], self.d)


def _echelon(m: QuadMatrix):
    """Reduced row echelon form; returns (rref rows as lists, pivot columns)."""
    rows = [list(m.row(r)) for r in range(m.rows)]
    pivots = []
    pr = 0
    for pc in range(m.cols):
        pivot = None
        for r in range(pr, len(rows)):
            if rows[r][pc]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[pr], rows[pivot] = rows[pivot], rows[pr]
        inv = rows[pr][pc].inv()
        rows[pr] = [inv * x for x in rows[pr]]
        for r in range(len(rows)):
            if r != pr and rows[r][pc]:
                f = rows[r][pc]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[pr])]
        pivots.append(pc)
        pr += 1
        if pr == len(rows):
            break
    return rows, pivots


def rank(m: QuadMatrix) -> int:
    return len(_echelon(m)[1])


def kernel_basis(m: QuadMatrix) -> list:
    """Basis of the right kernel over Q(sqrt(d)); empty iff m is injective."""
    rref, pivots = _echelon(m)
    free = [c for c in range(m.cols) if c not in pivots]
    zero = QuadElement(0, 0, m.d)
    one = QuadElement(1, 0, m.d)
    basis = []
    for fc in free:
        v = [zero] * m.cols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][fc]
        basis.append(tuple(v))
    return basis


def solve_unique(a: QuadMatrix, b: QuadMatrix) -> QuadMatrix:
    """Solve a X = b when a has full column rank (raises otherwise)."""
    aug = a.hstack(b)
    rref, pivots = _echelon(aug)
    if any(p >= a.cols for p in pivots):
        raise ValueError("inconsistent system")
    if pivots != list(range(a.cols)):
        raise ValueError("matrix does not have full column rank")
    ent = []
    for r in range(a.cols):
        ent.extend(rref[r][a.cols:])
    return QuadMatrix(a.cols, b.cols, ent, a.d)


def inverse(m: QuadMatrix) -> QuadMatrix:
    if m.rows != m.cols:
        raise ValueError("inverse of non-square matrix")
    return solve_unique(m, QuadMatrix.identity(m.rows, m.d))


def column_space_basis(m: QuadMatrix) -> QuadMatrix:
    """Matrix whose columns are a basis of the column space of m."""
    rref, pivots = _echelon(m.transpose())
    rows = [rref[i] for i in range(len(pivots))]
    return QuadMatrix(len(pivots), m.rows,
                      [x for row in rows for x in row], m.d).transpose()


def nilpotency_exponent(m: QuadMatrix):
    """Smallest e with m^e = 0, or None if m is not nilpotent."""
    if m.rows != m.cols:
        raise ValueError("nilpotency of non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    p = m
    e = 1
    while e <= n:
        if p.is_zero():
            return e
        p = p * m
        e += 1
    return None


def is_nilpotent(m: QuadMatrix) -> bool:
    return nilpotency_exponent(m) is not None


class SemilinearMap:
    """Map v |-> matrix . sigma(v) between coordinate spaces over Q(sqrt(d)).

    sigma is 0 (identity) or 1 (conjugation), applied entrywise to the input
    coordinates before the matrix acts.  Composition multiplies matrices with
    the rule  mat(p2 o p1) = mat(p2) . sigma2(mat(p1))  and xors the tags.
    """

    __slots__ = ("sigma", "matrix", "domain_dim", "codomain_dim")

    def __init__(self, matrix: QuadMatrix, sigma: int = 1):
        if sigma not in (0, 1):
            raise ValueError("sigma tag must be 0 (identity) or 1 (conjugation)")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "domain_dim", matrix.cols)
        object.__setattr__(self, "codomain_dim", matrix.rows)

    def __setattr__(self, *args):
        raise AttributeError("SemilinearMap is immutable")

    def apply(self, v: Sequence[QuadElement]) -> tuple:
        if self.sigma:
            v = [x.conj() for x in v]
        return self.matrix.apply(v)

    def compose(self, first: "SemilinearMap") -> "SemilinearMap":
        """self o first."""
        m1 = first.matrix
        if self.sigma:
            m1 = m1.conj()
        return SemilinearMap(self.matrix * m1, self.sigma ^ first.sigma)

    def inverse(self) -> "SemilinearMap":
        minv = inverse(self.matrix)
        if self.sigma:
            minv = minv.conj()
        return SemilinearMap(minv, self.sigma)

    def __eq__(self, other):
        if not isinstance(other, SemilinearMap):
            return NotImplemented
        return self.sigma == other.sigma and self.matrix == other.matrix

    def __repr__(self):
        return f"SemilinearMap(sigma={self.sigma}, {self.matrix!r})"


def _rational_kernel(rows: list, ncols: int) -> list:
    """Kernel basis of an exact rational matrix given as list of rows."""
    pivots = []
    rws = [list(r) for r in rows]
    pr = 0
    for pc in range(ncols):
        piv = None
        for r in range(pr, len(rws)):
            if rws[r][pc]:
                piv = r
                break
        if piv is None:
            continue
        rws[pr], rws[piv] = rws[piv], rws[pr]
        f = rws[pr][pc]
        rws[pr] = [x / f for x in rws[pr]]
        for r in range(len(rws)):
            if r != pr and rws[r][pc]:
                g = rws[r][pc]
                rws[r] = [x - g * y for x, y in zip(rws[r], rws[pr])]
        pivots.append(pc)
        pr += 1
        if pr == len(rws):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rws[r][fc]
        basis.append(v)
    return basis


def fixed_space(phi: SemilinearMap) -> list:
    """K-basis of {v : phi(v) = v} for a conjugate-semilinear involution.

    Splitting v = x + sqrt(d) y and the matrix A = P + sqrt(d) Q turns
    A.conj(v) = v into the rational system
        (P - 1) x - d Q y = 0,   Q x - (P + 1) y = 0.
    Galois descent guarantees exactly n = domain_dim basis vectors, which
    are returned in L-coordinates and span L^n over L.

    Raises CocycleViolation when phi is not conjugate-semilinear or
    phi o phi differs from the identity.
    """
    if phi.sigma != 1:
        raise CocycleViolation("fixed_space needs a conjugate-semilinear map")
    a = phi.matrix
    if a.rows != a.cols:
        raise CocycleViolation("fixed_space needs a square map")
    if not (a * a.conj()).is_identity():
        raise CocycleViolation("phi o phi is not the identity; no K-structure")
    n = a.rows
    d = a.d
    rows = []
    for i in range(n):
        # (P - I) x - d Q y = 0
        row = [a[i, j].a - (1 if i == j else 0) for j in range(n)]
        row += [-d * a[i, j].b for j in range(n)]
        rows.append(row)
    for i in range(n):
        # Q x - (P + I) y = 0
        row = [a[i, j].b for j in range(n)]
        row += [-(a[i, j].a + (1 if i == j else 0)) for j in range(n)]
        rows.append(row)
    rows = [[Fraction(x) for x in r] for r in rows]
    sols = _rational_kernel(rows, 2 * n)
    basis = [tuple(QuadElement(v[j], v[n + j], d) for j in range(n)) for v in sols]
    if len(basis) != n:
        raise CocycleViolation(
            f"descent failure: expected {n} fixed vectors, found {len(basis)}")
    return basis


def basis_matrix(vectors: list, n: int, d=-1) -> QuadMatrix:
    """Columns = the given coordinate vectors (n rows)."""
    cols = len(vectors)
    ent = []
    for r in range(n):
        for v in vectors:
            ent.append(v[r])
    return QuadMatrix(n, cols, ent, d)
