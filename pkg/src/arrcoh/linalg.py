"""Exact linear algebra over Q, F_p and Z.

Everything here is exact: rationals are :class:`fractions.Fraction`, prime
field elements are ints in ``[0, p)``, integers are ints.  No floats are
ever produced or accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from arrcoh import fp

__all__ = [
    "FieldTag",
    "QQ",
    "GF",
    "ZZ",
    "IntegerRing",
    "Matrix",
    "rank_kernel",
    "SmithForm",
    "smith_normal_form",
    "poly_div_exact",
    "is_prime",
]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 2**31."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldTag:
    """A coefficient field: the rationals or a prime field F_p."""

    kind: str
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "rational":
            if self.p is not None:
                raise ValueError("rational field takes no modulus")
        elif self.kind == "prime":
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"modulus must be prime, got {self.p}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    # --- scalar arithmetic ------------------------------------------------

    def normalize(self, x) -> Fraction | int:
        """Coerce x into a canonical scalar of this field."""
        if isinstance(x, float):
            raise TypeError("floating point input rejected; use Fraction or str")
        if self.kind == "rational":
            if isinstance(x, str):
                return Fraction(x)
            return Fraction(x)
        if isinstance(x, str):
            x = int(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator not invertible mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p if self.kind == "prime" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == "prime" else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.kind == "prime" else a * b

    def neg(self, a):
        return (-a) % self.p if self.kind == "prime" else -a

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "prime":
            return pow(a, self.p - 2, self.p)
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0

    @property
    def zero(self):
        return Fraction(0) if self.kind == "rational" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "rational" else 1

    def format_scalar(self, a) -> str:
        """Canonical text form: lowest-term 'p/q' for rationals, residue for F_p."""
        if self.kind == "rational":
            a = Fraction(a)
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(a % self.p)

    def to_json(self) -> dict:
        if self.kind == "rational":
            return {"kind": "rational"}
        return {"kind": "prime", "p": self.p}

    @staticmethod
    def from_json(obj: dict) -> "FieldTag":
        kind = obj.get("kind")
        if kind == "rational":
            return QQ
        if kind == "prime":
            return GF(obj["p"])
        raise ValueError(f"unknown field description {obj!r}")

    def __repr__(self) -> str:
        return "QQ" if self.kind == "rational" else f"GF({self.p})"


QQ = FieldTag("rational")


def GF(p: int) -> FieldTag:
    return FieldTag("prime", p)


class IntegerRing:
    """Marker for Z coefficients (handled through Smith normal form)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def normalize(self, x) -> int:
        if isinstance(x, float):
            raise TypeError("floating point input rejected")
        if isinstance(x, str):
            return int(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def to_json(self) -> dict:
        return {"kind": "integer"}

    def __repr__(self) -> str:
        return "ZZ"


ZZ = IntegerRing()

Ring = Union[FieldTag, IntegerRing]


def coeff_ring_from_json(obj: dict) -> Ring:
    if obj.get("kind") == "integer":
        return ZZ
    return FieldTag.from_json(obj)


@dataclass(frozen=True)
class Matrix:
    """Immutable exact matrix with an explicit coefficient ring."""

    ring: Ring
    entries: tuple[tuple, ...]
    nrows: int
    ncols: int

    @classmethod
    def from_rows(cls, ring: Ring, rows: Iterable[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        norm = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            norm.append(tuple(ring.normalize(x) for x in r))
        return cls(ring, tuple(norm), nrows, ncols)

    @classmethod
    def zeros(cls, ring: Ring, nrows: int, ncols: int) -> "Matrix":
        zero = ring.normalize(0)
        return cls(ring, tuple(tuple(zero for _ in range(ncols)) for _ in range(nrows)), nrows, ncols)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        one, zero = ring.normalize(1), ring.normalize(0)
        return cls(ring, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), n, n)

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "Matrix":
        t = tuple(tuple(self.entries[i][j] for i in range(self.nrows)) for j in range(self.ncols))
        return Matrix(self.ring, t, self.ncols, self.nrows)

    def mul(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        modp = self.ring.p if isinstance(self.ring, FieldTag) and self.ring.kind == "prime" else None
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                s = sum(self.entries[i][k] * other.entries[k][j] for k in range(self.ncols))
                row.append(s % modp if modp else s)
            out.append(tuple(row))
        return Matrix(self.ring, tuple(out), self.nrows, other.ncols)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.entries]

    def __repr__(self) -> str:
        return f"Matrix({self.ring}, {self.nrows}x{self.ncols})"


def _rational_rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if mat[i][c] != 0), -1)
        if pivot_row < 0:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat, pivots


def rank_kernel(mat: Matrix) -> tuple[int, Matrix]:
    """Rank and a right-kernel basis (rows of the returned matrix).

    Over Z the kernel basis is saturated (primitive integer vectors spanning
    the full rational kernel lattice), obtained from Smith-form witnesses.
    """
    ring = mat.ring
    if isinstance(ring, IntegerRing):
        if mat.nrows == 0 or mat.ncols == 0:
            rank = 0
        else:
            _, pivots = _rational_rref([[Fraction(x) for x in row] for row in mat.entries])
            rank = len(pivots)
        if mat.ncols == 0:
            return rank, Matrix.zeros(ZZ, 0, 0)
        if mat.nrows == 0:
            return 0, Matrix.identity(ZZ, mat.ncols)
        sf = smith_normal_form(mat)
        r = sum(1 for d in sf.divisors if d != 0)
        basis = [tuple(sf.right.entries[i][j] for i in range(mat.ncols)) for j in range(r, mat.ncols)]
        return r, Matrix(ZZ, tuple(basis), mat.ncols - r, mat.ncols)
    if mat.nrows == 0 or mat.ncols == 0:
        return 0, Matrix.identity(ring, mat.ncols)
    if ring.kind == "prime":
        rows = [list(r) for r in mat.entries]
        rank = fp.fp_rank(rows, ring.p)
        basis = fp.fp_kernel(rows, ring.p)
        return rank, Matrix.from_rows(ring, basis) if basis else Matrix.zeros(ring, 0, mat.ncols)
    rref, pivots = _rational_rref([list(r) for r in mat.entries])
    pivot_set = set(pivots)
    free_cols = [c for c in range(mat.ncols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        v = [Fraction(0)] * mat.ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][fc]
        basis.append(v)
    kern = Matrix.from_rows(ring, basis) if basis else Matrix.zeros(ring, 0, mat.ncols)
    return len(pivots), kern


def rank(mat: Matrix) -> int:
    return rank_kernel(mat)[0]


@dataclass(frozen=True)
class SmithForm:
    """Smith normal form D = U A V with unimodular witnesses.

    ``divisors`` is the full diagonal of D (length min(nrows, ncols)),
    nonnegative, each dividing the next among the nonzero entries.
    """

    left: Matrix
    right: Matrix
    divisors: tuple[int, ...]
    nrows: int
    ncols: int

    @property
    def rank(self) -> int:
        return sum(1 for d in self.divisors if d != 0)

    @property
    def nontrivial(self) -> tuple[int, ...]:
        return tuple(d for d in self.divisors if d > 1)

    def diagonal_matrix(self) -> Matrix:
        rows = [[self.divisors[i] if i == j and i < len(self.divisors) else 0
                 for j in range(self.ncols)] for i in range(self.nrows)]
        return Matrix.from_rows(ZZ, rows)


def smith_normal_form(mat: Matrix) -> SmithForm:
    """Exact Smith normal form over Z with verified unimodular witnesses.

    Pivots are chosen by minimal absolute value to tame coefficient growth.
    Raises ValueError if the witness check U A V == D fails (which would
    indicate an internal bug, not bad input).
    """
    if not isinstance(mat.ring, IntegerRing):
        raise TypeError("smith_normal_form expects a matrix over ZZ")
    m, n = mat.nrows, mat.ncols
    a = [list(row) for row in mat.entries]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    det_u = 1
    det_v = 1

    def swap_rows(i, j):
        nonlocal det_u
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]
            det_u = -det_u

    def swap_cols(i, j):
        nonlocal det_v
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]
            det_v = -det_v

    def add_row(src, dst, c):
        # row[dst] += c * row[src]
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def negate_row(i):
        nonlocal det_u
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        det_u = -det_u

    t = 0
    limit = min(m, n)
    while t < limit:
        # locate minimal-absolute-value nonzero entry in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        if a[t][t] < 0:
            negate_row(t)
        # clear column and row; pivot may need refreshing when remainders appear
        dirty = False
        for i in range(t + 1, m):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                add_row(t, i, -q)
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                add_col(t, j, -q)
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # divisibility: pivot must divide every entry of the trailing block
        violation = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % a[t][t] != 0:
                    violation = i
                    break
            if violation is not None:
                break
        if violation is not None:
            add_row(violation, t, 1)
            continue
        t += 1

    divisors = tuple(a[i][i] for i in range(limit))
    if abs(det_u) != 1 or abs(det_v) != 1:
        raise ValueError("unimodularity lost")  # pragma: no cover - defensive
    left = Matrix.from_rows(ZZ, u)
    right = Matrix.from_rows(ZZ, v)
    sf = SmithForm(left=left, right=right, divisors=divisors, nrows=m, ncols=n)
    check = left.mul(mat).mul(right)
    if check.entries != sf.diagonal_matrix().entries:
        raise ValueError("smith form witness check failed")  # pragma: no cover
    for i in range(len(divisors) - 1):
        if divisors[i] and divisors[i + 1] % (divisors[i] or 1) != 0:
            raise ValueError("divisibility chain broken")  # pragma: no cover
        if divisors[i] == 0 and divisors[i + 1] != 0:
            raise ValueError("zero divisor out of order")  # pragma: no cover
    return sf


def poly_div_exact(num: Sequence[int], den: Sequence[int]) -> list[int]:
    """Exact division in Z[t], coefficients ascending; raises if inexact.

    >>> poly_div_exact([1, 3, 2], [1, 1])   # (1 + 3t + 2t^2) / (1 + t)
    [1, 2]
    """
    num = list(num)
    den = list(den)
    while den and den[-1] == 0:
        den.pop()
    while num and num[-1] == 0:
        num.pop()
    if not den:
        raise ZeroDivisionError("division by zero polynomial")
    if not num:
        return [0]
    if len(num) < len(den):
        raise ValueError("inexact polynomial division")
    q = [0] * (len(num) - len(den) + 1)
    rem = list(num)
    for k in range(len(q) - 1, -1, -1):
        lead = rem[k + len(den) - 1]
        if lead % den[-1] != 0:
            raise ValueError("inexact polynomial division")
        c = lead // den[-1]
        q[k] = c
        for i, d in enumerate(den):
            rem[k + i] -= c * d
    if any(rem):
        raise ValueError("inexact polynomial division")
    return q


def gcd_list(xs: Iterable[int]) -> int:
    g = 0
    for x in xs:
        g = math.gcd(g, x)
    return g
