"""Exact scalar fields and dense exact linear algebra.

Two families: prime fields Fp (p prime) and the rationals Q. No floating
point anywhere. Matrices are dense numpy arrays: int64 with entries reduced
into [0, p) for small primes, dtype=object (Python ints / Fractions) for
large primes and for Q. All elimination is exact.
"""

from fractions import Fraction

import numpy as np

from .errors import FieldMismatch, ShapeError

# products of two entries must fit in int64 alongside row arithmetic
_INT64_PRIME_BOUND = 1 << 15


def _is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Exact field of scalars, either GF(p) or Q."""

    __slots__ = ("kind", "p")

    def __init__(self, kind, p=None):
        if kind == "fp":
            if p is None or not _is_prime(p):
                raise ValueError("prime field needs a prime modulus, got %r" % (p,))
        elif kind == "q":
            p = None
        else:
            raise ValueError("unknown field kind %r" % (kind,))
        self.kind = kind
        self.p = p

    # -- identity ---------------------------------------------------------

    @property
    def label(self):
        if self.kind == "q":
            return "Q"
        if self.p == 2:
            return "F2"
        return "Fp:%d" % self.p

    @classmethod
    def parse(cls, text):
        t = text.strip()
        if t == "Q":
            return cls("q")
        if t == "F2":
            return cls("fp", 2)
        if t.startswith("Fp:"):
            try:
                p = int(t[3:])
            except ValueError:
                raise ValueError("bad field label %r" % text)
            return cls("fp", p)
        raise ValueError("bad field label %r" % text)

    def __eq__(self, other):
        return isinstance(other, Field) and self.kind == other.kind and self.p == other.p

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return "Field(%s)" % self.label

    def require_same(self, other):
        if self != other:
            raise FieldMismatch(
                "field mismatch: %s vs %s" % (self.label, other.label),
                left=self.label,
                right=other.label,
            )

    # -- scalars ----------------------------------------------------------

    @property
    def _object_dtype(self):
        return self.kind == "q" or self.p >= _INT64_PRIME_BOUND

    def scalar(self, x):
        """Normalize an int, Fraction, or literal token into the field."""
        if isinstance(x, str):
            x = x.strip()
            if "/" in x:
                num, den = x.split("/", 1)
                x = Fraction(int(num), int(den))
            else:
                x = int(x)
        if self.kind == "q":
            return Fraction(x)
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(
                    "denominator %d not invertible mod %d" % (x.denominator, self.p)
                )
            return (x.numerator * pow(den, self.p - 2, self.p)) % self.p
        return int(x) % self.p

    def inv_scalar(self, a):
        if self.kind == "q":
            return Fraction(1) / a
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def neg_scalar(self, a):
        if self.kind == "q":
            return -a
        return (-int(a)) % self.p

    def scalar_is_zero(self, a):
        if self.kind == "q":
            return a == 0
        return int(a) % self.p == 0

    def scalar_repr(self, a):
        """Canonical literal for file emission."""
        if self.kind == "q":
            f = Fraction(a)
            if f.denominator == 1:
                return str(f.numerator)
            return "%d/%d" % (f.numerator, f.denominator)
        return str(int(a) % self.p)

    # -- matrix construction ----------------------------------------------

    def zeros(self, rows, cols):
        if self._object_dtype:
            m = np.empty((rows, cols), dtype=object)
            zero = Fraction(0) if self.kind == "q" else 0
            m[...] = zero
            return m
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n):
        m = self.zeros(n, n)
        one = Fraction(1) if self.kind == "q" else 1
        for i in range(n):
            m[i, i] = one
        return m

    def mat(self, rows):
        """Build from a list of row lists of ints / Fractions / tokens."""
        r = len(rows)
        c = len(rows[0]) if r else 0
        out = self.zeros(r, c)
        for i, row in enumerate(rows):
            if len(row) != c:
                raise ShapeError("ragged rows in matrix literal")
            for j, v in enumerate(row):
                out[i, j] = self.scalar(v)
        return out

    def copy(self, a):
        return a.copy()

    def reduce(self, a):
        if self.kind == "q":
            return a
        if a.dtype == object:
            out = np.empty(a.shape, dtype=object)
            flat_in = a.ravel()
            flat_out = out.ravel()
            for i in range(flat_in.size):
                flat_out[i] = int(flat_in[i]) % self.p
            return out
        return a % self.p

    # -- arithmetic ---------------------------------------------------------

    def matmul(self, a, b):
        if a.shape[1] != b.shape[0]:
            raise ShapeError(
                "matmul shape mismatch %s x %s" % (a.shape, b.shape)
            )
        if a.shape[0] == 0 or b.shape[1] == 0 or a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        if self.kind == "fp" and not self._object_dtype:
            return (a @ b) % self.p
        out = a @ b
        return self.reduce(out) if self.kind == "fp" else out

    def add(self, a, b):
        if a.shape != b.shape:
            raise ShapeError("add shape mismatch %s vs %s" % (a.shape, b.shape))
        out = a + b
        return self.reduce(out) if self.kind == "fp" else out

    def sub(self, a, b):
        if a.shape != b.shape:
            raise ShapeError("sub shape mismatch %s vs %s" % (a.shape, b.shape))
        out = a - b
        return self.reduce(out) if self.kind == "fp" else out

    def neg(self, a):
        return self.reduce(-a) if self.kind == "fp" else -a

    def scale(self, c, a):
        c = self.scalar(c)
        out = a * c
        return self.reduce(out) if self.kind == "fp" else out

    def kron(self, a, b):
        if a.size == 0 or b.size == 0:
            return self.zeros(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
        out = np.kron(a, b)
        return self.reduce(out) if self.kind == "fp" else out

    def is_zero(self, a):
        if a.size == 0:
            return True
        if self.kind == "q":
            return not any(bool(x) for x in a.ravel())
        return not np.any(self.reduce(a))

    def eq(self, a, b):
        if a.shape != b.shape:
            return False
        return self.is_zero(self.sub(a, b))

    # -- elimination --------------------------------------------------------

    def rref(self, a):
        """Reduced row echelon form. Returns (R, pivot_columns)."""
        a = self.reduce(a.copy()) if self.kind == "fp" else a.copy()
        m, n = a.shape
        pivots = []
        r = 0
        for c in range(n):
            if r == m:
                break
            nz = np.flatnonzero(a[r:, c])
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                a[[r, i]] = a[[i, r]]
            inv = self.inv_scalar(a[r, c])
            a[r] = self.reduce(a[r] * inv) if self.kind == "fp" else a[r] * inv
            col = a[:, c].copy()
            col[r] = 0
            if np.any(col != 0):
                upd = a - np.outer(col, a[r])
                a = self.reduce(upd) if self.kind == "fp" else upd
            pivots.append(c)
            r += 1
        return a, pivots

    def rank(self, a):
        if a.size == 0:
            return 0
        return len(self.rref(a)[1])

    def nullspace(self, a):
        """Columns span ker(a). Shape (cols(a), nullity)."""
        m, n = a.shape
        if n == 0:
            return self.zeros(0, 0)
        if m == 0:
            return self.eye(n)
        r, pivots = self.rref(a)
        free = [j for j in range(n) if j not in pivots]
        out = self.zeros(n, len(free))
        one = Fraction(1) if self.kind == "q" else 1
        for k, j in enumerate(free):
            out[j, k] = one
            for i, pc in enumerate(pivots):
                out[pc, k] = self.neg_scalar(r[i, j])
        return out

    def hstack(self, blocks, rows):
        blocks = [b for b in blocks if b.shape[1] > 0]
        if not blocks:
            return self.zeros(rows, 0)
        return np.concatenate(blocks, axis=1)

    def vstack(self, blocks, cols):
        blocks = [b for b in blocks if b.shape[0] > 0]
        if not blocks:
            return self.zeros(0, cols)
        return np.concatenate(blocks, axis=0)


F2 = Field("fp", 2)
QQ = Field("q")


def GF(p):
    return Field("fp", p)
