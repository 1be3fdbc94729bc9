"""Bounded cochain complexes over an exact field, and their exact algebra.

Conventions, fixed once for the whole engine:

- cohomological grading: the differential raises degree by 1; d(n) is the
  matrix of C^n -> C^(n+1), shape (dim(n+1), dim(n));
- shift(C, k)^n = C^(n+k), with the differential multiplied by (-1)^k, so
  betti(shift(C, k))(n) = betti(C)(n + k);
- cone(f: A -> B)^n = A^(n+1) + B^n with d(a, b) = (-da, fa + db);
- tensor uses the Koszul sign on the second factor; bases are ordered by
  ascending first-factor degree, row-major inside each block;
- hom_complex(C, D)^n is the sum over m of Hom(C^m, D^(m+n)), blocks in
  ascending m, each block flattened row-major (target index major);
- a map is a quasi-isomorphism iff its cone is acyclic (exact check).

Everything is validated eagerly: building a Complex asserts shapes and
d^2 = 0, building a ChainMap asserts commutation with the differentials.
"""

from .errors import EmptyComplex, NotDifferential, ShapeError


class Complex:
    """A bounded cochain complex of finite dimensional vector spaces."""

    def __init__(self, field, dims, diffs, check=True):
        self.field = field
        self.dims = {int(n): int(d) for n, d in dims.items() if int(d) != 0}
        for n, d in self.dims.items():
            if d < 0:
                raise ShapeError("negative dimension %d in degree %d" % (d, n))
        ds = {}
        for n, m in diffs.items():
            n = int(n)
            rows, cols = m.shape
            if check:
                if rows != self.dim(n + 1) or cols != self.dim(n):
                    raise ShapeError(
                        "differential at degree %d has shape %s, expected (%d, %d)"
                        % (n, m.shape, self.dim(n + 1), self.dim(n)),
                        degree=n,
                    )
            if m.size and not field.is_zero(m):
                ds[n] = field.reduce(m) if field.kind == "fp" else m
        self.diffs = ds
        if check:
            for n in list(ds):
                if n + 1 in ds:
                    if not field.is_zero(field.matmul(ds[n + 1], ds[n])):
                        raise NotDifferential(
                            "d.d nonzero from degree %d" % n, degree=n
                        )
        self._betti = None

    # -- access -------------------------------------------------------------

    def dim(self, n):
        return self.dims.get(n, 0)

    def d(self, n):
        m = self.diffs.get(n)
        if m is None:
            return self.field.zeros(self.dim(n + 1), self.dim(n))
        return m

    @property
    def degrees(self):
        return sorted(self.dims)

    @property
    def total_dim(self):
        return sum(self.dims.values())

    def is_zero(self):
        return not self.dims

    # -- invariants -----------------------------------------------------------

    def betti(self):
        if self._betti is None:
            out = {}
            ranks = {n: self.field.rank(m) for n, m in self.diffs.items()}
            for n in self.dims:
                b = self.dim(n) - ranks.get(n, 0) - ranks.get(n - 1, 0)
                if b:
                    out[n] = b
            self._betti = out
        return dict(self._betti)

    def is_acyclic(self):
        return not self.betti()

    def euler(self):
        return sum(-d if n % 2 else d for n, d in self.dims.items())

    # -- equality / display -----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Complex):
            return NotImplemented
        if self.field != other.field or self.dims != other.dims:
            return False
        if set(self.diffs) != set(other.diffs):
            return False
        return all(self.field.eq(m, other.diffs[n]) for n, m in self.diffs.items())

    def __hash__(self):
        return hash((self.field, tuple(sorted(self.dims.items()))))

    def __repr__(self):
        if not self.dims:
            return "Complex(0)"
        span = ", ".join("%d:%d" % (n, self.dims[n]) for n in self.degrees)
        return "Complex(%s | %s)" % (self.field.label, span)


def _as_mats(field, mats):
    return {n: m if hasattr(m, "shape") else field.mat(m) for n, m in mats.items()}


def make_complex(field, dims, diffs=None):
    """Complex from dims and differentials; list-of-list matrices allowed."""
    return Complex(field, dims, _as_mats(field, diffs or {}))


def zero_complex(field):
    return Complex(field, {}, {})


def one_complex(field, deg=0, dim=1):
    """dim copies of the field sitting in a single degree."""
    return Complex(field, {deg: dim}, {})


class ChainMap:
    """Degree zero map of complexes, commuting with the differentials."""

    def __init__(self, source, target, comps, check=True):
        source.field.require_same(target.field)
        self.field = source.field
        self.source = source
        self.target = target
        cs = {}
        for n, m in comps.items():
            n = int(n)
            if check and m.shape != (target.dim(n), source.dim(n)):
                raise ShapeError(
                    "component at degree %d has shape %s, expected (%d, %d)"
                    % (n, m.shape, target.dim(n), source.dim(n)),
                    degree=n,
                )
            if m.size and not self.field.is_zero(m):
                cs[n] = self.field.reduce(m) if self.field.kind == "fp" else m
        self.comps = cs
        if check:
            degs = set(source.dims) | set(target.dims)
            for n in sorted(degs):
                lhs = self.field.matmul(target.d(n), self.component(n))
                rhs = self.field.matmul(self.component(n + 1), source.d(n))
                if not self.field.eq(lhs, rhs):
                    raise ShapeError(
                        "map does not commute with d at degree %d" % n, degree=n
                    )

    def component(self, n):
        m = self.comps.get(n)
        if m is None:
            return self.field.zeros(self.target.dim(n), self.source.dim(n))
        return m

    def is_zero(self):
        return not self.comps

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        if set(self.comps) != set(other.comps):
            return False
        return all(self.field.eq(m, other.comps[n]) for n, m in self.comps.items())

    def __repr__(self):
        return "ChainMap(%r -> %r)" % (self.source, self.target)


def chain_map(source, target, comps, check=True):
    return ChainMap(source, target, _as_mats(source.field, comps), check=check)


def identity_map(c):
    return ChainMap(c, c, {n: c.field.eye(d) for n, d in c.dims.items()}, check=False)


def zero_map(source, target):
    source.field.require_same(target.field)
    return ChainMap(source, target, {}, check=False)


def compose(g, f):
    """g after f."""
    if f.target is not g.source and f.target != g.source:
        raise ShapeError("compose: middle objects differ")
    comps = {}
    for n in f.source.dims:
        if g.target.dim(n) == 0:
            continue
        comps[n] = f.field.matmul(g.component(n), f.component(n))
    return ChainMap(f.source, g.target, comps, check=False)


def map_add(f, g):
    if f.source != g.source or f.target != g.target:
        raise ShapeError("map_add: endpoint mismatch")
    comps = {}
    for n in set(f.comps) | set(g.comps):
        comps[n] = f.field.add(f.component(n), g.component(n))
    return ChainMap(f.source, f.target, comps, check=False)


def map_scale(c, f):
    return ChainMap(
        f.source, f.target, {n: f.field.scale(c, m) for n, m in f.comps.items()},
        check=False,
    )


# -- constructions ------------------------------------------------------------


def shift(c, k):
    dims = {n - k: d for n, d in c.dims.items()}
    sign = -1 if k % 2 else 1
    diffs = {}
    for n, m in c.diffs.items():
        diffs[n - k] = c.field.scale(sign, m) if sign < 0 else m
    return Complex(c.field, dims, diffs, check=False)


def shift_map(f, k):
    sc = shift(f.source, k)
    tc = shift(f.target, k)
    return ChainMap(sc, tc, {n - k: m for n, m in f.comps.items()}, check=False)


def block_matrix(field, row_dims, col_dims, entries):
    """Assemble a block matrix; entries maps (i, j) -> matrix."""
    rows = sum(row_dims)
    cols = sum(col_dims)
    out = field.zeros(rows, cols)
    roff = [0]
    for d in row_dims:
        roff.append(roff[-1] + d)
    coff = [0]
    for d in col_dims:
        coff.append(coff[-1] + d)
    for (i, j), m in entries.items():
        if m.size == 0:
            continue
        out[roff[i]:roff[i + 1], coff[j]:coff[j + 1]] = m
    return out


def direct_sum(a, b):
    a.field.require_same(b.field)
    dims = {}
    for n in set(a.dims) | set(b.dims):
        dims[n] = a.dim(n) + b.dim(n)
    diffs = {}
    for n in set(a.diffs) | set(b.diffs):
        diffs[n] = block_matrix(
            a.field,
            [a.dim(n + 1), b.dim(n + 1)],
            [a.dim(n), b.dim(n)],
            {(0, 0): a.d(n), (1, 1): b.d(n)},
        )
    return Complex(a.field, dims, diffs, check=False)


def sum_inclusions(a, b):
    """The two canonical maps into direct_sum(a, b)."""
    s = direct_sum(a, b)
    ia = {}
    ib = {}
    f = a.field
    for n in s.dims:
        if a.dim(n):
            ia[n] = block_matrix(f, [a.dim(n), b.dim(n)], [a.dim(n)], {(0, 0): f.eye(a.dim(n))})
        if b.dim(n):
            ib[n] = block_matrix(f, [a.dim(n), b.dim(n)], [b.dim(n)], {(1, 0): f.eye(b.dim(n))})
    return s, ChainMap(a, s, ia, check=False), ChainMap(b, s, ib, check=False)


def cone(f):
    """Mapping cone; acyclic exactly when f is a quasi-isomorphism."""
    a, b = f.source, f.target
    fld = f.field
    dims = {}
    for n in set(a.dims) | set(b.dims) | {m - 1 for m in a.dims}:
        d = a.dim(n + 1) + b.dim(n)
        if d:
            dims[n] = d
    diffs = {}
    for n in dims:
        if dims.get(n + 1, 0) == 0:
            continue
        diffs[n] = block_matrix(
            fld,
            [a.dim(n + 2), b.dim(n + 1)],
            [a.dim(n + 1), b.dim(n)],
            {
                (0, 0): fld.neg(a.d(n + 1)),
                (1, 0): f.component(n + 1),
                (1, 1): b.d(n),
            },
        )
    return Complex(fld, dims, diffs, check=False)


def is_quasi_iso(f):
    return cone(f).is_acyclic()


def tensor(a, b):
    """Tensor product with Koszul signs; block bases ordered by ascending
    degree of the first factor, row-major within each block."""
    a.field.require_same(b.field)
    fld = a.field
    adeg = a.degrees
    bdeg = b.degrees
    dims = {}
    blocks = {}  # n -> list of (i, j) in order
    for i in adeg:
        for j in bdeg:
            n = i + j
            dims[n] = dims.get(n, 0) + a.dims[i] * b.dims[j]
            blocks.setdefault(n, []).append((i, j))
    diffs = {}
    for n, blist in blocks.items():
        tlist = blocks.get(n + 1, [])
        if not tlist:
            continue
        tindex = {bj: k for k, bj in enumerate(tlist)}
        entries = {}
        for col, (i, j) in enumerate(blist):
            if (i + 1, j) in tindex:
                entries[(tindex[(i + 1, j)], col)] = fld.kron(a.d(i), fld.eye(b.dims[j]))
            if (i, j + 1) in tindex:
                m = fld.kron(fld.eye(a.dims[i]), b.d(j))
                if i % 2:
                    m = fld.neg(m)
                entries[(tindex[(i, j + 1)], col)] = m
        diffs[n] = block_matrix(
            fld,
            [a.dims[i] * b.dims[j] for (i, j) in tlist],
            [a.dims[i] * b.dims[j] for (i, j) in blist],
            entries,
        )
    return Complex(fld, dims, diffs, check=False)


def tensor_map(f, g):
    """Tensor of two degree-zero chain maps (no Koszul sign needed)."""
    f.field.require_same(g.field)
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    fld = f.field
    comps = {}
    for n in src.dims:
        sblocks = [
            (i, n - i) for i in f.source.degrees if g.source.dim(n - i)
        ]
        tblocks = [
            (i, n - i) for i in f.target.degrees if g.target.dim(n - i)
        ]
        tindex = {bj: k for k, bj in enumerate(tblocks)}
        entries = {}
        for col, (i, j) in enumerate(sblocks):
            if (i, j) in tindex:
                entries[(tindex[(i, j)], col)] = fld.kron(
                    f.component(i), g.component(j)
                )
        if tgt.dim(n) == 0:
            continue
        comps[n] = block_matrix(
            fld,
            [f.target.dims[i] * g.target.dims[j] for (i, j) in tblocks],
            [f.source.dims[i] * g.source.dims[j] for (i, j) in sblocks],
            entries,
        )
    return ChainMap(src, tgt, comps, check=False)


def hom_complex(c, d):
    """Internal hom; degree n holds the maps lowering the grading by -n."""
    c.field.require_same(d.field)
    fld = c.field
    dims = {}
    blocks = {}
    for m in c.degrees:
        for t in d.degrees:
            n = t - m
            dims[n] = dims.get(n, 0) + d.dims[t] * c.dims[m]
            blocks.setdefault(n, []).append(m)
    for n in blocks:
        blocks[n].sort()
    diffs = {}
    for n, blist in blocks.items():
        tlist = blocks.get(n + 1, [])
        if not tlist:
            continue
        tindex = {m: k for k, m in enumerate(tlist)}
        sign = -1 if n % 2 == 0 else 1  # -(-1)^n
        entries = {}
        for col, m in enumerate(blist):
            # post-composition with d_D
            if m in tindex and d.dim(m + n + 1):
                entries[(tindex[m], col)] = fld.kron(d.d(m + n), fld.eye(c.dims[m]))
            # pre-composition with d_C, into block m-1
            if (m - 1) in tindex and c.dim(m - 1):
                mat = fld.kron(fld.eye(d.dims[m + n]), c.d(m - 1).T)
                if sign < 0:
                    mat = fld.neg(mat)
                entries[(tindex[m - 1], col)] = mat
        diffs[n] = block_matrix(
            fld,
            [d.dims[m + n + 1] * c.dims[m] for m in tlist],
            [d.dims[m + n] * c.dims[m] for m in blist],
            entries,
        )
    return Complex(fld, dims, diffs, check=False)


def direct_sum_map(f, g):
    """Block diagonal map direct_sum(f.source, g.source) -> direct_sum(...)."""
    f.field.require_same(g.field)
    src = direct_sum(f.source, g.source)
    tgt = direct_sum(f.target, g.target)
    fld = f.field
    comps = {}
    for n in src.dims:
        if tgt.dim(n) == 0:
            continue
        mat = block_matrix(
            fld,
            [f.target.dim(n), g.target.dim(n)],
            [f.source.dim(n), g.source.dim(n)],
            {(0, 0): f.component(n), (1, 1): g.component(n)},
        )
        if not fld.is_zero(mat):
            comps[n] = mat
    return ChainMap(src, tgt, comps, check=False)


def _hom_blocks(c, d, n):
    """Ordered block degrees m of hom_complex(c, d) in degree n."""
    return [m for m in c.degrees if d.dim(m + n)]


def hom_precompose(phi, d):
    """hom(C, D) -> hom(C', D) induced by phi: C' -> C."""
    src = hom_complex(phi.target, d)
    tgt = hom_complex(phi.source, d)
    fld = phi.field
    comps = {}
    for n in src.dims:
        if tgt.dim(n) == 0:
            continue
        sblocks = _hom_blocks(phi.target, d, n)
        tblocks = _hom_blocks(phi.source, d, n)
        tindex = {m: k for k, m in enumerate(tblocks)}
        entries = {}
        for col, m in enumerate(sblocks):
            if m in tindex:
                entries[(tindex[m], col)] = fld.kron(
                    fld.eye(d.dim(m + n)), phi.component(m).T
                )
        comps[n] = block_matrix(
            fld,
            [d.dim(m + n) * phi.source.dim(m) for m in tblocks],
            [d.dim(m + n) * phi.target.dim(m) for m in sblocks],
            entries,
        )
    return ChainMap(src, tgt, comps)


def hom_postcompose(psi, c):
    """hom(C, D) -> hom(C, D') induced by psi: D -> D'."""
    src = hom_complex(c, psi.source)
    tgt = hom_complex(c, psi.target)
    fld = psi.field
    comps = {}
    for n in src.dims:
        if tgt.dim(n) == 0:
            continue
        sblocks = _hom_blocks(c, psi.source, n)
        tblocks = _hom_blocks(c, psi.target, n)
        tindex = {m: k for k, m in enumerate(tblocks)}
        entries = {}
        for col, m in enumerate(sblocks):
            if m in tindex:
                entries[(tindex[m], col)] = fld.kron(
                    psi.component(m + n), fld.eye(c.dim(m))
                )
        comps[n] = block_matrix(
            fld,
            [psi.target.dim(m + n) * c.dim(m) for m in tblocks],
            [psi.source.dim(m + n) * c.dim(m) for m in sblocks],
            entries,
        )
    return ChainMap(src, tgt, comps)


# -- Betti vector helpers -----------------------------------------------------


def betti_add(a, b):
    out = dict(a)
    for n, v in b.items():
        out[n] = out.get(n, 0) + v
        if out[n] == 0:
            del out[n]
    return out


def betti_shift(b, k):
    """Betti of shift(C, k) given Betti of C."""
    return {n - k: v for n, v in b.items()}


def betti_convolve(a, b):
    out = {}
    for i, u in a.items():
        for j, v in b.items():
            out[i + j] = out.get(i + j, 0) + u * v
    return {n: v for n, v in out.items() if v}


def render_betti(b):
    if not b:
        return "{}"
    return "{" + ", ".join("%d:%d" % (n, b[n]) for n in sorted(b)) + "}"


def homological(b):
    """Reindex a Betti vector homologically (negate the degree keys)."""
    return {-n: v for n, v in b.items()}


def require_nonzero(c, what="complex"):
    if c.is_zero():
        raise EmptyComplex("%s has no support" % what)
    return c
