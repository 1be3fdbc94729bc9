"""Stable-tail values: complexes with an eventually periodic summand.

A TailValue denotes

    finite  +  sum over i >= 0 of shift(base, i * stride)

with all copies of the base in play at once.  Any anchor offset folds into
the base (shift(base, a + i*s) is the i-th slice of the tail on
shift(base, a)), so tails are normalized to anchor 0 at construction and
every slice-to-slice map is an honest degree-0 chain map of bases.

A "tame" value is either a plain Complex or a TailValue; a tame map is
either a ChainMap or a TailMap (finite component plus an optional slice
component acting identically on every tail slice).  The dispatch helpers
below let the functor layer treat both uniformly.  Operations that would
leave the tame class (tail tensor tail, composing two tails through a
coend) raise TameClassError.
"""

from . import chain
from .chain import ChainMap, Complex
from .errors import BaseMismatch, FieldMismatch, ShapeError, StrideMismatch, TameClassError


class TailValue:
    """A complex plus infinitely many evenly spaced shifted copies of a base."""

    def __init__(self, finite, base, anchor=0, stride=1):
        if not isinstance(finite, Complex) or not isinstance(base, Complex):
            raise ShapeError("tail value parts must be complexes")
        if finite.field != base.field:
            raise FieldMismatch(
                "tail parts over different fields",
                finite=finite.field.label,
                base=base.field.label,
            )
        if not isinstance(stride, int) or stride < 1:
            raise StrideMismatch("stride must be a positive integer", stride=stride)
        if base.is_zero():
            raise ShapeError("tail base must be nonzero; use a plain complex instead")
        if anchor:
            base = chain.shift(base, anchor)
        self.finite = finite
        self.base = base
        self.anchor = 0
        self.stride = stride
        self.field = finite.field

    def __eq__(self, other):
        if not isinstance(other, TailValue):
            return NotImplemented
        return (
            self.finite == other.finite
            and self.base == other.base
            and self.stride == other.stride
        )

    def __hash__(self):
        raise TypeError("TailValue is not hashable")

    def __repr__(self):
        return "TailValue(finite={!r}, base={!r}, stride={})".format(
            self.finite, self.base, self.stride
        )


def is_tame(x):
    return isinstance(x, (Complex, TailValue))


def field_of(x):
    return x.field


def finite_part(x):
    return x.finite if isinstance(x, TailValue) else x


def tail_of(x):
    """(base, stride) for a tail value, None for a plain complex."""
    if isinstance(x, TailValue):
        return x.base, x.stride
    return None


def value_is_zero(x):
    if isinstance(x, TailValue):
        return False
    return x.is_zero()


def values_equal(a, b):
    if isinstance(a, TailValue) != isinstance(b, TailValue):
        return False
    return a == b


def shift_value(x, k):
    if isinstance(x, TailValue):
        return TailValue(
            chain.shift(x.finite, k), chain.shift(x.base, k), 0, x.stride
        )
    return chain.shift(x, k)


def sum_values(a, b):
    """Direct sum inside the tame class."""
    ta, tb = tail_of(a), tail_of(b)
    fin = chain.direct_sum(finite_part(a), finite_part(b))
    if ta is None and tb is None:
        return fin
    if ta is not None and tb is not None:
        if ta[1] != tb[1]:
            raise StrideMismatch(
                "cannot sum tails with different strides", left=ta[1], right=tb[1]
            )
        return TailValue(fin, chain.direct_sum(ta[0], tb[0]), 0, ta[1])
    base, stride = ta if ta is not None else tb
    return TailValue(fin, base, 0, stride)


def tensor_value(a, b):
    """Tensor of tame values; at most one factor may carry a tail."""
    ta, tb = tail_of(a), tail_of(b)
    if ta is not None and tb is not None:
        raise TameClassError(
            "tensor of two tail values leaves the stable-tail class"
        )
    if ta is None and tb is None:
        return chain.tensor(a, b)
    if ta is not None:
        fin = chain.tensor(a.finite, b)
        base = chain.tensor(a.base, b)
        stride = a.stride
    else:
        fin = chain.tensor(a, b.finite)
        base = chain.tensor(a, b.base)
        stride = b.stride
    if base.is_zero():
        return fin
    return TailValue(fin, base, 0, stride)


class BettiData:
    """Betti numbers of a tame value.

    `finite` covers the finite summand.  For a tail, `slice_betti` gives the
    Betti numbers of the base; slice i contributes them shifted down by
    i * stride, so the total in degree n is
    finite.get(n, 0) + sum over i of slice_betti.get(n + i*stride, 0).
    """

    def __init__(self, finite, slice_betti=None, stride=None):
        self.finite = dict(finite)
        self.slice_betti = dict(slice_betti) if slice_betti else {}
        self.stride = stride

    @property
    def has_tail(self):
        return bool(self.slice_betti)

    def in_degree(self, n):
        total = self.finite.get(n, 0)
        if self.slice_betti:
            i = 0
            top = max(self.slice_betti)
            while n + i * self.stride <= top:
                total += self.slice_betti.get(n + i * self.stride, 0)
                i += 1
        return total

    def is_trivial(self):
        return not self.finite and not self.slice_betti

    def __eq__(self, other):
        if not isinstance(other, BettiData):
            return NotImplemented
        if self.finite != other.finite or self.slice_betti != other.slice_betti:
            return False
        return not self.slice_betti or self.stride == other.stride

    def render(self):
        text = chain.render_betti(self.finite)
        if self.slice_betti:
            text += " + tail[slice {}, stride {}]".format(
                chain.render_betti(self.slice_betti), self.stride
            )
        return text


def betti_value(x):
    if isinstance(x, TailValue):
        return BettiData(x.finite.betti(), x.base.betti(), x.stride)
    return BettiData(x.betti())


def value_is_acyclic(x):
    if isinstance(x, TailValue):
        return x.finite.is_acyclic() and x.base.is_acyclic()
    return x.is_acyclic()


def value_is_perfect(x):
    """Perfect means quasi-isomorphic to a bounded complex: any tail is acyclic."""
    if isinstance(x, TailValue):
        return x.base.is_acyclic()
    return True


def truncate_value(x, copies):
    """Materialize the first `copies` tail slices as an ordinary complex.

    The block order in each degree is [finite, slice 0, slice 1, ...]; maps
    materialized by `truncate_map` use the same layout.
    """
    if not isinstance(x, TailValue):
        return x
    if copies < 0:
        raise ShapeError("cannot truncate to a negative number of slices")
    parts = [x.finite]
    parts.extend(chain.shift(x.base, i * x.stride) for i in range(copies))
    total = parts[0]
    for piece in parts[1:]:
        total = chain.direct_sum(total, piece)
    return total


class TailMap:
    """A map of tame values: a finite component plus one slice component.

    The slice component acts as the same base map on every tail slice; it
    may only be present when both endpoints carry tails of equal stride.
    Cross terms between finite parts and tails are zero by definition, so
    validating the two components validates the whole map.
    """

    def __init__(self, source, target, fin, slice_map=None):
        if not is_tame(source) or not is_tame(target):
            raise ShapeError("tail map endpoints must be tame values")
        if not isinstance(fin, ChainMap):
            raise ShapeError("finite component must be a chain map")
        if fin.source != finite_part(source) or fin.target != finite_part(target):
            raise BaseMismatch("finite component does not match the endpoints")
        if slice_map is not None and slice_map.is_zero():
            slice_map = None
        if slice_map is not None:
            ts, tt = tail_of(source), tail_of(target)
            if ts is None or tt is None:
                raise BaseMismatch(
                    "slice component requires tails on both endpoints"
                )
            if ts[1] != tt[1]:
                raise StrideMismatch(
                    "slice component between tails of different strides",
                    source=ts[1],
                    target=tt[1],
                )
            if slice_map.source != ts[0] or slice_map.target != tt[0]:
                raise BaseMismatch("slice component does not match the tail bases")
        self.source = source
        self.target = target
        self.fin = fin
        self.slice_map = slice_map
        self.field = fin.field

    def is_zero(self):
        return self.fin.is_zero() and self.slice_map is None

    def __eq__(self, other):
        if not isinstance(other, TailMap):
            return NotImplemented
        return (
            values_equal(self.source, other.source)
            and values_equal(self.target, other.target)
            and self.fin == other.fin
            and self.slice_map == other.slice_map
        )

    def __hash__(self):
        raise TypeError("TailMap is not hashable")


def is_tame_map(f):
    return isinstance(f, (ChainMap, TailMap))


def map_source(f):
    return f.source


def map_target(f):
    return f.target


def fin_component(f):
    return f.fin if isinstance(f, TailMap) else f


def slice_component(f):
    return f.slice_map if isinstance(f, TailMap) else None




def tame_map(source, target, fin, slice_map=None):
    """Build a map of tame values, collapsing to a ChainMap when possible."""
    if (
        not isinstance(source, TailValue)
        and not isinstance(target, TailValue)
        and slice_map is None
    ):
        if fin.source != source or fin.target != target:
            raise BaseMismatch("map does not match the endpoints")
        return fin
    return TailMap(source, target, fin, slice_map)


def tame_identity(x):
    if isinstance(x, TailValue):
        return TailMap(x, x, chain.identity_map(x.finite), chain.identity_map(x.base))
    return chain.identity_map(x)


def tame_zero(source, target):
    fin = chain.zero_map(finite_part(source), finite_part(target))
    return tame_map(source, target, fin)


def tame_compose(g, f):
    if not values_equal(map_target(f), map_source(g)):
        raise ShapeError("composition endpoints do not match")
    if isinstance(f, ChainMap) and isinstance(g, ChainMap):
        return chain.compose(g, f)
    fin = chain.compose(fin_component(g), fin_component(f))
    sf, sg = slice_component(f), slice_component(g)
    slice_map = chain.compose(sg, sf) if (sf is not None and sg is not None) else None
    return tame_map(map_source(f), map_target(g), fin, slice_map)


def tame_eq(f, g):
    if not values_equal(map_source(f), map_source(g)):
        return False
    if not values_equal(map_target(f), map_target(g)):
        return False
    if fin_component(f) != fin_component(g):
        return False
    sf, sg = slice_component(f), slice_component(g)
    if sf is None:
        return sg is None or sg.is_zero()
    if sg is None:
        return sf.is_zero()
    return sf == sg


def tame_map_is_zero(f):
    if isinstance(f, TailMap):
        return f.is_zero()
    return f.is_zero()


def tame_add(f, g):
    if not values_equal(map_source(f), map_source(g)) or not values_equal(
        map_target(f), map_target(g)
    ):
        raise ShapeError("sum of maps with different endpoints")
    fin = chain.map_add(fin_component(f), fin_component(g))
    sf, sg = slice_component(f), slice_component(g)
    if sf is None and sg is None:
        slice_map = None
    elif sf is None:
        slice_map = sg
    elif sg is None:
        slice_map = sf
    else:
        slice_map = chain.map_add(sf, sg)
    return tame_map(map_source(f), map_target(f), fin, slice_map)


def tame_scale(f, scalar):
    fin = chain.map_scale(fin_component(f), scalar)
    sl = slice_component(f)
    slice_map = chain.map_scale(sl, scalar) if sl is not None else None
    return tame_map(map_source(f), map_target(f), fin, slice_map)


def sum_maps(f, g):
    """Block diagonal map of tame direct sums, matching sum_values' layout."""
    source = sum_values(map_source(f), map_source(g))
    target = sum_values(map_target(f), map_target(g))
    fin = chain.direct_sum_map(fin_component(f), fin_component(g))
    sf, sg = slice_component(f), slice_component(g)
    slice_map = None
    if isinstance(source, TailValue) and isinstance(target, TailValue):
        if sf is not None or sg is not None:
            fld = fin.field
            src_bases = [tail_of(map_source(f)), tail_of(map_source(g))]
            tgt_bases = [tail_of(map_target(f)), tail_of(map_target(g))]
            comps = {}
            for n in set(source.base.dims) & set(target.base.dims):
                cols = [t[0].dim(n) if t else 0 for t in src_bases]
                rows = [t[0].dim(n) if t else 0 for t in tgt_bases]
                entries = {}
                if sf is not None:
                    entries[(0, 0)] = sf.component(n)
                if sg is not None:
                    entries[(1, 1)] = sg.component(n)
                mat = chain.block_matrix(fld, rows, cols, entries)
                if not fld.is_zero(mat):
                    comps[n] = mat
            slice_map = chain.chain_map(source.base, target.base, comps)
    return tame_map(source, target, fin, slice_map)


def tensor_tame_map(f, g):
    """Tensor of tame maps, matching tensor_value's layout.

    Both maps must have degree 0 so no Koszul signs appear.
    """
    a, b = map_source(f), map_source(g)
    c, d = map_target(f), map_target(g)
    ta, tb = tail_of(a) or tail_of(c), tail_of(b) or tail_of(d)
    if ta is not None and tb is not None:
        raise TameClassError("tensor of two tail maps leaves the stable-tail class")
    if ta is None and tb is None:
        return chain.tensor_map(f, g)
    source = tensor_value(a, b)
    target = tensor_value(c, d)
    if ta is not None:
        fin = chain.tensor_map(fin_component(f), g)
        sl = slice_component(f)
        slice_map = chain.tensor_map(sl, g) if sl is not None else None
    else:
        fin = chain.tensor_map(f, fin_component(g))
        sl = slice_component(g)
        slice_map = chain.tensor_map(f, sl) if sl is not None else None
    if slice_map is not None and (
        not isinstance(source, TailValue) or not isinstance(target, TailValue)
    ):
        slice_map = None
    return tame_map(source, target, fin, slice_map)


def shift_tame_map(f, k):
    fin = chain.shift_map(fin_component(f), k)
    sl = slice_component(f)
    slice_map = chain.shift_map(sl, k) if sl is not None else None
    return tame_map(
        shift_value(map_source(f), k), shift_value(map_target(f), k), fin, slice_map
    )


def truncate_map(f, copies):
    """Materialize a tame map on `copies` tail slices, matching truncate_value."""
    source = truncate_value(map_source(f), copies)
    target = truncate_value(map_target(f), copies)
    if isinstance(f, ChainMap) and not isinstance(map_source(f), TailValue):
        return f
    fld = f.field
    fin = fin_component(f)
    sl = slice_component(f)
    ts = tail_of(map_source(f))
    comps = {}
    degrees = set(source.dims) | set(target.dims)
    for n in sorted(degrees):
        row_dims = _trunc_widths(map_target(f), n, copies)
        col_dims = _trunc_widths(map_source(f), n, copies)
        entries = {}
        block = fin.component(n)
        if block.shape[0] and block.shape[1]:
            entries[(0, 0)] = block
        if sl is not None:
            for i in range(copies):
                m = n + i * ts[1]
                piece = sl.component(m)
                if piece.shape[0] and piece.shape[1]:
                    entries[(1 + i, 1 + i)] = piece
        mat = chain.block_matrix(fld, row_dims, col_dims, entries)
        if mat.shape[0] and mat.shape[1]:
            comps[n] = mat
    return chain.chain_map(source, target, comps)


def _trunc_widths(value, n, copies):
    widths = [finite_part(value).dim(n)]
    t = tail_of(value)
    if t is not None:
        base, stride = t
        widths.extend(base.dim(n + i * stride) for i in range(copies))
    else:
        widths.extend(0 for _ in range(copies))
    return widths
