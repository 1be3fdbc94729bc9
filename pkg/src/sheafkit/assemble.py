"""Totalization of finite diagrams of shifted tame values.

An assembly is built from slots (value, shift) and arrows between slots.
Slot nu contributes shift(value_nu, k_nu) to the total; an arrow from slot s
to slot d carries a degree-0 tame map of the raw values, requires
k_s - k_d == 1, and lands in the differential as scalar * component.  With
the shift convention d_{shift(C,k)} = (-1)^k d_C, the mixed d*d terms of a
single arrow cancel exactly because the arrow is a chain map; arrow-arrow
terms across two steps must cancel by the caller's sign discipline, and the
constructor's d*d == 0 check enforces that.

Cones, simplicial bar and cobar complexes, and one-step extensions are all
instances.  Tail sectors assemble separately: slices of a tail never
interact with finite parts, every slot's tail has anchor 0, so the slice
complexes for all i >= 0 share one model (slice 0); slice i differs from
shift(slice_0, i*stride) by a diagonal sign isomorphism, which Betti-level
verdicts never see.

The per-slot block positions are retained so that inclusions, projections
and comparison maps between assemblies can be built mechanically and then
validated as chain maps.
"""

from . import chain, tails
from .chain import ChainMap, Complex
from .errors import FieldMismatch, ShapeError, StrideMismatch


class Assembly:
    """A totalized diagram: the resulting tame value plus block layout."""

    def __init__(self, value, slots, fin_pos, tail_pos, stride):
        self.value = value
        self.slots = slots
        self.fin_pos = fin_pos
        self.tail_pos = tail_pos
        self.stride = stride
        self.field = tails.field_of(value)

    def slot_count(self):
        return len(self.slots)


def _sector(field, parts, arrows):
    """Totalize plain complexes with shifts; returns (Complex, positions).

    positions[i] maps a total degree to (offset, width) for part i's block.
    """
    widths = {}
    for i, (cx, k) in enumerate(parts):
        for n in cx.dims:
            t = n - k
            w = cx.dim(n)
            if w:
                widths.setdefault(t, {})[i] = w
    dims = {}
    pos = [{} for _ in parts]
    for t, per in widths.items():
        off = 0
        for i in range(len(parts)):
            w = per.get(i, 0)
            if w:
                pos[i][t] = (off, w)
                off += w
        dims[t] = off
    diffs = {}
    for t in dims:
        if t + 1 not in dims:
            continue
        row_dims = [parts[i][0].dim(t + 1 + parts[i][1]) for i in range(len(parts))]
        col_dims = [parts[i][0].dim(t + parts[i][1]) for i in range(len(parts))]
        entries = {}
        for i, (cx, k) in enumerate(parts):
            d = cx.d(t + k)
            if d.shape[0] and d.shape[1]:
                entries[(i, i)] = field.neg(d) if k % 2 else d
        for src, dst, f, scalar in arrows:
            comp = f.component(t + parts[src][1])
            if comp.shape[0] and comp.shape[1]:
                block = field.scale(scalar, comp) if scalar != 1 else comp
                prev = entries.get((dst, src))
                entries[(dst, src)] = field.add(prev, block) if prev is not None else block
        mat = chain.block_matrix(field, row_dims, col_dims, entries)
        if not field.is_zero(mat):
            diffs[t] = mat
    return Complex(field, dims, diffs), pos


def assemble(field, slots, arrows=()):
    """Totalize tame slots with arrows into an Assembly.

    slots: list of (value, shift).  arrows: list of (src, dst, map, scalar)
    where map is a degree-0 tame map value_src -> value_dst and the shifts
    satisfy k_src - k_dst == 1.
    """
    slots = list(slots)
    arrows = list(arrows)
    for value, _ in slots:
        if tails.field_of(value) != field:
            raise FieldMismatch(
                "slot over a different field", expected=field.label
            )
    for src, dst, f, _ in arrows:
        if slots[src][1] - slots[dst][1] != 1:
            raise ShapeError(
                "arrow must drop the shift by exactly one",
                source_shift=slots[src][1],
                target_shift=slots[dst][1],
            )
        if not tails.values_equal(tails.map_source(f), slots[src][0]):
            raise ShapeError("arrow source does not match its slot")
        if not tails.values_equal(tails.map_target(f), slots[dst][0]):
            raise ShapeError("arrow target does not match its slot")

    fin_parts = [(tails.finite_part(v), k) for v, k in slots]
    fin_arrows = [
        (src, dst, tails.fin_component(f), scalar) for src, dst, f, scalar in arrows
    ]
    fin_value, fin_pos = _sector(field, fin_parts, fin_arrows)

    tslot = [i for i, (v, _) in enumerate(slots) if tails.tail_of(v) is not None]
    if not tslot:
        return Assembly(fin_value, slots, fin_pos, [None] * len(slots), None)

    strides = {tails.tail_of(slots[i][0])[1] for i in tslot}
    if len(strides) != 1:
        raise StrideMismatch(
            "assembly mixes tails with different strides", strides=sorted(strides)
        )
    stride = strides.pop()
    back = {i: j for j, i in enumerate(tslot)}
    base_parts = [(tails.tail_of(slots[i][0])[0], slots[i][1]) for i in tslot]
    base_arrows = []
    for src, dst, f, scalar in arrows:
        sl = tails.slice_component(f)
        if sl is not None:
            base_arrows.append((back[src], back[dst], sl, scalar))
    base_value, base_pos = _sector(field, base_parts, base_arrows)

    tail_pos = [None] * len(slots)
    for i in tslot:
        tail_pos[i] = base_pos[back[i]]
    if base_value.is_zero():
        return Assembly(fin_value, slots, fin_pos, [None] * len(slots), None)
    value = tails.TailValue(fin_value, base_value, 0, stride)
    return Assembly(value, slots, fin_pos, tail_pos, stride)


def single_assembly(value):
    return assemble(tails.field_of(value), [(value, 0)])


def _positions_map(field, src_pos, dst_pos, src_dims, dst_dims, pieces):
    """Block components from layout positions.

    pieces: list of (src_idx, dst_idx, component lookup, scalar) where the
    lookup takes the raw degree (t + shift) and returns a matrix.
    """
    comps = {}
    degrees = set(src_dims) & set(dst_dims)
    for t in degrees:
        rows = dst_dims[t]
        cols = src_dims[t]
        mat = field.zeros(rows, cols)
        hit = False
        for src_idx, dst_idx, lookup, scalar, k in pieces:
            sp = src_pos[src_idx].get(t)
            dp = dst_pos[dst_idx].get(t)
            if sp is None or dp is None:
                continue
            block = lookup(t + k)
            if not (block.shape[0] and block.shape[1]) or field.is_zero(block):
                continue
            if block.shape != (dp[1], sp[1]):
                raise ShapeError(
                    "component does not fit its block",
                    degree=t,
                    expected=(dp[1], sp[1]),
                    got=block.shape,
                )
            if scalar != 1:
                block = field.scale(scalar, block)
            mat[dp[0] : dp[0] + dp[1], sp[0] : sp[0] + sp[1]] += block
            hit = True
        if hit:
            mat = field.reduce(mat)
            if not field.is_zero(mat):
                comps[t] = mat
    return comps


def assembly_map(src, dst, blocks):
    """A degree-0 map src.value -> dst.value from slotwise pieces.

    blocks: dict (dst_idx, src_idx) -> (tame map, scalar), each between raw
    slot values with equal shifts.  Validated as a chain map on return.
    """
    field = src.field
    fin_pieces = []
    slice_pieces = []
    for (d_idx, s_idx), (f, scalar) in sorted(blocks.items()):
        ks = src.slots[s_idx][1]
        kd = dst.slots[d_idx][1]
        if ks != kd:
            raise ShapeError(
                "comparison blocks need equal shifts", source=ks, target=kd
            )
        if not tails.values_equal(tails.map_source(f), src.slots[s_idx][0]):
            raise ShapeError("block source does not match its slot")
        if not tails.values_equal(tails.map_target(f), dst.slots[d_idx][0]):
            raise ShapeError("block target does not match its slot")
        fin = tails.fin_component(f)
        fin_pieces.append((s_idx, d_idx, fin.component, scalar, ks))
        sl = tails.slice_component(f)
        if sl is not None:
            if src.tail_pos[s_idx] is None or dst.tail_pos[d_idx] is None:
                raise ShapeError("slice block between slots without tails")
            slice_pieces.append((s_idx, d_idx, sl.component, scalar, ks))

    src_fin = tails.finite_part(src.value)
    dst_fin = tails.finite_part(dst.value)
    fin_comps = _positions_map(
        field, src.fin_pos, dst.fin_pos, dict(src_fin.dims), dict(dst_fin.dims), fin_pieces
    )
    fin_map = chain.chain_map(src_fin, dst_fin, fin_comps)

    slice_map = None
    ts = tails.tail_of(src.value)
    td = tails.tail_of(dst.value)
    if slice_pieces:
        slice_comps = _positions_map(
            field,
            src.tail_pos,
            dst.tail_pos,
            dict(ts[0].dims),
            dict(td[0].dims),
            slice_pieces,
        )
        slice_map = chain.chain_map(ts[0], td[0], slice_comps)
    return tails.tame_map(src.value, dst.value, fin_map, slice_map)


def assembly_inclusion(sub, big, slot_map):
    """Include a sub-assembly along slot_map (sub index -> big index)."""
    blocks = {}
    for s_idx, b_idx in slot_map.items():
        blocks[(b_idx, s_idx)] = (tails.tame_identity(sub.slots[s_idx][0]), 1)
    return assembly_map(sub, big, blocks)


def assembly_projection(big, sub, slot_map):
    """Project onto a sub-assembly along slot_map (sub index -> big index)."""
    blocks = {}
    for s_idx, b_idx in slot_map.items():
        blocks[(s_idx, b_idx)] = (tails.tame_identity(sub.slots[s_idx][0]), 1)
    return assembly_map(big, sub, blocks)


def augment_map(asm, target, pieces):
    """A map asm.value -> target from shift-0 slots.

    pieces: dict slot index -> (tame map slot value -> target, scalar).
    Slots with nonzero shift contribute zero.  Chain-map validation rejects
    incompatible pieces, e.g. faces that fail to cancel.
    """
    single = single_assembly(target)
    blocks = {(0, i): piece for i, piece in pieces.items()}
    f = assembly_map(asm, single, blocks)
    return tails.tame_map(asm.value, target, tails.fin_component(f), tails.slice_component(f))


def coaugment_map(source, asm, pieces):
    """A map source -> asm.value hitting shift-0 slots."""
    single = single_assembly(source)
    blocks = {(i, 0): piece for i, piece in pieces.items()}
    f = assembly_map(single, asm, blocks)
    return tails.tame_map(source, asm.value, tails.fin_component(f), tails.slice_component(f))


def cone_assembly(f):
    """Mapping cone of a tame map as an assembly (source at shift 1)."""
    field = tails.field_of(tails.map_source(f))
    return assemble(
        field,
        [(tails.map_source(f), 1), (tails.map_target(f), 0)],
        [(0, 1, f, 1)],
    )


def cone_value(f):
    return cone_assembly(f).value


def is_quasi_iso(f):
    """A tame map is a quasi-isomorphism iff its cone is acyclic."""
    return tails.value_is_acyclic(cone_value(f))
