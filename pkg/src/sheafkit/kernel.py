"""Convolution kernels between functor categories.

A kernel is a functor on product(opposite(P), Q): contravariant in the
first slot, covariant in the second.  Convolution (-) * K is the derived
coend over P, realized as the two-sided bar assembly whose slot for the
chain p_0 < ... < p_n is K(p_n, q) (x) F(p_0); the q-direction structure
maps act blockwise through K's covariant maps.

Composition of kernels is the same coend over the middle poset.  Kernels
with tail values support convolve and column but not composition: a tail
tensor tail leaves the tame class.

The unit and corepresentability laws are witnessed by explicit bar
augmentations; associativity is witnessed by an explicit signed basis
bijection between the two iterated bar complexes, validated as a chain
map, so the law holds by isomorphism rather than by Betti bookkeeping.
"""

from . import chain, tails
from .assemble import assembly_map, augment_map
from .errors import BaseMismatch, ShapeError, TameClassError
from .funcat import NatTrans, PFunctor, bar_tensor, unit_complex, yoneda
from .poset import opposite, pair_id, product, split_pair


class Kernel:
    """A tame-valued functor on product(opposite(left), right)."""

    def __init__(self, left, right, carrier, name=""):
        expected = product(opposite(left), right)
        if not carrier.poset.same_shape(expected):
            raise ShapeError(
                "carrier poset is not the twisted product",
                carrier=carrier.poset.name,
                expected=expected.name,
            )
        self.left = left
        self.right = right
        self.carrier = carrier
        self.field = carrier.field
        self.name = name or ("K_" + carrier.name if carrier.name else "K")

    def value(self, p, q):
        return self.carrier.value(pair_id(p, q))

    def map(self, pq, pq2):
        return self.carrier.map(pair_id(*pq), pair_id(*pq2))

    def has_tails(self):
        return self.carrier.has_tails()

    def support(self):
        return self.carrier.support()

    def __eq__(self, other):
        if not isinstance(other, Kernel):
            return NotImplemented
        return (
            self.left == other.left
            and self.right == other.right
            and self.carrier == other.carrier
        )

    def __repr__(self):
        return "Kernel(%s: %s -> %s)" % (self.name, self.left.name, self.right.name)


def make_kernel(left, right, field, values, edges=None, name=""):
    """Build a kernel from pairwise values and cover maps.

    values: dict (p, q) -> tame value; edges: dict ((p,q), (p',q')) -> tame
    map, keyed by covers of the twisted product.  Functoriality is checked
    by the carrier constructor.
    """
    base = product(opposite(left), right)
    vals = {pair_id(p, q): v for (p, q), v in values.items()}
    eds = {}
    for (src, dst), m in (edges or {}).items():
        eds[(pair_id(*src), pair_id(*dst))] = m
    carrier = PFunctor(base, field, vals, eds, check=True, name=name)
    return Kernel(left, right, carrier, name=name)


def kernel_from_functor(left, right, carrier, name=""):
    return Kernel(left, right, carrier, name=name)


def identity_kernel(poset, field):
    """The unit kernel: k in degree 0 on p <= q, identity structure maps."""
    unit = unit_complex(field)
    base = product(opposite(poset), poset)
    values = {}
    for p in poset.elements:
        for q in poset.elements:
            if poset.leq(p, q):
                values[pair_id(p, q)] = unit
    edges = {}
    ident = tails.tame_identity(unit)
    for a, b in base.covers:
        if a in values and b in values:
            edges[(a, b)] = ident
    carrier = PFunctor(base, field, values, edges, check=True, name="id")
    return Kernel(poset, poset, carrier, name="id_" + poset.name)


def column(k, p, name=""):
    """The functor K(p, -) on the right poset."""
    k.left.require_element(p)
    values = {}
    edges = {}
    for q in k.right.elements:
        v = k.value(p, q)
        if not tails.value_is_zero(v):
            values[q] = v
    for a, b in k.right.covers:
        m = k.carrier.map(pair_id(p, a), pair_id(p, b))
        if not tails.tame_map_is_zero(m):
            edges[(a, b)] = m
    return PFunctor(
        k.right, k.field, values, edges, check=False, name=name or "%s(%s,-)" % (k.name, p)
    )


def row(k, q, name=""):
    """The functor K(-, q) on the opposite of the left poset."""
    k.right.require_element(q)
    op = opposite(k.left)
    values = {}
    edges = {}
    for p in k.left.elements:
        v = k.value(p, q)
        if not tails.value_is_zero(v):
            values[p] = v
    for a, b in op.covers:
        m = k.carrier.map(pair_id(a, q), pair_id(b, q))
        if not tails.tame_map_is_zero(m):
            edges[(a, b)] = m
    return PFunctor(op, k.field, values, edges, check=False, name=name or "%s(-,%s)" % (k.name, q))


def _require_left_base(f, k):
    if f.poset != k.left:
        raise BaseMismatch(
            "functor lives on %s, kernel expects %s" % (f.poset.name, k.left.name)
        )
    f.field.require_same(k.field)


def convolve_assembled(f, k, name=""):
    """Convolution with its bar assemblies: (functor on right, q -> (asm, slots))."""
    _require_left_base(f, k)
    data = {}
    values = {}
    for q in k.right.elements:
        asm, slot_of = bar_tensor(row(k, q), f)
        data[q] = (asm, slot_of)
        if not tails.value_is_zero(asm.value):
            values[q] = asm.value
    edges = {}
    for a, b in k.right.covers:
        asm_a, slots_a = data[a]
        asm_b, slots_b = data[b]
        blocks = {}
        for c, i in slots_a.items():
            top = c[-1]
            m = tails.tensor_tame_map(
                k.carrier.map(pair_id(top, a), pair_id(top, b)),
                tails.tame_identity(f.value(c[0])),
            )
            blocks[(slots_b[c], i)] = (m, 1)
        m = assembly_map(asm_a, asm_b, blocks)
        if not tails.tame_map_is_zero(m):
            edges[(a, b)] = m
    out = PFunctor(
        k.right,
        k.field,
        values,
        edges,
        check=True,
        name=name or "%s*%s" % (f.name or "F", k.name),
    )
    return out, data


def convolve(f, k, name=""):
    return convolve_assembled(f, k, name=name)[0]


def compose_kernels_assembled(k, l, name=""):
    """Kernel composition with its assemblies: (kernel, (p, r) -> (asm, slots))."""
    if k.right != l.left:
        raise BaseMismatch(
            "kernels do not share the middle poset: %s vs %s"
            % (k.right.name, l.left.name)
        )
    k.field.require_same(l.field)
    if k.has_tails() or l.has_tails():
        raise TameClassError("composition of tail kernels leaves the tame class")
    base = product(opposite(k.left), l.right)
    data = {}
    values = {}
    for p in k.left.elements:
        for r in l.right.elements:
            asm, slot_of = bar_tensor(row(l, r), column(k, p))
            data[(p, r)] = (asm, slot_of)
            if not tails.value_is_zero(asm.value):
                values[pair_id(p, r)] = asm.value
    edges = {}
    for src, dst in base.covers:
        ps, rs = _unpair(base, src)
        pd, rd = _unpair(base, dst)
        asm_s, slots_s = data[(ps, rs)]
        asm_d, slots_d = data[(pd, rd)]
        blocks = {}
        for c, i in slots_s.items():
            m = tails.tensor_tame_map(
                l.carrier.map(pair_id(c[-1], rs), pair_id(c[-1], rd)),
                k.carrier.map(pair_id(ps, c[0]), pair_id(pd, c[0])),
            )
            blocks[(slots_d[c], i)] = (m, 1)
        m = assembly_map(asm_s, asm_d, blocks)
        if not tails.tame_map_is_zero(m):
            edges[(src, dst)] = m
    carrier = PFunctor(base, k.field, values, edges, check=True, name=name)
    kern = Kernel(k.left, l.right, carrier, name=name or "%s.%s" % (k.name, l.name))
    return kern, data


def compose_kernels(k, l, name=""):
    return compose_kernels_assembled(k, l, name=name)[0]


def _unpair(base, x):
    return split_pair(x)


def external_product(f0, g, left, name=""):
    """The kernel (p, q) -> F0(p) (x) G(q), F0 contravariant on the left."""
    if not f0.poset.same_shape(opposite(left)):
        raise BaseMismatch("first factor must live on the opposite of the left poset")
    f0.field.require_same(g.field)
    base = product(opposite(left), g.poset)
    values = {}
    for p in left.elements:
        for q in g.poset.elements:
            v = tails.tensor_value(f0.value(p), g.value(q))
            if not tails.value_is_zero(v):
                values[pair_id(p, q)] = v
    edges = {}
    for src, dst in base.covers:
        ps, qs = _unpair(base, src)
        pd, qd = _unpair(base, dst)
        if ps == pd:
            m = tails.tensor_tame_map(tails.tame_identity(f0.value(ps)), g.map(qs, qd))
        else:
            m = tails.tensor_tame_map(f0.map(ps, pd), tails.tame_identity(g.value(qs)))
        if not tails.tame_map_is_zero(m):
            edges[(src, dst)] = m
    carrier = PFunctor(base, g.field, values, edges, check=True, name=name)
    return Kernel(left, g.poset, carrier, name=name or "ext")


# -- comparison maps ---------------------------------------------------------------


def unit_comparison(f, data=None):
    """The augmentation convolve(F, identity_kernel) -> F as a NatTrans."""
    idk = identity_kernel(f.poset, f.field)
    conv, data = convolve_assembled(f, idk)
    comps = {}
    for q in f.poset.elements:
        asm, slot_of = data[q]
        pieces = {}
        for p in f.poset.elements:
            if f.poset.leq(p, q) and not tails.value_is_zero(f.value(p)):
                pieces[slot_of[(p,)]] = (f.map(p, q), 1)
        m = augment_map(asm, f.value(q), pieces)
        if not tails.tame_map_is_zero(m):
            comps[q] = m
    return NatTrans(conv, f, comps)


def corep_comparison(k, p):
    """The augmentation convolve(yoneda(p), K) -> column(K, p) as a NatTrans."""
    f = yoneda(k.left, p, unit_complex(k.field))
    conv, data = convolve_assembled(f, k)
    col = column(k, p)
    comps = {}
    for q in k.right.elements:
        asm, slot_of = data[q]
        pieces = {}
        for c0 in k.left.elements:
            if not k.left.leq(p, c0):
                continue
            if tails.value_is_zero(k.value(c0, q)):
                continue
            pieces[slot_of[(c0,)]] = (k.map((c0, q), (p, q)), 1)
        m = augment_map(asm, col.value(q), pieces)
        if not tails.tame_map_is_zero(m):
            comps[q] = m
    return NatTrans(conv, col, comps)


def euler_profile(f, k):
    """Predicted Euler characteristics of convolve(f, k), per element.

    chi(conv(q)) = sum over strict chains p_0 < ... < p_n of
    (-1)^n chi(F(p_0)) chi(K(p_n, q)), computed from stalk data alone.
    """
    if f.has_tails() or k.has_tails():
        raise TameClassError("Euler characteristics need finite values")
    poset = k.left
    chains = [poset.chain_elements(c) for c in poset.all_chains()]
    out = {}
    for q in k.right.elements:
        total = 0
        for c in chains:
            sign = -1 if (len(c) - 1) % 2 else 1
            total += sign * f.value(c[0]).euler() * k.value(c[-1], q).euler()
        out[q] = total
    return out


# -- associativity -----------------------------------------------------------------


def _tensor_block(left_dims, right_dims, deg):
    """Blocks of a tensor degree, ascending left degree.

    Yields (left_deg, offset, left_width, right_width) for nonempty blocks.
    """
    out = []
    off = 0
    for a in sorted(left_dims):
        wl = left_dims[a]
        wr = right_dims.get(deg - a, 0)
        if wl and wr:
            out.append((a, off, wl, wr))
            off += wl * wr
    return out


def _block_offset(left_dims, right_dims, deg, a):
    for a2, off, _, _ in _tensor_block(left_dims, right_dims, deg):
        if a2 == a:
            return off
    return None


def _sector_complex(value, sector):
    if sector == "fin":
        return tails.finite_part(value)
    t = tails.tail_of(value)
    return t[0] if t is not None else None


def _sector_pos(asm, sector):
    return asm.fin_pos if sector == "fin" else asm.tail_pos


def associator(f, k, l):
    """Explicit isomorphisms (F*K)*L -> F*(K.L), one per element of l.right.

    Both sides decompose into the same summands L(q_m, r) (x) K(p_n, q_0)
    (x) F(p_0) over pairs of strict chains (one in P, one in Q); the map
    matches basis vectors through the two nesting orders, with the sign
    (-1)^{n(a+m)} where a is the internal degree of the L factor.  Each
    returned map is a validated chain map whose components are signed
    permutation matrices, so it is an isomorphism, not merely a
    quasi-isomorphism.
    """
    _require_left_base(f, k)
    if k.has_tails() or l.has_tails():
        raise TameClassError("associativity comparison needs finite kernels")
    conv1, data1 = convolve_assembled(f, k)
    kl, kl_data = compose_kernels_assembled(k, l)
    conv2, data2 = convolve_assembled(f, kl)
    field = f.field

    out = {}
    for r in l.right.elements:
        lhs_asm, lhs_slots = bar_tensor(row(l, r), conv1)
        rhs_asm, rhs_slots = data2[r]
        lhs_val = lhs_asm.value
        rhs_val = rhs_asm.value
        fin_map = None
        slice_map = None
        sectors = ["fin"] + (["tail"] if tails.tail_of(lhs_val) is not None else [])
        for sector in sectors:
            src = _sector_complex(lhs_val, sector)
            dst = _sector_complex(rhs_val, sector)
            if dst is None or dict(src.dims) != dict(dst.dims):
                raise ShapeError(
                    "associator sides have different graded dimensions",
                    sector=sector,
                )
            mats = {t: field.zeros(w, w) for t, w in src.dims.items()}
            entries = _associator_entries(
                f, k, l, r, data1, kl_data, lhs_asm, lhs_slots, rhs_asm,
                rhs_slots, sector,
            )
            for t, row_i, col_i, sign in entries:
                mats[t][row_i, col_i] = field.scalar(sign)
            cm = chain.chain_map(
                src, dst, {t: m for t, m in mats.items() if not field.is_zero(m)}
            )
            if sector == "fin":
                fin_map = cm
            else:
                slice_map = cm
        out[r] = tails.tame_map(lhs_val, rhs_val, fin_map, slice_map)
    return out


def _associator_entries(
    f, k, l, r, data1, kl_data, lhs_asm, lhs_slots, rhs_asm, rhs_slots, sector
):
    """(degree, rhs index, lhs index, sign) for every basis vector.

    Source positions walk tensor(L, inner bar) through the left nesting;
    target positions walk tensor(middle bar, F) through the right nesting.
    The L and K factors are always finite here, so only the F factor
    switches between its finite part and its tail base.
    """
    lhs_pos = _sector_pos(lhs_asm, sector)
    rhs_pos = _sector_pos(rhs_asm, sector)
    entries = []
    for c_q, i_q in lhs_slots.items():
        m = len(c_q) - 1
        q0, qm = c_q[0], c_q[-1]
        l_dims = dict(l.value(qm, r).dims)
        inner_asm, inner_slots = data1[q0]
        inner = _sector_complex(inner_asm.value, sector)
        if inner is None:
            continue
        inner_pos = _sector_pos(inner_asm, sector)
        inner_dims = dict(inner.dims)
        for t, (off_q, _) in (lhs_pos[i_q] or {}).items():
            u = t + m
            for a, a_off, wl, wv in _tensor_block(l_dims, inner_dims, u):
                b = u - a
                for c_p, i_p in inner_slots.items():
                    n = len(c_p) - 1
                    p0, pn = c_p[0], c_p[-1]
                    ip = (inner_pos[i_p] or {}).get(b)
                    if ip is None:
                        continue
                    off_p = ip[0]
                    k_dims = dict(k.value(pn, q0).dims)
                    fsec = _sector_complex(f.value(p0), sector)
                    if fsec is None:
                        continue
                    f_dims = dict(fsec.dims)
                    w = b + n
                    for e, e_off, wk, wf in _tensor_block(k_dims, f_dims, w):
                        x = a + e
                        g = x - m
                        w_asm, w_slots = kl_data[(pn, r)]
                        w_dims = dict(tails.finite_part(w_asm.value).dims)
                        wslot = w_asm.fin_pos[w_slots[c_q]].get(g)
                        rslot = (rhs_pos[rhs_slots[c_p]] or {}).get(t)
                        g_off = _block_offset(w_dims, f_dims, t + n, g)
                        aa_off = _block_offset(l_dims, k_dims, x, a)
                        if wslot is None or rslot is None or g_off is None or aa_off is None:
                            raise ShapeError("associator blocks out of step")
                        off_w = wslot[0]
                        off_r = rslot[0]
                        sign = -1 if (n * (a + m)) % 2 else 1
                        for il in range(wl):
                            for ik in range(wk):
                                for i_f in range(wf):
                                    col = (
                                        off_q + a_off + il * wv
                                        + off_p + e_off + ik * wf + i_f
                                    )
                                    iw = off_w + aa_off + il * wk + ik
                                    row_i = off_r + g_off + iw * wf + i_f
                                    entries.append((t, row_i, col, sign))
    return entries
