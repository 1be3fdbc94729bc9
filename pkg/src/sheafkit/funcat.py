"""Functors from a finite poset to complexes, and their homotopy machinery.

A PFunctor assigns a tame value (Complex or TailValue) to each element and a
degree-0 tame map to each cover, with all composites checked to agree; a
chain of covers between p <= q therefore defines map(p, q) unambiguously.
Evaluation at an element is the stalk.

Simplicial constructions are assemblies over strict chains of the poset:

- bar_over(F, pool): chain (p_0 < ... < p_n) contributes F(p_0) at shift n
  (total degree = internal - n), faces drop an element, the bottom face
  applies F's map, all other faces are identities, face i enters with sign
  (-1)^i.  hocolim and left Kan extensions are instances.
- cobar_over(F, pool): the chain contributes F(p_n) at shift -n (total
  degree = internal + n); the top face applies F's map.  holim and right
  Kan extensions are instances; tails are rejected here, since a limit
  over infinitely many tail slices leaves the stable-tail class.
- rhom(F, G): chains contribute hom_complex(F(p_0), G(p_n)) at shift -n,
  with the outer faces pre/post-composing F's and G's maps.

bar_resolution exhibits any functor as an iterated extension of cells
yoneda(p, F(p_0)[n]): skeleton m keeps chains of length <= m, and each
skeleton is isomorphic, by an explicit validated permutation, to the cone
of an attaching map from the level-m cells into skeleton m-1.
"""

from . import chain, tails
from .assemble import (
    assemble,
    assembly_inclusion,
    assembly_map,
    assembly_projection,
    augment_map,
    coaugment_map,
    cone_assembly,
    is_quasi_iso,
)
from .errors import (
    FieldMismatch,
    NotFunctorial,
    NotVerified,
    ShapeError,
    TameClassError,
)
from .poset import MonotoneMap, opposite
from .tails import TailValue


class PFunctor:
    """A strict functor from a finite poset to tame values."""

    def __init__(self, poset, field, values=None, edges=None, check=True, name=""):
        self.poset = poset
        self.field = field
        self.name = name
        self._zero = chain.zero_complex(field)
        vals = {}
        for p, v in (values or {}).items():
            poset.require_element(p)
            if not tails.is_tame(v):
                raise ShapeError("value at %r is not a complex or tail value" % (p,))
            if tails.field_of(v) != field:
                raise FieldMismatch(
                    "value at %r over the wrong field" % (p,), expected=field.label
                )
            if not tails.value_is_zero(v):
                vals[p] = v
        self.values = vals
        cover_set = set(poset.covers)
        eds = {}
        for (a, b), m in (edges or {}).items():
            if (a, b) not in cover_set:
                raise ShapeError("edge map on a non-cover pair", pair=(a, b))
            if not tails.is_tame_map(m):
                raise ShapeError("edge on %r is not a tame map" % ((a, b),))
            va = vals.get(a, self._zero)
            vb = vals.get(b, self._zero)
            if not tails.values_equal(tails.map_source(m), va):
                raise ShapeError("edge source mismatch at %r" % ((a, b),))
            if not tails.values_equal(tails.map_target(m), vb):
                raise ShapeError("edge target mismatch at %r" % ((a, b),))
            if not tails.tame_map_is_zero(m):
                eds[(a, b)] = m
        self.edges = eds
        self._maps = {}
        if check:
            self._check_composites()

    # -- evaluation ---------------------------------------------------------

    def value(self, p):
        self.poset.require_element(p)
        return self.values.get(p, self._zero)

    def edge(self, a, b):
        m = self.edges.get((a, b))
        if m is not None:
            return m
        return tails.tame_zero(self.value(a), self.value(b))

    def map(self, p, q):
        """The structure map for p <= q, well defined by functoriality."""
        if p == q:
            self.poset.require_element(p)
            return tails.tame_identity(self.value(p))
        if not self.poset.lt(p, q):
            raise ShapeError("map requested for unrelated pair", pair=(p, q))
        got = self._maps.get((p, q))
        if got is None:
            for r in self.poset.lower_covers_of(q):
                if r == p or self.poset.leq(p, r):
                    got = tails.tame_compose(self.edge(r, q), self.map(p, r))
                    break
            self._maps[(p, q)] = got
        return got

    def support(self):
        return [p for p in self.poset.elements if p in self.values]

    def has_tails(self):
        return any(isinstance(v, TailValue) for v in self.values.values())

    def total_dim(self):
        return sum(tails.finite_part(v).total_dim for v in self.values.values())

    def _check_composites(self):
        """All cover factorizations of every interval must agree."""
        for q in self.poset.topo_elements():
            lows = self.poset.lower_covers_of(q)
            for p in self.poset.down(q):
                if p == q:
                    continue
                routes = []
                for r in lows:
                    if r == p:
                        routes.append((r, self.edge(r, q)))
                    elif self.poset.leq(p, r):
                        routes.append(
                            (r, tails.tame_compose(self.edge(r, q), self._maps[(p, r)]))
                        )
                first_r, first = routes[0]
                for r, other in routes[1:]:
                    if not tails.tame_eq(first, other):
                        raise NotFunctorial(
                            "cover factorizations disagree",
                            source=p,
                            target=q,
                            via=(first_r, r),
                        )
                self._maps[(p, q)] = first

    def __eq__(self, other):
        if not isinstance(other, PFunctor):
            return NotImplemented
        if self.poset != other.poset or self.field != other.field:
            return False
        if set(self.values) != set(other.values):
            return False
        for p, v in self.values.items():
            if not tails.values_equal(v, other.values[p]):
                return False
        if set(self.edges) != set(other.edges):
            return False
        return all(tails.tame_eq(m, other.edges[e]) for e, m in self.edges.items())

    def __repr__(self):
        return "PFunctor(%s on %s, support %d)" % (
            self.name or "?",
            self.poset.name,
            len(self.values),
        )


def make_functor(poset, field, values, edges=None, name="", check=True):
    return PFunctor(poset, field, values, edges, check=check, name=name)


def constant_functor(poset, value, name="const"):
    field = tails.field_of(value)
    values = {p: value for p in poset.elements}
    edges = {e: tails.tame_identity(value) for e in poset.covers}
    return PFunctor(poset, field, values, edges, check=False, name=name)


def skyscraper(poset, at, value, name=""):
    poset.require_element(at)
    return PFunctor(
        poset,
        tails.field_of(value),
        {at: value},
        {},
        check=False,
        name=name or "sky_%s" % at,
    )


def yoneda(poset, at, value, name=""):
    """The cell functor: `value` on the up-set of `at`, identities inside."""
    poset.require_element(at)
    ups = set(poset.up(at))
    values = {p: value for p in ups}
    edges = {
        (a, b): tails.tame_identity(value)
        for a, b in poset.covers
        if a in ups and b in ups
    }
    return PFunctor(
        poset,
        tails.field_of(value),
        values,
        edges,
        check=False,
        name=name or "cell_%s" % at,
    )


def stalk(functor, p):
    return functor.value(p)


def _same_context(f, g):
    if f.poset != g.poset:
        raise ShapeError(
            "functors live on different posets", left=f.poset.name, right=g.poset.name
        )
    f.field.require_same(g.field)


class NatTrans:
    """A natural transformation, validated on covers."""

    def __init__(self, source, target, comps, check=True):
        _same_context(source, target)
        self.source = source
        self.target = target
        self.field = source.field
        cs = {}
        for p, m in (comps or {}).items():
            source.poset.require_element(p)
            if not tails.values_equal(tails.map_source(m), source.value(p)):
                raise ShapeError("component source mismatch at %r" % (p,))
            if not tails.values_equal(tails.map_target(m), target.value(p)):
                raise ShapeError("component target mismatch at %r" % (p,))
            if not tails.tame_map_is_zero(m):
                cs[p] = m
        self.comps = cs
        if check:
            for a, b in source.poset.covers:
                left = tails.tame_compose(target.edge(a, b), self.component(a))
                right = tails.tame_compose(self.component(b), source.edge(a, b))
                if not tails.tame_eq(left, right):
                    raise NotFunctorial(
                        "components are not natural across a cover", cover=(a, b)
                    )

    def component(self, p):
        m = self.comps.get(p)
        if m is not None:
            return m
        return tails.tame_zero(self.source.value(p), self.target.value(p))

    def is_zero(self):
        return not self.comps

    def is_quasi_iso(self):
        """Objectwise quasi-isomorphism at every element."""
        for p in self.source.poset.elements:
            if not is_quasi_iso(self.component(p)):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, NatTrans):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        keys = set(self.comps) | set(other.comps)
        return all(tails.tame_eq(self.component(p), other.component(p)) for p in keys)


def nat_identity(functor):
    comps = {p: tails.tame_identity(v) for p, v in functor.values.items()}
    return NatTrans(functor, functor, comps, check=False)


def nat_zero(source, target):
    return NatTrans(source, target, {}, check=False)


def nat_compose(g, f):
    if f.target != g.source:
        raise ShapeError("composition endpoints do not match")
    comps = {}
    for p in set(f.comps) | set(g.comps):
        comps[p] = tails.tame_compose(g.component(p), f.component(p))
    return NatTrans(f.source, g.target, comps, check=False)


# -- pointwise operations -------------------------------------------------------


def shift_functor(f, k, name=""):
    values = {p: tails.shift_value(v, k) for p, v in f.values.items()}
    edges = {e: tails.shift_tame_map(m, k) for e, m in f.edges.items()}
    return PFunctor(
        f.poset, f.field, values, edges, check=False, name=name or f.name
    )


def sum_functors(f, g, name=""):
    _same_context(f, g)
    values = {}
    edges = {}
    for p in set(f.values) | set(g.values):
        values[p] = tails.sum_values(f.value(p), g.value(p))
    for a, b in f.poset.covers:
        if (a in values or b in values) and not (
            tails.tame_map_is_zero(f.edge(a, b))
            and tails.tame_map_is_zero(g.edge(a, b))
        ):
            edges[(a, b)] = tails.sum_maps(f.edge(a, b), g.edge(a, b))
    return PFunctor(f.poset, f.field, values, edges, check=False, name=name)


def tensor_functor(f, value, name=""):
    """Pointwise tensor with a fixed tame value on the right."""
    values = {p: tails.tensor_value(v, value) for p, v in f.values.items()}
    ident = tails.tame_identity(value)
    edges = {e: tails.tensor_tame_map(m, ident) for e, m in f.edges.items()}
    return PFunctor(f.poset, f.field, values, edges, check=False, name=name)


def tensor_functors(f, g, name=""):
    """Pointwise tensor of two functors; tails may appear on one side only."""
    _same_context(f, g)
    values = {}
    for p in set(f.values) & set(g.values):
        values[p] = tails.tensor_value(f.value(p), g.value(p))
    edges = {}
    for a, b in f.poset.covers:
        if a not in values:
            continue
        m = tails.tensor_tame_map(f.edge(a, b), g.edge(a, b))
        if not tails.tame_map_is_zero(m):
            edges[(a, b)] = m
    return PFunctor(f.poset, f.field, values, edges, check=True, name=name)


def pullback(f, g, name=""):
    """Restriction of a functor g on Q along a monotone map f: P -> Q."""
    if f.target != g.poset:
        raise ShapeError(
            "monotone map does not land in the functor's poset",
            map_target=f.target.name,
            functor_poset=g.poset.name,
        )
    values = {}
    for p in f.source.elements:
        v = g.value(f(p))
        if not tails.value_is_zero(v):
            values[p] = v
    edges = {}
    for a, b in f.source.covers:
        m = g.map(f(a), f(b))
        if not tails.tame_map_is_zero(m):
            edges[(a, b)] = m
    return PFunctor(f.source, g.field, values, edges, check=False, name=name)


def restrict_to(f, sub, name=""):
    """Restriction to a convex induced subposet (elements must exist in both)."""
    values = {p: v for p, v in f.values.items() if p in sub.index}
    edges = {}
    for a, b in sub.covers:
        m = f.map(a, b)
        if not tails.tame_map_is_zero(m):
            edges[(a, b)] = m
    return PFunctor(sub, f.field, values, edges, check=False, name=name or f.name)


def cone_functor(eta, name=""):
    """Pointwise cone of a natural transformation, with its structure maps.

    Returns (cone, include, project): include embeds the target functor,
    project maps onto the shifted source functor.
    """
    f, g = eta.source, eta.target
    asms = {}
    values = {}
    for p in f.poset.elements:
        asms[p] = cone_assembly(eta.component(p))
        v = asms[p].value
        if not tails.value_is_zero(v):
            values[p] = v
    edges = {}
    for a, b in f.poset.covers:
        m = assembly_map(
            asms[a],
            asms[b],
            {(0, 0): (f.edge(a, b), 1), (1, 1): (g.edge(a, b), 1)},
        )
        if not tails.tame_map_is_zero(m):
            edges[(a, b)] = m
    cone = PFunctor(f.poset, f.field, values, edges, check=True, name=name)

    inc = {}
    prj = {}
    shifted = shift_functor(f, 1)
    for p in f.poset.elements:
        inc[p] = coaugment_map(
            g.value(p), asms[p], {1: (tails.tame_identity(g.value(p)), 1)}
        )
        target = assemble(f.field, [(f.value(p), 1)])
        prj[p] = assembly_map(
            asms[p], target, {(0, 0): (tails.tame_identity(f.value(p)), 1)}
        )
    include = NatTrans(g, cone, inc, check=True)
    project = NatTrans(cone, shifted, prj, check=True)
    return cone, include, project


# -- simplicial assemblies ------------------------------------------------------


def _chain_pool(poset, pool, max_len):
    """Chains (as id tuples) with all entries in pool, in global order."""
    keep = set(pool)
    out = []
    for c in poset.all_chains():
        if max_len is not None and len(c) - 1 > max_len:
            continue
        ids = poset.chain_elements(c)
        if all(x in keep for x in ids):
            out.append(ids)
    return out


def _face_arrows(chains, face_map):
    """Simplicial face data (chain, face, map, sign) for an assembly.

    face_map(c, i) returns the tame map attached to deleting entry i; the
    caller decides direction by which slot indices it passes in.
    """
    arrows = []
    for c in chains:
        n = len(c) - 1
        if n == 0:
            continue
        for i in range(n + 1):
            face = c[:i] + c[i + 1 :]
            arrows.append((c, face, face_map(c, i), 1 if i % 2 == 0 else -1))
    return arrows


def bar_over(f, pool=None, max_len=None):
    """Homotopy colimit assembly over the chains inside pool.

    Chain (p_0 < ... < p_n) holds F(p_0) at shift n; the bottom face maps by
    F, the others are identities.  Returns (Assembly, slot index by chain).
    """
    poset = f.poset
    if pool is None:
        pool = poset.elements
    chains = _chain_pool(poset, pool, max_len)
    slot_of = {c: i for i, c in enumerate(chains)}
    slots = [(f.value(c[0]), len(c) - 1) for c in chains]

    def face(c, i):
        if i == 0:
            return f.map(c[0], c[1])
        return tails.tame_identity(f.value(c[0]))

    arrows = [
        (slot_of[c], slot_of[face_c], m, s)
        for c, face_c, m, s in _face_arrows(chains, face)
    ]
    return assemble(f.field, slots, arrows), slot_of


def cobar_over(f, pool=None, max_len=None):
    """Homotopy limit assembly over the chains inside pool.

    Chain (p_0 < ... < p_n) holds F(p_n) at shift -n; the top face maps by
    F, the others are identities.  Tail values are rejected: the limit over
    all tail slices does not stay in the stable-tail class.
    """
    poset = f.poset
    if pool is None:
        pool = poset.elements
    if any(isinstance(f.value(p), TailValue) for p in pool):
        raise TameClassError(
            "homotopy limit over tail values leaves the stable-tail class"
        )
    chains = _chain_pool(poset, pool, max_len)
    slot_of = {c: i for i, c in enumerate(chains)}
    slots = [(f.value(c[-1]), -(len(c) - 1)) for c in chains]

    def face(c, i):
        if i == len(c) - 1:
            return f.map(c[-2], c[-1])
        return tails.tame_identity(f.value(c[-1]))

    arrows = [
        (slot_of[face_c], slot_of[c], m, s)
        for c, face_c, m, s in _face_arrows(chains, face)
    ]
    return assemble(f.field, slots, arrows), slot_of


def bar_tensor(g, f, pool=None):
    """Two-sided bar assembly: chain c holds G(p_n) (x) F(p_0) at shift n.

    g must live on the opposite poset of f's; its maps feed the top face.
    """
    poset = f.poset
    if not g.poset.same_shape(opposite(poset)):
        raise ShapeError(
            "left argument must live on the opposite poset",
            left=g.poset.name,
            right=poset.name,
        )
    f.field.require_same(g.field)
    if pool is None:
        pool = poset.elements
    chains = _chain_pool(poset, pool, None)
    slot_of = {c: i for i, c in enumerate(chains)}
    slots = [
        (tails.tensor_value(g.value(c[-1]), f.value(c[0])), len(c) - 1) for c in chains
    ]

    def face(c, i):
        n = len(c) - 1
        if i == 0:
            return tails.tensor_tame_map(
                tails.tame_identity(g.value(c[-1])), f.map(c[0], c[1])
            )
        if i == n:
            return tails.tensor_tame_map(
                g.map(c[-1], c[-2]), tails.tame_identity(f.value(c[0]))
            )
        return tails.tame_identity(tails.tensor_value(g.value(c[-1]), f.value(c[0])))

    arrows = [
        (slot_of[c], slot_of[face_c], m, s)
        for c, face_c, m, s in _face_arrows(chains, face)
    ]
    return assemble(f.field, slots, arrows), slot_of


def rhom_assembly(f, g):
    """Derived hom assembly: chain c holds hom(F(p_0), G(p_n)) at shift -n."""
    _same_context(f, g)
    if f.has_tails() or g.has_tails():
        raise TameClassError("derived hom requires finite values on both sides")
    poset = f.poset
    chains = _chain_pool(poset, poset.elements, None)
    slot_of = {c: i for i, c in enumerate(chains)}
    slots = [
        (chain.hom_complex(f.value(c[0]), g.value(c[-1])), -(len(c) - 1))
        for c in chains
    ]

    def face(c, i):
        n = len(c) - 1
        if i == 0:
            return chain.hom_precompose(f.map(c[0], c[1]), g.value(c[-1]))
        if i == n:
            return chain.hom_postcompose(g.map(c[-2], c[-1]), f.value(c[0]))
        return chain.identity_map(chain.hom_complex(f.value(c[0]), g.value(c[-1])))

    arrows = [
        (slot_of[face_c], slot_of[c], m, s)
        for c, face_c, m, s in _face_arrows(chains, face)
    ]
    return assemble(f.field, slots, arrows), slot_of


def rhom(f, g):
    """Derived hom complex between two functors."""
    return rhom_assembly(f, g)[0].value


def rhom_pushforward(f, eta):
    """Map rhom(f, eta.source) -> rhom(f, eta.target) by postcomposition.

    Finite values only; the block per chain is hom(F(p_0), eta at p_n).
    """
    src_asm, src_slots = rhom_assembly(f, eta.source)
    dst_asm, dst_slots = rhom_assembly(f, eta.target)
    blocks = {}
    for c, i in src_slots.items():
        m = chain.hom_postcompose(eta.component(c[-1]), f.value(c[0]))
        if not m.is_zero():
            blocks[(dst_slots[c], i)] = (m, 1)
    return assembly_map(src_asm, dst_asm, blocks)


def hocolim(f):
    """Homotopy colimit as a tame value."""
    return bar_over(f)[0].value


def holim(f):
    """Homotopy limit as a complex (finite values only)."""
    return cobar_over(f)[0].value


def unit_complex(field):
    return chain.one_complex(field, 0, 1)


# -- Kan extensions -------------------------------------------------------------


def kan_left_assembled(f, mono, name=""):
    """Left Kan extension along a monotone map, with its assemblies.

    Value at q is the bar assembly over {p : mono(p) <= q}; covers act by
    slot inclusions.  Returns (PFunctor on the target, dict q -> (Assembly,
    slot index)).
    """
    if mono.source != f.poset:
        raise ShapeError(
            "monotone map does not start on the functor's poset",
            map_source=mono.source.name,
            functor_poset=f.poset.name,
        )
    target = mono.target
    data = {}
    values = {}
    for q in target.elements:
        pool = [p for p in f.poset.elements if target.leq(mono(p), q)]
        asm, slot_of = bar_over(f, pool)
        data[q] = (asm, slot_of)
        if not tails.value_is_zero(asm.value):
            values[q] = asm.value
    edges = {}
    for a, b in target.covers:
        asm_a, sa = data[a]
        asm_b, sb = data[b]
        m = assembly_inclusion(asm_a, asm_b, {i: sb[c] for c, i in sa.items()})
        if not tails.tame_map_is_zero(m):
            edges[(a, b)] = m
    out = PFunctor(
        target, f.field, values, edges, check=True, name=name or "lan_" + f.name
    )
    return out, data


def kan_left(f, mono, name=""):
    return kan_left_assembled(f, mono, name)[0]


def kan_right_assembled(f, mono, name=""):
    """Right Kan extension along a monotone map, with its assemblies.

    Value at q is the cobar assembly over {p : q <= mono(p)}; covers act by
    slot projections.  Finite values only.
    """
    if mono.source != f.poset:
        raise ShapeError(
            "monotone map does not start on the functor's poset",
            map_source=mono.source.name,
            functor_poset=f.poset.name,
        )
    target = mono.target
    data = {}
    values = {}
    for q in target.elements:
        pool = [p for p in f.poset.elements if target.leq(q, mono(p))]
        asm, slot_of = cobar_over(f, pool)
        data[q] = (asm, slot_of)
        if not tails.value_is_zero(asm.value):
            values[q] = asm.value
    edges = {}
    for a, b in target.covers:
        asm_a, sa = data[a]
        asm_b, sb = data[b]
        m = assembly_projection(asm_a, asm_b, {i: sa[c] for c, i in sb.items()})
        if not tails.tame_map_is_zero(m):
            edges[(a, b)] = m
    out = PFunctor(
        target, f.field, values, edges, check=True, name=name or "ran_" + f.name
    )
    return out, data


def kan_right(f, mono, name=""):
    return kan_right_assembled(f, mono, name)[0]


def identity_monotone(poset):
    return MonotoneMap(poset, poset, {p: p for p in poset.elements}, name="id")


# -- cell presentations ----------------------------------------------------------


class CellPresentation:
    """A functor presented as iterated extensions of cells.

    Level m cells are the strict chains with m+1 elements; the cell for
    chain c is yoneda(top(c), F(bottom(c)) shifted by m).  skeleta[m] keeps
    chains of length <= m, inclusions[m] embeds skeleton m-1, and
    augmentation maps the top skeleton onto the original functor.
    """

    def __init__(self, functor, skeleta, inclusions, cells, augmentation, asms):
        self.functor = functor
        self.skeleta = skeleta
        self.inclusions = inclusions
        self.cells = cells
        self.augmentation = augmentation
        self.resolution = skeleta[-1]
        self._asms = asms

    def depth(self):
        return len(self.skeleta) - 1

    def cell_count(self):
        return sum(len(cs) for cs in self.cells)

    def verify(self):
        """Check the presentation: cone structure per level, qiso augmentation.

        Returns a summary dict; raises NotVerified on any failure.
        """
        f = self.functor
        poset = f.poset
        if not self.augmentation.is_quasi_iso():
            raise NotVerified(
                "augmentation from the resolution is not an objectwise quasi-iso"
            )
        checked = 0
        for m in range(1, len(self.skeleta)):
            for q in poset.elements:
                self._verify_level(m, q)
                checked += 1
        return {
            "levels": self.depth(),
            "cells": self.cell_count(),
            "cone_checks": checked,
            "augmentation_quasi_iso": True,
        }

    def _verify_level(self, m, q):
        """Skeleton m at q is the cone of the level-m attaching map at q."""
        f = self.functor
        field = f.field
        big, slot_big = self._asms[(m, q)]
        small, slot_small = self._asms[(m - 1, q)]
        cells = [c for c in slot_big if len(c) - 1 == m]
        cells.sort(key=lambda c: slot_big[c])
        if not cells:
            if not tails.values_equal(big.value, small.value):
                raise NotVerified(
                    "skeleton grew without new cells", level=m, at=q
                )
            return
        cell_asm = assemble(field, [(f.value(c[0]), m - 1) for c in cells])
        blocks = {}
        for j, c in enumerate(cells):
            for i in range(m + 1):
                face = c[:i] + c[i + 1 :]
                if i == 0:
                    piece = f.map(c[0], c[1])
                else:
                    piece = tails.tame_identity(f.value(c[0]))
                key = (slot_small[face], j)
                sign = 1 if i % 2 == 0 else -1
                if key in blocks:
                    prev, ps = blocks[key]
                    blocks[key] = (tails.tame_add(
                        tails.tame_scale(prev, ps), tails.tame_scale(piece, sign)
                    ), 1)
                else:
                    blocks[key] = (piece, sign)
        attach = assembly_map(cell_asm, small, blocks)
        cone = cone_assembly(attach)
        self._perm_iso(cone, cell_asm, cells, small, slot_small, big, slot_big)

    def _perm_iso(self, cone, cell_asm, cells, small, slot_small, big, slot_big):
        """Validated permutation iso cone(attach) -> skeleton assembly."""
        field = big.field
        fin = self._perm_component(
            field,
            tails.finite_part(cone.value),
            tails.finite_part(big.value),
            cone.fin_pos,
            cell_asm.fin_pos,
            small.fin_pos,
            cells,
            slot_small,
            slot_big,
            big,
            tail=False,
        )
        slice_map = None
        tc = tails.tail_of(cone.value)
        tb = tails.tail_of(big.value)
        if (tc is None) != (tb is None):
            raise NotVerified("cone and skeleton disagree about tails")
        if tc is not None:
            slice_map = self._perm_component(
                field,
                tc[0],
                tb[0],
                cone.tail_pos,
                cell_asm.tail_pos,
                small.tail_pos,
                cells,
                slot_small,
                slot_big,
                big,
                tail=True,
            )
        return tails.tame_map(cone.value, big.value, fin, slice_map)

    @staticmethod
    def _perm_component(
        field,
        src_cx,
        dst_cx,
        cone_pos,
        cell_pos,
        small_pos,
        cells,
        slot_small,
        slot_big,
        big,
        tail,
    ):
        comps = {}
        big_pos = big.tail_pos if tail else big.fin_pos
        for t in sorted(set(src_cx.dims) | set(dst_cx.dims)):
            rows = dst_cx.dim(t)
            cols = src_cx.dim(t)
            if rows != cols:
                raise NotVerified(
                    "cone and skeleton dimensions differ", degree=t, got=(rows, cols)
                )
            if rows == 0:
                continue
            mat = field.zeros(rows, cols)
            placed = 0
            for j, c in enumerate(cells):
                inner = cell_pos[j].get(t + 1) if cell_pos[j] is not None else None
                outer = cone_pos[0].get(t) if cone_pos[0] is not None else None
                dest = big_pos[slot_big[c]].get(t) if big_pos[slot_big[c]] else None
                if inner is None or outer is None:
                    continue
                if dest is None or dest[1] != inner[1]:
                    raise NotVerified("cell block missing in skeleton", degree=t)
                src_off = outer[0] + inner[0]
                mat[dest[0] : dest[0] + dest[1], src_off : src_off + inner[1]] = (
                    field.eye(inner[1])
                )
                placed += inner[1]
            for c, i in slot_small.items():
                inner = small_pos[i].get(t) if small_pos[i] is not None else None
                outer = cone_pos[1].get(t) if cone_pos[1] is not None else None
                dest = big_pos[slot_big[c]].get(t) if big_pos[slot_big[c]] else None
                if inner is None or outer is None:
                    continue
                if dest is None or dest[1] != inner[1]:
                    raise NotVerified("old block missing in skeleton", degree=t)
                src_off = outer[0] + inner[0]
                mat[dest[0] : dest[0] + dest[1], src_off : src_off + inner[1]] = (
                    field.eye(inner[1])
                )
                placed += inner[1]
            if placed != rows:
                raise NotVerified(
                    "permutation does not cover every basis vector",
                    degree=t,
                    placed=placed,
                    expected=rows,
                )
            comps[t] = mat
        return chain.chain_map(src_cx, dst_cx, comps)


def bar_resolution(f, name=""):
    """Present a functor by cells along its bar construction."""
    poset = f.poset
    depth = len(poset.chains_by_length()) - 1
    asms = {}
    skeleta = []
    inclusions = []
    cells = []
    for m in range(depth + 1):
        values = {}
        for q in poset.elements:
            asm, slot_of = bar_over(f, poset.down(q), max_len=m)
            asms[(m, q)] = (asm, slot_of)
            if not tails.value_is_zero(asm.value):
                values[q] = asm.value
        edges = {}
        for a, b in poset.covers:
            asm_a, sa = asms[(m, a)]
            asm_b, sb = asms[(m, b)]
            mmap = assembly_inclusion(asm_a, asm_b, {i: sb[c] for c, i in sa.items()})
            if not tails.tame_map_is_zero(mmap):
                edges[(a, b)] = mmap
        sk = PFunctor(
            poset, f.field, values, edges, check=True, name="sk%d_%s" % (m, f.name)
        )
        skeleta.append(sk)
        cells.append([])
        if m:
            comps = {}
            for q in poset.elements:
                asm_a, sa = asms[(m - 1, q)]
                asm_b, sb = asms[(m, q)]
                comps[q] = assembly_inclusion(
                    asm_a, asm_b, {i: sb[c] for c, i in sa.items()}
                )
            inclusions.append(NatTrans(skeleta[m - 1], sk, comps, check=True))
        else:
            inclusions.append(None)
    for m in range(depth + 1):
        level = [
            poset.chain_elements(c) for c in poset.chains_of_length(m)
        ]
        cells[m] = level
    comps = {}
    for q in poset.elements:
        asm, slot_of = asms[(depth, q)]
        pieces = {}
        for c, i in slot_of.items():
            if len(c) == 1:
                pieces[i] = (f.map(c[0], q), 1)
        comps[q] = augment_map(asm, f.value(q), pieces)
    augmentation = NatTrans(skeleta[-1], f, comps, check=True)
    return CellPresentation(f, skeleta, inclusions, cells, augmentation, asms)
