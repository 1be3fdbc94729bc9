"""Coarsening a base poset along a monotone map.

Restriction along q: P -> Q embeds functors on Q into functors on P; its
adjoints on both sides are the Kan extensions.  The embedded subcategory is
bi-reflective exactly when the counit from the left adjoint back to the
identity is a pointwise quasi-isomorphism on every corepresentable
generator, which is decidable here and checked by check_bireflective.
Verification is relative to the coefficient field, since it amounts to
nerve homology of the comma posets.
"""

from . import classify, gen, tails
from .assemble import (
    assembly_map,
    augment_map,
    coaugment_map,
    cone_assembly,
    is_quasi_iso,
)
from .errors import BaseMismatch, NotVerified
from .funcat import (
    NatTrans,
    PFunctor,
    kan_left_assembled,
    kan_right_assembled,
    pullback,
    sum_functors,
    unit_complex,
    yoneda,
)
from .report import Report


def _require_target(q, g):
    if g.poset != q.target:
        raise BaseMismatch(
            "functor lives on %s, map lands in %s" % (g.poset.name, q.target.name)
        )


def _require_source(q, f):
    if f.poset != q.source:
        raise BaseMismatch(
            "functor lives on %s, map starts on %s" % (f.poset.name, q.source.name)
        )


def restrict(q, g, name=""):
    """Precomposition with q; stalks are preserved on the nose."""
    _require_target(q, g)
    return pullback(q, g, name=name or "res_" + g.name)


def loc_left(q, f, name=""):
    """Left adjoint to restriction (left Kan extension along q)."""
    _require_source(q, f)
    return kan_left_assembled(f, q, name=name)[0]


def loc_right(q, f, name=""):
    """Right adjoint to restriction (right Kan extension along q)."""
    _require_source(q, f)
    return kan_right_assembled(f, q, name=name)[0]


def counit_on(q, g):
    """The comparison loc_left(q, restrict(q, g)) -> g, as a NatTrans.

    At y the source is assembled from chains in {p : q(p) <= y}; a zero
    chain (p,) holds g(q(p)) and maps to g(y) by the structure map.
    """
    _require_target(q, g)
    res = restrict(q, g)
    lan, data = kan_left_assembled(res, q, name="lanres_" + g.name)
    comps = {}
    for y in q.target.elements:
        asm, slots = data[y]
        pieces = {}
        for c, i in slots.items():
            if len(c) == 1:
                m = g.map(q(c[0]), y)
                if not tails.tame_map_is_zero(m):
                    pieces[i] = (m, 1)
        comps[y] = augment_map(asm, g.value(y), pieces)
    return NatTrans(lan, g, comps, check=True)


class UnitMap:
    """The comparison f -> restrict(q, loc_left(q, f)), natural up to a
    certified homotopy.

    In the bar model the zero-chain inclusions fail strict naturality: for a
    cover (a, b) the two routes into the assembly at q(b) land in the slots
    (a,) and (b,), whose difference is the boundary of the slot (a, b).
    Each component is a validated chain map and each cover carries a
    homotopy certificate, verified exactly at construction.
    """

    def __init__(self, source, target, comps, homotopies):
        self.source = source
        self.target = target
        self.comps = comps
        self.homotopies = homotopies

    def component(self, p):
        return self.comps[p]

    def is_quasi_iso(self):
        return all(is_quasi_iso(m) for m in self.comps.values())


def unit_on(q, f):
    """Build the unit on f with per-object maps and per-cover homotopies.

    The homotopy identity for a cover (a, b) states that the slot (b,)
    route minus the slot (a,) route is the boundary of the slot (a, b)
    inclusion; it is certified by assembling a validated chain map out of
    the cone of the identity on f(a).
    """
    _require_source(q, f)
    lan, data = kan_left_assembled(f, q, name="lan_" + f.name)
    res = restrict(q, lan, name="reslan_" + f.name)
    comps = {}
    for p in q.source.elements:
        asm, slots = data[q(p)]
        comps[p] = coaugment_map(
            f.value(p), asm, {slots[(p,)]: (tails.tame_identity(f.value(p)), 1)}
        )
    homotopies = {}
    for a, b in q.source.covers:
        va = f.value(a)
        ident = tails.tame_identity(va)
        cone = cone_assembly(ident)
        asm, slots = data[q(b)]
        blocks = {
            (slots[(a, b)], 0): (ident, 1),
            (slots[(b,)], 1): (f.edge(a, b), 1),
            (slots[(a,)], 1): (ident, -1),
        }
        homotopies[(a, b)] = assembly_map(cone, asm, blocks)
    return UnitMap(f, res, comps, homotopies)


def right_unit_on(q, g):
    """The comparison g -> loc_right(q, restrict(q, g)), as a NatTrans."""
    _require_target(q, g)
    res = restrict(q, g)
    ran, data = kan_right_assembled(res, q, name="ranres_" + g.name)
    comps = {}
    for y in q.target.elements:
        asm, slots = data[y]
        pieces = {}
        for c, i in slots.items():
            if len(c) == 1:
                m = g.map(y, q(c[0]))
                if not tails.tame_map_is_zero(m):
                    pieces[i] = (m, 1)
        comps[y] = coaugment_map(g.value(y), asm, pieces)
    return NatTrans(g, ran, comps, check=True)


def generator_image(q, p, field):
    """The comparison loc_left(q, yoneda(P, p)) -> yoneda(Q, q(p)).

    The source at y assembles chains in {p' : q(p') <= y} weighted by the
    corepresentable at p; every nonzero zero-chain maps by the identity.
    """
    q.source.require_element(p)
    unit = unit_complex(field)
    yp = yoneda(q.source, p, unit)
    lan, data = kan_left_assembled(yp, q)
    target = yoneda(q.target, q(p), unit, name="yo_%s" % (q(p),))
    comps = {}
    for y in q.target.elements:
        asm, slots = data[y]
        pieces = {}
        if q.target.leq(q(p), y):
            for c, i in slots.items():
                if len(c) == 1 and q.source.leq(p, c[0]):
                    pieces[i] = (tails.tame_identity(unit), 1)
        comps[y] = augment_map(asm, target.value(y), pieces)
    return NatTrans(lan, target, comps, check=True)


class Bireflection:
    """Outcome of the bi-reflectivity check for a monotone map.

    status is "verified" or "refuted"; when refuted, `witness` names a
    generator of the target whose counit fails, and `evidence` records the
    Betti data of both sides at the failing element.
    """

    def __init__(self, q, field, status, witness=None, evidence=None, counits=None):
        self.map = q
        self.field = field
        self.status = status
        self.witness = witness
        self.evidence = evidence or {}
        self.counits = counits or {}

    @property
    def verified(self):
        return self.status == "verified"

    def __repr__(self):
        if self.verified:
            return "Bireflection(%s, verified)" % self.map.name
        return "Bireflection(%s, refuted at %r)" % (self.map.name, self.witness)


def check_bireflective(q, field=None):
    """Decide bi-reflectivity of restriction along q over the given field.

    Sufficient on generators: both composites preserve colimits and the
    corepresentables generate, so the counit is checked on yoneda(Q, x) for
    every x and the first failure refutes with that witness.
    """
    if field is None:
        from .field import F2

        field = F2
    unit = unit_complex(field)
    counits = {}
    for x in q.target.elements:
        g = yoneda(q.target, x, unit, name="yo_%s" % (x,))
        eta = counit_on(q, g)
        counits[x] = eta
        for y in q.target.elements:
            if not is_quasi_iso(eta.component(y)):
                evidence = {
                    "at": y,
                    "counit_betti": tails.betti_value(eta.source.value(y)).finite,
                    "expected_betti": tails.betti_value(g.value(y)).finite,
                }
                return Bireflection(q, field, "refuted", x, evidence, counits)
    return Bireflection(q, field, "verified", counits=counits)


def _tailed_sample(rng, poset, field):
    """A random functor with one non-perfect tail stalk planted."""
    f = gen.random_functor(rng, poset, field, cells=1, max_total=2)
    y = rng.choice(list(poset.elements))
    tv = gen.random_tail(rng, field, acyclic=False)
    sky = PFunctor(poset, field, {y: tv}, {}, check=False, name="sky")
    return sum_functors(f, sky, name="tailed")


def transfer_report(bire, samples=50, seed=0):
    """Empirical transfer of compactness and properness along a coarsening.

    Checks, over seeded random functors on the target: (1) compactness of
    the restriction implies compactness upstairs, (2) every compact sample
    is rebuilt from cells that are left-adjoint images of source-side
    generators, and (3) properness verdicts agree on both sides.  Requires
    a verified Bireflection.
    """
    from . import __version__

    if not isinstance(bire, Bireflection) or not bire.verified:
        raise NotVerified(
            "transfer requires a verified bi-reflective coarsening map"
        )
    q = bire.map
    field = bire.field
    rep = Report("localization transfer")
    rep.stamp(__version__, field=field, seed=seed)
    rep.add("map", q.name)
    rep.add("source poset", q.source.name)
    rep.add("target poset", q.target.name)
    rep.add("samples", samples)

    rng = gen.rng_for(seed)
    rep.section("generator images")
    gen_ok = True
    for p in q.source.elements:
        eta = generator_image(q, p, field)
        ok = eta.is_quasi_iso()
        gen_ok = gen_ok and ok
        rep.add("loc_left(yo %s) matches yo %s" % (p, q(p)), ok)
    rep.add_verdict(gen_ok)

    detect_ok = True
    generate_ok = True
    proper_ok = True
    cells_seen = 0
    for i in range(samples):
        if i % 4 == 3:
            g = _tailed_sample(rng, q.target, field)
        else:
            g = gen.random_functor(rng, q.target, field, cells=2, max_total=2)
        res = restrict(q, g)
        down = classify.is_compact(res)
        up = classify.is_compact(g)
        if down.value and not up.value:
            detect_ok = False
        if classify.is_proper(g).value != classify.is_proper(res).value:
            proper_ok = False
        if up.value:
            if not counit_on(q, g).is_quasi_iso():
                generate_ok = False
            pres = classify.cellularize(res)
            pres.verify()
            cells_seen += classify.cell_count(pres)

    rep.section("compactness detection")
    rep.evidence("compact restriction forces a compact original on every sample")
    rep.add_verdict(detect_ok)

    rep.section("generation")
    rep.add("cells over all compact samples", cells_seen)
    rep.evidence(
        "each compact sample is the left-adjoint image of its restriction,"
        " presented by cells at source-side generators"
    )
    rep.add_verdict(generate_ok)

    rep.section("properness transfer")
    rep.evidence("properness verdicts agree pointwise on both sides")
    rep.add_verdict(proper_ok)
    return rep
