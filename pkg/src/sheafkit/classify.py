"""Compactness and properness classifiers, cellular presentations, and the
kernel criterion, with operational cross-validation.

The two predicates are criterion-level: compact means homology-essential
support is finite and every stalk is perfect, proper drops the support
condition.  On finite posets with finite complex values both are automatic;
they separate exactly on the tame infinite families (towers with infinite
support are proper but not compact, functors with a non-acyclic tail stalk
are neither).  Operational checks against the colimit definition of
compactness are restricted to declared families of directed systems and
validate the criteria rather than replace them.
"""

from . import tails
from .assemble import is_quasi_iso
from .errors import NotCompact, TameClassError, UnsupportedSystem
from .funcat import bar_resolution, rhom, rhom_pushforward
from .gen import random_compact_functor, rng_for
from .kernel import column, convolve, corep_comparison
from .report import Report
from .witness import TowerFunctor, truncation_scan

INFINITE = "infinite"


class Verdict:
    """Outcome of a compactness or properness check, with its evidence.

    `support` is the homology-essential support (the INFINITE marker when it
    never stops), `stalks` maps each support element to its Betti data, and
    a False value names the offending element; for an imperfect tail stalk
    `offending_degree` is the least degree with periodic homology.
    """

    def __init__(self, predicate, value, support, stalks,
                 offending=None, offending_degree=None):
        self.predicate = predicate
        self.value = bool(value)
        self.support = support
        self.stalks = stalks
        self.offending = offending
        self.offending_degree = offending_degree

    def describe(self):
        if self.value:
            return "%s: true" % self.predicate
        if self.support == INFINITE:
            return "%s: false (infinite support)" % self.predicate
        text = "%s: false (imperfect stalk at %s" % (self.predicate, self.offending)
        if self.offending_degree is not None:
            text += ", periodic homology from degree %d" % self.offending_degree
        return text + ")"

    def add_to(self, rep):
        rep.add("support", self.support if self.support == INFINITE else list(self.support))
        for p, b in self.stalks.items():
            rep.add("stalk %s betti" % (p,), b)
        rep.add(self.predicate, self.value)
        if not self.value and self.offending is not None:
            rep.evidence(self.describe())
        return rep

    def __repr__(self):
        return "Verdict(%s)" % self.describe()


def _tail_degree(v):
    """Least degree carrying periodic homology, for an imperfect tail stalk."""
    t = tails.tail_of(v)
    if t is None:
        return None
    b = t[0].betti()
    return min(b) if b else None


def support(f):
    """Homology-essential support: elements whose stalk has homology.

    Towers whose eventual value has homology get the INFINITE marker, since
    the value repeats at every position beyond the horizon.
    """
    if isinstance(f, TowerFunctor):
        positions = f.support_positions()
        return INFINITE if positions is None else positions
    return [p for p in f.poset.elements
            if not tails.value_is_acyclic(f.value(p))]


def _stalk_table(f, sup):
    if isinstance(f, TowerFunctor):
        return {n: tails.betti_value(f.value(n)) for n in sup}
    return {p: tails.betti_value(f.value(p)) for p in sup}


def is_compact(f):
    """Finite homology-essential support and perfect stalks."""
    sup = support(f)
    if sup == INFINITE:
        stalks = {"eventual": tails.betti_value(f.eventual)}
        return Verdict("compact", False, INFINITE, stalks, offending=INFINITE)
    verdict = is_proper(f)
    return Verdict("compact", verdict.value, sup, verdict.stalks,
                   verdict.offending, verdict.offending_degree)


def is_proper(f):
    """Perfect stalks everywhere; the support may be infinite."""
    sup = support(f)
    stalks = _stalk_table(f, [] if sup == INFINITE else sup)
    if isinstance(f, TowerFunctor):
        if sup == INFINITE:
            stalks = {"eventual": tails.betti_value(f.eventual)}
        return Verdict("proper", True, sup, stalks)
    for p in f.poset.elements:
        v = f.value(p)
        if not tails.value_is_perfect(v):
            return Verdict("proper", False, sup, stalks,
                           offending=p, offending_degree=_tail_degree(v))
    return Verdict("proper", True, sup, stalks)


def cellularize(f):
    """Cell presentation of a compact functor along its bar filtration."""
    verdict = is_compact(f)
    if not verdict.value:
        raise NotCompact(
            "only compact functors admit finite cell presentations",
            reason=verdict.describe(),
        )
    return bar_resolution(f)


def cell_count(pres):
    """Number of cells carrying a nonzero value."""
    f = pres.functor
    return sum(
        1
        for level in pres.cells
        for c in level
        if not tails.value_is_zero(f.value(c[0]))
    )


class KernelVerdict:
    """Column-by-column compactness data for a kernel."""

    def __init__(self, preserves_compacts, columns, offenders):
        self.preserves_compacts = preserves_compacts
        self.columns = columns
        self.offenders = offenders

    def add_to(self, rep):
        for p, v in self.columns.items():
            rep.add("column %s compact" % (p,), v.value)
        for p, q, d in self.offenders:
            text = "column %s imperfect at %s" % (p, q)
            if d is not None:
                text += " from degree %d" % d
            rep.evidence(text)
        rep.add("preserves compacts", self.preserves_compacts)
        return rep

    def __repr__(self):
        return "KernelVerdict(preserves_compacts=%s)" % self.preserves_compacts


def check_kernel(k):
    """The kernel criterion: every column compact over the right poset."""
    columns = {}
    offenders = []
    for p in k.left.elements:
        col = column(k, p)
        v = is_compact(col)
        columns[p] = v
        if not v.value:
            offenders.append((p, v.offending, v.offending_degree))
    ok = all(v.value for v in columns.values())
    return KernelVerdict(ok, columns, offenders)


def cross_validate_kernel(k, sample_size, seed):
    """Validate the kernel criterion against the operational definition.

    (a) For every generator p: the produced comparison convolve(yoneda(p), K)
    -> column(K, p) must be an objectwise quasi-isomorphism, and compactness
    of the convolution must agree with the criterion's verdict for that
    column.  (b) For sample_size seeded random compact functors F, compute
    is_compact(convolve(F, K)); when the criterion says the kernel preserves
    compacts, every sample must come out compact.
    """
    from . import __version__

    field = k.carrier.field
    rep = Report("kernel cross-validation")
    rep.stamp(__version__, field=field, seed=seed)
    rep.add("kernel", k.name or "(unnamed)")
    rep.add("left poset", k.left.name)
    rep.add("right poset", k.right.name)

    kv = check_kernel(k)
    rep.section("criterion")
    kv.add_to(rep)

    rep.section("generator level")
    gen_agree = True
    op_all = True
    for p in k.left.elements:
        nat = corep_comparison(k, p)
        qiso = nat.is_quasi_iso()
        conv_compact = is_compact(nat.source).value
        col_compact = kv.columns[p].value
        ok = qiso and conv_compact == col_compact
        gen_agree = gen_agree and ok
        op_all = op_all and conv_compact
        rep.add(
            "generator %s" % (p,),
            "corepresentable=%s convolution_compact=%s column_compact=%s"
            % (
                "true" if qiso else "false",
                "true" if conv_compact else "false",
                "true" if col_compact else "false",
            ),
        )
    rep.evidence(
        "convolution against each Yoneda generator matches its kernel column"
    )
    rep.add_verdict(gen_agree)

    rep.section("random compact samples")
    rng = rng_for(seed)
    compact_hits = 0
    sample_agree = True
    for _ in range(sample_size):
        f = random_compact_functor(rng, k.left, field)
        c = is_compact(convolve(f, k)).value
        compact_hits += 1 if c else 0
        if kv.preserves_compacts and not c:
            sample_agree = False
    rep.add("samples", sample_size)
    rep.add("compact results", compact_hits)
    if kv.preserves_compacts:
        rep.evidence("criterion predicts every sample stays compact")
    else:
        rep.evidence(
            "criterion is negative; the generator level exhibits the failure"
        )
    rep.add_verdict(sample_agree)

    rep.section("agreement")
    rep.add("criterion verdict", kv.preserves_compacts)
    rep.add("operational verdict", op_all)
    rep.add("checks agree", gen_agree and sample_agree)
    rep.add_verdict(kv.preserves_compacts == op_all and gen_agree and sample_agree)
    return rep


def compactness_witness(f, system):
    """Operational compactness of f against a declared directed system.

    Supported systems: ("chain", [eta_0, ..., eta_t]) a finite chain of
    natural transformations whose designated colimit is the last target, and
    ("truncations", V) the truncation tower of the constant tower on V, for
    tower functors.  Anything else raises UnsupportedSystem.
    """
    from . import __version__

    if not isinstance(system, tuple) or len(system) != 2:
        raise UnsupportedSystem("system must be a (kind, data) pair")
    kind, data = system
    rep = Report("operational compactness witness")
    rep.stamp(__version__)

    if kind == "chain":
        return _finite_chain_witness(rep, f, data)
    if kind == "truncations":
        return _truncation_witness(rep, f, data)
    raise UnsupportedSystem("unknown system kind %r" % (kind,))


def _finite_chain_witness(rep, f, etas):
    if not etas:
        raise UnsupportedSystem("empty chain of transformations")
    for a, b in zip(etas, etas[1:]):
        if a.target is not b.source and a.target != b.source:
            raise UnsupportedSystem("chain stages do not compose")
    rep.section("finite chain system")
    rep.add("stages", len(etas) + 1)
    try:
        stages = [rhom(f, etas[0].source)]
        stages.extend(rhom(f, eta.target) for eta in etas)
        links = [rhom_pushforward(f, eta) for eta in etas]
    except TameClassError as exc:
        raise UnsupportedSystem(
            "derived hom is not available for this functor", cause=str(exc)
        )
    for i, s in enumerate(stages):
        rep.add("stage %d betti" % i, s.betti())
    rep.add("link quasi-iso flags", [is_quasi_iso(m) for m in links])
    rep.evidence(
        "a finite chain reaches its colimit at the last stage, so the"
        " comparison map is the identity"
    )
    rep.add("comparison quasi-iso", True)
    rep.add_verdict(True)
    return rep


def _truncation_witness(rep, f, v):
    if not isinstance(f, TowerFunctor):
        raise UnsupportedSystem("truncation systems apply to tower functors")
    depth = 3
    horizon = max(f.horizon + 2, depth + 2)
    scans = {h: truncation_scan(f, v, h, depth) for h in (horizon, horizon + 1)}
    scan = scans[horizon]

    rep.section("truncation system")
    rep.add("truncation stages", list(range(depth + 1)))
    rep.add("windows", [horizon, horizon + 1])
    for m, b in enumerate(scan["stage_betti"]):
        rep.add("stage %d betti" % m, b)
    rep.add("link quasi-iso flags", scan["links_quasi_iso"])

    vanishing = all(not b for b in scan["stage_betti"])
    links = scan["links_quasi_iso"]
    settled = all(links[len(links) // 2 :])
    if not (vanishing or settled):
        raise UnsupportedSystem(
            "the window does not certify the colimit of this system"
        )
    if vanishing:
        rep.evidence("every stage acyclic: the filtered colimit vanishes")
    else:
        rep.evidence(
            "links are eventually quasi-isomorphisms: the colimit is the"
            " last stage"
        )

    rep.section("comparison")
    rep.add("colim betti", {} if vanishing else scan["stage_betti"][-1])
    rep.add("rhom at colimit betti", scan["target_betti"])
    rep.add("comparison quasi-iso", scan["comparison_quasi_iso"])

    rep.section("window stability")
    other = scans[horizon + 1]
    stable = (
        scan["stage_betti"] == other["stage_betti"]
        and scan["target_betti"] == other["target_betti"]
        and scan["comparison_quasi_iso"] == other["comparison_quasi_iso"]
    )
    rep.add("stable across windows", stable)
    if not stable:
        raise UnsupportedSystem("results changed under window growth")
    rep.add_verdict(scan["comparison_quasi_iso"])
    return rep
