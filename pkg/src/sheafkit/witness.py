"""Tame infinite families: towers on the opposite of the natural numbers,
plus the tail-value helpers that feed the classifiers.

A TowerFunctor is an eventually constant functor on N^op, presented by its
values on positions 0..horizon together with the step maps (n+1) -> n.
Beyond the horizon the value is constant and the steps are identities, so
every computation can be carried out on a finite window poset; correctness
of the window size is asserted by recomputing at two horizons.
"""

from . import chain, tails
from .assemble import is_quasi_iso
from .chain import one_complex, zero_complex
from .errors import ShapeError, UnsupportedSystem
from .funcat import NatTrans, PFunctor, rhom, rhom_pushforward
from .poset import make_poset
from .report import Report


def nat_op_window(horizon, name="Nop"):
    """Finite window of N^op: elements "0".."horizon", covers (n+1) -> n.

    Position 0 is the top of the order and `horizon` the bottom, so limits
    over the window are controlled by the deepest presented position.
    """
    elements = [str(n) for n in range(horizon + 1)]
    covers = [(str(n + 1), str(n)) for n in range(horizon)]
    return make_poset("%s%d" % (name, horizon), elements, covers)


class TowerFunctor:
    """Eventually constant functor on N^op.

    values[n] for n <= horizon; beyond it the value is values[horizon] and
    the steps are identities.  steps[n] maps values[n+1] -> values[n].
    """

    def __init__(self, field, values, steps, name=""):
        if not values:
            raise ShapeError("a tower needs at least one value")
        if len(steps) != len(values) - 1:
            raise ShapeError(
                "step count must be one less than value count",
                values=len(values),
                steps=len(steps),
            )
        for v in values:
            field.require_same(v.field)
        for n, s in enumerate(steps):
            if s.source is not values[n + 1] and s.source != values[n + 1]:
                raise ShapeError("step source mismatch", position=n)
            if s.target is not values[n] and s.target != values[n]:
                raise ShapeError("step target mismatch", position=n)
        self.field = field
        self.values = list(values)
        self.steps = list(steps)
        self.horizon = len(values) - 1
        self.eventual = values[-1]
        self.name = name

    def value(self, n):
        if n < 0:
            raise ShapeError("tower positions are natural numbers", got=n)
        return self.values[min(n, self.horizon)]

    def step(self, n):
        """The structure map from position n+1 down to position n."""
        if n < len(self.steps):
            return self.steps[n]
        return chain.identity_map(self.eventual)

    def map(self, frm, to):
        """Composite structure map; frm >= to in the natural order."""
        if to > frm:
            raise ShapeError("no arrow upward in N^op", frm=frm, to=to)
        m = chain.identity_map(self.value(frm))
        for n in range(frm - 1, to - 1, -1):
            m = chain.compose(self.step(n), m)
        return m

    def window(self, horizon, name=""):
        """The tower as an ordinary functor on a finite window poset."""
        poset = nat_op_window(horizon)
        values = {}
        for n in range(horizon + 1):
            v = self.value(n)
            if not v.is_zero():
                values[str(n)] = v
        edges = {}
        for n in range(horizon):
            s = self.step(n)
            if not s.is_zero():
                edges[(str(n + 1), str(n))] = s
        return PFunctor(
            poset, self.field, values, edges, check=True, name=name or self.name
        )

    def support_positions(self):
        """Positions with nonzero homology, or None when they never stop.

        The eventual value repeats at every position beyond the horizon, so
        homology there makes the support infinite.
        """
        if not self.eventual.is_acyclic():
            return None
        return [n for n in range(self.horizon + 1) if not self.values[n].is_acyclic()]

    def __repr__(self):
        return "TowerFunctor(%s, horizon=%d)" % (self.field.label, self.horizon)


def tower_const(v, name="const"):
    return TowerFunctor(v.field, [v], [], name=name)


def tower_truncation(v, m, name=""):
    """v on positions 0..m, zero beyond, with identity steps inside."""
    if m < 0:
        raise ShapeError("truncation point must be a natural number", got=m)
    zero = zero_complex(v.field)
    values = [v] * (m + 1) + [zero]
    steps = [chain.identity_map(v) for _ in range(m)]
    steps.append(chain.chain_map(zero, v, {}))
    return TowerFunctor(v.field, values, steps, name=name or "trunc%d" % m)


def tower_yoneda(field, n, name=""):
    """The corepresentable tower at position n: k exactly on positions 0..n."""
    return tower_truncation(one_complex(field, 0, 1), n, name=name or "yo%d" % n)


def tower_nat(src, dst, horizon):
    """Window natural transformation between towers of the same shape family.

    Components are identities where the values agree and zero maps where the
    source vanishes; anything else is out of scope for the truncation
    systems this module builds.
    """
    fs = src.window(horizon)
    fd = dst.window(horizon)
    comps = {}
    for n in range(horizon + 1):
        a, b = src.value(n), dst.value(n)
        if a.is_zero():
            continue
        if a == b:
            comps[str(n)] = chain.identity_map(a)
        else:
            raise UnsupportedSystem(
                "towers differ by more than truncation at position %d" % n
            )
    return NatTrans(fs, fd, comps, check=True)


def truncation_scan(tower, v, horizon, depth=None):
    """Derived homs from a tower into the truncation system of v.

    Computes rhom(tower, tau_m) on the given window for m = 0..depth, the
    connecting maps of the directed system, and the comparison from the last
    stage into rhom(tower, const v).  Returns a plain dict of evidence.
    """
    if depth is None:
        depth = horizon - 2
    if depth < 1 or depth >= horizon:
        raise ShapeError("scan depth must fit inside the window", depth=depth)
    fw = tower.window(horizon)
    truncs = [tower_truncation(v, m) for m in range(depth + 1)]
    stages = [rhom(fw, t.window(horizon)) for t in truncs]
    links = []
    for m in range(depth):
        eta = tower_nat(truncs[m], truncs[m + 1], horizon)
        links.append(is_quasi_iso(rhom_pushforward(fw, eta)))
    const = tower_const(v)
    into_const = tower_nat(truncs[depth], const, horizon)
    comparison = rhom_pushforward(fw, into_const)
    target = rhom(fw, const.window(horizon))
    return {
        "stage_betti": [s.betti() for s in stages],
        "links_quasi_iso": links,
        "comparison_quasi_iso": is_quasi_iso(comparison),
        "target_betti": target.betti(),
    }


def tower_colimit_demo(field, horizon=None):
    """Certified non-compactness of the constant tower.

    The truncations tau_m form a directed system with colimit the constant
    tower.  Mapping out of the constant tower kills every stage (the window
    bottom sees only zero) while the value at the colimit is k, so the
    canonical comparison is 0 -> k and fails to be a quasi-isomorphism.
    The corepresentable tower at 0 passes the same test, as a compact
    object must.  Everything is recomputed at a second window horizon.

    `horizon` widens the base window; it is clamped below at the automatic
    choice (max truncation point + 2), which the reduction needs.
    """
    from . import __version__

    rep = Report("tower colimit comparison")
    rep.stamp(__version__, field=field)
    unit = one_complex(field, 0, 1)
    depth = 3
    base_window = depth + 2
    if horizon is not None:
        base_window = max(base_window, horizon)

    rep.section("setup")
    rep.add("truncation stages", list(range(depth + 1)))
    rep.add("windows", [base_window, base_window + 1])

    runs = {}
    for horizon in (base_window, base_window + 1):
        runs[horizon] = {
            "const": truncation_scan(tower_const(unit), unit, horizon, depth),
            "yoneda": truncation_scan(tower_yoneda(field, 0), unit, horizon, depth),
        }

    scan = runs[base_window]["const"]
    rep.section("colimit side")
    for m, b in enumerate(scan["stage_betti"]):
        rep.add("rhom(const, trunc%d) betti" % m, b)
    stages_vanish = all(not b for b in scan["stage_betti"])
    rep.evidence(
        "every stage is acyclic, so the filtered colimit of the system is 0"
    )
    rep.add_verdict(stages_vanish)

    rep.section("value at colimit")
    rep.add("rhom(const, const) betti", scan["target_betti"])
    rep.add_verdict(scan["target_betti"] == {0: 1})

    rep.section("comparison")
    rep.add("lhs betti", {})
    rep.add("rhs betti", scan["target_betti"])
    rep.add("comparison quasi-iso", scan["comparison_quasi_iso"])
    rep.evidence("0 -> k is not a quasi-isomorphism: const is not compact")
    rep.add_verdict(not scan["comparison_quasi_iso"])

    yscan = runs[base_window]["yoneda"]
    rep.section("compact control")
    rep.add("rhom(yo0, trunc%d) betti" % depth, yscan["stage_betti"][-1])
    rep.add("comparison quasi-iso", yscan["comparison_quasi_iso"])
    rep.evidence("the corepresentable at 0 passes the same comparison")
    rep.add_verdict(yscan["comparison_quasi_iso"] and all(yscan["links_quasi_iso"]))

    rep.section("window stability")
    stable = True
    for kind in ("const", "yoneda"):
        a, b = runs[base_window][kind], runs[base_window + 1][kind]
        same = (
            a["stage_betti"] == b["stage_betti"]
            and a["target_betti"] == b["target_betti"]
            and a["comparison_quasi_iso"] == b["comparison_quasi_iso"]
        )
        rep.add("%s run stable across windows" % kind, same)
        stable = stable and same
    rep.add_verdict(stable)
    return rep


# -- tail-value helpers, re-exported under their public names --------------------


def tail_betti(x):
    """Symbolic Betti data of a tame value (finite part plus tail slices)."""
    return tails.betti_value(x)


def tail_is_perfect(x):
    return tails.value_is_perfect(x)


def tail_tensor(t, c):
    return tails.tensor_value(t, c)


def tail_sum(t, t2):
    return tails.sum_values(t, t2)
