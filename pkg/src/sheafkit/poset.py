"""Finite posets presented by covering relations, and monotone maps.

Element ids are opaque strings; every enumeration in the engine follows the
declaration order of the elements. Strict chains (x0 < x1 < ... < xn) are
enumerated by length and then lexicographically by declaration index; bar
and cobar bases are built on top of this order, so it is part of the file
format contract, not an implementation detail.

Input repair policy: duplicate covers are dropped; covers implied by longer
paths are deleted (Hasse repair) and recorded on the poset; self-covers and
directed cycles are errors.
"""

import numpy as np

from .errors import CycleError, NotMonotone, UnknownElement

_FORBIDDEN_IN_ID = set("<{};#")


def _check_id(x):
    if not isinstance(x, str) or not x:
        raise UnknownElement("element id must be a nonempty string, got %r" % (x,))
    if any(ch.isspace() for ch in x) or any(ch in _FORBIDDEN_IN_ID for ch in x):
        raise UnknownElement(
            "element id %r contains whitespace or a reserved character" % x
        )
    return x


class Poset:
    def __init__(self, name, elements, covers, repaired=()):
        self.name = name
        self.elements = tuple(elements)
        self.covers = tuple(covers)
        self.repaired = tuple(repaired)
        self.index = {x: i for i, x in enumerate(self.elements)}
        n = len(self.elements)
        leq = np.eye(n, dtype=bool)
        up_adj = [[] for _ in range(n)]
        for a, b in self.covers:
            up_adj[self.index[a]].append(self.index[b])
        # reverse topological closure
        for i in self._topo_order(up_adj, n):
            for j in up_adj[i]:
                leq[i] |= leq[j]
        self._leq = leq
        self._up_adj = up_adj
        self._chains = None

    @staticmethod
    def _topo_order(up_adj, n):
        indeg = [0] * n
        for i in range(n):
            for j in up_adj[i]:
                indeg[j] += 1
        stack = [i for i in range(n) if indeg[i] == 0]
        order = []
        while stack:
            i = stack.pop()
            order.append(i)
            for j in up_adj[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    stack.append(j)
        if len(order) != n:
            raise CycleError("covering relation contains a directed cycle")
        return reversed(order)

    # -- order ----------------------------------------------------------------

    def leq(self, p, q):
        return bool(self._leq[self.index[p], self.index[q]])

    def lt(self, p, q):
        return p != q and self.leq(p, q)

    def leq_idx(self, i, j):
        return bool(self._leq[i, j])

    def up(self, p):
        i = self.index[p]
        return [self.elements[j] for j in range(len(self.elements)) if self._leq[i, j]]

    def down(self, p):
        j = self.index[p]
        return [self.elements[i] for i in range(len(self.elements)) if self._leq[i, j]]

    def covers_of(self, p):
        """Elements covering p, in declaration order of the cover list."""
        return [b for a, b in self.covers if a == p]

    def lower_covers_of(self, p):
        """Elements covered by p, in declaration order of the cover list."""
        return [a for a, b in self.covers if b == p]

    def topo_elements(self):
        """Elements in a linear extension of the order (smaller first)."""
        order = list(self._topo_order(self._up_adj, len(self.elements)))
        order.reverse()
        return [self.elements[i] for i in order]

    def require_element(self, p):
        if p not in self.index:
            raise UnknownElement("unknown element %r in poset %r" % (p, self.name))
        return p

    # -- chains -----------------------------------------------------------------

    def chains_by_length(self):
        """All strict chains as index tuples, grouped by length; group n holds
        chains with n+1 entries. Lexicographic in declaration indices."""
        if self._chains is None:
            n = len(self.elements)
            groups = [[(i,) for i in range(n)]] if n else [[]]
            while True:
                nxt = []
                for c in groups[-1]:
                    last = c[-1]
                    for j in range(n):
                        if j != last and self._leq[last, j]:
                            nxt.append(c + (j,))
                if not nxt:
                    break
                groups.append(nxt)
            self._chains = groups
        return self._chains

    def chains_of_length(self, n):
        groups = self.chains_by_length()
        return groups[n] if n < len(groups) else []

    def all_chains(self):
        out = []
        for g in self.chains_by_length():
            out.extend(g)
        return out

    def chain_elements(self, chain):
        return tuple(self.elements[i] for i in chain)

    # -- equality -----------------------------------------------------------------

    def same_shape(self, other):
        return self.elements == other.elements and set(self.covers) == set(other.covers)

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return (
            self.name == other.name
            and self.elements == other.elements
            and self.covers == other.covers
        )

    def __hash__(self):
        return hash((self.name, self.elements, self.covers))

    def __repr__(self):
        return "Poset(%s, %d elements, %d covers)" % (
            self.name,
            len(self.elements),
            len(self.covers),
        )


def make_poset(name, elements, covers):
    """Validate and repair raw declarations into a Poset."""
    elems = []
    seen = set()
    for x in elements:
        _check_id(x)
        if x in seen:
            raise UnknownElement("duplicate element id %r" % x)
        seen.add(x)
        elems.append(x)
    cov = []
    cseen = set()
    for a, b in covers:
        if a not in seen:
            raise UnknownElement("unknown element %r in cover" % a)
        if b not in seen:
            raise UnknownElement("unknown element %r in cover" % b)
        if a == b:
            raise CycleError("self-cover on %r" % a)
        if (a, b) in cseen:
            continue
        cseen.add((a, b))
        cov.append((a, b))
    # build once to obtain the closure (raises on cycles), then repair
    raw = Poset(name, elems, cov)
    implied = []
    kept = []
    for a, b in cov:
        i, j = raw.index[a], raw.index[b]
        redundant = any(
            k != i and k != j and raw._leq[i, k] and raw._leq[k, j]
            for k in range(len(elems))
        )
        if redundant:
            implied.append((a, b))
        else:
            kept.append((a, b))
    if implied:
        return Poset(name, elems, kept, repaired=implied)
    return raw


def opposite(p):
    """Order-reversed poset; applying it twice restores the original,
    including the name."""
    name = p.name[:-3] if p.name.endswith("_op") else p.name + "_op"
    return Poset(name, p.elements, tuple((b, a) for a, b in p.covers))


def pair_id(a, b):
    return "(%s,%s)" % (a, b)


def split_pair(x):
    """Split a pair id at its top-level comma."""
    if not (x.startswith("(") and x.endswith(")")):
        raise UnknownElement("not a pair id: %r" % x)
    depth = 0
    body = x[1:-1]
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return body[:i], body[i + 1:]
    raise UnknownElement("not a pair id: %r" % x)


def product(p, q):
    """Product order; elements enumerated with the first factor major."""
    for x in p.elements:
        if "," in _strip_parens(x):
            raise UnknownElement(
                "element id %r has a top-level comma; cannot form pairs" % x
            )
    for x in q.elements:
        if "," in _strip_parens(x):
            raise UnknownElement(
                "element id %r has a top-level comma; cannot form pairs" % x
            )
    elements = [pair_id(a, b) for a in p.elements for b in q.elements]
    covers = []
    for a in p.elements:
        for b, b2 in q.covers:
            covers.append((pair_id(a, b), pair_id(a, b2)))
    for a, a2 in p.covers:
        for b in q.elements:
            covers.append((pair_id(a, b), pair_id(a2, b)))
    return Poset("%sx%s" % (p.name, q.name), elements, covers)


def _strip_parens(x):
    """Mask characters inside balanced parens so only top-level text remains."""
    out = []
    depth = 0
    for ch in x:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        elif depth == 0:
            out.append(ch)
    return "".join(out)


def induced_subposet(p, elems, name=None):
    """Sub-poset on a convex subset: covers are the restricted covers.
    (All subsets used by the engine, up-sets and comma sets, are convex.)"""
    keep = set(elems)
    for x in keep:
        p.require_element(x)
    elements = [x for x in p.elements if x in keep]
    covers = [(a, b) for a, b in p.covers if a in keep and b in keep]
    return Poset(name or "%s.sub" % p.name, elements, covers)


def up_set(p, x):
    """The sub-poset on {q : x <= q} (a convex subset, ids preserved)."""
    p.require_element(x)
    return induced_subposet(p, p.up(x), name="%s.up(%s)" % (p.name, x))


def face_poset(name, facets):
    """Face poset of an abstract simplicial complex given by facets
    (lists of vertex ids). Simplices are named by joining their sorted
    vertices with '.'; ordering is by dimension, then id."""
    verts = set()
    for f in facets:
        for v in f:
            _check_id(v)
            if "." in v:
                raise UnknownElement(
                    "vertex id %r contains '.', reserved for simplex names" % v
                )
            verts.add(v)
    simplices = set()
    for f in facets:
        fs = sorted(set(f))
        m = len(fs)
        for mask in range(1, 1 << m):
            simplices.add(tuple(fs[i] for i in range(m) if mask >> i & 1))
    order = sorted(simplices, key=lambda s: (len(s), s))
    elements = [".".join(s) for s in order]
    covers = []
    by_id = {s: ".".join(s) for s in order}
    for s in order:
        if len(s) == 1:
            continue
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            covers.append((by_id[face], by_id[s]))
    return make_poset(name, elements, covers)


def is_locally_finite(p):
    """Every up-set is finite. This holds for every finite poset; the
    infinite families live in the witness module and carry their own
    classification rules, so a materialized Poset is always locally finite."""
    for x in p.elements:
        if len(p.up(x)) > len(p.elements):
            return False
    return True


class MonotoneMap:
    def __init__(self, source, target, mapping, name="q"):
        self.name = name
        self.source = source
        self.target = target
        m = {}
        for x in source.elements:
            if x not in mapping:
                raise UnknownElement("map %r misses element %r" % (name, x))
            y = mapping[x]
            target.require_element(y)
            m[x] = y
        self.mapping = m
        for a, b in source.covers:
            if not target.leq(m[a], m[b]):
                raise NotMonotone(
                    "cover %s<%s maps to incomparable %s,%s"
                    % (a, b, m[a], m[b]),
                    cover=(a, b),
                    images=(m[a], m[b]),
                )

    def __call__(self, x):
        return self.mapping[x]

    def is_surjective(self):
        return set(self.mapping.values()) == set(self.target.elements)

    def __eq__(self, other):
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.mapping == other.mapping
        )

    def __repr__(self):
        return "MonotoneMap(%s: %s -> %s)" % (self.name, self.source.name, self.target.name)


def identity_embedding(sub, ambient, name=None):
    return MonotoneMap(sub, ambient, {x: x for x in sub.elements},
                       name=name or "incl")


def compose_monotone(g, f):
    if f.target.elements != g.source.elements:
        raise NotMonotone("compose: middle posets differ")
    return MonotoneMap(
        f.source, g.target, {x: g(f(x)) for x in f.source.elements},
        name="%s.%s" % (g.name, f.name),
    )
