"""Seeded generators for randomized cross-validation.

Everything here is driven by an explicit random.Random so that a recorded
seed reproduces the exact instance.  Complexes are built with prescribed
homology (sums of one-dimensional classes and contractible two-term pieces)
and then conjugated by random invertible changes of basis, so the generator
never has to guess whether d squares to zero.  Functors are built as sums
of corepresentable cells with random stalk complexes, optionally extended
by attaching further cells along random cycles; both constructions are
functorial by design and the constructors re-check everything anyway.
"""

import random

from . import chain, funcat, tails
from .poset import make_poset, opposite, product


def rng_for(seed):
    return random.Random(seed)


def _nonzero_scalar(rng, field):
    if field.p is None:
        return field.scalar(rng.choice([-3, -2, -1, 1, 2, 3]))
    return field.scalar(rng.randrange(1, field.p))


def random_invertible(rng, field, n, ops=None):
    """Product of random elementary matrices."""
    a = field.eye(n)
    if n == 0:
        return a
    if ops is None:
        ops = 2 * n
    for _ in range(ops):
        e = field.eye(n)
        i = rng.randrange(n)
        if rng.random() < 0.4:
            e[i, i] = _nonzero_scalar(rng, field)
        else:
            j = rng.randrange(n)
            if i == j:
                continue
            e[i, j] = field.scalar(rng.randint(-2, 2))
        a = field.matmul(e, a)
    return a


def invert(field, a):
    n = a.shape[0]
    aug = field.hstack([a, field.eye(n)], n)
    red, pivots = field.rref(aug)
    if len(pivots) != n:
        raise ValueError("matrix is singular")
    return red[:, n:]


def conjugate(rng, c):
    """Change basis in every degree by a random invertible matrix."""
    field = c.field
    bases = {n: random_invertible(rng, field, c.dim(n)) for n in c.dims}
    diffs = {}
    for n, d in c.diffs.items():
        m = field.matmul(field.matmul(bases[n + 1], d), invert(field, bases[n]))
        if not field.is_zero(m):
            diffs[n] = m
    return chain.Complex(field, dict(c.dims), diffs)


def random_complex(rng, field, max_deg=1, min_deg=-1, max_total=4):
    """A complex with random homology placement inside [min_deg, max_deg].

    Built as a sum of single classes and contractible [1 -> 1] pieces, then
    conjugated degreewise, so homology is known by construction.
    """
    degs = list(range(min_deg, max_deg + 1))
    dims = {n: 0 for n in degs}
    killed = {n: 0 for n in degs}
    budget = rng.randint(1, max_total)
    while budget > 0:
        n = rng.choice(degs)
        if n + 1 in dims and budget >= 2 and rng.random() < 0.5:
            killed[n] += 1
            dims[n] += 1
            dims[n + 1] += 1
            budget -= 2
        else:
            dims[n] += 1
            budget -= 1
    diffs = {}
    for n in degs:
        if n + 1 not in dims or not killed[n]:
            continue
        # pair sources sit in the leading columns of degree n; their targets in
        # degree n+1 start after that degree's own pair sources, so adjacent
        # differentials never share support and d.d stays zero
        d = field.zeros(dims[n + 1], dims[n])
        row0 = killed.get(n + 1, 0)
        for i in range(killed[n]):
            d[row0 + i, i] = field.scalar(1)
        diffs[n] = d
    c = chain.Complex(field, {n: w for n, w in dims.items() if w}, diffs)
    return conjugate(rng, c)


def random_acyclic(rng, field, max_deg=1, min_deg=-1, max_pairs=2):
    """An exact complex: one contractible [k = k] step, conjugated."""
    n0 = rng.choice(list(range(min_deg, max_deg)))
    w = rng.randint(1, max_pairs)
    c = chain.Complex(field, {n0: w, n0 + 1: w}, {n0: field.eye(w)})
    return conjugate(rng, c)


def random_tail(rng, field, acyclic=False, stride=None):
    """A tail value; acyclic=True makes it perfect despite the tail."""
    if stride is None:
        stride = rng.randint(1, 3)
    if acyclic:
        base = random_acyclic(rng, field, max_deg=1, min_deg=0, max_pairs=1)
    else:
        base = random_complex(rng, field, max_deg=1, min_deg=0, max_total=2)
        if base.is_acyclic():
            base = chain.one_complex(field, 0, 1)
    if rng.random() < 0.5:
        fin = random_complex(rng, field, max_total=2)
    else:
        fin = chain.zero_complex(field)
    return tails.TailValue(fin, base, rng.randint(-2, 2), stride)


def random_poset(rng, max_elems=6, name="P"):
    """A layered poset: ranked elements, covers between adjacent ranks."""
    n = rng.randint(1, max_elems)
    ranks = []
    left = n
    while left > 0:
        w = rng.randint(1, min(3, left))
        ranks.append(w)
        left -= w
    by_rank = []
    elems = []
    i = 0
    for w in ranks:
        row = ["e%d" % (i + j) for j in range(w)]
        i += w
        by_rank.append(row)
        elems.extend(row)
    covers = []
    for lo, hi in zip(by_rank, by_rank[1:]):
        for a in lo:
            for b in hi:
                if rng.random() < 0.6:
                    covers.append((a, b))
    return make_poset(name, elems, covers)


def random_cycle(rng, c, deg):
    """A random cycle column in the given degree, or None."""
    field = c.field
    w = c.dim(deg)
    if not w:
        return None
    basis = field.nullspace(c.d(deg))
    if basis.shape[1] == 0:
        return None
    out = field.zeros(w, 1)
    for j in range(basis.shape[1]):
        coeff = field.scalar(rng.randint(-1, 1))
        if not field.scalar_is_zero(coeff):
            out = field.add(out, field.scale(coeff, basis[:, j : j + 1]))
    if field.is_zero(out):
        return None
    return out


def random_cell_functor(rng, poset, field, cells=2, max_total=2):
    """A direct sum of corepresentable cells with random stalk complexes."""
    out = None
    for _ in range(cells):
        p = rng.choice(poset.elements)
        v = random_complex(rng, field, max_total=max_total)
        cell = funcat.yoneda(poset, p, v)
        out = cell if out is None else funcat.sum_functors(out, cell)
    if out is None:
        out = funcat.PFunctor(poset, field, {}, {})
    return out


def attach_random_cell(rng, f):
    """Cone off a random cycle in a random stalk: one more cell."""
    poset = f.poset
    field = f.field
    p = rng.choice(poset.elements)
    stalkv = f.value(p)
    if isinstance(stalkv, tails.TailValue):
        return f
    degs = [n for n in stalkv.dims if stalkv.dim(n)]
    phi = None
    deg = 0
    if degs:
        deg = rng.choice(degs)
        phi = random_cycle(rng, stalkv, deg)
    cellv = chain.one_complex(field, deg, 1)
    cell = funcat.yoneda(poset, p, cellv)
    comps = {}
    if phi is not None:
        base = chain.chain_map(cellv, stalkv, {deg: phi})
        for q in poset.elements:
            if poset.leq(p, q):
                comps[q] = tails.tame_compose(f.map(p, q), base)
    eta = funcat.NatTrans(cell, f, comps)
    conef, _, _ = funcat.cone_functor(eta)
    return conef


def random_functor(rng, poset, field, cells=2, cones=0, max_total=2):
    """Random functor: a cell sum plus optional cone attachments."""
    f = random_cell_functor(rng, poset, field, cells=cells, max_total=max_total)
    for _ in range(cones):
        f = attach_random_cell(rng, f)
    return f


def random_compact_functor(rng, poset, field, cells=2, max_total=2):
    # any finite-complex functor on a finite poset is compact
    cones = rng.randint(0, 1)
    return random_functor(rng, poset, field, cells=cells, cones=cones, max_total=max_total)


def random_kernel(rng, left, right, field, cells=2, max_total=2, name="K"):
    """Random finite kernel: a random cell functor on the product carrier."""
    from .kernel import kernel_from_functor

    carrier_poset = product(opposite(left), right)
    f = random_functor(rng, carrier_poset, field, cells=cells, max_total=max_total)
    return kernel_from_functor(left, right, f, name=name)
