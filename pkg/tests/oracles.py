"""Independent reference computations for the test suite.

Everything here is written from scratch on purpose: plain lists of lists,
Fraction or mod-p arithmetic, and textbook Gaussian elimination.  Nothing
imports the package under test, so an agreement between these numbers and
the engine's is evidence, not circularity.
"""

from fractions import Fraction
from itertools import combinations


# -- exact linear algebra -------------------------------------------------------


def _inv_mod(a, p):
    return pow(a % p, p - 2, p)


def rank(rows, p=None):
    """Row rank by Gaussian elimination; rational when p is None."""
    if not rows or not rows[0]:
        return 0
    if p is None:
        m = [[Fraction(x) for x in row] for row in rows]
    else:
        m = [[int(x) % p for x in row] for row in rows]
    nrows, ncols = len(m), len(m[0])
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1, 1) / m[r][c] if p is None else _inv_mod(m[r][c], p)
        m[r] = [x * inv if p is None else (x * inv) % p for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                if p is None:
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
                else:
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
        if r == nrows:
            break
    return r


def nullspace(rows, ncols, p=None):
    """Basis of the right kernel, as vectors of length ncols."""
    if p is None:
        m = [[Fraction(x) for x in row] for row in rows]
    else:
        m = [[int(x) % p for x in row] for row in rows]
    nrows = len(m)
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1, 1) / m[r][c] if p is None else _inv_mod(m[r][c], p)
        m[r] = [x * inv if p is None else (x * inv) % p for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                if p is None:
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
                else:
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    zero = Fraction(0) if p is None else 0
    one = Fraction(1) if p is None else 1
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for i, pc in enumerate(pivots):
            coef = m[i][fc]
            v[pc] = -coef if p is None else (-coef) % p
        basis.append(v)
    return basis


def complex_betti(dims, diffs, p=None):
    """Betti numbers of a cochain complex given as {deg: dim}, {deg: rows}.

    diffs[n] maps degree n to n+1 and is a list of dim(n+1) rows of dim(n)
    entries.  Zero differentials may be omitted.
    """
    ranks = {n: rank(m, p) for n, m in diffs.items() if m}
    betti = {}
    for n, d in dims.items():
        b = d - ranks.get(n, 0) - ranks.get(n - 1, 0)
        if b:
            betti[n] = b
    return betti


# -- simplicial (co)homology ----------------------------------------------------


def simplices_of(facets):
    """All nonempty faces of the given facets, sorted by dimension then id."""
    out = set()
    for f in facets:
        vs = sorted(set(f))
        for k in range(1, len(vs) + 1):
            out.update(combinations(vs, k))
    return sorted(out, key=lambda s: (len(s), s))


def boundary_matrices(facets):
    """Signed boundary of each dimension: d_k maps k-simplices to (k-1)-."""
    simplices = simplices_of(facets)
    by_dim = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(s)
    index = {d: {s: i for i, s in enumerate(ss)} for d, ss in by_dim.items()}
    mats = {}
    for d, ss in by_dim.items():
        if d == 0:
            continue
        rows = len(by_dim[d - 1])
        mat = [[0] * len(ss) for _ in range(rows)]
        for j, s in enumerate(ss):
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                mat[index[d - 1][face]][j] = (-1) ** i
        mats[d] = mat
    return by_dim, mats


def simplicial_cohomology(facets, p=None):
    """Betti of simplicial cochains: degree n counts H^n with coefficients."""
    by_dim, bnd = boundary_matrices(facets)
    dims = {d: len(ss) for d, ss in by_dim.items()}
    # cochain differential degree n -> n+1 is the transpose of d_{n+1}
    diffs = {}
    for d, mat in bnd.items():
        cols = len(mat[0]) if mat else 0
        diffs[d - 1] = [[mat[i][j] for i in range(len(mat))] for j in range(cols)]
    return complex_betti(dims, diffs, p)


def simplicial_homology(facets, p=None):
    """Betti of simplicial chains; degree n counts H_n."""
    by_dim, bnd = boundary_matrices(facets)
    dims = {d: len(ss) for d, ss in by_dim.items()}
    ranks = {d: rank(m, p) for d, m in bnd.items() if m}
    betti = {}
    for d, n in dims.items():
        b = n - ranks.get(d, 0) - ranks.get(d + 1, 0)
        if b:
            betti[d] = b
    return betti


# -- order complex --------------------------------------------------------------


def strict_chains(elements, leq):
    """All strict chains of a finite poset given by a leq predicate."""
    elems = list(elements)
    chains = [(x,) for x in elems]
    grown = chains
    while grown:
        nxt = []
        for c in grown:
            for y in elems:
                if c[-1] != y and leq(c[-1], y):
                    nxt.append(c + (y,))
        chains.extend(nxt)
        grown = nxt
    return chains


def nerve_facets(elements, leq):
    """Faces of the order complex: every strict chain, maximal or not.

    simplices_of dedups, so listing all chains instead of just the maximal
    ones changes nothing downstream and dodges a maximality computation.
    """
    return [list(c) for c in strict_chains(elements, leq)]
