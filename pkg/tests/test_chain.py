"""Bounded complexes: homology, shifts, sums, tensors, cones."""

import pytest
from hypothesis import given, strategies as st

from sheafkit import chain, gen
from sheafkit.errors import NotDifferential, ShapeError
from sheafkit.field import F2, QQ, GF, Field

from . import oracles

FIELDS = ["F2", "Fp:5", "Q"]


def _oracle_betti(c):
    degs = c.degrees
    if not degs:
        return {}
    lo, hi = degs[0], degs[-1]
    dims = {n: c.dim(n) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo, hi + 1):
        d = c.d(n)
        diffs[n] = [[d[i, j] for j in range(d.shape[1])] for i in range(d.shape[0])]
    p = None if c.field.kind == "q" else c.field.p
    return oracles.complex_betti(dims, diffs, p)


@given(st.integers(0, 10**6), st.sampled_from(FIELDS))
def test_betti_matches_independent_elimination(seed, label):
    rng = gen.rng_for(seed)
    c = gen.random_complex(rng, Field.parse(label), max_deg=2, min_deg=-2, max_total=6)
    assert c.betti() == _oracle_betti(c)


@given(st.integers(0, 10**6))
def test_differential_squares_to_zero_is_enforced(seed):
    rng = gen.rng_for(seed)
    c = gen.random_complex(rng, F2, max_deg=2, min_deg=-1, max_total=5)
    for n in c.degrees:
        m = c.field.matmul(c.d(n + 1), c.d(n))
        assert c.field.is_zero(m)


def test_bad_differential_rejected():
    f = F2
    with pytest.raises(NotDifferential):
        chain.Complex(f, {0: 1, 1: 1, 2: 1}, {0: f.eye(1), 1: f.eye(1)})
    with pytest.raises(ShapeError):
        chain.Complex(f, {0: 2, 1: 1}, {0: f.eye(1)})


@given(st.integers(0, 10**6), st.integers(-3, 3))
def test_shift_reindexes_homology(seed, k):
    rng = gen.rng_for(seed)
    c = gen.random_complex(rng, GF(5), max_deg=2, min_deg=-1, max_total=5)
    shifted = chain.shift(c, k)
    want = {n - k: b for n, b in c.betti().items()}
    assert shifted.betti() == want


@given(st.integers(0, 10**6))
def test_direct_sum_adds_betti(seed):
    rng = gen.rng_for(seed)
    a = gen.random_complex(rng, F2, max_total=4)
    b = gen.random_complex(rng, F2, max_total=4)
    s = chain.direct_sum(a, b)
    assert s.betti() == chain.betti_add(a.betti(), b.betti())


@given(st.integers(0, 10**6), st.sampled_from(FIELDS))
def test_tensor_betti_is_convolution(seed, label):
    """Kunneth over a field: tensor homology is the Betti convolution."""
    rng = gen.rng_for(seed)
    field = Field.parse(label)
    a = gen.random_complex(rng, field, max_total=4)
    b = gen.random_complex(rng, field, max_total=4)
    t = chain.tensor(a, b)
    assert t.betti() == chain.betti_convolve(a.betti(), b.betti())


@given(st.integers(0, 10**6))
def test_quasi_isos_compose(seed):
    """conjugate() produces honest isomorphisms; their composites stay qisos."""
    rng = gen.rng_for(seed)
    c = gen.random_complex(rng, F2, max_total=4)
    f = chain.identity_map(c)
    assert chain.is_quasi_iso(f)
    g = chain.compose(f, f)
    assert chain.is_quasi_iso(g)


@given(st.integers(0, 10**6))
def test_cone_of_identity_is_acyclic(seed):
    rng = gen.rng_for(seed)
    c = gen.random_complex(rng, GF(5), max_total=4)
    cn = chain.cone(chain.identity_map(c))
    assert cn.is_acyclic()


@given(st.integers(0, 10**6))
def test_cone_detects_quasi_iso(seed):
    """The zero map is a quasi iso exactly when both sides are acyclic."""
    rng = gen.rng_for(seed)
    c = gen.random_complex(rng, F2, max_total=4)
    z = chain.zero_map(c, c)
    assert chain.is_quasi_iso(z) == c.is_acyclic()


@given(st.integers(0, 10**6))
def test_euler_characteristic_is_additive_and_homotopy_invariant(seed):
    rng = gen.rng_for(seed)
    a = gen.random_complex(rng, QQ, max_total=4)
    b = gen.random_complex(rng, QQ, max_total=4)
    assert chain.direct_sum(a, b).euler() == a.euler() + b.euler()
    from_betti = sum((-1) ** n * d for n, d in a.betti().items())
    assert a.euler() == from_betti


def test_one_complex_and_zero_complex():
    c = chain.one_complex(F2, 3, 2)
    assert c.betti() == {3: 2}
    z = chain.zero_complex(F2)
    assert z.is_zero() and z.betti() == {}
    assert z.is_acyclic()


@given(st.integers(0, 10**6))
def test_hom_complex_h0_counts_chain_maps_up_to_homotopy(seed):
    """H^0 of hom(C, C) is at least one dimensional when C is nonzero:
    the identity is a cycle, null homotopic only if C is contractible."""
    rng = gen.rng_for(seed)
    c = gen.random_complex(rng, F2, max_total=3)
    h = chain.hom_complex(c, c)
    b = h.betti()
    if not c.is_acyclic():
        assert b.get(0, 0) >= 1


@given(st.integers(0, 10**6))
def test_shift_map_commutes_with_composition(seed):
    rng = gen.rng_for(seed)
    c = gen.random_complex(rng, F2, max_total=3)
    f = chain.identity_map(c)
    sf = chain.shift_map(f, 1)
    assert chain.is_quasi_iso(sf)


def test_render_betti():
    assert chain.render_betti({0: 1, 1: 2}) == "{0:1, 1:2}"
    assert chain.render_betti({}) == "{}"
