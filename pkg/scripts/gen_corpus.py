"""Regenerate the example corpus under corpus/.

Every file is the canonical emission of an object built here, so reparsing
and re-emitting any corpus file reproduces it byte for byte.  Run from the
repository root:

    python3 scripts/gen_corpus.py
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from sheafkit import chain, funcat, io, kernel, poset, tails, witness
from sheafkit.field import Field

F2 = Field.parse("F2")
Q = Field.parse("Q")

OUT = os.path.join(os.path.dirname(__file__), "..", "corpus")


def save(name, text):
    path = os.path.join(OUT, name)
    with open(path, "w") as fh:
        fh.write(text)
    print("wrote", os.path.relpath(path))


def circle_poset():
    return poset.face_poset("circle", [["a", "b"], ["b", "c"], ["a", "c"]])


def hexagon():
    verts = ["v%d" % i for i in range(6)]
    return poset.face_poset(
        "hexagon", [[verts[i], verts[(i + 1) % 6]] for i in range(6)]
    )


def triangle_boundary():
    return poset.face_poset("triangle", [["a", "b"], ["b", "c"], ["a", "c"]])


def disc():
    return poset.face_poset("disc", [["a", "b", "c"]])


def octahedron():
    facets = []
    for sx in "pm":
        for sy in "pm":
            for sz in "pm":
                facets.append(["x" + sx, "y" + sy, "z" + sz])
    return poset.face_poset("octahedron", facets)


def vee():
    return poset.make_poset("vee", ["a", "b", "c"], [("a", "c"), ("b", "c")])


def point():
    return poset.make_poset("pt", ["pt"], [])


def tail_value(field, fin_dims, base_dims, base_diffs, anchor, stride):
    fin = chain.Complex(field, fin_dims, {})
    base = chain.Complex(field, base_dims, base_diffs)
    return tails.TailValue(fin, base, anchor, stride)


def tail_kernel(name, base_poset, values, field=F2):
    """Kernel on product(op(P), P) from a dict of (p, q) pair values.

    Structure maps are omitted: these curated kernels separate columns by
    stalk shape alone, so the zero maps are enough and keep the files small.
    """
    carrier_poset = poset.product(poset.opposite(base_poset), base_poset)
    vals = {poset.pair_id(p, q): v for (p, q), v in values.items()}
    carrier = funcat.PFunctor(carrier_poset, field, vals, {}, name=name)
    return kernel.Kernel(base_poset, base_poset, carrier, name=name)


def main():
    os.makedirs(OUT, exist_ok=True)

    circle = circle_poset()
    hexa = hexagon()
    tri = triangle_boundary()
    dsc = disc()
    octa = octahedron()
    v = vee()
    pt = point()
    for p in (circle, hexa, tri, dsc, octa, v, pt):
        save(p.name + ".poset", io.emit_poset(p))

    unit = chain.one_complex(F2, 0, 1)
    save(
        "const_k.shf",
        io.emit_sheaf(funcat.constant_functor(circle, unit, name="const_k")),
    )
    save(
        "const_k_hexagon.shf",
        io.emit_sheaf(funcat.constant_functor(hexa, unit, name="const_k_hexagon")),
    )
    save(
        "const_k_octahedron.shf",
        io.emit_sheaf(
            funcat.constant_functor(octa, unit, name="const_k_octahedron")
        ),
    )
    rational = funcat.constant_functor(circle, chain.one_complex(Q, 0, 1), name="const_q")
    save("const_q.shf", io.emit_sheaf(rational))
    save(
        "const_k_disc.shf",
        io.emit_sheaf(funcat.constant_functor(dsc, unit, name="const_k_disc")),
    )

    perfect_tail = tail_value(F2, {0: 1}, {0: 1, 1: 1}, {0: F2.mat([[1]])}, 0, 1)
    sky = funcat.PFunctor(v, F2, {"c": perfect_tail}, {}, name="tail_sky")
    save("tail_sky.shf", io.emit_sheaf(sky))

    save("id.ker", io.emit_kernel(kernel.identity_kernel(v, F2)))

    # curated tail kernels over vee; acyclic base <=> perfect tail stalk
    acyclic = lambda anchor, stride: tail_value(
        F2, {}, {0: 1, 1: 1}, {0: F2.mat([[1]])}, anchor, stride
    )
    lump = lambda deg: chain.one_complex(F2, deg, 1)
    diag = {("a", "a"): lump(0), ("b", "b"): lump(0), ("c", "c"): lump(0)}
    save(
        "tail_pos1.ker",
        io.emit_kernel(
            tail_kernel("tail_pos1", v, {**diag, ("a", "c"): acyclic(0, 1)})
        ),
    )
    save(
        "tail_pos2.ker",
        io.emit_kernel(
            tail_kernel(
                "tail_pos2",
                v,
                {**diag, ("b", "c"): acyclic(2, 2), ("a", "b"): lump(1)},
            )
        ),
    )
    save(
        "tail_pos3.ker",
        io.emit_kernel(
            tail_kernel(
                "tail_pos3",
                v,
                {
                    ("a", "a"): acyclic(1, 3),
                    ("b", "b"): lump(-1),
                    ("c", "c"): lump(0),
                },
            )
        ),
    )
    bad = lambda anchor, stride: tail_value(F2, {0: 1}, {0: 1}, {}, anchor, stride)
    save(
        "tail_neg1.ker",
        io.emit_kernel(
            tail_kernel("tail_neg1", v, {**diag, ("b", "c"): bad(3, 1)})
        ),
    )
    save(
        "tail_neg2.ker",
        io.emit_kernel(
            tail_kernel(
                "tail_neg2",
                v,
                {
                    ("a", "a"): lump(0),
                    ("b", "b"): bad(-2, 2),
                    ("c", "c"): lump(0),
                },
            )
        ),
    )

    coarsen = poset.MonotoneMap(
        hexa,
        tri,
        {
            "v0": "a", "v2": "b", "v4": "c",
            "v1": "a.b", "v3": "b.c", "v5": "a.c",
            "v0.v1": "a.b", "v1.v2": "a.b",
            "v2.v3": "b.c", "v3.v4": "b.c",
            "v4.v5": "a.c", "v0.v5": "a.c",
        },
        name="coarsen",
    )
    save("coarsen.mono", io.emit_mono(coarsen))
    collapse = poset.MonotoneMap(
        circle, pt, {x: "pt" for x in circle.elements}, name="collapse"
    )
    save("collapse.mono", io.emit_mono(collapse))

    save("const_tower.tower", io.emit_tower(witness.tower_const(unit, name="const_tower")))
    save(
        "trunc2.tower",
        io.emit_tower(witness.tower_truncation(unit, 2, name="trunc2")),
    )


if __name__ == "__main__":
    main()
