"""Line-based text formats with canonical emission.

Five formats, one per kind of object: .poset, .shf (sheaf over a named
poset), .ker (kernel between two named posets), .mono (monotone map), and
.tower (eventually constant tower).  Parsing is whitespace-tolerant with
`#` comments; every diagnostic names the file, line, and offending token.
Emission is canonical: declaration order for elements and covers, ascending
degrees, matrix entries sorted by row then column, single spaces.  Parsing
an emitted file reproduces the object, and re-emitting reproduces the text
byte for byte.

Sheaves, kernels, and maps reference posets by name; the loader resolves a
name through the registry of already loaded posets, then by looking for
`<name>.poset` next to the referencing file.
"""

import hashlib
import os

from . import chain, tails
from .chain import ChainMap, Complex
from .errors import ParseError, ShapeError, SheafError
from .field import Field
from .funcat import PFunctor
from .kernel import Kernel
from .poset import MonotoneMap, make_poset, opposite, product
from .tails import TailValue
from .witness import TowerFunctor


def sha256_bytes(data):
    return hashlib.sha256(data).hexdigest()


def sha256_path(path):
    with open(path, "rb") as fh:
        return sha256_bytes(fh.read())


class TokenStream:
    """Tokens with line numbers; braces and semicolons self-delimit."""

    def __init__(self, text, path):
        self.path = path
        self.toks = []
        for ln, line in enumerate(text.splitlines(), 1):
            body = line.split("#", 1)[0]
            for ch in "{};":
                body = body.replace(ch, " %s " % ch)
            for tok in body.split():
                self.toks.append((tok, ln))
        self.i = 0

    def at_end(self):
        return self.i >= len(self.toks)

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def next(self, what="token"):
        if self.at_end():
            line = self.toks[-1][1] if self.toks else 0
            raise ParseError(
                "unexpected end of file, expected %s" % what,
                path=self.path,
                line=line,
                token="<eof>",
            )
        tok, _ = self.toks[self.i]
        self.i += 1
        return tok

    def line(self):
        idx = min(self.i, len(self.toks) - 1)
        return self.toks[idx][1] if self.toks else 0

    def prev_line(self):
        idx = max(self.i - 1, 0)
        return self.toks[idx][1] if self.toks else 0

    def expect(self, literal):
        tok = self.next(repr(literal))
        if tok != literal:
            self.error("expected %r" % literal, token=tok)
        return tok

    def error(self, message, token=None, line=None):
        raise ParseError(
            message,
            path=self.path,
            line=self.prev_line() if line is None else line,
            token=token,
        )

    def take_int(self, what="integer"):
        tok = self.next(what)
        try:
            return int(tok)
        except ValueError:
            self.error("expected %s" % what, token=tok)


def _wrap(ts, line, exc):
    """Re-raise a constructor failure as a parse diagnostic."""
    raise ParseError(str(exc), path=ts.path, line=line, token=None)


# -- matrices ---------------------------------------------------------------------


def parse_mat(ts, field):
    ts.expect("mat")
    rows = ts.take_int("row count")
    cols = ts.take_int("column count")
    ts.expect("{")
    m = field.zeros(rows, cols)
    while ts.peek() != "}":
        r = ts.take_int("row index")
        c = ts.take_int("column index")
        v = ts.next("matrix entry")
        if not 0 <= r < rows or not 0 <= c < cols:
            ts.error(
                "entry (%d, %d) outside a %d x %d matrix" % (r, c, rows, cols),
                token="%d %d" % (r, c),
            )
        try:
            m[r, c] = field.scalar(v)
        except (ValueError, ZeroDivisionError):
            ts.error("bad scalar literal", token=v)
        if ts.peek() == ";":
            ts.next()
    ts.expect("}")
    return m


def emit_mat(field, m):
    rows, cols = m.shape
    entries = []
    for r in range(rows):
        for c in range(cols):
            if not field.scalar_is_zero(m[r, c]):
                entries.append("%d %d %s" % (r, c, field.scalar_repr(m[r, c])))
    if not entries:
        return "mat %d %d { }" % (rows, cols)
    return "mat %d %d { %s }" % (rows, cols, " ; ".join(entries))


# -- value blocks -------------------------------------------------------------------


def _parse_base_block(ts, field):
    """A self-contained complex: deg/dim entries plus inline diffs."""
    ts.expect("{")
    dims = {}
    diffs = {}
    while ts.peek() != "}":
        tok = ts.next("deg or diff")
        if tok == "deg":
            n = ts.take_int("degree")
            ts.expect("dim")
            dims[n] = ts.take_int("dimension")
        elif tok == "diff":
            n = ts.take_int("degree")
            diffs[n] = parse_mat(ts, field)
        elif tok == ";":
            continue
        else:
            ts.error("expected deg or diff in a base block", token=tok)
    ts.expect("}")
    line = ts.prev_line()
    try:
        return Complex(field, dims, diffs)
    except SheafError as exc:
        _wrap(ts, line, exc)


def parse_val_block(ts, field):
    """A val block: deg/dim entries and an optional tail clause.

    Returns (dims, tail) where tail is None or (base Complex, anchor,
    stride); the finite differentials arrive on separate diff lines.
    """
    ts.expect("{")
    dims = {}
    tail = None
    while ts.peek() != "}":
        tok = ts.next("deg or tail")
        if tok == "deg":
            n = ts.take_int("degree")
            ts.expect("dim")
            dims[n] = ts.take_int("dimension")
        elif tok == "tail":
            if tail is not None:
                ts.error("a value may carry only one tail", token=tok)
            ts.expect("base")
            base = _parse_base_block(ts, field)
            ts.expect("anchor")
            anchor = ts.take_int("anchor")
            ts.expect("stride")
            stride = ts.take_int("stride")
            tail = (base, anchor, stride)
        elif tok == ";":
            continue
        else:
            ts.error("expected deg or tail in a val block", token=tok)
    ts.expect("}")
    return dims, tail


def _finish_value(ts, field, line, dims, diffs, tail):
    try:
        fin = Complex(field, dims, diffs)
        if tail is None:
            return fin
        base, anchor, stride = tail
        return TailValue(fin, base, anchor, stride)
    except SheafError as exc:
        _wrap(ts, line, exc)


def _emit_dims(c):
    return ["deg %d dim %d" % (n, c.dims[n]) for n in sorted(c.dims)]


def _emit_val_block(value):
    fin = tails.finite_part(value)
    items = _emit_dims(fin)
    t = tails.tail_of(value)
    if t is not None:
        base, stride = t
        inner = _emit_dims(base)
        inner.extend(
            "diff %d %s" % (n, emit_mat(base.field, base.d(n)))
            for n in sorted(base.diffs)
        )
        items.append(
            "tail base { %s } anchor 0 stride %d" % (" ; ".join(inner), stride)
        )
    if not items:
        return "{ }"
    return "{ %s }" % " ; ".join(items)


def _emit_value_lines(label, value, field):
    """val/diff lines for one named value, in canonical order."""
    lines = ["val %s %s" % (label, _emit_val_block(value))]
    fin = tails.finite_part(value)
    for n in sorted(fin.diffs):
        lines.append("diff %s deg %d %s" % (label, n, emit_mat(field, fin.d(n))))
    return lines


def _emit_edge_lines(label, m, field):
    lines = []
    fin = tails.fin_component(m)
    for n in sorted(fin.comps):
        lines.append("map %s deg %d %s" % (label, n, emit_mat(field, fin.comps[n])))
    sl = tails.slice_component(m)
    if sl is not None:
        for n in sorted(sl.comps):
            lines.append(
                "tailmap %s deg %d %s" % (label, n, emit_mat(field, sl.comps[n]))
            )
    return lines


def _split_edge_token(ts, tok):
    parts = tok.split("<")
    if len(parts) != 2 or not parts[0] or not parts[1]:
        ts.error("expected a token of the form a<b", token=tok)
    return parts[0], parts[1]


class _EdgeAccumulator:
    """Collects map/tailmap components, then builds validated tame maps."""

    def __init__(self):
        self.fin = {}
        self.slices = {}
        self.lines = {}

    def add(self, kind, edge, deg, mat, line):
        store = self.fin if kind == "map" else self.slices
        store.setdefault(edge, {})[deg] = mat
        self.lines.setdefault(edge, line)

    def build(self, ts, values, zero_value):
        edges = {}
        for e in sorted(set(self.fin) | set(self.slices), key=str):
            src = values.get(e[0], zero_value)
            dst = values.get(e[1], zero_value)
            line = self.lines[e]
            try:
                fin = ChainMap(
                    tails.finite_part(src),
                    tails.finite_part(dst),
                    self.fin.get(e, {}),
                )
                sl = None
                if e in self.slices:
                    ts_src, ts_dst = tails.tail_of(src), tails.tail_of(dst)
                    if ts_src is None or ts_dst is None:
                        raise ParseError(
                            "tailmap between values without tails",
                            path=ts.path,
                            line=line,
                            token="%s<%s" % e,
                        )
                    sl = ChainMap(ts_src[0], ts_dst[0], self.slices[e])
                edges[e] = tails.tame_map(src, dst, fin, sl)
            except ParseError:
                raise
            except SheafError as exc:
                _wrap(ts, line, exc)
        return edges


# -- posets -----------------------------------------------------------------------


def parse_poset(text, path="<poset>"):
    ts = TokenStream(text, path)
    ts.expect("poset")
    name = ts.next("poset name")
    elements = []
    covers = []
    while not ts.at_end():
        tok = ts.next()
        if tok == "elem":
            while ts.peek() not in (None, "elem", "rel"):
                elements.append(ts.next("element id"))
        elif tok == "rel":
            while ts.peek() not in (None, "elem", "rel"):
                covers.append(_split_edge_token(ts, ts.next("relation")))
        else:
            ts.error("expected elem or rel", token=tok)
    try:
        return make_poset(name, elements, covers)
    except SheafError as exc:
        _wrap(ts, ts.prev_line(), exc)


def emit_poset(p):
    lines = ["poset %s" % p.name]
    if p.elements:
        lines.append("elem %s" % " ".join(p.elements))
    if p.covers:
        lines.append("rel %s" % " ".join("%s<%s" % e for e in p.covers))
    return "\n".join(lines) + "\n"


# -- sheaves ----------------------------------------------------------------------


def parse_sheaf(text, path, resolve):
    """Parse a .shf file; resolve(name, ts) supplies the named poset."""
    ts = TokenStream(text, path)
    ts.expect("sheaf")
    name = ts.next("sheaf name")
    ts.expect("over")
    poset = resolve(ts.next("poset name"), ts)
    ts.expect("field")
    field = _parse_field(ts)

    dims = {}
    tail_specs = {}
    diffs = {}
    val_lines = {}
    acc = _EdgeAccumulator()
    while not ts.at_end():
        tok = ts.next()
        if tok == "val":
            elem = _require_elem(ts, poset, ts.next("element id"))
            val_lines[elem] = ts.prev_line()
            dims[elem], tail_specs[elem] = parse_val_block(ts, field)
        elif tok == "diff":
            elem = _require_elem(ts, poset, ts.next("element id"))
            ts.expect("deg")
            n = ts.take_int("degree")
            diffs.setdefault(elem, {})[n] = parse_mat(ts, field)
        elif tok in ("map", "tailmap"):
            a, b = _split_edge_token(ts, ts.next("cover pair"))
            _require_elem(ts, poset, a)
            _require_elem(ts, poset, b)
            if (a, b) not in set(poset.covers):
                ts.error("map must follow a covering relation", token="%s<%s" % (a, b))
            ts.expect("deg")
            n = ts.take_int("degree")
            acc.add(tok, (a, b), n, parse_mat(ts, field), ts.prev_line())
        else:
            ts.error("expected val, diff, map, or tailmap", token=tok)

    values = {}
    for elem, d in dims.items():
        v = _finish_value(
            ts, field, val_lines[elem], d, diffs.pop(elem, {}), tail_specs[elem]
        )
        if not tails.value_is_zero(v):
            values[elem] = v
    if diffs:
        elem = sorted(diffs)[0]
        ts.error("diff for element without a val block", token=elem, line=1)
    edges = acc.build(ts, values, chain.zero_complex(field))
    try:
        return PFunctor(poset, field, values, edges, check=True, name=name)
    except SheafError as exc:
        _wrap(ts, 1, exc)


def emit_sheaf(f, name=None):
    lines = [
        "sheaf %s over %s field %s" % (name or f.name or "F", f.poset.name, f.field.label)
    ]
    for p in f.poset.elements:
        if p in f.values:
            lines.extend(_emit_value_lines(p, f.value(p), f.field))
    for e in f.poset.covers:
        if e in f.edges:
            lines.extend(_emit_edge_lines("%s<%s" % e, f.edges[e], f.field))
    return "\n".join(lines) + "\n"


def _require_elem(ts, poset, elem):
    if elem not in poset.index:
        ts.error("element %r is not in poset %s" % (elem, poset.name), token=elem)
    return elem


def _parse_field(ts):
    tok = ts.next("field label")
    try:
        return Field.parse(tok)
    except ValueError:
        ts.error("bad field label (expected F2, Fp:<p>, or Q)", token=tok)


# -- kernels ----------------------------------------------------------------------


def parse_kernel(text, path, resolve):
    ts = TokenStream(text, path)
    ts.expect("kernel")
    name = ts.next("kernel name")
    ts.expect("left")
    left = resolve(ts.next("poset name"), ts)
    ts.expect("right")
    right = resolve(ts.next("poset name"), ts)
    ts.expect("field")
    field = _parse_field(ts)
    carrier_poset = product(opposite(left), right)

    dims = {}
    tail_specs = {}
    diffs = {}
    val_lines = {}
    acc = _EdgeAccumulator()
    while not ts.at_end():
        tok = ts.next()
        if tok == "val":
            elem = _require_elem(ts, carrier_poset, ts.next("pair id"))
            val_lines[elem] = ts.prev_line()
            dims[elem], tail_specs[elem] = parse_val_block(ts, field)
        elif tok == "diff":
            elem = _require_elem(ts, carrier_poset, ts.next("pair id"))
            ts.expect("deg")
            n = ts.take_int("degree")
            diffs.setdefault(elem, {})[n] = parse_mat(ts, field)
        elif tok in ("map", "tailmap"):
            a, b = _split_edge_token(ts, ts.next("pair of pair ids"))
            _require_elem(ts, carrier_poset, a)
            _require_elem(ts, carrier_poset, b)
            if (a, b) not in set(carrier_poset.covers):
                ts.error(
                    "map must follow a covering relation of the product order",
                    token="%s<%s" % (a, b),
                )
            ts.expect("deg")
            n = ts.take_int("degree")
            acc.add(tok, (a, b), n, parse_mat(ts, field), ts.prev_line())
        else:
            ts.error("expected val, diff, map, or tailmap", token=tok)

    values = {}
    for elem, d in dims.items():
        v = _finish_value(
            ts, field, val_lines[elem], d, diffs.pop(elem, {}), tail_specs[elem]
        )
        if not tails.value_is_zero(v):
            values[elem] = v
    if diffs:
        elem = sorted(diffs)[0]
        ts.error("diff for a pair without a val block", token=elem, line=1)
    edges = acc.build(ts, values, chain.zero_complex(field))
    try:
        carrier = PFunctor(
            carrier_poset, field, values, edges, check=True, name=name
        )
        return Kernel(left, right, carrier, name=name)
    except SheafError as exc:
        _wrap(ts, 1, exc)


def emit_kernel(k):
    lines = [
        "kernel %s left %s right %s field %s"
        % (k.name or "K", k.left.name, k.right.name, k.carrier.field.label)
    ]
    carrier = k.carrier
    for p in carrier.poset.elements:
        if p in carrier.values:
            lines.extend(_emit_value_lines(p, carrier.value(p), carrier.field))
    for e in carrier.poset.covers:
        if e in carrier.edges:
            lines.extend(_emit_edge_lines("%s<%s" % e, carrier.edges[e], carrier.field))
    return "\n".join(lines) + "\n"


# -- monotone maps ------------------------------------------------------------------


def parse_mono(text, path, resolve):
    ts = TokenStream(text, path)
    ts.expect("map")
    name = ts.next("map name")
    ts.expect("from")
    source = resolve(ts.next("poset name"), ts)
    ts.expect("to")
    target = resolve(ts.next("poset name"), ts)
    mapping = {}
    while not ts.at_end():
        ts.expect("send")
        p = _require_elem(ts, source, ts.next("source element"))
        ts.expect("->")
        q = _require_elem(ts, target, ts.next("target element"))
        if p in mapping and mapping[p] != q:
            ts.error("element %r sent to two different targets" % p, token=p)
        mapping[p] = q
    try:
        return MonotoneMap(source, target, mapping, name=name)
    except SheafError as exc:
        _wrap(ts, ts.prev_line(), exc)


def emit_mono(q):
    lines = ["map %s from %s to %s" % (q.name, q.source.name, q.target.name)]
    for p in q.source.elements:
        lines.append("send %s -> %s" % (p, q.mapping[p]))
    return "\n".join(lines) + "\n"


# -- towers -----------------------------------------------------------------------


def parse_tower(text, path="<tower>"):
    ts = TokenStream(text, path)
    ts.expect("tower")
    name = ts.next("tower name")
    ts.expect("horizon")
    horizon = ts.take_int("horizon")
    if horizon < 0:
        ts.error("horizon must be a natural number", token=str(horizon))
    ts.expect("field")
    field = _parse_field(ts)

    dims = {}
    diffs = {}
    steps = {}
    lines = {}
    while not ts.at_end():
        tok = ts.next()
        if tok == "val":
            n = ts.take_int("position")
            lines[n] = ts.prev_line()
            block, tail = parse_val_block(ts, field)
            if tail is not None:
                ts.error("tower positions hold plain complexes", token="tail")
            dims[n] = block
        elif tok == "diff":
            n = ts.take_int("position")
            ts.expect("deg")
            m = ts.take_int("degree")
            diffs.setdefault(n, {})[m] = parse_mat(ts, field)
        elif tok == "step":
            n = ts.take_int("position")
            ts.expect("deg")
            m = ts.take_int("degree")
            steps.setdefault(n, {})[m] = parse_mat(ts, field)
            lines.setdefault(("step", n), ts.prev_line())
        else:
            ts.error("expected val, diff, or step", token=tok)

    for n in sorted(set(dims) | set(diffs) | set(steps)):
        if isinstance(n, tuple):
            continue
        if n < 0 or n > horizon:
            ts.error("position %d outside horizon %d" % (n, horizon), token=str(n))
    values = []
    for n in range(horizon + 1):
        try:
            values.append(Complex(field, dims.get(n, {}), diffs.get(n, {})))
        except SheafError as exc:
            _wrap(ts, lines.get(n, 1), exc)
    built_steps = []
    for n in range(horizon):
        try:
            built_steps.append(ChainMap(values[n + 1], values[n], steps.get(n, {})))
        except SheafError as exc:
            _wrap(ts, lines.get(("step", n), 1), exc)
    try:
        return TowerFunctor(field, values, built_steps, name=name)
    except SheafError as exc:
        _wrap(ts, 1, exc)


def emit_tower(t):
    lines = [
        "tower %s horizon %d field %s" % (t.name or "T", t.horizon, t.field.label)
    ]
    for n in range(t.horizon + 1):
        c = t.values[n]
        if c.dims:
            lines.append("val %d %s" % (n, _emit_val_block(c)))
        for m in sorted(c.diffs):
            lines.append("diff %d deg %d %s" % (n, m, emit_mat(t.field, c.d(m))))
    for n in range(t.horizon):
        s = t.steps[n]
        for m in sorted(s.comps):
            lines.append("step %d deg %d %s" % (n, m, emit_mat(t.field, s.comps[m])))
    return "\n".join(lines) + "\n"


# -- loading ----------------------------------------------------------------------

EXTENSIONS = (".poset", ".shf", ".ker", ".mono", ".tower")


def make_resolver(registry, base_dir):
    """Poset lookup: registry first, then `<name>.poset` beside the file."""

    def resolve(name, ts):
        if name in registry:
            return registry[name]
        candidate = os.path.join(base_dir, name + ".poset")
        if os.path.exists(candidate):
            poset = load_path(candidate, registry)
            if poset.name != name:
                ts.error(
                    "file %s declares poset %r" % (candidate, poset.name), token=name
                )
            return poset
        ts.error("unknown poset %r and no file %s.poset found" % (name, name), token=name)

    return resolve


def load_path(path, registry=None):
    """Parse one file by extension; posets register themselves by name."""
    registry = registry if registry is not None else {}
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ParseError(str(exc), path=path, line=0, token=None)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("file is not UTF-8: %s" % exc, path=path, line=0, token=None)
    ext = os.path.splitext(path)[1]
    resolve = make_resolver(registry, os.path.dirname(path) or ".")
    if ext == ".poset":
        obj = parse_poset(text, path)
        registry[obj.name] = obj
    elif ext == ".shf":
        obj = parse_sheaf(text, path, resolve)
    elif ext == ".ker":
        obj = parse_kernel(text, path, resolve)
    elif ext == ".mono":
        obj = parse_mono(text, path, resolve)
    elif ext == ".tower":
        obj = parse_tower(text, path)
    else:
        raise ParseError(
            "unknown extension %r (expected one of %s)" % (ext, ", ".join(EXTENSIONS)),
            path=path,
            line=0,
            token=ext,
        )
    return obj


def emit(obj, name=None):
    """Canonical text for any supported object."""
    from .poset import Poset

    if isinstance(obj, Poset):
        return emit_poset(obj)
    if isinstance(obj, PFunctor):
        return emit_sheaf(obj, name=name)
    if isinstance(obj, Kernel):
        return emit_kernel(obj)
    if isinstance(obj, MonotoneMap):
        return emit_mono(obj)
    if isinstance(obj, TowerFunctor):
        return emit_tower(obj)
    raise ShapeError("no text format for %r" % type(obj).__name__)
