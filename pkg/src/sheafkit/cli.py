"""Batch front door.

One process, one command, one report on standard output.  Exit code 0 means
the computation succeeded and any verdict it carries is true, 1 means a
verdict came back false, 2 means the inputs were unusable (parse error,
missing file, wrong object kinds, conflicting fields).  Two runs over
identical inputs produce byte-identical output in both emit modes; every
report embeds the tool version, the working field, the seed when one is in
play, and a content digest of each input file.
"""

import argparse
import os
import sys

from . import __version__, classify, funcat, io, kernel, localize, tails, witness
from .errors import NotCompact, NotVerified, ParseError, SheafError
from .field import Field
from .funcat import PFunctor
from .kernel import Kernel
from .poset import MonotoneMap, Poset
from .report import Report
from .witness import TowerFunctor

KINDS = {
    Poset: "poset",
    PFunctor: "sheaf",
    Kernel: "kernel",
    MonotoneMap: "map",
    TowerFunctor: "tower",
}


class UsageError(Exception):
    """Bad invocation shape; reported on stderr with exit code 2."""


class Inputs:
    """Input files parsed in argv order, with digests for the report stamp."""

    def __init__(self, paths):
        self.registry = {}
        self.objects = []
        self.digests = []
        for path in paths:
            obj = io.load_path(path, self.registry)
            self.objects.append((path, obj))
            self.digests.append((os.path.basename(path), io.sha256_path(path)))

    def of_kind(self, cls):
        return [o for _, o in self.objects if isinstance(o, cls)]

    def only(self, cls):
        got = self.of_kind(cls)
        if len(got) != 1:
            raise UsageError(
                "expected exactly one %s input, got %d" % (KINDS[cls], len(got))
            )
        return got[0]

    def pair(self, cls):
        got = self.of_kind(cls)
        if len(got) != 2:
            raise UsageError(
                "expected exactly two %s inputs, got %d" % (KINDS[cls], len(got))
            )
        return got


def working_field(args, inputs):
    """Reconcile the --field flag with any field the inputs declare."""
    declared = []
    for _, obj in inputs.objects:
        f = getattr(obj, "field", None)
        if isinstance(f, Field) and all(f != d for d in declared):
            declared.append(f)
    if len(declared) > 1:
        raise UsageError(
            "inputs declare different fields: %s"
            % ", ".join(d.label for d in declared)
        )
    flag = None
    if args.field is not None:
        try:
            flag = Field.parse(args.field)
        except ValueError:
            raise UsageError(
                "bad field label %r (expected F2, Fp:<p>, or Q)" % args.field
            )
    if flag is not None and declared and flag != declared[0]:
        raise UsageError(
            "--field %s conflicts with the input field %s"
            % (flag.label, declared[0].label)
        )
    if flag is not None:
        return flag
    if declared:
        return declared[0]
    return Field.parse("F2")


def _report(title, args, inputs, field=None, seed=None):
    rep = Report(title)
    rep.stamp(
        __version__,
        field=field,
        seed=seed,
        digests=inputs.digests if inputs is not None else None,
    )
    return rep


def _add_digests(rep, inputs):
    """Library reports stamp themselves; append the input digests."""
    if inputs is not None and inputs.digests:
        rep.section("inputs")
        for name, digest in inputs.digests:
            rep.add("input %s" % name, digest)
    return rep


def _emit(rep, args):
    sys.stdout.write(rep.render(args.emit))
    return 0 if rep.verdict is None or rep.verdict else 1


# -- subcommands --------------------------------------------------------------------


def cmd_validate(args):
    inputs = Inputs(args.inputs)
    if not inputs.objects:
        raise UsageError("validate needs at least one input file")
    rep = _report("validate", args, inputs)
    for path, obj in inputs.objects:
        rep.section(os.path.basename(path))
        kind = KINDS[type(obj)]
        rep.add("kind", kind)
        rep.add("name", getattr(obj, "name", ""))
        if isinstance(obj, Poset):
            rep.add("elements", len(obj.elements))
            rep.add("covers", len(obj.covers))
        elif isinstance(obj, PFunctor):
            rep.add("base", obj.poset.name)
            rep.add("support", obj.support())
        elif isinstance(obj, Kernel):
            rep.add("left", obj.left.name)
            rep.add("right", obj.right.name)
            rep.add("support", obj.carrier.support())
        elif isinstance(obj, MonotoneMap):
            rep.add("from", obj.source.name)
            rep.add("to", obj.target.name)
        elif isinstance(obj, TowerFunctor):
            rep.add("horizon", obj.horizon)
    rep.add_verdict(True)
    return _emit(rep, args)


def cmd_homology(args):
    inputs = Inputs(args.inputs)
    towers = inputs.of_kind(TowerFunctor)
    if towers:
        t = towers[0]
        field = working_field(args, inputs)
        rep = _report("homology", args, inputs, field=field)
        rep.section("stages")
        for n in range(t.horizon + 1):
            rep.add("position %d betti" % n, t.values[n].betti())
        rep.add("eventual betti", t.eventual.betti())
        return _emit(rep, args)
    f = inputs.only(PFunctor)
    field = working_field(args, inputs)
    rep = _report("homology", args, inputs, field=field)
    rep.section("stalks")
    for p in f.poset.elements:
        if p in f.values:
            rep.add("%s betti" % p, tails.betti_value(f.value(p)))
    return _emit(rep, args)


def cmd_stalk(args):
    inputs = Inputs(args.inputs)
    f = inputs.only(PFunctor)
    field = working_field(args, inputs)
    f.poset.require_element(args.element)
    rep = _report("stalk", args, inputs, field=field)
    rep.section("result")
    rep.add("element", args.element)
    rep.add("betti", tails.betti_value(f.value(args.element)))
    return _emit(rep, args)


def cmd_sections(args):
    inputs = Inputs(args.inputs)
    f = inputs.only(PFunctor)
    field = working_field(args, inputs)
    rep = _report("sections", args, inputs, field=field)
    rep.section("result")
    rep.add("betti", funcat.holim(f).betti())
    return _emit(rep, args)


def cmd_rhom(args):
    inputs = Inputs(args.inputs)
    f, g = inputs.pair(PFunctor)
    field = working_field(args, inputs)
    rep = _report("rhom", args, inputs, field=field)
    rep.section("result")
    rep.add("betti", funcat.rhom(f, g).betti())
    return _emit(rep, args)


def cmd_hocolim(args):
    inputs = Inputs(args.inputs)
    f = inputs.only(PFunctor)
    field = working_field(args, inputs)
    rep = _report("hocolim", args, inputs, field=field)
    rep.section("result")
    rep.add("betti", funcat.hocolim(f).betti())
    return _emit(rep, args)


def cmd_cellularize(args):
    inputs = Inputs(args.inputs)
    f = inputs.only(PFunctor)
    field = working_field(args, inputs)
    rep = _report("cellularize", args, inputs, field=field)
    try:
        pres = classify.cellularize(f)
    except NotCompact as exc:
        rep.section("result")
        rep.evidence(exc.context.get("reason", str(exc)))
        rep.add_verdict(False)
        return _emit(rep, args)
    summary = pres.verify()
    rep.section("result")
    rep.add("levels", summary["levels"])
    for m, level in enumerate(pres.cells):
        rep.add("cells at level %d" % m, len(level))
    rep.add("nonzero cells", classify.cell_count(pres))
    rep.add("cone checks", summary["cone_checks"])
    rep.add("reconstruction quasi-iso", summary["augmentation_quasi_iso"])
    rep.add_verdict(True)
    return _emit(rep, args)


def cmd_classify(args):
    inputs = Inputs(args.inputs)
    towers = inputs.of_kind(TowerFunctor)
    f = towers[0] if towers else inputs.only(PFunctor)
    field = working_field(args, inputs)
    verdict = classify.is_compact(f) if args.compact else classify.is_proper(f)
    rep = _report("classify", args, inputs, field=field)
    rep.section(verdict.predicate)
    verdict.add_to(rep)
    rep.add_verdict(verdict.value)
    return _emit(rep, args)


def cmd_convolve(args):
    inputs = Inputs(args.inputs)
    f = inputs.only(PFunctor)
    k = inputs.only(Kernel)
    field = working_field(args, inputs)
    out = kernel.convolve(f, k, name="%s*%s" % (f.name or "F", k.name))
    header = Report("convolve")
    header.stamp(__version__, field=field, digests=inputs.digests)
    body = io.emit_sheaf(out)
    text = header.render(args.emit)
    commented = "".join("# " + line + "\n" for line in text.splitlines())
    sys.stdout.write(commented + body)
    return 0


def cmd_check_kernel(args):
    inputs = Inputs(args.inputs)
    k = inputs.only(Kernel)
    field = working_field(args, inputs)
    verdict = classify.check_kernel(k)
    rep = _report("check-kernel", args, inputs, field=field)
    rep.section("columns")
    verdict.add_to(rep)
    rep.add_verdict(verdict.preserves_compacts)
    return _emit(rep, args)


def cmd_cross_validate(args):
    inputs = Inputs(args.inputs)
    k = inputs.only(Kernel)
    working_field(args, inputs)
    samples = args.samples if args.samples is not None else 50
    rep = classify.cross_validate_kernel(k, samples, args.seed)
    _add_digests(rep, inputs)
    return _emit(rep, args)


def cmd_localize_check(args):
    inputs = Inputs(args.inputs)
    q = inputs.only(MonotoneMap)
    field = working_field(args, inputs)
    bire = localize.check_bireflective(q, field)
    rep = _report("localize-check", args, inputs, field=field)
    rep.section("bireflection")
    rep.add("map", q.name)
    rep.add("status", bire.status)
    if not bire.verified:
        rep.add("witness generator", bire.witness)
        for key, value in bire.evidence.items():
            rep.add(key, value)
    rep.add_verdict(bire.verified)
    return _emit(rep, args)


def cmd_transfer_report(args):
    inputs = Inputs(args.inputs)
    q = inputs.only(MonotoneMap)
    field = working_field(args, inputs)
    bire = localize.check_bireflective(q, field)
    if not bire.verified:
        rep = _report("transfer-report", args, inputs, field=field)
        rep.section("bireflection")
        rep.add("status", bire.status)
        rep.add("witness generator", bire.witness)
        rep.add_verdict(False)
        return _emit(rep, args)
    samples = args.samples if args.samples is not None else 50
    rep = localize.transfer_report(bire, samples=samples, seed=args.seed)
    _add_digests(rep, inputs)
    return _emit(rep, args)


def cmd_demo(args):
    if args.topic != "towers":
        raise UsageError("unknown demo topic %r" % args.topic)
    field = Field.parse(args.field) if args.field else Field.parse("F2")
    rep = witness.tower_colimit_demo(field, horizon=args.horizon)
    return _emit(rep, args)


# -- wiring -----------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--emit", choices=("human", "machine"), default="human",
        help="report style (default human)",
    )
    common.add_argument("--field", help="working field: F2, Fp:<p>, or Q")
    common.add_argument("--seed", type=int, default=0, help="sampling seed")
    common.add_argument("--samples", type=int, help="sample count for validators")
    common.add_argument("--horizon", type=int, help="window override for towers")

    ap = argparse.ArgumentParser(
        prog="sheafctl",
        description="Exact computations with diagrams of chain complexes on finite posets.",
    )
    ap.add_argument("--version", action="version", version="sheafctl " + __version__)
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def cmd(name, fn, help_text, inputs="*"):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if inputs == "*":
            p.add_argument("inputs", nargs="*", metavar="file")
        p.set_defaults(fn=fn)
        return p

    cmd("validate", cmd_validate, "parse inputs and summarize them")
    cmd("homology", cmd_homology, "stalkwise homology of a sheaf or tower")
    p = cmd("stalk", cmd_stalk, "homology of one stalk")
    p.add_argument("element", help="element id")
    cmd("sections", cmd_sections, "derived global sections (homotopy limit)")
    cmd("rhom", cmd_rhom, "derived hom between two sheaves on one poset")
    cmd("hocolim", cmd_hocolim, "homotopy colimit of a sheaf")
    cmd("cellularize", cmd_cellularize, "finite cell presentation of a compact sheaf")
    p = cmd("classify", cmd_classify, "compactness or properness verdict")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--compact", action="store_true")
    grp.add_argument("--proper", action="store_true")
    cmd("convolve", cmd_convolve, "convolve a sheaf with a kernel, emit the result")
    cmd("check-kernel", cmd_check_kernel, "columnwise compactness criterion")
    cmd("cross-validate", cmd_cross_validate,
        "kernel criterion against the operational definition")
    cmd("localize-check", cmd_localize_check, "verify a coarsening is bi-reflective")
    cmd("transfer-report", cmd_transfer_report,
        "compactness and properness transfer along a verified coarsening")
    p = cmd("demo", cmd_demo, "built-in witness demonstrations", inputs=None)
    p.add_argument("topic", choices=("towers",))

    return ap


def run(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except UsageError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except SheafError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
