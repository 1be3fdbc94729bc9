"""Deterministic plain-text reports.

Reports are append-only sequences of sections, key-value lines, evidence
lines, and verdict lines; rendering preserves insertion order, so two runs
over identical inputs produce byte-identical text in both the human and the
machine mode.  Values are normalized through canonical formatters (booleans
as true/false, Betti tables through their own renderers) rather than raw
repr, so nothing order-unstable leaks in.
"""

from fractions import Fraction

from . import chain, tails


def fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, tails.BettiData):
        return value.render()
    if isinstance(value, dict):
        return chain.render_betti(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(fmt(v) for v in value) + "]"
    return str(value)


class Report:
    def __init__(self, title):
        self.title = title
        self.rows = []
        self.verdict = None

    def section(self, name):
        self.rows.append(("section", name))
        return self

    def add(self, key, value):
        self.rows.append(("kv", (key, fmt(value))))
        return self

    def evidence(self, text):
        self.rows.append(("evidence", str(text)))
        return self

    def add_verdict(self, ok):
        ok = bool(ok)
        self.verdict = ok if self.verdict is None else (self.verdict and ok)
        self.rows.append(("verdict", ok))
        return self

    def passed(self):
        return bool(self.verdict)

    def stamp(self, version, field=None, seed=None, digests=None):
        """Standard header block: tool version, field, seed, input digests."""
        self.add("version", version)
        if field is not None:
            self.add("field", field.label)
        if seed is not None:
            self.add("seed", seed)
        for name, digest in digests or []:
            self.add("input %s" % name, digest)
        return self

    def render(self, mode="human"):
        if mode == "machine":
            return self._render_machine()
        return self._render_human()

    def _render_human(self):
        out = ["report: %s" % self.title]
        for kind, payload in self.rows:
            if kind == "section":
                out.append("== %s ==" % payload)
            elif kind == "kv":
                out.append("%s: %s" % payload)
            elif kind == "evidence":
                out.append("evidence: %s" % payload)
            else:
                out.append("verdict: %s" % fmt(payload))
        return "\n".join(out) + "\n"

    def _render_machine(self):
        out = ["report=%s" % self.title]
        section = ""
        for kind, payload in self.rows:
            if kind == "section":
                section = payload.replace(" ", "_") + "."
            elif kind == "kv":
                key, value = payload
                out.append("%s%s=%s" % (section, key.replace(" ", "_"), value))
            elif kind == "evidence":
                out.append("%sevidence=%s" % (section, payload))
            else:
                out.append("%sverdict=%s" % (section, fmt(payload)))
        return "\n".join(out) + "\n"
