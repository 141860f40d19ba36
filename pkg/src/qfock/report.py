"""Uniform pass/fail reports for the verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field

MAX_WITNESSES = 3


@dataclass
class RelationReport:
    """Outcome of checking one relation over a batch of samples."""

    relation: str
    samples_tested: int = 0
    failures: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.failures

    def record(self, ok, input=None, lhs=None, rhs=None):
        self.samples_tested += 1
        if not ok and len(self.failures) < MAX_WITNESSES:
            self.failures.append(
                {"input": str(input), "lhs": str(lhs), "rhs": str(rhs)}
            )
        elif not ok:
            self.failures.append("...")
        return ok

    def to_json(self):
        return {
            "relation": self.relation,
            "samples_tested": self.samples_tested,
            "failures": [f for f in self.failures if f != "..."],
            "failure_count": len(self.failures),
            **({"info": self.info} if self.info else {}),
        }


@dataclass
class Report:
    """A named bundle of relation reports."""

    name: str
    relations: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def new(self, relation, **info):
        r = RelationReport(relation, info=info)
        self.relations.append(r)
        return r

    @property
    def ok(self):
        return all(r.ok for r in self.relations)

    def to_json(self):
        return {
            "name": self.name,
            "ok": self.ok,
            "info": self.info,
            "relations": [r.to_json() for r in self.relations],
        }

    def summary_lines(self):
        lines = []
        for r in self.relations:
            status = "PASS" if r.ok else "FAIL"
            lines.append(
                f"[{status}] {self.name}/{r.relation} ({r.samples_tested} samples)"
            )
        return lines

    def failing(self):
        return [r.relation for r in self.relations if not r.ok]
