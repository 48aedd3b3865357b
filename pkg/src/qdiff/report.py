"""Check reports: a named list of individual checks with pass/fail status."""

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    label: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    title: str
    results: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, label, passed, detail=""):
        self.results.append(CheckResult(label, bool(passed), detail))
        return passed

    def extend(self, other):
        for r in other.results:
            self.results.append(CheckResult(f"{other.title}: {r.label}", r.passed, r.detail))
        self.notes.extend(other.notes)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    @property
    def failures(self):
        return [r for r in self.results if not r.passed]

    def __bool__(self):
        return self.passed

    def lines(self):
        out = [f"== {self.title}"]
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            out.append(f"{status} {r.label}" + (f": {r.detail}" if r.detail else ""))
        out.extend(f"note: {n}" for n in self.notes)
        n_fail = len(self.failures)
        out.append(f"{len(self.results) - n_fail}/{len(self.results)} checks passed")
        return out

    def __str__(self):
        return "\n".join(self.lines())
