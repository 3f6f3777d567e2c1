from __future__ import annotations

from dataclasses import dataclass, field

PASS = "PASS"
FAIL = "FAIL"
SKIPPED = "SKIPPED"


@dataclass(frozen=True)
class Verdict:
    """Outcome of one brute-force check.

    ``counterexample`` is set only on FAIL and describes the first violating
    object; ``checked`` counts the individual identities that were tested.
    """

    name: str
    status: str
    checked: int = 0
    detail: str = ""
    counterexample: str | None = field(default=None)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": self.status, "checked": self.checked}
        if self.detail:
            out["detail"] = self.detail
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out
