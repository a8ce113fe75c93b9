"""Verification report rows and their TSV / JSON renderings."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

PASS, FAIL, SKIP = "pass", "fail", "skip"
COLUMNS = ("group_id", "claim_id", "expected", "computed", "status", "witness")


@dataclass(frozen=True)
class Row:
    group_id: str
    claim_id: str
    expected: str
    computed: str
    status: str
    witness: str = ""


@dataclass
class VerificationReport:
    rows: list[Row] = field(default_factory=list)

    def add(self, group_id, claim_id, expected, computed, ok: bool | None, witness="") -> Row:
        """Append a row; ``ok=None`` records a skip.  Failing rows always carry a witness."""
        status = SKIP if ok is None else (PASS if ok else FAIL)
        if status == FAIL and not witness:
            witness = f"expected {expected}, computed {computed}"
        row = Row(str(group_id), str(claim_id), str(expected), str(computed), status, str(witness))
        self.rows.append(row)
        return row

    def check(self, group_id, claim_id, expected, computed, witness="") -> Row:
        """Row whose status is ``expected == computed``."""
        return self.add(group_id, claim_id, expected, computed, expected == computed, witness)

    def skip(self, group_id, claim_id, reason: str) -> Row:
        return self.add(group_id, claim_id, "-", "-", None, reason)

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        self.rows.extend(other.rows)
        return self

    def __iter__(self):
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIP: 0}
        for r in self.rows:
            out[r.status] += 1
        return out

    @property
    def ok(self) -> bool:
        return not any(r.status == FAIL for r in self.rows)

    def failures(self) -> list[Row]:
        return [r for r in self.rows if r.status == FAIL]

    def claims(self) -> set[str]:
        return {r.claim_id for r in self.rows}

    def summary(self) -> str:
        c = self.counts()
        return f"pass={c[PASS]} fail={c[FAIL]} skip={c[SKIP]}"

    def to_tsv(self) -> str:
        def clean(s: str) -> str:
            return s.replace("\t", " ").replace("\n", " ")

        lines = ["\t".join(COLUMNS)]
        lines += ["\t".join(clean(getattr(r, c)) for c in COLUMNS) for r in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"summary": self.counts(), "rows": [asdict(r) for r in self.rows]}, indent=1) + "\n"
