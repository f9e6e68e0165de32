"""Pass/fail records with reproducible witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Verdict:
    property: str
    passed: bool
    witness: Any = None
    detail: str = ""
    kind: str = "identity"  # "identity", "hypothesis" or "skipped"
    children: tuple["Verdict", ...] = field(default=())

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def ok(cls, prop: str, detail: str = "") -> "Verdict":
        return cls(prop, True, None, detail)

    @classmethod
    def fail(cls, prop: str, witness: Any, detail: str = "", kind: str = "identity") -> "Verdict":
        return cls(prop, False, witness, detail, kind)

    @classmethod
    def bundle(cls, prop: str, parts) -> "Verdict":
        parts = tuple(parts)
        bad = next((p for p in parts if not p.passed), None)
        if bad is None:
            return cls(prop, True, None, f"{len(parts)} checks", children=parts)
        return cls(prop, False, bad.witness, f"{bad.property}: {bad.detail}", bad.kind, parts)

    def to_json(self) -> dict:
        out = {"property": self.property, "pass": self.passed, "witness": _jsonable(self.witness)}
        if self.detail:
            out["detail"] = self.detail
        if self.kind != "identity":
            out["kind"] = self.kind
        return out

    def flatten(self) -> list["Verdict"]:
        if not self.children:
            return [self]
        out = []
        for c in self.children:
            out.extend(c.flatten())
        return out


def _jsonable(w):
    if w is None or isinstance(w, (bool, int, float, str)):
        return w
    if isinstance(w, dict):
        return {str(k): _jsonable(v) for k, v in w.items()}
    if isinstance(w, (list, tuple, set, frozenset)):
        items = sorted(w) if isinstance(w, (set, frozenset)) else w
        return [_jsonable(x) for x in items]
    return str(w)
