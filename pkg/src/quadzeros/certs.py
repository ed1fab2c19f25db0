"""Claims recorded in certificates."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any

from .bounds import DEFAULT_SLACK, bound_evaluator, check_bound, iv_text
from .constants import ConstantsTable
from .errors import BoundFailure
from .heights import Height, log_height_text

MAIN = "main"
DIAGNOSTIC = "diagnostic"


def params_to_json(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        out[k] = v.to_json() if isinstance(v, Height) else v
    return out


def params_from_json(obj: dict) -> dict:
    out = {}
    for k, v in obj.items():
        out[k] = Height.from_json(v) if isinstance(v, dict) else v
    return out


@dataclass
class Claim:
    name: str
    kind: str  # "bound" or "check"
    passed: bool
    status: str = MAIN
    data: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"name": self.name, "kind": self.kind, "pass": self.passed, "status": self.status}
        out.update(self.data)
        return out


def bound_claim(name: str, bound: str, params: dict, lhs: Height, table: ConstantsTable,
                *, slack: float = DEFAULT_SLACK, status: str = MAIN) -> Claim:
    """Evaluate ``lhs <= bound(params)`` and record everything needed to recheck it."""
    iv = bound_evaluator(bound, params, table)
    ok = check_bound(lhs, iv, slack)
    return Claim(name, "bound", ok, status, {
        "bound": bound,
        "params": params_to_json(params),
        "lhs": lhs.to_json(),
        "lhs_log": log_height_text(lhs),
        "bound_log": iv_text(iv),
        "slack": repr(float(slack)),
    })


def check_claim(name: str, ok: bool, status: str = MAIN, **data: Any) -> Claim:
    return Claim(name, "check", bool(ok), status, dict(data))


def require(claims: list[Claim], trail=None) -> None:
    """Raise BoundFailure if a main bound claim failed (a library defect)."""
    bad = [c for c in claims if c.kind == "bound" and c.status == MAIN and not c.passed]
    if bad:
        names = ", ".join(c.name for c in bad)
        raise BoundFailure(f"certified bound violated: {names}", trail=trail)


@dataclass
class Certificate:
    """Outputs of one operation together with every claim made about them."""

    operation: str
    outputs: dict
    claims: list[Claim]
    witnesses: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims if c.status == MAIN)

    def failed(self) -> list[Claim]:
        return [c for c in self.claims if not c.passed]

    def to_json(self) -> dict:
        return {
            "operation": self.operation,
            "outputs": self.outputs,
            "claims": [c.to_json() for c in self.claims],
            "witnesses": self.witnesses,
            "pass": self.passed,
        }


def vec_json(v, field) -> list[str]:
    return [field.format(field(a)) for a in v]


def mat_json(rows, field) -> list[list[str]]:
    return [vec_json(r, field) for r in rows]
