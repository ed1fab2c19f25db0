"""Problem files: load, validate, serialize canonically."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any

from .errors import SchemaError
from .fields import Field, field_from_descriptor
from .heights import Subspace
from .linalg import rank
from .polyalg import MultiPoly
from .quadspace import QuadForm
from .smallzeros import AvoidanceSystem

_KEYS = {"field", "N", "F", "V", "S", "options"}
_OPTION_KEYS = {"cap", "slack", "budget"}


@dataclass
class Problem:
    field: Field
    N: int
    F: QuadForm | None
    V: Subspace
    S: AvoidanceSystem
    options: dict = dc_field(default_factory=dict)
    V_given: bool = False

    def to_json(self) -> dict:
        K = self.field
        out: dict[str, Any] = {"field": K.descriptor(), "N": self.N}
        if self.F is not None:
            out["F"] = [[K.format(a) for a in row] for row in self.F.matrix]
        if self.V_given:
            out["V"] = [[K.format(a) for a in v] for v in self.V.basis]
        out["S"] = self.S.to_json()
        if self.options:
            out["options"] = dict(self.options)
        return out


def _scalar(K: Field, value, where: str):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise SchemaError(f"{where}: expected a scalar string, got {value!r}")
    try:
        return K.parse(value) if isinstance(value, str) else K(value)
    except SchemaError as exc:
        raise SchemaError(f"{where}: {exc}") from exc
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: cannot parse {value!r}") from exc


def _matrix(K: Field, rows, N: int, where: str, square: bool) -> list[list]:
    if not isinstance(rows, list):
        raise SchemaError(f"{where}: expected a list of rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != N:
            raise SchemaError(f"{where}[{i}]: expected a row of length {N}")
        out.append([_scalar(K, a, f"{where}[{i}][{j}]") for j, a in enumerate(row)])
    if square and len(out) != N:
        raise SchemaError(f"{where}: expected {N} rows")
    return out


def _poly(K: Field, obj, N: int, where: str) -> MultiPoly:
    try:
        return MultiPoly.from_json(obj, N, K)
    except SchemaError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def problem_from_json(obj: Any) -> Problem:
    if not isinstance(obj, dict):
        raise SchemaError("problem: expected a JSON object")
    unknown = set(obj) - _KEYS
    if unknown:
        raise SchemaError(f"problem: unknown keys {sorted(unknown)}")
    K = field_from_descriptor(obj.get("field", {"kind": "Q"}))
    N = obj.get("N")
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise SchemaError("N: expected a positive integer")
    F = None
    if "F" in obj:
        M = _matrix(K, obj["F"], N, "F", square=True)
        for i in range(N):
            for j in range(i + 1, N):
                if M[i][j] != M[j][i]:
                    raise SchemaError(f"F: matrix is not symmetric at ({i + 1},{j + 1})")
        if not any(a for r in M for a in r):
            raise SchemaError("F: the quadratic form is identically zero")
        F = QuadForm(M, K)
    V_given = "V" in obj
    if V_given:
        rows = _matrix(K, obj["V"], N, "V", square=False)
        if not rows:
            raise SchemaError("V: the basis is empty")
        if rank(rows, K) != len(rows):
            raise SchemaError("V: the basis vectors are linearly dependent")
        V = Subspace(rows, K, N, check=False)
    else:
        V = Subspace.full(K, N)
    S_raw = obj.get("S", [])
    if not isinstance(S_raw, list):
        raise SchemaError("S: expected a list of polynomial lists")
    fams = []
    for i, fam in enumerate(S_raw):
        if not isinstance(fam, list) or not fam:
            raise SchemaError(f"S[{i}]: expected a nonempty list of polynomials")
        polys = [_poly(K, p, N, f"S[{i}][{k}]") for k, p in enumerate(fam)]
        for k, p in enumerate(polys):
            if not p:
                raise SchemaError(f"S[{i}][{k}]: zero polynomial")
            if not p.is_homogeneous:
                raise SchemaError(f"S[{i}][{k}]: polynomial is not homogeneous")
        fams.append(polys)
    S = AvoidanceSystem(fams, N, K)
    options = obj.get("options", {})
    if not isinstance(options, dict) or set(options) - _OPTION_KEYS:
        raise SchemaError(f"options: allowed keys are {sorted(_OPTION_KEYS)}")
    if "budget" in options and (not isinstance(options["budget"], int) or options["budget"] < 1):
        raise SchemaError("options.budget: expected a positive integer")
    if "cap" in options and (isinstance(options["cap"], bool)
                             or not isinstance(options["cap"], (int, float)) or options["cap"] < 0):
        raise SchemaError("options.cap: expected a nonnegative log-height")
    if "slack" in options and not isinstance(options["slack"], (int, float)):
        raise SchemaError("options.slack: expected a number")
    return Problem(K, N, F, V, S, dict(options), V_given)


def canonical(obj: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def load_problem(path: str | Path) -> Problem:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return problem_from_json(obj)


def problem_json(P: Problem) -> dict:
    """Canonical form; parse(problem_json(p)) reproduces p."""
    out = P.to_json()
    return json.loads(canonical(out))
