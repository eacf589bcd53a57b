"""JSON model files and numeric CSV interchange.

Model file layout::

    {
      "copula": {"family": "clayton", "dim": 3, "theta": 0.7},
      "marginals": [
        {"family": "gamma", "shape": 2, "scale": 3},
        {"family": "pareto", "shape": 0.5},
        {"family": "binomial", "trials": 10, "p": 0.8}
      ]
    }

``marginals`` may be omitted for a pure copula model.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .archimedean import FAMILIES, make_copula
from .core import Copula
from .errors import DomainError
from .marginals import MARGINALS, make_marginal
from .sklar import SklarDistribution

COPULA_FAMILIES = ("independence", "comonotone", "countermonotone", *FAMILIES)

_MARGINAL_FIELDS = {
    "normal": ("mu", "sigma"),
    "gamma": ("shape", "scale"),
    "pareto": ("shape",),
    "binomial": ("trials", "p"),
    "exponential": ("scale",),
    "uniform": ("a", "b"),
}


class ModelSpecError(DomainError):
    """A model file does not follow the schema; the message names the field."""


def _number(obj, key, where, *, integer=False):
    if key not in obj:
        raise ModelSpecError(f"{where}.{key}: required field is missing")
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ModelSpecError(f"{where}.{key}: expected a number, got {val!r}")
    if integer and (not float(val).is_integer()):
        raise ModelSpecError(f"{where}.{key}: expected an integer, got {val!r}")
    if not math.isfinite(val):
        raise ModelSpecError(f"{where}.{key}: expected a finite number, got {val!r}")
    return int(val) if integer else float(val)


def model_from_dict(doc) -> Copula | SklarDistribution:
    if not isinstance(doc, dict):
        raise ModelSpecError("model: expected a JSON object")
    unknown = set(doc) - {"copula", "marginals"}
    if unknown:
        raise ModelSpecError(f"model: unknown field(s) {sorted(unknown)}")
    cop = doc.get("copula")
    if not isinstance(cop, dict):
        raise ModelSpecError("copula: required object is missing")
    family = cop.get("family")
    if family not in COPULA_FAMILIES:
        raise ModelSpecError(f"copula.family: expected one of {list(COPULA_FAMILIES)}, got {family!r}")
    dim = _number(cop, "dim", "copula", integer=True)
    theta = _number(cop, "theta", "copula") if family in FAMILIES else None
    try:
        copula = make_copula(family, dim, theta)
    except DomainError as exc:
        field = "theta" if theta is not None and dim >= 2 else "dim"
        raise ModelSpecError(f"copula.{field}: {exc}") from None
    if "marginals" not in doc or doc["marginals"] is None:
        return copula
    margs = doc["marginals"]
    if not isinstance(margs, list):
        raise ModelSpecError("marginals: expected a list")
    if len(margs) != dim:
        raise ModelSpecError(f"marginals: expected {dim} entries to match copula.dim, got {len(margs)}")
    built = []
    for i, m in enumerate(margs):
        where = f"marginals[{i}]"
        if not isinstance(m, dict):
            raise ModelSpecError(f"{where}: expected an object")
        fam = m.get("family")
        if fam not in MARGINALS:
            raise ModelSpecError(f"{where}.family: expected one of {sorted(MARGINALS)}, got {fam!r}")
        fields = _MARGINAL_FIELDS[fam]
        extra = set(m) - {"family", *fields}
        if extra:
            raise ModelSpecError(f"{where}: unknown field(s) {sorted(extra)}")
        params = {k: _number(m, k, where, integer=(k == "trials")) for k in fields}
        try:
            built.append(make_marginal(fam, **params))
        except DomainError as exc:
            raise ModelSpecError(f"{where}: {exc}") from None
    return SklarDistribution(copula, built)


def copula_to_dict(c: Copula) -> dict:
    family = getattr(c, "family", None) or type(c).__name__.replace("Copula", "").lower()
    if family not in COPULA_FAMILIES:
        raise DomainError(f"{c!r} has no model-file representation")
    out = {"family": family, "dim": c.dim}
    if family in FAMILIES:
        out["theta"] = c.theta
    return out


def model_to_dict(model) -> dict:
    if isinstance(model, SklarDistribution):
        return {
            "copula": copula_to_dict(model.copula),
            "marginals": [m.to_dict() for m in model.marginals],
        }
    return {"copula": copula_to_dict(model)}


def load_model(path) -> Copula | SklarDistribution:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelSpecError(f"model: invalid JSON ({exc})") from None
    return model_from_dict(doc)


def save_json(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Parse a headed, comma-separated numeric file."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DomainError(f"{path}: empty file (a header row is required)")
    header = [h.strip() for h in rows[0]]
    width = len(header)
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != width:
            raise DomainError(f"{path}: line {lineno} has {len(row)} fields, expected {width}")
        try:
            values.append([float(c) for c in row])
        except ValueError:
            raise DomainError(f"{path}: line {lineno} contains a non-numeric field") from None
    if not values:
        raise DomainError(f"{path}: no data rows")
    arr = np.array(values, dtype=float)
    if np.isnan(arr).any():
        raise DomainError(f"{path}: NaN values are not allowed")
    return header, arr


def _fmt(v: float, integer: bool) -> str:
    if integer and math.isfinite(v):
        return str(int(v))
    return repr(float(v))


def format_csv(header, values, integer_columns=()) -> str:
    values = np.atleast_2d(np.asarray(values, dtype=float))
    lines = [",".join(header)]
    ints = set(integer_columns)
    for row in values:
        lines.append(",".join(_fmt(v, j in ints) for j, v in enumerate(row)))
    return "\n".join(lines) + "\n"


def write_csv(path, header, values, integer_columns=()) -> None:
    Path(path).write_text(format_csv(header, values, integer_columns), encoding="utf-8")


__all__ = [
    "COPULA_FAMILIES",
    "ModelSpecError",
    "model_from_dict",
    "model_to_dict",
    "copula_to_dict",
    "load_model",
    "save_json",
    "read_csv",
    "format_csv",
    "write_csv",
]
