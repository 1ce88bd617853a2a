"""JSON encoding of states, observables and problem files.

Complex numbers are ``[re, im]`` pairs; plain real numbers are accepted on
input. A problem file looks like::

    {"dim": 3,
     "state": [[0.577, 0], ...],
     "observables": {"A": [[[0, 0], [0.707, 0], ...], ...], "B": ...},
     "aux": {"N1": [...], "N2": [...]},
     "lambda": 1.0,
     "allow_nonorthogonal_aux": false,
     "relations": ["EQ2", {"id": "EQ15", "aux": ["N1", "N2"]}]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .hilbert import Observable, QuantumState


class ProblemFileError(ValueError):
    pass


def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(v: Any, where: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(
        isinstance(t, (int, float)) and not isinstance(t, bool) for t in v
    ):
        return complex(v[0], v[1])
    raise ProblemFileError(f"{where}: expected a number or [re, im], got {v!r}")


def state_to_json(psi: QuantumState) -> list:
    return [encode_complex(z) for z in psi.amplitudes]


def state_from_json(data: Any, where: str = "state", label: str = "") -> QuantumState:
    if not isinstance(data, list):
        raise ProblemFileError(f"{where}: expected a list of amplitudes")
    amps = np.array([decode_complex(v, f"{where}[{i}]") for i, v in enumerate(data)])
    try:
        return QuantumState(amps, label=label)
    except ValueError as exc:
        raise ProblemFileError(f"{where}: {exc}") from None


def observable_to_json(obs: Observable) -> list:
    return [[encode_complex(z) for z in row] for row in obs.matrix]


def observable_from_json(data: Any, where: str = "observable", label: str = "") -> Observable:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ProblemFileError(f"{where}: expected a list of rows")
    mat = np.array([[decode_complex(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)]
                    for i, row in enumerate(data)])
    try:
        return Observable(mat, label=label)
    except ValueError as exc:
        raise ProblemFileError(f"{where}: {exc}") from None


@dataclass
class Problem:
    state: QuantumState
    observables: dict[str, Observable]
    aux: dict[str, QuantumState] = field(default_factory=dict)
    lam: Optional[float] = None
    relations: list = field(default_factory=list)
    allow_nonorthogonal_aux: bool = False

    @property
    def dim(self) -> int:
        return self.state.dim

    def to_json(self) -> dict:
        out = {
            "dim": self.dim,
            "state": state_to_json(self.state),
            "observables": {k: observable_to_json(v) for k, v in self.observables.items()},
            "aux": {k: state_to_json(v) for k, v in self.aux.items()},
            "relations": list(self.relations),
        }
        if self.lam is not None:
            out["lambda"] = self.lam
        if self.allow_nonorthogonal_aux:
            out["allow_nonorthogonal_aux"] = True
        return out


def parse_problem(doc: Any) -> Problem:
    if not isinstance(doc, dict):
        raise ProblemFileError("top level must be a JSON object")
    for key in ("dim", "state", "observables"):
        if key not in doc:
            raise ProblemFileError(f"missing required key {key!r}")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 2:
        raise ProblemFileError(f"dim must be an integer >= 2, got {dim!r}")
    state = state_from_json(doc["state"], "state", "psi")
    if state.dim != dim:
        raise ProblemFileError(f"state has {state.dim} amplitudes but dim is {dim}")
    if not isinstance(doc["observables"], dict) or not doc["observables"]:
        raise ProblemFileError("observables must be a non-empty object")
    observables = {}
    for name, mat in doc["observables"].items():
        obs = observable_from_json(mat, f"observables.{name}", name)
        if obs.dim != dim:
            raise ProblemFileError(f"observables.{name}: shape {obs.matrix.shape} does not match dim {dim}")
        observables[name] = obs
    aux = {}
    for name, vec in (doc.get("aux") or {}).items():
        st = state_from_json(vec, f"aux.{name}", name)
        if st.dim != dim:
            raise ProblemFileError(f"aux.{name}: dimension {st.dim} does not match dim {dim}")
        aux[name] = st
    lam = doc.get("lambda")
    if lam is not None and (not isinstance(lam, (int, float)) or isinstance(lam, bool)):
        raise ProblemFileError(f"lambda must be a number, got {lam!r}")
    relations = doc.get("relations", [])
    if not isinstance(relations, list):
        raise ProblemFileError("relations must be a list")
    allow = doc.get("allow_nonorthogonal_aux", False)
    if not isinstance(allow, bool):
        raise ProblemFileError("allow_nonorthogonal_aux must be true or false")
    return Problem(state, observables, aux, None if lam is None else float(lam), relations, allow)


def load_problem(path: str | Path) -> Problem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_problem(doc)
