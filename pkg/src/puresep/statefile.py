"""JSON state files.

A state file is a JSON object::

    {"dims": [2, 2],
     "amplitudes": [[0.7071067811865475, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071067811865475, 0.0]],
     "label": "bell"}

``amplitudes`` holds ``[re, im]`` pairs in row-major order, last partite
fastest. ``label`` is optional.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .state import NORM_TOL, PureState, normalize

log = logging.getLogger(__name__)


class StateFileError(ValueError):
    """The document is not a valid state file. ``field`` names the offending key."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"field '{field}': {message}" if field else message)


@dataclass(frozen=True)
class StateFile:
    state: PureState
    label: str | None = None
    renormalized: bool = False


def _parse_dims(raw):
    if not isinstance(raw, list) or not raw:
        raise StateFileError("dims", "expected a nonempty list of integers")
    dims = []
    for r in raw:
        if isinstance(r, bool) or not isinstance(r, int):
            raise StateFileError("dims", f"entry {r!r} is not an integer")
        if r < 2:
            raise StateFileError("dims", f"local dimension {r} is < 2")
        dims.append(r)
    return tuple(dims)


def _parse_amplitudes(raw, total):
    if not isinstance(raw, list):
        raise StateFileError("amplitudes", "expected a list of [re, im] pairs")
    if len(raw) != total:
        raise StateFileError("amplitudes", f"expected {total} entries for the given dims, got {len(raw)}")
    amps = np.empty(total, dtype=np.complex128)
    for k, pair in enumerate(raw):
        if (not isinstance(pair, list) or len(pair) != 2
                or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in pair)):
            raise StateFileError("amplitudes", f"entry {k} is not a [re, im] pair of numbers")
        if not all(math.isfinite(x) for x in pair):
            raise StateFileError("amplitudes", f"entry {k} is not finite")
        amps[k] = complex(pair[0], pair[1])
    return amps


def parse_state(doc) -> StateFile:
    """Validate a decoded JSON document and build its state.

    Amplitudes whose squared norm is off by more than 1e-12 are normalized
    and a warning is logged; otherwise they are kept bit-for-bit.
    """
    if not isinstance(doc, dict):
        raise StateFileError(None, "state file must be a JSON object")
    for key in ("dims", "amplitudes"):
        if key not in doc:
            raise StateFileError(key, "missing")
    dims = _parse_dims(doc["dims"])
    amps = _parse_amplitudes(doc["amplitudes"], math.prod(dims))
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise StateFileError("label", "expected a string")
    state = PureState(dims, amps)
    if state.norm_squared == 0.0:
        raise StateFileError("amplitudes", "all amplitudes are zero")
    renormalized = not state.is_normalized(NORM_TOL)
    if renormalized:
        log.warning("state%s has squared norm %.17g; normalizing",
                    f" '{label}'" if label else "", state.norm_squared)
        state = normalize(state)
    return StateFile(state, label, renormalized)


def loads(text: str) -> StateFile:
    if not text.strip():
        raise StateFileError(None, "state file is empty")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(None, f"not valid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_state(doc)


def load(path) -> StateFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StateFileError(None, f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def state_document(state: PureState, label: str | None = None) -> dict:
    doc = {
        "dims": list(state.dims),
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amps],
    }
    if label is not None:
        doc["label"] = label
    return doc


def dumps(state: PureState, label: str | None = None) -> str:
    """Serialize with one amplitude pair per line; floats use repr so they round-trip."""
    doc = state_document(state, label)
    pairs = ",\n".join(f"    {json.dumps(p)}" for p in doc["amplitudes"])
    lines = ["{", f'  "dims": {json.dumps(doc["dims"])},', f'  "amplitudes": [\n{pairs}\n  ]']
    if label is not None:
        lines[-1] += ","
        lines.append(f'  "label": {json.dumps(label)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dump(state: PureState, path, label: str | None = None) -> None:
    Path(path).write_text(dumps(state, label))
