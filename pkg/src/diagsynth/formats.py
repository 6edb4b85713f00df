"""JSON file formats for phases, control sequences and circuits."""
from __future__ import annotations

import json
from pathlib import Path

from .core import (
    Circuit,
    ControlFlip,
    DiagSynthError,
    GlobalPhase,
    PhaseVector,
    Rotation,
    pad_phases,
)
from .sequences import ControlSequence, GeneralControlSequence, as_general, from_entries


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _write_json(path, data) -> None:
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


def phases_from_json(data) -> PhaseVector:
    if not isinstance(data, dict) or "phases" not in data:
        raise DiagSynthError('phase file must be an object with a "phases" list')
    return pad_phases(data["phases"])


def load_phases(path) -> PhaseVector:
    return phases_from_json(_read_json(path))


def sequence_to_json(seq) -> dict:
    if isinstance(seq, ControlSequence):
        return {"n": seq.n, "entries": list(seq.entries)}
    return {"n": seq.n, "entries": as_general(seq).as_lists()}


def sequence_from_json(data) -> GeneralControlSequence:
    """Accepts both the integer form and the list-of-sets form."""
    if not isinstance(data, dict) or "n" not in data or "entries" not in data:
        raise DiagSynthError('sequence must be an object with "n" and "entries"')
    return from_entries(int(data["n"]), data["entries"])


def load_sequences(path) -> list[GeneralControlSequence]:
    """A file holds one sequence object or a list of them (one per level)."""
    data = _read_json(path)
    if isinstance(data, list):
        return [sequence_from_json(d) for d in data]
    if isinstance(data, dict) and "levels" in data:
        return [sequence_from_json(d) for d in data["levels"]]
    return [sequence_from_json(data)]


def gate_to_json(g) -> dict:
    if isinstance(g, Rotation):
        return {"kind": "rot", "target": g.target, "angle": g.angle}
    if isinstance(g, ControlFlip):
        return {"kind": "cflip", "control": g.control, "target": g.target, "flip_phase": g.flip_phase}
    return {"kind": "gphase", "angle": g.angle}


def gate_from_json(d):
    kind = d.get("kind")
    if kind == "rot":
        return Rotation(int(d["target"]), float(d["angle"]))
    if kind == "cflip":
        return ControlFlip(int(d["control"]), int(d["target"]), float(d.get("flip_phase", 0.0)))
    if kind == "gphase":
        return GlobalPhase(float(d["angle"]))
    raise DiagSynthError(f"unknown gate kind {kind!r}")


def circuit_to_json(c: Circuit) -> dict:
    return {"n": c.n, "gates": [gate_to_json(g) for g in c.gates], "order": "application"}


def circuit_from_json(data) -> Circuit:
    if not isinstance(data, dict) or "n" not in data or "gates" not in data:
        raise DiagSynthError('circuit file must be an object with "n" and "gates"')
    if data.get("order", "application") != "application":
        raise DiagSynthError(f"unsupported gate order {data['order']!r}")
    return Circuit(int(data["n"]), tuple(gate_from_json(g) for g in data["gates"]))


def load_circuit(path) -> Circuit:
    return circuit_from_json(_read_json(path))


def save_circuit(path, c: Circuit) -> None:
    _write_json(path, circuit_to_json(c))
