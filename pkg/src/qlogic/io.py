"""JSON formats for matrices, states, Borel sets, posets and subobjects."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from .contexts import ContextPoset, context_from_commuting
from .errors import QLogicError
from .linalg import BorelSet, as_matrix
from .logic import Subobject, Variant
from .states import State

PathLike = Union[str, Path]


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"dim": int(m.shape[0]),
            "rows": [[[float(z.real), float(z.imag)] for z in row] for row in m]}


def _entry(z) -> complex:
    if isinstance(z, (list, tuple)):
        if len(z) != 2:
            raise QLogicError(f"complex entry must be [re, im], got {z!r}")
        return complex(float(z[0]), float(z[1]))
    return complex(z)


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "rows" not in obj:
        raise QLogicError("matrix JSON needs a 'rows' field")
    m = as_matrix([[_entry(z) for z in row] for row in obj["rows"]])
    if "dim" in obj and int(obj["dim"]) != m.shape[0]:
        raise QLogicError(f"declared dim {obj['dim']} does not match {m.shape[0]} rows")
    return m


def read_json(path: PathLike):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise QLogicError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise QLogicError(f"{path}: {exc.strerror}") from None


def load_matrix(path: PathLike) -> np.ndarray:
    return matrix_from_json(read_json(path))


def state_from_json(obj) -> State:
    if isinstance(obj, dict) and "pure" in obj:
        return State.from_pure([_entry(z) for z in obj["pure"]])
    return State(matrix_from_json(obj))


def load_state(path: PathLike) -> State:
    return state_from_json(read_json(path))


def load_borel(text_or_path: str) -> BorelSet:
    """Interval literal such as "(0.5,1.5)", or a path to BorelSet JSON."""
    p = Path(text_or_path)
    if text_or_path.endswith(".json") and p.exists():
        return BorelSet.from_json(read_json(p))
    return BorelSet.parse(text_or_path)


# ---------------------------------------------------------------------------
# Posets


def poset_to_json(generators: Dict[str, List[np.ndarray]], down_close: bool, include_bottom: bool) -> dict:
    return {
        "generators": {name: [matrix_to_json(m) for m in ops] for name, ops in generators.items()},
        "down_close": down_close,
        "include_bottom": include_bottom,
    }


def poset_from_json(obj, cap: Optional[int] = None) -> ContextPoset:
    gens = obj.get("generators")
    if not isinstance(gens, dict) or not gens:
        raise QLogicError("poset JSON needs a non-empty 'generators' object")
    contexts = []
    for name in gens:
        ops = gens[name]
        if isinstance(ops, dict):
            ops = [ops]
        contexts.append(context_from_commuting([matrix_from_json(m) for m in ops], label=name))
    kwargs = {} if cap is None else {"cap": cap}
    return ContextPoset.build(contexts, down_close=bool(obj.get("down_close", True)),
                              include_bottom=bool(obj.get("include_bottom", True)), **kwargs)


def subobject_to_json(s: Subobject, poset_spec: Optional[dict] = None) -> dict:
    out = {"variant": s.variant.value, "family": s.to_labels()}
    if poset_spec is not None:
        out["poset"] = poset_spec
    return out


def subobject_from_json(obj, poset: Optional[ContextPoset] = None) -> Subobject:
    if poset is None:
        if "poset" not in obj:
            raise QLogicError("subobject JSON carries no poset and none was given")
        poset = poset_from_json(obj["poset"])
    try:
        return Subobject.from_labels(Variant.parse(obj["variant"]), poset, obj["family"])
    except KeyError as exc:
        raise QLogicError(f"subobject JSON: unknown key or label {exc}") from None
