"""Global numerical tolerances.

One record is active at a time. ``QLOGIC_TOLERANCE`` may hold either a bare
number (applied to every absolute tolerance) or a JSON object with field names.
"""
from __future__ import annotations

import contextlib
import dataclasses
import json
import os
from dataclasses import dataclass
from typing import Optional

from .errors import QLogicError


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-9      # ||M - M^dagger||_inf
    proj: float = 1e-9      # ||M^2 - M||_inf
    eig_rel: float = 1e-8   # eigenvalue clustering, scaled by (1 + ||a||)
    ord: float = 1e-8       # range inclusion ||qp - p||_inf
    recon: float = 1e-8     # reconstruction of a from its spectral data
    state: float = 1e-9     # threshold comparisons psi(p) >= x - tol

    def eig(self, norm: float) -> float:
        return self.eig_rel * (1.0 + norm)


def _from_env() -> Tolerances:
    raw = os.environ.get("QLOGIC_TOLERANCE")
    if not raw:
        return Tolerances()
    raw = raw.strip()
    try:
        value = float(raw)
    except ValueError:
        try:
            fields = json.loads(raw)
        except json.JSONDecodeError:
            raise QLogicError(f"QLOGIC_TOLERANCE is neither a number nor a JSON object: {raw!r}") from None
        if not isinstance(fields, dict):
            raise QLogicError("QLOGIC_TOLERANCE JSON must be an object")
        known = {f.name for f in dataclasses.fields(Tolerances)}
        unknown = set(fields) - known
        if unknown:
            raise QLogicError(f"unknown tolerance fields in QLOGIC_TOLERANCE: {sorted(unknown)}")
        tol = Tolerances(**{k: float(v) for k, v in fields.items()})
    else:
        tol = Tolerances(value, value, value, value, value, value)
    if any(not getattr(tol, f.name) > 0 for f in dataclasses.fields(tol)):
        raise QLogicError("tolerances must be positive")
    return tol


_active: Optional[Tolerances] = None


def get() -> Tolerances:
    global _active
    if _active is None:
        _active = _from_env()
    return _active


def set_tolerances(tol: Tolerances) -> None:
    global _active
    _active = tol


@contextlib.contextmanager
def using(**overrides):
    """Temporarily replace some tolerance fields."""
    global _active
    saved = get()
    _active = dataclasses.replace(saved, **overrides)
    try:
        yield _active
    finally:
        _active = saved
